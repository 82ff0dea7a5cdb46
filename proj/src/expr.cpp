#include "avmod/expr.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "avmod/errors.hpp"

namespace avmod {

namespace {

struct Token {
    enum Kind { Ident, Number, LParen, RParen, LBracket, RBracket, Comma, Caret, End };
    Kind kind;
    std::string text;
    Rational value;
    size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : src_(s) { advance(); }

    const Token& peek() const { return cur_; }

    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

    Token expect(Token::Kind k, const std::string& what) {
        if (cur_.kind != k) throw ParseError("expected " + what, cur_.pos);
        return take();
    }

private:
    void advance() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
        cur_.pos = i_;
        cur_.text.clear();
        if (i_ >= src_.size()) {
            cur_.kind = Token::End;
            return;
        }
        char c = src_[i_];
        auto single = [&](Token::Kind k) {
            cur_.kind = k;
            cur_.text = std::string(1, c);
            ++i_;
        };
        switch (c) {
            case '(': single(Token::LParen); return;
            case ')': single(Token::RParen); return;
            case '[': single(Token::LBracket); return;
            case ']': single(Token::RBracket); return;
            case ',': single(Token::Comma); return;
            case '^': single(Token::Caret); return;
            default: break;
        }
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = i_;
            if (c == '-') ++i_;
            if (i_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[i_])))
                throw ParseError("stray '-'", start);
            while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
            std::string num = src_.substr(start, i_ - start);
            std::string den = "1";
            if (i_ < src_.size() && src_[i_] == '/') {
                ++i_;
                size_t ds = i_;
                while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
                if (i_ == ds) throw ParseError("expected denominator digits", ds);
                den = src_.substr(ds, i_ - ds);
            }
            cur_.kind = Token::Number;
            cur_.text = src_.substr(start, i_ - start);
            cur_.value = Rational::parse(num + "/" + den);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = i_;
            while (i_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_'))
                ++i_;
            cur_.kind = Token::Ident;
            cur_.text = src_.substr(start, i_ - start);
            return;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", i_);
    }

    const std::string& src_;
    size_t i_ = 0;
    Token cur_;
};

long as_int(const Token& t, const std::string& what) {
    if (!t.value.is_integer()) throw ParseError(what + " must be an integer", t.pos);
    return t.value.to_long();
}

// ---------------------------------------------------------------------------
// Representation expressions.  Parsed into a scratch tree first so that a
// det factor written without a rank, like tensor(det(1), natural(2)), can
// pick the rank up from its siblings before the real constructors (which
// insist on matching ranks) run.

struct RNode {
    std::string head;
    size_t pos = 0;
    int n = 0;  // 0 while unknown
    int k = 0;
    Rational lambda;
    std::vector<Rational> weight;
    std::vector<RNode> kids;
};

RNode parse_rnode(Lexer& lx) {
    Token head = lx.expect(Token::Ident, "a representation constructor");
    RNode node;
    node.head = head.text;
    node.pos = head.pos;
    lx.expect(Token::LParen, "'('");
    if (node.head == "natural") {
        node.n = static_cast<int>(as_int(lx.expect(Token::Number, "a rank"), "rank"));
    } else if (node.head == "dual") {
        node.kids.push_back(parse_rnode(lx));
    } else if (node.head == "ext" || node.head == "sym") {
        node.k = static_cast<int>(as_int(lx.expect(Token::Number, "a degree"), "degree"));
        lx.expect(Token::Comma, "','");
        node.n = static_cast<int>(as_int(lx.expect(Token::Number, "a rank"), "rank"));
    } else if (node.head == "det") {
        Token first = lx.expect(Token::Number, "an exponent");
        if (lx.peek().kind == Token::Comma) {
            lx.take();
            node.n = static_cast<int>(as_int(first, "rank"));
            node.lambda = lx.expect(Token::Number, "an exponent").value;
        } else {
            node.lambda = first.value;
        }
    } else if (node.head == "tensor" || node.head == "oplus") {
        node.kids.push_back(parse_rnode(lx));
        lx.expect(Token::Comma, "','");
        node.kids.push_back(parse_rnode(lx));
    } else if (node.head == "hwc") {
        node.kids.push_back(parse_rnode(lx));
        lx.expect(Token::Comma, "','");
        lx.expect(Token::LBracket, "'['");
        while (true) {
            node.weight.push_back(lx.expect(Token::Number, "a weight entry").value);
            if (lx.peek().kind != Token::Comma) break;
            lx.take();
        }
        lx.expect(Token::RBracket, "']'");
    } else {
        throw ParseError("unknown representation constructor '" + node.head + "'", head.pos);
    }
    lx.expect(Token::RParen, "')'");
    return node;
}

int known_rank(const RNode& node) {
    if (node.n > 0) return node.n;
    for (const RNode& kid : node.kids)
        if (int r = known_rank(kid); r > 0) return r;
    return 0;
}

RepExprPtr resolve_rnode(const RNode& node, int ctx_n) {
    if (node.head == "natural") return RepExpr::natural(node.n);
    if (node.head == "dual") return RepExpr::dual(resolve_rnode(node.kids[0], ctx_n));
    if (node.head == "ext") return RepExpr::ext(node.k, node.n);
    if (node.head == "sym") return RepExpr::sym(node.k, node.n);
    if (node.head == "det") {
        int n = node.n > 0 ? node.n : ctx_n;
        if (n <= 0) throw ParseError("cannot infer the rank of det; write det(n, q)", node.pos);
        return RepExpr::det_power(n, node.lambda);
    }
    int local = known_rank(node);
    if (local == 0) local = ctx_n;
    if (node.head == "tensor")
        return RepExpr::tensor(resolve_rnode(node.kids[0], local), resolve_rnode(node.kids[1], local));
    if (node.head == "oplus")
        return RepExpr::oplus(resolve_rnode(node.kids[0], local), resolve_rnode(node.kids[1], local));
    // hwc
    return RepExpr::hwc(resolve_rnode(node.kids[0], local), node.weight);
}

RepExprPtr parse_rep(Lexer& lx, int default_n) {
    RNode tree = parse_rnode(lx);
    int n = known_rank(tree);
    return resolve_rnode(tree, n > 0 ? n : default_n);
}

// ---------------------------------------------------------------------------
// Module expressions.

std::vector<Rational> parse_point(Lexer& lx) {
    std::vector<Rational> point;
    if (lx.peek().kind == Token::LBracket) {
        lx.take();
        while (true) {
            point.push_back(lx.expect(Token::Number, "a coordinate").value);
            if (lx.peek().kind != Token::Comma) break;
            lx.take();
        }
        lx.expect(Token::RBracket, "']'");
    } else {
        point.push_back(lx.expect(Token::Number, "a coordinate").value);
    }
    return point;
}

ChartPtr parse_chart(Lexer& lx) {
    lx.expect(Token::LBracket, "'['");
    std::vector<std::string> names;
    std::vector<bool> inverted;
    while (true) {
        Token v = lx.expect(Token::Ident, "a variable name");
        bool inv = false;
        if (lx.peek().kind == Token::Caret) {
            Token caret = lx.take();
            Token e = lx.expect(Token::Number, "an exponent");
            if (!e.value.is_integer() || e.value.to_long() != -1)
                throw ParseError("only ^-1 is allowed on a ring variable", caret.pos);
            inv = true;
        }
        // "t" and "t^-1" in one bracket name the same variable and make it
        // invertible; an exact repeat is a mistake.
        auto it = std::find(names.begin(), names.end(), v.text);
        if (it == names.end()) {
            names.push_back(v.text);
            inverted.push_back(inv);
        } else {
            size_t j = static_cast<size_t>(it - names.begin());
            if (inverted[j] == inv)
                throw ParseError("duplicate ring variable '" + v.text + "'", v.pos);
            inverted[j] = true;
        }
        if (lx.peek().kind != Token::Comma) break;
        lx.take();
    }
    lx.expect(Token::RBracket, "']'");
    bool any = false, all = true;
    for (bool b : inverted) {
        any = any || b;
        all = all && b;
    }
    if (!any) return chart_affine(names);
    if (all) return chart_torus(names);
    return chart_mixed(names, inverted);
}

Rep broken_rep_fixture() {
    // gl_2 matrices violating [E12, E21] = E11 - E22: both off-diagonal
    // generators are the same nilpotent, so the bracket vanishes while the
    // right side does not.
    QMatrix e11(2, 2, Rational(0)), e22(2, 2, Rational(0)), nil(2, 2, Rational(0));
    e11.at(0, 0) = Rational(1);
    e22.at(1, 1) = Rational(1);
    nil.at(0, 1) = Rational(1);
    return Rep::unchecked(2, {e11, nil, nil, e22}, RepExpr::natural(2));
}

AVModulePtr parse_module(Lexer& lx) {
    Token head = lx.expect(Token::Ident, "a module constructor");
    if (head.text == "k") {
        return ring_module(parse_chart(lx));
    }
    lx.expect(Token::LParen, "'('");
    AVModulePtr out;
    if (head.text == "delta") {
        std::vector<Rational> point;
        while (true) {
            point.push_back(lx.expect(Token::Number, "a coordinate").value);
            if (lx.peek().kind != Token::Comma) break;
            lx.take();
        }
        ChartPtr c = chart_affine(static_cast<int>(point.size()));
        out = delta_module(std::move(c), std::move(point));
    } else if (head.text == "tensor") {
        AVModulePtr base = parse_module(lx);
        lx.expect(Token::Comma, "','");
        RepExprPtr r = parse_rep(lx, base->chart()->dim);
        out = tensor_module(std::move(base), jet_rep_from_gl(rep_build(r), 0));
    } else if (head.text == "charged") {
        AVModulePtr base = parse_module(lx);
        lx.expect(Token::Comma, "','");
        Rational q = lx.expect(Token::Number, "a charge").value;
        out = charged_module(std::move(base), q);
    } else if (head.text == "gauge") {
        Token which = lx.expect(Token::Ident, "a gauge name");
        if (which.text != "elliptic")
            throw ParseError("unknown gauge '" + which.text + "'", which.pos);
        RepExprPtr r = RepExpr::det_power(1, Rational(0));
        if (lx.peek().kind == Token::Comma) {
            lx.take();
            r = parse_rep(lx, 1);
        }
        out = gauge_module(cubic_ideal_gauge(), rep_build(r));
    } else if (head.text == "alpha") {
        out = cubic_alpha_module(lx.expect(Token::Number, "a parameter").value);
    } else if (head.text == "rudakov") {
        std::vector<Rational> point = parse_point(lx);
        lx.expect(Token::Comma, "','");
        RepExprPtr r = parse_rep(lx, static_cast<int>(point.size()));
        out = rudakov_module(std::move(point), rep_build(r));
    } else if (head.text == "dual") {
        out = av_dual(parse_module(lx));
    } else if (head.text == "mtensor") {
        AVModulePtr a = parse_module(lx);
        lx.expect(Token::Comma, "','");
        out = av_mtensor(std::move(a), parse_module(lx));
    } else if (head.text == "fixture") {
        Token which = lx.expect(Token::Ident, "a fixture name");
        if (which.text == "gauge") {
            out = gauge_module(cubic_ideal_gauge_broken(),
                               rep_build(RepExpr::det_power(1, Rational(0))));
        } else if (which.text == "charged") {
            out = charged_module_broken(ring_module(chart_affine(1)), Rational(1, 2));
        } else if (which.text == "rep") {
            out = tensor_module(ring_module(chart_affine(2)),
                                jet_rep_from_gl(broken_rep_fixture(), 0));
        } else {
            throw ParseError("unknown fixture '" + which.text + "'", which.pos);
        }
    } else {
        throw ParseError("unknown module constructor '" + head.text + "'", head.pos);
    }
    lx.expect(Token::RParen, "')'");
    return out;
}

}  // namespace

RepExprPtr parse_rep_expr(const std::string& text, int default_n) {
    Lexer lx(text);
    RepExprPtr r = parse_rep(lx, default_n);
    if (lx.peek().kind != Token::End)
        throw ParseError("trailing input after expression", lx.peek().pos);
    return r;
}

AVModulePtr parse_module_expr(const std::string& text) {
    Lexer lx(text);
    AVModulePtr m = parse_module(lx);
    if (lx.peek().kind != Token::End)
        throw ParseError("trailing input after expression", lx.peek().pos);
    return m;
}

std::vector<FrameOp> parse_frame_spec(const std::string& text, const ChartPtr& chart) {
    Lexer lx(text);
    Token head = lx.expect(Token::Ident, "'default' or 'jets'");
    if (head.text == "default") {
        if (lx.peek().kind != Token::End)
            throw ParseError("trailing input after 'default'", lx.peek().pos);
        return default_frame(chart);
    }
    if (head.text != "jets")
        throw ParseError("unknown frame '" + head.text + "'", head.pos);
    lx.expect(Token::LParen, "'('");
    long s = as_int(lx.expect(Token::Number, "a jet order"), "jet order");
    lx.expect(Token::RParen, "')'");
    if (lx.peek().kind != Token::End)
        throw ParseError("trailing input after frame", lx.peek().pos);
    if (s < 0) throw ParseError("jet order must be >= 0", head.pos);
    return jet_frame(chart, static_cast<int>(s));
}

Atlas atlas_by_name(const std::string& name) {
    if (name == "p1") return atlas_p1();
    if (name == "gm") return atlas_gm();
    if (name == "circle") return atlas_circle();
    if (name == "elliptic-affine") return atlas_cubic();
    throw ParseError("unknown atlas '" + name + "' (expected p1, gm, circle, elliptic-affine)", 0);
}

TransitionRule parse_transition_rule(const std::string& text, int default_n) {
    TransitionRule rule;
    if (text == "section") {
        rule.kind = TransitionRule::Kind::Section;
        return rule;
    }
    size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw ParseError("expected section, det:<q>, rep:<R>, charged:<q> or jet:<s>", 0);
    std::string head = text.substr(0, colon);
    std::string tail = text.substr(colon + 1);
    try {
        if (head == "det") {
            rule.kind = TransitionRule::Kind::DetPower;
            rule.lambda = Rational::parse(tail);
        } else if (head == "charged") {
            rule.kind = TransitionRule::Kind::Charged;
            rule.lambda = Rational::parse(tail);
        } else if (head == "jet") {
            rule.kind = TransitionRule::Kind::Jet;
            rule.s = std::stoi(tail);
            if (rule.s < 0) throw std::invalid_argument("negative");
        } else if (head == "rep") {
            rule.kind = TransitionRule::Kind::Rep;
            rule.rep = parse_rep_expr(tail, default_n);
        } else {
            throw ParseError("unknown rule '" + head + "'", 0);
        }
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rule argument '" + tail + "'", colon + 1);
    } catch (const std::out_of_range&) {
        throw ParseError("bad rule argument '" + tail + "'", colon + 1);
    }
    return rule;
}

}  // namespace avmod
