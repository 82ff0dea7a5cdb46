#include "avmod/jets.hpp"

#include <algorithm>

namespace avmod {

std::string JetGen::str(const std::vector<std::string>& vars) const {
    auto var = [&](int i) {
        if (i < static_cast<int>(vars.size())) return "X" + vars[i];
        return "X" + std::to_string(i + 1);
    };
    std::string s;
    for (size_t i = 0; i < expo.size(); ++i) {
        if (expo[i] == 0) continue;
        s += var(static_cast<int>(i));
        if (expo[i] != 1) s += "^" + std::to_string(expo[i]);
    }
    return s + "*D" + std::to_string(dir + 1);
}

std::vector<std::pair<JetGen, Rational>> jet_bracket(const JetGen& a, const JetGen& b, int trunc) {
    std::vector<std::pair<JetGen, Rational>> out;
    int target_deg = a.degree() + b.degree();
    if (target_deg > trunc) return out;
    // b_i X^{a+b-e_i} d_j
    if (b.expo[a.dir] > 0) {
        Expo e = expo_add(a.expo, b.expo);
        e[a.dir] -= 1;
        out.emplace_back(JetGen{e, b.dir}, Rational(b.expo[a.dir]));
    }
    // - a_j X^{a+b-e_j} d_i
    if (a.expo[b.dir] > 0) {
        Expo e = expo_add(a.expo, b.expo);
        e[b.dir] -= 1;
        JetGen g{e, a.dir};
        bool merged = false;
        for (auto& [h, c] : out)
            if (h == g) {
                c -= Rational(a.expo[b.dir]);
                merged = true;
            }
        if (!merged) out.emplace_back(g, Rational(-a.expo[b.dir]));
        else
            out.erase(std::remove_if(out.begin(), out.end(),
                                     [](const auto& p) { return p.second.is_zero(); }),
                      out.end());
    }
    return out;
}

std::vector<JetGen> jet_gens_up_to(int n, int trunc) {
    std::vector<JetGen> out;
    for (const Expo& k : multi_indices(n, 1, trunc + 1))
        for (int i = 0; i < n; ++i) out.push_back(JetGen{k, i});
    std::sort(out.begin(), out.end());
    return out;
}

std::pair<int, int> gl_embed(const JetGen& g) {
    if (g.degree() != 0)
        throw DegreeError("gl_embed: generator " + g.str() + " has degree " +
                          std::to_string(g.degree()) + ", need 0");
    int j = -1;
    for (size_t i = 0; i < g.expo.size(); ++i)
        if (g.expo[i] == 1) j = static_cast<int>(i);
    return {j, g.dir};
}

std::map<JetMono, Rational> pbw_straighten(const JetMono& word, int trunc) {
    std::map<JetMono, Rational> out;
    // Worklist of words with coefficients; swap the first inversion and add
    // the bracket corrections until everything is sorted.
    std::vector<std::pair<JetMono, Rational>> work{{word, Rational(1)}};
    while (!work.empty()) {
        auto [w, c] = std::move(work.back());
        work.pop_back();
        size_t inv = w.size();
        for (size_t i = 0; i + 1 < w.size(); ++i)
            if (w[i + 1] < w[i]) {
                inv = i;
                break;
            }
        if (inv == w.size()) {
            auto& slot = out[w];
            slot += c;
            if (slot.is_zero()) out.erase(w);
            continue;
        }
        JetMono swapped = w;
        std::swap(swapped[inv], swapped[inv + 1]);
        work.emplace_back(std::move(swapped), c);
        for (const auto& [g, q] : jet_bracket(w[inv], w[inv + 1], trunc)) {
            JetMono contracted;
            contracted.reserve(w.size() - 1);
            contracted.insert(contracted.end(), w.begin(), w.begin() + inv);
            contracted.push_back(g);
            contracted.insert(contracted.end(), w.begin() + inv + 2, w.end());
            work.emplace_back(std::move(contracted), c * q);
        }
    }
    return out;
}

std::string jet_mono_str(const JetMono& m) {
    if (m.empty()) return "1";
    std::string s;
    for (const auto& g : m) {
        if (!s.empty()) s += "*";
        s += g.str();
    }
    return s;
}

}  // namespace avmod
