#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "avmod/errors.hpp"
#include "avmod/rational.hpp"

namespace avmod {

/// Exponent vector, one slot per ring variable. Negative entries are Laurent
/// exponents and are only legal on variables the ring marks invertible.
using Expo = std::vector<int>;

Expo expo_add(const Expo& a, const Expo& b);
Expo expo_sub(const Expo& a, const Expo& b);
int expo_total(const Expo& e);       // sum of |e_i|
bool expo_leq(const Expo& a, const Expo& b);  // componentwise, both nonnegative
Rational expo_factorial(const Expo& e);       // prod e_i!
Rational expo_binomial(const Expo& n, const Expo& k);  // prod binom(n_i, k_i)
std::string expo_str(const Expo& e, const std::vector<std::string>& vars);

/// Enumerates nonnegative multi-indices of length n with total degree in
/// [lo, hi], graded then lexicographic.
std::vector<Expo> multi_indices(int n, int lo, int hi);

/// Presentation of a commutative coefficient ring. Covers every ring the
/// library works over:
///
///   - polynomial rings: no relation, nothing invertible
///   - Laurent rings: some or all variables invertible
///   - one-relation quotients k[..., v, ...]/(v^d - rhs) with rhs free of v
///   - localizations of such a quotient at v; since v^d = rhs, inverting v
///     amounts to inverting rhs, and elements are stored as
///     (numerator with v-degree < d) / rhs^k
///
/// Specs are shared immutably; elements hold a pointer and compare it by
/// structure, so independently built identical specs interoperate.
struct RingSpec {
    std::vector<std::string> vars;
    std::vector<bool> invertible;  // Laurent flags; rel_var must use rel_var_inverted instead
    int rel_var = -1;              // index of the relation variable, -1 if free
    int rel_deg = 0;               // v^rel_deg rewrites to rel_rhs
    std::map<Expo, Rational> rel_rhs;
    bool rel_var_inverted = false;
    std::string name;

    int nvars() const { return static_cast<int>(vars.size()); }
    bool has_relation() const { return rel_var >= 0; }
    bool same_structure(const RingSpec& o) const;

    static std::shared_ptr<const RingSpec> poly(const std::vector<std::string>& vars);
    static std::shared_ptr<const RingSpec> laurent(const std::vector<std::string>& vars);
    /// Polynomial ring with the listed variables inverted.
    static std::shared_ptr<const RingSpec> mixed(const std::vector<std::string>& vars,
                                                 const std::vector<bool>& invertible);
    static std::shared_ptr<const RingSpec> quotient(const std::vector<std::string>& vars,
                                                    const std::vector<bool>& invertible,
                                                    int rel_var, int rel_deg,
                                                    std::map<Expo, Rational> rel_rhs,
                                                    bool rel_var_inverted,
                                                    std::string name);
};

using RingSpecPtr = std::shared_ptr<const RingSpec>;

/// Element of a RingSpec ring in normal form:
///   value = (sum of terms) / rhs^den
/// where every term respects the invertibility flags, the relation variable
/// exponent lies in [0, rel_deg), den = 0 unless the relation variable is
/// inverted, and the numerator is not divisible by rhs while den > 0.
class RingElem {
public:
    RingElem() = default;
    explicit RingElem(RingSpecPtr spec) : spec_(std::move(spec)) {}

    static RingElem zero(RingSpecPtr spec) { return RingElem(std::move(spec)); }
    static RingElem constant(RingSpecPtr spec, const Rational& c);
    static RingElem one(RingSpecPtr spec) { return constant(std::move(spec), Rational(1)); }
    static RingElem variable(RingSpecPtr spec, int i);
    static RingElem monomial(RingSpecPtr spec, const Expo& e, const Rational& c);
    /// Builds from raw data and normalizes.
    static RingElem make(RingSpecPtr spec, std::map<Expo, Rational> terms, int den = 0);

    const RingSpecPtr& spec() const { return spec_; }
    const std::map<Expo, Rational>& terms() const { return terms_; }
    int den_power() const { return den_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// The constant value; throws unless is_constant().
    Rational constant_value() const;
    /// Max over terms of sum |e_i| (numerator only); -1 for zero.
    int degree() const;

    RingElem operator+(const RingElem& o) const;
    RingElem operator-(const RingElem& o) const;
    RingElem operator-() const;
    RingElem operator*(const RingElem& o) const;
    RingElem operator*(const Rational& c) const;
    RingElem& operator+=(const RingElem& o) { return *this = *this + o; }
    RingElem& operator-=(const RingElem& o) { return *this = *this - o; }
    RingElem& operator*=(const RingElem& o) { return *this = *this * o; }
    bool operator==(const RingElem& o) const;
    bool operator!=(const RingElem& o) const { return !(*this == o); }

    /// Integer power; negative powers require an invertible monomial.
    RingElem pow(long e) const;
    /// Inverse of a single-term element whose support is invertible; nullopt
    /// otherwise.
    std::optional<RingElem> try_invert() const;

    /// Re-tags the element in a larger ring with the same variables and
    /// relation (e.g. the localization). Throws SpecMismatch if incompatible.
    RingElem in_spec(const RingSpecPtr& target) const;

    std::string str() const;

private:
    RingSpecPtr spec_;
    std::map<Expo, Rational> terms_;
    int den_ = 0;

    void normalize();
    friend RingElem ring_make_unchecked(RingSpecPtr, std::map<Expo, Rational>, int);
};

/// A derivation of the ring, given by its images on the variables; extended
/// by the Leibniz rule and, over localizations, the quotient rule.
struct Derivation {
    std::vector<RingElem> images;
};

RingElem derive(const RingElem& f, const Derivation& d);

/// Exact division of the numerator term maps; nullopt if not divisible.
/// Both arguments are treated as plain (Laurent) polynomial data.
std::optional<std::map<Expo, Rational>> exact_divide(const std::map<Expo, Rational>& num,
                                                     const std::map<Expo, Rational>& div);

/// Substitutes images[i] for variable i. Negative exponents require the image
/// to be an invertible monomial.
RingElem substitute(const RingElem& f, const std::vector<RingElem>& images, const RingSpecPtr& target);

/// All normal-form monomials of total degree <= maxdeg. Invertible variables
/// range over negative exponents too; the relation variable stays in
/// [0, rel_deg). Deterministic order.
std::vector<RingElem> ring_monomials(const RingSpecPtr& spec, int maxdeg);

}  // namespace avmod
