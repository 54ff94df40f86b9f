#pragma once

#include "smallext/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace smallext {

/* Scalars are elements of a fixed finite-dimensional Q-vector space
 *
 *     Q  +  Q*c1  +  ...  +  Q*ck
 *
 * where each ci is a named real algebraic irrational pinned down by an integer
 * polynomial together with an isolating interval.  The ci are declared
 * Q-linearly independent (with 1); the library never multiplies two of them,
 * so sums, differences and rational rescalings stay inside the space.  Sign
 * determination works by exact interval arithmetic with bisection refinement
 * of the constants' isolating intervals, never by floating point. */

struct AlgebraicConstant {
    std::string label;
    std::vector<Integer> poly;  // ascending-degree integer coefficients, lead != 0, degree >= 2
    Rational lo, hi;            // current isolating interval (open), sign change across it

    int degree() const { return static_cast<int>(poly.size()) - 1; }
};

using ConstantPtr = std::shared_ptr<const AlgebraicConstant>;

/// Sign of P at a rational point, evaluated exactly.
int poly_sign_at(const std::vector<Integer>& poly, const Rational& x);

/// Number of distinct real roots of P in the open interval (lo, hi), by Sturm's method.
/// Requires P nonzero at both endpoints.
int sturm_root_count(const std::vector<Integer>& poly, const Rational& lo, const Rational& hi);

/* Validate and intern a constant.  Checks: degree >= 2, leading coefficient
 * nonzero, lo < hi, sign change across the interval, exactly one root inside.
 * Throws config_error on violations. */
ConstantPtr make_constant(const std::string& label, std::vector<Integer> poly,
                          const Rational& lo, const Rational& hi);

/* Bisect the isolating interval until its width is <= target (stops as soon
 * as the bound holds, so an interval already narrow enough is returned
 * unchanged).  Deterministic: the half keeping the sign change is chosen each
 * step.  A bisection midpoint that is itself a root raises config_error: the
 * declared constant would be rational.  Requires target_width > 0. */
std::pair<Rational, Rational> refine_constant(const AlgebraicConstant& c,
                                              const Rational& target_width);

/// Session-scoped table of declared constants, keyed by label.
class ConstantRegistry {
public:
    ConstantPtr declare(const std::string& label, std::vector<Integer> poly,
                        const Rational& lo, const Rational& hi);
    ConstantPtr lookup(const std::string& label) const;  // config_error if unknown
    bool known(const std::string& label) const;
    std::vector<ConstantPtr> all() const;

private:
    std::map<std::string, ConstantPtr> by_label_;
};

/// One irrational term of a scalar: coeff * constant, coeff != 0.
struct ScalarTerm {
    Rational coeff;
    ConstantPtr constant;

    bool operator==(const ScalarTerm& other) const {
        return coeff == other.coeff && constant->label == other.constant->label;
    }
};

class Scalar {
public:
    Scalar() : rat_(0) {}
    /*implicit*/ Scalar(Rational r) : rat_(std::move(r)) {}
    /*implicit*/ Scalar(long n) : rat_(n) {}
    /*implicit*/ Scalar(int n) : rat_(n) {}

    static Scalar constant(const ConstantPtr& c, const Rational& coeff = Rational(1));

    const Rational& rational_part() const { return rat_; }
    const std::map<std::string, ScalarTerm>& terms() const { return terms_; }

    bool is_rational() const { return terms_.empty(); }
    bool is_zero() const { return terms_.empty() && rat_ == 0; }

    /// The rational value; domain_error when irrational terms are present.
    const Rational& as_rational() const;

    Scalar operator+(const Scalar& other) const;
    Scalar operator-(const Scalar& other) const;
    Scalar operator-() const;
    Scalar scaled(const Rational& by) const;

    /// Structural equality: identical rational part and identical term lists.
    bool operator==(const Scalar& other) const;
    bool operator!=(const Scalar& other) const { return !(*this == other); }

private:
    Rational rat_;
    std::map<std::string, ScalarTerm> terms_;  // label -> term, coeff != 0

    void add_term(const Rational& coeff, const ConstantPtr& c);
    friend Scalar scalar_from_parts(Rational rat,
                                    std::vector<std::pair<Rational, ConstantPtr>> parts);
};

Scalar scalar_from_parts(Rational rat, std::vector<std::pair<Rational, ConstantPtr>> parts);

/* Exact sign of a scalar.  Rational scalars are immediate; otherwise the
 * enclosing interval is refined by bisection of each participating constant.
 * If after 100 rounds the enclosure still straddles zero and has shrunk to
 * within 10^-30 of it, config_error is raised: the declared constants are
 * almost surely rationally dependent and the declaration is wrong.  (A
 * genuinely nonzero value of a truly independent combination resolves long
 * before that.) */
int scalar_sign(const Scalar& s);

/// Three-way comparison by sign of the difference: -1, 0, +1.
int scalar_compare(const Scalar& a, const Scalar& b);

/// Exact rational enclosure [lo, hi] of the value; degenerate for rationals.
std::pair<Rational, Rational> scalar_enclosure(const Scalar& s);

/// Largest integer <= s (resp. smallest >= s); exact, via refinement.
Integer scalar_floor(const Scalar& s);
Integer scalar_ceil(const Scalar& s);

/// A rational strictly between a and b (requires a < b); prefers simple ones.
Rational rational_strictly_between(const Scalar& a, const Scalar& b);

/// Canonical rendering: "3/4", "sqrt2", "1/2 + 3*sqrt2", "-x + 1/2*y"-style.
std::string scalar_to_string(const Scalar& s);

} // namespace smallext
