#pragma once

#include "smallext/ordered_group.hpp"
#include "smallext/slot_vector.hpp"

#include <optional>
#include <string>
#include <vector>

namespace smallext {

/* ------------------------------------------------------------------ */
/*  Field elements                                                     */
/* ------------------------------------------------------------------ */

/* An element of Q or of Q(t), stored as a reduced fraction of dense
 * polynomials in t with rational coefficients (ascending powers).  The
 * denominator is monic and coprime to the numerator, so representations
 * are unique and equality is structural.  Plain rationals embed as
 * constant fractions. */
class FieldElem {
public:
    FieldElem();  // zero
    /*implicit*/ FieldElem(Rational r);
    /*implicit*/ FieldElem(long n);

    /// num/den as polynomials in t; den must be nonzero (domain_error).
    static FieldElem t_fraction(std::vector<Rational> num, std::vector<Rational> den);
    static FieldElem t_polynomial(std::vector<Rational> num);

    const std::vector<Rational>& num() const { return num_; }
    const std::vector<Rational>& den() const { return den_; }

    bool is_zero() const;
    bool is_rational() const;      // no t in numerator or denominator
    Rational as_rational() const;  // domain_error when t occurs

    FieldElem operator+(const FieldElem& o) const;
    FieldElem operator-(const FieldElem& o) const;
    FieldElem operator*(const FieldElem& o) const;
    FieldElem operator/(const FieldElem& o) const;  // domain_error on zero divisor
    FieldElem operator-() const;

    bool operator==(const FieldElem& o) const;
    bool operator!=(const FieldElem& o) const { return !(*this == o); }

private:
    std::vector<Rational> num_;  // ascending powers of t, trimmed; {} for zero
    std::vector<Rational> den_;  // monic, coprime to num_; {1} when trivial

    void reduce();
};

std::string field_elem_to_string(const FieldElem& x);

/* ------------------------------------------------------------------ */
/*  Valued fields                                                      */
/* ------------------------------------------------------------------ */

enum class FieldKind {
    PAdicQ,          // K = Q, v = p-adic order, value group Z inside Q
    LexCompositeQt,  // K = Q(t), v(f) = (ord_t f, p-order of the lowest t-coefficient)
};

/* A field together with its exact valuation.  The value group is the
 * integer lattice of rank 1 or 2, carried on a normalized FIN index
 * structure so that values are slot vectors and parameters can range over
 * the whole one-added-element hull. */
class ValuedField {
public:
    static ValuedField padic(long p);
    static ValuedField lex_composite(long p);

    FieldKind kind() const { return kind_; }
    long prime() const { return prime_; }
    int value_rank() const;
    const StructurePtr& value_structure() const { return structure_; }

private:
    ValuedField(FieldKind kind, long prime);

    FieldKind kind_;
    long prime_;
    StructurePtr structure_;
};

/// Multiplicity of p in a nonzero rational (negative for denominators).
long padic_order(const Rational& x, long p);

/// Exact value of a field element; nullopt encodes the infinite value of 0.
/// PAdicQ accepts rational elements only (domain_error when t occurs).
std::optional<SlotVector> field_value(const ValuedField& K, const FieldElem& c);

/* ------------------------------------------------------------------ */
/*  Polynomials over the field                                         */
/* ------------------------------------------------------------------ */

class Poly {
public:
    Poly();  // zero polynomial
    explicit Poly(std::vector<FieldElem> coeffs);  // ascending powers; trims zeros

    bool is_zero() const { return coeffs_.empty(); }
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }  // -1 for zero
    const std::vector<FieldElem>& coeffs() const { return coeffs_; }
    FieldElem coeff(long s) const;  // zero beyond the degree
    FieldElem leading() const;      // domain_error on the zero polynomial

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    FieldElem operator()(const FieldElem& x) const;

    bool operator==(const Poly& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

private:
    std::vector<FieldElem> coeffs_;
};

std::string poly_to_string(const Poly& f);

/// Coefficients (a_s) of f = sum a_s (x-a)^s, dense, length degree+1.
std::vector<FieldElem> taylor_expand(const Poly& f, const FieldElem& a);

/* ------------------------------------------------------------------ */
/*  Depth-zero valuations                                              */
/* ------------------------------------------------------------------ */

/* The valuation sending sum a_s (x-a)^s to the least of the slot values
 * v(a_s) + s*delta.  delta ranges over the whole hull of the value group
 * (rational, irrational, and marker vectors included); the absent delta
 * is the terminal parameter whose valuation evaluates at the center. */
struct DepthZeroValuation {
    FieldElem center;
    std::optional<SlotVector> delta;  // nullopt: the terminal (infinite) parameter
};

/// Validates: delta over the field's value structure; PAdicQ centers rational.
DepthZeroValuation make_depth_zero(const ValuedField& K, FieldElem center,
                                   std::optional<SlotVector> delta);

/* A value of the extended group generated by the base values and one
 * parameter: m copies of the parameter plus a base vector, or infinity.
 * The pair is ordered through the slot embedding m*delta + g; it is the
 * unique representation when the parameter is incommensurable. */
struct ExtendedValue {
    bool infinite;
    long m;        // multiplicity of the parameter
    SlotVector g;  // base value-group part
};

ExtendedValue finite_value(long m, SlotVector g);
ExtendedValue infinity_value(const StructurePtr& structure);

/// The slot vector m*delta + g; domain_error for the infinite value.
SlotVector extended_embed(const ExtendedValue& x, const SlotVector& delta);

/// Three-way comparison through the embedding; infinity is greatest.
int extended_compare(const ExtendedValue& x, const ExtendedValue& y, const SlotVector& delta);

/// Least slot value of v(a_s) + s*delta over the (x-center)-expansion;
/// ties keep the smallest s.  The zero polynomial maps to infinity, and the
/// terminal parameter evaluates f at the center.
ExtendedValue dz_eval(const ValuedField& K, const DepthZeroValuation& w, const Poly& f);

/* Boundary valuations of the depth-zero family, as (m, g) pairs read
 * against the end markers of the hull.
 *
 * omega_minus_infinity: the low end; (-deg f, v(leading coefficient)),
 * independent of any expansion center.  Matches dz_eval at the bottom
 * marker parameter under m -> -m.
 *
 * omega_inf_minus: the high end just below the terminal parameter;
 * (multiplicity of (x-a) in f, v(first nonzero expansion coefficient)).
 * Matches dz_eval at the top marker parameter exactly.
 *
 * Both send the zero polynomial to infinity. */
ExtendedValue omega_minus_infinity(const ValuedField& K, const Poly& f);
ExtendedValue omega_inf_minus(const ValuedField& K, const FieldElem& a, const Poly& f);

/// Same valuation: equal parameters (as values) and v(b-a) >= delta in the
/// slot order (the infinite v(0) passes every bound).
bool dz_equal(const ValuedField& K, const FieldElem& a, const SlotVector& delta,
              const FieldElem& b, const SlotVector& eps);

/// Equivalent valuations: equivalent parameters, and v(b-a) at least the
/// common class — no smaller than its canonical representative.
bool dz_equivalent(const ValuedField& K, const FieldElem& a, const SlotVector& delta,
                   const FieldElem& b, const SlotVector& eps);

/* Builds the group generated by the base values and the parameter (marker
 * parameters get their slot inserted as an ambient coordinate between the
 * base ones) and reports how it extends the base lattice.  domain_error for
 * the terminal parameter. */
SmallnessReport value_group_check(const ValuedField& K, const DepthZeroValuation& w);

/* ------------------------------------------------------------------ */
/*  Ball infima                                                        */
/* ------------------------------------------------------------------ */

struct BallProbe {
    long rho;                     // probe exponent: the point a + p^rho
    Rational expected;            // v(a_{s0}) + s0*rho
    std::optional<Rational> got;  // v(f(a + p^rho)); absent when infinite
    bool ok = false;
};

struct BallCheckReport {
    int part = 0;  // 1: integer radius, witness scan; 2: irrational radius, probes

    // part 1
    std::optional<Rational> mu;             // the valuation's value, as a number
    std::optional<FieldElem> witness;       // ball point b with v(f(b)) = mu
    std::optional<Rational> witness_value;  // v(f(witness))
    int sampled = 0;                        // random ball points checked
    bool all_at_least = false;              // every sample gave v(f) >= mu

    // part 2
    bool skipped = false;             // no integer probe fits below epsilon
    long s0 = 0;                      // the unique minimizing expansion index
    std::optional<Rational> epsilon;  // least blocking slope; absent when none blocks
    std::vector<BallProbe> probes;
    bool all_exact = false;
};

/* Checks that the depth-zero value at radius delta is realized on the ball
 * {c : v(c-a) >= delta}.
 *
 * Integer delta (part 1): requires p > deg f; scans z in 1..p-1 for a point
 * b = a + z*p^delta with v(f(b)) equal to the depth-zero value, then draws
 * `trials` random ball points and checks each gives at least that value.
 *
 * Irrational delta (part 2): locates the unique minimizing index s0 and the
 * least slope epsilon of the lower expansion terms, then checks
 * v(f(a + p^rho)) = v(a_{s0}) + s0*rho for every integer rho strictly
 * between delta and epsilon (skipped when no such integer exists).
 *
 * p-adic fields only; other radius shapes are rejected (domain_error). */
BallCheckReport ball_inf_check(const ValuedField& K, const FieldElem& a,
                               const SlotVector& delta, const Poly& f, int trials,
                               unsigned seed = 20240817u);

} // namespace smallext
