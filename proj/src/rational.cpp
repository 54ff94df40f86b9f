#include "smallext/rational.hpp"

#include "smallext/errors.hpp"

#include <cctype>

namespace smallext {

Integer floor_int(const Rational& q) {
    Integer out;
    mpz_fdiv_q(out.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return out;
}

Integer ceil_int(const Rational& q) {
    Integer out;
    mpz_cdiv_q(out.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return out;
}

Rational parse_rational(const std::string& text) {
    std::size_t i = 0, n = text.size();
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t end = n;
    while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    if (i >= end) throw parse_error("empty rational literal");

    std::string body = text.substr(i, end - i);
    // validate shape: [+-]digits[/digits]
    std::size_t k = 0;
    if (body[k] == '+' || body[k] == '-') ++k;
    if (k >= body.size() || !std::isdigit(static_cast<unsigned char>(body[k])))
        throw parse_error("bad rational literal '" + body + "'");
    while (k < body.size() && std::isdigit(static_cast<unsigned char>(body[k]))) ++k;
    if (k < body.size()) {
        if (body[k] != '/') throw parse_error("bad rational literal '" + body + "'");
        ++k;
        if (k >= body.size() || !std::isdigit(static_cast<unsigned char>(body[k])))
            throw parse_error("bad rational literal '" + body + "'");
        while (k < body.size() && std::isdigit(static_cast<unsigned char>(body[k]))) ++k;
        if (k < body.size()) throw parse_error("bad rational literal '" + body + "'");
    }

    Rational q;
    if (q.set_str(body, 10) != 0) throw parse_error("bad rational literal '" + body + "'");
    if (q.get_den() == 0) throw parse_error("zero denominator in '" + body + "'");
    q.canonicalize();
    return q;
}

std::string rational_to_string(const Rational& q) {
    return q.get_str();
}

Rational integer_power(const Integer& base, const Integer& exponent) {
    if (base == 0) {
        if (exponent <= 0) throw domain_error("0 cannot be raised to a non-positive power");
        return Rational(0);
    }
    Integer e = exponent >= 0 ? exponent : Integer(-exponent);
    if (!e.fits_ulong_p()) throw domain_error("exponent out of range");
    Integer pow;
    mpz_pow_ui(pow.get_mpz_t(), base.get_mpz_t(), e.get_ui());
    if (exponent >= 0) return Rational(pow);
    Rational r(1, pow);
    r.canonicalize();
    return r;
}

namespace {

// admissible lower endpoint as a predicate on candidates
bool above_lo(const Rational& q, const Rational& lo, bool open_lo) {
    return open_lo ? q > lo : q >= lo;
}
bool below_hi(const Rational& q, const std::optional<Rational>& hi, bool open_hi) {
    if (!hi) return true;
    return open_hi ? q < *hi : q <= *hi;
}

/* Core walk for 0 <= lo.  Returns the smallest-denominator rational in the
 * interval.  The floor-jump keeps each step O(1) big-integer operations per
 * continued-fraction term. */
Rational simplest_nonneg(Rational lo, bool open_lo,
                         std::optional<Rational> hi, bool open_hi) {
    // accumulated continued-fraction prefix: value = (p1 * x + p0) / (q1 * x + q0)
    // applied to the remaining sub-problem answer x; maintained iteratively.
    Integer p0 = 0, p1 = 1, q0 = 1, q1 = 0;
    auto emit = [&](const Rational& x) {
        Rational num = Rational(p1) * x + p0;
        Rational den = Rational(q1) * x + q0;
        Rational out = num / den;
        out.canonicalize();
        return out;
    };

    for (;;) {
        // candidate integer: smallest integer admissible above lo
        Integer base = floor_int(lo);
        Integer cand = (lo == Rational(base) && !open_lo) ? base : base + 1;
        Rational candq(cand);
        if (below_hi(candq, hi, open_hi)) return emit(candq);

        // No integer fits: interval lies inside (base, base+1) with hi finite.
        // Recurse on reciprocals of the fractional parts (bounds swap roles).
        Rational fl = lo - Rational(base);            // > 0 here (else an integer fit)
        Rational fh = *hi - Rational(base);           // > 0, < 1 unless hi endpoint fell on base
        if (fh == 0) throw domain_error("empty rational interval");
        // new interval: [1/fh, 1/fl] with openness swapped; 1/fl may be absent if fl == 0
        std::optional<Rational> new_hi;
        bool new_open_hi = open_lo;
        if (fl != 0) {
            new_hi = 1 / fl;
            new_hi->canonicalize();
        }
        Rational new_lo = 1 / fh;
        new_lo.canonicalize();
        bool new_open_lo = open_hi;

        // fold "base + 1/x" into the linear form
        // value = base + 1/x  =>  (p1,p0,q1,q0) update
        Integer np1 = p1 * base + p0;
        Integer np0 = p1;
        Integer nq1 = q1 * base + q0;
        Integer nq0 = q1;
        p1 = np1; p0 = np0; q1 = nq1; q0 = nq0;

        lo = new_lo; open_lo = new_open_lo;
        hi = new_hi; open_hi = new_open_hi;
    }
}

} // namespace

Rational simplest_rational_between(const Rational& lo, bool open_lo,
                                   const std::optional<Rational>& hi, bool open_hi) {
    if (hi) {
        if (lo > *hi || (lo == *hi && (open_lo || open_hi)))
            throw domain_error("empty rational interval");
    }
    // zero is the simplest of all
    if (above_lo(Rational(0), lo, open_lo) && below_hi(Rational(0), hi, open_hi))
        return Rational(0);
    if (sgn(lo) >= 0) return simplest_nonneg(lo, open_lo, hi, open_hi);
    // zero excluded with lo < 0 forces the interval entirely non-positive
    Rational nlo = -*hi;
    std::optional<Rational> nhi = -lo;
    return -simplest_nonneg(nlo, open_hi, nhi, open_lo);
}

} // namespace smallext
