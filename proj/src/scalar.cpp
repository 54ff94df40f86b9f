#include "smallext/scalar.hpp"

#include "smallext/errors.hpp"

#include <algorithm>
#include <sstream>

namespace smallext {

namespace {

using QPoly = std::vector<Rational>;  // ascending degree, trimmed

void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly qpoly_from(const std::vector<Integer>& poly) {
    QPoly out;
    out.reserve(poly.size());
    for (const auto& c : poly) out.emplace_back(c);
    trim(out);
    return out;
}

int qsign_at(const QPoly& p, const Rational& x) {
    Rational acc(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return sgn(acc);
}

QPoly derivative(const QPoly& p) {
    QPoly out;
    for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * Rational(static_cast<long>(i)));
    trim(out);
    return out;
}

// remainder of a by b, monic-normalized to tame coefficient growth
QPoly poly_rem(QPoly a, const QPoly& b) {
    while (a.size() >= b.size() && !a.empty()) {
        Rational factor = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= factor * b[i];
        a.pop_back();
        trim(a);
    }
    return a;
}

QPoly poly_gcd(QPoly a, QPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        QPoly r = poly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rational lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

QPoly poly_div_exact(const QPoly& a, const QPoly& b) {
    QPoly rem = a, quot(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
    while (rem.size() >= b.size() && !rem.empty()) {
        Rational factor = rem.back() / b.back();
        std::size_t shift = rem.size() - b.size();
        quot[shift] = factor;
        for (std::size_t i = 0; i < b.size(); ++i) rem[shift + i] -= factor * b[i];
        rem.pop_back();
        trim(rem);
    }
    trim(quot);
    return quot;
}

int sign_variations(const std::vector<QPoly>& chain, const Rational& x) {
    int count = 0, prev = 0;
    for (const auto& p : chain) {
        int s = qsign_at(p, x);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

} // namespace

int poly_sign_at(const std::vector<Integer>& poly, const Rational& x) {
    // sign of sum a_i x^i == sign of sum a_i num^i den^(n-i): exact, integer-only
    const Integer& num = x.get_num();
    const Integer& den = x.get_den();
    Integer acc(0);
    Integer num_pow(1);
    std::vector<Integer> den_pows(poly.size());
    Integer dp(1);
    for (std::size_t i = 0; i < poly.size(); ++i) {
        den_pows[poly.size() - 1 - i] = dp;
        dp *= den;
    }
    for (std::size_t i = 0; i < poly.size(); ++i) {
        acc += poly[i] * num_pow * den_pows[i];
        num_pow *= num;
    }
    return sgn(acc);
}

int sturm_root_count(const std::vector<Integer>& poly, const Rational& lo, const Rational& hi) {
    QPoly p = qpoly_from(poly);
    if (p.empty()) throw config_error("zero polynomial cannot isolate a root");
    if (qsign_at(p, lo) == 0 || qsign_at(p, hi) == 0)
        throw config_error("isolating interval endpoint is a root");
    QPoly g = poly_gcd(p, derivative(p));
    QPoly sf = (g.size() <= 1) ? p : poly_div_exact(p, g);  // squarefree part

    std::vector<QPoly> chain{sf, derivative(sf)};
    while (!chain.back().empty() && chain.back().size() > 1) {
        QPoly r = poly_rem(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        if (r.empty()) break;
        chain.push_back(std::move(r));
    }
    return sign_variations(chain, lo) - sign_variations(chain, hi);
}

ConstantPtr make_constant(const std::string& label, std::vector<Integer> poly,
                          const Rational& lo, const Rational& hi) {
    while (!poly.empty() && poly.back() == 0) poly.pop_back();
    if (poly.size() < 3)
        throw config_error("constant '" + label + "': polynomial degree must be at least 2");
    if (!(lo < hi))
        throw config_error("constant '" + label + "': empty isolating interval");
    int slo = poly_sign_at(poly, lo);
    int shi = poly_sign_at(poly, hi);
    if (slo == 0 || shi == 0 || slo == shi)
        throw config_error("constant '" + label + "': no sign change across the interval");
    if (sturm_root_count(poly, lo, hi) != 1)
        throw config_error("constant '" + label + "': interval does not isolate a single root");
    auto c = std::make_shared<AlgebraicConstant>();
    c->label = label;
    c->poly = std::move(poly);
    c->lo = lo;
    c->hi = hi;
    return c;
}

namespace {

// one deterministic bisection step; keeps the sign-changing half
void bisect_once(const std::vector<Integer>& poly, Rational& lo, Rational& hi, int& slo) {
    Rational mid = (lo + hi) / 2;
    int smid = poly_sign_at(poly, mid);
    if (smid == 0)
        throw config_error("bisection midpoint is a root: the declared constant is rational");
    if (smid == slo) {
        lo = mid;
    } else {
        hi = mid;
    }
}

} // namespace

std::pair<Rational, Rational> refine_constant(const AlgebraicConstant& c,
                                              const Rational& target_width) {
    if (!(target_width > 0)) throw domain_error("refinement width must be positive");
    Rational lo = c.lo, hi = c.hi;
    int slo = poly_sign_at(c.poly, lo);
    while (hi - lo > target_width) bisect_once(c.poly, lo, hi, slo);
    return {lo, hi};
}

ConstantPtr ConstantRegistry::declare(const std::string& label, std::vector<Integer> poly,
                                      const Rational& lo, const Rational& hi) {
    if (by_label_.count(label))
        throw config_error("constant '" + label + "' declared twice");
    auto c = make_constant(label, std::move(poly), lo, hi);
    by_label_.emplace(label, c);
    return c;
}

ConstantPtr ConstantRegistry::lookup(const std::string& label) const {
    auto it = by_label_.find(label);
    if (it == by_label_.end()) throw config_error("unknown constant '" + label + "'");
    return it->second;
}

bool ConstantRegistry::known(const std::string& label) const {
    return by_label_.count(label) != 0;
}

std::vector<ConstantPtr> ConstantRegistry::all() const {
    std::vector<ConstantPtr> out;
    for (const auto& [_, c] : by_label_) out.push_back(c);
    return out;
}

Scalar Scalar::constant(const ConstantPtr& c, const Rational& coeff) {
    Scalar s;
    s.add_term(coeff, c);
    return s;
}

const Rational& Scalar::as_rational() const {
    if (!terms_.empty()) throw domain_error("scalar is irrational");
    return rat_;
}

void Scalar::add_term(const Rational& coeff, const ConstantPtr& c) {
    if (coeff == 0) return;
    auto it = terms_.find(c->label);
    if (it == terms_.end()) {
        terms_.emplace(c->label, ScalarTerm{coeff, c});
        return;
    }
    if (it->second.constant->poly != c->poly || it->second.constant->lo != c->lo ||
        it->second.constant->hi != c->hi) {
        // same label, different data: mixing scalars from different sessions
        if (it->second.constant != c)
            throw config_error("conflicting declarations for constant '" + c->label + "'");
    }
    it->second.coeff += coeff;
    if (it->second.coeff == 0) terms_.erase(it);
}

Scalar Scalar::operator+(const Scalar& other) const {
    Scalar out = *this;
    out.rat_ += other.rat_;
    for (const auto& [_, t] : other.terms_) out.add_term(t.coeff, t.constant);
    return out;
}

Scalar Scalar::operator-(const Scalar& other) const {
    Scalar out = *this;
    out.rat_ -= other.rat_;
    for (const auto& [_, t] : other.terms_) out.add_term(-t.coeff, t.constant);
    return out;
}

Scalar Scalar::operator-() const {
    Scalar out;
    out.rat_ = -rat_;
    for (const auto& [label, t] : terms_) out.terms_.emplace(label, ScalarTerm{-t.coeff, t.constant});
    return out;
}

Scalar Scalar::scaled(const Rational& by) const {
    Scalar out;
    if (by == 0) return out;
    out.rat_ = rat_ * by;
    for (const auto& [label, t] : terms_)
        out.terms_.emplace(label, ScalarTerm{t.coeff * by, t.constant});
    return out;
}

bool Scalar::operator==(const Scalar& other) const {
    return rat_ == other.rat_ && terms_ == other.terms_;
}

Scalar scalar_from_parts(Rational rat, std::vector<std::pair<Rational, ConstantPtr>> parts) {
    Scalar s;
    s.rat_ = std::move(rat);
    for (auto& [coeff, c] : parts) s.add_term(coeff, c);
    return s;
}

namespace {

/* Per-computation refinement state: each participating constant's interval,
 * narrowed one bisection step per round across all constants.  Keeping the
 * state call-local preserves value semantics of Scalar. */
class RefinementState {
public:
    void track(const Scalar& s) {
        for (const auto& [label, t] : s.terms()) {
            auto [it, fresh] = entries_.try_emplace(label, Entry{t.constant, t.constant->lo,
                                                                t.constant->hi, 0});
            if (fresh) it->second.slo = poly_sign_at(t.constant->poly, t.constant->lo);
        }
    }

    void step() {
        for (auto& [_, e] : entries_) bisect_once(e.constant->poly, e.lo, e.hi, e.slo);
    }

    std::pair<Rational, Rational> enclose(const Scalar& s) const {
        Rational lo = s.rational_part(), hi = s.rational_part();
        for (const auto& [label, t] : s.terms()) {
            const Entry& e = entries_.at(label);
            if (sgn(t.coeff) >= 0) {
                lo += t.coeff * e.lo;
                hi += t.coeff * e.hi;
            } else {
                lo += t.coeff * e.hi;
                hi += t.coeff * e.lo;
            }
        }
        return {lo, hi};
    }

private:
    struct Entry {
        ConstantPtr constant;
        Rational lo, hi;
        int slo;
    };
    std::map<std::string, Entry> entries_;
};

const Rational& dependence_guard_threshold() {
    static const Rational g = [] {
        Integer d;
        mpz_ui_pow_ui(d.get_mpz_t(), 10, 30);
        return Rational(1, d);
    }();
    return g;
}

[[noreturn]] void fire_guard() {
    throw config_error(
        "refinement guard: enclosure pinned to zero after 100 rounds; "
        "declared constants are likely rationally dependent");
}

} // namespace

int scalar_sign(const Scalar& s) {
    if (s.is_rational()) return sgn(s.rational_part());
    RefinementState state;
    state.track(s);
    const Rational& g = dependence_guard_threshold();
    for (int round = 0;; ++round) {
        auto [lo, hi] = state.enclose(s);
        if (sgn(lo) > 0) return 1;
        if (sgn(hi) < 0) return -1;
        if (round >= 100 && lo >= -g && hi <= g) fire_guard();
        state.step();
    }
}

int scalar_compare(const Scalar& a, const Scalar& b) {
    if (a == b) return 0;
    return scalar_sign(a - b);
}

std::pair<Rational, Rational> scalar_enclosure(const Scalar& s) {
    if (s.is_rational()) return {s.rational_part(), s.rational_part()};
    RefinementState state;
    state.track(s);
    for (int round = 0; round < 16; ++round) state.step();
    return state.enclose(s);
}

Integer scalar_floor(const Scalar& s) {
    if (s.is_rational()) return floor_int(s.rational_part());
    RefinementState state;
    state.track(s);
    for (int round = 0;; ++round) {
        auto [lo, hi] = state.enclose(s);
        Integer fl = floor_int(lo), fh = floor_int(hi);
        if (fl == fh) return fl;  // value is strictly interior, so its floor is fl
        if (round >= 200) fire_guard();
        state.step();
    }
}

Integer scalar_ceil(const Scalar& s) {
    if (s.is_rational()) return ceil_int(s.rational_part());
    return scalar_floor(s) + 1;  // irrational values are never integers
}

Rational rational_strictly_between(const Scalar& a, const Scalar& b) {
    if (scalar_compare(a, b) != -1)
        throw domain_error("interpolation requires a strictly increasing pair");
    if (a.is_rational() && b.is_rational())
        return simplest_rational_between(a.rational_part(), true, b.rational_part(), true);

    RefinementState state;
    state.track(a);
    state.track(b);
    for (int round = 0;; ++round) {
        auto [alo, ahi] = state.enclose(a);
        auto [blo, bhi] = state.enclose(b);
        (void)alo;
        (void)bhi;
        Rational lo = a.is_rational() ? a.rational_part() : ahi;
        bool open_lo = a.is_rational();
        Rational hi = b.is_rational() ? b.rational_part() : blo;
        bool open_hi = b.is_rational();
        bool nonempty = lo < hi || (lo == hi && !open_lo && !open_hi);
        if (nonempty) return simplest_rational_between(lo, open_lo, hi, open_hi);
        if (round >= 300) fire_guard();
        state.step();
    }
}

std::string scalar_to_string(const Scalar& s) {
    std::ostringstream out;
    bool first = true;
    if (s.rational_part() != 0 || s.terms().empty()) {
        out << rational_to_string(s.rational_part());
        first = false;
    }
    for (const auto& [label, t] : s.terms()) {
        bool neg = sgn(t.coeff) < 0;
        Rational mag = neg ? Rational(-t.coeff) : t.coeff;
        std::string body = (mag == 1) ? label : rational_to_string(mag) + "*" + label;
        if (first) {
            out << (neg ? "-" : "") << body;
            first = false;
        } else {
            out << (neg ? " - " : " + ") << body;
        }
    }
    return out.str();
}

} // namespace smallext
