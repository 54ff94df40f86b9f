#include "smallext/valuation.hpp"

#include "smallext/classify.hpp"
#include "smallext/errors.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <utility>

namespace smallext {

namespace {

/* ---- dense univariate arithmetic over Q (ascending coefficients) ---- */

using TPoly = std::vector<Rational>;

void trim(TPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

TPoly add_t(const TPoly& a, const TPoly& b) {
    TPoly out(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    trim(out);
    return out;
}

TPoly neg_t(TPoly a) {
    for (Rational& c : a) c = -c;
    return a;
}

TPoly mul_t(const TPoly& a, const TPoly& b) {
    if (a.empty() || b.empty()) return {};
    TPoly out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// a = q * b + r with deg r < deg b; b must be nonzero.
std::pair<TPoly, TPoly> divmod_t(TPoly a, const TPoly& b) {
    TPoly q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rational(0));
    while (a.size() >= b.size()) {
        Rational c = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        trim(a);
    }
    trim(q);
    return {std::move(q), std::move(a)};
}

TPoly monic_t(TPoly p) {
    if (p.empty()) return p;
    Rational lead = p.back();
    for (Rational& c : p) c /= lead;
    return p;
}

TPoly gcd_t(TPoly a, TPoly b) {
    while (!b.empty()) {
        TPoly r = divmod_t(std::move(a), b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic_t(std::move(a));
}

std::string tpoly_to_string(const TPoly& p, const char* var) {
    if (p.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = p.size(); i-- > 0;) {
        if (p[i] == 0) continue;
        Rational c = p[i];
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? "-" : "+");
            if (c < 0) c = -c;
        }
        first = false;
        if (i == 0) {
            os << c.get_str();
        } else {
            if (c != 1) os << c.get_str() << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

/* ---- p-adic helpers on rationals ---- */

Rational p_power(long p, long e) {
    mpz_class z;
    mpz_ui_pow_ui(z.get_mpz_t(), static_cast<unsigned long>(p),
                  static_cast<unsigned long>(e < 0 ? -e : e));
    Rational r(z);
    return e < 0 ? Rational(1) / r : r;
}

} // namespace

/* ---- field elements ---- */

FieldElem::FieldElem() : den_{Rational(1)} {}

FieldElem::FieldElem(Rational r) : den_{Rational(1)} {
    if (r != 0) num_.push_back(std::move(r));
}

FieldElem::FieldElem(long n) : FieldElem(Rational(n)) {}

void FieldElem::reduce() {
    trim(num_);
    trim(den_);
    if (den_.empty()) throw domain_error("division by the zero rational function");
    if (num_.empty()) {
        den_ = {Rational(1)};
        return;
    }
    TPoly g = gcd_t(num_, den_);
    if (g.size() > 1) {
        num_ = divmod_t(std::move(num_), g).first;
        den_ = divmod_t(std::move(den_), g).first;
    }
    Rational lead = den_.back();
    if (lead != 1) {
        for (Rational& c : num_) c /= lead;
        for (Rational& c : den_) c /= lead;
    }
}

FieldElem FieldElem::t_fraction(std::vector<Rational> num, std::vector<Rational> den) {
    FieldElem x;
    x.num_ = std::move(num);
    x.den_ = std::move(den);
    x.reduce();
    return x;
}

FieldElem FieldElem::t_polynomial(std::vector<Rational> num) {
    return t_fraction(std::move(num), {Rational(1)});
}

bool FieldElem::is_zero() const { return num_.empty(); }

bool FieldElem::is_rational() const { return num_.size() <= 1 && den_.size() == 1; }

Rational FieldElem::as_rational() const {
    if (!is_rational())
        throw domain_error("the element is not a constant rational number");
    return num_.empty() ? Rational(0) : num_[0];
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
    return t_fraction(add_t(mul_t(num_, o.den_), mul_t(o.num_, den_)), mul_t(den_, o.den_));
}

FieldElem FieldElem::operator-(const FieldElem& o) const { return *this + (-o); }

FieldElem FieldElem::operator*(const FieldElem& o) const {
    return t_fraction(mul_t(num_, o.num_), mul_t(den_, o.den_));
}

FieldElem FieldElem::operator/(const FieldElem& o) const {
    if (o.is_zero()) throw domain_error("division by zero");
    return t_fraction(mul_t(num_, o.den_), mul_t(den_, o.num_));
}

FieldElem FieldElem::operator-() const {
    FieldElem x = *this;
    x.num_ = neg_t(std::move(x.num_));
    return x;
}

bool FieldElem::operator==(const FieldElem& o) const {
    return num_ == o.num_ && den_ == o.den_;
}

std::string field_elem_to_string(const FieldElem& x) {
    if (x.is_zero()) return "0";
    std::string n = tpoly_to_string(x.num(), "t");
    if (x.den().size() == 1) return n;
    return "(" + n + ")/(" + tpoly_to_string(x.den(), "t") + ")";
}

/* ---- valued fields ---- */

ValuedField::ValuedField(FieldKind kind, long prime)
    : kind_(kind), prime_(prime),
      structure_(fin_structure(kind == FieldKind::PAdicQ ? 1 : 2)) {}

namespace {
void require_prime(long p) {
    if (p < 2 || mpz_probab_prime_p(mpz_class(p).get_mpz_t(), 40) == 0)
        throw config_error("the residue base must be a prime number");
}
} // namespace

ValuedField ValuedField::padic(long p) {
    require_prime(p);
    return ValuedField(FieldKind::PAdicQ, p);
}

ValuedField ValuedField::lex_composite(long p) {
    require_prime(p);
    return ValuedField(FieldKind::LexCompositeQt, p);
}

int ValuedField::value_rank() const { return kind_ == FieldKind::PAdicQ ? 1 : 2; }

long padic_order(const Rational& x, long p) {
    if (p < 2) throw domain_error("the base must be at least two");
    if (x == 0) throw domain_error("zero has no finite order");
    mpz_class base(p), junk;
    mpz_class num(x.get_num()), den(x.get_den());
    long vn = static_cast<long>(mpz_remove(junk.get_mpz_t(), num.get_mpz_t(), base.get_mpz_t()));
    long vd = static_cast<long>(mpz_remove(junk.get_mpz_t(), den.get_mpz_t(), base.get_mpz_t()));
    return vn - vd;
}

std::optional<SlotVector> field_value(const ValuedField& K, const FieldElem& c) {
    if (c.is_zero()) return std::nullopt;
    SlotVectorBuilder b(K.value_structure());
    if (K.kind() == FieldKind::PAdicQ) {
        if (!c.is_rational())
            throw domain_error("the p-adic base field holds rational numbers only");
        b.set(Position{0, 0}, Scalar(Rational(padic_order(c.as_rational(), K.prime()))));
        return std::move(b).build();
    }
    auto lowest = [&](const std::vector<Rational>& poly) {
        std::size_t i = 0;
        while (poly[i] == 0) ++i;
        return std::pair<long, long>(static_cast<long>(i), padic_order(poly[i], K.prime()));
    };
    auto [tn, on] = lowest(c.num());
    auto [td, od] = lowest(c.den());
    b.set(Position{0, 0}, Scalar(Rational(tn - td)));
    b.set(Position{0, 1}, Scalar(Rational(on - od)));
    return std::move(b).build();
}

/* ---- polynomials over the field ---- */

Poly::Poly() = default;

Poly::Poly(std::vector<FieldElem> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

FieldElem Poly::coeff(long s) const {
    if (s < 0 || s >= static_cast<long>(coeffs_.size())) return FieldElem();
    return coeffs_[static_cast<std::size_t>(s)];
}

FieldElem Poly::leading() const {
    if (coeffs_.empty()) throw domain_error("the zero polynomial has no leading coefficient");
    return coeffs_.back();
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<FieldElem> out(std::max(coeffs_.size(), o.coeffs_.size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = coeff(static_cast<long>(i)) + o.coeff(static_cast<long>(i));
    return Poly(std::move(out));
}

Poly Poly::operator-(const Poly& o) const {
    std::vector<FieldElem> out(std::max(coeffs_.size(), o.coeffs_.size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = coeff(static_cast<long>(i)) - o.coeff(static_cast<long>(i));
    return Poly(std::move(out));
}

Poly Poly::operator*(const Poly& o) const {
    if (coeffs_.empty() || o.coeffs_.empty()) return Poly();
    std::vector<FieldElem> out(coeffs_.size() + o.coeffs_.size() - 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
            out[i + j] = out[i + j] + coeffs_[i] * o.coeffs_[j];
    return Poly(std::move(out));
}

FieldElem Poly::operator()(const FieldElem& x) const {
    FieldElem acc;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::string poly_to_string(const Poly& f) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (long s = f.degree(); s >= 0; --s) {
        FieldElem c = f.coeff(s);
        if (c.is_zero()) continue;
        std::string body;
        if (c.is_rational()) {
            Rational r = c.as_rational();
            bool negative = r < 0;
            if (negative) r = -r;
            os << (first ? (negative ? "-" : "") : (negative ? "-" : "+"));
            if (s == 0) {
                body = r.get_str();
            } else {
                if (r != 1) body = r.get_str() + "*";
            }
        } else {
            if (!first) os << "+";
            body = "(" + field_elem_to_string(c) + ")";
            if (s > 0) body += "*";
        }
        os << body;
        if (s == 1) os << "x";
        else if (s > 1) os << "x^" << s;
        first = false;
    }
    return os.str();
}

std::vector<FieldElem> taylor_expand(const Poly& f, const FieldElem& a) {
    std::vector<FieldElem> out;
    std::vector<FieldElem> w = f.coeffs();
    while (!w.empty()) {
        FieldElem carry;
        for (std::size_t i = w.size(); i-- > 0;) {
            carry = w[i] + a * carry;
            w[i] = carry;
        }
        out.push_back(w.front());
        w.erase(w.begin());
    }
    return out;
}

/* ---- depth-zero valuations ---- */

DepthZeroValuation make_depth_zero(const ValuedField& K, FieldElem center,
                                   std::optional<SlotVector> delta) {
    if (K.kind() == FieldKind::PAdicQ && !center.is_rational())
        throw domain_error("the center must lie in the base field");
    if (delta && !(*delta->structure() == *K.value_structure()))
        throw domain_error("the parameter must live over the field's value structure");
    return DepthZeroValuation{std::move(center), std::move(delta)};
}

ExtendedValue finite_value(long m, SlotVector g) {
    return ExtendedValue{false, m, std::move(g)};
}

ExtendedValue infinity_value(const StructurePtr& structure) {
    return ExtendedValue{true, 0, zero_vector(structure)};
}

SlotVector extended_embed(const ExtendedValue& x, const SlotVector& delta) {
    if (x.infinite) throw domain_error("the infinite value has no hull embedding");
    if (!(*x.g.structure() == *delta.structure()))
        throw domain_error("the offset and the parameter must share one index structure");
    Rational mr(x.m);
    std::map<Position, Scalar, PositionLess> acc(delta.coords().key_comp());
    for (const auto& [p, v] : delta.coords()) acc.emplace(p, v.scaled(mr));
    for (const auto& [p, v] : x.g.coords()) {
        auto it = acc.find(p);
        if (it == acc.end()) acc.emplace(p, v);
        else it->second = it->second + v;
    }
    SlotVectorBuilder b(delta.structure());
    for (const auto& [p, v] : acc) b.set(p, v);

    const auto& dm = delta.marker();
    const auto& gm = x.g.marker();
    if (dm && gm) {
        if (!(dm->seg == gm->seg))
            throw domain_error("threshold directions at different cuts cannot combine");
        b.set_marker(dm->seg, dm->value.scaled(mr) + gm->value);
    } else if (dm) {
        b.set_marker(dm->seg, dm->value.scaled(mr));
    } else if (gm) {
        b.set_marker(gm->seg, gm->value);
    }

    const auto& dt = delta.tail();
    const auto& gt = x.g.tail();
    if (dt && gt) {
        if (dt->block != gt->block)
            throw domain_error("eventual values on different blocks cannot combine");
        b.set_tail(dt->block, dt->value.scaled(mr) + gt->value);
    } else if (dt) {
        b.set_tail(dt->block, dt->value.scaled(mr));
    } else if (gt) {
        b.set_tail(gt->block, gt->value);
    }
    return std::move(b).build();
}

int extended_compare(const ExtendedValue& x, const ExtendedValue& y, const SlotVector& delta) {
    if (x.infinite && y.infinite) return 0;
    if (x.infinite) return 1;
    if (y.infinite) return -1;
    switch (compare(extended_embed(x, delta), extended_embed(y, delta))) {
        case Ordering::Less: return -1;
        case Ordering::Greater: return 1;
        default: return 0;
    }
}

ExtendedValue dz_eval(const ValuedField& K, const DepthZeroValuation& w, const Poly& f) {
    if (f.is_zero()) return infinity_value(K.value_structure());
    if (!w.delta) {
        std::optional<SlotVector> v = field_value(K, f(w.center));
        if (!v) return infinity_value(K.value_structure());
        return finite_value(0, *std::move(v));
    }
    std::vector<FieldElem> coeffs = taylor_expand(f, w.center);
    std::optional<ExtendedValue> best;
    for (std::size_t s = 0; s < coeffs.size(); ++s) {
        if (coeffs[s].is_zero()) continue;
        ExtendedValue cand = finite_value(static_cast<long>(s), *field_value(K, coeffs[s]));
        if (!best || extended_compare(cand, *best, *w.delta) < 0) best = std::move(cand);
    }
    return *best;
}

ExtendedValue omega_minus_infinity(const ValuedField& K, const Poly& f) {
    if (f.is_zero()) return infinity_value(K.value_structure());
    return finite_value(-f.degree(), *field_value(K, f.leading()));
}

ExtendedValue omega_inf_minus(const ValuedField& K, const FieldElem& a, const Poly& f) {
    if (f.is_zero()) return infinity_value(K.value_structure());
    std::vector<FieldElem> coeffs = taylor_expand(f, a);
    for (std::size_t s = 0; s < coeffs.size(); ++s) {
        if (!coeffs[s].is_zero())
            return finite_value(static_cast<long>(s), *field_value(K, coeffs[s]));
    }
    throw contract_error("a nonzero polynomial must have a nonzero expansion coefficient");
}

/* ---- equality and equivalence of depth-zero valuations ---- */

bool dz_equal(const ValuedField& K, const FieldElem& a, const SlotVector& delta,
              const FieldElem& b, const SlotVector& eps) {
    make_depth_zero(K, a, delta);
    make_depth_zero(K, b, eps);
    if (compare(delta, eps) != Ordering::Equal) return false;
    FieldElem d = b - a;
    if (d.is_zero()) return true;
    return compare(*field_value(K, d), delta) != Ordering::Less;
}

bool dz_equivalent(const ValuedField& K, const FieldElem& a, const SlotVector& delta,
                   const FieldElem& b, const SlotVector& eps) {
    make_depth_zero(K, a, delta);
    make_depth_zero(K, b, eps);
    if (!sme_equivalent(delta, eps)) return false;
    FieldElem d = b - a;
    if (d.is_zero()) return true;
    return compare(*field_value(K, d), classify(delta).canonical) != Ordering::Less;
}

/* ---- the value group of a depth-zero valuation ---- */

SmallnessReport value_group_check(const ValuedField& K, const DepthZeroValuation& w) {
    if (!w.delta)
        throw domain_error("the terminal parameter generates no value-group extension");
    const SlotVector& d = *w.delta;
    const int r = K.value_rank();
    int cut_col = -1;
    if (d.marker()) {
        const BlockCut& cut = d.marker()->seg.cuts.front();
        switch (cut.kind) {
            case BlockCut::Kind::None: cut_col = 0; break;
            case BlockCut::Kind::Finite: cut_col = static_cast<int>(cut.k); break;
            case BlockCut::Kind::All: cut_col = r; break;
            case BlockCut::Kind::Cofinite:
                throw domain_error("unexpected cut shape over a finite value structure");
        }
    }
    const int n = r + (cut_col >= 0 ? 1 : 0);
    auto col = [&](int i) {
        return static_cast<std::size_t>(cut_col >= 0 && i >= cut_col ? i + 1 : i);
    };
    std::vector<std::vector<Scalar>> sub;
    for (int i = 0; i < r; ++i) {
        std::vector<Scalar> row(static_cast<std::size_t>(n), Scalar(0));
        row[col(i)] = Scalar(1);
        sub.push_back(std::move(row));
    }
    std::vector<std::vector<Scalar>> ext = sub;
    std::vector<Scalar> drow(static_cast<std::size_t>(n), Scalar(0));
    for (int i = 0; i < r; ++i) drow[col(i)] = d.value_at(Position{0, i});
    if (cut_col >= 0) drow[static_cast<std::size_t>(cut_col)] = d.marker()->value;
    ext.push_back(std::move(drow));
    return is_small_extension(make_group(n, std::move(sub)), make_group(n, std::move(ext)));
}

/* ---- ball infimum scans ---- */

BallCheckReport ball_inf_check(const ValuedField& K, const FieldElem& a, const SlotVector& delta,
                               const Poly& f, int trials, unsigned seed) {
    if (K.kind() != FieldKind::PAdicQ)
        throw domain_error("ball scans run over the rational p-adic field");
    DepthZeroValuation w = make_depth_zero(K, a, delta);
    if (f.is_zero()) throw domain_error("ball scans need a nonzero polynomial");
    for (const FieldElem& c : f.coeffs())
        if (!c.is_rational())
            throw domain_error("ball scans need rational coefficients");

    const long p = K.prime();
    const Rational ra = a.as_rational();
    auto value_of = [&](const Rational& x) -> std::optional<Rational> {
        if (x == 0) return std::nullopt;
        return Rational(padic_order(x, p));
    };
    auto eval_at = [&](const Rational& x) {
        Rational acc(0);
        for (auto it = f.coeffs().rbegin(); it != f.coeffs().rend(); ++it)
            acc = acc * x + it->as_rational();
        return acc;
    };

    BallCheckReport rep;
    SmeElement cls = classify(delta);
    if (cls.stratum == Stratum::Commensurable) {
        rep.part = 1;
        if (p <= f.degree())
            throw domain_error("the residue base must exceed the polynomial degree");
        Rational dr = delta.value_at(Position{0, 0}).as_rational();
        if (dr.get_den() != 1)
            throw domain_error("sphere scans need an integer radius");
        long e = dr.get_num().get_si();
        ExtendedValue ev = dz_eval(K, w, f);
        Rational mu = Rational(ev.m) * dr + ev.g.value_at(Position{0, 0}).as_rational();
        rep.mu = mu;
        Rational u = p_power(p, e);
        for (long z = 1; z < p; ++z) {
            Rational b = ra + Rational(z) * u;
            std::optional<Rational> val = value_of(eval_at(b));
            if (val && *val == mu) {
                rep.witness = FieldElem(b);
                rep.witness_value = *val;
                break;
            }
        }
        std::mt19937 rng(seed);
        mpz_class cube = mpz_class(p) * p * p;
        std::uniform_int_distribution<unsigned long> pick(0, cube.get_ui() - 1);
        rep.all_at_least = true;
        for (int i = 0; i < trials; ++i) {
            Rational b = ra + Rational(static_cast<long>(pick(rng))) * u;
            std::optional<Rational> val = value_of(eval_at(b));
            ++rep.sampled;
            if (val && *val < mu) rep.all_at_least = false;
        }
        return rep;
    }
    if (cls.stratum != Stratum::EqRkIrrat)
        throw domain_error("ball scans cover integer and irrational radii only");

    rep.part = 2;
    std::vector<FieldElem> coeffs = taylor_expand(f, FieldElem(ra));
    ExtendedValue ev = dz_eval(K, w, f);
    const long s0 = ev.m;
    rep.s0 = s0;
    Rational vs0 = ev.g.value_at(Position{0, 0}).as_rational();
    std::optional<Rational> eps;
    for (long s = 0; s < s0; ++s) {
        const FieldElem& c = coeffs[static_cast<std::size_t>(s)];
        if (c.is_zero()) continue;
        Rational vs(padic_order(c.as_rational(), p));
        Rational slope = (vs - vs0) / Rational(s0 - s);
        if (!eps || slope < *eps) eps = slope;
    }
    rep.epsilon = eps;
    long rho = scalar_ceil(delta.value_at(Position{0, 0})).get_si();
    const int probe_cap = 8;  // keeps wide admissible windows from exploding
    bool all_ok = true;
    for (int count = 0; count < (eps ? probe_cap : 3); ++count, ++rho) {
        if (eps && !(Rational(rho) < *eps)) break;
        BallProbe probe;
        probe.rho = rho;
        probe.expected = vs0 + Rational(s0) * Rational(rho);
        probe.got = value_of(eval_at(ra + p_power(p, rho)));
        probe.ok = probe.got.has_value() && *probe.got == probe.expected;
        if (!probe.ok) all_ok = false;
        rep.probes.push_back(std::move(probe));
    }
    if (rep.probes.empty()) rep.skipped = true;
    else rep.all_exact = all_ok;
    return rep;
}

} // namespace smallext
