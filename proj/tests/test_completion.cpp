#include "doctest.h"

#include "smallext/completion.hpp"
#include "smallext/errors.hpp"

#include "helpers.hpp"

#include <functional>
#include <random>

using namespace smallext;
using namespace smallext::testing;

namespace {

Scalar sc(long n) { return Scalar(Rational(n)); }
Scalar sc(long n, long d) { return Scalar(frac(n, d)); }

SlotVector unit_at(const StructurePtr& s, const Position& p) {
    SlotVectorBuilder b(s);
    b.set(p, sc(1));
    return std::move(b).build();
}

InitialSegment omega_cut(const StructurePtr& s, long k) {
    return make_segment(*s, {BlockCut{BlockCut::Kind::Finite, k}});
}

InitialSegment opp_cut(const StructurePtr& s, long k) {
    return make_segment(*s, {BlockCut{BlockCut::Kind::Cofinite, k}});
}

/* Increasing chain of unit vectors at ever-earlier offsets of a single
 * reversed block: u_0 < u_1 < u_2 < ...  No restriction to a nonempty
 * initial segment has a greatest value, so only the empty segment answers. */
class AscendingUnits : public CutProvider {
public:
    explicit AscendingUnits(StructurePtr s, bool descending = false)
        : str_(std::move(s)), descending_(descending) {}

    StructurePtr structure() const override { return str_; }

    std::optional<SlotVector> global_max() const override {
        if (!descending_) return std::nullopt;
        return negate(unit_at(str_, Position{0, 0}));
    }

    std::optional<SlotVector> max_at(const InitialSegment& seg) const override {
        if (descending_) return restrict_to(*global_max(), seg, false);
        if (segment_is_empty(seg)) return zero_vector(str_);
        return std::nullopt;
    }

    RayAnswer ray_at(const Position&, const SlotVector&) const override {
        throw contract_error("ray queried away from the frontier");
    }

    Frontier frontier() const override {
        if (descending_) return Frontier{full_segment(*str_), true, std::nullopt};
        return Frontier{empty_segment(*str_), true, std::nullopt};
    }

    ProviderPtr negated() const override {
        return std::make_shared<AscendingUnits>(str_, !descending_);
    }

    std::string describe() const override { return "chain of units"; }

private:
    StructurePtr str_;
    bool descending_;
};

/* Fully scriptable provider for exercising the dispatcher's consistency
 * checks. */
class Rigged : public CutProvider {
public:
    StructurePtr str;
    std::optional<SlotVector> global;
    std::function<std::optional<SlotVector>(const InitialSegment&)> maxfn;
    Frontier front;
    RayAnswer ray;
    bool with_negation = false;

    explicit Rigged(StructurePtr s)
        : str(std::move(s)), front{empty_segment(*str), true, std::nullopt} {
        maxfn = [this](const InitialSegment& seg) -> std::optional<SlotVector> {
            if (segment_is_empty(seg)) return zero_vector(str);
            return std::nullopt;
        };
        ray = ray_unbounded();
    }

    StructurePtr structure() const override { return str; }
    std::optional<SlotVector> global_max() const override { return global; }
    std::optional<SlotVector> max_at(const InitialSegment& seg) const override {
        return maxfn(seg);
    }
    RayAnswer ray_at(const Position&, const SlotVector&) const override { return ray; }
    Frontier frontier() const override { return front; }
    ProviderPtr negated() const override {
        if (!with_negation) return nullptr;
        return std::make_shared<Rigged>(*this);
    }
    std::string describe() const override { return "rigged"; }
};

} // namespace

TEST_CASE("finite sets answer every projection and hand over their maximum") {
    std::vector<SlotVector> pts = {vec(q2(), {sc(0), sc(1)}), vec(q2(), {sc(0), sc(2)}),
                                   vec(q2(), {sc(1), sc(0)})};
    ProviderPtr p = make_finite_set(pts);

    SupremumResult r = supremum(*p);
    CHECK(r.fired == CompletionCase::GlobalMax);
    CHECK(r.value.stratum == Stratum::Commensurable);
    CHECK(r.value.canonical == vec(q2(), {sc(1), sc(0)}));

    // projections agree with the per-segment maxima
    CHECK(*p->max_at(empty_segment(*q2())) == zero_vector(q2()));
    CHECK(*p->max_at(fin_segment(*q2(), 1)) == vec(q2(), {sc(1), sc(0)}));
    CHECK(*p->max_at(full_segment(*q2())) == vec(q2(), {sc(1), sc(0)}));

    // the greatest second coordinate among members with first coordinate 0
    RayAnswer ray = p->ray_at(Position{0, 1}, vec(q2(), {sc(0)}));
    CHECK_FALSE(ray.unbounded);
    CHECK(scalar_compare(*ray.bound, sc(2)) == 0);
    CHECK(ray.attained);
    CHECK_THROWS_AS(p->ray_at(Position{0, 1}, vec(q2(), {sc(7)})), contract_error);

    CHECK_FALSE(p->describe().empty());

    SUBCASE("construction validates its members") {
        CHECK_THROWS_AS(make_finite_set({}), domain_error);
        CHECK_THROWS_AS(make_finite_set({vec(q2(), {rt2(1), sc(0)})}), domain_error);
        CHECK_THROWS_AS(make_finite_set({vecm(q2(), {sc(1)}, 2, sc(1))}), domain_error);
        CHECK_THROWS_AS(make_finite_set({vec(q2(), {sc(1), sc(0)}), vec(q3(), {sc(1)})}),
                        domain_error);
    }
}

TEST_CASE("finite set infimum is the least member") {
    ProviderPtr p = make_finite_set({vec(q2(), {sc(0), sc(1)}), vec(q2(), {sc(1), sc(0)})});
    SupremumResult r = infimum(*p);
    CHECK(r.fired == CompletionCase::GlobalMax);
    CHECK(r.value.stratum == Stratum::Commensurable);
    CHECK(r.value.canonical == vec(q2(), {sc(0), sc(1)}));
}

TEST_CASE("an unbounded coordinate produces the gap just past its segment") {
    // members (0, t): second coordinate unbounded above
    ProviderPtr p = make_coordinate_ray(zero_vector(q2()), Position{0, 1}, ray_unbounded());

    SupremumResult r = supremum(*p);
    CHECK(r.fired == CompletionCase::UnboundedCoordinate);
    CHECK(r.value.stratum == Stratum::IncRk);
    CHECK(r.value.segment == fin_segment(*q2(), 1));
    SlotVectorBuilder expect(q2());
    expect.set_marker(fin_segment(*q2(), 1), sc(1));
    CHECK(r.value.canonical == std::move(expect).build());

    SUBCASE("construction validates prefix and bound") {
        CHECK_THROWS_AS(
            make_coordinate_ray(vec(q2(), {sc(0), sc(3)}), Position{0, 1}, ray_unbounded()),
            domain_error);
        CHECK_THROWS_AS(
            make_coordinate_ray(vec(q2(), {rt2(1)}), Position{0, 1}, ray_unbounded()),
            domain_error);
        CHECK_THROWS_AS(
            make_coordinate_ray(zero_vector(q2()), Position{0, 1}, RayAnswer{false, {}, false}),
            domain_error);
        CHECK_THROWS_AS(
            make_coordinate_ray(zero_vector(q2()), Position{0, 1}, ray_bounded(rt2(1), true)),
            domain_error);
    }
}

TEST_CASE("an attained coordinate bound folds into a greatest member") {
    // members (0, t) with t <= 0
    ProviderPtr p = make_coordinate_ray(zero_vector(q2()), Position{0, 1},
                                        ray_bounded(sc(0), true));

    SupremumResult s = supremum(*p);
    CHECK(s.fired == CompletionCase::GlobalMax);
    CHECK(s.value.canonical == zero_vector(q2()));

    // downward the members are unbounded
    SupremumResult i = infimum(*p);
    CHECK(i.fired == CompletionCase::UnboundedCoordinate);
    CHECK(i.value.stratum == Stratum::IncRk);
    SlotVectorBuilder expect(q2());
    expect.set_marker(fin_segment(*q2(), 1), sc(-1));
    CHECK(i.value.canonical == std::move(expect).build());
}

TEST_CASE("the rationals below an irrational vector reach it exactly") {
    SlotVector beta = vec(q2(), {rt2(1), sc(0)});
    ProviderPtr p = make_lower_cut(beta);

    CHECK(*p->max_at(empty_segment(*q2())) == zero_vector(q2()));
    CHECK_FALSE(p->max_at(fin_segment(*q2(), 1)).has_value());
    CHECK_FALSE(p->max_at(full_segment(*q2())).has_value());

    SupremumResult r = supremum(*p);
    CHECK(r.fired == CompletionCase::IrrationalBound);
    CHECK(r.value.stratum == Stratum::EqRkIrrat);
    CHECK(r.value.canonical == vec(q2(), {rt2(1)}));
    CHECK(r.value.segment == fin_segment(*q2(), 1));
}

TEST_CASE("the rationals above an irrational vector reach down to it") {
    ProviderPtr p = make_upper_cut(vec(q2(), {rt2(1), sc(0)}));
    SupremumResult r = infimum(*p);
    CHECK(r.fired == CompletionCase::IrrationalBound);
    CHECK(r.value.stratum == Stratum::EqRkIrrat);
    CHECK(r.value.canonical == vec(q2(), {rt2(1)}));
}

TEST_CASE("cuts below rational vectors end just under them") {
    SUBCASE("finite structure: the last coordinate approaches its bound") {
        SlotVector x = vec(q2(), {sc(3, 2), sc(0)});
        SupremumResult r = supremum(*make_lower_cut(x));
        CHECK(r.fired == CompletionCase::RationalBound);
        CHECK(r.value.stratum == Stratum::IncRk);
        CHECK(r.value.canonical == predecessor_successor(x).first);
    }
    SUBCASE("ascending structure: the truncations approach the vector") {
        SlotVectorBuilder xb(omega1());
        xb.set(Position{0, 0}, sc(3, 2));
        SlotVector x = std::move(xb).build();
        SupremumResult r = supremum(*make_lower_cut(x));
        CHECK(r.fired == CompletionCase::LimitAssembly);
        CHECK(r.value.stratum == Stratum::IncRk);
        CHECK(r.value.canonical == predecessor_successor(x).first);
    }
    SUBCASE("a cut whose bound sits just above a vector is reached at it") {
        SlotVector x = vec(q2(), {sc(2), sc(5)});
        SupremumResult r = supremum(*make_lower_cut(predecessor_successor(x).second));
        CHECK(r.fired == CompletionCase::GlobalMax);
        CHECK(r.value.stratum == Stratum::Commensurable);
        CHECK(r.value.canonical == x);
    }
    SUBCASE("a cut whose bound sits just below a vector reproduces the bound") {
        SlotVectorBuilder xb(omega1());
        xb.set(Position{0, 2}, sc(4));
        SlotVector x = std::move(xb).build();
        SlotVector below = predecessor_successor(x).first;
        SupremumResult r = supremum(*make_lower_cut(below));
        CHECK(r.fired == CompletionCase::LimitAssembly);
        CHECK(r.value.canonical == below);
    }
}

TEST_CASE("cuts below an infinite-support vector approach it as a limit") {
    SlotVectorBuilder bb(omega1());
    bb.set(Position{0, 0}, sc(2));
    bb.set_tail(0, sc(1));
    SlotVector beta = std::move(bb).build();  // (2, 1, 1, 1, ...)
    ProviderPtr p = make_lower_cut(beta);

    SlotVectorBuilder m3(omega1());
    m3.set(Position{0, 0}, sc(2));
    m3.set(Position{0, 1}, sc(1));
    m3.set(Position{0, 2}, sc(1));
    CHECK(*p->max_at(omega_cut(omega1(), 3)) == std::move(m3).build());
    CHECK_FALSE(p->max_at(full_segment(*omega1())).has_value());

    SupremumResult r = supremum(*p);
    CHECK(r.fired == CompletionCase::LimitAssembly);
    CHECK(r.value.stratum == Stratum::EqRkRat);
    CHECK(r.value.canonical == beta);
}

TEST_CASE("upper cuts are unbounded above") {
    SUBCASE("finite structure: the first coordinate already runs away") {
        SupremumResult r = supremum(*make_upper_cut(vec(q2(), {sc(5), sc(7)})));
        CHECK(r.fired == CompletionCase::UnboundedCoordinate);
        CHECK(r.value.stratum == Stratum::InfinityMinus);
    }
    SUBCASE("reversed structure: no position is first") {
        SlotVectorBuilder bb(opp1());
        bb.set(Position{0, 0}, sc(5));
        SupremumResult r = supremum(*make_upper_cut(std::move(bb).build()));
        CHECK(r.fired == CompletionCase::GapWithoutLeast);
        CHECK(r.value.stratum == Stratum::InfinityMinus);
    }
    SUBCASE("empty cuts are rejected") {
        SlotVectorBuilder top(q2());
        top.set_marker(empty_segment(*q2()), sc(1));
        CHECK_THROWS_AS(make_upper_cut(std::move(top).build()), domain_error);
        SlotVectorBuilder bot(q2());
        bot.set_marker(empty_segment(*q2()), sc(-1));
        CHECK_THROWS_AS(make_lower_cut(std::move(bot).build()), domain_error);
    }
    SUBCASE("the whole group, cut at either end marker") {
        SlotVectorBuilder top(q2());
        top.set_marker(empty_segment(*q2()), sc(1));
        SupremumResult r = supremum(*make_lower_cut(std::move(top).build()));
        CHECK(r.value.stratum == Stratum::InfinityMinus);
        SlotVectorBuilder bot(q2());
        bot.set_marker(empty_segment(*q2()), sc(-1));
        SupremumResult s = supremum(*make_upper_cut(std::move(bot).build()));
        CHECK(s.value.stratum == Stratum::InfinityMinus);
    }
}

TEST_CASE("a prefix chain approaches its written limit") {
    SlotVectorBuilder lb(omega1());
    lb.set_tail(0, sc(1));
    SlotVector ones = std::move(lb).build();  // (1, 1, 1, ...)
    ProviderPtr p = make_prefix_chain(ones);

    SupremumResult r = supremum(*p);
    CHECK(r.fired == CompletionCase::LimitAssembly);
    CHECK(r.value.stratum == Stratum::EqRkRat);
    CHECK(r.value.canonical == ones);
    CHECK(r.value.segment == full_segment(*omega1()));

    // the least member is the one-step truncation
    SupremumResult i = infimum(*p);
    CHECK(i.fired == CompletionCase::GlobalMax);
    CHECK(i.value.canonical == unit_at(omega1(), Position{0, 0}));

    SUBCASE("a finitely supported limit is reached by its own chain") {
        SlotVectorBuilder fb(omega1());
        fb.set(Position{0, 0}, sc(3));
        fb.set(Position{0, 1}, sc(1, 2));
        SlotVector lam = std::move(fb).build();
        SupremumResult s = supremum(*make_prefix_chain(lam));
        CHECK(s.fired == CompletionCase::GlobalMax);
        CHECK(s.value.canonical == lam);
    }
    SUBCASE("construction validates the limit") {
        SlotVectorBuilder neg(omega1());
        neg.set(Position{0, 1}, sc(-1));
        CHECK_THROWS_AS(make_prefix_chain(std::move(neg).build()), domain_error);
        SlotVectorBuilder irr(omega1());
        irr.set(Position{0, 0}, rt2(1));
        CHECK_THROWS_AS(make_prefix_chain(std::move(irr).build()), domain_error);
        CHECK_THROWS_AS(make_prefix_chain(vec(q2(), {sc(1), sc(1)})), domain_error);
        SlotVectorBuilder mk(omega1());
        mk.set(Position{0, 0}, sc(1));
        mk.set_marker(full_segment(*omega1()), sc(1));
        CHECK_THROWS_AS(make_prefix_chain(std::move(mk).build()), domain_error);
    }
}

TEST_CASE("a chain crawling backwards through a reversed block tops out") {
    AscendingUnits chain(opp1());
    SupremumResult r = supremum(chain);
    CHECK(r.fired == CompletionCase::GapWithoutLeast);
    CHECK(r.value.stratum == Stratum::InfinityMinus);
    SlotVectorBuilder expect(opp1());
    expect.set_marker(empty_segment(*opp1()), sc(1));
    CHECK(r.value.canonical == std::move(expect).build());

    SupremumResult i = infimum(chain);
    CHECK(i.fired == CompletionCase::GlobalMax);
    CHECK(i.value.canonical == unit_at(opp1(), Position{0, 0}));
}

TEST_CASE("providers restrict coherently along nested segments") {
    struct Sample {
        ProviderPtr p;
        std::vector<InitialSegment> segments;
    };
    std::vector<Sample> samples;

    std::vector<InitialSegment> fin2 = {empty_segment(*q2()), fin_segment(*q2(), 1),
                                        full_segment(*q2())};
    std::vector<InitialSegment> asc = {empty_segment(*omega1()), omega_cut(omega1(), 1),
                                       omega_cut(omega1(), 2), omega_cut(omega1(), 5),
                                       full_segment(*omega1())};
    std::vector<InitialSegment> rev = {empty_segment(*opp1()), opp_cut(opp1(), 3),
                                       opp_cut(opp1(), 1), full_segment(*opp1())};

    samples.push_back({make_finite_set({vec(q2(), {sc(2), sc(-1)}), vec(q2(), {sc(2), sc(3)}),
                                        vec(q2(), {sc(-1), sc(9)})}),
                       fin2});
    samples.push_back({make_lower_cut(vec(q2(), {sc(1, 3), sc(4)})), fin2});
    samples.push_back({make_lower_cut(vec(q2(), {rt2(1), sc(0)})), fin2});
    samples.push_back({make_lower_cut(vecm(q2(), {sc(1)}, 1, sc(1))), fin2});
    samples.push_back({make_lower_cut(vecm(q2(), {sc(1)}, 1, sc(-1))), fin2});
    samples.push_back({make_upper_cut(vec(q2(), {sc(1), sc(1)})), fin2});
    samples.push_back({make_coordinate_ray(vec(q2(), {sc(7)}), Position{0, 1}, ray_unbounded()),
                       fin2});
    samples.push_back({make_coordinate_ray(vec(q2(), {sc(7)}), Position{0, 1},
                                           ray_bounded(sc(1, 2), false)),
                       fin2});
    {
        SlotVectorBuilder lb(omega1());
        lb.set(Position{0, 1}, sc(2));
        lb.set_tail(0, sc(3));
        samples.push_back({make_prefix_chain(std::move(lb).build()), asc});
    }
    {
        SlotVectorBuilder bb(omega1());
        bb.set(Position{0, 0}, sc(1));
        samples.push_back({make_lower_cut(std::move(bb).build()), asc});
    }
    samples.push_back({std::make_shared<AscendingUnits>(opp1()), rev});
    samples.push_back({std::make_shared<AscendingUnits>(opp1(), true), rev});

    for (const auto& [p, segments] : samples) {
        INFO(p->describe());
        const IndexStructure& str = *p->structure();
        Frontier f = p->frontier();
        CHECK(p->max_at(empty_segment(str)).has_value());
        CHECK(f.has_max == p->max_at(f.segment).has_value());
        for (const auto& big : segments) {
            auto mb = p->max_at(big);
            for (const auto& small : segments) {
                if (!segment_less(str, small, big)) continue;
                auto ms = p->max_at(small);
                if (mb) {
                    REQUIRE(ms.has_value());
                    CHECK(*ms == restrict_to(*mb, small, false));
                }
            }
            // answers appear exactly up to the frontier
            if (segment_less(str, f.segment, big)) CHECK_FALSE(mb.has_value());
            if (f.has_max && segment_leq(str, big, f.segment)) CHECK(mb.has_value());
        }
        if (auto g = p->global_max()) {
            auto mf = p->max_at(full_segment(str));
            REQUIRE(mf.has_value());
            CHECK(*mf == *g);
        }
    }
}

TEST_CASE("lower-cut suprema bound the cut tightly") {
    std::mt19937 rng(20240817u);
    auto rnd_rational = [&]() {
        long n = static_cast<long>(rng() % 21) - 10;
        long d = 1 + static_cast<long>(rng() % 4);
        return frac(n, d);
    };
    auto rnd_scalar = [&](bool allow_irrational) {
        if (allow_irrational && rng() % 4 == 0)
            return rt2(frac(static_cast<long>(1 + rng() % 3), 1));
        return Scalar(rnd_rational());
    };

    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        StructurePtr s = (trial % 2 == 0) ? q2() : q3();
        int n = (trial % 2 == 0) ? 2 : 3;

        int shape = static_cast<int>(rng() % 3);
        SlotVector beta = [&]() {
            if (shape == 2) {
                long cut = 1 + static_cast<long>(rng() % n);
                SlotVectorBuilder mb(s);
                for (long i = 0; i < cut; ++i) mb.set(Position{0, i}, Scalar(rnd_rational()));
                mb.set_marker(fin_segment(*s, cut), rng() % 2 ? sc(1) : sc(-1));
                return std::move(mb).build();
            }
            SlotVectorBuilder bb(s);
            for (int i = 0; i < n; ++i)
                bb.set(Position{0, i}, shape == 1 ? rnd_scalar(true) : Scalar(rnd_rational()));
            return std::move(bb).build();
        }();
        SlotVector canon = classify(beta).canonical;

        SupremumResult r = supremum(*make_lower_cut(beta));
        const SlotVector& sup = r.value.canonical;

        // the bound itself is never exceeded
        CHECK(compare(sup, canon) != Ordering::Greater);

        for (int probe = 0; probe < 20; ++probe) {
            SlotVectorBuilder qb(s);
            for (int i = 0; i < n; ++i) qb.set(Position{0, i}, Scalar(rnd_rational()));
            SlotVector q = std::move(qb).build();
            if (compare(q, canon) == Ordering::Less) {
                // members never exceed the supremum
                CHECK(compare(q, sup) != Ordering::Greater);
            }
            if (compare(q, sup) == Ordering::Less) {
                // nothing below the supremum stays above the whole cut
                auto w = rational_between(q, canon);
                REQUIRE(w.has_value());
                CHECK(compare(q, *w) == Ordering::Less);
                CHECK(compare(*w, canon) == Ordering::Less);
                ++checked;
            }
        }
    }
    CHECK(checked > 200);
}

TEST_CASE("suprema and infima swap under negation") {
    std::vector<ProviderPtr> ps = {
        make_finite_set({vec(q2(), {sc(1), sc(4)}), vec(q2(), {sc(2), sc(-3)})}),
        make_lower_cut(vec(q2(), {sc(1, 2), sc(5)})),
        make_lower_cut(vec(q2(), {rt2(1), sc(0)})),
        make_upper_cut(vec(q2(), {sc(2), sc(2)})),
        make_coordinate_ray(vec(q2(), {sc(3)}), Position{0, 1}, ray_unbounded()),
    };
    for (const auto& p : ps) {
        INFO(p->describe());
        SupremumResult direct = supremum(*p);
        SupremumResult mirrored = infimum(*p->negated());
        CHECK(mirrored.value == negate_element(direct.value));
        CHECK(mirrored.fired == direct.fired);
    }
}

TEST_CASE("the dispatcher rejects inconsistent providers") {
    SUBCASE("the empty segment must answer") {
        Rigged p(q2());
        p.maxfn = [](const InitialSegment&) { return std::nullopt; };
        CHECK_THROWS_AS(supremum(p), contract_error);
    }
    SUBCASE("the empty-segment answer is the zero restriction") {
        Rigged p(q2());
        p.maxfn = [&](const InitialSegment&) -> std::optional<SlotVector> {
            return vec(q2(), {sc(1), sc(0)});
        };
        CHECK_THROWS_AS(supremum(p), contract_error);
    }
    SUBCASE("a promised frontier maximum must exist") {
        Rigged p(q2());
        p.front = Frontier{fin_segment(*q2(), 1), true, std::nullopt};
        CHECK_THROWS_AS(supremum(p), contract_error);
    }
    SUBCASE("a full-segment maximum means a greatest member") {
        Rigged p(q2());
        p.maxfn = [&](const InitialSegment& seg) -> std::optional<SlotVector> {
            return restrict_to(vec(q2(), {sc(1), sc(2)}), seg, false);
        };
        p.front = Frontier{full_segment(*q2()), true, std::nullopt};
        CHECK_THROWS_AS(supremum(p), contract_error);
    }
    SUBCASE("frontier maxima must be base-group vectors") {
        Rigged p(q2());
        p.maxfn = [&](const InitialSegment& seg) -> std::optional<SlotVector> {
            return restrict_to(vec(q2(), {rt2(1), sc(0)}), seg, false);
        };
        p.front = Frontier{fin_segment(*q2(), 1), true, std::nullopt};
        CHECK_THROWS_AS(supremum(p), contract_error);
    }
    SUBCASE("frontier maxima live on their segment") {
        Rigged p(q2());
        p.maxfn = [&](const InitialSegment& seg) -> std::optional<SlotVector> {
            if (segment_is_empty(seg)) return zero_vector(q2());
            return vec(q2(), {sc(0), sc(5)});
        };
        p.front = Frontier{fin_segment(*q2(), 1), true, std::nullopt};
        CHECK_THROWS_AS(supremum(p), contract_error);
    }
    SUBCASE("an attained ray bound belongs in the maxima") {
        Rigged p(q2());
        p.ray = ray_bounded(sc(3), true);
        CHECK_THROWS_AS(supremum(p), contract_error);
    }
    SUBCASE("a bounded ray carries its bound") {
        Rigged p(q2());
        p.ray = RayAnswer{false, {}, false};
        CHECK_THROWS_AS(supremum(p), contract_error);
    }
    SUBCASE("a greatest member is a base-group vector agreeing with the projections") {
        Rigged p(q2());
        p.global = vec(q2(), {rt2(1), sc(0)});
        CHECK_THROWS_AS(supremum(p), contract_error);
        p.global = vec(q2(), {sc(1), sc(0)});  // max_at(full) still answers nothing
        CHECK_THROWS_AS(supremum(p), contract_error);
    }
    SUBCASE("an unattained frontier needs a limit vector") {
        Rigged p(omega1());
        p.front = Frontier{full_segment(*omega1()), false, std::nullopt};
        p.maxfn = [&](const InitialSegment& seg) -> std::optional<SlotVector> {
            if (segment_is_full(*omega1(), seg)) return std::nullopt;
            return zero_vector(omega1());
        };
        CHECK_THROWS_AS(supremum(p), contract_error);
    }
    SUBCASE("an unattained frontier must really have no maximum") {
        Rigged p(omega1());
        SlotVectorBuilder lb(omega1());
        lb.set_tail(0, sc(1));
        p.front = Frontier{full_segment(*omega1()), false, std::move(lb).build()};
        p.maxfn = [&](const InitialSegment& seg) -> std::optional<SlotVector> {
            SlotVectorBuilder lb2(omega1());
            lb2.set_tail(0, sc(1));
            return restrict_to(std::move(lb2).build(), seg, false);
        };
        CHECK_THROWS_AS(supremum(p), contract_error);
    }
    SUBCASE("the empty segment cannot be an unattained frontier") {
        Rigged p(q2());
        p.front = Frontier{empty_segment(*q2()), false, std::nullopt};
        CHECK_THROWS_AS(supremum(p), contract_error);
    }
    SUBCASE("limits are rational and unmarked") {
        Rigged p(omega1());
        p.maxfn = [&](const InitialSegment& seg) -> std::optional<SlotVector> {
            if (segment_is_full(*omega1(), seg)) return std::nullopt;
            return restrict_to(zero_vector(omega1()), seg, false);
        };
        SlotVectorBuilder irr(omega1());
        irr.set_tail(0, rt2(1));
        p.front = Frontier{full_segment(*omega1()), false, std::move(irr).build()};
        CHECK_THROWS_AS(supremum(p), contract_error);
        SlotVectorBuilder mk(omega1());
        mk.set_tail(0, sc(1));
        mk.set_marker(full_segment(*omega1()), sc(1));
        p.front = Frontier{full_segment(*omega1()), false, std::move(mk).build()};
        CHECK_THROWS_AS(supremum(p), contract_error);
    }
    SUBCASE("infimum needs a negation") {
        Rigged p(q2());
        CHECK_THROWS_AS(infimum(p), contract_error);
    }
}

TEST_CASE("assembly rule names are stable") {
    CHECK(completion_case_name(CompletionCase::GlobalMax) == "global-max");
    CHECK(completion_case_name(CompletionCase::LimitAssembly) == "limit-assembly");
    CHECK(completion_case_name(CompletionCase::GapWithoutLeast) == "gap-without-least");
    CHECK(completion_case_name(CompletionCase::UnboundedCoordinate) == "unbounded-coordinate");
    CHECK(completion_case_name(CompletionCase::IrrationalBound) == "irrational-bound");
    CHECK(completion_case_name(CompletionCase::RationalBound) == "rational-bound");
}
