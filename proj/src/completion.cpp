#include "smallext/completion.hpp"

#include "smallext/errors.hpp"

#include <utility>

namespace smallext {

RayAnswer ray_unbounded() { return RayAnswer{true, std::nullopt, false}; }

RayAnswer ray_bounded(Scalar bound, bool attained) {
    return RayAnswer{false, std::move(bound), attained};
}

namespace {

/* Greatest position of a nonempty initial segment, when one exists.  The
 * only segments without one end with a whole ascending block. */
std::optional<Position> last_position_in(const IndexStructure& str, const InitialSegment& seg) {
    for (int b = static_cast<int>(seg.cuts.size()) - 1; b >= 0; --b) {
        const BlockCut& c = seg.cuts[b];
        if (c.kind == BlockCut::Kind::None) continue;
        switch (str.blocks[b].kind) {
            case BlockKind::Fin:
                if (c.kind == BlockCut::Kind::All) return Position{b, str.blocks[b].size - 1};
                return Position{b, c.k - 1};
            case BlockKind::Omega:
                if (c.kind == BlockCut::Kind::All) return std::nullopt;
                return Position{b, c.k - 1};
            case BlockKind::OmegaOpp:
                if (c.kind == BlockCut::Kind::All) return Position{b, 0};
                return Position{b, c.k};
        }
    }
    return std::nullopt;  // empty segment
}

SlotVector copy_with_marker(const SlotVector& base, const InitialSegment& seg, int sign) {
    SlotVectorBuilder b(base.structure());
    for (const auto& [p, v] : base.coords()) b.set(p, v);
    if (base.tail()) b.set_tail(base.tail()->block, base.tail()->value);
    b.set_marker(seg, Scalar(Rational(sign)));
    return std::move(b).build();
}

SlotVector copy_with_coordinate(const SlotVector& base, const Position& pos, const Scalar& a) {
    SlotVectorBuilder b(base.structure());
    for (const auto& [p, v] : base.coords()) b.set(p, v);
    if (base.tail()) b.set_tail(base.tail()->block, base.tail()->value);
    b.set(pos, a);
    return std::move(b).build();
}

bool supported_on(const SlotVector& v, const InitialSegment& seg) {
    return restrict_to(v, seg, false) == v;
}

/* ------------------------------------------------------------------ */
/*  Explicitly listed members                                          */
/* ------------------------------------------------------------------ */

class FiniteSetProvider final : public CutProvider {
public:
    explicit FiniteSetProvider(std::vector<SlotVector> members)
        : members_(std::move(members)), best_(members_.front()) {
        for (const SlotVector& m : members_)
            if (compare(best_, m) == Ordering::Less) best_ = m;
    }

    StructurePtr structure() const override { return members_.front().structure(); }

    std::optional<SlotVector> global_max() const override { return best_; }

    std::optional<SlotVector> max_at(const InitialSegment& seg) const override {
        SlotVector best = restrict_to(members_.front(), seg, false);
        for (const SlotVector& m : members_) {
            SlotVector r = restrict_to(m, seg, false);
            if (compare(best, r) == Ordering::Less) best = r;
        }
        return best;
    }

    RayAnswer ray_at(const Position& pos, const SlotVector& prefix) const override {
        InitialSegment below = segment_below(*structure(), pos);
        std::optional<Scalar> best;
        for (const SlotVector& m : members_) {
            if (!(restrict_to(m, below, false) == prefix)) continue;
            Scalar v = m.value_at(pos);
            if (!best || scalar_compare(*best, v) < 0) best = v;
        }
        if (!best) throw contract_error("no member extends the given restriction");
        return ray_bounded(*best, true);
    }

    Frontier frontier() const override {
        return Frontier{full_segment(*structure()), true, std::nullopt};
    }

    ProviderPtr negated() const override {
        std::vector<SlotVector> neg;
        neg.reserve(members_.size());
        for (const SlotVector& m : members_) neg.push_back(negate(m));
        return std::make_shared<FiniteSetProvider>(std::move(neg));
    }

    std::string describe() const override {
        return "finite point set (" + std::to_string(members_.size()) + " elements)";
    }

private:
    std::vector<SlotVector> members_;
    SlotVector best_;
};

/* ------------------------------------------------------------------ */
/*  One-sided cuts                                                     */
/* ------------------------------------------------------------------ */

/* Base-group vectors strictly below a bound.  The bound is kept in its
 * canonical form, so the case analysis below goes by stratum. */
class LowerCutProvider final : public CutProvider {
public:
    explicit LowerCutProvider(SmeElement cls) : cls_(std::move(cls)) {
        if (cls_.stratum == Stratum::EqRkIrrat) {
            for (const auto& [p, v] : cls_.canonical.coords())
                if (!v.is_rational()) {
                    irr_ = p;
                    break;
                }
        }
        if (cls_.stratum == Stratum::IncRk)
            marker_sign_ = scalar_sign(cls_.canonical.marker()->value);
    }

    StructurePtr structure() const override { return cls_.canonical.structure(); }

    std::optional<SlotVector> global_max() const override {
        // only a cut just above some vector x (= {q : q <= x}) has a top
        if (cls_.stratum == Stratum::IncRk && marker_sign_ > 0 &&
            segment_is_full(*structure(), cls_.segment))
            return restrict_to(cls_.canonical, cls_.segment, false);
        return std::nullopt;
    }

    std::optional<SlotVector> max_at(const InitialSegment& seg) const override {
        const IndexStructure& str = *structure();
        const SlotVector& b = cls_.canonical;
        switch (cls_.stratum) {
            case Stratum::Commensurable:
                // below the bound, every proper restriction still reaches it
                if (segment_is_full(str, seg)) return std::nullopt;
                return restrict_to(b, seg, false);
            case Stratum::EqRkIrrat:
                if (segment_contains(str, seg, *irr_)) return std::nullopt;
                return restrict_to(b, seg, false);
            case Stratum::EqRkRat:
                // finitely supported members cannot top an infinite stretch
                if (seg.cuts[b.tail()->block].kind == BlockCut::Kind::All) return std::nullopt;
                return restrict_to(b, seg, false);
            case Stratum::IncRk:
                if (marker_sign_ > 0) {
                    if (segment_leq(str, seg, cls_.segment)) return restrict_to(b, seg, false);
                    return std::nullopt;
                }
                if (segment_less(str, seg, cls_.segment)) return restrict_to(b, seg, false);
                return std::nullopt;
            case Stratum::InfinityMinus:
                // the cut is the whole group: only the empty restriction tops out
                if (segment_is_empty(seg)) return zero_vector(structure());
                return std::nullopt;
            case Stratum::MinusInfinity: break;  // rejected at construction
        }
        throw contract_error("unreachable cut shape");
    }

    RayAnswer ray_at(const Position& pos, const SlotVector&) const override {
        const IndexStructure& str = *structure();
        const SlotVector& b = cls_.canonical;
        switch (cls_.stratum) {
            case Stratum::Commensurable:
                return ray_bounded(b.value_at(pos),
                                   !segment_is_full(str, segment_through(str, pos)));
            case Stratum::EqRkIrrat:
                if (pos == *irr_) return ray_bounded(b.value_at(pos), false);
                return ray_bounded(b.value_at(pos), position_less(str, pos, *irr_));
            case Stratum::EqRkRat:
                return ray_bounded(b.value_at(pos), pos.block <= b.tail()->block);
            case Stratum::IncRk: {
                if (marker_sign_ > 0) {
                    if (segment_contains(str, cls_.segment, pos))
                        return ray_bounded(b.value_at(pos), true);
                    return ray_unbounded();
                }
                bool at_edge = last_position_in(str, cls_.segment) == std::optional(pos);
                return ray_bounded(b.value_at(pos),
                                   segment_contains(str, cls_.segment, pos) && !at_edge);
            }
            case Stratum::InfinityMinus: return ray_unbounded();
            case Stratum::MinusInfinity: break;
        }
        throw contract_error("unreachable cut shape");
    }

    Frontier frontier() const override {
        const IndexStructure& str = *structure();
        const SlotVector& b = cls_.canonical;
        switch (cls_.stratum) {
            case Stratum::Commensurable: {
                if (auto l = last_position_in(str, full_segment(str)))
                    return Frontier{segment_below(str, *l), true, std::nullopt};
                return Frontier{full_segment(str), false, b};
            }
            case Stratum::EqRkIrrat:
                return Frontier{segment_below(str, *irr_), true, std::nullopt};
            case Stratum::EqRkRat: return Frontier{cls_.segment, false, b};
            case Stratum::IncRk: {
                if (marker_sign_ > 0) return Frontier{cls_.segment, true, std::nullopt};
                if (auto l = last_position_in(str, cls_.segment))
                    return Frontier{segment_below(str, *l), true, std::nullopt};
                return Frontier{cls_.segment, false, restrict_to(b, cls_.segment, false)};
            }
            case Stratum::InfinityMinus:
                return Frontier{empty_segment(str), true, std::nullopt};
            case Stratum::MinusInfinity: break;
        }
        throw contract_error("unreachable cut shape");
    }

    ProviderPtr negated() const override;

    std::string describe() const override {
        return "base-group vectors below " + slot_vector_to_string(cls_.canonical);
    }

private:
    SmeElement cls_;
    std::optional<Position> irr_;
    int marker_sign_ = 0;
};

/* Base-group vectors strictly above a bound.  Every nonempty restriction
 * window is unbounded above, so only the empty segment ever answers. */
class UpperCutProvider final : public CutProvider {
public:
    explicit UpperCutProvider(SmeElement cls) : cls_(std::move(cls)) {}

    StructurePtr structure() const override { return cls_.canonical.structure(); }

    std::optional<SlotVector> global_max() const override { return std::nullopt; }

    std::optional<SlotVector> max_at(const InitialSegment& seg) const override {
        if (segment_is_empty(seg)) return zero_vector(structure());
        return std::nullopt;
    }

    RayAnswer ray_at(const Position&, const SlotVector&) const override {
        return ray_unbounded();
    }

    Frontier frontier() const override {
        return Frontier{empty_segment(*structure()), true, std::nullopt};
    }

    ProviderPtr negated() const override { return make_lower_cut(negate(cls_.canonical)); }

    std::string describe() const override {
        return "base-group vectors above " + slot_vector_to_string(cls_.canonical);
    }

private:
    SmeElement cls_;
};

ProviderPtr LowerCutProvider::negated() const { return make_upper_cut(negate(cls_.canonical)); }

/* ------------------------------------------------------------------ */
/*  Truncation chains                                                  */
/* ------------------------------------------------------------------ */

/* The chain of truncations limit|_{first k}, k >= 1, of a nonnegative
 * rational vector over one ascending block; or, negated, the mirrored
 * descending chain, whose greatest member is the one-step truncation. */
class PrefixChainProvider final : public CutProvider {
public:
    PrefixChainProvider(SlotVector limit, bool descending)
        : limit_(std::move(limit)), descending_(descending) {}

    StructurePtr structure() const override { return limit_.structure(); }

    std::optional<SlotVector> global_max() const override {
        if (descending_) return negate(head());
        if (!limit_.tail()) return limit_;  // finite support: the chain reaches its limit
        return std::nullopt;
    }

    std::optional<SlotVector> max_at(const InitialSegment& seg) const override {
        if (auto g = global_max()) return restrict_to(*g, seg, false);
        if (seg.cuts[0].kind == BlockCut::Kind::All) return std::nullopt;
        return restrict_to(limit_, seg, false);
    }

    RayAnswer ray_at(const Position& pos, const SlotVector&) const override {
        if (auto g = global_max()) return ray_bounded(g->value_at(pos), true);
        return ray_bounded(limit_.value_at(pos), true);
    }

    Frontier frontier() const override {
        const IndexStructure& str = *structure();
        if (global_max()) return Frontier{full_segment(str), true, std::nullopt};
        return Frontier{full_segment(str), false, limit_};
    }

    ProviderPtr negated() const override {
        return std::make_shared<PrefixChainProvider>(limit_, !descending_);
    }

    std::string describe() const override {
        std::string name = descending_ ? "descending truncation chain of "
                                       : "ascending truncation chain of ";
        return name + slot_vector_to_string(limit_);
    }

private:
    SlotVector head() const {  // the one-step truncation, least member of the chain
        return restrict_to(limit_,
                           make_segment(*structure(), {BlockCut{BlockCut::Kind::Finite, 1}}),
                           false);
    }

    SlotVector limit_;
    bool descending_;
};

/* ------------------------------------------------------------------ */
/*  Coordinate rays                                                    */
/* ------------------------------------------------------------------ */

/* Members prefix + t*e_pos, with t rational ranging downward without bound
 * and upward as described.  An attained upper bound is folded into a
 * greatest member at construction.  Negation reflects the members; the
 * reflected set is unbounded above and keeps the same answers below, so it
 * is again a ray, with the upward description dropped. */
class CoordinateRayProvider final : public CutProvider {
public:
    CoordinateRayProvider(SlotVector prefix, Position pos, RayAnswer upward)
        : prefix_(std::move(prefix)), pos_(pos), upward_(std::move(upward)) {
        if (!upward_.unbounded && upward_.attained)
            top_ = copy_with_coordinate(prefix_, pos_, *upward_.bound);
    }

    StructurePtr structure() const override { return prefix_.structure(); }

    std::optional<SlotVector> global_max() const override { return top_; }

    std::optional<SlotVector> max_at(const InitialSegment& seg) const override {
        if (top_) return restrict_to(*top_, seg, false);
        if (segment_contains(*structure(), seg, pos_)) return std::nullopt;
        return restrict_to(prefix_, seg, false);
    }

    RayAnswer ray_at(const Position& pos, const SlotVector&) const override {
        if (pos == pos_) return upward_;
        if (position_less(*structure(), pos, pos_))
            return ray_bounded(prefix_.value_at(pos), true);
        return ray_bounded(Scalar(), true);  // beyond the varying position all members are 0
    }

    Frontier frontier() const override {
        const IndexStructure& str = *structure();
        if (top_) return Frontier{full_segment(str), true, std::nullopt};
        return Frontier{segment_below(str, pos_), true, std::nullopt};
    }

    ProviderPtr negated() const override {
        return std::make_shared<CoordinateRayProvider>(negate(prefix_), pos_, ray_unbounded());
    }

    std::string describe() const override {
        std::string tag = upward_.unbounded ? "unbounded" : "bounded";
        return "coordinate ray (" + tag + ") at position " +
               position_to_string(*structure(), pos_) + " over " +
               slot_vector_to_string(prefix_);
    }

private:
    SlotVector prefix_;
    Position pos_;
    RayAnswer upward_;
    std::optional<SlotVector> top_;
};

} // namespace

/* ------------------------------------------------------------------ */
/*  Factories                                                          */
/* ------------------------------------------------------------------ */

ProviderPtr make_finite_set(std::vector<SlotVector> members) {
    if (members.empty()) throw domain_error("a point set needs at least one member");
    for (const SlotVector& m : members) {
        if (!(*m.structure() == *members.front().structure()))
            throw domain_error("point-set members live over one index structure");
        if (!is_commensurable(m))
            throw domain_error("point-set members must be base-group vectors");
    }
    return std::make_shared<FiniteSetProvider>(std::move(members));
}

ProviderPtr make_lower_cut(const SlotVector& bound) {
    SmeElement cls = classify(bound);
    if (cls.stratum == Stratum::MinusInfinity)
        throw domain_error("nothing lies below the bottom marker");
    return std::make_shared<LowerCutProvider>(std::move(cls));
}

ProviderPtr make_upper_cut(const SlotVector& bound) {
    SmeElement cls = classify(bound);
    if (cls.stratum == Stratum::InfinityMinus)
        throw domain_error("nothing lies above the top marker");
    return std::make_shared<UpperCutProvider>(std::move(cls));
}

ProviderPtr make_prefix_chain(const SlotVector& limit) {
    const IndexStructure& str = *limit.structure();
    if (str.blocks.size() != 1 || str.blocks[0].kind != BlockKind::Omega)
        throw domain_error("a truncation chain needs a single ascending block");
    if (limit.marker()) throw domain_error("a chain limit carries no marker");
    for (const auto& [p, v] : limit.coords()) {
        if (!v.is_rational()) throw domain_error("a chain limit must be rational");
        if (scalar_sign(v) < 0) throw domain_error("chain entries must be nonnegative");
    }
    if (limit.tail()) {
        if (!limit.tail()->value.is_rational())
            throw domain_error("a chain limit must be rational");
        if (scalar_sign(limit.tail()->value) < 0)
            throw domain_error("chain entries must be nonnegative");
    }
    return std::make_shared<PrefixChainProvider>(limit, false);
}

ProviderPtr make_coordinate_ray(SlotVector prefix, const Position& pos, RayAnswer upward) {
    if (!is_commensurable(prefix))
        throw domain_error("the fixed restriction must be a base-group vector");
    if (!supported_on(prefix, segment_below(*prefix.structure(), pos)))
        throw domain_error("the fixed restriction must live below the varying position");
    if (!upward.unbounded) {
        if (!upward.bound) throw domain_error("a bounded ray needs its least upper bound");
        if (upward.attained && !upward.bound->is_rational())
            throw domain_error("an attained bound must be a base-group value");
    }
    return std::make_shared<CoordinateRayProvider>(std::move(prefix), pos, std::move(upward));
}

/* ------------------------------------------------------------------ */
/*  Dispatcher                                                         */
/* ------------------------------------------------------------------ */

std::string completion_case_name(CompletionCase c) {
    switch (c) {
        case CompletionCase::GlobalMax: return "global-max";
        case CompletionCase::LimitAssembly: return "limit-assembly";
        case CompletionCase::GapWithoutLeast: return "gap-without-least";
        case CompletionCase::UnboundedCoordinate: return "unbounded-coordinate";
        case CompletionCase::IrrationalBound: return "irrational-bound";
        case CompletionCase::RationalBound: return "rational-bound";
    }
    return "?";
}

namespace {

/* One or two segments strictly inside T for spot-checking that the
 * provider's answers restrict to one another. */
std::vector<InitialSegment> coherence_probes(const IndexStructure& str,
                                             const InitialSegment& t) {
    std::vector<InitialSegment> out;
    if (segment_is_empty(t)) return out;
    if (auto l = last_position_in(str, t)) {
        out.push_back(segment_below(str, *l));
        return out;
    }
    // the deepest nonempty cut keeps a whole ascending block: truncate it
    for (int b = static_cast<int>(t.cuts.size()) - 1; b >= 0; --b) {
        if (t.cuts[b].kind == BlockCut::Kind::None) continue;
        std::vector<BlockCut> cuts = t.cuts;
        cuts[b] = BlockCut{BlockCut::Kind::Finite, 2};
        out.push_back(make_segment(str, std::move(cuts)));
        break;
    }
    return out;
}

void check_all_rational(const SlotVector& v, const char* message) {
    for (const auto& [p, val] : v.coords())
        if (!val.is_rational()) throw contract_error(message);
    if (v.tail() && !v.tail()->value.is_rational()) throw contract_error(message);
}

} // namespace

/* A set without a greatest member is located by three data: how far the
 * projected maxima reach (the frontier), what happens just past them (a ray
 * or a missing least position), and what they approach when the frontier
 * itself carries none (a limit).  With one finite descending block every
 * proper initial segment has a greatest position and every complement a
 * least one, so the limit and no-least-position rules need an infinite
 * block to fire. */
SupremumResult supremum(const CutProvider& p) {
    StructurePtr sp = p.structure();
    const IndexStructure& str = *sp;

    // every member restricts to the zero vector on the empty segment
    auto m0 = p.max_at(empty_segment(str));
    if (!m0) throw contract_error("the empty-segment maximum must always exist");
    if (!(*m0 == zero_vector(sp)))
        throw contract_error("the empty-segment maximum must be the zero restriction");

    if (auto g = p.global_max()) {
        if (!is_commensurable(*g))
            throw contract_error("a greatest member must be a base-group vector");
        auto mf = p.max_at(full_segment(str));
        if (!mf || !(*mf == *g))
            throw contract_error("the greatest member must agree with the full-segment maximum");
        return SupremumResult{classify(*g), CompletionCase::GlobalMax};
    }

    Frontier f = p.frontier();
    if (f.segment.cuts.size() != str.blocks.size())
        throw contract_error("the frontier segment must match the index structure");
    const InitialSegment& t = f.segment;

    if (f.has_max) {
        auto xt = p.max_at(t);
        if (!xt)
            throw contract_error("the frontier segment must carry the maximum it promises");
        if (!is_commensurable(*xt))
            throw contract_error("projected maxima must be base-group vectors");
        if (!supported_on(*xt, t))
            throw contract_error("a projected maximum must be supported on its segment");
        if (segment_is_full(str, t))
            throw contract_error("a full-segment maximum means the set has a greatest member");
        for (const InitialSegment& u : coherence_probes(str, t)) {
            auto mu = p.max_at(u);
            if (!mu || !(*mu == restrict_to(*xt, u, false)))
                throw contract_error("projected maxima must restrict to one another");
        }

        if (auto i = min_outside(str, t)) {
            RayAnswer r = p.ray_at(*i, *xt);
            if (r.unbounded)
                return SupremumResult{classify(copy_with_marker(*xt, t, 1)),
                                      CompletionCase::UnboundedCoordinate};
            if (!r.bound)
                throw contract_error("a bounded coordinate needs its least upper bound");
            if (r.attained)
                throw contract_error(
                    "an attained coordinate bound must be folded into the projected maxima");
            if (r.bound->is_rational()) {
                SlotVector h = copy_with_coordinate(*xt, *i, *r.bound);
                h = copy_with_marker(h, segment_through(str, *i), -1);
                return SupremumResult{classify(h), CompletionCase::RationalBound};
            }
            return SupremumResult{classify(copy_with_coordinate(*xt, *i, *r.bound)),
                                  CompletionCase::IrrationalBound};
        }
        // positions remain past the frontier, but none of them is least
        return SupremumResult{classify(copy_with_marker(*xt, t, 1)),
                              CompletionCase::GapWithoutLeast};
    }

    // the frontier union carries no maximum: its maxima approach a limit
    if (segment_is_empty(t))
        throw contract_error("the empty segment always carries a maximum");
    if (p.max_at(t))
        throw contract_error("the frontier segment must not carry a maximum it disclaims");
    if (!f.limit)
        throw contract_error("a limit vector is required when the frontier maximum is missing");
    const SlotVector& lim = *f.limit;
    if (lim.marker()) throw contract_error("the limit of projected maxima carries no marker");
    check_all_rational(lim, "projected maxima are rational, so their limit must be rational");
    if (!supported_on(lim, t))
        throw contract_error("the limit must be supported on the frontier segment");
    for (const InitialSegment& u : coherence_probes(str, t)) {
        auto mu = p.max_at(u);
        if (!mu || !(*mu == restrict_to(lim, u, false)))
            throw contract_error("projected maxima must restrict to one another");
    }

    // a finitely supported limit sits just past the set; an infinite one is
    // approached coordinate by coordinate and is the bound itself
    SlotVector h = is_commensurable(lim) ? copy_with_marker(lim, t, -1) : lim;
    return SupremumResult{classify(h), CompletionCase::LimitAssembly};
}

SupremumResult infimum(const CutProvider& p) {
    ProviderPtr n = p.negated();
    if (!n) throw contract_error("negation must produce a provider");
    SupremumResult r = supremum(*n);
    return SupremumResult{negate_element(r.value), r.fired};
}

} // namespace smallext
