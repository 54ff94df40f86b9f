#include "smallext/classify.hpp"

#include <algorithm>

namespace smallext {

std::string stratum_name(Stratum s) {
    switch (s) {
        case Stratum::Commensurable: return "Commensurable";
        case Stratum::EqRkIrrat: return "EqRkIrrat";
        case Stratum::EqRkRat: return "EqRkRat";
        case Stratum::IncRk: return "IncRk";
        case Stratum::MinusInfinity: return "MinusInfinity";
        case Stratum::InfinityMinus: return "InfinityMinus";
    }
    return "?";
}

namespace {

// the initial segment covering exactly the blocks up to and including `block`
InitialSegment through_block(const IndexStructure& str, int block) {
    std::vector<BlockCut> cuts(str.blocks.size(), BlockCut{});
    for (int b = 0; b <= block; ++b) cuts[b] = BlockCut{BlockCut::Kind::All, 0};
    return InitialSegment{std::move(cuts)};
}

struct Witness {
    InitialSegment seg;
    int flag;  // 0: realized at positions of seg; 1: realized at the marker slot i_seg
    enum Kind { Irr, RatTail, MarkerSlot } kind;
    Position irr_pos;  // Irr only
};

bool witness_less(const IndexStructure& str, const Witness& a, const Witness& b) {
    if (a.seg == b.seg) return a.flag < b.flag;
    return segment_less(str, a.seg, b.seg);
}

} // namespace

SmeElement classify(const SlotVector& u) {
    const IndexStructure& str = *u.structure();
    if (is_commensurable(u))
        return SmeElement{Stratum::Commensurable, u, full_segment(str)};

    std::vector<Witness> witnesses;

    // least irrational coordinate (explicit, or the start of an irrational tail)
    std::optional<Position> irr;
    for (const auto& [p, val] : u.coords()) {
        if (!val.is_rational()) {
            irr = p;
            break;
        }
    }
    if (u.tail() && !u.tail()->value.is_rational()) {
        Position ts{u.tail()->block, u.tail_start()};
        if (!irr || position_less(str, ts, *irr)) irr = ts;
    }
    if (irr)
        witnesses.push_back(Witness{segment_through(str, *irr), 0, Witness::Irr, *irr});

    if (u.tail() && u.tail()->value.is_rational())
        witnesses.push_back(
            Witness{through_block(str, u.tail()->block), 0, Witness::RatTail, {}});

    if (u.marker())
        witnesses.push_back(Witness{u.marker()->seg, 1, Witness::MarkerSlot, {}});

    const Witness* best = nullptr;
    for (const auto& w : witnesses)
        if (!best || witness_less(str, w, *best)) best = &w;
    // is_commensurable was false, so at least one witness exists

    switch (best->kind) {
        case Witness::Irr: {
            const Position& p = best->irr_pos;
            SlotVectorBuilder b(u.structure());
            for (const auto& [pos, val] : u.coords())
                if (position_less(str, pos, p)) b.set(pos, val);
            b.set(p, u.value_at(p));
            return SmeElement{Stratum::EqRkIrrat, std::move(b).build(), best->seg};
        }
        case Witness::RatTail: {
            SlotVector rep = restrict_to(u, best->seg, /*keep_marker=*/false);
            return SmeElement{Stratum::EqRkRat, std::move(rep), best->seg};
        }
        case Witness::MarkerSlot: {
            SlotVector prefix = restrict_to(u, best->seg, /*keep_marker=*/false);
            int sign = scalar_sign(u.marker()->value);
            SlotVectorBuilder b(u.structure());
            for (const auto& [pos, val] : prefix.coords()) b.set(pos, val);
            b.set_marker(best->seg, Scalar(Rational(sign)));
            Stratum st = Stratum::IncRk;
            if (segment_is_empty(best->seg))
                st = sign < 0 ? Stratum::MinusInfinity : Stratum::InfinityMinus;
            return SmeElement{st, std::move(b).build(), best->seg};
        }
    }
    throw domain_error("unclassifiable slot vector");
}

bool sme_equivalent(const SlotVector& u, const SlotVector& v) {
    SmeElement cu = classify(u);
    SmeElement cv = classify(v);
    return cu == cv;
}

namespace {

/* Is the strict hull-prefix of u below slot w a base-group element?  (All
 * coordinates rational, finitely many of them, no marker.)  u and v agree
 * below their first differing slot, so the caller may pass either side. */
bool prefix_realizable(const SlotVector& u, const Slot& w) {
    const IndexStructure& str = *u.structure();
    for (const auto& [pos, val] : u.coords()) {
        Slot s = Slot::at(pos);
        if (!slot_less(str, s, w)) break;
        if (!val.is_rational()) return false;
    }
    if (u.tail()) {
        int tb = u.tail()->block;
        long ts = u.tail_start();
        // how much of the tail region lies below w?
        bool infinite_below = false;
        long finite_until = ts;  // tail offsets in [ts, finite_until) are below w
        if (!w.is_marker) {
            if (w.pos.block > tb)
                infinite_below = true;
            else if (w.pos.block == tb)
                finite_until = std::max(ts, w.pos.offset);
        } else {
            const BlockCut& cut = w.seg.cuts.at(tb);
            if (cut.kind == BlockCut::Kind::All)
                infinite_below = true;
            else if (cut.kind == BlockCut::Kind::Finite)
                finite_until = std::max(ts, cut.k);
        }
        if (infinite_below) return false;  // infinitely many nonzero entries below w
        if (finite_until > ts && !u.tail()->value.is_rational()) return false;
    }
    if (u.marker() && slot_less(str, Slot::marker(u.marker()->seg), w)) return false;
    return true;
}

/* The base-group vector agreeing with u strictly below slot w (requires
 * prefix_realizable).  Finite tail stretches below w are materialized. */
SlotVectorBuilder prefix_vector(const SlotVector& u, const Slot& w) {
    const IndexStructure& str = *u.structure();
    SlotVectorBuilder b(u.structure());
    for (const auto& [pos, val] : u.coords()) {
        Slot s = Slot::at(pos);
        if (!slot_less(str, s, w)) break;
        b.set(pos, val);
    }
    if (u.tail()) {
        int tb = u.tail()->block;
        long ts = u.tail_start();
        long finite_until = ts;
        if (!w.is_marker) {
            if (w.pos.block == tb) finite_until = std::max(ts, w.pos.offset);
        } else {
            const BlockCut& cut = w.seg.cuts.at(tb);
            if (cut.kind == BlockCut::Kind::Finite) finite_until = std::max(ts, cut.k);
        }
        for (long o = ts; o < finite_until; ++o)
            b.set(Position{tb, o}, u.tail()->value);
    }
    return b;
}

// a deterministic position in T ∖ S for initial segments S ⊊ T
Position position_in_difference(const IndexStructure& str, const InitialSegment& s,
                                const InitialSegment& t) {
    for (std::size_t f = 0; f < s.cuts.size(); ++f) {
        if (s.cuts[f] == t.cuts[f]) continue;
        const BlockCut& cs = s.cuts[f];
        const BlockCut& ct = t.cuts[f];
        if (str.blocks[f].kind == BlockKind::OmegaOpp) {
            long upper = (cs.kind == BlockCut::Kind::Cofinite) ? cs.k : -1;
            if (upper >= 1) return Position{static_cast<int>(f), upper - 1};
            // s keeps nothing of this block; pick the first kept offset of t
            if (ct.kind == BlockCut::Kind::Cofinite) return Position{static_cast<int>(f), ct.k};
            return Position{static_cast<int>(f), 0};  // t covers the whole block
        }
        long k = (cs.kind == BlockCut::Kind::Finite) ? cs.k : 0;
        return Position{static_cast<int>(f), k};
    }
    throw domain_error("segments do not differ");
}

} // namespace

bool equivalence_oracle(const SlotVector& u, const SlotVector& v) {
    if (is_commensurable(u) || is_commensurable(v))
        throw domain_error("the interpolation criterion applies to incommensurable elements");
    auto [ord, wopt] = compare_with_witness(u, v);
    if (ord == Ordering::Equal) return true;
    const SlotVector& lo = (ord == Ordering::Less) ? u : v;
    const SlotVector& hi = (ord == Ordering::Less) ? v : u;
    const Slot& w = *wopt;
    if (!prefix_realizable(lo, w)) return true;
    if (!w.is_marker) return false;
    int slo = scalar_sign(lo.value_at(w));
    int shi = scalar_sign(hi.value_at(w));
    return slo * shi > 0;
}

std::optional<SlotVector> rational_between(const SlotVector& u, const SlotVector& v) {
    const IndexStructure& str = *u.structure();
    auto [ord, wopt] = compare_with_witness(u, v);
    if (ord != Ordering::Less)
        throw domain_error("interpolation requires a strictly increasing pair");
    const Slot& w = *wopt;
    if (!prefix_realizable(u, w)) return std::nullopt;

    if (!w.is_marker) {
        Rational z = rational_strictly_between(u.value_at(w), v.value_at(w));
        SlotVectorBuilder b = prefix_vector(u, w);
        b.set(w.pos, Scalar(z));
        return std::move(b).build();
    }

    const InitialSegment& U = w.seg;
    int su = scalar_sign(u.value_at(w));
    int sv = scalar_sign(v.value_at(w));

    if (su < 0 && sv > 0) return std::move(prefix_vector(u, w)).build();

    if (su == 0 && sv > 0) {
        // need a base-group element strictly above u inside the marker's fiber
        auto s0 = first_support_above(u, w);
        if (!s0) {
            auto p = some_position_outside(str, U);
            if (!p) return std::nullopt;  // u is the realized prefix itself, segment full
            SlotVectorBuilder b = prefix_vector(u, w);
            b.set(*p, Scalar(Rational(1)));
            return std::move(b).build();
        }
        if (!s0->is_marker) {
            Rational z(Integer(scalar_floor(u.value_at(*s0)) + 1));
            SlotVectorBuilder b = prefix_vector(u, w);
            b.set(s0->pos, Scalar(z));
            return std::move(b).build();
        }
        int m = scalar_sign(u.value_at(*s0));
        if (m < 0) return std::move(prefix_vector(u, w)).build();
        Position p = position_in_difference(str, U, s0->seg);
        SlotVectorBuilder b = prefix_vector(u, w);
        b.set(p, Scalar(Rational(1)));
        return std::move(b).build();
    }

    if (su < 0 && sv == 0) {
        // mirror: a base-group element strictly below v inside the fiber
        auto s0 = first_support_above(v, w);
        if (!s0) {
            auto p = some_position_outside(str, U);
            if (!p) return std::nullopt;
            SlotVectorBuilder b = prefix_vector(v, w);
            b.set(*p, Scalar(Rational(-1)));
            return std::move(b).build();
        }
        if (!s0->is_marker) {
            Rational z(Integer(scalar_ceil(v.value_at(*s0)) - 1));
            SlotVectorBuilder b = prefix_vector(v, w);
            b.set(s0->pos, Scalar(z));
            return std::move(b).build();
        }
        int m = scalar_sign(v.value_at(*s0));
        if (m > 0) return std::move(prefix_vector(v, w)).build();
        Position p = position_in_difference(str, U, s0->seg);
        SlotVectorBuilder b = prefix_vector(v, w);
        b.set(p, Scalar(Rational(-1)));
        return std::move(b).build();
    }

    // both marker values on the same strict side: the pair is equivalent
    return std::nullopt;
}

SmeElement negate_element(const SmeElement& e) {
    Stratum st = e.stratum;
    if (st == Stratum::MinusInfinity)
        st = Stratum::InfinityMinus;
    else if (st == Stratum::InfinityMinus)
        st = Stratum::MinusInfinity;
    return SmeElement{st, negate(e.canonical), e.segment};
}

std::pair<SlotVector, SlotVector> predecessor_successor(const SlotVector& b) {
    if (!is_commensurable(b))
        throw domain_error("immediate neighbors exist for base-group elements only");
    const IndexStructure& str = *b.structure();
    InitialSegment full = full_segment(str);
    SlotVectorBuilder lo(b.structure()), hi(b.structure());
    for (const auto& [pos, val] : b.coords()) {
        lo.set(pos, val);
        hi.set(pos, val);
    }
    lo.set_marker(full, Scalar(Rational(-1)));
    hi.set_marker(full, Scalar(Rational(1)));
    return {std::move(lo).build(), std::move(hi).build()};
}

bool increases_rank(const SlotVector& u) {
    Stratum st = classify(u).stratum;
    return st == Stratum::IncRk || st == Stratum::MinusInfinity ||
           st == Stratum::InfinityMinus;
}

SlotVector prefix_element(const StructurePtr& structure, const Position& i, const Rational& q) {
    SlotVectorBuilder b(structure);
    b.set(i, Scalar(q));
    return std::move(b).build();
}

} // namespace smallext
