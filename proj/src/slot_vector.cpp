#include "smallext/slot_vector.hpp"

#include <algorithm>
#include <sstream>

namespace smallext {

SlotVector::SlotVector(StructurePtr structure)
    : structure_(std::move(structure)), coords_(PositionLess{structure_.get()}) {
    if (!structure_) throw config_error("slot vector needs an index structure");
}

long SlotVector::tail_start() const {
    if (!tail_) return 0;
    long max_explicit = -1;
    for (const auto& [p, _] : coords_)
        if (p.block == tail_->block) max_explicit = std::max(max_explicit, p.offset);
    return max_explicit + 1;
}

Scalar SlotVector::value_at(const Position& p) const {
    auto it = coords_.find(p);
    if (it != coords_.end()) return it->second;
    if (tail_ && p.block == tail_->block && p.offset >= tail_start()) return tail_->value;
    return Scalar();
}

Scalar SlotVector::value_at(const Slot& s) const {
    if (!s.is_marker) return value_at(s.pos);
    if (marker_ && marker_->seg == s.seg) return marker_->value;
    return Scalar();
}

bool SlotVector::operator==(const SlotVector& other) const {
    if (!(*structure_ == *other.structure_)) return false;
    if (coords_.size() != other.coords_.size()) return false;
    for (const auto& [p, v] : coords_) {
        auto it = other.coords_.find(p);
        if (it == other.coords_.end() || !(it->second == v)) return false;
    }
    if (tail_.has_value() != other.tail_.has_value()) return false;
    if (tail_ && !(*tail_ == *other.tail_)) return false;
    if (marker_.has_value() != other.marker_.has_value()) return false;
    if (marker_ && !(*marker_ == *other.marker_)) return false;
    return true;
}

SlotVectorBuilder::SlotVectorBuilder(StructurePtr structure) : v_(std::move(structure)) {}

SlotVectorBuilder& SlotVectorBuilder::set(const Position& p, const Scalar& value) {
    const auto& blocks = v_.structure_->blocks;
    if (p.block < 0 || p.block >= static_cast<int>(blocks.size()))
        throw config_error("coordinate block out of range");
    if (p.offset < 0) throw config_error("negative coordinate offset");
    if (blocks[p.block].kind == BlockKind::Fin && p.offset >= blocks[p.block].size)
        throw config_error("coordinate offset exceeds FIN block size");
    if (value.is_zero())
        v_.coords_.erase(p);
    else
        v_.coords_[p] = value;
    return *this;
}

SlotVectorBuilder& SlotVectorBuilder::set_tail(int block, const Scalar& value) {
    if (value.is_zero()) {
        v_.tail_.reset();
        return *this;
    }
    const auto& blocks = v_.structure_->blocks;
    if (block < 0 || block >= static_cast<int>(blocks.size()))
        throw config_error("tail block out of range");
    if (blocks[block].kind != BlockKind::Omega)
        throw config_error("tails live in OMEGA blocks only");
    v_.tail_ = Tail{block, value};
    return *this;
}

SlotVectorBuilder& SlotVectorBuilder::set_marker(const InitialSegment& seg, const Scalar& value) {
    if (value.is_zero()) {
        v_.marker_.reset();
        return *this;
    }
    if (seg.cuts.size() != v_.structure_->blocks.size())
        throw config_error("marker segment does not match the structure");
    v_.marker_ = Marker{seg, value};
    return *this;
}

SlotVector SlotVectorBuilder::build() && { return std::move(v_); }

SlotVector zero_vector(const StructurePtr& structure) { return SlotVector(structure); }

namespace {

void require_same_structure(const SlotVector& u, const SlotVector& v) {
    if (!(*u.structure() == *v.structure()))
        throw domain_error("slot vectors over different index structures");
}

} // namespace

std::pair<Ordering, std::optional<Slot>> compare_with_witness(const SlotVector& u,
                                                              const SlotVector& v) {
    require_same_structure(u, v);
    const IndexStructure& str = *u.structure();

    std::vector<Slot> slots;
    for (const auto& [p, _] : u.coords()) slots.push_back(Slot::at(p));
    for (const auto& [p, _] : v.coords()) slots.push_back(Slot::at(p));
    if (u.marker()) slots.push_back(Slot::marker(u.marker()->seg));
    if (v.marker()) slots.push_back(Slot::marker(v.marker()->seg));
    for (int b = 0; b < static_cast<int>(str.blocks.size()); ++b) {
        bool tailed = (u.tail() && u.tail()->block == b) || (v.tail() && v.tail()->block == b);
        if (!tailed) continue;
        long max_explicit = -1;
        for (const auto& [p, _] : u.coords())
            if (p.block == b) max_explicit = std::max(max_explicit, p.offset);
        for (const auto& [p, _] : v.coords())
            if (p.block == b) max_explicit = std::max(max_explicit, p.offset);
        for (long o = 0; o <= max_explicit + 1; ++o) slots.push_back(Slot::at(Position{b, o}));
    }

    std::sort(slots.begin(), slots.end(),
              [&](const Slot& a, const Slot& b) { return slot_less(str, a, b); });
    slots.erase(std::unique(slots.begin(), slots.end()), slots.end());

    for (const Slot& s : slots) {
        int c = scalar_compare(u.value_at(s), v.value_at(s));
        if (c != 0) return {ordering_of(c), s};
    }
    return {Ordering::Equal, std::nullopt};
}

Ordering compare(const SlotVector& u, const SlotVector& v) {
    return compare_with_witness(u, v).first;
}

bool is_commensurable(const SlotVector& u) {
    if (u.marker() || u.tail()) return false;
    for (const auto& [_, val] : u.coords())
        if (!val.is_rational()) return false;
    return true;
}

SlotVector negate(const SlotVector& u) {
    SlotVectorBuilder b(u.structure());
    for (const auto& [p, val] : u.coords()) b.set(p, -val);
    if (u.tail()) b.set_tail(u.tail()->block, -u.tail()->value);
    if (u.marker()) b.set_marker(u.marker()->seg, -u.marker()->value);
    return std::move(b).build();
}

SlotVector restrict_to(const SlotVector& u, const InitialSegment& s, bool keep_marker) {
    const IndexStructure& str = *u.structure();
    SlotVectorBuilder b(u.structure());
    for (const auto& [p, val] : u.coords())
        if (segment_contains(str, s, p)) b.set(p, val);
    if (u.tail()) {
        const BlockCut& cut = s.cuts.at(u.tail()->block);
        if (cut.kind == BlockCut::Kind::All) {
            b.set_tail(u.tail()->block, u.tail()->value);
        } else if (cut.kind == BlockCut::Kind::Finite) {
            for (long o = u.tail_start(); o < cut.k; ++o)
                b.set(Position{u.tail()->block, o}, u.tail()->value);
        }
        // None: the whole block is outside S
    }
    if (keep_marker && u.marker() && segment_leq(str, u.marker()->seg, s))
        b.set_marker(u.marker()->seg, u.marker()->value);
    return std::move(b).build();
}

namespace {

std::optional<Slot> min_slot(const IndexStructure& str, const std::vector<Slot>& candidates) {
    std::optional<Slot> best;
    for (const Slot& s : candidates)
        if (!best || slot_less(str, s, *best)) best = s;
    return best;
}

// first tail-covered position of u, restricted to slots above w when given
std::optional<Slot> first_tail_slot(const SlotVector& u, const std::optional<Slot>& w) {
    if (!u.tail()) return std::nullopt;
    const IndexStructure& str = *u.structure();
    int tb = u.tail()->block;
    long start = u.tail_start();
    if (!w) return Slot::at(Position{tb, start});
    if (!w->is_marker) {
        const Position& p = w->pos;
        if (p.block < tb) return Slot::at(Position{tb, start});
        if (p.block > tb) return std::nullopt;
        return Slot::at(Position{tb, std::max(start, p.offset + 1)});
    }
    // w = marker(V): tail positions outside V
    const BlockCut& cut = w->seg.cuts.at(tb);
    switch (cut.kind) {
        case BlockCut::Kind::All: return std::nullopt;
        case BlockCut::Kind::None: return Slot::at(Position{tb, start});
        case BlockCut::Kind::Finite: return Slot::at(Position{tb, std::max(start, cut.k)});
        case BlockCut::Kind::Cofinite: break;  // tails never sit in OMEGA_OPP blocks
    }
    (void)str;
    return std::nullopt;
}

} // namespace

std::optional<Slot> first_support(const SlotVector& u) {
    const IndexStructure& str = *u.structure();
    std::vector<Slot> cands;
    if (!u.coords().empty()) cands.push_back(Slot::at(u.coords().begin()->first));
    if (auto t = first_tail_slot(u, std::nullopt)) cands.push_back(*t);
    if (u.marker()) cands.push_back(Slot::marker(u.marker()->seg));
    return min_slot(str, cands);
}

std::optional<Slot> first_support_above(const SlotVector& u, const Slot& w) {
    const IndexStructure& str = *u.structure();
    std::vector<Slot> cands;
    for (const auto& [p, _] : u.coords()) {
        Slot s = Slot::at(p);
        if (slot_less(str, w, s)) {
            cands.push_back(s);
            break;  // coords iterate in position order
        }
    }
    if (auto t = first_tail_slot(u, w)) cands.push_back(*t);
    if (u.marker()) {
        Slot m = Slot::marker(u.marker()->seg);
        if (slot_less(str, w, m)) cands.push_back(m);
    }
    return min_slot(str, cands);
}

namespace {

// Is there an I-position strictly between slot w and marker slot i_T?
bool position_between(const IndexStructure& str, const Slot& w, const InitialSegment& t) {
    if (!w.is_marker) return segment_less(str, segment_through(str, w.pos), t);
    return segment_less(str, w.seg, t);  // positions of T ∖ W exist iff W ⊊ T
}

bool window_has_position(const IndexStructure& str, const Slot& w) {
    if (!w.is_marker) return has_position_outside(str, segment_through(str, w.pos));
    return !segment_is_full(str, w.seg);
}

} // namespace

bool exists_commensurable_above_in_window(const SlotVector& u, const Slot& w) {
    const IndexStructure& str = *u.structure();
    auto s0 = first_support_above(u, w);
    if (!s0) return window_has_position(str, w);
    if (!s0->is_marker) return true;
    int sign = scalar_sign(u.value_at(*s0));
    if (sign < 0) return true;
    return position_between(str, w, s0->seg);
}

bool exists_commensurable_below_in_window(const SlotVector& u, const Slot& w) {
    const IndexStructure& str = *u.structure();
    auto s0 = first_support_above(u, w);
    if (!s0) return window_has_position(str, w);
    if (!s0->is_marker) return true;
    int sign = scalar_sign(u.value_at(*s0));
    if (sign > 0) return true;
    return position_between(str, w, s0->seg);
}

bool exists_commensurable_below(const SlotVector& u) {
    auto s0 = first_support(u);
    if (!s0) return true;  // below the zero vector: any single negative coordinate
    if (!s0->is_marker) return true;
    int sign = scalar_sign(u.value_at(*s0));
    if (sign > 0) return true;
    return !segment_is_empty(s0->seg);  // a position inside the marker's segment
}

bool exists_commensurable_above(const SlotVector& u) {
    const IndexStructure& str = *u.structure();
    (void)str;
    auto s0 = first_support(u);
    if (!s0) return true;
    if (!s0->is_marker) return true;
    int sign = scalar_sign(u.value_at(*s0));
    if (sign < 0) return true;
    return !segment_is_empty(s0->seg);
}

std::string slot_vector_to_string(const SlotVector& u) {
    const IndexStructure& str = *u.structure();
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (const auto& [p, val] : u.coords()) {
        if (!first) out << ", ";
        first = false;
        out << position_to_string(str, p) << "=" << scalar_to_string(val);
    }
    if (u.tail()) {
        if (!first) out << ", ";
        first = false;
        out << "tail " << u.tail()->block << "~" << scalar_to_string(u.tail()->value);
    }
    if (u.marker()) {
        if (!first) out << ", ";
        first = false;
        out << "marker@" << segment_to_string(str, u.marker()->seg) << "="
            << scalar_to_string(u.marker()->value);
    }
    out << "}";
    return out.str();
}

} // namespace smallext
