#pragma once

#include "smallext/index_structure.hpp"
#include "smallext/scalar.hpp"

#include <map>
#include <optional>
#include <vector>

namespace smallext {

/* A slot vector is an element of the lexicographic power indexed by the hull
 * of I: finitely many explicit coordinates, an optional eventually-constant
 * tail inside one OMEGA block, and an optional value at one added (marker)
 * slot.  Zero values are never stored.  This covers the base group, all
 * canonical stratum representatives, and everything in between. */

struct Tail {
    int block = 0;   // must be an OMEGA block
    Scalar value;    // nonzero; constant at every offset past the explicit ones

    bool operator==(const Tail& other) const {
        return block == other.block && value == other.value;
    }
};

struct Marker {
    InitialSegment seg;
    Scalar value;  // nonzero

    bool operator==(const Marker& other) const {
        return seg == other.seg && value == other.value;
    }
};

class SlotVector {
public:
    explicit SlotVector(StructurePtr structure);

    const StructurePtr& structure() const { return structure_; }
    const std::map<Position, Scalar, PositionLess>& coords() const { return coords_; }
    const std::optional<Tail>& tail() const { return tail_; }
    const std::optional<Marker>& marker() const { return marker_; }

    /// Offset at which the tail becomes authoritative in its block
    /// (one past the largest explicit offset there; 0 with no explicit coords).
    long tail_start() const;

    /// The value at an I-position (coords, then tail region, else zero).
    Scalar value_at(const Position& p) const;
    /// The value at any hull slot (marker slots included).
    Scalar value_at(const Slot& s) const;

    bool operator==(const SlotVector& other) const;
    bool operator!=(const SlotVector& other) const { return !(*this == other); }

private:
    StructurePtr structure_;
    std::map<Position, Scalar, PositionLess> coords_;
    std::optional<Tail> tail_;
    std::optional<Marker> marker_;

    friend class SlotVectorBuilder;
};

/// Assembles a slot vector, dropping zeros and validating invariants.
class SlotVectorBuilder {
public:
    explicit SlotVectorBuilder(StructurePtr structure);
    SlotVectorBuilder& set(const Position& p, const Scalar& value);
    SlotVectorBuilder& set_tail(int block, const Scalar& value);
    SlotVectorBuilder& set_marker(const InitialSegment& seg, const Scalar& value);
    SlotVector build() &&;

private:
    SlotVector v_;
};

/// Zero vector over the structure.
SlotVector zero_vector(const StructurePtr& structure);

enum class Ordering { Less, Equal, Greater };

inline Ordering ordering_of(int sign) {
    return sign < 0 ? Ordering::Less : sign > 0 ? Ordering::Greater : Ordering::Equal;
}

/* Lexicographic comparison over the hull.  The candidate first-difference
 * slots are the explicit supports of both sides, their marker slots, and — in
 * any OMEGA block where a tail is present — every offset up to one past the
 * largest explicit offset, which is where the two sides become constant. */
Ordering compare(const SlotVector& u, const SlotVector& v);

/// Compare and also report the first differing slot (nullopt when equal).
std::pair<Ordering, std::optional<Slot>> compare_with_witness(const SlotVector& u,
                                                              const SlotVector& v);

/// Member of the base group: no marker, no tail, all coordinates rational.
bool is_commensurable(const SlotVector& u);

SlotVector negate(const SlotVector& u);

/* Projection to the hull of S: coordinates outside S are dropped, a tail
 * whose block is cut finitely is materialized up to the cut, and the marker
 * survives exactly when its segment is contained in S (and keep_marker). */
SlotVector restrict_to(const SlotVector& u, const InitialSegment& s, bool keep_marker);

/// First support slot of u strictly above the given slot (tail-aware).
std::optional<Slot> first_support_above(const SlotVector& u, const Slot& w);
/// First support slot of u overall.
std::optional<Slot> first_support(const SlotVector& u);

/* Window analysis above a slot w: does a commensurable vector supported
 * strictly above w exist that is strictly greater (resp. smaller) than u on
 * that window?  False only in the degenerate configurations where the window
 * has no positions (or u blocks them with a marker right at the boundary). */
bool exists_commensurable_above_in_window(const SlotVector& u, const Slot& w);
bool exists_commensurable_below_in_window(const SlotVector& u, const Slot& w);

/// Same questions about the whole line (window = everything).
bool exists_commensurable_below(const SlotVector& u);
bool exists_commensurable_above(const SlotVector& u);

std::string slot_vector_to_string(const SlotVector& u);

} // namespace smallext
