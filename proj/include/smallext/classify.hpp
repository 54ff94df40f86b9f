#pragma once

#include "smallext/slot_vector.hpp"

#include <optional>
#include <string>

namespace smallext {

/* Stratification of the small-extensions closure of the base group.  Every
 * slot vector is equivalent over the base group to exactly one canonical
 * representative:
 *
 *   Commensurable  -- already a base-group element (itself)
 *   EqRkIrrat      -- rational prefix, one irrational coordinate, zeros above
 *   EqRkRat        -- rational coordinates with a nonzero constant tail
 *   IncRk          -- commensurable prefix + marker of value +/-1, zeros above
 *   MinusInfinity / InfinityMinus -- marker at the empty segment, -1 / +1
 *
 * The classifier locates the least initial segment whose projection is
 * already incommensurable and reads the witness kind there.
 */

enum class Stratum {
    Commensurable,
    EqRkIrrat,
    EqRkRat,
    IncRk,
    MinusInfinity,
    InfinityMinus,
};

std::string stratum_name(Stratum s);

struct SmeElement {
    Stratum stratum;
    SlotVector canonical;     // the stratum-specific canonical representative
    InitialSegment segment;   // the minimal witnessing initial segment

    bool operator==(const SmeElement& other) const {
        return stratum == other.stratum && canonical == other.canonical &&
               segment == other.segment;
    }
};

/// Canonicalize: stratum, representative, and minimal witness segment.
SmeElement classify(const SlotVector& u);

/// Equivalence over the base group: equal canonical representatives.
bool sme_equivalent(const SlotVector& u, const SlotVector& v);

/* Independent decision procedure for incommensurable pairs: walk to the first
 * differing slot and decide whether a commensurable element can be squeezed
 * strictly between (equivalence holds exactly when none can).  Raises
 * domain_error on commensurable input. */
bool equivalence_oracle(const SlotVector& u, const SlotVector& v);

/* A base-group element strictly between u and v (requires u < v; domain_error
 * otherwise).  nullopt exactly when the open interval contains no such
 * element: equivalent endpoints, or an immediate-neighbor pair. */
std::optional<SlotVector> rational_between(const SlotVector& u, const SlotVector& v);

/// Canonicalized negation (order-reversing; swaps the two infinities).
SmeElement negate_element(const SmeElement& e);

/* Immediate neighbors (b-minus, b-plus) of a commensurable element: markers
 * of value -/+1 at the full segment.  domain_error on incommensurable input. */
std::pair<SlotVector, SlotVector> predecessor_successor(const SlotVector& b);

/// True when adjoining u increases the rational rank of the base group
/// (marker strata, the two infinities included).
bool increases_rank(const SlotVector& u);

/// The vector with q at position i and zero everywhere else.
SlotVector prefix_element(const StructurePtr& structure, const Position& i, const Rational& q);

} // namespace smallext
