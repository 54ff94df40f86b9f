#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smallext/classify.hpp"
#include "smallext/index_structure.hpp"
#include "smallext/scalar.hpp"
#include "smallext/slot_vector.hpp"

namespace smallext {

/* How far the members that share a fixed restriction push one further
 * coordinate: either arbitrarily far, or up to a least upper bound that some
 * member may or may not reach. */
struct RayAnswer {
    bool unbounded = false;
    std::optional<Scalar> bound;  // present when !unbounded
    bool attained = false;        // some member reaches `bound`
};

RayAnswer ray_unbounded();
RayAnswer ray_bounded(Scalar bound, bool attained);

/* Where the projected maxima stop existing: `segment` is the union of all
 * initial segments on which the set has a greatest restriction.  `has_max`
 * says whether that union itself still carries one; when it does not,
 * `limit` is the vector the projected maxima approach. */
struct Frontier {
    InitialSegment segment;
    bool has_max = false;
    std::optional<SlotVector> limit;
};

class CutProvider;
using ProviderPtr = std::shared_ptr<const CutProvider>;

/* Interface describing a nonempty subset X of the base group through
 * projection queries.
 *
 *   max_at(S)    greatest restriction-to-S among members, when the set of
 *                restrictions has a maximum.  Must exist for the empty
 *                segment (where every restriction is the zero vector), and
 *                for nested segments the answers restrict to one another.
 *   ray_at(i,r)  behavior of the i-th coordinate among members whose
 *                restriction below i equals r.
 *   frontier()   where max_at stops answering (see Frontier).
 *   global_max() greatest member of X itself, if X has one.  A set whose
 *                top coordinate bound is reached by a member must report
 *                that member here rather than through ray_at.
 *   negated()    provider describing {-x : x in X}.
 */
class CutProvider {
public:
    virtual ~CutProvider() = default;

    virtual StructurePtr structure() const = 0;
    virtual std::optional<SlotVector> global_max() const = 0;
    virtual std::optional<SlotVector> max_at(const InitialSegment& seg) const = 0;
    virtual RayAnswer ray_at(const Position& pos, const SlotVector& prefix) const = 0;
    virtual Frontier frontier() const = 0;
    virtual ProviderPtr negated() const = 0;
    virtual std::string describe() const = 0;
};

/// Explicitly listed members (at least one; all base-group vectors).
ProviderPtr make_finite_set(std::vector<SlotVector> members);

/// All base-group vectors strictly below `bound` (must be nonempty).
ProviderPtr make_lower_cut(const SlotVector& bound);

/// All base-group vectors strictly above `bound` (must be nonempty).
ProviderPtr make_upper_cut(const SlotVector& bound);

/// The chain of truncations limit|_{first k coordinates}, k >= 1, over a
/// single ascending block; entries must be rational and nonnegative.
ProviderPtr make_prefix_chain(const SlotVector& limit);

/// Members prefix + t*e_pos with t rational, ranging downward without bound
/// and upward as described by `upward`.  `prefix` lives below `pos`.
ProviderPtr make_coordinate_ray(SlotVector prefix, const Position& pos, RayAnswer upward);

/* Which assembly rule produced the bound. */
enum class CompletionCase {
    GlobalMax,            // the set has a greatest member
    LimitAssembly,        // projected maxima approach a limit never attained
    GapWithoutLeast,      // positions remain, but no least one
    UnboundedCoordinate,  // the next coordinate grows without bound
    IrrationalBound,      // the next coordinate approaches an irrational value
    RationalBound,        // the next coordinate approaches a rational value from below
};

std::string completion_case_name(CompletionCase c);

struct SupremumResult {
    SmeElement value;
    CompletionCase fired;
};

/* Least upper bound of the described set in the extension order, together
 * with the rule that produced it.  Throws contract_error when the provider's
 * answers are mutually inconsistent. */
SupremumResult supremum(const CutProvider& p);

/* Greatest lower bound, computed as the negated supremum of the negated set. */
SupremumResult infimum(const CutProvider& p);

} // namespace smallext
