#pragma once

#include "smallext/scalar.hpp"

#include <optional>
#include <string>
#include <vector>

namespace smallext {

/* Finitely generated subgroups of Q^n under the lexicographic order, with an
 * optional per-generator "divisible" flag that adjoins all rational multiples
 * of that generator.  Entries are Scalars so that groups involving declared
 * algebraic constants can be measured (rational rank, smallness); the
 * normalization pipeline itself requires rational entries. */

struct GeneratedGroup {
    int ambient_dim = 0;
    std::vector<std::vector<Scalar>> generators;  // each of length ambient_dim
    std::vector<bool> divisible;                  // one flag per generator
};

/// Validates shape: dim >= 1, at least one generator, lengths match; the flag
/// list may be empty (all false) or match the generator count.
GeneratedGroup make_group(int ambient_dim, std::vector<std::vector<Scalar>> generators,
                          std::vector<bool> divisible = {});

/* One archimedean component of a normalized group: the subgroup of Q reached
 * at a leading coordinate.  Either cyclic with the stated positive generator,
 * or all of Q (divisible = true, generator 1 by convention). */
struct ComponentInfo {
    Rational generator;
    bool divisible = false;

    bool operator==(const ComponentInfo&) const = default;
};

std::string component_label(const ComponentInfo& c);

/* Echelon normal form.  `basis` rows generate the group: rows marked
 * divisible span their full rational line, the others are integer-combination
 * generators.  Row i pivots at ambient coordinate leading[i] (strictly
 * ascending); pivot entries are positive, and for unflagged rows the pivot
 * value is the i-th component generator.  Projection to the leading
 * coordinates embeds the group into Q^r_lex order-isomorphically. */
struct NormalizedGroup {
    int ambient_dim = 0;
    int rank = 0;                                // r
    std::vector<int> leading;                    // ambient coordinate of each pivot
    std::vector<std::vector<Rational>> basis;    // r rows of length ambient_dim
    std::vector<bool> row_divisible;             // per basis row
    std::vector<ComponentInfo> components;       // r entries

    bool operator==(const NormalizedGroup&) const = default;
};

/// Echelon-normalize a rational-entry group.  Irrational entries -> domain
/// error.  A group of all-zero generators yields the rank-0 result.
NormalizedGroup normalize(const GeneratedGroup& g);

/// The embedding map attached to normalization: projection of an ambient
/// vector to the leading coordinates, giving its image in Q^r_lex.
std::vector<Rational> embed(const NormalizedGroup& g, const std::vector<Rational>& ambient);

struct Skeleton {
    int index_count = 0;
    std::vector<ComponentInfo> components;

    bool operator==(const Skeleton&) const = default;
};

Skeleton skeleton(const NormalizedGroup& g);

/* The convex subgroup H_S attached to an initial segment S = {1..cut} of the
 * normalized index set: all elements vanishing on the first `cut` leading
 * coordinates.  cut = 0 gives the whole group, cut = r the trivial group. */
struct ConvexSubgroup {
    int cut = 0;
    int rank = 0;  // rank of the ambient normalized group

    bool is_whole_group() const { return cut == 0; }
    bool is_trivial() const { return cut == rank; }
    bool operator==(const ConvexSubgroup&) const = default;
};

ConvexSubgroup initseg_to_convex(const NormalizedGroup& g, int cut);

/// Membership of a normalized-coordinate vector (length = rank) in H_S.
bool convex_contains(const ConvexSubgroup& h, const std::vector<Rational>& v);

std::string convex_to_string(const ConvexSubgroup& h);

/// Same archimedean class in Q^r_lex: equal minimal support index.  Inputs
/// are coordinate vectors of length r; zero vectors -> domain error.
bool archimedean_equivalent(const NormalizedGroup& g, const std::vector<Rational>& beta,
                            const std::vector<Rational>& gamma);

/// Dimension of the rational span of the generators, measured over the
/// coefficient space (one column per coordinate and declared constant).
int rational_rank(const GeneratedGroup& g);

enum class SmallKind { Commensurable, PreservesRank, IncreasesRankByOne };

std::string small_kind_name(SmallKind k);

struct SmallnessReport {
    bool small = false;
    std::optional<SmallKind> kind;  // present iff small
    int rr_sub = 0;                 // rational rank of the subgroup
    int rr_ext = 0;                 // rational rank of the extension
    std::vector<int> prin_sub;      // achievable leading coordinates (ambient, 0-based)
    std::vector<int> prin_ext;
    std::string reason;             // empty when small
};

/* Decide whether lambda is a small extension of gamma, i.e. whether
 * lambda/(lambda ∩ Q-span(gamma)) is cyclic, and if so how the rank moves.
 * Requires gamma ⊆ lambda as groups (divisible parts included) over a shared
 * ambient space; violations -> domain error. */
SmallnessReport is_small_extension(const GeneratedGroup& gamma, const GeneratedGroup& lambda);

} // namespace smallext
