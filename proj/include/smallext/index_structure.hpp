#pragma once

#include "smallext/errors.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace smallext {

/* The index set I of a lexicographic product, presented as a finite list of
 * order blocks: FIN(n) (n consecutive positions), OMEGA (positions 0,1,2,...
 * ascending), OMEGA_OPP (an order-reversed copy of omega: ..., 2, 1, 0, whose
 * offset counts distance from the END, so offset 0 is the largest position).
 *
 * Two attachment modes:
 *   FGNormalized -- I is a single FIN(r) block coming from a normalized
 *                   finitely generated group; rationally-supported vectors
 *                   form Q^r_lex.
 *   FullHahnSum  -- any block list; the base group is the full direct sum
 *                   Q^(I) with finite rational supports.
 */

enum class BlockKind { Fin, Omega, OmegaOpp };

struct Block {
    BlockKind kind;
    int size = 0;  // meaningful for Fin only

    bool operator==(const Block&) const = default;
};

enum class GroupMode { FGNormalized, FullHahnSum };

struct IndexStructure {
    std::vector<Block> blocks;
    GroupMode mode = GroupMode::FullHahnSum;

    bool operator==(const IndexStructure&) const = default;
};

using StructurePtr = std::shared_ptr<const IndexStructure>;

/// Validates invariants (FGNormalized => single FIN block; Fin sizes >= 1).
StructurePtr make_structure(std::vector<Block> blocks, GroupMode mode);

/// Convenience: FGNormalized single FIN(r).
StructurePtr fin_structure(int r);

/// A position of I: block index plus offset (OMEGA_OPP offsets count from the end).
struct Position {
    int block = 0;
    long offset = 0;

    bool operator==(const Position&) const = default;
};

/// Strict order of positions inside the structure.
bool position_less(const IndexStructure& s, const Position& a, const Position& b);

struct PositionLess {
    const IndexStructure* structure;
    bool operator()(const Position& a, const Position& b) const {
        return position_less(*structure, a, b);
    }
};

/* Initial segments (downward-closed subsets of I), described per block:
 *   Fin/Omega : None, Finite(k >= 1), All   (Finite(k) keeps offsets < k)
 *   OmegaOpp  : None, Cofinite(k >= 1), All (Cofinite(k) keeps offsets >= k,
 *                i.e. everything except the last k positions)
 * Valid segments have a prefix of All-blocks, at most one partial block, and
 * None afterwards.  Segments are totally ordered by inclusion. */

struct BlockCut {
    enum class Kind { None, Finite, Cofinite, All };
    Kind kind = Kind::None;
    long k = 0;

    bool operator==(const BlockCut&) const = default;
};

struct InitialSegment {
    std::vector<BlockCut> cuts;  // one per block

    bool operator==(const InitialSegment&) const = default;
};

/// Validates the downward-closure shape and per-block cut kinds; normalizes
/// Finite(0)->None, Finite(n)->All (Fin block), Cofinite(0)->All.
InitialSegment make_segment(const IndexStructure& s, std::vector<BlockCut> cuts);

/// FGNormalized shorthand: S = first `cut` coordinates.
InitialSegment fin_segment(const IndexStructure& s, long cut);

InitialSegment empty_segment(const IndexStructure& s);
InitialSegment full_segment(const IndexStructure& s);

bool segment_is_empty(const InitialSegment& s);
bool segment_is_full(const IndexStructure& str, const InitialSegment& s);

bool segment_contains(const IndexStructure& str, const InitialSegment& s, const Position& p);

/// Strict inclusion S ⊊ T; segments of one structure are totally ordered.
bool segment_less(const IndexStructure& str, const InitialSegment& s, const InitialSegment& t);

inline bool segment_leq(const IndexStructure& str, const InitialSegment& s,
                        const InitialSegment& t) {
    return s == t || segment_less(str, s, t);
}

/// {q : q < p} and {q : q <= p} as initial segments.
InitialSegment segment_below(const IndexStructure& str, const Position& p);
InitialSegment segment_through(const IndexStructure& str, const Position& p);

/// Least position of I ∖ S; nullopt when S = I or when the complement has no
/// least element (it starts with an OMEGA_OPP stretch).
std::optional<Position> min_outside(const IndexStructure& str, const InitialSegment& s);

/// Does I ∖ S contain any position at all?
bool has_position_outside(const IndexStructure& str, const InitialSegment& s);

/// A deterministic representative position of I ∖ S (the least one when it
/// exists); nullopt only when S = I.
std::optional<Position> some_position_outside(const IndexStructure& str,
                                              const InitialSegment& s);

/* A slot of the one-added-element hull: either an I-position or the added
 * element attached to an initial segment S (sitting above all of S and below
 * everything outside S; markers are ordered among themselves by inclusion). */
struct Slot {
    bool is_marker = false;
    Position pos;         // valid when !is_marker
    InitialSegment seg;   // valid when is_marker

    static Slot at(Position p) { return Slot{false, p, {}}; }
    static Slot marker(InitialSegment s) { return Slot{true, {}, std::move(s)}; }

    bool operator==(const Slot&) const = default;
};

bool slot_less(const IndexStructure& str, const Slot& a, const Slot& b);

std::string position_to_string(const IndexStructure& str, const Position& p);
std::string segment_to_string(const IndexStructure& str, const InitialSegment& s);

} // namespace smallext
