#include "smallext/index_structure.hpp"

#include <algorithm>
#include <sstream>

namespace smallext {

StructurePtr make_structure(std::vector<Block> blocks, GroupMode mode) {
    if (blocks.empty()) throw config_error("index structure needs at least one block");
    for (const auto& b : blocks) {
        if (b.kind == BlockKind::Fin && b.size < 1)
            throw config_error("FIN block must have size >= 1");
    }
    if (mode == GroupMode::FGNormalized) {
        if (blocks.size() != 1 || blocks[0].kind != BlockKind::Fin)
            throw config_error("the normalized-group model uses a single FIN block");
    }
    auto s = std::make_shared<IndexStructure>();
    s->blocks = std::move(blocks);
    s->mode = mode;
    return s;
}

StructurePtr fin_structure(int r) {
    return make_structure({Block{BlockKind::Fin, r}}, GroupMode::FGNormalized);
}

bool position_less(const IndexStructure& s, const Position& a, const Position& b) {
    if (a.block != b.block) return a.block < b.block;
    if (s.blocks.at(a.block).kind == BlockKind::OmegaOpp)
        return a.offset > b.offset;  // offset counts from the end
    return a.offset < b.offset;
}

namespace {

void check_block_index(const IndexStructure& s, int block) {
    if (block < 0 || block >= static_cast<int>(s.blocks.size()))
        throw config_error("block index out of range");
}

bool cut_is_all(const BlockCut& c) { return c.kind == BlockCut::Kind::All; }
bool cut_is_none(const BlockCut& c) { return c.kind == BlockCut::Kind::None; }

/* Cuts of one block are totally ordered by inclusion:
 *   None < Finite(1) < Finite(2) < ... < All          (Fin / Omega)
 *   None < ... < Cofinite(2) < Cofinite(1) < All      (OmegaOpp)   */
int cut_rank_class(const BlockCut& c) {
    switch (c.kind) {
        case BlockCut::Kind::None: return 0;
        case BlockCut::Kind::Finite: return 1;
        case BlockCut::Kind::Cofinite: return 1;
        case BlockCut::Kind::All: return 2;
    }
    return 0;
}

bool cut_less(const BlockCut& a, const BlockCut& b) {
    int ra = cut_rank_class(a), rb = cut_rank_class(b);
    if (ra != rb) return ra < rb;
    if (a.kind == BlockCut::Kind::Finite && b.kind == BlockCut::Kind::Finite) return a.k < b.k;
    if (a.kind == BlockCut::Kind::Cofinite && b.kind == BlockCut::Kind::Cofinite)
        return a.k > b.k;  // keeping fewer "last" positions excluded means a larger cut
    return false;
}

} // namespace

InitialSegment make_segment(const IndexStructure& s, std::vector<BlockCut> cuts) {
    if (cuts.size() != s.blocks.size())
        throw config_error("segment description must cover every block");
    for (std::size_t b = 0; b < cuts.size(); ++b) {
        BlockCut& c = cuts[b];
        const Block& blk = s.blocks[b];
        switch (blk.kind) {
            case BlockKind::Fin:
                if (c.kind == BlockCut::Kind::Cofinite)
                    throw config_error("cofinite cut in a FIN block");
                if (c.kind == BlockCut::Kind::Finite) {
                    if (c.k < 0 || c.k > blk.size)
                        throw config_error("FIN cut out of range");
                    if (c.k == 0) c = BlockCut{BlockCut::Kind::None, 0};
                    if (c.k == blk.size) c = BlockCut{BlockCut::Kind::All, 0};
                }
                break;
            case BlockKind::Omega:
                if (c.kind == BlockCut::Kind::Cofinite)
                    throw config_error("cofinite cut in an OMEGA block");
                if (c.kind == BlockCut::Kind::Finite) {
                    if (c.k < 0) throw config_error("negative cut");
                    if (c.k == 0) c = BlockCut{BlockCut::Kind::None, 0};
                }
                break;
            case BlockKind::OmegaOpp:
                if (c.kind == BlockCut::Kind::Finite)
                    throw config_error("finite cut in an OMEGA_OPP block (use cofinite)");
                if (c.kind == BlockCut::Kind::Cofinite) {
                    if (c.k < 0) throw config_error("negative cut");
                    if (c.k == 0) c = BlockCut{BlockCut::Kind::All, 0};
                }
                break;
        }
    }
    // downward closure: All* (partial)? None*
    bool seen_partial_or_none = false;
    for (const auto& c : cuts) {
        if (seen_partial_or_none && !cut_is_none(c))
            throw config_error("segment is not downward closed");
        if (!cut_is_all(c)) seen_partial_or_none = true;
    }
    return InitialSegment{std::move(cuts)};
}

InitialSegment fin_segment(const IndexStructure& s, long cut) {
    if (s.blocks.size() != 1 || s.blocks[0].kind != BlockKind::Fin)
        throw config_error("integer cut shorthand needs a single FIN block");
    return make_segment(s, {BlockCut{BlockCut::Kind::Finite, cut}});
}

InitialSegment empty_segment(const IndexStructure& s) {
    return InitialSegment{std::vector<BlockCut>(s.blocks.size(), BlockCut{})};
}

InitialSegment full_segment(const IndexStructure& s) {
    return InitialSegment{
        std::vector<BlockCut>(s.blocks.size(), BlockCut{BlockCut::Kind::All, 0})};
}

bool segment_is_empty(const InitialSegment& s) {
    return std::all_of(s.cuts.begin(), s.cuts.end(),
                       [](const BlockCut& c) { return cut_is_none(c); });
}

bool segment_is_full(const IndexStructure&, const InitialSegment& s) {
    return std::all_of(s.cuts.begin(), s.cuts.end(),
                       [](const BlockCut& c) { return cut_is_all(c); });
}

bool segment_contains(const IndexStructure& str, const InitialSegment& s, const Position& p) {
    check_block_index(str, p.block);
    const BlockCut& c = s.cuts.at(p.block);
    switch (c.kind) {
        case BlockCut::Kind::None: return false;
        case BlockCut::Kind::All: return true;
        case BlockCut::Kind::Finite: return p.offset < c.k;
        case BlockCut::Kind::Cofinite: return p.offset >= c.k;
    }
    return false;
}

bool segment_less(const IndexStructure&, const InitialSegment& s, const InitialSegment& t) {
    for (std::size_t b = 0; b < s.cuts.size(); ++b) {
        if (s.cuts[b] == t.cuts[b]) continue;
        return cut_less(s.cuts[b], t.cuts[b]);
    }
    return false;
}

InitialSegment segment_below(const IndexStructure& str, const Position& p) {
    check_block_index(str, p.block);
    std::vector<BlockCut> cuts(str.blocks.size(), BlockCut{});
    for (int b = 0; b < p.block; ++b) cuts[b] = BlockCut{BlockCut::Kind::All, 0};
    if (str.blocks[p.block].kind == BlockKind::OmegaOpp)
        cuts[p.block] = BlockCut{BlockCut::Kind::Cofinite, p.offset + 1};
    else
        cuts[p.block] = BlockCut{BlockCut::Kind::Finite, p.offset};
    return make_segment(str, std::move(cuts));
}

InitialSegment segment_through(const IndexStructure& str, const Position& p) {
    check_block_index(str, p.block);
    std::vector<BlockCut> cuts(str.blocks.size(), BlockCut{});
    for (int b = 0; b < p.block; ++b) cuts[b] = BlockCut{BlockCut::Kind::All, 0};
    if (str.blocks[p.block].kind == BlockKind::OmegaOpp)
        cuts[p.block] = BlockCut{BlockCut::Kind::Cofinite, p.offset};
    else
        cuts[p.block] = BlockCut{BlockCut::Kind::Finite, p.offset + 1};
    return make_segment(str, std::move(cuts));
}

namespace {

int frontier_block(const InitialSegment& s) {
    for (std::size_t b = 0; b < s.cuts.size(); ++b)
        if (!cut_is_all(s.cuts[b])) return static_cast<int>(b);
    return -1;  // segment is full
}

} // namespace

std::optional<Position> min_outside(const IndexStructure& str, const InitialSegment& s) {
    int fb = frontier_block(s);
    if (fb < 0) return std::nullopt;
    const BlockCut& c = s.cuts[fb];
    const Block& blk = str.blocks[fb];
    switch (blk.kind) {
        case BlockKind::Fin:
        case BlockKind::Omega: {
            long k = (c.kind == BlockCut::Kind::Finite) ? c.k : 0;
            if (blk.kind == BlockKind::Fin && k >= blk.size) break;  // cannot happen: normalized
            return Position{fb, k};
        }
        case BlockKind::OmegaOpp:
            if (c.kind == BlockCut::Kind::Cofinite)
                return Position{fb, c.k - 1};  // the largest excluded offset is the least position
            // whole OMEGA_OPP block outside: no least element
            return std::nullopt;
    }
    return std::nullopt;
}

bool has_position_outside(const IndexStructure& str, const InitialSegment& s) {
    return !segment_is_full(str, s);
}

std::optional<Position> some_position_outside(const IndexStructure& str,
                                              const InitialSegment& s) {
    if (auto m = min_outside(str, s)) return m;
    int fb = frontier_block(s);
    if (fb < 0) return std::nullopt;
    // complement starts with a whole OMEGA_OPP stretch; its final offset-0 position exists
    return Position{fb, 0};
}

bool slot_less(const IndexStructure& str, const Slot& a, const Slot& b) {
    if (!a.is_marker && !b.is_marker) return position_less(str, a.pos, b.pos);
    if (a.is_marker && b.is_marker) return segment_less(str, a.seg, b.seg);
    if (!a.is_marker) {
        // position vs marker(S): below iff the position lies inside S
        return segment_contains(str, b.seg, a.pos);
    }
    return !segment_contains(str, a.seg, b.pos);
}

std::string position_to_string(const IndexStructure& str, const Position& p) {
    std::ostringstream out;
    if (str.blocks.size() == 1 && str.blocks[0].kind == BlockKind::Fin) {
        out << (p.offset + 1);  // 1-based coordinate in the flat finite case
    } else {
        out << p.block << ":" << p.offset;
    }
    return out.str();
}

std::string segment_to_string(const IndexStructure& str, const InitialSegment& s) {
    std::ostringstream out;
    if (str.blocks.size() == 1 && str.blocks[0].kind == BlockKind::Fin) {
        const BlockCut& c = s.cuts[0];
        long k = c.kind == BlockCut::Kind::All ? str.blocks[0].size
                 : c.kind == BlockCut::Kind::Finite ? c.k
                                                    : 0;
        out << k;
        return out.str();
    }
    for (std::size_t b = 0; b < s.cuts.size(); ++b) {
        if (b) out << ",";
        switch (s.cuts[b].kind) {
            case BlockCut::Kind::None: out << "none"; break;
            case BlockCut::Kind::All: out << "all"; break;
            case BlockCut::Kind::Finite: out << s.cuts[b].k; break;
            case BlockCut::Kind::Cofinite: out << "cof:" << s.cuts[b].k; break;
        }
    }
    return out.str();
}

} // namespace smallext
