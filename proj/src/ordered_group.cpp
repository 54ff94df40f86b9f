#include "smallext/ordered_group.hpp"

#include "smallext/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

namespace smallext {

namespace {

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;
using ZVec = std::vector<Integer>;
using ZMat = std::vector<ZVec>;

bool is_zero_vec(const QVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

/* Gauss-Jordan elimination in place: unit pivots, zeros above and below,
 * zero rows removed.  Returns the pivot columns in ascending order, which
 * for a row space is intrinsic (independent of the presentation). */
std::vector<int> rref(QMat& m) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    const int cols = static_cast<int>(m[0].size());
    std::size_t next_row = 0;
    for (int c = 0; c < cols && next_row < m.size(); ++c) {
        std::size_t sel = m.size();
        for (std::size_t r = next_row; r < m.size(); ++r) {
            if (m[r][c] != 0) { sel = r; break; }
        }
        if (sel == m.size()) continue;
        std::swap(m[next_row], m[sel]);
        Rational inv = 1 / m[next_row][c];
        for (int j = c; j < cols; ++j) m[next_row][j] *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == next_row || m[r][c] == 0) continue;
            Rational f = m[r][c];
            for (int j = c; j < cols; ++j) m[r][j] -= f * m[next_row][j];
        }
        pivots.push_back(c);
        ++next_row;
    }
    m.resize(next_row);
    return pivots;
}

/// Subtract multiples of the rref rows (pivot columns given) so that v
/// vanishes on every pivot column.  v is then zero iff it was in the span.
void reduce_by_rref(QVec& v, const QMat& rows, const std::vector<int>& pivots) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        Rational f = v[pivots[i]];
        if (f == 0) continue;
        for (std::size_t j = 0; j < v.size(); ++j) v[j] -= f * rows[i][j];
    }
}

/* Hermite normal form by integer row operations: echelon shape, positive
 * pivots, entries above a pivot reduced into [0, pivot).  Only the first
 * `reduce_cols` columns drive pivot selection (the remainder tags along,
 * which is how kernel transforms are extracted); by default all do.
 * Zero rows are dropped.  The result is the canonical basis of the row
 * lattice, so equal lattices give equal output. */
ZMat hnf_rows(ZMat rows, int reduce_cols = -1) {
    if (rows.empty()) return rows;
    const int cols = static_cast<int>(rows[0].size());
    if (reduce_cols < 0) reduce_cols = cols;
    ZMat fixed;
    for (int c = 0; c < reduce_cols; ++c) {
        // Euclid on the active rows until at most one is nonzero in column c.
        while (true) {
            std::size_t a = rows.size(), b = rows.size();
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (rows[r][c] == 0) continue;
                if (a == rows.size()) a = r;
                else { b = r; break; }
            }
            if (b == rows.size()) break;
            if (cmp(abs(rows[a][c]), abs(rows[b][c])) < 0) std::swap(a, b);
            Integer q = rows[a][c] / rows[b][c];  // truncated division shrinks |a[c]|
            for (int j = 0; j < cols; ++j) rows[a][j] -= q * rows[b][j];
        }
        std::size_t p = rows.size();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r][c] != 0) { p = r; break; }
        }
        if (p == rows.size()) continue;
        ZVec piv = rows[p];
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(p));
        if (piv[c] < 0) {
            for (auto& e : piv) e = -e;
        }
        for (auto& f : fixed) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), f[c].get_mpz_t(), piv[c].get_mpz_t());
            if (q != 0) {
                for (int j = 0; j < cols; ++j) f[j] -= q * piv[j];
            }
        }
        fixed.push_back(std::move(piv));
    }
    if (reduce_cols == cols) return fixed;
    // Keep the tag-along part of the unconsumed rows available to callers.
    for (auto& r : rows) fixed.push_back(std::move(r));
    return fixed;
}

Integer lcm_int(const Integer& a, const Integer& b) {
    Integer g;
    mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

/// Least common multiple of the denominators across a set of rows.
Integer common_denominator(const QMat& rows) {
    Integer l(1);
    for (const auto& row : rows)
        for (const auto& q : row) l = lcm_int(l, q.get_den());
    return l;
}

ZMat scale_to_integers(const QMat& rows, const Integer& lambda) {
    ZMat out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        ZVec zr;
        zr.reserve(row.size());
        for (const auto& q : row) {
            Rational s = q * Rational(lambda);
            zr.push_back(s.get_num());  // denominator is 1 by choice of lambda
        }
        out.push_back(std::move(zr));
    }
    return out;
}

/// Echelon column of an integer echelon row: first nonzero entry.
int pivot_col(const ZVec& row) {
    for (std::size_t j = 0; j < row.size(); ++j)
        if (row[j] != 0) return static_cast<int>(j);
    return -1;
}

/* Membership of v in the lattice spanned by echelon `basis` rows: peel off
 * each pivot with an exact integer quotient; membership iff the remainder
 * reaches zero. */
bool lattice_member(ZVec v, const ZMat& basis) {
    for (const auto& row : basis) {
        int p = pivot_col(row);
        if (p < 0) continue;
        if (v[p] == 0) continue;
        if (v[p] % row[p] != 0) return false;
        Integer q = v[p] / row[p];
        for (std::size_t j = 0; j < v.size(); ++j) v[j] -= q * row[j];
    }
    return std::all_of(v.begin(), v.end(), [](const Integer& z) { return z == 0; });
}

/* Coefficient flattening: ambient coordinate i of a scalar-entry vector
 * becomes a block of (1 + #labels) rational columns, the rational part
 * followed by the coefficient of each declared constant in label order. */
struct CoeffSpace {
    std::vector<std::string> labels;
    int width() const { return 1 + static_cast<int>(labels.size()); }
};

CoeffSpace coeff_space(const std::vector<const GeneratedGroup*>& groups) {
    std::set<std::string> seen;
    for (const auto* g : groups)
        for (const auto& gen : g->generators)
            for (const auto& entry : gen)
                for (const auto& [label, term] : entry.terms()) seen.insert(label);
    return {std::vector<std::string>(seen.begin(), seen.end())};
}

QVec flatten(const CoeffSpace& space, const std::vector<Scalar>& gen) {
    const int w = space.width();
    QVec out(gen.size() * static_cast<std::size_t>(w), Rational(0));
    for (std::size_t i = 0; i < gen.size(); ++i) {
        out[i * static_cast<std::size_t>(w)] = gen[i].rational_part();
        for (const auto& [label, term] : gen[i].terms()) {
            auto it = std::lower_bound(space.labels.begin(), space.labels.end(), label);
            std::size_t k = static_cast<std::size_t>(it - space.labels.begin());
            out[i * static_cast<std::size_t>(w) + 1 + k] = term.coeff;
        }
    }
    return out;
}

QMat flatten_all(const CoeffSpace& space, const GeneratedGroup& g) {
    QMat rows;
    rows.reserve(g.generators.size());
    for (const auto& gen : g.generators) rows.push_back(flatten(space, gen));
    return rows;
}

/// Ambient coordinates (blocks) containing a pivot column: the leading
/// coordinates achievable by nonzero elements of the rational span.
std::vector<int> leading_blocks(const std::vector<int>& pivots, int width) {
    std::vector<int> blocks;
    for (int p : pivots) {
        int b = p / width;
        if (blocks.empty() || blocks.back() != b) blocks.push_back(b);
    }
    return blocks;
}

/* The machinery behind group membership: the divisible generators in
 * reduced form plus the canonical lattice basis of the integer part
 * modulo them. */
struct MembershipContext {
    QMat div_rows;              // rref of the divisible generators
    std::vector<int> div_pivots;
    ZMat lattice;               // scaled echelon basis of the reduced integer part
    Integer lambda;             // the scaling that made the lattice integral
};

MembershipContext membership_context(const CoeffSpace& space, const GeneratedGroup& g) {
    MembershipContext ctx;
    QMat unflagged;
    for (std::size_t i = 0; i < g.generators.size(); ++i) {
        QVec row = flatten(space, g.generators[i]);
        if (g.divisible[i]) ctx.div_rows.push_back(std::move(row));
        else unflagged.push_back(std::move(row));
    }
    ctx.div_pivots = rref(ctx.div_rows);
    for (auto& row : unflagged) reduce_by_rref(row, ctx.div_rows, ctx.div_pivots);
    ctx.lambda = common_denominator(unflagged);
    ctx.lattice = hnf_rows(scale_to_integers(unflagged, ctx.lambda));
    return ctx;
}

/// Is v (flattened) an element of the group behind ctx?
bool group_member(const MembershipContext& ctx, QVec v) {
    reduce_by_rref(v, ctx.div_rows, ctx.div_pivots);
    if (is_zero_vec(v)) return true;  // inside the divisible part
    Integer mu = lcm_int(ctx.lambda, common_denominator({v}));
    // Scale the lattice and the target by the same factor; membership is
    // invariant under simultaneous scaling.
    ZMat basis = ctx.lattice;
    if (mu != ctx.lambda) {
        Integer f = mu / ctx.lambda;
        for (auto& row : basis)
            for (auto& e : row) e *= f;
    }
    ZVec target = scale_to_integers({std::move(v)}, mu)[0];
    return lattice_member(std::move(target), basis);
}

/// Is v (flattened) inside the rational span of the rows?
bool span_member(const QMat& rref_rows, const std::vector<int>& pivots, QVec v) {
    reduce_by_rref(v, rref_rows, pivots);
    return is_zero_vec(v);
}

} // namespace

GeneratedGroup make_group(int ambient_dim, std::vector<std::vector<Scalar>> generators,
                          std::vector<bool> divisible) {
    if (ambient_dim < 1) throw config_error("a group needs ambient dimension at least 1");
    if (generators.empty()) throw config_error("a group needs at least one generator");
    for (const auto& gen : generators) {
        if (static_cast<int>(gen.size()) != ambient_dim)
            throw config_error("generator length does not match the ambient dimension");
    }
    if (divisible.empty()) divisible.assign(generators.size(), false);
    if (divisible.size() != generators.size())
        throw config_error("divisible flag count does not match the generator count");
    return {ambient_dim, std::move(generators), std::move(divisible)};
}

std::string component_label(const ComponentInfo& c) {
    if (c.divisible) return "Q";
    if (c.generator == 1) return "Z";
    return "(" + rational_to_string(c.generator) + ")Z";
}

NormalizedGroup normalize(const GeneratedGroup& g) {
    QMat div_rows, int_rows;
    for (std::size_t i = 0; i < g.generators.size(); ++i) {
        QVec row;
        row.reserve(g.generators[i].size());
        for (const auto& entry : g.generators[i]) {
            if (!entry.is_rational())
                throw domain_error("normalization requires rational coordinates");
            row.push_back(entry.as_rational());
        }
        if (g.divisible[i]) div_rows.push_back(std::move(row));
        else int_rows.push_back(std::move(row));
    }

    NormalizedGroup out;
    out.ambient_dim = g.ambient_dim;

    // Divisible part: a rational subspace in reduced echelon form.
    std::vector<int> div_pivots = rref(div_rows);

    // Integer part modulo the divisible subspace: a lattice, in Hermite form.
    for (auto& row : int_rows) reduce_by_rref(row, div_rows, div_pivots);
    Integer lambda = common_denominator(int_rows);
    ZMat lat = hnf_rows(scale_to_integers(int_rows, lambda));

    struct Row {
        int lead;
        QVec coords;
        bool divisible;
    };
    std::vector<Row> rows;
    for (std::size_t i = 0; i < div_rows.size(); ++i)
        rows.push_back({div_pivots[i], std::move(div_rows[i]), true});
    for (auto& zr : lat) {
        int p = pivot_col(zr);
        if (p < 0) continue;
        QVec qr;
        qr.reserve(zr.size());
        for (const auto& e : zr) qr.emplace_back(Rational(e) / Rational(lambda));
        rows.push_back({p, std::move(qr), false});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.lead < b.lead; });

    out.rank = static_cast<int>(rows.size());
    for (auto& row : rows) {
        out.leading.push_back(row.lead);
        out.row_divisible.push_back(row.divisible);
        if (row.divisible) out.components.push_back({Rational(1), true});
        else out.components.push_back({row.coords[static_cast<std::size_t>(row.lead)], false});
        out.basis.push_back(std::move(row.coords));
    }
    return out;
}

std::vector<Rational> embed(const NormalizedGroup& g, const std::vector<Rational>& ambient) {
    if (static_cast<int>(ambient.size()) != g.ambient_dim)
        throw config_error("vector length does not match the ambient dimension");
    std::vector<Rational> out;
    out.reserve(g.leading.size());
    for (int j : g.leading) out.push_back(ambient[static_cast<std::size_t>(j)]);
    return out;
}

Skeleton skeleton(const NormalizedGroup& g) { return {g.rank, g.components}; }

ConvexSubgroup initseg_to_convex(const NormalizedGroup& g, int cut) {
    if (cut < 0 || cut > g.rank)
        throw domain_error("the cut must lie between 0 and the rank");
    return {cut, g.rank};
}

bool convex_contains(const ConvexSubgroup& h, const std::vector<Rational>& v) {
    if (static_cast<int>(v.size()) != h.rank)
        throw config_error("vector length does not match the rank");
    for (int i = 0; i < h.cut; ++i)
        if (v[static_cast<std::size_t>(i)] != 0) return false;
    return true;
}

std::string convex_to_string(const ConvexSubgroup& h) {
    if (h.cut == 0) return "G";
    if (h.cut == h.rank) return "{0}";
    std::ostringstream os;
    os << "{0}^" << h.cut << " x G(" << (h.cut + 1) << ".." << h.rank << ")";
    return os.str();
}

bool archimedean_equivalent(const NormalizedGroup& g, const std::vector<Rational>& beta,
                            const std::vector<Rational>& gamma) {
    if (static_cast<int>(beta.size()) != g.rank || static_cast<int>(gamma.size()) != g.rank)
        throw config_error("vector length does not match the rank");
    auto lead = [](const std::vector<Rational>& v) {
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) return static_cast<int>(i);
        return -1;
    };
    int lb = lead(beta), lg = lead(gamma);
    if (lb < 0 || lg < 0)
        throw domain_error("archimedean comparison needs nonzero elements");
    return lb == lg;
}

int rational_rank(const GeneratedGroup& g) {
    CoeffSpace space = coeff_space({&g});
    QMat rows = flatten_all(space, g);
    return static_cast<int>(rref(rows).size());
}

std::string small_kind_name(SmallKind k) {
    switch (k) {
        case SmallKind::Commensurable: return "commensurable";
        case SmallKind::PreservesRank: return "preserves-rank";
        case SmallKind::IncreasesRankByOne: return "increases-rank-by-one";
    }
    throw contract_error("unknown smallness kind");
}

SmallnessReport is_small_extension(const GeneratedGroup& gamma, const GeneratedGroup& lambda) {
    if (gamma.ambient_dim != lambda.ambient_dim)
        throw domain_error("the groups must share one ambient space");
    CoeffSpace space = coeff_space({&gamma, &lambda});

    // Containment: every generator of the subgroup must lie in the extension,
    // rational multiples included for the divisible ones.
    MembershipContext ext = membership_context(space, lambda);
    for (std::size_t i = 0; i < gamma.generators.size(); ++i) {
        QVec v = flatten(space, gamma.generators[i]);
        if (gamma.divisible[i]) {
            if (!span_member(ext.div_rows, ext.div_pivots, v))
                throw domain_error("the subgroup's divisible part is not contained in the extension");
        } else if (!group_member(ext, v)) {
            throw domain_error("the subgroup is not contained in the extension");
        }
    }

    SmallnessReport rep;
    QMat sub_rows = flatten_all(space, gamma);
    QMat ext_rows = flatten_all(space, lambda);
    std::vector<int> sub_pivots = rref(sub_rows);
    std::vector<int> ext_pivots = rref(ext_rows);
    rep.rr_sub = static_cast<int>(sub_pivots.size());
    rep.rr_ext = static_cast<int>(ext_pivots.size());
    rep.prin_sub = leading_blocks(sub_pivots, space.width());
    rep.prin_ext = leading_blocks(ext_pivots, space.width());

    int diff = rep.rr_ext - rep.rr_sub;
    if (diff == 0) {
        rep.small = true;
        rep.kind = SmallKind::Commensurable;
        return rep;
    }
    if (diff >= 2) {
        std::ostringstream os;
        os << "the rational rank grows by " << diff;
        rep.reason = os.str();
        return rep;
    }
    for (std::size_t i = 0; i < lambda.generators.size(); ++i) {
        if (!lambda.divisible[i]) continue;
        if (!span_member(sub_rows, sub_pivots, flatten(space, lambda.generators[i]))) {
            rep.reason = "a divisible generator lies outside the rational span of the subgroup";
            return rep;
        }
    }
    rep.small = true;
    rep.kind = (rep.prin_sub == rep.prin_ext) ? SmallKind::PreservesRank
                                              : SmallKind::IncreasesRankByOne;
    return rep;
}

} // namespace smallext
