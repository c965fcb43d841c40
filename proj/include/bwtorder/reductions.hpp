#ifndef BWTORDER_REDUCTIONS_HPP
#define BWTORDER_REDUCTIONS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bwtorder/alphabet.hpp"
#include "bwtorder/bwt.hpp"
#include "bwtorder/cao.hpp"
#include "bwtorder/errors.hpp"

namespace bwtorder {

/// (1,2)-TSP Path instance: complete graph on `vertices`, weight 1 on the
/// listed edges and weight 2 everywhere else.
class TspInstance {
public:
    using Edge = std::pair<std::uint32_t, std::uint32_t>;

    TspInstance(std::size_t vertices, std::vector<Edge> unit_edges) : n_(vertices), edges_(std::move(unit_edges)) {
        adjacent_.assign(n_ * n_, 0);
        for (auto [u, v] : edges_) {
            if (u >= n_ || v >= n_) throw invalid_input("edge (" + std::to_string(u) + "," + std::to_string(v) + ") names a missing vertex");
            if (u == v) throw invalid_input("self-loop on vertex " + std::to_string(u));
            if (adjacent_[u * n_ + v]) throw invalid_input("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
            adjacent_[u * n_ + v] = adjacent_[v * n_ + u] = 1;
        }
    }

    /// Vertex count is one more than the largest endpoint.
    static TspInstance from_edges(std::vector<Edge> edges) {
        std::size_t n = 0;
        for (auto [u, v] : edges) n = std::max<std::size_t>({n, u + 1u, v + 1u});
        return TspInstance(n, std::move(edges));
    }

    std::size_t vertices() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& unit_edges() const noexcept { return edges_; }
    bool unit(std::uint32_t u, std::uint32_t v) const { return adjacent_[u * n_ + v] != 0; }
    unsigned weight(std::uint32_t u, std::uint32_t v) const { return unit(u, v) ? 1 : 2; }

    std::size_t path_weight(std::span<const std::uint32_t> path) const {
        std::size_t w = 0;
        for (std::size_t k = 0; k + 1 < path.size(); ++k) w += weight(path[k], path[k + 1]);
        return w;
    }

private:
    std::size_t n_;
    std::vector<Edge> edges_;
    std::vector<std::uint8_t> adjacent_;
};

/// Binary matrix for the column-ordering problem. When built from a graph:
/// rows [0, m) are edge rows, the next 2*ell rows alternate a single 1 in c_t
/// and in c_s, column 0 is c_s, column cols-1 is c_t and vertex v is column
/// v + 1.
struct IncidenceGadget {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> cells;  // row-major
    std::size_t edge_rows = 0;
    std::size_t ell = 0;
    bool has_end_columns = false;
    bool outside_theorem_regime = false;

    std::uint8_t at(std::size_t i, std::size_t j) const { return cells[i * cols + j]; }
    std::size_t cs() const noexcept { return 0; }
    std::size_t ct() const noexcept { return cols - 1; }
    std::size_t vertices() const noexcept { return has_end_columns ? cols - 2 : cols; }

    bool is_end_column(std::size_t j) const noexcept { return has_end_columns && (j == cs() || j == ct()); }

    std::size_t ones() const { return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1})); }

    /// Arbitrary matrix without graph structure, used for illustrations.
    static IncidenceGadget from_matrix(const std::vector<std::vector<int>>& m) {
        IncidenceGadget g;
        g.rows = m.size();
        g.cols = m.empty() ? 0 : m.front().size();
        for (const auto& row : m) {
            if (row.size() != g.cols) throw invalid_input("ragged matrix");
            for (int x : row) {
                if (x != 0 && x != 1) throw invalid_input("matrix entries must be 0 or 1");
                g.cells.push_back(static_cast<std::uint8_t>(x));
            }
        }
        g.edge_rows = g.rows;
        g.outside_theorem_regime = true;
        return g;
    }
};

/// Modified incidence matrix of the unit-edge graph; ell defaults to 4m.
inline IncidenceGadget build_gadget_matrix(const TspInstance& g, std::optional<std::size_t> ell = std::nullopt) {
    const std::size_t m = g.edge_count();
    if (m == 0) throw invalid_input("graph needs at least one unit edge");
    IncidenceGadget gad;
    gad.edge_rows = m;
    gad.ell = ell.value_or(4 * m);
    gad.outside_theorem_regime = gad.ell != 4 * m;
    gad.has_end_columns = true;
    gad.rows = m + 2 * gad.ell;
    gad.cols = g.vertices() + 2;
    gad.cells.assign(gad.rows * gad.cols, 0);
    for (std::size_t i = 0; i < m; ++i) {
        auto [u, v] = g.unit_edges()[i];
        gad.cells[i * gad.cols + u + 1] = 1;
        gad.cells[i * gad.cols + v + 1] = 1;
    }
    // 1-based rows m+1, m+3, ... carry c_t; m+2, m+4, ... carry c_s.
    for (std::size_t k = 0; k < 2 * gad.ell; ++k) {
        const std::size_t i = m + k;
        gad.cells[i * gad.cols + (k % 2 == 0 ? gad.ct() : gad.cs())] = 1;
    }
    return gad;
}

/// order[k] is the column placed at position k.
struct ColumnOrdering {
    std::vector<std::uint32_t> order;

    static ColumnOrdering identity(std::size_t cols) {
        ColumnOrdering c;
        c.order.resize(cols);
        std::iota(c.order.begin(), c.order.end(), 0u);
        return c;
    }

    bool operator==(const ColumnOrdering&) const = default;
    auto operator<=>(const ColumnOrdering&) const = default;
};

namespace detail {
inline void check_columns(const IncidenceGadget& gad, const ColumnOrdering& pi) {
    if (pi.order.size() != gad.cols) throw invalid_input("column ordering has the wrong length");
    std::vector<char> seen(gad.cols, 0);
    for (auto c : pi.order) {
        if (c >= gad.cols || seen[c]) throw invalid_input("column ordering is not a permutation");
        seen[c] = 1;
    }
}
}  // namespace detail

/// L(M_pi): the rows of M with columns permuted by pi, concatenated top to
/// bottom.
inline std::vector<std::uint8_t> linearize(const IncidenceGadget& gad, const ColumnOrdering& pi) {
    detail::check_columns(gad, pi);
    std::vector<std::uint8_t> out;
    out.reserve(gad.rows * gad.cols);
    for (std::size_t i = 0; i < gad.rows; ++i)
        for (auto j : pi.order) out.push_back(gad.at(i, j));
    return out;
}

/// Paths induced by a column ordering once c_s and c_t are dropped: vertex
/// columns that end up consecutive and share an edge row.
struct TspSolution {
    std::vector<std::uint32_t> hamiltonian_path;  // vertex ids, column order
    std::vector<std::vector<std::uint32_t>> paths;
    std::size_t m1 = 0;
    std::size_t cost = 0;
};

inline TspInstance graph_of(const IncidenceGadget& gad) {
    if (!gad.has_end_columns) throw precondition_error("matrix was not built from a graph");
    std::vector<TspInstance::Edge> edges;
    for (std::size_t i = 0; i < gad.edge_rows; ++i) {
        std::vector<std::uint32_t> ends;
        for (std::size_t j = 1; j + 1 < gad.cols; ++j)
            if (gad.at(i, j)) ends.push_back(static_cast<std::uint32_t>(j - 1));
        if (ends.size() != 2) throw internal_error("edge row without exactly two ones");
        edges.emplace_back(ends[0], ends[1]);
    }
    return TspInstance(gad.vertices(), std::move(edges));
}

inline TspSolution extract_tsp_solution(const IncidenceGadget& gad, const ColumnOrdering& pi) {
    detail::check_columns(gad, pi);
    const auto g = graph_of(gad);
    TspSolution sol;
    for (auto c : pi.order)
        if (!gad.is_end_column(c)) sol.hamiltonian_path.push_back(c - 1);
    const auto& h = sol.hamiltonian_path;
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (k == 0 || !g.unit(h[k - 1], h[k])) {
            sol.paths.emplace_back();
        } else {
            ++sol.m1;
        }
        sol.paths.back().push_back(h[k]);
    }
    sol.cost = g.path_weight(h);
    return sol;
}

/// Column-ordering side of a reduction report.
struct CoCost {
    std::vector<std::uint8_t> linearization;
    std::size_t runs = 0;
    std::size_t m1 = 0;
    /// c_s first and c_t last.
    bool ends_in_place = false;
    /// 2 m1 + 4 (m - m1) + 2 ell + 1, meaningful when ends_in_place.
    std::size_t closed_form = 0;
    std::size_t tsp_cost = 0;
};

inline CoCost linearize_and_cost(const IncidenceGadget& gad, const ColumnOrdering& pi) {
    CoCost c;
    c.linearization = linearize(gad, pi);
    c.runs = count_runs(c.linearization);
    if (gad.has_end_columns) {
        const auto tsp = extract_tsp_solution(gad, pi);
        c.m1 = tsp.m1;
        c.tsp_cost = tsp.cost;
        c.ends_in_place = pi.order.front() == gad.cs() && pi.order.back() == gad.ct();
        const std::size_t m = gad.edge_rows;
        c.closed_form = 2 * c.m1 + 4 * (m - c.m1) + 2 * gad.ell + 1;
    }
    return c;
}

/// Where a substring of the alphabet-ordering text came from: a 1 at
/// (row, column), or the all-zero substring of a column when row is empty.
/// Rows and columns are 0-based here; symbol names use 1-based numbering.
struct SubstringOrigin {
    std::optional<std::uint32_t> row;
    std::uint32_t column;
};

struct AoInstance {
    Text text;
    std::vector<SubstringOrigin> origins;  // substring k ends with $_{k+1}
    std::vector<std::size_t> starts;       // offset of substring k in the text
    Symbol zero = 0, one = 0, two = 0;
    std::vector<Symbol> column_symbol;  // C_{j+1}

    std::size_t substrings() const noexcept { return origins.size(); }
    /// Symbols in the text's alphabet, sentinel excluded.
    std::size_t sigma() const noexcept { return text.alphabet.size() - 1; }
};

/// For every 1 at 1-based (i, j) the substring 1 0^{i+1} 2 C_j, then for every
/// column 0^{rows+2} 2 C_j; each followed by its own terminator. Substrings
/// are emitted row-major, then the column substrings left to right.
inline AoInstance build_ao_string(const IncidenceGadget& gad) {
    const std::size_t k = gad.ones() + gad.cols;
    std::vector<std::string> terms, regs{"0", "1", "2"};
    for (std::size_t i = 1; i <= k; ++i) terms.push_back("$" + std::to_string(i));
    for (std::size_t j = 1; j <= gad.cols; ++j) regs.push_back("C" + std::to_string(j));

    AoInstance ao;
    ao.text.alphabet = Alphabet(std::move(terms), std::move(regs));
    const auto& a = ao.text.alphabet;
    ao.zero = a.regular(0);
    ao.one = a.regular(1);
    ao.two = a.regular(2);
    for (std::size_t j = 0; j < gad.cols; ++j) ao.column_symbol.push_back(a.regular(3 + j));

    auto emit = [&](std::optional<std::uint32_t> row, std::uint32_t col, std::size_t zeros, bool lead_one) {
        ao.starts.push_back(ao.text.symbols.size());
        if (lead_one) ao.text.symbols.push_back(ao.one);
        ao.text.symbols.insert(ao.text.symbols.end(), zeros, ao.zero);
        ao.text.symbols.push_back(ao.two);
        ao.text.symbols.push_back(ao.column_symbol[col]);
        ao.text.symbols.push_back(a.terminator(ao.origins.size()));
        ao.origins.push_back({row, col});
    };
    for (std::size_t i = 0; i < gad.rows; ++i)
        for (std::size_t j = 0; j < gad.cols; ++j)
            if (gad.at(i, j)) emit(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), i + 2, true);
    for (std::size_t j = 0; j < gad.cols; ++j) emit(std::nullopt, static_cast<std::uint32_t>(j), gad.rows + 2, false);
    return ao;
}

/// The substrings without terminators, as a collection over the regular
/// symbols relabelled by rank in `regular_order` (smallest first).
inline StringCollection ao_collection(const AoInstance& ao, std::span<const Symbol> regular_order) {
    const auto& a = ao.text.alphabet;
    std::vector<std::uint32_t> rank(a.size(), 0);
    for (std::uint32_t r = 0; r < regular_order.size(); ++r) rank[regular_order[r]] = r;
    StringCollection c;
    c.sigma = a.regular_count();
    for (std::size_t k = 0; k < ao.substrings(); ++k) {
        auto& s = c.strings.emplace_back();
        const std::size_t end = k + 1 < ao.substrings() ? ao.starts[k + 1] - 1 : ao.text.size() - 1;
        for (std::size_t p = ao.starts[k]; p < end; ++p) s.push_back(rank[ao.text.symbols[p]]);
    }
    for (auto s : regular_order) c.names.push_back(a.name(s));
    return c;
}

/// Regular symbols in template order: 1, 2, 0, then the column symbols as
/// ordered by pi.
inline std::vector<Symbol> template_regular_order(const AoInstance& ao, const ColumnOrdering& pi) {
    std::vector<Symbol> seq{ao.one, ao.two, ao.zero};
    for (auto j : pi.order) seq.push_back(ao.column_symbol.at(j));
    return seq;
}

struct CanonicalOrder {
    AlphabetOrdering ordering;
    /// rho(L(M_pi)) - 1.
    std::size_t r0 = 0;
    /// Runs of the terminated text (no extra sentinel) under `ordering`.
    std::size_t ao_runs = 0;
    std::size_t co_runs = 0;
};

/// Template ordering for any column order: terminators, 1, 2, 0, then the
/// column symbols by pi. The terminator sub-order is the optimal one for the
/// fixed regular order, found by the constrained-ordering solver (the text is
/// exactly a terminated collection).
inline CanonicalOrder template_alphabet_order(const IncidenceGadget& gad, const AoInstance& ao, const ColumnOrdering& pi) {
    detail::check_columns(gad, pi);
    const auto regs = template_regular_order(ao, pi);
    const auto sol = solve_cao(ao_collection(ao, regs));
    std::vector<Symbol> seq{kSentinel};
    for (auto s : sol.order.pi) seq.push_back(ao.text.alphabet.terminator(s));
    seq.insert(seq.end(), regs.begin(), regs.end());

    CanonicalOrder out;
    out.ordering = AlphabetOrdering::from_sequence(ao.text.alphabet, seq);
    out.ao_runs = sol.runs;
    out.co_runs = count_runs(linearize(gad, pi));
    out.r0 = out.co_runs - 1;
    return out;
}

/// Ordering with every desired property for a column order with c_s first
/// and c_t last.
inline CanonicalOrder canonical_alphabet_order(const IncidenceGadget& gad, const AoInstance& ao, const ColumnOrdering& pi) {
    detail::check_columns(gad, pi);
    if (gad.has_end_columns && (pi.order.front() != gad.cs() || pi.order.back() != gad.ct()))
        throw precondition_error("column ordering must place c_s first and c_t last");
    return template_alphabet_order(gad, ao, pi);
}

inline CanonicalOrder canonical_alphabet_order(const IncidenceGadget& gad, const ColumnOrdering& pi) {
    return canonical_alphabet_order(gad, build_ao_string(gad), pi);
}

/// Relative order of the column symbols.
inline ColumnOrdering extract_column_order(const AoInstance& ao, const AlphabetOrdering& ord) {
    ColumnOrdering pi = ColumnOrdering::identity(ao.column_symbol.size());
    std::stable_sort(pi.order.begin(), pi.order.end(), [&](std::uint32_t x, std::uint32_t y) {
        return ord.rank(ao.column_symbol[x]) < ord.rank(ao.column_symbol[y]);
    });
    return pi;
}

/// Minimum path weight over all vertex permutations.
inline std::size_t tsp_optimum(const TspInstance& g) {
    std::vector<std::uint32_t> p(g.vertices());
    std::iota(p.begin(), p.end(), 0u);
    std::size_t best = SIZE_MAX;
    do {
        best = std::min(best, g.path_weight(p));
    } while (std::next_permutation(p.begin(), p.end()));
    return best;
}

struct LReductionReport {
    std::size_t n = 0, m = 0, ell = 0;
    bool outside_theorem_regime = false;
    std::size_t opt_tsp = 0;
    std::size_t opt_co = 0;
    /// Best alphabet-ordering cost among template orderings over all column
    /// orders with c_s first and c_t last.
    std::size_t opt_ao = 0;
    std::size_t m1_star = 0;
    double c_ratio = 0;  // C = ceil(m / n)
    double alpha = 0;    // 32 C + 1
    bool condition_i = false;
    double beta_phase1 = 0.5;
    bool condition_ii_phase1 = true;
    double beta_phase2 = 1.0;
    bool condition_ii_phase2 = true;
    std::size_t phase1_checked = 0;
    std::size_t phase2_checked = 0;
    std::vector<std::string> violations;

    bool ok() const noexcept { return condition_i && condition_ii_phase1 && condition_ii_phase2; }
};

/// Checks both L-reduction conditions numerically. Optima are exact
/// (exhaustive), so the instance must be small. Every sampled column order
/// is checked in phase 1 (TSP vs column ordering, beta = 1/2); in phase 2
/// (column ordering vs alphabet ordering, beta = 1) each sample is lifted to
/// its template alphabet ordering, and additionally to the same ordering with
/// the terminators left in index order.
inline LReductionReport verify_l_reduction(const TspInstance& g, const std::vector<ColumnOrdering>& samples,
                                           std::optional<std::size_t> ell = std::nullopt, std::size_t max_vertices = 6) {
    if (g.vertices() > max_vertices)
        throw limit_exceeded("exact optima need at most " + std::to_string(max_vertices) + " vertices");
    const auto gad = build_gadget_matrix(g, ell);
    const auto ao = build_ao_string(gad);

    LReductionReport rep;
    rep.n = g.vertices();
    rep.m = g.edge_count();
    rep.ell = gad.ell;
    rep.outside_theorem_regime = gad.outside_theorem_regime;
    rep.opt_tsp = tsp_optimum(g);
    rep.m1_star = 2 * (rep.n - 1) - rep.opt_tsp;

    rep.opt_co = SIZE_MAX;
    rep.opt_ao = SIZE_MAX;
    auto all = ColumnOrdering::identity(gad.cols);
    do {
        rep.opt_co = std::min(rep.opt_co, count_runs(linearize(gad, all)));
        if (all.order.front() == gad.cs() && all.order.back() == gad.ct())
            rep.opt_ao = std::min(rep.opt_ao, template_alphabet_order(gad, ao, all).ao_runs);
    } while (std::next_permutation(all.order.begin(), all.order.end()));

    rep.c_ratio = std::ceil(static_cast<double>(rep.m) / static_cast<double>(rep.n));
    rep.alpha = 32.0 * rep.c_ratio + 1.0;
    rep.condition_i = static_cast<double>(rep.opt_co) <= rep.alpha * static_cast<double>(rep.opt_tsp);
    if (!rep.condition_i) rep.violations.push_back("condition (i): OPT_CO exceeds alpha * OPT_TSP");

    const auto identity_terms = [&](const AlphabetOrdering& o) {
        std::vector<Symbol> seq(o.sequence().begin(), o.sequence().end());
        std::sort(seq.begin() + 1, seq.begin() + 1 + static_cast<std::ptrdiff_t>(ao.text.alphabet.terminator_count()));
        return AlphabetOrdering::from_sequence(ao.text.alphabet, seq);
    };

    for (const auto& pi : samples) {
        const auto co = linearize_and_cost(gad, pi);
        ++rep.phase1_checked;
        const double lhs1 = static_cast<double>(co.tsp_cost) - static_cast<double>(rep.opt_tsp);
        const double rhs1 = rep.beta_phase1 * (static_cast<double>(co.runs) - static_cast<double>(rep.opt_co));
        if (lhs1 > rhs1) {
            rep.condition_ii_phase1 = false;
            rep.violations.push_back("phase 1 condition (ii) fails for a column order with m1 = " + std::to_string(co.m1));
        }

        const auto lifted = template_alphabet_order(gad, ao, pi);
        const auto plain = identity_terms(lifted.ordering);
        const std::pair<const AlphabetOrdering*, std::size_t> candidates[] = {
            {&lifted.ordering, lifted.ao_runs},
            {&plain, build_bwt_terminated(ao.text, plain).runs},
        };
        for (const auto& [ord, ao_runs] : candidates) {
            ++rep.phase2_checked;
            const auto back = extract_column_order(ao, *ord);
            const auto co_back = count_runs(linearize(gad, back));
            const double lhs2 = static_cast<double>(co_back) - static_cast<double>(rep.opt_co);
            const double rhs2 = rep.beta_phase2 * (static_cast<double>(ao_runs) - static_cast<double>(rep.opt_ao));
            if (lhs2 > rhs2) {
                rep.condition_ii_phase2 = false;
                rep.violations.push_back("phase 2 condition (ii) fails: co " + std::to_string(co_back) + ", ao " +
                                         std::to_string(ao_runs));
            }
        }
    }
    return rep;
}

/// Every column ordering of the gadget, lexicographically.
inline std::vector<ColumnOrdering> all_column_orders(std::size_t cols) {
    std::vector<ColumnOrdering> out;
    auto pi = ColumnOrdering::identity(cols);
    do {
        out.push_back(pi);
    } while (std::next_permutation(pi.order.begin(), pi.order.end()));
    return out;
}

}  // namespace bwtorder

#endif
