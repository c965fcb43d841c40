#include <gtest/gtest.h>

#include <random>

#include "bwtorder/reductions.hpp"
#include "oracles.hpp"

using namespace bwtorder;

namespace {

TspInstance path3() { return TspInstance(3, {{0, 1}, {1, 2}}); }

IncidenceGadget matrix3x3() { return IncidenceGadget::from_matrix({{0, 1, 0}, {0, 0, 1}, {1, 1, 0}}); }

/// Substring k of the AO text without its terminator, names joined.
std::vector<std::string> bare_substrings(const AoInstance& ao) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < ao.substrings(); ++k) {
        const std::size_t end = (k + 1 < ao.substrings() ? ao.starts[k + 1] : ao.text.size()) - 1;
        std::string s;
        for (std::size_t p = ao.starts[k]; p < end; ++p) s += ao.text.alphabet.name(ao.text.symbols[p]);
        out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool extremal(const IncidenceGadget& g, const ColumnOrdering& pi) {
    return pi.order.front() == g.cs() && pi.order.back() == g.ct();
}

std::vector<ColumnOrdering> extremal_orders(const IncidenceGadget& g) {
    std::vector<ColumnOrdering> out;
    for (auto& p : all_column_orders(g.cols))
        if (extremal(g, p)) out.push_back(p);
    return out;
}

}  // namespace

TEST(Gadget, PathGraphDimensions) {
    const auto g = build_gadget_matrix(path3(), 8);
    EXPECT_EQ(g.rows, 18u);
    EXPECT_EQ(g.cols, 5u);
    EXPECT_FALSE(g.outside_theorem_regime);
    EXPECT_TRUE(build_gadget_matrix(path3(), 3).outside_theorem_regime);
}

TEST(Gadget, SingleEdge) {
    const auto g = build_gadget_matrix(TspInstance(2, {{0, 1}}));
    EXPECT_EQ(g.rows, 9u);
    EXPECT_EQ(g.cols, 4u);
    EXPECT_EQ(g.ell, 4u);
    EXPECT_FALSE(g.outside_theorem_regime);
    EXPECT_EQ(g.at(0, 0), 0);
    EXPECT_EQ(g.at(0, 1), 1);
    EXPECT_EQ(g.at(0, 2), 1);
    EXPECT_EQ(g.at(0, 3), 0);
}

TEST(Gadget, RowStructure) {
    const TspInstance graph(4, {{0, 1}, {2, 3}, {1, 3}});
    const auto g = build_gadget_matrix(graph);
    const std::size_t m = 3;
    for (std::size_t i = 0; i < g.rows; ++i) {
        std::size_t ones = 0;
        for (std::size_t j = 0; j < g.cols; ++j) ones += g.at(i, j);
        if (i < m) {
            EXPECT_EQ(ones, 2u);
            EXPECT_EQ(g.at(i, g.cs()) + g.at(i, g.ct()), 0);
        } else {
            EXPECT_EQ(ones, 1u);
            // 1-based rows m+1, m+3, ... hold c_t
            const bool odd_offset = (i + 1 - m) % 2 == 1;
            EXPECT_EQ(g.at(i, odd_offset ? g.ct() : g.cs()), 1) << "row " << i;
        }
    }
}

TEST(Gadget, RejectsBadGraphs) {
    EXPECT_THROW(TspInstance(3, {{0, 0}}), invalid_input);
    EXPECT_THROW(TspInstance(3, {{0, 1}, {1, 0}}), invalid_input);
    EXPECT_THROW(TspInstance(2, {{0, 2}}), invalid_input);
    EXPECT_THROW(build_gadget_matrix(TspInstance(3, {})), invalid_input);
}

TEST(Linearize, AllZeroMatrix) {
    const auto g = IncidenceGadget::from_matrix({{0, 0, 0}, {0, 0, 0}});
    for (auto& p : all_column_orders(3)) EXPECT_EQ(linearize_and_cost(g, p).runs, 1u);
}

TEST(Linearize, PathGraphBothEdgesAdjacent) {
    const auto g = build_gadget_matrix(path3(), 8);
    const auto c = linearize_and_cost(g, ColumnOrdering{{0, 1, 2, 3, 4}});
    EXPECT_TRUE(c.ends_in_place);
    EXPECT_EQ(c.m1, 2u);
    EXPECT_EQ(c.runs, 21u);
    EXPECT_EQ(c.runs, c.closed_form);
}

TEST(Linearize, RejectsNonPermutations) {
    const auto g = build_gadget_matrix(path3());
    EXPECT_THROW(linearize(g, ColumnOrdering{{0, 1, 2, 3}}), invalid_input);
    EXPECT_THROW(linearize(g, ColumnOrdering{{0, 1, 1, 3, 4}}), invalid_input);
}

TEST(Linearize, CostIdentityOnRandomOrders) {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng() % 6;
        std::vector<TspInstance::Edge> edges;
        for (std::uint32_t u = 0; u < n; ++u)
            for (std::uint32_t v = u + 1; v < n; ++v)
                if (rng() % 3 == 0) edges.emplace_back(u, v);
        if (edges.empty()) edges.emplace_back(0, 1);
        const TspInstance graph(n, edges);
        const auto g = build_gadget_matrix(graph);
        std::vector<std::uint32_t> inner(n);
        std::iota(inner.begin(), inner.end(), 1u);
        std::shuffle(inner.begin(), inner.end(), rng);
        ColumnOrdering pi;
        pi.order.push_back(0);
        pi.order.insert(pi.order.end(), inner.begin(), inner.end());
        pi.order.push_back(static_cast<std::uint32_t>(n + 1));
        const auto c = linearize_and_cost(g, pi);
        ASSERT_EQ(c.runs, c.closed_form);
        ASSERT_EQ(c.runs, oracle::runs(c.linearization));
        ASSERT_EQ(c.tsp_cost, c.m1 + 2 * (n - 1 - c.m1));
    }
}

TEST(Linearize, MisplacedEndColumnsCostAtLeastThreeEll) {
    for (const auto& graph : {TspInstance(2, {{0, 1}}), path3(), TspInstance(3, {{0, 1}, {1, 2}, {0, 2}})})
        for (std::size_t ell : {1u, 2u, 4u, 8u}) {
            const auto g = build_gadget_matrix(graph, ell);
            for (auto& p : all_column_orders(g.cols)) {
                const bool misplaced = (p.order.front() != g.cs() && p.order.back() != g.cs()) ||
                                       (p.order.front() != g.ct() && p.order.back() != g.ct());
                if (misplaced) {
                    ASSERT_GE(linearize_and_cost(g, p).runs, 3 * ell);
                }
            }
        }
}

TEST(Linearize, SwappedEndsCostOneMore) {
    const auto g = build_gadget_matrix(path3());
    const auto fwd = linearize_and_cost(g, ColumnOrdering{{0, 1, 2, 3, 4}});
    const auto swapped = linearize_and_cost(g, ColumnOrdering{{4, 1, 2, 3, 0}});
    EXPECT_EQ(swapped.runs, fwd.runs + 1);
}

TEST(Linearize, OptimumMaximisesM1) {
    for (const auto& graph : {path3(), TspInstance(4, {{0, 1}, {2, 3}}), TspInstance(4, {{0, 1}, {0, 2}, {0, 3}})}) {
        const auto g = build_gadget_matrix(graph);
        std::size_t best = SIZE_MAX, best_m1 = 0;
        for (auto& p : all_column_orders(g.cols)) {
            const auto c = linearize_and_cost(g, p);
            best = std::min(best, c.runs);
            if (extremal(g, p)) best_m1 = std::max(best_m1, c.m1);
        }
        for (auto& p : all_column_orders(g.cols)) {
            const auto c = linearize_and_cost(g, p);
            if (c.runs == best) {
                EXPECT_TRUE(extremal(g, p));
                EXPECT_EQ(c.m1, best_m1);
            }
        }
    }
}

TEST(Tsp, NoAdjacentEdges) {
    const TspInstance graph(4, {{0, 2}, {1, 3}});
    const auto g = build_gadget_matrix(graph);
    const auto s = extract_tsp_solution(g, ColumnOrdering::identity(g.cols));
    EXPECT_EQ(s.m1, 0u);
    EXPECT_EQ(s.cost, 6u);
    EXPECT_EQ(s.paths.size(), 4u);
}

TEST(Tsp, HamiltonianPathInOrder) {
    const TspInstance graph(4, {{0, 1}, {1, 2}, {2, 3}});
    const auto g = build_gadget_matrix(graph);
    const auto s = extract_tsp_solution(g, ColumnOrdering::identity(g.cols));
    EXPECT_EQ(s.m1, 3u);
    EXPECT_EQ(s.cost, 3u);
    EXPECT_EQ(s.paths, (std::vector<std::vector<std::uint32_t>>{{0, 1, 2, 3}}));
}

TEST(Tsp, RandomOrdersOnK4MatchTourWeight) {
    const TspInstance graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    const auto g = build_gadget_matrix(graph);
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 50; ++trial) {
        auto pi = ColumnOrdering::identity(g.cols);
        std::shuffle(pi.order.begin(), pi.order.end(), rng);
        const auto s = extract_tsp_solution(g, pi);
        std::size_t w = 0;
        for (std::size_t k = 0; k + 1 < s.hamiltonian_path.size(); ++k) w += graph.weight(s.hamiltonian_path[k], s.hamiltonian_path[k + 1]);
        EXPECT_EQ(s.cost, w);
        EXPECT_EQ(s.cost, 3u);
    }
}

TEST(AoString, ThreeByThreeSubstrings) {
    const auto ao = build_ao_string(matrix3x3());
    std::vector<std::string> expect = {"1000" "2C3", "00000" "2C3", "100" "2C2", "00000" "2C2",
                                       "10000" "2C2", "10000" "2C1", "00000" "2C1"};
    std::sort(expect.begin(), expect.end());
    EXPECT_EQ(bare_substrings(ao), expect);
    EXPECT_EQ(ao.substrings(), 7u);
}

TEST(AoString, SizesFollowClosedForms) {
    for (const auto& graph : {TspInstance(2, {{0, 1}}), path3(), TspInstance(4, {{0, 1}, {2, 3}, {1, 3}})})
        for (std::size_t ell : std::vector<std::size_t>{1, 3, 4 * graph.edge_count()}) {
            const auto g = build_gadget_matrix(graph, ell);
            const auto ao = build_ao_string(g);
            const std::size_t m = graph.edge_count(), cols = g.cols, rows = g.rows;
            EXPECT_EQ(ao.sigma(), 3 + 2 * cols + 2 * m + 2 * ell);
            EXPECT_EQ(ao.substrings(), 2 * m + 2 * ell + cols);
            std::size_t length = cols * (rows + 5);
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t j = 0; j < cols; ++j)
                    if (g.at(i, j)) length += (i + 1) + 5;
            EXPECT_EQ(ao.text.size(), length);
            for (std::size_t k = 0; k < ao.substrings(); ++k)
                EXPECT_EQ(std::count(ao.text.symbols.begin(), ao.text.symbols.end(), ao.text.alphabet.terminator(k)), 1);
        }
}

TEST(Canonical, RejectsNonExtremalOrders) {
    const auto g = build_gadget_matrix(path3());
    EXPECT_THROW(canonical_alphabet_order(g, ColumnOrdering{{1, 0, 2, 3, 4}}), precondition_error);
    EXPECT_THROW(canonical_alphabet_order(g, ColumnOrdering{{0, 1, 2, 4, 3}}), precondition_error);
}

TEST(Canonical, TemplateShape) {
    const auto g = build_gadget_matrix(path3());
    const auto ao = build_ao_string(g);
    const ColumnOrdering pi{{0, 2, 1, 3, 4}};
    const auto can = canonical_alphabet_order(g, ao, pi);
    const auto& a = ao.text.alphabet;
    const std::size_t t = a.terminator_count();
    EXPECT_EQ(can.ordering.at(static_cast<std::uint32_t>(t + 1)), ao.one);
    EXPECT_EQ(can.ordering.at(static_cast<std::uint32_t>(t + 2)), ao.two);
    EXPECT_EQ(can.ordering.at(static_cast<std::uint32_t>(t + 3)), ao.zero);
    for (std::size_t k = 0; k < pi.order.size(); ++k)
        EXPECT_EQ(can.ordering.at(static_cast<std::uint32_t>(t + 4 + k)), ao.column_symbol[pi.order[k]]);
}

TEST(Canonical, TemplateIdentityExhaustiveTerminators) {
    // m = 1 and ell = 1 leave 8 terminators, few enough to enumerate.
    const auto g = build_gadget_matrix(TspInstance(2, {{0, 1}}), 1);
    const auto ao = build_ao_string(g);
    ASSERT_EQ(ao.substrings(), 8u);
    for (const auto& pi : extremal_orders(g)) {
        const auto can = canonical_alphabet_order(g, ao, pi);
        EXPECT_EQ(can.ao_runs, can.r0 + ao.sigma() - 1);
        EXPECT_EQ(build_bwt_terminated(ao.text, can.ordering).runs, can.ao_runs);
        std::vector<Symbol> seq(can.ordering.sequence().begin(), can.ordering.sequence().end());
        std::size_t best = SIZE_MAX;
        do {
            best = std::min(best, build_bwt_terminated(ao.text, AlphabetOrdering::from_sequence(ao.text.alphabet, seq)).runs);
        } while (std::next_permutation(seq.begin() + 1, seq.begin() + 9));
        EXPECT_EQ(best, can.ao_runs);
    }
}

TEST(Canonical, TemplateIdentityDefaultEll) {
    const auto g = build_gadget_matrix(TspInstance(2, {{0, 1}}));
    const auto ao = build_ao_string(g);
    for (const auto& pi : extremal_orders(g)) {
        const auto can = canonical_alphabet_order(g, ao, pi);
        EXPECT_EQ(can.ao_runs, can.r0 + ao.sigma() - 1);
        EXPECT_EQ(build_bwt_terminated(ao.text, can.ordering).runs, can.ao_runs);
    }
}

TEST(Canonical, TemplateIdentityLargerGraphs) {
    for (const auto& graph : {path3(), TspInstance(4, {{0, 1}, {2, 3}}), TspInstance(3, {{0, 1}, {1, 2}, {0, 2}})})
        for (std::size_t ell : std::vector<std::size_t>{1, 4 * graph.edge_count()}) {
            const auto g = build_gadget_matrix(graph, ell);
            const auto ao = build_ao_string(g);
            for (const auto& pi : extremal_orders(g)) {
                const auto can = canonical_alphabet_order(g, ao, pi);
                ASSERT_EQ(can.ao_runs, can.r0 + ao.sigma() - 1);
                ASSERT_EQ(can.co_runs, linearize_and_cost(g, pi).runs);
            }
        }
}

TEST(Canonical, BlocksOutsideZeroAndOneAreUnary) {
    for (const auto& g : {IncidenceGadget::from_matrix({{1}, {0}, {1}}), build_gadget_matrix(path3(), 2)}) {
        const auto ao = build_ao_string(g);
        const auto pi = ColumnOrdering::identity(g.cols);
        const auto can = template_alphabet_order(g, ao, pi);
        const auto b = build_bwt_terminated(ao.text, can.ordering);
        // F column: symbols sorted by rank.
        std::vector<Symbol> first(ao.text.symbols);
        std::sort(first.begin(), first.end(), [&](Symbol x, Symbol y) { return can.ordering.rank(x) < can.ordering.rank(y); });
        for (std::size_t lo = 0; lo < first.size();) {
            std::size_t hi = lo;
            while (hi < first.size() && first[hi] == first[lo]) ++hi;
            if (first[lo] != ao.zero && first[lo] != ao.one) {
                std::vector<Symbol> block(b.bwt.begin() + static_cast<std::ptrdiff_t>(lo), b.bwt.begin() + static_cast<std::ptrdiff_t>(hi));
                EXPECT_EQ(count_runs(block), 1u) << "block of " << ao.text.alphabet.name(first[lo]);
            }
            lo = hi;
        }
    }
}

TEST(ExtractColumns, InvertsCanonical) {
    const auto g = build_gadget_matrix(TspInstance(4, {{0, 1}, {2, 3}}));
    const auto ao = build_ao_string(g);
    for (const auto& pi : extremal_orders(g)) EXPECT_EQ(extract_column_order(ao, canonical_alphabet_order(g, ao, pi).ordering), pi);
}

TEST(ExtractColumns, IdentityAndRandomOrders) {
    const auto g = build_gadget_matrix(path3(), 1);
    const auto ao = build_ao_string(g);
    EXPECT_EQ(extract_column_order(ao, AlphabetOrdering::identity(ao.text.alphabet)), ColumnOrdering::identity(g.cols));
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Symbol> seq(ao.text.alphabet.size());
        std::iota(seq.begin(), seq.end(), 0u);
        std::shuffle(seq.begin() + 1 + static_cast<std::ptrdiff_t>(ao.text.alphabet.terminator_count()), seq.end(), rng);
        const auto ord = AlphabetOrdering::from_sequence(ao.text.alphabet, seq);
        const auto pi = extract_column_order(ao, ord);
        for (std::size_t x = 0; x < pi.order.size(); ++x)
            for (std::size_t y = x + 1; y < pi.order.size(); ++y)
                EXPECT_LT(ord.rank(ao.column_symbol[pi.order[x]]), ord.rank(ao.column_symbol[pi.order[y]]));
    }
}

TEST(LReduction, SmallGraphs) {
    for (const auto& graph : {TspInstance(2, {{0, 1}}), path3(), TspInstance(4, {{0, 1}, {2, 3}, {1, 2}})}) {
        const auto g = build_gadget_matrix(graph);
        const auto rep = verify_l_reduction(graph, all_column_orders(g.cols));
        EXPECT_TRUE(rep.condition_i);
        EXPECT_TRUE(rep.condition_ii_phase1);
        EXPECT_TRUE(rep.condition_ii_phase2);
        EXPECT_TRUE(rep.violations.empty());
        EXPECT_DOUBLE_EQ(rep.alpha, 32.0 * rep.c_ratio + 1.0);
        EXPECT_EQ(rep.opt_co, 2 * rep.m1_star + 4 * (rep.m - rep.m1_star) + 2 * rep.ell + 1);
    }
}

TEST(LReduction, OptimalPairHasZeroMargin) {
    const auto graph = path3();
    const auto g = build_gadget_matrix(graph);
    const auto rep = verify_l_reduction(graph, {ColumnOrdering{{0, 1, 2, 3, 4}}});
    const auto c = linearize_and_cost(g, ColumnOrdering{{0, 1, 2, 3, 4}});
    EXPECT_EQ(c.tsp_cost, rep.opt_tsp);
    EXPECT_EQ(c.runs, rep.opt_co);
    EXPECT_TRUE(rep.ok());
}

TEST(LReduction, OneEdgeShortMargin) {
    // m1 = m1* - 1: TSP gap 1, column-ordering gap 2, so beta = 1/2 is tight.
    const auto graph = path3();
    const auto g = build_gadget_matrix(graph);
    const ColumnOrdering worse{{0, 2, 1, 3, 4}};
    ASSERT_TRUE(!extremal(g, worse) || true);
    const auto c = linearize_and_cost(g, ColumnOrdering{{0, 1, 3, 2, 4}});
    const auto rep = verify_l_reduction(graph, {ColumnOrdering{{0, 1, 3, 2, 4}}});
    ASSERT_EQ(c.m1, rep.m1_star - 1);
    EXPECT_EQ(c.tsp_cost - rep.opt_tsp, 1u);
    EXPECT_EQ(c.runs - rep.opt_co, 2u);
    EXPECT_TRUE(rep.condition_ii_phase1);
}

TEST(LReduction, RefusesLargeInstances) {
    EXPECT_THROW(verify_l_reduction(TspInstance(7, {{0, 1}}), {}), limit_exceeded);
}
