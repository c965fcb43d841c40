#ifndef BWTORDER_WHEELER_HPP
#define BWTORDER_WHEELER_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "bwtorder/errors.hpp"
#include "bwtorder/reductions.hpp"
#include "bwtorder/tuple_order.hpp"

namespace bwtorder {

/// Edge-labelled digraph on vertices [0, vertex_count). Labels are ordered
/// integers.
struct WheelerGraph {
    using Label = std::uint32_t;
    struct Edge {
        std::uint32_t from;
        std::uint32_t to;
        Label label;
        bool operator==(const Edge&) const = default;
    };

    std::size_t vertex_count = 0;
    std::vector<Edge> edges;

    std::uint32_t add_vertex() { return static_cast<std::uint32_t>(vertex_count++); }

    void add_edge(std::uint32_t u, std::uint32_t v, Label k) {
        if (u >= vertex_count || v >= vertex_count) throw invalid_input("edge endpoint out of range");
        for (const auto& e : edges)
            if (e.from == u && e.to == v && e.label == k) throw invalid_input("duplicate edge");
        edges.push_back({u, v, k});
    }

    std::vector<std::uint32_t> in_degree() const {
        std::vector<std::uint32_t> d(vertex_count, 0);
        for (const auto& e : edges) ++d[e.to];
        return d;
    }

    /// In-degree 0 vertices, ascending.
    std::vector<std::uint32_t> sources() const {
        const auto d = in_degree();
        std::vector<std::uint32_t> s;
        for (std::uint32_t v = 0; v < vertex_count; ++v)
            if (d[v] == 0) s.push_back(v);
        return s;
    }
};

/// order[k] is the vertex of rank k.
struct ProperOrdering {
    std::vector<std::uint32_t> order;

    std::vector<std::uint32_t> ranks() const {
        std::vector<std::uint32_t> r(order.size());
        for (std::uint32_t k = 0; k < order.size(); ++k) r[order[k]] = k;
        return r;
    }
};

struct WheelerViolation {
    enum class Kind { source_not_first, label_order, crossing };
    Kind kind;
    /// Edge indices for label_order / crossing; for source_not_first, `first`
    /// is the source vertex and `second` a non-source ranked below it.
    std::size_t first = 0;
    std::size_t second = 0;
    std::string message;
};

struct WheelerCheck {
    bool ok = true;
    std::optional<WheelerViolation> violation;
    explicit operator bool() const noexcept { return ok; }
};

namespace detail {

inline std::vector<std::uint32_t> checked_ranks(const WheelerGraph& g, const ProperOrdering& phi) {
    if (phi.order.size() != g.vertex_count) throw invalid_input("ordering does not cover every vertex");
    std::vector<std::uint32_t> r(g.vertex_count, UINT32_MAX);
    for (std::uint32_t k = 0; k < phi.order.size(); ++k) {
        const auto v = phi.order[k];
        if (v >= g.vertex_count || r[v] != UINT32_MAX) throw invalid_input("ordering is not a bijection");
        r[v] = k;
    }
    return r;
}

/// Whether the pair (a, b) breaks a Wheeler condition under ranks r.
inline std::optional<WheelerViolation::Kind> pair_violation(const WheelerGraph::Edge& a, const WheelerGraph::Edge& b,
                                                            const std::vector<std::uint32_t>& r) {
    auto one_way = [&](const WheelerGraph::Edge& x, const WheelerGraph::Edge& y) -> std::optional<WheelerViolation::Kind> {
        if (x.label < y.label && !(r[x.to] < r[y.to])) return WheelerViolation::Kind::label_order;
        if (x.label == y.label && r[x.from] < r[y.from] && !(r[x.to] <= r[y.to])) return WheelerViolation::Kind::crossing;
        return std::nullopt;
    };
    if (auto k = one_way(a, b)) return k;
    return one_way(b, a);
}

}  // namespace detail

/// Sources first, then (i) k < k' implies v < v' and (ii) equal labels with
/// u < u' imply v <= v'. The violation reported is the one with the smallest
/// (first edge, second edge) insertion indices.
inline WheelerCheck validate(const WheelerGraph& g, const ProperOrdering& phi) {
    const auto r = detail::checked_ranks(g, phi);
    const auto deg = g.in_degree();
    WheelerCheck out;

    const std::size_t nsrc = static_cast<std::size_t>(std::count(deg.begin(), deg.end(), 0u));
    for (std::uint32_t k = 0; k < nsrc; ++k) {
        const auto v = phi.order[k];
        if (deg[v] == 0) continue;
        std::uint32_t late = 0;
        for (std::uint32_t s = 0; s < g.vertex_count; ++s)
            if (deg[s] == 0 && r[s] >= nsrc) {
                late = s;
                break;
            }
        out.ok = false;
        out.violation = WheelerViolation{WheelerViolation::Kind::source_not_first, late, v,
                                         "source " + std::to_string(late) + " is ranked after vertex " + std::to_string(v)};
        return out;
    }

    // Sort by (label, rank of source, rank of target); the order is proper
    // iff target ranks never decrease within a label and strictly increase
    // across labels.
    std::vector<std::size_t> idx(g.edges.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = g.edges[a];
        const auto& y = g.edges[b];
        return std::tie(x.label, r[x.from], r[x.to]) < std::tie(y.label, r[y.from], r[y.to]);
    });
    bool fine = true;
    for (std::size_t k = 1; k < idx.size() && fine; ++k) {
        const auto& x = g.edges[idx[k - 1]];
        const auto& y = g.edges[idx[k]];
        fine = x.label == y.label ? r[x.to] <= r[y.to] : r[x.to] < r[y.to];
    }
    if (fine) return out;

    for (std::size_t a = 0; a < g.edges.size(); ++a)
        for (std::size_t b = a + 1; b < g.edges.size(); ++b)
            if (auto kind = detail::pair_violation(g.edges[a], g.edges[b], r)) {
                out.ok = false;
                const auto& x = g.edges[a];
                const auto& y = g.edges[b];
                out.violation = WheelerViolation{
                    *kind, a, b,
                    std::string(*kind == WheelerViolation::Kind::crossing ? "same-label edges cross" : "label order broken") +
                        ": (" + std::to_string(x.from) + "," + std::to_string(x.to) + "," + std::to_string(x.label) + ") vs (" +
                        std::to_string(y.from) + "," + std::to_string(y.to) + "," + std::to_string(y.label) + ")"};
                return out;
            }
    throw internal_error("sorted check failed but no violating pair was found");
}

namespace detail {

/// Parent structure of a forest of out-trees rooted at the sources.
struct Forest {
    std::vector<std::uint32_t> parent;      // sources point to themselves
    std::vector<WheelerGraph::Label> label;  // incoming label, unused for sources
    std::vector<std::size_t> in_edge;       // insertion index of the incoming edge
    std::vector<std::uint32_t> depth;
    std::vector<std::uint32_t> sources;
    std::uint32_t max_depth = 0;
};

inline Forest as_forest(const WheelerGraph& g) {
    Forest f;
    const std::size_t n = g.vertex_count;
    f.parent.assign(n, UINT32_MAX);
    f.label.assign(n, 0);
    f.in_edge.assign(n, SIZE_MAX);
    f.depth.assign(n, UINT32_MAX);
    std::vector<std::vector<std::uint32_t>> children(n);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        if (f.parent[e.to] != UINT32_MAX) throw unsupported_shape("vertex " + std::to_string(e.to) + " has in-degree above 1");
        f.parent[e.to] = e.from;
        f.label[e.to] = e.label;
        f.in_edge[e.to] = i;
        children[e.from].push_back(e.to);
    }
    std::vector<std::uint32_t> stack;
    for (std::uint32_t v = 0; v < n; ++v)
        if (f.parent[v] == UINT32_MAX) {
            f.parent[v] = v;
            f.depth[v] = 0;
            f.sources.push_back(v);
            stack.push_back(v);
        }
    while (!stack.empty()) {
        const auto u = stack.back();
        stack.pop_back();
        for (auto c : children[u]) {
            f.depth[c] = f.depth[u] + 1;
            f.max_depth = std::max(f.max_depth, f.depth[c]);
            stack.push_back(c);
        }
    }
    for (std::uint32_t v = 0; v < n; ++v)
        if (f.depth[v] == UINT32_MAX) throw unsupported_shape("vertex " + std::to_string(v) + " lies on a cycle");
    return f;
}

inline std::vector<std::uint32_t> checked_source_ranks(const Forest& f, std::span<const std::uint32_t> source_order,
                                                       std::size_t n) {
    if (source_order.size() != f.sources.size()) throw invalid_input("source order must list every source once");
    std::vector<std::uint32_t> rank(n, UINT32_MAX);
    for (std::uint32_t k = 0; k < source_order.size(); ++k) {
        const auto s = source_order[k];
        if (s >= n || f.parent[s] != s || rank[s] != UINT32_MAX) throw invalid_input("source order must list every source once");
        rank[s] = k;
    }
    return rank;
}

/// Equivalence classes of the upward keys: the incoming labels read towards
/// the root, closed by a per-source bottom symbol below every label. Class ids
/// are dense and increase with the key; equal keys imply equal depth.
inline std::vector<std::uint32_t> key_classes(const Forest& f, const std::vector<std::uint32_t>& source_rank) {
    const std::size_t n = f.parent.size();
    const std::uint64_t nsrc = f.sources.size();
    std::vector<std::uint64_t> key(n);
    for (std::size_t v = 0; v < n; ++v) key[v] = f.parent[v] == v ? source_rank[v] : nsrc + f.label[v];

    std::vector<std::uint32_t> cls(n), anc(f.parent), idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    auto densify = [&](auto&& less, auto&& equal) {
        std::sort(idx.begin(), idx.end(), less);
        std::uint32_t c = 0;
        std::vector<std::uint32_t> next(n);
        for (std::size_t k = 0; k < n; ++k) {
            if (k > 0 && !equal(idx[k - 1], idx[k])) ++c;
            next[idx[k]] = c;
        }
        cls = std::move(next);
    };
    densify([&](std::uint32_t a, std::uint32_t b) { return key[a] < key[b]; },
            [&](std::uint32_t a, std::uint32_t b) { return key[a] == key[b]; });
    // cls now encodes keys of length 1; each round doubles the length.
    for (std::uint64_t len = 1; len <= f.max_depth; len *= 2) {
        auto prev = cls;
        densify(
            [&](std::uint32_t a, std::uint32_t b) { return std::pair(prev[a], prev[anc[a]]) < std::pair(prev[b], prev[anc[b]]); },
            [&](std::uint32_t a, std::uint32_t b) { return prev[a] == prev[b] && prev[anc[a]] == prev[anc[b]]; });
        std::vector<std::uint32_t> up(n);
        for (std::size_t v = 0; v < n; ++v) up[v] = anc[anc[v]];
        anc = std::move(up);
    }
    return cls;
}

/// Total order from key classes, breaking ties between equal keys by the
/// parents' final order and then by `tie` (lower first).
inline ProperOrdering order_from_classes(const Forest& f, const std::vector<std::uint32_t>& cls,
                                         const std::vector<std::uint64_t>& tie) {
    const std::size_t n = cls.size();
    std::vector<std::uint32_t> by_depth(n);
    std::iota(by_depth.begin(), by_depth.end(), 0u);
    std::stable_sort(by_depth.begin(), by_depth.end(), [&](std::uint32_t a, std::uint32_t b) { return f.depth[a] < f.depth[b]; });

    // Process depth levels top-down; within a level, sort by (class, parent
    // rank, tie) and assign final ranks once all levels are placed.
    std::vector<std::uint64_t> sub(n, 0);
    std::size_t lo = 0;
    while (lo < n) {
        std::size_t hi = lo;
        while (hi < n && f.depth[by_depth[hi]] == f.depth[by_depth[lo]]) ++hi;
        std::sort(by_depth.begin() + static_cast<std::ptrdiff_t>(lo), by_depth.begin() + static_cast<std::ptrdiff_t>(hi),
                  [&](std::uint32_t a, std::uint32_t b) {
                      const auto pa = f.parent[a] == a ? 0 : sub[f.parent[a]];
                      const auto pb = f.parent[b] == b ? 0 : sub[f.parent[b]];
                      return std::tuple(cls[a], pa, tie[a]) < std::tuple(cls[b], pb, tie[b]);
                  });
        for (std::size_t k = lo; k < hi; ++k) sub[by_depth[k]] = k;
        lo = hi;
    }
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return std::pair(cls[a], sub[a]) < std::pair(cls[b], sub[b]); });
    return {std::move(order)};
}

}  // namespace detail

/// Proper ordering of a forest of out-trees: sources in the given order, then
/// every other vertex by (incoming label, rank of its parent). Siblings with
/// the same label are ordered by `sibling_priority` when given (indexed by
/// vertex, lower first), otherwise by edge insertion order.
inline ProperOrdering proper_order(const WheelerGraph& g, std::span<const std::uint32_t> source_order,
                                   std::span<const std::uint64_t> sibling_priority = {}) {
    const auto f = detail::as_forest(g);
    const auto srank = detail::checked_source_ranks(f, source_order, g.vertex_count);
    const auto cls = detail::key_classes(f, srank);
    std::vector<std::uint64_t> tie(g.vertex_count);
    for (std::uint32_t v = 0; v < g.vertex_count; ++v) {
        if (!sibling_priority.empty()) {
            if (sibling_priority.size() != g.vertex_count) throw invalid_input("sibling priority must cover every vertex");
            tie[v] = sibling_priority[v];
        } else {
            tie[v] = f.in_edge[v] == SIZE_MAX ? 0 : f.in_edge[v];
        }
    }
    return detail::order_from_classes(f, cls, tie);
}

struct WgBwt {
    std::vector<WheelerGraph::Label> labels;
    std::size_t runs = 0;
};

namespace detail {

/// Distinct outgoing labels per vertex in ordering order, skipping vertices
/// without out-edges; multiplicities are kept alongside.
inline std::pair<std::vector<std::vector<WheelerGraph::Label>>, std::vector<std::vector<std::size_t>>> vertex_tuples(
    const WheelerGraph& g, const ProperOrdering& phi) {
    std::vector<std::vector<WheelerGraph::Label>> out_labels(g.vertex_count);
    for (const auto& e : g.edges) out_labels[e.from].push_back(e.label);
    std::vector<std::vector<WheelerGraph::Label>> tuples;
    std::vector<std::vector<std::size_t>> counts;
    for (auto v : phi.order) {
        auto& ls = out_labels[v];
        if (ls.empty()) continue;
        std::sort(ls.begin(), ls.end());
        auto& t = tuples.emplace_back();
        auto& c = counts.emplace_back();
        for (std::size_t k = 0; k < ls.size(); ++k) {
            if (k > 0 && ls[k] == ls[k - 1]) {
                ++c.back();
            } else {
                t.push_back(ls[k]);
                c.push_back(1);
            }
        }
    }
    return {std::move(tuples), std::move(counts)};
}

}  // namespace detail

/// Outgoing labels of every vertex in phi order, each vertex's labels grouped
/// and arranged to minimise the total number of runs.
inline WgBwt wg_bwt(const WheelerGraph& g, const ProperOrdering& phi) {
    if (!validate(g, phi)) throw precondition_error("ordering is not a proper Wheeler ordering");
    auto [tuples, counts] = detail::vertex_tuples(g, phi);
    const auto arr = greedy_tuple_order(tuples);
    WgBwt out;
    for (std::size_t i = 0; i < tuples.size(); ++i)
        for (auto l : arr.tuples[i]) {
            const auto at = std::lower_bound(tuples[i].begin(), tuples[i].end(), l) - tuples[i].begin();
            out.labels.insert(out.labels.end(), counts[i][static_cast<std::size_t>(at)], l);
        }
    out.runs = arr.runs();
    return out;
}

/// One source per column j (vertex j); for every 1 at 1-based row i a fresh
/// path labelled 0^{i+1} 1 from s_j, in row-major order, then per column a
/// path labelled 0^{rows+2}. Labels: 0 and 1.
inline WheelerGraph build_so_gadget(const IncidenceGadget& gad) {
    WheelerGraph g;
    g.vertex_count = gad.cols;
    auto path = [&](std::uint32_t src, std::size_t zeros, bool closing_one) {
        std::uint32_t at = src;
        for (std::size_t k = 0; k < zeros + (closing_one ? 1 : 0); ++k) {
            const auto v = g.add_vertex();
            g.edges.push_back({at, v, k < zeros ? 0u : 1u});
            at = v;
        }
    };
    for (std::size_t i = 0; i < gad.rows; ++i)
        for (std::size_t j = 0; j < gad.cols; ++j)
            if (gad.at(i, j)) path(static_cast<std::uint32_t>(j), i + 2, true);
    for (std::size_t j = 0; j < gad.cols; ++j) path(static_cast<std::uint32_t>(j), gad.rows + 2, false);
    return g;
}

struct SourceOrderCost {
    ProperOrdering ordering;
    std::size_t runs = 0;
    /// False when the forest has a non-source vertex of out-degree above one;
    /// then same-label siblings keep insertion order instead of being
    /// optimised.
    bool siblings_optimized = false;
};

/// Best BWT(G) for a fixed source order, also choosing the order among
/// same-label siblings. When every non-source vertex has out-degree at most
/// one, vertices with equal upward keys form blocks whose member order is
/// induced by the order of the source's children, exactly like the
/// terminator order of a string collection; the tuple greedy over the block
/// sequence gives the optimum and the arrangement is unfolded into sibling
/// priorities.
inline SourceOrderCost best_for_source_order(const WheelerGraph& g, std::span<const std::uint32_t> source_order) {
    const auto f = detail::as_forest(g);
    const auto srank = detail::checked_source_ranks(f, source_order, g.vertex_count);
    const std::size_t n = g.vertex_count;

    std::vector<std::uint32_t> out_deg(n, 0);
    std::vector<std::uint32_t> only_child(n, UINT32_MAX);
    std::vector<std::vector<WheelerGraph::Label>> out_labels(n);
    for (const auto& e : g.edges) {
        ++out_deg[e.from];
        only_child[e.from] = e.to;
        out_labels[e.from].push_back(e.label);
    }
    bool spider = true;
    for (std::uint32_t v = 0; v < n; ++v)
        if (f.parent[v] != v && out_deg[v] > 1) spider = false;

    SourceOrderCost out;
    if (!spider) {
        out.ordering = proper_order(g, source_order);
        out.runs = wg_bwt(g, out.ordering).runs;
        return out;
    }

    const auto cls = detail::key_classes(f, srank);
    const std::uint32_t classes = cls.empty() ? 0 : *std::max_element(cls.begin(), cls.end()) + 1;
    std::vector<std::vector<std::uint32_t>> members(classes);
    for (std::uint32_t v = 0; v < n; ++v) members[cls[v]].push_back(v);

    // Thread = child of a source; every non-source vertex lies on one thread.
    std::vector<std::uint32_t> thread(n, UINT32_MAX);
    {
        std::vector<std::uint32_t> by_depth(n);
        std::iota(by_depth.begin(), by_depth.end(), 0u);
        std::stable_sort(by_depth.begin(), by_depth.end(), [&](auto a, auto b) { return f.depth[a] < f.depth[b]; });
        for (auto v : by_depth)
            if (f.depth[v] == 1) thread[v] = v;
            else if (f.depth[v] > 1) thread[v] = thread[f.parent[v]];
    }

    // Tuples in class order. A source is its own class; its tuple is the set
    // of its children's labels.
    std::vector<std::vector<WheelerGraph::Label>> tuples;
    std::vector<std::uint32_t> tuple_class;
    std::vector<std::int64_t> class_tuple(classes, -1);
    for (std::uint32_t c = 0; c < classes; ++c) {
        std::vector<WheelerGraph::Label> t;
        for (auto v : members[c]) t.insert(t.end(), out_labels[v].begin(), out_labels[v].end());
        if (t.empty()) continue;
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        class_tuple[c] = static_cast<std::int64_t>(tuples.size());
        tuples.push_back(std::move(t));
        tuple_class.push_back(c);
    }
    const auto arr = greedy_tuple_order(tuples);

    // Unfold bottom-up: a non-source class lists its threads by arranged
    // label, each group in the order of the child class, then leaf threads.
    std::vector<std::vector<std::uint32_t>> thread_order(classes);
    std::vector<std::uint32_t> classes_by_depth(classes);
    std::iota(classes_by_depth.begin(), classes_by_depth.end(), 0u);
    std::stable_sort(classes_by_depth.begin(), classes_by_depth.end(),
                     [&](auto a, auto b) { return f.depth[members[a][0]] > f.depth[members[b][0]]; });
    std::vector<std::uint64_t> priority(n, 0);
    for (auto c : classes_by_depth) {
        const auto first = members[c][0];
        if (f.depth[first] == 0) continue;
        auto& out_threads = thread_order[c];
        if (class_tuple[c] >= 0) {
            for (auto label : arr.tuples[static_cast<std::size_t>(class_tuple[c])]) {
                std::uint32_t child_class = UINT32_MAX;
                for (auto v : members[c])
                    if (out_deg[v] == 1 && f.label[only_child[v]] == label) {
                        child_class = cls[only_child[v]];
                        break;
                    }
                const auto& sub = thread_order[child_class];
                out_threads.insert(out_threads.end(), sub.begin(), sub.end());
            }
        }
        for (auto v : members[c])
            if (out_deg[v] == 0) out_threads.push_back(thread[v]);
        if (f.depth[first] == 1)
            for (std::uint64_t k = 0; k < out_threads.size(); ++k) priority[out_threads[k]] = k;
    }

    out.ordering = detail::order_from_classes(f, cls, priority);
    out.runs = arr.runs();
    out.siblings_optimized = true;
    return out;
}

struct SoResult {
    std::vector<std::uint32_t> source_order;
    std::size_t runs = 0;
    std::uint64_t explored = 0;
    bool siblings_optimized = true;
    /// Every run-minimising source order, lexicographically.
    std::vector<std::vector<std::uint32_t>> optimal_orders;
};

/// Minimum runs over all source permutations. Ties resolve to the
/// lexicographically smallest source order.
inline SoResult so_brute_force(const WheelerGraph& g, std::uint64_t limit = 40320, unsigned threads = 1) {
    auto sources = g.sources();
    std::uint64_t count = 1;
    for (std::size_t k = 2; k <= sources.size(); ++k) {
        count *= k;
        if (count > limit) throw limit_exceeded(std::to_string(sources.size()) + " sources exceed the permutation limit");
    }
    std::vector<std::vector<std::uint32_t>> perms;
    do {
        perms.push_back(sources);
    } while (std::next_permutation(sources.begin(), sources.end()));

    std::vector<std::size_t> runs(perms.size());
    std::vector<char> optimized(perms.size(), 1);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < perms.size();) {
            const auto c = best_for_source_order(g, perms[k]);
            runs[k] = c.runs;
            optimized[k] = c.siblings_optimized;
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(perms.size())));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    SoResult res;
    res.explored = perms.size();
    res.runs = *std::min_element(runs.begin(), runs.end());
    for (std::size_t k = 0; k < perms.size(); ++k) {
        if (!optimized[k]) res.siblings_optimized = false;
        if (runs[k] == res.runs) res.optimal_orders.push_back(perms[k]);
    }
    res.source_order = res.optimal_orders.front();
    return res;
}

}  // namespace bwtorder

#endif
