#ifndef BWTORDER_ORDERING_SEARCH_HPP
#define BWTORDER_ORDERING_SEARCH_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "bwtorder/alphabet.hpp"
#include "bwtorder/bwt.hpp"
#include "bwtorder/errors.hpp"

namespace bwtorder {

enum class SearchMethod { exact, local, sample };

inline const char* to_string(SearchMethod m) {
    switch (m) {
        case SearchMethod::exact: return "exact";
        case SearchMethod::local: return "local";
        case SearchMethod::sample: return "sample";
    }
    return "?";
}

struct SearchResult {
    AlphabetOrdering ordering;
    std::size_t runs = 0;
    SearchMethod method = SearchMethod::exact;
    std::uint64_t explored = 0;
    std::chrono::nanoseconds elapsed{0};
};

struct ExactSearchOptions {
    /// Maximum number of permutable symbols (terminators plus regular).
    std::size_t symbol_limit = 10;
    unsigned threads = 1;
};

/// The admissible orderings of an alphabet: sentinel first, then some
/// permutation of the terminators, then some permutation of the regular
/// symbols.
class AdmissibleSpace {
public:
    explicit AdmissibleSpace(const Alphabet& alphabet) : alphabet_(&alphabet) {
        for (std::size_t i = 0; i < alphabet.terminator_count(); ++i) terminators_.push_back(alphabet.terminator(i));
        for (std::size_t i = 0; i < alphabet.regular_count(); ++i) regulars_.push_back(alphabet.regular(i));
    }

    std::size_t free_symbols() const noexcept { return terminators_.size() + regulars_.size(); }

    /// t! * r!, saturating at UINT64_MAX.
    std::uint64_t size() const noexcept { return factorial(terminators_.size()) * factorial(regulars_.size()); }

    AlphabetOrdering make(std::span<const Symbol> terminators, std::span<const Symbol> regulars) const {
        std::vector<Symbol> seq;
        seq.reserve(alphabet_->size());
        seq.push_back(kSentinel);
        seq.insert(seq.end(), terminators.begin(), terminators.end());
        seq.insert(seq.end(), regulars.begin(), regulars.end());
        return AlphabetOrdering::from_sequence(*alphabet_, seq);
    }

    /// Visits orderings whose first regular symbol is regulars()[first]
    /// (all of them when there are no regular symbols and first == 0).
    template <class Visitor>
    void for_each_with_first(std::size_t first, Visitor&& visit) const {
        std::vector<Symbol> regs = regulars_;
        if (!regs.empty()) {
            std::rotate(regs.begin(), regs.begin() + static_cast<std::ptrdiff_t>(first),
                        regs.begin() + static_cast<std::ptrdiff_t>(first) + 1);
        }
        std::vector<Symbol> terms = terminators_;
        do {
            std::vector<Symbol> tail(regs.begin() + (regs.empty() ? 0 : 1), regs.end());
            do {
                std::vector<Symbol> full;
                if (!regs.empty()) full.push_back(regs.front());
                full.insert(full.end(), tail.begin(), tail.end());
                visit(make(terms, full));
            } while (std::next_permutation(tail.begin(), tail.end()));
        } while (std::next_permutation(terms.begin(), terms.end()));
    }

    std::size_t partitions() const noexcept { return std::max<std::size_t>(1, regulars_.size()); }

    template <class Visitor>
    void for_each(Visitor&& visit) const {
        for (std::size_t p = 0; p < partitions(); ++p) for_each_with_first(p, visit);
    }

    template <class Rng>
    AlphabetOrdering random(Rng& rng) const {
        auto terms = terminators_;
        auto regs = regulars_;
        std::shuffle(terms.begin(), terms.end(), rng);
        std::shuffle(regs.begin(), regs.end(), rng);
        return make(terms, regs);
    }

private:
    static std::uint64_t factorial(std::size_t k) noexcept {
        std::uint64_t f = 1;
        for (std::size_t i = 2; i <= k; ++i) {
            if (f > UINT64_MAX / i) return UINT64_MAX;
            f *= i;
        }
        return f;
    }

    const Alphabet* alphabet_;
    std::vector<Symbol> terminators_;
    std::vector<Symbol> regulars_;
};

namespace detail {

struct Candidate {
    std::size_t runs = SIZE_MAX;
    AlphabetOrdering ordering;
    std::uint64_t explored = 0;

    /// (runs, rank vector) lexicographic minimum; independent of visit order.
    void offer(std::size_t r, const AlphabetOrdering& o) {
        ++explored;
        if (r < runs || (r == runs && std::ranges::lexicographical_compare(o.ranks(), ordering.ranks()))) {
            runs = r;
            ordering = o;
        }
    }

    void merge(const Candidate& other) {
        const auto seen = explored + other.explored;
        if (other.runs != SIZE_MAX) {
            explored = 0;
            offer(other.runs, other.ordering);
        }
        explored = seen;
    }
};

inline std::size_t runs_under(const Text& text, const AlphabetOrdering& o) { return build_bwt(text, o).runs; }

}  // namespace detail

/// Global minimum of build_bwt runs over all admissible orderings. Ties go to
/// the lexicographically smallest rank vector, so the result does not depend
/// on the thread count.
inline SearchResult exact_search(const Text& text, const ExactSearchOptions& opts = {}) {
    const auto start = std::chrono::steady_clock::now();
    AdmissibleSpace space(text.alphabet);
    if (space.free_symbols() > opts.symbol_limit)
        throw limit_exceeded(std::to_string(space.free_symbols()) + " permutable symbols exceed the exact-search limit of " +
                             std::to_string(opts.symbol_limit) + "; use local search");

    const std::size_t parts = space.partitions();
    const unsigned workers = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(parts)));
    std::vector<detail::Candidate> local(workers);
    std::atomic<std::size_t> next{0};
    auto work = [&](unsigned w) {
        for (std::size_t p; (p = next.fetch_add(1)) < parts;)
            space.for_each_with_first(p, [&](const AlphabetOrdering& o) { local[w].offer(detail::runs_under(text, o), o); });
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    detail::Candidate best;
    for (const auto& c : local) best.merge(c);

    return {best.ordering, best.runs, SearchMethod::exact, best.explored,
            std::chrono::steady_clock::now() - start};
}

/// First-improvement hill climbing over swaps of adjacent ranks (within the
/// terminator block or within the regular block), restarting from a random
/// admissible ordering whenever no neighbour improves. `budget` bounds the
/// number of evaluations after the seed's own. Never worse than the seed.
inline SearchResult local_search(const Text& text, const AlphabetOrdering& seed, std::uint64_t budget,
                                 std::uint64_t rng_seed = 0) {
    const auto start = std::chrono::steady_clock::now();
    AdmissibleSpace space(text.alphabet);
    std::mt19937_64 rng(rng_seed);

    const std::size_t t = text.alphabet.terminator_count();
    const std::size_t sigma = text.alphabet.size();
    std::uint64_t used = 0;

    SearchResult best{seed, detail::runs_under(text, seed), SearchMethod::local, 1, {}};
    std::vector<Symbol> seq(seed.sequence().begin(), seed.sequence().end());
    std::size_t current = best.runs;

    auto same_block = [&](std::size_t r) { return r >= 1 && ((r + 1 <= t) || (r >= t + 1)); };

    while (used < budget) {
        bool improved = false;
        for (std::size_t r = 1; r + 1 < sigma && used < budget; ++r) {
            if (!same_block(r)) continue;
            std::swap(seq[r], seq[r + 1]);
            const auto o = AlphabetOrdering::from_sequence(text.alphabet, seq);
            const auto runs = detail::runs_under(text, o);
            ++used;
            if (runs < current) {
                current = runs;
                improved = true;
                if (runs < best.runs) {
                    best.runs = runs;
                    best.ordering = o;
                }
                break;
            }
            std::swap(seq[r], seq[r + 1]);
        }
        if (!improved && used < budget) {
            const auto restart = space.random(rng);
            seq.assign(restart.sequence().begin(), restart.sequence().end());
            current = detail::runs_under(text, restart);
            ++used;
            if (current < best.runs) {
                best.runs = current;
                best.ordering = restart;
            }
        }
    }
    best.explored = used + 1;
    best.elapsed = std::chrono::steady_clock::now() - start;
    return best;
}

struct RatioReport {
    std::size_t min_runs = 0;
    std::size_t max_runs = 0;
    /// max_runs / min_runs in lowest terms.
    std::size_t ratio_num = 1;
    std::size_t ratio_den = 1;
    double ratio = 1.0;
    /// (log2 n)^2 for the text length n, as a scale for the ratio.
    double log2n_reference = 0.0;
    std::uint64_t evaluated = 0;
    /// Runs of the text itself and 2 * that + 2; r is expected below the
    /// latter under every ordering but this is only reported, not enforced.
    std::size_t text_runs = 0;
    std::size_t twice_text_runs_bound = 0;
};

struct RatioMode {
    bool exhaustive = true;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::size_t symbol_limit = 10;

    static RatioMode exhaustive_mode(std::size_t limit = 10) { return {true, 0, 0, limit}; }
    static RatioMode sampled(std::uint64_t k, std::uint64_t seed = 0) { return {false, k, seed, 0}; }
};

/// Spread between the best and worst orderings seen. Sampled mode always
/// includes the identity ordering, then draws `samples` random ones.
inline RatioReport ratio_report(const Text& text, const RatioMode& mode) {
    RatioReport rep;
    rep.min_runs = SIZE_MAX;
    auto take = [&](std::size_t r) {
        rep.min_runs = std::min(rep.min_runs, r);
        rep.max_runs = std::max(rep.max_runs, r);
        ++rep.evaluated;
    };
    AdmissibleSpace space(text.alphabet);
    if (mode.exhaustive) {
        if (space.free_symbols() > mode.symbol_limit)
            throw limit_exceeded("exhaustive ratio needs at most " + std::to_string(mode.symbol_limit) + " permutable symbols");
        space.for_each([&](const AlphabetOrdering& o) { take(detail::runs_under(text, o)); });
    } else {
        std::mt19937_64 rng(mode.seed);
        take(detail::runs_under(text, AlphabetOrdering::identity(text.alphabet)));
        for (std::uint64_t k = 0; k < mode.samples; ++k) take(detail::runs_under(text, space.random(rng)));
    }
    const auto g = std::gcd(rep.max_runs, rep.min_runs);
    rep.ratio_num = rep.max_runs / g;
    rep.ratio_den = rep.min_runs / g;
    rep.ratio = static_cast<double>(rep.max_runs) / static_cast<double>(rep.min_runs);
    const double n = static_cast<double>(text.size());
    rep.log2n_reference = n > 1 ? std::pow(std::log2(n), 2.0) : 0.0;
    rep.text_runs = count_runs(text.symbols);
    rep.twice_text_runs_bound = 2 * rep.text_runs + 2;
    return rep;
}

}  // namespace bwtorder

#endif
