#ifndef BWTORDER_BWT_HPP
#define BWTORDER_BWT_HPP

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <ranges>
#include <span>
#include <string>
#include <vector>

#include "bwtorder/alphabet.hpp"
#include "bwtorder/errors.hpp"
#include "bwtorder/suffix_sort.hpp"

namespace bwtorder {

/// Result of a transform: the last column of the sorted rotation matrix, its
/// run count and the LF permutation (row -> row of the same text symbol in F).
struct BwtOutput {
    std::vector<Symbol> bwt;
    std::size_t runs = 0;
    std::vector<index_t> lf;
};

/// Number of maximal unary blocks; 0 for an empty range.
template <std::ranges::input_range R>
std::size_t count_runs(R&& seq) {
    std::size_t runs = 0;
    auto it = std::ranges::begin(seq);
    const auto end = std::ranges::end(seq);
    if (it == end) return 0;
    auto prev = *it;
    runs = 1;
    for (++it; it != end; ++it) {
        if (!(*it == prev)) {
            ++runs;
            prev = *it;
        }
    }
    return runs;
}

/// LF permutation of `bwt` under `ordering`; equal symbols keep their
/// relative order.
inline std::vector<index_t> lf_mapping(std::span<const Symbol> bwt, const AlphabetOrdering& ordering) {
    std::vector<index_t> first(ordering.size() + 1, 0);
    for (Symbol s : bwt) ++first[ordering.rank(s) + 1];
    for (std::size_t r = 1; r < first.size(); ++r) first[r] += first[r - 1];
    std::vector<index_t> lf(bwt.size());
    for (std::size_t i = 0; i < bwt.size(); ++i) lf[i] = first[ordering.rank(bwt[i])]++;
    return lf;
}

namespace detail {

inline void check_text(const Text& text, const AlphabetOrdering& ordering) {
    if (ordering.size() != text.alphabet.size())
        throw alphabet_mismatch("ordering covers " + std::to_string(ordering.size()) + " symbols, text alphabet has " +
                                std::to_string(text.alphabet.size()));
    for (Symbol s : text.symbols) {
        if (!text.alphabet.contains(s)) throw alphabet_mismatch("text symbol code " + std::to_string(s) + " is not in the alphabet");
        if (s == kSentinel) throw invalid_input("text already contains the sentinel");
    }
}

inline BwtOutput transform_rotations(std::span<const Symbol> symbols, const AlphabetOrdering& ordering) {
    const std::size_t n = symbols.size();
    std::vector<std::uint32_t> ranked(n);
    for (std::size_t i = 0; i < n; ++i) ranked[i] = ordering.rank(symbols[i]);
    const auto sa = sort_rotations(ranked, ordering.size());

    BwtOutput out;
    out.bwt.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.bwt[i] = symbols[(sa[i] + n - 1) % n];
    out.runs = count_runs(out.bwt);
    out.lf = lf_mapping(out.bwt, ordering);
    return out;
}

}  // namespace detail

/// BWT of text·$ under `ordering`. The sentinel is appended here and must not
/// occur in the text.
inline BwtOutput build_bwt(const Text& text, const AlphabetOrdering& ordering) {
    detail::check_text(text, ordering);
    std::vector<Symbol> ext(text.symbols);
    ext.push_back(kSentinel);
    return detail::transform_rotations(ext, ordering);
}

/// BWT of the circular text without an appended sentinel. The text must end
/// with a terminator that occurs nowhere else, which makes every rotation
/// distinct (T_0 $_0 ... T_{d-1} $_{d-1} style inputs).
///
/// Appending a sentinel to such a text adds exactly one run, so
/// build_bwt(t).runs == build_bwt_terminated(t).runs + 1.
inline BwtOutput build_bwt_terminated(const Text& text, const AlphabetOrdering& ordering) {
    detail::check_text(text, ordering);
    if (text.symbols.empty() || text.alphabet.kind(text.symbols.back()) != SymbolKind::terminator)
        throw invalid_input("terminated text must end with a terminator");
    const Symbol last = text.symbols.back();
    if (std::count(text.symbols.begin(), text.symbols.end(), last) != 1)
        throw invalid_input("final terminator '" + text.alphabet.name(last) + "' is not unique");
    return detail::transform_rotations(text.symbols, ordering);
}

/// Labels met while following LF from row 0. For a build_bwt output this is
/// the text reversed, then the sentinel.
inline std::vector<Symbol> lf_path(const BwtOutput& b) {
    std::vector<Symbol> path;
    if (b.bwt.empty()) return path;
    path.reserve(b.bwt.size());
    index_t row = 0;
    for (std::size_t k = 0; k < b.bwt.size(); ++k) {
        path.push_back(b.bwt[row]);
        row = b.lf[row];
    }
    return path;
}

/// Inverse of build_bwt. Recomputes LF from the symbols, so a hand-written
/// BWT string is accepted as long as it is genuinely invertible.
inline Text invert_bwt(std::span<const Symbol> bwt, const Alphabet& alphabet, const AlphabetOrdering& ordering) {
    if (ordering.size() != alphabet.size()) throw alphabet_mismatch("ordering does not cover the alphabet");
    for (Symbol s : bwt)
        if (!alphabet.contains(s)) throw alphabet_mismatch("bwt symbol code " + std::to_string(s) + " is not in the alphabet");
    const auto sentinels = std::count(bwt.begin(), bwt.end(), kSentinel);
    if (sentinels != 1) throw malformed_bwt("expected exactly one sentinel, found " + std::to_string(sentinels));

    const auto lf = lf_mapping(bwt, ordering);
    const std::size_t n = bwt.size();
    Text out{alphabet, {}};
    out.symbols.reserve(n - 1);
    index_t row = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (bwt[row] == kSentinel) throw malformed_bwt("LF cycle through row 0 is shorter than the string");
        out.symbols.push_back(bwt[row]);
        row = lf[row];
    }
    if (bwt[row] != kSentinel) throw internal_error("LF walk did not end at the sentinel");
    std::reverse(out.symbols.begin(), out.symbols.end());
    return out;
}

inline Text invert_bwt(const BwtOutput& b, const Alphabet& alphabet, const AlphabetOrdering& ordering) {
    return invert_bwt(b.bwt, alphabet, ordering);
}

/// Text with every regular symbol replaced by the regular symbol of the same
/// rank, so that the identity ordering on the result sorts like `ordering`
/// does on the input. Terminators are remapped the same way.
inline Text relabel_by_rank(const Text& text, const AlphabetOrdering& ordering) {
    Text out{text.alphabet, {}};
    out.symbols.reserve(text.size());
    for (Symbol s : text.symbols) out.symbols.push_back(ordering.rank(s));
    return out;
}

}  // namespace bwtorder

#endif
