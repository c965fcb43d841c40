#ifndef BWTORDER_SUFFIX_SORT_HPP
#define BWTORDER_SUFFIX_SORT_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace bwtorder {

using index_t = std::uint32_t;

/// Sorts the cyclic rotations of `s` by prefix doubling with counting sort,
/// O(n log n). Values must lie in [0, alphabet_size). Returns the rotation
/// start positions, smallest rotation first. Equal rotations (periodic
/// input) keep an arbitrary but deterministic relative order.
///
/// When the last value is a unique minimum the result is the suffix array.
inline std::vector<index_t> sort_rotations(std::span<const std::uint32_t> s, std::size_t alphabet_size) {
    const std::size_t n = s.size();
    std::vector<index_t> sa(n);
    if (n == 0) return sa;

    std::vector<index_t> cls(n), tmp(n), cnt(std::max(alphabet_size, n) + 1, 0);
    for (std::size_t i = 0; i < n; ++i) ++cnt[s[i]];
    for (std::size_t a = 1; a < cnt.size(); ++a) cnt[a] += cnt[a - 1];
    for (std::size_t i = n; i-- > 0;) sa[--cnt[s[i]]] = static_cast<index_t>(i);

    std::size_t classes = 1;
    cls[sa[0]] = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (s[sa[i]] != s[sa[i - 1]]) ++classes;
        cls[sa[i]] = static_cast<index_t>(classes - 1);
    }

    std::vector<index_t> shifted(n);
    for (std::size_t h = 1; h < n && classes < n; h <<= 1) {
        // Rotations are already sorted by their second half; stable counting
        // sort by the first half's class finishes the round.
        for (std::size_t i = 0; i < n; ++i) shifted[i] = static_cast<index_t>((sa[i] + n - h % n) % n);
        std::fill(cnt.begin(), cnt.begin() + static_cast<std::ptrdiff_t>(classes), 0);
        for (std::size_t i = 0; i < n; ++i) ++cnt[cls[shifted[i]]];
        for (std::size_t a = 1; a < classes; ++a) cnt[a] += cnt[a - 1];
        for (std::size_t i = n; i-- > 0;) sa[--cnt[cls[shifted[i]]]] = shifted[i];

        tmp[sa[0]] = 0;
        classes = 1;
        for (std::size_t i = 1; i < n; ++i) {
            const std::size_t a = sa[i], b = sa[i - 1];
            if (cls[a] != cls[b] || cls[(a + h) % n] != cls[(b + h) % n]) ++classes;
            tmp[a] = static_cast<index_t>(classes - 1);
        }
        cls.swap(tmp);
    }
    return sa;
}

namespace detail {

inline constexpr index_t kEmpty = UINT32_MAX;

// SA-IS on s[0, n) with values below k; s[n-1] must be the unique minimum.
inline void sais(const index_t* s, index_t* sa, std::size_t n, std::size_t k) {
    if (n == 1) {
        sa[0] = 0;
        return;
    }
    std::vector<bool> stype(n);
    stype[n - 1] = true;
    for (std::size_t i = n - 1; i-- > 0;) stype[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && stype[i + 1]);
    auto lms = [&](std::size_t i) { return i > 0 && stype[i] && !stype[i - 1]; };

    std::vector<index_t> counts(k, 0), bkt(k);
    for (std::size_t i = 0; i < n; ++i) ++counts[s[i]];
    auto heads = [&] {
        index_t sum = 0;
        for (std::size_t a = 0; a < k; ++a) {
            bkt[a] = sum;
            sum += counts[a];
        }
    };
    auto tails = [&] {
        index_t sum = 0;
        for (std::size_t a = 0; a < k; ++a) {
            sum += counts[a];
            bkt[a] = sum;
        }
    };
    auto induce = [&] {
        heads();
        for (std::size_t i = 0; i < n; ++i)
            if (sa[i] != kEmpty && sa[i] > 0 && !stype[sa[i] - 1]) sa[bkt[s[sa[i] - 1]]++] = sa[i] - 1;
        tails();
        for (std::size_t i = n; i-- > 0;)
            if (sa[i] != kEmpty && sa[i] > 0 && stype[sa[i] - 1]) sa[--bkt[s[sa[i] - 1]]] = sa[i] - 1;
    };

    std::fill(sa, sa + n, kEmpty);
    tails();
    for (std::size_t i = 1; i < n; ++i)
        if (lms(i)) sa[--bkt[s[i]]] = static_cast<index_t>(i);
    induce();

    // Name the sorted LMS substrings.
    std::size_t n1 = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (lms(sa[i])) sa[n1++] = sa[i];
    std::fill(sa + n1, sa + n, kEmpty);
    index_t names = 0;
    std::size_t prev = SIZE_MAX;
    for (std::size_t i = 0; i < n1; ++i) {
        const std::size_t pos = sa[i];
        bool differ = prev == SIZE_MAX;
        for (std::size_t d = 0; !differ; ++d) {
            if (s[pos + d] != s[prev + d] || stype[pos + d] != stype[prev + d]) differ = true;
            else if (d > 0 && (lms(pos + d) || lms(prev + d))) break;
        }
        if (differ) {
            ++names;
            prev = pos;
        }
        sa[n1 + pos / 2] = names - 1;
    }
    for (std::size_t i = n, j = n; i-- > n1;)
        if (sa[i] != kEmpty) sa[--j] = sa[i];

    // Sort the reduced string, then seed the LMS suffixes in that order.
    index_t* s1 = sa + n - n1;
    if (names < n1) {
        sais(s1, sa, n1, names);
    } else {
        for (std::size_t i = 0; i < n1; ++i) sa[s1[i]] = static_cast<index_t>(i);
    }
    for (std::size_t i = 1, j = 0; i < n; ++i)
        if (lms(i)) s1[j++] = static_cast<index_t>(i);
    for (std::size_t i = 0; i < n1; ++i) sa[i] = s1[sa[i]];
    std::fill(sa + n1, sa + n, kEmpty);
    tails();
    for (std::size_t i = n1; i-- > 0;) {
        const index_t j = sa[i];
        sa[i] = kEmpty;
        sa[--bkt[s[j]]] = j;
    }
    induce();
}

}  // namespace detail

/// Linear-time suffix array (SA-IS). The last value must be 0 and occur
/// nowhere else; all values must lie in [0, alphabet_size).
inline std::vector<index_t> suffix_array(std::span<const std::uint32_t> s, std::size_t alphabet_size) {
    std::vector<index_t> sa(s.size());
    if (s.empty()) return sa;
    detail::sais(s.data(), sa.data(), s.size(), alphabet_size);
    return sa;
}

/// Kasai et al. LCP over a suffix array: lcp[i] = LCP(sa[i-1], sa[i]),
/// lcp[0] = 0. Requires `sa` to be a genuine suffix array of `s`.
inline std::vector<index_t> lcp_array(std::span<const std::uint32_t> s, std::span<const index_t> sa) {
    const std::size_t n = s.size();
    std::vector<index_t> rank(n), lcp(n, 0);
    for (std::size_t i = 0; i < n; ++i) rank[sa[i]] = static_cast<index_t>(i);
    std::size_t h = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (rank[i] == 0) {
            h = 0;
            continue;
        }
        const std::size_t j = sa[rank[i] - 1];
        while (i + h < n && j + h < n && s[i + h] == s[j + h]) ++h;
        lcp[rank[i]] = static_cast<index_t>(h);
        if (h > 0) --h;
    }
    return lcp;
}

}  // namespace bwtorder

#endif
