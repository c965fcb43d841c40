#ifndef BWTORDER_TUPLE_ORDER_HPP
#define BWTORDER_TUPLE_ORDER_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "bwtorder/errors.hpp"

namespace bwtorder {

/// Every tuple permuted; `matches` counts boundaries where the last element
/// of a tuple equals the first element of the next one.
template <class T>
struct TupleArrangement {
    std::vector<std::vector<T>> tuples;
    std::size_t matches = 0;
    std::size_t elements = 0;

    /// Runs of the concatenation. Holds for any arrangement because elements
    /// within a tuple are distinct.
    std::size_t runs() const noexcept { return elements - matches; }

    std::vector<T> flatten() const {
        std::vector<T> out;
        out.reserve(elements);
        for (const auto& t : tuples) out.insert(out.end(), t.begin(), t.end());
        return out;
    }
};

template <class T>
std::size_t count_matches(std::span<const std::vector<T>> arranged) {
    std::size_t m = 0;
    for (std::size_t i = 0; i + 1 < arranged.size(); ++i)
        if (!arranged[i].empty() && !arranged[i + 1].empty() && arranged[i].back() == arranged[i + 1].front()) ++m;
    return m;
}

/// Arranges the elements of each tuple so that the number of boundary
/// matches is maximal.
///
/// Forward pass: an element of L_i is "marked" when some optimal arrangement
/// of t_1..t_i starts t_i with it; R_i likewise for the last element. L_1 is
/// fully marked. From L_i to R_i: with two or more marked left elements all
/// of R_i is marked, with exactly one marked left element x everything but x
/// is marked, a singleton tuple marks its only element. L_{i+1} marks the
/// elements whose value is marked in R_i, or everything if none is.
///
/// Backward pass: the last tuple ends with its smallest marked right element;
/// tuple i ends with the first element of tuple i+1 when that value is marked
/// in R_i, otherwise with its smallest marked right element, and starts with
/// its smallest marked left element different from its end. Interior
/// elements ascend.
template <class T>
TupleArrangement<T> greedy_tuple_order(std::span<const std::vector<T>> tuples) {
    const std::size_t q = tuples.size();
    TupleArrangement<T> out;
    // Tuple i occupies [at[i], at[i + 1]) of the flat arrays, sorted.
    std::vector<std::size_t> at(q + 1, 0);
    for (std::size_t i = 0; i < q; ++i) {
        if (tuples[i].empty()) throw invalid_input("tuple " + std::to_string(i) + " is empty");
        at[i + 1] = at[i] + tuples[i].size();
    }
    out.elements = at[q];
    std::vector<T> elems;
    elems.reserve(out.elements);
    for (std::size_t i = 0; i < q; ++i) {
        elems.insert(elems.end(), tuples[i].begin(), tuples[i].end());
        const auto b = elems.begin() + static_cast<std::ptrdiff_t>(at[i]);
        std::sort(b, elems.end());
        if (std::adjacent_find(b, elems.end()) != elems.end())
            throw invalid_input("tuple " + std::to_string(i) + " repeats an element");
    }
    if (q == 0) return out;

    // Position of v inside tuple i, or -1.
    auto index_of = [&](std::size_t i, const T& v) -> std::ptrdiff_t {
        const auto b = elems.begin() + static_cast<std::ptrdiff_t>(at[i]);
        const auto e = elems.begin() + static_cast<std::ptrdiff_t>(at[i + 1]);
        auto it = std::lower_bound(b, e, v);
        if (it == e || !(*it == v)) return -1;
        return it - b;
    };

    std::vector<char> left(out.elements, 0), right(out.elements, 0);
    std::fill(left.begin(), left.begin() + static_cast<std::ptrdiff_t>(at[1]), 1);
    for (std::size_t i = 0; i < q; ++i) {
        const std::size_t k = at[i + 1] - at[i];
        char* r = right.data() + at[i];
        const char* l = left.data() + at[i];
        if (k == 1) {
            r[0] = 1;
        } else {
            const auto marked = std::count(l, l + k, char{1});
            std::fill(r, r + k, 1);
            if (marked < 2) r[std::find(l, l + k, char{1}) - l] = 0;
        }
        if (i + 1 == q) break;
        char* next = left.data() + at[i + 1];
        const std::size_t k2 = at[i + 2] - at[i + 1];
        bool any = false;
        for (std::size_t e = 0; e < k2; ++e) {
            const auto pos = index_of(i, elems[at[i + 1] + e]);
            if (pos >= 0 && r[pos]) {
                next[e] = 1;
                any = true;
            }
        }
        if (!any) std::fill(next, next + k2, 1);
    }

    auto first_marked = [&](const std::vector<char>& marks, std::size_t i, std::ptrdiff_t skip) -> std::size_t {
        for (std::size_t e = 0; e < at[i + 1] - at[i]; ++e)
            if (marks[at[i] + e] && static_cast<std::ptrdiff_t>(e) != skip) return e;
        throw internal_error("no marked element available");
    };

    out.tuples.resize(q);
    std::ptrdiff_t next_first = -1;  // position of the first element of tuple i + 1
    for (std::size_t i = q; i-- > 0;) {
        const T* e = elems.data() + at[i];
        const std::size_t k = at[i + 1] - at[i];
        std::size_t r = 0;
        bool matched = false;
        if (next_first >= 0) {
            const auto pos = index_of(i, elems[at[i + 1] + static_cast<std::size_t>(next_first)]);
            if (pos >= 0 && right[at[i] + static_cast<std::size_t>(pos)]) {
                r = static_cast<std::size_t>(pos);
                matched = true;
            }
        }
        if (!matched) r = first_marked(right, i, -1);
        auto& arranged = out.tuples[i];
        if (k == 1) {
            arranged.assign(e, e + 1);
            next_first = 0;
            continue;
        }
        const std::size_t l = first_marked(left, i, static_cast<std::ptrdiff_t>(r));
        arranged.reserve(k);
        arranged.push_back(e[l]);
        for (std::size_t x = 0; x < k; ++x)
            if (x != l && x != r) arranged.push_back(e[x]);
        arranged.push_back(e[r]);
        next_first = static_cast<std::ptrdiff_t>(l);
    }
    out.matches = count_matches<T>(out.tuples);
    return out;
}

template <class T>
TupleArrangement<T> greedy_tuple_order(const std::vector<std::vector<T>>& tuples) {
    return greedy_tuple_order<T>(std::span<const std::vector<T>>(tuples));
}

}  // namespace bwtorder

#endif
