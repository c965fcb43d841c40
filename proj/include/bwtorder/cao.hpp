#ifndef BWTORDER_CAO_HPP
#define BWTORDER_CAO_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "bwtorder/alphabet.hpp"
#include "bwtorder/bwt.hpp"
#include "bwtorder/errors.hpp"
#include "bwtorder/suffix_sort.hpp"
#include "bwtorder/tuple_order.hpp"

namespace bwtorder {

/// d strings over the regular alphabet [0, sigma). Terminators $_0..$_{d-1}
/// are implicit: string i is followed by $_i.
struct StringCollection {
    std::vector<std::vector<std::uint32_t>> strings;
    std::size_t sigma = 0;
    /// Display names of the regular symbols; defaults to their decimal codes.
    std::vector<std::string> names;

    std::size_t size() const noexcept { return strings.size(); }

    std::size_t total_length() const noexcept {
        std::size_t n = 0;
        for (const auto& s : strings) n += s.size();
        return n;
    }

    std::string name(std::uint32_t a) const { return a < names.size() ? names[a] : std::to_string(a); }

    /// One string per element; the regular alphabet is the set of bytes used,
    /// in byte order.
    static StringCollection from_lines(const std::vector<std::string>& lines) {
        std::vector<int> code(256, -1);
        for (const auto& line : lines)
            for (unsigned char ch : line) code[ch] = 0;
        StringCollection c;
        for (int b = 0; b < 256; ++b) {
            if (code[b] < 0) continue;
            code[b] = static_cast<int>(c.sigma++);
            c.names.emplace_back(1, static_cast<char>(b));
        }
        for (const auto& line : lines) {
            auto& s = c.strings.emplace_back();
            for (unsigned char ch : line) s.push_back(static_cast<std::uint32_t>(code[ch]));
        }
        return c;
    }
};

/// A tuple element: a regular symbol or a per-string terminator. Terminators
/// sort before regular symbols.
struct Label {
    enum class Kind : std::uint8_t { terminator, regular };
    Kind kind = Kind::regular;
    std::uint32_t value = 0;

    static Label terminator(std::uint32_t i) { return {Kind::terminator, i}; }
    static Label regular(std::uint32_t a) { return {Kind::regular, a}; }
    bool is_terminator() const noexcept { return kind == Kind::terminator; }

    auto operator<=>(const Label&) const = default;
    bool operator==(const Label&) const = default;
};

inline std::string to_string(const Label& l, const StringCollection& c) {
    return l.is_terminator() ? "$" + std::to_string(l.value) : c.name(l.value);
}

/// The vertices of one block: for every string having `key` as a suffix, the
/// symbol preceding that suffix, or $_{i-1} (wrapping) when the suffix is the
/// whole of string i.
struct Block {
    struct Member {
        std::uint32_t string_id;
        Label label;
    };
    /// Where the label leads: the child block for a regular label, the string
    /// id for a terminator label.
    struct Target {
        Label label;
        std::uint32_t next;
    };

    std::uint32_t key_string = 0;
    std::uint32_t key_offset = 0;
    std::uint32_t key_length = 0;
    std::vector<Member> members;
    std::vector<Target> targets;  // sorted by label, one entry per distinct label

    std::vector<Label> tuple() const {
        std::vector<Label> t;
        t.reserve(targets.size());
        for (const auto& x : targets) t.push_back(x.label);
        return t;
    }
};

/// Blocks in prefix-first lexicographic order of their keys; block 0 has the
/// empty key.
struct BlockTupleSequence {
    std::vector<Block> blocks;

    std::vector<std::vector<Label>> tuples() const {
        std::vector<std::vector<Label>> out;
        out.reserve(blocks.size());
        for (const auto& b : blocks) out.push_back(b.tuple());
        return out;
    }

    std::vector<std::uint32_t> key(const StringCollection& c, std::size_t b) const {
        const auto& blk = blocks.at(b);
        const auto& s = c.strings.at(blk.key_string);
        return {s.begin() + blk.key_offset, s.begin() + blk.key_offset + blk.key_length};
    }
};

/// Groups the suffixes of all strings (including the empty and the full ones)
/// into blocks. The strings are joined with a shared separator below every
/// symbol, suffix sorted, and consecutive suffixes that agree up to and
/// including the separator are merged via the LCP array.
inline BlockTupleSequence build_blocks(const StringCollection& c) {
    const std::size_t d = c.size();
    if (d == 0) throw invalid_input("collection has no strings");

    // 0 = end marker, 1 = separator, regular a -> a + 2.
    std::vector<std::uint32_t> joined;
    joined.reserve(c.total_length() + d + 1);
    std::vector<std::uint32_t> owner, offset, dist;
    owner.reserve(joined.capacity());
    offset.reserve(joined.capacity());
    for (std::uint32_t i = 0; i < d; ++i) {
        const auto& s = c.strings[i];
        for (std::uint32_t k = 0; k < s.size(); ++k) {
            if (s[k] >= c.sigma) throw alphabet_mismatch("string " + std::to_string(i) + " uses symbol outside [0, sigma)");
            joined.push_back(s[k] + 2);
            owner.push_back(i);
            offset.push_back(k);
        }
        joined.push_back(1);
        owner.push_back(i);
        offset.push_back(static_cast<std::uint32_t>(s.size()));
    }
    joined.push_back(0);
    const std::size_t n = joined.size();
    dist.assign(n, 0);
    for (std::size_t p = n - 1; p-- > 0;) dist[p] = joined[p] == 1 ? 0 : dist[p + 1] + 1;

    const auto sa = suffix_array(joined, c.sigma + 2);
    const auto lcp = lcp_array(joined, sa);

    auto label_at = [&](std::size_t p) {
        const std::uint32_t i = owner[p];
        return offset[p] == 0 ? Label::terminator(static_cast<std::uint32_t>((i + d - 1) % d))
                              : Label::regular(joined[p - 1] - 2);
    };

    BlockTupleSequence seq;
    std::vector<std::uint32_t> block_of(n, 0), block_size;
    for (std::size_t r = 1; r < n; ++r) {
        const std::size_t p = sa[r];
        if (!(r > 1 && lcp[r] >= dist[p] + 1)) {
            auto& b = seq.blocks.emplace_back();
            b.key_string = owner[p];
            b.key_offset = offset[p];
            b.key_length = dist[p];
            block_size.push_back(0);
        }
        block_of[p] = static_cast<std::uint32_t>(seq.blocks.size() - 1);
        ++block_size.back();
    }
    for (std::size_t b = 0; b < seq.blocks.size(); ++b) {
        seq.blocks[b].members.reserve(block_size[b]);
        seq.blocks[b].targets.reserve(block_size[b]);
    }

    // Members and label targets, now that every position has its block.
    for (std::size_t r = 1; r < n; ++r) {
        const std::size_t p = sa[r];
        auto& b = seq.blocks[block_of[p]];
        const std::uint32_t i = owner[p];
        const Label label = label_at(p);
        b.members.push_back({i, label});
        b.targets.push_back({label, offset[p] == 0 ? i : block_of[p - 1]});
    }
    for (auto& b : seq.blocks) {
        auto& t = b.targets;
        std::sort(t.begin(), t.end(), [](const Block::Target& x, const Block::Target& y) { return x.label < y.label; });
        std::size_t w = 0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (w > 0 && t[w - 1].label == t[k].label) {
                if (t[w - 1].next != t[k].next) throw internal_error("members sharing a label disagree on their child block");
                continue;
            }
            t[w++] = t[k];
        }
        t.resize(w);
    }
    return seq;
}

/// Permutation pi of [0, d): pi[k] is the string whose terminator has rank k.
struct SpecialOrdering {
    std::vector<std::uint32_t> pi;
};

/// Builds pi by hierarchical composition: at each block, visit its label
/// groups in the arranged order, descending into the child block of a
/// regular label and emitting the string of a terminator label. Within every
/// block the members then appear grouped exactly as arranged.
inline SpecialOrdering reconstruct_pi(const BlockTupleSequence& seq, const TupleArrangement<Label>& arr) {
    if (arr.tuples.size() != seq.blocks.size()) throw precondition_error("arrangement does not match the block sequence");
    const std::size_t d = seq.blocks.empty() ? 0 : seq.blocks.front().members.size();
    SpecialOrdering out;
    out.pi.reserve(d);

    struct Frame {
        std::uint32_t block;
        std::size_t next;
    };
    std::vector<Frame> stack;
    if (!seq.blocks.empty()) stack.push_back({0, 0});
    while (!stack.empty()) {
        auto& f = stack.back();
        const auto& arranged = arr.tuples[f.block];
        if (f.next == arranged.size()) {
            stack.pop_back();
            continue;
        }
        const Label label = arranged[f.next++];
        const auto& targets = seq.blocks[f.block].targets;
        auto it = std::lower_bound(targets.begin(), targets.end(), label,
                                   [](const Block::Target& t, const Label& l) { return t.label < l; });
        if (it == targets.end() || !(it->label == label))
            throw internal_error("arranged label is not part of its block");
        if (label.is_terminator()) {
            out.pi.push_back(it->next);
        } else {
            stack.push_back({it->next, 0});
        }
    }

    std::vector<char> seen(d, 0);
    for (auto s : out.pi) {
        if (s >= d || seen[s]) throw internal_error("reconstructed order is not a permutation");
        seen[s] = 1;
    }
    if (out.pi.size() != d) throw internal_error("reconstructed order misses strings");
    return out;
}

struct CaoSolution {
    SpecialOrdering order;
    /// Runs of BWT(T_0 $_0 ... T_{d-1} $_{d-1}) without an extra sentinel.
    std::size_t runs = 0;
    BlockTupleSequence blocks;
    TupleArrangement<Label> arrangement;
};

/// Optimal terminator ordering for the collection.
inline CaoSolution solve_cao(const StringCollection& c) {
    CaoSolution sol;
    sol.blocks = build_blocks(c);
    sol.arrangement = greedy_tuple_order(sol.blocks.tuples());
    sol.order = reconstruct_pi(sol.blocks, sol.arrangement);
    sol.runs = sol.arrangement.runs();
    return sol;
}

/// The concatenation T_0 $_0 ... T_{d-1} $_{d-1} as a Text, with terminators
/// named $0.. and regular symbols named after the collection.
inline Text cao_text(const StringCollection& c) {
    std::vector<std::string> terms, regs;
    for (std::size_t i = 0; i < c.size(); ++i) terms.push_back("$" + std::to_string(i));
    for (std::uint32_t a = 0; a < c.sigma; ++a) regs.push_back(c.name(a));
    Text t{Alphabet(std::move(terms), std::move(regs)), {}};
    t.symbols.reserve(c.total_length() + c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (auto a : c.strings[i]) t.symbols.push_back(t.alphabet.regular(a));
        t.symbols.push_back(t.alphabet.terminator(i));
    }
    return t;
}

/// $_{pi[0]} < ... < $_{pi[d-1]} < 0 < ... < sigma-1.
inline AlphabetOrdering cao_ordering(const Text& text, const SpecialOrdering& order) {
    const auto& a = text.alphabet;
    std::vector<Symbol> seq{kSentinel};
    for (auto i : order.pi) seq.push_back(a.terminator(i));
    for (std::size_t r = 0; r < a.regular_count(); ++r) seq.push_back(a.regular(r));
    return AlphabetOrdering::from_sequence(a, seq);
}

/// Identity terminator order $_0 < $_1 < ...
inline SpecialOrdering identity_order(std::size_t d) {
    SpecialOrdering o;
    o.pi.resize(d);
    std::iota(o.pi.begin(), o.pi.end(), 0u);
    return o;
}

/// Runs of the terminated text under `order`, via the full transform.
inline std::size_t cao_runs(const StringCollection& c, const SpecialOrdering& order) {
    const auto t = cao_text(c);
    return build_bwt_terminated(t, cao_ordering(t, order)).runs;
}

}  // namespace bwtorder

#endif
