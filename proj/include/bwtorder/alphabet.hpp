#ifndef BWTORDER_ALPHABET_HPP
#define BWTORDER_ALPHABET_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bwtorder/errors.hpp"

namespace bwtorder {

/// Symbols are dense integer codes. Code 0 is always the sentinel, the next
/// block of codes holds the special terminators, the rest are regular symbols.
using Symbol = std::uint32_t;

inline constexpr Symbol kSentinel = 0;

enum class SymbolKind : std::uint8_t { sentinel, terminator, regular };

class Alphabet {
public:
    /// Sentinel-only alphabet.
    Alphabet() : names_{"$"}, index_{{"$", kSentinel}} {}

    Alphabet(std::vector<std::string> terminator_names, std::vector<std::string> regular_names)
        : terminators_(terminator_names.size()), regulars_(regular_names.size()) {
        names_.reserve(1 + terminators_ + regulars_);
        names_.emplace_back("$");
        for (auto& n : terminator_names) names_.push_back(std::move(n));
        for (auto& n : regular_names) names_.push_back(std::move(n));
        for (Symbol s = 0; s < names_.size(); ++s) {
            if (!index_.emplace(names_[s], s).second)
                throw invalid_input("duplicate symbol name '" + names_[s] + "'");
        }
    }

    /// Regular alphabet made of the distinct bytes of `bytes`, in byte order.
    static Alphabet of_bytes(std::string_view bytes) {
        std::array<bool, 256> seen{};
        for (unsigned char c : bytes) seen[c] = true;
        std::vector<std::string> names;
        for (int c = 0; c < 256; ++c)
            if (seen[c]) names.emplace_back(1, static_cast<char>(c));
        return Alphabet({}, std::move(names));
    }

    /// Number of symbols including the sentinel (sigma + 1 in most texts).
    std::size_t size() const noexcept { return names_.size(); }
    std::size_t terminator_count() const noexcept { return terminators_; }
    std::size_t regular_count() const noexcept { return regulars_; }

    Symbol terminator(std::size_t i) const noexcept { return static_cast<Symbol>(1 + i); }
    Symbol regular(std::size_t i) const noexcept { return static_cast<Symbol>(1 + terminators_ + i); }

    /// Index of a terminator / regular symbol within its own class.
    std::size_t terminator_index(Symbol s) const noexcept { return s - 1; }
    std::size_t regular_index(Symbol s) const noexcept { return s - 1 - terminators_; }

    bool contains(Symbol s) const noexcept { return s < names_.size(); }

    SymbolKind kind(Symbol s) const noexcept {
        if (s == kSentinel) return SymbolKind::sentinel;
        return s <= terminators_ ? SymbolKind::terminator : SymbolKind::regular;
    }

    const std::string& name(Symbol s) const { return names_.at(s); }

    std::optional<Symbol> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool operator==(const Alphabet& other) const {
        return terminators_ == other.terminators_ && names_ == other.names_;
    }

private:
    std::size_t terminators_ = 0;
    std::size_t regulars_ = 0;
    std::vector<std::string> names_;
    std::unordered_map<std::string, Symbol> index_;
};

/// A sequence of symbols over a declared alphabet. The sentinel is never part
/// of a Text; transforms append it themselves.
struct Text {
    Alphabet alphabet;
    std::vector<Symbol> symbols;

    std::size_t size() const noexcept { return symbols.size(); }

    static Text from_bytes(std::string_view bytes) {
        Text t{Alphabet::of_bytes(bytes), {}};
        std::array<Symbol, 256> code{};
        for (std::size_t i = 0; i < t.alphabet.regular_count(); ++i)
            code[static_cast<unsigned char>(t.alphabet.name(t.alphabet.regular(i))[0])] = t.alphabet.regular(i);
        t.symbols.reserve(bytes.size());
        for (unsigned char c : bytes) t.symbols.push_back(code[c]);
        return t;
    }

    /// Renders the text with each symbol's name; multi-character names make
    /// this ambiguous, so it is meant for byte texts and diagnostics.
    std::string str() const {
        std::string out;
        for (Symbol s : symbols) out += alphabet.name(s);
        return out;
    }
};

/// Bijection symbol -> rank in [0, sigma). Admissible orderings put the
/// sentinel at rank 0 and all terminators below all regular symbols.
class AlphabetOrdering {
public:
    AlphabetOrdering() = default;

    /// Code order: sentinel, terminators, regular symbols.
    static AlphabetOrdering identity(const Alphabet& alphabet) {
        std::vector<Symbol> seq(alphabet.size());
        for (Symbol s = 0; s < seq.size(); ++s) seq[s] = s;
        return from_sequence(alphabet, seq);
    }

    /// `smallest_first[r]` is the symbol of rank r.
    static AlphabetOrdering from_sequence(const Alphabet& alphabet, std::span<const Symbol> smallest_first) {
        AlphabetOrdering o;
        if (smallest_first.size() != alphabet.size())
            throw alphabet_mismatch("ordering has " + std::to_string(smallest_first.size()) +
                                    " symbols, alphabet has " + std::to_string(alphabet.size()));
        o.order_.assign(smallest_first.begin(), smallest_first.end());
        o.rank_.assign(alphabet.size(), kUnset);
        for (std::uint32_t r = 0; r < o.order_.size(); ++r) {
            Symbol s = o.order_[r];
            if (!alphabet.contains(s)) throw alphabet_mismatch("ordering names unknown symbol code " + std::to_string(s));
            if (o.rank_[s] != kUnset) throw invalid_input("symbol '" + alphabet.name(s) + "' appears twice in ordering");
            o.rank_[s] = r;
        }
        o.check_admissible(alphabet);
        return o;
    }

    static AlphabetOrdering from_ranks(const Alphabet& alphabet, std::span<const std::uint32_t> ranks) {
        if (ranks.size() != alphabet.size())
            throw alphabet_mismatch("rank vector size does not match alphabet");
        std::vector<Symbol> seq(ranks.size(), kUnset);
        for (Symbol s = 0; s < ranks.size(); ++s) {
            if (ranks[s] >= ranks.size() || seq[ranks[s]] != kUnset)
                throw invalid_input("rank vector is not a permutation");
            seq[ranks[s]] = s;
        }
        return from_sequence(alphabet, seq);
    }

    std::size_t size() const noexcept { return rank_.size(); }
    std::uint32_t rank(Symbol s) const { return rank_.at(s); }
    Symbol at(std::uint32_t r) const { return order_.at(r); }
    std::span<const std::uint32_t> ranks() const noexcept { return rank_; }
    std::span<const Symbol> sequence() const noexcept { return order_; }

    bool operator==(const AlphabetOrdering&) const = default;

private:
    static constexpr std::uint32_t kUnset = ~std::uint32_t{0};

    void check_admissible(const Alphabet& alphabet) const {
        if (rank_[kSentinel] != 0) throw invalid_input("sentinel must have rank 0");
        const auto t = alphabet.terminator_count();
        for (std::uint32_t r = 1; r <= t; ++r) {
            if (alphabet.kind(order_[r]) != SymbolKind::terminator)
                throw invalid_input("terminators must rank below every regular symbol");
        }
    }

    std::vector<std::uint32_t> rank_;
    std::vector<Symbol> order_;
};

}  // namespace bwtorder

#endif
