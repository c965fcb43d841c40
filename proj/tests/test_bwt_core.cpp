#include <gtest/gtest.h>

#include <random>

#include "bwtorder/bwt.hpp"
#include "oracles.hpp"

using namespace bwtorder;

namespace {

AlphabetOrdering order_of(const Text& t, const std::string& smallest_first) {
    std::vector<Symbol> seq{kSentinel};
    for (char c : smallest_first) seq.push_back(*t.alphabet.find(std::string(1, c)));
    return AlphabetOrdering::from_sequence(t.alphabet, seq);
}

std::string bwt_string(const Text& t, const BwtOutput& b) {
    std::string s;
    for (auto x : b.bwt) s += t.alphabet.name(x);
    return s;
}

}  // namespace

TEST(Bwt, MississippiStandardOrderHasNineRuns) {
    const auto t = Text::from_bytes("mississippi");
    const auto b = build_bwt(t, AlphabetOrdering::identity(t.alphabet));
    EXPECT_EQ(bwt_string(t, b), "ipssm$pissii");
    EXPECT_EQ(b.runs, 9u);
}

TEST(Bwt, MississippiReorderedHasEightRuns) {
    const auto t = Text::from_bytes("mississippi");
    EXPECT_EQ(build_bwt(t, order_of(t, "sipm")).runs, 8u);
}

TEST(Bwt, UnaryText) {
    const auto t = Text::from_bytes("aaa");
    const auto b = build_bwt(t, AlphabetOrdering::identity(t.alphabet));
    EXPECT_EQ(bwt_string(t, b), "aaa$");
    EXPECT_EQ(b.runs, 2u);
}

TEST(Bwt, Banana) {
    const auto t = Text::from_bytes("banana");
    const auto b = build_bwt(t, AlphabetOrdering::identity(t.alphabet));
    EXPECT_EQ(bwt_string(t, b), "annb$aa");
    EXPECT_EQ(b.runs, 5u);
}

TEST(Bwt, OutputShape) {
    const auto t = Text::from_bytes("abracadabra");
    const auto b = build_bwt(t, AlphabetOrdering::identity(t.alphabet));
    ASSERT_EQ(b.bwt.size(), t.size() + 1);
    std::vector<index_t> sorted = b.lf;
    std::sort(sorted.begin(), sorted.end());
    for (index_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
    EXPECT_EQ(std::count(b.bwt.begin(), b.bwt.end(), kSentinel), 1);
}

TEST(CountRuns, Examples) {
    EXPECT_EQ(count_runs(std::string("")), 0u);
    EXPECT_EQ(count_runs(std::string("aaabbb")), 2u);
    EXPECT_EQ(count_runs(std::string("ipssm$pissii")), 9u);
    EXPECT_EQ(count_runs(std::vector<int>{1}), 1u);
}

TEST(Invert, Mississippi) {
    const auto t = Text::from_bytes("mississippi");
    const auto b = build_bwt(t, AlphabetOrdering::identity(t.alphabet));
    EXPECT_EQ(invert_bwt(b, t.alphabet, AlphabetOrdering::identity(t.alphabet)).str(), "mississippi");
}

TEST(Invert, Unary) {
    const auto t = Text::from_bytes("aaa");
    const auto ord = AlphabetOrdering::identity(t.alphabet);
    EXPECT_EQ(invert_bwt(build_bwt(t, ord), t.alphabet, ord).str(), "aaa");
}

TEST(Invert, RejectsMissingOrRepeatedSentinel) {
    const auto t = Text::from_bytes("ab");
    const auto ord = AlphabetOrdering::identity(t.alphabet);
    const Symbol a = t.alphabet.regular(0), b = t.alphabet.regular(1);
    EXPECT_THROW(invert_bwt(std::vector<Symbol>{a, b}, t.alphabet, ord), malformed_bwt);
    EXPECT_THROW(invert_bwt(std::vector<Symbol>{a, kSentinel, kSentinel}, t.alphabet, ord), malformed_bwt);
}

TEST(Invert, RejectsStringsWithShortLfCycle) {
    // "$ab" puts the sentinel in row 0, so LF returns to row 0 at once.
    const auto t = Text::from_bytes("ab");
    const auto ord = AlphabetOrdering::identity(t.alphabet);
    const Symbol a = t.alphabet.regular(0), b = t.alphabet.regular(1);
    EXPECT_THROW(invert_bwt(std::vector<Symbol>{kSentinel, a, b}, t.alphabet, ord), malformed_bwt);
}

TEST(LfPath, Mississippi) {
    const auto t = Text::from_bytes("mississippi");
    const auto b = build_bwt(t, AlphabetOrdering::identity(t.alphabet));
    std::string path;
    for (auto s : lf_path(b)) path += t.alphabet.name(s);
    EXPECT_EQ(path, "ippississim$");
}

TEST(LfPath, SmallTexts) {
    for (auto [text, expect] : {std::pair{"aaa", "aaa$"}, std::pair{"banana", "ananab$"}}) {
        const auto t = Text::from_bytes(text);
        std::string path;
        for (auto s : lf_path(build_bwt(t, AlphabetOrdering::identity(t.alphabet)))) path += t.alphabet.name(s);
        EXPECT_EQ(path, expect);
    }
}

TEST(Bwt, RejectsForeignSymbolsAndSentinel) {
    auto t = Text::from_bytes("ab");
    const auto ord = AlphabetOrdering::identity(t.alphabet);
    auto bad = t;
    bad.symbols.push_back(17);
    EXPECT_THROW(build_bwt(bad, ord), alphabet_mismatch);
    auto with_sentinel = t;
    with_sentinel.symbols.push_back(kSentinel);
    EXPECT_THROW(build_bwt(with_sentinel, ord), invalid_input);
    const auto other = Text::from_bytes("abc");
    EXPECT_THROW(build_bwt(t, AlphabetOrdering::identity(other.alphabet)), alphabet_mismatch);
}

TEST(Ordering, RejectsInadmissible) {
    const Alphabet a({"$0", "$1"}, {"x", "y"});
    EXPECT_THROW(AlphabetOrdering::from_sequence(a, std::vector<Symbol>{1, 0, 2, 3, 4}), invalid_input);
    EXPECT_THROW(AlphabetOrdering::from_sequence(a, std::vector<Symbol>{0, 3, 1, 2, 4}), invalid_input);
    EXPECT_THROW(AlphabetOrdering::from_sequence(a, std::vector<Symbol>{0, 1, 1, 3, 4}), invalid_input);
    EXPECT_NO_THROW(AlphabetOrdering::from_sequence(a, std::vector<Symbol>{0, 2, 1, 4, 3}));
}

TEST(Terminated, OneRunFewerThanWithSentinel) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto strings = oracle::random_collection(rng, 5, 5, 3);
        std::vector<std::string> terms, regs{"a", "b", "c"};
        for (std::size_t i = 0; i < strings.size(); ++i) terms.push_back("$" + std::to_string(i));
        Text t{Alphabet(terms, regs), {}};
        for (std::size_t i = 0; i < strings.size(); ++i) {
            for (auto x : strings[i]) t.symbols.push_back(t.alphabet.regular(x));
            t.symbols.push_back(t.alphabet.terminator(i));
        }
        const auto ord = AlphabetOrdering::identity(t.alphabet);
        EXPECT_EQ(build_bwt(t, ord).runs, build_bwt_terminated(t, ord).runs + 1);
    }
}

TEST(Terminated, RequiresUniqueFinalTerminator) {
    const Alphabet a({"$0"}, {"x"});
    const auto ord = AlphabetOrdering::identity(a);
    EXPECT_THROW(build_bwt_terminated(Text{a, {2, 2}}, ord), invalid_input);
    EXPECT_THROW(build_bwt_terminated(Text{a, {1, 2, 1}}, ord), invalid_input);
    EXPECT_NO_THROW(build_bwt_terminated(Text{a, {2, 2, 1}}, ord));
}

// Properties over random texts.

TEST(BwtProperty, MatchesRotationSortOracle) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 300; ++trial) {
        const auto s = oracle::random_text(rng, 1 + rng() % 60, 1 + rng() % 6);
        const auto t = Text::from_bytes(s);
        std::string order;
        for (std::size_t i = 0; i < t.alphabet.regular_count(); ++i) order += t.alphabet.name(t.alphabet.regular(i));
        std::shuffle(order.begin(), order.end(), rng);
        const auto b = build_bwt(t, order_of(t, order));
        ASSERT_EQ(bwt_string(t, b), oracle::byte_bwt(s, order)) << s << " under " << order;
    }
}

TEST(BwtProperty, LfIsStableAndRoundTrips) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 300; ++trial) {
        const auto s = oracle::random_text(rng, 1 + rng() % 100, 1 + rng() % 8);
        const auto t = Text::from_bytes(s);
        std::string order;
        for (std::size_t i = 0; i < t.alphabet.regular_count(); ++i) order += t.alphabet.name(t.alphabet.regular(i));
        std::shuffle(order.begin(), order.end(), rng);
        const auto ord = order_of(t, order);
        const auto b = build_bwt(t, ord);
        for (std::size_t i = 0; i < b.bwt.size(); ++i)
            for (std::size_t j = i + 1; j < b.bwt.size(); ++j)
                if (b.bwt[i] == b.bwt[j]) {
                    ASSERT_LT(b.lf[i], b.lf[j]);
                }
        ASSERT_EQ(invert_bwt(b, t.alphabet, ord).symbols, t.symbols);
    }
}

TEST(BwtProperty, RelabelEquivalence) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = oracle::random_text(rng, 1 + rng() % 50, 1 + rng() % 6);
        const auto t = Text::from_bytes(s);
        std::string order;
        for (std::size_t i = 0; i < t.alphabet.regular_count(); ++i) order += t.alphabet.name(t.alphabet.regular(i));
        std::shuffle(order.begin(), order.end(), rng);
        const auto ord = order_of(t, order);
        const auto direct = build_bwt(t, ord);
        const auto relabelled = relabel_by_rank(t, ord);
        const auto via = build_bwt(relabelled, AlphabetOrdering::identity(t.alphabet));
        ASSERT_EQ(direct.runs, via.runs);
        for (std::size_t i = 0; i < direct.bwt.size(); ++i) ASSERT_EQ(via.bwt[i], ord.rank(direct.bwt[i]));
    }
}

TEST(SuffixArrayProperty, AgreesWithRotationSort) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 1 + rng() % 300;
        const std::uint32_t sigma = 1 + static_cast<std::uint32_t>(rng() % (trial % 3 == 0 ? 2 : 12));
        std::vector<std::uint32_t> s(n);
        for (std::size_t i = 0; i + 1 < n; ++i) s[i] = 1 + static_cast<std::uint32_t>(rng() % sigma);
        if (trial % 7 == 0)
            for (std::size_t i = 0; i + 1 < n; ++i) s[i] = 1 + static_cast<std::uint32_t>(i % 3 == 2);
        s[n - 1] = 0;
        const std::size_t k = *std::max_element(s.begin(), s.end()) + 1;
        ASSERT_EQ(suffix_array(s, k), sort_rotations(s, k)) << "trial " << trial;
    }
}
