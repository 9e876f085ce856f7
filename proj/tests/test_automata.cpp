#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "zfm/automata.hpp"
#include "zfm/regex.hpp"
#include "zfm/tracks.hpp"

using namespace zfm;

namespace {

Dfa dfa_of(const Regex& r, std::size_t k) { return minimize(determinize(compile_regex(r, k))); }

Regex parse01(std::string_view s) {
  return parse_regex(s, [](std::string_view t) -> std::optional<std::pair<Symbol, std::size_t>> {
    if (!t.empty() && t[0] >= '0' && t[0] <= '9') return std::pair{Symbol(t[0] - '0'), 1};
    return std::nullopt;
  });
}

Dfa re(std::string_view s, std::size_t k = 2) { return dfa_of(parse01(s), k); }

}  // namespace

TEST(Regex, LiteralAcceptsOnlyItself) {
  const Dfa a = dfa_of(Regex::lit(1), 2);
  EXPECT_TRUE(a.accepts(Word{1}));
  EXPECT_FALSE(a.accepts(Word{}));
  EXPECT_FALSE(a.accepts(Word{1, 1}));
  EXPECT_EQ(count_by_length(a, 6), 1);
}

TEST(Regex, StarThenLiteralMatchesOracle) {
  const Regex r = Regex::cat(Regex::star(Regex::lit(0)), Regex::lit(1));
  const Dfa a = dfa_of(r, 2);
  for (const auto& w : oracle::all_words(2, 6)) EXPECT_EQ(a.accepts(w), oracle::matches(r, w));
}

TEST(Regex, EpsilonOrZero) {
  const Dfa a = dfa_of(Regex::alt(Regex::epsilon(), Regex::lit(0)), 2);
  EXPECT_EQ(enumerate(a, 5), (std::vector<Word>{{}, {0}}));
}

TEST(Regex, LiteralOutsideAlphabetThrows) {
  EXPECT_THROW(compile_regex(Regex::lit(3), 2), AlphabetMismatch);
}

TEST(Regex, ParserSyntaxErrorCarriesColumn) {
  try {
    parse01("0(1");
    FAIL();
  } catch (const RegexSyntaxError& e) {
    EXPECT_EQ(e.column, 4u);
  }
}

TEST(Regex, ComplexityCountsOperations) {
  EXPECT_EQ(parse01("0*1").complexity(), 2u);
  EXPECT_EQ(parse01("(0|1)*").complexity(), 2u);
  EXPECT_EQ(parse01("1").complexity(), 0u);
}

TEST(Regex, RandomCorpusAgreesWithMatcher) {
  std::mt19937 rng(7);
  const auto words = oracle::all_words(3, 6);
  for (int i = 0; i < 150; ++i) {
    const Regex r = oracle::random_regex(rng, 1 + i % 6, 3);
    const Dfa a = dfa_of(r, 3);
    std::vector<Word> expect;
    for (const auto& w : words) {
      if (oracle::matches(r, w)) expect.push_back(w);
    }
    ASSERT_EQ(enumerate(a, 6), expect) << r.to_string();
  }
}

TEST(Regex, StateEliminationRoundTrip) {
  std::mt19937 rng(11);
  for (int i = 0; i < 60; ++i) {
    const Dfa a = minimize(oracle::random_dfa(rng, 4, 2));
    EXPECT_TRUE(equivalent(a, dfa_of(to_regex(a), 2)));
  }
}

TEST(Boolean, SubsetIntersection) {
  EXPECT_TRUE(equivalent(intersect(re("0*1"), re("(0|1)*1")), re("0*1")));
  EXPECT_TRUE(equivalent(complement(Dfa::empty(2)), re("(0|1)*")));
  EXPECT_TRUE(is_empty(intersect(re("0*1"), complement(re("0*1")))));
  EXPECT_TRUE(includes(re("(0|1)*"), re("0*1")));
  EXPECT_FALSE(includes(re("0*1"), re("(0|1)*")));
}

TEST(Boolean, StarOfWordCountsOnePerEvenLength) {
  const Dfa a = determinize(star(compile_regex(parse01("01"), 2)));
  for (std::size_t n = 0; n <= 8; ++n) EXPECT_EQ(count_exact(a, n), n % 2 == 0 ? 1 : 0);
}

TEST(Boolean, RandomSoundness) {
  std::mt19937 rng(3);
  const auto words = oracle::all_words(2, 6);
  for (int i = 0; i < 40; ++i) {
    const Dfa a = oracle::random_dfa(rng, 4, 2);
    const Dfa b = oracle::random_dfa(rng, 3, 2);
    const Dfa u = unite(a, b), x = intersect(a, b), c = complement(a);
    const Nfa nu = unite(Nfa::from_dfa(a), Nfa::from_dfa(b));
    const Nfa nc = concat(Nfa::from_dfa(a), Nfa::from_dfa(b));
    for (const auto& w : words) {
      ASSERT_EQ(u.accepts(w), a.accepts(w) || b.accepts(w));
      ASSERT_EQ(x.accepts(w), a.accepts(w) && b.accepts(w));
      ASSERT_EQ(c.accepts(w), !a.accepts(w));
      ASSERT_EQ(nu.accepts(w), u.accepts(w));
      bool split = false;
      for (std::size_t i2 = 0; i2 <= w.size(); ++i2) {
        split = split || (a.accepts(std::span(w).first(i2)) && b.accepts(std::span(w).subspan(i2)));
      }
      ASSERT_EQ(nc.accepts(w), split);
    }
  }
}

TEST(Boolean, AlphabetMismatchThrows) {
  EXPECT_THROW(intersect(Dfa::empty(2), Dfa::empty(3)), AlphabetMismatch);
}

TEST(Minimize, ZeroStarOneHasTwoStatesPlusSink) {
  Nfa n(2);
  const State p = n.add_state(), q = n.add_state(true);
  n.initial = {p};
  n.add_edge(p, 0, p);
  n.add_edge(p, 1, q);
  const Dfa m = minimize(determinize(n));
  EXPECT_EQ(m.num_states(), 3u);
  for (const auto& w : oracle::all_words(2, 8)) EXPECT_EQ(m.accepts(w), n.accepts(w));
}

TEST(Minimize, IdempotentAndCanonical) {
  std::mt19937 rng(5);
  for (int i = 0; i < 50; ++i) {
    const Dfa a = oracle::random_dfa(rng, 5, 2);
    const Dfa m = minimize(a);
    EXPECT_EQ(minimize(m), m);
    const Dfa b = oracle::random_dfa(rng, 5, 2);
    EXPECT_EQ(equivalent(a, b), minimize(a) == minimize(b));
  }
}

TEST(Trim, RemovesUselessStates) {
  Nfa n(2);
  const State a = n.add_state(), b = n.add_state(true), dead = n.add_state(), lost = n.add_state(true);
  n.initial = {a};
  n.add_edge(a, 0, b);
  n.add_edge(a, 1, dead);
  n.add_edge(lost, 0, b);
  EXPECT_EQ(trim(n).num_states(), 2u);
}

TEST(Counting, SpecExamples) {
  EXPECT_EQ(count_by_length(re("0*1"), 5), 5);
  EXPECT_EQ(count_by_length(re("(0|1)*"), 3), 15);
  EXPECT_EQ(count_by_length(Dfa::empty(2), 9), 0);
}

TEST(Counting, EnumerateIsLengthLex) {
  const auto words = enumerate(re("(0|1)*"), 2);
  EXPECT_EQ(words, (std::vector<Word>{{}, {0}, {1}, {0, 0}, {0, 1}, {1, 0}, {1, 1}}));
  std::vector<std::size_t> rank{1, 0};
  std::vector<Word> seen;
  enumerate(re("(0|1)*"), 1, [&](const Word& w) { seen.push_back(w); return true; }, rank);
  EXPECT_EQ(seen, (std::vector<Word>{{}, {1}, {0}}));
}

TEST(Sparse, SpecExamples) {
  EXPECT_TRUE(is_sparse(re("0*1")));
  EXPECT_FALSE(is_sparse(re("(0|1)*")));
  EXPECT_TRUE(is_sparse(re("(01)*")));
}

TEST(Sparse, AgreesWithGrowthOnRandomDfas) {
  std::mt19937 rng(2024);
  for (int i = 0; i < 50; ++i) {
    const Dfa a = oracle::random_dfa(rng, 3, 2);
    EXPECT_EQ(is_sparse(a), oracle::numerically_sparse(a)) << i;
  }
}

TEST(Tracks, ConvolutionWithSharp) {
  const TrackAlphabet alph{2, 2, Padding::Sharp};
  const std::vector<std::vector<std::size_t>> words{{1, 0}, {0, 1, 1}};
  const Word w = convolve(words, alph);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(alph.decode(w[0]), (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(alph.decode(w[1]), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(alph.decode(w[2]), (std::vector<std::size_t>{2, 1}));
  EXPECT_EQ(deconvolve(w, alph), words);
  const std::vector<std::vector<std::size_t>> lam{{}, {1}};
  const Word v = convolve(lam, alph);
  EXPECT_EQ(alph.decode(v.at(0)), (std::vector<std::size_t>{2, 1}));
}

TEST(Tracks, ProjectDiagonalIsUniversal) {
  for (Padding pad : {Padding::Sharp, Padding::Zero}) {
    const TrackAlphabet alph{2, 2, pad};
    Dfa diag;
    diag.num_symbols = alph.size();
    diag.add_state(true);
    const State sink = diag.add_state(false);
    for (Symbol s = 0; s < alph.size(); ++s) {
      diag.delta[s] = alph.letter(s, 0) == alph.letter(s, 1) ? 0 : sink;
      diag.delta[alph.size() + s] = sink;
    }
    const Dfa p = minimize(determinize(project(diag, alph, 1)));
    EXPECT_TRUE(equivalent(p, Dfa::universal(2)));
  }
}

TEST(Tracks, CylindrifyThenProjectIsIdentity) {
  std::mt19937 rng(9);
  const TrackAlphabet one{2, 1, Padding::Sharp};
  for (int i = 0; i < 20; ++i) {
    const Dfa a = minimize(oracle::random_dfa(rng, 4, 2));
    const Dfa c = cylindrify(a, one, 1);
    const Dfa back = minimize(determinize(project(c, {2, 2, Padding::Sharp}, 1)));
    EXPECT_TRUE(equivalent(back, a));
  }
}

TEST(Tracks, PadClosureIdempotentAndMonotone) {
  std::mt19937 rng(13);
  const TrackAlphabet alph{2, 1, Padding::Zero};
  for (int i = 0; i < 30; ++i) {
    const Dfa a = oracle::random_dfa(rng, 4, 2);
    const Dfa once = minimize(determinize(pad_closure(Nfa::from_dfa(a), alph)));
    const Dfa twice = minimize(determinize(pad_closure(Nfa::from_dfa(once), alph)));
    EXPECT_EQ(once, twice);
    EXPECT_TRUE(includes(once, a));
  }
}

TEST(Tracks, ZeroFastPathsAgreeWithGeneric) {
  std::mt19937 rng(17);
  const TrackAlphabet two{3, 2, Padding::Zero};
  for (int i = 0; i < 20; ++i) {
    const Dfa a = oracle::random_dfa(rng, 4, two.size());
    const Dfa slow = minimize(determinize(project(a, two, 0)));
    EXPECT_TRUE(equivalent(slow, exists_track(a, 3, 2, 0)));
    // Swapping tracks twice is the identity.
    const std::vector<std::size_t> swap{1, 0};
    EXPECT_TRUE(equivalent(remap_tracks(remap_tracks(a, 3, 2, swap), 3, 2, swap), a));
    const Dfa b = oracle::random_dfa(rng, 3, 3);
    const std::vector<std::size_t> id{0, 1}, second{1};
    const Dfa prod = track_product(a, id, b, second, 3, 2, BoolOp::And);
    const Dfa ref = intersect(a, remap_tracks(b, 3, 2, second));
    EXPECT_TRUE(equivalent(prod, ref));
  }
}
