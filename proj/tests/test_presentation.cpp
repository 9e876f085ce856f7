#include <gtest/gtest.h>

#include "oracles.hpp"
#include "zfm/presentation.hpp"

using namespace zfm;

namespace {

const Presentation& buchi2() {
  static const Presentation p = Presentation::builtin("buchi2");
  return p;
}

Element el(long long v) { return element_of({v}); }

Word w2(std::initializer_list<long long> digits) {
  std::vector<Element> letters;
  for (auto d : digits) letters.push_back(el(d));
  return buchi2().word_of(letters);
}

Presentation line(long long f, std::vector<long long> sigma, std::vector<long long> sigma0) {
  std::vector<Element> s, s0;
  for (auto v : sigma) s.push_back(el(v));
  for (auto v : sigma0) s0.push_back(el(v));
  IntMatrix m(1, 1);
  m(0, 0) = f;
  return Presentation("test", m, s, s0);
}

const SpanningReport::Condition& cond(const SpanningReport& r, const std::string& name) {
  for (const auto& c : r.conditions) {
    if (c.name == name) return c;
  }
  throw std::logic_error("no condition " + name);
}

}  // namespace

TEST(Lattice, DeterminantAndAdjugate) {
  IntMatrix m(3, 3);
  m << 2, 1, 0, 1, 3, 1, 0, 1, 4;
  EXPECT_EQ(determinant(m), 18);
  const IntMatrix a = adjugate(m);
  EXPECT_EQ(IntMatrix(a * m), IntMatrix(IntMatrix::Identity(3, 3) * BigInt(18)));
  IntMatrix z(2, 2);
  z << 0, 1, 1, 0;
  EXPECT_EQ(determinant(z), -1);
}

TEST(Lattice, HermiteIndex) {
  IntMatrix g(3, 2);
  g << 2, 0, 0, 2, 1, 1;
  EXPECT_EQ(lattice_index(g), 2);
  IntMatrix h(2, 2);
  h << 4, 6, 6, 9;
  EXPECT_EQ(lattice_index(h), 0);
}

TEST(Presentation, EvalWord) {
  EXPECT_EQ(buchi2().eval(w2({1, 1})), el(3));
  EXPECT_EQ(buchi2().eval(Word{}), el(0));
  EXPECT_EQ(buchi2().eval(w2({1, -1})), el(-1));
}

TEST(Presentation, ZeroDigitHasIndexZero) {
  for (const auto& name : Presentation::builtin_names()) {
    const auto p = Presentation::builtin(name);
    EXPECT_EQ(p.digit(0), p.zero());
  }
}

TEST(Spanning, ShippedInstancesPass) {
  for (const auto& name : Presentation::builtin_names()) {
    const auto rep = check_spanning(Presentation::builtin(name));
    EXPECT_TRUE(rep.all_pass()) << name << "\n" << rep.to_text();
    EXPECT_TRUE(rep.warnings.empty());
  }
}

TEST(Spanning, InstanceFilesMatchBuiltins) {
  for (const auto& name : Presentation::builtin_names()) {
    const auto file = Presentation::load(std::string(ZFM_SOURCE_DIR) + "/instances/" + name + ".toml");
    const auto b = Presentation::builtin(name);
    EXPECT_EQ(file.F(), b.F());
    EXPECT_EQ(file.digits(), b.digits());
    auto ordered = [](const Presentation& p) {
      std::vector<Element> out;
      for (std::size_t d : p.digits_in_order()) out.push_back(p.digit(d));
      return out;
    };
    EXPECT_EQ(ordered(Presentation::parse(b.to_text())), ordered(b));
  }
}

TEST(Spanning, C2CounterexampleForOddDigits) {
  const auto rep = check_spanning(line(2, {-3, -1, 0, 1, 3}, {0, 1}));
  const auto& c2 = cond(rep, "C2");
  EXPECT_FALSE(c2.pass);
  EXPECT_EQ(c2.detail, "(3,1,0): 4 not in Sigma+F(Sigma)");
}

TEST(Spanning, SingleConditionMutationsAreRejected) {
  EXPECT_FALSE(cond(check_spanning(line(2, {0, 1}, {0, 1})), "symmetry").pass);
  EXPECT_FALSE(cond(check_spanning(line(2, {-1, 1}, {1})), "zero digit").pass);
  const auto with_even = check_spanning(line(2, {-2, -1, 0, 1, 2}, {0, 1}));
  EXPECT_FALSE(cond(with_even, "standing assumption").pass);
  EXPECT_FALSE(check_spanning(line(2, {-1, 0, 1}, {0})).all_pass());
}

TEST(Spanning, C1DetectsNonGeneratingDigits) {
  // Odd multiples of 3 under x2 generate 3Z only.
  const auto rep = check_spanning(line(2, {-3, 0, 3}, {0, 3}));
  EXPECT_FALSE(cond(rep, "C1").pass);
}

TEST(Spanning, OnePlusIHasNoBoxDigitSet) {
  IntMatrix f(2, 2);
  f << 1, -1, 1, 1;
  auto box = [](int radius, bool odd_only) {
    std::vector<Element> s;
    for (int a = -radius; a <= radius; ++a) {
      for (int b = -radius; b <= radius; ++b) {
        if ((a || b) && odd_only && (a + b) % 2 == 0) continue;
        s.push_back(element_of({a, b}));
      }
    }
    return s;
  };
  const std::vector<std::vector<Element>> candidates{box(1, false), box(1, true), box(2, true),
                                                     box(3, true)};
  for (const auto& sigma : candidates) {
    std::vector<Element> sigma0{element_of({0, 0}), element_of({1, 0})};
    const Presentation p("gauss-candidate", f, sigma, sigma0);
    EXPECT_FALSE(check_spanning(p).all_pass()) << sigma.size();
  }
}

TEST(Encode, RoundTripOnBoxes) {
  for (const auto& name : Presentation::builtin_names()) {
    const auto p = Presentation::builtin(name);
    const long long r = p.rank() == 1 ? 512 : 24;
    for (long long a = -r; a <= r; ++a) {
      for (long long b = -r; b <= r; b += (p.rank() == 1 ? 2 * r + 1 : 1)) {
        const Element g = p.rank() == 1 ? element_of({a}) : element_of({a, b});
        const Word e = encode(p, g);
        ASSERT_EQ(p.eval(e), g) << name << " " << to_string(g);
        if (!e.empty()) ASSERT_NE(e.back(), 0u);
        const Word c = canonical_word(p, g);
        ASSERT_EQ(p.eval(c), g);
        ASSERT_EQ(c.size(), min_length(p, g));
      }
    }
  }
  EXPECT_TRUE(encode(buchi2(), el(0)).empty());
}

TEST(Canonical, IdempotentOnAllShortWords) {
  const auto& p = buchi2();
  for (const auto& w : oracle::all_words(3, 8)) {
    const Word c = canonical_word(p, p.eval(w));
    ASSERT_EQ(canonical_word(p, p.eval(c)), c);
    // Brute force: no word of length <= |c| is smaller.
    if (w.size() <= c.size() && !w.empty() && w.back() != 0 && w.size() == c.size()) {
      bool smaller = false;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] != c[i]) {
          smaller = p.rank_of(w[i]) < p.rank_of(c[i]);
          break;
        }
      }
      ASSERT_FALSE(smaller && p.eval(w) == p.eval(c));
    }
  }
}

TEST(Canonical, SupportOneWords) {
  const auto& p = buchi2();
  for (int n = 0; n < 8; ++n) {
    for (long long sign : {1LL, -1LL}) {
      Word expect(static_cast<std::size_t>(n), 0);
      expect.push_back(*p.digit_index(el(sign)));
      EXPECT_EQ(canonical_word(p, el(sign << n)), expect);
    }
  }
}

TEST(Unicity, SpecExamples) {
  const auto& p = buchi2();
  EXPECT_EQ(normalize_unicity(p, w2({-1})), w2({1, -1}));
  EXPECT_EQ(normalize_unicity(p, w2({1, 1})), w2({1, 1}));
  EXPECT_EQ(normalize_unicity(p, w2({0, -1})), w2({0, 1, -1}));
  EXPECT_THROW(normalize_unicity(p, Word{}), std::invalid_argument);
}

TEST(Unicity, PreservesValueAndLowestPosition) {
  for (const auto& name : {"buchi2", "buchi3"}) {
    const auto p = Presentation::builtin(name);
    for (const auto& w : oracle::all_words(3, 8)) {
      if (p.eval(w) == p.zero()) continue;
      const Word n = normalize_unicity(p, w);
      ASSERT_EQ(p.eval(n), p.eval(w));
      std::size_t m = 0, m2 = 0;
      while (w[m] == 0) ++m;
      while (n[m2] == 0) ++m2;
      ASSERT_EQ(m, m2);
      ASSERT_TRUE(p.in_sigma0(n[m]));
      ASSERT_LE(n.size(), w.size() + 2);
    }
  }
}

TEST(Presentation, ParseErrors) {
  EXPECT_THROW(Presentation::parse("rank = 1\nF = [0]\nsigma=[0]\nsigma0=[0]"), InvalidPresentation);
  EXPECT_THROW(Presentation::parse("rank = 1\nF = [2]\n"), InvalidPresentation);
  EXPECT_THROW(Presentation::parse("rank = 0\nF = []\nsigma=[]\nsigma0=[]"), InvalidPresentation);
  EXPECT_THROW(Presentation::parse("rank = 1\nF = [2\n"), InvalidPresentation);
}

TEST(Presentation, ElementLiterals) {
  EXPECT_EQ(parse_element("-12", 1), el(-12));
  EXPECT_EQ(parse_element("<1, -2>", 2), element_of({1, -2}));
  EXPECT_FALSE(parse_element("<1>", 2));
  EXPECT_FALSE(parse_element("x", 1));
  EXPECT_EQ(to_string(element_of({3, -4})), "<3,-4>");
}
