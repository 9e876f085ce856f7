#include <gtest/gtest.h>

#include <set>

#include "zfm/bridge.hpp"
#include "zfm/fsets.hpp"

using namespace zfm;

namespace {

struct Instance {
  Structure s;
  Library lib;
  Compiler c;
  explicit Instance(Presentation p) : s(std::move(p)), lib(Library::standard(s.presentation())), c(s, lib) {}
  const Presentation& p() const { return s.presentation(); }
};

Instance& get(const std::string& name) {
  static std::map<std::string, std::unique_ptr<Instance>> cache;
  auto& slot = cache[name];
  if (!slot) slot = std::make_unique<Instance>(Presentation::builtin(name));
  return *slot;
}

using Key = std::vector<long long>;

Key key(const Element& e) {
  Key k;
  for (Eigen::Index i = 0; i < e.size(); ++i) k.push_back(static_cast<long long>(e(i)));
  return k;
}

/// Elements of a unary relation with canonical length <= max_len.
std::set<Key> members(const Structure& s, const Relation& r, std::size_t max_len) {
  std::set<Key> out;
  for (const auto& w : enumerate(intersect(r.dfa, s.canonical_domain()), max_len))
    out.insert(key(s.presentation().eval(w)));
  return out;
}

std::set<long long> values(const Structure& s, const Relation& r, std::size_t max_len, long long bound) {
  std::set<long long> out;
  for (const auto& k : members(s, r, max_len))
    if (std::abs(k[0]) <= bound) out.insert(k[0]);
  return out;
}

/// a + F^k(a) + ... + F^{kN}(a) with canonical length <= max_len.
std::set<Key> partial_sums(const Presentation& p, const Element& a, std::size_t k, std::size_t max_len) {
  std::set<Key> out;
  Element sum = p.zero(), term = a;
  for (std::size_t n = 0; n * k <= max_len + 2; ++n) {
    sum += term;
    if (canonical_word(p, sum).size() <= max_len) out.insert(key(sum));
    for (std::size_t i = 0; i < k; ++i) term = p.apply_F(term);
  }
  return out;
}

std::set<Key> orbit(const Presentation& p, const Element& a, std::size_t max_len) {
  std::set<Key> out;
  Element x = a;
  for (std::size_t m = 0; m <= max_len + 2; ++m, x = p.apply_F(x))
    if (canonical_word(p, x).size() <= max_len) out.insert(key(x));
  return out;
}

Relation compile_g(Instance& in, const Formula& f) { return in.c.compile(f, {"g"}); }

Element e1(long long v) { return element_of({v}); }

// ---------------------------------------------------------------- templates

TEST(Decompose, Letters) {
  const auto& p = get("buchi2").p();
  const Decomposition d = decompose(p, e1(3));
  ASSERT_EQ(d.positions.size(), 2u);
  EXPECT_EQ(p.digit(d.digits[0]), e1(1));
  EXPECT_EQ(d.positions[1] - d.positions[0], 1u);
  EXPECT_TRUE(decompose(p, e1(0)).positions.empty());
  EXPECT_EQ(decompose(p, e1(8)).positions, std::vector<std::size_t>{3});
}

TEST(KSet, FormulaForOneIsMersenne) {
  auto& in = get("buchi2");
  const Relation r = compile_g(in, kset_formula(in.p(), in.lib, e1(1)));
  std::set<long long> expect;
  for (int n = 0; (1LL << (n + 1)) - 1 <= (1LL << 20); ++n) expect.insert((1LL << (n + 1)) - 1);
  EXPECT_EQ(values(in.s, r, 23, 1LL << 20), expect);
  EXPECT_FALSE(in.s.holds(r, {e1(5)}));
  EXPECT_FALSE(in.s.holds(r, {e1(0)}));
}

TEST(KSet, FormulaForMinusOne) {
  auto& in = get("buchi2");
  const Relation r = compile_g(in, kset_formula(in.p(), in.lib, e1(-1)));
  std::set<long long> expect;
  for (int n = 0; n < 12; ++n) expect.insert(-((1LL << (n + 1)) - 1));
  EXPECT_EQ(values(in.s, r, 13, 4095), expect);
}

TEST(KSet, RejectsNonDigits) {
  auto& in = get("buchi2");
  EXPECT_THROW(kset_formula(in.p(), in.lib, e1(3)), std::invalid_argument);
  EXPECT_THROW(kset_formula(in.p(), in.lib, e1(0)), std::invalid_argument);
}

TEST(Orbit, OfThree) {
  auto& in = get("buchi2");
  const Relation r = compile_g(in, orbit_formula(in.p(), in.lib, e1(3)));
  std::set<long long> expect;
  for (long long x = 3; x <= (1LL << 20); x *= 2) expect.insert(x);
  EXPECT_EQ(values(in.s, r, 23, 1LL << 20), expect);
}

TEST(Orbit, OfDigitIsIFa) {
  auto& in = get("buchi2");
  const Relation r = compile_g(in, orbit_formula(in.p(), in.lib, e1(1)));
  EXPECT_TRUE(equivalent(r, in.s.in_IFa(*in.p().digit_index(e1(1)))));
  EXPECT_TRUE(equivalent(compile_g(in, orbit_formula(in.p(), in.lib, e1(0))), in.s.zero()));
}

TEST(KPower, FourAdicRepunits) {
  auto& in = get("buchi2");
  const Relation r = compile_g(in, kset_general(in.p(), in.lib, e1(1), 2));
  std::set<long long> expect;
  const long long bound = 1LL << 20;
  for (long long t = 1, x = 1; x <= bound; t *= 4, x += t) expect.insert(x);
  EXPECT_EQ(values(in.s, r, 23, bound), expect);
}

TEST(KGeneral, SingleDigitMatchesKSetFormula) {
  auto& in = get("buchi2");
  for (long long a : {1, -1}) {
    const Relation general = compile_g(in, kset_general(in.p(), in.lib, e1(a), 1));
    const Relation direct = compile_g(in, kset_formula(in.p(), in.lib, e1(a)));
    EXPECT_TRUE(equivalent(general, direct)) << a;
  }
}

TEST(KGeneral, ThreeBothRoutesAgreeWithPartialSums) {
  auto& in = get("buchi2");
  const auto expect = partial_sums(in.p(), e1(3), 1, 12);
  const Relation coupled = compile_g(in, kset_general(in.p(), in.lib, e1(3), 1));
  const Relation power = compile_g(in, kset_power(in.p(), in.lib, e1(3), 1));
  EXPECT_EQ(members(in.s, coupled, 12), expect);
  EXPECT_EQ(members(in.s, power, 12), expect);
  EXPECT_FALSE(in.s.holds(coupled, {e1(15)}));
  EXPECT_FALSE(in.s.holds(coupled, {e1(33)}));
}

TEST(KGeneral, MultiLetterPowers) {
  auto& in = get("buchi2");
  for (long long a : {3, 5, -7, 11}) {
    for (std::size_t k : {1u, 2u, 3u}) {
      const Relation r = compile_g(in, kset_general(in.p(), in.lib, e1(a), k));
      EXPECT_EQ(members(in.s, r, 10), partial_sums(in.p(), e1(a), k, 10)) << a << " k=" << k;
    }
  }
}

TEST(Templates, AgreeWithEnumerationOnBuchi3) {
  auto& in = get("buchi3");
  for (long long a : {1, -1, 2, 4, -5}) {
    for (std::size_t k : {1u, 2u}) {
      const Relation r = compile_g(in, kset_general(in.p(), in.lib, e1(a), k));
      EXPECT_EQ(members(in.s, r, 8), partial_sums(in.p(), e1(a), k, 8)) << a << " k=" << k;
    }
    const Relation o = compile_g(in, orbit_formula(in.p(), in.lib, e1(a)));
    EXPECT_EQ(members(in.s, o, 8), orbit(in.p(), e1(a), 8)) << a;
  }
  EXPECT_TRUE(equivalent(compile_g(in, kset_formula(in.p(), in.lib, e1(1))),
                         compile_g(in, kset_general(in.p(), in.lib, e1(1), 1))));
}

TEST(Templates, OrbitsOnGauss) {
  auto& in = get("gauss");
  for (const auto& a : {element_of({1, 0}), element_of({1, 1}), element_of({3, 2})}) {
    const Relation o = compile_g(in, orbit_formula(in.p(), in.lib, a));
    EXPECT_EQ(members(in.s, o, 6), orbit(in.p(), a, 6)) << to_string(a);
  }
}

// ---------------------------------------------------------------- automata

TEST(FSetAutomaton, KAndOrbitAgreeWithEnumerationOnEachInstance) {
  for (const std::string name : {"buchi2", "buchi3", "gauss"}) {
    auto& in = get(name);
    std::vector<Element> as;
    for (const auto& d : in.p().digits())
      if (!d.isZero()) as.push_back(d);
    as.push_back(in.p().digits()[1] + in.p().apply_F(in.p().digits()[1]));
    for (const auto& a : as) {
      for (std::size_t k : {2u, 3u}) {
        const Relation r = fset_automaton(in.c, FSetExpr::kset(a, k));
        EXPECT_EQ(members(in.s, r, 8), partial_sums(in.p(), a, k, 8)) << name << " " << to_string(a);
      }
      const Relation o = fset_automaton(in.c, FSetExpr::orbit(a));
      EXPECT_EQ(members(in.s, o, 8), orbit(in.p(), a, 8)) << name << " " << to_string(a);
    }
  }
}

TEST(FSetAutomaton, FormulaAndAutomatonAgree) {
  auto& in = get("buchi2");
  for (const char* text : {"K(a=1)", "K(a=3, k=1)", "K(a=-1, k=2)", "Orb(5)", "coset(7)", "K(a=1) + coset(1)",
                           "Orb(1) + Orb(1)", "K(a=1) | Orb(3)"}) {
    const FSetExpr e = parse_fset(text, in.p());
    const Relation a = fset_automaton(in.c, e);
    const Relation f = compile_g(in, fset_formula(in.p(), in.lib, e));
    EXPECT_TRUE(equivalent(a, f)) << text;
  }
}

TEST(FSetAutomaton, TranslateOfK) {
  auto& in = get("buchi2");
  const Relation r = fset_automaton(in.c, FSetExpr::translate(e1(1), FSetExpr::kset(e1(1))));
  std::set<long long> expect;
  for (int n = 0; n < 12; ++n) expect.insert(1LL << (n + 1));
  EXPECT_EQ(values(in.s, r, 14, 4096), expect);
}

TEST(FSetAutomaton, UnionWithSubgroup) {
  auto& in = get("buchi2");
  const Relation r = fset_automaton(in.c, parse_fset("K(a=[1]) ∪ subgroup([2])", in.p()));
  for (long long g = -64; g <= 64; ++g) {
    const bool mersenne = g > 0 && ((g + 1) & g) == 0;
    EXPECT_EQ(in.s.holds(r, {e1(g)}), g % 2 == 0 || mersenne) << g;
  }
}

TEST(FSetAutomaton, Subgroups) {
  auto& in = get("buchi2");
  EXPECT_TRUE(equivalent(fset_automaton(in.c, FSetExpr::subgroup({e1(1)})), Relation::constant(in.s.base(), 1, true)));
  EXPECT_TRUE(equivalent(fset_automaton(in.c, FSetExpr::subgroup({})), in.s.zero()));
  const Relation six = fset_automaton(in.c, FSetExpr::subgroup({e1(6), e1(9)}));
  for (long long g = -40; g <= 40; ++g) EXPECT_EQ(in.s.holds(six, {e1(g)}), g % 3 == 0) << g;
  const Relation single = fset_automaton(in.c, parse_fset("coset(-5)", in.p()));
  EXPECT_EQ(members(in.s, single, 8), (std::set<Key>{{-5}}));
}

TEST(FSetAutomaton, GaussSubgroupMatchesLattice) {
  auto& in = get("gauss");
  const Element gen = element_of({1, 1});
  const IntMatrix h = invariant_subgroup(in.p(), {gen});
  const Relation r = fset_automaton(in.c, FSetExpr::subgroup({gen}));
  ASSERT_EQ(h.rows(), 2);
  const BigInt index = h(0, 0) * h(1, 1);
  for (long long x = -6; x <= 6; ++x) {
    for (long long y = -6; y <= 6; ++y) {
      // Membership through the HNF: x = l0 h00, y = l0 h01 + l1 h11.
      bool in_h = x % static_cast<long long>(h(0, 0)) == 0;
      if (in_h) {
        const long long l0 = x / static_cast<long long>(h(0, 0));
        in_h = (y - l0 * static_cast<long long>(h(0, 1))) % static_cast<long long>(h(1, 1)) == 0;
      }
      EXPECT_EQ(in.s.holds(r, {element_of({x, y})}), in_h) << x << "," << y;
    }
  }
  EXPECT_EQ(index, lattice_index(h));
}

TEST(FSetAutomaton, InfiniteIndexSubgroupByCarries) {
  const Presentation p = Presentation::parse(
      "rank = 2\nF = [[2, 0], [0, 2]]\n"
      "sigma = [[0,0],[1,0],[-1,0],[0,1],[0,-1],[1,1],[-1,-1],[1,-1],[-1,1]]\n"
      "sigma0 = [[0,0],[1,0],[0,1],[1,1]]\n",
      "square");
  Instance in(p);
  const IntMatrix h = invariant_subgroup(p, {element_of({2, 0})});
  EXPECT_EQ(h.rows(), 1);
  const Relation r = fset_automaton(in.c, FSetExpr::subgroup({element_of({2, 0})}));
  for (long long x = -9; x <= 9; ++x)
    for (long long y = -3; y <= 3; ++y)
      EXPECT_EQ(in.s.holds(r, {element_of({x, y})}), y == 0 && x % 2 == 0) << x << "," << y;
}

TEST(FSetAutomaton, OutputsAreSaturated) {
  auto& in = get("buchi2");
  const std::size_t track[] = {0};
  for (const char* text : {"K(a=1)", "K(a=3)", "Orb(3)", "coset(5) + K(a=-1, k=2)", "subgroup(4) | Orb(1)"}) {
    const Relation r = fset_automaton(in.c, parse_fset(text, in.p()));
    EXPECT_TRUE(equivalent(r, in.s.saturate(r.dfa, 1, track))) << text;
  }
}

TEST(FSetAutomaton, InvariantSubgroupClosesUnderF) {
  const auto& p = get("gauss").p();
  const IntMatrix h = invariant_subgroup(p, {element_of({1, 0})});
  IntMatrix expect(2, 2);
  expect << 1, 0, 0, 2;
  EXPECT_EQ(h, expect);
}

// ---------------------------------------------------------------- syntax

TEST(FSetSyntax, RoundTrip) {
  const auto& p = get("buchi2").p();
  for (const char* text : {"K(a=[1], k=2) + coset([3]) ∪ subgroup([2])", "Orb(3) | K(a=-1)", "(Orb(1) + Orb(1)) U coset(0)",
                           "subgroup()", "K(1, 3)"}) {
    const FSetExpr e = parse_fset(text, p);
    const std::string printed = to_string(e, p);
    EXPECT_EQ(to_string(parse_fset(printed, p), p), printed) << text;
  }
  const FSetExpr e = parse_fset("K(a=[1], k=2) + coset([3]) ∪ subgroup([2])", p);
  ASSERT_EQ(e.kind, FSetExpr::Kind::Union);
  EXPECT_EQ(e.subs[0].kind, FSetExpr::Kind::Translate);
  EXPECT_EQ(e.subs[0].a, e1(3));
  EXPECT_EQ(e.subs[0].subs[0].k, 2u);
}

TEST(FSetSyntax, Errors) {
  const auto& p = get("buchi2").p();
  EXPECT_THROW(parse_fset("K(a=1", p), std::invalid_argument);
  EXPECT_THROW(parse_fset("L(1)", p), std::invalid_argument);
  EXPECT_THROW(parse_fset("Orb([1,2])", p), std::invalid_argument);
}

}  // namespace
