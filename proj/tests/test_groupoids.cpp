#include <catch2/catch_amalgamated.hpp>

#include "opcal/corolla.hpp"
#include "opcal/groupoid.hpp"
#include "opcal/perm.hpp"

#include "oracles.hpp"

using namespace opcal;

TEST_CASE("permutations compose and factor into adjacent transpositions") {
  Permutation s({2, 0, 1});
  std::vector<int> v{10, 20, 30};
  auto w = s.apply(v);
  // result[sigma(i)] = v[i]
  CHECK(w == std::vector<int>{20, 30, 10});
  Permutation rebuilt = Permutation::identity(3);
  auto word = s.adjacent_word();
  for (std::size_t k = word.size(); k-- > 0;)
    rebuilt = Permutation::adjacent_transposition(3, word[k]) * rebuilt;
  CHECK(rebuilt == s);
  CHECK(all_permutations(4).size() == 24);
}

TEST_CASE("finset quotients count orbits") {
  BaseObject six(Base::FINSET, {"a", "b", "c", "d", "e", "f"});
  BaseMorphism cyc = BaseMorphism::finset(six, six, {1, 2, 3, 4, 5, 0});
  auto [q1, p1] = detail::finset_quotient(six, {cyc});
  CHECK(q1.size() == 1);
  auto [q2, p2] = detail::finset_quotient(six, {});
  CHECK(q2.size() == 6);
  BaseMorphism swap01 = BaseMorphism::finset(six, six, {1, 0, 2, 3, 4, 5});
  auto [q3, p3] = detail::finset_quotient(six, {swap01});
  CHECK(q3.size() == 5);
  CHECK(p3.apply(0) == p3.apply(1));
}

TEST_CASE("vectq quotients match orbit counts for permutation actions") {
  BaseObject v(Base::VECTQ, {"e0", "e1", "e2", "e3"});
  Matrix cyc(4, 4);
  for (std::size_t i = 0; i < 4; ++i) cyc((i + 1) % 4, i) = Rational(1);
  auto [q, proj] = detail::vectq_quotient(v, {BaseMorphism::vectq(v, v, cyc)});
  CHECK(q.size() == 1);
  // Every basis vector projects to the single coinvariant.
  for (std::size_t i = 0; i < 4; ++i) CHECK(proj.matrix()(0, i) == Rational(1));
}

TEST_CASE("vectq quotients handle non-permutation automorphisms") {
  BaseObject v(Base::VECTQ, {"e0", "e1"});
  Matrix m(2, 2);
  m(0, 0) = Rational(2);
  m(1, 1) = Rational(1);
  // Relations e0 - 2 e0 kill e0; the coinvariants are spanned by e1.
  auto [q, proj] = detail::vectq_quotient(v, {BaseMorphism::vectq(v, v, m)});
  CHECK(q.size() == 1);
  CHECK(proj.matrix()(0, 0) == Rational(0));
  CHECK(proj.matrix()(0, 1) == Rational(1));
}

TEST_CASE("corolla groupoids enumerate colored operation shapes") {
  std::vector<std::string> xy{"x", "y"};
  FiniteGroupoid g2 = corolla_groupoid(xy, xy, 2);
  CHECK(g2.objects.size() == 8); // 4 input words, 2 outputs
  FiniteGroupoid g0 = corolla_groupoid(xy, xy, 0);
  CHECK(g0.objects.size() == 2);
}

TEST_CASE("composition index groupoids respect empty-block conventions") {
  std::vector<std::string> a{"a"};
  FiniteGroupoid g = composition_index_groupoid_grade(2, a, 2, false);
  CHECK(g.objects.size() == 4); // all functions 2 -> 2
  FiniteGroupoid gs = composition_index_groupoid_grade(2, a, 2, true);
  CHECK(gs.objects.size() == 2); // surjections only
  FiniteGroupoid g0 = composition_index_groupoid_grade(2, a, 0, false);
  CHECK(g0.objects.empty()); // no maps from a nonempty set to the empty one
  FiniteGroupoid g00 = composition_index_groupoid_grade(0, a, 0, false);
  CHECK(g00.objects.size() == 1);
}

TEST_CASE("groupoid colimits quotient each connected component") {
  // Constant diagram on the two-object corolla-style groupoid at arity 2
  // over one color: a single component with a swap automorphism.
  std::vector<std::string> a{"a"};
  FiniteGroupoid g = corolla_groupoid(a, a, 2);
  REQUIRE(g.objects.size() == 1);
  BaseObject two(Base::FINSET, {"p", "q"});
  GroupoidDiagram d;
  d.base = Base::FINSET;
  d.value = [&](const std::string&) { return two; };
  d.map = [&](const GroupElem& g, const std::string&) {
    return g.is_identity() ? BaseMorphism::identity(two)
                           : BaseMorphism::finset(two, two, {1, 0});
  };
  ColimitResult colim = groupoid_colimit(g, d);
  CHECK(colim.obj.size() == 1);
}

TEST_CASE("descent rejects cocones that are not constant on arrows") {
  std::vector<std::string> a{"a"};
  FiniteGroupoid g = corolla_groupoid(a, a, 2);
  BaseObject two(Base::FINSET, {"p", "q"});
  GroupoidDiagram d;
  d.base = Base::FINSET;
  d.value = [&](const std::string&) { return two; };
  d.map = [&](const GroupElem& g, const std::string&) {
    return g.is_identity() ? BaseMorphism::identity(two)
                           : BaseMorphism::finset(two, two, {1, 0});
  };
  ColimitResult colim = groupoid_colimit(g, d);
  BaseObject tgt(Base::FINSET, {"0", "1"});
  auto bad = [&](const std::string&) { return BaseMorphism::finset(two, tgt, {0, 1}); };
  CHECK_THROWS_AS(descend(g, d, colim, bad, tgt), DescentError);
  auto good = [&](const std::string&) { return BaseMorphism::finset(two, tgt, {0, 0}); };
  BaseMorphism mu = descend(g, d, colim, good, tgt);
  CHECK(mu.source().size() == 1);
}
