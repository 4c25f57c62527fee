#include <catch2/catch_amalgamated.hpp>

#include "opcal/algebra.hpp"

#include "oracles.hpp"

using namespace opcal;

namespace {

// The monoid ({0,1}, AND, unit 1) as an algebra over the order-word operad.
AlgebraStructure and_monoid_algebra(const Operad& assoc, std::size_t bound) {
  AlgebraStructure a;
  a.op = assoc;
  a.bound = bound;
  a.carrier.base = Base::FINSET;
  a.carrier.colors = {"a"};
  a.carrier.values.emplace("a", BaseObject(Base::FINSET, {"0", "1"}));
  const BaseObject& m = a.carrier.at("a");
  for (std::size_t k = 0; k <= bound; ++k) {
    Corolla c(std::vector<std::string>(k, "a"), "a");
    std::vector<BaseObject> fac = a.action_domain_factors(c);
    BaseObject dom = tensor_many(fac, Base::FINSET);
    if (dom.is_initial()) continue;
    std::vector<std::size_t> fn(dom.size());
    for (std::size_t i = 0; i < dom.size(); ++i) {
      auto idx = tensor_unindex(fac, i);
      std::size_t prod = 1;
      for (std::size_t j = 0; j < k; ++j) prod &= idx[j];
      fn[i] = m.index_of(prod ? "1" : "0");
    }
    a.set_action(c, BaseMorphism::finset(dom, m, std::move(fn)));
  }
  return a;
}

} // namespace

TEST_CASE("terminal and nullary algebras satisfy the laws") {
  Operad com = commutative_operad({"a"}, Base::FINSET, 3);
  AlgebraStructure term = terminal_algebra(com, 3);
  CHECK(check_algebra(term, 3).pass);
  CHECK(term.carrier.at("a").size() == 1);

  AlgebraStructure nz = nullary_algebra(com);
  CHECK(nz.carrier.at("a").size() == 1);
  CHECK(check_algebra(nz, 3).pass);

  AlgebraStructure nred = nullary_algebra(associative_operad(Base::FINSET, 3, false));
  CHECK(nred.carrier.at("a").is_initial());
  CHECK(check_algebra(nred, 3).pass);
}

TEST_CASE("the AND monoid is an algebra and its mutation is not") {
  Operad assoc = associative_operad(Base::FINSET, 3);
  AlgebraStructure am = and_monoid_algebra(assoc, 3);
  CHECK(check_algebra(am, 3).pass);

  // Mutation: make the binary action constant 0, breaking the unit law.
  AlgebraStructure bad = am;
  Corolla c1({"a"}, "a");
  std::vector<BaseObject> fac = bad.action_domain_factors(c1);
  BaseObject dom = tensor_many(fac, Base::FINSET);
  std::vector<std::size_t> fn(dom.size(), bad.carrier.at("a").index_of("0"));
  bad.set_action(c1, BaseMorphism::finset(dom, bad.carrier.at("a"), std::move(fn)));
  LawReport r = check_algebra(bad, 3);
  CHECK(!r.pass);
  CHECK(!r.violations.empty());
}

TEST_CASE("free algebra grades count words and multisets") {
  for (std::size_t s = 1; s <= 3; ++s) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < s; ++i) labels.push_back("g" + std::to_string(i));
    ColorFamily gens{Base::FINSET, {"a"}, {{"a", BaseObject(Base::FINSET, labels)}}};
    FreeAlgebra fa(associative_operad(Base::FINSET, 5), gens, 5);
    FreeAlgebra fc(commutative_operad({"a"}, Base::FINSET, 5), gens, 5);
    for (std::size_t n = 0; n <= 5; ++n) {
      CHECK(fa.grade_size("a", n) == oracle::word_count(s, n));
      CHECK(fc.grade_size("a", n) == oracle::multiset_count(s, n));
    }
  }
}

TEST_CASE("free algebras satisfy the graded laws") {
  ColorFamily s2{Base::FINSET, {"a"}, {{"a", BaseObject(Base::FINSET, {"s", "t"})}}};
  CHECK(check_free_algebra(FreeAlgebra(associative_operad(Base::FINSET, 3), s2, 3), 3).pass);
  CHECK(check_free_algebra(FreeAlgebra(commutative_operad({"a"}, Base::FINSET, 3), s2, 3), 3)
            .pass);
}

TEST_CASE("free-forgetful adjunction is a bijection on small instances") {
  Operad assoc2 = associative_operad(Base::FINSET, 2);
  AlgebraStructure am2 = and_monoid_algebra(assoc2, 2);
  ColorFamily onept{Base::FINSET, {"a"}, {{"a", BaseObject(Base::FINSET, {"m"})}}};
  AdjunctionReport ar = adjunction_bijection(assoc2, onept, am2, 2);
  CHECK(ar.algebra_map_count == 2);
  CHECK(ar.family_map_count == 2);
  CHECK(ar.bijective);

  ColorFamily none{Base::FINSET, {"a"}, {{"a", BaseObject::initial(Base::FINSET)}}};
  AdjunctionReport ar2 = adjunction_bijection(assoc2, none, am2, 2);
  CHECK(ar2.algebra_map_count == 1);
  CHECK(ar2.family_map_count == 1);
  CHECK(ar2.bijective);
}

TEST_CASE("commutative algebra structures on two points number four") {
  Operad com3 = commutative_operad({"a"}, Base::FINSET, 3);
  ColorFamily two{Base::FINSET, {"a"}, {{"a", BaseObject(Base::FINSET, {"0", "1"})}}};
  auto structs = enumerate_algebra_structures(com3, two, 3);
  CHECK(structs.size() == 4);
  for (const auto& s : structs) CHECK(check_algebra(s, 3).pass);
}

TEST_CASE("restricting an algebra along a color map keeps the laws") {
  ColorMap fold{{"u", "v"}, {"a"}, {{"u", "a"}, {"v", "a"}}};
  Operad com = commutative_operad({"a"}, Base::FINSET, 2);
  Operad pulled = pullback_operad(fold, com);
  // The AND monoid as a commutative algebra: com values are singletons, so
  // the action at each corolla is the AND table with the operation factor
  // collapsed.
  AlgebraStructure ca;
  ca.op = com;
  ca.bound = 2;
  ca.carrier.base = Base::FINSET;
  ca.carrier.colors = {"a"};
  ca.carrier.values.emplace("a", BaseObject(Base::FINSET, {"0", "1"}));
  const BaseObject& m = ca.carrier.at("a");
  for (std::size_t k = 0; k <= 2; ++k) {
    Corolla c(std::vector<std::string>(k, "a"), "a");
    std::vector<BaseObject> fac = ca.action_domain_factors(c);
    BaseObject dom = tensor_many(fac, Base::FINSET);
    std::vector<std::size_t> fn(dom.size());
    for (std::size_t i = 0; i < dom.size(); ++i) {
      auto idx = tensor_unindex(fac, i);
      std::size_t prod = 1;
      for (std::size_t j = 0; j < k; ++j) prod &= idx[j];
      fn[i] = m.index_of(prod ? "1" : "0");
    }
    ca.set_action(c, BaseMorphism::finset(dom, m, std::move(fn)));
  }
  REQUIRE(check_algebra(ca, 2).pass);
  AlgebraStructure res = restrict_algebra(fold, ca);
  CHECK(check_operad(pulled, 2).pass);
  CHECK(res.carrier.at("u").size() == 2);
  CHECK(res.carrier.at("v").size() == 2);
  CHECK(check_algebra(res, 2).pass);
}
