#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "opcal/coherence.hpp"
#include "opcal/compose.hpp"
#include "opcal/operad.hpp"

#include "oracles.hpp"
#include "random_collections.hpp"

using namespace opcal;

namespace {

Corolla one_color(std::size_t n) { return Corolla(std::vector<std::string>(n, "a"), "a"); }

} // namespace

TEST_CASE("commutative composition grades count partitions into at most m blocks") {
  Operad com = commutative_operad({"a"}, Base::FINSET, 5);
  ComposedCollection cc(com.carrier, com.carrier, 5, false);
  for (std::size_t n = 0; n <= 5; ++n)
    for (std::size_t m = 0; m <= 5; ++m) {
      INFO("n=" << n << " m=" << m);
      CHECK(cc.piece(one_color(n), m).colim.obj.size() == oracle::com_compose_grade(n, m));
    }
}

TEST_CASE("associative composition grades match the free-action sum") {
  Operad assoc = associative_operad(Base::FINSET, 4);
  ComposedCollection ca(assoc.carrier, assoc.carrier, 4, false);
  for (std::size_t n = 0; n <= 4; ++n)
    for (std::size_t m = 0; m <= 4; ++m) {
      INFO("n=" << n << " m=" << m);
      CHECK(ca.piece(one_color(n), m).colim.obj.size() == oracle::assoc_compose_grade(n, m));
    }
}

TEST_CASE("vectq coinvariant dimensions equal finset orbit counts") {
  Operad comq = commutative_operad({"a"}, Base::VECTQ, 4);
  ComposedCollection cq(comq.carrier, comq.carrier, 4, false);
  for (std::size_t n = 0; n <= 4; ++n)
    for (std::size_t m = 0; m <= 4; ++m)
      CHECK(cq.piece(one_color(n), m).colim.obj.size() == oracle::com_compose_grade(n, m));
  Operad assocq = associative_operad(Base::VECTQ, 3);
  ComposedCollection aq(assocq.carrier, assocq.carrier, 3, false);
  for (std::size_t n = 0; n <= 3; ++n)
    for (std::size_t m = 0; m <= 3; ++m)
      CHECK(aq.piece(one_color(n), m).colim.obj.size() == oracle::assoc_compose_grade(n, m));
}

TEST_CASE("reduced left factors give exact grade ranges") {
  Operad ared = associative_operad(Base::FINSET, 3, false);
  ComposedCollection cc(ared.carrier, ared.carrier, std::nullopt);
  CHECK(cc.surjective_only());
  CHECK(cc.exact_at(2));
  CHECK(cc.exact_at(3));
  // Grades beyond the arity vanish for reduced collections.
  CHECK(cc.grade_bound(2) <= 2);
}

TEST_CASE("composing with nullary values requires a block-count bound") {
  Operad com = commutative_operad({"a"}, Base::FINSET, 2);
  CHECK_THROWS_AS(ComposedCollection(com.carrier, com.carrier, std::nullopt),
                  TruncationRequiredError);
}

TEST_CASE("unit comparison isomorphisms are invertible") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    Base base = (trial % 2) ? Base::VECTQ : Base::FINSET;
    Collection phi = opcal_test::random_reduced(rng, base);
    CollectionMap lu = left_unit_iso(phi, 3);
    CollectionMap ru = right_unit_iso(phi, 3);
    for (const auto& c : lu.src.support_corollas()) {
      INFO("left unit at " << c.encode());
      CHECK(lu.component(c).is_invertible());
      CHECK(lu.component(c).target() == lu.dst.value(c));
    }
    for (const auto& c : ru.src.support_corollas()) {
      INFO("right unit at " << c.encode());
      CHECK(ru.component(c).is_invertible());
    }
  }
}

TEST_CASE("associativity comparison isomorphisms are invertible") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 4; ++trial) {
    Base base = (trial % 2) ? Base::VECTQ : Base::FINSET;
    Collection phi = opcal_test::random_reduced(rng, base);
    Collection psi(phi);
    Collection chi(phi);
    CollectionMap ai = associativity_iso(phi, psi, chi, 3);
    for (const auto& c : ai.src.support_corollas()) {
      INFO("associativity at " << c.encode());
      CHECK(ai.component(c).is_invertible());
      CHECK(ai.src.value(c).size() == ai.dst.value(c).size());
    }
  }
  // A non-trivially permuted carrier as well: linear orders.
  Operad ared = associative_operad(Base::FINSET, 3, false);
  CollectionMap ai = associativity_iso(ared.carrier, ared.carrier, ared.carrier, 3);
  for (const auto& c : ai.src.support_corollas())
    CHECK(ai.component(c).is_invertible());
}

TEST_CASE("composition is functorial: identities induce the identity") {
  Operad ared = associative_operad(Base::FINSET, 3, false);
  CollectionMap id = identity_map(ared.carrier);
  CollectionMap cid = compose_maps(id, id, std::nullopt, 3);
  for (const auto& c : cid.src.support_corollas())
    CHECK(cid.component(c) == BaseMorphism::identity(cid.src.value(c)));
}

TEST_CASE("pullback comparison is invertible for injective color maps") {
  ColorMap i{{"a"}, {"a", "b"}, {{"a", "a"}}};
  Collection phi(Base::FINSET, {"a", "b"});
  phi.set_value(Corolla({"a"}, "a"), BaseObject(Base::FINSET, {"p", "q"}));
  phi.set_value(Corolla({"b"}, "a"), BaseObject(Base::FINSET, {"r"}));
  ComparisonReport rep = lax_pullback_comparison(i, phi, phi, 2, 2);
  CHECK(rep.invertible);
}

TEST_CASE("pushforward comparison: invertible for monos, fold witness 4 vs 8") {
  std::mt19937 rng(37);
  ColorMap i{{"a"}, {"a", "b"}, {{"a", "a"}}};
  for (int trial = 0; trial < 4; ++trial) {
    Collection phi = opcal_test::random_reduced(rng, Base::FINSET);
    if (phi.colors().size() != 1) continue;
    ComparisonReport rep = pushforward_monoidal_comparison(i, phi, phi, 3, 3);
    CHECK(rep.invertible);
  }
  // The fold map mixes middle colors across preimages: sizes 4 vs 8.
  Collection phi(Base::FINSET, {"u", "v"});
  phi.set_value(Corolla({"u"}, "u"), BaseObject(Base::FINSET, {"p", "q"}));
  phi.set_value(Corolla({"v"}, "v"), BaseObject(Base::FINSET, {"r", "s"}));
  Collection psi(Base::FINSET, {"u", "v"});
  psi.set_value(Corolla({"u"}, "u"), BaseObject(Base::FINSET, {"t"}));
  psi.set_value(Corolla({"v"}, "v"), BaseObject(Base::FINSET, {"w"}));
  ColorMap fold{{"u", "v"}, {"a"}, {{"u", "a"}, {"v", "a"}}};
  ComparisonReport rep = pushforward_monoidal_comparison(fold, phi, psi, 2, 2);
  CHECK(!rep.invertible);
  Corolla ca({"a"}, "a");
  CHECK(rep.map.src.value(ca).size() == 4);
  CHECK(rep.map.dst.value(ca).size() == 8);
}

TEST_CASE("degree-zero collections compose to degree zero") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    std::size_t sz = 1 + rng() % 3;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < sz; ++i) labels.push_back("m" + std::to_string(i));
    ColorFamily fam{Base::FINSET, {"a"}, {{"a", BaseObject(Base::FINSET, labels)}}};
    Collection m = embed_degree0(fam);
    Collection n = opcal_test::random_reduced(rng, Base::FINSET);
    if (n.colors().size() != 1) continue;
    Collection prod = compose_collections(m, n, 3, 3);
    for (const auto& c : prod.support_corollas()) CHECK(c.arity() == 0);
  }
}
