#include <catch2/catch_amalgamated.hpp>

#include "opcal/operad.hpp"

using namespace opcal;

namespace {

Corolla one_color(std::size_t n) { return Corolla(std::vector<std::string>(n, "a"), "a"); }

/// A two-element binary operation with identity: enough structure at arity
/// bound 2 to pass the laws, and small enough to mutate by hand.
Operad two_ops_operad() {
  Operad o;
  o.carrier = Collection(Base::FINSET, {"a"});
  o.index_bound = 2;
  Corolla c1 = one_color(1), c2 = one_color(2);
  o.carrier.set_value(c1, BaseObject(Base::FINSET, {"e"}));
  o.carrier.set_value(c2, BaseObject(Base::FINSET, {"x", "y"}));
  o.carrier.set_truncated_above(2);
  o.set_unit("a", BaseMorphism::finset(BaseObject::unit(Base::FINSET), o.carrier.value(c1), {0}));
  auto ident = [&](const Corolla& c, const CompositionIndex& idx, std::vector<std::size_t> fn) {
    o.set_gamma(c, idx, BaseMorphism::finset(o.gamma_domain(c, idx), o.carrier.value(c),
                                             std::move(fn)));
  };
  ident(c1, CompositionIndex{1, {0}, {"a"}}, {0});
  ident(c2, CompositionIndex{1, {0, 0}, {"a"}}, {0, 1});
  ident(c2, CompositionIndex{2, {0, 1}, {"a", "a"}}, {0, 1});
  ident(c2, CompositionIndex{2, {1, 0}, {"a", "a"}}, {0, 1});
  return o;
}

} // namespace

TEST_CASE("commutative and associative operads satisfy the laws in both bases") {
  for (Base base : {Base::FINSET, Base::VECTQ}) {
    LawReport rc = check_operad(commutative_operad({"a"}, base, 3), 3);
    INFO(base_name(base));
    CHECK(rc.pass);
    CHECK(rc.exact);
    LawReport ra = check_operad(associative_operad(base, 3), 3);
    CHECK(ra.pass);
    CHECK(ra.exact);
  }
  LawReport rr = check_operad(associative_operad(Base::FINSET, 3, false), 3);
  CHECK(rr.pass);
}

TEST_CASE("associative operad values are linear orders") {
  Operad assoc = associative_operad(Base::FINSET, 4);
  for (std::size_t n = 0; n <= 4; ++n) {
    unsigned long long fact = 1;
    for (std::size_t i = 2; i <= n; ++i) fact *= i;
    CHECK(assoc.carrier.value(one_color(n)).size() == fact);
  }
  CHECK(associative_operad(Base::FINSET, 3, false).carrier.value(one_color(0)).is_initial());
}

TEST_CASE("multi-colored commutative operad passes the laws") {
  LawReport r = check_operad(commutative_operad({"x", "y"}, Base::FINSET, 2), 2);
  CHECK(r.pass);
}

TEST_CASE("a hand-built operad passes and its mutations fail") {
  Operad good = two_ops_operad();
  CHECK(check_operad(good, 2).pass);

  // Mutation: break the left unit law at the binary value.
  Operad bad = good;
  Corolla c2 = one_color(2);
  CompositionIndex idx{1, {0, 0}, {"a"}};
  bad.set_gamma(c2, idx, BaseMorphism::finset(bad.gamma_domain(c2, idx),
                                              bad.carrier.value(c2), {0, 0}));
  LawReport r = check_operad(bad, 2);
  CHECK(!r.pass);
  CHECK(!r.violations.empty());

  // Mutation: a family that does not descend through the index groupoid.
  Operad skew = good;
  CompositionIndex swapped{2, {1, 0}, {"a", "a"}};
  skew.set_gamma(c2, swapped, BaseMorphism::finset(skew.gamma_domain(c2, swapped),
                                                   skew.carrier.value(c2), {1, 0}));
  CHECK_THROWS_AS(assemble_multiplication(skew, 2), DescentError);
}

TEST_CASE("assembled multiplication components target the carrier") {
  Operad com = commutative_operad({"a"}, Base::FINSET, 3);
  CollectionMap mu = assemble_multiplication(com, 3);
  for (const auto& c : mu.src.support_corollas()) {
    BaseMorphism comp = mu.component(c);
    CHECK(comp.target() == com.carrier.value(c));
  }
}

TEST_CASE("operad map enumeration finds exactly the classical maps") {
  Operad com = commutative_operad({"a"}, Base::FINSET, 3);
  Operad assoc = associative_operad(Base::FINSET, 3);
  auto cc = enumerate_operad_maps(com, com, 3);
  CHECK(cc.size() == 1);
  auto ac = enumerate_operad_maps(assoc, com, 3);
  CHECK(ac.size() == 1);
  // The enumerated com -> com map is the identity on every value.
  for (const auto& c : com.carrier.support_corollas())
    if (c.arity() <= 3)
      CHECK(cc.front().component(c) == BaseMorphism::identity(com.carrier.value(c)));
  // Closure under composition: composing enumerated endomaps stays inside.
  CollectionMap round = compose_collection_maps(cc.front(), cc.front());
  CHECK(check_operad_map(truncate_operad(com, 3), truncate_operad(com, 3), round, 3).pass);
}

TEST_CASE("operad map checking rejects a broken map") {
  Operad assoc = associative_operad(Base::FINSET, 2);
  Operad com = commutative_operad({"a"}, Base::FINSET, 2);
  auto maps = enumerate_operad_maps(assoc, com, 2);
  REQUIRE(maps.size() == 1);
  CHECK(check_operad_map(truncate_operad(assoc, 2), com, maps.front(), 2).pass);
  // Swap the two linear orders at arity two without touching anything else:
  // equivariance survives, the substitution square does not.
  Operad assoc3 = associative_operad(Base::FINSET, 3);
  auto maps3 = enumerate_operad_maps(assoc3, assoc3, 3);
  // id and reverse
  CHECK(maps3.size() == 2);
  bool found_failing = false;
  for (const auto& m : maps3) {
    CollectionMap twisted = m;
    Corolla c3 = one_color(3);
    // Compose the arity-3 component with a transposition of values.
    const BaseObject& v3 = assoc3.carrier.value(c3);
    std::vector<std::size_t> tw(v3.size());
    for (std::size_t i = 0; i < v3.size(); ++i) tw[i] = i;
    std::swap(tw[0], tw[1]);
    twisted.set_component(c3, BaseMorphism::finset(v3, v3, tw).after(m.component(c3)));
    LawReport r = check_operad_map(truncate_operad(assoc3, 3), truncate_operad(assoc3, 3),
                                   twisted, 3);
    found_failing = found_failing || !r.pass;
  }
  CHECK(found_failing);
}

TEST_CASE("truncation cuts values above the bound") {
  Operad assoc = associative_operad(Base::FINSET, 4);
  Operad t = truncate_operad(assoc, 2);
  CHECK(t.carrier.value(one_color(2)).size() == 2);
  CHECK(t.carrier.value(one_color(3)).is_initial());
  CHECK(t.carrier.truncated_above().value() == 2);
  CHECK(check_operad(t, 2).pass);
}

TEST_CASE("pullback and pushforward of operads preserve the laws") {
  Operad com = commutative_operad({"a"}, Base::FINSET, 2);
  ColorMap fold{{"u", "v"}, {"a"}, {{"u", "a"}, {"v", "a"}}};
  Operad pulled = pullback_operad(fold, com);
  CHECK(check_operad(pulled, 2).pass);
  CHECK(pulled.carrier.value(Corolla({"u", "v"}, "u")).size() == 1);

  ColorMap i{{"a"}, {"a", "b"}, {{"a", "a"}}};
  Operad pushed = pushforward_operad(i, com);
  CHECK(check_operad(pushed, 2).pass);
  // Identity operations exist only on image colors.
  CHECK(pushed.has_unit("a"));
  CHECK(!pushed.has_unit("b"));
}

TEST_CASE("trivial operad admits exactly one map to anything with units") {
  Operad triv = trivial_operad({"a"}, Base::FINSET, 3);
  CHECK(check_operad(triv, 3).pass);
  Operad com = commutative_operad({"a"}, Base::FINSET, 3);
  CHECK(enumerate_operad_maps(triv, com, 3).size() == 1);
}
