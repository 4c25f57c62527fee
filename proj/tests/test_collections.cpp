#include <catch2/catch_amalgamated.hpp>

#include "opcal/collection.hpp"
#include "opcal/compose.hpp"
#include "opcal/operad.hpp"

using namespace opcal;

namespace {

bool collections_equal(const Collection& a, const Collection& b, std::size_t n_bound) {
  if (a.colors() != b.colors() || a.base() != b.base()) return false;
  for (std::size_t n = 0; n <= n_bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(a.colors(), a.colors(), n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      if (!(a.value(c) == b.value(c))) return false;
    }
  }
  return true;
}

} // namespace

TEST_CASE("relabeling data is validated on construction") {
  Collection good(Base::FINSET, {"a"});
  Corolla c2({"a", "a"}, "a");
  good.set_value(c2, BaseObject(Base::FINSET, {"u", "v"}));
  good.set_gen_act(c2, 0, BaseMorphism::finset(good.value(c2), good.value(c2), {1, 0}));
  CHECK_NOTHROW(check_collection(good));

  Collection bad(Base::FINSET, {"a"});
  bad.set_value(c2, BaseObject(Base::FINSET, {"u", "v", "w"}));
  // A 3-cycle is not an involution, so s_0 s_0 != id.
  bad.set_gen_act(c2, 0, BaseMorphism::finset(bad.value(c2), bad.value(c2), {1, 2, 0}));
  CHECK_THROWS_AS(check_collection(bad), ValidationError);
}

TEST_CASE("duplicate colors and foreign corollas are rejected") {
  CHECK_THROWS_AS(Collection(Base::FINSET, {"a", "a"}), ValidationError);
  Collection c(Base::FINSET, {"a"});
  CHECK_THROWS_AS(c.set_value(Corolla({"b"}, "a"), BaseObject(Base::FINSET, {"x"})),
                  ColorMismatchError);
}

TEST_CASE("degree-zero embedding is fully faithful on hom-sets") {
  ColorFamily m{Base::FINSET, {"a", "b"},
                {{"a", BaseObject(Base::FINSET, {"0", "1"})},
                 {"b", BaseObject(Base::FINSET, {"p"})}}};
  ColorFamily n{Base::FINSET, {"a", "b"},
                {{"a", BaseObject(Base::FINSET, {"x", "y", "z"})},
                 {"b", BaseObject(Base::FINSET, {"q", "r"})}}};
  Collection em = embed_degree0(m);
  Collection en = embed_degree0(n);
  // Only nullary corollas are supported.
  for (const auto& c : em.support_corollas()) CHECK(c.arity() == 0);
  // Collection maps em -> en are one base morphism per color; count both
  // sides: 3^2 * 2^1 per-color function tuples.
  std::size_t per_color = 1;
  for (const auto& x : m.colors)
    per_color *= all_functions(m.at(x), n.at(x)).size();
  std::size_t collection_maps = 1;
  for (const auto& c : em.support_corollas())
    collection_maps *= all_functions(em.value(c), en.value(c)).size();
  CHECK(per_color == 18);
  CHECK(collection_maps == per_color);
  CHECK(degree_zero_part(em).values == m.values);
}

TEST_CASE("pushforward along a mono then pullback is literally the identity") {
  ColorMap i{{"a"}, {"a", "b"}, {{"a", "a"}}};
  REQUIRE(i.is_mono());
  Operad com = commutative_operad({"a"}, Base::FINSET, 3);
  Collection pushed = pushforward_mono(i, com.carrier);
  // Only image corollas carry values.
  for (const auto& c : pushed.support_corollas()) {
    CHECK(c.output == "a");
    for (const auto& x : c.inputs) CHECK(x == "a");
  }
  CHECK(pushed.value(Corolla({"b"}, "b")).is_initial());
  CHECK(pushed.value(Corolla({"a", "b"}, "a")).is_initial());
  Collection back = pullback_collection(i, pushed);
  CHECK(collections_equal(back, com.carrier, 3));
  // Shared value objects, not copies up to isomorphism.
  Corolla c2({"a", "a"}, "a");
  CHECK(back.value(c2) == com.carrier.value(c2));
}

TEST_CASE("identity color map changes nothing") {
  ColorMap id{{"a"}, {"a"}, {{"a", "a"}}};
  Operad com = commutative_operad({"a"}, Base::FINSET, 2);
  CHECK(collections_equal(pullback_collection(id, com.carrier), com.carrier, 2));
  CHECK(collections_equal(pushforward_mono(id, com.carrier), com.carrier, 2));
}

TEST_CASE("general pushforward sums over preimage corollas") {
  ColorMap fold{{"u", "v"}, {"a"}, {{"u", "a"}, {"v", "a"}}};
  CHECK(!fold.is_mono());
  Collection phi(Base::FINSET, {"u", "v"});
  phi.set_value(Corolla({"u"}, "u"), BaseObject(Base::FINSET, {"p", "q"}));
  phi.set_value(Corolla({"v"}, "v"), BaseObject(Base::FINSET, {"r"}));
  Collection pushed = pushforward_general(fold, phi);
  CHECK(pushed.value(Corolla({"a"}, "a")).size() == 3);
}

TEST_CASE("unit collection concentrates identities in arity one") {
  Collection u = unit_collection({"x", "y"}, Base::FINSET);
  CHECK(u.value(Corolla({"x"}, "x")).size() == 1);
  CHECK(u.value(Corolla({"x"}, "y")).is_initial());
  CHECK(u.value(Corolla({"x", "y"}, "x")).is_initial());
  CHECK(u.value(Corolla({}, "x")).is_initial());
}

TEST_CASE("collection maps compose componentwise") {
  Operad com = commutative_operad({"a"}, Base::FINSET, 2);
  CollectionMap id = identity_map(com.carrier);
  CollectionMap twice = compose_collection_maps(id, id);
  Corolla c2({"a", "a"}, "a");
  CHECK(twice.component(c2) == BaseMorphism::identity(com.carrier.value(c2)));
  CHECK_NOTHROW(check_collection_map(twice));
}
