#include <catch2/catch_amalgamated.hpp>

#include "opcal/endomorphism.hpp"

using namespace opcal;

namespace {
Corolla one_color(std::size_t n, const std::string& c = "a") {
  return Corolla(std::vector<std::string>(n, c), c);
}
}

TEST_CASE("endomorphism operad of a two-point set") {
  ColorFamily two{Base::FINSET, {"a"}, {{"a", BaseObject(Base::FINSET, {"0", "1"})}}};
  Operad e = endomorphism_operad(two, 3);
  for (std::size_t n = 0; n <= 3; ++n)
    CHECK(e.carrier.value(one_color(n)).size() == (std::size_t{1} << (std::size_t{1} << n)));
  CHECK(check_operad(e, 2).pass);

  ColorFamily unitfam{Base::FINSET, {"a"}, {{"a", BaseObject::unit(Base::FINSET)}}};
  Operad eu = endomorphism_operad(unitfam, 3);
  for (const auto& c : eu.carrier.support_corollas())
    CHECK(eu.carrier.value(c).size() == 1);
}

TEST_CASE("linear endomorphism operad of a plane") {
  ColorFamily v2{Base::VECTQ, {"a"}, {{"a", BaseObject(Base::VECTQ, {"e0", "e1"})}}};
  Operad e = endomorphism_operad(v2, 3);
  for (std::size_t n = 0; n <= 3; ++n)
    CHECK(e.carrier.value(one_color(n)).size() == (std::size_t{2} << n));
  CHECK(check_operad(e, 2).pass);
}

TEST_CASE("maps into endomorphisms match algebra structures") {
  ColorFamily two{Base::FINSET, {"a"}, {{"a", BaseObject(Base::FINSET, {"0", "1"})}}};
  Operad com = commutative_operad({"a"}, Base::FINSET, 2);
  CorrespondenceReport cr = algebra_map_correspondence(com, two, 2);
  CHECK(cr.operad_map_count == cr.algebra_structure_count);
  CHECK(cr.bijective);
  CorrespondenceReport ct =
      algebra_map_correspondence(trivial_operad({"a"}, Base::FINSET, 2), two, 2);
  CHECK(ct.operad_map_count == 1);
  CHECK(ct.bijective);
}

TEST_CASE("the canonical map to endomorphisms of the nullary part is an operad map") {
  Operad com = commutative_operad({"a"}, Base::FINSET, 3);
  CollectionMap cn = canonical_nullary_map(com, 3);
  Operad endz = endomorphism_operad(nullary_algebra(com).carrier, 3);
  CHECK(check_operad_map(truncate_operad(com, 3), endz, cn, 3).pass);

  Operad red = associative_operad(Base::FINSET, 3, false);
  CollectionMap cn2 = canonical_nullary_map(red, 3);
  Operad endz2 = endomorphism_operad(nullary_algebra(red).carrier, 3);
  CHECK(check_operad_map(red, endz2, cn2, 3).pass);
}

TEST_CASE("endomorphisms pull back along injective-on-values color maps") {
  ColorFamily myz{Base::FINSET,
                  {"y", "z"},
                  {{"y", BaseObject(Base::FINSET, {"0", "1"})},
                   {"z", BaseObject(Base::FINSET, {"p"})}}};
  ColorMap fold{{"u", "v"}, {"y", "z"}, {{"u", "y"}, {"v", "y"}}};
  PullbackEndReport pr = pullback_end_comparison(fold, myz, 2);
  CHECK(pr.invertible);
}

TEST_CASE("cartesian operad coincides with endomorphisms of the family") {
  std::vector<BaseObject> fam{BaseObject(Base::FINSET, {"0", "1"})};
  Operad cart = cartesian_operad(fam, 3);
  Operad endf = endomorphism_operad(cartesian_family(fam), 3);
  CHECK(operads_equal(cart, endf));
  CHECK(cart.carrier.value(Corolla({}, "{0.1}")).size() == 2);
  CHECK(check_operad(cart, 2).pass);

  // A mixed family: oversized substitution entries are left undefined, and
  // equality is checked on what both sides define.
  std::vector<BaseObject> fam2{BaseObject(Base::FINSET, {"0", "1"}),
                               BaseObject(Base::FINSET, {"0", "1", "2"})};
  Operad cart2 = cartesian_operad(fam2, 2, std::size_t{1} << 21);
  CHECK(cart2.carrier.value(Corolla({"{0.1}", "{0.1.2}"}, "{0.1.2}")).size() == 729);
  Operad endf2 = endomorphism_operad(cartesian_family(fam2), 2, std::size_t{1} << 21);
  CHECK(operads_equal(cart2, endf2));

  std::vector<BaseObject> fam0{BaseObject::initial(Base::FINSET)};
  Operad cart0 = cartesian_operad(fam0, 2);
  CHECK(cart0.carrier.value(Corolla({}, "{}")).is_initial());
}
