#include <cstdio>
#include "opcal/endomorphism.hpp"

using namespace opcal;

int main() {
  ColorFamily two{Base::FINSET, {"a"}, {{"a", BaseObject(Base::FINSET, {"0", "1"})}}};
  Operad end2 = endomorphism_operad(two, 3);
  Corolla c2({"a", "a"}, "a");
  std::printf("|End(2)(2)| = %zu (want 16)\n", end2.carrier.value(c2).size());
  LawReport r = check_operad(end2, 2);
  std::printf("End(2) check bound 2: pass=%d\n", (int)r.pass);
  for (auto& v : r.violations) std::printf("  V %s\n", v.c_str());

  ColorFamily unitfam{Base::FINSET, {"a"}, {{"a", BaseObject::unit(Base::FINSET)}}};
  Operad endu = endomorphism_operad(unitfam, 3);
  bool all_unit = true;
  for (const auto& c : endu.carrier.support_corollas())
    all_unit = all_unit && endu.carrier.value(c).size() == 1;
  std::printf("End(unit) all values unit: %d\n", (int)all_unit);

  ColorFamily v2{Base::VECTQ, {"a"}, {{"a", BaseObject(Base::VECTQ, {"e0", "e1"})}}};
  Operad endv = endomorphism_operad(v2, 3);
  std::printf("dim End_Q(2)(n):");
  for (std::size_t n = 0; n <= 3; ++n)
    std::printf(" %zu", endv.carrier.value(Corolla(std::vector<std::string>(n, "a"), "a")).size());
  std::printf(" (want 2 4 8 16)\n");
  LawReport rv = check_operad(endv, 2);
  std::printf("End_Q(2) check bound 2: pass=%d\n", (int)rv.pass);
  for (auto& v : rv.violations) std::printf("  V %s\n", v.c_str());

  Operad com = commutative_operad({"a"}, Base::FINSET, 3);
  auto maps = enumerate_operad_maps(com, end2, 3);
  std::printf("Com -> End(2) maps: %zu (want 4)\n", maps.size());

  CorrespondenceReport cr = algebra_map_correspondence(com, two, 3);
  std::printf("correspondence(Com, 2): maps=%zu structs=%zu bij=%d (want 4 4 1)\n",
              cr.operad_map_count, cr.algebra_structure_count, (int)cr.bijective);

  Operad triv = trivial_operad({"a"}, Base::FINSET, 3);
  CorrespondenceReport ct = algebra_map_correspondence(triv, two, 3);
  std::printf("correspondence(trivial, 2): maps=%zu structs=%zu bij=%d (want 1 1 1)\n",
              ct.operad_map_count, ct.algebra_structure_count, (int)ct.bijective);

  // Canonical map into the endomorphisms of the nullary part.
  CollectionMap cn = canonical_nullary_map(com, 3);
  Operad endz = endomorphism_operad(nullary_algebra(com).carrier, 3);
  LawReport rc = check_operad_map(truncate_operad(com, 3), endz, cn, 3);
  std::printf("canonical nullary map (Com): pass=%d\n", (int)rc.pass);
  for (auto& v : rc.violations) std::printf("  V %s\n", v.c_str());

  Operad assoc_red = associative_operad(Base::FINSET, 3, false);
  CollectionMap cn2 = canonical_nullary_map(assoc_red, 3);
  Operad endz2 = endomorphism_operad(nullary_algebra(assoc_red).carrier, 3);
  LawReport rc2 = check_operad_map(assoc_red, endz2, cn2, 3);
  std::printf("canonical nullary map (reduced Assoc): pass=%d\n", (int)rc2.pass);

  // Pullback comparison.
  ColorFamily myz{Base::FINSET,
                  {"y", "z"},
                  {{"y", BaseObject(Base::FINSET, {"0", "1"})},
                   {"z", BaseObject(Base::FINSET, {"p"})}}};
  ColorMap fold{{"u", "v"}, {"y", "z"}, {{"u", "y"}, {"v", "y"}}};
  PullbackEndReport pr = pullback_end_comparison(fold, myz, 2);
  std::printf("pullback end comparison invertible: %d\n", (int)pr.invertible);

  // Cartesian structure.
  std::vector<BaseObject> fam{BaseObject(Base::FINSET, {"0", "1"})};
  Operad cart = cartesian_operad(fam, 3);
  Operad endf = endomorphism_operad(cartesian_family(fam), 3);
  std::printf("cartesian == endomorphism: %d\n", (int)operads_equal(cart, endf));
  std::printf("|cartesian(2)(n=2)| = %zu (want 16), Z size = %zu (want 2)\n",
              cart.carrier.value(Corolla({"{0.1}", "{0.1}"}, "{0.1}")).size(),
              cart.carrier.value(Corolla({}, "{0.1}")).size());

  std::vector<BaseObject> fam2{BaseObject(Base::FINSET, {"0", "1"}),
                               BaseObject(Base::FINSET, {"0", "1", "2"})};
  Operad cart2 = cartesian_operad(fam2, 2, 1 << 21);
  Corolla mixed({"{0.1}", "{0.1.2}"}, "{0.1.2}");
  std::printf("|cartesian([2,3])(2,3;3)| = %zu (want 729)\n",
              cart2.carrier.value(mixed).size());
  Operad endf2 = endomorphism_operad(cartesian_family(fam2), 2, 1 << 21);
  std::printf("cartesian([2,3]) == endomorphism: %d\n", (int)operads_equal(cart2, endf2));

  std::vector<BaseObject> fam0{BaseObject::initial(Base::FINSET)};
  Operad cart0 = cartesian_operad(fam0, 2);
  std::printf("|cartesian([empty])(;X)| = %zu (want 0)\n",
              cart0.carrier.value(Corolla({}, "{}")).size());
  return 0;
}
