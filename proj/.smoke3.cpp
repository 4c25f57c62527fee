#include <cstdio>
#include "opcal/algebra.hpp"

using namespace opcal;

// The monoid ({0,1}, AND, unit 1) as an algebra over the order-word operad:
// an action entry evaluates the product in the order the word dictates
// (commutative here, so order is immaterial).
static AlgebraStructure and_monoid_algebra(const Operad& assoc, std::size_t bound) {
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

int main() {
  Operad com = commutative_operad({"a"}, Base::FINSET, 4);
  AlgebraStructure term = terminal_algebra(com, 3);
  std::printf("terminal algebra over com: pass=%d\n", (int)check_algebra(term, 3).pass);

  Operad assoc = associative_operad(Base::FINSET, 4);
  AlgebraStructure am = and_monoid_algebra(assoc, 3);
  LawReport r = check_algebra(am, 3);
  std::printf("and-monoid algebra: pass=%d\n", (int)r.pass);
  for (auto& v : r.violations) std::printf("  V %s\n", v.c_str());

  // Free algebra grade sizes: Assoc |S|=2 gives words 2^n, Com gives
  // multisets C(2+n-1, n).
  ColorFamily s2{Base::FINSET, {"a"}, {{"a", BaseObject(Base::FINSET, {"s", "t"})}}};
  Operad assoc5 = associative_operad(Base::FINSET, 5);
  FreeAlgebra fa(assoc5, s2, 5);
  std::printf("free assoc grades:");
  for (std::size_t n = 0; n <= 5; ++n) std::printf(" %zu", fa.grade_size("a", n));
  std::printf(" (want 1 2 4 8 16 32)\n");
  Operad com5 = commutative_operad({"a"}, Base::FINSET, 5);
  FreeAlgebra fc(com5, s2, 5);
  std::printf("free com grades:");
  for (std::size_t n = 0; n <= 5; ++n) std::printf(" %zu", fc.grade_size("a", n));
  std::printf(" (want 1 2 3 4 5 6)\n");

  LawReport fr = check_free_algebra(FreeAlgebra(associative_operad(Base::FINSET, 3), s2, 3), 3);
  std::printf("free assoc graded laws: pass=%d\n", (int)fr.pass);
  for (auto& v : fr.violations) std::printf("  V %s\n", v.c_str());

  // Adjunction: truncated order-word operad, one generator, AND monoid.
  Operad assoc2 = truncate_operad(assoc, 2);
  ColorFamily onept{Base::FINSET, {"a"}, {{"a", BaseObject(Base::FINSET, {"m"})}}};
  AlgebraStructure am2 = and_monoid_algebra(assoc2, 2);
  AdjunctionReport ar = adjunction_bijection(assoc2, onept, am2, 2);
  std::printf("adjunction: alg=%zu fam=%zu bij=%d (want 2 2 1)\n", ar.algebra_map_count,
              ar.family_map_count, (int)ar.bijective);

  // Empty generator family: both sides singleton.
  ColorFamily none{Base::FINSET, {"a"}, {{"a", BaseObject::initial(Base::FINSET)}}};
  AdjunctionReport ar2 = adjunction_bijection(assoc2, none, am2, 2);
  std::printf("adjunction empty M: alg=%zu fam=%zu bij=%d (want 1 1 1)\n",
              ar2.algebra_map_count, ar2.family_map_count, (int)ar2.bijective);

  // Nullary algebra over Com is the terminal algebra; over reduced Assoc it
  // is empty.
  AlgebraStructure nz = nullary_algebra(com);
  std::printf("nullary(com): pass=%d carrier=%zu\n", (int)check_algebra(nz, 3).pass,
              nz.carrier.at("a").size());
  AlgebraStructure nred = nullary_algebra(associative_operad(Base::FINSET, 3, false));
  std::printf("nullary(reduced assoc): carrier=%zu pass=%d\n", nred.carrier.at("a").size(),
              (int)check_algebra(nred, 3).pass);

  // Algebra structure enumeration: Com on {0,1} at bound 3 has 4.
  ColorFamily two{Base::FINSET, {"a"}, {{"a", BaseObject(Base::FINSET, {"0", "1"})}}};
  Operad com3 = truncate_operad(com, 3);
  auto structs = enumerate_algebra_structures(com3, two, 3);
  std::printf("com-algebra structures on 2 points: %zu (want 4)\n", structs.size());
  return 0;
}
