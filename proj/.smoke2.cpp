#include <cstdio>
#include "opcal/coherence.hpp"
#include "opcal/operad.hpp"

using namespace opcal;

int main() {
  // VECTQ mirror of the commutative operad.
  Operad comq = commutative_operad({"a"}, Base::VECTQ, 3);
  LawReport rq = check_operad(comq, 3);
  std::printf("com vectq: pass=%d\n", (int)rq.pass);
  for (auto& v : rq.violations) std::printf("  V %s\n", v.c_str());

  Operad assocq = associative_operad(Base::VECTQ, 3);
  LawReport rq2 = check_operad(assocq, 3);
  std::printf("assoc vectq: pass=%d\n", (int)rq2.pass);
  for (auto& v : rq2.violations) std::printf("  V %s\n", v.c_str());
  ComposedCollection caq(assocq.carrier, assocq.carrier, 3, false);
  auto gs = caq.grade_sizes(Corolla({"a", "a"}, "a"));
  std::printf("assoc vectq grades n=2:");
  for (auto g : gs) std::printf(" %zu", g);
  std::printf("\n");

  // Unit isomorphisms on the reduced associative carrier.
  Operad ared = associative_operad(Base::FINSET, 3, false);
  CollectionMap lu = left_unit_iso(ared.carrier, 3);
  CollectionMap ru = right_unit_iso(ared.carrier, 3);
  bool lu_ok = true, ru_ok = true;
  for (const auto& c : lu.src.support_corollas()) lu_ok = lu_ok && lu.component(c).is_invertible();
  for (const auto& c : ru.src.support_corollas()) ru_ok = ru_ok && ru.component(c).is_invertible();
  std::printf("unit isos invertible: left=%d right=%d\n", (int)lu_ok, (int)ru_ok);

  // Associativity comparison on three small reduced collections.
  CollectionMap ai = associativity_iso(ared.carrier, ared.carrier, ared.carrier, 3);
  bool ai_ok = true;
  for (const auto& c : ai.src.support_corollas()) ai_ok = ai_ok && ai.component(c).is_invertible();
  std::printf("assoc iso invertible: %d (support %zu)\n", (int)ai_ok,
              ai.src.support_corollas().size());
  // Both bracketings have the same graded sizes.
  for (const auto& c : ai.src.support_corollas())
    if (ai.src.value(c).size() != ai.dst.value(c).size()) {
      std::printf("  size mismatch at %s: %zu vs %zu\n", c.encode().c_str(),
                  ai.src.value(c).size(), ai.dst.value(c).size());
      ai_ok = false;
    }
  std::printf("done\n");
  return 0;
}
