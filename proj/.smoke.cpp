#include <cstdio>
#include "opcal/operad.hpp"
#include "opcal/coherence.hpp"

using namespace opcal;

int main() {
  Operad com = commutative_operad({"a"}, Base::FINSET, 4);
  LawReport r = check_operad(com, 3);
  std::printf("com check: pass=%d violations=%zu notes=%zu\n", (int)r.pass,
              r.violations.size(), r.notes.size());
  for (auto& v : r.violations) std::printf("  V %s\n", v.c_str());
  for (auto& n : r.notes) std::printf("  N %s\n", n.c_str());

  // (Com . Com)(3) grade sizes should be graded Stirling partial sums: 1,3,... wait
  ComposedCollection cc(com.carrier, com.carrier, 4, false);
  Corolla c3({"a", "a", "a"}, "a");
  auto gs = cc.grade_sizes(c3);
  std::printf("grades n=3:");
  for (auto g : gs) std::printf(" %zu", g);
  std::printf("\n");

  Operad assoc = associative_operad(Base::FINSET, 4);
  LawReport r2 = check_operad(assoc, 3);
  std::printf("assoc check: pass=%d violations=%zu\n", (int)r2.pass, r2.violations.size());
  for (auto& v : r2.violations) std::printf("  V %s\n", v.c_str());

  ComposedCollection ca(assoc.carrier, assoc.carrier, 4, false);
  Corolla c2({"a", "a"}, "a");
  auto gs2 = ca.grade_sizes(c2);
  std::printf("assoc grades n=2:");
  for (auto g : gs2) std::printf(" %zu", g);
  std::printf("\n");

  auto maps = enumerate_operad_maps(assoc, com, 3);
  std::printf("assoc->com maps: %zu\n", maps.size());
  auto maps2 = enumerate_operad_maps(com, com, 3);
  std::printf("com->com maps: %zu\n", maps2.size());
  return 0;
}
