#include <cstdio>
#include "opcal/free_operad.hpp"
#include "opcal/algebra.hpp"

using namespace opcal;

int main() {
  Collection gens = binary_generators(false);
  Operad f = free_operad(gens, 3); // arity bound 4
  std::printf("|F(n)| for n=0..4:");
  for (std::size_t n = 0; n <= 4; ++n)
    std::printf(" %zu", f.carrier.value(Corolla(std::vector<std::string>(n, "a"), "a")).size());
  std::printf(" (want 0 1 2 12 120)\n");

  // Orbit counts under the symmetric action: Catalan numbers.
  for (std::size_t n = 2; n <= 4; ++n) {
    Corolla c(std::vector<std::string>(n, "a"), "a");
    std::vector<BaseMorphism> autos;
    for (std::size_t i = 0; i + 1 < n; ++i)
      autos.push_back(f.carrier.gen_act(c, i));
    auto [q, proj] = detail::finset_quotient(f.carrier.value(c), autos);
    std::printf("orbits at n=%zu: %zu\n", n, q.size());
  }

  LawReport r = check_operad(f, 3);
  std::printf("free operad check bound 3: pass=%d violations=%zu\n", (int)r.pass,
              r.violations.size());
  for (auto& v : r.violations) std::printf("  V %s\n", v.c_str());

  // Truncated small free operad: support {0,1,2}.
  Operad f1 = free_operad(gens, 1);
  std::printf("|F1(n)| n=0..2:");
  for (std::size_t n = 0; n <= 2; ++n)
    std::printf(" %zu", f1.carrier.value(Corolla(std::vector<std::string>(n, "a"), "a")).size());
  std::printf(" (want 0 1 2)\n");
  LawReport r1 = check_operad(f1, 2);
  std::printf("small free operad check bound 2: pass=%d\n", (int)r1.pass);
  for (auto& v : r1.violations) std::printf("  V %s\n", v.c_str());

  // Nullary + binary: closed trees.
  Collection gens2 = binary_generators(true);
  Operad g = free_operad(gens2, 3);
  std::printf("|G(0)| at size<=3: %zu (want 2)\n", g.carrier.value(Corolla({}, "a")).size());
  LawReport rg = check_operad(g, 2);
  std::printf("nullary+binary check bound 2: pass=%d\n", (int)rg.pass);
  for (auto& v : rg.violations) std::printf("  V %s\n", v.c_str());

  AlgebraStructure z = nullary_algebra(g);
  std::printf("nullary algebra of G: carrier=%zu (want 2)\n", z.carrier.at("a").size());
  // Grafting the closed tree z into both leaves of the binary generator gives
  // the closed tree b(z,z).
  Corolla c1({"a"}, "a");
  std::printf("Z action at (a;a) defined: %d, |dom|=%zu\n", (int)z.has_action(c1),
              z.has_action(c1) ? z.action_domain(c1).size() : 0);
  if (z.has_action(c1)) {
    BaseMorphism alpha = z.act(c1);
    for (std::size_t i = 0; i < alpha.source().size(); ++i)
      std::printf("  %s -> %s\n", alpha.source().label(i).c_str(),
                  alpha.target().label(alpha.apply(i)).c_str());
  }
  return 0;
}
