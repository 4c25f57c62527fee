#include <chrono>
#include <cstdio>
#include "opcal/coherence.hpp"
#include "opcal/compose.hpp"
using namespace opcal;
int main() {
  // Worst-case single-color draw: three values at every arity 1..3.
  Collection phi(Base::VECTQ, {"a"});
  for (std::size_t n = 1; n <= 3; ++n)
    phi.set_value(Corolla(std::vector<std::string>(n, "a"), "a"),
                  BaseObject(Base::VECTQ, {"v0", "v1", "v2"}));
  auto t0 = std::chrono::steady_clock::now();
  CollectionMap ai = associativity_iso(phi, phi, phi, 3);
  auto t1 = std::chrono::steady_clock::now();
  std::size_t mx = 0;
  bool inv = true;
  for (auto& c : ai.src.support_corollas()) {
    mx = std::max(mx, ai.src.value(c).size());
    inv = inv && ai.component(c).is_invertible();
  }
  std::printf("assoc=%.1fs maxgrade=%zu inv=%d\n",
              std::chrono::duration<double>(t1 - t0).count(), mx, (int)inv);
}
