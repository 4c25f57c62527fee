#include <chrono>
#include <cstdio>
#include <random>
#include <cstdlib>
#include "opcal/coherence.hpp"
#include "opcal/compose.hpp"
#include "tests/random_collections.hpp"
using namespace opcal;
int main(int, char** argv) {
  std::mt19937 rng((unsigned)atoi(argv[1]));
  for (int trial = 0; trial < 20; ++trial) {
    Base base = (trial % 2) ? Base::VECTQ : Base::FINSET;
    Collection phi = opcal_test::random_reduced(rng, base);
    std::size_t total = 0;
    for (auto& c : phi.support_corollas()) total += phi.value(c).size();
    auto t0 = std::chrono::steady_clock::now();
    CollectionMap lu = left_unit_iso(phi, 3);
    CollectionMap ru = right_unit_iso(phi, 3);
    auto t1 = std::chrono::steady_clock::now();
    CollectionMap ai = associativity_iso(phi, phi, phi, 3);
    auto t2 = std::chrono::steady_clock::now();
    std::size_t mx = 0;
    for (auto& c : ai.src.support_corollas()) mx = std::max(mx, ai.src.value(c).size());
    std::printf("trial %d base=%s colors=%zu totalvals=%zu units=%.1fs assoc=%.1fs maxgrade=%zu\n",
      trial, base_name(base).c_str(), phi.colors().size(), total,
      std::chrono::duration<double>(t1-t0).count(), std::chrono::duration<double>(t2-t1).count(), mx);
    std::fflush(stdout);
  }
}
