#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "opcal/collection.hpp"
#include "opcal/groupoid.hpp"

namespace opcal_test {

/// Random reduced collection over at most two colors with trivial actions:
/// values depend only on the multiset of inputs plus the output, so the
/// default identity relabelings are equivariant.
inline opcal::Collection random_reduced(std::mt19937& rng, opcal::Base base) {
  using namespace opcal;
  std::vector<std::string> colors = (rng() % 2) ? std::vector<std::string>{"a"}
                                                : std::vector<std::string>{"a", "b"};
  Collection out(base, colors);
  for (std::size_t n = 1; n <= 3; ++n) {
    FiniteGroupoid cg = corolla_groupoid(colors, colors, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      std::vector<std::string> key = c.inputs;
      std::sort(key.begin(), key.end());
      if (c.inputs != key) continue; // handled via the sorted representative
      // Sparse support keeps iterated composition grades small: with both
      // colors and every corolla populated the triple product at arity three
      // runs to tens of thousands of elements per corolla.
      std::size_t size = (rng() % 3) ? 0 : 1 + rng() % 3; // 0..3 elements or dimensions
      if (size == 0) continue;
      std::vector<std::string> labels;
      for (std::size_t i = 0; i < size; ++i) labels.push_back("v" + std::to_string(i));
      BaseObject v(base, labels);
      // Same object on the whole relabeling orbit keeps identities valid.
      std::vector<std::string> in = key;
      do {
        out.set_value(Corolla(in, c.output), v);
      } while (std::next_permutation(in.begin(), in.end()));
    }
  }
  return out;
}

} // namespace opcal_test
