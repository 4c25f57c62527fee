#pragma once

// Independent combinatorial oracles, computed by elementary recurrences and
// brute-force sums only. Nothing here touches the library under test.

#include <cstddef>
#include <vector>

namespace oracle {

inline unsigned long long stirling2(std::size_t n, std::size_t k) {
  if (n == 0 && k == 0) return 1;
  if (n == 0 || k == 0) return 0;
  return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1);
}

inline unsigned long long binom(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  unsigned long long out = 1;
  for (std::size_t i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

inline unsigned long long factorial(std::size_t n) {
  unsigned long long out = 1;
  for (std::size_t i = 2; i <= n; ++i) out *= i;
  return out;
}

inline unsigned long long catalan(std::size_t n) {
  return binom(2 * n, n) / (n + 1);
}

/// Grade-m size of the one-color commutative composition square at arity n:
/// partitions of an n-set into at most m blocks.
inline unsigned long long com_compose_grade(std::size_t n, std::size_t m) {
  unsigned long long out = 0;
  for (std::size_t k = 0; k <= m; ++k) out += stirling2(n, k);
  return out;
}

/// Grade-m size of the one-color associative composition square at arity n:
/// the block action is free, so orbits count functions f : n -> m weighted
/// by the linear orders of each fiber.
inline unsigned long long assoc_compose_grade(std::size_t n, std::size_t m) {
  if (n == 0) return 1;
  if (m == 0) return 0;
  unsigned long long out = 0;
  std::vector<std::size_t> f(n, 0);
  for (;;) {
    std::vector<std::size_t> fib(m, 0);
    for (std::size_t v : f) ++fib[v];
    unsigned long long w = 1;
    for (std::size_t j = 0; j < m; ++j) w *= factorial(fib[j]);
    out += w;
    std::size_t i = 0;
    while (i < n && ++f[i] == m) f[i++] = 0;
    if (i == n) break;
  }
  return out;
}

/// Number of words of length n over an s-letter alphabet.
inline unsigned long long word_count(std::size_t s, std::size_t n) {
  unsigned long long out = 1;
  for (std::size_t i = 0; i < n; ++i) out *= s;
  return out;
}

/// Number of multisets of size n over an s-letter alphabet.
inline unsigned long long multiset_count(std::size_t s, std::size_t n) {
  if (s == 0) return n == 0 ? 1 : 0;
  return binom(s + n - 1, n);
}

} // namespace oracle
