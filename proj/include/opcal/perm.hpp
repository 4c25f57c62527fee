#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace opcal {

/// A permutation of {0,...,n-1}, stored as the image table: img[i] = sigma(i).
class Permutation {
public:
  Permutation() = default;

  explicit Permutation(std::vector<std::size_t> img) : img_(std::move(img)) {
    std::vector<bool> seen(img_.size(), false);
    for (std::size_t v : img_) {
      if (v >= img_.size() || seen[v])
        throw std::invalid_argument("Permutation: not a bijection");
      seen[v] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> img(n);
    std::iota(img.begin(), img.end(), std::size_t{0});
    return Permutation(std::move(img));
  }

  /// The transposition (i, i+1) in S_n.
  static Permutation adjacent_transposition(std::size_t n, std::size_t i) {
    Permutation p = identity(n);
    std::swap(p.img_[i], p.img_[i + 1]);
    return p;
  }

  std::size_t degree() const { return img_.size(); }
  std::size_t operator()(std::size_t i) const { return img_[i]; }

  bool is_identity() const {
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return false;
    return true;
  }

  /// Composition: (a * b)(i) = a(b(i)).
  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    std::vector<std::size_t> img(b.degree());
    for (std::size_t i = 0; i < b.degree(); ++i) img[i] = a.img_[b.img_[i]];
    return Permutation(std::move(img));
  }

  Permutation inverse() const {
    std::vector<std::size_t> img(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) img[img_[i]] = i;
    return Permutation(std::move(img));
  }

  /// Tuple action: result[sigma(i)] = t[i].
  template <typename T>
  std::vector<T> apply(const std::vector<T>& tuple) const {
    std::vector<T> out(tuple.size());
    for (std::size_t i = 0; i < tuple.size(); ++i) out[img_[i]] = tuple[i];
    return out;
  }

  /// Factor into adjacent transpositions s_{i} = (i, i+1), so that the
  /// product of the returned word (left to right, leftmost applied last)
  /// equals *this.
  std::vector<std::size_t> adjacent_word() const {
    // Bubble sort the inverse image table; the swaps performed, reversed,
    // give a word for sigma.
    std::vector<std::size_t> word;
    std::vector<std::size_t> v = img_;
    bool moved = true;
    while (moved) {
      moved = false;
      for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        if (v[i] > v[i + 1]) {
          std::swap(v[i], v[i + 1]);
          word.push_back(i);
          moved = true;
        }
      }
    }
    // Sorting v (= applying transpositions on positions) turned sigma into
    // id, so sigma = product of the swaps in reverse order.  Each swap is
    // its own inverse, so the reversed word multiplies back to sigma.
    std::reverse(word.begin(), word.end());
    return word;
  }

  bool operator==(const Permutation& o) const { return img_ == o.img_; }
  bool operator!=(const Permutation& o) const { return !(*this == o); }
  bool operator<(const Permutation& o) const { return img_ < o.img_; }

  std::string encode() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < img_.size(); ++i) {
      if (i) os << ',';
      os << img_[i];
    }
    return os.str();
  }

  const std::vector<std::size_t>& image_table() const { return img_; }

private:
  std::vector<std::size_t> img_;
};

/// All permutations of degree n in lexicographic order of image table.
inline std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<std::size_t> img(n);
  std::iota(img.begin(), img.end(), std::size_t{0});
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation(img));
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

} // namespace opcal
