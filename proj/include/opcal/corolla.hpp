#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "opcal/errors.hpp"
#include "opcal/groupoid.hpp"
#include "opcal/perm.hpp"

namespace opcal {

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string join(const std::vector<std::string>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += v[i];
  }
  return s;
}

inline void check_color_name(const std::string& c) {
  if (c.empty()) throw ValidationError("empty color name");
  for (char ch : c)
    if (ch == ',' || ch == ';' || ch == '|' || ch == '=' || ch == '#')
      throw ValidationError("color name '" + c + "' contains a reserved character");
}

} // namespace detail

/// An input tuple of colors together with an output color.
struct Corolla {
  std::vector<std::string> inputs;
  std::string output;

  Corolla() = default;
  Corolla(std::vector<std::string> in, std::string out)
      : inputs(std::move(in)), output(std::move(out)) {}

  std::size_t arity() const { return inputs.size(); }

  std::string encode() const { return detail::join(inputs, ',') + ";" + output; }

  static Corolla decode(const std::string& s) {
    auto pos = s.rfind(';');
    if (pos == std::string::npos) throw ParseError("bad corolla encoding '" + s + "'");
    std::string in = s.substr(0, pos);
    Corolla c;
    c.output = s.substr(pos + 1);
    if (!in.empty()) c.inputs = detail::split(in, ',');
    return c;
  }

  /// The relabeled corolla sigma . c, whose input at position sigma(i) is
  /// inputs[i].
  Corolla permuted(const Permutation& sigma) const {
    return Corolla(sigma.apply(inputs), output);
  }

  bool operator==(const Corolla& o) const = default;
  bool operator<(const Corolla& o) const { return encode() < o.encode(); }
};

/// A way of splitting an arity-n operation: a block count m, a function
/// f : {0..n-1} -> {0..m-1} assigning inputs to blocks, and a middle color
/// for each block.
struct CompositionIndex {
  std::size_t m = 0;
  std::vector<std::size_t> f; // f[i] = block of input i
  std::vector<std::string> mids;

  std::size_t n() const { return f.size(); }

  std::string encode() const {
    std::ostringstream os;
    os << "m=" << m << "|f=";
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) os << ',';
      os << f[i];
    }
    os << "|mids=" << detail::join(mids, ',');
    return os.str();
  }

  static CompositionIndex decode(const std::string& s) {
    auto parts = detail::split(s, '|');
    if (parts.size() != 3 || parts[0].substr(0, 2) != "m=" || parts[1].substr(0, 2) != "f=" ||
        parts[2].substr(0, 5) != "mids=")
      throw ParseError("bad composition index encoding '" + s + "'");
    CompositionIndex idx;
    idx.m = std::stoul(parts[0].substr(2));
    std::string fs = parts[1].substr(2);
    if (!fs.empty())
      for (const auto& t : detail::split(fs, ',')) idx.f.push_back(std::stoul(t));
    std::string ms = parts[2].substr(5);
    if (!ms.empty()) idx.mids = detail::split(ms, ',');
    if (idx.mids.size() != idx.m) throw ParseError("mids length mismatch in '" + s + "'");
    return idx;
  }

  /// Ascending list of inputs in block j.
  std::vector<std::size_t> fiber(std::size_t j) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (f[i] == j) out.push_back(i);
    return out;
  }

  /// Relabel blocks by sigma in Sigma_m: f' = sigma o f, mids' = sigma . mids.
  CompositionIndex permuted(const Permutation& sigma) const {
    CompositionIndex out;
    out.m = m;
    out.f.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out.f[i] = sigma(f[i]);
    out.mids = sigma.apply(mids);
    return out;
  }

  /// Precompose with tau^{-1} in Sigma_n: input tau(i) now sits where input
  /// i sat, so f'(tau(i)) = f(i).
  CompositionIndex reindexed(const Permutation& tau) const {
    CompositionIndex out;
    out.m = m;
    out.f.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out.f[tau(i)] = f[i];
    out.mids = mids;
    return out;
  }

  bool operator==(const CompositionIndex& o) const = default;
};

/// The corolla of a block relative to the full input tuple: inputs are the
/// colors over the fiber in ascending position order, output is the middle
/// color of the block.
inline Corolla fiber_corolla(const Corolla& c, const CompositionIndex& idx, std::size_t j) {
  std::vector<std::string> in;
  for (std::size_t i : idx.fiber(j)) in.push_back(c.inputs[i]);
  return Corolla(std::move(in), idx.mids[j]);
}

/// The corolla consumed by the outer slot: middle colors in, original output.
inline Corolla mids_corolla(const Corolla& c, const CompositionIndex& idx) {
  return Corolla(idx.mids, c.output);
}

/// Groupoid of corollas with inputs from xs, outputs from ys, at arity n,
/// with Sigma_n relabeling the inputs.
inline FiniteGroupoid corolla_groupoid(const std::vector<std::string>& xs,
                                       const std::vector<std::string>& ys, std::size_t n) {
  std::vector<std::string> objects;
  std::vector<std::vector<std::string>> tuples{{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<std::string>> next;
    for (const auto& t : tuples)
      for (const auto& x : xs) {
        auto t2 = t;
        t2.push_back(x);
        next.push_back(std::move(t2));
      }
    tuples = std::move(next);
  }
  for (const auto& t : tuples)
    for (const auto& y : ys) objects.push_back(Corolla(t, y).encode());
  std::sort(objects.begin(), objects.end());
  FiniteGroupoid g{SymProduct({n}), std::move(objects),
                   [](const GroupElem& e, const std::string& o) {
                     return Corolla::decode(o).permuted(e.parts[0]).encode();
                   }};
  return g;
}

/// Groupoid of grade-m composition indices for an arity-n corolla over the
/// given colors, with Sigma_m relabeling the blocks.  With surjective_only
/// set, only block-surjective assignments appear (exact for reduced left
/// factors); otherwise every assignment appears (a truncation in m).
inline FiniteGroupoid composition_index_groupoid_grade(std::size_t n,
                                                       const std::vector<std::string>& colors,
                                                       std::size_t m, bool surjective_only) {
  std::vector<std::string> objects;
  std::vector<std::vector<std::size_t>> fns{{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& f : fns)
      for (std::size_t j = 0; j < m; ++j) {
        auto f2 = f;
        f2.push_back(j);
        next.push_back(std::move(f2));
      }
    fns = std::move(next);
  }
  if (m == 0 && n > 0) fns.clear(); // no functions from a nonempty set to the empty set
  std::vector<std::vector<std::string>> midss{{}};
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<std::vector<std::string>> next;
    for (const auto& t : midss)
      for (const auto& x : colors) {
        auto t2 = t;
        t2.push_back(x);
        next.push_back(std::move(t2));
      }
    midss = std::move(next);
  }
  for (const auto& f : fns) {
    if (surjective_only) {
      std::vector<bool> hit(m, false);
      for (std::size_t j : f) hit[j] = true;
      if (std::find(hit.begin(), hit.end(), false) != hit.end()) continue;
    }
    for (const auto& mids : midss) {
      CompositionIndex idx{m, f, mids};
      objects.push_back(idx.encode());
    }
  }
  std::sort(objects.begin(), objects.end());
  FiniteGroupoid g{SymProduct({m}), std::move(objects),
                   [](const GroupElem& e, const std::string& o) {
                     return CompositionIndex::decode(o).permuted(e.parts[0]).encode();
                   }};
  return g;
}

/// The union of all grades up to m_bound, tagged with whether the bound is a
/// truncation or covers every grade that can carry a nonzero value.
struct CompositionIndexGroupoid {
  std::size_t n = 0;
  std::size_t m_bound = 0;
  bool surjective_only = false;
  bool truncated = false;
  std::vector<FiniteGroupoid> grades; // grades[m], m = 0..m_bound
};

inline CompositionIndexGroupoid composition_index_groupoid(std::size_t n,
                                                           const std::vector<std::string>& colors,
                                                           std::size_t m_bound,
                                                           bool surjective_only) {
  CompositionIndexGroupoid out;
  out.n = n;
  out.m_bound = m_bound;
  out.surjective_only = surjective_only;
  out.truncated = !(surjective_only && m_bound >= n);
  for (std::size_t m = 0; m <= m_bound; ++m)
    out.grades.push_back(composition_index_groupoid_grade(n, colors, m, surjective_only));
  return out;
}

} // namespace opcal
