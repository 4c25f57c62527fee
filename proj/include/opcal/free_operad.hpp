#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "opcal/base.hpp"
#include "opcal/collection.hpp"
#include "opcal/corolla.hpp"
#include "opcal/errors.hpp"
#include "opcal/operad.hpp"
#include "opcal/perm.hpp"

namespace opcal {

namespace detail {

/// A rooted tree with generator-labeled vertices and leaves carrying input
/// positions of the ambient corolla.
struct FreeTree {
  bool leaf = false;
  std::size_t pos = 0;         // leaf: input position
  std::string gen_corolla;     // vertex: encoded generator corolla
  std::size_t gen = 0;         // vertex: generator element index
  std::vector<FreeTree> kids;  // vertex: one subtree per generator input
  std::size_t size = 0;        // number of generator vertices
};

inline std::string free_tree_label(const FreeTree& t, const Collection& gens) {
  if (t.leaf) return "#" + std::to_string(t.pos);
  Corolla ct = Corolla::decode(t.gen_corolla);
  std::string s = "[" + gens.value(ct).label(t.gen) + "@" + t.gen_corolla + "](";
  for (std::size_t i = 0; i < t.kids.size(); ++i) {
    if (i) s += ',';
    s += free_tree_label(t.kids[i], gens);
  }
  return s + ")";
}

/// Normal form under vertex-slot relabeling: subtrees are sorted by their
/// labels, the generator element is transported along the sorting
/// permutation, and ties between identical subtrees (possible only for
/// closed subtrees) are broken by minimizing the generator label over the
/// label-preserving permutations.
inline void free_tree_canonicalize(FreeTree& t, const Collection& gens) {
  if (t.leaf) return;
  for (auto& k : t.kids) free_tree_canonicalize(k, gens);
  std::size_t k = t.kids.size();
  if (k < 2) return;
  std::vector<std::string> labs(k);
  for (std::size_t i = 0; i < k; ++i) labs[i] = free_tree_label(t.kids[i], gens);
  std::vector<std::size_t> ord(k);
  for (std::size_t i = 0; i < k; ++i) ord[i] = i;
  std::stable_sort(ord.begin(), ord.end(),
                   [&](std::size_t a, std::size_t b) { return labs[a] < labs[b]; });
  std::vector<std::size_t> img(k); // old slot -> new slot
  for (std::size_t j = 0; j < k; ++j) img[ord[j]] = j;
  Corolla ct = Corolla::decode(t.gen_corolla);
  bool identity = true;
  for (std::size_t i = 0; i < k; ++i)
    if (img[i] != i) identity = false;
  if (!identity) {
    Permutation sigma(img);
    t.gen = gens.act(sigma, ct).apply(t.gen);
    ct = ct.permuted(sigma);
    t.gen_corolla = ct.encode();
    std::vector<FreeTree> nk(k);
    for (std::size_t i = 0; i < k; ++i) nk[img[i]] = std::move(t.kids[i]);
    t.kids = std::move(nk);
  }
  std::vector<std::string> slabs(k);
  for (std::size_t j = 0; j < k; ++j) slabs[j] = labs[ord[j]];
  bool ties = false;
  for (std::size_t j = 0; j + 1 < k; ++j)
    if (slabs[j] == slabs[j + 1]) ties = true;
  if (!ties) return;
  const BaseObject& v = gens.value(ct);
  std::size_t best = t.gen;
  std::string best_label = v.label(best);
  for (const auto& tau : all_permutations(k)) {
    bool preserves = true;
    for (std::size_t j = 0; j < k && preserves; ++j)
      if (slabs[tau(j)] != slabs[j]) preserves = false;
    if (!preserves) continue;
    std::size_t g2 = gens.act(tau, ct).apply(t.gen);
    std::string l2 = v.label(g2);
    if (l2 < best_label) {
      best = g2;
      best_label = std::move(l2);
    }
  }
  t.gen = best;
}

/// Replace each leaf position p by repl[p]; holes[p] (when nonempty trees are
/// supplied) substitutes a whole subtree instead.
inline FreeTree free_tree_relabel(const FreeTree& t, const std::vector<std::size_t>& repl) {
  FreeTree out = t;
  if (t.leaf) {
    out.pos = repl[t.pos];
    return out;
  }
  for (auto& k : out.kids) k = free_tree_relabel(k, repl);
  return out;
}

/// Substitute subs[p] for the leaf at position p, throughout.
inline FreeTree free_tree_graft(const FreeTree& t, const std::vector<FreeTree>& subs) {
  if (t.leaf) return subs[t.pos];
  FreeTree out = t;
  out.size = 1;
  for (std::size_t i = 0; i < out.kids.size(); ++i) {
    out.kids[i] = free_tree_graft(t.kids[i], subs);
    out.size += out.kids[i].size;
  }
  return out;
}

/// All canonical trees over the given (globally numbered) leaves with the
/// given root color and at most `budget` generator vertices.
inline std::vector<FreeTree> free_trees(const Collection& gens,
                                        const std::vector<std::size_t>& leaves,
                                        const std::vector<std::string>& leaf_colors,
                                        const std::string& root_color, std::size_t budget,
                                        const std::vector<Corolla>& gen_cors) {
  std::vector<FreeTree> out;
  std::set<std::string> seen;
  auto push = [&](FreeTree t) {
    free_tree_canonicalize(t, gens);
    if (seen.insert(free_tree_label(t, gens)).second) out.push_back(std::move(t));
  };

  if (leaves.size() == 1 && leaf_colors[0] == root_color) {
    FreeTree l;
    l.leaf = true;
    l.pos = leaves[0];
    push(std::move(l));
  }
  if (budget == 0) return out;

  for (const Corolla& ct : gen_cors) {
    if (ct.output != root_color) continue;
    std::size_t k = ct.arity();
    if (k == 0 && !leaves.empty()) continue;
    // Every assignment of the leaves to the k generator slots.
    std::size_t total = 1;
    for (std::size_t i = 0; i < leaves.size(); ++i) total *= k;
    if (k == 0) total = leaves.empty() ? 1 : 0;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<std::vector<std::size_t>> slot_leaves(k);
      std::vector<std::vector<std::string>> slot_colors(k);
      std::size_t c = code;
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        std::size_t j = c % k;
        c /= k;
        slot_leaves[j].push_back(leaves[i]);
        slot_colors[j].push_back(leaf_colors[i]);
      }
      // Subtrees per slot, then all combinations within the vertex budget.
      std::vector<std::vector<FreeTree>> options(k);
      bool dead = false;
      for (std::size_t j = 0; j < k && !dead; ++j) {
        options[j] =
            free_trees(gens, slot_leaves[j], slot_colors[j], ct.inputs[j], budget - 1, gen_cors);
        if (options[j].empty()) dead = true;
      }
      if (dead) continue;
      std::vector<std::size_t> pick(k, 0);
      while (true) {
        std::size_t used = 1;
        for (std::size_t j = 0; j < k; ++j) used += options[j][pick[j]].size;
        if (used <= budget) {
          for (std::size_t g = 0; g < gens.value(ct).size(); ++g) {
            FreeTree t;
            t.gen_corolla = ct.encode();
            t.gen = g;
            t.size = used;
            for (std::size_t j = 0; j < k; ++j) t.kids.push_back(options[j][pick[j]]);
            push(std::move(t));
          }
        }
        std::size_t j = k;
        bool done = true;
        while (j-- > 0) {
          if (++pick[j] < options[j].size()) {
            done = false;
            break;
          }
          pick[j] = 0;
        }
        if (done || k == 0) break;
      }
    }
  }
  std::sort(out.begin(), out.end(), [&](const FreeTree& a, const FreeTree& b) {
    return free_tree_label(a, gens) < free_tree_label(b, gens);
  });
  return out;
}

} // namespace detail

/// The free operad on a FINSET generating collection: values are generator-
/// labeled rooted trees with at most size_bound vertices, the symmetric
/// action relabels leaves, identities are bare leaves, and substitution is
/// grafting.  Substitution entries whose result would exceed the vertex
/// bound are left undefined.
inline Operad free_operad(const Collection& generators, std::size_t size_bound) {
  if (generators.base() != Base::FINSET)
    throw ValidationError("free operad requires the FINSET base");
  const auto& colors = generators.colors();

  std::vector<Corolla> gen_cors;
  std::size_t max_arity = 1;
  for (const auto& c : generators.support_corollas()) {
    if (generators.value(c).is_initial()) continue;
    gen_cors.push_back(c);
    max_arity = std::max(max_arity, c.arity());
  }
  std::size_t arity_bound = max_arity >= 2 ? 1 + size_bound * (max_arity - 1) : 1;

  Operad o;
  o.carrier = Collection(Base::FINSET, colors);
  o.index_bound = arity_bound;

  // Values, together with the tree list aligned with each value's labels.
  std::map<std::string, std::vector<detail::FreeTree>> trees;
  for (std::size_t n = 0; n <= arity_bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(colors, colors, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      std::vector<std::size_t> leaves(n);
      for (std::size_t i = 0; i < n; ++i) leaves[i] = i;
      auto ts = detail::free_trees(generators, leaves, c.inputs, c.output, size_bound, gen_cors);
      std::vector<std::string> labels;
      for (const auto& t : ts) labels.push_back(detail::free_tree_label(t, generators));
      o.carrier.set_value(c, BaseObject(Base::FINSET, labels));
      trees.emplace(enc, std::move(ts));
    }
  }
  o.carrier.set_truncated_above(arity_bound);

  auto index_in = [&](const Corolla& c, detail::FreeTree t) {
    detail::free_tree_canonicalize(t, generators);
    return o.carrier.value(c).index_of(detail::free_tree_label(t, generators));
  };

  // Symmetric action: relabel leaves along the transposition.
  for (std::size_t n = 2; n <= arity_bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(colors, colors, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      const auto& ts = trees.at(enc);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        Permutation si = Permutation::adjacent_transposition(n, i);
        Corolla ci = c.permuted(si);
        std::vector<std::size_t> repl(n);
        for (std::size_t p = 0; p < n; ++p) repl[p] = si(p);
        std::vector<std::size_t> table(ts.size());
        for (std::size_t e = 0; e < ts.size(); ++e)
          table[e] = index_in(ci, detail::free_tree_relabel(ts[e], repl));
        o.carrier.set_gen_act(c, i,
                              BaseMorphism::finset(o.carrier.value(c), o.carrier.value(ci),
                                                   std::move(table)));
      }
    }
  }

  // Identities: the bare leaf.
  for (const auto& x : colors) {
    Corolla cx({x}, x);
    detail::FreeTree l;
    l.leaf = true;
    l.pos = 0;
    o.set_unit(x, BaseMorphism::finset(BaseObject::unit(Base::FINSET), o.carrier.value(cx),
                                       {index_in(cx, l)}));
  }

  // Substitution: graft the fiber trees into the outer tree's leaves.
  for (std::size_t n = 0; n <= arity_bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(colors, colors, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      for (std::size_t m = 0; m <= arity_bound; ++m) {
        FiniteGroupoid ig = composition_index_groupoid_grade(n, colors, m, false);
        for (const auto& ienc : ig.objects) {
          CompositionIndex idx = CompositionIndex::decode(ienc);
          BaseObject dom = o.gamma_domain(c, idx);
          if (dom.is_initial()) continue;
          std::vector<const std::vector<detail::FreeTree>*> fac;
          for (std::size_t j = 0; j < m; ++j)
            fac.push_back(&trees.at(fiber_corolla(c, idx, j).encode()));
          fac.push_back(&trees.at(mids_corolla(c, idx).encode()));
          std::vector<std::size_t> table(dom.size());
          bool in_bound = true;
          for (std::size_t e = 0; e < dom.size() && in_bound; ++e) {
            // Row-major decode, last factor fastest.
            std::vector<std::size_t> part(m + 1);
            std::size_t rem = e;
            for (std::size_t j = m + 1; j-- > 0;) {
              part[j] = rem % fac[j]->size();
              rem /= fac[j]->size();
            }
            std::vector<detail::FreeTree> subs(m);
            for (std::size_t j = 0; j < m; ++j) {
              auto fib = idx.fiber(j);
              subs[j] = detail::free_tree_relabel((*fac[j])[part[j]], fib);
            }
            detail::FreeTree g = detail::free_tree_graft((*fac[m])[part[m]], subs);
            if (g.size > size_bound) {
              in_bound = false;
              break;
            }
            table[e] = index_in(c, std::move(g));
          }
          if (in_bound)
            o.set_gamma(c, idx, BaseMorphism::finset(dom, o.carrier.value(c), std::move(table)));
        }
      }
    }
  }
  return o;
}

/// Generators for the free operad examples: one color, a two-element arity-2
/// value carrying the regular transposition action, and optionally one
/// nullary generator.
inline Collection binary_generators(bool with_nullary = false) {
  Collection e(Base::FINSET, {"a"});
  Corolla c2({"a", "a"}, "a");
  BaseObject v2(Base::FINSET, {"l", "r"});
  e.set_value(c2, v2);
  e.set_gen_act(c2, 0, BaseMorphism::finset(v2, v2, {1, 0}));
  if (with_nullary) e.set_value(Corolla({}, "a"), BaseObject::unit(Base::FINSET));
  e.set_truncated_above(2);
  return e;
}

} // namespace opcal
