#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "opcal/base.hpp"
#include "opcal/collection.hpp"
#include "opcal/corolla.hpp"
#include "opcal/errors.hpp"
#include "opcal/groupoid.hpp"

namespace opcal {

namespace detail {

inline std::string grade_tag(std::size_t m) { return "m=" + std::to_string(m); }

/// Blockwise assembly: given consecutive slices of src (offset + block source
/// size) each mapping into dst, stitch the total morphism src -> dst.
inline BaseMorphism assemble_blocks(const BaseObject& src, const BaseObject& dst,
                                    const std::vector<std::pair<std::size_t, BaseMorphism>>& blocks) {
  if (src.base() == Base::FINSET) {
    std::vector<std::size_t> fn(src.size(), SIZE_MAX);
    for (const auto& [off, m] : blocks)
      for (std::size_t i = 0; i < m.source().size(); ++i) fn[off + i] = m.apply(i);
    for (std::size_t v : fn)
      if (v == SIZE_MAX) throw ValidationError("assemble_blocks: uncovered source element");
    return BaseMorphism::finset(src, dst, std::move(fn));
  }
  Matrix mat(dst.size(), src.size());
  for (const auto& [off, m] : blocks)
    for (std::size_t i = 0; i < m.source().size(); ++i)
      for (std::size_t r = 0; r < dst.size(); ++r) mat(r, off + i) = m.matrix()(r, i);
  return BaseMorphism::vectq(src, dst, std::move(mat));
}

/// Within-fiber permutation induced by a global relabeling tau: the fiber
/// F = f^{-1}(j) listed ascending maps onto tau(F) listed ascending; entry s
/// goes to the rank of tau(F[s]) in tau(F).
inline Permutation fiber_permutation(const std::vector<std::size_t>& fiber,
                                     const Permutation& tau) {
  std::vector<std::size_t> image;
  for (std::size_t p : fiber) image.push_back(tau(p));
  std::vector<std::size_t> sorted = image;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> img(fiber.size());
  for (std::size_t s = 0; s < fiber.size(); ++s)
    img[s] = std::lower_bound(sorted.begin(), sorted.end(), image[s]) - sorted.begin();
  return Permutation(img);
}

} // namespace detail

/// One grade of a composition product at a fixed corolla: the index groupoid,
/// the diagram of tensor products over it, and the computed colimit.
struct GradedPiece {
  std::size_t m = 0;
  FiniteGroupoid gpd{SymProduct({}), {}, nullptr};
  GroupoidDiagram diagram;
  ColimitResult colim;
};

/// The composition product of two collections over the same colors, graded
/// by block count and truncated at m_bound.  Pieces are computed on demand
/// and cached; the total value at a corolla is the coproduct of the grades.
class ComposedCollection {
public:
  ComposedCollection(Collection left, Collection right, std::optional<std::size_t> m_bound,
                     std::optional<bool> surjective_override = std::nullopt)
      : left_(std::move(left)), right_(std::move(right)) {
    if (left_.base() != right_.base())
      throw MixedBaseError("composition product across bases");
    if (left_.colors() != right_.colors())
      throw ColorMismatchError("composition product across color sets");
    surjective_only_ = surjective_override ? *surjective_override : left_.is_reduced();
    if (!m_bound && !surjective_only_)
      throw TruncationRequiredError(
          "left factor has nonzero nullary values; a block-count bound is required");
    m_bound_ = m_bound;
  }

  const Collection& left() const { return left_; }
  const Collection& right() const { return right_; }
  Base base() const { return left_.base(); }
  const std::vector<std::string>& colors() const { return left_.colors(); }
  bool surjective_only() const { return surjective_only_; }

  /// Largest grade that can be nonzero at arity n.
  std::size_t grade_bound(std::size_t n) const {
    std::size_t cap = right_cap();
    if (surjective_only_) cap = std::min(cap, n);
    if (m_bound_) cap = std::min(cap, *m_bound_);
    return cap;
  }

  /// Whether grades at arity n are complete rather than cut off.
  bool exact_at(std::size_t n) const {
    return surjective_only_ ? (!m_bound_ || *m_bound_ >= std::min(n, right_cap())) : false;
  }

  /// Largest arity with a possibly nonzero value.
  std::size_t arity_cap() const {
    return left_cap() * (m_bound_ ? std::min(*m_bound_, right_cap()) : right_cap());
  }

  /// Tensor factors of the diagram value at a composition index: the left
  /// factor over each block's fiber (fibers listed in ascending position
  /// order), then the right factor over the middle colors.
  std::vector<BaseObject> diagram_factors(const Corolla& c, const CompositionIndex& idx) const {
    std::vector<BaseObject> factors;
    for (std::size_t j = 0; j < idx.m; ++j) factors.push_back(left_.value(fiber_corolla(c, idx, j)));
    factors.push_back(right_.value(mids_corolla(c, idx)));
    return factors;
  }

  const GradedPiece& piece(const Corolla& c, std::size_t m) const {
    std::lock_guard<std::mutex> lock(mu_);
    std::string key = c.encode() + "#" + std::to_string(m);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
    auto p = std::make_unique<GradedPiece>(build_piece(c, m));
    return *cache_.emplace(key, std::move(p)).first->second;
  }

  std::vector<std::size_t> grade_sizes(const Corolla& c) const {
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m <= grade_bound(c.arity()); ++m)
      out.push_back(piece(c, m).colim.obj.size());
    return out;
  }

  /// The total value at a corolla: coproduct of the grades, tags "m=k".
  BaseObject value(const Corolla& c) const {
    std::vector<std::pair<std::string, BaseObject>> parts;
    for (std::size_t m = 0; m <= grade_bound(c.arity()); ++m)
      parts.emplace_back(detail::grade_tag(m), piece(c, m).colim.obj);
    return coproduct(parts, base()).obj;
  }

  /// Inclusion of a grade's colimit into the total value.
  BaseMorphism injection(const Corolla& c, std::size_t m) const {
    std::vector<std::pair<std::string, BaseObject>> parts;
    for (std::size_t k = 0; k <= grade_bound(c.arity()); ++k)
      parts.emplace_back(detail::grade_tag(k), piece(c, k).colim.obj);
    return coproduct(parts, base()).injections.at(detail::grade_tag(m));
  }

  /// Structural leg: diagram value at idx -> total value at c.
  BaseMorphism leg(const Corolla& c, const CompositionIndex& idx) const {
    const GradedPiece& p = piece(c, idx.m);
    return injection(c, idx.m).after(p.colim.leg(p.diagram, idx.encode()));
  }

  /// Relabeling action on the total value: value(c) -> value(sigma . c),
  /// induced on colimits by reindexing f -> f o sigma^{-1} together with the
  /// left factor's action on each fiber.
  BaseMorphism act(const Permutation& sigma, const Corolla& c) const {
    Corolla c2 = c.permuted(sigma);
    BaseObject src = value(c), dst = value(c2);
    std::vector<std::pair<std::size_t, BaseMorphism>> blocks;
    std::size_t off = 0;
    for (std::size_t m = 0; m <= grade_bound(c.arity()); ++m) {
      const GradedPiece& p = piece(c, m);
      auto cocone = [&](const std::string& oenc) {
        CompositionIndex idx = CompositionIndex::decode(oenc);
        CompositionIndex idx2 = idx.reindexed(sigma);
        std::vector<BaseMorphism> fac;
        for (std::size_t j = 0; j < m; ++j)
          fac.push_back(left_.act(detail::fiber_permutation(idx.fiber(j), sigma),
                                  fiber_corolla(c, idx, j)));
        fac.push_back(BaseMorphism::identity(right_.value(mids_corolla(c, idx))));
        return leg(c2, idx2).after(tensor_many_mor(fac, base()));
      };
      BaseMorphism bm = descend(p.gpd, p.diagram, p.colim, cocone, dst);
      blocks.emplace_back(off, bm);
      off += p.colim.obj.size();
    }
    return detail::assemble_blocks(src, dst, blocks);
  }

  /// Materialize the total as a plain collection up to the given arity.
  Collection materialize(std::size_t n_bound, bool with_action = true) const {
    Collection out(base(), colors());
    bool fully_exact = !left_.truncated_above() && !right_.truncated_above() &&
                       n_bound >= arity_cap();
    for (std::size_t n = 0; n <= n_bound; ++n) {
      if (!fully_exact || n <= arity_cap()) {
        FiniteGroupoid g = corolla_groupoid(colors(), colors(), n);
        for (const auto& enc : g.objects) {
          Corolla c = Corolla::decode(enc);
          BaseObject v = value(c);
          if (!v.is_initial()) out.set_value(c, v);
        }
        if (with_action)
          for (const auto& enc : g.objects) {
            Corolla c = Corolla::decode(enc);
            if (out.value(c).is_initial()) continue;
            for (std::size_t i = 0; i + 1 < n; ++i)
              out.set_gen_act(c, i, act(Permutation::adjacent_transposition(n, i), c));
          }
      }
    }
    bool exact_everywhere = fully_exact;
    for (std::size_t n = 0; n <= n_bound && exact_everywhere; ++n)
      if (!exact_at(n)) exact_everywhere = false;
    if (!exact_everywhere) out.set_truncated_above(n_bound);
    return out;
  }

private:
  std::size_t left_cap() const {
    return left_.truncated_above() ? *left_.truncated_above() : left_.max_arity();
  }
  std::size_t right_cap() const {
    return right_.truncated_above() ? *right_.truncated_above() : right_.max_arity();
  }

  GradedPiece build_piece(const Corolla& c, std::size_t m) const {
    GradedPiece p;
    p.m = m;
    p.gpd = composition_index_groupoid_grade(c.arity(), colors(), m, surjective_only_);
    Collection left = left_, right = right_;
    Corolla cor = c;
    Base b = base();
    p.diagram.base = b;
    p.diagram.value = [left, right, cor, b](const std::string& oenc) {
      CompositionIndex idx = CompositionIndex::decode(oenc);
      std::vector<BaseObject> factors;
      for (std::size_t j = 0; j < idx.m; ++j)
        factors.push_back(left.value(fiber_corolla(cor, idx, j)));
      factors.push_back(right.value(mids_corolla(cor, idx)));
      return tensor_many(factors, b);
    };
    p.diagram.map = [left, right, cor, b, m](const GroupElem& e, const std::string& oenc) {
      // Block relabeling sigma in Sigma_m: fibers keep their content, the
      // left factors are permuted, the right factor transports along sigma.
      const Permutation& sigma = e.parts[0];
      CompositionIndex idx = CompositionIndex::decode(oenc);
      std::vector<BaseMorphism> fac;
      for (std::size_t j = 0; j < m; ++j)
        fac.push_back(BaseMorphism::identity(left.value(fiber_corolla(cor, idx, j))));
      fac.push_back(right.act(sigma, mids_corolla(cor, idx)));
      BaseMorphism step = tensor_many_mor(fac, b);
      std::vector<std::size_t> img(m + 1);
      for (std::size_t j = 0; j < m; ++j) img[j] = sigma(j);
      img[m] = m;
      std::vector<BaseObject> mid_factors;
      for (const auto& f : fac) mid_factors.push_back(f.target());
      return factor_permutation(mid_factors, Permutation(img), b).after(step);
    };
    p.colim = groupoid_colimit(p.gpd, p.diagram);
    return p;
  }

  Collection left_, right_;
  std::optional<std::size_t> m_bound_;
  bool surjective_only_ = false;
  mutable std::mutex mu_;
  mutable std::map<std::string, std::unique_ptr<GradedPiece>> cache_;
};

/// The composition product as a plain collection.
inline Collection compose_collections(const Collection& left, const Collection& right,
                                      std::optional<std::size_t> m_bound, std::size_t n_bound,
                                      bool with_action = true) {
  return ComposedCollection(left, right, m_bound).materialize(n_bound, with_action);
}

/// The induced map of composition products.
inline BaseMorphism composed_map_component(const ComposedCollection& src,
                                           const ComposedCollection& dst,
                                           const CollectionMap& phi, const CollectionMap& psi,
                                           const Corolla& c) {
  BaseObject target = dst.value(c);
  std::vector<std::pair<std::size_t, BaseMorphism>> blocks;
  std::size_t off = 0;
  for (std::size_t m = 0; m <= src.grade_bound(c.arity()); ++m) {
    const GradedPiece& p = src.piece(c, m);
    auto cocone = [&](const std::string& oenc) {
      CompositionIndex idx = CompositionIndex::decode(oenc);
      std::vector<BaseMorphism> fac;
      for (std::size_t j = 0; j < m; ++j) fac.push_back(phi.component(fiber_corolla(c, idx, j)));
      fac.push_back(psi.component(mids_corolla(c, idx)));
      return dst.leg(c, idx).after(tensor_many_mor(fac, src.base()));
    };
    blocks.emplace_back(off, descend(p.gpd, p.diagram, p.colim, cocone, target));
    off += p.colim.obj.size();
  }
  return detail::assemble_blocks(src.value(c), target, blocks);
}

/// Functoriality of the composition product in both slots: from maps
/// phi : L -> L' and psi : R -> R', the map L (.) R -> L' (.) R'.
inline CollectionMap compose_maps(const CollectionMap& phi, const CollectionMap& psi,
                                  std::optional<std::size_t> m_bound, std::size_t n_bound) {
  bool surj = phi.src.is_reduced() && phi.dst.is_reduced();
  ComposedCollection src(phi.src, psi.src, m_bound, surj);
  ComposedCollection dst(phi.dst, psi.dst, m_bound, surj);
  CollectionMap out{src.materialize(n_bound), dst.materialize(n_bound), {}};
  for (const auto& c : out.src.support_corollas())
    out.set_component(c, composed_map_component(src, dst, phi, psi, c));
  return out;
}

// ---------------------------------------------------------------------------
// Unit coherence
// ---------------------------------------------------------------------------

/// The left unit isomorphism 1 (.) Phi -> Phi.  Only bijective block
/// assignments carry a nonzero value; stripping the unit factors and
/// transporting along the inverse relabeling gives the cocone.
inline CollectionMap left_unit_iso(const Collection& phi, std::size_t n_bound) {
  Collection unit = unit_collection(phi.colors(), phi.base());
  ComposedCollection cc(unit, phi, std::nullopt);
  CollectionMap out{cc.materialize(n_bound), phi, {}};
  for (std::size_t n = 0; n <= n_bound; ++n) {
    FiniteGroupoid g = corolla_groupoid(phi.colors(), phi.colors(), n);
    for (const auto& enc : g.objects) {
      Corolla c = Corolla::decode(enc);
      BaseObject src = cc.value(c);
      if (src.is_initial() && phi.value(c).is_initial()) continue;
      std::vector<std::pair<std::size_t, BaseMorphism>> blocks;
      std::size_t off = 0;
      for (std::size_t m = 0; m <= cc.grade_bound(n); ++m) {
        const GradedPiece& p = cc.piece(c, m);
        auto cocone = [&](const std::string& oenc) {
          CompositionIndex idx = CompositionIndex::decode(oenc);
          BaseObject dv = p.diagram.value(oenc);
          if (dv.is_initial()) return BaseMorphism::from_initial(phi.value(c));
          // Nonzero only when f is a bijection and mids = f . inputs.
          Permutation sigma(idx.f);
          Corolla mc = mids_corolla(c, idx);
          BaseMorphism strip = positional_iso(dv, phi.value(mc));
          return phi.act(sigma.inverse(), mc).after(strip);
        };
        blocks.emplace_back(off, descend(p.gpd, p.diagram, p.colim, cocone, phi.value(c)));
        off += p.colim.obj.size();
      }
      BaseMorphism comp = detail::assemble_blocks(src, phi.value(c), blocks);
      if (!comp.is_invertible())
        throw NotInvertibleError("left unit comparison not invertible at " + c.encode());
      out.set_component(c, comp);
    }
  }
  return out;
}

/// The right unit isomorphism Phi (.) 1 -> Phi.  Everything sits in grade 1
/// with the unique block assignment; the unit factor is stripped.
inline CollectionMap right_unit_iso(const Collection& phi, std::size_t n_bound) {
  Collection unit = unit_collection(phi.colors(), phi.base());
  ComposedCollection cc(phi, unit, 1, phi.is_reduced());
  CollectionMap out{cc.materialize(n_bound), phi, {}};
  for (std::size_t n = 0; n <= n_bound; ++n) {
    FiniteGroupoid g = corolla_groupoid(phi.colors(), phi.colors(), n);
    for (const auto& enc : g.objects) {
      Corolla c = Corolla::decode(enc);
      BaseObject src = cc.value(c);
      if (src.is_initial() && phi.value(c).is_initial()) continue;
      std::vector<std::pair<std::size_t, BaseMorphism>> blocks;
      std::size_t off = 0;
      for (std::size_t m = 0; m <= cc.grade_bound(n); ++m) {
        const GradedPiece& p = cc.piece(c, m);
        auto cocone = [&](const std::string& oenc) {
          BaseObject dv = p.diagram.value(oenc);
          if (dv.is_initial()) return BaseMorphism::from_initial(phi.value(c));
          // Nonzero only at m = 1, mids = (output), one total fiber.
          return positional_iso(dv, phi.value(c));
        };
        blocks.emplace_back(off, descend(p.gpd, p.diagram, p.colim, cocone, phi.value(c)));
        off += p.colim.obj.size();
      }
      BaseMorphism comp = detail::assemble_blocks(src, phi.value(c), blocks);
      if (!comp.is_invertible())
        throw NotInvertibleError("right unit comparison not invertible at " + c.encode());
      out.set_component(c, comp);
    }
  }
  return out;
}

} // namespace opcal
