#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opcal/base.hpp"
#include "opcal/collection.hpp"
#include "opcal/compose.hpp"
#include "opcal/corolla.hpp"
#include "opcal/errors.hpp"
#include "opcal/groupoid.hpp"

namespace opcal {

namespace detail {

/// A tensor factor presented with a surjective cover by disjoint pieces:
/// cover is the coproduct of the part values, and each part maps into the
/// factor itself.  A plain factor is covered by itself.
struct CoverPart {
  std::string tag;
  BaseObject value;
  std::size_t offset = 0;
  BaseMorphism into_total;
};

struct CoverFactor {
  BaseObject total;
  BaseObject cover;
  std::vector<CoverPart> parts;
  std::vector<std::size_t> part_of; // cover element/basis index -> part index

  static CoverFactor plain(const BaseObject& o) {
    CoverFactor f;
    f.total = o;
    f.cover = o;
    f.parts.push_back(CoverPart{"", o, 0, BaseMorphism::identity(o)});
    f.part_of.assign(o.size(), 0);
    return f;
  }
};

/// Cover of a composed collection's total value at a corolla by the diagram
/// values at the component representatives of every grade.
inline CoverFactor cover_factor(const ComposedCollection& cc, const Corolla& c) {
  CoverFactor f;
  f.total = cc.value(c);
  std::vector<std::pair<std::string, BaseObject>> parts;
  for (std::size_t m = 0; m <= cc.grade_bound(c.arity()); ++m) {
    const GradedPiece& p = cc.piece(c, m);
    for (const auto& comp : p.colim.components) {
      BaseObject v = p.diagram.value(comp.rep);
      BaseMorphism into = cc.injection(c, m).after(p.colim.injection(comp)).after(comp.proj);
      parts.emplace_back(comp.rep, v);
      f.parts.push_back(CoverPart{comp.rep, v, 0, into});
    }
  }
  Coproduct cp = coproduct(parts, cc.base());
  f.cover = cp.obj;
  std::size_t off = 0, pi = 0;
  for (auto& part : f.parts) {
    part.offset = off;
    off += part.value.size();
    for (std::size_t i = 0; i < part.value.size(); ++i) f.part_of.push_back(pi);
    ++pi;
  }
  return f;
}

inline BaseMorphism cover_surjection(const CoverFactor& f, Base base) {
  std::vector<std::pair<std::size_t, BaseMorphism>> blocks;
  for (const auto& part : f.parts) blocks.emplace_back(part.offset, part.into_total);
  (void)base;
  return assemble_blocks(f.cover, f.total, blocks);
}

/// Morphism out of a tensor of covers, assembled per block: for each choice
/// of one part per factor, block() supplies the morphism out of the tensor
/// of the chosen part values into the common target.
inline BaseMorphism covered_tensor_mor(
    const std::vector<CoverFactor>& factors, Base base, const BaseObject& target,
    const std::function<BaseMorphism(const std::vector<const CoverPart*>&)>& block) {
  std::vector<BaseObject> covers;
  for (const auto& f : factors) covers.push_back(f.cover);
  BaseObject src = tensor_many(covers, base);
  std::map<std::string, BaseMorphism> cache;
  auto block_for = [&](const std::vector<std::size_t>& idx, std::vector<std::size_t>& local)
      -> const BaseMorphism& {
    std::vector<const CoverPart*> chosen(factors.size());
    std::string key;
    local.resize(factors.size());
    for (std::size_t k = 0; k < factors.size(); ++k) {
      const CoverFactor& f = factors[k];
      const CoverPart& part = f.parts[f.part_of[idx[k]]];
      chosen[k] = &part;
      local[k] = idx[k] - part.offset;
      key += part.tag;
      key += '\x1f';
    }
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, block(chosen)).first;
    return it->second;
  };
  auto local_index = [&](const std::vector<const CoverPart*>& chosen,
                         const std::vector<std::size_t>& local) {
    std::size_t li = 0;
    for (std::size_t k = 0; k < chosen.size(); ++k)
      li = li * chosen[k]->value.size() + local[k];
    return li;
  };
  if (base == Base::FINSET) {
    std::vector<std::size_t> fn(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
      auto idx = tensor_unindex(covers, i);
      std::vector<std::size_t> local;
      const BaseMorphism& b = block_for(idx, local);
      std::vector<const CoverPart*> chosen(factors.size());
      for (std::size_t k = 0; k < factors.size(); ++k)
        chosen[k] = &factors[k].parts[factors[k].part_of[idx[k]]];
      fn[i] = b.apply(local_index(chosen, local));
    }
    return BaseMorphism::finset(src, target, std::move(fn));
  }
  Matrix mat(target.size(), src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto idx = tensor_unindex(covers, i);
    std::vector<std::size_t> local;
    const BaseMorphism& b = block_for(idx, local);
    std::vector<const CoverPart*> chosen(factors.size());
    for (std::size_t k = 0; k < factors.size(); ++k)
      chosen[k] = &factors[k].parts[factors[k].part_of[idx[k]]];
    std::size_t li = local_index(chosen, local);
    for (std::size_t r = 0; r < target.size(); ++r) mat(r, i) = b.matrix()(r, li);
  }
  return BaseMorphism::vectq(src, target, std::move(mat));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Two-level normal form
// ---------------------------------------------------------------------------

/// A two-stage splitting of an arity-n corolla: inputs to inner blocks (p),
/// middle colors y, inner blocks to outer blocks (q), outer colors w.
struct TwoLevelIndex {
  std::vector<std::size_t> p;
  std::vector<std::string> y;
  std::vector<std::size_t> q;
  std::vector<std::string> w;

  std::size_t m1() const { return y.size(); }
  std::size_t m2() const { return w.size(); }

  std::string encode() const {
    std::ostringstream os;
    os << "p=";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
    os << "|y=" << detail::join(y, ',') << "|q=";
    for (std::size_t i = 0; i < q.size(); ++i) os << (i ? "," : "") << q[i];
    os << "|w=" << detail::join(w, ',');
    return os.str();
  }

  static TwoLevelIndex decode(const std::string& s) {
    auto parts = detail::split(s, '|');
    if (parts.size() != 4) throw ParseError("bad two-level index '" + s + "'");
    TwoLevelIndex t;
    auto nums = [](const std::string& body) {
      std::vector<std::size_t> out;
      if (!body.empty())
        for (const auto& x : detail::split(body, ',')) out.push_back(std::stoul(x));
      return out;
    };
    t.p = nums(parts[0].substr(2));
    if (parts[1].size() > 2) t.y = detail::split(parts[1].substr(2), ',');
    t.q = nums(parts[2].substr(2));
    if (parts[3].size() > 2) t.w = detail::split(parts[3].substr(2), ',');
    return t;
  }

  std::vector<std::size_t> p_fiber(std::size_t j) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] == j) out.push_back(i);
    return out;
  }

  std::vector<std::size_t> q_fiber(std::size_t k) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < q.size(); ++j)
      if (q[j] == k) out.push_back(j);
    return out;
  }

  TwoLevelIndex permuted(const Permutation& s1, const Permutation& s2) const {
    TwoLevelIndex t;
    t.p.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) t.p[i] = s1(p[i]);
    t.y = s1.apply(y);
    t.q.resize(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) t.q[s1(j)] = s2(q[j]);
    t.w = s2.apply(w);
    return t;
  }
};

/// The colimits of the three-factor diagram over two-level indices, one per
/// (m1, m2), together with the legs into their coproduct.  This is the
/// common normal form both bracketings map to.
class TwoLevelNormal {
public:
  TwoLevelNormal(Collection phi, Collection psi, Collection xi, const Corolla& c)
      : phi_(std::move(phi)), psi_(std::move(psi)), xi_(std::move(xi)), c_(c) {
    const std::size_t n = c.arity();
    const auto& colors = phi_.colors();
    for (std::size_t m1 = 0; m1 <= n; ++m1)
      for (std::size_t m2 = 0; m2 <= m1; ++m2) build_piece(m1, m2, colors);
    std::vector<std::pair<std::string, BaseObject>> parts;
    for (const auto& [key, piece] : pieces_) parts.emplace_back(key, piece.colim.obj);
    Coproduct cp = coproduct(parts, phi_.base());
    total_ = cp.obj;
    std::size_t off = 0;
    for (auto& [key, piece] : pieces_) {
      offsets_[key] = off;
      off += piece.colim.obj.size();
    }
  }

  const BaseObject& total() const { return total_; }

  BaseObject diagram_value(const TwoLevelIndex& t) const {
    return tensor_many(factors(t), phi_.base());
  }

  /// The leg at a two-level index into the total object.
  BaseMorphism leg(const TwoLevelIndex& t) const {
    std::string key = piece_key(t.m1(), t.m2());
    const GradedPiece& p = pieces_.at(key);
    BaseMorphism into_colim = p.colim.leg(p.diagram, t.encode());
    std::size_t off = offsets_.at(key);
    if (phi_.base() == Base::FINSET) {
      std::vector<std::size_t> fn(into_colim.source().size());
      for (std::size_t i = 0; i < fn.size(); ++i) fn[i] = off + into_colim.apply(i);
      return BaseMorphism::finset(into_colim.source(), total_, std::move(fn));
    }
    Matrix mat(total_.size(), into_colim.source().size());
    for (std::size_t i = 0; i < into_colim.source().size(); ++i)
      for (std::size_t r = 0; r < into_colim.target().size(); ++r)
        mat(off + r, i) = into_colim.matrix()(r, i);
    return BaseMorphism::vectq(into_colim.source(), total_, std::move(mat));
  }

  /// Factor list: inner values blockwise, then middle values, then the
  /// outer value.
  std::vector<BaseObject> factors(const TwoLevelIndex& t) const {
    std::vector<BaseObject> out;
    for (std::size_t j = 0; j < t.m1(); ++j) {
      std::vector<std::string> in;
      for (std::size_t i : t.p_fiber(j)) in.push_back(c_.inputs[i]);
      out.push_back(phi_.value(Corolla(in, t.y[j])));
    }
    for (std::size_t k = 0; k < t.m2(); ++k) {
      std::vector<std::string> in;
      for (std::size_t j : t.q_fiber(k)) in.push_back(t.y[j]);
      out.push_back(psi_.value(Corolla(in, t.w[k])));
    }
    out.push_back(xi_.value(Corolla(t.w, c_.output)));
    return out;
  }

private:
  static std::string piece_key(std::size_t m1, std::size_t m2) {
    return "m1=" + std::to_string(m1) + "|m2=" + std::to_string(m2);
  }

  void build_piece(std::size_t m1, std::size_t m2, const std::vector<std::string>& colors) {
    const std::size_t n = c_.arity();
    // Objects: surjective p and q with arbitrary middle and outer colors.
    std::vector<std::vector<std::size_t>> ps = surjections(n, m1);
    std::vector<std::vector<std::size_t>> qs = surjections(m1, m2);
    std::vector<std::vector<std::string>> ys = words(colors, m1);
    std::vector<std::vector<std::string>> ws = words(colors, m2);
    std::vector<std::string> objects;
    for (const auto& p : ps)
      for (const auto& y : ys)
        for (const auto& q : qs)
          for (const auto& w : ws) objects.push_back(TwoLevelIndex{p, y, q, w}.encode());
    std::sort(objects.begin(), objects.end());
    GradedPiece piece;
    piece.m = m1;
    piece.gpd = FiniteGroupoid{SymProduct({m1, m2}), std::move(objects),
                               [](const GroupElem& e, const std::string& o) {
                                 return TwoLevelIndex::decode(o)
                                     .permuted(e.parts[0], e.parts[1])
                                     .encode();
                               }};
    TwoLevelNormal* self = this;
    piece.diagram.base = phi_.base();
    piece.diagram.value = [self](const std::string& oenc) {
      return self->diagram_value(TwoLevelIndex::decode(oenc));
    };
    piece.diagram.map = [self, m1, m2](const GroupElem& e, const std::string& oenc) {
      const Permutation& s1 = e.parts[0];
      const Permutation& s2 = e.parts[1];
      TwoLevelIndex t = TwoLevelIndex::decode(oenc);
      std::vector<BaseMorphism> fac;
      auto fs = self->factors(t);
      for (std::size_t j = 0; j < m1; ++j) fac.push_back(BaseMorphism::identity(fs[j]));
      for (std::size_t k = 0; k < m2; ++k) {
        std::vector<std::string> in;
        for (std::size_t j : t.q_fiber(k)) in.push_back(t.y[j]);
        fac.push_back(self->psi_.act(detail::fiber_permutation(t.q_fiber(k), s1),
                                     Corolla(in, t.w[k])));
      }
      fac.push_back(self->xi_.act(s2, Corolla(t.w, self->c_.output)));
      BaseMorphism step = tensor_many_mor(fac, self->phi_.base());
      std::vector<std::size_t> img(m1 + m2 + 1);
      for (std::size_t j = 0; j < m1; ++j) img[j] = s1(j);
      for (std::size_t k = 0; k < m2; ++k) img[m1 + k] = m1 + s2(k);
      img[m1 + m2] = m1 + m2;
      std::vector<BaseObject> mids;
      for (const auto& f : fac) mids.push_back(f.target());
      return factor_permutation(mids, Permutation(img), self->phi_.base()).after(step);
    };
    piece.colim = groupoid_colimit(piece.gpd, piece.diagram);
    pieces_.emplace(piece_key(m1, m2), std::move(piece));
  }

  static std::vector<std::vector<std::size_t>> surjections(std::size_t n, std::size_t m) {
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
    if (m > 0 && n == 0) return {};
    if (m == 0) return n == 0 ? fns : std::vector<std::vector<std::size_t>>{};
    std::vector<std::vector<std::size_t>> out;
    for (auto& f : fns) {
      std::vector<bool> hit(m, false);
      for (std::size_t j : f) hit[j] = true;
      if (std::find(hit.begin(), hit.end(), false) == hit.end()) out.push_back(std::move(f));
    }
    return out;
  }

  static std::vector<std::vector<std::string>> words(const std::vector<std::string>& colors,
                                                     std::size_t m) {
    std::vector<std::vector<std::string>> out{{}};
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<std::vector<std::string>> next;
      for (const auto& t : out)
        for (const auto& x : colors) {
          auto t2 = t;
          t2.push_back(x);
          next.push_back(std::move(t2));
        }
      out = std::move(next);
    }
    return out;
  }

  Collection phi_, psi_, xi_;
  Corolla c_;
  std::map<std::string, GradedPiece> pieces_;
  std::map<std::string, std::size_t> offsets_;
  BaseObject total_;
};

// ---------------------------------------------------------------------------
// Associativity
// ---------------------------------------------------------------------------

/// The associativity isomorphism (Phi . Psi) . Xi -> Phi . (Psi . Xi), built
/// by mapping both bracketings into the two-level normal form and inverting
/// one comparison.  Requires Phi and Psi reduced so that every grade is
/// complete; otherwise the bracketings disagree by truncation and the
/// comparison is refused.
inline CollectionMap associativity_iso(const Collection& phi, const Collection& psi,
                                       const Collection& xi, std::size_t n_bound) {
  if (!phi.is_reduced() || !psi.is_reduced())
    throw InexactBracketingError(
        "associativity comparison requires reduced inner and middle factors");

  ComposedCollection inner_l(phi, psi, std::nullopt);
  Collection inner_l_total = inner_l.materialize(n_bound);
  ComposedCollection outer_l(inner_l_total, xi, std::nullopt);

  ComposedCollection inner_r(psi, xi, std::nullopt);
  Collection inner_r_total = inner_r.materialize(n_bound);
  ComposedCollection outer_r(phi, inner_r_total, std::nullopt);

  CollectionMap out{outer_l.materialize(n_bound), outer_r.materialize(n_bound), {}};
  Base base = phi.base();

  for (std::size_t n = 0; n <= n_bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(phi.colors(), phi.colors(), n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      BaseObject lv = outer_l.value(c), rv = outer_r.value(c);
      if (lv.is_initial() && rv.is_initial()) continue;
      TwoLevelNormal normal(phi, psi, xi, c);

      // Left bracketing into the normal form.
      std::vector<std::pair<std::size_t, BaseMorphism>> lblocks;
      std::size_t loff = 0;
      for (std::size_t m2 = 0; m2 <= outer_l.grade_bound(n); ++m2) {
        const GradedPiece& p = outer_l.piece(c, m2);
        auto cocone = [&](const std::string& oenc) {
          CompositionIndex idx = CompositionIndex::decode(oenc);
          std::vector<detail::CoverFactor> covers;
          std::vector<Corolla> inner_cors;
          std::vector<std::vector<std::size_t>> outer_fibers;
          for (std::size_t k = 0; k < idx.m; ++k) {
            Corolla ic = fiber_corolla(c, idx, k);
            inner_cors.push_back(ic);
            outer_fibers.push_back(idx.fiber(k));
            covers.push_back(detail::cover_factor(inner_l, ic));
          }
          covers.push_back(detail::CoverFactor::plain(xi.value(mids_corolla(c, idx))));
          std::vector<BaseMorphism> surjs;
          for (const auto& cf : covers) surjs.push_back(detail::cover_surjection(cf, base));
          BaseMorphism s = tensor_many_mor(surjs, base);
          auto block = [&](const std::vector<const detail::CoverPart*>& chosen) {
            // Assemble the two-level index from the chosen inner splittings.
            TwoLevelIndex t;
            t.p.assign(n, 0);
            t.w = idx.mids;
            std::vector<std::size_t> block_off(idx.m, 0);
            std::size_t m1 = 0;
            std::vector<CompositionIndex> inner_idx(idx.m);
            for (std::size_t k = 0; k < idx.m; ++k) {
              inner_idx[k] = CompositionIndex::decode(chosen[k]->tag);
              block_off[k] = m1;
              m1 += inner_idx[k].m;
              for (const auto& yc : inner_idx[k].mids) t.y.push_back(yc);
            }
            t.q.resize(m1);
            for (std::size_t k = 0; k < idx.m; ++k) {
              for (std::size_t j = 0; j < inner_idx[k].m; ++j) t.q[block_off[k] + j] = k;
              const auto& fib = outer_fibers[k];
              for (std::size_t r = 0; r < fib.size(); ++r)
                t.p[fib[r]] = block_off[k] + inner_idx[k].f[r];
            }
            // Interleaved factor order -> grouped order.
            std::vector<BaseObject> flat;
            std::vector<std::size_t> img(m1 + idx.m + 1);
            std::size_t pos = 0;
            for (std::size_t k = 0; k < idx.m; ++k) {
              for (std::size_t j = 0; j < inner_idx[k].m; ++j) {
                flat.push_back(phi.value(fiber_corolla(inner_cors[k], inner_idx[k], j)));
                img[pos++] = block_off[k] + j;
              }
              flat.push_back(psi.value(mids_corolla(inner_cors[k], inner_idx[k])));
              img[pos++] = m1 + k;
            }
            flat.push_back(xi.value(Corolla(t.w, c.output)));
            img[pos] = m1 + idx.m;
            std::vector<BaseObject> srcs;
            for (const auto& ch : chosen) srcs.push_back(ch->value);
            BaseMorphism unpack = positional_iso(tensor_many(srcs, base),
                                                 tensor_many(flat, base));
            BaseMorphism perm = factor_permutation(flat, Permutation(img), base);
            return normal.leg(t).after(perm).after(unpack);
          };
          BaseMorphism t_mor = detail::covered_tensor_mor(covers, base, normal.total(), block);
          return factor_through_surjection(s, t_mor);
        };
        lblocks.emplace_back(loff, descend(p.gpd, p.diagram, p.colim, cocone, normal.total()));
        loff += p.colim.obj.size();
      }
      BaseMorphism L = detail::assemble_blocks(lv, normal.total(), lblocks);

      // Right bracketing into the normal form.
      std::vector<std::pair<std::size_t, BaseMorphism>> rblocks;
      std::size_t roff = 0;
      for (std::size_t m1 = 0; m1 <= outer_r.grade_bound(n); ++m1) {
        const GradedPiece& p = outer_r.piece(c, m1);
        auto cocone = [&](const std::string& oenc) {
          CompositionIndex idx = CompositionIndex::decode(oenc);
          std::vector<detail::CoverFactor> covers;
          std::vector<BaseObject> phi_vals;
          for (std::size_t j = 0; j < idx.m; ++j) {
            phi_vals.push_back(phi.value(fiber_corolla(c, idx, j)));
            covers.push_back(detail::CoverFactor::plain(phi_vals.back()));
          }
          Corolla mc = mids_corolla(c, idx);
          covers.push_back(detail::cover_factor(inner_r, mc));
          std::vector<BaseMorphism> surjs;
          for (const auto& cf : covers) surjs.push_back(detail::cover_surjection(cf, base));
          BaseMorphism s = tensor_many_mor(surjs, base);
          auto block = [&](const std::vector<const detail::CoverPart*>& chosen) {
            CompositionIndex inner = CompositionIndex::decode(chosen.back()->tag);
            TwoLevelIndex t{idx.f, idx.mids, inner.f, inner.mids};
            std::vector<BaseObject> flat = phi_vals;
            for (std::size_t k = 0; k < inner.m; ++k)
              flat.push_back(psi.value(fiber_corolla(mc, inner, k)));
            flat.push_back(xi.value(mids_corolla(mc, inner)));
            std::vector<BaseObject> srcs;
            for (const auto& ch : chosen) srcs.push_back(ch->value);
            BaseMorphism unpack = positional_iso(tensor_many(srcs, base),
                                                 tensor_many(flat, base));
            return normal.leg(t).after(unpack);
          };
          BaseMorphism t_mor = detail::covered_tensor_mor(covers, base, normal.total(), block);
          return factor_through_surjection(s, t_mor);
        };
        rblocks.emplace_back(roff, descend(p.gpd, p.diagram, p.colim, cocone, normal.total()));
        roff += p.colim.obj.size();
      }
      BaseMorphism R = detail::assemble_blocks(rv, normal.total(), rblocks);

      if (!L.is_invertible())
        throw NotInvertibleError("left bracketing comparison not invertible at " + c.encode());
      if (!R.is_invertible())
        throw NotInvertibleError("right bracketing comparison not invertible at " + c.encode());
      out.set_component(c, R.inverse().after(L));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Base change comparisons
// ---------------------------------------------------------------------------

struct ComparisonReport {
  CollectionMap map;
  bool invertible = true;
  std::vector<std::string> failures; // corollas where the comparison fails
};

/// Comparison f*(Phi) (.) f*(Psi) -> f*(Phi (.) Psi) along a color map.
/// Restriction reindexes the diagrams without touching values, so the
/// cocone is just the leg of the target at the relabeled index.  Invertible
/// whenever f is injective.
inline ComparisonReport lax_pullback_comparison(const ColorMap& f, const Collection& phi,
                                                const Collection& psi,
                                                std::optional<std::size_t> m_bound,
                                                std::size_t n_bound) {
  Collection phix = pullback_collection(f, phi);
  Collection psix = pullback_collection(f, psi);
  ComposedCollection src(phix, psix, m_bound);
  ComposedCollection dst(phi, psi, m_bound, src.surjective_only());
  ComparisonReport report;
  Collection dst_total = dst.materialize(n_bound);
  report.map = CollectionMap{src.materialize(n_bound), pullback_collection(f, dst_total), {}};
  for (std::size_t n = 0; n <= n_bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(f.src, f.src, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      Corolla fc = f.apply(c);
      BaseObject sv = src.value(c), dv = dst.value(fc);
      if (sv.is_initial() && dv.is_initial()) continue;
      std::vector<std::pair<std::size_t, BaseMorphism>> blocks;
      std::size_t off = 0;
      for (std::size_t m = 0; m <= src.grade_bound(n); ++m) {
        const GradedPiece& p = src.piece(c, m);
        auto cocone = [&](const std::string& oenc) {
          CompositionIndex idx = CompositionIndex::decode(oenc);
          CompositionIndex idy = idx;
          for (std::size_t j = 0; j < idx.m; ++j) idy.mids[j] = f.at(idx.mids[j]);
          return dst.leg(fc, idy);
        };
        blocks.emplace_back(off, descend(p.gpd, p.diagram, p.colim, cocone, dv));
        off += p.colim.obj.size();
      }
      BaseMorphism comp = detail::assemble_blocks(sv, dv, blocks);
      if (!comp.is_invertible()) {
        report.invertible = false;
        report.failures.push_back(c.encode());
      }
      // Retarget into the pulled-back total (same labels as dv by sharing).
      report.map.set_component(c, comp);
    }
  }
  return report;
}

/// Preimage corollas of a Y-corolla under a color map, in the order used by
/// pushforward_general.
inline std::vector<Corolla> preimage_corollas(const ColorMap& f, const Collection& phi,
                                              const Corolla& d) {
  std::vector<Corolla> out;
  for (const auto& c : phi.support_corollas())
    if (f.apply(c) == d) out.push_back(c);
  return out;
}

/// Injection of a preimage summand into the pushforward value.
inline BaseMorphism pushforward_injection(const ColorMap& f, const Collection& phi,
                                          const Collection& pushed, const Corolla& c_pre) {
  Corolla d = f.apply(c_pre);
  if (phi.value(c_pre).is_initial()) return BaseMorphism::from_initial(pushed.value(d));
  std::vector<std::pair<std::string, BaseObject>> parts;
  for (const auto& c : preimage_corollas(f, phi, d)) parts.emplace_back(c.encode(), phi.value(c));
  Coproduct cp = coproduct(parts, phi.base());
  if (!(cp.obj == pushed.value(d)))
    throw ValidationError("pushforward injection: value mismatch at " + d.encode());
  return cp.injections.at(c_pre.encode());
}

/// Comparison f_!(Phi (.) Psi) -> f_!(Phi) (.) f_!(Psi).  Lax only: the
/// right side also mixes middle colors across different preimages, so the
/// comparison need not be invertible for non-injective f.
inline ComparisonReport pushforward_monoidal_comparison(const ColorMap& f, const Collection& phi,
                                                        const Collection& psi,
                                                        std::optional<std::size_t> m_bound,
                                                        std::size_t n_bound) {
  ComposedCollection inner(phi, psi, m_bound);
  Collection inner_total = inner.materialize(n_bound);
  Collection lhs = pushforward_general(f, inner_total);
  Collection phy = pushforward_general(f, phi);
  Collection psy = pushforward_general(f, psi);
  ComposedCollection rhs(phy, psy, m_bound, inner.surjective_only());
  ComparisonReport report;
  report.map = CollectionMap{lhs, rhs.materialize(n_bound), {}};
  Base base = phi.base();
  for (std::size_t n = 0; n <= n_bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(f.dst, f.dst, n);
    for (const auto& enc : cg.objects) {
      Corolla d = Corolla::decode(enc);
      BaseObject lv = lhs.value(d);
      BaseObject rv = rhs.value(d);
      if (lv.is_initial() && rv.is_initial()) continue;
      std::vector<std::pair<std::size_t, BaseMorphism>> outer_blocks;
      std::size_t outer_off = 0;
      for (const auto& c : preimage_corollas(f, inner_total, d)) {
        std::vector<std::pair<std::size_t, BaseMorphism>> blocks;
        std::size_t off = 0;
        for (std::size_t m = 0; m <= inner.grade_bound(n); ++m) {
          const GradedPiece& p = inner.piece(c, m);
          auto cocone = [&](const std::string& oenc) {
            CompositionIndex idx = CompositionIndex::decode(oenc);
            CompositionIndex idy = idx;
            for (std::size_t j = 0; j < idx.m; ++j) idy.mids[j] = f.at(idx.mids[j]);
            std::vector<BaseMorphism> fac;
            for (std::size_t j = 0; j < idx.m; ++j)
              fac.push_back(pushforward_injection(f, phi, phy, fiber_corolla(c, idx, j)));
            fac.push_back(pushforward_injection(f, psi, psy, mids_corolla(c, idx)));
            return rhs.leg(d, idy).after(tensor_many_mor(fac, base));
          };
          blocks.emplace_back(off, descend(p.gpd, p.diagram, p.colim, cocone, rv));
          off += p.colim.obj.size();
        }
        outer_blocks.emplace_back(outer_off,
                                  detail::assemble_blocks(inner_total.value(c), rv, blocks));
        outer_off += inner_total.value(c).size();
      }
      BaseMorphism comp = detail::assemble_blocks(lv, rv, outer_blocks);
      if (!comp.is_invertible()) {
        report.invertible = false;
        report.failures.push_back(d.encode());
      }
      report.map.set_component(d, comp);
    }
  }
  return report;
}

} // namespace opcal
