#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "opcal/algebra.hpp"
#include "opcal/base.hpp"
#include "opcal/collection.hpp"
#include "opcal/corolla.hpp"
#include "opcal/errors.hpp"
#include "opcal/operad.hpp"

namespace opcal {

namespace detail {

/// Positions in corolla order regrouped fiber by fiber: the permutation
/// sending input position i to its slot inside the concatenated fibers.
inline std::vector<std::size_t> fiber_slots(const CompositionIndex& idx, std::size_t n) {
  std::vector<std::size_t> slot(n);
  std::size_t pos = 0;
  for (std::size_t j = 0; j < idx.m; ++j)
    for (std::size_t i : idx.fiber(j)) slot[i] = pos++;
  return slot;
}

} // namespace detail

/// The operad of all maps (x)M(x_i) -> M(y): values are internal homs, the
/// relabeling action precomposes with the factor permutation, substitution
/// composes maps blockwise.
inline Operad endomorphism_operad(const ColorFamily& m, std::size_t arity_bound,
                                  std::size_t entry_limit = SIZE_MAX) {
  Operad o;
  Base base = m.base;
  o.carrier = Collection(base, m.colors);
  o.index_bound = arity_bound;

  auto input_factors = [&](const Corolla& c) {
    std::vector<BaseObject> fac;
    for (const auto& x : c.inputs) fac.push_back(m.at(x));
    return fac;
  };
  auto hom_at = [&](const Corolla& c) {
    return internal_hom(tensor_many(input_factors(c), base), m.at(c.output));
  };

  for (std::size_t n = 0; n <= arity_bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(m.colors, m.colors, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      o.carrier.set_value(c, hom_at(c));
    }
  }
  o.carrier.set_truncated_above(arity_bound);

  // Relabeling by precomposition with the inverse factor permutation.
  for (std::size_t n = 2; n <= arity_bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(m.colors, m.colors, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      const BaseObject& src = o.carrier.value(c);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        Permutation si = Permutation::adjacent_transposition(n, i);
        Corolla ci = c.permuted(si);
        const BaseObject& dst = o.carrier.value(ci);
        std::vector<BaseObject> fac = input_factors(c);
        BaseObject a = tensor_many(fac, base);
        BaseObject a2 = tensor_many(input_factors(ci), base);
        const BaseObject& tgt = m.at(c.output);
        if (base == Base::FINSET) {
          BaseMorphism pinv = factor_permutation(fac, si, base).inverse(); // a2 -> a
          std::vector<std::size_t> fn(src.size());
          for (std::size_t h = 0; h < src.size(); ++h) {
            auto table = hom_table_from_index(a, tgt, h);
            std::vector<std::size_t> table2(a2.size());
            for (std::size_t u = 0; u < a2.size(); ++u) table2[u] = table[pinv.apply(u)];
            fn[h] = hom_index_from_table(a2, tgt, table2);
          }
          o.carrier.set_gen_act(c, i, BaseMorphism::finset(src, dst, std::move(fn)));
        } else {
          Matrix mat(dst.size(), src.size());
          std::vector<BaseObject> pfac = si.apply(fac);
          for (std::size_t ai = 0; ai < a.size(); ++ai) {
            auto coords = tensor_unindex(fac, ai);
            std::vector<std::size_t> pc(coords.size());
            for (std::size_t k = 0; k < coords.size(); ++k) pc[si(k)] = coords[k];
            std::size_t ai2 = tensor_index(pfac, pc);
            for (std::size_t cj = 0; cj < tgt.size(); ++cj)
              mat(ai2 * tgt.size() + cj, ai * tgt.size() + cj) = Rational(1);
          }
          o.carrier.set_gen_act(c, i, BaseMorphism::vectq(src, dst, std::move(mat)));
        }
      }
    }
  }

  // Identity operations.
  for (const auto& x : m.colors) {
    Corolla cx({x}, x);
    const BaseObject& hom = o.carrier.value(cx);
    BaseObject a = tensor_many({m.at(x)}, base);
    BaseObject u = BaseObject::unit(base);
    if (base == Base::FINSET) {
      std::vector<std::size_t> table(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) table[i] = i;
      o.set_unit(x, BaseMorphism::finset(u, hom,
                                         {hom_index_from_table(a, m.at(x), table)}));
    } else {
      Matrix mat(hom.size(), 1);
      for (std::size_t i = 0; i < a.size(); ++i) mat(i * m.at(x).size() + i, 0) = Rational(1);
      o.set_unit(x, BaseMorphism::vectq(u, hom, std::move(mat)));
    }
  }

  // Substitution: plug the block outputs into the outer map.
  for (std::size_t n = 0; n <= arity_bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(m.colors, m.colors, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      const BaseObject& tgt_hom = o.carrier.value(c);
      std::vector<BaseObject> all_in = input_factors(c);
      BaseObject a_all = tensor_many(all_in, base);
      const BaseObject& tgt = m.at(c.output);
      for (std::size_t k = 0; k <= arity_bound; ++k) {
        FiniteGroupoid ig = composition_index_groupoid_grade(n, m.colors, k, false);
        for (const auto& ienc : ig.objects) {
          CompositionIndex idx = CompositionIndex::decode(ienc);
          std::vector<BaseObject> factors = o.gamma_domain_factors(c, idx);
          BaseObject dom = tensor_many(factors, base);
          // Oversized entries stay undefined; the operad is then partial.
          if (dom.size() > entry_limit) continue;

          std::vector<std::vector<BaseObject>> block_in(idx.m);
          std::vector<BaseObject> block_a(idx.m, BaseObject::unit(base));
          std::vector<BaseObject> mids_m;
          for (std::size_t j = 0; j < idx.m; ++j) {
            for (std::size_t i : idx.fiber(j)) block_in[j].push_back(m.at(c.inputs[i]));
            block_a[j] = tensor_many(block_in[j], base);
            mids_m.push_back(m.at(idx.mids[j]));
          }
          BaseObject a_mid = tensor_many(mids_m, base);
          std::vector<std::size_t> slot = detail::fiber_slots(idx, n);

          if (base == Base::FINSET) {
            std::vector<std::size_t> fn(dom.size());
            for (std::size_t di = 0; di < dom.size(); ++di) {
              auto sub = tensor_unindex(factors, di);
              std::vector<std::vector<std::size_t>> g(idx.m);
              for (std::size_t j = 0; j < idx.m; ++j)
                g[j] = hom_table_from_index(block_a[j], mids_m[j], sub[j]);
              auto h = hom_table_from_index(a_mid, tgt, sub[idx.m]);
              std::vector<std::size_t> table(a_all.size());
              for (std::size_t u = 0; u < a_all.size(); ++u) {
                auto parts = tensor_unindex(all_in, u);
                std::vector<std::size_t> w(idx.m);
                for (std::size_t j = 0; j < idx.m; ++j) {
                  std::vector<std::size_t> loc;
                  for (std::size_t i : idx.fiber(j)) loc.push_back(parts[i]);
                  w[j] = g[j][tensor_index(block_in[j], loc)];
                }
                table[u] = h[tensor_index(mids_m, w)];
              }
              fn[di] = hom_index_from_table(a_all, tgt, table);
            }
            o.set_gamma(c, idx, BaseMorphism::finset(dom, tgt_hom, std::move(fn)));
          } else {
            // Basis vectors are matrix units; the composite of matrix units
            // is a matrix unit when outputs chain up and zero otherwise.
            Matrix mat(tgt_hom.size(), dom.size());
            for (std::size_t di = 0; di < dom.size(); ++di) {
              auto sub = tensor_unindex(factors, di);
              // Factor j is the unit (p_j -> q_j); the outer is (r -> s).
              std::vector<std::size_t> p(idx.m), q(idx.m);
              for (std::size_t j = 0; j < idx.m; ++j) {
                p[j] = sub[j] / mids_m[j].size();
                q[j] = sub[j] % mids_m[j].size();
              }
              std::size_t r = sub[idx.m] / tgt.size();
              std::size_t s = sub[idx.m] % tgt.size();
              if (tensor_index(mids_m, q) != r) continue;
              // Interleave the block input indices back to corolla order.
              std::vector<std::size_t> per_pos(n);
              for (std::size_t j = 0; j < idx.m; ++j) {
                auto loc = tensor_unindex(block_in[j], p[j]);
                auto fib = idx.fiber(j);
                for (std::size_t rr = 0; rr < fib.size(); ++rr) per_pos[fib[rr]] = loc[rr];
              }
              mat(tensor_index(all_in, per_pos) * tgt.size() + s, di) = Rational(1);
            }
            o.set_gamma(c, idx, BaseMorphism::vectq(dom, tgt_hom, std::move(mat)));
          }
        }
      }
    }
  }
  return o;
}

// ---------------------------------------------------------------------------
// Universal property
// ---------------------------------------------------------------------------

/// Uncurry an operad map into End(M) to an algebra action entry at c.
inline BaseMorphism uncurry_classifying(const CollectionMap& phi, const ColorFamily& m,
                                        const Corolla& c) {
  std::vector<BaseObject> front;
  for (const auto& y : c.inputs) front.push_back(m.at(y));
  return uncurry_last(phi.component(c), front, m.at(c.output));
}

struct CorrespondenceReport {
  std::size_t operad_map_count = 0;
  std::size_t algebra_structure_count = 0;
  bool bijective = false;
};

/// Enumerate operad maps O -> End(M) and algebra structures on M, and
/// verify that elementwise currying matches them up bijectively.
inline CorrespondenceReport algebra_map_correspondence(const Operad& o, const ColorFamily& m,
                                                       std::size_t arity_bound) {
  Operad end = endomorphism_operad(m, arity_bound);
  std::vector<CollectionMap> maps = enumerate_operad_maps(o, end, arity_bound);
  std::vector<AlgebraStructure> structs = enumerate_algebra_structures(o, m, arity_bound);

  CorrespondenceReport report;
  report.operad_map_count = maps.size();
  report.algebra_structure_count = structs.size();

  Operad ot = o.carrier.max_arity() > arity_bound ? truncate_operad(o, arity_bound) : o;
  std::vector<bool> hit(structs.size(), false);
  bool ok = maps.size() == structs.size();
  for (const auto& phi : maps) {
    std::size_t found = structs.size();
    for (std::size_t s = 0; s < structs.size() && found == structs.size(); ++s) {
      if (hit[s]) continue;
      bool agree = true;
      for (std::size_t k = 0; k <= arity_bound && agree; ++k) {
        FiniteGroupoid cg = corolla_groupoid(m.colors, m.colors, k);
        for (const auto& enc : cg.objects) {
          Corolla c = Corolla::decode(enc);
          if (ot.carrier.value(c).is_initial()) continue;
          if (!(uncurry_classifying(phi, m, c) == structs[s].act(c))) {
            agree = false;
            break;
          }
        }
      }
      if (agree) found = s;
    }
    if (found == structs.size()) {
      ok = false;
      break;
    }
    hit[found] = true;
  }
  report.bijective = ok && std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
  return report;
}

/// The classifying map O -> End(Z(O)) of the nullary-part algebra, obtained
/// by currying its action entries.
inline CollectionMap canonical_nullary_map(const Operad& o, std::size_t arity_bound) {
  AlgebraStructure z = nullary_algebra(o);
  Operad end = endomorphism_operad(z.carrier, arity_bound);
  Operad ot = o.carrier.max_arity() > arity_bound ? truncate_operad(o, arity_bound) : o;
  CollectionMap phi{ot.carrier, end.carrier, {}};
  for (const auto& c : ot.carrier.support_corollas()) {
    if (!z.has_action(c)) continue; // partial operad: leave the component undefined
    std::vector<BaseObject> front;
    for (const auto& y : c.inputs) front.push_back(z.carrier.at(y));
    // The action with the operation slot last is exactly the curry input.
    phi.set_component(c, curry_last(z.act(c), front, ot.carrier.value(c)));
  }
  return phi;
}

/// Restriction along a color map compared against the endomorphism operad of
/// the restricted family: the values agree literally, so the comparison map
/// is the identity and always invertible.
struct PullbackEndReport {
  CollectionMap map;
  bool invertible = false;
};

inline PullbackEndReport pullback_end_comparison(const ColorMap& f, const ColorFamily& m,
                                                 std::size_t arity_bound) {
  Operad end_y = endomorphism_operad(m, arity_bound);
  Operad pulled = pullback_operad(f, end_y);
  Operad end_x = endomorphism_operad(pullback_family(f, m), arity_bound);
  PullbackEndReport report;
  report.map = CollectionMap{pulled.carrier, end_x.carrier, {}};
  report.invertible = true;
  for (const auto& c : pulled.carrier.support_corollas()) {
    if (!(pulled.carrier.value(c) == end_x.carrier.value(c))) {
      report.invertible = false;
      continue;
    }
    report.map.set_component(c, BaseMorphism::identity(pulled.carrier.value(c)));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Cartesian structure on finite sets
// ---------------------------------------------------------------------------

inline std::string set_color_name(const BaseObject& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += '.';
    out += s.label(i);
  }
  out += '}';
  return out;
}

/// The operad of set maps Map(X_1 x ... x X_n, Y) over a listed family of
/// finite sets, with substitution computed by evaluating functions on
/// elements.  Coincides with the endomorphism operad of the same family in
/// (FINSET, x) on the nose.
inline Operad cartesian_operad(const std::vector<BaseObject>& family, std::size_t arity_bound,
                               std::size_t entry_limit = SIZE_MAX) {
  ColorFamily fam;
  fam.base = Base::FINSET;
  for (const auto& s : family) {
    if (s.base() != Base::FINSET) throw MixedBaseError("cartesian structure needs finite sets");
    std::string name = set_color_name(s);
    if (!fam.values.count(name)) {
      fam.colors.push_back(name);
      fam.values.emplace(name, s);
    }
  }

  Operad o;
  o.carrier = Collection(Base::FINSET, fam.colors);
  o.index_bound = arity_bound;

  auto product_of = [&](const std::vector<std::string>& cs) {
    std::vector<BaseObject> fac;
    for (const auto& x : cs) fac.push_back(fam.at(x));
    return std::make_pair(fac, tensor_many(fac, Base::FINSET));
  };
  auto evaluate = [](const BaseObject& a, const BaseObject& b, std::size_t h, std::size_t i) {
    return hom_table_from_index(a, b, h)[i];
  };

  for (std::size_t n = 0; n <= arity_bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(fam.colors, fam.colors, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      o.carrier.set_value(c, internal_hom(product_of(c.inputs).second, fam.at(c.output)));
    }
  }
  o.carrier.set_truncated_above(arity_bound);

  for (std::size_t n = 2; n <= arity_bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(fam.colors, fam.colors, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      auto [fac, a] = product_of(c.inputs);
      const BaseObject& tgt = fam.at(c.output);
      const BaseObject& src = o.carrier.value(c);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        Permutation si = Permutation::adjacent_transposition(n, i);
        Corolla ci = c.permuted(si);
        auto [fac2, a2] = product_of(ci.inputs);
        BaseMorphism pinv = factor_permutation(fac, si, Base::FINSET).inverse();
        std::vector<std::size_t> fn(src.size());
        for (std::size_t h = 0; h < src.size(); ++h) {
          std::vector<std::size_t> table(a2.size());
          for (std::size_t u = 0; u < a2.size(); ++u)
            table[u] = evaluate(a, tgt, h, pinv.apply(u));
          fn[h] = hom_index_from_table(a2, tgt, table);
        }
        o.carrier.set_gen_act(c, i, BaseMorphism::finset(src, o.carrier.value(ci), std::move(fn)));
      }
    }
  }

  for (const auto& x : fam.colors) {
    Corolla cx({x}, x);
    auto [fac, a] = product_of(cx.inputs);
    std::vector<std::size_t> id_table(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) id_table[i] = i;
    o.set_unit(x, BaseMorphism::finset(BaseObject::unit(Base::FINSET), o.carrier.value(cx),
                                       {hom_index_from_table(a, fam.at(x), id_table)}));
  }

  for (std::size_t n = 0; n <= arity_bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(fam.colors, fam.colors, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      auto [all_in, a_all] = product_of(c.inputs);
      const BaseObject& tgt = fam.at(c.output);
      const BaseObject& tgt_hom = o.carrier.value(c);
      for (std::size_t k = 0; k <= arity_bound; ++k) {
        FiniteGroupoid ig = composition_index_groupoid_grade(n, fam.colors, k, false);
        for (const auto& ienc : ig.objects) {
          CompositionIndex idx = CompositionIndex::decode(ienc);
          std::vector<BaseObject> factors = o.gamma_domain_factors(c, idx);
          BaseObject dom = tensor_many(factors, Base::FINSET);
          // Oversized entries stay undefined; the operad is then partial.
          if (dom.size() > entry_limit) continue;
          auto [mids_fac, a_mid] = product_of(idx.mids);
          std::vector<std::vector<BaseObject>> block_in(idx.m);
          std::vector<BaseObject> block_a(idx.m, BaseObject::unit(Base::FINSET));
          for (std::size_t j = 0; j < idx.m; ++j) {
            for (std::size_t i : idx.fiber(j)) block_in[j].push_back(fam.at(c.inputs[i]));
            block_a[j] = tensor_many(block_in[j], Base::FINSET);
          }
          std::vector<std::size_t> fn(dom.size());
          for (std::size_t di = 0; di < dom.size(); ++di) {
            auto sub = tensor_unindex(factors, di);
            std::vector<std::size_t> table(a_all.size());
            for (std::size_t u = 0; u < a_all.size(); ++u) {
              auto parts = tensor_unindex(all_in, u);
              std::vector<std::size_t> w(idx.m);
              for (std::size_t j = 0; j < idx.m; ++j) {
                std::vector<std::size_t> loc;
                for (std::size_t i : idx.fiber(j)) loc.push_back(parts[i]);
                w[j] = evaluate(block_a[j], fam.at(idx.mids[j]), sub[j],
                                tensor_index(block_in[j], loc));
              }
              table[u] = evaluate(a_mid, tgt, sub[idx.m], tensor_index(mids_fac, w));
            }
            fn[di] = hom_index_from_table(a_all, tgt, table);
          }
          o.set_gamma(c, idx, BaseMorphism::finset(dom, tgt_hom, std::move(fn)));
        }
      }
    }
  }
  return o;
}

/// The family a cartesian operad is built over, for comparison purposes.
inline ColorFamily cartesian_family(const std::vector<BaseObject>& family) {
  ColorFamily fam;
  fam.base = Base::FINSET;
  for (const auto& s : family) {
    std::string name = set_color_name(s);
    if (!fam.values.count(name)) {
      fam.colors.push_back(name);
      fam.values.emplace(name, s);
    }
  }
  return fam;
}

/// Literal structure equality of two operads: carriers, identities, and all
/// substitution entries with nonzero domains.
inline bool operads_equal(const Operad& a, const Operad& b) {
  if (!(a.carrier == b.carrier)) return false;
  if (a.units.size() != b.units.size()) return false;
  for (const auto& [x, u] : a.units) {
    auto it = b.units.find(x);
    if (it == b.units.end() || !(u == it->second)) return false;
  }
  auto normalized = [](const Operad& o) {
    std::map<std::string, BaseMorphism> out;
    for (const auto& [k, g] : o.gammas)
      if (!g.source().is_initial()) out.emplace(k, g);
    return out;
  };
  auto na = normalized(a), nb = normalized(b);
  if (na.size() != nb.size()) return false;
  for (const auto& [k, g] : na) {
    auto it = nb.find(k);
    if (it == nb.end() || !(g == it->second)) return false;
  }
  return true;
}

} // namespace opcal
