#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "opcal/base.hpp"
#include "opcal/collection.hpp"
#include "opcal/compose.hpp"
#include "opcal/corolla.hpp"
#include "opcal/errors.hpp"

namespace opcal {

namespace detail {

/// Morphism between tensor products assembled from morphisms on consecutive
/// slices of the factor list: blocks are (length, morphism out of the tensor
/// of that many factors), in order, covering every factor.
inline BaseMorphism tensor_blocks_mor(const std::vector<BaseObject>& srcs,
                                      const std::vector<std::pair<std::size_t, BaseMorphism>>& blocks,
                                      Base base) {
  std::vector<BaseObject> targets;
  std::vector<std::size_t> bsize; // combined source size per block
  std::size_t covered = 0;
  for (const auto& [len, m] : blocks) {
    std::size_t slice_size = 1;
    for (std::size_t k = 0; k < len; ++k) slice_size *= srcs[covered + k].size();
    // Sources agree positionally; labels differ by tuple wrapping only.
    if (m.source().size() != slice_size)
      throw ValidationError("tensor_blocks_mor: block source mismatch");
    targets.push_back(m.target());
    bsize.push_back(slice_size);
    covered += len;
  }
  if (covered != srcs.size()) throw ValidationError("tensor_blocks_mor: blocks do not cover");
  BaseObject src = tensor_many(srcs, base);
  BaseObject dst = tensor_many(targets, base);
  const std::size_t nb = blocks.size();
  // Row-major over the factors restricts to row-major over the consecutive
  // blocks, so a source index splits into block-local indices directly.
  std::vector<std::size_t> loc(nb);
  auto split = [&](std::size_t i) {
    for (std::size_t j = nb; j-- > 0;) {
      loc[j] = i % bsize[j];
      i /= bsize[j];
    }
  };
  if (base == Base::FINSET) {
    std::vector<std::size_t> fn(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
      split(i);
      std::size_t out = 0;
      for (std::size_t j = 0; j < nb; ++j)
        out = out * targets[j].size() + blocks[j].second.apply(loc[j]);
      fn[i] = out;
    }
    return BaseMorphism::finset(std::move(src), std::move(dst), std::move(fn));
  }
  Matrix mat(dst.size(), src.size());
  std::vector<std::size_t> rloc(nb);
  for (std::size_t r = 0; r < dst.size(); ++r) {
    std::size_t rr = r;
    for (std::size_t j = nb; j-- > 0;) {
      rloc[j] = rr % targets[j].size();
      rr /= targets[j].size();
    }
    for (std::size_t i = 0; i < src.size(); ++i) {
      split(i);
      Rational v(1);
      for (std::size_t j = 0; j < nb; ++j) {
        v *= blocks[j].second.matrix()(rloc[j], loc[j]);
        if (v == Rational(0)) break;
      }
      mat(r, i) = v;
    }
  }
  return BaseMorphism::vectq(std::move(src), std::move(dst), std::move(mat));
}

/// Block assignments n -> m in restricted-growth form (nonempty blocks
/// numbered by first occurrence, empty blocks trailing), one representative
/// per relabeling orbit, for every m <= m_bound.
inline std::vector<std::vector<std::size_t>> canonical_assignments(std::size_t n,
                                                                   std::size_t m_bound) {
  std::vector<std::vector<std::size_t>> rgs{{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& f : rgs) {
      std::size_t used = f.empty() ? 0 : *std::max_element(f.begin(), f.end()) + 1;
      for (std::size_t j = 0; j <= used && j < m_bound; ++j) {
        auto f2 = f;
        f2.push_back(j);
        next.push_back(std::move(f2));
      }
    }
    rgs = std::move(next);
  }
  // Tag each with every possible number of trailing empty blocks.
  std::vector<std::vector<std::size_t>> out;
  for (const auto& f : rgs) {
    std::size_t used = f.empty() ? 0 : *std::max_element(f.begin(), f.end()) + 1;
    for (std::size_t m = used; m <= m_bound; ++m) {
      if (m == 0 && n > 0) continue;
      auto f2 = f;
      f2.push_back(m); // stash m in the last slot
      out.push_back(std::move(f2));
    }
  }
  return out;
}

} // namespace detail

/// An operad: a collection with identity operations and substitution maps,
/// the latter stored per corolla and composition index up to index_bound.
struct Operad {
  Collection carrier;
  std::map<std::string, BaseMorphism> units;  // color -> unit object -> O(x;x)
  std::map<std::string, BaseMorphism> gammas; // corolla "#" index
  std::size_t index_bound = 0;

  static std::string gamma_key(const Corolla& c, const CompositionIndex& idx) {
    return c.encode() + "#" + idx.encode();
  }

  bool has_unit(const std::string& color) const { return units.count(color) != 0; }

  const BaseMorphism& unit(const std::string& color) const {
    auto it = units.find(color);
    if (it == units.end()) throw ValidationError("no identity operation at color '" + color + "'");
    return it->second;
  }

  void set_unit(const std::string& color, BaseMorphism m) { units[color] = std::move(m); }

  std::vector<BaseObject> gamma_domain_factors(const Corolla& c,
                                               const CompositionIndex& idx) const {
    std::vector<BaseObject> out;
    for (std::size_t j = 0; j < idx.m; ++j) out.push_back(carrier.value(fiber_corolla(c, idx, j)));
    out.push_back(carrier.value(mids_corolla(c, idx)));
    return out;
  }

  BaseObject gamma_domain(const Corolla& c, const CompositionIndex& idx) const {
    return tensor_many(gamma_domain_factors(c, idx), carrier.base());
  }

  void set_gamma(const Corolla& c, const CompositionIndex& idx, BaseMorphism m) {
    gammas[gamma_key(c, idx)] = std::move(m);
  }

  /// The substitution map at (c, idx).  Missing entries with initial domain
  /// are the unique maps out of the initial object.
  BaseMorphism gamma(const Corolla& c, const CompositionIndex& idx) const {
    auto it = gammas.find(gamma_key(c, idx));
    if (it != gammas.end()) return it->second;
    BaseObject dom = gamma_domain(c, idx);
    if (dom.is_initial()) return BaseMorphism::from_initial(carrier.value(c));
    throw ValidationError("missing substitution map at " + gamma_key(c, idx));
  }

  bool has_gamma(const Corolla& c, const CompositionIndex& idx) const {
    return gammas.count(gamma_key(c, idx)) != 0 || gamma_domain(c, idx).is_initial();
  }
};

struct LawReport {
  bool pass = true;
  bool exact = true;
  std::vector<std::string> violations;
  std::vector<std::string> notes;

  void fail(const std::string& what) {
    pass = false;
    violations.push_back(what);
  }
};

/// The monoid multiplication O (.) O -> O, one component per corolla and
/// grade, obtained by descending the substitution maps through the index
/// groupoid colimits.  Throws DescentError on a non-equivariant family.
inline CollectionMap assemble_multiplication(const Operad& o, std::size_t bound) {
  ComposedCollection cc(o.carrier, o.carrier, bound, false);
  CollectionMap mu{cc.materialize(bound), o.carrier, {}};
  for (std::size_t n = 0; n <= bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(o.carrier.colors(), o.carrier.colors(), n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      BaseObject sv = cc.value(c);
      const BaseObject& tv = o.carrier.value(c);
      if (sv.is_initial() && tv.is_initial()) continue;
      std::vector<std::pair<std::size_t, BaseMorphism>> blocks;
      std::size_t off = 0;
      for (std::size_t m = 0; m <= cc.grade_bound(n); ++m) {
        const GradedPiece& p = cc.piece(c, m);
        auto cocone = [&](const std::string& oenc) {
          return o.gamma(c, CompositionIndex::decode(oenc));
        };
        blocks.emplace_back(off, descend(p.gpd, p.diagram, p.colim, cocone, tv));
        off += p.colim.obj.size();
      }
      mu.set_component(c, detail::assemble_blocks(sv, tv, blocks));
    }
  }
  return mu;
}

/// Law check: relabeling consistency of the carrier, descent and input
/// naturality of the substitution family, two-level associativity on
/// canonical block assignments, and unit laws.
inline LawReport check_operad(const Operad& o, std::size_t bound) {
  LawReport report;
  const Collection& car = o.carrier;
  Base base = car.base();
  const auto& colors = car.colors();

  if (car.max_arity() > bound) {
    report.exact = false;
    report.notes.push_back("carrier support exceeds the bound; check is partial");
  }
  for (const auto& x : colors)
    if (!o.has_unit(x)) report.notes.push_back("no identity operation at color '" + x + "'");

  try {
    check_collection(car);
  } catch (const std::exception& e) {
    report.fail(std::string("carrier: ") + e.what());
    return report;
  }

  // Skipped conditions that mention an undefined substitution entry make the
  // check partial (e.g. bounded free operads).
  bool partial_gamma = false;
  auto note_partial = [&]() {
    if (!partial_gamma)
      report.notes.push_back("some substitution entries are undefined; check is partial");
    partial_gamma = true;
    report.exact = false;
  };

  // Descent plus naturality of the assembled multiplication.
  ComposedCollection cc(car, car, bound, false);
  auto build_mu = [&](const Corolla& c) -> std::optional<BaseMorphism> {
    BaseObject sv = cc.value(c);
    std::vector<std::pair<std::size_t, BaseMorphism>> blocks;
    std::size_t off = 0;
    for (std::size_t m = 0; m <= cc.grade_bound(c.arity()); ++m) {
      const GradedPiece& p = cc.piece(c, m);
      for (const auto& oenc : p.gpd.objects)
        if (!o.has_gamma(c, CompositionIndex::decode(oenc))) {
          note_partial();
          return std::nullopt;
        }
      auto cocone = [&](const std::string& oenc) {
        return o.gamma(c, CompositionIndex::decode(oenc));
      };
      blocks.emplace_back(off, descend(p.gpd, p.diagram, p.colim, cocone, car.value(c)));
      off += p.colim.obj.size();
    }
    return detail::assemble_blocks(sv, car.value(c), blocks);
  };
  try {
    for (std::size_t n = 0; n <= bound; ++n) {
      FiniteGroupoid cg = corolla_groupoid(colors, colors, n);
      for (const auto& enc : cg.objects) {
        Corolla c = Corolla::decode(enc);
        if (cc.value(c).is_initial() && car.value(c).is_initial()) continue;
        std::optional<BaseMorphism> mu_c = build_mu(c);
        if (!mu_c) continue;
        for (std::size_t i = 0; i + 1 < n; ++i) {
          Permutation si = Permutation::adjacent_transposition(n, i);
          Corolla ci = c.permuted(si);
          std::optional<BaseMorphism> mu_ci = build_mu(ci);
          if (!mu_ci) continue;
          if (!(car.gen_act(c, i).after(*mu_c) == mu_ci->after(cc.act(si, c)))) {
            report.fail("multiplication not natural at " + c.encode() + ", s_" +
                        std::to_string(i));
          }
        }
      }
    }
  } catch (const DescentError& e) {
    report.fail(std::string("descent: ") + e.what());
  }

  // Associativity on canonical two-level block assignments.
  for (std::size_t n = 0; n <= bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(colors, colors, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      for (auto p_tag : detail::canonical_assignments(n, bound)) {
        std::size_t m1 = p_tag.back();
        p_tag.pop_back();
        std::vector<std::vector<std::string>> ys = {std::vector<std::string>{}};
        for (std::size_t j = 0; j < m1; ++j) {
          std::vector<std::vector<std::string>> next;
          for (const auto& y : ys)
            for (const auto& x : colors) {
              auto y2 = y;
              y2.push_back(x);
              next.push_back(std::move(y2));
            }
          ys = std::move(next);
        }
        for (const auto& y : ys) {
          CompositionIndex outer{m1, p_tag, y};
          if (o.gamma_domain(c, outer).is_initial() &&
              car.value(mids_corolla(c, outer)).is_initial())
            continue;
          for (auto q_tag : detail::canonical_assignments(m1, bound)) {
            std::size_t m2 = q_tag.back();
            q_tag.pop_back();
            std::vector<std::vector<std::string>> ws = {std::vector<std::string>{}};
            for (std::size_t k = 0; k < m2; ++k) {
              std::vector<std::vector<std::string>> next;
              for (const auto& w : ws)
                for (const auto& x : colors) {
                  auto w2 = w;
                  w2.push_back(x);
                  next.push_back(std::move(w2));
                }
              ws = std::move(next);
            }
            Corolla yc(y, c.output);
            for (const auto& w : ws) {
              CompositionIndex inner{m2, q_tag, w};
              // Grouped domain: inner blocks, middle blocks, outer slot.
              std::vector<BaseObject> srcs;
              for (std::size_t j = 0; j < m1; ++j)
                srcs.push_back(car.value(fiber_corolla(c, outer, j)));
              for (std::size_t k = 0; k < m2; ++k)
                srcs.push_back(car.value(fiber_corolla(yc, inner, k)));
              srcs.push_back(car.value(Corolla(w, c.output)));
              BaseObject dom = tensor_many(srcs, base);
              if (dom.is_initial()) continue;

              // The composite assignment and the per-block relative indices,
              // needed up front to test whether every substitution entry the
              // two routes mention is defined.
              std::vector<std::vector<std::size_t>> qf(m2);
              for (std::size_t j = 0; j < m1; ++j) qf[inner.f[j]].push_back(j);
              CompositionIndex composite;
              composite.m = m2;
              composite.f.resize(n);
              for (std::size_t i = 0; i < n; ++i) composite.f[i] = inner.f[outer.f[i]];
              composite.mids = w;
              std::vector<CompositionIndex> rels(m2);
              for (std::size_t k = 0; k < m2; ++k) {
                // Relative index describing how block k's inputs split.
                std::vector<std::size_t> abs = composite.fiber(k);
                CompositionIndex rel;
                rel.m = qf[k].size();
                rel.f.resize(abs.size());
                for (std::size_t r = 0; r < abs.size(); ++r) {
                  std::size_t j = outer.f[abs[r]];
                  rel.f[r] = std::lower_bound(qf[k].begin(), qf[k].end(), j) - qf[k].begin();
                }
                for (std::size_t j : qf[k]) rel.mids.push_back(y[j]);
                rels[k] = std::move(rel);
              }
              bool have = o.has_gamma(yc, inner) && o.has_gamma(c, outer) &&
                          o.has_gamma(c, composite);
              for (std::size_t k = 0; k < m2 && have; ++k)
                have = o.has_gamma(fiber_corolla(c, composite, k), rels[k]);
              if (!have) {
                note_partial();
                continue;
              }

              // Route 1: collapse the middle and outer slots first.
              std::vector<std::pair<std::size_t, BaseMorphism>> b1;
              for (std::size_t j = 0; j < m1; ++j)
                b1.emplace_back(1, BaseMorphism::identity(srcs[j]));
              b1.emplace_back(m2 + 1, o.gamma(yc, inner));
              BaseMorphism r1 =
                  o.gamma(c, outer).after(detail::tensor_blocks_mor(srcs, b1, base));

              // Route 2: interleave, collapse each outer block, then finish
              // along the composite assignment.
              std::vector<std::size_t> img(m1 + m2 + 1);
              std::vector<std::size_t> offk(m2);
              {
                std::size_t pos = 0;
                for (std::size_t k = 0; k < m2; ++k) {
                  offk[k] = pos;
                  pos += qf[k].size() + 1;
                }
              }
              for (std::size_t k = 0; k < m2; ++k) {
                for (std::size_t r = 0; r < qf[k].size(); ++r) img[qf[k][r]] = offk[k] + r;
                img[m1 + k] = offk[k] + qf[k].size();
              }
              img[m1 + m2] = m1 + m2;
              BaseMorphism interleave = factor_permutation(srcs, Permutation(img), base);
              std::vector<BaseObject> inter = Permutation(img).apply(srcs);
              std::vector<std::pair<std::size_t, BaseMorphism>> b2;
              for (std::size_t k = 0; k < m2; ++k)
                b2.emplace_back(qf[k].size() + 1,
                                o.gamma(fiber_corolla(c, composite, k), rels[k]));
              b2.emplace_back(1, BaseMorphism::identity(srcs[m1 + m2]));
              BaseMorphism collapse = detail::tensor_blocks_mor(inter, b2, base);
              BaseMorphism r2 = o.gamma(c, composite).after(collapse).after(interleave);
              if (!(r1 == r2))
                report.fail("associativity at " + c.encode() + " outer " + outer.encode() +
                            " inner " + inner.encode());
            }
          }
        }
      }
    }
  }

  // Unit laws at every supported corolla with identities available.
  for (const auto& c : car.support_corollas()) {
    std::size_t n = c.arity();
    if (n > bound) continue;
    bool have_all = o.has_unit(c.output);
    for (const auto& x : c.inputs) have_all = have_all && o.has_unit(x);
    if (!have_all) continue;
    const BaseObject& v = car.value(c);
    // Identities inserted below: gamma at the identity assignment.
    {
      CompositionIndex idx;
      idx.m = n;
      idx.f.resize(n);
      for (std::size_t i = 0; i < n; ++i) idx.f[i] = i;
      idx.mids = c.inputs;
      if (!o.has_gamma(c, idx)) {
        note_partial();
        continue;
      }
      std::vector<BaseObject> units_then_v(n, BaseObject::unit(base));
      units_then_v.push_back(v);
      BaseMorphism pack = positional_iso(v, tensor_many(units_then_v, base));
      std::vector<std::pair<std::size_t, BaseMorphism>> b;
      for (std::size_t i = 0; i < n; ++i) b.emplace_back(1, o.unit(c.inputs[i]));
      b.emplace_back(1, BaseMorphism::identity(v));
      BaseMorphism ins = detail::tensor_blocks_mor(units_then_v, b, base);
      if (!(o.gamma(c, idx).after(ins).after(pack) == BaseMorphism::identity(v)))
        report.fail("inner unit law at " + c.encode());
    }
    // Identity inserted above: gamma at the single-block assignment.
    {
      CompositionIndex idx;
      idx.m = 1;
      idx.f.assign(n, 0);
      idx.mids = {c.output};
      if (!o.has_gamma(c, idx)) {
        note_partial();
        continue;
      }
      std::vector<BaseObject> v_then_unit{v, BaseObject::unit(base)};
      BaseMorphism pack = positional_iso(v, tensor_many(v_then_unit, base));
      std::vector<std::pair<std::size_t, BaseMorphism>> b;
      b.emplace_back(1, BaseMorphism::identity(v));
      b.emplace_back(1, o.unit(c.output));
      BaseMorphism ins = detail::tensor_blocks_mor(v_then_unit, b, base);
      if (!(o.gamma(c, idx).after(ins).after(pack) == BaseMorphism::identity(v)))
        report.fail("outer unit law at " + c.encode());
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// Every value the monoidal unit; substitution and identities are the unique
/// unit-to-unit maps.
inline Operad commutative_operad(const std::vector<std::string>& colors, Base base,
                                 std::size_t arity_bound) {
  Operad o;
  o.carrier = Collection(base, colors);
  o.index_bound = arity_bound;
  for (std::size_t n = 0; n <= arity_bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(colors, colors, n);
    for (const auto& enc : cg.objects)
      o.carrier.set_value(Corolla::decode(enc), BaseObject::unit(base));
  }
  o.carrier.set_truncated_above(arity_bound);
  BaseObject u = BaseObject::unit(base);
  for (const auto& x : colors)
    o.set_unit(x, BaseMorphism::identity(u));
  for (std::size_t n = 0; n <= arity_bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(colors, colors, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      for (std::size_t m = 0; m <= arity_bound; ++m) {
        FiniteGroupoid ig = composition_index_groupoid_grade(n, colors, m, false);
        for (const auto& ienc : ig.objects) {
          CompositionIndex idx = CompositionIndex::decode(ienc);
          BaseObject dom = o.gamma_domain(c, idx);
          if (base == Base::FINSET)
            o.set_gamma(c, idx, BaseMorphism::finset(dom, u, std::vector<std::size_t>(dom.size(), 0)));
          else {
            Matrix mat(1, dom.size());
            for (std::size_t i = 0; i < dom.size(); ++i) mat(0, i) = Rational(1);
            o.set_gamma(c, idx, BaseMorphism::vectq(dom, u, std::move(mat)));
          }
        }
      }
    }
  }
  return o;
}

namespace detail {

inline std::string order_label(const std::vector<std::size_t>& order) {
  if (order.empty()) return "()";
  std::string s;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(order[i]);
  }
  return s;
}

inline std::vector<std::size_t> order_from_label(const std::string& s) {
  if (s == "()") return {};
  std::vector<std::size_t> out;
  for (const auto& t : split(s, ',')) out.push_back(std::stoul(t));
  return out;
}

} // namespace detail

/// One color; the value at arity n is the set (or the vector space spanned
/// by) all linear orders of the inputs; substitution splices inner orders
/// into the outer order.  Includes the empty order at arity 0.
inline Operad associative_operad(Base base, std::size_t arity_bound, bool with_nullary = true) {
  Operad o;
  const std::string color = "a";
  o.carrier = Collection(base, {color});
  o.index_bound = arity_bound;

  auto order_object = [&](std::size_t n) {
    std::vector<std::string> labels;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    do {
      labels.push_back(detail::order_label(order));
    } while (std::next_permutation(order.begin(), order.end()));
    std::sort(labels.begin(), labels.end());
    return BaseObject(base, labels);
  };

  for (std::size_t n = 0; n <= arity_bound; ++n) {
    if (n == 0 && !with_nullary) continue;
    Corolla c(std::vector<std::string>(n, color), color);
    o.carrier.set_value(c, order_object(n));
  }
  o.carrier.set_truncated_above(arity_bound);

  auto label_map = [&](const BaseObject& src, const BaseObject& dst,
                       const std::function<std::string(const std::string&)>& fn) {
    if (base == Base::FINSET) {
      std::vector<std::size_t> table(src.size());
      for (std::size_t i = 0; i < src.size(); ++i) table[i] = dst.index_of(fn(src.label(i)));
      return BaseMorphism::finset(src, dst, std::move(table));
    }
    Matrix mat(dst.size(), src.size());
    for (std::size_t i = 0; i < src.size(); ++i)
      mat(dst.index_of(fn(src.label(i))), i) = Rational(1);
    return BaseMorphism::vectq(src, dst, std::move(mat));
  };

  // Relabeling: entries of the order word map through the transposition.
  for (std::size_t n = 2; n <= arity_bound; ++n) {
    Corolla c(std::vector<std::string>(n, color), color);
    const BaseObject& v = o.carrier.value(c);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      Permutation si = Permutation::adjacent_transposition(n, i);
      o.carrier.set_gen_act(c, i, label_map(v, v, [&](const std::string& l) {
        auto ord = detail::order_from_label(l);
        for (auto& e : ord) e = si(e);
        return detail::order_label(ord);
      }));
    }
  }

  BaseObject u = BaseObject::unit(base);
  o.set_unit(color, label_map(u, o.carrier.value(Corolla({color}, color)),
                              [](const std::string&) { return std::string("0"); }));

  for (std::size_t n = 0; n <= arity_bound; ++n) {
    Corolla c(std::vector<std::string>(n, color), color);
    if (o.carrier.value(c).is_initial()) continue;
    for (std::size_t m = 0; m <= arity_bound; ++m) {
      FiniteGroupoid ig = composition_index_groupoid_grade(n, {color}, m, false);
      for (const auto& ienc : ig.objects) {
        CompositionIndex idx = CompositionIndex::decode(ienc);
        std::vector<BaseObject> factors = o.gamma_domain_factors(c, idx);
        BaseObject dom = tensor_many(factors, base);
        if (dom.is_initial()) continue;
        const BaseObject& tv = o.carrier.value(c);
        std::vector<std::vector<std::size_t>> fibers;
        for (std::size_t j = 0; j < m; ++j) fibers.push_back(idx.fiber(j));
        auto splice = [&](std::size_t di) {
          auto sub = tensor_unindex(factors, di);
          std::vector<std::size_t> composite;
          auto outer = detail::order_from_label(factors[m].label(sub[m]));
          for (std::size_t j : outer) {
            auto innerw = detail::order_from_label(factors[j].label(sub[j]));
            for (std::size_t r : innerw) composite.push_back(fibers[j][r]);
          }
          return tv.index_of(detail::order_label(composite));
        };
        if (base == Base::FINSET) {
          std::vector<std::size_t> table(dom.size());
          for (std::size_t i = 0; i < dom.size(); ++i) table[i] = splice(i);
          o.set_gamma(c, idx, BaseMorphism::finset(dom, tv, std::move(table)));
        } else {
          Matrix mat(tv.size(), dom.size());
          for (std::size_t i = 0; i < dom.size(); ++i) mat(splice(i), i) = Rational(1);
          o.set_gamma(c, idx, BaseMorphism::vectq(dom, tv, std::move(mat)));
        }
      }
    }
  }
  return o;
}

/// Only the identity operations: the unit collection as an operad.
inline Operad trivial_operad(const std::vector<std::string>& colors, Base base,
                             std::size_t arity_bound) {
  Operad o;
  o.carrier = unit_collection(colors, base);
  o.index_bound = arity_bound;
  BaseObject u = BaseObject::unit(base);
  for (const auto& x : colors) o.set_unit(x, BaseMorphism::identity(u));
  for (std::size_t n = 0; n <= arity_bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(colors, colors, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      const BaseObject& tv = o.carrier.value(c);
      for (std::size_t m = 0; m <= arity_bound; ++m) {
        FiniteGroupoid ig = composition_index_groupoid_grade(n, colors, m, false);
        for (const auto& ienc : ig.objects) {
          CompositionIndex idx = CompositionIndex::decode(ienc);
          BaseObject dom = o.gamma_domain(c, idx);
          if (dom.is_initial()) continue;
          if (tv.is_initial())
            throw ValidationError("trivial operad: nonzero domain over an initial value");
          o.set_gamma(c, idx, positional_iso(dom, tv));
        }
      }
    }
  }
  return o;
}

/// Cut an operad down to corollas of arity at most new_bound.
inline Operad truncate_operad(const Operad& o, std::size_t new_bound) {
  Operad out;
  out.carrier = Collection(o.carrier.base(), o.carrier.colors());
  out.index_bound = std::min(o.index_bound, new_bound);
  for (const auto& c : o.carrier.support_corollas()) {
    if (c.arity() > new_bound) continue;
    out.carrier.set_value(c, o.carrier.value(c));
    for (std::size_t i = 0; i + 1 < c.arity(); ++i)
      out.carrier.set_gen_act(c, i, o.carrier.gen_act(c, i));
  }
  out.carrier.set_truncated_above(new_bound);
  out.units = o.units;
  for (const auto& [key, g] : o.gammas) {
    auto hash = key.find('#');
    Corolla c = Corolla::decode(key.substr(0, hash));
    CompositionIndex idx = CompositionIndex::decode(key.substr(hash + 1));
    if (c.arity() > new_bound || idx.m > new_bound) continue;
    if (!(g.source() == out.gamma_domain(c, idx))) continue; // a factor was cut
    out.set_gamma(c, idx, g);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Base change
// ---------------------------------------------------------------------------

/// Restriction of an operad along a color map: all structure shared.
inline Operad pullback_operad(const ColorMap& f, const Operad& o) {
  Operad out;
  out.carrier = pullback_collection(f, o.carrier);
  out.index_bound = o.index_bound;
  for (const auto& x : f.src)
    if (o.has_unit(f.at(x))) out.set_unit(x, o.unit(f.at(x)));
  std::size_t bound = o.index_bound;
  for (std::size_t n = 0; n <= bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(f.src, f.src, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      for (std::size_t m = 0; m <= bound; ++m) {
        FiniteGroupoid ig = composition_index_groupoid_grade(n, f.src, m, false);
        for (const auto& ienc : ig.objects) {
          CompositionIndex idx = CompositionIndex::decode(ienc);
          if (out.gamma_domain(c, idx).is_initial()) continue;
          CompositionIndex idy = idx;
          for (auto& mc : idy.mids) mc = f.at(mc);
          out.set_gamma(c, idx, o.gamma(f.apply(c), idy));
        }
      }
    }
  }
  return out;
}

/// Extension of an operad along an injective color map: structure shared on
/// image corollas, identities only at image colors.
inline Operad pushforward_operad(const ColorMap& f, const Operad& o) {
  if (!f.is_mono()) throw NotMonoError("operad extension along a non-injective color map");
  Operad out;
  out.carrier = pushforward_mono(f, o.carrier);
  out.index_bound = o.index_bound;
  for (const auto& x : f.src)
    if (o.has_unit(x)) out.set_unit(f.at(x), o.unit(x));
  std::map<std::string, std::string> inv;
  for (const auto& x : f.src) inv[f.at(x)] = x;
  for (const auto& [key, g] : o.gammas) {
    auto hash = key.find('#');
    Corolla c = Corolla::decode(key.substr(0, hash));
    CompositionIndex idx = CompositionIndex::decode(key.substr(hash + 1));
    Corolla d = f.apply(c);
    CompositionIndex idy = idx;
    for (auto& mc : idy.mids) mc = f.at(mc);
    out.set_gamma(d, idy, g);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Operad maps
// ---------------------------------------------------------------------------

/// Check identity and substitution compatibility of a collection map between
/// operad carriers (naturality comes from check_collection_map).
inline LawReport check_operad_map(const Operad& o, const Operad& p, const CollectionMap& phi,
                                  std::size_t bound) {
  LawReport report;
  try {
    check_collection_map(phi);
  } catch (const std::exception& e) {
    report.fail(std::string("naturality: ") + e.what());
  }
  Base base = o.carrier.base();
  for (const auto& x : o.carrier.colors()) {
    if (!o.has_unit(x) || !p.has_unit(x)) continue;
    Corolla cx({x}, x);
    if (!(phi.component(cx).after(o.unit(x)) == p.unit(x)))
      report.fail("identity not preserved at color '" + x + "'");
  }
  const auto& colors = o.carrier.colors();
  bool partial_gamma = false;
  for (std::size_t n = 0; n <= bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(colors, colors, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      for (std::size_t m = 0; m <= bound; ++m) {
        FiniteGroupoid ig = composition_index_groupoid_grade(n, colors, m, false);
        for (const auto& ienc : ig.objects) {
          CompositionIndex idx = CompositionIndex::decode(ienc);
          if (o.gamma_domain(c, idx).is_initial()) continue;
          if (!o.has_gamma(c, idx) || !p.has_gamma(c, idx)) {
            if (!partial_gamma)
              report.notes.push_back(
                  "some substitution entries are undefined; check is partial");
            partial_gamma = true;
            report.exact = false;
            continue;
          }
          std::vector<BaseMorphism> fac;
          for (std::size_t j = 0; j < m; ++j) fac.push_back(phi.component(fiber_corolla(c, idx, j)));
          fac.push_back(phi.component(mids_corolla(c, idx)));
          BaseMorphism lhs = phi.component(c).after(o.gamma(c, idx));
          BaseMorphism rhs = p.gamma(c, idx).after(tensor_many_mor(fac, base));
          if (!(lhs == rhs))
            report.fail("substitution not preserved at " + Operad::gamma_key(c, idx));
        }
      }
    }
  }
  return report;
}

/// All operad maps O -> P up to arity_bound, FINSET only: candidates are
/// enumerated at sorted-input representative corollas subject to stabilizer
/// equivariance, extended along relabelings, then filtered by the unit and
/// substitution conditions.
inline std::vector<CollectionMap> enumerate_operad_maps(const Operad& o, const Operad& p,
                                                        std::size_t bound) {
  if (o.carrier.base() != Base::FINSET)
    throw InfiniteEnumerationError("operad map enumeration requires the FINSET base");
  if (o.carrier.max_arity() > bound || p.carrier.max_arity() > bound)
    return enumerate_operad_maps(truncate_operad(o, bound), truncate_operad(p, bound), bound);
  const auto& colors = o.carrier.colors();

  // Representatives: sorted input tuples.
  std::vector<Corolla> reps;
  for (std::size_t n = 0; n <= bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(colors, colors, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      if (std::is_sorted(c.inputs.begin(), c.inputs.end()) && !o.carrier.value(c).is_initial())
        reps.push_back(c);
    }
  }

  // Equivariant candidate components at each representative.
  std::vector<std::vector<BaseMorphism>> candidates;
  for (const auto& c : reps) {
    std::vector<BaseMorphism> cands;
    for (const auto& f : all_functions(o.carrier.value(c), p.carrier.value(c))) {
      bool ok = true;
      for (std::size_t i = 0; ok && i + 1 < c.arity(); ++i) {
        if (c.inputs[i] != c.inputs[i + 1]) continue;
        if (!(p.carrier.gen_act(c, i).after(f) == f.after(o.carrier.gen_act(c, i)))) ok = false;
      }
      if (ok) cands.push_back(f);
    }
    candidates.push_back(std::move(cands));
  }

  // Backtracking search: representatives are assigned in arity order, and
  // each unit/substitution condition is checked as soon as the last
  // representative it mentions is assigned, pruning the search tree early.
  std::map<std::string, std::size_t> rep_index;
  for (std::size_t r = 0; r < reps.size(); ++r) rep_index[reps[r].encode()] = r;
  auto required_rep = [&](const Corolla& c) -> std::ptrdiff_t {
    Corolla s = c;
    std::sort(s.inputs.begin(), s.inputs.end());
    auto it = rep_index.find(s.encode());
    return it == rep_index.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
  };

  struct SubstConstraint {
    Corolla c;
    CompositionIndex idx;
  };
  std::vector<std::vector<std::string>> units_at(reps.size());
  std::vector<std::vector<SubstConstraint>> subst_at(reps.size());
  std::vector<SubstConstraint> subst_free; // mention no assignable component
  for (const auto& x : colors) {
    if (!o.has_unit(x) || !p.has_unit(x)) continue;
    std::ptrdiff_t r = required_rep(Corolla({x}, x));
    if (r >= 0) units_at[r].push_back(x);
  }
  for (std::size_t n = 0; n <= bound; ++n) {
    FiniteGroupoid cg = corolla_groupoid(colors, colors, n);
    for (const auto& enc : cg.objects) {
      Corolla c = Corolla::decode(enc);
      for (std::size_t m = 0; m <= bound; ++m) {
        FiniteGroupoid ig = composition_index_groupoid_grade(n, colors, m, false);
        for (const auto& ienc : ig.objects) {
          CompositionIndex idx = CompositionIndex::decode(ienc);
          if (o.gamma_domain(c, idx).is_initial()) continue;
          std::ptrdiff_t req = required_rep(c);
          for (std::size_t j = 0; j < m; ++j)
            req = std::max(req, required_rep(fiber_corolla(c, idx, j)));
          req = std::max(req, required_rep(mids_corolla(c, idx)));
          if (req >= 0)
            subst_at[req].push_back({c, idx});
          else
            subst_free.push_back({c, idx});
        }
      }
    }
  }

  CollectionMap phi{o.carrier, p.carrier, {}};
  auto subst_ok = [&](const SubstConstraint& s) {
    std::vector<BaseMorphism> fac;
    for (std::size_t j = 0; j < s.idx.m; ++j)
      fac.push_back(phi.component(fiber_corolla(s.c, s.idx, j)));
    fac.push_back(phi.component(mids_corolla(s.c, s.idx)));
    BaseMorphism lhs = phi.component(s.c).after(o.gamma(s.c, s.idx));
    BaseMorphism rhs = p.gamma(s.c, s.idx).after(tensor_many_mor(fac, Base::FINSET));
    return lhs == rhs;
  };
  auto unit_ok = [&](const std::string& x) {
    Corolla cx({x}, x);
    return phi.component(cx).after(o.unit(x)) == p.unit(x);
  };

  std::vector<CollectionMap> out;
  for (const auto& s : subst_free)
    if (!subst_ok(s)) return out;

  std::vector<std::vector<std::string>> added(reps.size());
  std::function<void(std::size_t)> go = [&](std::size_t r) {
    if (r == reps.size()) {
      out.push_back(phi);
      return;
    }
    for (const auto& cand : candidates[r]) {
      const Corolla& c = reps[r];
      added[r].clear();
      // Extend along every relabeling of the representative; repeated
      // relabelings of symmetric inputs agree because the candidate is
      // stabilizer-equivariant.
      for (const auto& sigma : all_permutations(c.arity())) {
        Corolla ci = c.permuted(sigma);
        if (phi.comps.count(ci.encode())) continue;
        phi.set_component(ci, p.carrier.act(sigma, c).after(cand).after(
                                  o.carrier.act(sigma, c).inverse()));
        added[r].push_back(ci.encode());
      }
      bool ok = true;
      for (const auto& x : units_at[r])
        if (!unit_ok(x)) { ok = false; break; }
      if (ok)
        for (const auto& s : subst_at[r])
          if (!subst_ok(s)) { ok = false; break; }
      if (ok) go(r + 1);
      for (const auto& k : added[r]) phi.comps.erase(k);
    }
  };
  go(0);
  return out;
}

} // namespace opcal
