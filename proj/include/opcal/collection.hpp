#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "opcal/base.hpp"
#include "opcal/corolla.hpp"
#include "opcal/errors.hpp"

namespace opcal {

/// A family of base objects indexed by colors.
struct ColorFamily {
  Base base = Base::FINSET;
  std::vector<std::string> colors;
  std::map<std::string, BaseObject> values;

  const BaseObject& at(const std::string& color) const {
    auto it = values.find(color);
    if (it == values.end()) throw ColorMismatchError("unknown color '" + color + "'");
    return it->second;
  }

  bool operator==(const ColorFamily& o) const = default;
};

/// A symmetric sequence: a base object for every corolla over a fixed color
/// set, with relabeling isomorphisms recorded on adjacent transpositions.
/// Corollas at arities inside arity_support may carry nonempty values; all
/// other corollas have the initial value.  When truncated_above is set, the
/// collection is the cutoff of something larger: values beyond the bound
/// read as initial, and the flag is the certificate that they were cut
/// rather than computed.
class Collection {
public:
  Collection() = default;

  Collection(Base base, std::vector<std::string> colors)
      : base_(base), colors_(std::move(colors)) {
    std::set<std::string> seen;
    for (const auto& c : colors_) {
      detail::check_color_name(c);
      if (!seen.insert(c).second) throw ValidationError("duplicate color '" + c + "'");
    }
  }

  Base base() const { return base_; }
  const std::vector<std::string>& colors() const { return colors_; }
  const std::set<std::size_t>& arity_support() const { return support_; }
  const std::optional<std::size_t>& truncated_above() const { return truncated_above_; }
  void set_truncated_above(std::optional<std::size_t> b) { truncated_above_ = b; }

  bool has_color(const std::string& c) const {
    return std::find(colors_.begin(), colors_.end(), c) != colors_.end();
  }

  void check_corolla_colors(const Corolla& c) const {
    for (const auto& x : c.inputs)
      if (!has_color(x)) throw ColorMismatchError("unknown input color '" + x + "'");
    if (!has_color(c.output)) throw ColorMismatchError("unknown output color '" + c.output + "'");
  }

  /// Install a value; nonempty values extend the arity support.
  void set_value(const Corolla& c, BaseObject v) {
    check_corolla_colors(c);
    if (v.base() != base_) throw MixedBaseError("collection value in the wrong base");
    if (!v.is_initial()) support_.insert(c.arity());
    if (truncated_above_ && c.arity() > *truncated_above_)
      throw ValidationError("value set beyond the truncation bound");
    values_[c.encode()] = std::move(v);
  }

  /// Install the relabeling isomorphism along the adjacent transposition
  /// s_i at corolla c, i.e. value(c) -> value(s_i . c).
  void set_gen_act(const Corolla& c, std::size_t i, BaseMorphism m) {
    gen_act_[act_key(c, i)] = std::move(m);
  }

  const BaseObject& value(const Corolla& c) const {
    auto it = values_.find(c.encode());
    if (it != values_.end()) return it->second;
    check_corolla_colors(c);
    static const BaseObject kInitFinset = BaseObject::initial(Base::FINSET);
    static const BaseObject kInitVectq = BaseObject::initial(Base::VECTQ);
    return base_ == Base::FINSET ? kInitFinset : kInitVectq;
  }

  /// The relabeling morphism value(c) -> value(s_i . c).
  BaseMorphism gen_act(const Corolla& c, std::size_t i) const {
    const BaseObject& src = value(c);
    const BaseObject& dst = value(c.permuted(Permutation::adjacent_transposition(c.arity(), i)));
    if (src.is_initial()) return BaseMorphism::from_initial(dst);
    auto it = gen_act_.find(act_key(c, i));
    if (it == gen_act_.end()) {
      if (src == dst) return BaseMorphism::identity(src);
      throw ValidationError("missing relabeling action at " + c.encode() + ", s_" +
                            std::to_string(i));
    }
    return it->second;
  }

  /// The relabeling morphism value(c) -> value(sigma . c) for any sigma,
  /// assembled along a factorization into adjacent transpositions.
  BaseMorphism act(const Permutation& sigma, const Corolla& c) const {
    const BaseObject& src = value(c);
    if (src.is_initial()) return BaseMorphism::from_initial(value(c.permuted(sigma)));
    BaseMorphism out = BaseMorphism::identity(src);
    Corolla cur = c;
    auto word = sigma.adjacent_word(); // leftmost factor applied last
    for (std::size_t k = word.size(); k-- > 0;) {
      out = gen_act(cur, word[k]).after(out);
      cur = cur.permuted(Permutation::adjacent_transposition(c.arity(), word[k]));
    }
    return out;
  }

  /// True when every nullary value is initial.
  bool is_reduced() const {
    for (const auto& [k, v] : values_)
      if (!v.is_initial() && Corolla::decode(k).arity() == 0) return false;
    return true;
  }

  /// Corollas with a nonzero value, sorted by encoding.
  std::vector<Corolla> support_corollas() const {
    std::vector<Corolla> out;
    for (const auto& [k, v] : values_)
      if (!v.is_initial()) out.push_back(Corolla::decode(k));
    return out;
  }

  std::size_t max_arity() const {
    return support_.empty() ? 0 : *support_.rbegin();
  }

  bool operator==(const Collection& o) const {
    return base_ == o.base_ && colors_ == o.colors_ && normalized_values() ==
           o.normalized_values() && normalized_acts() == o.normalized_acts() &&
           truncated_above_ == o.truncated_above_;
  }

private:
  static std::string act_key(const Corolla& c, std::size_t i) {
    return c.encode() + "#" + std::to_string(i);
  }

  std::map<std::string, BaseObject> normalized_values() const {
    std::map<std::string, BaseObject> out;
    for (const auto& [k, v] : values_)
      if (!v.is_initial()) out.emplace(k, v);
    return out;
  }

  std::map<std::string, BaseMorphism> normalized_acts() const {
    std::map<std::string, BaseMorphism> out;
    for (const auto& [k, m] : gen_act_)
      if (!m.source().is_initial()) out.emplace(k, m);
    return out;
  }

  Base base_ = Base::FINSET;
  std::vector<std::string> colors_;
  std::set<std::size_t> support_;
  std::optional<std::size_t> truncated_above_;
  std::map<std::string, BaseObject> values_;
  std::map<std::string, BaseMorphism> gen_act_;
};

/// Validate the relabeling data: each generator morphism is an isomorphism
/// with the right endpoints, involutivity s_i s_i = id, the braid relation
/// on neighbouring generators, and commutation of distant generators.
inline void check_collection(const Collection& c) {
  for (const auto& cor : c.support_corollas()) {
    std::size_t n = cor.arity();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      BaseMorphism g = c.gen_act(cor, i);
      if (!(g.source() == c.value(cor)))
        throw ValidationError("relabeling source mismatch at " + cor.encode());
      Corolla ci = cor.permuted(Permutation::adjacent_transposition(n, i));
      if (!(g.target() == c.value(ci)))
        throw ValidationError("relabeling target mismatch at " + cor.encode());
      if (!g.is_invertible())
        throw NotInvertibleError("relabeling not invertible at " + cor.encode());
      if (!(c.gen_act(ci, i).after(g) == BaseMorphism::identity(c.value(cor))))
        throw ValidationError("s_i s_i != id at " + cor.encode());
    }
    // Braid and commutation relations.
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = i + 1; j + 1 < n; ++j) {
        Permutation si = Permutation::adjacent_transposition(n, i);
        Permutation sj = Permutation::adjacent_transposition(n, j);
        auto walk = [&](std::vector<std::size_t> word) {
          BaseMorphism out = BaseMorphism::identity(c.value(cor));
          Corolla cur = cor;
          for (std::size_t k = word.size(); k-- > 0;) {
            out = c.gen_act(cur, word[k]).after(out);
            cur = cur.permuted(Permutation::adjacent_transposition(n, word[k]));
          }
          return out;
        };
        if (j == i + 1) {
          if (!(walk({i, j, i}) == walk({j, i, j})))
            throw ValidationError("braid relation violated at " + cor.encode());
        } else {
          if (!(walk({i, j}) == walk({j, i})))
            throw ValidationError("distant generators do not commute at " + cor.encode());
        }
      }
  }
}

/// A morphism of collections: one base morphism per corolla, natural for
/// the relabeling action.  Missing components with initial source are the
/// unique morphisms out of the initial object.
struct CollectionMap {
  Collection src;
  Collection dst;
  std::map<std::string, BaseMorphism> comps;

  void set_component(const Corolla& c, BaseMorphism m) { comps[c.encode()] = std::move(m); }

  BaseMorphism component(const Corolla& c) const {
    auto it = comps.find(c.encode());
    if (it != comps.end()) return it->second;
    if (src.value(c).is_initial()) return BaseMorphism::from_initial(dst.value(c));
    throw ValidationError("missing map component at " + c.encode());
  }

  bool operator==(const CollectionMap& o) const {
    if (!(src == o.src && dst == o.dst)) return false;
    for (const auto& c : src.support_corollas())
      if (!(component(c) == o.component(c))) return false;
    return true;
  }
};

/// Check endpoints and naturality of a collection map on the adjacent
/// transpositions at every supported corolla.
inline void check_collection_map(const CollectionMap& f) {
  if (f.src.base() != f.dst.base()) throw MixedBaseError("collection map across bases");
  if (f.src.colors() != f.dst.colors())
    throw ColorMismatchError("collection map across color sets");
  for (const auto& c : f.src.support_corollas()) {
    BaseMorphism fc = f.component(c);
    if (!(fc.source() == f.src.value(c) && fc.target() == f.dst.value(c)))
      throw ValidationError("map component endpoints wrong at " + c.encode());
    for (std::size_t i = 0; i + 1 < c.arity(); ++i) {
      Corolla ci = c.permuted(Permutation::adjacent_transposition(c.arity(), i));
      if (!(f.component(ci).after(f.src.gen_act(c, i)) == f.dst.gen_act(c, i).after(fc)))
        throw ValidationError("naturality violated at " + c.encode() + ", s_" +
                              std::to_string(i));
    }
  }
}

inline CollectionMap identity_map(const Collection& c) {
  CollectionMap f{c, c, {}};
  for (const auto& cor : c.support_corollas())
    f.set_component(cor, BaseMorphism::identity(c.value(cor)));
  return f;
}

inline CollectionMap compose_collection_maps(const CollectionMap& g, const CollectionMap& f) {
  CollectionMap out{f.src, g.dst, {}};
  for (const auto& cor : f.src.support_corollas())
    out.set_component(cor, g.component(cor).after(f.component(cor)));
  return out;
}

/// The unit collection: the monoidal unit at every (x; x), nothing else.
inline Collection unit_collection(const std::vector<std::string>& colors, Base base) {
  Collection c(base, colors);
  for (const auto& x : colors) c.set_value(Corolla({x}, x), BaseObject::unit(base));
  return c;
}

/// A color family viewed as a collection concentrated in arity 0.
inline Collection embed_degree0(const ColorFamily& m) {
  Collection c(m.base, m.colors);
  for (const auto& x : m.colors) c.set_value(Corolla({}, x), m.at(x));
  return c;
}

/// The arity-0 part of a collection, as a color family.
inline ColorFamily degree_zero_part(const Collection& c) {
  ColorFamily out;
  out.base = c.base();
  out.colors = c.colors();
  for (const auto& x : c.colors()) out.values.emplace(x, c.value(Corolla({}, x)));
  return out;
}

/// A map of colors f : X -> Y.
struct ColorMap {
  std::vector<std::string> src;
  std::vector<std::string> dst;
  std::map<std::string, std::string> fn;

  const std::string& at(const std::string& x) const {
    auto it = fn.find(x);
    if (it == fn.end()) throw ColorMismatchError("color map undefined at '" + x + "'");
    return it->second;
  }

  Corolla apply(const Corolla& c) const {
    std::vector<std::string> in;
    for (const auto& x : c.inputs) in.push_back(at(x));
    return Corolla(std::move(in), at(c.output));
  }

  bool is_mono() const {
    std::set<std::string> seen;
    for (const auto& x : src)
      if (!seen.insert(at(x)).second) return false;
    return true;
  }
};

/// Restriction along a color map: value and relabeling data are shared with
/// the original collection, not copied up to isomorphism.
inline Collection pullback_collection(const ColorMap& f, const Collection& phi) {
  if (phi.colors() != f.dst) throw ColorMismatchError("pullback: color map target mismatch");
  Collection out(phi.base(), f.src);
  out.set_truncated_above(phi.truncated_above());
  std::size_t max_n = phi.truncated_above() ? *phi.truncated_above() : phi.max_arity();
  // Enumerate X-corollas of every arity that can carry a value.
  for (std::size_t n = 0; n <= max_n; ++n) {
    if (!phi.arity_support().count(n)) continue;
    FiniteGroupoid g = corolla_groupoid(f.src, f.src, n);
    for (const auto& enc : g.objects) {
      Corolla c = Corolla::decode(enc);
      const BaseObject& v = phi.value(f.apply(c));
      if (v.is_initial()) continue;
      out.set_value(c, v);
      for (std::size_t i = 0; i + 1 < n; ++i) out.set_gen_act(c, i, phi.gen_act(f.apply(c), i));
    }
  }
  return out;
}

/// Extension along an injective color map: values at corollas in the image
/// are shared with the original collection, all other corollas get the
/// initial value.  Pulling back again recovers the original collection on
/// the nose.
inline Collection pushforward_mono(const ColorMap& f, const Collection& phi) {
  if (phi.colors() != f.src) throw ColorMismatchError("pushforward: color map source mismatch");
  if (!f.is_mono()) throw NotMonoError("pushforward_mono along a non-injective color map");
  Collection out(phi.base(), f.dst);
  out.set_truncated_above(phi.truncated_above());
  for (const auto& c : phi.support_corollas()) {
    Corolla d = f.apply(c);
    out.set_value(d, phi.value(c));
    for (std::size_t i = 0; i + 1 < c.arity(); ++i) out.set_gen_act(d, i, phi.gen_act(c, i));
  }
  return out;
}

/// Extension along an arbitrary color map: the value at a Y-corolla is the
/// coproduct of the values at its preimage corollas.
inline Collection pushforward_general(const ColorMap& f, const Collection& phi) {
  if (phi.colors() != f.src) throw ColorMismatchError("pushforward: color map source mismatch");
  Collection out(phi.base(), f.dst);
  out.set_truncated_above(phi.truncated_above());

  // Group supported X-corollas by their image.
  std::map<std::string, std::vector<Corolla>> preimages;
  for (const auto& c : phi.support_corollas()) preimages[f.apply(c).encode()].push_back(c);

  std::map<std::string, Coproduct> cps;
  for (const auto& [denc, pres] : preimages) {
    std::vector<std::pair<std::string, BaseObject>> parts;
    for (const auto& c : pres) parts.emplace_back(c.encode(), phi.value(c));
    Coproduct cp = coproduct(parts, phi.base());
    out.set_value(Corolla::decode(denc), cp.obj);
    cps.emplace(denc, std::move(cp));
  }
  for (const auto& [denc, pres] : preimages) {
    Corolla d = Corolla::decode(denc);
    const Coproduct& cp = cps.at(denc);
    for (std::size_t i = 0; i + 1 < d.arity(); ++i) {
      Corolla di = d.permuted(Permutation::adjacent_transposition(d.arity(), i));
      auto it = cps.find(di.encode());
      if (it == cps.end()) throw ValidationError("pushforward: image not closed under relabeling");
      const Coproduct& cpi = it->second;
      // Assemble the block morphism sending summand c to summand s_i . c.
      if (phi.base() == Base::FINSET) {
        std::vector<std::size_t> fn(cp.obj.size());
        for (const auto& c : pres) {
          Corolla ci = c.permuted(Permutation::adjacent_transposition(c.arity(), i));
          BaseMorphism step = cpi.injections.at(ci.encode())
                                  .after(phi.gen_act(c, i));
          const BaseMorphism& inj = cp.injections.at(c.encode());
          for (std::size_t k = 0; k < phi.value(c).size(); ++k) fn[inj.apply(k)] = step.apply(k);
        }
        out.set_gen_act(d, i, BaseMorphism::finset(cp.obj, cpi.obj, std::move(fn)));
      } else {
        Matrix mat(cpi.obj.size(), cp.obj.size());
        for (const auto& c : pres) {
          Corolla ci = c.permuted(Permutation::adjacent_transposition(c.arity(), i));
          BaseMorphism step = cpi.injections.at(ci.encode()).after(phi.gen_act(c, i));
          const BaseMorphism& inj = cp.injections.at(c.encode());
          // Column of inj for source k is the unit vector at its offset.
          for (std::size_t k = 0; k < phi.value(c).size(); ++k) {
            std::size_t col = SIZE_MAX;
            for (std::size_t r = 0; r < cp.obj.size(); ++r)
              if (inj.matrix()(r, k) != Rational(0)) col = r;
            for (std::size_t r = 0; r < cpi.obj.size(); ++r)
              mat(r, col) = step.matrix()(r, k);
          }
        }
        out.set_gen_act(d, i, BaseMorphism::vectq(cp.obj, cpi.obj, std::move(mat)));
      }
    }
  }
  return out;
}

/// Restriction of a color family along a color map.
inline ColorFamily pullback_family(const ColorMap& f, const ColorFamily& m) {
  ColorFamily out;
  out.base = m.base;
  out.colors = f.src;
  for (const auto& x : f.src) out.values.emplace(x, m.at(f.at(x)));
  return out;
}

} // namespace opcal
