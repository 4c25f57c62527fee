#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "opcal/base.hpp"
#include "opcal/errors.hpp"
#include "opcal/perm.hpp"

namespace opcal {

/// An element of a finite product of symmetric groups.
struct GroupElem {
  std::vector<Permutation> parts;

  bool is_identity() const {
    for (const auto& p : parts)
      if (!p.is_identity()) return false;
    return true;
  }

  GroupElem inverse() const {
    GroupElem g;
    for (const auto& p : parts) g.parts.push_back(p.inverse());
    return g;
  }

  friend GroupElem operator*(const GroupElem& a, const GroupElem& b) {
    GroupElem g;
    for (std::size_t i = 0; i < a.parts.size(); ++i) g.parts.push_back(a.parts[i] * b.parts[i]);
    return g;
  }

  std::string encode() const {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) s += '|';
      s += parts[i].encode();
    }
    return s;
  }
};

/// A product of symmetric groups Sigma_{d_0} x ... x Sigma_{d_k}.
class SymProduct {
public:
  explicit SymProduct(std::vector<std::size_t> degrees) : degrees_(std::move(degrees)) {}

  const std::vector<std::size_t>& degrees() const { return degrees_; }

  GroupElem identity() const {
    GroupElem g;
    for (std::size_t d : degrees_) g.parts.push_back(Permutation::identity(d));
    return g;
  }

  /// Adjacent transpositions in each factor; generate the whole group.
  std::vector<GroupElem> generators() const {
    std::vector<GroupElem> out;
    for (std::size_t f = 0; f < degrees_.size(); ++f)
      for (std::size_t i = 0; i + 1 < degrees_[f]; ++i) {
        GroupElem g = identity();
        g.parts[f] = Permutation::adjacent_transposition(degrees_[f], i);
        out.push_back(g);
      }
    return out;
  }

  /// Every element, in lexicographic order.
  std::vector<GroupElem> all() const {
    std::vector<GroupElem> out{GroupElem{}};
    for (std::size_t d : degrees_) {
      auto perms = all_permutations(d);
      std::vector<GroupElem> next;
      next.reserve(out.size() * perms.size());
      for (const auto& g : out)
        for (const auto& p : perms) {
          GroupElem e = g;
          e.parts.push_back(p);
          next.push_back(std::move(e));
        }
      out = std::move(next);
    }
    return out;
  }

  std::size_t order() const {
    std::size_t n = 1;
    for (std::size_t d : degrees_)
      for (std::size_t i = 2; i <= d; ++i) n *= i;
    return n;
  }

private:
  std::vector<std::size_t> degrees_;
};

/// A finite groupoid presented as a group action: objects are encoded
/// values, and a product of symmetric groups acts on them.  Arrows a -> b
/// are the group elements carrying a to b; composition is the group product.
struct FiniteGroupoid {
  SymProduct group;
  std::vector<std::string> objects; // sorted, unique
  std::function<std::string(const GroupElem&, const std::string&)> apply;

  /// All arrows a -> b (the g with g . a = b).  Desk-scale enumeration.
  std::vector<GroupElem> hom(const std::string& a, const std::string& b) const {
    std::vector<GroupElem> out;
    for (const auto& g : group.all())
      if (apply(g, a) == b) out.push_back(g);
    return out;
  }
};

/// A functor from a FiniteGroupoid into the base category.  map(g, o) is the
/// morphism D(o) -> D(g . o).
struct GroupoidDiagram {
  Base base = Base::FINSET;
  std::function<BaseObject(const std::string&)> value;
  std::function<BaseMorphism(const GroupElem&, const std::string&)> map;
};

struct ColimComponent {
  std::string rep;      // lexicographically minimal object of the component
  BaseObject quotient;  // orbit set / coinvariant space of D(rep)
  BaseMorphism proj;    // D(rep) -> quotient
  std::size_t offset;   // position of this block inside the total object
};

/// The colimit of a groupoid diagram, with enough bookkeeping to produce
/// the structural leg at any object.
struct ColimitResult {
  Base base = Base::FINSET;
  BaseObject obj; // coproduct of component quotients, labels "rep::label"
  std::vector<ColimComponent> components;
  std::map<std::string, std::size_t> component_of; // object -> component idx
  std::map<std::string, GroupElem> to_rep;         // object -> g with g . o = rep

  const ColimComponent& component(const std::string& o) const {
    return components[component_of.at(o)];
  }

  /// Inclusion of a component quotient into the total object.
  BaseMorphism injection(const ColimComponent& comp) const {
    if (base == Base::FINSET) {
      std::vector<std::size_t> fn(comp.quotient.size());
      for (std::size_t i = 0; i < fn.size(); ++i) fn[i] = comp.offset + i;
      return BaseMorphism::finset(comp.quotient, obj, std::move(fn));
    }
    Matrix mat(obj.size(), comp.quotient.size());
    for (std::size_t i = 0; i < comp.quotient.size(); ++i)
      mat(comp.offset + i, i) = Rational(1);
    return BaseMorphism::vectq(comp.quotient, obj, std::move(mat));
  }

  /// The colimit leg D(o) -> colim.
  BaseMorphism leg(const GroupoidDiagram& d, const std::string& o) const {
    const ColimComponent& comp = components[component_of.at(o)];
    BaseMorphism transport = d.map(to_rep.at(o), o); // D(o) -> D(rep)
    return injection(comp).after(comp.proj).after(transport);
  }
};

namespace detail {

/// Quotient of a FINSET object by a list of endo-bijections: orbit set with
/// lexicographically minimal member labels.
inline std::pair<BaseObject, BaseMorphism> finset_quotient(
    const BaseObject& v, const std::vector<BaseMorphism>& autos) {
  std::vector<std::size_t> parent(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const auto& a : autos)
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::size_t ra = find(i), rb = find(a.apply(i));
      if (ra != rb) parent[rb] = ra;
    }
  // Minimal label per orbit.
  std::map<std::size_t, std::string> min_label;
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t r = find(i);
    std::string li = v.label(i);
    auto it = min_label.find(r);
    if (it == min_label.end() || li < it->second) min_label[r] = std::move(li);
  }
  std::vector<std::pair<std::string, std::size_t>> reps(min_label.size());
  std::size_t k = 0;
  for (const auto& [r, l] : min_label) reps[k++] = {l, r};
  std::sort(reps.begin(), reps.end());
  std::vector<std::string> labels;
  labels.reserve(reps.size());
  std::map<std::size_t, std::size_t> q_index; // orbit root -> index in the quotient
  for (const auto& [l, r] : reps) {
    q_index[r] = labels.size();
    labels.push_back(l);
  }
  BaseObject q(Base::FINSET, labels);
  std::vector<std::size_t> fn(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) fn[i] = q_index[find(i)];
  return {q, BaseMorphism::finset(v, q, std::move(fn))};
}

/// Quotient of a VECTQ object by a list of automorphisms: the coinvariant
/// space, i.e. the cokernel of the span of {v - g.v}, computed by exact
/// Gaussian elimination with first-nonzero pivoting.
inline std::pair<BaseObject, BaseMorphism> vectq_quotient(
    const BaseObject& v, const std::vector<BaseMorphism>& autos) {
  const std::size_t d = v.size();
  // Permutation actions: the coinvariants have one basis vector per orbit
  // (characteristic zero), picked as the largest basis index in the orbit,
  // matching the pivot choice the elimination below would make.
  bool all_perm = true;
  for (const auto& a : autos) {
    const Matrix& p = a.matrix();
    for (std::size_t j = 0; j < d && all_perm; ++j) {
      std::size_t ones = 0;
      for (std::size_t i = 0; i < d; ++i) {
        const Rational& e = p(i, j);
        if (e == Rational(0)) continue;
        if (e != Rational(1)) {
          all_perm = false;
          break;
        }
        ++ones;
      }
      if (ones != 1) all_perm = false;
    }
    if (!all_perm) break;
  }
  if (all_perm) {
    std::vector<std::size_t> parent(d);
    for (std::size_t i = 0; i < d; ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& a : autos) {
      const Matrix& p = a.matrix();
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i)
          if (p(i, j) == Rational(1)) {
            std::size_t ri = find(i), rj = find(j);
            if (ri != rj) parent[std::min(ri, rj)] = std::max(ri, rj);
            break;
          }
    }
    std::map<std::size_t, std::size_t> rep_max;
    for (std::size_t i = 0; i < d; ++i) {
      std::size_t r = find(i);
      auto it = rep_max.find(r);
      if (it == rep_max.end() || it->second < i) rep_max[r] = i;
    }
    std::vector<std::size_t> reps;
    for (const auto& [r, mx] : rep_max) reps.push_back(mx);
    std::sort(reps.begin(), reps.end());
    std::map<std::size_t, std::size_t> orbit_col;
    for (std::size_t k = 0; k < reps.size(); ++k) orbit_col[find(reps[k])] = k;
    std::vector<std::string> labels;
    for (std::size_t r : reps) labels.push_back(v.label(r));
    BaseObject q(Base::VECTQ, labels);
    Matrix proj(reps.size(), d);
    for (std::size_t i = 0; i < d; ++i) proj(orbit_col[find(i)], i) = Rational(1);
    return {q, BaseMorphism::vectq(v, q, std::move(proj))};
  }
  // Relation rows: for each automorphism P and basis vector e_i, the row
  // (e_i - P e_i)^T, i.e. row i of (I - P)^T = column i of (I - P).
  Matrix rel(autos.size() * d, d);
  std::size_t r = 0;
  for (const auto& a : autos) {
    const Matrix& p = a.matrix();
    for (std::size_t i = 0; i < d; ++i, ++r)
      for (std::size_t j = 0; j < d; ++j)
        rel(r, j) = (i == j ? Rational(1) : Rational(0)) - p(j, i);
  }
  auto pivots = rel.rref();
  std::set<std::size_t> pivot_set(pivots.begin(), pivots.end());
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < d; ++j)
    if (!pivot_set.count(j)) free_cols.push_back(j);
  std::vector<std::string> labels;
  for (std::size_t j : free_cols) labels.push_back(v.label(j));
  BaseObject q(Base::VECTQ, labels);
  Matrix proj(free_cols.size(), d);
  for (std::size_t fj = 0; fj < free_cols.size(); ++fj) proj(fj, free_cols[fj]) = Rational(1);
  for (std::size_t p = 0; p < pivots.size(); ++p)
    for (std::size_t fj = 0; fj < free_cols.size(); ++fj)
      proj(fj, pivots[p]) = -rel(p, free_cols[fj]);
  return {q, BaseMorphism::vectq(v, q, std::move(proj))};
}

} // namespace detail

/// Compute the colimit of a diagram over a finite groupoid: per connected
/// component, the quotient of the value at the canonical (lexicographically
/// minimal) representative by the automorphism action, assembled as a
/// coproduct over components.
///
/// When validate is set, functoriality and invertibility of the diagram are
/// checked on the generating arrows at each component representative.
inline ColimitResult groupoid_colimit(const FiniteGroupoid& g, const GroupoidDiagram& d,
                                      bool validate = false) {
  ColimitResult out;
  auto gens = g.group.generators();

  // Orbit decomposition with transports to the orbit seed.
  std::map<std::string, GroupElem> from_seed; // o -> h with h . seed = o
  std::map<std::string, std::size_t> orbit_of;
  std::vector<std::pair<std::string, std::vector<std::string>>> orbits; // (rep, members)
  for (const auto& start : g.objects) {
    if (orbit_of.count(start)) continue;
    std::size_t oi = orbits.size();
    std::vector<std::string> members;
    std::deque<std::string> queue{start};
    from_seed[start] = g.group.identity();
    orbit_of[start] = oi;
    members.push_back(start);
    while (!queue.empty()) {
      std::string o = queue.front();
      queue.pop_front();
      for (const auto& gen : gens) {
        std::string o2 = g.apply(gen, o);
        if (!orbit_of.count(o2)) {
          orbit_of[o2] = oi;
          from_seed[o2] = gen * from_seed[o];
          members.push_back(o2);
          queue.push_back(o2);
        }
      }
    }
    std::string rep = *std::min_element(members.begin(), members.end());
    orbits.emplace_back(rep, std::move(members));
  }

  // Deterministic component order: sort by representative.
  std::vector<std::size_t> order(orbits.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return orbits[a].first < orbits[b].first; });

  out.base = d.base;
  std::vector<std::pair<std::string, BaseObject>> parts;
  for (std::size_t oi : order) {
    const auto& [rep, members] = orbits[oi];
    BaseObject v = d.value(rep);
    if (v.base() != d.base) throw MixedBaseError("diagram value in the wrong base");

    // Transports o -> rep.
    GroupElem seed_to_rep = from_seed[rep].inverse();
    for (const auto& o : members) {
      out.component_of[o] = out.components.size();
      out.to_rep[o] = seed_to_rep * from_seed[o].inverse();
    }

    // Automorphisms of the representative.
    std::vector<BaseMorphism> autos;
    bool need_autos = !(v.base() == Base::FINSET && v.size() <= 1);
    if (need_autos || validate) {
      for (const auto& e : g.group.all()) {
        if (e.is_identity()) continue;
        if (g.apply(e, rep) == rep) autos.push_back(d.map(e, rep));
      }
    }
    if (validate) {
      BaseMorphism idm = d.map(g.group.identity(), rep);
      if (!(idm == BaseMorphism::identity(v)))
        throw NotFunctorialError("D(id) is not the identity at " + rep);
      for (const auto& gen : gens) {
        BaseMorphism step = d.map(gen, rep);
        if (!step.is_invertible())
          throw NotInvertibleError("D(g) not invertible at " + rep + ", g=" + gen.encode());
        std::string mid = g.apply(gen, rep);
        for (const auto& gen2 : gens) {
          BaseMorphism lhs = d.map(gen2, mid).after(step);
          BaseMorphism rhs = d.map(gen2 * gen, rep);
          if (!(lhs == rhs))
            throw NotFunctorialError("composition violated at " + rep + ", g=" + gen.encode() +
                                     ", h=" + gen2.encode());
        }
      }
    }

    auto [q, proj] = v.base() == Base::FINSET
                         ? (need_autos ? detail::finset_quotient(v, autos)
                                       : std::make_pair(v, BaseMorphism::identity(v)))
                         : detail::vectq_quotient(v, autos);
    out.components.push_back(ColimComponent{rep, q, proj, 0});
    parts.emplace_back(rep, q);
  }

  Coproduct cp = coproduct(parts, out.base);
  out.obj = cp.obj;
  std::size_t offset = 0;
  for (auto& comp : out.components) {
    comp.offset = offset;
    offset += comp.quotient.size();
    // Re-target proj through the final labels: quotient labels are reused,
    // so only the injection offset matters; keep proj as D(rep) -> quotient.
  }
  return out;
}

/// Universal property of the colimit: verify the cocone condition on every
/// generating arrow and return the induced morphism colim D -> T.
inline BaseMorphism descend(const FiniteGroupoid& g, const GroupoidDiagram& d,
                            const ColimitResult& colim,
                            const std::function<BaseMorphism(const std::string&)>& cocone,
                            const BaseObject& target) {
  auto gens = g.group.generators();
  for (const auto& o : g.objects) {
    BaseMorphism phi_o = cocone(o);
    for (const auto& gen : gens) {
      std::string o2 = g.apply(gen, o);
      if (!(cocone(o2).after(d.map(gen, o)) == phi_o))
        throw DescentError("cocone violated at arrow g=" + gen.encode() + " from " + o);
    }
  }
  // Also check the cocone against representative automorphisms (the
  // generating arrows connect objects; automorphisms of representatives are
  // exactly what the quotients divide by, and their compatibility is what
  // factor_through_surjection verifies below).
  if (colim.obj.base() == Base::FINSET) {
    std::vector<std::size_t> fn(colim.obj.size());
    for (const auto& comp : colim.components) {
      BaseMorphism induced = factor_through_surjection(comp.proj, cocone(comp.rep));
      for (std::size_t i = 0; i < comp.quotient.size(); ++i)
        fn[comp.offset + i] = induced.apply(i);
    }
    return BaseMorphism::finset(colim.obj, target, std::move(fn));
  }
  Matrix mat(target.size(), colim.obj.size());
  for (const auto& comp : colim.components) {
    BaseMorphism induced = factor_through_surjection(comp.proj, cocone(comp.rep));
    for (std::size_t i = 0; i < comp.quotient.size(); ++i)
      for (std::size_t r = 0; r < target.size(); ++r)
        mat(r, comp.offset + i) = induced.matrix()(r, i);
  }
  return BaseMorphism::vectq(colim.obj, target, std::move(mat));
}

} // namespace opcal
