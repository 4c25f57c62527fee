#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "opcal/errors.hpp"
#include "opcal/matrix.hpp"
#include "opcal/perm.hpp"

namespace opcal {

enum class Base { FINSET, VECTQ };

inline std::string base_name(Base b) { return b == Base::FINSET ? "finset" : "vectq"; }

inline constexpr const char* kUnitLabel = "•"; // "•"

/// An object of one of the two concrete base categories: a finite set with
/// labeled elements, or a finite-dimensional rational vector space with a
/// labeled basis.  Tensor products are stored structurally, with element
/// labels generated on demand, so large products stay cheap.
class BaseObject {
public:
  BaseObject() : base_(Base::FINSET) {}

  BaseObject(Base base, std::vector<std::string> labels) : base_(base), size_(labels.size()) {
    std::set<std::string> seen;
    for (const auto& l : labels)
      if (!seen.insert(l).second)
        throw ValidationError("BaseObject: duplicate label '" + l + "'");
    labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
  }

  static BaseObject initial(Base base) { return BaseObject(base, {}); }
  static BaseObject unit(Base base) { return BaseObject(base, {kUnitLabel}); }

  /// The tensor/cartesian product of the listed factors, row-major (last
  /// factor varies fastest).  Requires a nonempty factor list.
  static BaseObject product(std::vector<BaseObject> factors) {
    BaseObject out;
    out.base_ = factors.front().base();
    out.size_ = 1;
    for (const auto& f : factors) out.size_ *= f.size();
    out.factors_ = std::make_shared<const std::vector<BaseObject>>(std::move(factors));
    return out;
  }

  Base base() const { return base_; }
  std::size_t size() const { return size_; }
  bool is_initial() const { return size_ == 0; }

  std::string label(std::size_t i) const {
    if (labels_) return (*labels_)[i];
    const auto& fac = *factors_;
    std::string s = "(";
    std::vector<std::size_t> idx(fac.size());
    for (std::size_t k = fac.size(); k-- > 0;) {
      idx[k] = i % fac[k].size();
      i /= fac[k].size();
    }
    for (std::size_t k = 0; k < fac.size(); ++k) {
      if (k) s += ',';
      s += fac[k].label(idx[k]);
    }
    s += ')';
    return s;
  }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < size_; ++i)
      if (this->label(i) == label) return i;
    throw ValidationError("BaseObject: unknown label '" + label + "'");
  }

  bool operator==(const BaseObject& o) const {
    if (base_ != o.base_ || size_ != o.size_) return false;
    if (labels_ == o.labels_ && factors_ == o.factors_) return true;
    if (factors_ && o.factors_) return *factors_ == *o.factors_;
    if (labels_ && o.labels_) return *labels_ == *o.labels_;
    for (std::size_t i = 0; i < size_; ++i)
      if (label(i) != o.label(i)) return false;
    return true;
  }
  bool operator!=(const BaseObject& o) const { return !(*this == o); }

private:
  Base base_;
  std::size_t size_ = 0;
  std::shared_ptr<const std::vector<std::string>> labels_;
  std::shared_ptr<const std::vector<BaseObject>> factors_;
};

/// A morphism in the base category: a total function on labels (FINSET) or
/// an exact rational matrix, rows indexed by the target basis (VECTQ).
class BaseMorphism {
public:
  BaseMorphism() = default;

  static BaseMorphism finset(BaseObject src, BaseObject dst, std::vector<std::size_t> fn) {
    if (src.base() != Base::FINSET || dst.base() != Base::FINSET)
      throw MixedBaseError("finset morphism over non-finset objects");
    if (fn.size() != src.size())
      throw ValidationError("finset morphism: table size mismatch");
    for (std::size_t v : fn)
      if (v >= dst.size()) throw ValidationError("finset morphism: value out of range");
    BaseMorphism m;
    m.src_ = std::move(src);
    m.dst_ = std::move(dst);
    m.fn_ = std::move(fn);
    return m;
  }

  static BaseMorphism vectq(BaseObject src, BaseObject dst, Matrix mat) {
    if (src.base() != Base::VECTQ || dst.base() != Base::VECTQ)
      throw MixedBaseError("vectq morphism over non-vectq objects");
    if (mat.rows() != dst.size() || mat.cols() != src.size())
      throw ValidationError("vectq morphism: matrix shape mismatch");
    BaseMorphism m;
    m.src_ = std::move(src);
    m.dst_ = std::move(dst);
    m.mat_ = std::move(mat);
    return m;
  }

  static BaseMorphism identity(const BaseObject& obj) {
    if (obj.base() == Base::FINSET) {
      std::vector<std::size_t> fn(obj.size());
      for (std::size_t i = 0; i < fn.size(); ++i) fn[i] = i;
      return finset(obj, obj, std::move(fn));
    }
    return vectq(obj, obj, Matrix::identity(obj.size()));
  }

  /// The unique morphism out of the initial object.
  static BaseMorphism from_initial(const BaseObject& dst) {
    BaseObject src = BaseObject::initial(dst.base());
    if (dst.base() == Base::FINSET) return finset(src, dst, {});
    return vectq(src, dst, Matrix(dst.size(), 0));
  }

  const BaseObject& source() const { return src_; }
  const BaseObject& target() const { return dst_; }
  Base base() const { return src_.base(); }

  /// FINSET only: image index of source element i.
  std::size_t apply(std::size_t i) const { return fn_[i]; }
  const std::vector<std::size_t>& table() const { return fn_; }
  const Matrix& matrix() const { return mat_; }

  /// Composition: (g.after(f))(x) = g(f(x)).
  BaseMorphism after(const BaseMorphism& f) const {
    if (!(f.dst_ == src_))
      throw ValidationError("BaseMorphism composition: middle objects differ");
    if (base() == Base::FINSET) {
      std::vector<std::size_t> fn(f.fn_.size());
      for (std::size_t i = 0; i < fn.size(); ++i) fn[i] = fn_[f.fn_[i]];
      return finset(f.src_, dst_, std::move(fn));
    }
    return vectq(f.src_, dst_, mat_ * f.mat_);
  }

  bool is_invertible() const {
    if (base() == Base::FINSET) {
      if (src_.size() != dst_.size()) return false;
      std::vector<bool> hit(dst_.size(), false);
      for (std::size_t v : fn_) {
        if (hit[v]) return false;
        hit[v] = true;
      }
      return true;
    }
    return mat_.is_invertible();
  }

  BaseMorphism inverse() const {
    if (!is_invertible()) throw NotInvertibleError("inverse of non-invertible morphism");
    if (base() == Base::FINSET) {
      std::vector<std::size_t> fn(src_.size());
      for (std::size_t i = 0; i < fn_.size(); ++i) fn[fn_[i]] = i;
      return finset(dst_, src_, std::move(fn));
    }
    return vectq(dst_, src_, mat_.inverse());
  }

  bool operator==(const BaseMorphism& o) const {
    return src_ == o.src_ && dst_ == o.dst_ && fn_ == o.fn_ && mat_ == o.mat_;
  }
  bool operator!=(const BaseMorphism& o) const { return !(*this == o); }

private:
  BaseObject src_, dst_;
  std::vector<std::size_t> fn_;
  Matrix mat_;
};

// ---------------------------------------------------------------------------
// Tensor products
// ---------------------------------------------------------------------------

inline std::string tuple_label(const std::vector<std::string>& parts) {
  std::string s = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ',';
    s += parts[i];
  }
  return s + ")";
}

/// n-ary tensor product with flat tuple labels "(l1,...,lk)".  The index
/// order is row-major: the last factor varies fastest.  The empty tensor is
/// the monoidal unit.
inline BaseObject tensor_many(const std::vector<BaseObject>& objs, Base base_if_empty) {
  Base base = objs.empty() ? base_if_empty : objs.front().base();
  for (const auto& o : objs)
    if (o.base() != base) throw MixedBaseError("tensor of objects over different bases");
  if (objs.empty()) return BaseObject::unit(base);
  return BaseObject::product(objs);
}

inline BaseObject tensor(const BaseObject& a, const BaseObject& b) {
  if (a.base() != b.base()) throw MixedBaseError("tensor(a, b) with different base tags");
  return tensor_many({a, b}, a.base());
}

/// Combined row-major index into a tensor product from per-factor indices.
inline std::size_t tensor_index(const std::vector<BaseObject>& objs,
                                const std::vector<std::size_t>& idx) {
  std::size_t out = 0;
  for (std::size_t k = 0; k < objs.size(); ++k) out = out * objs[k].size() + idx[k];
  return out;
}

inline std::vector<std::size_t> tensor_unindex(const std::vector<BaseObject>& objs,
                                               std::size_t index) {
  std::vector<std::size_t> idx(objs.size());
  for (std::size_t k = objs.size(); k-- > 0;) {
    idx[k] = index % objs[k].size();
    index /= objs[k].size();
  }
  return idx;
}

inline BaseMorphism tensor_many_mor(const std::vector<BaseMorphism>& ms, Base base_if_empty) {
  std::vector<BaseObject> srcs, dsts;
  for (const auto& m : ms) {
    srcs.push_back(m.source());
    dsts.push_back(m.target());
  }
  BaseObject src = tensor_many(srcs, base_if_empty);
  BaseObject dst = tensor_many(dsts, base_if_empty);
  if (src.base() == Base::FINSET) {
    std::vector<std::size_t> fn(src.size());
    std::vector<std::size_t> idx(ms.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
      std::size_t rem = i;
      for (std::size_t k = ms.size(); k-- > 0;) {
        idx[k] = rem % srcs[k].size();
        rem /= srcs[k].size();
      }
      std::size_t out = 0;
      for (std::size_t k = 0; k < ms.size(); ++k) out = out * dsts[k].size() + ms[k].apply(idx[k]);
      fn[i] = out;
    }
    return BaseMorphism::finset(std::move(src), std::move(dst), std::move(fn));
  }
  Matrix mat = Matrix::identity(1);
  for (const auto& m : ms) mat = mat.kronecker(m.matrix());
  return BaseMorphism::vectq(std::move(src), std::move(dst), std::move(mat));
}

inline BaseMorphism tensor_mor(const BaseMorphism& a, const BaseMorphism& b) {
  return tensor_many_mor({a, b}, a.base());
}

/// The canonical isomorphism tensor_many(objs) -> tensor_many(sigma . objs)
/// permuting tensor factors.
inline BaseMorphism factor_permutation(const std::vector<BaseObject>& objs,
                                       const Permutation& sigma, Base base_if_empty) {
  std::vector<BaseObject> permuted = sigma.apply(objs);
  BaseObject src = tensor_many(objs, base_if_empty);
  BaseObject dst = tensor_many(permuted, base_if_empty);
  // Row-major strides of the permuted factors; factor k lands at slot
  // sigma(k), so its digit is scaled by the stride there.
  std::vector<std::size_t> stride(objs.size(), 1);
  for (std::size_t j = objs.size(); j-- > 1;) stride[j - 1] = stride[j] * permuted[j].size();
  std::vector<std::size_t> fn(src.size());
  std::vector<std::size_t> idx(objs.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    std::size_t rem = i;
    std::size_t out = 0;
    for (std::size_t k = objs.size(); k-- > 0;) {
      idx[k] = rem % objs[k].size();
      rem /= objs[k].size();
      out += idx[k] * stride[sigma(k)];
    }
    fn[i] = out;
  }
  if (src.base() == Base::FINSET)
    return BaseMorphism::finset(std::move(src), std::move(dst), std::move(fn));
  Matrix mat(dst.size(), src.size());
  for (std::size_t i = 0; i < fn.size(); ++i) mat(fn[i], i) = Rational(1);
  return BaseMorphism::vectq(std::move(src), std::move(dst), std::move(mat));
}

/// Relabeling isomorphism between equal-size objects matched by position.
inline BaseMorphism positional_iso(const BaseObject& src, const BaseObject& dst) {
  if (src.size() != dst.size()) throw ValidationError("positional_iso: size mismatch");
  if (src.base() == Base::FINSET) {
    std::vector<std::size_t> fn(src.size());
    for (std::size_t i = 0; i < fn.size(); ++i) fn[i] = i;
    return BaseMorphism::finset(src, dst, std::move(fn));
  }
  return BaseMorphism::vectq(src, dst, Matrix::identity(src.size()));
}

// ---------------------------------------------------------------------------
// Internal hom
// ---------------------------------------------------------------------------

/// FINSET: the object of all functions a -> b, labeled by value tuples in
/// source-label order, enumerated lexicographically (first source label most
/// significant).  VECTQ: basis (a_i*, b_j), a-major.
inline BaseObject internal_hom(const BaseObject& a, const BaseObject& b) {
  if (a.base() != b.base()) throw MixedBaseError("internal_hom(a, b) with different base tags");
  if (a.base() == Base::FINSET) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
      count *= b.size();
      if (b.size() == 0) break;
    }
    if (a.size() == 0) count = 1;
    std::vector<std::string> labels;
    if (b.size() == 0 && a.size() > 0) return BaseObject::initial(Base::FINSET);
    labels.reserve(count);
    std::vector<std::size_t> table(a.size(), 0);
    for (std::size_t c = 0; c < count; ++c) {
      std::vector<std::string> parts(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) parts[i] = b.label(table[i]);
      labels.push_back("[" + [&] {
        std::string s;
        for (std::size_t i = 0; i < parts.size(); ++i) {
          if (i) s += ',';
          s += parts[i];
        }
        return s;
      }() + "]");
      for (std::size_t i = a.size(); i-- > 0;) {
        if (++table[i] < b.size()) break;
        table[i] = 0;
      }
    }
    return BaseObject(Base::FINSET, std::move(labels));
  }
  std::vector<std::string> labels;
  labels.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      labels.push_back("(" + a.label(i) + "*," + b.label(j) + ")");
  return BaseObject(Base::VECTQ, std::move(labels));
}

/// Index of a FINSET hom element from its value table, and back.
inline std::size_t hom_index_from_table(const BaseObject& a, const BaseObject& b,
                                        const std::vector<std::size_t>& table) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < a.size(); ++i) idx = idx * b.size() + table[i];
  return idx;
}

inline std::vector<std::size_t> hom_table_from_index(const BaseObject& a, const BaseObject& b,
                                                     std::size_t idx) {
  std::vector<std::size_t> table(a.size());
  for (std::size_t i = a.size(); i-- > 0;) {
    table[i] = idx % b.size();
    idx /= b.size();
  }
  return table;
}

/// Evaluation morphism internal_hom(a, b) (x) a -> b.
inline BaseMorphism hom_evaluation(const BaseObject& a, const BaseObject& b) {
  BaseObject hom = internal_hom(a, b);
  BaseObject src = tensor(hom, a);
  if (a.base() == Base::FINSET) {
    std::vector<std::size_t> fn(src.size());
    for (std::size_t h = 0; h < hom.size(); ++h) {
      auto table = hom_table_from_index(a, b, h);
      for (std::size_t x = 0; x < a.size(); ++x) fn[h * a.size() + x] = table[x];
    }
    return BaseMorphism::finset(std::move(src), b, std::move(fn));
  }
  Matrix mat(b.size(), src.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      mat(j, (i * b.size() + j) * a.size() + i) = Rational(1);
  return BaseMorphism::vectq(std::move(src), b, std::move(mat));
}

/// Curry the last tensor factor: from h : (A_1 (x) ... (x) A_k) (x) B -> C
/// (with domain tensor_many(front ++ [B])) produce B -> hom(tensor_many(front), C).
inline BaseMorphism curry_last(const BaseMorphism& h, const std::vector<BaseObject>& front,
                               const BaseObject& b) {
  Base base = h.base();
  BaseObject a = tensor_many(front, base);
  const BaseObject& c = h.target();
  BaseObject hom = internal_hom(a, c);
  if (base == Base::FINSET) {
    std::vector<std::size_t> fn(b.size());
    for (std::size_t bi = 0; bi < b.size(); ++bi) {
      std::vector<std::size_t> table(a.size());
      for (std::size_t ai = 0; ai < a.size(); ++ai) table[ai] = h.apply(ai * b.size() + bi);
      fn[bi] = hom_index_from_table(a, c, table);
    }
    return BaseMorphism::finset(b, std::move(hom), std::move(fn));
  }
  Matrix mat(hom.size(), b.size());
  for (std::size_t bi = 0; bi < b.size(); ++bi)
    for (std::size_t ai = 0; ai < a.size(); ++ai)
      for (std::size_t cj = 0; cj < c.size(); ++cj)
        mat(ai * c.size() + cj, bi) = h.matrix()(cj, ai * b.size() + bi);
  return BaseMorphism::vectq(b, std::move(hom), std::move(mat));
}

/// Inverse of curry_last: from g : B -> hom(tensor_many(front), C) produce
/// tensor_many(front ++ [B]) -> C.
inline BaseMorphism uncurry_last(const BaseMorphism& g, const std::vector<BaseObject>& front,
                                 const BaseObject& c) {
  Base base = g.base();
  BaseObject a = tensor_many(front, base);
  const BaseObject& b = g.source();
  std::vector<BaseObject> all = front;
  all.push_back(b);
  BaseObject src = tensor_many(all, base);
  if (base == Base::FINSET) {
    std::vector<std::size_t> fn(src.size());
    for (std::size_t ai = 0; ai < a.size(); ++ai)
      for (std::size_t bi = 0; bi < b.size(); ++bi) {
        auto table = hom_table_from_index(a, c, g.apply(bi));
        fn[ai * b.size() + bi] = table[ai];
      }
    return BaseMorphism::finset(std::move(src), c, std::move(fn));
  }
  Matrix mat(c.size(), src.size());
  for (std::size_t bi = 0; bi < b.size(); ++bi)
    for (std::size_t ai = 0; ai < a.size(); ++ai)
      for (std::size_t cj = 0; cj < c.size(); ++cj)
        mat(cj, ai * b.size() + bi) = g.matrix()(ai * c.size() + cj, bi);
  return BaseMorphism::vectq(std::move(src), c, std::move(mat));
}

// ---------------------------------------------------------------------------
// Coproducts and factorizations
// ---------------------------------------------------------------------------

struct Coproduct {
  BaseObject obj;
  std::map<std::string, BaseMorphism> injections; // keyed by part tag
};

/// Coproduct with labels "tag::label" so distinct parts stay disjoint.
inline Coproduct coproduct(const std::vector<std::pair<std::string, BaseObject>>& parts,
                           Base base_if_empty) {
  Base base = parts.empty() ? base_if_empty : parts.front().second.base();
  std::vector<std::string> labels;
  for (const auto& [tag, o] : parts)
    for (std::size_t i = 0; i < o.size(); ++i) labels.push_back(tag + "::" + o.label(i));
  BaseObject total(base, std::move(labels));
  Coproduct out{total, {}};
  std::size_t offset = 0;
  for (const auto& [tag, o] : parts) {
    if (base == Base::FINSET) {
      std::vector<std::size_t> fn(o.size());
      for (std::size_t i = 0; i < o.size(); ++i) fn[i] = offset + i;
      out.injections.emplace(tag, BaseMorphism::finset(o, total, std::move(fn)));
    } else {
      Matrix mat(total.size(), o.size());
      for (std::size_t i = 0; i < o.size(); ++i) mat(offset + i, i) = Rational(1);
      out.injections.emplace(tag, BaseMorphism::vectq(o, total, std::move(mat)));
    }
    offset += o.size();
  }
  return out;
}

/// Given a surjection s : A -> B and t : A -> C constant on the fibres of s,
/// return the induced morphism B -> C.  Throws DescentError if t does not
/// factor through s.
inline BaseMorphism factor_through_surjection(const BaseMorphism& s, const BaseMorphism& t) {
  if (!(s.source() == t.source()))
    throw ValidationError("factor_through_surjection: sources differ");
  if (s.base() == Base::FINSET) {
    const std::size_t bsize = s.target().size();
    std::vector<std::size_t> fn(bsize, SIZE_MAX);
    for (std::size_t a = 0; a < s.source().size(); ++a) {
      std::size_t b = s.apply(a);
      if (fn[b] == SIZE_MAX)
        fn[b] = t.apply(a);
      else if (fn[b] != t.apply(a))
        throw DescentError("map not constant on fibre of '" + s.target().label(b) + "'");
    }
    for (std::size_t b = 0; b < bsize; ++b)
      if (fn[b] == SIZE_MAX) throw ValidationError("factor_through_surjection: s not surjective");
    return BaseMorphism::finset(s.target(), t.target(), std::move(fn));
  }
  Matrix x;
  try {
    x = s.matrix().solve_left(t.matrix());
  } catch (const std::invalid_argument& e) {
    throw DescentError(std::string("linear factorization failed: ") + e.what());
  }
  return BaseMorphism::vectq(s.target(), t.target(), std::move(x));
}

/// All FINSET morphisms a -> b, in lexicographic table order.
inline std::vector<BaseMorphism> all_functions(const BaseObject& a, const BaseObject& b) {
  if (a.base() != Base::FINSET || b.base() != Base::FINSET)
    throw InfiniteEnumerationError("all_functions requires FINSET objects");
  std::vector<BaseMorphism> out;
  if (b.size() == 0 && a.size() > 0) return out;
  std::size_t count = 1;
  for (std::size_t i = 0; i < a.size(); ++i) count *= b.size();
  std::vector<std::size_t> table(a.size(), 0);
  for (std::size_t c = 0; c < count; ++c) {
    out.push_back(BaseMorphism::finset(a, b, table));
    for (std::size_t i = a.size(); i-- > 0;) {
      if (++table[i] < b.size()) break;
      table[i] = 0;
    }
  }
  return out;
}

} // namespace opcal
