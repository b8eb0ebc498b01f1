// Dense complex tensors, rank-one tuples and U-eigenpair residuals.
//
// Conjugation convention: every inner product conjugates its FIRST argument,
//   <A, B> = sum conj(A_i) B_i,
// and <A, z1 x ... x zm> conjugates the tensor entries only. The literature
// varies on this; all modules of this library follow the first-argument rule.

#ifndef UEIG_TENSOR_HPP
#define UEIG_TENSOR_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ueig {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;

/// Thrown when operand shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a declared symmetry does not hold for the given entries.
class SymmetryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Symmetry declared for a tensor. Mode indices are zero-based.
class SymmetryClass {
 public:
  enum class Kind { None, Partial, Full };

  static SymmetryClass none() { return SymmetryClass(Kind::None, {}); }
  static SymmetryClass full() { return SymmetryClass(Kind::Full, {}); }
  static SymmetryClass partial(std::vector<std::vector<std::size_t>> groups) {
    for (auto& g : groups) std::sort(g.begin(), g.end());
    std::sort(groups.begin(), groups.end());
    return SymmetryClass(Kind::Partial, std::move(groups));
  }

  Kind kind() const { return kind_; }
  const std::vector<std::vector<std::size_t>>& groups() const { return groups_; }

  /// Groups of modes that are mutually interchangeable, for any kind.
  std::vector<std::vector<std::size_t>> mode_groups(std::size_t order) const {
    if (kind_ == Kind::Full) {
      std::vector<std::size_t> all(order);
      std::iota(all.begin(), all.end(), std::size_t{0});
      return {all};
    }
    return groups_;
  }

  /// Checks the group invariants against a tensor order.
  void validate(std::size_t order) const {
    if (kind_ != Kind::Partial) return;
    std::vector<bool> seen(order, false);
    for (const auto& g : groups_) {
      if (g.size() < 2) throw SymmetryError("symmetry group must contain at least two modes");
      for (std::size_t k : g) {
        if (k >= order) throw SymmetryError("symmetry group mode out of range");
        if (seen[k]) throw SymmetryError("symmetry groups must be disjoint");
        seen[k] = true;
      }
    }
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::None: return "none";
      case Kind::Full: return "full";
      case Kind::Partial: break;
    }
    std::string s = "partial:[";
    for (std::size_t i = 0; i < groups_.size(); ++i) {
      if (i) s += ",";
      s += "[";
      for (std::size_t j = 0; j < groups_[i].size(); ++j) {
        if (j) s += ",";
        s += std::to_string(groups_[i][j] + 1);
      }
      s += "]";
    }
    return s + "]";
  }

  friend bool operator==(const SymmetryClass&, const SymmetryClass&) = default;

 private:
  SymmetryClass(Kind k, std::vector<std::vector<std::size_t>> g) : kind_(k), groups_(std::move(g)) {}

  Kind kind_;
  std::vector<std::vector<std::size_t>> groups_;
};

namespace detail {

inline std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

/// Advances a row-major multi-index; returns false after the last index.
inline bool next_index(std::vector<std::size_t>& idx, std::span<const std::size_t> dims) {
  for (std::size_t k = dims.size(); k-- > 0;) {
    if (++idx[k] < dims[k]) return true;
    idx[k] = 0;
  }
  return false;
}

/// Row-major strides for dims.
inline std::vector<std::size_t> strides(std::span<const std::size_t> dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

/// Flat offset of the index obtained by swapping modes i and j.
inline std::size_t swapped_offset(const std::vector<std::size_t>& idx,
                                  const std::vector<std::size_t>& st, std::size_t i,
                                  std::size_t j) {
  std::size_t off = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    std::size_t v = k == i ? idx[j] : (k == j ? idx[i] : idx[k]);
    off += v * st[k];
  }
  return off;
}

}  // namespace detail

/// Dense m-way complex array in row-major multi-index order.
///
/// The symmetry class is declared by the caller and verified on construction
/// (entry-wise, tolerance 1e-12); a mismatch throws SymmetryError.
class ComplexTensor {
 public:
  static constexpr double kSymmetryTol = 1e-12;

  ComplexTensor(std::vector<std::size_t> dims, std::vector<cplx> entries,
                SymmetryClass symmetry = SymmetryClass::none())
      : dims_(std::move(dims)), entries_(std::move(entries)), symmetry_(std::move(symmetry)) {
    if (dims_.empty()) throw DimensionError("tensor must have at least one mode");
    for (std::size_t n : dims_)
      if (n == 0) throw DimensionError("tensor dimensions must be positive");
    if (entries_.size() != detail::product(dims_))
      throw DimensionError("entry count does not match the product of dims");
    symmetry_.validate(order());
    verify_symmetry();
  }

  /// Builds a tensor and attaches the largest symmetry class its entries admit.
  static ComplexTensor with_detected_symmetry(std::vector<std::size_t> dims,
                                              std::vector<cplx> entries,
                                              double tol = kSymmetryTol) {
    ComplexTensor t(std::move(dims), std::move(entries));
    t.symmetry_ = detect_symmetry(t, tol);
    return t;
  }

  /// Largest symmetry class satisfied by t's entries.
  static SymmetryClass detect_symmetry(const ComplexTensor& t, double tol = kSymmetryTol) {
    const std::size_t m = t.order();
    // Union-find over modes joined by an invariant transposition.
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (t.invariant_under_swap(i, j, tol)) parent[find(j)] = find(i);
    std::vector<std::vector<std::size_t>> groups(m);
    for (std::size_t k = 0; k < m; ++k) groups[find(k)].push_back(k);
    std::erase_if(groups, [](const auto& g) { return g.size() < 2; });
    if (groups.empty()) return SymmetryClass::none();
    if (groups.size() == 1 && groups.front().size() == m) return SymmetryClass::full();
    return SymmetryClass::partial(std::move(groups));
  }

  std::size_t order() const { return dims_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim(std::size_t k) const { return dims_.at(k); }
  std::size_t size() const { return entries_.size(); }
  std::span<const cplx> entries() const { return entries_; }
  const SymmetryClass& symmetry() const { return symmetry_; }

  const cplx& operator()(std::span<const std::size_t> idx) const { return entries_[offset(idx)]; }
  const cplx& operator[](std::size_t flat) const { return entries_[flat]; }

  std::size_t offset(std::span<const std::size_t> idx) const {
    if (idx.size() != order()) throw DimensionError("multi-index has wrong length");
    std::size_t off = 0;
    for (std::size_t k = 0; k < order(); ++k) {
      if (idx[k] >= dims_[k]) throw DimensionError("multi-index out of range");
      off = off * dims_[k] + idx[k];
    }
    return off;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += std::norm(e);
    return std::sqrt(s);
  }

  /// Same entries with a different declared symmetry (verified).
  ComplexTensor with_symmetry(SymmetryClass s) const { return ComplexTensor(dims_, entries_, std::move(s)); }

  /// Tensor with modes reordered: result mode k is this tensor's mode perm[k].
  ComplexTensor permuted(std::span<const std::size_t> perm) const {
    const std::size_t m = order();
    if (perm.size() != m) throw DimensionError("permutation has wrong length");
    std::vector<std::size_t> nd(m);
    for (std::size_t k = 0; k < m; ++k) nd[k] = dims_.at(perm[k]);
    std::vector<cplx> ne(entries_.size());
    auto st = detail::strides(dims_);
    std::vector<std::size_t> idx(m, 0);
    std::size_t flat = 0;
    do {
      std::size_t src = 0;
      for (std::size_t k = 0; k < m; ++k) src += idx[k] * st[perm[k]];
      ne[flat++] = entries_[src];
    } while (detail::next_index(idx, nd));
    return with_detected_symmetry(std::move(nd), std::move(ne));
  }

  bool invariant_under_swap(std::size_t i, std::size_t j, double tol = kSymmetryTol) const {
    if (dims_[i] != dims_[j]) return false;
    auto st = detail::strides(dims_);
    std::vector<std::size_t> idx(order(), 0);
    std::size_t flat = 0;
    do {
      if (std::abs(entries_[flat] - entries_[detail::swapped_offset(idx, st, i, j)]) > tol) return false;
      ++flat;
    } while (detail::next_index(idx, dims_));
    return true;
  }

 private:
  void verify_symmetry() const {
    for (const auto& g : symmetry_.mode_groups(order()))
      for (std::size_t a = 1; a < g.size(); ++a)
        if (!invariant_under_swap(g[0], g[a]))
          throw SymmetryError("tensor entries are not invariant under the declared symmetry (" +
                              symmetry_.to_string() + ")");
  }

  std::vector<std::size_t> dims_;
  std::vector<cplx> entries_;
  SymmetryClass symmetry_;
};

/// m complex vectors z^(1..m), one per tensor mode.
struct RankOneTuple {
  std::vector<CVector> vectors;

  std::size_t size() const { return vectors.size(); }
  const CVector& operator[](std::size_t k) const { return vectors[k]; }
  CVector& operator[](std::size_t k) { return vectors[k]; }

  bool is_normalized(double tol = 1e-12) const {
    return std::all_of(vectors.begin(), vectors.end(),
                       [tol](const CVector& v) { return std::abs(v.norm() - 1.0) <= tol; });
  }

  RankOneTuple normalized() const {
    RankOneTuple t = *this;
    for (auto& v : t.vectors) v /= v.norm();
    return t;
  }
};

/// Outer product z^(1) x ... x z^(m) as a dense tensor.
inline ComplexTensor outer_product(const RankOneTuple& t) {
  std::vector<std::size_t> dims;
  for (const auto& v : t.vectors) dims.push_back(static_cast<std::size_t>(v.size()));
  std::vector<cplx> e(detail::product(dims));
  std::vector<std::size_t> idx(dims.size(), 0);
  std::size_t flat = 0;
  do {
    cplx p = 1.0;
    for (std::size_t k = 0; k < dims.size(); ++k) p *= t[k](static_cast<Eigen::Index>(idx[k]));
    e[flat++] = p;
  } while (detail::next_index(idx, dims));
  return ComplexTensor(std::move(dims), std::move(e));
}

/// <a, b> = sum conj(a_i) b_i.
inline cplx inner_product(const ComplexTensor& a, const ComplexTensor& b) {
  if (a.dims() != b.dims()) throw DimensionError("inner_product: dimension mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

namespace detail {

inline void check_tuple(const ComplexTensor& a, const RankOneTuple& t, std::size_t skip) {
  if (t.size() != a.order()) throw DimensionError("rank-one tuple has wrong number of vectors");
  for (std::size_t k = 0; k < a.order(); ++k)
    if (k != skip && static_cast<std::size_t>(t[k].size()) != a.dim(k))
      throw DimensionError("rank-one tuple vector length does not match tensor mode");
}

}  // namespace detail

/// <a, x_{i != k} z^(i)>: the vector over mode k, tensor entries conjugated.
/// Slot k of t is ignored.
inline CVector contract_all_but(const ComplexTensor& a, const RankOneTuple& t, std::size_t k) {
  if (k >= a.order()) throw DimensionError("contract_all_but: mode out of range");
  detail::check_tuple(a, t, k);
  const auto& dims = a.dims();
  CVector out = CVector::Zero(static_cast<Eigen::Index>(dims[k]));
  std::vector<std::size_t> idx(dims.size(), 0);
  std::size_t flat = 0;
  do {
    cplx p = std::conj(a[flat++]);
    for (std::size_t i = 0; i < dims.size(); ++i)
      if (i != k) p *= t[i](static_cast<Eigen::Index>(idx[i]));
    out(static_cast<Eigen::Index>(idx[k])) += p;
  } while (detail::next_index(idx, dims));
  return out;
}

/// <a, z^(1) x ... x z^(m)>.
inline cplx contract_all(const ComplexTensor& a, const RankOneTuple& t) {
  CVector v = contract_all_but(a, t, a.order() - 1);
  return (v.array() * t[a.order() - 1].array()).sum();
}

/// max_k || <a, x_{i != k} z^(i)> - lambda conj(z^(k)) ||.
inline double residual(const ComplexTensor& a, double lambda, const RankOneTuple& t) {
  detail::check_tuple(a, t, a.order());
  double r = 0.0;
  for (std::size_t k = 0; k < a.order(); ++k)
    r = std::max(r, (contract_all_but(a, t, k) - lambda * t[k].conjugate()).norm());
  return r;
}

/// The paired eigenpair (-lambda, {eta z^(i)}) with eta = exp(i pi / m).
inline std::pair<double, RankOneTuple> companion_eigenpair(double lambda, const RankOneTuple& t) {
  const double m = static_cast<double>(t.size());
  const cplx eta = std::polar(1.0, std::numbers::pi / m);
  RankOneTuple out = t;
  for (auto& v : out.vectors) v *= eta;
  return {-lambda, std::move(out)};
}

/// Diagnostics attached to a computed eigenpair.
struct Certificate {
  bool certified_global = false;
  bool flat = false;
  std::size_t rank = 0;          ///< numerical rank of the moment matrix
  std::size_t rank_previous = 0; ///< rank of its order N-1 principal block
  double bound_gap = 0.0;        ///< upper_bound - lambda
  double oracle_gap = 0.0;       ///< lambda - lower_bound
  std::string source;            ///< where the eigenvector came from
  bool extraction_flagged = false;
  std::string note;
};

struct EigenpairResult {
  double lambda = 0.0;
  RankOneTuple vectors;
  double residual = 0.0;
  double upper_bound = 0.0;
  double lower_bound = 0.0;
  int order_used = 0;
  Certificate certificate;
};

}  // namespace ueig

#endif  // UEIG_TENSOR_HPP
