// Real form of the complex multilinear objective Re<A, x (x^(i) + i y^(i))>.
//
// Each complex mode of size n becomes a real mode of size 2n whose first n
// coordinates are the real part x and the last n the imaginary part y.

#ifndef UEIG_REALIFY_HPP
#define UEIG_REALIFY_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ueig/tensor.hpp"

namespace ueig {

/// Dense real tensor over doubled dimensions (2 n_1, ..., 2 n_m).
class RealTensor {
 public:
  RealTensor(std::vector<std::size_t> complex_dims, std::vector<double> entries)
      : complex_dims_(std::move(complex_dims)), entries_(std::move(entries)) {
    for (std::size_t n : complex_dims_) dims_.push_back(2 * n);
    if (entries_.size() != detail::product(dims_))
      throw DimensionError("real tensor entry count does not match dims");
  }

  std::size_t order() const { return dims_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<std::size_t>& complex_dims() const { return complex_dims_; }
  std::span<const double> entries() const { return entries_; }
  double operator[](std::size_t flat) const { return entries_[flat]; }
  double operator()(std::span<const std::size_t> idx) const {
    std::size_t off = 0;
    for (std::size_t k = 0; k < order(); ++k) off = off * dims_[k] + idx[k];
    return entries_[off];
  }

  /// <B, u^(1) x ... x u^(m-1)> as a vector over the last mode.
  Eigen::VectorXd contract_leading(std::span<const Eigen::VectorXd> us) const {
    const std::size_t m = order();
    if (us.size() + 1 != m) throw DimensionError("contract_leading: need m-1 vectors");
    for (std::size_t k = 0; k + 1 < m; ++k)
      if (static_cast<std::size_t>(us[k].size()) != dims_[k])
        throw DimensionError("contract_leading: vector length mismatch");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dims_.back()));
    std::vector<std::size_t> idx(m, 0);
    std::size_t flat = 0;
    do {
      double p = entries_[flat++];
      for (std::size_t k = 0; k + 1 < m; ++k) p *= us[k](static_cast<Eigen::Index>(idx[k]));
      out(static_cast<Eigen::Index>(idx[m - 1])) += p;
    } while (detail::next_index(idx, dims_));
    return out;
  }

  /// <B, u^(1) x ... x u^(m)>.
  double contract_all(std::span<const Eigen::VectorXd> us) const {
    if (us.size() != order()) throw DimensionError("contract_all: need m vectors");
    return contract_leading(us.first(order() - 1)).dot(us.back());
  }

  bool invariant_under_swap(std::size_t i, std::size_t j, double tol = 1e-12) const {
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
  std::vector<std::size_t> complex_dims_;
  std::vector<std::size_t> dims_;
  std::vector<double> entries_;
};

/// B with <B, x u^(i)> = Re<A, x (x^(i) + i y^(i))> for u^(i) = (x^(i), y^(i)).
///
/// An entry whose block pattern selects p imaginary coordinates equals
/// Re(conj(A_i) * i^p).
inline RealTensor realify(const ComplexTensor& a) {
  const auto& cd = a.dims();
  std::vector<std::size_t> rd;
  for (std::size_t n : cd) rd.push_back(2 * n);
  std::vector<double> e(detail::product(rd));
  std::vector<std::size_t> idx(rd.size(), 0), cidx(rd.size());
  std::size_t flat = 0;
  do {
    unsigned p = 0;
    for (std::size_t k = 0; k < rd.size(); ++k) {
      const bool imag = idx[k] >= cd[k];
      cidx[k] = imag ? idx[k] - cd[k] : idx[k];
      p += imag ? 1u : 0u;
    }
    const cplx c = std::conj(a(cidx));
    switch (p % 4) {
      case 0: e[flat] = c.real(); break;
      case 1: e[flat] = -c.imag(); break;
      case 2: e[flat] = -c.real(); break;
      default: e[flat] = c.imag(); break;
    }
    ++flat;
  } while (detail::next_index(idx, rd));
  return RealTensor(cd, std::move(e));
}

/// z_j = u_j + i u_{n+j}.
inline CVector complexify(const Eigen::VectorXd& u) {
  if (u.size() % 2 != 0) throw DimensionError("complexify: odd-length real vector");
  const Eigen::Index n = u.size() / 2;
  CVector z(n);
  for (Eigen::Index j = 0; j < n; ++j) z(j) = cplx(u(j), u(n + j));
  return z;
}

/// Inverse of complexify: u = (Re z, Im z).
inline Eigen::VectorXd realify_vector(const CVector& z) {
  const Eigen::Index n = z.size();
  Eigen::VectorXd u(2 * n);
  u.head(n) = z.real();
  u.tail(n) = z.imag();
  return u;
}

}  // namespace ueig

#endif  // UEIG_REALIFY_HPP
