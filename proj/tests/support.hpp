// Shared fixtures for the test suites: the four example states, seeded
// random tensors and an independent singular-value oracle.
#ifndef UEIG_TESTS_SUPPORT_HPP
#define UEIG_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ueig/tensor.hpp"

namespace ueig::test {

inline std::vector<cplx> example_entries(int ex) {
  std::vector<cplx> e(8, 0.0);
  const double s3 = std::sqrt(3.0) / 6.0;
  auto at = [&](int i, int j, int k) -> cplx& { return e[(i - 1) * 4 + (j - 1) * 2 + (k - 1)]; };
  switch (ex) {
    case 1:
      at(1, 1, 1) = 0.5;
      at(2, 2, 1) = at(2, 1, 2) = at(1, 2, 2) = s3;
      at(1, 1, 2) = cplx(0.5, 0.5);
      break;
    case 2:
      at(1, 1, 1) = 1.0 / 6.0;
      at(2, 2, 2) = cplx(0.0, 2.0 / 3.0);
      at(2, 1, 2) = cplx(std::sqrt(1.0 / 3.0), 1.0 / 3.0);
      at(2, 1, 1) = s3;
      break;
    case 3:
      for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j)
          for (int k = 1; k <= 2; ++k) at(i, j, k) = cplx(std::cos(i - j + k), std::sin(i + j - k)) / std::sqrt(8.0);
      break;
    default:
      for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j)
          for (int k = 1; k <= 2; ++k) at(i, j, k) = std::polar(1.0 / std::sqrt(8.0), double(i + j + k));
  }
  return e;
}

/// Example tensor with detected symmetry.
inline ComplexTensor example(int ex) { return ComplexTensor::with_detected_symmetry({2, 2, 2}, example_entries(ex)); }

inline CVector vec2(cplx a, cplx b) {
  CVector v(2);
  v << a, b;
  return v;
}

/// Reference eigenvectors of the examples, to four digits.
inline RankOneTuple printed(int ex) {
  using c = cplx;
  switch (ex) {
    case 1: {
      CVector z = vec2(-0.9625, c(-0.2242, 0.1530));
      return {{z, z, vec2(c(0.5054, 0.0213), c(0.6308, 0.5883))}};
    }
    case 2:
      return {{vec2(-0.0287, -0.9996), vec2(-0.7404, c(-0.3361, -0.5821)), vec2(0.2248, c(0.8439, 0.4872))}};
    case 3:
      return {{-vec2(0.6928, c(0.6734, 0.2580)), -vec2(0.689, c(0.450, -0.5681)),
               vec2(c(0.1533, 0.7083), c(-0.4375, 0.5324))}};
    default: {
      CVector z = vec2(c(0.382051, 0.59501), c(-0.29426, 0.64297));
      return {{z, z, z}};
    }
  }
}

inline double printed_lambda(int ex) {
  switch (ex) {
    case 1: return 0.9317;
    case 2: return 0.9661;
    case 3: return 0.8895;
    default: return 1.0;
  }
}

/// min over theta of ||a - e^{i theta} b||.
inline double phase_distance(const CVector& a, const CVector& b) {
  const cplx d = b.dot(a);  // sum conj(b) a
  const cplx ph = std::abs(d) > 0 ? d / std::abs(d) : cplx(1.0);
  return (a - ph * b).norm();
}

inline ComplexTensor random_tensor(const std::vector<std::size_t>& dims, std::mt19937_64& rng, bool unit = true) {
  std::normal_distribution<double> g;
  std::vector<cplx> e(detail::product(dims));
  for (auto& x : e) x = cplx(g(rng), g(rng));
  if (unit) {
    double s = 0;
    for (auto& x : e) s += std::norm(x);
    for (auto& x : e) x /= std::sqrt(s);
  }
  return ComplexTensor(dims, std::move(e));
}

inline CVector random_unit(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(g(rng), g(rng));
  return v / v.norm();
}

inline RankOneTuple random_tuple(const std::vector<std::size_t>& dims, std::mt19937_64& rng) {
  RankOneTuple t;
  for (std::size_t n : dims) t.vectors.push_back(random_unit(n, rng));
  return t;
}

/// Largest singular value of a complex matrix from the characteristic
/// polynomial of A^H A: Faddeev-LeVerrier coefficients, Newton from the
/// right of the largest root (monotone for real-rooted polynomials), then
/// bisection on the bracket it leaves.
inline double largest_singular_value(const Eigen::MatrixXcd& a) {
  const Eigen::MatrixXcd h = a.adjoint() * a;
  const Eigen::Index n = h.rows();
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);  // p(x) = sum c_k x^k, c_n = 1
  c[static_cast<std::size_t>(n)] = 1.0;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = h * m + c[static_cast<std::size_t>(n - k + 1)] * Eigen::MatrixXcd::Identity(n, n);
    c[static_cast<std::size_t>(n - k)] = -(h * m).trace().real() / static_cast<double>(k);
  }
  auto p = [&](double x) {
    double v = 0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
  };
  auto dp = [&](double x) {
    double v = 0;
    for (std::size_t k = c.size(); k-- > 1;) v = v * x + static_cast<double>(k) * c[k];
    return v;
  };
  double x = h.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;  // above every eigenvalue
  for (int it = 0; it < 200; ++it) {
    const double d = dp(x);
    if (d == 0) break;
    const double nx = x - p(x) / d;
    if (!(nx < x)) break;
    x = nx;
  }
  double lo = x - 1e-6 * (1 + x), hi = x + 1e-6 * (1 + x);
  while (lo > 0 && (p(lo) > 0) == (p(hi) > 0)) lo -= 1e-6 * (1 + x);
  lo = std::max(lo, 0.0);
  for (int it = 0; it < 200 && hi - lo > 1e-16 * (1 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((p(mid) > 0) == (p(hi) > 0)) hi = mid;
    else lo = mid;
  }
  return std::sqrt(0.5 * (lo + hi));
}

inline Eigen::MatrixXcd as_matrix(const ComplexTensor& a) {
  Eigen::MatrixXcd m(a.dim(0), a.dim(1));
  for (std::size_t i = 0; i < a.dim(0); ++i)
    for (std::size_t j = 0; j < a.dim(1); ++j) m(i, j) = a[i * a.dim(1) + j];
  return m;
}

}  // namespace ueig::test

#endif  // UEIG_TESTS_SUPPORT_HPP
