// Local-search lower bounds for the largest U-eigenvalue.
#ifndef UEIG_ORACLE_HPP
#define UEIG_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "ueig/extraction.hpp"
#include "ueig/tensor.hpp"

namespace ueig {

struct HopmResult {
  double lambda = 0.0;
  RankOneTuple vectors;
  double residual = 0.0;
  std::vector<double> values;  ///< converged value of each restart
};

namespace detail {

inline CVector random_unit(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(g(rng), g(rng));
  return v / v.norm();
}

inline RankOneTuple random_tuple(const ComplexTensor& a, std::mt19937_64& rng) {
  RankOneTuple t;
  for (std::size_t n : a.dims()) t.vectors.push_back(random_unit(n, rng));
  return t;
}

}  // namespace detail

/// Higher-order power method with complex Gaussian restarts. Restart r is
/// seeded from (seed, r), so results do not depend on evaluation order. The
/// best restart is polished before it is returned.
inline HopmResult hopm(const ComplexTensor& a, int restarts = 64, int sweeps = 2000, std::uint64_t seed = 0) {
  if (restarts < 1) throw std::invalid_argument("hopm: restarts must be >= 1");
  HopmResult out;
  out.lambda = -1.0;
  for (int r = 0; r < restarts; ++r) {
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(ss);
    RankOneTuple t = detail::random_tuple(a, rng);
    double lam = contract_all(a, t).real();
    for (int s = 0, reinit = 0; s < sweeps; ++s) {
      bool zero = false;
      for (std::size_t k = 0; k < a.order(); ++k) {
        CVector v = contract_all_but(a, t, k);
        const double nv = v.norm();
        if (nv == 0.0) {
          zero = true;
          break;
        }
        t[k] = v.conjugate() / nv;
      }
      if (zero) {
        if (++reinit > 8) break;
        t = detail::random_tuple(a, rng);
        lam = contract_all(a, t).real();
        continue;
      }
      const double next = contract_all(a, t).real();
      const bool done = std::abs(next - lam) < 1e-12;
      lam = next;
      if (done) break;
    }
    out.values.push_back(lam);
    if (lam > out.lambda) {
      out.lambda = lam;
      out.vectors = t;
    }
  }
  PolishResult p = polish(a, out.vectors);
  if (p.lambda >= out.lambda) {
    out.lambda = p.lambda;
    out.vectors = p.vectors;
  }
  out.lambda = std::max(out.lambda, 0.0);
  out.residual = residual(a, out.lambda, out.vectors);
  return out;
}

struct GridBand {
  double lower = 0.0;  ///< best polished value
  double upper = 0.0;  ///< lower plus a Lipschitz covering bound
  RankOneTuple best;
  std::size_t points = 0;
};

namespace detail {

/// Unit vector in C^n with real non-negative first component from 2n-2
/// hyperspherical angles.
inline CVector hemisphere_point(std::size_t n, const std::vector<double>& ang) {
  const std::size_t d = 2 * n - 1;
  std::vector<double> w(d);
  double s = 1.0;
  for (std::size_t j = 0; j + 1 < d; ++j) {
    w[j] = s * std::cos(ang[j]);
    s *= std::sin(ang[j]);
  }
  w[d - 1] = s;
  if (d == 1) w[0] = 1.0;
  CVector z(static_cast<Eigen::Index>(n));
  z(0) = w[0];
  for (std::size_t j = 1; j < n; ++j) z(static_cast<Eigen::Index>(j)) = cplx(w[2 * j - 1], w[2 * j]);
  return z;
}

}  // namespace detail

/// Brute force over a cell-centred angle grid on the first m-1 modes (modulo
/// phase), with the last mode and lambda in closed form, followed by a polish
/// from every grid point. Requires sum over the first m-1 modes of 2 n_k <= 8.
inline GridBand grid_certify_small(const ComplexTensor& a, int resolution = 8) {
  const std::size_t m = a.order();
  std::size_t real_dim = 0;
  for (std::size_t k = 0; k + 1 < m; ++k) real_dim += 2 * a.dim(k);
  if (real_dim > 8) throw std::invalid_argument("grid_certify_small: more than 8 real dimensions");
  if (resolution < 1) throw std::invalid_argument("grid_certify_small: resolution must be positive");
  const double pi = std::numbers::pi;

  struct Axis {
    std::size_t mode, slot;
    double width;
  };
  std::vector<Axis> axes;
  std::vector<double> radius(m, 0.0);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const std::size_t nang = 2 * a.dim(k) - 2;
    double sq = 0.0;
    for (std::size_t j = 0; j < nang; ++j) {
      const double range = j == 0 ? pi / 2 : (j + 1 == nang ? 2 * pi : pi);
      axes.push_back({k, j, range / resolution});
      sq += std::pow(range / resolution / 2, 2);
    }
    radius[k] = std::sqrt(sq);
  }

  GridBand band;
  const double fro = a.frobenius_norm();
  if (fro == 0.0) {
    for (std::size_t n : a.dims()) band.best.vectors.push_back(CVector::Unit(static_cast<Eigen::Index>(n), 0));
    return band;
  }
  std::vector<int> counter(axes.size(), 0);
  double grid_best = 0.0;
  band.lower = -1.0;
  while (true) {
    std::vector<std::vector<double>> ang(m);
    for (std::size_t i = 0; i < axes.size(); ++i) ang[axes[i].mode].push_back((counter[i] + 0.5) * axes[i].width);
    RankOneTuple t;
    for (std::size_t k = 0; k + 1 < m; ++k) t.vectors.push_back(detail::hemisphere_point(a.dim(k), ang[k]));
    t.vectors.push_back(CVector::Unit(static_cast<Eigen::Index>(a.dim(m - 1)), 0));
    CVector v = contract_all_but(a, t, m - 1);
    const double g = v.norm();
    grid_best = std::max(grid_best, g);
    if (g > 0.0) t[m - 1] = v.conjugate() / g;
    PolishResult p = polish(a, t);
    if (p.lambda > band.lower) {
      band.lower = p.lambda;
      band.best = p.vectors;
    }
    ++band.points;
    std::size_t i = 0;
    for (; i < axes.size(); ++i) {
      if (++counter[i] < resolution) break;
      counter[i] = 0;
    }
    if (i == axes.size()) break;
  }
  double cover = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) cover += radius[k];
  band.lower = std::max(band.lower, 0.0);
  band.upper = std::max(band.lower, std::min(fro, grid_best + fro * cover));
  return band;
}

}  // namespace ueig

#endif  // UEIG_ORACLE_HPP
