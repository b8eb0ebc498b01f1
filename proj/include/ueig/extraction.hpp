// Maximizer recovery from moment vectors, local polishing and certification.
#ifndef UEIG_EXTRACTION_HPP
#define UEIG_EXTRACTION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ueig/moment.hpp"
#include "ueig/realify.hpp"
#include "ueig/tensor.hpp"

namespace ueig {

/// Raised when lambda is too small to recover the excluded block.
class DegenerateStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kLambdaMin = 1e-8;

/// Number of singular values >= tol * sigma_max.
inline std::size_t numerical_rank(const Eigen::MatrixXd& m, double tol = 1e-6) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s(0) <= 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) >= tol * s(0)) ++r;
  return r;
}

struct Flatness {
  std::size_t rank = 0;           ///< rank of M_N
  std::size_t rank_previous = 0;  ///< rank of the degree <= N-1 principal block
  bool flat = false;
};

/// Flat truncation test on a graded-lex moment matrix M_N over nvars variables.
inline Flatness flatness_rank(const Eigen::MatrixXd& m, std::size_t nvars, int order, double tol = 1e-6) {
  Flatness f;
  f.rank = numerical_rank(m, tol);
  const auto prev = static_cast<Eigen::Index>(binomial(nvars + static_cast<std::size_t>(order - 1),
                                                        static_cast<std::size_t>(order - 1)) + 0.5);
  if (order < 1 || prev > m.rows()) throw DimensionError("flatness_rank: matrix smaller than its order implies");
  f.rank_previous = numerical_rank(m.topLeftCorner(prev, prev), tol);
  f.flat = f.rank == f.rank_previous;
  return f;
}

/// Moment matrix of degree t read from a full moment vector.
inline Eigen::MatrixXd truncated_moment_matrix(const MomentIndex& index, const Eigen::VectorXd& y, int t) {
  const std::size_t s = index.count_up_to(t);
  Eigen::MatrixXd m(s, s);
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = a; b < s; ++b)
      m(a, b) = m(b, a) = y(static_cast<Eigen::Index>(
          index.position(add_monomials(index.monomial(a), index.monomial(b)))));
  return m;
}

struct AtomExtraction {
  std::vector<Eigen::VectorXd> atoms;
  int degree = 0;                  ///< truncation degree used
  double commutation_error = 0.0;  ///< max ||N_i N_j - N_j N_i||
  double imaginary_part = 0.0;     ///< largest imaginary eigenvalue component
  bool ok = false;
  std::string message;
};

/// Atoms of a flat moment vector via multiplication matrices on the column
/// space of M_t. t is the smallest degree with rank M_t = rank M_{t-1} = r.
inline AtomExtraction extract_atoms(const MomentIndex& index, const Eigen::VectorXd& y, int max_degree,
                                    double tol = 1e-6, double commute_tol = 1e-4) {
  AtomExtraction out;
  const std::size_t nv = index.nvars();
  if (2 * max_degree > index.max_degree()) throw DimensionError("extract_atoms: degree exceeds moment index");
  if (std::abs(y(0)) <= 0.0) {
    out.message = "zero mass";
    return out;
  }
  std::size_t prev_rank = 1;  // M_0 = [y_0]
  int t = 0;
  std::size_t r = 0;
  for (int d = 1; d <= max_degree; ++d) {
    r = numerical_rank(truncated_moment_matrix(index, y, d), tol);
    if (r == prev_rank) {
      t = d;
      break;
    }
    prev_rank = r;
  }
  if (t == 0) {
    out.message = "no flat truncation";
    return out;
  }
  out.degree = t;
  if (r == 1) {
    Eigen::VectorXd u(nv);
    for (std::size_t i = 0; i < nv; ++i) {
      Monomial e(nv, 0);
      e[i] = 1;
      u(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(index.position(e))) / y(0);
    }
    out.atoms.push_back(u);
    out.ok = true;
    return out;
  }

  const Eigen::MatrixXd mt = truncated_moment_matrix(index, y, t);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mt);
  const auto ri = static_cast<Eigen::Index>(r);
  const Eigen::Index s = mt.rows();
  Eigen::MatrixXd w = es.eigenvectors().rightCols(ri) *
                      es.eigenvalues().tail(ri).cwiseMax(0.0).cwiseSqrt().asDiagonal();
  const std::size_t s0 = index.count_up_to(t - 1);
  const Eigen::MatrixXd w0 = w.topRows(static_cast<Eigen::Index>(s0));
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(w0);
  std::vector<Eigen::MatrixXd> mult;
  for (std::size_t i = 0; i < nv; ++i) {
    Eigen::MatrixXd wi(static_cast<Eigen::Index>(s0), ri);
    for (std::size_t a = 0; a < s0; ++a) {
      Monomial e = index.monomial(a);
      ++e[i];
      const std::size_t p = index.position(e);
      if (p >= static_cast<std::size_t>(s)) throw std::logic_error("extract_atoms: shifted row outside M_t");
      wi.row(static_cast<Eigen::Index>(a)) = w.row(static_cast<Eigen::Index>(p));
    }
    mult.push_back(cod.solve(wi));
  }
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t j = i + 1; j < nv; ++j)
      out.commutation_error =
          std::max(out.commutation_error, (mult[i] * mult[j] - mult[j] * mult[i]).norm());

  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  Eigen::MatrixXd combo = Eigen::MatrixXd::Zero(ri, ri);
  for (const auto& m : mult) combo += unif(rng) * m;
  Eigen::EigenSolver<Eigen::MatrixXd> eig(combo);
  const Eigen::MatrixXcd p = eig.eigenvectors();
  const Eigen::MatrixXcd pinv = p.inverse();
  std::vector<Eigen::VectorXd> atoms(r, Eigen::VectorXd(nv));
  for (std::size_t i = 0; i < nv; ++i) {
    const Eigen::MatrixXcd d = pinv * mult[i].cast<cplx>() * p;
    for (std::size_t j = 0; j < r; ++j) {
      const cplx v = d(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
      atoms[j](static_cast<Eigen::Index>(i)) = v.real();
      out.imaginary_part = std::max(out.imaginary_part, std::abs(v.imag()));
    }
  }
  out.atoms = std::move(atoms);
  out.ok = out.commutation_error <= commute_tol && out.imaginary_part <= commute_tol;
  if (!out.ok) out.message = "multiplication matrices do not commute";
  return out;
}

/// Leading eigenvector of the second-moment block of each variable range,
/// scaled to unit norm. Recovers maximizers up to a sign per block.
inline Eigen::VectorXd second_moment_point(const MomentIndex& index, const Eigen::VectorXd& y,
                                           const std::vector<VarRange>& blocks) {
  const std::size_t nv = index.nvars();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nv));
  for (const auto& blk : blocks) {
    const auto n = static_cast<Eigen::Index>(blk.size);
    Eigen::MatrixXd s(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) {
        Monomial e(nv, 0);
        ++e[blk.offset + static_cast<std::size_t>(a)];
        ++e[blk.offset + static_cast<std::size_t>(b)];
        s(a, b) = y(static_cast<Eigen::Index>(index.position(e)));
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    u.segment(static_cast<Eigen::Index>(blk.offset), n) = es.eigenvectors().col(n - 1);
  }
  return u;
}

/// u^(m) = <B, u^(1) x ... x u^(m-1)> / lambda.
inline Eigen::VectorXd recover_last_block(const RealTensor& b, std::span<const Eigen::VectorXd> blocks, double lambda) {
  if (!(lambda > kLambdaMin))
    throw DegenerateStateError("lambda below 1e-8: the state annihilates every product vector on the leading blocks");
  return b.contract_leading(blocks) / lambda;
}

struct PolishResult {
  double lambda = 0.0;
  RankOneTuple vectors;
  double residual = 0.0;
  int sweeps = 0;
  bool converged = false;
};

/// One alternating sweep z^(k) <- conj(<A, x_{i != k} z^(i)>) / norm.
inline void alternating_sweep(const ComplexTensor& a, RankOneTuple& t) {
  for (std::size_t k = 0; k < a.order(); ++k) {
    CVector v = contract_all_but(a, t, k);
    const double nv = v.norm();
    if (nv > 0.0) t[k] = v.conjugate() / nv;
  }
}

/// Alternating refinement until the residual drops below tol or the sweep cap.
inline PolishResult polish(const ComplexTensor& a, const RankOneTuple& start, double tol = 1e-10, int max_sweeps = 500) {
  PolishResult best;
  RankOneTuple t = start.normalized();
  best.vectors = t;
  best.lambda = contract_all(a, t).real();
  best.residual = residual(a, best.lambda, t);
  if (best.residual < tol) {
    best.converged = true;
    return best;
  }
  for (int s = 1; s <= max_sweeps; ++s) {
    alternating_sweep(a, t);
    const double lam = contract_all(a, t).real();
    const double res = residual(a, lam, t);
    if (lam >= best.lambda - 1e-15) {
      best.vectors = t;
      best.lambda = lam;
      best.residual = res;
      best.sweeps = s;
    }
    if (res < tol) {
      best.converged = true;
      break;
    }
  }
  return best;
}

/// Multiplies every vector except `pivot` so its first nonzero component is
/// real and non-negative; the pivot absorbs the opposite phase.
inline RankOneTuple canonical_gauge(const RankOneTuple& t, std::size_t pivot, double zero_tol = 1e-12) {
  RankOneTuple out = t;
  cplx total = 1.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k == pivot) continue;
    for (Eigen::Index j = 0; j < out[k].size(); ++j) {
      const cplx c = out[k](j);
      if (std::abs(c) > zero_tol) {
        const cplx ph = std::conj(c) / std::abs(c);
        out[k] *= ph;
        total *= ph;
        break;
      }
    }
  }
  out[pivot] *= std::conj(total);
  return out;
}

/// Gauge for a tuple of identical vectors: among the m-th roots of unity
/// times z, the one whose first nonzero component has the smallest argument
/// in [0, 2 pi).
inline CVector canonical_symmetric_vector(const CVector& z, std::size_t m, double zero_tol = 1e-12) {
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    if (std::abs(z(j)) <= zero_tol) continue;
    const double step = 2.0 * std::numbers::pi / static_cast<double>(m);
    double arg = std::arg(z(j));
    double shift = -std::floor(arg / step) * step;
    if (arg + shift >= step - 1e-15) shift -= step;
    return z * std::polar(1.0, shift);
  }
  return z;
}

/// Packages an eigenpair against an upper bound (in lambda units) and an
/// oracle lower bound.
inline EigenpairResult certify(const ComplexTensor& a, double lambda, const RankOneTuple& t, double upper_bound,
                               double oracle_lb, double gap_tol = 1e-5, double residual_tol = 1e-8) {
  EigenpairResult r;
  r.lambda = lambda;
  r.vectors = t;
  r.residual = residual(a, lambda, t);
  r.upper_bound = upper_bound;
  r.lower_bound = oracle_lb;
  r.certificate.bound_gap = upper_bound - lambda;
  r.certificate.oracle_gap = lambda - oracle_lb;
  r.certificate.certified_global =
      std::isfinite(upper_bound) && r.certificate.bound_gap <= gap_tol && r.residual <= residual_tol;
  return r;
}

}  // namespace ueig

#endif  // UEIG_EXTRACTION_HPP
