// Dense primal-dual interior-point solver for moment-form SDPs:
//
//   maximize   c^T y
//   subject to E y = e,   F_j^T M_j(y) F_j >= 0  for every block j,
//
// where each M_j(y) is a symmetric matrix whose entries alias moment
// variables (M_j(y)_ab = y[index_j(a,b)]) and F_j is an optional orthonormal
// face basis (identity when absent). Several blocks together form one
// block-diagonal PSD constraint.
//
// The equalities are eliminated up front: a rank-revealing QR of E^T gives
// y = y0 + K t with K an orthonormal basis of ker E. In t the problem is the
// standard dual form  max b^T t  s.t.  C - sum t_i A_i = Z >= 0  with the Gram
// (sum-of-squares) side  min <C, X>  s.t.  <A_i, X> = b_i, X >= 0. Both sides
// are solved together by an infeasible-start path-following method using the
// HKM search direction with a Mehrotra predictor-corrector. Initialization is
// fixed and no pivoting is randomized, so repeated solves are bit-identical.

#ifndef UEIG_SDP_HPP
#define UEIG_SDP_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ueig {

struct PsdBlock {
  Eigen::MatrixXi index;  ///< variable aliased by each matrix entry
  Eigen::MatrixXd face;   ///< optional n x r orthonormal basis; empty for none

  Eigen::Index size() const { return index.rows(); }
  Eigen::Index face_size() const { return face.size() == 0 ? size() : face.cols(); }

  Eigen::MatrixXd matrix(const Eigen::VectorXd& y) const {
    const Eigen::Index n = size();
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) m(a, b) = y(index(a, b));
    return m;
  }
};

struct ConeProblem {
  Eigen::VectorXd objective;  ///< c (maximized)
  Eigen::MatrixXd eq_matrix;  ///< E
  Eigen::VectorXd eq_rhs;     ///< e
  std::vector<PsdBlock> blocks;
  /// Known bound |y_i| <= variable_bound on the feasible set; enables a
  /// rigorous upper bound from an inexact Gram matrix. Infinite when unknown.
  double variable_bound = std::numeric_limits<double>::infinity();

  Eigen::Index num_vars() const { return objective.size(); }

  void validate() const {
    const Eigen::Index q = num_vars();
    if (eq_matrix.cols() != q || eq_matrix.rows() != eq_rhs.size())
      throw std::invalid_argument("ConeProblem: equality system has inconsistent shape");
    if (blocks.empty()) throw std::invalid_argument("ConeProblem: no PSD block");
    for (const auto& blk : blocks) {
      const auto& idx = blk.index;
      if (idx.rows() != idx.cols() || idx.rows() == 0)
        throw std::invalid_argument("ConeProblem: PSD index map must be square and non-empty");
      for (Eigen::Index a = 0; a < idx.rows(); ++a)
        for (Eigen::Index b = 0; b < idx.cols(); ++b) {
          const int v = idx(a, b);
          if (v < 0 || v >= q) throw std::invalid_argument("ConeProblem: PSD index out of range");
          if (idx(b, a) != v) throw std::invalid_argument("ConeProblem: PSD index map not symmetric");
        }
      if (blk.face.size() != 0 && blk.face.rows() != idx.rows())
        throw std::invalid_argument("ConeProblem: face basis has wrong row count");
    }
  }
};

struct SolverConfig {
  double gap_tol = 1e-9;
  double feas_tol = 1e-9;
  int max_iter = 200;
  double elimination_tol = 1e-11;  ///< rank threshold for dependent equalities
  double regularization = 1e-12;   ///< static Schur regularization (relative)
};

enum class SolverStatus { Optimal, MaxIter, Numerical, Infeasible };

inline const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Optimal: return "optimal";
    case SolverStatus::MaxIter: return "max-iter";
    case SolverStatus::Numerical: return "numerical";
    case SolverStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

struct SolverResult {
  SolverStatus status = SolverStatus::Numerical;
  double value = 0.0;         ///< Gram-side objective <C, X> + offset
  double bound = 0.0;         ///< value corrected for Gram infeasibility (rigorous when variable_bound is finite)
  double moment_value = 0.0;  ///< c^T y at the returned moment vector
  Eigen::VectorXd y;
  std::vector<Eigen::MatrixXd> dual;  ///< Gram blocks X_j in full block coordinates
  int face_reductions = 0;            ///< facial reduction passes that shrank a face
  std::vector<Eigen::Index> face_dims;  ///< final face dimension per block
  double primal_infeasibility = 0.0;  ///< moment side: ||C - Z - A^*(t)|| (relative)
  double dual_infeasibility = 0.0;    ///< Gram side: ||b - A(X)|| (relative)
  double gap = 0.0;                   ///< relative duality gap
  int iterations = 0;
  Eigen::Index dependent_rows = 0;
  Eigen::Index free_dim = 0;
  std::vector<double> moment_history;  ///< moment objective per iterate
  std::vector<double> bound_history;   ///< Gram objective per iterate
  std::string message;
};

namespace detail {

using Blocks = std::vector<Eigen::MatrixXd>;

inline Blocks axpy(const Blocks& a, double s, const Blocks& b) {
  Blocks r(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) r[j] = a[j] + s * b[j];
  return r;
}

inline double dot(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j].cwiseProduct(b[j]).sum();
  return s;
}

inline double norm(const Blocks& a) { return std::sqrt(dot(a, a)); }

inline Eigen::MatrixXd sym(const Eigen::MatrixXd& A) { return 0.5 * (A + A.transpose()); }

/// Linear data of a dual-form SDP  max b^T t  s.t.  C - A^*(t) >= 0.
struct SdpOperator {
  Blocks C;
  Eigen::VectorXd b;
  std::function<Eigen::VectorXd(const Blocks&)> apply;      // W -> (<A_i, W>)_i
  std::function<Blocks(const Eigen::VectorXd&)> adjoint;    // t -> sum t_i A_i
  std::function<Eigen::MatrixXd(const Blocks&, const Blocks&)> schur;  // S_ij = <A_i, X A_j Zi>
};

struct IpmOutcome {
  SolverStatus status = SolverStatus::Numerical;
  Blocks X, Z;
  Eigen::VectorXd t, Rp;
  double pinf = 0.0, dinf = 0.0, gap = 0.0;
  int iterations = 0;
  std::vector<double> pobj, dobj;
  std::string message;
};

/// Largest alpha with X + alpha D >= 0 given the Cholesky factor of X.
inline double max_step(const Eigen::LLT<Eigen::MatrixXd>& chol, const Eigen::MatrixXd& D) {
  const Eigen::MatrixXd L = chol.matrixL();
  Eigen::MatrixXd T = L.triangularView<Eigen::Lower>().solve(D);
  T = L.triangularView<Eigen::Lower>().solve(T.transpose()).transpose();
  T = sym(T);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

inline double max_step(const std::vector<Eigen::LLT<Eigen::MatrixXd>>& chol, const Blocks& D) {
  double a = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < D.size(); ++j) a = std::min(a, max_step(chol[j], D[j]));
  return a;
}

/// Infeasible-start HKM predictor-corrector on op. The objective offset only
/// enters the relative gap.
inline IpmOutcome ipm(const SdpOperator& op, const SolverConfig& cfg, double offset) {
  const std::size_t nb = op.C.size();
  const Eigen::Index m = op.b.size();
  Eigen::Index total_r = 0;
  for (const auto& c : op.C) total_r += c.rows();
  auto identity_blocks = [&](double s) {
    Blocks I;
    for (const auto& c : op.C) I.push_back(s * Eigen::MatrixXd::Identity(c.rows(), c.rows()));
    return I;
  };
  const double Cnorm = norm(op.C), bnorm = op.b.norm();
  const double scale = std::max({10.0, std::sqrt(static_cast<double>(total_r)), Cnorm});

  IpmOutcome out;
  Blocks X = identity_blocks(scale), Z = identity_blocks(scale);
  Eigen::VectorXd t = Eigen::VectorXd::Zero(m);
  IpmOutcome best;
  double best_merit = std::numeric_limits<double>::infinity();
  int stall = 0;

  auto finish = [&](IpmOutcome& o, SolverStatus status, int iters, const std::string& msg) {
    o.status = status;
    o.iterations = iters;
    o.message = msg;
    o.pobj = out.pobj;
    o.dobj = out.dobj;
    return o;
  };

  // Minimum-norm lift r -> W with A(W) = r through the flattened operator;
  // used to keep each step exact on the Gram-side equalities.
  Eigen::MatrixXd Aflat(m, 0);
  {
    Eigen::Index len = 0;
    for (const auto& c : op.C) len += c.size();
    Aflat.resize(m, len);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Blocks Ai = op.adjoint(Eigen::VectorXd::Unit(m, i));
      Eigen::Index off = 0;
      for (const auto& a : Ai) {
        Aflat.row(i).segment(off, a.size()) = Eigen::Map<const Eigen::RowVectorXd>(a.data(), a.size());
        off += a.size();
      }
    }
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> lift_cod(Aflat);
  auto lift = [&](const Eigen::VectorXd& r) {
    const Eigen::VectorXd w = lift_cod.solve(r);  // minimum-norm solution of Aflat w = r
    Blocks W;
    Eigen::Index off = 0;
    for (const auto& c : op.C) {
      W.push_back(sym(Eigen::Map<const Eigen::MatrixXd>(w.data() + off, c.rows(), c.cols())));
      off += c.size();
    }
    return W;
  };

  std::vector<Eigen::LLT<Eigen::MatrixXd>> cx(nb), cz(nb);
  for (int it = 0; it <= cfg.max_iter; ++it) {
    Blocks Zi(nb);
    for (std::size_t j = 0; j < nb; ++j) {
      cx[j].compute(X[j]);
      cz[j].compute(Z[j]);
      if (cx[j].info() != Eigen::Success || cz[j].info() != Eigen::Success)
        return finish(best, SolverStatus::Numerical, it, "iterate lost positive definiteness");
      Zi[j] = cz[j].solve(Eigen::MatrixXd::Identity(Z[j].rows(), Z[j].rows()));
    }
    const Eigen::VectorXd Rp = op.b - op.apply(X);
    const Blocks Rd = axpy(axpy(op.C, -1.0, Z), -1.0, op.adjoint(t));
    const double pobj = dot(op.C, X);
    const double dobj = op.b.dot(t);
    const double mu = dot(X, Z) / static_cast<double>(total_r);
    IpmOutcome cur;
    cur.X = X;
    cur.Z = Z;
    cur.t = t;
    cur.Rp = Rp;
    cur.pinf = Rp.norm() / (1.0 + bnorm);
    cur.dinf = norm(Rd) / (1.0 + Cnorm);
    cur.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj + offset) + std::abs(dobj + offset));
    const double merit = std::max({cur.pinf, cur.dinf, cur.gap});
    out.pobj.push_back(pobj + offset);
    out.dobj.push_back(dobj + offset);
    if (merit < best_merit) {
      best = cur;
      best_merit = merit;
      stall = 0;
    } else if (++stall > 15) {
      return finish(best, SolverStatus::Numerical, it, "no progress");
    }
    if (cur.pinf <= cfg.feas_tol && cur.dinf <= cfg.feas_tol && cur.gap <= cfg.gap_tol)
      return finish(cur, SolverStatus::Optimal, it, "");
    if (it == cfg.max_iter) break;

    const Eigen::MatrixXd S = op.schur(X, Zi);
    const double reg = cfg.regularization * std::max(1.0, S.diagonal().maxCoeff());
    Eigen::MatrixXd Sreg = S;
    Sreg.diagonal().array() += reg;
    Eigen::LLT<Eigen::MatrixXd> cs(Sreg);
    Eigen::LDLT<Eigen::MatrixXd> ls;
    const bool use_llt = cs.info() == Eigen::Success;
    if (!use_llt) {
      ls.compute(Sreg);
      if (ls.info() != Eigen::Success)
        return finish(best, SolverStatus::Numerical, it, "Schur complement not positive definite after regularization");
    }
    auto schur_solve = [&](const Eigen::VectorXd& rhs) {
      Eigen::VectorXd x = use_llt ? Eigen::VectorXd(cs.solve(rhs)) : Eigen::VectorXd(ls.solve(rhs));
      const Eigen::VectorXd corr = rhs - S * x;  // one refinement step
      x += use_llt ? Eigen::VectorXd(cs.solve(corr)) : Eigen::VectorXd(ls.solve(corr));
      return x;
    };
    Blocks XRdZi(nb);
    for (std::size_t j = 0; j < nb; ++j) XRdZi[j] = X[j] * Rd[j] * Zi[j];

    // Rc is the target for dX + X dZ Zi (unsymmetrized).
    auto direction = [&](const Blocks& Rc, Eigen::VectorXd& dt, Blocks& dX, Blocks& dZ) {
      dt = schur_solve(Rp - op.apply(axpy(Rc, -1.0, XRdZi)));
      const Blocks At = op.adjoint(dt);
      dX.resize(nb);
      dZ.resize(nb);
      for (std::size_t j = 0; j < nb; ++j) {
        dZ[j] = sym(Rd[j] - At[j]);
        dX[j] = sym(Rc[j] - X[j] * dZ[j] * Zi[j]);
      }
      dX = axpy(dX, 1.0, lift(Rp - op.apply(dX)));
    };

    // Predictor.
    Eigen::VectorXd dt;
    Blocks dX, dZ;
    Blocks Rc(nb);
    for (std::size_t j = 0; j < nb; ++j) Rc[j] = -X[j];
    direction(Rc, dt, dX, dZ);
    const double ap = std::min(1.0, 0.98 * max_step(cx, dX));
    const double ad = std::min(1.0, 0.98 * max_step(cz, dZ));
    const double mu_aff = dot(axpy(X, ap, dX), axpy(Z, ad, dZ)) / static_cast<double>(total_r);
    const double expon = std::max(1.0, 3.0 * std::min(ap, ad) * std::min(ap, ad));
    const double sigma = std::min(1.0, std::pow(mu_aff / mu, expon));

    // Corrector.
    for (std::size_t j = 0; j < nb; ++j) Rc[j] = sigma * mu * Zi[j] - X[j] - dX[j] * dZ[j] * Zi[j];
    direction(Rc, dt, dX, dZ);
    const double apx = max_step(cx, dX), adx = max_step(cz, dZ);
    const double gamma = 0.9 + 0.09 * std::min({1.0, apx, adx});
    const double alpha_p = std::min(1.0, gamma * apx);
    const double alpha_d = std::min(1.0, gamma * adx);
    if (alpha_p < 1e-10 && alpha_d < 1e-10) return finish(best, SolverStatus::Numerical, it, "step length collapsed");
    for (std::size_t j = 0; j < nb; ++j) {
      X[j] = sym(X[j] + alpha_p * dX[j]);
      Z[j] = sym(Z[j] + alpha_d * dZ[j]);
    }
    t += alpha_d * dt;
  }
  return finish(best, SolverStatus::MaxIter, cfg.max_iter, "iteration limit reached");
}

/// Equality-eliminated problem in face coordinates.
struct ReducedSdp {
  const ConeProblem* p = nullptr;
  std::vector<Eigen::MatrixXd> V;  // per-block face (identity if none)
  Eigen::VectorXd y0;              // particular solution of E y = e
  Eigen::MatrixXd K;               // orthonormal basis of ker E
  Eigen::VectorXd b;               // K^T c
  double offset = 0.0;             // c^T y0
  Eigen::Index q = 0;

  Blocks C() const {
    Blocks out;
    for (std::size_t j = 0; j < V.size(); ++j) out.push_back(sym(V[j].transpose() * p->blocks[j].matrix(y0) * V[j]));
    return out;
  }

  /// A(W)_i = <A_i, W> with A_i = -V^T M(K_i) V.
  Eigen::VectorXd apply(const Blocks& W) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(q);
    for (std::size_t j = 0; j < W.size(); ++j) {
      const Eigen::MatrixXd F = V[j] * W[j] * V[j].transpose();
      const auto& idx = p->blocks[j].index;
      for (Eigen::Index a = 0; a < F.cols(); ++a)
        for (Eigen::Index c = 0; c < F.rows(); ++c) g(idx(c, a)) += F(c, a);
    }
    return -(K.transpose() * g);
  }

  /// sum t_i A_i.
  Blocks adjoint(const Eigen::VectorXd& t) const {
    const Eigen::VectorXd y = K * t;
    Blocks out(V.size());
    for (std::size_t j = 0; j < V.size(); ++j) out[j] = -(V[j].transpose() * p->blocks[j].matrix(y) * V[j]);
    return out;
  }

  Eigen::MatrixXd schur(const Blocks& X, const Blocks& Zi) const {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(q, q);
    for (std::size_t j = 0; j < X.size(); ++j) {
      const Eigen::MatrixXd Xf = V[j] * X[j] * V[j].transpose();
      const Eigen::MatrixXd Zf = V[j] * Zi[j] * V[j].transpose();
      const auto& idx = p->blocks[j].index;
      const Eigen::Index n = idx.rows();
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index d = 0; d < n; ++d) {
          const double z = Zf(d, a);
          if (z == 0.0) continue;
          for (Eigen::Index c = 0; c < n; ++c) {
            const int beta = idx(c, d);
            for (Eigen::Index bb = 0; bb < n; ++bb) H(idx(bb, a), beta) += z * Xf(bb, c);
          }
        }
    }
    const Eigen::MatrixXd HK = H * K;
    return sym(K.transpose() * HK);
  }

  SdpOperator op() const {
    return {C(), b, [this](const Blocks& W) { return apply(W); },
            [this](const Eigen::VectorXd& t) { return adjoint(t); },
            [this](const Blocks& X, const Blocks& Zi) { return schur(X, Zi); }};
  }

  /// max s  s.t.  C - sum t_i A_i - s I >= 0. An optimum s = 0 means no
  /// feasible point is interior to the current face.
  SdpOperator interior_op() const {
    const Eigen::Index m = b.size();
    Eigen::VectorXd bs = Eigen::VectorXd::Zero(m + 1);
    bs(m) = 1.0;
    auto ap = [this, m](const Blocks& W) {
      Eigen::VectorXd v(m + 1);
      v.head(m) = apply(W);
      double tr = 0.0;
      for (const auto& w : W) tr += w.trace();
      v(m) = tr;
      return v;
    };
    auto adj = [this, m](const Eigen::VectorXd& ts) {
      Blocks out = adjoint(ts.head(m));
      for (auto& o : out) o.diagonal().array() += ts(m);
      return out;
    };
    auto sch = [this, m](const Blocks& X, const Blocks& Zi) {
      Eigen::MatrixXd S(m + 1, m + 1);
      S.topLeftCorner(m, m) = schur(X, Zi);
      Blocks XZi(X.size());
      double tr = 0.0;
      for (std::size_t j = 0; j < X.size(); ++j) {
        XZi[j] = sym(X[j] * Zi[j]);
        tr += XZi[j].trace();
      }
      const Eigen::VectorXd cross = apply(XZi);
      S.col(m).head(m) = cross;
      S.row(m).head(m) = cross.transpose();
      S(m, m) = tr;
      return S;
    };
    return {C(), bs, ap, adj, sch};
  }
};

}  // namespace detail

struct FacialReductionConfig {
  int max_passes = 6;
  double interior_tol = 1e-7;  ///< s below this counts as no interior point
  double kernel_ratio = 1e-3;  ///< Gram eigenvalues above ratio * max span the removed directions
};

/// Solves prob. Before the main solve, faces are shrunk while the feasible
/// set has no point interior to the current face (facial reduction driven
/// by the auxiliary problem in ReducedSdp::interior_op). Shrinking the face
/// only restricts the Gram side, so the reported bound stays valid.
inline SolverResult solve(const ConeProblem& prob, const SolverConfig& cfg = {},
                          const FacialReductionConfig& fr = {}) {
  using detail::Blocks;
  prob.validate();
  SolverResult res;
  detail::ReducedSdp rs;
  rs.p = &prob;
  rs.q = prob.num_vars();
  const std::size_t nb = prob.blocks.size();
  for (const auto& blk : prob.blocks)
    rs.V.push_back(blk.face.size() == 0 ? Eigen::MatrixXd::Identity(blk.size(), blk.size()) : blk.face);

  // Equality elimination with row equilibration.
  Eigen::MatrixXd E = prob.eq_matrix;
  Eigen::VectorXd e = prob.eq_rhs;
  for (Eigen::Index i = 0; i < E.rows(); ++i) {
    const double s = E.row(i).cwiseAbs().maxCoeff();
    if (s == 0.0) {
      if (std::abs(e(i)) > cfg.feas_tol) {
        res.status = SolverStatus::Infeasible;
        res.message = "equality row with zero coefficients and non-zero right-hand side";
        return res;
      }
      continue;
    }
    E.row(i) /= s;
    e(i) /= s;
  }
  Eigen::Index rank = 0;
  if (E.rows() > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(E.transpose());
    qr.setThreshold(cfg.elimination_tol);
    rank = qr.rank();
    const Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(rank, rank).template triangularView<Eigen::Upper>();
    // E^T P = Q R  =>  E Q1 = P R1^T with R1 the leading rank rows.
    const Eigen::VectorXd pe = qr.colsPermutation().transpose() * e;
    const Eigen::VectorXd w = R.transpose().triangularView<Eigen::Lower>().solve(pe.head(rank));
    rs.y0 = Q.leftCols(rank) * w;
    rs.K = Q.rightCols(rs.q - rank);
    const double eres = (E * rs.y0 - e).norm();
    if (eres > 1e-7 * (1.0 + e.norm())) {
      res.status = SolverStatus::Infeasible;
      res.message = "inconsistent equality constraints (residual " + std::to_string(eres) + ")";
      return res;
    }
  } else {
    rs.y0 = Eigen::VectorXd::Zero(rs.q);
    rs.K = Eigen::MatrixXd::Identity(rs.q, rs.q);
  }
  res.dependent_rows = E.rows() - rank;
  res.free_dim = rs.K.cols();
  rs.b = rs.K.transpose() * prob.objective;
  rs.offset = prob.objective.dot(rs.y0);

  for (int pass = 0; pass < fr.max_passes && rs.K.cols() > 0; ++pass) {
    const detail::IpmOutcome aux = detail::ipm(rs.interior_op(), cfg, 0.0);
    const double s = aux.t(aux.t.size() - 1);
    if (s > fr.interior_tol) break;
    double wmax = 0.0;
    std::vector<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>> eig(nb);
    for (std::size_t j = 0; j < nb; ++j) {
      eig[j].compute(aux.X[j]);
      wmax = std::max(wmax, eig[j].eigenvalues().maxCoeff());
    }
    if (wmax <= 0.0) break;
    // Feasible moment matrices are singular on the removed directions. Only
    // the Gram side is restricted, so every reported bound stays valid.
    bool reduced = false;
    for (std::size_t j = 0; j < nb; ++j) {
      const Eigen::VectorXd& ev = eig[j].eigenvalues();
      Eigen::Index keep = 0;
      while (keep < ev.size() && ev(keep) <= fr.kernel_ratio * wmax) ++keep;
      if (keep == ev.size()) continue;
      if (keep == 0) {
        res.status = SolverStatus::Infeasible;
        res.message = "facial reduction emptied a PSD block";
        return res;
      }
      rs.V[j] = (rs.V[j] * eig[j].eigenvectors().leftCols(keep)).eval();
      reduced = true;
    }
    if (!reduced) break;
    ++res.face_reductions;
  }
  res.free_dim = rs.K.cols();
  for (const auto& v : rs.V) res.face_dims.push_back(v.cols());

  if (rs.K.cols() == 0) {
    // Fully determined moment vector.
    res.y = rs.y0;
    res.moment_value = res.value = res.bound = rs.offset;
    bool psd = true;
    for (const auto& c : rs.C()) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
      psd = psd && es.eigenvalues()(0) >= -cfg.feas_tol;
    }
    res.status = psd ? SolverStatus::Optimal : SolverStatus::Infeasible;
    for (const auto& v : rs.V) res.dual.push_back(Eigen::MatrixXd::Zero(v.rows(), v.rows()));
    return res;
  }


  const detail::IpmOutcome o = detail::ipm(rs.op(), cfg, rs.offset);
  res.status = o.status;
  res.message = o.message;
  res.iterations = o.iterations;
  res.moment_history = o.dobj;
  res.bound_history = o.pobj;
  res.y = rs.y0 + rs.K * o.t;
  for (std::size_t j = 0; j < nb; ++j) res.dual.push_back(rs.V[j] * o.X[j] * rs.V[j].transpose());
  res.value = rs.offset + detail::dot(rs.C(), o.X);
  // For feasible y = y0 + K t:  b^T t = <C - Z(t), X> + Rp^T t <= <C, X> + (K Rp)^T y.
  const double slack = (rs.K * o.Rp).cwiseAbs().sum();
  res.bound = res.value + (std::isfinite(prob.variable_bound) ? prob.variable_bound * slack : 0.0);
  res.moment_value = prob.objective.dot(res.y);
  res.primal_infeasibility = o.dinf;
  res.dual_infeasibility = o.pinf;
  res.gap = o.gap;
  if (res.face_reductions > 0 && res.status != SolverStatus::Optimal) {
    // Both bounds are valid, keep the tighter one.
    FacialReductionConfig none = fr;
    none.max_passes = 0;
    SolverResult alt = solve(prob, cfg, none);
    if (alt.status == SolverStatus::Optimal || alt.bound < res.bound) return alt;
  }
  return res;
}

}  // namespace ueig

#endif  // UEIG_SDP_HPP
