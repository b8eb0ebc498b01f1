// Order-N moment relaxations of equality-constrained polynomial programs:
//
//   rho_N = max sum_a f_a y_a  s.t.  L_q(y) = 0 for every constraint q,
//                                    y_0 = 1,  M_N(y) >= 0.

#ifndef UEIG_MOMENT_HPP
#define UEIG_MOMENT_HPP

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ueig/polynomial.hpp"
#include "ueig/sdp.hpp"

namespace ueig {

class RelaxationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

/// Graded-lex list of all monomials of degree <= max_degree with a position
/// lookup. Monomials of degree <= d form a prefix of length C(nvars + d, d).
class MomentIndex {
 public:
  MomentIndex(std::size_t nvars, int max_degree)
      : nvars_(nvars), max_degree_(max_degree), monos_(monomials_up_to(nvars, max_degree)) {
    for (std::size_t i = 0; i < monos_.size(); ++i) pos_.emplace(monos_[i], i);
  }

  std::size_t nvars() const { return nvars_; }
  int max_degree() const { return max_degree_; }
  std::size_t size() const { return monos_.size(); }
  const Monomial& monomial(std::size_t i) const { return monos_.at(i); }
  const std::vector<Monomial>& monomials() const { return monos_; }

  std::size_t position(const Monomial& a) const {
    auto it = pos_.find(a);
    if (it == pos_.end()) throw std::out_of_range("monomial not in moment index");
    return it->second;
  }
  std::optional<std::size_t> find(const Monomial& a) const {
    auto it = pos_.find(a);
    if (it == pos_.end()) return std::nullopt;
    return it->second;
  }

  /// Number of monomials of degree <= d.
  std::size_t count_up_to(int d) const {
    return static_cast<std::size_t>(binomial(nvars_ + static_cast<std::size_t>(d), static_cast<std::size_t>(d)) + 0.5);
  }

  /// Moments of the Dirac measure at u: y_a = u^a.
  Eigen::VectorXd dirac(const Eigen::VectorXd& u) const {
    Eigen::VectorXd y(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) {
      double v = 1.0;
      for (std::size_t j = 0; j < nvars_; ++j)
        for (int k = 0; k < monos_[i][j]; ++k) v *= u(static_cast<Eigen::Index>(j));
      y(static_cast<Eigen::Index>(i)) = v;
    }
    return y;
  }

 private:
  std::size_t nvars_;
  int max_degree_;
  std::vector<Monomial> monos_;
  std::map<Monomial, std::size_t, GradedLexLess> pos_;
};

inline Monomial add_monomials(const Monomial& a, const Monomial& b) {
  Monomial c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

struct Triplet {
  std::size_t row, col;
  double value;
};

/// Localizing structure of q at order N: q(u) [u]_d [u]_d^T = sum_a A_a u^a
/// with d = N - ceil(deg q / 2).
struct LocalizingSpec {
  Polynomial q;
  int d = 0;
  std::size_t basis_size = 0;
  std::map<std::size_t, std::vector<Triplet>> coefficients;  ///< moment position -> A_a

  LocalizingSpec(const Polynomial& poly, int order, const MomentIndex& index) : q(poly) {
    d = order - (q.degree() + 1) / 2;
    if (d < 0) throw RelaxationError("relaxation order too small for constraint degree");
    basis_size = index.count_up_to(d);
    for (std::size_t a = 0; a < basis_size; ++a)
      for (std::size_t b = 0; b < basis_size; ++b) {
        const Monomial ab = add_monomials(index.monomial(a), index.monomial(b));
        for (const auto& [e, c] : q.terms())
          coefficients[index.position(add_monomials(ab, e))].push_back({a, b, c});
      }
  }

  Eigen::MatrixXd matrix(const Eigen::VectorXd& y) const {
    const auto s = static_cast<Eigen::Index>(basis_size);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(s, s);
    for (const auto& [pos, trips] : coefficients)
      for (const auto& t : trips)
        L(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) += t.value * y(static_cast<Eigen::Index>(pos));
    return L;
  }

  /// One linear row per distinct entry L(q u^s), |s| <= 2d.
  std::vector<Eigen::VectorXd> equality_rows(const MomentIndex& index) const {
    std::vector<Eigen::VectorXd> rows;
    const std::size_t ns = index.count_up_to(2 * d);
    for (std::size_t s = 0; s < ns; ++s) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(index.size()));
      for (const auto& [e, c] : q.terms())
        row(static_cast<Eigen::Index>(index.position(add_monomials(index.monomial(s), e)))) += c;
      rows.push_back(std::move(row));
    }
    return rows;
  }
};

struct RelaxationOptions {
  std::size_t max_matrix_size = 2000;  ///< refuse larger moment matrices
  bool face_reduction = true;          ///< restrict M_N to the face implied by the equalities
  /// Variable blocks eligible for sign-symmetry reduction. A block whose
  /// sign flip leaves f and every constraint unchanged has all odd moments
  /// set to zero, which splits M_N into parity classes.
  std::vector<VarRange> sign_blocks;
  /// Bound on |y_a| over the feasible set (1 when every variable lies on a
  /// unit sphere); infinite when unknown.
  double moment_bound = std::numeric_limits<double>::infinity();
};

struct MomentRelaxation {
  int order = 0;
  MomentIndex index;
  std::size_t basis_size = 0;  ///< rows of M_N(y)
  Eigen::MatrixXi moment_map;  ///< M_N(y)_ab = y[moment_map(a,b)]
  std::vector<LocalizingSpec> localizing;
  Eigen::VectorXd objective;   ///< f_a per moment position
  int objective_degree = 0;
  std::vector<VarRange> symmetric_blocks;        ///< blocks with sign symmetry in use
  std::vector<std::size_t> kept;                 ///< moment positions that are SDP variables
  std::vector<long> variable_of;                 ///< moment position -> SDP variable or -1
  std::vector<std::vector<std::size_t>> classes; ///< basis rows of each diagonal block of M_N
  std::vector<Eigen::MatrixXd> faces;            ///< orthonormal face basis per class, empty when not reduced
  double moment_bound = std::numeric_limits<double>::infinity();

  /// Bitmask of odd block degrees over symmetric_blocks.
  unsigned parity(const Monomial& a) const {
    unsigned mask = 0;
    for (std::size_t k = 0; k < symmetric_blocks.size(); ++k) {
      int d = 0;
      for (std::size_t i = 0; i < symmetric_blocks[k].size; ++i) d += a[symmetric_blocks[k].offset + i];
      if (d % 2) mask |= 1u << k;
    }
    return mask;
  }

  Eigen::MatrixXd moment_matrix(const Eigen::VectorXd& y) const {
    const auto s = static_cast<Eigen::Index>(basis_size);
    Eigen::MatrixXd M(s, s);
    for (Eigen::Index a = 0; a < s; ++a)
      for (Eigen::Index b = 0; b < s; ++b) M(a, b) = y(moment_map(a, b));
    return M;
  }

  /// Full moment vector from SDP variables (odd moments are zero).
  Eigen::VectorXd full_moments(const Eigen::VectorXd& v) const {
    if (v.size() != static_cast<Eigen::Index>(kept.size())) throw DimensionError("full_moments: size mismatch");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(index.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) y(static_cast<Eigen::Index>(kept[i])) = v(static_cast<Eigen::Index>(i));
    return y;
  }

  /// SDP variables from a full moment vector.
  Eigen::VectorXd reduce_moments(const Eigen::VectorXd& y) const {
    if (y.size() != static_cast<Eigen::Index>(index.size())) throw DimensionError("reduce_moments: size mismatch");
    Eigen::VectorXd v(static_cast<Eigen::Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) v(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(kept[i]));
    return v;
  }

  ConeProblem cone_problem() const {
    const auto nv = static_cast<Eigen::Index>(kept.size());
    ConeProblem p;
    p.objective = reduce_moments(objective);
    std::vector<Eigen::VectorXd> rows;
    Eigen::VectorXd r0 = Eigen::VectorXd::Zero(nv);
    r0(0) = 1.0;
    rows.push_back(r0);
    for (const auto& l : localizing) {
      const std::size_t ns = index.count_up_to(2 * l.d);
      for (std::size_t s = 0; s < ns; ++s) {
        if (parity(index.monomial(s)) != 0) continue;
        Eigen::VectorXd row = Eigen::VectorXd::Zero(nv);
        for (const auto& [e, c] : l.q.terms()) {
          const long v = variable_of[index.position(add_monomials(index.monomial(s), e))];
          if (v < 0) throw RelaxationError("constraint is not invariant under the declared sign symmetry");
          row(v) += c;
        }
        rows.push_back(std::move(row));
      }
    }
    p.eq_matrix.resize(static_cast<Eigen::Index>(rows.size()), nv);
    for (std::size_t i = 0; i < rows.size(); ++i) p.eq_matrix.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    p.eq_rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows.size()));
    p.eq_rhs(0) = 1.0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const auto& cls = classes[c];
      const auto s = static_cast<Eigen::Index>(cls.size());
      PsdBlock blk;
      blk.index.resize(s, s);
      for (Eigen::Index a = 0; a < s; ++a)
        for (Eigen::Index b = 0; b < s; ++b)
          blk.index(a, b) = static_cast<int>(variable_of[static_cast<std::size_t>(
              moment_map(static_cast<Eigen::Index>(cls[static_cast<std::size_t>(a)]),
                         static_cast<Eigen::Index>(cls[static_cast<std::size_t>(b)])))]);
      if (!faces.empty()) {
        if (faces[c].cols() == 0) continue;  // block forced to zero by the equalities
        blk.face = faces[c];
      }
      p.blocks.push_back(std::move(blk));
    }
    p.variable_bound = moment_bound;
    return p;
  }
};

/// Sum f_a y_a over a full moment vector.
inline double objective_value(const MomentRelaxation& rel, const Eigen::VectorXd& y) {
  if (y.size() != rel.objective.size()) throw DimensionError("objective_value: moment vector size mismatch");
  return rel.objective.dot(y);
}

namespace detail {

inline bool even_in_block(const Polynomial& p, VarRange blk) {
  for (const auto& [e, c] : p.terms()) {
    int d = 0;
    for (std::size_t i = 0; i < blk.size; ++i) d += e[blk.offset + i];
    if (d % 2) return false;
  }
  return true;
}

}  // namespace detail

/// Assembles the order-N relaxation of max f s.t. q = 0 for q in constraints.
inline MomentRelaxation build_relaxation(const Polynomial& f, const std::vector<Polynomial>& constraints, int order,
                                         const RelaxationOptions& opt = {}) {
  const std::size_t nv = f.nvars();
  if (2 * order < f.degree()) throw RelaxationError("relaxation order too small for objective degree");
  for (const auto& q : constraints) {
    if (q.nvars() != nv) throw DimensionError("constraint has a different variable count");
    if (2 * order < q.degree()) throw RelaxationError("relaxation order too small for constraint degree");
  }
  const double msize = binomial(nv + static_cast<std::size_t>(order), static_cast<std::size_t>(order));
  if (msize > static_cast<double>(opt.max_matrix_size))
    throw RelaxationError("moment matrix of size C(" + std::to_string(nv + order) + "," + std::to_string(order) +
                          ") = " + std::to_string(static_cast<long long>(msize)) + " exceeds the limit of " +
                          std::to_string(opt.max_matrix_size) + " (moment vector length C(" +
                          std::to_string(nv + 2 * order) + "," + std::to_string(2 * order) + ") = " +
                          std::to_string(static_cast<long long>(binomial(nv + 2 * order, 2 * order))) + ")");

  MomentRelaxation rel{order, MomentIndex(nv, 2 * order), 0, {}, {}, {}, f.degree()};
  rel.moment_bound = opt.moment_bound;
  rel.basis_size = rel.index.count_up_to(order);
  const auto s = static_cast<Eigen::Index>(rel.basis_size);
  rel.moment_map.resize(s, s);
  for (Eigen::Index a = 0; a < s; ++a)
    for (Eigen::Index b = 0; b < s; ++b)
      rel.moment_map(a, b) = static_cast<int>(rel.index.position(
          add_monomials(rel.index.monomial(static_cast<std::size_t>(a)), rel.index.monomial(static_cast<std::size_t>(b)))));
  for (const auto& q : constraints) rel.localizing.emplace_back(q, order, rel.index);
  rel.objective = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rel.index.size()));
  for (const auto& [e, c] : f.terms()) rel.objective(static_cast<Eigen::Index>(rel.index.position(e))) += c;

  for (const auto& blk : opt.sign_blocks) {
    if (blk.offset + blk.size > nv) throw std::out_of_range("sign block out of range");
    bool inv = detail::even_in_block(f, blk);
    for (const auto& q : constraints) inv = inv && detail::even_in_block(q, blk);
    if (inv) rel.symmetric_blocks.push_back(blk);
  }
  if (rel.symmetric_blocks.size() > 16) rel.symmetric_blocks.resize(16);

  rel.variable_of.assign(rel.index.size(), -1);
  for (std::size_t i = 0; i < rel.index.size(); ++i)
    if (rel.parity(rel.index.monomial(i)) == 0) {
      rel.variable_of[i] = static_cast<long>(rel.kept.size());
      rel.kept.push_back(i);
    }
  std::map<unsigned, std::size_t> class_of;
  std::vector<unsigned> row_class(rel.basis_size);
  for (std::size_t a = 0; a < rel.basis_size; ++a) {
    const unsigned p = rel.parity(rel.index.monomial(a));
    auto [it, inserted] = class_of.try_emplace(p, rel.classes.size());
    if (inserted) rel.classes.emplace_back();
    rel.classes[it->second].push_back(a);
    row_class[a] = p;
  }

  if (opt.face_reduction) {
    // For every feasible y, M_N(y) annihilates the coefficient vector of
    // q u^b whenever |b| <= N - 2 ceil(deg q / 2): each entry of M_N(y) times
    // that vector is a localizing entry of q. The vector lives in the parity
    // class of b.
    std::vector<std::vector<Eigen::VectorXd>> kernel(rel.classes.size());
    std::vector<std::vector<long>> local(rel.classes.size());
    std::vector<long> slot(rel.basis_size);
    for (std::size_t c = 0; c < rel.classes.size(); ++c)
      for (std::size_t i = 0; i < rel.classes[c].size(); ++i) slot[rel.classes[c][i]] = static_cast<long>(i);
    for (const auto& q : constraints) {
      const int bmax = order - 2 * ((q.degree() + 1) / 2);
      if (bmax < 0) continue;
      const std::size_t nbeta = rel.index.count_up_to(bmax);
      for (std::size_t bi = 0; bi < nbeta; ++bi) {
        const std::size_t c = class_of.at(rel.parity(rel.index.monomial(bi)));
        Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rel.classes[c].size()));
        for (const auto& [e, coef] : q.terms()) {
          const std::size_t pos = rel.index.position(add_monomials(rel.index.monomial(bi), e));
          v(slot[pos]) += coef;
        }
        kernel[c].push_back(std::move(v));
      }
    }
    for (std::size_t c = 0; c < rel.classes.size(); ++c) {
      const auto sc = static_cast<Eigen::Index>(rel.classes[c].size());
      if (kernel[c].empty()) {
        rel.faces.push_back(Eigen::MatrixXd::Identity(sc, sc));
        continue;
      }
      Eigen::MatrixXd W(sc, static_cast<Eigen::Index>(kernel[c].size()));
      for (std::size_t i = 0; i < kernel[c].size(); ++i) W.col(static_cast<Eigen::Index>(i)) = kernel[c][i];
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(W);
      qr.setThreshold(1e-10);
      const Eigen::Index k = qr.rank();
      const Eigen::MatrixXd Q = qr.householderQ();
      rel.faces.push_back(Q.rightCols(sc - k));
    }
  }
  return rel;
}

}  // namespace ueig

#endif  // UEIG_MOMENT_HPP
