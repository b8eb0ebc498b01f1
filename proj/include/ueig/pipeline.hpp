// Largest U-eigenvalue: relaxation hierarchy, extraction, polishing and
// certification against the local-search oracle.
#ifndef UEIG_PIPELINE_HPP
#define UEIG_PIPELINE_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ueig/extraction.hpp"
#include "ueig/jacobian.hpp"
#include "ueig/moment.hpp"
#include "ueig/objective.hpp"
#include "ueig/oracle.hpp"
#include "ueig/sdp.hpp"

namespace ueig {

enum class Route { Auto, NonSymmetric, Partial, Symmetric };

inline const char* to_string(Route r) {
  switch (r) {
    case Route::Auto: return "auto";
    case Route::NonSymmetric: return "nonsym";
    case Route::Partial: return "partial";
    case Route::Symmetric: return "sym";
  }
  return "?";
}

/// Polynomial program max f s.t. constraints = 0 for one tensor and route.
struct PolynomialProgram {
  Route route = Route::NonSymmetric;
  ComplexTensor tensor;              ///< modes reordered so the excluded mode is last
  std::vector<std::size_t> perm;     ///< tensor mode k is input mode perm[k]
  RealTensor real;
  VariableLayout layout;             ///< squared routes only
  GaugeFixing gauge;
  Polynomial f;
  std::vector<Polynomial> constraints;
  std::vector<VarRange> blocks;      ///< sphere blocks in program variables
  bool squared = true;               ///< f approximates lambda^2

  std::size_t nvars() const { return f.nvars(); }
  int start_order() const { return (f.degree() + 1) / 2 + 1; }
  double to_lambda(double value) const { return squared ? std::sqrt(std::max(value, 0.0)) : value; }
};

namespace detail {

inline ComplexTensor identity_permuted(const ComplexTensor& a, const std::vector<std::size_t>& perm) {
  bool id = true;
  for (std::size_t k = 0; k < perm.size(); ++k) id = id && perm[k] == k;
  return id ? a : a.permuted(perm);
}

}  // namespace detail

/// Resolves Auto from the tensor's declared symmetry.
inline Route resolve_route(const ComplexTensor& a, Route requested) {
  if (requested != Route::Auto) return requested;
  switch (a.symmetry().kind()) {
    case SymmetryClass::Kind::Full: return Route::Symmetric;
    case SymmetryClass::Kind::Partial: return Route::Partial;
    case SymmetryClass::Kind::None: break;
  }
  return Route::NonSymmetric;
}

inline PolynomialProgram make_program(const ComplexTensor& a, Route requested, bool gauge = true) {
  const Route route = resolve_route(a, requested);
  const std::size_t m = a.order();
  if (m < 2) throw DimensionError("tensor order must be at least 2");
  if (route == Route::Symmetric) {
    if (a.symmetry().kind() != SymmetryClass::Kind::Full)
      throw SymmetryError("symmetric route needs a fully symmetric tensor");
    std::vector<std::size_t> id(m);
    for (std::size_t k = 0; k < m; ++k) id[k] = k;
    PolynomialProgram p{route, a, id, realify(a), {}, {}, build_objective_symmetric(a), {}, {}, false};
    const std::size_t nv = p.f.nvars();
    p.blocks = {{0, nv}};
    p.gauge = GaugeFixing::make(p.blocks, nv, false);
    p.constraints.push_back(sphere_constraint(nv, p.blocks[0]));
    for (auto& h : build_h_blocks(p.f, p.blocks)) p.constraints.push_back(std::move(h.poly));
    return p;
  }

  std::vector<std::vector<std::size_t>> groups;
  if (route == Route::Partial) {
    groups = a.symmetry().mode_groups(m);
    if (groups.empty()) throw SymmetryError("partial route needs a tensor with a symmetric mode group");
  }
  // Exclude the largest mode outside every group (last on ties), else the
  // largest grouped mode.
  std::vector<bool> grouped(m, false);
  for (const auto& g : groups)
    for (std::size_t k : g) grouped[k] = true;
  std::size_t excl = m;
  for (int pass = 0; pass < 2 && excl == m; ++pass)
    for (std::size_t k = 0; k < m; ++k)
      if ((pass == 1 || !grouped[k]) && (excl == m || a.dim(k) >= a.dim(excl))) excl = k;
  std::vector<std::size_t> perm;
  for (std::size_t k = 0; k < m; ++k)
    if (k != excl) perm.push_back(k);
  perm.push_back(excl);
  std::vector<std::size_t> pos(m);
  for (std::size_t k = 0; k < m; ++k) pos[perm[k]] = k;
  std::vector<std::vector<std::size_t>> merge;
  for (const auto& g : groups) {
    std::vector<std::size_t> h;
    for (std::size_t k : g)
      if (k != excl) h.push_back(pos[k]);
    std::sort(h.begin(), h.end());
    if (h.size() >= 2) merge.push_back(std::move(h));
  }
  ComplexTensor t = detail::identity_permuted(a, perm);
  RealTensor b = realify(t);
  VariableLayout lay = VariableLayout::make(t.dims(), merge);
  GaugeFixing gf = GaugeFixing::make(lay.blocks, lay.nvars, gauge);
  Polynomial f = gf.apply(build_objective_squared(b, lay));
  PolynomialProgram p{route, t, perm, b, lay, gf, f, {}, gf.blocks, true};
  for (const auto& blk : p.blocks) p.constraints.push_back(sphere_constraint(p.nvars(), blk));
  for (auto& h : build_h_blocks(p.f, p.blocks)) p.constraints.push_back(std::move(h.poly));
  return p;
}

/// Rank-one tuple (in program mode order) from a program-variable point.
/// Returns nothing when the point is degenerate.
inline std::optional<RankOneTuple> tuple_from_point(const PolynomialProgram& p, const Eigen::VectorXd& u) {
  RankOneTuple t;
  if (!p.squared) {
    const double nu = u.norm();
    if (!(nu > 0.0)) return std::nullopt;
    const CVector z = complexify(u / nu);
    for (std::size_t k = 0; k < p.tensor.order(); ++k) t.vectors.push_back(z);
    return t;
  }
  Eigen::VectorXd full = p.gauge.expand(u);
  std::vector<Eigen::VectorXd> us = p.layout.mode_vectors(full);
  for (auto& v : us) {
    const double nv = v.norm();
    if (!(nv > 0.0)) return std::nullopt;
    v /= nv;
  }
  const Eigen::VectorXd c = p.real.contract_leading(us);
  const double lam = c.norm();
  if (!(lam > kLambdaMin)) return std::nullopt;
  us.push_back(recover_last_block(p.real, us, lam));
  for (const auto& v : us) t.vectors.push_back(complexify(v));
  return t;
}

/// Undoes the program's mode permutation.
inline RankOneTuple to_input_order(const PolynomialProgram& p, const RankOneTuple& t) {
  RankOneTuple out;
  out.vectors.resize(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) out[p.perm[k]] = t[k];
  return out;
}

struct OrderRecord {
  int order = 0;
  std::size_t matrix_size = 0;
  std::vector<std::size_t> block_sizes;
  double rho = std::numeric_limits<double>::quiet_NaN();  ///< rigorous bound on max f
  double upper = std::numeric_limits<double>::quiet_NaN(); ///< rho in lambda units
  double moment_value = std::numeric_limits<double>::quiet_NaN();
  SolverStatus status = SolverStatus::Numerical;
  Flatness flatness;
  std::size_t atoms = 0;
  bool extraction_ok = false;
  double best_candidate = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
  std::string message;
};

struct OrderSolution {
  OrderRecord record;
  Eigen::VectorXd moments;  ///< full moment vector
  std::vector<Eigen::VectorXd> points;
};

/// Builds and solves the order-N relaxation; extracts candidate points.
inline OrderSolution solve_order(const PolynomialProgram& p, int order, const SolverConfig& cfg = {},
                                 const FacialReductionConfig& fr = {}, std::size_t max_matrix_size = 2000) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  OrderSolution out;
  out.record.order = order;
  RelaxationOptions ro;
  ro.max_matrix_size = max_matrix_size;
  ro.sign_blocks = p.blocks;
  ro.moment_bound = 1.0;
  const MomentRelaxation rel = build_relaxation(p.f, p.constraints, order, ro);
  const ConeProblem cp = rel.cone_problem();
  out.record.matrix_size = rel.basis_size;
  for (const auto& b : cp.blocks) out.record.block_sizes.push_back(b.size());
  const SolverResult res = solve(cp, cfg, fr);
  out.record.status = res.status;
  out.record.rho = res.bound;
  out.record.upper = p.to_lambda(res.bound);
  out.record.moment_value = res.moment_value;
  out.record.message = res.message;
  out.moments = rel.full_moments(res.y);
  const Eigen::MatrixXd mm = rel.moment_matrix(out.moments);
  out.record.flatness = flatness_rank(mm, p.nvars(), order);
  AtomExtraction ex = extract_atoms(rel.index, out.moments, order);
  out.record.atoms = ex.atoms.size();
  out.record.extraction_ok = ex.ok;
  if (!ex.ok && !ex.message.empty()) out.record.message += (out.record.message.empty() ? "" : "; ") + ex.message;
  out.points = std::move(ex.atoms);
  out.points.push_back(second_moment_point(rel.index, out.moments, p.blocks));
  out.record.seconds = std::chrono::duration<double>(clock::now() - t0).count();
  return out;
}

struct PipelineConfig {
  Route route = Route::Auto;
  int start_order = 0;  ///< 0: ceil(deg f / 2) + 1
  int max_order = 0;    ///< 0: start order + 2
  double tol = 1e-5;    ///< certification gap in lambda units
  int restarts = 64;
  int sweeps = 2000;
  std::uint64_t seed = 0;
  bool run_oracle = true;
  bool run_sdp = true;
  bool gauge = true;
  std::size_t max_matrix_size = 2000;
  SolverConfig solver;
  FacialReductionConfig facial;
};

struct PipelineResult {
  Route route = Route::Auto;
  EigenpairResult eigen;  ///< vectors in input mode order, canonical gauge
  std::vector<OrderRecord> orders;
  std::optional<double> oracle_value;
  double upper_bound = std::numeric_limits<double>::infinity();
  bool certified = false;
  double oracle_seconds = 0.0;
  double sdp_seconds = 0.0;
  double total_seconds = 0.0;
  std::vector<std::string> notes;
};

namespace detail {

/// Polished candidate in program mode order.
struct Candidate {
  PolishResult polished;
  std::string source;
};

inline RankOneTuple symmetrize(const ComplexTensor& a, const RankOneTuple& t) {
  const std::size_t m = a.order();
  CVector z = t[0];
  RankOneTuple s;
  s.vectors.assign(m, z);
  const cplx v = contract_all(a, s);
  if (std::abs(v) > 0.0) z *= std::polar(1.0, -std::arg(v) / static_cast<double>(m));
  s.vectors.assign(m, canonical_symmetric_vector(z, m));
  return s;
}

}  // namespace detail

/// Full computation: oracle, relaxation hierarchy, extraction, polish and
/// certificate.
inline PipelineResult largest_u_eigenvalue(const ComplexTensor& a, const PipelineConfig& cfg = {}) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  PipelineResult out;
  out.route = resolve_route(a, cfg.route);
  const PolynomialProgram prog = make_program(a, out.route, cfg.gauge);

  std::optional<detail::Candidate> best;
  auto consider = [&](PolishResult pr, std::string source) {
    if (!best || pr.lambda > best->polished.lambda + 1e-12 ||
        (pr.lambda > best->polished.lambda - 1e-12 && pr.residual < best->polished.residual))
      best = detail::Candidate{std::move(pr), std::move(source)};
  };

  double lower = 0.0;
  if (cfg.run_oracle) {
    const auto t0 = clock::now();
    HopmResult h = hopm(prog.tensor, cfg.restarts, cfg.sweeps, cfg.seed);
    out.oracle_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    out.oracle_value = lower = h.lambda;
    PolishResult pr;
    pr.lambda = h.lambda;
    pr.vectors = h.vectors;
    pr.residual = h.residual;
    pr.converged = h.residual < 1e-10;
    consider(std::move(pr), "oracle");
  }

  bool flat = false;
  std::size_t rank = 0, rank_prev = 0;
  int order_used = 0;
  if (cfg.run_sdp) {
    const auto t0 = clock::now();
    const int n0 = cfg.start_order > 0 ? cfg.start_order : prog.start_order();
    const int nmax = cfg.max_order > 0 ? cfg.max_order : n0 + 2;
    for (int n = n0; n <= nmax; ++n) {
      if (2 * n < prog.f.degree()) continue;
      OrderSolution sol;
      try {
        sol = solve_order(prog, n, cfg.solver, cfg.facial, cfg.max_matrix_size);
      } catch (const RelaxationError& e) {
        out.notes.push_back(std::string("order ") + std::to_string(n) + ": " + e.what());
        break;
      }
      double order_best = -1.0;
      for (std::size_t i = 0; i < sol.points.size(); ++i) {
        auto t = tuple_from_point(prog, sol.points[i]);
        if (!t) continue;
        PolishResult pr = polish(prog.tensor, *t);
        order_best = std::max(order_best, pr.lambda);
        const bool fallback = i + 1 == sol.points.size();
        consider(std::move(pr), std::string(fallback ? "second moments" : "atom") + " at order " + std::to_string(n));
      }
      sol.record.best_candidate = order_best;
      if (std::isfinite(sol.record.upper)) out.upper_bound = std::min(out.upper_bound, sol.record.upper);
      order_used = n;
      flat = sol.record.flatness.flat;
      rank = sol.record.flatness.rank;
      rank_prev = sol.record.flatness.rank_previous;
      out.orders.push_back(std::move(sol.record));
      if (best && out.upper_bound - best->polished.lambda <= cfg.tol && best->polished.residual <= 1e-8) break;
    }
    out.sdp_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  }

  if (!best) throw std::runtime_error("no candidate eigenpair: both oracle and relaxation disabled or degenerate");
  RankOneTuple vec = best->polished.vectors;
  double lam = best->polished.lambda;
  if (prog.route == Route::Symmetric) {
    RankOneTuple s = detail::symmetrize(prog.tensor, vec);
    const double ls = contract_all(prog.tensor, s).real();
    if (residual(prog.tensor, ls, s) <= std::max(best->polished.residual, 1e-10) && ls >= lam - 1e-12) {
      vec = s;
      lam = ls;
    }
  } else {
    vec = canonical_gauge(vec, prog.tensor.order() - 1);
  }
  vec = to_input_order(prog, vec);
  out.eigen = certify(a, lam, vec, out.upper_bound, lower, cfg.tol);
  out.eigen.order_used = order_used;
  out.eigen.certificate.flat = flat;
  out.eigen.certificate.rank = rank;
  out.eigen.certificate.rank_previous = rank_prev;
  out.eigen.certificate.source = best->source;
  out.eigen.certificate.extraction_flagged =
      !out.orders.empty() && !out.orders.back().extraction_ok;
  if (!cfg.run_sdp) out.eigen.certificate.note = "oracle only: no upper bound";
  out.certified = out.eigen.certificate.certified_global;
  out.total_seconds = std::chrono::duration<double>(clock::now() - start).count();
  return out;
}

}  // namespace ueig

#endif  // UEIG_PIPELINE_HPP
