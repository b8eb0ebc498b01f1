#include <gtest/gtest.h>

#include "support.hpp"
#include "ueig/extraction.hpp"
#include "ueig/moment.hpp"
#include "ueig/pipeline.hpp"
#include "ueig/sdp.hpp"

using namespace ueig;

namespace {

ConeProblem two_by_two() {
  ConeProblem p;
  p.objective = Eigen::Vector2d(0, 1);
  p.eq_matrix = Eigen::RowVector2d(1, 0);
  p.eq_rhs = Eigen::VectorXd::Ones(1);
  PsdBlock b;
  b.index.resize(2, 2);
  b.index << 0, 1, 1, 0;
  p.blocks.push_back(b);
  return p;
}

double min_eig_on_faces(const ConeProblem& p, const Eigen::VectorXd& y) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& b : p.blocks) {
    Eigen::MatrixXd m = b.matrix(y);
    if (b.face.size()) m = b.face.transpose() * m * b.face;
    lo = std::min(lo, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues()(0));
  }
  return lo;
}

}  // namespace

TEST(Sdp, TwoByTwo) {
  const SolverResult r = solve(two_by_two());
  EXPECT_EQ(r.status, SolverStatus::Optimal);
  EXPECT_NEAR(r.value, 1.0, 1e-7);
  EXPECT_NEAR(r.y(1), 1.0, 1e-6);
}

TEST(Sdp, InvalidProblemRejected) {
  ConeProblem p = two_by_two();
  p.blocks.clear();
  EXPECT_THROW(solve(p), std::invalid_argument);
  p = two_by_two();
  p.blocks[0].index(0, 1) = 0;
  EXPECT_THROW(solve(p), std::invalid_argument);
}

TEST(Sdp, CircleOrderOne) {
  const auto rel = build_relaxation(Polynomial::variable(2, 0), {sphere_constraint(2, {0, 2})}, 1);
  const SolverResult r = solve(rel.cone_problem());
  EXPECT_NEAR(r.bound, 1.0, 1e-7);
  const Eigen::VectorXd y = rel.full_moments(r.y);
  const Eigen::VectorXd dirac = rel.index.dirac(Eigen::Vector2d(1, 0));
  EXPECT_LE((y - dirac).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Sdp, ExampleOneOrderThree) {
  const ComplexTensor a = test::example(1);
  const PolynomialProgram p = make_program(a, Route::Partial);
  const OrderSolution s = solve_order(p, 3);
  const double lam = polish(a, test::printed(1)).lambda;
  EXPECT_NEAR(s.record.rho, lam * lam, 1e-6);
  EXPECT_NEAR(s.record.rho, 0.8681, 5e-5);
}

TEST(Sdp, WeakDualityAndFeasibility) {
  std::mt19937_64 rng(51);
  for (int s = 0; s < 3; ++s) {
    const PolynomialProgram p = make_program(test::random_tensor({2, 2, 2}, rng), Route::NonSymmetric);
    RelaxationOptions ro;
    ro.sign_blocks = p.blocks;
    ro.moment_bound = 1.0;
    const ConeProblem cp = build_relaxation(p.f, p.constraints, 3, ro).cone_problem();
    const SolverResult r = solve(cp);
    EXPECT_GE(r.bound, r.moment_value - 1e-7);
    EXPECT_GE(min_eig_on_faces(cp, r.y), -1e-8);
    EXPECT_LE((cp.eq_matrix * r.y - cp.eq_rhs).cwiseAbs().maxCoeff(), 1e-7);
  }
}

TEST(Sdp, Deterministic) {
  const PolynomialProgram p = make_program(test::example(2), Route::NonSymmetric);
  const OrderSolution a = solve_order(p, 3), b = solve_order(p, 3);
  EXPECT_EQ(a.record.rho, b.record.rho);
  EXPECT_EQ(a.moments, b.moments);
}
