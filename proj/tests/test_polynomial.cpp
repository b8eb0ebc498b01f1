#include <gtest/gtest.h>

#include "support.hpp"
#include "ueig/objective.hpp"
#include "ueig/polynomial.hpp"

using namespace ueig;

namespace {

Polynomial var(std::size_t n, std::size_t i) { return Polynomial::variable(n, i); }

Polynomial random_poly(std::size_t nv, int deg, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Polynomial p(nv);
  for (const auto& m : monomials_up_to(nv, deg)) p.add_term(m, g(rng));
  return p;
}

Eigen::VectorXd random_point(std::size_t nv, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd u(static_cast<Eigen::Index>(nv));
  for (auto& x : u) x = g(rng);
  return u;
}

}  // namespace

TEST(Polynomial, ProductOfVariable) {
  Polynomial u1 = var(2, 0);
  Polynomial p = u1 * u1;
  ASSERT_EQ(p.terms().size(), 1u);
  EXPECT_EQ(p.coefficient({2, 0}), 1.0);
}

TEST(Polynomial, BinomialSquare) {
  Polynomial s = var(2, 0) + var(2, 1);
  Polynomial p = s * s;
  EXPECT_EQ(p.terms().size(), 3u);
  EXPECT_EQ(p.coefficient({2, 0}), 1.0);
  EXPECT_EQ(p.coefficient({1, 1}), 2.0);
  EXPECT_EQ(p.coefficient({0, 2}), 1.0);
}

TEST(Polynomial, CancellationDropsTerms) {
  Polynomial u1 = var(2, 0), u2 = var(2, 1), one = Polynomial::constant(2, 1.0);
  Polynomial p = (u1 * u1 + u2 * u2 - one) + (one - u2 * u2);
  ASSERT_EQ(p.terms().size(), 1u);
  EXPECT_EQ(p.coefficient({2, 0}), 1.0);
}

TEST(Polynomial, VariableCountMismatchThrows) {
  EXPECT_THROW(var(2, 0) + var(3, 0), DimensionError);
}

TEST(Polynomial, GradedLexOrder) {
  Polynomial p(2);
  for (const auto& m : monomials_up_to(2, 2)) p.add_term(m, 1.0);
  std::vector<Monomial> got;
  for (const auto& [e, c] : p.terms()) got.push_back(e);
  EXPECT_EQ(got, (std::vector<Monomial>{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}));
}

TEST(Polynomial, DebugSerialization) {
  Polynomial p = var(2, 0) * var(2, 0) * 3.0 + var(2, 1);
  EXPECT_EQ(p.to_string(), "1 * u2\n3 * u1^2\n");
}

TEST(Partial, Examples) {
  Polynomial u1 = var(2, 0), u2 = var(2, 1);
  Polynomial d = (u1 * u1 * u2).partial(0);
  EXPECT_EQ(d.terms().size(), 1u);
  EXPECT_EQ(d.coefficient({1, 1}), 2.0);
  Polynomial g = sphere_constraint(2, {0, 2});
  Polynomial dg = g.partial(1);
  EXPECT_EQ(dg.terms().size(), 1u);
  EXPECT_EQ(dg.coefficient({0, 1}), 2.0);
  EXPECT_THROW(u1.partial(2), std::out_of_range);
}

TEST(Partial, FiniteDifferences) {
  std::mt19937_64 rng(21);
  for (int s = 0; s < 20; ++s) {
    Polynomial p = random_poly(4, 4, rng);
    Eigen::VectorXd u = random_point(4, rng) * 0.5;
    for (std::size_t i = 0; i < 4; ++i) {
      const double h = 1e-5;
      Eigen::VectorXd a = u, b = u;
      a(i) += h;
      b(i) -= h;
      const double fd = (p.evaluate(a) - p.evaluate(b)) / (2 * h);
      const double ex = p.partial(i).evaluate(u);
      EXPECT_LE(std::abs(fd - ex), 1e-6 * std::max(1.0, std::abs(ex)));
    }
  }
}

TEST(Polynomial, RingAxioms) {
  std::mt19937_64 rng(22);
  for (int s = 0; s < 10; ++s) {
    Polynomial p = random_poly(3, 2, rng), q = random_poly(3, 2, rng), r = random_poly(3, 2, rng);
    Eigen::VectorXd u = random_point(3, rng);
    EXPECT_NEAR(((p * q) * r).evaluate(u), (p * (q * r)).evaluate(u), 1e-12 * (1 + std::abs((p * q * r).evaluate(u))));
    EXPECT_NEAR((p * (q + r)).evaluate(u), (p * q + p * r).evaluate(u), 1e-12 * (1 + std::abs((p * (q + r)).evaluate(u))));
  }
}

TEST(Polynomial, EulerIdentity) {
  std::mt19937_64 rng(23);
  const ComplexTensor a = test::random_tensor({2, 3, 2}, rng);
  const auto lay = VariableLayout::make(a.dims());
  const Polynomial f = build_objective_squared(realify(a), lay);
  ASSERT_TRUE(f.is_homogeneous());
  for (int s = 0; s < 10; ++s) {
    Eigen::VectorXd u = random_point(f.nvars(), rng);
    double e = 0;
    for (std::size_t i = 0; i < f.nvars(); ++i) e += u(i) * f.partial(i).evaluate(u);
    EXPECT_NEAR(e, f.degree() * f.evaluate(u), 1e-10 * (1 + std::abs(e)));
  }
}

TEST(Objective, SquaredMatchesContraction) {
  std::mt19937_64 rng(24);
  const ComplexTensor a = test::random_tensor({2, 3, 2}, rng);
  const RealTensor b = realify(a);
  const auto lay = VariableLayout::make(a.dims());
  const Polynomial f = build_objective_squared(b, lay);
  for (int s = 0; s < 20; ++s) {
    Eigen::VectorXd u = random_point(lay.nvars, rng);
    const auto us = lay.mode_vectors(u);
    EXPECT_NEAR(f.evaluate(u), b.contract_leading(us).squaredNorm(), 1e-10);
  }
}

TEST(Objective, ExampleOneHasFourVariables) {
  const ComplexTensor a = test::example(1);
  const Polynomial f = build_objective_squared(realify(a), VariableLayout::make(a.dims(), {{0, 1}}));
  EXPECT_EQ(f.nvars(), 4u);
  EXPECT_NEAR(f.coefficient({2, 0, 2, 0}), 1.5, 1e-14);
}

TEST(Objective, ExampleTwoTerm) {
  const ComplexTensor a = test::example(2);
  const Polynomial f = build_objective_squared(realify(a), VariableLayout::make(a.dims()));
  EXPECT_EQ(f.nvars(), 8u);
  EXPECT_NEAR(f.coefficient({2, 0, 0, 0, 2, 0, 0, 0}), 1.0 / 36.0, 1e-14);
  EXPECT_NEAR(f.coefficient({0, 0, 0, 2, 0, 0, 0, 2}), 4.0 / 9.0, 1e-14);
}

TEST(Objective, RankOneAtFactorsIsOne) {
  std::mt19937_64 rng(25);
  const RankOneTuple t = test::random_tuple({2, 3, 2}, rng);
  const ComplexTensor a = outer_product(t);
  const auto lay = VariableLayout::make(a.dims());
  const Polynomial f = build_objective_squared(realify(a), lay);
  Eigen::VectorXd u(lay.nvars);
  u << realify_vector(t[0]), realify_vector(t[1]);
  EXPECT_NEAR(f.evaluate(u), 1.0, 1e-12);
}

TEST(Objective, InconsistentMergeThrows) {
  EXPECT_THROW(VariableLayout::make({2, 3, 2}, {{0, 1}}), DimensionError);
  EXPECT_THROW(VariableLayout::make({2, 2, 2}, {{0, 2}}), DimensionError);
}

TEST(Objective, SymmetricOrderOne) {
  ComplexTensor a({1}, {1.0}, SymmetryClass::none());
  ComplexTensor s = ComplexTensor({1}, {1.0}).with_symmetry(SymmetryClass::full());
  Polynomial f = build_objective_symmetric(s);
  ASSERT_EQ(f.terms().size(), 1u);
  EXPECT_EQ(f.coefficient({1, 0}), 1.0);
  EXPECT_THROW(build_objective_symmetric(a), SymmetryError);
}

TEST(Objective, SymmetricRankOneIsOne) {
  std::mt19937_64 rng(26);
  CVector z = test::random_unit(3, rng);
  const ComplexTensor a = outer_product({{z, z, z}}).with_symmetry(SymmetryClass::full());
  EXPECT_NEAR(build_objective_symmetric(a).evaluate(realify_vector(z)), 1.0, 1e-12);
}

TEST(Objective, SymmetricExampleFour) {
  const ComplexTensor a = test::example(4);
  EXPECT_NEAR(build_objective_symmetric(a).evaluate(realify_vector(test::printed(4)[0])), 1.0, 5e-5);
}

TEST(Sphere, Constraint) {
  Polynomial g = sphere_constraint(2, {0, 2});
  EXPECT_EQ(g.coefficient({2, 0}), 1.0);
  EXPECT_EQ(g.coefficient({0, 2}), 1.0);
  EXPECT_EQ(g.coefficient({0, 0}), -1.0);
  Polynomial g1 = sphere_constraint(1, {0, 1});
  EXPECT_EQ(g1.terms().size(), 2u);
  std::mt19937_64 rng(27);
  Eigen::VectorXd u = random_point(2, rng);
  EXPECT_NEAR(g.evaluate(u / u.norm()), 0.0, 1e-15);
}
