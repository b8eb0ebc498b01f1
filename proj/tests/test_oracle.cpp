#include <gtest/gtest.h>

#include "support.hpp"
#include "ueig/oracle.hpp"
#include "ueig/pipeline.hpp"

using namespace ueig;

TEST(Hopm, RankOneIsOne) {
  std::mt19937_64 rng(71);
  const ComplexTensor a = outer_product(test::random_tuple({2, 3, 2}, rng));
  const HopmResult h = hopm(a, 8);
  EXPECT_NEAR(h.lambda, 1.0, 1e-12);
  EXPECT_LE(h.residual, 1e-10);
}

TEST(Hopm, ExampleThree) {
  const HopmResult h = hopm(test::example(3), 64);
  EXPECT_NEAR(h.lambda, test::printed_lambda(3), 5e-5);
  EXPECT_EQ(h.values.size(), 64u);
}

TEST(Hopm, MatrixLargestSingularValue) {
  std::mt19937_64 rng(72);
  for (int s = 0; s < 5; ++s) {
    const ComplexTensor a = test::random_tensor({3, 3}, rng);
    EXPECT_NEAR(hopm(a, 8).lambda, test::largest_singular_value(test::as_matrix(a)), 1e-9);
  }
}

TEST(Hopm, SeededAndReproducible) {
  const ComplexTensor a = test::example(2);
  const HopmResult x = hopm(a, 16, 2000, 5), y = hopm(a, 16, 2000, 5);
  EXPECT_EQ(x.values, y.values);
  EXPECT_EQ(x.lambda, y.lambda);
  // restart r only depends on (seed, r)
  const HopmResult z = hopm(a, 4, 2000, 5);
  for (std::size_t r = 0; r < 4; ++r) EXPECT_EQ(z.values[r], x.values[r]);
  EXPECT_THROW(hopm(a, 0), std::invalid_argument);
}

TEST(Hopm, ZeroTensor) {
  const ComplexTensor a({2, 2, 2}, std::vector<cplx>(8, 0.0));
  EXPECT_EQ(hopm(a, 2).lambda, 0.0);
}

TEST(Hopm, SweepsAreMonotone) {
  std::mt19937_64 rng(73);
  for (int s = 0; s < 5; ++s) {
    const ComplexTensor a = test::random_tensor({2, 3, 2}, rng);
    RankOneTuple t = test::random_tuple({2, 3, 2}, rng);
    double prev = contract_all(a, t).real();
    for (int it = 0; it < 50; ++it) {
      alternating_sweep(a, t);
      const double lam = contract_all(a, t).real();
      EXPECT_GE(lam, prev - 1e-13);
      prev = lam;
    }
  }
}

TEST(Hopm, FixedPointResidual) {
  std::mt19937_64 rng(74);
  for (int s = 0; s < 5; ++s) {
    const HopmResult h = hopm(test::random_tensor({2, 2, 2}, rng), 16, 5000, static_cast<std::uint64_t>(s));
    EXPECT_LE(h.residual, 1e-8);
  }
}

TEST(Hopm, BelowRelaxationBound) {
  std::mt19937_64 rng(75);
  for (int s = 0; s < 3; ++s) {
    const ComplexTensor a = test::random_tensor({2, 2, 2}, rng);
    const OrderSolution o = solve_order(make_program(a, Route::NonSymmetric), 3);
    EXPECT_LE(hopm(a, 16).lambda, std::sqrt(o.record.rho) + 1e-7);
  }
}

TEST(Grid, IdentityMatrix) {
  const ComplexTensor id({2, 2}, {1.0, 0.0, 0.0, 1.0});
  const GridBand b = grid_certify_small(id);
  EXPECT_LE(b.lower, 1.0 + 1e-12);
  EXPECT_GE(b.upper, 1.0);
  EXPECT_NEAR(b.lower, 1.0, 1e-10);
}

TEST(Grid, ExampleOneBand) {
  const GridBand b = grid_certify_small(test::example(1), 4);
  EXPECT_LE(b.lower, 0.9317 + 5e-5);
  EXPECT_GE(b.upper, 0.9317 - 5e-5);
  EXPECT_NEAR(b.lower, 0.9317, 5e-5);
  EXPECT_EQ(b.points, 256u);
}

TEST(Grid, ZeroAndTooLarge) {
  const GridBand z = grid_certify_small(ComplexTensor({2, 2, 2}, std::vector<cplx>(8, 0.0)));
  EXPECT_EQ(z.lower, 0.0);
  EXPECT_EQ(z.upper, 0.0);
  std::mt19937_64 rng(76);
  EXPECT_THROW(grid_certify_small(test::random_tensor({3, 2, 2}, rng)), std::invalid_argument);
}

TEST(Grid, HemispherePointsAreUnit) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 3);
  for (int s = 0; s < 20; ++s) {
    const CVector z = detail::hemisphere_point(3, {u(rng), u(rng), u(rng), u(rng)});
    EXPECT_NEAR(z.norm(), 1.0, 1e-14);
    EXPECT_EQ(z(0).imag(), 0.0);
  }
}
