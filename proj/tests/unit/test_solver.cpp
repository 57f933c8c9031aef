#include "seqrank/datagen.hpp"
#include "seqrank/errors.hpp"
#include "seqrank/random.hpp"
#include "seqrank/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace seqrank;

namespace {

double objective(const DenseMatrix& yk, const DenseMatrix& x, const Vector& a, const Vector& b) {
  return 0.5 * (yk - b * (x.transpose() * a).transpose()).squaredNorm();
}

Dataset noiseless(Eigen::Index m, Eigen::Index d, Eigen::Index n, Eigen::Index r, Profile p,
                  std::uint64_t seed, GroundTruth* gt_out = nullptr) {
  const GroundTruth gt = generate_w_star(m, d, r, p, 100, seed);
  if (gt_out) *gt_out = gt;
  return make_dataset(gt, n, NoiseSpec{}, seed);
}

double tail_norm(const Vector& s, Eigen::Index from) {
  return s.tail(s.size() - from).norm();
}

}  // namespace

TEST(BestRankOne, IdentityDesignRankOneLabels) {
  Rng rng(1);
  const Vector u = gaussian_vector(4, rng).normalized(), v = gaussian_vector(6, rng).normalized();
  const DenseMatrix y = 3.0 * u * v.transpose();
  const Rank1Pair p = best_rank1_exact(y, DenseMatrix::Identity(6, 6));
  EXPECT_NEAR(p.b.norm(), 1.0, 1e-12);
  EXPECT_LE((p.b * p.a.transpose() - y).norm(), 1e-12);
  const auto [b, a] = align_sign(p.b, p.a, u, v);
  EXPECT_LE((b - u).norm(), 1e-12);
  EXPECT_LE((a - 3.0 * v).norm(), 1e-12);
}

TEST(BestRankOne, PaddedDiagonal) {
  DenseMatrix y = DenseMatrix::Zero(3, 3);
  y(0, 0) = 5;
  y(1, 1) = 3;
  const Rank1Pair p = best_rank1_exact(y, DenseMatrix::Identity(3, 3));
  DenseMatrix expected = DenseMatrix::Zero(3, 3);
  expected(0, 0) = 5;
  EXPECT_LE((p.b * p.a.transpose() - expected).norm(), 1e-12);
}

TEST(BestRankOne, ResidualIsSpectralTail) {
  Rng rng(2);
  const DenseMatrix x = sample_x(50, 200, 3);
  const DenseMatrix y = gaussian_matrix(20, 50, rng) * x;  // labels inside the row space
  const Rank1Pair p = best_rank1_exact(y, x);
  const double resid = (y - p.b * (x.transpose() * p.a).transpose()).norm();
  const double tail = tail_norm(singular_values(y), 1);
  EXPECT_NEAR(resid, tail, 1e-6 * tail);
  EXPECT_NEAR(p.b.norm(), 1.0, 1e-12);
}

TEST(BestRankOne, MinimizesObjectiveUnderNoise) {
  Rng rng(3);
  const DenseMatrix x = sample_x(8, 30, 4);
  const DenseMatrix y = gaussian_matrix(6, 8, rng) * x + 0.5 * gaussian_matrix(6, 30, rng);
  const Rank1Pair p = best_rank1_exact(y, x);
  const double best = objective(y, x, p.a, p.b);
  // Top triple of y followed by a least-squares fit of a: feasible, never better.
  const SingularTriple t = top_singular_triple(y);
  const Vector a_ls = least_squares_row(t.sigma * t.v, x).a;
  EXPECT_LE(best, objective(y, x, a_ls, t.u) + 1e-12);
  for (int trial = 0; trial < 200; ++trial) {
    const Vector a = p.a + 0.05 * gaussian_vector(8, rng);
    const Vector b = p.b + 0.05 * gaussian_vector(6, rng);
    ASSERT_LE(best, objective(y, x, a, b) + 1e-12);
  }
}

TEST(BestRankOne, Errors) {
  EXPECT_THROW(best_rank1_exact(DenseMatrix::Zero(3, 5), sample_x(2, 5, 1)), NumericalError);
  EXPECT_THROW(best_rank1_exact(DenseMatrix::Ones(3, 5), DenseMatrix::Ones(2, 5)), NumericalError);
  EXPECT_THROW(best_rank1_exact(DenseMatrix::Ones(3, 4), sample_x(2, 5, 1)), DimensionError);
}

TEST(SolveExact, RecoversNoiselessLabels) {
  GroundTruth gt;
  const Dataset ds = noiseless(20, 30, 60, 5, Profile::PowerLaw, 1, &gt);
  const SolveTrace t = solve_exact(ds.x, ds.y, 5);
  ASSERT_EQ(t.components.size(), 5u);
  EXPECT_FALSE(t.exhausted);
  EXPECT_LE(t.components.back().residual_fro_after, 1e-8 * ds.y.norm());
  EXPECT_LE((reconstruct_w(t) - gt.w_star).norm(), 1e-6 * gt.w_star.norm());
  EXPECT_LE((reconstruct_labels(t, ds.x) - ds.y).norm(), 1e-8 * ds.y.norm());
  for (const auto& c : t.components) {
    EXPECT_EQ(c.delta_fro, 0.0);
    EXPECT_EQ(c.iters_used, 0u);
    EXPECT_NEAR(c.b.norm(), 1.0, 1e-12);
  }
}

TEST(SolveExact, RankOneLabels) {
  const Dataset ds = noiseless(6, 8, 16, 1, Profile::Uniform, 2);
  const SolveTrace t = solve_exact(ds.x, ds.y, 1);
  ASSERT_EQ(t.components.size(), 1u);
  EXPECT_LE(t.components[0].residual_fro_after, 1e-10 * ds.y.norm());
}

TEST(SolveExact, TruncatedResidualIsTail) {
  const Dataset ds = noiseless(20, 30, 60, 6, Profile::ExponentialDecay, 3);
  const Vector s = singular_values(ds.y);
  for (std::size_t r = 1; r < 6; ++r) {
    const SolveTrace t = solve_exact(ds.x, ds.y, r);
    const double tail = tail_norm(s, static_cast<Eigen::Index>(r));
    EXPECT_NEAR(t.components.back().residual_fro_after, tail, 1e-6 * tail) << r;
  }
}

TEST(SolveExact, DeflationPeelsSpectrum) {
  const Dataset ds = noiseless(30, 40, 80, 6, Profile::PowerLaw, 4);
  const Vector s = singular_values(ds.y);
  SolveOptions opts;
  opts.keep_deflated = true;
  const SolveTrace t = solve_exact(ds.x, ds.y, 6, opts);
  ASSERT_EQ(t.deflated.size(), 7u);
  for (std::size_t k = 0; k + 1 < 6; ++k) {
    const double top = singular_values(t.deflated[k + 1])(0);
    EXPECT_NEAR(top, s(static_cast<Eigen::Index>(k + 1)), 1e-8 * s(static_cast<Eigen::Index>(k + 1)));
  }
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_LT(t.deflated[k + 1].norm(), t.deflated[k].norm());
  }
}

TEST(SolveExact, ExhaustsOnLowRankLabels) {
  const Dataset ds = noiseless(10, 12, 24, 2, Profile::PowerLaw, 5);
  const SolveTrace t = solve_exact(ds.x, ds.y, 4);
  ASSERT_EQ(t.components.size(), 4u);
  EXPECT_TRUE(t.exhausted);
  EXPECT_EQ(t.components[2].a.norm(), 0.0);
  EXPECT_EQ(t.components[3].b.norm(), 0.0);
  const SolveTrace two = solve_exact(ds.x, ds.y, 2);
  EXPECT_LE((reconstruct_w(t) - reconstruct_w(two)).norm(), 1e-12);
}

TEST(RankOneGd, ZeroLabelsShrink) {
  const DenseMatrix x = sample_x(5, 12, 1);
  GdConfig cfg;
  cfg.max_iters = 500;
  const GdResult init = rank1_gd(DenseMatrix::Zero(4, 12), x, GdConfig{std::nullopt, std::nullopt, 1e-2, 0, 0.0}, 9);
  const GdResult r = rank1_gd(DenseMatrix::Zero(4, 12), x, cfg, 9);
  EXPECT_LE((r.b * r.a.transpose()).norm(), init.a.norm() * init.b.norm());
}

TEST(RankOneGd, ConvergesOnRankOneIdentityDesign) {
  Rng rng(2);
  const Vector u = gaussian_vector(5, rng).normalized(), v = gaussian_vector(7, rng).normalized();
  const DenseMatrix y = 4.0 * u * v.transpose();
  GdConfig cfg;
  cfg.max_iters = 5000;
  const GdResult r = rank1_gd(y, DenseMatrix::Identity(7, 7), cfg, 3);
  EXPECT_LE((r.b * r.a.transpose() - y).norm(), 1e-6);
  EXPECT_EQ(r.iters_used, 5000u);
}

TEST(RankOneGd, ZeroBudgetReturnsInit) {
  const DenseMatrix x = sample_x(5, 12, 1);
  const DenseMatrix y = DenseMatrix::Ones(3, 12);
  GdConfig cfg;
  cfg.max_iters = 0;
  const GdResult r = rank1_gd(y, x, cfg, 4);
  EXPECT_EQ(r.iters_used, 0u);
  Rng rng(4);
  EXPECT_EQ(r.a, gaussian_vector(5, rng, 1e-2));
  EXPECT_EQ(r.b, gaussian_vector(3, rng, 1e-2));
}

TEST(RankOneGd, DivergenceNamesSteps) {
  const DenseMatrix x = sample_x(5, 12, 1);
  GdConfig cfg;
  cfg.step_a = 50.0;
  cfg.step_b = 50.0;
  cfg.max_iters = 200;
  try {
    rank1_gd(100.0 * DenseMatrix::Ones(3, 12), x, cfg, 1);
    FAIL() << "expected divergence";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("step_a=50"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("step_b=50"), std::string::npos) << e.what();
  }
}

TEST(RankOneGd, GradTolStopsEarly) {
  Rng rng(2);
  const DenseMatrix y = 2.0 * gaussian_vector(4, rng).normalized() * gaussian_vector(6, rng).normalized().transpose();
  GdConfig cfg;
  cfg.max_iters = 100000;
  cfg.grad_tol = 1e-6;
  const GdResult r = rank1_gd(y, DenseMatrix::Identity(6, 6), cfg, 1);
  EXPECT_LT(r.iters_used, cfg.max_iters);
  EXPECT_LE((r.b * r.a.transpose() - y).norm(), 1e-4);
}

TEST(RankOneGd, InvalidConfig) {
  GdConfig cfg;
  cfg.init_scale = 0.0;
  EXPECT_THROW(rank1_gd(DenseMatrix::Ones(2, 3), DenseMatrix::Identity(3, 3), cfg, 1), ConfigError);
  cfg.init_scale = 1e-2;
  cfg.step_a = -1.0;
  EXPECT_THROW(rank1_gd(DenseMatrix::Ones(2, 3), DenseMatrix::Identity(3, 3), cfg, 1), ConfigError);
}

TEST(MeasureDelta, ExactPairIsZero) {
  const Dataset ds = noiseless(10, 12, 30, 3, Profile::PowerLaw, 6);
  const Rank1Pair p = best_rank1_exact(ds.y, ds.x);
  EXPECT_LE(measure_delta(ds.y, ds.x, p.a, p.b), 1e-10);
  EXPECT_LE(measure_delta(ds.y, ds.x, 3.0 * p.a, p.b / 3.0), 1e-10);
  EXPECT_THROW(measure_delta(ds.y, ds.x, p.b, p.a), DimensionError);
}

TEST(MeasureDelta, ShrinksWithBudget) {
  const Dataset ds = noiseless(10, 12, 30, 3, Profile::PowerLaw, 6);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t t = 16; t <= 16384; t *= 2) {
    GdConfig cfg;
    cfg.max_iters = t;
    const GdResult r = rank1_gd(ds.y, ds.x, cfg, 1);
    const double d = measure_delta(ds.y, ds.x, r.a, r.b);
    EXPECT_GT(d, 0.0);
    EXPECT_LE(d, 1.1 * prev) << t;
    prev = d;
  }
  EXPECT_LE(prev, 1e-6);
}

TEST(Allocation, Equal) {
  EXPECT_EQ(make_allocation(Strategy::Equal, 3, 300).budgets, (std::vector<std::size_t>{100, 100, 100}));
  EXPECT_EQ(make_allocation(Strategy::Equal, 3, 11).budgets, (std::vector<std::size_t>{4, 4, 3}));
}

TEST(Allocation, RampAndReverse) {
  EXPECT_EQ(make_allocation(Strategy::MoreFirst, 3, 300).budgets, (std::vector<std::size_t>{150, 100, 50}));
  EXPECT_EQ(make_allocation(Strategy::LessFirst, 3, 300).budgets, (std::vector<std::size_t>{50, 100, 150}));
  EXPECT_EQ(make_allocation(Strategy::MoreFirst, 4, 10).budgets, (std::vector<std::size_t>{4, 3, 2, 1}));
  EXPECT_EQ(make_allocation(Strategy::MoreFirst, 3, 100).budgets, (std::vector<std::size_t>{50, 33, 17}));
  EXPECT_EQ(make_allocation(Strategy::MoreFirst, 5, 7).budgets, (std::vector<std::size_t>{2, 2, 1, 1, 1}));
  EXPECT_EQ(make_allocation(Strategy::MoreFirst, 20, 8000).budgets,
            (std::vector<std::size_t>{762, 724, 686, 648, 610, 571, 533, 495, 457, 419, 381, 343, 305, 267,
                                      229, 190, 152, 114, 76, 38}));
}

TEST(Allocation, SumsAndBoundsSweep) {
  for (std::size_t r = 1; r <= 25; ++r) {
    for (std::size_t total = r; total <= 40 * r; total += 7) {
      for (auto s : {Strategy::Equal, Strategy::MoreFirst, Strategy::LessFirst}) {
        const AllocationPlan p = make_allocation(s, r, total);
        ASSERT_EQ(p.budgets.size(), r);
        ASSERT_EQ(p.total(), total);
        for (auto b : p.budgets) ASSERT_GE(b, 1u);
      }
      const auto more = make_allocation(Strategy::MoreFirst, r, total).budgets;
      auto less = make_allocation(Strategy::LessFirst, r, total).budgets;
      std::reverse(less.begin(), less.end());
      ASSERT_EQ(more, less);
    }
  }
}

TEST(Allocation, Errors) {
  EXPECT_THROW(make_allocation(Strategy::Equal, 5, 4), DimensionError);
  EXPECT_THROW(make_allocation(Strategy::Equal, 0, 4), DimensionError);
  EXPECT_THROW(explicit_allocation({}), DimensionError);
  EXPECT_EQ(explicit_allocation({0, 0}).strategy, Strategy::Explicit);
  EXPECT_EQ(parse_strategy("LessFirst"), Strategy::LessFirst);
  EXPECT_THROW(parse_strategy("Random"), ConfigError);
}

TEST(SolveInexact, LargeBudgetsMatchExact) {
  GroundTruth gt;
  const Dataset ds = noiseless(8, 10, 20, 3, Profile::PowerLaw, 7, &gt);
  const SolveTrace t =
      solve_inexact(ds.x, ds.y, 3, make_allocation(Strategy::Equal, 3, 60000), GdConfig{}, 1);
  EXPECT_LE((reconstruct_w(t) - gt.w_star).norm() / gt.w_star.norm(), 1e-4);
  ASSERT_TRUE(t.allocation.has_value());
  EXPECT_EQ(t.mode, SolveMode::Inexact);
  for (const auto& c : t.components) EXPECT_EQ(c.iters_used, 20000u);
}

TEST(SolveInexact, ZeroBudgetsLeaveLabels) {
  const Dataset ds = noiseless(8, 10, 20, 3, Profile::PowerLaw, 7);
  GdConfig cfg;
  cfg.init_scale = 1e-8;
  const SolveTrace t = solve_inexact(ds.x, ds.y, 3, explicit_allocation({0, 0, 0}), cfg, 1);
  EXPECT_NEAR(t.components.back().residual_fro_after, ds.y.norm(), 1e-6);
  for (const auto& c : t.components) EXPECT_EQ(c.iters_used, 0u);
}

TEST(SolveInexact, SeedDeterminism) {
  const Dataset ds = noiseless(8, 10, 20, 3, Profile::ExponentialDecay, 8);
  const auto plan = make_allocation(Strategy::MoreFirst, 3, 90);
  const SolveTrace a = solve_inexact(ds.x, ds.y, 3, plan, GdConfig{}, 5);
  const SolveTrace b = solve_inexact(ds.x, ds.y, 3, plan, GdConfig{}, 5);
  const SolveTrace c = solve_inexact(ds.x, ds.y, 3, plan, GdConfig{}, 6);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(a.components[k].a, b.components[k].a);
    EXPECT_EQ(a.components[k].b, b.components[k].b);
    EXPECT_EQ(a.components[k].delta_fro, b.components[k].delta_fro);
    EXPECT_EQ(a.components[k].residual_fro_after, b.components[k].residual_fro_after);
  }
  EXPECT_NE(a.components[0].a, c.components[0].a);
}

TEST(SolveInexact, ProductScaleInvariance) {
  const Dataset ds = noiseless(8, 10, 20, 3, Profile::PowerLaw, 9);
  SolveOptions opts;
  opts.keep_deflated = true;
  const SolveTrace t = solve_inexact(ds.x, ds.y, 3, make_allocation(Strategy::Equal, 3, 300), GdConfig{}, 2, opts);
  SolveTrace scaled = t;
  for (auto& c : scaled.components) {
    c.a *= 7.5;
    c.b /= 7.5;
  }
  EXPECT_LE((reconstruct_w(t) - reconstruct_w(scaled)).norm(), 1e-12 * reconstruct_w(t).norm());
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& c = scaled.components[k];
    EXPECT_NEAR(measure_delta(t.deflated[k], ds.x, c.a, c.b), t.components[k].delta_fro, 1e-10);
    const DenseMatrix next = t.deflated[k] - c.b * (ds.x.transpose() * c.a).transpose();
    EXPECT_NEAR(next.norm(), t.components[k].residual_fro_after, 1e-10);
  }
}

TEST(SolveInexact, PlanLengthMismatch) {
  const Dataset ds = noiseless(8, 10, 20, 3, Profile::PowerLaw, 7);
  EXPECT_THROW(solve_inexact(ds.x, ds.y, 3, make_allocation(Strategy::Equal, 2, 10), GdConfig{}, 1),
               DimensionError);
}

TEST(Reconstruct, SingleComponentAndEmpty) {
  SolveTrace t;
  EXPECT_THROW(reconstruct_w(t), DimensionError);
  RankOneComponent c;
  c.a = Eigen::Vector3d(1, 2, 3);
  c.b = Eigen::Vector2d(-1, 4);
  t.components.push_back(c);
  EXPECT_EQ(reconstruct_w(t), c.b * c.a.transpose());
}
