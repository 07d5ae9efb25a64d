#include <gtest/gtest.h>

#include <cmath>

#include "biasreg/basin.hpp"
#include "biasreg/errors.hpp"

namespace biasreg {
namespace {

TEST(LocateMin, ExactParabolaRecovered) {
    const double mu = 0.3, kappa2 = 2.5;
    std::vector<double> xs, ys;
    for (int i = 2; i <= 200; ++i) {
        const double x = 0.05 * i;
        xs.push_back(x);
        ys.push_back(kappa2 * (x - 1.0) * (x - 1.0) / 2.0 + mu);
    }
    const BasinGeometry g = locate_min_and_curvature(xs, ys);
    EXPECT_NEAR(g.curvature, kappa2, 1e-6 * kappa2);
    EXPECT_NEAR(g.kappa, std::sqrt(kappa2), 1e-6);
    EXPECT_NEAR(g.err_min, mu, 1e-6 * mu);
    EXPECT_NEAR(g.alpha_min, 1.0, 1e-12);
    EXPECT_FALSE(g.edge);
}

TEST(LocateMin, OffsetInvariantAndScaleCovariant) {
    auto f = [](double a) { return std::pow(std::log(a) - 0.2, 2) + 0.1 * a; };
    const BasinGeometry base = locate_min_and_curvature(f);
    const BasinGeometry shifted = locate_min_and_curvature([&](double a) { return f(a) + 7.0; });
    const BasinGeometry scaled = locate_min_and_curvature([&](double a) { return 3.0 * f(a); });
    EXPECT_NEAR(shifted.curvature, base.curvature, 1e-8 * base.curvature);
    EXPECT_NEAR(scaled.curvature, 3.0 * base.curvature, 1e-8 * base.curvature);
    EXPECT_EQ(shifted.alpha_min, base.alpha_min);
}

TEST(LocateMin, GridMinimumIsBelowEverySample) {
    std::vector<double> xs, ys;
    for (int i = 0; i < 50; ++i) {
        xs.push_back(0.1 * (i + 1));
        ys.push_back(std::cos(xs.back()) + 0.01 * i);
    }
    const BasinGeometry g = locate_min_and_curvature(xs, ys);
    for (double y : ys) EXPECT_LE(g.err_min, y);
}

TEST(LocateMin, EdgeMinimumIsFlagged) {
    const BasinGeometry g = locate_min_and_curvature([](double a) { return a; });
    EXPECT_TRUE(g.edge);
    EXPECT_EQ(g.alpha_min, 1e-3);
}

TEST(LocateMin, DegenerateWindow) {
    EXPECT_THROW(locate_min_and_curvature(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0, 1.0}),
                 DegenerateFit);
    EXPECT_THROW(locate_min_and_curvature(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0}),
                 DimensionMismatch);
}

TEST(LocateMin, RidgeMinimumNearOracleAlpha) {
    TheoryParams params;
    const auto g = locate_min_and_curvature(
        [&](double a) { return theory_error(SchattenIndex::Frobenius, a, params); });
    const double step = std::pow(1e8, 1.0 / 499.0);
    EXPECT_GT(g.alpha_min, 1.0 / step);
    EXPECT_LT(g.alpha_min, 1.0 * step);
    const auto n = locate_min_and_curvature(
        [&](double a) { return theory_error(SchattenIndex::Nuclear, a, params); });
    EXPECT_LT(n.curvature, g.curvature);
}

TEST(ExpectedCvMinimum, Formula) {
    EXPECT_EQ(expected_cv_minimum(0.7, 0.0, 1.0, 4), 0.7);
    EXPECT_NEAR(expected_cv_minimum(0.0, 1.0, 1.0, 1), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(expected_cv_minimum(0.0, 2.0, 0.5, 3), 1.0 / 20.0, 1e-15);
    EXPECT_NEAR(expected_cv_minimum(0.4, 2.0, 1.0, 100000), 0.4, 1e-9);
    EXPECT_THROW(expected_cv_minimum(0.0, 1.0, 1.0, 0), DomainError);
    EXPECT_THROW(expected_cv_minimum(0.0, 1.0, 0.0, 1), DomainError);
}

TEST(MonteCarloParabola, FlatParabolaIsExact) {
    const auto mc = monte_carlo_parabola_min(0.25, 0.0, 1.0, 5, 2000, 1);
    EXPECT_EQ(mc.mean, 0.25);
    EXPECT_EQ(mc.std_error, 0.0);
    EXPECT_THROW(monte_carlo_parabola_min(0.0, 1.0, 1.0, 1, 999, 1), DomainError);
}

TEST(MonteCarloParabola, MatchesRuleOfThumbSweep) {
    for (double kappa : {0.5, 1.0, 2.0})
        for (int n : {1, 3, 10}) {
            const auto mc = monte_carlo_parabola_min(0.1, kappa, 1.0, n, 200000, 17 + n);
            EXPECT_LT(std::abs(mc.mean - expected_cv_minimum(0.1, kappa, 1.0, n)), 3.0 * mc.std_error)
                << "kappa " << kappa << " n " << n;
        }
}

TEST(GeometryTable, RidgeCellsAreZeroAndNuclearPattern) {
    GeometryTableSpec spec;
    const GeometryTable t = geometry_table(spec);
    EXPECT_EQ(t.cells.size(), 4u * 5u * 3u);
    for (double s : spec.sigmas)
        for (double l : spec.params) {
            const auto& r = t.at(s, l, SchattenIndex::Frobenius);
            EXPECT_EQ(r.depth_increase_pct, 0.0);
            EXPECT_EQ(r.curvature_increase_pct, 0.0);
        }
    const auto& cell = t.at(1.0, 0.5, SchattenIndex::Nuclear);
    EXPECT_GT(cell.depth_increase_pct, 0.0);
    EXPECT_LT(cell.curvature_increase_pct, 0.0);
    EXPECT_THROW(t.at(9.0, 0.5, SchattenIndex::Nuclear), DomainError);
}

TEST(GeometryTable, NoiseShrinksNuclearDepthGap) {
    const GeometryTable t = geometry_table(GeometryTableSpec{});
    for (double l : t.params) {
        double prev = INFINITY;
        for (double s : t.sigmas) {
            const double gap = t.at(s, l, SchattenIndex::Nuclear).depth_increase_pct;
            EXPECT_LT(gap, prev) << "lambda " << l << " sigma " << s;
            prev = gap;
        }
    }
}

TEST(GeometryTable, DiagonalEnsemble) {
    GeometryTableSpec spec;
    spec.ensemble = EnsembleKind::Diagonal;
    spec.sigmas = {1.0};
    spec.params = {0.5, 2.0};
    spec.grid.count = 200;
    const GeometryTable t = geometry_table(spec);
    for (double g : spec.params) {
        EXPECT_EQ(t.at(1.0, g, SchattenIndex::Frobenius).depth_increase_pct, 0.0);
        EXPECT_GE(t.at(1.0, g, SchattenIndex::Nuclear).depth_increase_pct, 0.0);
        EXPECT_GE(t.at(1.0, g, SchattenIndex::Spectral).depth_increase_pct, 0.0);
    }
}

}  // namespace
}  // namespace biasreg
