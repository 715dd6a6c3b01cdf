#include <cmath>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "schurent/density_grid.hpp"

using namespace schurent;

namespace {

double normal_pdf(double x, double var) { return std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * M_PI * var); }

} // namespace

TEST(DensityGrid, DiscretizeIsNormalizedAndCentred) {
    for (const auto& m : catalog_default()) {
        const DensityGrid g = discretize(m);
        EXPECT_EQ(g.size(), GridConfig{}.points_per_grid) << m.tag();
        EXPECT_NEAR(g.integral(), 1.0, 1e-12) << m.tag();
        EXPECT_NEAR(g.mean(), m.mean(), 1e-12 * (1.0 + std::abs(m.mean()))) << m.tag();
        EXPECT_NEAR(g.variance(), m.variance(), (m.log_concave() ? 1e-5 : 1e-3) * m.variance()) << m.tag();
    }
}

TEST(DensityGrid, ConstructorValidates) {
    EXPECT_THROW(DensityGrid(0.0, 0.0, {1.0}), GridIncompatibilityError);
    EXPECT_THROW(DensityGrid(0.0, 1.0, {0.5, -0.5}), GridIncompatibilityError);
    EXPECT_THROW(DensityGrid(0.0, 1.0, {0.2, 0.2}), GridIncompatibilityError);
    EXPECT_THROW(DensityGrid(0.0, 1.0, {0.5, 0.5}), GridIncompatibilityError);
    EXPECT_NO_THROW(DensityGrid(0.0, 0.25, std::vector<double>(8, 0.5)));
}

TEST(DensityGrid, GridConfigValidates) {
    GridConfig cfg;
    cfg.points_per_grid = 1000;
    EXPECT_THROW(cfg.validate(), ParameterDomainError);
    cfg = GridConfig{};
    cfg.tail_mass_tol = 0.0;
    EXPECT_THROW(cfg.validate(), ParameterDomainError);
}

TEST(DensityGrid, ScaleWeight) {
    const DensityGrid g = discretize(DensityModel::exponential(1));
    EXPECT_THROW(scale_weight(g, 0.0), DegenerateWeightError);
    const DensityGrid neg = scale_weight(g, -2.0);
    EXPECT_NEAR(neg.mean(), -2.0, 1e-10);
    EXPECT_NEAR(neg.integral(), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(neg.step(), 2.0 * g.step());
    EXPECT_DOUBLE_EQ(neg.value(0), 0.5 * g.value(g.size() - 1));
}

TEST(DensityGrid, CoarsenPreservesMassAndMean) {
    const DensityGrid g = discretize(DensityModel::gamma(2, 1));
    const DensityGrid c = coarsen(g);
    EXPECT_EQ(c.size(), g.size() / 2);
    EXPECT_NEAR(c.integral(), 1.0, 1e-12);
    EXPECT_NEAR(c.mean(), g.mean(), 1e-10);
}

TEST(DensityGrid, ResampleKeepsMass) {
    const DensityGrid g = discretize(DensityModel::normal(0, 1));
    const DensityGrid r = resample_to_step(g, 3.0 * g.step());
    EXPECT_NEAR(r.integral(), 1.0, 1e-12);
    EXPECT_NEAR(r.mean(), 0.0, 1e-12);
}

TEST(DensityGrid, NormalConvolutionMatchesClosedForm) {
    const DensityGrid g = discretize(DensityModel::normal(0, 1));
    const DensityGrid s = convolve(g, g);
    EXPECT_NEAR(s.integral(), 1.0, 1e-12);
    EXPECT_LT(l1_distance(s, [](double x) { return normal_pdf(x, 2.0); }), 1e-5);
}

TEST(DensityGrid, HalfGammaSelfConvolutionIsExponential) {
    GridConfig cfg;
    cfg.points_per_grid = std::size_t{1} << 18;
    const DensityGrid s = weighted_sum_density(DensityModel::gamma(0.5, 1), WeightVector{1, 1}, cfg);
    const double l1 = l1_distance(s, [](double x) { return x < 0 ? 0.0 : std::exp(-x); });
    EXPECT_LT(l1, 1e-4);
}

TEST(DensityGrid, WeightedSumOfNormalsHasClosedFormVariance) {
    const WeightVector w{1.5, -0.5, 0.25};
    const DensityGrid s = weighted_sum_density(DensityModel::normal(0, 1), w);
    EXPECT_NEAR(s.integral(), 1.0, 1e-12);
    EXPECT_NEAR(s.mean(), 0.0, 1e-9);
    EXPECT_NEAR(s.variance(), w.sum_of_squares(), 1e-5);
    EXPECT_LT(l1_distance(s, [&](double x) { return normal_pdf(x, w.sum_of_squares()); }), 1e-5);
}

TEST(DensityGrid, WeightedSumIsPermutationInvariant) {
    const auto model = DensityModel::laplace(0, 1);
    const DensityGrid a = weighted_sum_density(model, WeightVector{0.3, -1.2, 0.7});
    const DensityGrid b = weighted_sum_density(model, WeightVector{-1.2, 0.7, 0.3});
    ASSERT_EQ(a.size(), b.size());
    EXPECT_DOUBLE_EQ(a.origin(), b.origin());
    for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_EQ(a.value(i), b.value(i));
    }
}

TEST(DensityGrid, ZeroWeightsAreDropped) {
    const auto model = DensityModel::exponential(1);
    const DensityGrid a = weighted_sum_density(model, WeightVector{2, 0});
    const DensityGrid b = weighted_sum_density(model, WeightVector{2});
    ASSERT_EQ(a.size(), b.size());
    EXPECT_DOUBLE_EQ(a.mean(), b.mean());
    EXPECT_THROW(weighted_sum_density(model, WeightVector{0, 0}), DegenerateSumError);
}

TEST(DensityGrid, WeightedSumMeanIsExact) {
    const auto model = DensityModel::exponential(1);
    const WeightVector w{1.2103558463521022, -0.001723329033448101};
    const DensityGrid s = weighted_sum_density(model, w);
    EXPECT_NEAR(s.mean(), w.sum(), 1e-7);
}

TEST(DensityGrid, LogConcavityOfSums) {
    for (const auto& m : catalog_log_concave()) {
        const DensityGrid s = weighted_sum_density(m, WeightVector{1.0, 0.6, -0.3});
        EXPECT_TRUE(log_concavity_check(s).log_concave) << m.tag();
    }
}

TEST(DensityGrid, HalfGammaIsNotLogConcave) {
    const auto m = DensityModel::gamma(0.5, 1);
    const DensityGrid g = discretize(m);
    const auto r = log_concavity_check(g);
    EXPECT_FALSE(r.log_concave);
    ASSERT_TRUE(r.first_violation.has_value());
    EXPECT_LT(*r.first_violation, 0.01 * (g.upper_edge() - g.lower_edge()));
    EXPECT_GT(r.max_second_difference, 1e-3);
}

TEST(DensityGrid, CsvDump) {
    const DensityGrid g = discretize(DensityModel::uniform(0, 1), GridConfig{256, 1e-16, 1e-6});
    std::ostringstream os;
    write_grid_csv(g, os);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "x,density");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
    }
    EXPECT_EQ(rows, 256u);
    EXPECT_NE(os.str().find("0.001953125,1\n"), std::string::npos);
}
