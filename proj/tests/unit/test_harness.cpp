#include <cmath>
#include <cstdlib>
#include <string>

#include <gtest/gtest.h>

#include "schurent/harness.hpp"

using namespace schurent;

namespace {

CampaignSpec small_spec(CampaignKind kind, std::vector<DensityModel> models, std::size_t n, std::size_t pairs) {
    CampaignSpec s;
    s.kind = kind;
    s.models = std::move(models);
    s.n_min = s.n_max = n;
    s.pairs_per_case = pairs;
    s.seed = 11;
    return s;
}

double gaussian_entropy(const std::vector<double>& w) {
    double s = 0.0;
    for (double x : w) {
        s += x * x;
    }
    return 0.5 * std::log(2.0 * M_PI * M_E * s);
}

} // namespace

TEST(Harness, KindNames) {
    EXPECT_EQ(parse_campaign_kind("scan-chain"), CampaignKind::scan_chain);
    EXPECT_EQ(campaign_kind_name(CampaignKind::lemma2), "lemma2");
    EXPECT_THROW(parse_campaign_kind("theorem2"), CampaignConfigError);
}

TEST(Harness, SpecValidation) {
    CampaignSpec s;
    s.pairs_per_case = 0;
    EXPECT_THROW(s.validate(), CampaignConfigError);
    s = CampaignSpec{};
    s.alphas = {0.5, 1.5};
    EXPECT_THROW(s.validate(), CampaignConfigError);
    s = CampaignSpec{};
    s.n_min = 1;
    EXPECT_THROW(s.validate(), CampaignConfigError);
    s = CampaignSpec{};
    s.kind = CampaignKind::scan_chain;
    s.alphas = {0.5, 2.0};
    EXPECT_NO_THROW(s.validate());
}

TEST(Harness, SchurCampaignRefusesNonLogConcaveModels) {
    auto s = small_spec(CampaignKind::theorem1, {DensityModel::gamma(0.5, 1)}, 2, 1);
    EXPECT_THROW(run_theorem1(s), CampaignConfigError);
    s.expect_violation = true;
    const auto r = run_theorem1(s);
    ASSERT_EQ(r.cases().size(), 1u);
    EXPECT_TRUE(r.cases()[0].expected_violation);
}

TEST(Harness, GaussianSchurCasesMatchClosedForm) {
    const auto r = run_theorem1(small_spec(CampaignKind::theorem1, {DensityModel::normal(0, 1)}, 3, 4));
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.exit_code(), 0);
    ASSERT_EQ(r.cases().size(), 4u);
    for (const auto& c : r.cases()) {
        EXPECT_EQ(c.verdict, "pass");
        EXPECT_NEAR(c.h_a, gaussian_entropy(c.a), 1e-6 + c.error_bound);
        EXPECT_NEAR(c.h_b, gaussian_entropy(c.b), 1e-6 + c.error_bound);
        EXPECT_TRUE(majorizes(WeightVector(c.a), WeightVector(c.b)));
        ASSERT_EQ(c.alpha_values.size(), 3u);
    }
}

TEST(Harness, CounterexampleFlagsExpectedViolation) {
    const auto r = run_counterexample(small_spec(CampaignKind::counterexample, {}, 2, 3));
    EXPECT_TRUE(r.ok());
    EXPECT_GE(r.summary().expected_violations, 1u);
    const auto& fixture = r.cases().front();
    EXPECT_EQ(fixture.b, (std::vector<double>{2.0, 0.0}));
    EXPECT_NEAR(fixture.h_a, 1.0, 1e-3);
    EXPECT_NEAR(fixture.h_b, 0.78375711047393366, 1e-3);
    EXPECT_LT(fixture.margin, -0.1);
    EXPECT_EQ(fixture.verdict, "expected_violation");
    EXPECT_TRUE(fixture.expected_violation);
    for (const auto& c : r.cases()) {
        EXPECT_NE(c.verdict, "inconsistent");
    }
}

TEST(Harness, CounterexampleRejectsOtherModels) {
    auto s = small_spec(CampaignKind::counterexample, {DensityModel::normal(0, 1)}, 2, 1);
    EXPECT_THROW(run_counterexample(s), CampaignConfigError);
}

TEST(Harness, EqualWeightChains) {
    const auto r = run_corollary1(small_spec(CampaignKind::corollary1, {DensityModel::logistic(0, 1)}, 4, 2));
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.cases().size(), 2u * 6u);
}

TEST(Harness, ScanChainFromPointMass) {
    auto s = small_spec(CampaignKind::scan_chain, {DensityModel::normal(0, 1)}, 2, 1);
    s.chain_start = WeightVector{2, 0};
    s.chain_steps = 4;
    const auto r = run_scan_chain(s);
    ASSERT_EQ(r.cases().size(), 4u);
    EXPECT_NEAR(r.cases().front().h_b, 2.1120857137646181, 1e-4);
    EXPECT_NEAR(r.cases().back().h_a, 1.7655121234846454, 1e-4);
    for (const auto& c : r.cases()) {
        EXPECT_GT(c.margin, 0.0);
        EXPECT_EQ(c.verdict, "pass");
    }
}

TEST(Harness, ScanChainFromUniformIsTrivial) {
    auto s = small_spec(CampaignKind::scan_chain, {DensityModel::exponential(1)}, 3, 1);
    s.chain_start = WeightVector{1, 1, 1};
    s.alphas = {0.5, 2.0};
    const auto r = run_scan_chain(s);
    EXPECT_TRUE(r.ok());
    for (const auto& c : r.cases()) {
        EXPECT_EQ(c.margin, 0.0);
        EXPECT_TRUE(c.alpha_values[1].outside_hypothesis);
    }
}

TEST(Harness, OrderAndChainCampaigns) {
    const auto r2 = run_lemma_campaigns(small_spec(CampaignKind::lemma2, {DensityModel::normal(0, 1)}, 3, 1));
    EXPECT_TRUE(r2.ok());
    EXPECT_EQ(r2.cases().front().label, "fixture equal-vs-drop-one");
    const auto r1 = run_lemma_campaigns(small_spec(CampaignKind::lemma1, {DensityModel::exponential(1)}, 2, 1));
    EXPECT_TRUE(r1.ok());
    bool saw_fixture = false;
    for (const auto& c : r1.cases()) {
        if (c.label == "fixture half-vs-single") {
            saw_fixture = true;
            EXPECT_EQ(c.verdict, "pass");
            EXPECT_NEAR(c.h_b, 1.0, 1e-4);
        }
    }
    EXPECT_TRUE(saw_fixture);
    EXPECT_THROW(run_lemma_campaigns(small_spec(CampaignKind::theorem1, {}, 2, 1)), CampaignConfigError);
}

TEST(Harness, MixedSignCasesAreFlagged) {
    const auto r = run_theorem1(small_spec(CampaignKind::theorem1, {DensityModel::gamma(2, 1)}, 3, 6));
    EXPECT_TRUE(r.ok());
    bool any = false;
    for (const auto& c : r.cases()) {
        const bool mixed = WeightVector(c.a).mixed_sign() || WeightVector(c.b).mixed_sign();
        EXPECT_EQ(c.mixed_sign, mixed);
        any = any || mixed;
    }
    EXPECT_TRUE(any);
}

TEST(Harness, ReportsAreDeterministicAcrossThreadCounts) {
    const auto spec = small_spec(CampaignKind::theorem1, {DensityModel::normal(0, 1), DensityModel::laplace(0, 1)}, 2, 2);
    ::setenv("SCHURENT_THREADS", "1", 1);
    const std::string one = run_campaign(spec).to_json().dump();
    ::setenv("SCHURENT_THREADS", "3", 1);
    const std::string three = run_campaign(spec).to_json().dump();
    ::unsetenv("SCHURENT_THREADS");
    EXPECT_EQ(one, three);
    auto other = spec;
    other.seed = 12;
    EXPECT_NE(run_campaign(other).to_json().dump(), one);
}

TEST(Harness, JsonAndCsvLayout) {
    auto s = small_spec(CampaignKind::theorem1, {DensityModel::uniform(0, 1)}, 2, 1);
    const auto r = run_theorem1(s);
    const Json j = r.to_json();
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["campaign"]["kind"], "theorem1");
    for (const char* key : {"model", "n", "a", "b", "H_a", "H_b", "alpha_values", "margin", "error_bound", "verdict"}) {
        EXPECT_TRUE(j["cases"][0].contains(key)) << key;
    }
    EXPECT_TRUE(j["cases"][0]["alpha_values"].contains("0.3"));
    for (const char* key : {"cases", "passes", "violations", "worst_margin"}) {
        EXPECT_TRUE(j["summary"].contains(key)) << key;
    }
    const std::string csv = r.to_csv();
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "model,n,label,a,b,H_a,H_b,margin,error_bound,verdict,expected_violation,mixed_sign,"
              "H_a@0.3,H_b@0.3,margin@0.3,H_a@0.5,H_b@0.5,margin@0.5,H_a@0.9,H_b@0.9,margin@0.9");
}

TEST(Harness, DegenerateEntropyIsSerializedAsString) {
    EXPECT_EQ(detail::number(-INFINITY), "-inf");
    const auto e = detail::sum_entropies(DensityModel::normal(0, 1), WeightVector{0, 0}, {0.5}, GridConfig{});
    EXPECT_TRUE(e.shannon.degenerate());
    EXPECT_TRUE(e.renyi[0].degenerate());
}
