#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "schurent/majorization.hpp"

using namespace schurent;

TEST(Majorization, Predicate) {
    EXPECT_TRUE(majorizes({1, 1}, {2, 0}));
    EXPECT_FALSE(majorizes({2, 0}, {1, 1}));
    EXPECT_TRUE(majorizes({1, 1, 1}, {0, 3, 0}));
    EXPECT_TRUE(majorizes({0.5, 0.3, 0.2}, {0.2, 0.5, 0.3}));
    EXPECT_FALSE(majorizes({1, 1}, {2, 1}));
    EXPECT_TRUE(majorizes({-1, 1}, {-2, 2}));
    EXPECT_THROW(majorizes({1, 1}, {2, 0, 0}), DimensionError);
}

TEST(Majorization, ToleranceScalesWithB) {
    EXPECT_TRUE(majorizes({1e6 + 1e-7, 1e6 - 1e-7}, {2e6, 0}));
    EXPECT_FALSE(majorizes({1, 1}, {2 - 1e-9, 0}));
}

TEST(Majorization, EqualWeightsVersusPointMass) {
    const TransferMatrix t = transfer_certificate({1, 1}, {2, 0});
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            EXPECT_DOUBLE_EQ(t(i, j), 0.5);
        }
    }
}

TEST(Majorization, CertificateRejectsNonMajorizedPair) {
    EXPECT_THROW(transfer_certificate({2, 0}, {1, 1}), OrderError);
}

TEST(Majorization, CertificateOnRandomPairs) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t n = 2 + seed % 7;
        const auto [a, b] = random_majorization_pair(n, seed);
        ASSERT_TRUE(majorizes(a, b));
        const TransferMatrix t = transfer_certificate(a, b);
        EXPECT_TRUE(t.is_doubly_stochastic(1e-12)) << seed;
        const auto tb = t.apply(b.entries());
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(tb[i], a[i], 1e-10) << seed;
        }
    }
}

TEST(Majorization, CertificateForPermutation) {
    const WeightVector b{3, -1, 0.5, 2};
    const WeightVector a{0.5, 2, 3, -1};
    const TransferMatrix t = transfer_certificate(a, b);
    const auto tb = t.apply(b.entries());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(tb[i], a[i], 1e-12);
    }
}

TEST(Majorization, RandomPairsAreDeterministic) {
    const auto p1 = random_majorization_pair(5, 123);
    const auto p2 = random_majorization_pair(5, 123);
    const auto p3 = random_majorization_pair(5, 124);
    EXPECT_EQ(p1.first, p2.first);
    EXPECT_EQ(p1.second, p2.second);
    EXPECT_FALSE(p1.second == p3.second);
    EXPECT_THROW(random_majorization_pair(1, 0), ParameterDomainError);
}

TEST(Majorization, RngUnitInterval) {
    Rng r(7);
    Rng s(7);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.unit();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        ASSERT_EQ(u, s.unit());
    }
}

TEST(Majorization, ChainDescendsToUniform) {
    const WeightVector b{3, -1, 0.5, 2};
    const auto chain = majorization_chain(b, 5);
    ASSERT_EQ(chain.size(), 6u);
    EXPECT_EQ(chain.front(), b);
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
        EXPECT_TRUE(majorizes(chain[k + 1], chain[k])) << k;
        EXPECT_NEAR(chain[k].sum(), b.sum(), 1e-12);
    }
    for (double v : chain.back().vec()) {
        EXPECT_EQ(v, b.mean());
    }
    EXPECT_THROW(majorization_chain(b, 0), ParameterDomainError);
}

TEST(Majorization, ChainFromUniformIsConstant) {
    const auto chain = majorization_chain({1, 1, 1}, 3);
    for (const auto& v : chain) {
        EXPECT_EQ(v, (WeightVector{1, 1, 1}));
    }
}

TEST(Majorization, ChainCsv) {
    std::ostringstream os;
    write_chain_csv(majorization_chain({2, 0}, 2), os);
    EXPECT_EQ(os.str(), "2,0\n1.5,0.5\n1,1\n");
}

TEST(Majorization, WeightVectorParse) {
    EXPECT_EQ(WeightVector::parse("1, 0.5,-2"), (WeightVector{1, 0.5, -2}));
    EXPECT_THROW(WeightVector::parse(""), ParameterDomainError);
    EXPECT_THROW(WeightVector::parse("1,,2"), ParameterDomainError);
    EXPECT_THROW(WeightVector::parse("1,nan"), ParameterDomainError);
}
