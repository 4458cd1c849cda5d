#include "maxmargin/certify.hpp"
#include "maxmargin/constructions.hpp"
#include "maxmargin/error.hpp"
#include "maxmargin/spectra.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace maxmargin;

TEST(PhaseTriples, SumCondition) {
    for (const auto& t : cyclic_phase_triples()) {
        const double gap = std::remainder(t.theta_u + t.theta_v - t.theta_w, 2.0 * M_PI);
        EXPECT_NEAR(gap, 0.0, 1e-12);
    }
    EXPECT_EQ(cyclic_phase_triples().size(), 8u);
}

class Cyclic : public ::testing::TestWithParam<int> {};

TEST_P(Cyclic, WidthNormAndMargin) {
    const int p = GetParam();
    const auto net = build_cyclic(p);
    EXPECT_EQ(net.width(), 4 * (p - 1));
    EXPECT_NEAR(lab_norm(net, 2, 3), 1.0, 1e-12);
    const auto data = build_dataset(net.task);
    const auto rep = dataset_margin(net, data);
    EXPECT_NEAR(rep.normalized_margin, oracle::cyclic_gamma(p), 1e-8 * oracle::cyclic_gamma(p));
    EXPECT_EQ(rep.argmin.size(), static_cast<size_t>(data.size()));
}

TEST_P(Cyclic, UnscaledOutputPattern) {
    // Undo the unit-norm scale: each frequency then contributes 4A^3 cos(2 pi f (a+b-c)/p).
    const int p = GetParam();
    const double amp = std::sqrt(2.0 / (3.0 * p));
    const double unit = 4.0 * amp * amp * amp / (4.0 * (p - 1));
    const auto net = build_cyclic(p);
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) {
            const auto out = forward(net, a, b);
            for (int c = 0; c < p; ++c) {
                const double expect = c == (a + b) % p ? (p - 1) / 2.0 : -0.5;
                ASSERT_NEAR(out[c] / unit, expect, 1e-9);
            }
        }
}

INSTANTIATE_TEST_SUITE_P(Primes, Cyclic, ::testing::Values(3, 5, 7, 13));

TEST(Cyclic, NamedValues) {
    const auto d5 = build_dataset(TaskSpec::modular(5));
    EXPECT_NEAR(dataset_margin(build_cyclic(5), d5).normalized_margin, 0.0304290, 5e-8);
    const auto d71 = build_dataset(TaskSpec::modular(71));
    const auto n71 = build_cyclic(71);
    EXPECT_EQ(n71.width(), 280);
    EXPECT_NEAR(dataset_margin(n71, d71).normalized_margin, 4.61430e-4, 5e-9);
}

TEST(Cyclic, NeuronsAreSingleFrequency) {
    for (const auto& n : build_cyclic(5).neurons) {
        EXPECT_NEAR(*max_normalized_power(n.u), 1.0, 1e-12);
        EXPECT_NEAR(*max_normalized_power(n.w), 1.0, 1e-12);
    }
}

TEST(Cyclic, RejectsComposite) {
    EXPECT_THROW(build_cyclic(9), InvalidArgument);
    EXPECT_THROW(build_cyclic_frequency(7, 4), InvalidArgument);
}

TEST(Parity, WidthNormMargin) {
    for (int k = 1; k <= 4; ++k) {
        const auto net = build_parity(10, k);
        EXPECT_EQ(net.width(), 1 << (k - 1));
        EXPECT_NEAR(lab_norm(net, 2, k + 1), 1.0, 1e-12);
        const auto rep = dataset_margin(net, build_dataset(net.task));
        EXPECT_NEAR(rep.normalized_margin, oracle::parity_gamma(k), 1e-8 * oracle::parity_gamma(k)) << "k=" << k;
    }
    EXPECT_NEAR(oracle::parity_gamma(1), std::sqrt(0.5), 1e-15);
}

TEST(Parity, OutputIsScaledParityOnly) {
    for (auto [n, k] : {std::pair{6, 3}, std::pair{10, 4}, std::pair{5, 2}}) {
        const auto net = build_parity(n, k, {});
        const auto data = build_dataset(net.task);
        double fact = 1.0;
        for (int i = 2; i <= k; ++i) fact *= i;
        const double amp = fact * std::pow(k + 1.0, -(k + 1) / 2.0) / std::sqrt(2.0);
        for (int i = 0; i < data.size(); ++i) {
            double prod = 1.0;
            for (int j : net.task.support) prod *= data.row(i)[j];
            const auto out = forward(net, data, i);
            ASSERT_NEAR(out[0], amp * prod, 1e-12);
            ASSERT_NEAR(out[1], -amp * prod, 1e-12);
        }
    }
}

TEST(Parity, SupportOffLeadingBits) {
    const auto net = build_parity(6, 2, {2, 5});
    for (const auto& nr : net.neurons) {
        for (int j : {0, 1, 3, 4}) EXPECT_EQ(nr.u[j], 0.0);
        EXPECT_NE(nr.u[2], 0.0);
    }
    EXPECT_THROW(build_parity(6, 2, {2}), InvalidArgument);
}

TEST(GroupTrace, S3) {
    const Group g = make_group({GroupKind::symmetric, 3});
    const auto net = build_group_trace(g, irreps(g));
    EXPECT_EQ(net.width(), 18);
    EXPECT_NEAR(lab_norm(net, 2, 3), 1.0, 1e-12);
    const auto data = build_dataset(net.task);
    const auto rep = dataset_margin(net, data);
    const double gamma = oracle::group_gamma(6, {1, 2});
    EXPECT_NEAR(rep.normalized_margin, gamma, 1e-8 * gamma);
    EXPECT_NEAR(gamma, 2.0 / (3.0 * std::sqrt(18.0)) / (1.0 + std::pow(2.0, 2.5)), 1e-15);
    for (int i = 0; i < data.size(); ++i) {
        const auto out = forward(net, data, i);
        EXPECT_EQ(std::max_element(out.begin(), out.end()) - out.begin(), data.labels[i]);
    }
}

TEST(GroupTrace, IncorrectLogitsConstant) {
    const Group g = make_group({GroupKind::symmetric, 4});
    const auto net = build_group_trace(g, irreps(g));
    EXPECT_EQ(net.width(), 2 * (1 + 8 + 27 + 27));
    const auto data = build_dataset(net.task);
    const auto rep = dataset_margin(net, data);
    EXPECT_LT(rep.incorrect_spread, 1e-12);
    EXPECT_EQ(rep.argmin.size(), static_cast<size_t>(data.size()));
}

TEST(GroupTrace, S5WidthAndMargin) {
    const Group g = make_group({GroupKind::symmetric, 5});
    const auto net = build_group_trace(g, irreps(g));
    EXPECT_EQ(net.width(), 1190);
    const auto rep = dataset_margin(net, build_dataset(net.task));
    const double gamma = oracle::group_gamma(120, {1, 4, 4, 5, 5, 6});
    EXPECT_NEAR(rep.normalized_margin, gamma, 1e-8 * gamma);
}

TEST(GroupTrace, CoefficientMagnitudes) {
    const Group g = make_group({GroupKind::symmetric, 3});
    const auto reps = irreps(g);
    const auto basis = basis_vectors(reps, g);
    const auto net = build_group_trace(g, reps);
    // Undo the uniform 1/Delta and the per-rep cube-root scale and read the coefficients back.
    const double delta3 = 2.0 * (1.0 + std::pow(2.0, 2.5));
    for (const auto& nr : net.neurons) {
        const auto coeffs = coefficients_of(nr, basis, g.order);
        int nonzero = 0;
        for (const auto& cm : coeffs) {
            for (double a : cm.alpha) {
                if (std::abs(a) < 1e-12) continue;
                ++nonzero;
                const double unscaled = std::abs(a) * std::cbrt(delta3) / std::cbrt(double(cm.dim));
                EXPECT_NEAR(unscaled, 1.0 / std::sqrt(18.0), 1e-12);
            }
        }
        EXPECT_EQ(nonzero, 1);
    }
}

TEST(GroupTrace, RoundTripCoefficients) {
    const Group g = make_group({GroupKind::symmetric, 4});
    const auto reps = irreps(g);
    const auto basis = basis_vectors(reps, g);
    const auto net = build_group_trace(g, reps);
    const auto back = neuron_from_coefficients(coefficients_of(net.neurons[7], basis, g.order), basis, g.order);
    for (int x = 0; x < g.order; ++x) {
        EXPECT_NEAR(back.u[x], net.neurons[7].u[x], 1e-12);
        EXPECT_NEAR(back.w[x], net.neurons[7].w[x], 1e-12);
    }
}

TEST(Memorization, IndicatorOutput) {
    const auto net = build_memorization(5);
    EXPECT_EQ(net.width(), 50);
    const auto data = build_dataset(net.task);
    for (int i = 0; i < data.size(); ++i) {
        const auto out = forward(net, data, i);
        for (int c = 0; c < 5; ++c) ASSERT_DOUBLE_EQ(out[c], c == data.labels[i] ? 1.0 : 0.0);
    }
    const auto rep = dataset_margin(net, data);
    EXPECT_DOUBLE_EQ(rep.min_margin, 1.0);
    EXPECT_EQ(rep.accuracy, 1.0);
    EXPECT_LT(rep.normalized_margin, oracle::cyclic_gamma(5));
    // 2p^2 neurons of norm sqrt(2 + 1/16): margin 1 / (2 p^2 (33/16)^{3/2})
    EXPECT_NEAR(rep.normalized_margin, 1.0 / (50.0 * std::pow(33.0 / 16.0, 1.5)), 1e-15);
}

TEST(Memorization, CustomTargetAndFlatSpectra) {
    const auto net = build_memorization(5, [](int a, int b) { return (a * b) % 5; });
    EXPECT_DOUBLE_EQ(forward(net, 2, 3)[1], 1.0);
    for (const auto& nr : net.neurons) EXPECT_NEAR(*max_normalized_power(nr.u), 2.0 / 4.0, 1e-12);
    EXPECT_THROW(build_memorization(5, [](int, int) { return 7; }), InvalidArgument);
}
