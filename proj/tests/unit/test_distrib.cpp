#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "claclab/core/rng.hpp"
#include "claclab/distrib.hpp"

using namespace claclab;
using namespace claclab::distrib;

namespace {

constexpr double kHalfLn2PiE = 1.4189385332046727;  // 0.5 * ln(2 pi e)

// Normalized random pmf over states x actions.
DiscreteJoint random_joint(std::size_t s, std::size_t a, Rng& rng) {
  std::vector<double> p(s * a);
  double total = 0.0;
  for (double& x : p) total += (x = rng.uniform() + 1e-3);
  for (double& x : p) x /= total;
  // Renormalize the last cell so the sum is 1 to within rounding.
  double rest = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) rest += p[i];
  p.back() = 1.0 - rest;
  return DiscreteJoint(s, a, p);
}

double gaussian_kl_1d(double m1, double s1, double m2, double s2) {
  return std::log(s2 / s1) + (s1 * s1 + (m1 - m2) * (m1 - m2)) / (2 * s2 * s2) - 0.5;
}

}  // namespace

TEST(GaussianEntropy, ClosedForms) {
  EXPECT_NEAR(gaussian_entropy(DiagGaussian({0.0}, {0.0})), 1.41894, 1e-5);
  EXPECT_NEAR(gaussian_entropy(DiagGaussian({0.0, 1.0, 2.0}, {0.0, 0.0, 0.0})), 3 * 1.41894, 3e-5);
  EXPECT_NEAR(gaussian_entropy(DiagGaussian({0.0}, {std::log(2.0)})), 2.11208, 1e-5);
}

TEST(GaussianEntropy, LogStdIsClamped) {
  const DiagGaussian d({0.0, 0.0}, {-50.0, 9.0});
  EXPECT_EQ(d.log_std()[0], -20.0);
  EXPECT_EQ(d.log_std()[1], 2.0);
  EXPECT_DOUBLE_EQ(gaussian_entropy(d), (-20.0 + kHalfLn2PiE) + (2.0 + kHalfLn2PiE));
  EXPECT_THROW(DiagGaussian({0.0}, {0.0, 1.0}), InvalidArgument);
}

TEST(GaussianLogProb, Values) {
  const double half_ln_2pi = 0.5 * std::log(2 * M_PI);
  EXPECT_NEAR(gaussian_log_prob(DiagGaussian({0.0}, {0.0}), std::vector<double>{0.0}), -0.91894, 1e-5);
  const DiagGaussian d({0.3, -1.2}, {std::log(0.4), std::log(3.0)});
  EXPECT_NEAR(gaussian_log_prob(d, std::vector<double>{0.3, -1.2}),
              -(std::log(0.4) + half_ln_2pi) - (std::log(3.0) + half_ln_2pi), 1e-12);
  EXPECT_NEAR(gaussian_log_prob(DiagGaussian({1.0}, {std::log(0.5)}), std::vector<double>{0.0}), -2.22579, 1e-5);
  EXPECT_THROW(gaussian_log_prob(d, std::vector<double>{0.0}), InvalidArgument);
}

TEST(SampleSquashed, ZeroNoiseGivesTanhMean) {
  const DiagGaussian d({0.4, -2.0}, {0.1, -1.0});
  const auto s = sample_squashed(d, std::vector<double>{0.0, 0.0});
  EXPECT_DOUBLE_EQ(s.action[0], std::tanh(0.4));
  EXPECT_DOUBLE_EQ(s.action[1], std::tanh(-2.0));
  EXPECT_DOUBLE_EQ(s.pre_squash[0], 0.4);
}

TEST(SampleSquashed, LogProbGrowsAsStdShrinks) {
  double previous = -INFINITY;
  for (double ls : {0.0, -2.0, -5.0, -10.0}) {
    const double lp = sample_squashed(DiagGaussian({0.0}, {ls}), std::vector<double>{0.0}).log_prob;
    EXPECT_GT(lp, previous);
    previous = lp;
  }
  EXPECT_GT(previous, 5.0);
}

// log p_a(a) = log p_u(u) - log |d tanh/du|, with the Jacobian from central differences.
TEST(SampleSquashed, MatchesChangeOfVariablesOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const double mean = rng.uniform(-1.0, 1.0), log_std = rng.uniform(-1.5, 0.0), eta = rng.normal();
    const double u = mean + std::exp(log_std) * eta;
    if (std::abs(u) > 2.0) continue;
    const double h = 1e-6;
    const double jac = (std::tanh(u + h) - std::tanh(u - h)) / (2 * h);
    const double pu = -0.5 * eta * eta - log_std - 0.5 * std::log(2 * M_PI);
    const double oracle = pu - std::log(jac);
    const auto s = sample_squashed(DiagGaussian({mean}, {log_std}), std::vector<double>{eta});
    EXPECT_NEAR(s.log_prob, oracle, 2e-5) << "u=" << u;
  }
}

TEST(SquashCorrection, GradientMatchesFiniteDifferences) {
  for (double u : {-3.0, -0.7, 0.0, 0.2, 1.5, 4.0}) {
    const double h = 1e-6;
    const double fd = (squash_correction(u + h) - squash_correction(u - h)) / (2 * h);
    EXPECT_NEAR(squash_correction_grad(u), fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST(DiscreteMi, KnownValues) {
  EXPECT_NEAR(discrete_mi(DiscreteJoint(2, 2, {0.5, 0.0, 0.0, 0.5})), std::log(2.0), 1e-15);
  // Product of (0.3, 0.7) and (0.2, 0.8).
  EXPECT_NEAR(discrete_mi(DiscreteJoint(2, 2, {0.06, 0.24, 0.14, 0.56})), 0.0, 1e-15);
  // Four cells summed by hand: 2 * 0.4 ln(0.4/0.25) + 2 * 0.1 ln(0.1/0.25).
  const double expected = 0.8 * std::log(1.6) + 0.2 * std::log(0.4);
  EXPECT_NEAR(discrete_mi(DiscreteJoint(2, 2, {0.4, 0.1, 0.1, 0.4})), expected, 1e-15);
  EXPECT_NEAR(expected, 0.192745, 1e-6);
}

TEST(DiscreteMi, RejectsInvalidPmf) {
  EXPECT_THROW(DiscreteJoint(2, 2, {0.5, 0.5, 0.1, -0.1}), InvalidArgument);
  EXPECT_THROW(DiscreteJoint(2, 2, {0.5, 0.5, 0.1, 0.1}), InvalidArgument);
  EXPECT_THROW(DiscreteJoint(2, 2, {0.5, 0.5}), InvalidArgument);
}

TEST(DiscreteMi, NonNegativeSymmetricAndZeroOnProducts) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto j = random_joint(3, 4, rng);
    EXPECT_GE(discrete_mi(j), -1e-15);
    EXPECT_NEAR(discrete_mi(j), discrete_mi(j.transposed()), 1e-12);

    std::vector<double> ps(3), pa(4);
    double ts = 0, ta = 0;
    for (double& x : ps) ts += (x = rng.uniform() + 0.01);
    for (double& x : pa) ta += (x = rng.uniform() + 0.01);
    std::vector<double> prod;
    for (double s : ps)
      for (double a : pa) prod.push_back((s / ts) * (a / ta));
    double total = 0;
    for (std::size_t i = 0; i + 1 < prod.size(); ++i) total += prod[i];
    prod.back() = 1.0 - total;
    EXPECT_NEAR(discrete_mi(DiscreteJoint(3, 4, prod)), 0.0, 1e-10);
  }
}

TEST(DiscreteMi, EntropyDifferenceIdentityTwoByTwo) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto j = random_joint(2, 2, rng);
    EXPECT_NEAR(mi_from_entropies(j), discrete_mi(j), 1e-10);
  }
}

TEST(MiSampleEstimate, Subtraction) {
  EXPECT_EQ(mi_sample_estimate(-1.0, -2.0), 1.0);
  EXPECT_EQ(mi_sample_estimate(-0.7, -0.7), 0.0);
  EXPECT_LT(mi_sample_estimate(-3.0, -2.0), 0.0);
}

// Mean of log pi(u|s) - log marginal(u) over s and u ~ pi(.|s) approaches the
// average closed-form Gaussian KL.
TEST(MiSampleEstimate, ConvergesToAnalyticKl) {
  const std::vector<double> means{-0.8, 0.1, 0.9}, stds{0.5, 0.3, 0.6};
  MarginalEstimate m(1, 1.0);
  marginal_update(m, std::vector<double>{0.05}, std::vector<double>{0.8}, 1.0);
  double analytic = 0.0;
  for (std::size_t s = 0; s < 3; ++s) analytic += gaussian_kl_1d(means[s], stds[s], m.mean[0], std::sqrt(m.variance[0])) / 3.0;

  Rng rng(21);
  double total = 0.0;
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    const std::size_t s = rng.index(3);
    const DiagGaussian d({means[s]}, {std::log(stds[s])});
    const auto sample = sample_squashed(d, std::vector<double>{rng.normal()});
    total += mi_sample_estimate(sample.log_prob, marginal_log_prob(m, sample.pre_squash));
  }
  EXPECT_NEAR(total / n, analytic, 0.02 * analytic);
}

TEST(MarginalUpdate, ExtremeRatesAndMixtureExample) {
  MarginalEstimate m(1, 0.5);
  marginal_update(m, std::vector<double>{0.0}, std::vector<double>{1.0}, 0.5);  // first call copies
  EXPECT_TRUE(m.initialized);
  marginal_update(m, std::vector<double>{2.0}, std::vector<double>{1.0}, 0.5);
  EXPECT_DOUBLE_EQ(m.mean[0], 1.0);
  EXPECT_DOUBLE_EQ(m.variance[0], 2.0);

  const MarginalEstimate before = m;
  marginal_update(m, std::vector<double>{5.0}, std::vector<double>{3.0}, 0.0);
  EXPECT_EQ(m, before);
  marginal_update(m, std::vector<double>{-4.0}, std::vector<double>{0.25}, 1.0);
  EXPECT_EQ(m.mean[0], -4.0);
  EXPECT_EQ(m.variance[0], 0.25);
}

TEST(MarginalUpdate, RejectsBadInput) {
  MarginalEstimate m(2, 0.1);
  EXPECT_THROW(marginal_update(m, std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 0.0}, 0.1), InvalidArgument);
  EXPECT_THROW(marginal_update(m, std::vector<double>{0.0}, std::vector<double>{1.0}, 0.1), InvalidArgument);
  EXPECT_THROW(marginal_log_prob(m, std::vector<double>{0.0, 0.0}), PreconditionError);
}

TEST(MarginalUpdate, ConvergesToMixtureMoments) {
  const std::vector<double> w{0.2, 0.5, 0.3}, mu{1.0, 3.0, 6.0}, var{0.5, 1.0, 2.0};
  double mix_mean = 0, second = 0;
  for (int k = 0; k < 3; ++k) {
    mix_mean += w[k] * mu[k];
    second += w[k] * (var[k] + mu[k] * mu[k]);
  }
  const double mix_var = second - mix_mean * mix_mean;

  MarginalEstimate m(1, 1.0);
  Rng rng(3);
  for (int n = 1; n <= 100'000; ++n) {
    const double u = rng.uniform();
    const int k = u < w[0] ? 0 : (u < w[0] + w[1] ? 1 : 2);
    marginal_update(m, std::vector<double>{mu[k]}, std::vector<double>{var[k]}, 1.0 / n);
  }
  EXPECT_NEAR(m.mean[0], mix_mean, 0.01 * mix_mean);
  EXPECT_NEAR(m.variance[0], mix_var, 0.01 * mix_var);
}

TEST(MarginalLogProb, NormalizationShift) {
  MarginalEstimate m(1, 1.0);
  marginal_update(m, std::vector<double>{0.3}, std::vector<double>{1.0}, 1.0);
  const std::vector<double> at_mean{0.3};
  EXPECT_NEAR(marginal_log_density(m, at_mean), -0.5 * std::log(2 * M_PI), 1e-15);
  const double before = marginal_log_density(m, at_mean);
  m.variance[0] = 2.0;
  EXPECT_NEAR(before - marginal_log_density(m, at_mean), 0.5 * std::log(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(marginal_log_prob(m, at_mean), marginal_log_density(m, at_mean) + squash_correction(0.3));
}

TEST(MarginalLogProb, MonteCarloEntropyIdentity) {
  MarginalEstimate m(2, 1.0);
  marginal_update(m, std::vector<double>{0.5, -1.0}, std::vector<double>{0.3, 2.0}, 1.0);
  const double h = gaussian_entropy(m.as_gaussian());
  Rng rng(17);
  double total = 0;
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    const std::vector<double> u{m.mean[0] + std::sqrt(m.variance[0]) * rng.normal(),
                                m.mean[1] + std::sqrt(m.variance[1]) * rng.normal()};
    total -= marginal_log_density(m, u);
  }
  EXPECT_NEAR(total / n, h, 0.02 * std::abs(h));
}
