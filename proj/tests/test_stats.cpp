#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "rfts/stats.hpp"

using namespace rfts;

TEST_SUITE_BEGIN("stats");

TEST_CASE("weighted moments: degenerate cases") {
    const std::vector<double> fives(100, 5.0);
    const std::vector<double> ones(100, 1.0);
    const Estimate est = weighted_moments(fives, ones);
    CHECK(est.mean == doctest::Approx(5.0));
    CHECK(est.std_error == doctest::Approx(0.0));
    CHECK(est.effective_n == doctest::Approx(100.0));

    std::vector<double> bernoulli(1000);
    for (std::size_t i = 0; i < bernoulli.size(); ++i) {
        bernoulli[i] = i % 2 == 0 ? 0.0 : 1.0;
    }
    const std::vector<double> w(1000, 1.0);
    const Estimate half = weighted_moments(bernoulli, w);
    CHECK(half.mean == doctest::Approx(0.5));
    CHECK(half.std_error == doctest::Approx(0.5 / std::sqrt(1000.0)));

    const std::vector<double> zeros(4, 0.0);
    const std::vector<double> vals(4, 1.0);
    CHECK_THROWS_AS(weighted_moments(vals, zeros), std::invalid_argument);
    const std::vector<double> neg = {1.0, -0.5, 1.0, 1.0};
    CHECK_THROWS_AS(weighted_moments(vals, neg), std::invalid_argument);
}

TEST_CASE("lognormal weights: effective sample fraction is 1/exp(g norm)") {
    const double gamma = 0.6;  // log weight = -gamma Z - gamma^2/2
    const std::size_t n = 100000;
    std::mt19937_64 rng(217);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> values(n), logw(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = normal(rng);
        values[i] = z;
        logw[i] = -gamma * z - 0.5 * gamma * gamma;
    }
    const Estimate est = weighted_moments_log(values, logw);
    const double expected_fraction = std::exp(-gamma * gamma);
    CHECK(est.effective_n / static_cast<double>(n) ==
          doctest::Approx(expected_fraction).epsilon(0.10));
    // under the tilted law the mean of Z is -gamma
    CHECK(std::fabs(est.mean + gamma) <= 4.0 * est.std_error);
}

TEST_CASE("sample variance and covariance expose usable errors") {
    std::mt19937_64 rng(33);
    std::normal_distribution<double> normal(0.0, 2.0);
    const std::size_t n = 50000;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = normal(rng);
        y[i] = 0.5 * x[i] + normal(rng);
    }
    const Estimate var = sample_variance(x);
    CHECK(std::fabs(var.mean - 4.0) <= 3.0 * var.std_error);
    const Estimate cov = sample_covariance(x, y);
    CHECK(std::fabs(cov.mean - 2.0) <= 3.0 * cov.std_error);
}

TEST_CASE("standard error shrinks like 1/sqrt(n)") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t n = 40000;
    std::vector<double> x(2 * n);
    for (double& v : x) {
        v = normal(rng);
    }
    const Estimate small = sample_mean(std::span<const double>(x.data(), n));
    const Estimate large = sample_mean(std::span<const double>(x.data(), 2 * n));
    const double ratio = small.std_error / large.std_error;
    CHECK(ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.10));
}

TEST_CASE("accumulator merge is associative up to roundoff") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t n = 10000;
    std::vector<double> values(n), logw(n);
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = normal(rng) + 1.5;
        logw[i] = 0.8 * normal(rng);
    }

    WeightedAccumulator single;
    for (std::size_t i = 0; i < n; ++i) {
        single.add(values[i], logw[i]);
    }

    WeightedAccumulator left, middle, right;
    for (std::size_t i = 0; i < n / 3; ++i) {
        left.add(values[i], logw[i]);
    }
    for (std::size_t i = n / 3; i < 2 * n / 3; ++i) {
        middle.add(values[i], logw[i]);
    }
    for (std::size_t i = 2 * n / 3; i < n; ++i) {
        right.add(values[i], logw[i]);
    }
    WeightedAccumulator merged = right;  // merge out of order on purpose
    merged.merge(left);
    merged.merge(middle);

    const Estimate a = single.estimate();
    const Estimate b = merged.estimate();
    CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-10));
    CHECK(a.effective_n == doctest::Approx(b.effective_n).epsilon(1e-10));
    CHECK(a.std_error == doctest::Approx(b.std_error).epsilon(1e-10));
}

TEST_CASE("refinement order recovers exact rates") {
    std::vector<RefinementLevel> halving = {
        {128, 1.0 / 128}, {256, 1.0 / 256}, {512, 1.0 / 512}, {1024, 1.0 / 1024}};
    CHECK(refinement_order(halving).estimated_order == doctest::Approx(1.0));

    std::vector<RefinementLevel> quartering = {
        {128, 1.0}, {256, 0.25}, {512, 0.0625}};
    CHECK(refinement_order(quartering).estimated_order == doctest::Approx(2.0));

    std::vector<RefinementLevel> with_junk = {
        {128, 1.0 / 128}, {256, 1.0 / 256}, {512, 0.0}, {1024, 1.0 / 1024}};
    const RefinementStudy study = refinement_order(with_junk);
    CHECK(study.excluded == 1);
    CHECK(study.estimated_order == doctest::Approx(1.0));
    CHECK(!study.note.empty());

    std::vector<RefinementLevel> too_few = {{128, 0.5}, {256, 0.25}};
    CHECK_THROWS_AS(refinement_order(too_few), std::invalid_argument);
}

TEST_SUITE_END();
