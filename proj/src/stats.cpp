#include "rfts/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rfts {

namespace {

void check_weights(std::span<const double> values, std::span<const double> weights) {
    if (values.size() != weights.size()) {
        throw std::invalid_argument("weighted_moments: size mismatch");
    }
    if (values.empty()) {
        throw std::invalid_argument("weighted_moments: empty sample");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw std::invalid_argument("weighted_moments: weights must be finite and "
                                        "nonnegative");
        }
        sum += w;
    }
    if (!(sum > 0.0)) {
        throw std::invalid_argument("weighted_moments: weights sum to zero");
    }
}

Estimate weighted_core(std::span<const double> values, std::span<const double> weights) {
    double sw = 0.0, swx = 0.0, sww = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sw += weights[i];
        swx += weights[i] * values[i];
        sww += weights[i] * weights[i];
    }
    const double mean = swx / sw;
    double dev = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - mean;
        dev += weights[i] * weights[i] * d * d;
    }
    Estimate est;
    est.mean = mean;
    est.std_error = std::sqrt(dev) / sw;
    est.n = values.size();
    est.effective_n = sww > 0.0 ? sw * sw / sww : 0.0;
    return est;
}

}  // namespace

Estimate weighted_moments(std::span<const double> values, std::span<const double> weights) {
    check_weights(values, weights);
    return weighted_core(values, weights);
}

Estimate weighted_moments_log(std::span<const double> values,
                              std::span<const double> log_weights) {
    if (values.size() != log_weights.size()) {
        throw std::invalid_argument("weighted_moments_log: size mismatch");
    }
    if (values.empty()) {
        throw std::invalid_argument("weighted_moments_log: empty sample");
    }
    const double shift = *std::max_element(log_weights.begin(), log_weights.end());
    std::vector<double> w(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        w[i] = std::exp(log_weights[i] - shift);
    }
    return weighted_core(values, w);
}

Estimate sample_mean(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("sample_mean: empty sample");
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    const double mean = sum / static_cast<double>(values.size());
    double dev = 0.0;
    for (double v : values) {
        const double d = v - mean;
        dev += d * d;
    }
    Estimate est;
    est.mean = mean;
    est.std_error = std::sqrt(dev) / static_cast<double>(values.size());
    est.n = values.size();
    est.effective_n = static_cast<double>(values.size());
    return est;
}

Estimate sample_variance(std::span<const double> values) {
    if (values.size() < 2) {
        throw std::invalid_argument("sample_variance: need at least 2 samples");
    }
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    const double mean = sum / n;
    double m2 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    Estimate est;
    est.mean = m2;
    est.std_error = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
    est.n = values.size();
    est.effective_n = n;
    return est;
}

Estimate sample_covariance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("sample_covariance: size mismatch");
    }
    if (x.size() < 2) {
        throw std::invalid_argument("sample_covariance: need at least 2 samples");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double cov = 0.0, dev = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cov += (x[i] - mx) * (y[i] - my);
    }
    cov /= n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = (x[i] - mx) * (y[i] - my) - cov;
        dev += d * d;
    }
    Estimate est;
    est.mean = cov;
    est.std_error = std::sqrt(dev / n) / std::sqrt(n);
    est.n = x.size();
    est.effective_n = n;
    return est;
}

Estimate weighted_covariance_log(std::span<const double> x, std::span<const double> y,
                                 std::span<const double> log_weights) {
    if (x.size() != y.size() || x.size() != log_weights.size()) {
        throw std::invalid_argument("weighted_covariance_log: size mismatch");
    }
    if (x.size() < 2) {
        throw std::invalid_argument("weighted_covariance_log: need at least 2 samples");
    }
    const double shift = *std::max_element(log_weights.begin(), log_weights.end());
    std::vector<double> w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        w[i] = std::exp(log_weights[i] - shift);
    }
    const Estimate ex = weighted_core(x, w);
    const Estimate ey = weighted_core(y, w);
    std::vector<double> products(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        products[i] = (x[i] - ex.mean) * (y[i] - ey.mean);
    }
    return weighted_core(products, w);
}

void WeightedAccumulator::rescale(double new_shift) {
    const double f = std::exp(shift_ - new_shift);
    sum_w_ *= f;
    sum_wx_ *= f;
    sum_wxx_ *= f;
    sum_ww_ *= f * f;
    shift_ = new_shift;
}

void WeightedAccumulator::add(double value, double log_weight) {
    if (n_ == 0) {
        shift_ = log_weight;
    } else if (log_weight > shift_) {
        rescale(log_weight);
    }
    const double w = std::exp(log_weight - shift_);
    n_ += 1;
    sum_w_ += w;
    sum_wx_ += w * value;
    sum_wxx_ += w * value * value;
    sum_ww_ += w * w;
}

void WeightedAccumulator::merge(const WeightedAccumulator& other) {
    if (other.n_ == 0) {
        return;
    }
    if (n_ == 0) {
        *this = other;
        return;
    }
    WeightedAccumulator rhs = other;
    if (rhs.shift_ > shift_) {
        rescale(rhs.shift_);
    } else if (shift_ > rhs.shift_) {
        rhs.rescale(shift_);
    }
    n_ += rhs.n_;
    sum_w_ += rhs.sum_w_;
    sum_wx_ += rhs.sum_wx_;
    sum_wxx_ += rhs.sum_wxx_;
    sum_ww_ += rhs.sum_ww_;
}

Estimate WeightedAccumulator::estimate() const {
    if (n_ == 0) {
        throw std::invalid_argument("WeightedAccumulator: empty");
    }
    Estimate est;
    est.mean = sum_wx_ / sum_w_;
    // Streaming error: weighted spread of x over the effective sample size.
    est.n = n_;
    est.effective_n = sum_ww_ > 0.0 ? sum_w_ * sum_w_ / sum_ww_ : 0.0;
    const double var_x = std::max(0.0, sum_wxx_ / sum_w_ - est.mean * est.mean);
    est.std_error = est.effective_n > 0.0 ? std::sqrt(var_x / est.effective_n) : 0.0;
    return est;
}

RefinementStudy refinement_order(std::span<const RefinementLevel> levels) {
    RefinementStudy study;
    for (const RefinementLevel& level : levels) {
        if (level.residual > 0.0 && std::isfinite(level.residual)) {
            study.levels.push_back(level);
        } else {
            ++study.excluded;
        }
    }
    if (study.excluded > 0) {
        study.note = std::to_string(study.excluded) + " non-positive residual(s) excluded";
    }
    if (study.levels.size() < 3) {
        throw std::invalid_argument("refinement_order: need at least 3 usable levels");
    }
    std::sort(study.levels.begin(), study.levels.end(),
              [](const RefinementLevel& a, const RefinementLevel& b) {
                  return a.resolution < b.resolution;
              });

    const double n = static_cast<double>(study.levels.size());
    double mx = 0.0, my = 0.0;
    for (const RefinementLevel& level : study.levels) {
        mx += std::log(level.resolution);
        my += std::log(level.residual);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (const RefinementLevel& level : study.levels) {
        const double dx = std::log(level.resolution) - mx;
        const double dy = std::log(level.residual) - my;
        sxy += dx * dy;
        sxx += dx * dx;
    }
    study.estimated_order = -sxy / sxx;
    return study;
}

}  // namespace rfts
