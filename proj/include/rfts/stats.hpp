#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rfts {

/// Point estimate with its standard error.  For weighted estimates,
/// effective_n = (sum w)^2 / sum w^2.
struct Estimate {
    double mean = 0;
    double std_error = 0;
    std::size_t n = 0;
    double effective_n = 0;
};

/// Self-normalized importance-sampling mean with delta-method standard
/// error.  Weights must be finite, nonnegative and not all zero.
Estimate weighted_moments(std::span<const double> values, std::span<const double> weights);

/// Same, from log weights; stabilized by a max shift before exponentiation.
Estimate weighted_moments_log(std::span<const double> values,
                              std::span<const double> log_weights);

Estimate sample_mean(std::span<const double> values);

/// Population variance with a moment-based standard error.
Estimate sample_variance(std::span<const double> values);

/// Sample covariance (population normalization); the standard error is the
/// spread of the centered products.
Estimate sample_covariance(std::span<const double> x, std::span<const double> y);

/// Importance-sampled covariance from log weights.
Estimate weighted_covariance_log(std::span<const double> x, std::span<const double> y,
                                 std::span<const double> log_weights);

/// Mergeable weighted-moment accumulator.  Sums are kept relative to the
/// largest log weight seen, so merging is associative and commutative up to
/// floating-point reassociation.
class WeightedAccumulator {
public:
    void add(double value, double log_weight);
    void merge(const WeightedAccumulator& other);
    Estimate estimate() const;
    std::size_t count() const { return n_; }

private:
    void rescale(double new_shift);

    std::size_t n_ = 0;
    double shift_ = 0;     // log-weight offset; valid once n_ > 0
    double sum_w_ = 0;     // sum exp(lw - shift)
    double sum_wx_ = 0;
    double sum_wxx_ = 0;
    double sum_ww_ = 0;    // sum exp(2 (lw - shift))
};

struct RefinementLevel {
    double resolution = 0;  // cells per axis; larger is finer
    double residual = 0;
};

struct RefinementStudy {
    std::vector<RefinementLevel> levels;  // sorted by resolution
    double estimated_order = 0;           // least-squares slope of log residual
    std::size_t excluded = 0;             // non-positive residuals dropped
    std::string note;
};

/// Least-squares convergence order from (resolution, residual) pairs;
/// needs at least three usable levels.
RefinementStudy refinement_order(std::span<const RefinementLevel> levels);

}  // namespace rfts
