#include "rfts/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rfts {

GridSpec::GridSpec(double t0_horizon_years, std::size_t n_time, std::size_t n_maturity,
                   double u_min_years)
    : t0_horizon_(t0_horizon_years),
      u_min_(u_min_years),
      n_time_(n_time),
      n_maturity_(n_maturity) {
    if (!(t0_horizon_ > 0.0) || !std::isfinite(t0_horizon_)) {
        throw std::invalid_argument("GridSpec: horizon must be positive and finite");
    }
    if (n_time_ < 1) {
        throw std::invalid_argument("GridSpec: n_time must be at least 1");
    }
    if (n_maturity_ < 1) {
        throw std::invalid_argument("GridSpec: n_maturity must be at least 1");
    }
    if (!(u_min_ > 0.0) || !std::isfinite(u_min_)) {
        throw std::invalid_argument("GridSpec: u_min must be positive and finite");
    }
    if (!(u_min_ < t0_horizon_)) {
        throw std::invalid_argument("GridSpec: u_min must be below the horizon");
    }
    dt_ = t0_horizon_ / static_cast<double>(n_time_);
    du_ = (t0_horizon_ - u_min_) / static_cast<double>(n_maturity_);
}

GridSpec GridSpec::lattice(double t0_horizon_years, std::size_t n_time,
                           std::size_t n_maturity_nodes) {
    if (n_maturity_nodes < 2) {
        throw std::invalid_argument("GridSpec: lattice needs at least 2 maturity nodes");
    }
    const double u_min = t0_horizon_years / static_cast<double>(n_maturity_nodes);
    return GridSpec(t0_horizon_years, n_time, n_maturity_nodes - 1, u_min);
}

namespace {

std::size_t snap(double value, double origin, double step, std::size_t max_index,
                 const char* axis) {
    const double raw = (value - origin) / step;
    const double rounded = std::round(raw);
    const double tol = 1e-9 * std::max(1.0, std::fabs(value) / step);
    if (rounded < -0.5 || rounded > static_cast<double>(max_index) + 0.5 ||
        std::fabs(raw - rounded) > tol) {
        throw std::invalid_argument(std::string("GridSpec: ") + axis + " value " +
                                    std::to_string(value) + " is not a grid node");
    }
    return static_cast<std::size_t>(rounded);
}

}  // namespace

std::size_t GridSpec::time_row_at(double t_years) const {
    return snap(t_years, 0.0, dt_, n_time_, "time");
}

std::size_t GridSpec::maturity_col_at(double u_years) const {
    return snap(u_years, u_min_, du_, n_maturity_, "maturity");
}

}  // namespace rfts
