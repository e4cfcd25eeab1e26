#pragma once

#include <cstddef>

namespace rfts {

/// Uniform discretization of the time axis [0, T0] and the maturity axis
/// [u_min, T0].
///
/// Time nodes are t_i = i * dt, i = 0..n_time; maturity nodes are
/// u_j = u_min + j * du, j = 0..n_maturity.  The lowest maturity node is
/// strictly positive; maturity-indexed quantities are extended constantly
/// from u_min down to 0, so the first maturity cell spans [0, u_1].
class GridSpec {
public:
    GridSpec(double t0_horizon_years, std::size_t n_time, std::size_t n_maturity,
             double u_min_years);

    /// Grid whose maturity nodes form the lattice k * T0 / n_maturity_nodes,
    /// k = 1..n_maturity_nodes (so du == u_min).
    static GridSpec lattice(double t0_horizon_years, std::size_t n_time,
                            std::size_t n_maturity_nodes);

    double horizon() const { return t0_horizon_; }
    double u_min() const { return u_min_; }
    std::size_t n_time() const { return n_time_; }
    std::size_t n_maturity() const { return n_maturity_; }

    double dt() const { return dt_; }
    double du() const { return du_; }

    double time_node(std::size_t i) const { return static_cast<double>(i) * dt_; }
    double maturity_node(std::size_t j) const { return u_min_ + static_cast<double>(j) * du_; }

    /// Node counts (one more than the step/cell counts).
    std::size_t time_rows() const { return n_time_ + 1; }
    std::size_t maturity_cols() const { return n_maturity_ + 1; }

    /// Snap a time/maturity in years to its grid node; throws if the value
    /// is not a node (within a relative tolerance of 1e-9).
    std::size_t time_row_at(double t_years) const;
    std::size_t maturity_col_at(double u_years) const;

private:
    double t0_horizon_;
    double u_min_;
    std::size_t n_time_;
    std::size_t n_maturity_;
    double dt_;
    double du_;
};

}  // namespace rfts
