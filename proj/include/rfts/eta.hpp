#pragma once

#include <functional>
#include <string>

#include "rfts/grid.hpp"
#include "rfts/sheet.hpp"
#include "rfts/surface.hpp"

namespace rfts {

/// Market-price-of-risk density eta(t, u).
///
/// Values are realized node-wise at (t_i, u_j) and interpreted as constant
/// on the cell [t_i, t_{i+1}) x [u_j, u_{j+1}), matching the left-endpoint
/// convention of the stochastic sums.  Deterministic kinds realize to a
/// path-independent surface; the grid-adapted kind computes row i from the
/// sheet restricted to rows <= i (discrete predictability).
class EtaSpec {
public:
    /// Adapted rule: value at (time row, maturity column).  The rule must
    /// only read sheet rows <= time_row.
    using AdaptedRule =
        std::function<double(const SheetPath&, std::size_t time_row, std::size_t maturity_col)>;

    static EtaSpec zero();
    static EtaSpec constant(double value_per_year);
    static EtaSpec separable(std::function<double(double)> time_factor,
                             std::function<double(double)> maturity_factor);
    static EtaSpec piecewise_constant(Surface cell_values);  // n_time x n_maturity
    static EtaSpec grid_adapted(AdaptedRule rule);

    bool deterministic() const { return kind_ != Kind::GridAdapted; }
    const std::string& kind_name() const { return name_; }

    /// Node surface (n_time+1) x (n_maturity+1).  Deterministic kinds only.
    Surface realize(const GridSpec& grid) const;
    /// Node surface for any kind; the sheet is consulted only by the
    /// grid-adapted kind.
    Surface realize(const GridSpec& grid, const SheetPath& sheet) const;

private:
    enum class Kind { Zero, Constant, Separable, PiecewiseConstant, GridAdapted };

    EtaSpec(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

    Kind kind_;
    std::string name_;
    double constant_ = 0.0;
    std::function<double(double)> time_factor_;
    std::function<double(double)> maturity_factor_;
    Surface cells_;
    AdaptedRule rule_;
};

}  // namespace rfts
