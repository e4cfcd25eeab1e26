#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rfts/grid.hpp"

namespace rfts {

/// Strictly increasing, positive maturity warp h together with its
/// derivative and the squared-warp pair used by the sheet sampler.
///
/// h_squared and h_squared_prime are stored as their own functions rather
/// than derived from h on the fly, so that the square-root warp can use the
/// exact identity map for the squared coordinate.  That makes the scaled
/// field with h = sqrt reproduce the normalized sheet bit for bit.
struct MaturityWarp {
    std::string name;
    std::function<double(double)> h;
    std::function<double(double)> h_prime;
    std::function<double(double)> h_squared;        // h(u)^2
    std::function<double(double)> h_squared_prime;  // d/du h(u)^2 = 2 h h'
};

MaturityWarp sqrt_warp();
MaturityWarp linear_warp();
MaturityWarp power_warp(double exponent);

/// Piecewise-linear warp through (maturity, h) knots; h' is the slope of
/// the segment containing the evaluation point (right-continuous).
MaturityWarp table_warp(std::vector<std::pair<double, double>> knots);

/// Throws if h is not strictly increasing and positive on the grid nodes;
/// the diagnostic names the offending cell.
void validate_warp_on_grid(const MaturityWarp& warp, const GridSpec& grid);

/// Noise family driving the bond model: the normalized Brownian sheet
/// Z(t,T) = W(t,T)/sqrt(T) or the warped field Z(t,T) = W(t,h^2(T))/h(T).
/// The normalized kind is the sqrt warp; both run through one code path.
struct FieldKind {
    MaturityWarp warp;
    bool is_normalized = false;

    static FieldKind normalized();
    static FieldKind scaled(MaturityWarp w);

    const std::string& name() const { return warp.name; }
};

}  // namespace rfts
