#pragma once

#include <iosfwd>
#include <vector>

#include "rfts/grid.hpp"
#include "rfts/rng.hpp"
#include "rfts/surface.hpp"
#include "rfts/warp.hpp"

namespace rfts {

/// One realization of the driving noise: independent Gaussian rectangle
/// increments plus their cumulative double sum on the grid nodes.
///
/// increments(i, j) carries the mass of the rectangle
/// [t_i, t_{i+1}] x (maturity cell j) and has variance dt * (q_{j+1} - q_j),
/// where q_j is the squared warp coordinate of node j and q_0 = 0: the
/// first maturity cell absorbs the strip below u_min.  The node law of the
/// cumulated sheet is therefore exact at every column j >= 1, while the
/// column at u_min is pinned to zero (its true variance is at most
/// t * u_min).
///
/// sheet(i, j) is the bit-for-bit double cumulative sum of increments(k, l)
/// over k < i, l < j; it vanishes on the row t = 0 and the column u = u_min.
struct SheetPath {
    Surface increments;  // n_time x n_maturity
    Surface sheet;       // (n_time + 1) x (n_maturity + 1)
};

/// Plain Brownian sheet on the grid (squared coordinate q_j = u_j).
SheetPath sample_sheet(const GridSpec& grid, const RandomStream& rng);

/// Sheet sampled directly at the warped coordinates h^2(u_j); rejects
/// non-monotone h^2 naming the offending cell.
SheetPath sample_sheet(const GridSpec& grid, const MaturityWarp& warp,
                       const RandomStream& rng);

/// Squared-coordinate ladder q_0 = 0, q_j = h(u_j)^2 (j >= 1), length
/// maturity_cols().
std::vector<double> squared_coordinates(const GridSpec& grid, const MaturityWarp& warp);

/// Per-cell measures q_{j+1} - q_j, length n_maturity.
std::vector<double> maturity_cell_measures(const GridSpec& grid, const MaturityWarp& warp);

/// Debug dump: one row per time node, one column per maturity node.
void write_sheet_csv(std::ostream& os, const SheetPath& path, const GridSpec& grid);

}  // namespace rfts
