#include "rfts/sheet.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace rfts {

std::vector<double> squared_coordinates(const GridSpec& grid, const MaturityWarp& warp) {
    validate_warp_on_grid(warp, grid);
    std::vector<double> q(grid.maturity_cols());
    q[0] = 0.0;  // the first cell absorbs the strip [0, u_1]
    for (std::size_t j = 1; j < q.size(); ++j) {
        q[j] = warp.h_squared(grid.maturity_node(j));
    }
    return q;
}

std::vector<double> maturity_cell_measures(const GridSpec& grid, const MaturityWarp& warp) {
    const std::vector<double> q = squared_coordinates(grid, warp);
    std::vector<double> dq(grid.n_maturity());
    for (std::size_t j = 0; j < dq.size(); ++j) {
        dq[j] = q[j + 1] - q[j];
        if (!(dq[j] > 0.0)) {
            throw std::invalid_argument("sample_sheet: squared warp not increasing over cell " +
                                        std::to_string(j));
        }
    }
    return dq;
}

SheetPath sample_sheet(const GridSpec& grid, const MaturityWarp& warp,
                       const RandomStream& rng) {
    const std::vector<double> dq = maturity_cell_measures(grid, warp);
    const std::size_t nt = grid.n_time();
    const std::size_t nm = grid.n_maturity();
    const double dt = grid.dt();

    std::vector<double> cell_sd(nm);
    for (std::size_t j = 0; j < nm; ++j) {
        cell_sd[j] = std::sqrt(dt * dq[j]);
    }

    SheetPath path;
    path.increments = Surface(nt, nm);
    path.sheet = Surface(nt + 1, nm + 1);

    for (std::size_t i = 0; i < nt; ++i) {
        double* inc = path.increments.row(i);
        const std::uint64_t base = static_cast<std::uint64_t>(i) * nm;
        for (std::size_t j = 0; j < nm; ++j) {
            inc[j] = cell_sd[j] * rng.gauss(base + j);
        }
        // sheet(i+1, j) = sheet(i, j) + sum of row-i increments left of j
        const double* above = path.sheet.row(i);
        double* below = path.sheet.row(i + 1);
        double running = 0.0;
        below[0] = 0.0;
        for (std::size_t j = 0; j < nm; ++j) {
            running += inc[j];
            below[j + 1] = above[j + 1] + running;
        }
    }
    return path;
}

SheetPath sample_sheet(const GridSpec& grid, const RandomStream& rng) {
    return sample_sheet(grid, sqrt_warp(), rng);
}

void write_sheet_csv(std::ostream& os, const SheetPath& path, const GridSpec& grid) {
    os << "t_years";
    for (std::size_t j = 0; j < grid.maturity_cols(); ++j) {
        os << ",u_" << grid.maturity_node(j);
    }
    os << "\n";
    for (std::size_t i = 0; i < grid.time_rows(); ++i) {
        os << grid.time_node(i);
        for (std::size_t j = 0; j < grid.maturity_cols(); ++j) {
            os << "," << path.sheet(i, j);
        }
        os << "\n";
    }
}

}  // namespace rfts
