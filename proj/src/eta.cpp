#include "rfts/eta.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace rfts {

EtaSpec EtaSpec::zero() {
    return EtaSpec(Kind::Zero, "zero");
}

EtaSpec EtaSpec::constant(double value_per_year) {
    EtaSpec spec(Kind::Constant, "constant(" + std::to_string(value_per_year) + ")");
    spec.constant_ = value_per_year;
    return spec;
}

EtaSpec EtaSpec::separable(std::function<double(double)> time_factor,
                           std::function<double(double)> maturity_factor) {
    if (!time_factor || !maturity_factor) {
        throw std::invalid_argument("EtaSpec::separable: both factors are required");
    }
    EtaSpec spec(Kind::Separable, "separable");
    spec.time_factor_ = std::move(time_factor);
    spec.maturity_factor_ = std::move(maturity_factor);
    return spec;
}

EtaSpec EtaSpec::piecewise_constant(Surface cell_values) {
    if (cell_values.empty()) {
        throw std::invalid_argument("EtaSpec::piecewise_constant: empty cell table");
    }
    EtaSpec spec(Kind::PiecewiseConstant, "piecewise_constant");
    spec.cells_ = std::move(cell_values);
    return spec;
}

EtaSpec EtaSpec::grid_adapted(AdaptedRule rule) {
    if (!rule) {
        throw std::invalid_argument("EtaSpec::grid_adapted: rule is required");
    }
    EtaSpec spec(Kind::GridAdapted, "grid_adapted");
    spec.rule_ = std::move(rule);
    return spec;
}

Surface EtaSpec::realize(const GridSpec& grid) const {
    if (!deterministic()) {
        throw std::invalid_argument("EtaSpec: grid-adapted eta needs a sheet to realize");
    }
    static const SheetPath no_sheet{};
    return realize(grid, no_sheet);
}

Surface EtaSpec::realize(const GridSpec& grid, const SheetPath& sheet) const {
    Surface values(grid.time_rows(), grid.maturity_cols());
    switch (kind_) {
        case Kind::Zero:
            break;
        case Kind::Constant:
            for (double& v : values.data()) {
                v = constant_;
            }
            break;
        case Kind::Separable:
            for (std::size_t i = 0; i < values.rows(); ++i) {
                const double f = time_factor_(grid.time_node(i));
                for (std::size_t j = 0; j < values.cols(); ++j) {
                    values(i, j) = f * maturity_factor_(grid.maturity_node(j));
                }
            }
            break;
        case Kind::PiecewiseConstant: {
            if (cells_.rows() != grid.n_time() || cells_.cols() != grid.n_maturity()) {
                throw std::invalid_argument(
                    "EtaSpec: piecewise table is " + std::to_string(cells_.rows()) + "x" +
                    std::to_string(cells_.cols()) + ", grid has " +
                    std::to_string(grid.n_time()) + "x" + std::to_string(grid.n_maturity()) +
                    " cells");
            }
            // node value = value of the cell the node opens (last row/column clamped)
            for (std::size_t i = 0; i < values.rows(); ++i) {
                const std::size_t ci = std::min(i, cells_.rows() - 1);
                for (std::size_t j = 0; j < values.cols(); ++j) {
                    const std::size_t cj = std::min(j, cells_.cols() - 1);
                    values(i, j) = cells_(ci, cj);
                }
            }
            break;
        }
        case Kind::GridAdapted: {
            if (sheet.sheet.rows() != grid.time_rows() ||
                sheet.sheet.cols() != grid.maturity_cols()) {
                throw std::invalid_argument("EtaSpec: sheet does not match the grid");
            }
            for (std::size_t i = 0; i < values.rows(); ++i) {
                for (std::size_t j = 0; j < values.cols(); ++j) {
                    values(i, j) = rule_(sheet, i, j);
                }
            }
            break;
        }
    }
    return values;
}

}  // namespace rfts
