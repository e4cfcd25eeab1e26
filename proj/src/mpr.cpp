#include "rfts/mpr.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rfts/rng.hpp"
#include "rfts/stats.hpp"

namespace rfts {

namespace {

// Maturity quadrature: integrands are extended constantly below u_min
// (anchor strip of width u_min at node 0) plus composite trapezoid on
// [u_min, T0].
std::vector<double> maturity_weights(const GridSpec& grid) {
    std::vector<double> w(grid.maturity_cols(), grid.du());
    w.front() = grid.u_min() + 0.5 * grid.du();
    w.back() = 0.5 * grid.du();
    return w;
}

// Composite trapezoid in time over [0, T0].
std::vector<double> time_weights(const GridSpec& grid) {
    std::vector<double> w(grid.time_rows(), grid.dt());
    w.front() = 0.5 * grid.dt();
    w.back() = 0.5 * grid.dt();
    return w;
}

void check_shape(const Surface& s, const GridSpec& grid, const char* what) {
    if (s.rows() != grid.time_rows() || s.cols() != grid.maturity_cols()) {
        throw std::invalid_argument(std::string(what) + " does not match the grid");
    }
}

struct QuadratureContext {
    std::vector<double> wt;
    std::vector<double> wu;

    explicit QuadratureContext(const GridSpec& grid)
        : wt(time_weights(grid)), wu(maturity_weights(grid)) {}

    template <typename F>
    double integrate(F&& node_value) const {
        double total = 0.0;
        for (std::size_t i = 0; i < wt.size(); ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < wu.size(); ++j) {
                row += wu[j] * node_value(i, j);
            }
            total += wt[i] * row;
        }
        return total;
    }
};

ConditionReport conditions_from_nodes(const Surface& eta, const GridSpec& grid,
                                      const FieldKind& kind) {
    const MprSurface mpr = lambda_from_eta(eta, grid);
    const KernelGrid kernel = girsanov_kernel(eta, mpr, kind, grid);
    const QuadratureContext quad(grid);
    const double t0 = grid.horizon();

    const std::size_t cols = grid.maturity_cols();
    std::vector<double> u(cols), log_ratio(cols), h(cols), hp(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        u[j] = grid.maturity_node(j);
        log_ratio[j] = std::log(t0 / u[j]);
        h[j] = kind.warp.h(u[j]);
        hp[j] = kind.warp.h_prime(u[j]);
    }

    // Tail integrals of h'^2 from u_j to T0 (right-to-left trapezoid).
    std::vector<double> tail(cols, 0.0);
    for (std::size_t j = cols - 1; j-- > 0;) {
        tail[j] = tail[j + 1] + 0.5 * (hp[j] * hp[j] + hp[j + 1] * hp[j + 1]) * grid.du();
    }

    ConditionReport report;
    report.c1_integral = quad.integrate([&](std::size_t i, std::size_t j) {
        const double e = eta(i, j);
        return 0.5 * log_ratio[j] * e * mpr.lambda(i, j) + u[j] * e * e;
    });
    const double eta_norm_sq = quad.integrate([&](std::size_t i, std::size_t j) {
        const double e = eta(i, j);
        return e * e;
    });
    report.c2_integral = 1.25 * t0 * eta_norm_sq;
    report.thm2_integral = quad.integrate([&](std::size_t i, std::size_t j) {
        const double e = eta(i, j);
        return 0.5 * e * mpr.lambda(i, j) * tail[j] + h[j] * h[j] * e * e;
    });
    report.half_g_norm_sq = 0.5 * quad.integrate([&](std::size_t i, std::size_t j) {
        const double gv = kernel.g(i, j);
        return gv * gv;
    });
    report.term1_norm_sq = quad.integrate([&](std::size_t i, std::size_t j) {
        const double v = hp[j] * mpr.lambda(i, j);
        return v * v;
    });
    report.term2_norm_sq = quad.integrate([&](std::size_t i, std::size_t j) {
        const double v = h[j] * eta(i, j);
        return v * v;
    });
    return report;
}

}  // namespace

MprSurface lambda_from_eta(const Surface& eta_nodes, const GridSpec& grid) {
    check_shape(eta_nodes, grid, "lambda_from_eta: eta");
    MprSurface mpr;
    mpr.lambda = Surface(grid.time_rows(), grid.maturity_cols());
    const double du = grid.du();
    const double u_min = grid.u_min();
    for (std::size_t i = 0; i < grid.time_rows(); ++i) {
        const double* e = eta_nodes.row(i);
        double* l = mpr.lambda.row(i);
        l[0] = e[0] * u_min;
        for (std::size_t j = 0; j + 1 < grid.maturity_cols(); ++j) {
            l[j + 1] = l[j] + e[j] * du;
        }
    }
    return mpr;
}

MprSurface lambda_from_eta(const EtaSpec& eta, const GridSpec& grid) {
    return lambda_from_eta(eta.realize(grid), grid);
}

KernelGrid girsanov_kernel(const Surface& eta_nodes, const MprSurface& lambda,
                           const FieldKind& kind, const GridSpec& grid) {
    check_shape(eta_nodes, grid, "girsanov_kernel: eta");
    check_shape(lambda.lambda, grid, "girsanov_kernel: lambda");
    if (!kind.warp.h || !kind.warp.h_prime) {
        throw std::invalid_argument("girsanov_kernel: warp derivative unavailable");
    }
    validate_warp_on_grid(kind.warp, grid);

    KernelGrid kernel;
    kernel.kind = kind;
    kernel.g = Surface(grid.time_rows(), grid.maturity_cols());

    std::vector<double> h(grid.maturity_cols()), hp(grid.maturity_cols());
    for (std::size_t j = 0; j < grid.maturity_cols(); ++j) {
        const double u = grid.maturity_node(j);
        h[j] = kind.warp.h(u);
        hp[j] = kind.warp.h_prime(u);
        if (!std::isfinite(hp[j])) {
            throw std::invalid_argument("girsanov_kernel: h' not finite at node " +
                                        std::to_string(j));
        }
    }
    for (std::size_t i = 0; i < grid.time_rows(); ++i) {
        const double* e = eta_nodes.row(i);
        const double* l = lambda.lambda.row(i);
        double* g = kernel.g.row(i);
        for (std::size_t j = 0; j < grid.maturity_cols(); ++j) {
            g[j] = hp[j] * l[j] + h[j] * e[j];
        }
    }
    return kernel;
}

KernelGrid girsanov_kernel(const EtaSpec& eta, const MprSurface& lambda,
                           const FieldKind& kind, const GridSpec& grid) {
    return girsanov_kernel(eta.realize(grid), lambda, kind, grid);
}

double check_drift_identity(const KernelGrid& kernel, const MprSurface& lambda,
                            const FieldKind& kind, const GridSpec& grid) {
    check_shape(kernel.g, grid, "check_drift_identity: kernel");
    check_shape(lambda.lambda, grid, "check_drift_identity: lambda");
    const double du = grid.du();
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.time_rows(); ++i) {
        const double* g = kernel.g.row(i);
        const double* l = lambda.lambda.row(i);
        double running = 0.0;
        for (std::size_t j = 0; j < grid.maturity_cols(); ++j) {
            running += g[j] * du;
            const double scale = kind.warp.h(grid.maturity_node(j));
            worst = std::max(worst, std::fabs(running - scale * l[j]));
        }
    }
    return worst;
}

ConditionReport evaluate_conditions(const Surface& eta_nodes, const GridSpec& grid,
                                    const FieldKind& kind) {
    check_shape(eta_nodes, grid, "evaluate_conditions: eta");
    return conditions_from_nodes(eta_nodes, grid, kind);
}

ConditionReport evaluate_conditions(const EtaSpec& eta, const GridSpec& grid,
                                    const FieldKind& kind) {
    if (!eta.deterministic()) {
        throw std::invalid_argument(
            "evaluate_conditions: stochastic eta needs evaluate_conditions_mc");
    }
    return conditions_from_nodes(eta.realize(grid), grid, kind);
}

ConditionReport evaluate_conditions_mc(const EtaSpec& eta, const GridSpec& grid,
                                       const FieldKind& kind, std::size_t n_paths,
                                       std::uint64_t seed) {
    if (n_paths == 0) {
        throw std::invalid_argument("evaluate_conditions_mc: n_paths must be positive");
    }
    std::vector<double> c1(n_paths), c2(n_paths), thm2(n_paths), half_g(n_paths),
        term1(n_paths), term2(n_paths), exp_c1(n_paths), exp_c2(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
        const SheetPath sheet = sample_sheet(grid, kind.warp, RandomStream(seed, p));
        const ConditionReport r = conditions_from_nodes(eta.realize(grid, sheet), grid, kind);
        c1[p] = r.c1_integral;
        c2[p] = r.c2_integral;
        thm2[p] = r.thm2_integral;
        half_g[p] = r.half_g_norm_sq;
        term1[p] = r.term1_norm_sq;
        term2[p] = r.term2_norm_sq;
        exp_c1[p] = std::exp(r.c1_integral);
        exp_c2[p] = std::exp(r.c2_integral);
    }

    ConditionReport report;
    report.monte_carlo = true;
    report.sample_paths = n_paths;
    const Estimate e_c1 = sample_mean(c1);
    const Estimate e_c2 = sample_mean(c2);
    report.c1_integral = e_c1.mean;
    report.c1_integral_se = e_c1.std_error;
    report.c2_integral = e_c2.mean;
    report.c2_integral_se = e_c2.std_error;
    report.thm2_integral = sample_mean(thm2).mean;
    report.half_g_norm_sq = sample_mean(half_g).mean;
    report.term1_norm_sq = sample_mean(term1).mean;
    report.term2_norm_sq = sample_mean(term2).mean;
    const Estimate m_c1 = sample_mean(exp_c1);
    const Estimate m_c2 = sample_mean(exp_c2);
    report.c1_exp_moment = m_c1.mean;
    report.c1_exp_moment_se = m_c1.std_error;
    report.c2_exp_moment = m_c2.mean;
    report.c2_exp_moment_se = m_c2.std_error;
    return report;
}

std::pair<double, double> l2_identity_sides(const EtaSpec& eta, const GridSpec& grid) {
    const Surface eta_nodes = eta.realize(grid);
    const MprSurface mpr = lambda_from_eta(eta_nodes, grid);
    const QuadratureContext quad(grid);
    const double t0 = grid.horizon();

    const double lhs = quad.integrate([&](std::size_t i, std::size_t j) {
        const double l = mpr.lambda(i, j);
        return l * l / (4.0 * grid.maturity_node(j));
    });
    const double rhs = 0.5 * quad.integrate([&](std::size_t i, std::size_t j) {
        return eta_nodes(i, j) * mpr.lambda(i, j) *
               std::log(t0 / grid.maturity_node(j));
    });
    return {lhs, rhs};
}

double check_l2_identity(const EtaSpec& eta, const GridSpec& grid) {
    const auto [lhs, rhs] = l2_identity_sides(eta, grid);
    return std::fabs(lhs - rhs);
}

double check_c2_bound(const EtaSpec& eta, const GridSpec& grid) {
    const ConditionReport report =
        evaluate_conditions(eta.realize(grid), grid, FieldKind::normalized());
    return 2.0 * report.c2_integral - 2.0 * report.half_g_norm_sq;
}

}  // namespace rfts
