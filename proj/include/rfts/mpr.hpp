#pragma once

#include <cstdint>
#include <utility>

#include "rfts/eta.hpp"
#include "rfts/grid.hpp"
#include "rfts/surface.hpp"
#include "rfts/warp.hpp"

namespace rfts {

/// Market price of risk lambda(t_i, u_j) = integral of eta in the maturity
/// variable up to u_j.
struct MprSurface {
    Surface lambda;  // (n_time + 1) x (n_maturity + 1)
};

/// Change-of-measure kernel g(t_i, u_j) for the field kind it was built for.
/// Normalized: g = lambda / (2 sqrt(u)) + sqrt(u) * eta.
/// Scaled:     g = h'(u) * lambda + h(u) * eta.
struct KernelGrid {
    Surface g;  // (n_time + 1) x (n_maturity + 1)
    FieldKind kind;
};

/// Integrability-condition evaluations.  All integrals run over
/// [0, T0] x [0, T0] with maturity integrands extended constantly below
/// u_min; the rule is the anchor strip plus composite trapezoid.
///
/// For a stochastic (grid-adapted) eta the entries are Monte Carlo means of
/// the per-path integrals, the exponential moments of the two conditions
/// are reported with standard errors, and monte_carlo is set.
struct ConditionReport {
    double c1_integral = 0;      // log(T0/u) eta lambda / 2 + u eta^2
    double c2_integral = 0;      // (5 T0 / 4) * ||eta||^2
    double thm2_integral = 0;    // eta lambda * tail(h'^2)/2 + h^2 eta^2
    double half_g_norm_sq = 0;   // ||g||^2 / 2
    double term1_norm_sq = 0;    // ||h' lambda||^2
    double term2_norm_sq = 0;    // ||h eta||^2

    bool monte_carlo = false;
    std::size_t sample_paths = 0;
    double c1_integral_se = 0;
    double c2_integral_se = 0;
    double c1_exp_moment = 0;
    double c1_exp_moment_se = 0;
    double c2_exp_moment = 0;
    double c2_exp_moment_se = 0;
};

/// Left-endpoint cumulative maturity integral of eta, anchored at
/// lambda(., u_min) = eta(., u_min) * u_min.
MprSurface lambda_from_eta(const Surface& eta_nodes, const GridSpec& grid);
MprSurface lambda_from_eta(const EtaSpec& eta, const GridSpec& grid);

KernelGrid girsanov_kernel(const Surface& eta_nodes, const MprSurface& lambda,
                           const FieldKind& kind, const GridSpec& grid);
KernelGrid girsanov_kernel(const EtaSpec& eta, const MprSurface& lambda,
                           const FieldKind& kind, const GridSpec& grid);

/// Max over nodes of | sum_{l<=j} g(t_i,u_l) du - h(u_j) lambda(t_i,u_j) |,
/// the discrete form of the drift identity the kernel must satisfy.
double check_drift_identity(const KernelGrid& kernel, const MprSurface& lambda,
                            const FieldKind& kind, const GridSpec& grid);

ConditionReport evaluate_conditions(const EtaSpec& eta, const GridSpec& grid,
                                    const FieldKind& kind);
ConditionReport evaluate_conditions(const Surface& eta_nodes, const GridSpec& grid,
                                    const FieldKind& kind);
/// Monte Carlo variant for stochastic eta.
ConditionReport evaluate_conditions_mc(const EtaSpec& eta, const GridSpec& grid,
                                       const FieldKind& kind, std::size_t n_paths,
                                       std::uint64_t seed);

/// Both sides of the Fubini identity
///   int lambda^2/(4u) = (1/2) int eta lambda log(T0/u)
/// under matched quadrature (deterministic eta).
std::pair<double, double> l2_identity_sides(const EtaSpec& eta, const GridSpec& grid);
double check_l2_identity(const EtaSpec& eta, const GridSpec& grid);

/// Slack of the Cauchy-Schwarz bound: (5 T0 / 2) ||eta||^2 - ||g||^2 with
/// the normalized kernel; nonnegative up to quadrature error.
double check_c2_bound(const EtaSpec& eta, const GridSpec& grid);

}  // namespace rfts
