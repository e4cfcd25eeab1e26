#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "rfts/eta.hpp"
#include "rfts/mpr.hpp"
#include "rfts/rng.hpp"
#include "rfts/sheet.hpp"
#include "rfts/stats.hpp"

using namespace rfts;

namespace {

GridSpec small_grid() {
    return GridSpec::lattice(1.0, 4, 64);
}

GridSpec fine_grid() {
    return GridSpec::lattice(1.0, 4, 512);
}

}  // namespace

TEST_SUITE_BEGIN("mpr");

TEST_CASE("lambda: zero, constant and linear densities") {
    const GridSpec grid = fine_grid();

    const MprSurface zero = lambda_from_eta(EtaSpec::zero(), grid);
    for (double v : zero.lambda.data()) {
        CHECK(v == 0.0);
    }

    // eta == c integrates to exactly c*T at the nodes
    const double c = 0.7;
    const MprSurface flat = lambda_from_eta(EtaSpec::constant(c), grid);
    for (std::size_t j = 0; j < grid.maturity_cols(); j += 31) {
        CHECK(flat.lambda(2, j) ==
              doctest::Approx(c * grid.maturity_node(j)).epsilon(1e-12));
    }

    // eta(t,u) = u integrates to T^2/2 up to O(du)
    const EtaSpec ramp = EtaSpec::separable([](double) { return 1.0; },
                                            [](double u) { return u; });
    const MprSurface quad = lambda_from_eta(ramp, grid);
    for (std::size_t j = 0; j < grid.maturity_cols(); j += 73) {
        const double T = grid.maturity_node(j);
        CHECK(std::fabs(quad.lambda(1, j) - 0.5 * T * T) <= grid.du());
    }
}

TEST_CASE("kernel closed form for constant eta") {
    const GridSpec grid = small_grid();
    const double c = 0.5;
    const Surface eta = EtaSpec::constant(c).realize(grid);
    const MprSurface lambda = lambda_from_eta(eta, grid);
    const KernelGrid kernel = girsanov_kernel(eta, lambda, FieldKind::normalized(), grid);
    for (std::size_t j = 0; j < grid.maturity_cols(); ++j) {
        const double u = grid.maturity_node(j);
        CHECK(kernel.g(3, j) == doctest::Approx(1.5 * c * std::sqrt(u)).epsilon(1e-12));
    }

    const MprSurface zero_lambda = lambda_from_eta(EtaSpec::zero(), grid);
    const KernelGrid zero =
        girsanov_kernel(EtaSpec::zero(), zero_lambda, FieldKind::normalized(), grid);
    for (double v : zero.g.data()) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("sqrt-scaled kernel is bit-identical to the normalized kernel") {
    const GridSpec grid = small_grid();
    const Surface eta = EtaSpec::constant(0.8).realize(grid);
    const MprSurface lambda = lambda_from_eta(eta, grid);
    const KernelGrid normalized =
        girsanov_kernel(eta, lambda, FieldKind::normalized(), grid);
    const KernelGrid scaled =
        girsanov_kernel(eta, lambda, FieldKind::scaled(sqrt_warp()), grid);
    CHECK(normalized.g.data() == scaled.g.data());
}

TEST_CASE("kernel rejects a warp without a derivative") {
    const GridSpec grid = small_grid();
    const Surface eta = EtaSpec::constant(0.5).realize(grid);
    const MprSurface lambda = lambda_from_eta(eta, grid);
    FieldKind broken = FieldKind::scaled(linear_warp());
    broken.warp.h_prime = nullptr;
    CHECK_THROWS_AS(girsanov_kernel(eta, lambda, broken, grid), std::invalid_argument);
}

TEST_CASE("kernel is linear and scales with eta") {
    const GridSpec grid = small_grid();
    const EtaSpec eta1 = EtaSpec::constant(0.4);
    const EtaSpec eta2 = EtaSpec::separable([](double t) { return 1.0 + t; },
                                            [](double u) { return u * u; });
    const Surface n1 = eta1.realize(grid);
    const Surface n2 = eta2.realize(grid);
    Surface sum = n1;
    for (std::size_t k = 0; k < sum.data().size(); ++k) {
        sum.data()[k] += n2.data()[k];
    }

    const FieldKind kind = FieldKind::normalized();
    const KernelGrid g1 = girsanov_kernel(n1, lambda_from_eta(n1, grid), kind, grid);
    const KernelGrid g2 = girsanov_kernel(n2, lambda_from_eta(n2, grid), kind, grid);
    const KernelGrid gsum = girsanov_kernel(sum, lambda_from_eta(sum, grid), kind, grid);
    for (std::size_t k = 0; k < gsum.g.data().size(); ++k) {
        CHECK(gsum.g.data()[k] ==
              doctest::Approx(g1.g.data()[k] + g2.g.data()[k]).epsilon(1e-12));
    }

    Surface tripled = n2;
    for (double& v : tripled.data()) {
        v *= 3.0;
    }
    const KernelGrid g3 =
        girsanov_kernel(tripled, lambda_from_eta(tripled, grid), kind, grid);
    for (std::size_t k = 0; k < g3.g.data().size(); ++k) {
        CHECK(g3.g.data()[k] == doctest::Approx(3.0 * g2.g.data()[k]).epsilon(1e-12));
    }
    const ConditionReport r1 = evaluate_conditions(n2, grid, kind);
    const ConditionReport r3 = evaluate_conditions(tripled, grid, kind);
    CHECK(r3.half_g_norm_sq == doctest::Approx(9.0 * r1.half_g_norm_sq).epsilon(1e-12));
}

TEST_CASE("drift identity residual and its refinement") {
    const EtaSpec eta = EtaSpec::constant(1.0);

    struct KindCase {
        FieldKind kind;
        const char* label;
    };
    const KindCase cases[] = {
        {FieldKind::normalized(), "normalized"},
        {FieldKind::scaled(linear_warp()), "linear"},
        {FieldKind::scaled(power_warp(2.0)), "quadratic"},
    };

    for (const KindCase& kc : cases) {
        CAPTURE(kc.label);
        std::vector<RefinementLevel> levels;
        double previous = 0.0;
        for (std::size_t nodes = 512; nodes <= 4096; nodes *= 2) {
            const GridSpec grid = GridSpec::lattice(1.0, 2, nodes);
            const Surface nodes_eta = eta.realize(grid);
            const MprSurface lambda = lambda_from_eta(nodes_eta, grid);
            const KernelGrid kernel = girsanov_kernel(nodes_eta, lambda, kc.kind, grid);
            const double residual = check_drift_identity(kernel, lambda, kc.kind, grid);
            if (nodes == 512) {
                CHECK(residual <= 1e-2);
            } else {
                CHECK(residual <= 1.1 * previous);  // monotone up to 10% wobble
            }
            previous = residual;
            levels.push_back({static_cast<double>(nodes), residual});
        }
        const RefinementStudy study = refinement_order(levels);
        CHECK(study.estimated_order >= 0.8);
        CHECK(study.estimated_order <= 1.6);
    }

    // zero density: residual is exactly zero
    const GridSpec grid = small_grid();
    const Surface zero = EtaSpec::zero().realize(grid);
    const MprSurface lambda = lambda_from_eta(zero, grid);
    const KernelGrid kernel = girsanov_kernel(zero, lambda, FieldKind::normalized(), grid);
    CHECK(check_drift_identity(kernel, lambda, FieldKind::normalized(), grid) == 0.0);
}

TEST_CASE("condition integrals: closed forms for constant eta") {
    const GridSpec grid = fine_grid();
    const FieldKind kind = FieldKind::normalized();

    const ConditionReport zero = evaluate_conditions(EtaSpec::zero(), grid, kind);
    CHECK(zero.c1_integral == 0.0);
    CHECK(zero.c2_integral == 0.0);
    CHECK(zero.thm2_integral == 0.0);
    CHECK(zero.half_g_norm_sq == 0.0);

    // integral of u log(1/u) over (0,1) is 1/4 and of u is 1/2, so the
    // condition integral for eta == c is c^2 (1/8 + 1/2) = 5/8 c^2
    for (double c : {1.0, 0.5}) {
        const ConditionReport report = evaluate_conditions(EtaSpec::constant(c), grid, kind);
        CHECK(report.c1_integral == doctest::Approx(0.625 * c * c).epsilon(1e-3));
        CHECK(report.c2_integral == doctest::Approx(1.25 * c * c).epsilon(1e-3));
        // ||g||^2 = (9/4) c^2 int u du = (9/8) c^2
        CHECK(2.0 * report.half_g_norm_sq == doctest::Approx(1.125 * c * c).epsilon(1e-3));
        CHECK(report.term1_norm_sq + report.term2_norm_sq >= report.half_g_norm_sq);
    }
}

TEST_CASE("half kernel norm never exceeds the two proof terms") {
    const GridSpec grid = GridSpec::lattice(1.0, 6, 128);
    std::mt19937_64 rng(515);
    std::uniform_real_distribution<double> uniform(-1.5, 1.5);
    for (int trial = 0; trial < 5; ++trial) {
        Surface cells(grid.n_time(), grid.n_maturity());
        for (double& v : cells.data()) {
            v = uniform(rng);
        }
        const Surface eta = EtaSpec::piecewise_constant(cells).realize(grid);
        for (const FieldKind& kind :
             {FieldKind::normalized(), FieldKind::scaled(linear_warp())}) {
            const ConditionReport report = evaluate_conditions(eta, grid, kind);
            CHECK(report.term1_norm_sq + report.term2_norm_sq - report.half_g_norm_sq >=
                  -1e-9);
        }
    }
}

TEST_CASE("l2 identity: both sides agree") {
    const GridSpec grid = fine_grid();

    CHECK(check_l2_identity(EtaSpec::zero(), grid) == 0.0);

    // eta == 1: both sides equal 1/8
    const auto [lhs, rhs] = l2_identity_sides(EtaSpec::constant(1.0), grid);
    CHECK(lhs == doctest::Approx(0.125).epsilon(1e-3));
    CHECK(rhs == doctest::Approx(0.125).epsilon(1e-3));
    CHECK(check_l2_identity(EtaSpec::constant(1.0), grid) <= 1e-3);

    // eta(t,u) = u against a brute-force quadrature oracle at 4x resolution:
    // lambda(u) = u^2/2, so both integrands reduce to u^3/16 and
    // (1/4) u^3 log(1/u).
    const EtaSpec ramp = EtaSpec::separable([](double) { return 1.0; },
                                            [](double u) { return u; });
    const std::size_t fine = 4 * 512;
    double oracle_lhs = 0.0, oracle_rhs = 0.0;
    for (std::size_t k = 0; k < fine; ++k) {
        const double u = (static_cast<double>(k) + 0.5) / static_cast<double>(fine);
        oracle_lhs += (u * u * u / 16.0) / static_cast<double>(fine);
        oracle_rhs += 0.25 * u * u * u * std::log(1.0 / u) / static_cast<double>(fine);
    }
    const auto [ramp_lhs, ramp_rhs] = l2_identity_sides(ramp, grid);
    CHECK(ramp_lhs == doctest::Approx(oracle_lhs).epsilon(1e-3));
    CHECK(ramp_rhs == doctest::Approx(oracle_lhs).epsilon(1e-3));
    CHECK(std::fabs(oracle_rhs - oracle_lhs) <= 1e-5);  // oracle self-consistency
    CHECK(check_l2_identity(ramp, grid) <= 1e-3);
}

TEST_CASE("Cauchy-Schwarz bound on the kernel norm") {
    const GridSpec grid = fine_grid();

    CHECK(check_c2_bound(EtaSpec::zero(), grid) == 0.0);

    // eta == 1: ||g||^2 = 9/8 against the bound 5/2, slack 11/8
    const double slack = check_c2_bound(EtaSpec::constant(1.0), grid);
    CHECK(slack == doctest::Approx(1.375).epsilon(1e-3));

    const GridSpec coarse = GridSpec::lattice(1.0, 6, 128);
    std::mt19937_64 rng(90125);
    std::uniform_real_distribution<double> uniform(-1.5, 1.5);
    for (int trial = 0; trial < 10; ++trial) {
        Surface cells(coarse.n_time(), coarse.n_maturity());
        for (double& v : cells.data()) {
            v = uniform(rng);
        }
        CHECK(check_c2_bound(EtaSpec::piecewise_constant(cells), coarse) >= -1e-6);
    }
}

TEST_CASE("condition reports match across the sqrt reduction") {
    const GridSpec grid = small_grid();
    const EtaSpec eta = EtaSpec::constant(0.5);
    const ConditionReport normalized =
        evaluate_conditions(eta, grid, FieldKind::normalized());
    const ConditionReport scaled =
        evaluate_conditions(eta, grid, FieldKind::scaled(sqrt_warp()));
    CHECK(normalized.c1_integral == doctest::Approx(scaled.c1_integral).epsilon(1e-12));
    CHECK(normalized.thm2_integral == doctest::Approx(scaled.thm2_integral).epsilon(1e-12));
    CHECK(normalized.half_g_norm_sq ==
          doctest::Approx(scaled.half_g_norm_sq).epsilon(1e-12));
    CHECK(normalized.term1_norm_sq == doctest::Approx(scaled.term1_norm_sq).epsilon(1e-12));
    CHECK(normalized.term2_norm_sq == doctest::Approx(scaled.term2_norm_sq).epsilon(1e-12));
}

TEST_CASE("piecewise eta must match the grid cells") {
    const GridSpec grid = small_grid();
    Surface wrong(3, 3, 1.0);
    CHECK_THROWS_AS(EtaSpec::piecewise_constant(wrong).realize(grid),
                    std::invalid_argument);
}

TEST_CASE("grid-adapted eta reads only the past") {
    const GridSpec grid = GridSpec::lattice(1.0, 6, 8);
    const EtaSpec eta = EtaSpec::grid_adapted(
        [](const SheetPath& sheet, std::size_t i, std::size_t j) {
            return 0.3 * std::tanh(sheet.sheet(i, j));
        });
    CHECK(!eta.deterministic());
    CHECK_THROWS_AS(eta.realize(grid), std::invalid_argument);
    CHECK_THROWS_AS(evaluate_conditions(eta, grid, FieldKind::normalized()),
                    std::invalid_argument);

    SheetPath sheet = sample_sheet(grid, RandomStream(12, 0));
    const Surface before = eta.realize(grid, sheet);
    // rewriting the future must not change the value at row i
    const std::size_t pivot = 3;
    for (std::size_t i = pivot + 1; i < grid.time_rows(); ++i) {
        for (std::size_t j = 0; j < grid.maturity_cols(); ++j) {
            sheet.sheet(i, j) += 100.0;
        }
    }
    const Surface after = eta.realize(grid, sheet);
    for (std::size_t i = 0; i <= pivot; ++i) {
        for (std::size_t j = 0; j < grid.maturity_cols(); ++j) {
            CHECK(before(i, j) == after(i, j));
        }
    }
}

TEST_CASE("monte carlo condition report flags itself") {
    const GridSpec grid = GridSpec::lattice(1.0, 4, 8);
    const EtaSpec eta = EtaSpec::grid_adapted(
        [](const SheetPath& sheet, std::size_t i, std::size_t j) {
            return 0.25 * std::tanh(sheet.sheet(i, j));
        });
    const ConditionReport report =
        evaluate_conditions_mc(eta, grid, FieldKind::normalized(), 200, 9);
    CHECK(report.monte_carlo);
    CHECK(report.sample_paths == 200);
    CHECK(std::isfinite(report.c1_integral));
    CHECK(report.c1_integral_se > 0.0);
    CHECK(report.c1_exp_moment > 0.0);
    CHECK(report.c2_exp_moment >= 1.0);
    CHECK(report.c2_integral >= 0.0);
}

TEST_SUITE_END();
