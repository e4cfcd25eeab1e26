#include "rfts/warp.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace rfts {

MaturityWarp sqrt_warp() {
    MaturityWarp w;
    w.name = "sqrt";
    w.h = [](double u) { return std::sqrt(u); };
    w.h_prime = [](double u) { return 1.0 / (2.0 * std::sqrt(u)); };
    // Exact identity for the squared coordinate keeps the scaled sqrt field
    // bit-identical to the normalized sheet.
    w.h_squared = [](double u) { return u; };
    w.h_squared_prime = [](double) { return 1.0; };
    return w;
}

MaturityWarp linear_warp() {
    MaturityWarp w;
    w.name = "linear";
    w.h = [](double u) { return u; };
    w.h_prime = [](double) { return 1.0; };
    w.h_squared = [](double u) { return u * u; };
    w.h_squared_prime = [](double u) { return 2.0 * u; };
    return w;
}

MaturityWarp power_warp(double exponent) {
    if (!(exponent > 0.0) || !std::isfinite(exponent)) {
        throw std::invalid_argument("power_warp: exponent must be positive and finite");
    }
    MaturityWarp w;
    w.name = "power(" + std::to_string(exponent) + ")";
    w.h = [exponent](double u) { return std::pow(u, exponent); };
    w.h_prime = [exponent](double u) { return exponent * std::pow(u, exponent - 1.0); };
    w.h_squared = [exponent](double u) {
        const double v = std::pow(u, exponent);
        return v * v;
    };
    w.h_squared_prime = [exponent](double u) {
        return 2.0 * exponent * std::pow(u, 2.0 * exponent - 1.0);
    };
    return w;
}

MaturityWarp table_warp(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) {
        throw std::invalid_argument("table_warp: need at least 2 knots");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!std::isfinite(knots[i].first) || !std::isfinite(knots[i].second)) {
            throw std::invalid_argument("table_warp: knot " + std::to_string(i) +
                                        " is not finite");
        }
        if (!(knots[i].second > 0.0)) {
            throw std::invalid_argument("table_warp: h value at knot " + std::to_string(i) +
                                        " must be positive");
        }
        if (i > 0) {
            if (!(knots[i].first > knots[i - 1].first)) {
                throw std::invalid_argument("table_warp: maturities must be strictly "
                                            "increasing at knot " + std::to_string(i));
            }
            if (!(knots[i].second > knots[i - 1].second)) {
                throw std::invalid_argument("table_warp: h must be strictly increasing "
                                            "at knot " + std::to_string(i));
            }
        }
    }

    auto shared = std::make_shared<std::vector<std::pair<double, double>>>(std::move(knots));

    auto segment = [shared](double u) -> std::size_t {
        const auto& k = *shared;
        const double tol = 1e-12 * std::max(1.0, std::fabs(k.back().first));
        if (u < k.front().first - tol || u > k.back().first + tol) {
            throw std::invalid_argument("table_warp: maturity " + std::to_string(u) +
                                        " outside the knot range");
        }
        std::size_t lo = 0;
        std::size_t hi = k.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (k[mid].first <= u) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return lo;
    };

    auto h_at = [shared, segment](double u) {
        const auto& k = *shared;
        const std::size_t s = segment(u);
        const double slope =
            (k[s + 1].second - k[s].second) / (k[s + 1].first - k[s].first);
        return k[s].second + slope * (u - k[s].first);
    };
    auto hp_at = [shared, segment](double u) {
        const auto& k = *shared;
        const std::size_t s = segment(u);
        return (k[s + 1].second - k[s].second) / (k[s + 1].first - k[s].first);
    };

    MaturityWarp w;
    w.name = "table";
    w.h = h_at;
    w.h_prime = hp_at;
    w.h_squared = [h_at](double u) {
        const double v = h_at(u);
        return v * v;
    };
    w.h_squared_prime = [h_at, hp_at](double u) { return 2.0 * h_at(u) * hp_at(u); };
    return w;
}

void validate_warp_on_grid(const MaturityWarp& warp, const GridSpec& grid) {
    if (!warp.h || !warp.h_prime || !warp.h_squared || !warp.h_squared_prime) {
        throw std::invalid_argument("warp '" + warp.name + "': missing function");
    }
    double prev = 0.0;
    for (std::size_t j = 0; j < grid.maturity_cols(); ++j) {
        const double u = grid.maturity_node(j);
        const double hv = warp.h(u);
        if (!std::isfinite(hv) || !(hv > 0.0)) {
            throw std::invalid_argument("warp '" + warp.name + "': h not positive at node " +
                                        std::to_string(j));
        }
        const double q = warp.h_squared(u);
        if (j > 0 && !(q > prev)) {
            throw std::invalid_argument("warp '" + warp.name +
                                        "': squared warp not increasing over cell " +
                                        std::to_string(j - 1));
        }
        prev = q;
    }
}

FieldKind FieldKind::normalized() {
    FieldKind kind;
    kind.warp = sqrt_warp();
    kind.warp.name = "normalized";
    kind.is_normalized = true;
    return kind;
}

FieldKind FieldKind::scaled(MaturityWarp w) {
    FieldKind kind;
    kind.warp = std::move(w);
    kind.is_normalized = false;
    return kind;
}

}  // namespace rfts
