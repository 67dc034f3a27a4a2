#include "rgforecast/extrapolator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rgforecast {

ZeroCoefficientError::ZeroCoefficientError(int index)
    : std::domain_error("zero polynomial coefficient a_" + std::to_string(index) + " in ratio chain"), index_(index) {}

double effective_time(int n, double velocity) {
    if (n < 1) {
        throw std::invalid_argument("effective_time: n must be >= 1");
    }
    return 1.0 / (static_cast<double>(n) * (1.0 + velocity * velocity));
}

double cost_functional(std::span<const double> taus, std::span<const double> velocities) {
    if (taus.size() != velocities.size()) {
        throw std::invalid_argument("cost_functional: length mismatch");
    }
    if (taus.empty()) {
        throw std::invalid_argument("cost_functional: empty input");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double gap = taus[i] - 1.0 / static_cast<double>(i + 1);
        const double moved = velocities[i] * taus[i];
        total += gap * gap + moved * moved;
    }
    return total;
}

Forecast forecast(const PolynomialFit& fit, double horizon) {
    if (!(horizon > 0.0 && horizon <= 1.0)) {
        throw std::invalid_argument("forecast: horizon must lie in (0, 1]");
    }
    const auto& a = fit.coefficients;
    const int k = fit.order();
    const double f0 = a.front();
    if (!(f0 > 0.0)) {
        throw std::invalid_argument("forecast: f_0 must be positive");
    }

    Forecast out;
    out.horizon = horizon;
    auto& diag = out.diagnostics;
    diag.velocities.assign(static_cast<std::size_t>(k), 0.0);
    diag.effective_times.assign(static_cast<std::size_t>(k), 0.0);
    diag.controllers.assign(static_cast<std::size_t>(k), 0.0);

    if (std::all_of(a.begin() + 1, a.end(), [](double c) { return c == 0.0; })) {
        out.value = f0;
        return out;
    }
    for (int n = 1; n < k; ++n) {
        if (a[static_cast<std::size_t>(n)] == 0.0) {
            throw ZeroCoefficientError(n);
        }
    }

    double t_pow = 1.0;
    for (int n = 1; n <= k; ++n) {
        const auto i = static_cast<std::size_t>(n);
        t_pow *= horizon;
        const double v = a[i] / f0 * t_pow;
        const double tau = effective_time(n, v);
        diag.velocities[i - 1] = v;
        diag.effective_times[i - 1] = tau;
        diag.controllers[i - 1] = a[i] / a[i - 1] * tau;
    }

    auto overflow = [](double g) { return !(std::abs(g) <= kExponentLimit); };
    auto diverged = [&out] {
        out.status = ForecastStatus::diverged;
        out.value = std::numeric_limits<double>::quiet_NaN();
        return out;
    };

    double g = diag.controllers.back() * horizon;
    for (int n = k - 1; n >= 1; --n) {
        if (overflow(g)) {
            return diverged();
        }
        g = diag.controllers[static_cast<std::size_t>(n - 1)] * horizon * std::exp(g);
    }
    if (overflow(g)) {
        return diverged();
    }
    out.value = f0 * std::exp(g);
    if (!std::isfinite(out.value) || !(out.value > 0.0)) {
        return diverged();
    }
    return out;
}

}  // namespace rgforecast
