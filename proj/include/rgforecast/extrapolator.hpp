#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "rgforecast/interpolator.hpp"

namespace rgforecast {

/// Raised when a_n = 0 for some 1 <= n < k, leaving a_{n+1}/a_n undefined.
class ZeroCoefficientError : public std::domain_error {
public:
    explicit ZeroCoefficientError(int index);
    [[nodiscard]] int index() const noexcept { return index_; }

private:
    int index_;
};

/// Largest exponent magnitude evaluated before a forecast is flagged as diverged.
inline constexpr double kExponentLimit = 700.0;

enum class ForecastStatus { ok, diverged };

struct ForecastDiagnostics {
    std::vector<double> velocities;       // v_1..v_k
    std::vector<double> effective_times;  // tau_1..tau_k
    std::vector<double> controllers;      // c_1..c_k
};

struct Forecast {
    double value = 0.0;  // NaN when diverged
    double horizon = 1.0;
    ForecastDiagnostics diagnostics;
    ForecastStatus status = ForecastStatus::ok;

    [[nodiscard]] bool ok() const noexcept { return status == ForecastStatus::ok; }
};

/// Closed-form minimizer of the time-distance cost: 1 / (n (1 + v^2)).
[[nodiscard]] double effective_time(int n, double velocity);

/// sum_n (tau_n - 1/n)^2 + (v_n tau_n)^2, with n counted from 1.
[[nodiscard]] double cost_functional(std::span<const double> taus, std::span<const double> velocities);

/**
 * Self-similar forecast f_0 exp(c_1 t exp(c_2 t ... exp(c_k t))) at horizon
 * t in (0, 1], with v_n = (a_n / f_0) t^n, tau_n = effective_time(n, v_n)
 * and c_n = (a_n / a_{n-1}) tau_n.
 *
 * A history whose higher coefficients are all zero (constant data) returns
 * f_0 with zero diagnostics. Any other zero a_n with n < k throws
 * ZeroCoefficientError. Exponents beyond kExponentLimit yield status diverged.
 */
[[nodiscard]] Forecast forecast(const PolynomialFit& fit, double horizon);

}  // namespace rgforecast
