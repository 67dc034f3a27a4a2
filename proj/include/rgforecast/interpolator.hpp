#pragma once

#include <vector>

#include "rgforecast/series.hpp"

namespace rgforecast {

/// Monomial coefficients a_0..a_k of the polynomial through every history point.
struct PolynomialFit {
    std::vector<double> coefficients;
    PastHistory history;

    [[nodiscard]] int order() const noexcept { return static_cast<int>(coefficients.size()) - 1; }
};

/**
 * Exact interpolation of a past history. Built from Newton divided
 * differences with t_0 = 0 as the first node, then expanded to the monomial
 * basis; a_0 is set to f_0 directly.
 */
[[nodiscard]] PolynomialFit fit(const PastHistory& history);

/// Horner evaluation of sum a_n t^n.
[[nodiscard]] double evaluate(const PolynomialFit& fit, double t) noexcept;
[[nodiscard]] double evaluate(const std::vector<double>& coefficients, double t) noexcept;

}  // namespace rgforecast
