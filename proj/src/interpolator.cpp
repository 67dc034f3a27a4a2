#include "rgforecast/interpolator.hpp"

#include <cmath>
#include <stdexcept>

namespace rgforecast {

PolynomialFit fit(const PastHistory& history) {
    const auto& pts = history.points();
    const std::size_t m = pts.size();

    // In-place divided-difference table; dd[i] ends as f[t_0..t_i].
    std::vector<double> dd(m);
    for (std::size_t i = 0; i < m; ++i) {
        dd[i] = pts[i].f;
    }
    for (std::size_t level = 1; level < m; ++level) {
        for (std::size_t i = m - 1; i >= level; --i) {
            const double span = pts[i].t - pts[i - level].t;
            if (span == 0.0) {
                throw std::domain_error("singular interpolation: repeated abscissa");
            }
            dd[i] = (dd[i] - dd[i - 1]) / span;
        }
    }

    // Expand Newton form dd[0] + dd[1](t - t_0) + ... into monomials, innermost first.
    std::vector<double> a(m, 0.0);
    a[0] = dd[m - 1];
    std::size_t degree = 0;
    for (std::size_t i = m - 1; i-- > 0;) {
        const double node = pts[i].t;
        // a <- a * (t - node) + dd[i]
        ++degree;
        for (std::size_t j = degree; j > 0; --j) {
            a[j] = a[j - 1] - node * a[j];
        }
        a[0] = -node * a[0] + dd[i];
    }
    a[0] = pts[0].f;

    for (double c : a) {
        if (!std::isfinite(c)) {
            throw std::domain_error("singular interpolation: non-finite coefficient");
        }
    }
    return PolynomialFit{std::move(a), history};
}

double evaluate(const std::vector<double>& coefficients, double t) noexcept {
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
        acc = acc * t + *it;
    }
    return acc;
}

double evaluate(const PolynomialFit& fit, double t) noexcept {
    return evaluate(fit.coefficients, t);
}

}  // namespace rgforecast
