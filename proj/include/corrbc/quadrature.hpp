#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <type_traits>

#include "corrbc/errors.hpp"

namespace corrbc {

inline constexpr int kGaussLegendreOrder = 20;
inline constexpr int kMaxPanelLevel = 16;  // up to 2^16 panels

struct GaussLegendreRule {
    std::array<double, kGaussLegendreOrder> nodes;
    std::array<double, kGaussLegendreOrder> weights;
};

// 20-point rule on [-1, 1], computed once by Newton iteration on P_20.
const GaussLegendreRule& gauss_legendre_rule();

namespace detail {

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& z) { return std::abs(z); }

}  // namespace detail

// Composite Gauss-Legendre with panel doubling. Stops when two successive
// levels agree to tol relative to max(|I|, integral of |f|).
template <class F>
auto integrate(F&& f, double a, double b, double tol = 1e-10) {
    using Value = std::decay_t<decltype(f(a))>;
    const auto& rule = gauss_legendre_rule();

    auto panel_sum = [&](int panels, double& abs_sum) {
        const double h = (b - a) / panels;
        Value total{};
        abs_sum = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double mid = a + (p + 0.5) * h;
            Value part{};
            double abs_part = 0.0;
            for (int i = 0; i < kGaussLegendreOrder; ++i) {
                const Value v = f(mid + 0.5 * h * rule.nodes[i]);
                part += rule.weights[i] * v;
                abs_part += rule.weights[i] * detail::magnitude(v);
            }
            total += 0.5 * h * part;
            abs_sum += 0.5 * std::abs(h) * abs_part;
        }
        return total;
    };

    double abs_prev = 0.0;
    Value prev = panel_sum(1, abs_prev);
    for (int level = 1; level <= kMaxPanelLevel; ++level) {
        double abs_cur = 0.0;
        const Value cur = panel_sum(1 << level, abs_cur);
        const double scale = std::max(detail::magnitude(cur), abs_cur);
        if (detail::magnitude(cur - prev) <= tol * scale) {
            return cur;
        }
        prev = cur;
    }
    throw AccuracyError("gauss_legendre: no convergence at maximum refinement depth",
                        detail::magnitude(prev));
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);

}  // namespace corrbc
