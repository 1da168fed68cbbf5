#include "corrbc/quadrature.hpp"

#include <stdexcept>

namespace corrbc {

namespace {

GaussLegendreRule build_rule() {
    GaussLegendreRule rule{};
    const int n = kGaussLegendreOrder;
    const double pi = std::acos(-1.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre_rule() {
    static const GaussLegendreRule rule = build_rule();
    return rule;
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(a < b)) {
        throw std::invalid_argument("gauss_legendre: requires a < b");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("gauss_legendre: tol must be positive");
    }
    return integrate(f, a, b, tol);
}

}  // namespace corrbc
