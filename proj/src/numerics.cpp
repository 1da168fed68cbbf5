#include "corrbc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace corrbc {

namespace {

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + carry; }
};

void require_positive(std::int64_t n, const char* name) {
    if (n < 1) {
        throw std::domain_error(std::string(name) + " must be >= 1");
    }
}

}  // namespace

double harmonic_exact(std::int64_t n) {
    if (n < 0) {
        throw std::domain_error("harmonic_exact: n must be >= 0");
    }
    CompensatedSum s;
    for (std::int64_t l = n; l >= 1; --l) {
        s.add(1.0 / static_cast<double>(l));
    }
    return s.value();
}

double digamma_int(std::int64_t n) {
    require_positive(n, "digamma_int: n");
    CompensatedSum s;
    s.add(-kEulerGamma);
    for (std::int64_t l = 1; l < n; ++l) {
        s.add(1.0 / static_cast<double>(l));
    }
    return s.value();
}

double digamma_asymptotic(std::int64_t k) {
    require_positive(k, "digamma_asymptotic: k");
    return std::log(static_cast<double>(k));
}

double harmonic_approx(std::int64_t n) {
    require_positive(n, "harmonic_approx: n");
    const double x = static_cast<double>(n);
    const double x2 = x * x;
    return kEulerGamma + std::log(x) + 1.0 / (2.0 * x) - 1.0 / (12.0 * x2) + 1.0 / (120.0 * x2 * x2);
}

double wishart_expected_logdet(std::int64_t m, std::int64_t n) {
    require_positive(m, "wishart_expected_logdet: m");
    require_positive(n, "wishart_expected_logdet: n");
    if (n < m) {
        throw std::domain_error("wishart_expected_logdet: n < m (singular Wishart)");
    }
    // psi(n - l) for l = 0..m-1, built downward from psi(n).
    double psi = digamma_int(n);
    CompensatedSum s;
    for (std::int64_t l = 0; l < m; ++l) {
        s.add(psi);
        if (l + 1 < m) {
            psi -= 1.0 / static_cast<double>(n - l - 1);
        }
    }
    return s.value();
}

double wishart_logdet_asymptotic(std::int64_t m, double eta) {
    require_positive(m, "wishart_logdet_asymptotic: m");
    if (!(eta >= 1.0)) {
        throw std::domain_error("wishart_logdet_asymptotic: eta must be >= 1");
    }
    const double tail = eta == 1.0 ? 0.0 : (eta - 1.0) * std::log(eta / (eta - 1.0));
    return tail + std::log(eta * static_cast<double>(m)) - 1.0;
}

double digamma_mean_identity(std::int64_t k) {
    require_positive(k, "digamma_mean_identity: k");
    CompensatedSum harmonic;  // H_{l-1}
    CompensatedSum total;
    for (std::int64_t l = 1; l <= k; ++l) {
        total.add(harmonic.value() - kEulerGamma);
        harmonic.add(1.0 / static_cast<double>(l));
    }
    return total.value() / static_cast<double>(k);
}

Interval fiedler_det_bounds(std::span<const double> eig_a, std::span<const double> eig_b) {
    if (eig_a.size() != eig_b.size()) {
        throw std::invalid_argument("fiedler_det_bounds: spectra lengths differ");
    }
    const std::size_t n = eig_a.size();
    std::vector<double> a(eig_a.begin(), eig_a.end());
    std::vector<double> b(eig_b.begin(), eig_b.end());
    std::sort(a.begin(), a.end(), std::greater<>());
    std::sort(b.begin(), b.end(), std::greater<>());
    if (n == 0) {
        return {1.0, 1.0};
    }

    auto pairing_product = [&](const std::vector<std::size_t>& perm) {
        double prod = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            prod *= a[i] + b[perm[i]];
        }
        return prod;
    };

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    if (a[n - 1] + b[n - 1] >= 0.0) {
        const double same = pairing_product(perm);
        std::reverse(perm.begin(), perm.end());
        const double reversed = pairing_product(perm);
        return {std::min(same, reversed), std::max(same, reversed)};
    }

    if (n > 8) {
        throw std::invalid_argument("fiedler_det_bounds: permutation enumeration limited to n <= 8");
    }
    double lo = pairing_product(perm);
    double hi = lo;
    while (std::next_permutation(perm.begin(), perm.end())) {
        const double p = pairing_product(perm);
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    return {lo, hi};
}

namespace {

// [ln l, ln t] [[l, t], [l^2, t^2]]^{-1} [xi1, xi2]^T
double bai_quadrature_value(double l, double t, double xi1, double xi2) {
    const double det = l * t * t - t * l * l;
    const double w_l = (t * t * xi1 - t * xi2) / det;
    const double w_t = (-l * l * xi1 + l * xi2) / det;
    return w_l * std::log(l) + w_t * std::log(t);
}

}  // namespace

Interval bai_trln_bounds(double xi1, double xi2, double lambda_min, double lambda_max, std::int64_t n) {
    require_positive(n, "bai_trln_bounds: n");
    if (!(lambda_min > 0.0) || !(lambda_max >= lambda_min) || !(xi1 > 0.0)) {
        throw std::invalid_argument("bai_trln_bounds: requires 0 < lambda_min <= lambda_max and xi1 > 0");
    }
    const double nn = static_cast<double>(n);
    const double mean = xi1 / nn;
    const double scale = std::max(std::abs(lambda_max), 1.0);
    // All eigenvalues equal: the bound collapses to the exact value.
    if (lambda_max - lambda_min <= 1e-12 * scale || std::abs(lambda_min * nn - xi1) <= 1e-12 * xi1 ||
        std::abs(lambda_max * nn - xi1) <= 1e-12 * xi1) {
        const double v = nn * std::log(mean);
        return {v, v};
    }
    if (xi2 < xi1 * xi1 / nn * (1.0 - 1e-12)) {
        throw std::invalid_argument("bai_trln_bounds: xi2 below xi1^2/n");
    }
    const double t_lo = (lambda_min * xi1 - xi2) / (lambda_min * nn - xi1);
    const double t_hi = (lambda_max * xi1 - xi2) / (lambda_max * nn - xi1);
    const double lo = bai_quadrature_value(lambda_min, t_lo, xi1, xi2);
    const double hi = bai_quadrature_value(lambda_max, t_hi, xi1, xi2);
    return {std::min(lo, hi), std::max(lo, hi)};
}

}  // namespace corrbc
