#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace corrbc {

inline constexpr double kEulerGamma = 0.57721566490153286;
inline constexpr double kLog2E = 1.4426950408889634;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x, double rel_tol = 0.0) const {
        const double slack = rel_tol * (std::abs(lo) + std::abs(hi));
        return x >= lo - slack && x <= hi + slack;
    }
    double width() const { return hi - lo; }
};

// psi(n) = -gamma + sum_{l=1}^{n-1} 1/l.
double digamma_int(std::int64_t n);

// ln k, the large-argument form of psi(k).
double digamma_asymptotic(std::int64_t k);

// gamma + ln n + 1/(2n) - 1/(12n^2) + 1/(120n^4); error O(n^-6).
double harmonic_approx(std::int64_t n);

// Exact harmonic number H_n (compensated), H_0 = 0.
double harmonic_exact(std::int64_t n);

// E[ln det(W W^H)] for m x n W with iid CN(0,1) entries, n >= m.
double wishart_expected_logdet(std::int64_t m, std::int64_t n);

// Per-dimension large-m form with eta = n/m.
double wishart_logdet_asymptotic(std::int64_t m, double eta);

// (1/k) sum_{l=1}^{k} psi(l); equals psi(k+1) - 1.
double digamma_mean_identity(std::int64_t k);

// Bounds on det(A + B) for Hermitian A, B with the given spectra.
Interval fiedler_det_bounds(std::span<const double> eig_a, std::span<const double> eig_b);

// Bounds on tr ln A from xi1 = tr A, xi2 = tr A^2 and the spectral interval.
Interval bai_trln_bounds(double xi1, double xi2, double lambda_min, double lambda_max, std::int64_t n);

}  // namespace corrbc
