#include "corrbc/capacity_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "corrbc/errors.hpp"

namespace corrbc {

const char* to_string(Regime regime) {
    switch (regime) {
        case Regime::r_lt_Kp:
            return "r_lt_Kp";
        case Regime::r_ge_Kp:
            return "r_ge_Kp";
        case Regime::large_system_mu_lt_1:
            return "large_system_mu_lt_1";
        case Regime::large_system_mu_ge_1:
            return "large_system_mu_ge_1";
        case Regime::large_r:
            return "large_r";
        case Regime::large_K:
            return "large_K";
        case Regime::iid_baseline:
            return "iid_baseline";
        case Regime::partial_coop:
            return "partial_coop";
    }
    return "unknown";
}

namespace {

double log2_checked(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("log of non-positive value");
    }
    return std::log2(x);
}

double log2_det(const std::vector<double>& spectrum) {
    double s = 0.0;
    for (double l : spectrum) {
        s += log2_checked(l);
    }
    return s;
}

// x log(1/x) style terms: (1-mu)/mu * log2(1/(1-mu)) with its limit 0 at mu = 1.
double below_one_tail(double mu) {
    if (mu >= 1.0) {
        return 0.0;
    }
    return (1.0 - mu) / mu * -std::log2(1.0 - mu);
}

double above_one_tail(double mu) {
    if (mu <= 1.0) {
        return 0.0;
    }
    return (mu - 1.0) * std::log2(mu / (mu - 1.0));
}

}  // namespace

double kappa(int x, int y, int g) {
    if (y < 1 || g < 1) {
        throw std::domain_error("kappa: y and G must be >= 1");
    }
    if (x < y) {
        throw std::domain_error("kappa: requires x >= y");
    }
    const double h_x = harmonic_exact(x);
    double inner = -kEulerGamma + (h_x - 1.0);
    if (x > y) {
        inner += static_cast<double>(x - y) / y * (h_x - harmonic_exact(x - y));
    }
    return static_cast<double>(y) * g * inner * kLog2E;
}

CapacityResult highsnr_sum_capacity(const SystemParams& params, const Spectra& spectra, double p) {
    params.validate();
    if (!(p > 0.0)) {
        throw std::invalid_argument("highsnr_sum_capacity: P must be positive");
    }
    if (static_cast<int>(spectra.size()) != params.g) {
        throw std::invalid_argument("highsnr_sum_capacity: one spectrum per group required");
    }
    for (const auto& s : spectra) {
        if (static_cast<int>(s.size()) != params.r) {
            throw std::invalid_argument("highsnr_sum_capacity: each spectrum must have r eigenvalues");
        }
        if (!std::is_sorted(s.rbegin(), s.rend())) {
            throw std::invalid_argument("highsnr_sum_capacity: spectra must be descending");
        }
    }
    if (static_cast<long>(params.r) * params.g > params.m) {
        throw std::invalid_argument("highsnr_sum_capacity: r * G exceeds M");
    }
    const int r = params.r;
    const int kp = params.kp;
    const int g = params.g;
    CapacityResult res;
    if (r < kp) {
        const double m_eff = static_cast<double>(r) * g;  // M for ideal, rG for tall structures
        double logdets = 0.0;
        for (const auto& s : spectra) {
            logdets += log2_det(s);
        }
        res.value_bits = m_eff * std::log2(p / m_eff) + logdets + kappa(kp, r, g);
        res.bracket = {-m_eff * std::log2(static_cast<double>(kp) / r), 0.0};
        res.regime = Regime::r_lt_Kp;
    } else {
        const double k = static_cast<double>(kp) * g;
        double top = 0.0;
        double spread = 0.0;
        for (const auto& s : spectra) {
            for (int i = 0; i < kp; ++i) {
                top += log2_checked(s[i]);
                spread += log2_checked(s[r - 1 - i] / s[i]);
            }
        }
        res.value_bits = k * std::log2(p / k) + top + kappa(r, kp, g);
        res.bracket = {spread, 0.0};
        res.regime = Regime::r_ge_Kp;
    }
    return res;
}

CapacityResult iid_baseline(int m, int k, double p) {
    if (m < 1 || k < 1 || !(p > 0.0)) {
        throw std::invalid_argument("iid_baseline: M, K, P must be positive");
    }
    CapacityResult res;
    res.regime = Regime::iid_baseline;
    if (m >= k) {
        res.value_bits = k * std::log2(p / k) + kappa(m, k, 1);
    } else {
        res.value_bits = m * std::log2(p / m) + kappa(k, m, 1);
        res.bracket = {-m * std::log2(static_cast<double>(k) / m), 0.0};
    }
    return res;
}

double rate_gap_equal_eigen(int m, int g) {
    if (m < 1 || g < 1 || m % g != 0) {
        throw std::invalid_argument("rate_gap_equal_eigen: G must divide M");
    }
    const double gg = g;
    return ((gg - 1.0) / 2.0 - (gg * gg - 1.0) / (12.0 * m)) * kLog2E;
}

CapacityResult large_system_ratio(double mu, double p, double lambda_min, int g, bool iid) {
    if (!(mu > 0.0)) {
        throw std::domain_error("large_system_ratio: mu must be positive");
    }
    if (!(p > 0.0)) {
        throw std::invalid_argument("large_system_ratio: P must be positive");
    }
    if (!iid && (!(lambda_min > 0.0) || g < 1)) {
        throw std::invalid_argument("large_system_ratio: lambda_min and G must be positive");
    }
    constexpr double kE = 2.718281828459045235;
    CapacityResult res;
    res.per_dimension = true;
    if (mu < 1.0) {
        res.value_bits = std::log2(p / (kE * mu)) + below_one_tail(mu);
        res.regime = Regime::large_system_mu_lt_1;
        if (!iid) {
            res.bracket = {std::log2(mu * lambda_min / g), 0.0};
        }
    } else {
        res.value_bits = std::log2(mu * p / kE) + above_one_tail(mu);
        res.regime = Regime::large_system_mu_ge_1;
        if (!iid) {
            res.bracket = {std::log2(lambda_min / g), std::log2(mu)};
        }
    }
    return res;
}

CapacityResult large_K_scaling(int m, int k, double p, const Spectra& spectra, CoopMode mode) {
    if (k <= 1) {
        throw std::invalid_argument("large_K_scaling: K must exceed 1");
    }
    if (m < 1 || !(p > 0.0) || spectra.empty()) {
        throw std::invalid_argument("large_K_scaling: M, P and spectra required");
    }
    const int g = static_cast<int>(spectra.size());
    if (k % g != 0) {
        throw std::invalid_argument("large_K_scaling: G must divide K");
    }
    double logdets = 0.0;
    for (const auto& s : spectra) {
        logdets += log2_det(s);
    }
    CapacityResult res;
    const double base = m * std::log2(p / m) + logdets;
    if (mode == CoopMode::no_coop) {
        // Multiuser-diversity term: log of the natural log of K.
        res.value_bits = base + m * std::log2(std::log(static_cast<double>(k)));
        res.regime = Regime::large_K;
    } else {
        res.value_bits = base + m * std::log2(static_cast<double>(k / g));
        res.regime = Regime::partial_coop;
    }
    return res;
}

double vandermonde_expected_logdet(const std::vector<double>& spectrum, int kp) {
    using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    const int r = static_cast<int>(spectrum.size());
    if (r < 1 || r > 12) {
        throw std::invalid_argument("vandermonde_expected_logdet: requires 1 <= r <= 12");
    }
    if (kp < 1 || kp > r) {
        throw std::invalid_argument("vandermonde_expected_logdet: requires 1 <= K' <= r");
    }
    for (int i = 0; i < r; ++i) {
        if (!(spectrum[i] > 0.0)) {
            throw std::invalid_argument("vandermonde_expected_logdet: eigenvalues must be positive");
        }
        for (int j = 0; j < i; ++j) {
            const double sep = std::abs(spectrum[i] - spectrum[j]);
            if (sep < 1e-6 * std::max(spectrum[i], spectrum[j])) {
                throw ValidationError("vandermonde_expected_logdet: repeated eigenvalues make the Vandermonde system singular");
            }
        }
    }

    const int n0 = r - kp;  // size of the leading block
    auto lam = [&](int i) { return static_cast<long double>(spectrum[i]); };
    auto power = [&](int i, int e) { return std::pow(lam(i), static_cast<long double>(e)); };

    Mat omega(r, r);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
            omega(i, j) = power(i, j);
        }
    }
    const long double det_omega = omega.fullPivLu().determinant();
    Mat upsilon = omega.topLeftCorner(n0, n0);
    const long double det_upsilon = n0 > 0 ? upsilon.fullPivLu().determinant() : 1.0L;
    Mat upsilon_inv = n0 > 0 ? Mat(upsilon.fullPivLu().inverse()) : Mat(0, 0);

    long double total = 0.0L;
    for (int k = 1; k <= kp; ++k) {
        const long double psi_k = digamma_int(k);
        // nu for column j of the trailing block: psi(k) + ln(lambda) in column k, 1 elsewhere.
        auto nu = [&](int row, int col) {
            return col == k ? psi_k + std::log(lam(row)) : 1.0L;
        };
        Mat psi(kp, kp);
        for (int i = 1; i <= kp; ++i) {
            const int row = n0 + i - 1;
            for (int j = 1; j <= kp; ++j) {
                const int expo = n0 - 1 + j;
                long double v = nu(row, j) * power(row, expo);
                for (int d = 1; d <= n0; ++d) {
                    for (int q = 1; q <= n0; ++q) {
                        v -= nu(q - 1, j) * upsilon_inv(d - 1, q - 1) * power(row, d - 1) * power(q - 1, expo);
                    }
                }
                psi(i - 1, j - 1) = v;
            }
        }
        total += psi.fullPivLu().determinant();
    }
    return static_cast<double>(det_upsilon / det_omega * total);
}

double vandermonde_highsnr(double p, const Spectra& spectra, int kp) {
    if (!(p > 0.0) || spectra.empty()) {
        throw std::invalid_argument("vandermonde_highsnr: P and spectra required");
    }
    const double k = static_cast<double>(kp) * static_cast<double>(spectra.size());
    double e = 0.0;
    for (const auto& s : spectra) {
        e += vandermonde_expected_logdet(s, kp);
    }
    return k * std::log2(p / k) + kLog2E * e;
}

double vandermonde_highsnr(double p, const std::vector<double>& spectrum, int kp) {
    return vandermonde_highsnr(p, Spectra{spectrum}, kp);
}

}  // namespace corrbc
