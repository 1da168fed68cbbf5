#include "corrbc/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "corrbc/errors.hpp"
#include "corrbc/quadrature.hpp"

namespace corrbc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Maximal sub-intervals of [theta - delta, theta + delta] on which sin is monotone,
// mapped to their ranges of u = D sin(alpha).
struct URange {
    double lo;
    double hi;
};

std::vector<URange> monotone_ranges(const OneRingGeometry& g) {
    const double a = g.theta - g.delta;
    const double b = g.theta + g.delta;
    std::vector<double> pts{a};
    std::vector<bool> critical{false};
    const auto first = static_cast<long>(std::ceil((a - kPi / 2) / kPi));
    for (long m = first;; ++m) {
        const double c = kPi / 2 + m * kPi;
        if (c >= b) {
            break;
        }
        if (c > a) {
            pts.push_back(c);
            critical.push_back(true);
        }
    }
    pts.push_back(b);
    critical.push_back(false);

    auto u_at = [&](std::size_t i) {
        if (critical[i]) {
            return std::sin(pts[i]) > 0 ? g.spacing : -g.spacing;
        }
        return g.spacing * std::sin(pts[i]);
    };

    std::vector<URange> out;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double u0 = u_at(i);
        const double u1 = u_at(i + 1);
        out.push_back({std::min(u0, u1), std::max(u0, u1)});
    }
    return out;
}

std::vector<double> szego_breakpoints(const OneRingGeometry& g) {
    std::vector<double> xs{-0.5, 0.5};
    for (const auto& r : monotone_ranges(g)) {
        for (double e : {r.lo, r.hi}) {
            const auto k0 = static_cast<long>(std::ceil(e - 0.5));
            const auto k1 = static_cast<long>(std::floor(e + 0.5));
            for (long k = k0; k <= k1; ++k) {
                const double xi = static_cast<double>(k) - e;
                if (xi >= -0.5 && xi <= 0.5) {
                    xs.push_back(xi);
                }
            }
        }
    }
    std::sort(xs.begin(), xs.end());
    std::vector<double> out;
    for (double x : xs) {
        if (out.empty() || x - out.back() > 1e-14) {
            out.push_back(x);
        }
    }
    return out;
}

// Integrates f over [x0, x1] with the substitution x = x0 + (x1 - x0)(1 - cos(pi s))/2,
// which removes inverse-square-root growth at both ends.
template <class F>
double integrate_clustered(F&& f, double x0, double x1, double tol) {
    const double w = x1 - x0;
    auto g = [&](double s) {
        const double x = x0 + 0.5 * w * (1.0 - std::cos(kPi * s));
        return f(x) * 0.5 * w * kPi * std::sin(kPi * s);
    };
    return integrate(g, 0.0, 1.0, tol);
}

int initial_panels_for(double oscillations) {
    int panels = 1;
    while (panels < oscillations / 2.0 && panels < (1 << 12)) {
        panels <<= 1;
    }
    return panels;
}

}  // namespace

double deg_to_rad(double degrees) { return degrees * kPi / 180.0; }

void OneRingGeometry::validate() const {
    if (!(delta > 0.0) || delta > kPi / 2 + 1e-15) {
        throw std::invalid_argument("OneRingGeometry: delta must lie in (0, pi/2]");
    }
    if (!(spacing > 0.0)) {
        throw std::invalid_argument("OneRingGeometry: spacing must be positive");
    }
    if (antennas < 1) {
        throw std::invalid_argument("OneRingGeometry: antennas must be >= 1");
    }
    if (!(std::abs(theta) <= kPi + 1e-15)) {
        throw std::invalid_argument("OneRingGeometry: |theta| must be <= pi");
    }
}

std::vector<std::complex<double>> CorrelationMatrix::lags() const {
    std::vector<std::complex<double>> out(static_cast<std::size_t>(entries.rows()));
    for (Eigen::Index n = 0; n < entries.rows(); ++n) {
        out[static_cast<std::size_t>(n)] = entries(n, 0);
    }
    return out;
}

CorrelationMatrix CorrelationMatrix::from_lags(const std::vector<std::complex<double>>& lags) {
    const auto m = static_cast<Eigen::Index>(lags.size());
    if (m == 0) {
        throw std::invalid_argument("CorrelationMatrix: empty lag list");
    }
    CorrelationMatrix r;
    r.entries.resize(m, m);
    for (Eigen::Index p = 0; p < m; ++p) {
        for (Eigen::Index q = 0; q < m; ++q) {
            const auto& c = lags[static_cast<std::size_t>(std::abs(p - q))];
            r.entries(p, q) = p >= q ? c : std::conj(c);
        }
    }
    for (Eigen::Index p = 0; p < m; ++p) {
        r.entries(p, p) = std::complex<double>(r.entries(p, p).real(), 0.0);
    }
    r.trace_target = static_cast<double>(m);
    return r;
}

std::vector<std::complex<double>> one_ring_lags(const OneRingGeometry& geom, double tol) {
    geom.validate();
    const double two_pi_d = 2.0 * kPi * geom.spacing;
    double sin_span = 0.0;
    for (const auto& r : monotone_ranges(geom)) {
        sin_span += (r.hi - r.lo) / geom.spacing;
    }
    std::vector<std::complex<double>> lags(static_cast<std::size_t>(geom.antennas));
    lags[0] = 1.0;
    for (int n = 1; n < geom.antennas; ++n) {
        const double k = two_pi_d * n;
        auto f = [&](double alpha) {
            const double phase = k * std::sin(alpha + geom.theta);
            return std::complex<double>(std::cos(phase), std::sin(phase));
        };
        const int panels = initial_panels_for(geom.spacing * n * sin_span);
        const double h = 2.0 * geom.delta / panels;
        std::complex<double> total = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double a = -geom.delta + p * h;
            total += integrate(f, a, a + h, tol);
        }
        lags[static_cast<std::size_t>(n)] = total / (2.0 * geom.delta);
    }
    return lags;
}

CorrelationMatrix one_ring_correlation(const OneRingGeometry& geom, double tol) {
    return CorrelationMatrix::from_lags(one_ring_lags(geom, tol));
}

Eigen::VectorXd hermitian_spectrum(const Eigen::MatrixXcd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw ValidationError("hermitian_spectrum: eigensolver failed");
    }
    return solver.eigenvalues().reverse();
}

EigenStructure eigen_decompose(const CorrelationMatrix& r, double truncation) {
    const Eigen::Index m = r.entries.rows();
    if (m == 0 || r.entries.cols() != m) {
        throw ValidationError("eigen_decompose: matrix must be square and non-empty");
    }
    if (!(truncation >= 0.0 && truncation < 1.0)) {
        throw std::invalid_argument("eigen_decompose: truncation must lie in [0, 1)");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(r.entries);
    if (solver.info() != Eigen::Success) {
        throw ValidationError("eigen_decompose: eigensolver failed");
    }
    const Eigen::VectorXd& vals = solver.eigenvalues();
    Eigen::MatrixXcd vecs = solver.eigenvectors();

    const double lmax = vals(m - 1);
    if (!(lmax > 0.0)) {
        throw ValidationError("eigen_decompose: matrix has no positive eigenvalue");
    }
    if (vals(0) < -1e-8 * lmax) {
        throw ValidationError("eigen_decompose: matrix is not positive semidefinite");
    }

    // Pivot: largest-magnitude coordinate, lowest index on ties; rotated to real positive.
    std::vector<Eigen::Index> pivot(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j) {
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double a = std::abs(vecs(i, j));
            if (a > best_abs * (1.0 + 1e-12)) {
                best = i;
                best_abs = a;
            }
        }
        pivot[static_cast<std::size_t>(j)] = best;
        vecs.col(j) *= std::conj(vecs(best, j)) / best_abs;
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::reverse(order.begin(), order.end());
    const double tie = 1e-12 * lmax;
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t end = start + 1;
        while (end < order.size() && vals(order[end - 1]) - vals(order[end]) <= tie) {
            ++end;
        }
        std::stable_sort(order.begin() + static_cast<long>(start), order.begin() + static_cast<long>(end),
                         [&](Eigen::Index x, Eigen::Index y) {
                             return pivot[static_cast<std::size_t>(x)] < pivot[static_cast<std::size_t>(y)];
                         });
        start = end;
    }

    std::vector<Eigen::Index> kept;
    for (Eigen::Index idx : order) {
        if (vals(idx) > truncation * lmax) {
            kept.push_back(idx);
        }
    }

    EigenStructure es;
    const auto r_eff = static_cast<Eigen::Index>(kept.size());
    es.basis.resize(m, r_eff);
    es.eigenvalues.resize(r_eff);
    for (Eigen::Index j = 0; j < r_eff; ++j) {
        es.basis.col(j) = vecs.col(kept[static_cast<std::size_t>(j)]);
        es.eigenvalues(j) = vals(kept[static_cast<std::size_t>(j)]);
    }
    es.eigenvalues *= static_cast<double>(m) / es.eigenvalues.sum();
    return es;
}

double szego_spectrum(const OneRingGeometry& geom, double xi) {
    geom.validate();
    if (!(std::abs(xi) <= 0.5)) {
        throw std::invalid_argument("szego_spectrum: xi must lie in [-1/2, 1/2]");
    }
    const double d = geom.spacing;
    const double floor_gap = kBandEdgeDelta * d;
    double total = 0.0;
    for (const auto& r : monotone_ranges(geom)) {
        const auto k0 = static_cast<long>(std::ceil(r.lo + xi));
        const auto k1 = static_cast<long>(std::floor(r.hi + xi));
        for (long k = k0; k <= k1; ++k) {
            const double u = static_cast<double>(k) - xi;
            total += 1.0 / std::sqrt(std::max(d * d - u * u, floor_gap));
        }
    }
    return total / (2.0 * geom.delta);
}

double szego_support_measure(const OneRingGeometry& geom) {
    geom.validate();
    if (geom.spacing > 0.5) {
        throw std::invalid_argument("szego_support_measure: defined for spacing <= 1/2 only");
    }
    double lo = geom.spacing;
    double hi = -geom.spacing;
    for (const auto& r : monotone_ranges(geom)) {
        lo = std::min(lo, r.lo);
        hi = std::max(hi, r.hi);
    }
    return hi - lo;
}

double szego_total_mass(const OneRingGeometry& geom) {
    geom.validate();
    const auto xs = szego_breakpoints(geom);
    auto s = [&](double xi) { return szego_spectrum(geom, xi); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if (s(0.5 * (xs[i] + xs[i + 1])) > 0.0) {
            total += integrate_clustered(s, xs[i], xs[i + 1], 1e-10);
        }
    }
    return total;
}

double szego_logdet_rate(const OneRingGeometry& geom) {
    geom.validate();
    const auto xs = szego_breakpoints(geom);
    auto log_s = [&](double xi) { return std::log(szego_spectrum(geom, xi)); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if (szego_spectrum(geom, 0.5 * (xs[i] + xs[i + 1])) > 0.0) {
            total += integrate_clustered(log_s, xs[i], xs[i + 1], 1e-9);
        }
    }
    return total;
}

int support_rank(const OneRingGeometry& geom) {
    return static_cast<int>(std::lround(szego_support_measure(geom) * geom.antennas));
}

double leading_logdet_rate(const EigenStructure& es, int count) {
    if (count < 1 || count > es.effective_rank()) {
        throw std::invalid_argument("leading_logdet_rate: count outside [1, r]");
    }
    double s = 0.0;
    for (int i = 0; i < count; ++i) {
        s += std::log(es.eigenvalues(i));
    }
    return s / es.m();
}

int dominant_rank(const EigenStructure& es, double fraction) {
    int n = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) {
        if (es.eigenvalues(i) >= fraction * es.eigenvalues(0)) {
            ++n;
        }
    }
    return n;
}

double bai_logdet_lower(double lambda_min, int m, int r, int g) {
    if (!(lambda_min > 0.0) || m < 1 || r < 1 || g < 1) {
        throw std::invalid_argument("bai_logdet_lower: arguments must be positive");
    }
    if (static_cast<long>(r) * g > m) {
        throw std::invalid_argument("bai_logdet_lower: requires r * G <= M");
    }
    const double mm = m;
    const double rr = r;
    const double denom_tau = lambda_min * rr - mm;
    if (std::abs(denom_tau) <= 1e-12 * mm) {
        return rr * std::log(mm / rr);
    }
    if (lambda_min > mm / rr) {
        throw std::invalid_argument("bai_logdet_lower: lambda_min exceeds the mean eigenvalue M/r");
    }
    const double tau = (lambda_min * mm - mm * mm) / denom_tau;
    const double denom = lambda_min * tau * tau - lambda_min * lambda_min * tau;
    if (std::abs(denom) <= 1e-300) {
        return rr * std::log(mm / rr);
    }
    return ((tau * tau * mm - tau * mm * mm) * std::log(lambda_min) +
            (-lambda_min * lambda_min * mm + lambda_min * mm * mm) * std::log(tau)) /
           denom;
}

Eigen::MatrixXcd sample_channel(const EigenStructure& es, int users, RngStream& stream) {
    const Eigen::Index r = es.effective_rank();
    Eigen::MatrixXcd w(r, users);
    for (int j = 0; j < users; ++j) {
        for (Eigen::Index i = 0; i < r; ++i) {
            w(i, j) = stream.complex_normal();
        }
    }
    const Eigen::VectorXd root = es.eigenvalues.cwiseSqrt();
    return es.basis * (root.asDiagonal() * w);
}

}  // namespace corrbc
