#include "corrbc/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "corrbc/capacity_bounds.hpp"
#include "corrbc/covariance.hpp"
#include "corrbc/grouping.hpp"
#include "corrbc/montecarlo.hpp"
#include "corrbc/numerics.hpp"
#include "corrbc/pilot_systems.hpp"
#include "corrbc/rng.hpp"

namespace corrbc {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::MatrixXcd random_unitary(int n, RngStream& rng) {
    Eigen::MatrixXcd a(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            a(i, j) = rng.complex_normal();
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

Eigen::MatrixXcd with_spectrum(const Eigen::VectorXd& eig, RngStream& rng) {
    const Eigen::MatrixXcd u = random_unitary(static_cast<int>(eig.size()), rng);
    return u * eig.cast<std::complex<double>>().asDiagonal() * u.adjoint();
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

using Check = std::function<PropertyResult()>;

PropertyResult digamma_recurrence() {
    double worst = 0.0;
    double prev = digamma_int(1);
    for (std::int64_t n = 1; n <= 10000; ++n) {
        const double next = digamma_int(n + 1);
        worst = std::max(worst, std::abs(next - prev - 1.0 / static_cast<double>(n)));
        prev = next;
    }
    return {"numerics.digamma_recurrence", worst <= 1e-13, "max error " + fmt(worst)};
}

PropertyResult digamma_mean() {
    double worst = 0.0;
    for (std::int64_t k = 1; k <= 10000; k += (k < 100 ? 1 : 97)) {
        worst = std::max(worst, std::abs(digamma_mean_identity(k) - (digamma_int(k + 1) - 1.0)));
    }
    return {"numerics.digamma_mean_identity", worst <= 1e-12, "max error " + fmt(worst)};
}

PropertyResult fiedler(RngStream rng) {
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 6);
        Eigen::VectorXd ea(n);
        Eigen::VectorXd eb(n);
        for (int i = 0; i < n; ++i) {
            ea(i) = rng.uniform(-1.0, 3.0);
            eb(i) = rng.uniform(-1.0, 3.0);
        }
        const Eigen::MatrixXcd a = with_spectrum(ea, rng);
        const Eigen::MatrixXcd b = with_spectrum(eb, rng);
        const double det = (a + b).determinant().real();
        const Interval iv = fiedler_det_bounds(std::vector<double>(ea.data(), ea.data() + n),
                                               std::vector<double>(eb.data(), eb.data() + n));
        const double slack = 1e-9 * std::max({std::abs(iv.lo), std::abs(iv.hi), 1.0});
        if (det < iv.lo - slack || det > iv.hi + slack) {
            ++failures;
        }
    }
    return {"numerics.fiedler_det_bounds", failures == 0, std::to_string(failures) + " of 1000 outside"};
}

PropertyResult bai(RngStream rng) {
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 11);
        Eigen::VectorXd e(n);
        for (int i = 0; i < n; ++i) {
            e(i) = rng.uniform(0.05, 5.0);
        }
        const Eigen::MatrixXcd a = with_spectrum(e, rng);
        const Eigen::VectorXd spec = hermitian_spectrum(a);
        const double xi1 = a.trace().real();
        const double xi2 = (a * a).trace().real();
        const Interval iv = bai_trln_bounds(xi1, xi2, spec.minCoeff(), spec.maxCoeff(), n);
        const double trln = spec.array().log().sum();
        if (!iv.contains(trln, 1e-10)) {
            ++failures;
        }
    }
    return {"numerics.bai_trln_bounds", failures == 0, std::to_string(failures) + " of 1000 outside"};
}

PropertyResult one_ring_invariants(RngStream rng) {
    int failures = 0;
    double worst_residual = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        OneRingGeometry g;
        g.theta = rng.uniform(-kPi, kPi);
        g.delta = rng.uniform(0.01, kPi / 2);
        g.spacing = rng.uniform(0.1, 1.0);
        g.antennas = 1 + static_cast<int>(rng.next_u64() % 32);
        const CorrelationMatrix r = one_ring_correlation(g);
        const Eigen::MatrixXcd& e = r.entries;
        const double herm = (e - e.adjoint()).cwiseAbs().maxCoeff();
        double diag = 0.0;
        for (int i = 0; i < g.antennas; ++i) {
            diag = std::max(diag, std::abs(e(i, i) - 1.0));
        }
        const Eigen::VectorXd spec = hermitian_spectrum(e);
        const bool psd = spec(spec.size() - 1) >= -1e-8 * spec(0);
        const EigenStructure es = eigen_decompose(r);
        const Eigen::MatrixXcd rec =
            es.basis * es.eigenvalues.cast<std::complex<double>>().asDiagonal() * es.basis.adjoint();
        const double residual = (rec - e).norm() / e.norm();
        worst_residual = std::max(worst_residual, residual);
        const double trace_err = std::abs(es.eigenvalues.sum() - g.antennas);
        const double orth = (es.basis.adjoint() * es.basis - Eigen::MatrixXcd::Identity(es.effective_rank(), es.effective_rank()))
                                .cwiseAbs()
                                .maxCoeff();
        if (herm > 1e-12 || diag > 1e-12 || !psd || residual > 1e-6 || trace_err > 1e-10 * g.antennas || orth > 1e-10) {
            ++failures;
        }
    }
    return {"covariance.one_ring_invariants", failures == 0,
            std::to_string(failures) + " of 40 failed; worst residual " + fmt(worst_residual)};
}

PropertyResult szego_mass() {
    double worst = 0.0;
    for (double theta_deg : {0.0, 20.0, -45.0, 80.0}) {
        for (double delta_deg : {2.0, 10.0, 30.0}) {
            OneRingGeometry g{deg_to_rad(theta_deg), deg_to_rad(delta_deg), 0.5, 8};
            worst = std::max(worst, std::abs(szego_total_mass(g) - 1.0));
        }
    }
    return {"covariance.szego_mass", worst <= 1e-6, "max |mass - 1| " + fmt(worst)};
}

PropertyResult capacity_identities(RngStream rng) {
    double worst = 0.0;
    for (int x = 1; x <= 12; ++x) {
        for (int y = 1; y <= x; ++y) {
            for (int g = 1; g <= 6; ++g) {
                worst = std::max(worst, std::abs(kappa(x, y, g) - g * kappa(x, y, 1)));
            }
        }
    }
    bool ok = worst <= 1e-12;
    for (int m = 1; m <= 12; ++m) {
        for (int k = 1; k <= m; ++k) {
            SystemParams s{m, k, 1, m, k, 1, 1e3};
            const Spectra flat{std::vector<double>(static_cast<std::size_t>(m), 1.0)};
            ok = ok && std::abs(highsnr_sum_capacity(s, flat, 1e3).value_bits - iid_baseline(m, k, 1e3).value_bits) < 1e-9;
        }
    }
    for (double p : {10.0, 1e3}) {
        for (bool iid : {true, false}) {
            const double lo = large_system_ratio(1.0 - 1e-6, p, 0.5, 4, iid).value_bits;
            const double hi = large_system_ratio(1.0 + 1e-6, p, 0.5, 4, iid).value_bits;
            ok = ok && std::abs(lo - hi) <= 1e-9;
        }
    }
    int vdm_fail = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int r = 1 + static_cast<int>(rng.next_u64() % 6);
        const int kp = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(r));
        std::vector<double> s(static_cast<std::size_t>(r));
        for (auto& v : s) {
            v = rng.uniform(0.2, 3.0);
        }
        std::sort(s.rbegin(), s.rend());
        const double total = std::accumulate(s.begin(), s.end(), 0.0);
        for (auto& v : s) {
            v *= r / total;
        }
        SystemParams params{r, kp, 1, r, kp, 1, 1e4};
        const CapacityResult c = highsnr_sum_capacity(params, Spectra{s}, 1e4);
        const double v = vandermonde_highsnr(1e4, s, kp);
        if (v < c.lower() - 1e-6 || v > c.upper() + 1e-6) {
            ++vdm_fail;
        }
    }
    ok = ok && vdm_fail == 0;
    return {"capacity_bounds.identities", ok,
            "kappa G-linearity " + fmt(worst) + "; vandermonde outside bracket " + std::to_string(vdm_fail)};
}

PropertyResult pilot_invariants(RngStream rng) {
    int failures = 0;
    for (int m = 1; m <= 40; m += 3) {
        for (int k = 1; k <= 40; k += 3) {
            for (int tc = 1; tc <= 256; tc += 17) {
                double prev_g = -1.0;
                for (int g = 1; g <= 16; ++g) {
                    const double corr = optimal_antennas(m, k, tc, g, true).prelog;
                    const double iid = optimal_antennas(m, k, tc, 1, false).prelog;
                    if (corr < iid || corr < prev_g) {
                        ++failures;
                    }
                    if (g == 1 && corr != iid) {
                        ++failures;
                    }
                    if (static_cast<double>(g) >= 2.0 * std::min(m, k) / tc &&
                        optimal_antennas(m, k, tc, g, true).m_star != std::min(m, k)) {
                        ++failures;
                    }
                    prev_g = corr;
                }
                if (tc + 17 <= 256 && optimal_antennas(m, k, tc + 17, 4, true).prelog < optimal_antennas(m, k, tc, 4, true).prelog) {
                    ++failures;
                }
            }
        }
    }
    for (int trial = 0; trial < 1000; ++trial) {
        const int m = 1 + static_cast<int>(rng.next_u64() % 512);
        const int k = 1 + static_cast<int>(rng.next_u64() % 512);
        const int tc = 1 + static_cast<int>(rng.next_u64() % 256);
        const int g = 1 + static_cast<int>(rng.next_u64() % 16);
        if (std::abs(multiclass_prelog(m, k, tc, g, 1) - optimal_antennas(m, k, tc, g, true).prelog) > 1e-9) {
            ++failures;
        }
        TddConfig cfg;
        cfg.alpha = rng.uniform(1.0, 20.0);
        cfg.tc = 2 + static_cast<std::int64_t>(rng.next_u64() % 200);
        cfg.n2 = 1 + static_cast<std::int64_t>(rng.next_u64() % 20);
        cfg.n1 = cfg.n2 + 1 + static_cast<std::int64_t>(rng.next_u64() % 40);
        cfg.n_lln = rng.uniform(10.0, 2000.0);
        const std::int64_t kk = 1 + static_cast<std::int64_t>(rng.next_u64() % 600);
        for (bool above : {false, true}) {
            std::int64_t best = 1;
            for (std::int64_t q = 2; q <= kk; ++q) {
                if (tdd_dof(q, cfg, above) > tdd_dof(best, cfg, above) + 1e-9 * std::abs(tdd_dof(best, cfg, above))) {
                    best = q;
                }
            }
            if (tdd_optimal_users(kk, cfg, above) != best) {
                ++failures;
            }
        }
    }
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 1 + static_cast<int>(rng.next_u64() % 300);
        const int m = k + 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(std::max(1, 512 - k)));
        const int tc = 2 + static_cast<int>(rng.next_u64() % 255);
        const int g = 1 + static_cast<int>(rng.next_u64() % 20);
        const double p = std::pow(10.0, rng.uniform(0.0, 4.0));
        const PilotSystemResult r = system2_optimize(std::min(m, 512), k, tc, g, p);
        const double best = system2_objective(std::min(m, 512), k, tc, g, p, r.m_p2_star);
        for (int q = r.m_star; q <= std::min(m, 512); ++q) {
            if (system2_objective(std::min(m, 512), k, tc, g, p, q) > best) {
                ++failures;
                break;
            }
        }
        if (r.m_p2_star < r.m_star || r.m_p2_star > std::min(m, 512)) {
            ++failures;
        }
    }
    return {"pilot_systems.invariants", failures == 0, std::to_string(failures) + " violations"};
}

PropertyResult dual_mac_properties(RngStream rng) {
    int failures = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 1 + static_cast<int>(rng.next_u64() % 6);
        const int k = 1 + static_cast<int>(rng.next_u64() % 10);
        Eigen::MatrixXcd h(m, k);
        for (int j = 0; j < k; ++j) {
            for (int i = 0; i < m; ++i) {
                h(i, j) = rng.complex_normal();
            }
        }
        DualMacOptions opts;
        opts.record_trace = true;
        double prev = -1.0;
        for (double p = 0.5; p <= 4096.0; p *= 2.0) {
            const DualMacResult res = dual_mac_sum_capacity({h}, p, opts);
            for (std::size_t i = 1; i < res.trace.size(); ++i) {
                if (res.trace[i] < res.trace[i - 1]) {
                    ++failures;
                }
            }
            if (res.sum_rate_bits < prev - 1e-8) {
                ++failures;
            }
            prev = res.sum_rate_bits;
        }
    }
    return {"montecarlo.dual_mac_ascent_and_monotonicity", failures == 0, std::to_string(failures) + " violations"};
}

PropertyResult determinism_and_reduction(const ValidationOptions& opt) {
    MonteCarloConfig cfg;
    cfg.trials = opt.trials;
    cfg.seed = opt.seed;
    const GroupedSystem gs = flat_symmetric_system(4, 2, 2);
    cfg.threads = 1;
    const CapacitySample serial = ergodic_sum_capacity(gs, cfg, 100.0);
    cfg.threads = std::max(2u, opt.threads);
    const CapacitySample parallel = ergodic_sum_capacity(gs, cfg, 100.0);
    const CapacitySample full = ergodic_sum_capacity(gs, cfg, 100.0, ChannelView::full);
    const bool identical = serial.mean_bits == parallel.mean_bits && serial.std_error_bits == parallel.std_error_bits;
    const double diff = std::abs(full.mean_bits - parallel.mean_bits);
    const bool equivalent = diff <= 3.0 * std::hypot(full.std_error_bits, parallel.std_error_bits);
    return {"montecarlo.determinism_and_dimension_reduction", identical && equivalent,
            std::string(identical ? "bit-identical" : "differs") + "; full vs reduced " + fmt(diff) + " bits"};
}

PropertyResult wishart_mc(const ValidationOptions& opt) {
    RngStream rng = RngStream(opt.seed).substream(77);
    bool ok = true;
    std::string detail;
    for (auto [m, n] : {std::pair{2, 2}, {2, 4}, {4, 8}, {8, 8}}) {
        std::vector<double> v(20000);
        for (auto& x : v) {
            Eigen::MatrixXcd w(m, n);
            for (int j = 0; j < n; ++j) {
                for (int i = 0; i < m; ++i) {
                    w(i, j) = rng.complex_normal();
                }
            }
            const Eigen::MatrixXcd g = w * w.adjoint();
            Eigen::LLT<Eigen::MatrixXcd> llt(g);
            x = 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
        }
        const CapacitySample s = summarize(v);
        const double z = (s.mean_bits - wishart_expected_logdet(m, n)) / s.std_error_bits;
        ok = ok && std::abs(z) <= 4.0;
        detail += "(" + std::to_string(m) + "," + std::to_string(n) + ") z=" + fmt(z) + " ";
    }
    return {"numerics.wishart_monte_carlo", ok, detail};
}

}  // namespace

std::vector<PropertyResult> run_invariant_suite(const ValidationOptions& options) {
    const RngStream root(options.seed);
    std::vector<Check> checks{
        digamma_recurrence,
        digamma_mean,
        [&] { return fiedler(root.substream(1)); },
        [&] { return bai(root.substream(2)); },
        [&] { return one_ring_invariants(root.substream(3)); },
        szego_mass,
        [&] { return capacity_identities(root.substream(4)); },
        [&] { return pilot_invariants(root.substream(5)); },
        [&] { return dual_mac_properties(root.substream(6)); },
        [&] { return determinism_and_reduction(options); },
        [&] { return wishart_mc(options); },
    };
    std::vector<PropertyResult> out;
    for (const auto& check : checks) {
        try {
            out.push_back(check());
        } catch (const std::exception& e) {
            out.push_back({"check raised", false, e.what()});
        }
    }
    return out;
}

}  // namespace corrbc
