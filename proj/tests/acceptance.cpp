// Acceptance criteria AC1-AC10. One [PASS]/[FAIL] line per criterion; exit
// status is non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corrbc/capacity_bounds.hpp"
#include "corrbc/cli.hpp"
#include "corrbc/covariance.hpp"
#include "corrbc/grouping.hpp"
#include "corrbc/montecarlo.hpp"
#include "corrbc/numerics.hpp"
#include "corrbc/pilot_systems.hpp"
#include "corrbc/rng.hpp"

using namespace corrbc;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(double x, int precision = 4) {
    std::ostringstream os;
    os.precision(precision);
    os << x;
    return os.str();
}

unsigned threads() { return default_threads(); }

Outcome ac1_prelog_saturation() {
    bool ok = true;
    std::ostringstream d;
    auto saturation = [](int tc, int g) {
        // Largest exact prelog over min(M, K) in [1, 2000]; prelog never decreases.
        ExactPrelog best = optimal_prelog_exact(1, 1, tc, g);
        for (int x = 2; x <= 2000; ++x) {
            const ExactPrelog e = optimal_prelog_exact(x, x, tc, g);
            if (e.numerator * best.denominator > best.numerator * e.denominator) {
                best = e;
            }
        }
        return best;
    };
    for (int tc : {32, 100}) {
        const ExactPrelog iid = saturation(tc, 1);
        const bool iid_ok = iid.denominator == 1 && iid.numerator * 4 == tc;
        ok = ok && iid_ok;
        d << "iid Tc=" << tc << "->" << iid.numerator << "/" << iid.denominator << " ";
        for (int g : {4, 8}) {
            const ExactPrelog c = saturation(tc, g);
            const bool c_ok = c.denominator == 1 && c.numerator * 4 == static_cast<std::int64_t>(tc) * g;
            ok = ok && c_ok;
            d << "G=" << g << "->" << c.numerator << " ";
        }
    }
    return {ok, d.str()};
}

Outcome ac2_wishart() {
    RngStream root(20240);
    bool ok = true;
    std::ostringstream d;
    int idx = 0;
    for (auto [m, n] : {std::pair{2, 2}, {2, 4}, {4, 8}, {8, 8}}) {
        RngStream rng = root.substream(static_cast<std::uint64_t>(idx++));
        const int draws = 100000;
        std::vector<double> v(draws);
        Eigen::MatrixXcd w(m, n);
        for (auto& x : v) {
            for (int j = 0; j < n; ++j) {
                for (int i = 0; i < m; ++i) {
                    w(i, j) = rng.complex_normal();
                }
            }
            Eigen::LLT<Eigen::MatrixXcd> llt(w * w.adjoint());
            x = 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
        }
        const CapacitySample s = summarize(v);
        const double z = (s.mean_bits - wishart_expected_logdet(m, n)) / s.std_error_bits;
        ok = ok && std::abs(z) <= 4.0;
        d << "(" << m << "," << n << ") z=" << fmt(z, 3) << " ";
    }
    return {ok, d.str()};
}

// Shared by AC3 and AC4: ergodic sum capacity at M = K = 8, P = 1e4, flat spectra.
struct SandwichData {
    std::vector<int> groups{1, 2, 4};
    std::vector<CapacitySample> samples;
    std::vector<double> closed;
};

const SandwichData& sandwich_data() {
    static const SandwichData data = [] {
        SandwichData s;
        MonteCarloConfig cfg;
        cfg.trials = 2000;
        cfg.seed = 303;
        cfg.threads = threads();
        for (int g : s.groups) {
            const GroupedSystem gs = flat_symmetric_system(8, g, 8 / g);
            s.samples.push_back(ergodic_sum_capacity(gs, cfg, 1e4));
            const Spectra flat(static_cast<std::size_t>(g), std::vector<double>(static_cast<std::size_t>(8 / g), g));
            s.closed.push_back(highsnr_sum_capacity(SystemParams::symmetric(8, 8, g, 1, 1e4), flat, 1e4).value_bits);
        }
        return s;
    }();
    return data;
}

Outcome ac3_sandwich() {
    const SandwichData& s = sandwich_data();
    bool ok = true;
    std::ostringstream d;
    for (std::size_t i = 0; i < s.groups.size(); ++i) {
        const double diff = s.samples[i].mean_bits - s.closed[i];
        ok = ok && diff >= -0.5 && diff <= 0.5 && s.samples[i].nonconverged == 0;
        d << "G=" << s.groups[i] << " diff=" << fmt(diff, 3) << " ";
    }
    return {ok, d.str() + "(2000 trials)"};
}

Outcome ac4_rate_gap() {
    const SandwichData& s = sandwich_data();
    const double gap = s.samples[2].mean_bits - s.samples[0].mean_bits;
    const double target = rate_gap_equal_eigen(8, 4);
    return {std::abs(gap - target) <= 0.75, "gap=" + fmt(gap) + " target=" + fmt(target)};
}

Outcome ac5_figure4() {
    MonteCarloConfig cfg;
    cfg.trials = 1000;
    cfg.seed = 505;
    cfg.threads = threads();
    cfg.snr_grid_db = {10.0, 15.0, 20.0};
    const DatasetResult r = figure4_dataset(cfg);
    bool ok = true;
    std::ostringstream d;
    // Rows per K: snr-major, iid then correlated.
    for (std::size_t row = 0; row < r.table.rows.size(); row += 2) {
        const auto& iid = r.table.rows[row];
        const auto& corr = r.table.rows[row + 1];
        const auto k = std::get<std::int64_t>(iid[1]);
        const double se = std::hypot(std::get<double>(iid[5]), std::get<double>(corr[5]));
        const double margin = k == 4 ? std::get<double>(iid[4]) - std::get<double>(corr[4])
                                     : std::get<double>(corr[4]) - std::get<double>(iid[4]);
        ok = ok && margin > 2.0 * se;
        d << "K=" << k << "@" << format_number(std::get<double>(iid[0])) << "dB:" << fmt(margin / se, 3) << "se ";
    }
    return {ok && r.nonconverged == 0, d.str()};
}

Outcome ac6_figure7() {
    MonteCarloConfig cfg;
    cfg.trials = 200;
    cfg.seed = 606;
    cfg.threads = threads();
    Figure7Setup setup;
    setup.antennas = {4};
    setup.delta_ranges_deg = {{2.0, 5.0}};
    const DatasetResult r = figure7_dataset(cfg, setup);
    std::vector<double> gap;
    std::vector<double> se;
    for (const auto& row : r.table.rows) {
        if (std::get<std::string>(row[3]) == "gap") {
            gap.push_back(std::get<double>(row[4]));
            se.push_back(std::get<double>(row[5]));
        }
    }
    bool ok = gap.size() == 4;
    int violations = 0;
    std::ostringstream d;
    for (std::size_t i = 0; i < gap.size(); ++i) {
        ok = ok && gap[i] > 0.0;
        d << fmt(gap[i], 3) << " ";
        if (i > 0 && gap[i] < gap[i - 1]) {
            ++violations;
            ok = ok && gap[i - 1] - gap[i] <= 2.0 * std::hypot(se[i], se[i - 1]);
        }
    }
    ok = ok && violations <= 1;
    return {ok, "gap(K=64..2048)=" + d.str() + "violations=" + std::to_string(violations)};
}

Outcome ac7_szego() {
    const OneRingGeometry base{0.0, deg_to_rad(10.0), 0.5, 64};
    const double target = szego_logdet_rate(base);
    std::vector<double> err;
    std::ostringstream d;
    for (int m : {64, 128, 256, 512}) {
        OneRingGeometry g = base;
        g.antennas = m;
        const EigenStructure es = eigen_decompose(one_ring_correlation(g));
        const double rate = leading_logdet_rate(es, support_rank(g));
        err.push_back(std::abs(rate - target));
        d << "M=" << m << ":" << fmt(err.back() / target * 100.0, 3) << "% ";
    }
    bool ok = err.back() <= 0.05 * target;
    for (std::size_t i = 1; i < err.size(); ++i) {
        ok = ok && err[i] <= err[i - 1] + 1e-2;
    }
    return {ok, d.str() + "target=" + fmt(target, 6)};
}

Outcome ac8_system2() {
    RngStream rng(808);
    int failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 1 + static_cast<int>(rng.next_u64() % 400);
        const int m = k + 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(512 - k));
        const int tc = 1 + static_cast<int>(rng.next_u64() % 256);
        const int g = 1 + static_cast<int>(rng.next_u64() % 32);
        const double p = std::pow(10.0, rng.uniform(-1.0, 5.0));
        const PilotSystemResult r = system2_optimize(m, k, tc, g, p);
        const double best = system2_objective(m, k, tc, g, p, r.m_p2_star);
        for (int q = r.m_star; q <= m; ++q) {
            if (system2_objective(m, k, tc, g, p, q) > best) {
                ++failures;
                break;
            }
        }
    }
    const PilotSystemResult fig3 = system2_optimize(200, 40, 64, 10, 30.0);
    const bool ok = failures == 0 && fig3.m_p2_star > fig3.m_star;
    return {ok, "certificate failures=" + std::to_string(failures) + " fig3 M*=" + std::to_string(fig3.m_star) +
                    " M_p2*=" + std::to_string(fig3.m_p2_star)};
}

Outcome ac9_tdd() {
    RngStream rng(909);
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        TddConfig cfg;
        cfg.alpha = rng.uniform(1.0, 20.0);
        cfg.tc = 1 + static_cast<std::int64_t>(rng.next_u64() % 200);
        cfg.n2 = 1 + static_cast<std::int64_t>(rng.next_u64() % 24);
        cfg.n1 = cfg.n2 + 1 + static_cast<std::int64_t>(rng.next_u64() % 48);
        cfg.n_lln = rng.uniform(10.0, 2000.0);
        const std::int64_t k = 1 + static_cast<std::int64_t>(rng.next_u64() % 1000);
        const bool above = cfg.alpha * static_cast<double>(k) >= cfg.n_lln;
        std::int64_t best = 1;
        for (std::int64_t q = 2; q <= k; ++q) {
            if (tdd_dof(q, cfg, above) > tdd_dof(best, cfg, above) + 1e-9 * std::abs(tdd_dof(best, cfg, above))) {
                best = q;
            }
        }
        if (tdd_optimal_users(k, cfg, above) != best) {
            ++failures;
        }
    }
    return {failures == 0, "mismatches=" + std::to_string(failures) + " of 1000"};
}

Outcome ac10_determinism() {
    struct Job {
        const char* name;
        nlohmann::json doc;
    };
    const std::vector<Job> jobs{
        {"figure4", {{"command", "figure4"}, {"trials", 200}, {"seed", 7}}},
        {"figure7",
         {{"command", "figure7"}, {"trials", 20}, {"seed", 7}, {"antennas", {4}}, {"users", {64, 256}}}},
        {"validate", {{"command", "validate"}, {"seed", 7}}},
    };
    bool ok = true;
    std::ostringstream d;
    for (const auto& job : jobs) {
        std::vector<std::string> outputs;
        for (unsigned t : {1u, 8u, 1u}) {
            ExperimentConfig cfg = parse_config(job.doc);
            cfg.threads = t;
            outputs.push_back(execute(cfg).artifact);
        }
        const bool same = outputs[0] == outputs[1] && outputs[0] == outputs[2];
        ok = ok && same;
        d << job.name << (same ? ":identical " : ":DIFFERS ");
    }
    return {ok, d.str()};
}

}  // namespace

int main() {
    struct Criterion {
        const char* id;
        const char* title;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"AC1", "multiplexing-gain saturation", 1.0, ac1_prelog_saturation},
        {"AC2", "Wishart log-det expectation", 60.0, ac2_wishart},
        {"AC3", "high-SNR sandwich at r = K'", 600.0, ac3_sandwich},
        {"AC4", "rate-gap constant", 600.0, ac4_rate_gap},
        {"AC5", "figure 4 orderings", 1200.0, ac5_figure4},
        {"AC6", "figure 7 gap trend", 2700.0, ac6_figure7},
        {"AC7", "Szego convergence", 120.0, ac7_szego},
        {"AC8", "system II argmax certificate", 10.0, ac8_system2},
        {"AC9", "TDD DoF optimizer", 5.0, ac9_tdd},
        {"AC10", "determinism across threads", std::numeric_limits<double>::infinity(), ac10_determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = secs <= c.budget_s;
        const bool pass = o.passed && in_budget;
        failed += pass ? 0 : 1;
        std::printf("[%s] %s %s: %s (%.2fs%s)\n", pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), secs,
                    in_budget ? "" : ", over budget");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
