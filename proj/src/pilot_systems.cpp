#include "corrbc/pilot_systems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "corrbc/numerics.hpp"

namespace corrbc {

namespace {

constexpr double kE = 2.718281828459045235;

void require_positive(std::initializer_list<long> values, const char* what) {
    for (long v : values) {
        if (v < 1) {
            throw std::invalid_argument(std::string(what) + ": integer parameters must be positive");
        }
    }
}

int m_star_of(int m, int k, int tc, int g) {
    return static_cast<int>(std::min<long>({m, k, static_cast<long>(tc) * g / 2}));
}

double ratio_tail_above(double mu) { return mu <= 1.0 ? 0.0 : (mu - 1.0) * std::log2(mu / (mu - 1.0)); }

double ratio_tail_below(double mu) { return mu >= 1.0 ? 0.0 : (1.0 - mu) / mu * -std::log2(1.0 - mu); }

std::vector<int> range_grid(int lo, int hi, int step) {
    std::vector<int> out;
    for (int x = lo; x <= hi; x += step) {
        out.push_back(x);
    }
    return out;
}

// Integer maximizer in [1, K] of Q (a - b Q), ties to the smaller Q.
std::int64_t concave_integer_argmax(__int128 a, __int128 b, std::int64_t k) {
    auto value = [&](__int128 q) { return q * (a - b * q); };
    const __int128 q0 = std::min<__int128>(a / (2 * b), k);
    __int128 best = std::max<__int128>(q0, 1);
    if (q0 + 1 <= k && value(q0 + 1) > value(best)) {
        best = q0 + 1;
    }
    return static_cast<std::int64_t>(best);
}

}  // namespace

PilotSystemResult optimal_antennas(int m, int k, int tc, int g, bool correlated) {
    require_positive({m, k, tc, g}, "optimal_antennas");
    const int groups = correlated ? g : 1;
    const ExactPrelog exact = optimal_prelog_exact(m, k, tc, groups);
    PilotSystemResult res;
    res.m_star = m_star_of(m, k, tc, groups);
    res.prelog = static_cast<double>(exact.numerator) / static_cast<double>(exact.denominator);
    res.m_p2_star = res.m_star;
    res.regime = correlated ? "correlated" : "iid";
    return res;
}

ExactPrelog optimal_prelog_exact(int m, int k, int tc, int g) {
    require_positive({m, k, tc, g}, "optimal_prelog_exact");
    const std::int64_t ms = m_star_of(m, k, tc, g);
    const std::int64_t tg = static_cast<std::int64_t>(tc) * g;
    std::int64_t num = ms * (tg - ms);
    std::int64_t den = tg;
    const std::int64_t d = std::gcd(num, den);
    if (d > 1) {
        num /= d;
        den /= d;
    }
    return {num, den};
}

Table figure1_dataset(const std::vector<int>& tc_list, const std::vector<int>& g_list,
                      const std::vector<int>& min_mk_grid) {
    const std::vector<int> grid = min_mk_grid.empty() ? range_grid(1, 400, 1) : min_mk_grid;
    Table t;
    t.columns = {"min_mk", "tc", "g", "prelog"};
    for (int tc : tc_list) {
        for (int g : g_list) {
            for (int x : grid) {
                const auto r = optimal_antennas(x, x, tc, g, g > 1);
                t.add_row({static_cast<std::int64_t>(x), static_cast<std::int64_t>(tc), static_cast<std::int64_t>(g),
                           r.prelog});
            }
        }
    }
    return t;
}

CapacityResult system1_rate_ratio(const SystemParams& params, Pilot1Regime regime, double p, double lambda_min,
                                  double zeta) {
    params.validate();
    if (!(p > 0.0)) {
        throw std::invalid_argument("system1_rate_ratio: P must be positive");
    }
    const int ms = params.m_star();
    const double nu = params.nu();
    if (nu > 1.0) {
        throw std::invalid_argument("system1_rate_ratio: nu exceeds 1");
    }
    const double mu = params.mu();
    if (ms < 1) {
        throw std::invalid_argument("system1_rate_ratio: Tc G < 2 leaves no symbols for training");
    }
    const double mu_p1 = static_cast<double>(ms) / params.k;
    CapacityResult res;
    res.per_dimension = true;

    if (regime == Pilot1Regime::large_r) {
        if (mu_p1 > 1.0) {
            throw std::invalid_argument("system1_rate_ratio: mu_p1 > 1 outside the large-r regime");
        }
        if (!(lambda_min > 0.0)) {
            throw std::invalid_argument("system1_rate_ratio: lambda_min must be positive");
        }
        res.value_bits = std::log2(p / (kE * mu_p1)) + ratio_tail_below(mu_p1);
        res.bracket = {std::log2(mu_p1 * lambda_min / params.g), 0.0};
        res.regime = Regime::large_r;
    } else {
        if (ms % params.g != 0 || params.k % params.g != 0) {
            throw std::invalid_argument("system1_rate_ratio: large-G regime needs G to divide M* and K");
        }
        if (!(zeta >= 1.0)) {
            throw std::invalid_argument("system1_rate_ratio: zeta must be >= 1");
        }
        const int r_p1 = ms / params.g;
        const int kp = params.k / params.g;
        const double h_kp = harmonic_exact(kp);
        double nats = -kEulerGamma + (h_kp - 1.0);
        if (mu < 1.0) {
            // Lower summation limit (1 - mu_p1) K' + 1 = K' - r_p1 + 1.
            nats += (1.0 - mu_p1) / mu_p1 * (h_kp - harmonic_exact(kp - r_p1));
            res.bracket = {std::log2(mu / zeta), 0.0};
            res.regime = Regime::large_system_mu_lt_1;
        } else {
            res.bracket = {-std::log2(zeta), std::log2(mu)};
            res.regime = Regime::large_system_mu_ge_1;
        }
        res.value_bits = std::log2(p / r_p1) + kLog2E * nats;
    }
    const double scale = 1.0 - nu;
    res.value_bits *= scale;
    res.bracket.lo *= scale;
    res.bracket.hi *= scale;
    return res;
}

double system2_objective(int m, int k, int tc, int g, double p, int q) {
    require_positive({m, k, tc, g, q}, "system2_objective");
    if (q < k) {
        return -std::numeric_limits<double>::infinity();
    }
    const double ms = m_star_of(m, k, tc, g);
    const double mu_q = static_cast<double>(q) / k;
    const long training = (static_cast<long>(q) + g - 1) / g;
    const double bracket = std::log2(p / kE * mu_q) + ratio_tail_above(mu_q) + std::log2(mu_q);
    return ms * static_cast<double>(tc - training) * bracket;
}

PilotSystemResult system2_optimize(int m, int k, int tc, int g, double p) {
    require_positive({m, k, tc, g}, "system2_optimize");
    if (!(p > 0.0)) {
        throw std::invalid_argument("system2_optimize: P must be positive");
    }
    PilotSystemResult res = optimal_antennas(m, k, tc, g, true);
    res.regime = "system2";
    if (m <= k) {
        res.degenerate = true;
        res.m_p2_star = res.m_star;
        return res;
    }
    double best = -std::numeric_limits<double>::infinity();
    int arg = res.m_star;
    for (int q = res.m_star; q <= m; ++q) {
        const double f = system2_objective(m, k, tc, g, p, q);
        res.f_curve.emplace_back(q, f);
        if (f > best) {
            best = f;
            arg = q;
        }
    }
    res.m_p2_star = arg;
    const double mu_p2 = static_cast<double>(arg) / k;
    const double nu_p2 = static_cast<double>(arg) / (static_cast<double>(tc) * g);
    res.ratio_p2_bits = (1.0 - nu_p2) * (std::log2(mu_p2 * p / kE) + ratio_tail_above(mu_p2));
    res.ratio_p2_upper_bits = res.ratio_p2_bits + (1.0 - nu_p2) * std::log2(mu_p2);
    return res;
}

Table figure3_dataset(int m, int k, int tc, int g, double p) {
    const PilotSystemResult r = system2_optimize(m, k, tc, g, p);
    Table t;
    t.columns = {"q", "f_q", "is_optimal"};
    for (const auto& [q, f] : r.f_curve) {
        t.add_row({static_cast<std::int64_t>(q), f, static_cast<std::int64_t>(q == r.m_p2_star ? 1 : 0)});
    }
    return t;
}

Table figure5_dataset(double mu, int g, double p, const std::vector<int>& tc_list, const std::vector<int>& min_mk_grid) {
    if (!(mu > 1.0)) {
        throw std::invalid_argument("figure5_dataset: mu must exceed 1");
    }
    const std::vector<int> grid = min_mk_grid.empty() ? range_grid(10, 160, 10) : min_mk_grid;
    Table t;
    t.columns = {"min_mk", "tc", "system", "rate_bits"};
    for (int tc : tc_list) {
        for (int k : grid) {
            const int m = static_cast<int>(std::lround(mu * k));
            const int ms = m_star_of(m, k, tc, g);
            const double mu_p1 = static_cast<double>(ms) / k;
            const double nu = static_cast<double>(ms) / (static_cast<double>(tc) * g);
            const double rate1 = ms * (1.0 - nu) * (std::log2(p / (kE * mu_p1)) + ratio_tail_below(mu_p1));
            const PilotSystemResult s2 = system2_optimize(m, k, tc, g, p);
            const double rate2 = ms * s2.ratio_p2_upper_bits;
            t.add_row({static_cast<std::int64_t>(k), static_cast<std::int64_t>(tc), std::string("I"), rate1});
            t.add_row({static_cast<std::int64_t>(k), static_cast<std::int64_t>(tc), std::string("II"), rate2});
        }
    }
    return t;
}

double multiclass_prelog(int m, int k, int tc, int g, int t) {
    require_positive({m, k, tc, g, t}, "multiclass_prelog");
    const long tg = static_cast<long>(tc) * g;
    if (tg < 2L * t) {
        return 0.0;
    }
    const long ms = std::min<long>({m, k, tg / (2L * t)});
    return static_cast<double>(ms * (tg - ms * t)) / static_cast<double>(tg);
}

void TddConfig::validate() const {
    if (!(alpha >= 1.0)) {
        throw std::invalid_argument("TddConfig: alpha must be >= 1");
    }
    if (tc < 1 || n2 < 1 || n1 <= n2) {
        throw std::invalid_argument("TddConfig: requires Tc >= 1 and N1 > N2 >= 1");
    }
    if (!(n_lln > 0.0)) {
        throw std::invalid_argument("TddConfig: N_LLN must be positive");
    }
}

std::int64_t tdd_optimal_users(std::int64_t k, const TddConfig& cfg, bool above_lln) {
    cfg.validate();
    if (k < 1) {
        throw std::invalid_argument("tdd_optimal_users: K must be >= 1");
    }
    if (above_lln) {
        // Q (Tc - 1 - Q/N1) = Q ((Tc - 1) N1 - Q) / N1
        return concave_integer_argmax(static_cast<__int128>(cfg.tc - 1) * cfg.n1, 1, k);
    }
    // Q (Tc - Q/N1 - Q/N2) = Q (Tc N1 N2 - (N1 + N2) Q) / (N1 N2)
    return concave_integer_argmax(static_cast<__int128>(cfg.tc) * cfg.n1 * cfg.n2, cfg.n1 + cfg.n2, k);
}

double tdd_dof(std::int64_t q, const TddConfig& cfg, bool above_lln) {
    const double qq = static_cast<double>(q);
    if (above_lln) {
        return qq * (static_cast<double>(cfg.tc) - qq / static_cast<double>(cfg.n1) - 1.0);
    }
    return qq * (static_cast<double>(cfg.tc) - qq / static_cast<double>(cfg.n1) - qq / static_cast<double>(cfg.n2));
}

TddLimits tdd_limits(const std::vector<std::int64_t>& k_grid, const TddConfig& cfg) {
    cfg.validate();
    TddLimits out;
    out.saturation_start = static_cast<double>(cfg.tc) * static_cast<double>(cfg.n1) * static_cast<double>(cfg.n2) /
                           (2.0 * static_cast<double>(cfg.n1 + cfg.n2));
    out.lln_entry = cfg.n_lln / cfg.alpha;
    out.post_lln_ceiling = static_cast<double>(cfg.tc - 1) * static_cast<double>(cfg.n1) / 2.0;
    out.ordering_ok = out.saturation_start < out.lln_entry && out.lln_entry < out.post_lln_ceiling;
    out.table.columns = {"k", "regime", "dof"};
    for (std::int64_t k : k_grid) {
        const bool above = cfg.alpha * static_cast<double>(k) >= cfg.n_lln;
        const std::int64_t q = tdd_optimal_users(k, cfg, above);
        std::string tag = above ? "lln_" : "";
        tag += q == k ? "linear" : "saturated";
        out.table.add_row({k, tag, tdd_dof(q, cfg, above)});
    }
    return out;
}

}  // namespace corrbc
