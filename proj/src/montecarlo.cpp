#include "corrbc/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

#include "corrbc/covariance.hpp"
#include "corrbc/rng.hpp"

namespace corrbc {

namespace {

struct TrialRates {
    std::vector<double> rates;  // flattened per dataset layout
    std::size_t nonconverged = 0;
    std::vector<std::uint8_t> flags;  // per rate, 1 if the solver hit max_iterations
};

double solve(const std::vector<Eigen::MatrixXcd>& channels, double p, const DualMacOptions& opts,
             std::size_t& nonconverged) {
    const DualMacResult r = dual_mac_sum_capacity(channels, p, opts);
    if (!r.converged) {
        ++nonconverged;
    }
    return r.sum_rate_bits;
}

Eigen::MatrixXcd keep_columns(const Eigen::MatrixXcd& h, const std::vector<int>& cols) {
    Eigen::MatrixXcd out(h.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        out.col(static_cast<Eigen::Index>(j)) = h.col(cols[j]);
    }
    return out;
}

Eigen::MatrixXcd iid_channel(int m, int k, RngStream& stream) {
    Eigen::MatrixXcd h(m, k);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < m; ++i) {
            h(i, j) = stream.complex_normal();
        }
    }
    return h;
}

// Each user gets an independent one-ring covariance with uniform AoD and spread.
Eigen::MatrixXcd one_ring_channel(int m, int k, double theta_lo, double theta_hi, double delta_lo, double delta_hi,
                                  double spacing, RngStream& stream) {
    Eigen::MatrixXcd h(m, k);
    for (int j = 0; j < k; ++j) {
        OneRingGeometry geom;
        geom.theta = deg_to_rad(stream.uniform(theta_lo, theta_hi));
        geom.delta = deg_to_rad(stream.uniform(delta_lo, delta_hi));
        geom.spacing = spacing;
        geom.antennas = m;
        const EigenStructure es = eigen_decompose(one_ring_correlation(geom));
        h.col(j) = sample_channel(es, 1, stream);
    }
    return h;
}

std::string range_label(double lo, double hi) { return format_number(lo) + "-" + format_number(hi); }

}  // namespace

void MonteCarloConfig::validate() const {
    if (trials < 1) {
        throw std::invalid_argument("MonteCarloConfig: trials must be >= 1");
    }
    if (!(convergence_tol > 0.0)) {
        throw std::invalid_argument("MonteCarloConfig: convergence_tol must be positive");
    }
    if (max_iterations < 1) {
        throw std::invalid_argument("MonteCarloConfig: max_iterations must be >= 1");
    }
    if (selection_size < 0) {
        throw std::invalid_argument("MonteCarloConfig: selection_size must be >= 0");
    }
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

CapacitySample summarize(const std::vector<double>& values, std::size_t nonconverged) {
    CapacitySample s;
    s.trials_used = values.size();
    s.nonconverged = nonconverged;
    if (values.empty()) {
        return s;
    }
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        const double t = sum + v;
        carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    const double n = static_cast<double>(values.size());
    s.mean_bits = (sum + carry) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - s.mean_bits) * (v - s.mean_bits);
        }
        s.std_error_bits = std::sqrt(ss / (n - 1.0) / n);
    }
    return s;
}

std::vector<CapacitySample> ergodic_sum_capacity_grid(const GroupedSystem& gs, const MonteCarloConfig& cfg,
                                                      const std::vector<double>& p_values, ChannelView view) {
    cfg.validate();
    if (gs.groups.empty()) {
        throw std::invalid_argument("ergodic_sum_capacity: system has no groups");
    }
    const DualMacOptions opts = cfg.solver_options();
    const RngStream root(cfg.seed);
    std::vector<TrialRates> per_trial(cfg.trials);

    parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
        RngStream stream = root.substream(t);
        std::vector<Eigen::MatrixXcd> raw;
        raw.reserve(gs.groups.size());
        for (const auto& group : gs.groups) {
            raw.push_back(sample_channel(group, gs.users_per_group, stream));
        }
        std::vector<Eigen::MatrixXcd> channels;
        if (view == ChannelView::effective) {
            channels = effective_channels(gs, raw);
        } else {
            Eigen::MatrixXcd all(gs.m, gs.total_users());
            for (std::size_t g = 0; g < raw.size(); ++g) {
                all.middleCols(static_cast<Eigen::Index>(g) * gs.users_per_group, gs.users_per_group) = raw[g];
            }
            channels.push_back(std::move(all));
        }
        if (cfg.selection_size > 0) {
            for (auto& h : channels) {
                h = keep_columns(h, select_strongest_users(h, cfg.selection_size));
            }
        }
        TrialRates& out = per_trial[t];
        for (double p : p_values) {
            const std::size_t before = out.nonconverged;
            out.rates.push_back(solve(channels, p, opts, out.nonconverged));
            out.flags.push_back(out.nonconverged != before ? 1 : 0);
        }
    });

    std::vector<CapacitySample> samples;
    for (std::size_t i = 0; i < p_values.size(); ++i) {
        std::vector<double> values(cfg.trials);
        std::size_t nonconverged = 0;
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            values[t] = per_trial[t].rates[i];
            nonconverged += per_trial[t].flags[i];
        }
        samples.push_back(summarize(values, nonconverged));
    }
    return samples;
}

CapacitySample ergodic_sum_capacity(const GroupedSystem& gs, const MonteCarloConfig& cfg, double p, ChannelView view) {
    return ergodic_sum_capacity_grid(gs, cfg, {p}, view).front();
}

DatasetResult figure4_dataset(const MonteCarloConfig& cfg, const Figure4Setup& setup) {
    cfg.validate();
    if (cfg.snr_grid_db.empty()) {
        throw std::invalid_argument("figure4_dataset: empty SNR grid");
    }
    const DualMacOptions opts = cfg.solver_options();
    const RngStream root(cfg.seed);
    const int m = setup.antennas;
    const std::size_t n_snr = cfg.snr_grid_db.size();

    DatasetResult result;
    result.table.columns = {"snr_db", "k", "m", "variant", "mean_bits", "stderr_bits", "trials"};
    for (int k : setup.users) {
        // Layout per trial: [snr][variant] with variant 0 = iid, 1 = correlated.
        std::vector<TrialRates> per_trial(cfg.trials);
        const RngStream k_root = root.substream(static_cast<std::uint64_t>(k));
        parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
            const RngStream trial = k_root.substream(t);
            RngStream iid_stream = trial.substream(0);
            RngStream corr_stream = trial.substream(1);
            std::vector<Eigen::MatrixXcd> iid{iid_channel(m, k, iid_stream)};
            std::vector<Eigen::MatrixXcd> corr{one_ring_channel(m, k, setup.theta_min_deg, setup.theta_max_deg,
                                                                setup.delta_min_deg, setup.delta_max_deg,
                                                                setup.spacing, corr_stream)};
            if (cfg.selection_size > 0) {
                iid[0] = keep_columns(iid[0], select_strongest_users(iid[0], cfg.selection_size));
                corr[0] = keep_columns(corr[0], select_strongest_users(corr[0], cfg.selection_size));
            }
            TrialRates& out = per_trial[t];
            for (double snr : cfg.snr_grid_db) {
                const double p = db_to_linear(snr);
                out.rates.push_back(solve(iid, p, opts, out.nonconverged));
                out.rates.push_back(solve(corr, p, opts, out.nonconverged));
            }
        });
        for (const auto& tr : per_trial) {
            result.nonconverged += tr.nonconverged;
        }
        for (std::size_t s = 0; s < n_snr; ++s) {
            for (int v = 0; v < 2; ++v) {
                std::vector<double> values(cfg.trials);
                for (std::size_t t = 0; t < cfg.trials; ++t) {
                    values[t] = per_trial[t].rates[2 * s + static_cast<std::size_t>(v)];
                }
                const CapacitySample cs = summarize(values);
                result.table.add_row({cfg.snr_grid_db[s], static_cast<std::int64_t>(k), static_cast<std::int64_t>(m),
                                      std::string(v == 0 ? "iid" : "correlated"), cs.mean_bits, cs.std_error_bits,
                                      static_cast<std::int64_t>(cs.trials_used)});
            }
        }
    }
    return result;
}

DatasetResult figure7_dataset(const MonteCarloConfig& cfg, const Figure7Setup& setup) {
    cfg.validate();
    const DualMacOptions opts = cfg.solver_options();
    const RngStream root(cfg.seed);
    const double p = db_to_linear(setup.snr_db);

    DatasetResult result;
    result.table.columns = {"k", "m", "delta_range", "variant", "mean_bits", "stderr_bits"};
    for (int m : setup.antennas) {
        const int selection = setup.selection_factor > 0 ? setup.selection_factor * m : 0;
        for (std::size_t d = 0; d < setup.delta_ranges_deg.size(); ++d) {
            const auto [delta_lo, delta_hi] = setup.delta_ranges_deg[d];
            for (int k : setup.users) {
                std::vector<TrialRates> per_trial(cfg.trials);
                // iid draws are keyed by (M, K) only, so every spread range sees the same baseline.
                const RngStream iid_root = root.substream(static_cast<std::uint64_t>(m)).substream(static_cast<std::uint64_t>(k));
                const RngStream corr_root = iid_root.substream(1000 + d);
                parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
                    RngStream iid_stream = iid_root.substream(t);
                    RngStream corr_stream = corr_root.substream(t);
                    Eigen::MatrixXcd iid = iid_channel(m, k, iid_stream);
                    Eigen::MatrixXcd corr = one_ring_channel(m, k, setup.theta_min_deg, setup.theta_max_deg, delta_lo,
                                                             delta_hi, setup.spacing, corr_stream);
                    if (selection > 0) {
                        iid = keep_columns(iid, select_strongest_users(iid, selection));
                        corr = keep_columns(corr, select_strongest_users(corr, selection));
                    }
                    TrialRates& out = per_trial[t];
                    out.rates.push_back(solve({iid}, p, opts, out.nonconverged));
                    out.rates.push_back(solve({corr}, p, opts, out.nonconverged));
                });
                std::vector<double> iid_values(cfg.trials);
                std::vector<double> corr_values(cfg.trials);
                std::vector<double> gap_values(cfg.trials);
                for (std::size_t t = 0; t < cfg.trials; ++t) {
                    iid_values[t] = per_trial[t].rates[0];
                    corr_values[t] = per_trial[t].rates[1];
                    gap_values[t] = corr_values[t] - iid_values[t];
                    result.nonconverged += per_trial[t].nonconverged;
                }
                const std::string label = range_label(delta_lo, delta_hi);
                const std::pair<const char*, const std::vector<double>*> variants[] = {
                    {"iid", &iid_values}, {"correlated", &corr_values}, {"gap", &gap_values}};
                for (const auto& [name, values] : variants) {
                    const CapacitySample cs = summarize(*values);
                    result.table.add_row({static_cast<std::int64_t>(k), static_cast<std::int64_t>(m), label,
                                          std::string(name), cs.mean_bits, cs.std_error_bits});
                }
            }
        }
    }
    return result;
}

}  // namespace corrbc
