#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "corrbc/grouping.hpp"
#include "corrbc/table.hpp"

namespace corrbc {

struct DualMacOptions {
    double tolerance_bits = 1e-6;
    int max_iterations = 500;
    bool record_trace = false;
};

struct DualMacResult {
    double sum_rate_bits = 0.0;
    std::vector<Eigen::VectorXd> powers;  // per group, per user
    int iterations = 0;
    bool converged = true;
    double gap_bits = 0.0;  // linearization (Frank-Wolfe) gap at the returned point
    std::vector<double> trace;
};

// max sum_g log2|I + H_g S_g H_g^H| over diagonal S_g >= 0 with sum_g tr S_g <= P.
// Each column of H_g is one single-antenna user.
DualMacResult dual_mac_sum_capacity(const std::vector<Eigen::MatrixXcd>& channels, double p,
                                    const DualMacOptions& options = {});

double dual_mac_objective_bits(const std::vector<Eigen::MatrixXcd>& channels,
                               const std::vector<Eigen::VectorXd>& powers);

// Indices of the `count` columns with the largest norm, ascending index order.
std::vector<int> select_strongest_users(const Eigen::MatrixXcd& h, int count);

struct MonteCarloConfig {
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    std::vector<double> snr_grid_db;
    double convergence_tol = 1e-6;
    int max_iterations = 500;
    unsigned threads = 1;
    int selection_size = 0;  // 0: no pre-selection

    void validate() const;
    DualMacOptions solver_options() const { return {convergence_tol, max_iterations, false}; }
};

struct CapacitySample {
    double mean_bits = 0.0;
    double std_error_bits = 0.0;
    std::size_t trials_used = 0;
    std::size_t nonconverged = 0;
};

// Mean and standard error, summed in index order.
CapacitySample summarize(const std::vector<double>& values, std::size_t nonconverged = 0);

enum class ChannelView { effective, full };

CapacitySample ergodic_sum_capacity(const GroupedSystem& gs, const MonteCarloConfig& cfg, double p,
                                    ChannelView view = ChannelView::effective);

// One sample per P value; channel draws are shared across P.
std::vector<CapacitySample> ergodic_sum_capacity_grid(const GroupedSystem& gs, const MonteCarloConfig& cfg,
                                                      const std::vector<double>& p_values,
                                                      ChannelView view = ChannelView::effective);

double db_to_linear(double db);

struct Figure4Setup {
    int antennas = 8;
    std::vector<int> users{4, 32};
    double theta_min_deg = -60.0;
    double theta_max_deg = 60.0;
    double delta_min_deg = 5.0;
    double delta_max_deg = 10.0;
    double spacing = 0.5;
};

struct Figure7Setup {
    std::vector<int> antennas{4, 8};
    std::vector<int> users{64, 256, 1024, 2048};
    std::vector<std::pair<double, double>> delta_ranges_deg{{2.0, 5.0}, {5.0, 20.0}};
    double snr_db = 10.0;
    double theta_min_deg = -60.0;
    double theta_max_deg = 60.0;
    double spacing = 0.5;
    int selection_factor = 4;  // pre-select selection_factor * M users; 0 disables
};

struct DatasetResult {
    Table table;
    std::size_t nonconverged = 0;
};

// Columns: snr_db,k,m,variant,mean_bits,stderr_bits,trials
DatasetResult figure4_dataset(const MonteCarloConfig& cfg, const Figure4Setup& setup = {});

// Columns: k,m,delta_range,variant,mean_bits,stderr_bits; variants iid, correlated, gap.
DatasetResult figure7_dataset(const MonteCarloConfig& cfg, const Figure7Setup& setup = {});

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index must write
// only its own output slot; the first exception is rethrown after all workers join.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                    next = n;
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace corrbc
