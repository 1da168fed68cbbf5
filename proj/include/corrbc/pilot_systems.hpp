#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "corrbc/capacity_bounds.hpp"
#include "corrbc/grouping.hpp"
#include "corrbc/table.hpp"

namespace corrbc {

struct PilotSystemResult {
    int m_star = 0;
    double prelog = 0.0;
    int m_p2_star = 0;
    std::vector<std::pair<int, double>> f_curve;
    std::string regime;
    bool degenerate = false;       // system II collapsed to system I (M <= K)
    double ratio_p2_bits = 0.0;    // per-K ratio at M_p2*, constant term 0
    double ratio_p2_upper_bits = 0.0;  // same with the constant at its upper end log2(mu_p2)
};

struct ExactPrelog {
    std::int64_t numerator = 0;  // prelog = numerator / denominator
    std::int64_t denominator = 1;
};

// M* = min(M, K, floor(Tc G / 2)), prelog M* (1 - M*/(Tc G)); G forced to 1 when uncorrelated.
PilotSystemResult optimal_antennas(int m, int k, int tc, int g, bool correlated);
ExactPrelog optimal_prelog_exact(int m, int k, int tc, int g);

// Columns: min_mk,tc,g,prelog (M = K = min_mk).
Table figure1_dataset(const std::vector<int>& tc_list = {32, 100}, const std::vector<int>& g_list = {1, 4, 8},
                      const std::vector<int>& min_mk_grid = {});

enum class Pilot1Regime { large_G, large_r };

CapacityResult system1_rate_ratio(const SystemParams& params, Pilot1Regime regime, double p, double lambda_min,
                                  double zeta);

// M* (Tc - ceil(Q/G)) [log2((P/e)(Q/K)) + (Q/K - 1) log2(Q/(Q-K)) + log2(Q/K)]; -inf for Q < K.
double system2_objective(int m, int k, int tc, int g, double p, int q);

PilotSystemResult system2_optimize(int m, int k, int tc, int g, double p);

// Columns: q,f_q,is_optimal
Table figure3_dataset(int m = 200, int k = 40, int tc = 64, int g = 10, double p = 30.0);

// Columns: min_mk,tc,system,rate_bits; K = min_mk, M = mu K.
Table figure5_dataset(double mu = 2.0, int g = 10, double p = 30.0, const std::vector<int>& tc_list = {32, 128},
                      const std::vector<int>& min_mk_grid = {});

// M* (1 - M* T/(Tc G)) with M* = min(M, K, floor(Tc G/(2T))); 0 if Tc G < 2T.
double multiclass_prelog(int m, int k, int tc, int g, int t);

struct TddConfig {
    double alpha = 10.0;
    std::int64_t tc = 40;
    std::int64_t n1 = 12;
    std::int64_t n2 = 4;
    double n_lln = 1000.0;

    void validate() const;
};

// DoF-optimal number of scheduled users in [1, K]; above_lln selects the shared per-user pilot model.
std::int64_t tdd_optimal_users(std::int64_t k, const TddConfig& cfg, bool above_lln);
double tdd_dof(std::int64_t q, const TddConfig& cfg, bool above_lln);

struct TddLimits {
    Table table;  // Columns: k,regime,dof
    double saturation_start = 0.0;
    double lln_entry = 0.0;
    double post_lln_ceiling = 0.0;
    bool ordering_ok = false;
};

TddLimits tdd_limits(const std::vector<std::int64_t>& k_grid, const TddConfig& cfg);

}  // namespace corrbc
