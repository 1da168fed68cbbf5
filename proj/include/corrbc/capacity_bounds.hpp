#pragma once

#include <vector>

#include "corrbc/grouping.hpp"
#include "corrbc/numerics.hpp"

namespace corrbc {

enum class Regime {
    r_lt_Kp,
    r_ge_Kp,
    large_system_mu_lt_1,
    large_system_mu_ge_1,
    large_r,
    large_K,
    iid_baseline,
    partial_coop,
};

const char* to_string(Regime regime);

// value_bits is the expression with the additive constant set to zero;
// bracket is the admissible range of that constant.
struct CapacityResult {
    double value_bits = 0.0;
    Interval bracket;
    Regime regime = Regime::iid_baseline;
    bool per_dimension = false;

    double lower() const { return value_bits + bracket.lo; }
    double upper() const { return value_bits + bracket.hi; }
};

using Spectra = std::vector<std::vector<double>>;

// yG(-gamma + sum_{l=2}^{x} 1/l + ((x-y)/y) sum_{l=x-y+1}^{x} 1/l) log2(e).
double kappa(int x, int y, int g);

CapacityResult highsnr_sum_capacity(const SystemParams& params, const Spectra& spectra, double p);

CapacityResult iid_baseline(int m, int k, double p);

double rate_gap_equal_eigen(int m, int g);

CapacityResult large_system_ratio(double mu, double p, double lambda_min, int g, bool iid);

enum class CoopMode { no_coop, partial_coop };

CapacityResult large_K_scaling(int m, int k, double p, const Spectra& spectra, CoopMode mode);

// E[ln det(W^H Lambda W)] for r x K' W with iid CN(0,1) entries, distinct eigenvalues.
double vandermonde_expected_logdet(const std::vector<double>& spectrum, int kp);

// Sum over groups with K = G K' users.
double vandermonde_highsnr(double p, const Spectra& spectra, int kp);
double vandermonde_highsnr(double p, const std::vector<double>& spectrum, int kp);

}  // namespace corrbc
