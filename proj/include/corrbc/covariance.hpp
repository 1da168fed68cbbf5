#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "corrbc/rng.hpp"

namespace corrbc {

inline constexpr double kDefaultTruncation = 1e-8;
inline constexpr double kBandEdgeDelta = 1e-12;

// Angles in radians, spacing in wavelengths.
struct OneRingGeometry {
    double theta = 0.0;
    double delta = 0.0;
    double spacing = 0.5;
    int antennas = 1;

    void validate() const;
};

double deg_to_rad(double degrees);

struct CorrelationMatrix {
    Eigen::MatrixXcd entries;
    double trace_target = 0.0;

    int m() const { return static_cast<int>(entries.rows()); }
    // First column: lag n = p - q for n = 0..M-1.
    std::vector<std::complex<double>> lags() const;
    static CorrelationMatrix from_lags(const std::vector<std::complex<double>>& lags);
};

struct EigenStructure {
    Eigen::MatrixXcd basis;       // M x r, orthonormal columns
    Eigen::VectorXd eigenvalues;  // descending, positive, sum M

    int m() const { return static_cast<int>(basis.rows()); }
    int effective_rank() const { return static_cast<int>(eigenvalues.size()); }
    double condition() const { return eigenvalues(0) / eigenvalues(eigenvalues.size() - 1); }
};

std::vector<std::complex<double>> one_ring_lags(const OneRingGeometry& geom, double tol = 1e-10);

CorrelationMatrix one_ring_correlation(const OneRingGeometry& geom, double tol = 1e-10);

// Hermitian eigendecomposition keeping lambda_i > truncation * lambda_1,
// rescaled so the kept eigenvalues sum to M.
EigenStructure eigen_decompose(const CorrelationMatrix& r, double truncation = kDefaultTruncation);

// Full descending spectrum without truncation or rescaling.
Eigen::VectorXd hermitian_spectrum(const Eigen::MatrixXcd& a);

double szego_spectrum(const OneRingGeometry& geom, double xi);

// Length of the set where S > 0; defined for spacing <= 1/2 only.
double szego_support_measure(const OneRingGeometry& geom);

// Integral of S over [-1/2, 1/2].
double szego_total_mass(const OneRingGeometry& geom);

// Integral of ln S over the support of S, in nats.
double szego_logdet_rate(const OneRingGeometry& geom);

// Number of eigenvalues attributed to the support: round(measure * M).
int support_rank(const OneRingGeometry& geom);

// (1/M) * sum of ln of the leading `count` eigenvalues.
double leading_logdet_rate(const EigenStructure& es, int count);

// Number of eigenvalues >= fraction * lambda_1.
int dominant_rank(const EigenStructure& es, double fraction = 0.5);

// Lower bound on ln|Lambda| for r eigenvalues >= lambda_min summing to M.
double bai_logdet_lower(double lambda_min, int m, int r, int g);

// Columns U Lambda^{1/2} w with w ~ CN(0, I_r); draws consume `stream`.
Eigen::MatrixXcd sample_channel(const EigenStructure& es, int users, RngStream& stream);

}  // namespace corrbc
