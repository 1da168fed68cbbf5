#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corrbc/covariance.hpp"

namespace corrbc {

enum class StructureKind { ideal_unitary, tall_unitary, one_ring_approximate };

const char* to_string(StructureKind kind);

// How the group bases were produced, so a system can be rebuilt from spectra alone.
struct GroupGenerator {
    std::string kind = "dft";  // "dft" or "one-ring"
    std::vector<OneRingGeometry> geometries;
    double truncation = kDefaultTruncation;
};

struct GroupedSystem {
    int m = 0;
    int users_per_group = 1;
    StructureKind kind = StructureKind::ideal_unitary;
    std::vector<EigenStructure> groups;
    GroupGenerator generator;

    int group_count() const { return static_cast<int>(groups.size()); }
    int total_users() const { return users_per_group * group_count(); }
};

struct SystemParams {
    int m = 1;
    int k = 1;
    int g = 1;
    int r = 1;
    int kp = 1;
    int tc = 1;
    double p = 1.0;

    // Symmetric configuration: r = M/G, K' = K/G.
    static SystemParams symmetric(int m, int k, int g, int tc, double p);
    void validate() const;
    double mu() const { return static_cast<double>(m) / k; }
    int m_star() const;
    double nu() const;
};

// Unitary DFT: F(p, q) = exp(-j 2 pi p q / M) / sqrt(M).
Eigen::MatrixXcd unitary_dft(int m);

GroupedSystem build_unitary_structure(int m, const std::vector<std::vector<double>>& spectra,
                                      int users_per_group = 1);

// G groups of rank M/G with every eigenvalue equal to G.
GroupedSystem flat_symmetric_system(int m, int g, int users_per_group);

GroupedSystem one_ring_structure(const std::vector<OneRingGeometry>& geometries, int users_per_group,
                                 double truncation = kDefaultTruncation);

int diversity_degrees(std::span<const int> group_counts);

// max over g != h of ||U_g^H U_h||_2.
double orthogonality_defect(const GroupedSystem& gs);

// max entry of |[U_1 .. U_G]^H [U_1 .. U_G] - I|.
double stacked_orthonormality_residual(const GroupedSystem& gs);

// H_g^eff = U_g^H H_g.
std::vector<Eigen::MatrixXcd> effective_channels(const GroupedSystem& gs, const std::vector<Eigen::MatrixXcd>& raw);

}  // namespace corrbc
