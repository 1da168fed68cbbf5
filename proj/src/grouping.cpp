#include "corrbc/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "corrbc/errors.hpp"

namespace corrbc {

const char* to_string(StructureKind kind) {
    switch (kind) {
        case StructureKind::ideal_unitary:
            return "ideal-unitary";
        case StructureKind::tall_unitary:
            return "tall-unitary";
        case StructureKind::one_ring_approximate:
            return "one-ring-approximate";
    }
    return "unknown";
}

SystemParams SystemParams::symmetric(int m, int k, int g, int tc, double p) {
    SystemParams s;
    s.m = m;
    s.k = k;
    s.g = g;
    s.tc = tc;
    s.p = p;
    if (g < 1 || m % g != 0 || k % g != 0) {
        throw std::invalid_argument("SystemParams: G must divide M and K");
    }
    s.r = m / g;
    s.kp = k / g;
    s.validate();
    return s;
}

void SystemParams::validate() const {
    if (m < 1 || k < 1 || g < 1 || r < 1 || kp < 1 || tc < 1) {
        throw std::invalid_argument("SystemParams: integer parameters must be positive");
    }
    if (!(p > 0.0)) {
        throw std::invalid_argument("SystemParams: P must be positive");
    }
}

int SystemParams::m_star() const {
    const long half = static_cast<long>(tc) * g / 2;
    return static_cast<int>(std::min<long>({m, k, half}));
}

double SystemParams::nu() const { return static_cast<double>(m_star()) / (static_cast<double>(tc) * g); }

Eigen::MatrixXcd unitary_dft(int m) {
    if (m < 1) {
        throw std::invalid_argument("unitary_dft: M must be >= 1");
    }
    Eigen::MatrixXcd f(m, m);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    const double two_pi = 6.283185307179586476925;
    for (int p = 0; p < m; ++p) {
        for (int q = 0; q < m; ++q) {
            // Reduce p*q mod M first so the phase stays exact for large M.
            const double phase = -two_pi * static_cast<double>((static_cast<long>(p) * q) % m) / m;
            f(p, q) = std::polar(scale, phase);
        }
    }
    return f;
}

GroupedSystem build_unitary_structure(int m, const std::vector<std::vector<double>>& spectra, int users_per_group) {
    if (spectra.empty()) {
        throw std::invalid_argument("build_unitary_structure: at least one group required");
    }
    if (users_per_group < 1) {
        throw std::invalid_argument("build_unitary_structure: users_per_group must be >= 1");
    }
    long total_rank = 0;
    for (const auto& s : spectra) {
        if (s.empty()) {
            throw std::invalid_argument("build_unitary_structure: empty spectrum");
        }
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!(s[i] > 0.0) || (i > 0 && s[i] > s[i - 1])) {
                throw std::invalid_argument("build_unitary_structure: spectra must be positive and descending");
            }
        }
        const double sum = std::accumulate(s.begin(), s.end(), 0.0);
        if (std::abs(sum - m) > 1e-9 * m) {
            throw std::invalid_argument("build_unitary_structure: each spectrum must sum to M");
        }
        total_rank += static_cast<long>(s.size());
    }
    if (total_rank > m) {
        throw InfeasibleStructureError("build_unitary_structure: sum of group ranks exceeds M");
    }

    const Eigen::MatrixXcd f = unitary_dft(m);
    GroupedSystem gs;
    gs.m = m;
    gs.users_per_group = users_per_group;
    gs.kind = total_rank == m ? StructureKind::ideal_unitary : StructureKind::tall_unitary;
    gs.generator.kind = "dft";
    int offset = 0;
    for (const auto& s : spectra) {
        const int r = static_cast<int>(s.size());
        EigenStructure es;
        es.basis = f.middleCols(offset, r);
        es.eigenvalues = Eigen::Map<const Eigen::VectorXd>(s.data(), r);
        gs.groups.push_back(std::move(es));
        offset += r;
    }
    return gs;
}

GroupedSystem flat_symmetric_system(int m, int g, int users_per_group) {
    if (g < 1 || m % g != 0) {
        throw std::invalid_argument("flat_symmetric_system: G must divide M");
    }
    const std::vector<double> flat(static_cast<std::size_t>(m / g), static_cast<double>(g));
    return build_unitary_structure(m, std::vector<std::vector<double>>(static_cast<std::size_t>(g), flat),
                                   users_per_group);
}

GroupedSystem one_ring_structure(const std::vector<OneRingGeometry>& geometries, int users_per_group,
                                 double truncation) {
    if (geometries.empty()) {
        throw std::invalid_argument("one_ring_structure: at least one geometry required");
    }
    GroupedSystem gs;
    gs.m = geometries.front().antennas;
    gs.users_per_group = users_per_group;
    gs.kind = StructureKind::one_ring_approximate;
    gs.generator.kind = "one-ring";
    gs.generator.geometries = geometries;
    gs.generator.truncation = truncation;
    for (const auto& geom : geometries) {
        if (geom.antennas != gs.m) {
            throw std::invalid_argument("one_ring_structure: all groups must share M");
        }
        gs.groups.push_back(eigen_decompose(one_ring_correlation(geom), truncation));
    }
    return gs;
}

int diversity_degrees(std::span<const int> group_counts) {
    if (group_counts.empty()) {
        throw std::invalid_argument("diversity_degrees: empty class list");
    }
    long sum = 0;
    for (int g : group_counts) {
        if (g < 1) {
            throw std::invalid_argument("diversity_degrees: group counts must be positive");
        }
        sum += g;
    }
    return static_cast<int>(sum / static_cast<long>(group_counts.size()));
}

double orthogonality_defect(const GroupedSystem& gs) {
    double worst = 0.0;
    for (int a = 0; a < gs.group_count(); ++a) {
        for (int b = a + 1; b < gs.group_count(); ++b) {
            const Eigen::MatrixXcd cross = gs.groups[a].basis.adjoint() * gs.groups[b].basis;
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cross);
            if (svd.singularValues().size() > 0) {
                worst = std::max(worst, svd.singularValues()(0));
            }
        }
    }
    return worst;
}

double stacked_orthonormality_residual(const GroupedSystem& gs) {
    Eigen::Index cols = 0;
    for (const auto& g : gs.groups) {
        cols += g.basis.cols();
    }
    Eigen::MatrixXcd stacked(gs.m, cols);
    Eigen::Index offset = 0;
    for (const auto& g : gs.groups) {
        stacked.middleCols(offset, g.basis.cols()) = g.basis;
        offset += g.basis.cols();
    }
    const Eigen::MatrixXcd gram = stacked.adjoint() * stacked - Eigen::MatrixXcd::Identity(cols, cols);
    return gram.cwiseAbs().maxCoeff();
}

std::vector<Eigen::MatrixXcd> effective_channels(const GroupedSystem& gs, const std::vector<Eigen::MatrixXcd>& raw) {
    if (raw.size() != gs.groups.size()) {
        throw std::invalid_argument("effective_channels: one channel matrix per group required");
    }
    std::vector<Eigen::MatrixXcd> out;
    out.reserve(raw.size());
    for (std::size_t g = 0; g < raw.size(); ++g) {
        if (raw[g].rows() != gs.m) {
            throw std::invalid_argument("effective_channels: channel row count must equal M");
        }
        out.push_back(gs.groups[g].basis.adjoint() * raw[g]);
    }
    return out;
}

}  // namespace corrbc
