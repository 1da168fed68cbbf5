#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "corrbc/montecarlo.hpp"
#include "corrbc/numerics.hpp"

namespace corrbc {

namespace {

// Objective in nats and, optionally, the gradient d_k = h_k^H A^{-1} h_k.
class DualMacProblem {
public:
    explicit DualMacProblem(const std::vector<Eigen::MatrixXcd>& channels) : channels_(channels) {
        for (const auto& h : channels_) {
            offsets_.push_back(users_);
            users_ += static_cast<int>(h.cols());
        }
    }

    int users() const { return users_; }

    double evaluate(const Eigen::VectorXd& p, Eigen::VectorXd* grad) const {
        double total = 0.0;
        if (grad) {
            grad->resize(users_);
        }
        for (std::size_t g = 0; g < channels_.size(); ++g) {
            const auto& h = channels_[g];
            const Eigen::Index r = h.rows();
            const Eigen::Index k = h.cols();
            if (k == 0 || r == 0) {
                continue;
            }
            const auto pg = p.segment(offsets_[g], k);
            Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(r, r);
            a.noalias() += h * pg.asDiagonal() * h.adjoint();
            Eigen::LLT<Eigen::MatrixXcd> llt(a);
            const auto& l = llt.matrixLLT();
            for (Eigen::Index i = 0; i < r; ++i) {
                total += 2.0 * std::log(l(i, i).real());
            }
            if (grad) {
                const Eigen::MatrixXcd x = llt.matrixL().solve(h);
                grad->segment(offsets_[g], k) = x.colwise().squaredNorm().transpose();
            }
        }
        return total;
    }

    std::vector<Eigen::VectorXd> split(const Eigen::VectorXd& p) const {
        std::vector<Eigen::VectorXd> out;
        for (std::size_t g = 0; g < channels_.size(); ++g) {
            out.emplace_back(p.segment(offsets_[g], channels_[g].cols()));
        }
        return out;
    }

private:
    const std::vector<Eigen::MatrixXcd>& channels_;
    std::vector<int> offsets_;
    int users_ = 0;
};

// Single-user water-filling over interference-free gains with one global level.
Eigen::VectorXd water_fill(const Eigen::VectorXd& gains, double p) {
    const Eigen::Index n = gains.size();
    std::vector<Eigen::Index> order;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (gains(i) > 0.0) {
            order.push_back(i);
        }
    }
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
    if (order.empty()) {
        return q;
    }
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return gains(a) > gains(b); });
    double inv_sum = 0.0;
    double level = 0.0;
    std::size_t active = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        inv_sum += 1.0 / gains(order[i]);
        const double candidate = (p + inv_sum) / static_cast<double>(i + 1);
        if (i + 1 < order.size() && candidate <= 1.0 / gains(order[i + 1])) {
            level = candidate;
            active = i + 1;
            break;
        }
        level = candidate;
        active = i + 1;
    }
    for (std::size_t i = 0; i < active; ++i) {
        q(order[i]) = std::max(0.0, level - 1.0 / gains(order[i]));
    }
    return q;
}

}  // namespace

double dual_mac_objective_bits(const std::vector<Eigen::MatrixXcd>& channels, const std::vector<Eigen::VectorXd>& powers) {
    if (powers.size() != channels.size()) {
        throw std::invalid_argument("dual_mac_objective_bits: one power vector per group required");
    }
    DualMacProblem problem(channels);
    Eigen::VectorXd p(problem.users());
    Eigen::Index offset = 0;
    for (std::size_t g = 0; g < powers.size(); ++g) {
        if (powers[g].size() != channels[g].cols()) {
            throw std::invalid_argument("dual_mac_objective_bits: power vector length mismatch");
        }
        p.segment(offset, powers[g].size()) = powers[g];
        offset += powers[g].size();
    }
    return problem.evaluate(p, nullptr) * kLog2E;
}

DualMacResult dual_mac_sum_capacity(const std::vector<Eigen::MatrixXcd>& channels, double p,
                                    const DualMacOptions& options) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
        throw std::invalid_argument("dual_mac_sum_capacity: P must be finite and non-negative");
    }
    for (const auto& h : channels) {
        if (!h.allFinite()) {
            throw std::invalid_argument("dual_mac_sum_capacity: channel entries must be finite");
        }
    }
    DualMacProblem problem(channels);
    const int n = problem.users();
    DualMacResult res;
    if (n == 0 || p == 0.0) {
        res.powers = problem.split(Eigen::VectorXd::Zero(n));
        return res;
    }

    Eigen::VectorXd pw = Eigen::VectorXd::Constant(n, p / n);
    Eigen::VectorXd grad;
    double f = problem.evaluate(pw, &grad);
    if (options.record_trace) {
        res.trace.push_back(f * kLog2E);
    }
    res.converged = false;

    Eigen::VectorXd trial_grad;
    for (int it = 1; it <= options.max_iterations; ++it) {
        res.iterations = it;
        const double gap = p * grad.maxCoeff() - pw.dot(grad);
        if (gap * kLog2E <= options.tolerance_bits) {
            res.converged = true;
            break;
        }
        // Gain of each user with the others' powers held fixed (Sherman-Morrison).
        Eigen::VectorXd gains(n);
        for (int k = 0; k < n; ++k) {
            gains(k) = grad(k) / std::max(1.0 - pw(k) * grad(k), 1e-300);
        }
        const Eigen::VectorXd dir = water_fill(gains, p) - pw;
        const double slope0 = dir.dot(grad);
        if (!(slope0 > 0.0)) {
            res.converged = true;
            break;
        }

        // Exact line search on the concave restriction: largest t with phi'(t) >= 0.
        double t = 1.0;
        problem.evaluate(pw + dir, &trial_grad);
        double slope_hi = dir.dot(trial_grad);
        if (slope_hi < 0.0) {
            double lo = 0.0;
            double hi = 1.0;
            double slope_lo = slope0;
            int side = 0;
            for (int ls = 0; ls < 60 && hi - lo > 1e-12; ++ls) {
                // Illinois-modified regula falsi on phi'.
                double mid = lo + (hi - lo) * slope_lo / (slope_lo - slope_hi);
                if (!(mid > lo && mid < hi)) {
                    mid = 0.5 * (lo + hi);
                }
                problem.evaluate(pw + mid * dir, &trial_grad);
                const double s = dir.dot(trial_grad);
                if (s >= 0.0) {
                    lo = mid;
                    slope_lo = s;
                    if (side == 1) {
                        slope_hi *= 0.5;
                    }
                    side = 1;
                } else {
                    hi = mid;
                    slope_hi = s;
                    if (side == -1) {
                        slope_lo *= 0.5;
                    }
                    side = -1;
                }
                if (std::abs(s) <= 1e-12 * slope0) {
                    break;
                }
            }
            t = lo;
        }
        if (!(t > 0.0)) {
            res.converged = true;
            break;
        }

        Eigen::VectorXd next = pw + t * dir;
        next = next.cwiseMax(0.0);
        Eigen::VectorXd next_grad;
        const double f_next = problem.evaluate(next, &next_grad);
        if (f_next < f) {
            // Rounding-level loss: keep the current point.
            res.converged = true;
            break;
        }
        const double improvement = (f_next - f) * kLog2E;
        pw = std::move(next);
        grad = std::move(next_grad);
        f = f_next;
        if (options.record_trace) {
            res.trace.push_back(f * kLog2E);
        }
        if (improvement < options.tolerance_bits) {
            res.converged = true;
            break;
        }
    }

    res.sum_rate_bits = f * kLog2E;
    res.gap_bits = (p * grad.maxCoeff() - pw.dot(grad)) * kLog2E;
    res.powers = problem.split(pw);
    return res;
}

std::vector<int> select_strongest_users(const Eigen::MatrixXcd& h, int count) {
    const int k = static_cast<int>(h.cols());
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    if (count <= 0 || count >= k) {
        return idx;
    }
    const Eigen::VectorXd norms = h.colwise().squaredNorm().transpose();
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return norms(a) > norms(b); });
    idx.resize(static_cast<std::size_t>(count));
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace corrbc
