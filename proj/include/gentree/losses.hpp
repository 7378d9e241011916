// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace gentree {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// The three shipped losses, given by their partial loss on the fake class
/// l_{-1}(u) with l_1(u) = l_{-1}(1-u) (symmetry):
///   log:      l_{-1}(u) = -log2(1-u)
///   square:   l_{-1}(u) = u^2/2
///   matusita: l_{-1}(u) = sqrt(u/(1-u))
/// All are strictly proper, symmetric, differentiable, with l_{-1}(0) = 0.
enum class LossKind { log_loss, square, matusita };

struct ProperLoss {
    LossKind kind = LossKind::matusita;

    static ProperLoss log2loss() { return {LossKind::log_loss}; }
    static ProperLoss square() { return {LossKind::square}; }
    static ProperLoss matusita() { return {LossKind::matusita}; }

    static ProperLoss parse(const std::string& name) {
        if (name == "log") return log2loss();
        if (name == "square") return square();
        if (name == "matusita") return matusita();
        throw std::runtime_error("unknown loss '" + name + "' (log|square|matusita)");
    }
    const char* name() const {
        switch (kind) {
            case LossKind::log_loss: return "log";
            case LossKind::square: return "square";
            default: return "matusita";
        }
    }

    /// Partial loss for the fake class, l_{-1}(u).
    double partial_neg(double u) const {
        switch (kind) {
            case LossKind::log_loss: return u >= 1.0 ? kInf : -std::log2(1.0 - u);
            case LossKind::square: return 0.5 * u * u;
            default: return u >= 1.0 ? kInf : std::sqrt(u / (1.0 - u));
        }
    }
    /// Partial loss for the real class, l_1(u) = l_{-1}(1-u).
    double partial_pos(double u) const { return partial_neg(1.0 - u); }

    /// Pointwise Bayes risk L(u) = u*l_1(u) + (1-u)*l_{-1}(u); L(0)=L(1)=0.
    double bayes_risk(double u) const {
        if (u <= 0.0 || u >= 1.0) return 0.0;
        switch (kind) {
            case LossKind::log_loss:
                return -u * std::log2(u) - (1.0 - u) * std::log2(1.0 - u);
            case LossKind::square: return 0.5 * u * (1.0 - u);
            default: return 2.0 * std::sqrt(u * (1.0 - u));
        }
    }

    /// d/du of the pointwise Bayes risk (infinite at the endpoints for the
    /// log and Matusita losses).
    double bayes_risk_deriv(double u) const {
        switch (kind) {
            case LossKind::log_loss:
                if (u <= 0.0) return kInf;
                if (u >= 1.0) return -kInf;
                return std::log2((1.0 - u) / u);
            case LossKind::square: return 0.5 * (1.0 - 2.0 * u);
            default:
                if (u <= 0.0) return kInf;
                if (u >= 1.0) return -kInf;
                return (1.0 - 2.0 * u) / std::sqrt(u * (1.0 - u));
        }
    }

    /// Density-ratio form of the partial loss, l_{-1}(1/(1+z)); decreasing and
    /// convex in z > 0.
    double drloss(double z) const {
        switch (kind) {
            case LossKind::log_loss: return std::log2(1.0 + 1.0 / z);
            case LossKind::square: {
                const double u = 1.0 / (1.0 + z);
                return 0.5 * u * u;
            }
            default: return 1.0 / std::sqrt(z);
        }
    }
};

/// Real/fake mass pairs over the cells of one partition, each family summing
/// to 1, plus the prior mass of the real class.
struct PartitionStats {
    double prior = 0.5;
    std::vector<std::pair<double, double>> cells;  // (p_cell, n_cell)

    void validate() const {
        if (!(prior > 0.0 && prior < 1.0))
            throw std::runtime_error("prior must be in (0,1)");
        if (cells.empty()) throw std::runtime_error("partition needs at least one cell");
        double sp = 0.0, sn = 0.0;
        for (const auto& [p, n] : cells) {
            if (p < 0.0 || n < 0.0) throw std::runtime_error("cell masses must be >= 0");
            sp += p;
            sn += n;
        }
        if (std::abs(sp - 1.0) > 1e-9 || std::abs(sn - 1.0) > 1e-9)
            throw std::runtime_error("cell masses must each sum to 1");
    }
};

/// Statistical information of the partition: the Bayes-risk drop
/// L(pi) - sum_cells (pi*p + (1-pi)*n) * L(posterior).
inline double statistical_information(const PartitionStats& stats, const ProperLoss& loss) {
    stats.validate();
    const double pi = stats.prior;
    double risk = 0.0;
    for (const auto& [p, n] : stats.cells) {
        const double m = pi * p + (1.0 - pi) * n;
        if (m <= 0.0) continue;
        risk += m * loss.bayes_risk(pi * p / m);
    }
    return loss.bayes_risk(pi) - risk;
}

/// Generator of the f-divergence tied to (loss, pi):
/// f(t) = L(pi) - (pi*t + 1 - pi) * L(pi*t / (pi*t + 1 - pi)), t >= 0.
inline double f_pi(const ProperLoss& loss, double pi, double t) {
    if (t < 0.0) throw std::runtime_error("f_pi needs t >= 0");
    const double m = pi * t + 1.0 - pi;
    return loss.bayes_risk(pi) - m * loss.bayes_risk(pi * t / m);
}

/// lim_{t->inf} f_pi(t)/t; zero for all three shipped losses (L(s)/s grows at
/// most logarithmically as s->0, so the limit vanishes), pinned here so cells
/// with zero fake mass contribute exactly nothing below.
inline double f_pi_slope_at_infinity(const ProperLoss&, double) { return 0.0; }

/// Binary task information sum_cells n * f_pi(p/n); cells with n = 0
/// contribute pi*p times the slope at infinity.
inline double binary_task_information(const PartitionStats& stats, const ProperLoss& loss) {
    stats.validate();
    const double pi = stats.prior;
    double acc = 0.0;
    for (const auto& [p, n] : stats.cells) {
        if (n > 0.0)
            acc += n * f_pi(loss, pi, p / n);
        else
            acc += pi * p * f_pi_slope_at_infinity(loss, pi);
    }
    return acc;
}

/// d/dt f_pi(t) = -pi * l_1(eta(t)) with eta(t) = pi*t / (pi*t + 1 - pi).
inline double f_pi_deriv(const ProperLoss& loss, double pi, double t) {
    const double eta = pi * t / (pi * t + 1.0 - pi);
    return -pi * loss.partial_pos(eta);
}

/// Discriminator risk through the dual expectation route:
///   -E_P[f_pi'(ratio)] + E_N[genloss(ratio)]
/// with genloss(t) = -L(pi) + (1-pi) * l_{-1}(eta(t)). On calibrated
/// partitions this equals minus the statistical information.
inline double discriminator_risk(const PartitionStats& stats, const ProperLoss& loss) {
    stats.validate();
    const double pi = stats.prior;
    double acc = 0.0;
    for (const auto& [p, n] : stats.cells) {
        const double mp = pi * p, mn = (1.0 - pi) * n;
        if (mp + mn <= 0.0) continue;
        const double eta = mp / (mp + mn);
        if (p > 0.0) acc += p * pi * loss.partial_pos(eta);  // = -p * f_pi'(p/n)
        if (n > 0.0) acc += n * (-loss.bayes_risk(pi) + (1.0 - pi) * loss.partial_neg(eta));
    }
    return acc;
}

/// Generator risk sum_cells n * (L(pi) - (1-pi) * drloss(z)) with
/// z = ((1-pi)/pi) * (n/p); cells with p = 0 contribute n * L(pi).
inline double generator_risk(const PartitionStats& stats, const ProperLoss& loss) {
    stats.validate();
    const double pi = stats.prior;
    const double lpi = loss.bayes_risk(pi);
    double acc = 0.0;
    for (const auto& [p, n] : stats.cells) {
        if (n <= 0.0) continue;
        const double z = (p > 0.0) ? (1.0 - pi) / pi * (n / p) : kInf;
        const double dr = (z == kInf) ? 0.0 : loss.drloss(z);
        acc += n * (lpi - (1.0 - pi) * dr);
    }
    return acc;
}

/// chi^2(N||P) = -1 + sum_cells n^2/p; +inf when fake mass hits a cell with
/// zero real mass.
inline double chi_square(const PartitionStats& stats) {
    stats.validate();
    double acc = 0.0;
    for (const auto& [p, n] : stats.cells) {
        if (n <= 0.0) continue;
        if (p <= 0.0) return kInf;
        acc += n * n / p;
    }
    return acc - 1.0;
}

/// Bregman divergences of the concave Bayes risk's negation at the class
/// labels: B_{-L}(0||u) = L(u) - u L'(u) and B_{-L}(1||u) = L(u) + (1-u) L'(u),
/// which recover the two partial losses.
inline std::pair<double, double> bregman_partial_identity(const ProperLoss& loss, double u) {
    if (u <= 0.0) return {0.0, loss.partial_pos(0.0)};
    if (u >= 1.0) return {loss.partial_neg(1.0), 0.0};
    const double L = loss.bayes_risk(u);
    const double dL = loss.bayes_risk_deriv(u);
    return {L - u * dL, L + (1.0 - u) * dL};
}

/// f-divergence of two nonnegative cell families with equal totals:
/// sum_cells u * f_pi(p/u).
inline double f_divergence(const ProperLoss& loss, double pi, const std::vector<double>& p,
                           const std::vector<double>& u) {
    if (p.size() != u.size()) throw std::runtime_error("cell count mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (u[i] > 0.0)
            acc += u[i] * f_pi(loss, pi, p[i] / u[i]);
        else if (p[i] > 0.0)
            throw std::runtime_error("reference measure vanishes on a massive cell");
    }
    return acc;
}

/// Risk of approximating the density ratio dP/dU by the tree's coarsened
/// ratio dPT/dU, as the divergence difference
///   I_{f_pi}(P,U) - I_{f_pi}(PT,U)
/// on a common refinement where P is piecewise constant. Nonnegative whenever
/// PT is the U-conditional coarsening of P; zero iff PT = P cellwise.
inline double likelihood_ratio_risk(const ProperLoss& loss, double pi,
                                    const std::vector<double>& p,
                                    const std::vector<double>& pt,
                                    const std::vector<double>& u) {
    if (p.size() != pt.size() || p.size() != u.size())
        throw std::runtime_error("cell count mismatch");
    return f_divergence(loss, pi, p, u) - f_divergence(loss, pi, pt, u);
}

/// Same risk through the Bregman route: pi * E_U[B_{Lv}(a||b)] where Lv is the
/// perspective transform Lv(z) = -(z+K) L(z/(z+K)), K = (1-pi)/pi, applied to
/// the densities a = dP/dU and b = dPT/dU, and Lv'(b) = -l_1(b/(b+K)).
inline double likelihood_ratio_risk_bregman(const ProperLoss& loss, double pi,
                                            const std::vector<double>& p,
                                            const std::vector<double>& pt,
                                            const std::vector<double>& u) {
    if (p.size() != pt.size() || p.size() != u.size())
        throw std::runtime_error("cell count mismatch");
    const double K = (1.0 - pi) / pi;
    const auto Lv = [&](double z) { return -(z + K) * loss.bayes_risk(z / (z + K)); };
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (u[i] <= 0.0) {
            if (p[i] > 0.0 || pt[i] > 0.0)
                throw std::runtime_error("reference measure vanishes on a massive cell");
            continue;
        }
        const double a = p[i] / u[i], b = pt[i] / u[i];
        if (a == b) continue;
        const double slope = -loss.partial_pos(b / (b + K));
        acc += u[i] * (Lv(a) - Lv(b) - (a - b) * slope);
    }
    return pi * acc;
}

}  // namespace gentree
