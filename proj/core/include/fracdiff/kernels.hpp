#pragma once

#include <span>
#include <vector>

#include "fracdiff/mlf.hpp"
#include "fracdiff/spectrum.hpp"

namespace fracdiff {

/// The fractional order pair. Solvers require 0 < alpha <= 1; beta > 0.
struct Orders {
    double alpha;
    double beta;
    Orders(double a, double b);
};

/// Admissible box for perturbed-order experiments:
/// 0 < alpha_lo < alpha_hi < 2, alpha_hi < 2 alpha_lo, 0 < beta_lo < beta_hi.
struct OrdersDomain {
    double alpha_lo, alpha_hi, beta_lo, beta_hi;
    OrdersDomain(double alo, double ahi, double blo, double bhi);
    bool contains(const Orders& o) const noexcept;
};

/// Graded time mesh t_j = T (j/M)^grading, j = 0..M. Grading clusters
/// nodes at the origin where the kernel and the t^{-nu} source blow up.
class TimeGrid {
public:
    TimeGrid(double horizon, int nodes, double grading);

    /// Default grading for the given order: min(2/alpha, 4).
    static TimeGrid graded_for(double horizon, int nodes, double alpha);

    double horizon() const noexcept { return horizon_; }
    int nodes() const noexcept { return nodes_; }  // M; node count is M+1
    double grading() const noexcept { return grading_; }
    double t(int j) const { return t_.at(j); }
    const std::vector<double>& points() const noexcept { return t_; }

private:
    double horizon_;
    int nodes_;
    double grading_;
    std::vector<double> t_;
};

/// E_alpha(-t^alpha A^beta) w: coefficientwise decay by the propagator.
SpectralField propagate(const Orders& orders, const SpectralField& w, double t,
                        const MLEvalPolicy& policy = {});

/// Scalar kernel (t-tau)^{alpha-1} E_{alpha,alpha}(-lambda^beta (t-tau)^alpha),
/// nonnegative; requires tau < t.
double kernel_E(const Orders& orders, double lambda, double t, double tau,
                const MLEvalPolicy& policy = {});

/// Exact integral of the kernel anchored at t2 over [t1, t2]:
/// (1/lambda^beta) (1 - E_alpha(-lambda^beta (t2-t1)^alpha)).
double kernel_integral_exact(const Orders& orders, double lambda, double t1, double t2,
                             const MLEvalPolicy& policy = {});

/// Backward multiplier E_alpha(-lambda^beta t^alpha)/E_alpha(-lambda^beta T^alpha),
/// >= 1 for t <= T. Throws AmplificationOverflow when the denominator is not
/// representable at working precision.
double backward_multiplier(const Orders& orders, double lambda, double t, double horizon,
                           const MLEvalPolicy& policy = {});

/// Empirical constant E with P_{alpha,beta}(lambda, t) <= E (T/t)^alpha over
/// the truncated spectrum: supremum over a log-spaced (lambda, t) sample,
/// inflated by a 1.05 safety factor. Requires n_samples >= 100.
double estimate_E_constant(const Orders& orders, const OperatorPtr& op, double horizon,
                           int n_samples, const MLEvalPolicy& policy = {});

/// Exact product-integration moments of the solution kernel against
/// piecewise-linear source interpolants, tabulated once per
/// (orders, operator, grid). The zeroth moment comes from differences of
/// the propagator antiderivative, the first from the E_{alpha,2}
/// antiderivative identity d/ds [s E_{alpha,2}(-c s^alpha)] = E_alpha(-c s^alpha),
/// so the only residual error in convolve() is source interpolation.
class ConvolutionPlan {
public:
    ConvolutionPlan(const Orders& orders, OperatorPtr op, const TimeGrid& grid,
                    const MLEvalPolicy& policy = {});

    const Orders& orders() const noexcept { return orders_; }
    const TimeGrid& grid() const noexcept { return grid_; }
    const OperatorPtr& op() const noexcept { return op_; }

    /// integral_{t_i}^{t_{i+1}} kernel_E(lambda_k, t_j, tau) dtau, i < j
    double moment0(int k, int i, int j) const;
    /// integral_{t_i}^{t_{i+1}} kernel_E(lambda_k, t_j, tau) (tau - t_i) dtau
    double moment1(int k, int i, int j) const;

    /// Same moments anchored at an off-grid target time t in (t_j, t_{j+1}]:
    /// integral over [t_i, min(t_{i+1}, t)].
    double moment0_at(int k, int i, double t) const;
    double moment1_at(int k, int i, double t) const;

    /// integral_0^{t_j} kernel_E(lambda_k, t_j, tau) tau^{-nu} dtau restricted
    /// to [0, t_1] (closed Beta/ML form at j = 1, substitution-smoothed
    /// Gauss-Legendre for j > 1). Used for the singular head of Nagumo
    /// sources; nu in [0, 1/2).
    double head_moment(int k, int j, double nu) const;
    double head_moment_at(int k, double t, double nu) const;

    /// Product integration of one mode's node samples F(t_0..t_j) to the
    /// target node j (piecewise-linear F, exact kernel moments).
    double convolve_mode(int k, std::span<const double> samples, int j) const;
    double convolve_mode_at(int k, std::span<const double> samples, double t) const;

private:
    double lambda_pow(int k) const { return lam_beta_[k]; }
    Orders orders_;
    OperatorPtr op_;
    TimeGrid grid_;
    MLEvalPolicy policy_;
    std::vector<double> lam_beta_;
    // e1[k][idx(i,j)] = E_alpha(-lambda_k^beta (t_j - t_i)^alpha)
    // e2[k][idx(i,j)] = (t_j - t_i) E_{alpha,2}(-lambda_k^beta (t_j - t_i)^alpha)
    std::vector<std::vector<double>> e1_, e2_;
    int idx(int i, int j) const { return j * (j + 1) / 2 + i; }
    friend struct ConvolutionPlanAccess;
};

/// Mild-solution convolution integral_0^{t_j} E(A, t_j, tau) F(tau) dtau for
/// node-sampled spectral sources F[node][mode] (piecewise linear in time).
SpectralField convolve_Q(const Orders& orders, const OperatorPtr& op, const TimeGrid& grid,
                         const std::vector<std::vector<double>>& samples, int j_target,
                         const MLEvalPolicy& policy = {});

/// integral_0^{t_j} (t_j - tau)^{alpha-1} g(tau) dtau for scalar node samples
/// g (piecewise linear), with exact moments of the pure power kernel.
double power_kernel_convolve(double alpha, const TimeGrid& grid, std::span<const double> g,
                             int j);

}  // namespace fracdiff
