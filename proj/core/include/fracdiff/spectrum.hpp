#pragma once

#include <memory>
#include <span>
#include <vector>

namespace fracdiff {

enum class BasisKind { DirichletLaplacian1D, ExplicitDiagonal };

/// Truncated self-adjoint positive operator A, represented by its first N
/// eigenvalues. Immutable after construction; shared by fields and solvers.
///
/// DirichletLaplacian1D is -d^2/dx^2 on (0,1) with zero boundary values:
/// lambda_k = k^2 pi^2, eigenfunctions sqrt(2) sin(k pi x), orthonormal in
/// L^2(0,1). It carries a physical collocation grid so pointwise
/// nonlinearities can be applied by synthesize/analyze round trips.
class SpectralOperator {
public:
    static std::shared_ptr<const SpectralOperator> dirichlet_laplacian_1d(int modes,
                                                                          int collocation_size);
    static std::shared_ptr<const SpectralOperator> explicit_diagonal(
        std::vector<double> eigenvalues);

    BasisKind kind() const noexcept { return kind_; }
    int modes() const noexcept { return static_cast<int>(eigenvalues_.size()); }
    double eigenvalue(int k) const { return eigenvalues_.at(k); }  // k in [0, N)
    const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
    double theta() const noexcept { return eigenvalues_.front(); }  // spectral lower bound
    bool has_collocation() const noexcept { return kind_ == BasisKind::DirichletLaplacian1D; }
    int collocation_size() const noexcept { return collocation_; }

private:
    SpectralOperator(BasisKind kind, std::vector<double> ev, int collocation);
    BasisKind kind_;
    std::vector<double> eigenvalues_;
    int collocation_;
};

using OperatorPtr = std::shared_ptr<const SpectralOperator>;

/// Coefficient vector against the operator's eigenbasis.
struct SpectralField {
    OperatorPtr op;
    std::vector<double> coeffs;

    SpectralField() = default;
    SpectralField(OperatorPtr o, std::vector<double> c);
    static SpectralField zero(OperatorPtr o);

    int modes() const noexcept { return static_cast<int>(coeffs.size()); }
    double& operator[](int k) { return coeffs[k]; }
    double operator[](int k) const { return coeffs[k]; }
};

/// ||w||_s = (sum_k lambda_k^{2s} c_k^2)^{1/2}. Requires s >= 0.
double sobolev_norm(const SpectralField& w, double s);

/// A^beta w: coefficients mapped c_k -> lambda_k^beta c_k.
SpectralField apply_power(const SpectralField& w, double beta);

SpectralField add(const SpectralField& a, const SpectralField& b);
SpectralField sub(const SpectralField& a, const SpectralField& b);
SpectralField scale(const SpectralField& a, double c);

/// Physical samples on the interior grid x_j = j/(m+1), j = 1..m
/// (DirichletLaplacian1D only).
std::vector<double> synthesize(const SpectralField& w);

/// Inverse of synthesize for fields with at most N modes; the discrete
/// sine transform pair on the interior grid.
SpectralField analyze(const OperatorPtr& op, std::span<const double> samples);

}  // namespace fracdiff
