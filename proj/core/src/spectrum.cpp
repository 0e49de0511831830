#include "fracdiff/spectrum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fracdiff/errors.hpp"

namespace fracdiff {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

void check_same_operator(const SpectralField& a, const SpectralField& b) {
    if (a.op.get() != b.op.get())
        throw std::invalid_argument("spectral fields belong to different operators");
}
}  // namespace

SpectralOperator::SpectralOperator(BasisKind kind, std::vector<double> ev, int collocation)
    : kind_(kind), eigenvalues_(std::move(ev)), collocation_(collocation) {}

std::shared_ptr<const SpectralOperator> SpectralOperator::dirichlet_laplacian_1d(
    int modes, int collocation_size) {
    if (modes < 1) throw ConfigError({"operator_modes_positive"});
    if (collocation_size < 2 * modes) throw ConfigError({"collocation_below_dealiasing"});
    std::vector<double> ev(modes);
    for (int k = 0; k < modes; ++k) ev[k] = double(k + 1) * double(k + 1) * kPi * kPi;
    return std::shared_ptr<const SpectralOperator>(
        new SpectralOperator(BasisKind::DirichletLaplacian1D, std::move(ev), collocation_size));
}

std::shared_ptr<const SpectralOperator> SpectralOperator::explicit_diagonal(
    std::vector<double> eigenvalues) {
    if (eigenvalues.empty()) throw ConfigError({"operator_modes_positive"});
    if (!(eigenvalues.front() > 0.0)) throw ConfigError({"spectral_lower_bound_positive"});
    for (size_t i = 1; i < eigenvalues.size(); ++i)
        if (!(eigenvalues[i] > eigenvalues[i - 1]))
            throw ConfigError({"eigenvalues_not_strictly_increasing"});
    return std::shared_ptr<const SpectralOperator>(
        new SpectralOperator(BasisKind::ExplicitDiagonal, std::move(eigenvalues), 0));
}

SpectralField::SpectralField(OperatorPtr o, std::vector<double> c)
    : op(std::move(o)), coeffs(std::move(c)) {
    if (!op) throw std::invalid_argument("SpectralField: null operator");
    if (static_cast<int>(coeffs.size()) != op->modes())
        throw std::invalid_argument("SpectralField: coefficient count " +
                                    std::to_string(coeffs.size()) + " != operator modes " +
                                    std::to_string(op->modes()));
}

SpectralField SpectralField::zero(OperatorPtr o) {
    int n = o->modes();
    return SpectralField(std::move(o), std::vector<double>(n, 0.0));
}

double sobolev_norm(const SpectralField& w, double s) {
    if (s < 0.0) throw std::domain_error("sobolev_norm: requires s >= 0");
    double acc = 0.0;
    for (int k = 0; k < w.modes(); ++k) {
        double lam = w.op->eigenvalue(k);
        double c = w.coeffs[k];
        acc += std::pow(lam, 2.0 * s) * c * c;
    }
    return std::sqrt(acc);
}

SpectralField apply_power(const SpectralField& w, double beta) {
    SpectralField out = w;
    for (int k = 0; k < w.modes(); ++k) out.coeffs[k] *= std::pow(w.op->eigenvalue(k), beta);
    return out;
}

SpectralField add(const SpectralField& a, const SpectralField& b) {
    check_same_operator(a, b);
    SpectralField out = a;
    for (int k = 0; k < a.modes(); ++k) out.coeffs[k] += b.coeffs[k];
    return out;
}

SpectralField sub(const SpectralField& a, const SpectralField& b) {
    check_same_operator(a, b);
    SpectralField out = a;
    for (int k = 0; k < a.modes(); ++k) out.coeffs[k] -= b.coeffs[k];
    return out;
}

SpectralField scale(const SpectralField& a, double c) {
    SpectralField out = a;
    for (double& v : out.coeffs) v *= c;
    return out;
}

std::vector<double> synthesize(const SpectralField& w) {
    if (!w.op->has_collocation())
        throw ConfigError({"pointwise_requires_collocation_basis"});
    const int m = w.op->collocation_size();
    const int n = w.modes();
    std::vector<double> u(m, 0.0);
    const double root2 = std::sqrt(2.0);
    for (int j = 1; j <= m; ++j) {
        double x = double(j) / double(m + 1);
        double acc = 0.0;
        for (int k = 1; k <= n; ++k) acc += w.coeffs[k - 1] * root2 * std::sin(k * kPi * x);
        u[j - 1] = acc;
    }
    return u;
}

SpectralField analyze(const OperatorPtr& op, std::span<const double> samples) {
    if (!op->has_collocation())
        throw ConfigError({"pointwise_requires_collocation_basis"});
    const int m = op->collocation_size();
    if (static_cast<int>(samples.size()) != m)
        throw std::invalid_argument("analyze: sample count != collocation size");
    const int n = op->modes();
    std::vector<double> c(n, 0.0);
    const double root2 = std::sqrt(2.0);
    for (int k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= m; ++j)
            acc += samples[j - 1] * std::sin(k * kPi * double(j) / double(m + 1));
        c[k - 1] = acc * root2 / double(m + 1);
    }
    return SpectralField(op, std::move(c));
}

}  // namespace fracdiff
