#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fracdiff {

/// Configuration rejected at load or solve time. Carries every violated
/// constraint by name, not just the first one found.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "configuration rejected:";
        for (const auto& x : v) s += " [" + x + "]";
        return s;
    }
    std::vector<std::string> violations_;
};

/// Fixed-point iteration exhausted its sweep budget or started diverging.
class IterationError : public std::runtime_error {
public:
    IterationError(const std::string& what, std::vector<double> residuals)
        : std::runtime_error(what), residuals_(std::move(residuals)) {}

    const std::vector<double>& residual_history() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

/// A trajectory norm crossed the divergence threshold mid-solve.
class BlowUpSuspected : public std::runtime_error {
public:
    BlowUpSuspected(const std::string& what, double t_crossing)
        : std::runtime_error(what), t_(t_crossing) {}

    double t_crossing() const noexcept { return t_; }

private:
    double t_;
};

/// The backward multiplier underflowed/overflowed at working precision.
/// Carries the offending eigenvalue(s) and, when known, the largest
/// truncation level that would still be representable.
class AmplificationOverflow : public std::runtime_error {
public:
    AmplificationOverflow(const std::string& what, double lambda, double horizon,
                          std::vector<int> modes = {}, int feasible_modes = -1)
        : std::runtime_error(what),
          lambda_(lambda),
          horizon_(horizon),
          modes_(std::move(modes)),
          feasible_modes_(feasible_modes) {}

    double lambda() const noexcept { return lambda_; }
    double horizon() const noexcept { return horizon_; }
    const std::vector<int>& modes() const noexcept { return modes_; }
    int feasible_modes() const noexcept { return feasible_modes_; }

private:
    double lambda_;
    double horizon_;
    std::vector<int> modes_;
    int feasible_modes_;
};

/// Internal cross-check of two evaluation routes disagreed beyond tolerance.
class NumericalInstability : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fracdiff
