#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ulam/constants.hpp"
#include "ulam/recurrence.hpp"
#include "ulam/vandermonde.hpp"

namespace ulam {

/// Exact solution nearest to an approximate trajectory.
///
/// Only f_0..f_{N-p-1} are observable, so every index carries a certificate:
/// `truncation_error[n]` bounds the contribution of unseen forcing (assumed
/// bounded by the measured eps) and `cert_error[n]` adds a floating-point
/// estimate on top of it.
struct ShadowResult {
    Trajectory shadow;
    Sequence coefficients; ///< C̄_1..C̄_p with y_n = sum_k C̄_k r_k^n
    double eps = 0.0;
    double bound = 0.0; ///< upper end of K_R times eps
    std::vector<double> cert_error;
    std::vector<double> truncation_error;
    std::vector<double> deviation; ///< ||x_n - y_n||
    double max_deviation = 0.0;
    double discarded_imag = 0.0; ///< largest imaginary part removed by the real projection
    bool ill_conditioned = false;

    double max_cert_error() const noexcept;
};

/// y_n = x_n - ((-1)^p / V) sum_{s=1}^{N-p-n} E_s f_{n+s-1}.
ShadowResult shadow_direct(const RecurrenceSpec& spec, const RootSet& roots, const VandermondeData& data,
                           const Trajectory& traj, const ConstantResult& kr);

/// Closed-form route: decompose x against the homogeneous basis, then shift
/// each coefficient by w_k sum_s f_{s-1} r_k^{-s}.
struct CoefficientShadow {
    Sequence coefficients;
    Trajectory shadow;
    std::vector<double> cert_error;
    double solve_residual = 0.0;
    bool ill_conditioned = false;
};

CoefficientShadow shadow_coefficients(const RecurrenceSpec& spec, const RootSet& roots,
                                      const VandermondeData& data, const Trajectory& traj);

struct VerifyTolerances {
    double residual = 1e-9;  ///< relative: residual <= tol * (1 + max ||y_n||)
    double deviation = 1e-9; ///< absolute slack on ||x_n - y_n|| <= bound + cert_error[n]
};

struct VerificationReport {
    double residual = 0.0;
    double max_deviation = 0.0;
    double bound = 0.0;
    double max_cert_error = 0.0;
    bool residual_ok = false;
    bool deviation_ok = false;
    bool pass = false;
    std::string message;
};

VerificationReport verify_shadow(const RecurrenceSpec& spec, const Trajectory& traj, const ShadowResult& result,
                                 const VerifyTolerances& tol = {});

} // namespace ulam
