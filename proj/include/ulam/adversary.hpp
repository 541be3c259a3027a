#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ulam/constants.hpp"
#include "ulam/recurrence.hpp"
#include "ulam/vandermonde.hpp"

namespace ulam {

/// Outcome of driving the recurrence with the extremal forcing.
struct SharpnessReport {
    double achieved_ratio = 0.0; ///< ||x_1|| / eps
    double kr_value = 0.0;
    double gap = 0.0;            ///< kr_value - achieved_ratio
    std::size_t horizon = 0;     ///< number of E_s terms in the forcing
    double tail_budget = 0.0;    ///< tol * kr_value
    double sup_ratio = 0.0;      ///< sup_n ||x_n|| / eps over the window
    double shadow_coefficient_norm = 0.0;
    bool zero_shadow = false;    ///< shadow coefficients vanish to within 1e-8 eps
};

/// First standard basis vector of C^dim.
std::vector<Scalar> default_direction(std::size_t dim);

/// f_0 = 0 and f_n = (|E_n| / E_n) u eps for n = 1..N, with f_n = 0 where E_n
/// cancels to rounding level. For `Field::Real`, a single unimodular factor is
/// applied to every entry when needed so the forcing is real.
Forcing worst_forcing(const VandermondeData& data, double eps, std::span<const Scalar> u, std::size_t terms,
                      Norm norm = Norm::Sup, Field field = Field::Complex);

/// Bounded solution x_n = ((-1)^p / V) sum_{s>=1} E_s f_{n+s-1} of the forced
/// equation, using every supplied forcing entry (zero beyond), for n < length.
Trajectory worst_trajectory(const RecurrenceSpec& spec, const VandermondeData& data, const Forcing& forcing,
                            std::size_t length);

/// Builds the extremal forcing with tail budget tol * K_R, measures ||x_1|| / eps
/// and confirms the nearest exact solution is zero.
SharpnessReport sharpness_experiment(const RecurrenceSpec& spec, const RootSet& roots, const VandermondeData& data,
                                     const ConstantResult& kr, double eps, double tol,
                                     std::span<const Scalar> u = {});

} // namespace ulam
