#include "ulam/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "ulam/compensated.hpp"
#include "ulam/error.hpp"
#include "ulam/shadowing.hpp"

namespace ulam {

namespace {

// |E_n| at or below this fraction of its term magnitudes is a cancellation zero.
constexpr double cancellation_guard = 1e-14;

} // namespace

std::vector<Scalar> default_direction(std::size_t dim)
{
    std::vector<Scalar> u(std::max<std::size_t>(dim, 1));
    u[0] = 1.0;
    return u;
}

Forcing worst_forcing(const VandermondeData& data, double eps, std::span<const Scalar> u, std::size_t terms,
                      Norm norm, Field field)
{
    if (!(eps > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "eps must be positive");
    }
    if (u.empty() || std::abs(value_norm(u, norm) - 1.0) > 1e-12) {
        throw Error(ErrorKind::InvalidInput, "direction u must have unit norm");
    }
    for (const auto& r : data.roots()) {
        if (!(std::abs(r) > 1.0)) {
            throw Error(ErrorKind::NotApplicable, "worst forcing needs every |r_k| > 1");
        }
    }

    const std::size_t d = u.size();
    std::vector<Scalar> phases(terms + 1, Scalar{0.0});
    ETermSequence e_terms(data);
    const double det_modulus = std::abs(data.determinant());
    bool complex_phase = false;
    for (std::size_t n = 1; n <= terms; ++n) {
        const Scalar e = e_terms.next();
        const double magnitude = std::abs(e);
        if (magnitude <= cancellation_guard * data.term_majorant(n) * det_modulus) {
            continue;
        }
        phases[n] = std::conj(e) / magnitude;
        if (std::abs(phases[n].imag()) > 1e-12) {
            complex_phase = true;
        }
    }
    if (field == Field::Real && complex_phase) {
        // E_n / V is real for real coefficients, so rotating by V/|V| makes every phase +-1.
        const Scalar rotation = data.determinant() / det_modulus;
        for (auto& phase : phases) {
            if (phase != Scalar{0.0}) {
                phase = {std::copysign(1.0, (phase * rotation).real()), 0.0};
            }
        }
    } else if (field == Field::Real) {
        for (auto& phase : phases) {
            phase = {phase.real(), 0.0};
        }
    }

    Sequence values(terms + 1, d);
    for (std::size_t n = 1; n <= terms; ++n) {
        for (std::size_t c = 0; c < d; ++c) {
            values[n][c] = phases[n] * u[c] * eps;
        }
    }
    return Forcing(std::move(values), norm);
}

Trajectory worst_trajectory(const RecurrenceSpec& spec, const VandermondeData& data, const Forcing& forcing,
                            std::size_t length)
{
    const std::size_t p = spec.order();
    const std::size_t d = spec.dim();
    if (length > forcing.size() + p) {
        throw Error(ErrorKind::MissingForcing,
                    "trajectory window needs forcing on every residual index (length <= forcing size + p)");
    }
    if (forcing.values().dim() != d) {
        throw Error(ErrorKind::InvalidInput, "forcing dimension does not match spec dim");
    }
    const std::size_t available = forcing.size();
    const Scalar sign_over_v = ((p % 2 == 0) ? 1.0 : -1.0) / data.determinant();
    std::vector<Scalar> weights(available + 1);
    ETermSequence e_terms(data);
    for (std::size_t s = 1; s <= available; ++s) {
        weights[s] = sign_over_v * e_terms.next();
    }

    Trajectory traj{Sequence(length, d), 0};
    for (std::size_t n = 0; n < length && n < available; ++n) {
        for (std::size_t c = 0; c < d; ++c) {
            ComplexCompensatedSum sum;
            for (std::size_t s = 1; n + s - 1 < available; ++s) {
                sum += weights[s] * forcing[n + s - 1][c];
            }
            traj.values[n][c] = sum.value();
        }
    }
    if (spec.field() == Field::Real) {
        for (std::size_t n = 0; n < length; ++n) {
            for (auto& c : traj.values[n]) {
                c = {c.real(), 0.0};
            }
        }
    }
    return traj;
}

SharpnessReport sharpness_experiment(const RecurrenceSpec& spec, const RootSet& roots, const VandermondeData& data,
                                     const ConstantResult& kr, double eps, double tol, std::span<const Scalar> u)
{
    if (roots.classification == SpectralClass::OnUnitCircle) {
        throw Error(ErrorKind::NotUlamStable, "a characteristic root lies on the unit circle");
    }
    if (roots.classification != SpectralClass::AllOutsideUnitDisc) {
        throw Error(ErrorKind::NotApplicable, "sharpness is only established when every root is outside the disc");
    }
    if (!(tol > 0.0 && tol < 1.0)) {
        throw Error(ErrorKind::InvalidInput, "tol must lie in (0, 1)");
    }
    const std::vector<Scalar> fallback = default_direction(spec.dim());
    if (u.empty()) {
        u = fallback;
    }
    if (u.size() != spec.dim()) {
        throw Error(ErrorKind::InvalidInput, "direction u must have dimension dim");
    }

    SharpnessReport report;
    report.kr_value = kr.value;
    report.tail_budget = tol * kr.value;
    report.horizon = std::max<std::size_t>(terms_for_tolerance(roots, data, report.tail_budget), 1);

    const Forcing forcing = worst_forcing(data, eps, u, report.horizon, spec.norm(), spec.field());
    const std::size_t p = spec.order();
    const Trajectory traj = worst_trajectory(spec, data, forcing, forcing.size() + p);

    report.achieved_ratio = value_norm(traj[1], spec.norm()) / eps;
    report.gap = report.kr_value - report.achieved_ratio;
    report.sup_ratio = traj.values.max_norm(spec.norm()) / eps;

    const auto shadow = shadow_coefficients(spec, roots, data, traj);
    for (std::size_t k = 0; k < p; ++k) {
        report.shadow_coefficient_norm =
            std::max(report.shadow_coefficient_norm, value_norm(shadow.coefficients[k], spec.norm()));
    }
    report.zero_shadow = report.shadow_coefficient_norm <= 1e-8 * eps;
    return report;
}

} // namespace ulam
