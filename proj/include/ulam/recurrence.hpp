#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ulam/sequence.hpp"

namespace ulam {

/// x_{n+p} = a_1 x_{n+p-1} + ... + a_p x_n over the value space C^d (or R^d).
class RecurrenceSpec {
public:
    RecurrenceSpec(std::vector<Scalar> coefficients, Field field = Field::Real, std::size_t dim = 1,
                   Norm norm = Norm::Sup);

    std::size_t order() const noexcept { return coefficients_.size(); }
    std::span<const Scalar> coefficients() const noexcept { return coefficients_; }
    Field field() const noexcept { return field_; }
    std::size_t dim() const noexcept { return dim_; }
    Norm norm() const noexcept { return norm_; }

    /// Coefficients of the monic characteristic polynomial, highest degree first:
    /// r^p - a_1 r^{p-1} - ... - a_p.
    std::vector<Scalar> characteristic_polynomial() const;

private:
    std::vector<Scalar> coefficients_;
    Field field_;
    std::size_t dim_;
    Norm norm_;
};

enum class SpectralClass { AllOutsideUnitDisc, HyperbolicMixed, OnUnitCircle, NearDegenerate };

constexpr std::string_view to_string(SpectralClass c) noexcept
{
    switch (c) {
    case SpectralClass::AllOutsideUnitDisc: return "AllOutsideUnitDisc";
    case SpectralClass::HyperbolicMixed: return "HyperbolicMixed";
    case SpectralClass::OnUnitCircle: return "OnUnitCircle";
    case SpectralClass::NearDegenerate: return "NearDegenerate";
    }
    return "Unknown";
}

struct ToleranceConfig {
    double unit_circle = 1e-9; ///< ||r|-1| at or below this counts as on the circle
    double separation = 1e-8;  ///< relative to max|r_k|
};

struct RootConfig {
    double residual_tol = 1e-12; ///< relative to the Horner evaluation scale
    int max_iter = 200;
    double pairing_tol = 1e-8; ///< conjugate pairing for real coefficients
    ToleranceConfig tolerances{};
};

/// Characteristic roots with the diagnostics used to decide which results apply.
///
/// `radii[k]` is an inclusion radius around `roots[k]` derived from the
/// polynomial residual (Weierstrass bound plus Horner rounding); it is zero for
/// root sets supplied directly. Classification treats a root as touching the
/// unit circle, or two roots as coincident, whenever those disks allow it.
struct RootSet {
    std::vector<Scalar> roots;
    std::vector<double> moduli;
    std::vector<double> radii;
    double min_separation = 0.0;
    double residual_bound = 0.0;
    bool on_unit_circle = false;
    bool near_degenerate = false;
    SpectralClass classification = SpectralClass::AllOutsideUnitDisc;

    std::size_t size() const noexcept { return roots.size(); }
    double min_modulus() const noexcept;
    double max_modulus() const noexcept;

    /// Root set from explicit values (no residual information); keeps the given order.
    static RootSet from_roots(std::vector<Scalar> roots, const ToleranceConfig& tol = {});
};

/// Roots of the characteristic polynomial, sorted by modulus then argument.
/// Throws NonConvergence if refinement cannot reach the residual tolerance.
RootSet characteristic_roots(const RecurrenceSpec& spec, const RootConfig& cfg = {});

/// Total classification from moduli, inclusion radii and separation.
/// OnUnitCircle wins over NearDegenerate when both apply.
SpectralClass classify_roots(const RootSet& roots, const ToleranceConfig& tol = {});

struct Trajectory {
    Sequence values;
    std::size_t zero_filled_forcing = 0; ///< forcing entries simulate had to treat as zero

    std::size_t size() const noexcept { return values.size(); }
    std::span<const Scalar> operator[](std::size_t n) const noexcept { return values[n]; }
};

/// Forcing sequence f_n together with eps = max_n ||f_n||.
class Forcing {
public:
    Forcing() = default;
    Forcing(Sequence values, Norm norm);

    const Sequence& values() const noexcept { return values_; }
    double eps() const noexcept { return eps_; }
    Norm norm() const noexcept { return norm_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const Scalar> operator[](std::size_t n) const noexcept { return values_[n]; }

private:
    Sequence values_;
    double eps_ = 0.0;
    Norm norm_ = Norm::Sup;
};

/// Runs the forced recurrence from `initial` (p values) for `n_steps` indices.
/// Forcing entries past the end of `forcing` are taken as zero.
Trajectory simulate(const RecurrenceSpec& spec, const Sequence& initial, const Forcing& forcing,
                    std::size_t n_steps);

/// f_n = x_{n+p} - a_1 x_{n+p-1} - ... - a_p x_n for n = 0..N-p-1.
Forcing residuals(const RecurrenceSpec& spec, const Sequence& traj);
inline Forcing residuals(const RecurrenceSpec& spec, const Trajectory& traj)
{
    return residuals(spec, traj.values);
}

} // namespace ulam
