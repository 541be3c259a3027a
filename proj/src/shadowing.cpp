#include "ulam/shadowing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ulam/compensated.hpp"
#include "ulam/error.hpp"

namespace ulam {

namespace {

constexpr double unit_roundoff = std::numeric_limits<double>::epsilon() / 2;

void check_inputs(const RecurrenceSpec& spec, const RootSet& roots, const VandermondeData& data,
                  const Trajectory& traj)
{
    if (roots.classification == SpectralClass::OnUnitCircle) {
        throw Error(ErrorKind::NotUlamStable, "a characteristic root lies on the unit circle");
    }
    if (roots.classification != SpectralClass::AllOutsideUnitDisc) {
        throw Error(ErrorKind::NotApplicable, "shadowing requires every root outside the closed unit disc");
    }
    if (roots.size() != spec.order() || data.order() != spec.order()) {
        throw Error(ErrorKind::InvalidInput, "root data does not match the recurrence order");
    }
    if (traj.size() <= spec.order()) {
        throw Error(ErrorKind::InvalidLength, "trajectory must have more than p entries");
    }
    if (traj.values.dim() != spec.dim()) {
        throw Error(ErrorKind::InvalidInput, "trajectory dimension does not match spec dim");
    }
    if (spec.field() == Field::Real && traj.values.max_imag() != 0.0) {
        throw Error(ErrorKind::InvalidInput, "real-field trajectory has imaginary components");
    }
}

// True when every product and partial sum of the real or imaginary part of
// x_{j+p} - sum a_i x_{j+p-i} is exact in double precision.
bool exact_part(std::span<const double> terms)
{
    double sum = 0.0;
    for (double t : terms) {
        const double next = sum + t;
        const double back = next - sum;
        if ((sum - (next - back)) + (t - back) != 0.0) {
            return false;
        }
        sum = next;
    }
    return true;
}

bool exact_product(double a, double b, double& out)
{
    out = a * b;
    return std::fma(a, b, -out) == 0.0;
}

bool exact_residual(const RecurrenceSpec& spec, const Sequence& x, std::size_t j)
{
    const std::size_t p = spec.order();
    const auto a = spec.coefficients();
    std::vector<double> re;
    std::vector<double> im;
    for (std::size_t c = 0; c < x.dim(); ++c) {
        re = {x[j + p][c].real()};
        im = {x[j + p][c].imag()};
        for (std::size_t i = 1; i <= p; ++i) {
            const Scalar ai = a[i - 1];
            const Scalar xi = x[j + p - i][c];
            double t[4];
            if (!exact_product(ai.real(), xi.real(), t[0]) || !exact_product(ai.imag(), xi.imag(), t[1])
                || !exact_product(ai.real(), xi.imag(), t[2]) || !exact_product(ai.imag(), xi.real(), t[3])) {
                return false;
            }
            re.insert(re.end(), {-t[0], t[1]});
            im.insert(im.end(), {-t[2], -t[3]});
        }
        if (!exact_part(re) || !exact_part(im)) {
            return false;
        }
    }
    return true;
}

// Rounding scale of residual f_j: magnitudes entering x_{j+p} - sum a_i x_{j+p-i}.
// Zero where the evaluation is exact.
std::vector<double> residual_scales(const RecurrenceSpec& spec, const Sequence& x)
{
    const std::size_t p = spec.order();
    const auto a = spec.coefficients();
    std::vector<double> phi(x.size() - p);
    for (std::size_t j = 0; j < phi.size(); ++j) {
        if (exact_residual(spec, x, j)) {
            continue;
        }
        double scale = value_norm(x[j + p], spec.norm());
        for (std::size_t i = 1; i <= p; ++i) {
            scale += std::abs(a[i - 1]) * value_norm(x[j + p - i], spec.norm());
        }
        phi[j] = static_cast<double>(p + 1) * scale;
    }
    return phi;
}

double dim_factor(const RecurrenceSpec& spec)
{
    return spec.norm() == Norm::Euclid ? std::sqrt(static_cast<double>(spec.dim())) : 1.0;
}

double project_real(Sequence& values)
{
    const double discarded = values.max_imag();
    for (std::size_t n = 0; n < values.size(); ++n) {
        for (auto& c : values[n]) {
            c = {c.real(), 0.0};
        }
    }
    return discarded;
}

} // namespace

double ShadowResult::max_cert_error() const noexcept
{
    return cert_error.empty() ? 0.0 : *std::max_element(cert_error.begin(), cert_error.end());
}

ShadowResult shadow_direct(const RecurrenceSpec& spec, const RootSet& roots, const VandermondeData& data,
                           const Trajectory& traj, const ConstantResult& kr)
{
    check_inputs(spec, roots, data, traj);
    const std::size_t p = spec.order();
    const std::size_t d = spec.dim();
    const std::size_t length = traj.size();
    const Forcing f = residuals(spec, traj);
    const std::size_t observed = f.size(); // N - p

    // weight_s = ((-1)^p / V) E_s, so y_n = x_n - sum_s weight_s f_{n+s-1}.
    const Scalar sign_over_v = ((p % 2 == 0) ? 1.0 : -1.0) / data.determinant();
    std::vector<Scalar> weights(observed + 1);
    std::vector<double> majorants(observed + 1);
    ETermSequence e_terms(data);
    for (std::size_t s = 1; s <= observed; ++s) {
        weights[s] = sign_over_v * e_terms.next();
        majorants[s] = data.term_majorant(s);
    }
    const auto phi = residual_scales(spec, traj.values);
    const double kappa = dim_factor(spec);
    const double p_sq = static_cast<double>(p * p);

    ShadowResult out;
    out.shadow.values = Sequence(length, d);
    out.eps = f.eps();
    out.bound = kr.upper() * f.eps();
    out.cert_error.resize(length);
    out.truncation_error.resize(length);
    out.deviation.resize(length);

    for (std::size_t n = 0; n < length; ++n) {
        const std::size_t horizon = n < observed ? observed - n : 0;
        bool exact_shift = true;
        for (std::size_t c = 0; c < d; ++c) {
            ComplexCompensatedSum correction;
            for (std::size_t s = 1; s <= horizon; ++s) {
                correction += weights[s] * f[n + s - 1][c];
            }
                ComplexCompensatedSum y;
            y += traj[n][c];
            y += -correction.value();
            out.shadow.values[n][c] = y.value();
            exact_shift = exact_shift && correction.value() == Scalar{0.0};
        }

        double rounding = exact_shift ? 0.0 : value_norm(traj[n], spec.norm());
        for (std::size_t s = 1; s <= horizon; ++s) {
            const double fn = value_norm(f[n + s - 1], spec.norm());
            rounding += majorants[s] * ((static_cast<double>(s) + p_sq + 2.0) * fn + phi[n + s - 1]);
        }
        out.truncation_error[n] = f.eps() * tail_bound(roots, data, horizon);
        out.cert_error[n] = out.truncation_error[n] + 4.0 * kappa * unit_roundoff * rounding;
    }

    if (spec.field() == Field::Real) {
        out.discarded_imag = project_real(out.shadow.values);
    }

    for (std::size_t n = 0; n < length; ++n) {
        std::vector<Scalar> diff(d);
        for (std::size_t c = 0; c < d; ++c) {
            diff[c] = traj[n][c] - out.shadow.values[n][c];
        }
        out.deviation[n] = value_norm(diff, spec.norm());
        out.max_deviation = std::max(out.max_deviation, out.deviation[n]);
    }

    const auto solve = solve_vandermonde(roots, out.shadow.values.head(p));
    out.coefficients = solve.coefficients;
    out.ill_conditioned = solve.ill_conditioned;
    return out;
}

CoefficientShadow shadow_coefficients(const RecurrenceSpec& spec, const RootSet& roots,
                                      const VandermondeData& data, const Trajectory& traj)
{
    check_inputs(spec, roots, data, traj);
    const std::size_t p = spec.order();
    const std::size_t d = spec.dim();
    const std::size_t length = traj.size();
    const Forcing f = residuals(spec, traj);
    const std::size_t observed = f.size();
    const auto& r = data.roots();

    // x^{(P)}_n for n < p only touches lags n-s <= p-2, where the impulse
    // response vanishes, so zero padding the forcing is exact.
    Sequence padded(std::max(observed, p), d);
    for (std::size_t j = 0; j < observed; ++j) {
        std::copy(f[j].begin(), f[j].end(), padded[j].begin());
    }
    const Forcing padded_forcing(std::move(padded), spec.norm());

    Sequence homogeneous_part(p, d);
    double homogeneous_scale = 0.0;
    for (std::size_t n = 0; n < p; ++n) {
        const auto particular = particular_solution(data, padded_forcing, n);
        for (std::size_t c = 0; c < d; ++c) {
            homogeneous_part[n][c] = traj[n][c] - particular[c];
        }
        homogeneous_scale = std::max(homogeneous_scale, value_norm(homogeneous_part[n], spec.norm()));
    }
    const auto solve = solve_vandermonde(roots, homogeneous_part);

    CoefficientShadow out;
    out.coefficients = solve.coefficients;
    out.solve_residual = solve.residual;
    out.ill_conditioned = solve.ill_conditioned;

    std::vector<double> coefficient_error(p);
    for (std::size_t k = 0; k < p; ++k) {
        const Scalar w = data.kernel_weight(k);
        const Scalar inverse = 1.0 / r[k];
        double correction_scale = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            ComplexCompensatedSum sum;
            Scalar power{1.0};
            for (std::size_t s = 1; s <= observed; ++s) {
                power *= inverse;
                sum += f[s - 1][c] * power;
            }
            out.coefficients[k][c] += w * sum.value();
        }
        double power_modulus = 1.0;
        for (std::size_t s = 1; s <= observed; ++s) {
            power_modulus /= std::abs(r[k]);
            correction_scale += (static_cast<double>(s) + 2.0) * value_norm(f[s - 1], spec.norm()) * power_modulus;
        }
        // Row k of the inverse Vandermonde matrix has entries bounded by
        // prod_{j != k} (1 + |r_j|) / |r_k - r_j|.
        double inverse_row = 1.0;
        for (std::size_t j = 0; j < p; ++j) {
            if (j != k) {
                inverse_row *= (1.0 + std::abs(r[j])) / std::abs(r[k] - r[j]);
            }
        }
        coefficient_error[k] = 8.0 * static_cast<double>(p) * unit_roundoff
            * (std::abs(w) * correction_scale + inverse_row * homogeneous_scale * static_cast<double>(p)
               + value_norm(out.coefficients[k], spec.norm()));
    }

    out.shadow.values = Sequence(length, d);
    out.cert_error.resize(length);
    for (std::size_t n = 0; n < length; ++n) {
        double evaluation_scale = 0.0;
        double propagated = 0.0;
        std::vector<Scalar> powers(p);
        for (std::size_t k = 0; k < p; ++k) {
            powers[k] = ipow(r[k], static_cast<long long>(n));
            const double modulus = std::abs(powers[k]);
            evaluation_scale += value_norm(out.coefficients[k], spec.norm()) * modulus;
            propagated += coefficient_error[k] * modulus;
        }
        for (std::size_t c = 0; c < d; ++c) {
            ComplexCompensatedSum y;
            for (std::size_t k = 0; k < p; ++k) {
                y += out.coefficients[k][c] * powers[k];
            }
            out.shadow.values[n][c] = y.value();
        }
        const std::size_t horizon = n < observed ? observed - n : 0;
        out.cert_error[n] = f.eps() * tail_bound(roots, data, horizon) + propagated
            + 4.0 * (static_cast<double>(n) + static_cast<double>(p)) * unit_roundoff * evaluation_scale;
    }

    if (spec.field() == Field::Real) {
        project_real(out.shadow.values);
    }
    return out;
}

VerificationReport verify_shadow(const RecurrenceSpec& spec, const Trajectory& traj, const ShadowResult& result,
                                 const VerifyTolerances& tol)
{
    VerificationReport report;
    report.bound = result.bound;
    report.max_cert_error = result.max_cert_error();
    const std::size_t length = traj.size();
    if (result.shadow.size() != length || result.cert_error.size() != length) {
        report.message = "shadow and trajectory lengths differ";
        return report;
    }
    if (length <= spec.order()) {
        report.message = "trajectory must have more than p entries";
        return report;
    }

    report.residual = residuals(spec, result.shadow).eps();
    report.residual_ok = report.residual <= tol.residual * (1.0 + result.shadow.values.max_norm(spec.norm()));

    report.deviation_ok = true;
    std::size_t worst_index = 0;
    double worst_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < length; ++n) {
        std::vector<Scalar> diff(spec.dim());
        for (std::size_t c = 0; c < spec.dim(); ++c) {
            diff[c] = traj[n][c] - result.shadow[n][c];
        }
        const double deviation = value_norm(diff, spec.norm());
        report.max_deviation = std::max(report.max_deviation, deviation);
        const double excess = deviation - (result.bound + result.cert_error[n] + tol.deviation);
        if (excess > worst_excess) {
            worst_excess = excess;
            worst_index = n;
        }
        if (excess > 0.0) {
            report.deviation_ok = false;
        }
    }
    report.pass = report.residual_ok && report.deviation_ok;
    if (!report.residual_ok) {
        report.message = "shadow does not satisfy the homogeneous recurrence";
    } else if (!report.deviation_ok) {
        report.message = "deviation exceeds bound at index " + std::to_string(worst_index);
    }
    return report;
}

} // namespace ulam
