#pragma once

// Generators and independent references shared by the unit and acceptance
// suites. Nothing here calls into the shadowing or constant code paths.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "ulam/recurrence.hpp"

namespace ulam::testing {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0)
    {
        return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53);
    }

    std::size_t index(std::size_t lo, std::size_t hi) // inclusive
    {
        return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1));
    }

    Scalar in_disc(double radius)
    {
        const double r = radius * std::sqrt(uniform());
        return std::polar(r, 2.0 * std::numbers::pi * uniform());
    }

private:
    std::mt19937_64 engine_;
};

struct RootSpec {
    std::vector<Scalar> roots;
    Field field = Field::Complex;
};

/// p distinct roots with moduli in [lo, hi] and pairwise separation >= sep.
/// With `real_field`, non-real roots are drawn in conjugate pairs.
inline RootSpec random_roots(Rng& rng, std::size_t p, double lo, double hi, double sep, bool real_field = false)
{
    RootSpec out;
    out.field = real_field ? Field::Real : Field::Complex;
    auto separated = [&](Scalar z) {
        for (const auto& r : out.roots) {
            if (std::abs(r - z) < sep) {
                return false;
            }
        }
        return true;
    };
    while (out.roots.size() < p) {
        const double modulus = rng.uniform(lo, hi);
        if (real_field) {
            const std::size_t left = p - out.roots.size();
            if (left >= 2 && rng.uniform() < 0.6) {
                const double angle = rng.uniform(0.05, std::numbers::pi - 0.05);
                const Scalar z = std::polar(modulus, angle);
                if (std::abs(z - std::conj(z)) >= sep && separated(z) && separated(std::conj(z))) {
                    out.roots.push_back(z);
                    out.roots.push_back(std::conj(z));
                }
            } else {
                const Scalar z{rng.uniform() < 0.5 ? -modulus : modulus, 0.0};
                if (separated(z)) {
                    out.roots.push_back(z);
                }
            }
        } else {
            const Scalar z = std::polar(modulus, rng.uniform(0.0, 2.0 * std::numbers::pi));
            if (separated(z)) {
                out.roots.push_back(z);
            }
        }
    }
    return out;
}

/// Coefficients a_1..a_p with prod_k (r - r_k) = r^p - a_1 r^{p-1} - ... - a_p.
inline std::vector<Scalar> coefficients_from_roots(const std::vector<Scalar>& roots, bool real_field)
{
    std::vector<Scalar> poly{Scalar{1.0}};
    for (const auto& r : roots) {
        std::vector<Scalar> next(poly.size() + 1, Scalar{0.0});
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= r * poly[i];
        }
        poly = std::move(next);
    }
    std::vector<Scalar> a;
    for (std::size_t i = 1; i < poly.size(); ++i) {
        a.push_back(real_field ? Scalar{-poly[i].real(), 0.0} : -poly[i]);
    }
    return a;
}

inline RecurrenceSpec spec_from_roots(const RootSpec& rs, std::size_t dim = 1, Norm norm = Norm::Sup)
{
    return RecurrenceSpec(coefficients_from_roots(rs.roots, rs.field == Field::Real), rs.field, dim, norm);
}

/// Random forcing with ||f_n|| <= eps (sup or euclid), at least one entry at eps.
inline Sequence random_forcing(Rng& rng, std::size_t length, std::size_t dim, double eps, Field field,
                               Norm norm = Norm::Sup)
{
    Sequence f(length, dim);
    for (std::size_t n = 0; n < length; ++n) {
        for (std::size_t c = 0; c < dim; ++c) {
            f[n][c] = field == Field::Real ? Scalar{rng.uniform(-1.0, 1.0), 0.0} : rng.in_disc(1.0);
        }
        double scale = value_norm(f[n], norm);
        const double target = (n == 0 ? 1.0 : rng.uniform()) * eps;
        for (auto& c : f[n]) {
            c *= scale > 0.0 ? target / scale : 0.0;
        }
    }
    return f;
}

/// Backward recursion x_n = (x_{n+p} - sum_{i<p} a_i x_{n+p-i} - f_n) / a_p,
/// started from the last p values. Stable when every root is outside the disc.
inline Sequence backward_trajectory(const RecurrenceSpec& spec, const Sequence& final_values, const Sequence& forcing,
                                    std::size_t length)
{
    const std::size_t p = spec.order();
    const std::size_t d = spec.dim();
    const auto a = spec.coefficients();
    Sequence x(length, d);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t c = 0; c < d; ++c) {
            x[length - p + i][c] = final_values[i][c];
        }
    }
    for (std::size_t n = length - p; n-- > 0;) {
        for (std::size_t c = 0; c < d; ++c) {
            Scalar acc = x[n + p][c];
            for (std::size_t i = 1; i < p; ++i) {
                acc -= a[i - 1] * x[n + p - i][c];
            }
            if (n < forcing.size()) {
                acc -= forcing[n][c];
            }
            x[n][c] = acc / a[p - 1];
        }
    }
    return x;
}

/// Approximate trajectory of length N, O(1) everywhere, with residuals
/// f_0..f_{N-p-1} = `forcing`; its exact nearest solution under zero
/// extension of the forcing is the homogeneous backward run from the same end.
struct SyntheticCase {
    RecurrenceSpec spec;
    Sequence forcing;
    Sequence trajectory;
    Sequence homogeneous; ///< reference shadow
};

inline SyntheticCase synthetic_case(Rng& rng, const RootSpec& rs, std::size_t length, double eps, std::size_t dim = 1,
                                    Norm norm = Norm::Sup)
{
    RecurrenceSpec spec = spec_from_roots(rs, dim, norm);
    const std::size_t p = spec.order();
    Sequence final_values(p, dim);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t c = 0; c < dim; ++c) {
            final_values[i][c] = rs.field == Field::Real ? Scalar{rng.uniform(-1.0, 1.0), 0.0} : rng.in_disc(1.0);
        }
    }
    Sequence forcing = random_forcing(rng, length - p, dim, eps, rs.field, norm);
    Sequence traj = backward_trajectory(spec, final_values, forcing, length);
    Sequence hom = backward_trajectory(spec, final_values, Sequence(0, dim), length);
    return {std::move(spec), std::move(forcing), std::move(traj), std::move(hom)};
}

} // namespace ulam::testing
