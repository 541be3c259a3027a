#include "ulam/vandermonde.hpp"

#include <algorithm>
#include <cmath>

#include "ulam/compensated.hpp"
#include "ulam/error.hpp"

namespace ulam {

Scalar vandermonde_determinant(std::span<const Scalar> nodes) noexcept
{
    Scalar v{1.0};
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            v *= nodes[j] - nodes[i];
        }
    }
    return v;
}

VandermondeData VandermondeData::build(const RootSet& roots)
{
    if (roots.size() == 0) {
        throw Error(ErrorKind::InvalidInput, "empty root set");
    }
    if (roots.near_degenerate || roots.classification == SpectralClass::NearDegenerate) {
        throw Error(ErrorKind::DegenerateRoots, "characteristic roots are not certifiably distinct");
    }
    VandermondeData data;
    data.roots_ = roots.roots;
    const std::size_t p = data.roots_.size();
    data.determinant_ = vandermonde_determinant(data.roots_);
    if (data.determinant_ == Scalar{0.0}) {
        throw Error(ErrorKind::DegenerateRoots, "Vandermonde determinant vanishes");
    }
    data.reduced_.resize(p);
    data.kernel_weights_.resize(p);
    std::vector<Scalar> others;
    others.reserve(p);
    for (std::size_t k = 0; k < p; ++k) {
        others.clear();
        for (std::size_t j = 0; j < p; ++j) {
            if (j != k) {
                others.push_back(data.roots_[j]);
            }
        }
        data.reduced_[k] = vandermonde_determinant(others);
        // (-1)^{p+k} with 1-based k is (-1)^{p+k0+1} for 0-based k0.
        const double sign = ((p + k + 1) % 2 == 0) ? 1.0 : -1.0;
        data.kernel_weights_[k] = sign * data.reduced_[k] / data.determinant_;
    }
    return data;
}

double VandermondeData::term_majorant(std::size_t s) const noexcept
{
    double total = 0.0;
    for (std::size_t k = 0; k < roots_.size(); ++k) {
        total += std::abs(reduced_[k]) * std::pow(std::abs(roots_[k]), -static_cast<double>(s));
    }
    return total / std::abs(determinant_);
}

ETerm e_term(const VandermondeData& data, std::size_t s)
{
    if (s == 0) {
        throw Error(ErrorKind::InvalidInput, "E_s is defined for s >= 1");
    }
    ComplexCompensatedSum sum;
    const auto roots = data.roots();
    const auto reduced = data.reduced();
    for (std::size_t k = 0; k < roots.size(); ++k) {
        const Scalar term = reduced[k] * ipow(roots[k], -static_cast<long long>(s));
        sum += (k % 2 == 0) ? term : -term;
    }
    const Scalar value = sum.value();
    return {s, value, std::abs(value)};
}

ETermSequence::ETermSequence(const VandermondeData& data) : data_(&data)
{
    const auto roots = data.roots();
    inverse_roots_.reserve(roots.size());
    for (const auto& r : roots) {
        inverse_roots_.push_back(1.0 / r);
    }
    powers_.assign(roots.size(), Scalar{1.0});
}

Scalar ETermSequence::next()
{
    ++s_;
    const auto reduced = data_->reduced();
    ComplexCompensatedSum sum;
    for (std::size_t k = 0; k < powers_.size(); ++k) {
        powers_[k] *= inverse_roots_[k];
        const Scalar term = reduced[k] * powers_[k];
        sum += (k % 2 == 0) ? term : -term;
    }
    return sum.value();
}

VandermondeSolve solve_vandermonde(const RootSet& roots, const Sequence& rhs)
{
    const std::size_t p = roots.size();
    if (roots.near_degenerate || roots.classification == SpectralClass::NearDegenerate) {
        throw Error(ErrorKind::DegenerateRoots, "Vandermonde solve needs distinct roots");
    }
    if (rhs.size() != p) {
        throw Error(ErrorKind::InvalidLength, "right-hand side must have p entries");
    }
    const std::size_t d = rhs.dim();
    const auto& x = roots.roots;

    VandermondeSolve out{Sequence(p, d), 0.0, false};
    std::vector<Scalar> b(p);
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t n = 0; n < p; ++n) {
            b[n] = rhs[n][c];
        }
        // Bjorck-Pereyra for the primal system: row n holds r_k^n.
        for (std::size_t k = 0; k + 1 < p; ++k) {
            for (std::size_t i = p - 1; i > k; --i) {
                b[i] -= x[k] * b[i - 1];
            }
        }
        for (std::size_t kk = p - 1; kk-- > 0;) {
            for (std::size_t i = kk + 1; i < p; ++i) {
                b[i] /= x[i] - x[i - kk - 1];
            }
            for (std::size_t i = kk; i + 1 < p; ++i) {
                b[i] -= b[i + 1];
            }
        }
        for (std::size_t k = 0; k < p; ++k) {
            out.coefficients[k][c] = b[k];
        }
    }

    for (std::size_t n = 0; n < p; ++n) {
        std::vector<Scalar> diff(d);
        for (std::size_t c = 0; c < d; ++c) {
            ComplexCompensatedSum sum;
            for (std::size_t k = 0; k < p; ++k) {
                sum += out.coefficients[k][c] * ipow(x[k], static_cast<long long>(n));
            }
            sum += -rhs[n][c];
            diff[c] = sum.value();
        }
        out.residual = std::max(out.residual, value_norm(diff, Norm::Sup));
    }
    out.ill_conditioned = out.residual > 1e-8 * rhs.max_norm(Norm::Sup);
    return out;
}

std::vector<Scalar> particular_solution(const VandermondeData& data, const Forcing& forcing, std::size_t n)
{
    const std::size_t d = std::max<std::size_t>(forcing.values().dim(), 1);
    std::vector<Scalar> out(d);
    if (n == 0) {
        return out;
    }
    if (forcing.size() < n) {
        throw Error(ErrorKind::MissingForcing, "particular solution at n needs f_0..f_{n-1}");
    }
    const auto roots = data.roots();
    const std::size_t p = roots.size();
    // h_m = sum_k w_k r_k^m, the response at lag m to a unit impulse.
    std::vector<Scalar> response(n);
    for (std::size_t m = 0; m < n; ++m) {
        ComplexCompensatedSum sum;
        for (std::size_t k = 0; k < p; ++k) {
            sum += data.kernel_weight(k) * ipow(roots[k], static_cast<long long>(m));
        }
        response[m] = sum.value();
    }
    for (std::size_t c = 0; c < d; ++c) {
        ComplexCompensatedSum sum;
        for (std::size_t s = 1; s <= n; ++s) {
            sum += response[n - s] * forcing[s - 1][c];
        }
        out[c] = sum.value();
    }
    return out;
}

} // namespace ulam
