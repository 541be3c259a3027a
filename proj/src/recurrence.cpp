#include "ulam/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "ulam/compensated.hpp"
#include "ulam/error.hpp"

namespace ulam {

// ---------------------------------------------------------------------------
// Sequence

double value_norm(std::span<const Scalar> value, Norm norm) noexcept
{
    double result = 0.0;
    if (norm == Norm::Sup) {
        for (const auto& c : value) {
            result = std::max(result, std::abs(c));
        }
        return result;
    }
    for (const auto& c : value) {
        result = std::hypot(result, std::abs(c));
    }
    return result;
}

Sequence::Sequence(std::size_t length, std::size_t dim) : dim_(dim), data_(length * dim) {}

Sequence Sequence::from_scalars(std::span<const Scalar> values)
{
    Sequence out(values.size(), 1);
    std::copy(values.begin(), values.end(), out.data_.begin());
    return out;
}

Sequence Sequence::from_scalars(std::initializer_list<Scalar> values)
{
    return from_scalars(std::span<const Scalar>(values.begin(), values.size()));
}

Sequence Sequence::head(std::size_t count) const
{
    count = std::min(count, size());
    Sequence out(count, dim_);
    std::copy_n(data_.begin(), count * dim_, out.data_.begin());
    return out;
}

double Sequence::max_norm(Norm norm) const noexcept
{
    double result = 0.0;
    for (std::size_t n = 0; n < size(); ++n) {
        result = std::max(result, value_norm((*this)[n], norm));
    }
    return result;
}

double Sequence::max_imag() const noexcept
{
    double result = 0.0;
    for (const auto& c : data_) {
        result = std::max(result, std::abs(c.imag()));
    }
    return result;
}

// ---------------------------------------------------------------------------
// RecurrenceSpec

RecurrenceSpec::RecurrenceSpec(std::vector<Scalar> coefficients, Field field, std::size_t dim, Norm norm)
    : coefficients_(std::move(coefficients)), field_(field), dim_(dim), norm_(norm)
{
    if (coefficients_.empty()) {
        throw Error(ErrorKind::InvalidSpec, "order p must be at least 1");
    }
    if (dim_ == 0) {
        throw Error(ErrorKind::InvalidSpec, "dim must be at least 1");
    }
    for (const auto& a : coefficients_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw Error(ErrorKind::InvalidSpec, "coefficients must be finite");
        }
        if (field_ == Field::Real && a.imag() != 0.0) {
            throw Error(ErrorKind::InvalidSpec, "real field requires real coefficients");
        }
    }
    if (coefficients_.back() == Scalar{0.0}) {
        throw Error(ErrorKind::InvalidSpec, "a_p must be nonzero");
    }
}

std::vector<Scalar> RecurrenceSpec::characteristic_polynomial() const
{
    std::vector<Scalar> poly;
    poly.reserve(order() + 1);
    poly.emplace_back(1.0);
    for (const auto& a : coefficients_) {
        poly.push_back(-a);
    }
    return poly;
}

// ---------------------------------------------------------------------------
// Roots

namespace {

constexpr double unit_roundoff = std::numeric_limits<double>::epsilon() / 2;

struct HornerValue {
    Scalar value;
    Scalar derivative;
    double scale; // sum |c_i| |r|^{p-i}
};

HornerValue horner(std::span<const Scalar> poly, Scalar r)
{
    Scalar value = poly[0];
    Scalar derivative{0.0};
    double scale = std::abs(poly[0]);
    const double modulus = std::abs(r);
    for (std::size_t i = 1; i < poly.size(); ++i) {
        derivative = derivative * r + value;
        value = value * r + poly[i];
        scale = scale * modulus + std::abs(poly[i]);
    }
    return {value, derivative, scale};
}

// Simultaneous Aberth-Ehrlich iteration. A step for root k is only taken when
// it lowers |q(r_k)|, so roots already at rounding level stay put.
bool refine_aberth(std::span<const Scalar> poly, std::vector<Scalar>& roots, const RootConfig& cfg)
{
    const std::size_t p = roots.size();
    auto converged = [&](std::size_t k) {
        const auto h = horner(poly, roots[k]);
        return std::abs(h.value) <= cfg.residual_tol * h.scale;
    };
    auto all_converged = [&] {
        for (std::size_t k = 0; k < p; ++k) {
            if (!converged(k)) {
                return false;
            }
        }
        return true;
    };

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        if (all_converged()) {
            return true;
        }
        std::vector<Scalar> next = roots;
        bool moved = false;
        for (std::size_t k = 0; k < p; ++k) {
            const auto h = horner(poly, roots[k]);
            if (h.value == Scalar{0.0} || h.derivative == Scalar{0.0}) {
                continue;
            }
            const Scalar newton = h.value / h.derivative;
            Scalar repulsion{0.0};
            for (std::size_t j = 0; j < p; ++j) {
                if (j != k && roots[j] != roots[k]) {
                    repulsion += 1.0 / (roots[k] - roots[j]);
                }
            }
            const Scalar denom = 1.0 - newton * repulsion;
            const Scalar step = denom == Scalar{0.0} ? newton : newton / denom;
            const Scalar candidate = roots[k] - step;
            if (std::isfinite(candidate.real()) && std::isfinite(candidate.imag())
                && std::abs(horner(poly, candidate).value) < std::abs(h.value)) {
                next[k] = candidate;
                moved = true;
            }
        }
        roots = std::move(next);
        if (!moved) {
            break;
        }
    }
    return all_converged();
}

void pair_conjugates(std::vector<Scalar>& roots, double pairing_tol)
{
    const std::size_t p = roots.size();
    std::vector<bool> done(p, false);
    for (std::size_t k = 0; k < p; ++k) {
        if (std::abs(roots[k].imag()) <= pairing_tol * std::max(1.0, std::abs(roots[k]))) {
            roots[k] = {roots[k].real(), 0.0};
            done[k] = true;
        }
    }
    for (std::size_t k = 0; k < p; ++k) {
        if (done[k] || roots[k].imag() < 0.0) {
            continue;
        }
        std::size_t best = p;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < p; ++j) {
            if (!done[j] && j != k && roots[j].imag() < 0.0) {
                const double d = std::abs(roots[j] - std::conj(roots[k]));
                if (d < best_dist) {
                    best_dist = d;
                    best = j;
                }
            }
        }
        if (best == p) {
            continue;
        }
        const Scalar mean = 0.5 * (roots[k] + std::conj(roots[best]));
        roots[k] = mean;
        roots[best] = std::conj(mean);
        done[k] = done[best] = true;
    }
    // Non-real roots of a real polynomial come in pairs; a leftover is real.
    for (std::size_t k = 0; k < p; ++k) {
        if (!done[k]) {
            roots[k] = {roots[k].real(), 0.0};
        }
    }
}

// Overlapping disks say nothing useful about a cluster of m roots. Around the
// centroid c the cluster product is about |q(c)| / prod_{j outside} |c - r_j|,
// so the members sit within spread + 2 (p |q(c)| / prod)^{1/m}.
void tighten_cluster_radii(RootSet& set, std::span<const Scalar> poly)
{
    const std::size_t p = set.roots.size();
    std::vector<std::size_t> label(p);
    for (std::size_t k = 0; k < p; ++k) {
        label[k] = k;
    }
    auto find = [&](std::size_t k) {
        while (label[k] != k) {
            k = label[k] = label[label[k]];
        }
        return k;
    };
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            if (std::abs(set.roots[i] - set.roots[j]) <= set.radii[i] + set.radii[j]) {
                label[find(i)] = find(j);
            }
        }
    }
    for (std::size_t root = 0; root < p; ++root) {
        std::vector<std::size_t> members;
        for (std::size_t k = 0; k < p; ++k) {
            if (find(k) == root) {
                members.push_back(k);
            }
        }
        if (members.size() < 2) {
            continue;
        }
        Scalar centre{0.0};
        for (auto k : members) {
            centre += set.roots[k];
        }
        centre /= static_cast<double>(members.size());
        double spread = 0.0;
        for (auto k : members) {
            spread = std::max(spread, std::abs(set.roots[k] - centre));
        }
        double outside = 1.0;
        for (std::size_t j = 0; j < p; ++j) {
            if (find(j) != root) {
                outside *= std::abs(centre - set.roots[j]);
            }
        }
        if (outside == 0.0) {
            continue;
        }
        const auto h = horner(poly, centre);
        const double effective = std::abs(h.value) + 2.0 * static_cast<double>(p) * unit_roundoff * h.scale;
        const double radius = spread
            + 2.0 * std::pow(static_cast<double>(p) * effective / outside, 1.0 / static_cast<double>(members.size()));
        for (auto k : members) {
            set.radii[k] = std::min(set.radii[k], radius);
        }
    }
}

void populate(RootSet& set, const ToleranceConfig& tol)
{
    const std::size_t p = set.roots.size();
    set.moduli.resize(p);
    for (std::size_t k = 0; k < p; ++k) {
        set.moduli[k] = std::abs(set.roots[k]);
    }
    if (set.radii.size() != p) {
        set.radii.assign(p, 0.0);
    }
    set.min_separation = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            set.min_separation = std::min(set.min_separation, std::abs(set.roots[i] - set.roots[j]));
        }
    }
    if (p < 2) {
        set.min_separation = 0.0;
    }

    set.on_unit_circle = false;
    for (std::size_t k = 0; k < p; ++k) {
        if (std::abs(set.moduli[k] - 1.0) <= tol.unit_circle + set.radii[k]) {
            set.on_unit_circle = true;
        }
    }
    set.near_degenerate = false;
    if (p >= 2) {
        if (set.min_separation <= tol.separation * set.max_modulus()) {
            set.near_degenerate = true;
        }
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = i + 1; j < p; ++j) {
                if (std::abs(set.roots[i] - set.roots[j]) <= set.radii[i] + set.radii[j]) {
                    set.near_degenerate = true;
                }
            }
        }
    }
    set.classification = classify_roots(set, tol);
}

} // namespace

double RootSet::min_modulus() const noexcept
{
    return moduli.empty() ? 0.0 : *std::min_element(moduli.begin(), moduli.end());
}

double RootSet::max_modulus() const noexcept
{
    return moduli.empty() ? 0.0 : *std::max_element(moduli.begin(), moduli.end());
}

RootSet RootSet::from_roots(std::vector<Scalar> roots, const ToleranceConfig& tol)
{
    if (roots.empty()) {
        throw Error(ErrorKind::InvalidInput, "root set must be nonempty");
    }
    RootSet set;
    set.roots = std::move(roots);
    populate(set, tol);
    return set;
}

SpectralClass classify_roots(const RootSet& roots, const ToleranceConfig& tol)
{
    const std::size_t p = roots.roots.size();
    bool on_circle = false;
    bool all_outside = true;
    for (std::size_t k = 0; k < p; ++k) {
        const double modulus = std::abs(roots.roots[k]);
        const double radius = k < roots.radii.size() ? roots.radii[k] : 0.0;
        if (std::abs(modulus - 1.0) <= tol.unit_circle + radius) {
            on_circle = true;
        }
        if (!(modulus > 1.0 + tol.unit_circle)) {
            all_outside = false;
        }
    }
    if (on_circle) {
        return SpectralClass::OnUnitCircle;
    }

    double max_modulus = 0.0;
    for (const auto& r : roots.roots) {
        max_modulus = std::max(max_modulus, std::abs(r));
    }
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            const double d = std::abs(roots.roots[i] - roots.roots[j]);
            const double ri = i < roots.radii.size() ? roots.radii[i] : 0.0;
            const double rj = j < roots.radii.size() ? roots.radii[j] : 0.0;
            if (d <= tol.separation * max_modulus || d <= ri + rj) {
                return SpectralClass::NearDegenerate;
            }
        }
    }
    return all_outside ? SpectralClass::AllOutsideUnitDisc : SpectralClass::HyperbolicMixed;
}

RootSet characteristic_roots(const RecurrenceSpec& spec, const RootConfig& cfg)
{
    const std::size_t p = spec.order();
    const auto poly = spec.characteristic_polynomial();
    const auto a = spec.coefficients();

    std::vector<Scalar> roots(p);
    if (p == 1) {
        roots[0] = a[0];
    } else {
        Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(p),
                                                            static_cast<Eigen::Index>(p));
        for (std::size_t j = 0; j < p; ++j) {
            companion(0, static_cast<Eigen::Index>(j)) = a[j];
        }
        for (std::size_t i = 1; i < p; ++i) {
            companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
        if (solver.info() != Eigen::Success) {
            throw Error(ErrorKind::NonConvergence, "companion eigenvalue computation failed");
        }
        for (std::size_t k = 0; k < p; ++k) {
            roots[k] = solver.eigenvalues()(static_cast<Eigen::Index>(k));
        }
        if (!refine_aberth(poly, roots, cfg)) {
            throw Error(ErrorKind::NonConvergence,
                        "root refinement did not reach the residual tolerance within max_iter");
        }
    }

    if (spec.field() == Field::Real) {
        pair_conjugates(roots, cfg.pairing_tol);
    }

    std::sort(roots.begin(), roots.end(), [](const Scalar& x, const Scalar& y) {
        const double mx = std::abs(x);
        const double my = std::abs(y);
        if (mx != my) {
            return mx < my;
        }
        return std::arg(x) < std::arg(y);
    });

    RootSet set;
    set.roots = std::move(roots);
    set.radii.assign(p, 0.0);
    for (std::size_t k = 0; k < p; ++k) {
        const auto h = horner(poly, set.roots[k]);
        const double residual = std::abs(h.value);
        set.residual_bound = std::max(set.residual_bound, residual);
        // Weierstrass inclusion disk: |q(r_k)| / |prod_{j != k} (r_k - r_j)| times p,
        // with the Horner rounding bound added to the residual.
        double separation_product = 1.0;
        for (std::size_t j = 0; j < p; ++j) {
            if (j != k) {
                separation_product *= std::abs(set.roots[k] - set.roots[j]);
            }
        }
        const double effective = residual + 2.0 * static_cast<double>(p) * unit_roundoff * h.scale;
        set.radii[k] = separation_product == 0.0
            ? std::numeric_limits<double>::infinity()
            : static_cast<double>(p) * effective / separation_product;
    }
    tighten_cluster_radii(set, poly);
    populate(set, cfg.tolerances);
    return set;
}

// ---------------------------------------------------------------------------
// Forcing, simulate, residuals

Forcing::Forcing(Sequence values, Norm norm)
    : values_(std::move(values)), eps_(values_.max_norm(norm)), norm_(norm)
{
}

Trajectory simulate(const RecurrenceSpec& spec, const Sequence& initial, const Forcing& forcing,
                    std::size_t n_steps)
{
    const std::size_t p = spec.order();
    const std::size_t d = spec.dim();
    if (n_steps < p) {
        throw Error(ErrorKind::InvalidLength, "n_steps must be at least the order p");
    }
    if (initial.size() != p || initial.dim() != d) {
        throw Error(ErrorKind::InvalidLength, "initial values must be p entries of dimension dim");
    }
    if (!forcing.values().empty() && forcing.values().dim() != d) {
        throw Error(ErrorKind::InvalidInput, "forcing dimension does not match spec dim");
    }

    const auto a = spec.coefficients();
    Trajectory traj{Sequence(n_steps, d), 0};
    for (std::size_t n = 0; n < p; ++n) {
        std::copy(initial[n].begin(), initial[n].end(), traj.values[n].begin());
    }
    for (std::size_t n = 0; n + p < n_steps; ++n) {
        const bool has_forcing = n < forcing.size();
        if (!has_forcing) {
            ++traj.zero_filled_forcing;
        }
        for (std::size_t c = 0; c < d; ++c) {
            ComplexCompensatedSum sum;
            for (std::size_t i = 1; i <= p; ++i) {
                sum += a[i - 1] * traj.values[n + p - i][c];
            }
            if (has_forcing) {
                sum += forcing[n][c];
            }
            traj.values[n + p][c] = sum.value();
        }
    }
    return traj;
}

Forcing residuals(const RecurrenceSpec& spec, const Sequence& traj)
{
    const std::size_t p = spec.order();
    const std::size_t d = spec.dim();
    if (traj.size() <= p) {
        throw Error(ErrorKind::InvalidLength, "trajectory must have more than p entries");
    }
    if (traj.dim() != d) {
        throw Error(ErrorKind::InvalidInput, "trajectory dimension does not match spec dim");
    }
    const auto a = spec.coefficients();
    Sequence f(traj.size() - p, d);
    for (std::size_t n = 0; n + p < traj.size(); ++n) {
        for (std::size_t c = 0; c < d; ++c) {
            ComplexCompensatedSum sum;
            sum += traj[n + p][c];
            for (std::size_t i = 1; i <= p; ++i) {
                sum += -(a[i - 1] * traj[n + p - i][c]);
            }
            f[n][c] = sum.value();
        }
    }
    return Forcing(std::move(f), spec.norm());
}

} // namespace ulam
