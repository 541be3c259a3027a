#include "ulam/constants.hpp"

#include <cmath>
#include <string>

#include "ulam/compensated.hpp"
#include "ulam/error.hpp"

namespace ulam {

namespace {

void require_outside(const RootSet& roots, std::string_view what)
{
    if (roots.on_unit_circle || roots.classification == SpectralClass::OnUnitCircle) {
        throw Error(ErrorKind::NotUlamStable,
                    std::string(what) + ": a characteristic root lies on the unit circle");
    }
    if (roots.classification != SpectralClass::AllOutsideUnitDisc) {
        throw Error(ErrorKind::NotApplicable,
                    std::string(what) + " requires every root outside the closed unit disc (got "
                        + std::string(to_string(roots.classification)) + ")");
    }
}

// Geometric tail for a series sum_s |sum_k c_k r_k^{-s}| given |c_k| and |r_k|.
double geometric_tail(std::span<const double> weights, std::span<const double> moduli, std::size_t terms)
{
    double total = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        total += weights[k] * std::pow(moduli[k], -static_cast<double>(terms)) / (moduli[k] - 1.0);
    }
    return total;
}

} // namespace

ConstantResult classical_constant(const RootSet& roots)
{
    if (roots.on_unit_circle || roots.classification == SpectralClass::OnUnitCircle) {
        throw Error(ErrorKind::NotUlamStable, "a characteristic root lies on the unit circle");
    }
    double product = 1.0;
    for (const auto& r : roots.roots) {
        product *= std::abs(r) - 1.0;
    }
    return {1.0 / std::abs(product), 0, 0.0, ConstantKind::Classical};
}

double tail_bound(const RootSet& roots, const VandermondeData& data, std::size_t terms)
{
    for (const auto& r : roots.roots) {
        if (!(std::abs(r) > 1.0)) {
            throw Error(ErrorKind::NotApplicable, "tail bound needs every |r_k| > 1");
        }
    }
    const auto data_roots = data.roots();
    const auto reduced = data.reduced();
    double total = 0.0;
    for (std::size_t k = 0; k < data_roots.size(); ++k) {
        const double modulus = std::abs(data_roots[k]);
        total += std::abs(reduced[k]) * std::pow(modulus, -static_cast<double>(terms)) / (modulus - 1.0);
    }
    return total / std::abs(data.determinant());
}

std::size_t terms_for_tolerance(const RootSet& roots, const VandermondeData& data, double tol,
                                std::size_t max_terms)
{
    // tail_bound(S) = sum_k w_k rho_k^{-S}; each term is decreasing, so the
    // crossing is found by bisection after a doubling search.
    if (tail_bound(roots, data, 0) <= tol) {
        return 0;
    }
    std::size_t hi = 1;
    while (tail_bound(roots, data, hi) > tol) {
        if (hi >= max_terms) {
            throw Error(ErrorKind::TolUnreachable,
                        "series tolerance " + std::to_string(tol) + " needs more than "
                            + std::to_string(max_terms) + " terms");
        }
        hi = std::min(hi * 2, max_terms);
    }
    std::size_t lo = hi / 2; // tail_bound(lo) > tol
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (tail_bound(roots, data, mid) <= tol) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

ConstantResult best_constant(const RootSet& roots, const VandermondeData& data, const SeriesConfig& cfg)
{
    require_outside(roots, "best constant");
    if (!(cfg.tol > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "series tolerance must be positive");
    }
    const std::size_t terms = terms_for_tolerance(roots, data, cfg.tol, cfg.max_terms);
    ETermSequence sequence(data);
    CompensatedSum sum;
    for (std::size_t s = 1; s <= terms; ++s) {
        sum += std::abs(sequence.next());
    }
    const double value = sum.value() / std::abs(data.determinant());
    return {value, terms, tail_bound(roots, data, terms), ConstantKind::BestOutside};
}

std::optional<double> closed_form_small_order(const RootSet& roots, const SeriesConfig& cfg)
{
    const std::size_t p = roots.size();
    if (p != 2 && p != 3) {
        return std::nullopt;
    }
    for (const auto& r : roots.roots) {
        if (!(std::abs(r) > 1.0)) {
            throw Error(ErrorKind::NotApplicable, "closed form needs every |r_k| > 1");
        }
    }
    const auto& r = roots.roots;

    std::vector<Scalar> numerators;
    Scalar denominator;
    if (p == 2) {
        numerators = {Scalar{1.0}, Scalar{-1.0}};
        denominator = r[0] - r[1];
    } else {
        numerators = {r[2] - r[1], r[0] - r[2], r[1] - r[0]};
        denominator = (r[2] - r[0]) * (r[2] - r[1]) * (r[1] - r[0]);
    }
    const double scale = 1.0 / std::abs(denominator);
    std::vector<double> weights;
    std::vector<double> moduli;
    for (std::size_t k = 0; k < p; ++k) {
        weights.push_back(std::abs(numerators[k]) * scale);
        moduli.push_back(std::abs(r[k]));
    }

    std::size_t terms = 0;
    while (geometric_tail(weights, moduli, terms) > cfg.tol) {
        if (++terms > cfg.max_terms) {
            throw Error(ErrorKind::TolUnreachable, "closed form series does not converge within max_terms");
        }
    }

    CompensatedSum sum;
    for (std::size_t s = 1; s <= terms; ++s) {
        ComplexCompensatedSum term;
        for (std::size_t k = 0; k < p; ++k) {
            term += numerators[k] * ipow(r[k], -static_cast<long long>(s));
        }
        sum += std::abs(term.value());
    }
    return sum.value() * scale;
}

} // namespace ulam
