#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "ulam/recurrence.hpp"
#include "ulam/vandermonde.hpp"

namespace ulam {

enum class ConstantKind { Classical, BestOutside };

constexpr std::string_view to_string(ConstantKind kind) noexcept
{
    return kind == ConstantKind::Classical ? "Classical" : "BestOutside";
}

/// A constant with its certificate. For BestOutside the true value lies in
/// [value, value + tail_bound]; the partial sum never overestimates.
struct ConstantResult {
    double value = 0.0;
    std::size_t terms_used = 0;
    double tail_bound = 0.0;
    ConstantKind kind = ConstantKind::Classical;

    double lower() const noexcept { return value; }
    double upper() const noexcept { return value + tail_bound; }
};

struct SeriesConfig {
    double tol = 1e-10;
    std::size_t max_terms = 100000;
};

/// 1 / |prod_k (|r_k| - 1)|. Throws NotUlamStable when a root touches the unit circle.
ConstantResult classical_constant(const RootSet& roots);

/// Sharp constant (1/|V|) sum_{s>=1} |E_s|, truncated at the first S whose
/// geometric tail bound is <= tol.
ConstantResult best_constant(const RootSet& roots, const VandermondeData& data, const SeriesConfig& cfg = {});

/// (1/|V|) sum_k |V_k| |r_k|^{-S} / (|r_k| - 1), which dominates sum_{s>S} |E_s| / |V|.
double tail_bound(const RootSet& roots, const VandermondeData& data, std::size_t terms);

/// Smallest S with tail_bound(S) <= tol; throws TolUnreachable above max_terms.
std::size_t terms_for_tolerance(const RootSet& roots, const VandermondeData& data, double tol,
                                std::size_t max_terms = SeriesConfig{}.max_terms);

/// Order-2 and order-3 specialisations written directly in the roots, used to
/// cross-check best_constant. Empty for other orders.
std::optional<double> closed_form_small_order(const RootSet& roots, const SeriesConfig& cfg = {});

} // namespace ulam
