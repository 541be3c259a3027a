#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ulam/vandermonde.hpp"

namespace ulam::oracle {

// Deliberately naive references. They share no code path with the
// production routines they are used to check.

using Matrix = std::vector<std::vector<Scalar>>;

struct OracleConfig {
    static constexpr std::size_t hard_cap = 8;
    std::size_t max_order = 6; ///< permutation expansion limit, at most hard_cap
    std::size_t ref_factor = 4; ///< reference horizon as a multiple of the checked S
};

/// Signed permutation expansion. Throws TooLarge above the configured order.
Scalar det_bruteforce(const Matrix& matrix, const OracleConfig& cfg = {});

/// Rows are powers: entry (i, j) = nodes[j]^i.
Matrix vandermonde_matrix(std::span<const Scalar> nodes);

/// (1/|V|) sum_{s=1}^{S} |E_s| with E_s from direct powers and plain compensated summation.
double reference_sum(const VandermondeData& data, std::size_t terms);

/// Forward sum of |E_s|/|V| for s in (from, to], direct powers.
double reference_tail(const VandermondeData& data, std::size_t from, std::size_t to);

} // namespace ulam::oracle
