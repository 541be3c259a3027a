#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ulam/recurrence.hpp"

namespace ulam {

/// Vandermonde determinant V = prod_{i<j} (r_j - r_i) of the characteristic
/// roots together with the reduced determinants V_k (root k omitted).
class VandermondeData {
public:
    /// Throws DegenerateRoots when the roots are not certifiably distinct.
    static VandermondeData build(const RootSet& roots);

    std::size_t order() const noexcept { return roots_.size(); }
    Scalar determinant() const noexcept { return determinant_; }
    std::span<const Scalar> reduced() const noexcept { return reduced_; }
    std::span<const Scalar> roots() const noexcept { return roots_; }

    /// (-1)^{p+k} V_k / V for 1-based k (passed 0-based). Equals 1/q'(r_k).
    Scalar kernel_weight(std::size_t k) const noexcept { return kernel_weights_[k]; }

    /// (1/|V|) sum_k |V_k| |r_k|^{-s}: majorant of |E_s| / |V|.
    double term_majorant(std::size_t s) const noexcept;

private:
    std::vector<Scalar> roots_;
    Scalar determinant_{1.0};
    std::vector<Scalar> reduced_;
    std::vector<Scalar> kernel_weights_;
};

/// Product-formula Vandermonde determinant of an arbitrary node list.
Scalar vandermonde_determinant(std::span<const Scalar> nodes) noexcept;

struct ETerm {
    std::size_t s = 0;
    Scalar value;
    double magnitude = 0.0;
};

/// E_s = V_1/r_1^s - V_2/r_2^s + ... + (-1)^{p+1} V_p/r_p^s, s >= 1.
ETerm e_term(const VandermondeData& data, std::size_t s);

/// Streams E_1, E_2, ... using running powers of 1/r_k.
class ETermSequence {
public:
    explicit ETermSequence(const VandermondeData& data);
    /// Advances to the next index and returns E_s.
    Scalar next();
    std::size_t index() const noexcept { return s_; }

private:
    const VandermondeData* data_;
    std::vector<Scalar> inverse_roots_;
    std::vector<Scalar> powers_;
    std::size_t s_ = 0;
};

struct VandermondeSolve {
    Sequence coefficients; ///< p entries of dimension d
    double residual = 0.0; ///< max_n || sum_k C_k r_k^n - rhs_n ||, n = 0..p-1 (sup norm)
    bool ill_conditioned = false;
};

/// Solves sum_k C_k r_k^n = rhs_n for n = 0..p-1, coordinatewise, with the
/// Bjorck-Pereyra O(p^2) scheme.
VandermondeSolve solve_vandermonde(const RootSet& roots, const Sequence& rhs);

/// x_n^{(P)} = (1/V) sum_{s=1}^n sum_k (-1)^{p+k} V_k r_k^{n-s} f_{s-1}.
/// Returns a d-vector; zero for n = 0.
std::vector<Scalar> particular_solution(const VandermondeData& data, const Forcing& forcing, std::size_t n);

} // namespace ulam
