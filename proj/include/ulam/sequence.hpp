#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ulam {

using Scalar = std::complex<double>;

enum class Field { Real, Complex };
enum class Norm { Sup, Euclid };

/// Norm of one element of the value space C^d.
double value_norm(std::span<const Scalar> value, Norm norm) noexcept;

/// A finite sequence of d-dimensional values, stored row-major (index, component).
class Sequence {
public:
    Sequence() = default;
    Sequence(std::size_t length, std::size_t dim);

    /// One-dimensional sequence from scalars.
    static Sequence from_scalars(std::span<const Scalar> values);
    static Sequence from_scalars(std::initializer_list<Scalar> values);

    std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return data_.empty(); }

    std::span<Scalar> operator[](std::size_t n) noexcept { return {data_.data() + n * dim_, dim_}; }
    std::span<const Scalar> operator[](std::size_t n) const noexcept
    {
        return {data_.data() + n * dim_, dim_};
    }

    const std::vector<Scalar>& data() const noexcept { return data_; }

    /// Copy of the first `count` entries.
    Sequence head(std::size_t count) const;

    /// max_n of the per-index norm; zero for an empty sequence.
    double max_norm(Norm norm) const noexcept;

    /// Largest absolute imaginary part over all components.
    double max_imag() const noexcept;

    bool operator==(const Sequence&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<Scalar> data_;
};

} // namespace ulam
