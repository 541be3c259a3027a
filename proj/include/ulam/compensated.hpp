#pragma once

#include <cmath>
#include <complex>

namespace ulam {

/// Neumaier's variant of Kahan summation. Unlike plain Kahan it stays
/// accurate when an addend is larger in magnitude than the running sum.
class CompensatedSum {
public:
    void add(double value) noexcept
    {
        const double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value)) {
            compensation_ += (sum_ - t) + value;
        } else {
            compensation_ += (value - t) + sum_;
        }
        sum_ = t;
    }

    CompensatedSum& operator+=(double value) noexcept
    {
        add(value);
        return *this;
    }

    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/// Componentwise compensated accumulation of complex addends.
class ComplexCompensatedSum {
public:
    ComplexCompensatedSum& operator+=(std::complex<double> value) noexcept
    {
        re_ += value.real();
        im_ += value.imag();
        return *this;
    }

    std::complex<double> value() const noexcept { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_;
    CompensatedSum im_;
};

/// Integer power by repeated squaring; exact exponent handling for negative n.
inline std::complex<double> ipow(std::complex<double> base, long long exponent) noexcept
{
    if (exponent < 0) {
        base = 1.0 / base;
        exponent = -exponent;
    }
    std::complex<double> result{1.0, 0.0};
    while (exponent > 0) {
        if (exponent & 1) {
            result *= base;
        }
        base *= base;
        exponent >>= 1;
    }
    return result;
}

} // namespace ulam
