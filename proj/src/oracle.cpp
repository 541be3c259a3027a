#include "ulam/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ulam/compensated.hpp"
#include "ulam/error.hpp"

namespace ulam::oracle {

Scalar det_bruteforce(const Matrix& matrix, const OracleConfig& cfg)
{
    const std::size_t n = matrix.size();
    const std::size_t limit = std::min(cfg.max_order, OracleConfig::hard_cap);
    if (n > limit) {
        throw Error(ErrorKind::TooLarge,
                    "permutation expansion limited to order " + std::to_string(limit) + ", got "
                        + std::to_string(n));
    }
    for (const auto& row : matrix) {
        if (row.size() != n) {
            throw Error(ErrorKind::InvalidInput, "matrix must be square");
        }
    }
    if (n == 0) {
        return Scalar{1.0};
    }

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    ComplexCompensatedSum det;
    do {
        std::size_t inversions = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (perm[i] > perm[j]) {
                    ++inversions;
                }
            }
        }
        Scalar term{inversions % 2 == 0 ? 1.0 : -1.0};
        for (std::size_t i = 0; i < n; ++i) {
            term *= matrix[i][perm[i]];
        }
        det += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det.value();
}

Matrix vandermonde_matrix(std::span<const Scalar> nodes)
{
    const std::size_t n = nodes.size();
    Matrix m(n, std::vector<Scalar>(n));
    for (std::size_t j = 0; j < n; ++j) {
        Scalar power{1.0};
        for (std::size_t i = 0; i < n; ++i) {
            m[i][j] = power;
            power *= nodes[j];
        }
    }
    return m;
}

namespace {

Scalar direct_e_term(const VandermondeData& data, std::size_t s)
{
    const auto roots = data.roots();
    const auto reduced = data.reduced();
    ComplexCompensatedSum sum;
    for (std::size_t k = 0; k < roots.size(); ++k) {
        const Scalar term = reduced[k] / std::pow(roots[k], static_cast<double>(s));
        sum += (k % 2 == 0) ? term : -term;
    }
    return sum.value();
}

} // namespace

double reference_sum(const VandermondeData& data, std::size_t terms)
{
    return reference_tail(data, 0, terms);
}

double reference_tail(const VandermondeData& data, std::size_t from, std::size_t to)
{
    CompensatedSum sum;
    for (std::size_t s = from + 1; s <= to; ++s) {
        sum += std::abs(direct_e_term(data, s));
    }
    return sum.value() / std::abs(data.determinant());
}

} // namespace ulam::oracle
