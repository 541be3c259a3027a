#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ulam/sequence.hpp"

namespace ulam::sweep {

/// Candidate values for one root: r = modulus * exp(i * pi * angle).
struct RootAxis {
    std::vector<double> moduli;
    std::vector<double> angles{0.0}; ///< in units of pi
};

struct RandomBlock {
    std::size_t count = 0;
    double min_modulus = 1.1;
    double max_modulus = 5.0;
    double min_separation = 0.1;
};

/// Either a cartesian grid over per-root axes or a seeded random sample.
///
///   {"p": 2, "roots": [{"moduli": [2], "angles": [0]}, {"moduli": [3], "angles": [0, 1]}]}
///   {"p": 3, "random": {"count": 100, "min_modulus": 1.1, "max_modulus": 5, "min_separation": 0.1}}
struct Grid {
    std::size_t p = 0;
    std::vector<RootAxis> axes;
    std::optional<RandomBlock> random;
};

Grid parse_grid(const nlohmann::json& j);

struct Row {
    std::size_t index = 0;
    std::vector<Scalar> roots;
    double classical = 0.0;
    std::optional<double> best;
    std::optional<double> ratio; ///< best / classical
};

struct Result {
    std::vector<Row> rows;         ///< sorted by index
    std::vector<std::string> skipped; ///< one line per skipped grid point
};

/// r = modulus * e^{i pi angle}, exact for half-integer angles.
Scalar polar_pi(double modulus, double angle);

/// Root sets in deterministic grid order. Random blocks are drawn from `seed`.
std::vector<std::vector<Scalar>> enumerate(const Grid& grid, std::uint64_t seed);

/// Evaluates every grid point, optionally on several threads; output order
/// and content do not depend on the thread count.
Result run(const Grid& grid, std::uint64_t seed, unsigned threads = 1, double tol = 1e-10);

void write_csv(std::ostream& out, const Grid& grid, const Result& result);

} // namespace ulam::sweep
