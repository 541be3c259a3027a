#include "ulam/sweep.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include "ulam/constants.hpp"
#include "ulam/error.hpp"
#include "ulam/io.hpp"
#include "ulam/vandermonde.hpp"

namespace ulam::sweep {

namespace {

[[noreturn]] void grid_error(const std::string& field, const std::string& what)
{
    throw Error(ErrorKind::InvalidInput, "grid field '" + field + "': " + what);
}

std::vector<double> number_list(const nlohmann::json& j, const std::string& field)
{
    if (!j.is_array()) {
        grid_error(field, "expected an array of numbers");
    }
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) {
            grid_error(field, "expected an array of numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

Grid parse_grid(const nlohmann::json& j)
{
    if (!j.is_object()) {
        grid_error("<root>", "expected a JSON object");
    }
    if (!j.contains("p") || !j["p"].is_number_integer() || j["p"].get<long long>() < 1) {
        grid_error("p", "expected a positive integer");
    }
    Grid grid;
    grid.p = j["p"].get<std::size_t>();
    if (j.contains("roots")) {
        const auto& roots = j["roots"];
        if (!roots.is_array() || roots.size() != grid.p) {
            grid_error("roots", "expected one axis object per root");
        }
        for (std::size_t k = 0; k < roots.size(); ++k) {
            const std::string prefix = "roots[" + std::to_string(k) + "]";
            RootAxis axis;
            if (!roots[k].is_object() || !roots[k].contains("moduli")) {
                grid_error(prefix + ".moduli", "missing");
            }
            axis.moduli = number_list(roots[k]["moduli"], prefix + ".moduli");
            if (roots[k].contains("angles")) {
                axis.angles = number_list(roots[k]["angles"], prefix + ".angles");
            }
            grid.axes.push_back(std::move(axis));
        }
    }
    if (j.contains("random")) {
        const auto& r = j["random"];
        RandomBlock block;
        if (!r.is_object() || !r.contains("count") || !r["count"].is_number_integer()) {
            grid_error("random.count", "expected an integer");
        }
        block.count = r["count"].get<std::size_t>();
        block.min_modulus = r.value("min_modulus", block.min_modulus);
        block.max_modulus = r.value("max_modulus", block.max_modulus);
        block.min_separation = r.value("min_separation", block.min_separation);
        if (!(block.min_modulus > 0.0 && block.max_modulus >= block.min_modulus)) {
            grid_error("random", "need 0 < min_modulus <= max_modulus");
        }
        grid.random = block;
    }
    if (grid.axes.empty() && !grid.random) {
        grid_error("roots", "grid needs either 'roots' axes or a 'random' block");
    }
    return grid;
}

Scalar polar_pi(double modulus, double angle)
{
    const double twice = 2.0 * angle;
    if (twice == std::floor(twice)) {
        const auto quarter = static_cast<long long>(twice) % 4;
        switch ((quarter + 4) % 4) {
        case 0: return {modulus, 0.0};
        case 1: return {0.0, modulus};
        case 2: return {-modulus, 0.0};
        default: return {0.0, -modulus};
        }
    }
    return std::polar(modulus, std::numbers::pi * angle);
}

std::vector<std::vector<Scalar>> enumerate(const Grid& grid, std::uint64_t seed)
{
    std::vector<std::vector<Scalar>> sets;
    if (!grid.axes.empty()) {
        std::vector<std::vector<Scalar>> candidates;
        for (const auto& axis : grid.axes) {
            std::vector<Scalar> values;
            for (double m : axis.moduli) {
                for (double a : axis.angles) {
                    values.push_back(polar_pi(m, a));
                }
            }
            candidates.push_back(std::move(values));
        }
        std::size_t total = 1;
        for (const auto& c : candidates) {
            total *= c.size();
        }
        // Mixed-radix decode with the first root varying slowest.
        for (std::size_t index = 0; index < total; ++index) {
            std::vector<Scalar> set(candidates.size());
            std::size_t rest = index;
            for (std::size_t k = candidates.size(); k-- > 0;) {
                set[k] = candidates[k][rest % candidates[k].size()];
                rest /= candidates[k].size();
            }
            sets.push_back(std::move(set));
        }
    }
    if (grid.random) {
        const auto& block = *grid.random;
        std::mt19937_64 rng(seed);
        std::size_t produced = 0;
        while (produced < block.count) {
            std::vector<Scalar> set;
            while (set.size() < grid.p) {
                const double modulus =
                    block.min_modulus + (block.max_modulus - block.min_modulus) * unit_uniform(rng);
                const Scalar r = std::polar(modulus, 2.0 * std::numbers::pi * unit_uniform(rng));
                bool separated = true;
                for (const auto& existing : set) {
                    separated = separated && std::abs(existing - r) >= block.min_separation;
                }
                if (separated) {
                    set.push_back(r);
                }
            }
            sets.push_back(std::move(set));
            ++produced;
        }
    }
    return sets;
}

Result run(const Grid& grid, std::uint64_t seed, unsigned threads, double tol)
{
    const auto sets = enumerate(grid, seed);
    std::vector<std::optional<Row>> rows(sets.size());
    std::vector<std::string> messages(sets.size());

    auto evaluate_point = [&](std::size_t i) {
        const RootSet roots = RootSet::from_roots(sets[i]);
        if (roots.classification == SpectralClass::OnUnitCircle) {
            messages[i] = "grid point " + std::to_string(i) + ": root on the unit circle, skipped";
            return;
        }
        if (roots.classification == SpectralClass::NearDegenerate) {
            messages[i] = "grid point " + std::to_string(i) + ": near-degenerate roots, skipped";
            return;
        }
        Row row;
        row.index = i;
        row.roots = sets[i];
        row.classical = classical_constant(roots).value;
        if (roots.classification == SpectralClass::AllOutsideUnitDisc) {
            const auto data = VandermondeData::build(roots);
            try {
                row.best = best_constant(roots, data, {tol, SeriesConfig{}.max_terms}).value;
                row.ratio = *row.best / row.classical;
            } catch (const Error& e) {
                messages[i] = "grid point " + std::to_string(i) + ": " + e.what();
            }
        }
        rows[i] = std::move(row);
    };
    auto evaluate = [&](std::size_t i) {
        try {
            evaluate_point(i);
        } catch (const std::exception& e) {
            rows[i].reset();
            messages[i] = "grid point " + std::to_string(i) + ": " + e.what();
        }
    };

    threads = std::max(1u, threads);
    if (threads == 1 || sets.size() < 2) {
        for (std::size_t i = 0; i < sets.size(); ++i) {
            evaluate(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < sets.size(); i = next++) {
                    evaluate(i);
                }
            });
        }
    }

    Result result;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (rows[i]) {
            result.rows.push_back(std::move(*rows[i]));
        }
        if (!messages[i].empty()) {
            result.skipped.push_back(std::move(messages[i]));
        }
    }
    return result;
}

void write_csv(std::ostream& out, const Grid& grid, const Result& result)
{
    out << "index";
    for (std::size_t k = 1; k <= grid.p; ++k) {
        out << ",r_" << k << "_re,r_" << k << "_im";
    }
    out << ",classical,best,ratio\n";
    for (const auto& row : result.rows) {
        out << row.index;
        for (const auto& r : row.roots) {
            out << ',' << io::format_double(r.real()) << ',' << io::format_double(r.imag());
        }
        out << ',' << io::format_double(row.classical);
        out << ',' << (row.best ? io::format_double(*row.best) : "NA");
        out << ',' << (row.ratio ? io::format_double(*row.ratio) : "NA") << '\n';
    }
}

} // namespace ulam::sweep
