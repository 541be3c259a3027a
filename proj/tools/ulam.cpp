// ulam: stability constants, shadows and extremal perturbations for linear
// recurrences with constant coefficients.
//
// Exit codes: 0 ok, 1 input error, 2 not Ulam stable, 3 degenerate roots,
// 4 bound violation, 5 tolerance unreachable.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "ulam/adversary.hpp"
#include "ulam/constants.hpp"
#include "ulam/error.hpp"
#include "ulam/io.hpp"
#include "ulam/oracle.hpp"
#include "ulam/recurrence.hpp"
#include "ulam/shadowing.hpp"
#include "ulam/sweep.hpp"
#include "ulam/vandermonde.hpp"

namespace {

using ulam::io::json;

enum ExitCode : int {
    ok = 0,
    input_error = 1,
    not_stable = 2,
    degenerate = 3,
    bound_violation = 4,
    tol_unreachable = 5,
};

int exit_code_for(ulam::ErrorKind kind)
{
    switch (kind) {
    case ulam::ErrorKind::NotUlamStable: return not_stable;
    case ulam::ErrorKind::DegenerateRoots: return degenerate;
    case ulam::ErrorKind::TolUnreachable: return tol_unreachable;
    default: return input_error;
    }
}

struct Options {
    std::string spec;
    std::string traj;
    std::string grid;
    std::string out;
    double eps = 1.0;
    double claimed_eps = -1.0;
    double tol = -1.0;
    std::uint64_t seed = 0;
    bool verify = false;
};

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ulam::Error(ulam::ErrorKind::InvalidInput, "cannot write " + path);
    }
    out << text;
}

void emit_json(const Options& opt, const json& j)
{
    const std::string text = j.dump(2) + "\n";
    if (opt.out.empty()) {
        std::cout << text;
    } else {
        write_text(opt.out, text);
    }
}

std::string fmt(double value)
{
    std::ostringstream s;
    s << std::setprecision(12) << value;
    return s.str();
}

std::string fmt(ulam::Scalar z)
{
    std::ostringstream s;
    s << std::setprecision(12) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return s.str();
}

// Roots with the NotUlamStable / NearDegenerate gate applied.
ulam::RootSet gated_roots(const ulam::RecurrenceSpec& spec)
{
    auto roots = ulam::characteristic_roots(spec);
    if (roots.classification == ulam::SpectralClass::OnUnitCircle) {
        throw ulam::Error(ulam::ErrorKind::NotUlamStable,
                          "a characteristic root lies on the unit circle; the equation is not Ulam stable");
    }
    if (roots.classification == ulam::SpectralClass::NearDegenerate) {
        throw ulam::Error(ulam::ErrorKind::DegenerateRoots,
                          "characteristic roots are not certifiably distinct (separation "
                              + fmt(roots.min_separation) + ")");
    }
    return roots;
}

json verify_constant(const ulam::RootSet& roots, const ulam::VandermondeData& data, const ulam::ConstantResult& kr)
{
    json v;
    const std::size_t p = roots.size();
    if (p <= ulam::oracle::OracleConfig::hard_cap) {
        ulam::oracle::OracleConfig cfg;
        cfg.max_order = ulam::oracle::OracleConfig::hard_cap;
        const auto brute = ulam::oracle::det_bruteforce(ulam::oracle::vandermonde_matrix(data.roots()), cfg);
        const double rel = std::abs(brute - data.determinant()) / std::max(std::abs(brute), 1e-300);
        v["det_relative_error"] = rel;
    }
    const double reference = ulam::oracle::reference_sum(data, kr.terms_used);
    v["reference_sum"] = reference;
    v["bracket_ok"] = std::abs(reference - kr.value) <= 1e-10 * std::max(1.0, kr.value)
        && ulam::oracle::reference_sum(data, 4 * kr.terms_used) <= kr.upper() + 1e-10 * std::max(1.0, kr.value);
    return v;
}

int cmd_analyze(const Options& opt)
{
    const auto spec = ulam::io::load_spec(opt.spec);
    const auto roots = ulam::characteristic_roots(spec);
    json report;
    report["spec"] = ulam::io::to_json(spec);
    report["roots"] = ulam::io::to_json(roots);

    std::cout << "order p = " << spec.order() << "\n";
    for (std::size_t k = 0; k < roots.size(); ++k) {
        std::cout << "  r_" << k + 1 << " = " << fmt(roots.roots[k]) << "  |r| = " << fmt(roots.moduli[k]) << "\n";
    }
    std::cout << "classification: " << ulam::to_string(roots.classification) << "\n";

    int code = ok;
    if (roots.classification == ulam::SpectralClass::OnUnitCircle) {
        std::cout << "not Ulam stable: a characteristic root lies on the unit circle\n";
        code = not_stable;
    } else if (roots.classification == ulam::SpectralClass::NearDegenerate) {
        std::cout << "roots are not certifiably distinct; constants need distinct roots\n";
        const auto classical = ulam::classical_constant(roots);
        report["classical"] = ulam::io::to_json(classical);
        std::cout << "classical constant: " << fmt(classical.value) << "\n";
        code = degenerate;
    } else {
        const auto classical = ulam::classical_constant(roots);
        report["classical"] = ulam::io::to_json(classical);
        std::cout << "classical constant: " << fmt(classical.value) << "\n";
        if (roots.classification == ulam::SpectralClass::AllOutsideUnitDisc) {
            const auto data = ulam::VandermondeData::build(roots);
            const double tol = opt.tol > 0 ? opt.tol : ulam::SeriesConfig{}.tol;
            const auto best = ulam::best_constant(roots, data, {tol, ulam::SeriesConfig{}.max_terms});
            report["best"] = ulam::io::to_json(best);
            std::cout << "best constant: " << fmt(best.value) << "  in [" << fmt(best.lower()) << ", "
                      << fmt(best.upper()) << "] after " << best.terms_used << " terms\n";
            if (opt.verify) {
                report["verify"] = verify_constant(roots, data, best);
                std::cout << "verify: " << report["verify"].dump() << "\n";
            }
        } else {
            std::cout << "best constant: not available (roots on both sides of the unit circle)\n";
        }
    }
    if (!opt.out.empty()) {
        write_text(opt.out, report.dump(2) + "\n");
    }
    return code;
}

int cmd_constant(const Options& opt)
{
    const auto spec = ulam::io::load_spec(opt.spec);
    const auto roots = gated_roots(spec);
    if (roots.classification != ulam::SpectralClass::AllOutsideUnitDisc) {
        emit_json(opt, ulam::io::to_json(ulam::classical_constant(roots)));
        return ok;
    }
    const auto data = ulam::VandermondeData::build(roots);
    const double tol = opt.tol > 0 ? opt.tol : ulam::SeriesConfig{}.tol;
    const auto best = ulam::best_constant(roots, data, {tol, ulam::SeriesConfig{}.max_terms});
    json j = ulam::io::to_json(best);
    if (opt.verify) {
        j["verify"] = verify_constant(roots, data, best);
    }
    emit_json(opt, j);
    return ok;
}

int cmd_shadow(const Options& opt)
{
    const auto spec = ulam::io::load_spec(opt.spec);
    const ulam::Trajectory traj{ulam::io::load_sequence_csv(opt.traj, spec.dim()), 0};
    if (traj.size() <= spec.order()) {
        throw ulam::Error(ulam::ErrorKind::InvalidLength, "trajectory needs at least p + 1 rows");
    }
    const auto roots = gated_roots(spec);
    const auto data = ulam::VandermondeData::build(roots);
    const auto kr = ulam::best_constant(roots, data);
    const auto result = ulam::shadow_direct(spec, roots, data, traj, kr);
    auto report = ulam::verify_shadow(spec, traj, result);
    if (opt.claimed_eps >= 0.0 && result.eps > opt.claimed_eps) {
        report.pass = false;
        report.message = "measured eps " + fmt(result.eps) + " exceeds the claimed " + fmt(opt.claimed_eps);
    }
    json summary = ulam::io::shadow_summary(result, report);
    summary["kr"] = ulam::io::to_json(kr);

    if (!opt.out.empty()) {
        std::ostringstream csv;
        ulam::io::write_shadow_csv(csv, result);
        write_text(opt.out + ".csv", csv.str());
        write_text(opt.out + ".json", summary.dump(2) + "\n");
    }
    std::cout << "eps = " << fmt(result.eps) << ", bound K_R*eps = " << fmt(result.bound)
              << ", max deviation = " << fmt(result.max_deviation) << ", max cert error = "
              << fmt(result.max_cert_error()) << "\n";
    std::cout << (report.pass ? "pass" : "FAIL: " + report.message) << "\n";
    return report.pass ? ok : bound_violation;
}

int cmd_adversary(const Options& opt)
{
    const auto spec = ulam::io::load_spec(opt.spec);
    const auto roots = gated_roots(spec);
    const auto data = ulam::VandermondeData::build(roots);
    const auto kr = ulam::best_constant(roots, data);
    const double tol = opt.tol > 0 ? opt.tol : 0.01;
    const auto report = ulam::sharpness_experiment(spec, roots, data, kr, opt.eps, tol);
    emit_json(opt, ulam::io::to_json(report));
    if (!opt.out.empty()) {
        std::cout << "ratio ||x_1||/eps = " << fmt(report.achieved_ratio) << ", K_R = " << fmt(report.kr_value)
                  << ", gap = " << fmt(report.gap) << ", zero shadow = " << std::boolalpha
                  << report.zero_shadow << "\n";
    }
    return report.gap <= tol * report.kr_value ? ok : bound_violation;
}

unsigned thread_count()
{
    if (const char* env = std::getenv("ULAM_THREADS")) {
        try {
            const long value = std::stol(env);
            if (value >= 1) {
                return static_cast<unsigned>(value);
            }
        } catch (const std::exception&) {
        }
        std::cerr << "ignoring invalid ULAM_THREADS='" << env << "'\n";
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_sweep(const Options& opt)
{
    std::ifstream in(opt.grid);
    if (!in) {
        throw ulam::Error(ulam::ErrorKind::InvalidInput, "cannot open grid file " + opt.grid);
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ulam::Error(ulam::ErrorKind::InvalidInput, std::string("grid file is not valid JSON: ") + e.what());
    }
    const auto grid = ulam::sweep::parse_grid(j);
    const double tol = opt.tol > 0 ? opt.tol : ulam::SeriesConfig{}.tol;
    const auto result = ulam::sweep::run(grid, opt.seed, thread_count(), tol);
    for (const auto& line : result.skipped) {
        std::cerr << line << "\n";
    }
    std::ostringstream csv;
    ulam::sweep::write_csv(csv, grid, result);
    if (opt.out.empty()) {
        std::cout << csv.str();
    } else {
        write_text(opt.out, csv.str());
    }
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Ulam stability constants for linear recurrences with constant coefficients"};
    app.require_subcommand(1);
    Options opt;

    auto* analyze = app.add_subcommand("analyze", "roots, classification and constants of a recurrence");
    analyze->add_option("--spec", opt.spec, "recurrence spec JSON")->required();
    analyze->add_option("--tol", opt.tol, "series tolerance for the best constant");
    analyze->add_option("--out", opt.out, "write the JSON report here");
    analyze->add_flag("--verify", opt.verify, "cross-check against brute-force oracles");

    auto* constant = app.add_subcommand("constant", "best (or classical) constant as JSON");
    constant->add_option("--spec", opt.spec, "recurrence spec JSON")->required();
    constant->add_option("--tol", opt.tol, "series tolerance");
    constant->add_option("--out", opt.out, "output JSON path (default stdout)");
    constant->add_flag("--verify", opt.verify, "cross-check against brute-force oracles");

    auto* shadow = app.add_subcommand("shadow", "exact solution nearest to an approximate trajectory");
    shadow->add_option("--spec", opt.spec, "recurrence spec JSON")->required();
    shadow->add_option("--traj", opt.traj, "trajectory CSV")->required();
    shadow->add_option("--out", opt.out, "output prefix: writes PREFIX.csv and PREFIX.json");
    shadow->add_option("--eps", opt.claimed_eps, "claimed residual level; fail if the measured one is larger")
        ->check(CLI::NonNegativeNumber);

    auto* adversary = app.add_subcommand("adversary", "extremal forcing attaining the best constant");
    adversary->add_option("--spec", opt.spec, "recurrence spec JSON")->required();
    adversary->add_option("--eps", opt.eps, "forcing size")->check(CLI::PositiveNumber);
    adversary->add_option("--tol", opt.tol, "relative tail budget (default 0.01)");
    adversary->add_option("--out", opt.out, "output JSON path (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "constants over a grid of root sets as CSV");
    sweep->add_option("--grid,--spec", opt.grid, "grid JSON")->required();
    sweep->add_option("--seed", opt.seed, "seed for random blocks");
    sweep->add_option("--tol", opt.tol, "series tolerance");
    sweep->add_option("--out", opt.out, "output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : input_error;
    }

    try {
        if (*analyze) {
            return cmd_analyze(opt);
        }
        if (*constant) {
            return cmd_constant(opt);
        }
        if (*shadow) {
            return cmd_shadow(opt);
        }
        if (*adversary) {
            return cmd_adversary(opt);
        }
        if (*sweep) {
            return cmd_sweep(opt);
        }
    } catch (const ulam::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return input_error;
    }
    return input_error;
}
