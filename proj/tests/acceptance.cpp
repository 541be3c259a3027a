// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "ulam/adversary.hpp"
#include "ulam/constants.hpp"
#include "ulam/error.hpp"
#include "ulam/oracle.hpp"
#include "ulam/shadowing.hpp"

using namespace ulam;
using ulam::testing::Rng;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (pass) {
            detail = why;
        }
        pass = false;
    }
};

struct Prepared {
    RecurrenceSpec spec;
    RootSet roots;
    VandermondeData data;
    ConstantResult kr;
};

Prepared prepare(const RecurrenceSpec& spec)
{
    auto roots = characteristic_roots(spec);
    auto data = VandermondeData::build(roots);
    auto kr = best_constant(roots, data);
    return {spec, std::move(roots), std::move(data), kr};
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double diff_norm(std::span<const Scalar> a, std::span<const Scalar> b, Norm norm)
{
    std::vector<Scalar> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        d[i] = a[i] - b[i];
    }
    return value_norm(d, norm);
}

Outcome closed_forms()
{
    Outcome out;
    auto best_of = [](std::vector<Scalar> r) {
        const auto roots = RootSet::from_roots(std::move(r));
        const auto data = VandermondeData::build(roots);
        return std::pair{best_constant(roots, data), oracle::reference_sum(data, 400)};
    };
    const auto [one, one_ref] = best_of({2.0});
    const auto [two, two_ref] = best_of({2.0, 3.0});
    const auto [alt, alt_ref] = best_of({2.0, -2.0});
    const double c_two = classical_constant(RootSet::from_roots({2.0, 3.0})).value;
    const double c_alt = classical_constant(RootSet::from_roots({2.0, -2.0})).value;

    if (std::abs(one.value - 1.0) > 1e-10 || std::abs(one_ref - 1.0) > 1e-10) {
        out.fail("root {2}: " + num(one.value));
    }
    if (std::abs(two.value - 0.5) > 1e-10 || std::abs(two.value - c_two) > 1e-10 || std::abs(two_ref - 0.5) > 1e-10) {
        out.fail("roots {2,3}: " + num(two.value) + " classical " + num(c_two));
    }
    if (std::abs(alt.value - 1.0 / 3.0) > 1e-10 || std::abs(alt_ref - 1.0 / 3.0) > 1e-10 || !(alt.value < c_alt)
        || std::abs(c_alt - 1.0) > 1e-15) {
        out.fail("roots {2,-2}: " + num(alt.value) + " classical " + num(c_alt));
    }
    if (out.pass) {
        out.detail = "1, 0.5, 1/3 within 1e-10; classical 0.5, 1";
    }
    return out;
}

Outcome sharp_below_classical()
{
    Outcome out;
    Rng rng(2024);
    double worst = -1e300;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t p = rng.index(1, 6);
        const auto rs = ulam::testing::random_roots(rng, p, 1.1, 5.0, 0.1, trial % 2 == 1);
        const auto roots = RootSet::from_roots(rs.roots);
        const auto data = VandermondeData::build(roots);
        const double best = best_constant(roots, data).value;
        const double classical = classical_constant(roots).value;
        worst = std::max(worst, best - classical);
        if (best > classical + 1e-9) {
            out.fail("trial " + std::to_string(trial) + ": best " + num(best) + " > classical " + num(classical));
        }
    }
    if (out.pass) {
        out.detail = "1000 root sets, max(best - classical) = " + num(worst);
    }
    return out;
}

struct SuiteCase {
    Prepared prep;
    Trajectory traj;
};

std::vector<SuiteCase> shadow_suite()
{
    std::vector<SuiteCase> suite;
    Rng rng(3030);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t p = rng.index(1, 4);
        const bool real_field = trial % 2 == 0;
        const std::size_t dim = trial % 5 == 0 ? 2 : 1;
        const Norm norm = trial % 7 == 0 ? Norm::Euclid : Norm::Sup;
        const auto rs = ulam::testing::random_roots(rng, p, 1.1, 4.0, 0.2, real_field);
        auto c = ulam::testing::synthetic_case(rng, rs, 60, 0.1, dim, norm);
        suite.push_back({prepare(c.spec), Trajectory{std::move(c.trajectory), 0}});
    }
    return suite;
}

Outcome shadow_bound(const std::vector<SuiteCase>& suite)
{
    Outcome out;
    double worst_residual = 0.0;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < suite.size(); ++i) {
        const auto& [prep, traj] = suite[i];
        const auto result = shadow_direct(prep.spec, prep.roots, prep.data, traj, prep.kr);
        if (std::abs(result.eps - 0.1) > 1e-12) {
            out.fail("case " + std::to_string(i) + ": eps " + num(result.eps));
        }
        const double scale = 1.0 + result.shadow.values.max_norm(prep.spec.norm());
        const double residual = residuals(prep.spec, result.shadow).eps() / scale;
        worst_residual = std::max(worst_residual, residual);
        if (residual > 1e-9) {
            out.fail("case " + std::to_string(i) + ": relative residual " + num(residual));
        }
        for (std::size_t n = 0; n < traj.size(); ++n) {
            const double dev = diff_norm(traj[n], result.shadow[n], prep.spec.norm());
            worst_ratio = std::max(worst_ratio, dev / (prep.kr.value * result.eps));
            if (dev > prep.kr.value * result.eps + result.cert_error[n] + 1e-9) {
                out.fail("case " + std::to_string(i) + " index " + std::to_string(n) + ": deviation " + num(dev));
            }
        }
    }
    if (out.pass) {
        out.detail = "200 cases, max relative residual " + num(worst_residual) + ", max deviation/(K_R eps) "
                     + num(worst_ratio);
    }
    return out;
}

Outcome sharpness()
{
    Outcome out;
    Rng rng(4040);
    double worst = 1.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t p = rng.index(1, 5);
        const auto rs = ulam::testing::random_roots(rng, p, 1.1, 4.0, 0.15, trial % 2 == 0);
        const auto prep = prepare(ulam::testing::spec_from_roots(rs));
        const auto report = sharpness_experiment(prep.spec, prep.roots, prep.data, prep.kr, 1.0, 0.01);
        const double k = prep.kr.value;
        worst = std::min(worst, report.achieved_ratio / k);
        if (report.achieved_ratio < (1.0 - 0.011) * k || report.achieved_ratio > k + 1e-9) {
            out.fail("instance " + std::to_string(trial) + ": ratio " + num(report.achieved_ratio) + " vs K_R "
                     + num(k));
        }
    }
    if (out.pass) {
        out.detail = "50 instances, min achieved/K_R = " + num(worst);
    }
    return out;
}

Outcome uniqueness()
{
    Outcome out;
    Rng rng(5050);
    double worst_shrink = 0.0;
    for (std::size_t horizon : {16, 24, 32}) {
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t p = rng.index(1, 4);
            const auto rs = ulam::testing::random_roots(rng, p, 1.2, 4.0, 0.2, trial % 2 == 0);
            const auto c = ulam::testing::synthetic_case(rng, rs, 2 * horizon, 0.1);
            const auto prep = prepare(c.spec);
            const Trajectory full{c.trajectory, 0};
            const Trajectory half{c.trajectory.head(horizon), 0};
            const auto long_run = shadow_direct(prep.spec, prep.roots, prep.data, full, prep.kr);
            const auto short_run = shadow_direct(prep.spec, prep.roots, prep.data, half, prep.kr);

            const double rho = prep.roots.min_modulus();
            const double eps = std::max(long_run.eps, short_run.eps);
            const double predicted = eps * tail_bound(prep.roots, prep.data, 0) * std::pow(rho, -0.5 * horizon);
            for (std::size_t n = 0; n < horizon; ++n) {
                const double gap = diff_norm(short_run.shadow[n], long_run.shadow[n], prep.spec.norm());
                const double certified = short_run.cert_error[n] + long_run.cert_error[n];
                if (gap > certified + 1e-12) {
                    out.fail("N=" + std::to_string(horizon) + " index " + std::to_string(n) + ": gap " + num(gap)
                             + " > certified " + num(certified));
                }
                if (n + p <= horizon / 2) {
                    const double rounding = (short_run.cert_error[n] - short_run.truncation_error[n])
                                            + (long_run.cert_error[n] - long_run.truncation_error[n]);
                    worst_shrink = std::max(worst_shrink, gap / (predicted + rounding));
                    if (gap > 10.0 * predicted + rounding) {
                        out.fail("N=" + std::to_string(horizon) + " index " + std::to_string(n) + ": gap " + num(gap)
                                 + " above 10x predicted " + num(predicted));
                    }
                }
            }
        }
    }
    if (out.pass) {
        out.detail = "N in {16,24,32}, max gap/predicted = " + num(worst_shrink);
    }
    return out;
}

Outcome dual_path(const std::vector<SuiteCase>& suite)
{
    Outcome out;
    double worst = 0.0;
    for (std::size_t i = 0; i < suite.size(); ++i) {
        const auto& [prep, traj] = suite[i];
        const auto direct = shadow_direct(prep.spec, prep.roots, prep.data, traj, prep.kr);
        const auto coeff = shadow_coefficients(prep.spec, prep.roots, prep.data, traj);
        for (std::size_t n = 0; n < traj.size(); ++n) {
            const double gap = diff_norm(direct.shadow[n], coeff.shadow[n], prep.spec.norm());
            const double allowed = direct.cert_error[n] + coeff.cert_error[n];
            worst = std::max(worst, gap / std::max(allowed, 1e-300));
            if (gap > allowed) {
                out.fail("case " + std::to_string(i) + " index " + std::to_string(n) + ": gap " + num(gap)
                         + " > " + num(allowed));
            }
        }
    }
    if (out.pass) {
        out.detail = "200 cases, max gap/certificate = " + num(worst);
    }
    return out;
}

Outcome oracle_equivalence()
{
    Outcome out;
    Rng rng(7070);
    double worst = 0.0;
    auto compare = [&](Scalar fast, Scalar brute, int trial) {
        const double rel = std::abs(fast - brute) / std::abs(brute);
        worst = std::max(worst, rel);
        if (!(rel <= 1e-10)) {
            out.fail("case " + std::to_string(trial) + ": relative error " + num(rel));
        }
    };
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t p = rng.index(1, 6);
        const auto rs = ulam::testing::random_roots(rng, p, 0.3, 3.0, 0.1, trial % 3 == 0);
        const auto data = VandermondeData::build(RootSet::from_roots(rs.roots));
        compare(data.determinant(), oracle::det_bruteforce(oracle::vandermonde_matrix(rs.roots)), trial);
        for (std::size_t k = 0; k < p; ++k) {
            std::vector<Scalar> reduced = rs.roots;
            reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(k));
            const Scalar brute = reduced.empty() ? Scalar{1.0}
                                                 : oracle::det_bruteforce(oracle::vandermonde_matrix(reduced));
            compare(data.reduced()[k], brute, trial);
        }
    }
    if (out.pass) {
        out.detail = "500 cases, max relative error " + num(worst);
    }
    return out;
}

int run_cli(const std::string& args)
{
    const std::string cmd = "\"" ULAM_CLI_PATH "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string spec_json(const std::vector<Scalar>& a)
{
    std::ostringstream s;
    s.precision(17);
    s << "{\"p\":" << a.size() << ",\"a\":[";
    for (std::size_t i = 0; i < a.size(); ++i) {
        s << (i ? "," : "") << "[" << a[i].real() << "," << a[i].imag() << "]";
    }
    s << "],\"field\":\"complex\"}";
    return s.str();
}

Outcome non_stability()
{
    Outcome out;
    Rng rng(8080);
    int rejected = 0;
    std::vector<std::vector<Scalar>> cli_specs{{Scalar{1.0}}, {Scalar{2.0}, Scalar{-1.0}}};
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t p = rng.index(1, 5);
        std::vector<Scalar> roots{std::polar(1.0 + rng.uniform(-1e-9, 1e-9), rng.uniform(0.0, 2.0 * std::numbers::pi))};
        while (roots.size() < p) {
            const double modulus = rng.uniform() < 0.5 ? rng.uniform(0.2, 0.8) : rng.uniform(1.3, 3.0);
            const Scalar z = std::polar(modulus, rng.uniform(0.0, 2.0 * std::numbers::pi));
            if (std::all_of(roots.begin(), roots.end(), [&](Scalar r) { return std::abs(r - z) > 0.3; })) {
                roots.push_back(z);
            }
        }
        const auto a = ulam::testing::coefficients_from_roots(roots, false);
        const auto found = characteristic_roots(RecurrenceSpec(a, Field::Complex));
        bool signalled = false;
        try {
            classical_constant(found);
        } catch (const Error& e) {
            signalled = e.kind() == ErrorKind::NotUlamStable;
        }
        if (found.classification == SpectralClass::OnUnitCircle && signalled) {
            ++rejected;
        } else {
            out.fail("spec " + std::to_string(trial) + " classified " + std::string(to_string(found.classification)));
        }
        if (trial < 10) {
            cli_specs.push_back(a);
        }
    }
    const auto dir = std::filesystem::temp_directory_path() / ("ulam_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    int cli_rejected = 0;
    for (std::size_t i = 0; i < cli_specs.size(); ++i) {
        const auto path = dir / ("spec" + std::to_string(i) + ".json");
        std::ofstream(path) << spec_json(cli_specs[i]);
        const int code = run_cli("analyze --spec \"" + path.string() + "\"");
        if (code == 2) {
            ++cli_rejected;
        } else {
            out.fail("CLI exit " + std::to_string(code) + " for spec " + spec_json(cli_specs[i]));
        }
    }
    std::filesystem::remove_all(dir);
    if (out.pass) {
        out.detail = std::to_string(rejected) + " random specs rejected, CLI exit 2 on "
                     + std::to_string(cli_rejected) + " specs including a=(1) and a=(2,-1)";
    }
    return out;
}

Outcome small_order_cross_check()
{
    Outcome out;
    Rng rng(9090);
    const SeriesConfig cfg;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t p = trial % 2 == 0 ? 2 : 3;
        const auto rs = ulam::testing::random_roots(rng, p, 1.1, 5.0, 0.1, trial % 4 < 2);
        const auto roots = RootSet::from_roots(rs.roots);
        const auto data = VandermondeData::build(roots);
        const auto closed = closed_form_small_order(roots, cfg);
        const double best = best_constant(roots, data, cfg).value;
        if (!closed) {
            out.fail("instance " + std::to_string(trial) + ": no closed form");
            continue;
        }
        worst = std::max(worst, std::abs(*closed - best));
        if (std::abs(*closed - best) > 2.0 * cfg.tol) {
            out.fail("instance " + std::to_string(trial) + ": |closed - best| = " + num(std::abs(*closed - best)));
        }
    }
    if (out.pass) {
        out.detail = "100 instances, max |closed - best| = " + num(worst);
    }
    return out;
}

} // namespace

int main()
{
    int failures = 0;
    auto report = [&](int id, const char* title, double budget, const std::function<Outcome()>& fn) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = fn();
        } catch (const std::exception& e) {
            out.fail(std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > budget) {
            out.fail("took " + num(seconds) + " s, budget " + num(budget) + " s");
        }
        failures += out.pass ? 0 : 1;
        std::printf("%s %d %s: %s [%.2f s]\n", out.pass ? "PASS" : "FAIL", id, title, out.detail.c_str(), seconds);
        std::fflush(stdout);
    };

    std::vector<SuiteCase> suite;
    report(1, "closed forms", 1.0, closed_forms);
    report(2, "sharp constant below classical", 30.0, sharp_below_classical);
    report(3, "shadow bound", 30.0, [&] {
        suite = shadow_suite();
        return shadow_bound(suite);
    });
    report(4, "sharpness", 60.0, sharpness);
    report(5, "horizon independence", 30.0, uniqueness);
    report(6, "dual-path consistency", 30.0, [&] { return dual_path(suite); });
    report(7, "oracle equivalence", 10.0, oracle_equivalence);
    report(8, "non-stability detection", 30.0, non_stability);
    report(9, "small-order cross-check", 30.0, small_order_cross_check);
    return failures == 0 ? 0 : 1;
}
