#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "ulam/adversary.hpp"
#include "ulam/error.hpp"
#include "ulam/shadowing.hpp"

using namespace ulam;
using ulam::testing::Rng;

namespace {

struct Setup {
    RecurrenceSpec spec;
    RootSet roots;
    VandermondeData data;
    ConstantResult kr;
};

Setup setup(const RecurrenceSpec& spec)
{
    auto roots = characteristic_roots(spec);
    auto data = VandermondeData::build(roots);
    auto kr = best_constant(roots, data);
    return {spec, std::move(roots), std::move(data), kr};
}

} // namespace

TEST_CASE("worst forcing phases")
{
    const auto u = default_direction(1);
    {
        const auto s = setup(RecurrenceSpec({5.0, -6.0}));
        const auto f = worst_forcing(s.data, 0.5, u, 10);
        REQUIRE(f.size() == 11);
        CHECK(f[0][0] == Scalar{0.0});
        for (std::size_t n = 1; n <= 10; ++n) {
            CHECK(std::abs(f[n][0] - Scalar{0.5}) < 1e-15);
        }
        CHECK(f.eps() == doctest::Approx(0.5));
    }
    {
        const auto s = setup(RecurrenceSpec({0.0, 4.0}));
        const auto f = worst_forcing(s.data, 1.0, u, 10);
        for (std::size_t n = 1; n <= 10; ++n) {
            if (n % 2 == 0) {
                CHECK(f[n][0] == Scalar{0.0});
            } else {
                CHECK(std::abs(std::abs(f[n][0]) - 1.0) < 1e-15);
            }
        }
    }
}

TEST_CASE("real field forcing stays real")
{
    Rng rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        const auto rs = ulam::testing::random_roots(rng, rng.index(2, 5), 1.2, 3.0, 0.2, true);
        const auto s = setup(ulam::testing::spec_from_roots(rs));
        const auto f = worst_forcing(s.data, 1.0, default_direction(1), 30, Norm::Sup, Field::Real);
        CHECK(f.values().max_imag() <= 1e-12);
        const auto x = worst_trajectory(s.spec, s.data, f, 20);
        CHECK(x.values.max_imag() == 0.0);
    }
}

TEST_CASE("worst trajectory")
{
    const auto s = setup(RecurrenceSpec({5.0, -6.0}));
    const auto zero = Forcing(Sequence(12, 1), Norm::Sup);
    const auto x0 = worst_trajectory(s.spec, s.data, zero, 10);
    CHECK(x0.values.max_norm(Norm::Sup) == 0.0);

    const auto f = worst_forcing(s.data, 1.0, default_direction(1), 60);
    const auto x = worst_trajectory(s.spec, s.data, f, 40);
    CHECK(std::abs(x[1][0]) == doctest::Approx(s.kr.value).epsilon(1e-9));

    const auto back = residuals(s.spec, x);
    for (std::size_t n = 0; n < back.size(); ++n) {
        CHECK(std::abs(back[n][0] - f[n][0]) <= 1e-9);
    }
    CHECK_THROWS_AS(worst_trajectory(s.spec, s.data, f, 100), Error);
}

TEST_CASE("sharpness examples")
{
    for (const auto& [a, kr_exact] : std::vector<std::pair<std::vector<Scalar>, double>>{
             {{5.0, -6.0}, 0.5}, {{0.0, 4.0}, 1.0 / 3.0}, {{2.0}, 1.0}}) {
        const auto s = setup(RecurrenceSpec(a));
        const auto report = sharpness_experiment(s.spec, s.roots, s.data, s.kr, 1.0, 0.01);
        CHECK(report.achieved_ratio >= 0.99 * kr_exact);
        CHECK(report.achieved_ratio <= kr_exact + 1e-9);
        CHECK(report.gap <= report.tail_budget);
        CHECK(report.zero_shadow);
    }
}

TEST_CASE("sharpness in higher dimension and euclid norm")
{
    Rng rng(59);
    const auto rs = ulam::testing::random_roots(rng, 3, 1.2, 3.0, 0.3);
    const auto s = setup(ulam::testing::spec_from_roots(rs, 3, Norm::Euclid));
    std::vector<Scalar> u{Scalar{0.6}, Scalar{0.0, 0.8}, Scalar{0.0}};
    const auto report = sharpness_experiment(s.spec, s.roots, s.data, s.kr, 0.25, 0.01, u);
    CHECK(report.achieved_ratio >= 0.99 * s.kr.value);
    CHECK(report.achieved_ratio <= s.kr.upper() + 1e-9);
}

TEST_CASE("adversarial input verifies with deviation near the bound")
{
    const auto s = setup(RecurrenceSpec({5.0, -6.0}));
    const auto f = worst_forcing(s.data, 1.0, default_direction(1), 80);
    const auto x = worst_trajectory(s.spec, s.data, f, 82);
    const auto result = shadow_direct(s.spec, s.roots, s.data, x, s.kr);
    const auto report = verify_shadow(s.spec, x, result);
    CHECK(report.pass);
    CHECK(report.max_deviation / result.eps >= 0.99 * s.kr.value);
}
