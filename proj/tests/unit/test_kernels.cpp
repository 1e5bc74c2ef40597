#include <doctest.h>

#include <cmath>
#include <random>

#include "meff/error.hpp"
#include "meff/kernels.hpp"

using namespace meff;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// theta-integrals evaluated with mpmath at 30 digits.
struct Frozen {
    KernelFamily family;
    int p;
    double r1, r2, value;
};
constexpr Frozen kFrozen[] = {
    {KernelFamily::K1, 1, 1, 1, 0.69314718055994530942},
    {KernelFamily::K1, 2, 1, 1, 0.25},
    {KernelFamily::K2, 1, 1, 1, 0.45482255552043752466},
    {KernelFamily::K2, 2, 3, 0.5, 0.030930893289058997387},
    {KernelFamily::K2, 3, 2, 2, 0.014670065291576477621},
    {KernelFamily::Khat1, 1, 1, 1, -0.079441541679835928252},
    {KernelFamily::Khat1, 2, 1, 1, -0.056852819440054690583},
    {KernelFamily::Khat2, 3, 1, 1, -0.011675374960492215245},
    {KernelFamily::K2, 3, 0.01, 100, 1.0051379277394488046e-11},
    {KernelFamily::Khat2, 3, 0.01, 100, -1.1825128892509467555e-15},
    {KernelFamily::K1, 1, 0.01, 100, 0.00039215609499261027422},
};

std::vector<RadialPoint> random_points(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(std::log(0.1), std::log(1e3));
    std::vector<RadialPoint> pts;
    for (int i = 0; i < n; ++i) pts.push_back({std::exp(u(rng)), std::exp(u(rng))});
    return pts;
}

}  // namespace

TEST_CASE("energy denominators at simple points") {
    const EnergyDenoms d = energy_denoms({1, 1});
    CHECK(d.calR == doctest::Approx(3).epsilon(1e-15));
    CHECK(d.ePlus == doctest::Approx(4).epsilon(1e-15));
    CHECK(d.eMinus == doctest::Approx(2).epsilon(1e-15));
    CHECK(d.zeta == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(energy_denoms({2, 3}).eMinus == doctest::Approx(5.5).epsilon(1e-15));
    CHECK(calE(0.0) == 0.0);
    CHECK(calE(1e-300) < 1e-299);
}

TEST_CASE("energy denominators obey 0 < zeta < 1 and E- >= r1 + r2") {
    for (const auto& p : random_points(1000, 11)) {
        const EnergyDenoms d = energy_denoms(p);
        CHECK(d.zeta > 0.0);
        CHECK(d.zeta < 1.0);
        CHECK(d.eMinus >= p.r1 + p.r2);
    }
}

TEST_CASE("closed forms match frozen theta-integrals") {
    for (const auto& f : kFrozen) {
        const KernelRequest req{f.family, f.p, {f.r1, f.r2}};
        INFO(kernel_name(f.family) << f.p << " at (" << f.r1 << "," << f.r2 << ")");
        CHECK(rel(kernel_eval(req), f.value) < 1e-10);
        CHECK(rel(angular_oracle(req, 256), f.value) < 1e-10);
    }
}

TEST_CASE("kernel_eval picks the series for small zeta and matches the oracle") {
    const RadialPoint p{0.01, 100};
    CHECK(energy_denoms(p).zeta < zeta_switch);
    for (const auto& id : kernel_ids()) {
        const KernelRequest req{id.family, id.p, p};
        INFO(kernel_name(id.family) << id.p);
        CHECK(rel(kernel_eval(req), angular_oracle(req, 256)) < 1e-9);
        CHECK(kernel_eval(req) == kernel_series(req, 60));
    }
}

TEST_CASE("series of K1,1 at (1,1) reaches ln 2") {
    const KernelRequest req{KernelFamily::K1, 1, {1, 1}};
    CHECK(std::abs(kernel_series(req, 50) - std::log(2.0)) < 1e-12);
    const SeriesValue s = kernel_series_bounded(req, 10);
    CHECK(std::abs(s.value - std::log(2.0)) <= s.tail_bound);
}

TEST_CASE("series tail bounds contain the truncation error") {
    for (const auto& id : kernel_ids()) {
        for (const auto& p : random_points(40, 5)) {
            const KernelRequest req{id.family, id.p, p};
            if (energy_denoms(p).zeta > 0.6) continue;
            const double exact = angular_oracle(req, 512);
            for (int n : {1, 2, 4, 8}) {
                const SeriesValue s = kernel_series_bounded(req, n);
                INFO(kernel_name(id.family) << id.p << " n=" << n << " zeta=" << energy_denoms(p).zeta);
                CHECK(std::abs(s.value - exact) <= s.tail_bound * (1 + 1e-9) + 1e-12 * std::abs(exact));
            }
        }
    }
}

TEST_CASE("Khat2,3 leading term is -(4/5) zeta^2 / R^2") {
    const RadialPoint p{0.01, 1000};
    const EnergyDenoms d = energy_denoms(p);
    const double lead = -0.8 * d.zeta * d.zeta / (d.calR * d.calR);
    CHECK(rel(kernel_eval({KernelFamily::Khat2, 3, p}), lead) < 1e-4);
}

TEST_CASE("series and closed forms agree for zeta below 0.1") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    int tested = 0;
    for (const auto& id : kernel_ids()) {
        for (int i = 0; i < 200; ++i) {
            // r2 chosen so that zeta = target
            const double r1 = std::exp(std::log(0.1) + u(rng) * std::log(1e3));
            const double target = 0.025 + 0.075 * u(rng);
            // zeta = r1 r2 / (r1^2/2 + r2^2/2 + r1 + r2): solve the quadratic for the larger root.
            const double A = 0.5 * target, B = target - r1, C = target * (0.5 * r1 * r1 + r1);
            const double disc = B * B - 4 * A * C;
            if (disc < 0) continue;
            const double r2 = (-B + std::sqrt(disc)) / (2 * A);
            const KernelRequest req{id.family, id.p, {r1, r2}};
            CHECK(rel(kernel_series(req, 60), kernel_closed(req)) < 1e-10);
            ++tested;
        }
    }
    CHECK(tested > 500);
}

TEST_CASE("kernels are symmetric and single-signed") {
    for (const auto& id : kernel_ids()) {
        for (const auto& p : random_points(300, 17)) {
            const double a = kernel_eval({id.family, id.p, p});
            const double b = kernel_eval({id.family, id.p, {p.r2, p.r1}});
            CHECK(rel(a, b) < 1e-13);
            const bool hat = id.family == KernelFamily::Khat1 || id.family == KernelFamily::Khat2;
            CHECK((hat ? a < 0.0 : a > 0.0));
        }
    }
}

TEST_CASE("closed forms match the angular oracle on random points") {
    for (const auto& id : kernel_ids()) {
        for (const auto& p : random_points(200, 23)) {
            if (energy_denoms(p).zeta < zeta_switch) continue;
            const KernelRequest req{id.family, id.p, p};
            CHECK(rel(kernel_closed(req), angular_oracle(req, 256)) < 1e-9);
        }
    }
}

TEST_CASE("asymmetric expansion of K1,1") {
    const double r1 = 1e3, r2 = 1e6;
    const double x = r1 / r2;
    const double k = kernel_eval({KernelFamily::K1, 1, {r1, r2}});
    const double v = (k - 2 * r1 * r2 / calE(r2)) / (x * x * x);
    CHECK(std::abs(v / (4.0 / 3.0) - 1.0) < 0.05);
}

TEST_CASE("K1,1 minus the 2 rho / E2 subtraction is accurate") {
    for (const auto& p : random_points(200, 31)) {
        const EnergyDenoms d = energy_denoms(p);
        const double direct = static_cast<double>(kernel_closed({KernelFamily::K1, 1, p})) - 2 * d.rho / d.calE2;
        const double sub = k11_minus_subtraction(p);
        CHECK(std::abs(sub - direct) <= 1e-9 * std::abs(kernel_closed({KernelFamily::K1, 1, p})) + 1e-300);
    }
}

TEST_CASE("invalid kernel requests") {
    CHECK_THROWS_AS(kernel_eval({KernelFamily::Khat2, 1, {1, 1}}), Error);
    try {
        kernel_closed({KernelFamily::K2, 7, {1, 1}});
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::unsupported_kernel);
    }
    CHECK_THROWS_AS(kernel_eval({KernelFamily::K1, 1, {-1, 1}}), Error);
    CHECK_THROWS_AS(angular_oracle({KernelFamily::K1, 1, {1, 1}}, 4), Error);
}
