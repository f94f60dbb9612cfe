#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "csde/hitting.hpp"
#include "csde/stats.hpp"

using namespace csde;
using namespace csde::hitting;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Image-charge representation of the interval survival probability:
// BM on (-r, r) from rho, absorbed at both ends (equivalent to the
// reflected model by symmetry).
double survival_images(double r, double s, double rho) {
    if (s <= 0) return 1.0;
    // barriers at 0 and L = 2r with start x = rho + r; killed density
    // p = sum_k phi_s(y - x - 2kL) - phi_s(y + x - 2kL), integrated over (0, L)
    double L = 2.0 * r, x = rho + r, sq = std::sqrt(s);
    double total = 0.0;
    for (int k = -40; k <= 40; ++k) {
        total += normal_cdf((L - x - 2.0 * k * L) / sq) -
                 normal_cdf((-x - 2.0 * k * L) / sq);
        total -= normal_cdf((L + x - 2.0 * k * L) / sq) -
                 normal_cdf((x - 2.0 * k * L) / sq);
    }
    return total;
}

double interval_cdf(double s) {
    return 1.0 - survival_series(RadialModelSpec::Kind::Interval1D, 1.0, s, 0.0);
}

}  // namespace

TEST_CASE("interval survival series matches the image-charge oracle") {
    for (double s : {0.05, 0.2, 0.5, 1.0, 2.0}) {
        for (double rho : {0.0, 0.3, 0.7, 0.95}) {
            CHECK(survival_series(RadialModelSpec::Kind::Interval1D, 1.0, s, rho) ==
                  doctest::Approx(survival_images(1.0, s, rho)).epsilon(1e-9));
        }
    }
    CHECK(survival_series(RadialModelSpec::Kind::Interval1D, 1.0, 1.0, 0.0) ==
          doctest::Approx(0.3708).epsilon(1e-3));
    CHECK(survival_series(RadialModelSpec::Kind::Interval1D, 1.0, 0.0, 0.5) == 1.0);
    CHECK(survival_series(RadialModelSpec::Kind::Interval1D, 1.0, 0.5, 1.0) == 0.0);
}

TEST_CASE("density is the negative time derivative of survival") {
    for (auto kind :
         {RadialModelSpec::Kind::Interval1D, RadialModelSpec::Kind::Ball3D}) {
        for (double s : {0.2, 0.6, 1.2}) {
            double eps = 1e-6;
            double fd = -(survival_series(kind, 1.0, s + eps, 0.4) -
                          survival_series(kind, 1.0, s - eps, 0.4)) /
                        (2 * eps);
            CHECK(density_series(kind, 1.0, s, 0.4) ==
                  doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("mean exit times match the classical formulas") {
    // E[T] = (r^2 - rho^2) in d = 1, (r^2 - rho^2)/3 in the 3-ball
    auto interval = exit_density(RadialModelSpec::interval1d(1.0), 12.0, 2400, 64);
    CHECK(std::abs(interval.mean_exit_time() - 1.0) < 1e-3);
    auto ball = exit_density(RadialModelSpec::ball3(1.0), 6.0, 2400, 64);
    CHECK(std::abs(ball.mean_exit_time() - 1.0 / 3.0) < 1e-3);
}

TEST_CASE("profile interpolation is accurate off the grid") {
    auto profile = exit_density(RadialModelSpec::interval1d(1.0), 4.0, 800, 100);
    for (double s : {0.31234, 1.00017, 2.71828}) {
        for (double rho : {0.123, 0.456, 0.789}) {
            CHECK(profile.survival_at(s, rho) ==
                  doctest::Approx(survival_series(RadialModelSpec::Kind::Interval1D,
                                                  1.0, s, rho))
                      .epsilon(5e-4));
        }
    }
    CHECK_THROWS_AS(profile.survival_at(5.0, 0.5), OutOfRangeError);
    CHECK_THROWS_AS(profile.survival_at(1.0, 1.5), OutOfRangeError);
}

TEST_CASE("finite-difference solver reproduces the interval series") {
    auto grid = RadialModelSpec::radial_grid([](double) { return 1.0; }, 1.0);
    auto pde = exit_density(grid, 3.0, 1200, 200);
    double sup = 0.0;
    for (std::size_t i = 0; i < pde.s_grid.size(); ++i) {
        if (pde.s_grid[i] < 0.1) continue;  // startup layer
        for (std::size_t j = 0; j < pde.rho_grid.size(); ++j)
            sup = std::max(sup,
                           std::abs(pde.survival(i, j) -
                                    survival_series(RadialModelSpec::Kind::Interval1D,
                                                    1.0, pde.s_grid[i],
                                                    pde.rho_grid[j])));
    }
    CHECK(sup < 1e-4);
}

TEST_CASE("finite-difference solver handles the 3-ball area factor") {
    auto grid =
        RadialModelSpec::radial_grid([](double rho) { return rho * rho; }, 1.0);
    auto pde = exit_density(grid, 1.5, 1200, 200);
    double sup = 0.0;
    for (std::size_t i = 0; i < pde.s_grid.size(); ++i) {
        if (pde.s_grid[i] < 0.05) continue;
        for (std::size_t j = 0; j < pde.rho_grid.size(); ++j)
            sup = std::max(sup, std::abs(pde.survival(i, j) -
                                         survival_series(RadialModelSpec::Kind::Ball3D,
                                                         1.0, pde.s_grid[i],
                                                         pde.rho_grid[j])));
    }
    CHECK(sup < 1e-3);
}

TEST_CASE("solver error shrinks at second order under refinement") {
    auto grid = RadialModelSpec::radial_grid([](double) { return 1.0; }, 1.0);
    auto err = [&](int n_s, int n_rho) {
        auto pde = exit_density(grid, 1.0, n_s, n_rho);
        double sup = 0.0;
        for (std::size_t i = 0; i < pde.s_grid.size(); ++i) {
            if (pde.s_grid[i] < 0.2) continue;
            for (std::size_t j = 0; j < pde.rho_grid.size(); ++j)
                sup = std::max(sup,
                               std::abs(pde.survival(i, j) -
                                        survival_series(
                                            RadialModelSpec::Kind::Interval1D, 1.0,
                                            pde.s_grid[i], pde.rho_grid[j])));
        }
        return sup;
    };
    double ratio = err(200, 50) / err(400, 100);
    CHECK(ratio > 2.5);
    CHECK(ratio < 6.0);
}

TEST_CASE("unit target ratio gives phi close to one and zero drift") {
    auto profile = exit_density(RadialModelSpec::interval1d(1.0), 12.0, 1200, 100);
    auto field = phi_from_target(profile, [](double) { return 1.0; });
    CHECK(field.phi_at(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(field.phi_at(2.0, 0.5) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(conditioned_exit_drift(field, 1.0, 0.5)) < 0.02);
    CHECK_THROWS_AS(conditioned_exit_drift(field, 1.0, 1.0), OutOfRangeError);
    CHECK_THROWS_AS(conditioned_exit_drift(field, 12.5, 0.5), OutOfRangeError);
}

TEST_CASE("boundary value of phi is the target ratio itself") {
    auto profile = exit_density(RadialModelSpec::interval1d(1.0), 4.0, 800, 100);
    double mass = interval_cdf(1.5) - interval_cdf(0.5);
    auto g = [&](double s) { return (s >= 0.5 && s <= 1.5) ? 1.0 / mass : 0.0; };
    auto field = phi_from_target(profile, g);
    CHECK(field.phi_at(0.7, 1.0) == doctest::Approx(1.0 / mass).epsilon(1e-9));
    CHECK(field.phi_at(1.7, 1.0) < 1e-250);  // outside the window
}

TEST_CASE("non-normalized ratios are rejected") {
    auto profile = exit_density(RadialModelSpec::interval1d(1.0), 12.0, 1200, 100);
    CHECK_THROWS_AS(phi_from_target(profile, [](double) { return 2.0; }),
                    InvalidInputError);
    CHECK_THROWS_AS(phi_from_target(profile, [](double) { return -1.0; }),
                    InvalidInputError);
}

TEST_CASE("unconditioned exit sampler matches the series law") {
    auto interval = RadialModelSpec::interval1d(1.0);
    const long n = 5000;
    auto samples = sample_conditioned_exit(interval, nullptr, 12.0, 1e-3, n, 61);
    std::vector<double> times;
    double mean = 0.0;
    for (const auto& s : samples) {
        CHECK(!s.censored);
        times.push_back(s.time);
        mean += s.time;
    }
    mean /= n;
    CHECK(std::abs(mean - 1.0) < 3.0 * 0.8 / std::sqrt(static_cast<double>(n)) + 5e-3);
    CHECK(stats::ks_test(times, interval_cdf).pass);
}

TEST_CASE("3-ball exit sampler matches its series law") {
    auto ball = RadialModelSpec::ball3(1.0);
    const long n = 5000;
    auto samples = sample_conditioned_exit(ball, nullptr, 6.0, 1e-3, n, 62);
    std::vector<double> times;
    for (const auto& s : samples)
        if (!s.censored) times.push_back(s.time);
    auto cdf = [](double s) {
        return 1.0 - survival_series(RadialModelSpec::Kind::Ball3D, 1.0, s, 0.0);
    };
    CHECK(stats::ks_test(times, cdf).pass);
}

TEST_CASE("sampler determinism and censoring") {
    auto interval = RadialModelSpec::interval1d(1.0);
    auto a = sample_conditioned_exit(interval, nullptr, 4.0, 2e-3, 100, 63);
    auto b = sample_conditioned_exit(interval, nullptr, 4.0, 2e-3, 100, 63);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].time == b[i].time);
        CHECK(a[i].censored == b[i].censored);
    }
    auto cut = sample_conditioned_exit(interval, nullptr, 0.05, 1e-3, 200, 64);
    long censored = 0;
    for (const auto& s : cut) censored += s.censored ? 1 : 0;
    CHECK(censored > 150);  // survival at 0.05 is essentially 1
    for (const auto& s : cut)
        if (s.censored) CHECK(s.time == 0.05);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(RadialModelSpec::interval1d(-1.0), InvalidInputError);
    CHECK_THROWS_AS(RadialModelSpec::radial_grid({}, 1.0), InvalidInputError);
    CHECK_THROWS_AS(exit_density(RadialModelSpec::interval1d(1.0), -1.0),
                    InvalidInputError);
    CHECK_THROWS_AS(exit_density(RadialModelSpec::interval1d(1.0), 1.0, 8, 8),
                    InvalidInputError);
    CHECK_THROWS_AS(survival_series(RadialModelSpec::Kind::RadialGrid, 1.0, 1.0, 0.0),
                    UnsupportedError);
    auto grid = RadialModelSpec::radial_grid([](double) { return 1.0; }, 1.0);
    CHECK_THROWS_AS(sample_conditioned_exit(grid, nullptr, 1.0, 1e-3, 10, 65),
                    UnsupportedError);
}
