#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "csde/heat_kernel.hpp"
#include "csde/quadrature.hpp"

using namespace csde;

namespace {

const ManifoldModel kE1 = ManifoldModel::euclidean(1);
const ManifoldModel kE2 = ManifoldModel::euclidean(2);
const ManifoldModel kCircle = ManifoldModel::circle();
const ManifoldModel kSphere = ManifoldModel::sphere2();
const ManifoldModel kH3 = ManifoldModel::hyperbolic3();

Vec sphere_point(double polar, double azimuth) {
    Vec y(3);
    y << std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth),
        std::cos(polar);
    return y;
}

Vec h3_point(double r, double ux, double uy, double uz) {
    Vec y(4);
    y << std::cosh(r), std::sinh(r) * ux, std::sinh(r) * uy, std::sinh(r) * uz;
    return y;
}

}  // namespace

TEST_CASE("euclidean kernel is the gaussian density") {
    Vec x = Vec::Constant(1, 0.3), y = Vec::Constant(1, 1.1);
    double t = 0.7;
    double want = std::exp(-0.5 * 0.64 / t) / std::sqrt(2 * M_PI * t);
    CHECK(heat::q(kE1, t, x, y) == doctest::Approx(want).epsilon(1e-14));
    Vec g = heat::grad_log_q(kE1, t, x, y);
    CHECK(g(0) == doctest::Approx(0.8 / t).epsilon(1e-14));
}

TEST_CASE("horizon floor is enforced") {
    Vec z1 = Vec::Zero(1);
    CHECK_THROWS_AS(heat::log_q(kE1, 0.005, z1, z1), OutOfRangeError);
    CHECK_THROWS_AS(heat::log_radial_kernel(kSphere, 0.0099, 0.5), OutOfRangeError);
    CHECK_NOTHROW(heat::log_radial_kernel(kSphere, 0.01, 0.5));
}

TEST_CASE("circle kernel: wrapped and fourier representations agree") {
    // independent re-summation at t = 0.5: both the image sum and the
    // character sum, compared against the implementation
    double t = 0.5, theta = 1.1;
    double images = 0.0;
    for (int k = -30; k <= 30; ++k) {
        double u = theta + 2 * M_PI * k;
        images += std::exp(-u * u / (2 * t)) / std::sqrt(2 * M_PI * t);
    }
    double fourier = 1.0 / (2 * M_PI);
    for (int n = 1; n <= 60; ++n)
        fourier += std::exp(-0.5 * n * n * t) * std::cos(n * theta) / M_PI;
    CHECK(images == doctest::Approx(fourier).epsilon(1e-12));
    Vec x = Vec::Zero(1), y = Vec::Constant(1, theta);
    CHECK(heat::q(kCircle, t, x, y) == doctest::Approx(images).epsilon(1e-10));

    // continuity across the internal series switch at t = 1
    double below = heat::log_radial_kernel(kCircle, 1.0 - 1e-9, 0.7);
    double above = heat::log_radial_kernel(kCircle, 1.0 + 1e-9, 0.7);
    CHECK(std::abs(below - above) < 1e-7);
}

TEST_CASE("long-time limits are the uniform densities") {
    Vec x = Vec::Zero(1), y = Vec::Constant(1, 2.0);
    CHECK(heat::q(kCircle, 50.0, x, y) ==
          doctest::Approx(0.15915494309189535).epsilon(1e-12));
    CHECK(heat::q(kSphere, 50.0, sphere_point(0, 0), sphere_point(1.3, 0.4)) ==
          doctest::Approx(0.07957747154594767).epsilon(1e-12));
}

TEST_CASE("radial densities integrate to one") {
    struct Case {
        const ManifoldModel* model;
        double t, r_max;
    };
    for (const Case& c :
         {Case{&kE2, 0.5, 8.0}, Case{&kCircle, 0.4, M_PI}, Case{&kSphere, 0.5, M_PI},
          Case{&kH3, 0.5, 9.0}}) {
        const int n = 4000;
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double r0 = c.r_max * i / n, r1 = c.r_max * (i + 1) / n;
            total += 0.5 * (heat::radial_density(*c.model, c.t, r0) +
                            heat::radial_density(*c.model, c.t, r1)) * (r1 - r0);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-5));
    }
}

TEST_CASE("mean absolute displacement on the line is the folded normal mean") {
    double t = std::exp(-1.0);
    const int n = 4000;
    double mean = 0.0;
    for (int i = 0; i < n; ++i) {
        double r0 = 8.0 * i / n, r1 = 8.0 * (i + 1) / n;
        mean += 0.5 * (r0 * heat::radial_density(kE1, t, r0) +
                       r1 * heat::radial_density(kE1, t, r1)) * (r1 - r0);
    }
    CHECK(mean == doctest::Approx(std::sqrt(2.0 * t / M_PI)).epsilon(1e-6));
    CHECK(mean == doctest::Approx(0.48394144903828673).epsilon(1e-6));
}

TEST_CASE("sphere kernel satisfies chapman-kolmogorov") {
    Vec x = sphere_point(0.0, 0.0), y = sphere_point(0.9, 0.5);
    double t = 0.3, s = 0.4;
    const QuadRule& rule = gauss_legendre(64);
    const int na = 128;
    double conv = 0.0;
    for (int i = 0; i < 64; ++i) {
        double polar = std::acos(rule.nodes[i]);
        for (int j = 0; j < na; ++j) {
            Vec z = sphere_point(polar, 2 * M_PI * j / na);
            conv += rule.weights[i] * (2 * M_PI / na) * heat::q(kSphere, t, x, z) *
                    heat::q(kSphere, s, z, y);
        }
    }
    CHECK(conv == doctest::Approx(heat::q(kSphere, t + s, x, y)).epsilon(1e-6));
}

TEST_CASE("hyperboloid kernel satisfies chapman-kolmogorov") {
    Vec x = h3_point(0, 0, 0, 1), y = h3_point(0.8, 1, 0, 0);
    double t = 0.4, s = 0.3;
    const QuadRule& radial = gauss_legendre(64);
    const QuadRule& polar = gauss_legendre(32);
    const int na = 64;
    const double r_max = 7.0;
    FramePoint u = kH3.canonical_frame(x);
    double conv = 0.0;
    for (int i = 0; i < 64; ++i) {
        double r = 0.5 * r_max * (radial.nodes[i] + 1.0);
        double wr = 0.5 * r_max * radial.weights[i];
        double sh = std::sinh(r);
        for (int j = 0; j < 32; ++j) {
            double cz = polar.nodes[j];
            double sz = std::sqrt(1.0 - cz * cz);
            for (int k = 0; k < na; ++k) {
                double phi = 2 * M_PI * k / na;
                Vec dir = sz * std::cos(phi) * u.frame.col(0) +
                          sz * std::sin(phi) * u.frame.col(1) + cz * u.frame.col(2);
                Vec z = kH3.exp_map(x, r * dir);
                conv += wr * polar.weights[j] * (2 * M_PI / na) * sh * sh *
                        heat::q(kH3, t, x, z) * heat::q(kH3, s, z, y);
            }
        }
    }
    CHECK(conv == doctest::Approx(heat::q(kH3, t + s, x, y)).epsilon(1e-4));
}

TEST_CASE("gradient matches finite differences of the log kernel") {
    struct Case {
        const ManifoldModel* model;
        Vec x, y;
    };
    std::vector<Case> cases;
    cases.push_back({&kE2, (Vec(2) << 0.1, -0.4).finished(),
                     (Vec(2) << 0.9, 0.6).finished()});
    cases.push_back({&kCircle, Vec::Constant(1, 0.4), Vec::Constant(1, 2.0)});
    cases.push_back({&kSphere, sphere_point(0.2, 0.3), sphere_point(1.1, 1.0)});
    cases.push_back({&kH3, h3_point(0.3, 0, 1, 0), h3_point(1.0, 0, 0, 1)});
    const double t = 0.6, eps = 1e-6;
    for (const auto& c : cases) {
        Vec g = heat::grad_log_q(*c.model, t, c.x, c.y);
        FramePoint u = c.model->canonical_frame(c.x);
        for (int i = 0; i < c.model->dim; ++i) {
            Vec v = u.frame.col(i);
            double plus = heat::log_q(*c.model, t, c.model->exp_map(c.x, eps * v), c.y);
            double minus = heat::log_q(*c.model, t, c.model->exp_map(c.x, -eps * v), c.y);
            double fd = (plus - minus) / (2 * eps);
            CHECK(c.model->metric_dot(g, v) == doctest::Approx(fd).epsilon(2e-5));
        }
    }
}

TEST_CASE("sphere gradient clamps at the cut locus") {
    bool clamped = false;
    Vec g = heat::grad_log_q(kSphere, 0.5, sphere_point(1e-5, 0.0),
                             sphere_point(M_PI - 1e-5, 0.0), &clamped);
    CHECK(clamped);
    CHECK(g.allFinite());
    bool clamped2 = true;
    heat::grad_log_q(kSphere, 0.5, sphere_point(0.3, 0.0), sphere_point(1.0, 0.0),
                     &clamped2);
    CHECK(!clamped2);
}

TEST_CASE("semigroup quadrature reproduces the harmonic eigenrelation") {
    Vec e(3);
    e << 0, 0, 1;
    auto xi = [&](const Vec& y) { return 1.0 + 0.5 * y.dot(e); };
    Vec x = sphere_point(0.7, 0.2);
    double t = 1.0;
    auto res = heat::semigroup_apply(kSphere, t, xi, x);
    double want = 1.0 + 0.5 * std::exp(-t) * x.dot(e);
    CHECK(res.value == doctest::Approx(want).epsilon(1e-8));
    CHECK(res.error < 1e-6);

    auto circle_xi = [](const Vec& y) { return 1.0 + 0.25 * std::sin(y(0)); };
    Vec theta = Vec::Constant(1, 0.9);
    auto cres = heat::semigroup_apply(kCircle, 0.8, circle_xi, theta);
    double cwant = 1.0 + 0.25 * std::exp(-0.4) * std::sin(0.9);
    CHECK(cres.value == doctest::Approx(cwant).epsilon(1e-8));
}

TEST_CASE("monte carlo semigroup matches the gaussian mgf") {
    auto xi = [](const Vec& y) { return std::exp(y(0)); };
    auto res = heat::semigroup_apply(kE1, 1.0, xi, Vec::Zero(1),
                                     heat::SemigroupMethod::MonteCarlo, 200000, 5);
    CHECK(std::abs(res.value - std::exp(0.5)) < 4.0 * res.error + 1e-4);

    // Monte Carlo on the hyperboloid: constant observable integrates to 1
    auto one = [](const Vec&) { return 1.0; };
    auto hres = heat::semigroup_apply(kH3, 0.5, one, h3_point(0, 0, 0, 1),
                                      heat::SemigroupMethod::MonteCarlo, 2000, 6);
    CHECK(hres.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("negative observables are rejected") {
    auto bad = [](const Vec& y) { return y(0); };
    CHECK_THROWS_AS(
        heat::semigroup_apply(kE1, 1.0, bad, Vec::Zero(1),
                              heat::SemigroupMethod::MonteCarlo, 100, 7),
        InvalidInputError);
}

TEST_CASE("radial derivative matches finite differences") {
    for (const ManifoldModel* model : {&kE2, &kCircle, &kSphere, &kH3}) {
        double t = 0.8, r = 0.9, eps = 1e-6;
        double fd = (heat::log_radial_kernel(*model, t, r + eps) -
                     heat::log_radial_kernel(*model, t, r - eps)) /
                    (2 * eps);
        CHECK(heat::dr_log_radial_kernel(*model, t, r) ==
              doctest::Approx(fd).epsilon(1e-6));
    }
}
