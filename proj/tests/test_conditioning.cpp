#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "csde/conditioning.hpp"
#include "csde/heat_kernel.hpp"
#include "csde/stats.hpp"

using namespace csde;

namespace {

ConditioningSpec flat_bridge_spec(double y, int steps = 200) {
    ConditioningSpec spec;
    spec.model = ManifoldModel::euclidean(1);
    spec.m = Vec::Zero(1);
    spec.T = 1.0;
    spec.steps = steps;
    spec.target = TargetLaw::dirac(Vec::Constant(1, y));
    spec.validate();
    return spec;
}

double normal_cdf(double x, double mean, double sd) {
    return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

}  // namespace

TEST_CASE("conditional density ratio closed form on the line") {
    ConditioningSpec spec = flat_bridge_spec(1.0);
    // q_{1/2}(0.2, 1) / q_1(0, 1) = sqrt(2) e^{-0.14}
    double eta = eta_density(spec, 0.5, Vec::Constant(1, 0.2), Vec::Constant(1, 1.0));
    CHECK(eta == doctest::Approx(std::sqrt(2.0) * std::exp(-0.14)).epsilon(1e-12));
    CHECK(eta == doctest::Approx(1.2294635374464987).epsilon(1e-9));
    // exactly 1 at the start by construction
    CHECK(eta_density(spec, 0.0, spec.m, Vec::Constant(1, 1.0)) == 1.0);
    CHECK_THROWS_AS(
        eta_density(spec, 0.9999, Vec::Zero(1), Vec::Constant(1, 1.0)),
        OutOfRangeError);
    CHECK_THROWS_AS(
        eta_density(spec, -0.1, Vec::Zero(1), Vec::Constant(1, 1.0)),
        OutOfRangeError);
}

TEST_CASE("pinned-endpoint drift is the bridge drift") {
    ConditioningSpec spec = flat_bridge_spec(1.0);
    Vec drift = endpoint_drift(spec, 0.5, Vec::Zero(1));
    CHECK(drift(0) == doctest::Approx(2.0).epsilon(1e-14));  // (y - x)/(T - t)
    Vec drift2 = endpoint_drift(spec, 0.75, Vec::Constant(1, 0.5));
    CHECK(drift2(0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("symmetric atoms cancel at the symmetry point") {
    ConditioningSpec spec = flat_bridge_spec(1.0);
    spec.target = TargetLaw::atoms(
        {Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)}, {0.5, 0.5});
    spec.validate();
    CHECK(std::abs(endpoint_drift(spec, 0.4, Vec::Zero(1))(0)) < 1e-14);
    auto post = posterior_weights(spec, 0.4, Vec::Constant(1, 0.3));
    CHECK(post[0] + post[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(post[1] > post[0]);
}

TEST_CASE("a single atom behaves exactly like a pinned endpoint") {
    ConditioningSpec dirac = flat_bridge_spec(0.8);
    ConditioningSpec single = flat_bridge_spec(0.8);
    single.target = TargetLaw::atoms({Vec::Constant(1, 0.8)}, {1.0});
    single.validate();
    for (double t : {0.1, 0.5, 0.9}) {
        Vec x = Vec::Constant(1, 0.3 * t);
        CHECK(std::abs(endpoint_drift(dirac, t, x)(0) -
                       endpoint_drift(single, t, x)(0)) < 1e-14);
    }
    CHECK(posterior_weights(single, 0.5, Vec::Zero(1))[0] ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("trivial density ratio gives zero drift") {
    ConditioningSpec spec = flat_bridge_spec(1.0);
    spec.target = TargetLaw::density_ratio([](const Vec&) { return 1.0; });
    spec.validate();
    CHECK(std::abs(endpoint_drift(spec, 0.3, Vec::Constant(1, 0.4))(0)) < 1e-12);

    ConditioningSpec circle;
    circle.model = ManifoldModel::circle();
    circle.m = Vec::Zero(1);
    circle.T = 1.0;
    circle.steps = 200;
    circle.target = TargetLaw::density_ratio([](const Vec&) { return 2.0; });
    circle.validate();
    CHECK(std::abs(endpoint_drift(circle, 0.3, Vec::Constant(1, 1.0))(0)) < 1e-10);
}

TEST_CASE("target validation") {
    CHECK_THROWS_AS(TargetLaw::atoms({Vec::Zero(1)}, {0.9}), InvalidInputError);
    CHECK_THROWS_AS(TargetLaw::atoms({Vec::Zero(1), Vec::Zero(1)}, {1.2, -0.2}),
                    InvalidInputError);
    ConditioningSpec spec = flat_bridge_spec(1.0);
    spec.target = TargetLaw::time_density([](double) { return 1.0; }, 4.0);
    CHECK_THROWS_AS(spec.validate(), InvalidInputError);

    ConditioningSpec curved;
    curved.model = ManifoldModel::sphere2();
    curved.m = (Vec(3) << 0, 0, 1).finished();
    curved.V = VectorFieldSpec::sphere_gradient(1.0, (Vec(3) << 1, 0, 0).finished());
    curved.T = 1.0;
    curved.target = TargetLaw::dirac((Vec(3) << 1, 0, 0).finished());
    CHECK_THROWS_AS(curved.validate(), InvalidInputError);
}

TEST_CASE("gap policy: zero floor on the flat catalog, series floor elsewhere") {
    ConditioningSpec flat = flat_bridge_spec(1.0, 400);
    CHECK(flat.kernel_floor() == 0.0);
    CHECK(flat.effective_gap() == doctest::Approx(1.0 / 400).epsilon(1e-15));

    ConditioningSpec curved;
    curved.model = ManifoldModel::sphere2();
    curved.m = (Vec(3) << 0, 0, 1).finished();
    curved.T = 1.0;
    curved.steps = 400;
    curved.target = TargetLaw::dirac((Vec(3) << 1, 0, 0).finished());
    curved.validate();
    CHECK(curved.kernel_floor() == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(curved.effective_gap() == doctest::Approx(0.01).epsilon(1e-15));
}

TEST_CASE("bridge marginal matches the gaussian law") {
    ConditioningSpec spec = flat_bridge_spec(1.0, 200);
    const long n = 4000;
    auto paths = sample_csde(spec, n, 555);
    std::vector<double> mid(n);
    for (long p = 0; p < n; ++p) mid[p] = paths[p].position(100)(0);
    auto rep = stats::ks_test(
        mid, [](double x) { return normal_cdf(x, 0.5, 0.5); }, 0.01, "bridge_mid");
    CHECK(rep.pass);
}

TEST_CASE("terminal pinning rate") {
    for (int steps : {200, 400}) {
        ConditioningSpec spec = flat_bridge_spec(1.0, steps);
        const long n = 2000;
        auto paths = sample_csde(spec, n, 556);
        std::size_t last = paths[0].last_simulated();
        double eps = spec.T - paths[0].times[last];
        CHECK(eps == doctest::Approx(1.0 / steps).epsilon(1e-12));
        double mean_sq = 0.0;
        for (const auto& path : paths) {
            double d = path.position(last)(0) - 1.0;
            mean_sq += d * d;
        }
        mean_sq /= n;
        CHECK(mean_sq <= 2.0 * eps);
    }
}

TEST_CASE("attachment metadata") {
    ConditioningSpec spec = flat_bridge_spec(1.0, 100);
    auto paths = sample_csde(spec, 3, 557);
    for (const auto& path : paths) {
        CHECK(path.attached);
        CHECK(path.times.back() == 1.0);
        CHECK(path.position(path.frames.size() - 1)(0) == 1.0);
        CHECK(path.drawn_atom == 0);
        CHECK(path.last_simulated() == path.frames.size() - 2);
    }
}

TEST_CASE("pinned targets take the identical code path in both samplers") {
    ConditioningSpec spec;
    spec.model = ManifoldModel::sphere2();
    spec.m = (Vec(3) << 0, 0, 1).finished();
    spec.T = 1.0;
    spec.steps = 100;
    FramePoint u0 = spec.model.canonical_frame(spec.m);
    spec.target = TargetLaw::dirac(spec.model.exp_map(spec.m, 0.8 * u0.frame.col(0)));
    spec.validate();
    auto a = sample_csde(spec, 8, 558);
    auto b = sample_enlarged(spec, 8, 558);
    for (std::size_t p = 0; p < a.size(); ++p)
        for (std::size_t k = 0; k < a[p].frames.size(); ++k)
            CHECK((a[p].position(k) - b[p].position(k)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-atom mixture marginal on the line") {
    ConditioningSpec spec = flat_bridge_spec(1.0, 200);
    spec.target = TargetLaw::atoms(
        {Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)}, {0.5, 0.5});
    spec.validate();
    const long n = 4000;
    auto paths = sample_csde(spec, n, 559);
    std::vector<double> mid(n);
    for (long p = 0; p < n; ++p) mid[p] = paths[p].position(100)(0);
    auto cdf = [](double x) {
        return 0.5 * normal_cdf(x, -0.5, 0.5) + 0.5 * normal_cdf(x, 0.5, 0.5);
    };
    auto rep = stats::ks_test(mid, cdf, 0.01, "mixture_mid");
    CHECK(rep.pass);

    // endpoints sit exactly on the drawn atoms
    for (const auto& path : paths) {
        CHECK((path.drawn_atom == 0 || path.drawn_atom == 1));
        CHECK(path.position(path.frames.size() - 1)(0) ==
              (path.drawn_atom == 0 ? -1.0 : 1.0));
    }
}

TEST_CASE("constant drift leaves the pinned dynamics unchanged") {
    ConditioningSpec base = flat_bridge_spec(1.0, 400);
    ConditioningSpec drifted = base;
    drifted.V = VectorFieldSpec::constant(Vec::Constant(1, 0.7));
    drifted.validate();
    for (double t : {0.1, 0.4, 0.8}) {
        for (double xv : {-1.0, 0.0, 0.6}) {
            Vec x = Vec::Constant(1, xv);
            double total0 = endpoint_drift(base, t, x)(0);
            double total1 = drifted.V.value(drifted.model, x)(0) +
                            endpoint_drift(drifted, t, x)(0);
            CHECK(std::abs(total0 - total1) < 1e-12);
        }
    }
}

TEST_CASE("scalar relaxation drift uses the drifted kernel") {
    // V = -x/2: transition y ~ N(e^{-s/2} x, 1 - e^{-s})
    ConditioningSpec spec = flat_bridge_spec(1.0, 200);
    spec.V = VectorFieldSpec::linear(Mat::Constant(1, 1, -0.5));
    spec.validate();
    double s = 0.6;
    Vec x = Vec::Constant(1, 0.4), y = Vec::Constant(1, 1.0);
    double mult = std::exp(-0.5 * s);
    double var = 1.0 - std::exp(-s);
    double want = -0.5 * std::log(2 * M_PI * var) -
                  std::pow(1.0 - mult * 0.4, 2) / (2 * var);
    CHECK(log_kernel(spec, s, x, y) == doctest::Approx(want).epsilon(1e-12));
    CHECK(grad_log_kernel(spec, s, x, y)(0) ==
          doctest::Approx(mult * (1.0 - mult * 0.4) / var).epsilon(1e-12));
}

TEST_CASE("curved kernels reject drift") {
    ConditioningSpec spec;
    spec.model = ManifoldModel::sphere2();
    spec.m = (Vec(3) << 0, 0, 1).finished();
    spec.T = 1.0;
    spec.V = VectorFieldSpec::sphere_gradient(0.5, (Vec(3) << 1, 0, 0).finished());
    spec.target = TargetLaw::dirac((Vec(3) << 1, 0, 0).finished());
    CHECK_THROWS_AS(log_kernel(spec, 0.5, spec.m, spec.target.points[0]),
                    UnsupportedError);
}
