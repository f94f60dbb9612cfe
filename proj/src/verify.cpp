#include "csde/verify.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "csde/conditioning.hpp"
#include "csde/development.hpp"
#include "csde/estimators.hpp"
#include "csde/heat_kernel.hpp"
#include "csde/hitting.hpp"
#include "csde/io.hpp"
#include "csde/parallel.hpp"
#include "csde/transport.hpp"

namespace csde::verify {

namespace {

using stats::TestReport;

double normal_cdf(double x, double mean, double sd) {
    return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

TestReport bound_check(std::string name, double value, double threshold,
                       std::uint64_t seed = 0, long n = 0) {
    TestReport rep;
    rep.name = std::move(name);
    rep.statistic = value;
    rep.threshold = threshold;
    rep.pass = value <= threshold;
    rep.seed = seed;
    rep.n_samples = n;
    return rep;
}

// ---- flat bridge: pinned endpoint on the line reproduces the exact
// Brownian-bridge marginal and terminal pinning rate ------------------------

std::vector<TestReport> suite_flat_bridge() {
    const std::uint64_t seed = 101;
    ConditioningSpec spec;
    spec.model = ManifoldModel::euclidean(1);
    spec.m = Vec::Zero(1);
    spec.T = 1.0;
    spec.steps = 800;
    spec.target = TargetLaw::dirac(Vec::Constant(1, 1.0));
    spec.validate();

    const long n = 10000;
    auto paths = sample_csde(spec, n, seed);

    std::vector<double> mid(n);
    std::vector<double> sq(n);
    const std::size_t k_mid = 400;
    const std::size_t k_last = paths[0].last_simulated();
    const double eps = spec.T - paths[0].times[k_last];
    for (long p = 0; p < n; ++p) {
        mid[p] = paths[p].position(k_mid)(0);
        double gap = paths[p].position(k_last)(0) - 1.0;
        sq[p] = gap * gap;
    }

    std::vector<TestReport> out;
    TestReport ks = stats::ks_test(
        mid, [](double x) { return normal_cdf(x, 0.5, 0.5); }, 0.01,
        "flat_bridge_midpoint_ks");
    ks.seed = seed;
    out.push_back(ks);
    double mean_sq = stats::mean_se(sq).mean;
    out.push_back(bound_check("flat_bridge_terminal_pinning", mean_sq, 2.0 * eps,
                              seed, n));
    return out;
}

// ---- development: radial law on the sphere matches the heat kernel, and
// the scheme reduces to exact Euclidean summation --------------------------

std::vector<TestReport> suite_development() {
    const std::uint64_t seed = 102;
    std::vector<TestReport> out;

    ManifoldModel sphere = ManifoldModel::sphere2();
    Vec m(3);
    m << 0, 0, 1;
    const double t = 0.5;
    const int N = 400;
    const long n = 10000;
    auto paths = sample_bm(sphere, m, VectorFieldSpec::zero(), t, N, n, seed);
    std::vector<double> radii(n);
    for (long p = 0; p < n; ++p) radii[p] = sphere.distance(m, paths[p].frames.back().base);

    // cumulative radial density by trapezoid for the binned chi-square
    const int M = 4000;
    std::vector<double> cum(M + 1, 0.0);
    for (int i = 1; i <= M; ++i) {
        double r0 = M_PI * (i - 1) / M, r1 = M_PI * i / M;
        cum[i] = cum[i - 1] + 0.5 * (heat::radial_density(sphere, t, r0) +
                                     heat::radial_density(sphere, t, r1)) *
                                  (r1 - r0);
    }
    auto cdf = [&](double r) {
        double pos = std::clamp(r / M_PI, 0.0, 1.0) * M;
        int i = std::min(static_cast<int>(pos), M - 1);
        return cum[i] + (pos - i) * (cum[i + 1] - cum[i]);
    };
    TestReport chi = stats::chisq_binned(radii, cdf, 20, 0.0, M_PI, 0.01,
                                         "development_sphere_radial_chisq");
    chi.seed = seed;
    out.push_back(chi);

    // Euclidean reduction: each step must be exactly x + u(a h + dB)
    ManifoldModel e2 = ManifoldModel::euclidean(2);
    Vec drift(2);
    drift << 0.3, -0.2;
    RngStream rng(seed, 7);
    FramePoint u0 = e2.canonical_frame(Vec::Zero(2));
    PathSample path = develop_path(e2, u0, VectorFieldSpec::constant(drift), nullptr,
                                   1.0, 200, rng);
    double h = 1.0 / 200;
    double resid = 0.0;
    for (std::size_t k = 0; k < path.n_steps(); ++k) {
        Vec inc = path.frames[k].frame * (h * path.realized_drift[k] + path.driver[k]);
        resid = std::max(resid, (path.position(k + 1) - path.position(k) - inc)
                                    .cwiseAbs()
                                    .maxCoeff());
        resid = std::max(resid,
                         (path.frames[k].frame - Mat::Identity(2, 2)).cwiseAbs().maxCoeff());
    }
    out.push_back(bound_check("development_euclidean_reduction", resid, 1e-12, seed));
    return out;
}

// ---- two-route law equality: mixture-drift sampler vs draw-target-first
// sampler on the sphere ----------------------------------------------------

std::vector<TestReport> suite_two_route() {
    const std::uint64_t seed = 103;
    ManifoldModel sphere = ManifoldModel::sphere2();
    Vec m(3), y1(3), y2(3);
    m << 0, 0, 1;
    y1 << std::sin(0.9), 0, std::cos(0.9);
    y2 << 0, std::sin(1.3), std::cos(1.3);

    ConditioningSpec spec;
    spec.model = sphere;
    spec.m = m;
    spec.T = 1.0;
    spec.steps = 800;
    spec.target = TargetLaw::atoms({y1, y2}, {0.3, 0.7});
    spec.validate();

    const long n = 512;
    auto route_a = sample_csde(spec, n, seed);
    auto route_b = sample_enlarged(spec, n, seed + 1);

    std::vector<TestReport> out;
    auto dist = [&](const Vec& a, const Vec& b) { return sphere.distance(a, b); };
    for (double t : {0.25, 0.5, 0.75}) {
        std::size_t k = static_cast<std::size_t>(std::lround(t * spec.steps));
        std::vector<Vec> xa(n), xb(n);
        for (long p = 0; p < n; ++p) {
            xa[p] = route_a[p].position(k);
            xb[p] = route_b[p].position(k);
        }
        char name[64];
        std::snprintf(name, sizeof(name), "two_route_energy_t%02d",
                      static_cast<int>(std::lround(100 * t)));
        TestReport rep = stats::energy_distance_test(xa, xb, dist, 200, 0.01,
                                                     seed + 10, name);
        rep.seed = seed;
        out.push_back(rep);
    }

    std::vector<long> counts(2, 0);
    for (const auto& p : route_a) ++counts[p.drawn_atom];
    TestReport chi =
        stats::chisq_atoms(counts, {0.3, 0.7}, 0.01, "two_route_atom_chisq");
    chi.seed = seed;
    out.push_back(chi);
    return out;
}

// ---- damped transport closed forms and RK2 order -------------------------

double lambda_error(const ManifoldModel& model, double T, int N, double target,
                    std::uint64_t seed) {
    Vec m = (model.kind == ManifoldKind::Sphere2) ? (Vec(3) << 0, 0, 1).finished()
                                                  : (Vec(4) << 1, 0, 0, 0).finished();
    auto paths = sample_bm(model, m, VectorFieldSpec::zero(), T, N, 1, seed);
    TransportMatrix tr =
        transport_ode(model, paths[0], VectorFieldSpec::zero(), TransportMode::Lambda);
    Mat want = target * Mat::Identity(model.dim, model.dim);
    return (tr.matrices.back() - want).cwiseAbs().maxCoeff();
}

std::vector<TestReport> suite_transport() {
    const std::uint64_t seed = 104;
    std::vector<TestReport> out;
    out.push_back(bound_check(
        "transport_sphere_closed_form",
        lambda_error(ManifoldModel::sphere2(), 2.0, 1600, std::exp(-1.0), seed), 1e-6,
        seed));
    out.push_back(bound_check(
        "transport_hyperbolic_closed_form",
        lambda_error(ManifoldModel::hyperbolic3(), 1.0, 800, std::exp(1.0), seed),
        1e-6, seed));

    ManifoldModel e2 = ManifoldModel::euclidean(2);
    auto flat = sample_bm(e2, Vec::Zero(2), VectorFieldSpec::zero(), 1.0, 200, 1, seed);
    TransportMatrix tr =
        transport_ode(e2, flat[0], VectorFieldSpec::zero(), TransportMode::Lambda);
    double dev = 0.0;
    for (const Mat& mat : tr.matrices)
        dev = std::max(dev, (mat - Mat::Identity(2, 2)).cwiseAbs().maxCoeff());
    out.push_back(bound_check("transport_flat_identity", dev, 1e-14, seed));

    double e_coarse =
        lambda_error(ManifoldModel::sphere2(), 1.0, 50, std::exp(-0.5), seed);
    double e_fine =
        lambda_error(ManifoldModel::sphere2(), 1.0, 100, std::exp(-0.5), seed);
    double ratio = e_coarse / e_fine;
    TestReport order;
    order.name = "transport_rk2_step_halving";
    order.statistic = ratio;
    order.threshold = 4.5;
    order.pass = ratio >= 3.5 && ratio <= 4.5;
    order.seed = seed;
    out.push_back(order);
    return out;
}

// ---- pathwise gradient of the semigroup ----------------------------------

std::vector<TestReport> suite_bismut() {
    const std::uint64_t seed = 105;
    std::vector<TestReport> out;

    ManifoldModel e1 = ManifoldModel::euclidean(1);
    for (double a : {0.25, 0.5, 1.0}) {
        auto est = bismut_gradient(
            e1, Vec::Zero(1), [a](const Vec& x) { return std::exp(a * x(0)); }, 1.0,
            100000, 100, seed);
        char name[64];
        std::snprintf(name, sizeof(name), "gradient_tilt_a%03d",
                      static_cast<int>(std::lround(100 * a)));
        TestReport rep =
            stats::z_band_test(est.value(0), a, est.std_error(0), 3.0, name);
        rep.seed = seed;
        rep.n_samples = est.n_paths;
        out.push_back(rep);
    }

    ManifoldModel sphere = ManifoldModel::sphere2();
    Vec m(3), e(3);
    m << 1, 0, 0;
    e << 0, 0, 1;
    auto est = bismut_gradient(
        sphere, m, [&](const Vec& x) { return 1.0 + 0.5 * x.dot(e); }, 1.0, 100000,
        400, seed + 1);
    FramePoint u0 = sphere.canonical_frame(m);
    Vec truth = u0.coords_of(sphere, 0.5 * std::exp(-1.0) * e);
    double zmax = 0.0;
    for (int i = 0; i < 2; ++i)
        zmax = std::max(zmax,
                        std::abs(est.value(i) - truth(i)) / est.std_error(i));
    TestReport rep;
    rep.name = "gradient_sphere_eigenfunction";
    rep.statistic = est.value.norm();
    rep.z_score = zmax;
    rep.threshold = 3.0;
    rep.pass = zmax <= 3.0;
    rep.seed = seed + 1;
    rep.n_samples = est.n_paths;
    out.push_back(rep);

    auto flat_est = bismut_gradient(
        sphere, m, [](const Vec&) { return 1.0; }, 1.0, 20000, 200, seed + 2);
    double z1 = 0.0;
    for (int i = 0; i < 2; ++i)
        z1 = std::max(z1, std::abs(flat_est.value(i)) / flat_est.std_error(i));
    TestReport rep1;
    rep1.name = "gradient_constant_observable";
    rep1.statistic = flat_est.value.norm();
    rep1.z_score = z1;
    rep1.threshold = 3.0;
    rep1.pass = z1 <= 3.0;
    rep1.seed = seed + 2;
    rep1.n_samples = flat_est.n_paths;
    out.push_back(rep1);
    return out;
}

// ---- sign convention of the drift term in the transport generator --------

std::vector<TestReport> suite_omega_control() {
    const std::uint64_t seed = 106;
    ManifoldModel e1 = ManifoldModel::euclidean(1);
    VectorFieldSpec ou = VectorFieldSpec::linear(Mat::Constant(1, 1, -0.5));
    ScalarObservable xi{[](const Vec& x) { return std::cos(x(0)); },
                        [](const Vec& x) { return Vec::Constant(1, -std::sin(x(0))); }};
    Vec m = Vec::Constant(1, 0.3);

    std::vector<TestReport> out;
    IbpResult good = covariant_ibp_check(e1, m, ou, xi, 1.0, 20000, 800, seed, false);
    TestReport rep;
    rep.name = "omega_convention_ibp";
    rep.statistic = good.rhs.value(0);
    rep.z_score = good.z_scores(0);
    rep.threshold = 3.0;
    rep.pass = std::abs(good.z_scores(0)) <= 3.0;
    rep.seed = seed;
    rep.n_samples = good.rhs.n_paths;
    out.push_back(rep);

    IbpResult bad = covariant_ibp_check(e1, m, ou, xi, 1.0, 20000, 800, seed, true);
    TestReport ctrl;
    ctrl.name = "omega_convention_negative_control";
    ctrl.statistic = bad.rhs.value(0);
    ctrl.z_score = bad.z_scores(0);
    ctrl.threshold = 10.0;
    ctrl.pass = std::abs(bad.z_scores(0)) > 10.0;
    ctrl.seed = seed;
    ctrl.n_samples = bad.rhs.n_paths;
    out.push_back(ctrl);
    return out;
}

// ---- conditional-score martingale: mean constancy along bridges ----------

TestReport newton_constancy(const ConditioningSpec& spec, long n_paths,
                            std::uint64_t seed, const std::string& name) {
    auto paths = sample_csde(spec, n_paths, seed);
    const int d = spec.model.dim;
    const int n_times = 8;
    const int stride = spec.steps / 10;

    std::vector<Mat> diffs(n_paths);  // n_times x d per path
    parallel_for(n_paths, [&](long p) {
        const PathSample& path = paths[p];
        TransportMatrix tr =
            transport_ode(spec.model, path, spec.V, TransportMode::Lambda);
        const Vec& y = spec.target.points[std::max(path.drawn_atom, 0)];
        std::vector<Vec> values = newton_martingale(spec, path, tr, y);
        Mat d_p(n_times, d);
        for (int j = 1; j <= n_times; ++j)
            d_p.row(j - 1) = (values[j * stride] - values[0]).transpose();
        diffs[p] = d_p;
    });

    double zmax = 0.0;
    for (int j = 0; j < n_times; ++j)
        for (int i = 0; i < d; ++i) {
            std::vector<double> xs(n_paths);
            for (long p = 0; p < n_paths; ++p) xs[p] = diffs[p](j, i);
            auto ms = stats::mean_se(xs);
            zmax = std::max(zmax, std::abs(ms.mean) / ms.se);
        }
    TestReport rep;
    rep.name = name;
    rep.statistic = zmax;
    rep.z_score = zmax;
    rep.threshold = 3.0;
    rep.pass = zmax <= 3.0;
    rep.seed = seed;
    rep.n_samples = n_paths;
    return rep;
}

std::vector<TestReport> suite_newton() {
    const std::uint64_t seed = 107;
    std::vector<TestReport> out;

    ConditioningSpec flat;
    flat.model = ManifoldModel::euclidean(1);
    flat.m = Vec::Zero(1);
    flat.T = 1.0;
    flat.steps = 200;
    flat.target = TargetLaw::dirac(Vec::Constant(1, 1.0));
    flat.validate();
    out.push_back(newton_constancy(flat, 4000, seed, "newton_flat_pinned"));

    flat.target = TargetLaw::atoms({Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)},
                                   {0.4, 0.6});
    flat.validate();
    out.push_back(newton_constancy(flat, 4000, seed + 1, "newton_flat_two_atom"));

    ManifoldModel sphere = ManifoldModel::sphere2();
    Vec m(3);
    m << 0, 0, 1;
    FramePoint u0 = sphere.canonical_frame(m);
    Vec y = sphere.exp_map(m, 0.9 * u0.frame.col(0));

    ConditioningSpec curved;
    curved.model = sphere;
    curved.m = m;
    curved.T = 1.0;
    curved.steps = 400;
    curved.target = TargetLaw::dirac(y);
    curved.validate();
    out.push_back(newton_constancy(curved, 3000, seed + 2, "newton_sphere_pinned"));

    Vec y2 = sphere.exp_map(m, 1.1 * u0.frame.col(1));
    curved.target = TargetLaw::atoms({y, y2}, {0.35, 0.65});
    curved.validate();
    out.push_back(newton_constancy(curved, 3000, seed + 3, "newton_sphere_two_atom"));
    return out;
}

// ---- first-exit laws: series, PDE cross-check and conditioned sampling ---

std::vector<TestReport> suite_hitting() {
    const std::uint64_t seed = 108;
    std::vector<TestReport> out;
    using hitting::RadialModelSpec;
    const RadialModelSpec interval = RadialModelSpec::interval1d(1.0);
    auto F0 = [](double s) {
        return 1.0 - hitting::survival_series(RadialModelSpec::Kind::Interval1D, 1.0,
                                              s, 0.0);
    };

    hitting::HittingProfile profile = hitting::exit_density(interval, 12.0, 2400, 64);
    out.push_back(bound_check("exit_mean_time",
                              std::abs(profile.mean_exit_time() - 1.0), 3e-3));

    const double u10 =
        hitting::survival_series(RadialModelSpec::Kind::Interval1D, 1.0, 1.0, 0.0);
    auto raw = hitting::sample_conditioned_exit(interval, nullptr, 12.0, 5e-4, 20000,
                                                seed);
    long beyond = 0;
    for (const auto& s : raw) beyond += (s.time > 1.0) ? 1 : 0;
    double p_hat = static_cast<double>(beyond) / raw.size();
    double se = std::sqrt(p_hat * (1.0 - p_hat) / raw.size());
    TestReport surv = stats::z_band_test(p_hat, u10, se, 3.0, "exit_survival_mc");
    surv.seed = seed;
    surv.n_samples = static_cast<long>(raw.size());
    out.push_back(surv);

    // unit target ratio: the conditioning must be a no-op in law
    hitting::HittingProfile coarse = hitting::exit_density(interval, 12.0, 1200, 100);
    auto unit_field = hitting::phi_from_target(coarse, [](double) { return 1.0; });
    auto unit = hitting::sample_conditioned_exit(interval, &unit_field, 12.0, 5e-4,
                                                 10000, seed + 1);
    std::vector<double> unit_times;
    for (const auto& s : unit)
        if (!s.censored) unit_times.push_back(s.time);
    TestReport ks0 = stats::ks_test(unit_times, F0, 0.01, "exit_unit_target_ks");
    ks0.seed = seed + 1;
    out.push_back(ks0);

    // window-indicator target: explicit truncated law
    const double a = 0.5, b = 1.5;
    const double mass = F0(b) - F0(a);
    hitting::HittingProfile window = hitting::exit_density(interval, 2.0, 2000, 200);
    auto win_field = hitting::phi_from_target(
        window, [&](double s) { return (s >= a && s <= b) ? 1.0 / mass : 0.0; });
    auto win = hitting::sample_conditioned_exit(interval, &win_field, b, 2.5e-4,
                                                10000, seed + 2);
    std::vector<double> win_times;
    for (const auto& s : win)
        if (!s.censored) win_times.push_back(s.time);
    auto win_cdf = [&](double s) {
        return (F0(std::clamp(s, a, b)) - F0(a)) / mass;
    };
    TestReport ksw = stats::ks_test(win_times, win_cdf, 0.01, "exit_window_target_ks");
    ksw.seed = seed + 2;
    out.push_back(ksw);

    // PDE route with a trivial area factor reproduces the d = 1 series past
    // the startup layer
    RadialModelSpec grid = RadialModelSpec::radial_grid([](double) { return 1.0; }, 1.0);
    hitting::HittingProfile pde = hitting::exit_density(grid, 3.0, 1200, 200);
    double sup = 0.0;
    for (std::size_t i = 0; i < pde.s_grid.size(); ++i) {
        if (pde.s_grid[i] < 0.1) continue;
        for (std::size_t j = 0; j < pde.rho_grid.size(); ++j)
            sup = std::max(sup, std::abs(pde.survival(i, j) -
                                         hitting::survival_series(
                                             RadialModelSpec::Kind::Interval1D, 1.0,
                                             pde.s_grid[i], pde.rho_grid[j])));
    }
    out.push_back(bound_check("exit_pde_vs_series", sup, 1e-4));
    return out;
}

// ---- bridge invariance under constant drift ------------------------------

std::vector<TestReport> suite_bridge_invariance() {
    ConditioningSpec base;
    base.model = ManifoldModel::euclidean(1);
    base.m = Vec::Zero(1);
    base.T = 1.0;
    base.steps = 800;
    base.target = TargetLaw::dirac(Vec::Constant(1, 1.0));
    base.validate();

    ConditioningSpec drifted = base;
    drifted.V = VectorFieldSpec::constant(Vec::Constant(1, 0.7));
    drifted.validate();

    double worst = 0.0;
    for (double t = 0.05; t < 0.951; t += 0.05) {
        for (double xv = -2.0; xv <= 2.01; xv += 0.25) {
            Vec x = Vec::Constant(1, xv);
            Vec total0 = base.V.value(base.model, x) + endpoint_drift(base, t, x);
            Vec total1 =
                drifted.V.value(drifted.model, x) + endpoint_drift(drifted, t, x);
            worst = std::max(worst, (total0 - total1).cwiseAbs().maxCoeff());
        }
    }
    return {bound_check("bridge_invariance_constant_drift", worst, 1e-12)};
}

// ---- reproducibility: identical seeds give byte-identical artifacts ------

void write_artifacts(const std::filesystem::path& dir, std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    ConditioningSpec spec;
    spec.model = ManifoldModel::euclidean(1);
    spec.m = Vec::Zero(1);
    spec.T = 1.0;
    spec.steps = 100;
    spec.target = TargetLaw::dirac(Vec::Constant(1, 1.0));
    spec.validate();
    auto paths = sample_csde(spec, 50, seed);
    io::write_paths_csv((dir / "paths.csv").string(), spec.model, paths);
    io::write_endpoints_csv((dir / "endpoints.csv").string(), spec.model, paths);

    auto interval = hitting::RadialModelSpec::interval1d(1.0);
    auto exits = hitting::sample_conditioned_exit(interval, nullptr, 4.0, 2e-3, 200,
                                                  seed + 1);
    io::write_exits_csv((dir / "exits.csv").string(), exits);
    auto profile = hitting::exit_density(interval, 2.0, 32, 32);
    io::write_profile_csv((dir / "profile.csv").string(), profile);

    std::vector<double> times;
    for (const auto& s : exits)
        if (!s.censored) times.push_back(s.time);
    auto F0 = [](double s) {
        return 1.0 - hitting::survival_series(
                         hitting::RadialModelSpec::Kind::Interval1D, 1.0, s, 0.0);
    };
    std::vector<TestReport> reports{stats::ks_test(times, F0, 0.01, "repro_ks")};
    io::write_reports_jsonl((dir / "reports.jsonl").string(), reports);
}

std::string slurp(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::vector<TestReport> suite_reproducibility() {
    const std::uint64_t seed = 110;
    namespace fs = std::filesystem;
    fs::path base = fs::temp_directory_path() / "csde_repro";
    fs::remove_all(base);
    write_artifacts(base / "run_a", seed);
    write_artifacts(base / "run_b", seed);

    long differing = 0;
    for (const char* f :
         {"paths.csv", "endpoints.csv", "exits.csv", "profile.csv", "reports.jsonl"})
        if (slurp(base / "run_a" / f) != slurp(base / "run_b" / f) ||
            slurp(base / "run_a" / f).empty())
            ++differing;
    fs::remove_all(base);
    TestReport rep = bound_check("reproducibility_artifacts",
                                 static_cast<double>(differing), 0.0, seed, 5);
    return {rep};
}

using SuiteFn = std::vector<TestReport> (*)();

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> table = {
        {"flat_bridge", suite_flat_bridge},
        {"development", suite_development},
        {"two_route", suite_two_route},
        {"transport", suite_transport},
        {"bismut", suite_bismut},
        {"omega_control", suite_omega_control},
        {"newton", suite_newton},
        {"hitting", suite_hitting},
        {"bridge_invariance", suite_bridge_invariance},
        {"reproducibility", suite_reproducibility},
    };
    return table;
}

}  // namespace

std::vector<std::string> suite_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry()) names.push_back(name);
    names.push_back("all");
    return names;
}

std::vector<TestReport> run_suite(const std::string& name) {
    if (name == "all") {
        std::vector<TestReport> out;
        for (const auto& [suite, fn] : registry()) {
            auto reports = fn();
            out.insert(out.end(), reports.begin(), reports.end());
        }
        return out;
    }
    for (const auto& [suite, fn] : registry())
        if (suite == name) return fn();
    std::string catalog;
    for (const auto& [suite, fn] : registry()) catalog += suite + ", ";
    throw ConfigError("unknown suite '" + name + "'; valid suites: " + catalog +
                      "all");
}

bool all_pass(const std::vector<TestReport>& reports) {
    for (const auto& rep : reports)
        if (!rep.pass) return false;
    return true;
}

}  // namespace csde::verify
