// Batch front end: runs samplers, estimators and verification suites from a
// JSON config and writes CSV/JSONL artifacts.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "csde/conditioning.hpp"
#include "csde/development.hpp"
#include "csde/estimators.hpp"
#include "csde/hitting.hpp"
#include "csde/io.hpp"
#include "csde/verify.hpp"

namespace {

using nlohmann::json;
using namespace csde;

Vec vec_from_json(const json& j) {
    if (!j.is_array()) throw ConfigError("expected an array of coordinates");
    Vec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
    return v;
}

Mat mat_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("expected a matrix (array of rows)");
    Mat m(j.size(), j[0].size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (j[i].size() != j[0].size()) throw ConfigError("ragged matrix rows");
        for (std::size_t k = 0; k < j[i].size(); ++k) m(i, k) = j[i][k].get<double>();
    }
    return m;
}

template <typename T>
T require(const json& cfg, const std::string& key) {
    if (!cfg.contains(key)) throw ConfigError("config is missing key '" + key + "'");
    try {
        return cfg.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

VectorFieldSpec drift_from_json(const json& cfg) {
    if (!cfg.contains("drift")) return VectorFieldSpec::zero();
    const json& d = cfg.at("drift");
    std::string kind = require<std::string>(d, "kind");
    if (kind == "zero") return VectorFieldSpec::zero();
    if (kind == "constant") return VectorFieldSpec::constant(vec_from_json(d.at("a")));
    if (kind == "linear") return VectorFieldSpec::linear(mat_from_json(d.at("A")));
    if (kind == "sphere_gradient")
        return VectorFieldSpec::sphere_gradient(require<double>(d, "c"),
                                                vec_from_json(d.at("e")));
    throw ConfigError("unknown drift kind '" + kind +
                      "'; valid kinds: zero, constant, linear, sphere_gradient");
}

TargetLaw target_from_json(const json& cfg) {
    const json& t = cfg.at("target");
    std::string kind = require<std::string>(t, "kind");
    if (kind == "dirac") return TargetLaw::dirac(vec_from_json(t.at("point")));
    if (kind == "atoms") {
        std::vector<Vec> points;
        for (const auto& p : t.at("points")) points.push_back(vec_from_json(p));
        return TargetLaw::atoms(points, require<std::vector<double>>(t, "weights"));
    }
    throw ConfigError("unknown target kind '" + kind + "'; valid kinds: dirac, atoms");
}

int run_simulate(const json& cfg, std::uint64_t seed,
                 const std::filesystem::path& out) {
    ManifoldModel model = ManifoldModel::from_name(require<std::string>(cfg, "model"));
    Vec m = vec_from_json(cfg.at("m"));
    model.validate_point(m);
    VectorFieldSpec V = drift_from_json(cfg);
    double T = require<double>(cfg, "T");
    int N = cfg.value("N", static_cast<int>(std::lround(800 * T)));
    long n_paths = require<long>(cfg, "n_paths");

    std::vector<PathSample> paths;
    if (cfg.contains("target")) {
        ConditioningSpec spec;
        spec.model = model;
        spec.m = m;
        spec.V = V;
        spec.T = T;
        spec.steps = N;
        spec.target = target_from_json(cfg);
        spec.validate();
        paths = sample_csde(spec, n_paths, seed);
    } else {
        paths = sample_bm(model, m, V, T, N, n_paths, seed);
    }
    io::write_paths_csv((out / "paths.csv").string(), model, paths);
    io::write_endpoints_csv((out / "endpoints.csv").string(), model, paths);
    return 0;
}

int run_verify(const json& cfg, const std::filesystem::path& out) {
    std::string suite = cfg.value("suite", std::string("all"));
    auto reports = verify::run_suite(suite);
    io::write_reports_jsonl((out / "reports.jsonl").string(), reports);
    for (const auto& rep : reports)
        std::cout << (rep.pass ? "PASS " : "FAIL ") << rep.name << "\n";
    return verify::all_pass(reports) ? 0 : 1;
}

int run_gradient(const json& cfg, std::uint64_t seed,
                 const std::filesystem::path& out) {
    ManifoldModel model = ManifoldModel::from_name(require<std::string>(cfg, "model"));
    Vec m = vec_from_json(cfg.at("m"));
    model.validate_point(m);
    double T = require<double>(cfg, "T");
    int N = cfg.value("N", static_cast<int>(std::lround(800 * T)));
    long n_paths = require<long>(cfg, "n_paths");

    const json& obs = cfg.at("observable");
    std::string kind = require<std::string>(obs, "kind");
    std::function<double(const Vec&)> xi;
    if (kind == "tilt") {
        double a = require<double>(obs, "a");
        xi = [a](const Vec& x) { return std::exp(a * x(0)); };
    } else if (kind == "affine") {
        Vec e = vec_from_json(obs.at("e"));
        double scale = obs.value("scale", 1.0);
        xi = [e, scale](const Vec& x) { return 1.0 + scale * x.dot(e); };
    } else {
        throw ConfigError("unknown observable kind '" + kind +
                          "'; valid kinds: tilt, affine");
    }
    GradientEstimate est = bismut_gradient(model, m, xi, T, n_paths, N, seed);

    std::ofstream os(out / "reports.jsonl");
    if (!os) throw ConfigError("cannot open output directory");
    os << "{\"name\":\"gradient\",\"value\":[";
    for (int i = 0; i < est.value.size(); ++i)
        os << (i ? "," : "") << io::fmt17(est.value(i));
    os << "],\"std_error\":[";
    for (int i = 0; i < est.std_error.size(); ++i)
        os << (i ? "," : "") << io::fmt17(est.std_error(i));
    os << "],\"n_paths\":" << est.n_paths << ",\"seed\":" << seed << "}\n";
    return 0;
}

int run_hitting(const json& cfg, std::uint64_t seed,
                const std::filesystem::path& out) {
    std::string kind = require<std::string>(cfg, "radial_model");
    double r = require<double>(cfg, "r");
    hitting::RadialModelSpec model = [&] {
        if (kind == "Interval1D") return hitting::RadialModelSpec::interval1d(r);
        if (kind == "Ball3D") return hitting::RadialModelSpec::ball3(r);
        throw ConfigError("unknown radial model '" + kind +
                          "'; valid kinds: Interval1D, Ball3D");
    }();
    double tau_max = cfg.value("tau_max", 12.0 * r * r);
    double h = require<double>(cfg, "h");
    long n_paths = require<long>(cfg, "n_paths");

    hitting::HittingProfile profile =
        hitting::exit_density(model, tau_max, cfg.value("n_s", 1200),
                              cfg.value("n_rho", 100));
    io::write_profile_csv((out / "profile.csv").string(), profile);

    std::vector<hitting::ExitSample> exits;
    if (cfg.contains("exit_target")) {
        const json& t = cfg.at("exit_target");
        std::string tkind = require<std::string>(t, "kind");
        std::function<double(double)> g;
        double horizon = tau_max;
        if (tkind == "unit") {
            g = [](double) { return 1.0; };
        } else if (tkind == "window") {
            double a = require<double>(t, "a"), b = require<double>(t, "b");
            if (!(0 <= a && a < b && b <= tau_max))
                throw ConfigError("window must satisfy 0 <= a < b <= tau_max");
            double mass = profile.survival_at(a, 0.0) - profile.survival_at(b, 0.0);
            if (mass <= 0) throw ConfigError("window carries no exit mass");
            g = [a, b, mass](double s) { return (s >= a && s <= b) ? 1.0 / mass : 0.0; };
            horizon = b;
        } else {
            throw ConfigError("unknown exit target '" + tkind +
                              "'; valid kinds: unit, window");
        }
        auto field = hitting::phi_from_target(profile, g);
        exits = hitting::sample_conditioned_exit(model, &field, horizon, h, n_paths,
                                                 seed);
    } else {
        exits = hitting::sample_conditioned_exit(model, nullptr, tau_max, h, n_paths,
                                                 seed);
    }
    io::write_exits_csv((out / "exits.csv").string(), exits);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for conditioned diffusions on model spaces"};
    app.require_subcommand(1);

    std::string config_file;
    std::string out_override;
    std::int64_t seed_override = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_file, "JSON config file")->required();
        sub->add_option("--seed", seed_override, "seed override");
        sub->add_option("--out", out_override, "output directory override");
    };
    CLI::App* sim = app.add_subcommand("simulate", "sample (conditioned) paths");
    CLI::App* ver = app.add_subcommand("verify", "run verification suites");
    CLI::App* grad = app.add_subcommand("gradient", "pathwise semigroup gradient");
    CLI::App* hit = app.add_subcommand("hitting", "first-exit profiles and samples");
    for (CLI::App* sub : {sim, ver, grad, hit}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream is(config_file);
        if (!is) throw csde::ConfigError("cannot read config file: " + config_file);
        json cfg;
        try {
            cfg = json::parse(is);
        } catch (const json::exception& e) {
            throw csde::ConfigError(std::string("config parse error: ") + e.what());
        }

        std::uint64_t seed = (seed_override >= 0)
                                 ? static_cast<std::uint64_t>(seed_override)
                                 : cfg.value("seed", 0ULL);
        std::filesystem::path out =
            out_override.empty() ? cfg.value("out", std::string(".")) : out_override;
        std::filesystem::create_directories(out);

        if (sim->parsed()) return run_simulate(cfg, seed, out);
        if (ver->parsed()) return run_verify(cfg, out);
        if (grad->parsed()) return run_gradient(cfg, seed, out);
        return run_hitting(cfg, seed, out);
    } catch (const csde::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const csde::InvalidInputError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const csde::UnsupportedError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const csde::OutOfRangeError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
}
