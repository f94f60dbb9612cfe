#include "csde/io.hpp"

#include <cstdio>
#include <fstream>

#include "csde/errors.hpp"

namespace csde::io {

namespace {

std::ofstream open_out(const std::string& file) {
    std::ofstream os(file);
    if (!os) throw ConfigError("cannot open output file: " + file);
    return os;
}

}  // namespace

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_paths_csv(const std::string& file, const ManifoldModel& model,
                     const std::vector<PathSample>& paths) {
    std::ofstream os = open_out(file);
    os << "path_id,k,t";
    for (int i = 0; i < model.ambient_dim; ++i) os << ",x" << i;
    for (int i = 0; i < model.dim; ++i) os << ",w" << i;
    for (int i = 0; i < model.ambient_dim; ++i) os << ",b" << i;
    os << "\n";
    for (const PathSample& path : paths) {
        std::size_t n = path.n_steps();
        for (std::size_t k = 0; k < path.times.size(); ++k) {
            os << path.path_id << "," << k << "," << fmt17(path.times[k]);
            const Vec& x = path.frames[k].base;
            for (int i = 0; i < model.ambient_dim; ++i) os << "," << fmt17(x(i));
            for (int i = 0; i < model.dim; ++i)
                os << "," << fmt17(k < n ? path.driver[k](i) : 0.0);
            for (int i = 0; i < model.ambient_dim; ++i)
                os << "," << fmt17(k < n ? path.realized_drift[k](i) : 0.0);
            os << "\n";
        }
    }
}

void write_endpoints_csv(const std::string& file, const ManifoldModel& model,
                         const std::vector<PathSample>& paths) {
    std::ofstream os = open_out(file);
    os << "path_id";
    for (int i = 0; i < model.ambient_dim; ++i) os << ",x" << i;
    os << ",attached,drawn_atom\n";
    for (const PathSample& path : paths) {
        os << path.path_id;
        const Vec& x = path.frames.back().base;
        for (int i = 0; i < model.ambient_dim; ++i) os << "," << fmt17(x(i));
        os << "," << (path.attached ? 1 : 0) << "," << path.drawn_atom << "\n";
    }
}

void write_exits_csv(const std::string& file,
                     const std::vector<hitting::ExitSample>& samples) {
    std::ofstream os = open_out(file);
    os << "path_id,time,censored\n";
    for (std::size_t p = 0; p < samples.size(); ++p)
        os << p << "," << fmt17(samples[p].time) << ","
           << (samples[p].censored ? 1 : 0) << "\n";
}

void write_profile_csv(const std::string& file,
                       const hitting::HittingProfile& profile) {
    std::ofstream os = open_out(file);
    os << "s,rho,survival,exit_density\n";
    for (std::size_t i = 0; i < profile.s_grid.size(); ++i)
        for (std::size_t j = 0; j < profile.rho_grid.size(); ++j)
            os << fmt17(profile.s_grid[i]) << "," << fmt17(profile.rho_grid[j]) << ","
               << fmt17(profile.survival(i, j)) << "," << fmt17(profile.exit_dens(i, j))
               << "\n";
}

void write_reports_jsonl(const std::string& file,
                         const std::vector<stats::TestReport>& reports) {
    std::ofstream os = open_out(file);
    for (const auto& rep : reports) os << rep.to_json() << "\n";
}

}  // namespace csde::io
