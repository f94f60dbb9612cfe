#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "csde/geometry.hpp"

namespace csde::hitting {

// Rotationally symmetric radial model for the first hitting time of the
// sphere of radius r.
struct RadialModelSpec {
    enum class Kind { Interval1D, Ball3D, RadialGrid };
    Kind kind = Kind::Interval1D;
    double r = 1.0;
    std::function<double(double)> area;  // RadialGrid: area factor A(rho)

    static RadialModelSpec interval1d(double r);
    static RadialModelSpec ball3(double r);
    static RadialModelSpec radial_grid(std::function<double(double)> area, double r);
};

// Exact eigen-series for the analytic radial models (start radius rho).
double survival_series(RadialModelSpec::Kind kind, double r, double s, double rho);
double density_series(RadialModelSpec::Kind kind, double r, double s, double rho);

// Survival u(s, rho) = P(T_r > s | start rho) and exit density f = -du/ds
// tabulated on an (s, rho) grid.
struct HittingProfile {
    RadialModelSpec model;
    double tau_max = 0.0;
    std::vector<double> s_grid;
    std::vector<double> rho_grid;  // [0, r], last node at rho = r
    Mat survival;                  // n_s x n_rho
    Mat exit_dens;

    double survival_at(double s, double rho) const;
    double density_at(double s, double rho) const;
    // Mean exit time from the center, int s f(s, 0) ds.
    double mean_exit_time() const;
};

// Series fill for the analytic kinds, Crank-Nicolson solve of
// du/ds = (1/2)(u'' + (A'/A) u') for RadialGrid (Dirichlet at r, reflecting
// regularity at 0).
HittingProfile exit_density(const RadialModelSpec& model, double tau_max,
                            int n_s = 1200, int n_rho = 200);

// phi(t, rho) = int g(t+s) f(s, rho) ds, the space-time harmonic matching
// the boundary data g = dQ_{T_r}/dP_{T_r}.
struct ConditionedExitField {
    double r = 0.0;
    double tau_max = 0.0;
    std::vector<double> t_grid;
    std::vector<double> rho_grid;
    Mat log_phi;  // n_t x n_rho
    std::function<double(double)> g;

    double phi_at(double t, double rho) const;
};

ConditionedExitField phi_from_target(const HittingProfile& profile,
                                     const std::function<double(double)>& g);

// Radial component of the conditioned drift, d/drho ln phi (t, rho):
// centered node differences of ln phi with cubic interpolation in rho.
double conditioned_exit_drift(const ConditionedExitField& field, double t,
                              double rho);

struct ExitSample {
    double time = 0.0;
    bool censored = false;
};

// Simulates the (optionally conditioned) process until it first crosses
// radius r: full BM in d = 1, 3-dimensional BM's radius for Ball3D.
// Brownian-bridge crossing detection plus linear interpolation within the
// crossing step remove the monitoring bias. field == nullptr means
// unconditioned.
std::vector<ExitSample> sample_conditioned_exit(const RadialModelSpec& model,
                                                const ConditionedExitField* field,
                                                double tau_max, double h,
                                                long n_paths, std::uint64_t seed);

}  // namespace csde::hitting
