#pragma once

#include <cstdint>
#include <functional>

#include "csde/geometry.hpp"

namespace csde::heat {

// Series accuracy is not certified below this horizon.
inline constexpr double kTMin = 0.01;

// ln q_t(x, y) for the drift-free generator (1/2) Laplacian. Gaussian on
// Euclidean, wrapped Gaussian / Fourier on Circle, Legendre series on
// Sphere2, closed form on Hyperbolic3.
double log_q(const ManifoldModel& model, double t, const Vec& x, const Vec& y);
double q(const ManifoldModel& model, double t, const Vec& x, const Vec& y);

// Radial form ln k_t(r) (the kernel depends on x, y through r = d(x, y)).
double log_radial_kernel(const ManifoldModel& model, double t, double r);
// d/dr ln k_t(r).
double dr_log_radial_kernel(const ManifoldModel& model, double t, double r);

// grad_x ln q_t(x, y) as an ambient tangent vector at x. Near the Sphere2
// cut locus the radius is clamped to pi - 1e-3 and *clamped is set.
Vec grad_log_q(const ManifoldModel& model, double t, const Vec& x, const Vec& y,
               bool* clamped = nullptr);

// Density of d(m, X_t): q_t(r) times the area factor of the geodesic sphere.
double radial_density(const ManifoldModel& model, double t, double r);

enum class SemigroupMethod { SeriesQuadrature, MonteCarlo };

struct SemigroupResult {
    double value;
    double error;  // quadrature error estimate or Monte Carlo SE
};

// Q_t xi (x) = int q_t(x,y) xi(y) dy. Product quadrature on Circle/Sphere2;
// Monte Carlo elsewhere (and on request).
SemigroupResult semigroup_apply(const ManifoldModel& model, double t,
                                const std::function<double(const Vec&)>& xi,
                                const Vec& x,
                                SemigroupMethod method = SemigroupMethod::SeriesQuadrature,
                                long mc_samples = 100000,
                                std::uint64_t seed = 20240901);

}  // namespace csde::heat
