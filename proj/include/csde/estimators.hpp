#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "csde/conditioning.hpp"
#include "csde/development.hpp"
#include "csde/transport.hpp"

namespace csde {

// Monte Carlo estimate of a tangent vector at m, reported as coordinates in
// the canonical initial frame U_0.
struct GradientEstimate {
    Vec value;
    Vec std_error;
    long n_paths = 0;
};

// A scalar observable xi with its gradient (ambient tangent at y), for the
// integration-by-parts checks.
struct ScalarObservable {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> grad;
};

// grad ln Q_T xi (m) = (1/T) E^Q [ int_0^T Lambda_s dX~_s ], estimated by
// importance sampling under P with weights xi(X_T). V = 0.
GradientEstimate bismut_gradient(const ManifoldModel& model, const Vec& m,
                                 const std::function<double(const Vec&)>& xi,
                                 double T, long n_paths, int N,
                                 std::uint64_t seed);

struct IbpResult {
    Vec lhs;               // grad Q_T xi (m), quadrature / closed form
    GradientEstimate rhs;  // E[Lambda_T u_T^{-1} grad xi(X_T)]
    Vec z_scores;
};

// Covariant integration by parts at t = 0:
//   grad Q_T xi (m) = U_0 E[Lambda_T (X_T^*)^{-1} grad xi (X_T)].
// Supported drift: V = 0 on any model, isotropic linear V on Euclidean.
// flip_omega_sign is the negative-control hook (flips the drift correction
// in Omega).
IbpResult covariant_ibp_check(const ManifoldModel& model, const Vec& m,
                              const VectorFieldSpec& V, const ScalarObservable& xi,
                              double T, long n_paths, int N, std::uint64_t seed,
                              bool flip_omega_sign = false);

// Newton martingale values along one bridge path:
//   N_t = Lambda_t u_t^{-1} grad ln q_{T-t}(X_t, y)
// per grid time with t <= T - gap. transport must come from the same path.
std::vector<Vec> newton_martingale(const ConditioningSpec& spec,
                                   const PathSample& path,
                                   const TransportMatrix& transport, const Vec& y);

}  // namespace csde
