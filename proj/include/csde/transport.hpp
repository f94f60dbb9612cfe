#pragma once

#include <vector>

#include "csde/development.hpp"
#include "csde/geometry.hpp"

namespace csde {

// Omega = (1/2) Ric_bar - transpose(frame matrix of grad V), the generator
// of the damped parallel transport.
Mat omega_matrix(const ManifoldModel& model, const FramePoint& u,
                 const VectorFieldSpec& V, bool flip_drift_term = false);

enum class TransportMode { Lambda, Phi };

struct TransportMatrix {
    std::vector<double> times;
    std::vector<Mat> matrices;  // matrices[0] = I_d
};

// Solves M' = -M Omega(u_t) (Lambda) or M' = -M (1/2) Ric_bar(u_t) (Phi)
// along the path grid by Heun's method. The attached endpoint of bridge
// paths is skipped. flip_drift_term is a negative-control hook that flips
// the sign of the drift correction in Omega.
TransportMatrix transport_ode(const ManifoldModel& model, const PathSample& path,
                              const VectorFieldSpec& V, TransportMode mode,
                              bool flip_drift_term = false);

}  // namespace csde
