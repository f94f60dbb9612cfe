#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "csde/geometry.hpp"
#include "csde/rng.hpp"

namespace csde {

// A discretized frame-bundle path with its anti-development: the Brownian
// increments that drove it and the frame coordinates of the realized total
// drift per step.
struct PathSample {
    std::vector<double> times;        // N+1 grid times (plus attached point)
    std::vector<FramePoint> frames;   // one per grid time
    std::vector<Vec> driver;          // dB_k per step, d-dim
    std::vector<Vec> realized_drift;  // a_k = u_k^{-1}(V + extra) per step
    std::uint64_t seed = 0;
    std::uint64_t path_id = 0;
    bool attached = false;  // last grid point is a synthetic target attachment
    int drawn_atom = -1;    // atom index for conditioned samplers, -1 otherwise

    const Vec& position(std::size_t k) const { return frames[k].base; }
    std::size_t n_steps() const { return driver.size(); }
    // Index of the last dynamically simulated grid point (excludes the
    // attached endpoint).
    std::size_t last_simulated() const {
        return frames.size() - 1 - (attached ? 1 : 0);
    }
};

// Additional drift evaluated at (t, current frame point); must return an
// ambient tangent vector at u.base.
using ExtraDrift = std::function<Vec(double, const FramePoint&)>;

// Geodesic Euler step scheme for the horizontal SDE: per step draw
// dB ~ N(0, h I_d), move along the geodesic with displacement
// u(a h + dB), transport the frame along it and re-orthonormalize.
PathSample develop_path(const ManifoldModel& model, const FramePoint& u0,
                        const VectorFieldSpec& V, const ExtraDrift* extra_drift,
                        double T, int N, RngStream& rng);

// n_paths independent paths from the canonical frame at m, one counter-based
// stream per (seed, path_id). Deterministic and path-parallel.
std::vector<PathSample> sample_bm(const ManifoldModel& model, const Vec& m,
                                  const VectorFieldSpec& V, double T, int N,
                                  long n_paths, std::uint64_t seed);

}  // namespace csde
