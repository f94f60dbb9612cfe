#include "csde/transport.hpp"

namespace csde {

Mat omega_matrix(const ManifoldModel& model, const FramePoint& u,
                 const VectorFieldSpec& V, bool flip_drift_term) {
    Mat omega = 0.5 * model.ricci_matrix(u);
    if (!V.is_zero()) {
        Mat dv = V.frame_matrix(model, u).transpose();
        omega += flip_drift_term ? dv : -dv;
    }
    return omega;
}

TransportMatrix transport_ode(const ManifoldModel& model, const PathSample& path,
                              const VectorFieldSpec& V, TransportMode mode,
                              bool flip_drift_term) {
    const std::size_t last = path.last_simulated();
    const int d = model.dim;
    auto gen = [&](std::size_t k) -> Mat {
        if (mode == TransportMode::Phi) return 0.5 * model.ricci_matrix(path.frames[k]);
        return omega_matrix(model, path.frames[k], V, flip_drift_term);
    };

    TransportMatrix out;
    out.times.reserve(last + 1);
    out.matrices.reserve(last + 1);
    out.times.push_back(path.times[0]);
    out.matrices.push_back(Mat::Identity(d, d));

    Mat omega_k = gen(0);
    for (std::size_t k = 0; k < last; ++k) {
        double h = path.times[k + 1] - path.times[k];
        Mat omega_next = gen(k + 1);
        const Mat& M = out.matrices.back();
        Mat k1 = -M * omega_k;
        Mat k2 = -(M + h * k1) * omega_next;
        out.matrices.push_back(M + 0.5 * h * (k1 + k2));
        out.times.push_back(path.times[k + 1]);
        omega_k = omega_next;
    }
    return out;
}

}  // namespace csde
