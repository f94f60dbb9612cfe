#include "csde/development.hpp"

#include <cmath>

#include "csde/parallel.hpp"

namespace csde {

PathSample develop_path(const ManifoldModel& model, const FramePoint& u0,
                        const VectorFieldSpec& V, const ExtraDrift* extra_drift,
                        double T, int N, RngStream& rng) {
    if (N < 1) throw InvalidInputError("develop_path needs N >= 1");
    if (T < 0) throw InvalidInputError("develop_path needs T >= 0");
    u0.validate(model);

    const int d = model.dim;
    const double h = T / N;
    const double sqrt_h = std::sqrt(h);

    PathSample path;
    path.times.reserve(N + 1);
    path.frames.reserve(N + 1);
    path.driver.reserve(N);
    path.realized_drift.reserve(N);
    path.times.push_back(0.0);
    path.frames.push_back(u0);

    for (int k = 0; k < N; ++k) {
        const FramePoint& u = path.frames.back();
        const double t = path.times.back();

        Vec dB(d);
        for (int i = 0; i < d; ++i) dB(i) = sqrt_h * rng.next_gaussian();

        Vec drift = V.value(model, u.base);
        if (extra_drift) {
            Vec extra = (*extra_drift)(t, u);
            if (extra.size() != model.ambient_dim ||
                model.tangency_residual(u.base, extra) >
                    1e-8 * (1.0 + model.norm(u.base, extra)))
                throw InvalidInputError("extra_drift returned a non-tangent vector");
            drift += extra;
        }
        if (!drift.allFinite())
            throw NumericalError("non-finite drift during development", k);

        Vec a = u.coords_of(model, drift);
        Vec xi = u.apply(a * h + dB);
        Vec x_next = model.exp_map(u.base, xi);

        Mat cols(model.ambient_dim, d);
        for (int j = 0; j < d; ++j)
            cols.col(j) = model.parallel_transport(u.base, xi, u.frame.col(j));
        FramePoint u_next{x_next, model.orthonormalize(x_next, cols)};

        path.times.push_back(t + h);
        path.frames.push_back(u_next);
        path.driver.push_back(dB);
        path.realized_drift.push_back(a);
    }
    path.times.back() = T;  // kill accumulated rounding at the horizon
    return path;
}

std::vector<PathSample> sample_bm(const ManifoldModel& model, const Vec& m,
                                  const VectorFieldSpec& V, double T, int N,
                                  long n_paths, std::uint64_t seed) {
    if (n_paths < 1) throw InvalidInputError("sample_bm needs n_paths >= 1");
    FramePoint u0 = model.canonical_frame(m);
    std::vector<PathSample> paths(n_paths);
    parallel_for(n_paths, [&](long p) {
        RngStream rng(seed, static_cast<std::uint64_t>(p));
        paths[p] = develop_path(model, u0, V, nullptr, T, N, rng);
        paths[p].seed = seed;
        paths[p].path_id = static_cast<std::uint64_t>(p);
    });
    return paths;
}

}  // namespace csde
