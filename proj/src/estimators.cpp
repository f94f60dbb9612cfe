#include "csde/estimators.hpp"

#include <cmath>

#include "csde/heat_kernel.hpp"
#include "csde/parallel.hpp"
#include "csde/quadrature.hpp"

namespace csde {

namespace {

// grad Q_T xi (m) in U_0 coordinates, by closed form (flat) or geodesic
// central differences of the quadrature semigroup (Circle/Sphere2).
Vec semigroup_gradient(const ManifoldModel& model, const Vec& m,
                       const VectorFieldSpec& V, const ScalarObservable& xi,
                       double T) {
    const int d = model.dim;
    if (model.kind == ManifoldKind::Euclidean) {
        double c = 0.0;
        if (V.kind == VectorFieldSpec::Kind::Linear) {
            c = V.A(0, 0);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    if (std::abs(V.A(i, j) - (i == j ? c : 0.0)) > 1e-12)
                        throw UnsupportedError("ibp lhs needs isotropic linear drift");
        } else if (!V.is_zero()) {
            throw UnsupportedError("ibp lhs supports V = 0 or isotropic linear drift");
        }
        double mult = std::exp(c * T);
        double var = (std::abs(c) < 1e-14) ? T : (std::exp(2.0 * c * T) - 1.0) / (2.0 * c);
        // grad Q_T xi (x) = e^{cT} E[grad xi(e^{cT} x + G)], G ~ N(0, var I)
        if (d > 3) throw UnsupportedError("ibp lhs quadrature supports d <= 3");
        const int n = (d == 3) ? 24 : 48;
        const QuadRule& rule = gauss_hermite(n);
        double sigma = std::sqrt(2.0 * var);
        double norm = std::pow(M_PI, -0.5 * d);
        Vec acc = Vec::Zero(d);
        std::vector<int> idx(d, 0);
        while (true) {
            double w = norm;
            Vec y(d);
            for (int k = 0; k < d; ++k) {
                w *= rule.weights[idx[k]];
                y(k) = mult * m(k) + sigma * rule.nodes[idx[k]];
            }
            acc += w * xi.grad(y);
            int k = 0;
            while (k < d && ++idx[k] == n) idx[k++] = 0;
            if (k == d) break;
        }
        return mult * acc;
    }
    if (!V.is_zero())
        throw UnsupportedError("curved-model ibp lhs requires V = 0");
    if (model.kind != ManifoldKind::Circle && model.kind != ManifoldKind::Sphere2)
        throw UnsupportedError("ibp lhs needs a quadrature-capable model");
    FramePoint u0 = model.canonical_frame(m);
    const double delta = 1e-5;
    Vec lhs(d);
    for (int i = 0; i < d; ++i) {
        Vec step = delta * u0.frame.col(i);
        double plus = heat::semigroup_apply(model, T, xi.value, model.exp_map(m, step))
                          .value;
        double minus =
            heat::semigroup_apply(model, T, xi.value, model.exp_map(m, -step)).value;
        lhs(i) = (plus - minus) / (2.0 * delta);
    }
    return lhs;
}

}  // namespace

GradientEstimate bismut_gradient(const ManifoldModel& model, const Vec& m,
                                 const std::function<double(const Vec&)>& xi,
                                 double T, long n_paths, int N,
                                 std::uint64_t seed) {
    const int d = model.dim;
    const VectorFieldSpec V = VectorFieldSpec::zero();
    std::vector<PathSample> paths = sample_bm(model, m, V, T, N, n_paths, seed);

    std::vector<Vec> integrals(n_paths);
    std::vector<double> weights(n_paths);
    parallel_for(n_paths, [&](long p) {
        const PathSample& path = paths[p];
        TransportMatrix lambda = transport_ode(model, path, V, TransportMode::Lambda);
        Vec acc = Vec::Zero(d);
        for (std::size_t k = 0; k < path.n_steps(); ++k)
            acc += lambda.matrices[k] * path.driver[k];
        integrals[p] = acc;
        double w = xi(path.frames.back().base);
        if (w < 0) throw InvalidInputError("bismut_gradient requires xi >= 0");
        weights[p] = w;
    });

    double w_sum = 0.0;
    Vec wi_sum = Vec::Zero(d);
    for (long p = 0; p < n_paths; ++p) {
        w_sum += weights[p];
        wi_sum += weights[p] * integrals[p];
    }
    if (w_sum <= 0)
        throw InvalidInputError("all importance weights vanished (degenerate xi)");
    double w_mean = w_sum / n_paths;
    Vec estimate = wi_sum / (w_sum * T);

    // ratio-estimator standard error via the influence function
    Vec var = Vec::Zero(d);
    for (long p = 0; p < n_paths; ++p) {
        Vec infl = (weights[p] / w_mean) * (integrals[p] / T - estimate);
        var += infl.cwiseAbs2();
    }
    var /= std::max(1L, n_paths - 1);
    GradientEstimate est;
    est.value = estimate;
    est.std_error = (var / static_cast<double>(n_paths)).cwiseSqrt();
    est.n_paths = n_paths;
    return est;
}

IbpResult covariant_ibp_check(const ManifoldModel& model, const Vec& m,
                              const VectorFieldSpec& V, const ScalarObservable& xi,
                              double T, long n_paths, int N, std::uint64_t seed,
                              bool flip_omega_sign) {
    const int d = model.dim;
    std::vector<PathSample> paths = sample_bm(model, m, V, T, N, n_paths, seed);
    std::vector<Vec> terms(n_paths);
    parallel_for(n_paths, [&](long p) {
        const PathSample& path = paths[p];
        TransportMatrix lambda =
            transport_ode(model, path, V, TransportMode::Lambda, flip_omega_sign);
        const FramePoint& uT = path.frames.back();
        terms[p] = lambda.matrices.back() * uT.coords_of(model, xi.grad(uT.base));
    });

    Vec mean = Vec::Zero(d);
    for (const auto& t : terms) mean += t;
    mean /= static_cast<double>(n_paths);
    Vec var = Vec::Zero(d);
    for (const auto& t : terms) var += (t - mean).cwiseAbs2();
    var /= std::max(1L, n_paths - 1);

    IbpResult out;
    out.lhs = semigroup_gradient(model, m, V, xi, T);
    out.rhs.value = mean;
    out.rhs.std_error = (var / static_cast<double>(n_paths)).cwiseSqrt();
    out.rhs.n_paths = n_paths;
    out.z_scores = Vec(d);
    for (int i = 0; i < d; ++i)
        out.z_scores(i) = (mean(i) - out.lhs(i)) / std::max(1e-300, out.rhs.std_error(i));
    return out;
}

std::vector<Vec> newton_martingale(const ConditioningSpec& spec,
                                   const PathSample& path,
                                   const TransportMatrix& transport, const Vec& y) {
    const double limit = spec.T - spec.effective_gap() + 1e-12;
    std::vector<Vec> values;
    std::size_t last = path.last_simulated();
    for (std::size_t k = 0; k <= last && k < transport.matrices.size(); ++k) {
        if (path.times[k] > limit) break;
        const FramePoint& u = path.frames[k];
        Vec g = grad_log_kernel(spec, spec.T - path.times[k], u.base, y);
        values.push_back(transport.matrices[k] * u.coords_of(spec.model, g));
    }
    return values;
}

}  // namespace csde
