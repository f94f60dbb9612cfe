#include "csde/conditioning.hpp"

#include <cmath>

#include "csde/heat_kernel.hpp"
#include "csde/parallel.hpp"
#include "csde/quadrature.hpp"

namespace csde {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Scalar rate of a Linear field A = c I; throws if A is not isotropic.
double isotropic_rate(const Mat& A) {
    double c = A(0, 0);
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) {
            double expect = (i == j) ? c : 0.0;
            if (std::abs(A(i, j) - expect) > 1e-12)
                throw UnsupportedError(
                    "endpoint conditioning supports only isotropic linear drift");
        }
    return c;
}

// Mean multiplier and per-coordinate variance of the flat drifted kernel
// over horizon s: y ~ N(mult * x + shift, var I).
struct FlatKernelParams {
    double mult;
    Vec shift;
    double var;
};

FlatKernelParams flat_params(const ConditioningSpec& spec, double s) {
    const int d = spec.model.dim;
    switch (spec.V.kind) {
        case VectorFieldSpec::Kind::Zero:
            return {1.0, Vec::Zero(d), s};
        case VectorFieldSpec::Kind::Constant:
            return {1.0, s * spec.V.a, s};
        case VectorFieldSpec::Kind::Linear: {
            double c = isotropic_rate(spec.V.A);
            if (std::abs(c) < 1e-14) return {1.0, Vec::Zero(d), s};
            double mult = std::exp(c * s);
            double var = (std::exp(2.0 * c * s) - 1.0) / (2.0 * c);
            return {mult, Vec::Zero(d), var};
        }
        default:
            throw UnsupportedError("unsupported drift field for flat kernel");
    }
}

bool flat_catalog(const ConditioningSpec& spec) {
    return spec.model.kind == ManifoldKind::Euclidean;
}

}  // namespace

TargetLaw TargetLaw::dirac(const Vec& y) {
    TargetLaw t;
    t.kind = Kind::Dirac;
    t.points = {y};
    t.weights = {1.0};
    return t;
}

TargetLaw TargetLaw::atoms(std::vector<Vec> points, std::vector<double> weights) {
    TargetLaw t;
    t.kind = Kind::Atoms;
    t.points = std::move(points);
    t.weights = std::move(weights);
    t.validate();
    return t;
}

TargetLaw TargetLaw::density_ratio(std::function<double(const Vec&)> xi,
                                   double normalization) {
    TargetLaw t;
    t.kind = Kind::DensityRatio;
    t.xi = std::move(xi);
    t.xi_normalization = normalization;
    return t;
}

TargetLaw TargetLaw::time_density(std::function<double(double)> g, double tau_max) {
    TargetLaw t;
    t.kind = Kind::TimeDensity;
    t.g = std::move(g);
    t.tau_max = tau_max;
    return t;
}

void TargetLaw::validate() const {
    if (kind == Kind::Dirac || kind == Kind::Atoms) {
        if (points.empty() || points.size() != weights.size())
            throw InvalidInputError("atom target needs matching points and weights");
        double sum = 0.0;
        for (double w : weights) {
            if (w <= 0) throw InvalidInputError("atom weights must be positive");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw InvalidInputError("atom weights must sum to 1");
    }
}

double ConditioningSpec::kernel_floor() const {
    return flat_catalog(*this) ? 0.0 : heat::kTMin;
}

double ConditioningSpec::effective_gap() const {
    if (terminal_gap > 0) return terminal_gap;
    return std::max(step_size(), kernel_floor());
}

void ConditioningSpec::validate() const {
    model.validate_point(m);
    target.validate();
    if (steps < 1) throw InvalidInputError("conditioning needs steps >= 1");
    if (functional == Functional::Endpoint) {
        if (T <= 0) throw InvalidInputError("endpoint conditioning needs T > 0");
        if (target.kind == TargetLaw::Kind::TimeDensity)
            throw InvalidInputError("TimeDensity targets require the hitting-time functional");
        if (!V.is_zero() && model.kind != ManifoldKind::Euclidean)
            throw InvalidInputError(
                "endpoint conditioning with drift is restricted to the flat catalog");
        if (!V.is_zero()) (void)flat_params(*this, T);  // rejects non-catalog drift
        for (const auto& y : target.points) model.validate_point(y);
    }
}

double log_kernel(const ConditioningSpec& spec, double s, const Vec& x, const Vec& y) {
    if (flat_catalog(spec)) {
        if (s <= 0) throw OutOfRangeError("kernel horizon must be positive");
        FlatKernelParams p = flat_params(spec, s);
        Vec diff = y - p.mult * x - p.shift;
        return -0.5 * spec.model.dim * std::log(kTwoPi * p.var) -
               diff.squaredNorm() / (2.0 * p.var);
    }
    if (!spec.V.is_zero())
        throw UnsupportedError("drifted kernels are flat-catalog only");
    return heat::log_q(spec.model, s, x, y);
}

Vec grad_log_kernel(const ConditioningSpec& spec, double s, const Vec& x,
                    const Vec& y, bool* clamped) {
    if (clamped) *clamped = false;
    if (flat_catalog(spec)) {
        if (s <= 0) throw OutOfRangeError("kernel horizon must be positive");
        FlatKernelParams p = flat_params(spec, s);
        return p.mult * (y - p.mult * x - p.shift) / p.var;
    }
    if (!spec.V.is_zero())
        throw UnsupportedError("drifted kernels are flat-catalog only");
    return heat::grad_log_q(spec.model, s, x, y, clamped);
}

double eta_density(const ConditioningSpec& spec, double t, const Vec& x, const Vec& y) {
    if (t < 0 || t > spec.T - spec.effective_gap() + 1e-12)
        throw OutOfRangeError("eta_density time outside [0, T - gap]");
    if (t == 0.0) return 1.0;
    return std::exp(log_kernel(spec, spec.T - t, x, y) -
                    log_kernel(spec, spec.T, spec.m, y));
}

std::vector<double> posterior_weights(const ConditioningSpec& spec, double t,
                                      const Vec& x) {
    const auto& tgt = spec.target;
    if (tgt.kind == TargetLaw::Kind::Dirac) return {1.0};
    if (tgt.kind != TargetLaw::Kind::Atoms)
        throw InvalidInputError("posterior weights are defined for atom targets");
    std::size_t n = tgt.points.size();
    std::vector<double> logw(n);
    double max_logw = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        logw[i] = std::log(tgt.weights[i]) +
                  log_kernel(spec, spec.T - t, x, tgt.points[i]) -
                  log_kernel(spec, spec.T, spec.m, tgt.points[i]);
        max_logw = std::max(max_logw, logw[i]);
    }
    double sum = 0.0;
    for (auto& lw : logw) {
        lw = std::exp(lw - max_logw);
        sum += lw;
    }
    for (auto& lw : logw) lw /= sum;
    return logw;
}

namespace {

// grad ln Q_s xi (x) by quadrature of q_s(x,y) xi(y) grad ln q_s(x,y).
Vec density_ratio_drift(const ConditioningSpec& spec, double s, const Vec& x) {
    const auto& xi = spec.target.xi;
    const ManifoldModel& model = spec.model;
    if (model.kind == ManifoldKind::Circle) {
        const int n = 512;
        double den = 0.0;
        Vec num = Vec::Zero(1);
        for (int j = 0; j < n; ++j) {
            Vec y(1);
            y(0) = wrap_angle(kTwoPi * j / n);
            double w = std::exp(log_kernel(spec, s, x, y)) * xi(y);
            den += w;
            num += w * grad_log_kernel(spec, s, x, y);
        }
        return num / den;
    }
    if (model.kind == ManifoldKind::Sphere2) {
        FramePoint u = model.canonical_frame(x);
        const QuadRule& rule = gauss_legendre(64);
        const int na = 128;
        double den = 0.0;
        Vec num = Vec::Zero(3);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double z = rule.nodes[i];
            double theta = std::acos(z);
            double sin_t = std::sin(theta);
            double kern = std::exp(heat::log_radial_kernel(model, s, theta));
            double score = -heat::dr_log_radial_kernel(model, s, theta);
            for (int j = 0; j < na; ++j) {
                double phi = kTwoPi * j / na;
                Vec dir = std::cos(phi) * u.frame.col(0) + std::sin(phi) * u.frame.col(1);
                Vec y = model.project_point(z * x + sin_t * dir);
                double w = rule.weights[i] * kern * xi(y) * kTwoPi / na;
                den += w;
                num += w * score * dir;
            }
        }
        return num / den;
    }
    if (model.kind == ManifoldKind::Euclidean) {
        FlatKernelParams p = flat_params(spec, s);
        Vec mean = p.mult * x + p.shift;
        const int d = model.dim;
        if (d > 3)
            throw UnsupportedError("DensityRatio drift quadrature supports d <= 3");
        const int n = (d == 3) ? 24 : 48;
        const QuadRule& rule = gauss_hermite(n);
        double sigma = std::sqrt(2.0 * p.var);
        double den = 0.0;
        Vec num = Vec::Zero(d);
        std::vector<int> idx(d, 0);
        while (true) {
            double w = 1.0;
            Vec y(d);
            for (int k = 0; k < d; ++k) {
                w *= rule.weights[idx[k]];
                y(k) = mean(k) + sigma * rule.nodes[idx[k]];
            }
            double f = w * xi(y);
            den += f;
            num += f * (p.mult * (y - mean) / p.var);
            int k = 0;
            while (k < d && ++idx[k] == n) idx[k++] = 0;
            if (k == d) break;
        }
        return num / den;
    }
    throw UnsupportedError("DensityRatio targets need a quadrature-capable model");
}

}  // namespace

Vec endpoint_drift(const ConditioningSpec& spec, double t, const Vec& x,
                   bool* clamped) {
    if (clamped) *clamped = false;
    double gap = spec.effective_gap();
    if (t < 0 || t > spec.T - gap + 1e-12)
        throw OutOfRangeError("endpoint_drift time outside [0, T - gap]");
    double s = spec.T - t;
    switch (spec.target.kind) {
        case TargetLaw::Kind::Dirac:
            return grad_log_kernel(spec, s, x, spec.target.points[0], clamped);
        case TargetLaw::Kind::Atoms: {
            std::vector<double> p = posterior_weights(spec, t, x);
            Vec drift = Vec::Zero(spec.model.ambient_dim);
            for (std::size_t i = 0; i < p.size(); ++i) {
                bool c = false;
                drift += p[i] * grad_log_kernel(spec, s, x, spec.target.points[i], &c);
                if (c && clamped) *clamped = true;
            }
            return drift;
        }
        case TargetLaw::Kind::DensityRatio:
            return density_ratio_drift(spec, s, x);
        case TargetLaw::Kind::TimeDensity:
            throw InvalidInputError("TimeDensity drift lives in the hitting-time module");
    }
    throw InvalidInputError("unknown target kind");
}

namespace {

void attach_endpoint(const ConditioningSpec& spec, PathSample& path, const Vec& y,
                     int atom) {
    const ManifoldModel& model = spec.model;
    const FramePoint& last = path.frames.back();
    FramePoint uf;
    try {
        Vec v = model.log_map(last.base, y);
        Mat cols(model.ambient_dim, model.dim);
        for (int j = 0; j < model.dim; ++j)
            cols.col(j) = model.parallel_transport(last.base, v, last.frame.col(j));
        uf = {y, model.orthonormalize(y, cols)};
    } catch (const CutLocusError&) {
        uf = model.canonical_frame(y);
    }
    path.times.push_back(spec.T);
    path.frames.push_back(uf);
    path.attached = true;
    path.drawn_atom = atom;
}

// Simulated horizon: integrate the singular drift only to T - gap, keeping
// the grid commensurate with h = T / steps.
void simulation_grid(const ConditioningSpec& spec, int* n_sim, double* t_sim) {
    double h = spec.step_size();
    int skip = static_cast<int>(std::ceil(spec.effective_gap() / h - 1e-9));
    *n_sim = spec.steps - skip;
    if (*n_sim < 1)
        throw InvalidInputError("terminal gap leaves no steps to simulate");
    *t_sim = h * *n_sim;
}

int draw_atom(const TargetLaw& target, const std::vector<double>& probs,
              RngStream& rng) {
    if (target.kind == TargetLaw::Kind::Dirac) return 0;
    double u = rng.next_uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u <= acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
}

}  // namespace

std::vector<PathSample> sample_enlarged(const ConditioningSpec& spec, long n_paths,
                                        std::uint64_t seed) {
    spec.validate();
    if (spec.functional != ConditioningSpec::Functional::Endpoint)
        throw InvalidInputError("sample_enlarged is an endpoint-functional sampler");
    if (spec.target.kind != TargetLaw::Kind::Dirac &&
        spec.target.kind != TargetLaw::Kind::Atoms)
        throw InvalidInputError("sample_enlarged needs a Dirac or Atoms target");

    int n_sim;
    double t_sim;
    simulation_grid(spec, &n_sim, &t_sim);
    FramePoint u0 = spec.model.canonical_frame(spec.m);

    std::vector<PathSample> paths(n_paths);
    parallel_for(n_paths, [&](long p) {
        RngStream rng(seed, static_cast<std::uint64_t>(p));
        int atom = draw_atom(spec.target, spec.target.weights, rng);
        const Vec& y = spec.target.points[atom];
        ExtraDrift drift = [&](double t, const FramePoint& u) {
            return grad_log_kernel(spec, spec.T - t, u.base, y);
        };
        paths[p] = develop_path(spec.model, u0, spec.V, &drift, t_sim, n_sim, rng);
        paths[p].seed = seed;
        paths[p].path_id = static_cast<std::uint64_t>(p);
        attach_endpoint(spec, paths[p], y, atom);
    });
    return paths;
}

std::vector<PathSample> sample_csde(const ConditioningSpec& spec, long n_paths,
                                    std::uint64_t seed) {
    spec.validate();
    if (spec.functional != ConditioningSpec::Functional::Endpoint)
        throw InvalidInputError("sample_csde is an endpoint-functional sampler");
    // The Dirac mixture drift equals the bridge drift, so the two routes are
    // literally the same code path (and bitwise equal per seed).
    if (spec.target.kind == TargetLaw::Kind::Dirac)
        return sample_enlarged(spec, n_paths, seed);

    int n_sim;
    double t_sim;
    simulation_grid(spec, &n_sim, &t_sim);
    FramePoint u0 = spec.model.canonical_frame(spec.m);

    std::vector<PathSample> paths(n_paths);
    parallel_for(n_paths, [&](long p) {
        RngStream rng(seed, static_cast<std::uint64_t>(p));
        ExtraDrift drift = [&](double t, const FramePoint& u) {
            return endpoint_drift(spec, t, u.base);
        };
        paths[p] = develop_path(spec.model, u0, spec.V, &drift, t_sim, n_sim, rng);
        paths[p].seed = seed;
        paths[p].path_id = static_cast<std::uint64_t>(p);
        if (spec.target.kind == TargetLaw::Kind::Atoms) {
            std::vector<double> post =
                posterior_weights(spec, t_sim, paths[p].frames.back().base);
            int atom = draw_atom(spec.target, post, rng);
            attach_endpoint(spec, paths[p], spec.target.points[atom], atom);
        }
    });
    return paths;
}

}  // namespace csde
