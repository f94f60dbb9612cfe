#include "csde/heat_kernel.hpp"

#include <cmath>

#include "csde/quadrature.hpp"
#include "csde/rng.hpp"

namespace csde::heat {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;

void check_t(double t) {
    if (!(t >= kTMin))
        throw OutOfRangeError("heat kernel horizon below t_min = 0.01");
}

// Sphere2 Legendre series: S = sum_l (2l+1)/(4pi) e^{-l(l+1)t/2} P_l(z) and
// its z-derivative. Coefficients decay super-geometrically; |P_l| <= 1 on
// [-1,1] bounds the tail.
void sphere_series(double t, double z, double* value, double* dvalue) {
    double s = 0.0, ds = 0.0;
    double p_prev = 1.0, p_curr = z;      // P_0, P_1
    double dp_prev = 0.0, dp_curr = 1.0;  // P_0', P_1'
    for (int l = 0; l <= 2000; ++l) {
        double p, dp;
        if (l == 0) {
            p = p_prev;
            dp = dp_prev;
        } else if (l == 1) {
            p = p_curr;
            dp = dp_curr;
        } else {
            p = ((2 * l - 1) * z * p_curr - (l - 1) * p_prev) / l;
            dp = dp_prev + (2 * l - 1) * p_curr;  // P_l' = P_{l-2}' + (2l-1) P_{l-1}
            p_prev = p_curr;
            p_curr = p;
            dp_prev = dp_curr;
            dp_curr = dp;
        }
        double coeff = (2 * l + 1) / (4.0 * kPi) * std::exp(-0.5 * l * (l + 1) * t);
        s += coeff * p;
        ds += coeff * dp;
        if (l > 1.0 / std::sqrt(t) + 2 && coeff < 1e-15) break;
    }
    *value = s;
    *dvalue = ds;
}

// Circle kernel value and theta-derivative at the signed angle theta.
// Wrapped Gaussian below t = 1, Fourier above.
void circle_kernel(double t, double theta, double* value, double* dvalue) {
    if (t < 1.0) {
        int K = static_cast<int>(std::ceil(std::sqrt(2.0 * t * 40.0) / kTwoPi)) + 1;
        double s = 0.0, ds = 0.0;
        double norm = 1.0 / std::sqrt(kTwoPi * t);
        for (int k = -K; k <= K; ++k) {
            double u = theta + kTwoPi * k;
            double w = norm * std::exp(-u * u / (2.0 * t));
            s += w;
            ds += -u / t * w;
        }
        *value = s;
        *dvalue = ds;
    } else {
        int N = static_cast<int>(std::ceil(std::sqrt(2.0 * 42.0 / t))) + 1;
        double s = 1.0 / kTwoPi, ds = 0.0;
        for (int n = 1; n <= N; ++n) {
            double en = std::exp(-0.5 * n * n * t);
            s += en * std::cos(n * theta) / kPi;
            ds -= n * en * std::sin(n * theta) / kPi;
        }
        *value = s;
        *dvalue = ds;
    }
}

}  // namespace

double log_radial_kernel(const ManifoldModel& model, double t, double r) {
    check_t(t);
    switch (model.kind) {
        case ManifoldKind::Euclidean:
            return -0.5 * model.dim * std::log(kTwoPi * t) - r * r / (2.0 * t);
        case ManifoldKind::Circle: {
            double v, dv;
            circle_kernel(t, r, &v, &dv);
            if (v <= 0) throw NumericalError("circle kernel series non-positive");
            return std::log(v);
        }
        case ManifoldKind::Sphere2: {
            double v, dv;
            sphere_series(t, std::cos(r), &v, &dv);
            if (v <= 0) throw NumericalError("sphere kernel series non-positive");
            return std::log(v);
        }
        case ManifoldKind::Hyperbolic3: {
            double log_r_over_sinh =
                (r < 1e-8) ? -r * r / 6.0 : std::log(r) - std::log(std::sinh(r));
            return -1.5 * std::log(kTwoPi * t) - 0.5 * t + log_r_over_sinh -
                   r * r / (2.0 * t);
        }
    }
    throw UnsupportedError("unknown model");
}

double dr_log_radial_kernel(const ManifoldModel& model, double t, double r) {
    check_t(t);
    switch (model.kind) {
        case ManifoldKind::Euclidean: return -r / t;
        case ManifoldKind::Circle: {
            double v, dv;
            circle_kernel(t, r, &v, &dv);
            return dv / v;
        }
        case ManifoldKind::Sphere2: {
            double v, dv;
            sphere_series(t, std::cos(r), &v, &dv);
            return -std::sin(r) * dv / v;
        }
        case ManifoldKind::Hyperbolic3: {
            double r_term = (r < 1e-8) ? -r / 3.0 : 1.0 / r - 1.0 / std::tanh(r);
            return r_term - r / t;
        }
    }
    throw UnsupportedError("unknown model");
}

double log_q(const ManifoldModel& model, double t, const Vec& x, const Vec& y) {
    return log_radial_kernel(model, t, model.distance(x, y));
}

double q(const ManifoldModel& model, double t, const Vec& x, const Vec& y) {
    return std::exp(log_q(model, t, x, y));
}

Vec grad_log_q(const ManifoldModel& model, double t, const Vec& x, const Vec& y,
               bool* clamped) {
    check_t(t);
    if (clamped) *clamped = false;
    if (model.kind == ManifoldKind::Euclidean) return (y - x) / t;
    if (model.kind == ManifoldKind::Circle) {
        double theta = wrap_angle_signed(y(0) - x(0));
        double v, dv;
        circle_kernel(t, theta, &v, &dv);
        Vec g(1);
        g(0) = -dv / v;  // d/dx = -d/dtheta
        return g;
    }
    double r = model.distance(x, y);
    if (r < 1e-9) return Vec::Zero(model.ambient_dim);
    double r_eval = r;
    if (model.kind == ManifoldKind::Sphere2 && r >= kPi - 1e-3) {
        r_eval = kPi - 1e-3;
        if (clamped) *clamped = true;
    }
    Vec w = model.project_tangent(x, y);
    double wn = model.norm(x, w);
    if (wn < 1e-13) return Vec::Zero(model.ambient_dim);  // antipodal, no direction
    Vec unit = w / wn;
    return -dr_log_radial_kernel(model, t, r_eval) * unit;
}

double radial_density(const ManifoldModel& model, double t, double r) {
    if (r < 0 || r > model.max_radius())
        throw InvalidInputError("radius outside the model's radial range");
    double k = std::exp(log_radial_kernel(model, t, r));
    switch (model.kind) {
        case ManifoldKind::Euclidean: {
            int d = model.dim;
            double area = 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d) *
                          std::pow(r, d - 1);
            return k * area;
        }
        case ManifoldKind::Circle: return 2.0 * k;
        case ManifoldKind::Sphere2: return kTwoPi * std::sin(r) * k;
        case ManifoldKind::Hyperbolic3: {
            double sh = std::sinh(r);
            return 4.0 * kPi * sh * sh * k;
        }
    }
    throw UnsupportedError("unknown model");
}

namespace {

SemigroupResult circle_quadrature(const ManifoldModel& model, double t,
                                  const std::function<double(const Vec&)>& xi,
                                  const Vec& x, int n) {
    double sum = 0.0, sum_half = 0.0;
    for (int j = 0; j < n; ++j) {
        Vec y(1);
        y(0) = wrap_angle(kTwoPi * j / n);
        double v = xi(y);
        if (v < 0) throw InvalidInputError("semigroup_apply requires xi >= 0");
        double term = q(model, t, x, y) * v;
        sum += term;
        if (j % 2 == 0) sum_half += term;
    }
    double value = sum * kTwoPi / n;
    double coarse = sum_half * kTwoPi / (n / 2);
    return {value, std::abs(value - coarse)};
}

SemigroupResult sphere_quadrature(const ManifoldModel& model, double t,
                                  const std::function<double(const Vec&)>& xi,
                                  const Vec& x, int n_polar, int n_azimuth) {
    FramePoint u = model.canonical_frame(x);
    auto integrate = [&](int np, int na) {
        const QuadRule& rule = gauss_legendre(np);
        double sum = 0.0;
        for (int i = 0; i < np; ++i) {
            double z = rule.nodes[i];
            double theta = std::acos(z);
            double s = std::sin(theta);
            double kern = std::exp(log_radial_kernel(model, t, theta));
            double ring = 0.0;
            for (int j = 0; j < na; ++j) {
                double phi = kTwoPi * j / na;
                Vec y = model.project_point(z * x + s * (std::cos(phi) * u.frame.col(0) +
                                                         std::sin(phi) * u.frame.col(1)));
                double v = xi(y);
                if (v < 0) throw InvalidInputError("semigroup_apply requires xi >= 0");
                ring += v;
            }
            sum += rule.weights[i] * kern * ring * kTwoPi / na;
        }
        return sum;
    };
    double value = integrate(n_polar, n_azimuth);
    double coarse = integrate(n_polar / 2, n_azimuth / 2);
    return {value, std::abs(value - coarse)};
}

SemigroupResult monte_carlo(const ManifoldModel& model, double t,
                            const std::function<double(const Vec&)>& xi,
                            const Vec& x, long n, std::uint64_t seed) {
    RngStream rng(seed, 0);
    double sum = 0.0, sum_sq = 0.0;
    if (model.kind == ManifoldKind::Euclidean) {
        double s = std::sqrt(t);
        for (long i = 0; i < n; ++i) {
            Vec y(model.dim);
            for (int j = 0; j < model.dim; ++j) y(j) = x(j) + s * rng.next_gaussian();
            double v = xi(y);
            if (v < 0) throw InvalidInputError("semigroup_apply requires xi >= 0");
            sum += v;
            sum_sq += v * v;
        }
    } else {
        // Tabulate the radial CDF once, then sample (radius, direction).
        double r_max = std::isfinite(model.max_radius())
                           ? model.max_radius()
                           : t + 12.0 * std::sqrt(t) + 5.0;
        const int grid = 4096;
        std::vector<double> cdf(grid + 1, 0.0), rad(grid + 1);
        double prev = 0.0;
        for (int i = 0; i <= grid; ++i) {
            rad[i] = r_max * i / grid;
            double dens = radial_density(model, t, rad[i]);
            if (i > 0) cdf[i] = cdf[i - 1] + 0.5 * (dens + prev) * (rad[i] - rad[i - 1]);
            prev = dens;
        }
        for (auto& c : cdf) c /= cdf[grid];
        FramePoint u = model.canonical_frame(x);
        for (long i = 0; i < n; ++i) {
            double p = rng.next_uniform();
            auto it = std::lower_bound(cdf.begin(), cdf.end(), p);
            int hi = std::max<int>(1, static_cast<int>(it - cdf.begin()));
            double frac = (p - cdf[hi - 1]) / std::max(1e-300, cdf[hi] - cdf[hi - 1]);
            double r = rad[hi - 1] + frac * (rad[hi] - rad[hi - 1]);
            Vec dir(model.dim);
            double dn = 0.0;
            while (dn < 1e-12) {
                for (int j = 0; j < model.dim; ++j) dir(j) = rng.next_gaussian();
                dn = dir.norm();
            }
            Vec y = model.exp_map(x, u.apply(r / dn * dir));
            double v = xi(y);
            if (v < 0) throw InvalidInputError("semigroup_apply requires xi >= 0");
            sum += v;
            sum_sq += v * v;
        }
    }
    double mean = sum / n;
    double var = std::max(0.0, sum_sq / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

}  // namespace

SemigroupResult semigroup_apply(const ManifoldModel& model, double t,
                                const std::function<double(const Vec&)>& xi,
                                const Vec& x, SemigroupMethod method,
                                long mc_samples, std::uint64_t seed) {
    check_t(t);
    model.validate_point(x);
    if (method == SemigroupMethod::SeriesQuadrature) {
        if (model.kind == ManifoldKind::Circle)
            return circle_quadrature(model, t, xi, x, 512);
        if (model.kind == ManifoldKind::Sphere2)
            return sphere_quadrature(model, t, xi, x, 64, 128);
    }
    return monte_carlo(model, t, xi, x, mc_samples, seed);
}

}  // namespace csde::heat
