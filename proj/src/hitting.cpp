#include "csde/hitting.hpp"

#include <algorithm>
#include <cmath>

#include "csde/errors.hpp"
#include "csde/parallel.hpp"
#include "csde/rng.hpp"

namespace csde::hitting {

namespace {

constexpr int kMaxSeriesTerms = 4000;

void check_radius(double s, double rho, double r) {
    if (s < 0) throw OutOfRangeError("time must be nonnegative");
    if (rho < 0 || rho > r + 1e-12)
        throw OutOfRangeError("start radius outside [0, r]");
}

// Reflected BM on [0, r], absorbed at r:
//   u(s, rho) = sum_k (4 (-1)^k / ((2k+1) pi)) cos(mu_k rho) e^{-mu_k^2 s / 2},
// mu_k = (2k+1) pi / (2r). The density series is term-by-term -du/ds.
double interval_series(double r, double s, double rho, bool density) {
    double sum = 0.0;
    for (int k = 0; k < kMaxSeriesTerms; ++k) {
        double mu = (2 * k + 1) * M_PI / (2.0 * r);
        double amp = 4.0 / ((2 * k + 1) * M_PI);
        double decay = std::exp(-0.5 * mu * mu * s);
        double env = amp * decay * (density ? 0.5 * mu * mu : 1.0);
        if (env < 1e-17 && k > 0) break;
        double term = ((k % 2 == 0) ? amp : -amp) * std::cos(mu * rho) * decay;
        sum += density ? 0.5 * mu * mu * term : term;
    }
    return sum;
}

// Radial BM in the unit-speed 3-ball of radius r:
//   u(s, rho) = sum_n (2r/(n pi)) (-1)^{n+1} (sin(n pi rho / r) / rho)
//               e^{-n^2 pi^2 s / (2 r^2)}.
double ball3_series(double r, double s, double rho, bool density) {
    double sum = 0.0;
    for (int n = 1; n <= kMaxSeriesTerms; ++n) {
        double lam = 0.5 * n * n * M_PI * M_PI / (r * r);
        double coeff = 2.0 * r / (n * M_PI);
        double decay = std::exp(-lam * s);
        double env = coeff * decay * (n * M_PI / r) * (density ? lam : 1.0);
        if (env < 1e-17 && n > 1) break;
        double radial = (rho < 1e-12 * r) ? n * M_PI / r : std::sin(n * M_PI * rho / r) / rho;
        double term = ((n % 2 == 1) ? coeff : -coeff) * radial * decay;
        sum += density ? lam * term : term;
    }
    return sum;
}

struct Tridiag {
    std::vector<double> sub, diag, sup;
};

// Thomas solve, rhs overwritten with the solution.
void tridiag_solve(const Tridiag& m, std::vector<double>& rhs) {
    std::size_t n = rhs.size();
    std::vector<double> c(n), d(n);
    c[0] = m.sup[0] / m.diag[0];
    d[0] = rhs[0] / m.diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        double denom = m.diag[i] - m.sub[i] * c[i - 1];
        if (std::abs(denom) < 1e-300)
            throw NumericalError("tridiagonal solve broke down");
        c[i] = m.sup[i] / denom;
        d[i] = (rhs[i] - m.sub[i] * d[i - 1]) / denom;
    }
    rhs[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = d[i] - c[i] * rhs[i + 1];
}

// Generator rows for 1/2 (u'' + (A'/A) u') on the interior nodes, with the
// origin regularity limit kappa0 = lim rho A'/A giving
// L u(0) = (1 + kappa0) (u_1 - u_0) / drho^2.
Tridiag generator_rows(const RadialModelSpec& model, const std::vector<double>& rho,
                       double drho) {
    std::size_t J = rho.size() - 1;  // unknowns 0..J-1, Dirichlet at J
    Tridiag L{std::vector<double>(J, 0.0), std::vector<double>(J, 0.0),
              std::vector<double>(J, 0.0)};
    const double delta = 1e-6 * model.r;
    auto log_deriv = [&](double p) {
        double a = model.area(p);
        if (!(a > 0)) throw InvalidInputError("area factor must be positive");
        return (model.area(p + delta) - model.area(std::max(p - delta, 1e-12 * model.r))) /
               ((p + delta - std::max(p - delta, 1e-12 * model.r)) * a);
    };
    double rho_eps = 1e-4 * model.r;
    double kappa0 = rho_eps * log_deriv(rho_eps);
    L.diag[0] = -(1.0 + kappa0) / (drho * drho);
    L.sup[0] = (1.0 + kappa0) / (drho * drho);
    for (std::size_t j = 1; j < J; ++j) {
        double c = log_deriv(rho[j]);
        L.sub[j] = 0.5 / (drho * drho) - 0.25 * c / drho;
        L.diag[j] = -1.0 / (drho * drho);
        L.sup[j] = 0.5 / (drho * drho) + 0.25 * c / drho;
    }
    return L;
}

// Crank-Nicolson march of du/ds = L u with a Rannacher start (four implicit
// Euler half-steps) to damp the incompatible-corner mode at rho = r.
void solve_radial_grid(const RadialModelSpec& model, HittingProfile& out) {
    std::size_t n_s = out.s_grid.size() - 1;
    std::size_t J = out.rho_grid.size() - 1;
    double drho = out.rho_grid[1] - out.rho_grid[0];
    double ds = out.s_grid[1] - out.s_grid[0];
    Tridiag L = generator_rows(model, out.rho_grid, drho);

    auto stepped = [&](const std::vector<double>& u, double theta_ex, double theta_im,
                       int substeps) {
        std::vector<double> v = u;
        for (int sub = 0; sub < substeps; ++sub) {
            std::vector<double> rhs(J);
            for (std::size_t j = 0; j < J; ++j) {
                double lu = L.diag[j] * v[j];
                if (j > 0) lu += L.sub[j] * v[j - 1];
                if (j + 1 < J) lu += L.sup[j] * v[j + 1];
                rhs[j] = v[j] + theta_ex * lu;
            }
            Tridiag M{L.sub, L.diag, L.sup};
            for (std::size_t j = 0; j < J; ++j) {
                M.sub[j] *= -theta_im;
                M.sup[j] *= -theta_im;
                M.diag[j] = 1.0 - theta_im * L.diag[j];
            }
            tridiag_solve(M, rhs);
            v = rhs;
        }
        return v;
    };

    std::vector<double> u(J, 1.0);
    for (std::size_t j = 0; j < J; ++j) out.survival(0, j) = 1.0;
    out.survival(0, J) = 0.0;
    for (std::size_t i = 1; i <= n_s; ++i) {
        if (i <= 2)
            u = stepped(u, 0.0, 0.25 * ds, 4);  // Rannacher smoothing start
        else
            u = stepped(u, 0.5 * ds, 0.5 * ds, 1);
        for (std::size_t j = 0; j < J; ++j) out.survival(i, j) = u[j];
        out.survival(i, J) = 0.0;
    }
}

double bilinear(const std::vector<double>& xs, const std::vector<double>& ys,
                const Mat& table, double x, double y) {
    auto locate = [](const std::vector<double>& grid, double v, double& w) {
        double lo = grid.front(), hi = grid.back();
        if (v < lo - 1e-9 || v > hi + 1e-9)
            throw OutOfRangeError("query outside tabulated grid");
        v = std::clamp(v, lo, hi);
        double step = grid[1] - grid[0];
        std::size_t i = std::min(static_cast<std::size_t>((v - lo) / step),
                                 grid.size() - 2);
        w = (v - grid[i]) / step;
        return i;
    };
    double wx, wy;
    std::size_t i = locate(xs, x, wx);
    std::size_t j = locate(ys, y, wy);
    return (1 - wx) * ((1 - wy) * table(i, j) + wy * table(i, j + 1)) +
           wx * ((1 - wy) * table(i + 1, j) + wy * table(i + 1, j + 1));
}

}  // namespace

RadialModelSpec RadialModelSpec::interval1d(double r) {
    if (!(r > 0)) throw InvalidInputError("radius must be positive");
    return {Kind::Interval1D, r, {}};
}

RadialModelSpec RadialModelSpec::ball3(double r) {
    if (!(r > 0)) throw InvalidInputError("radius must be positive");
    return {Kind::Ball3D, r, {}};
}

RadialModelSpec RadialModelSpec::radial_grid(std::function<double(double)> area,
                                             double r) {
    if (!(r > 0)) throw InvalidInputError("radius must be positive");
    if (!area) throw InvalidInputError("radial_grid needs an area factor");
    return {Kind::RadialGrid, r, std::move(area)};
}

double survival_series(RadialModelSpec::Kind kind, double r, double s, double rho) {
    check_radius(s, rho, r);
    if (rho >= r) return 0.0;
    if (s == 0.0) return 1.0;
    switch (kind) {
        case RadialModelSpec::Kind::Interval1D:
            return std::clamp(interval_series(r, s, rho, false), 0.0, 1.0);
        case RadialModelSpec::Kind::Ball3D:
            return std::clamp(ball3_series(r, s, rho, false), 0.0, 1.0);
        default:
            throw UnsupportedError("no closed series for a generic radial grid");
    }
}

double density_series(RadialModelSpec::Kind kind, double r, double s, double rho) {
    check_radius(s, rho, r);
    if (s == 0.0) return 0.0;
    switch (kind) {
        case RadialModelSpec::Kind::Interval1D:
            return std::max(0.0, interval_series(r, s, rho, true));
        case RadialModelSpec::Kind::Ball3D:
            return std::max(0.0, ball3_series(r, s, rho, true));
        default:
            throw UnsupportedError("no closed series for a generic radial grid");
    }
}

double HittingProfile::survival_at(double s, double rho) const {
    return std::clamp(bilinear(s_grid, rho_grid, survival, s, rho), 0.0, 1.0);
}

double HittingProfile::density_at(double s, double rho) const {
    return std::max(0.0, bilinear(s_grid, rho_grid, exit_dens, s, rho));
}

double HittingProfile::mean_exit_time() const {
    // E[T] = int_0^inf P(T > s) ds, trapezoid over the tabulated window
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < s_grid.size(); ++i)
        acc += 0.5 * (survival(i, 0) + survival(i + 1, 0)) * (s_grid[i + 1] - s_grid[i]);
    return acc;
}

HittingProfile exit_density(const RadialModelSpec& model, double tau_max, int n_s,
                            int n_rho) {
    if (!(tau_max > 0)) throw InvalidInputError("tau_max must be positive");
    if (n_s < 16 || n_rho < 16)
        throw InvalidInputError("exit_density needs at least 16 nodes per axis");
    HittingProfile out;
    out.model = model;
    out.tau_max = tau_max;
    out.s_grid.resize(n_s + 1);
    out.rho_grid.resize(n_rho + 1);
    for (int i = 0; i <= n_s; ++i) out.s_grid[i] = tau_max * i / n_s;
    for (int j = 0; j <= n_rho; ++j) out.rho_grid[j] = model.r * j / n_rho;
    out.survival = Mat::Zero(n_s + 1, n_rho + 1);
    out.exit_dens = Mat::Zero(n_s + 1, n_rho + 1);

    if (model.kind == RadialModelSpec::Kind::RadialGrid) {
        solve_radial_grid(model, out);
        double ds = out.s_grid[1] - out.s_grid[0];
        for (int j = 0; j < n_rho; ++j) {
            out.exit_dens(0, j) = 0.0;
            for (int i = 1; i < n_s; ++i)
                out.exit_dens(i, j) =
                    std::max(0.0, -(out.survival(i + 1, j) - out.survival(i - 1, j)) /
                                      (2.0 * ds));
            out.exit_dens(n_s, j) =
                std::max(0.0, -(out.survival(n_s, j) - out.survival(n_s - 1, j)) / ds);
        }
    } else {
        for (int i = 0; i <= n_s; ++i)
            for (int j = 0; j <= n_rho; ++j) {
                out.survival(i, j) =
                    survival_series(model.kind, model.r, out.s_grid[i], out.rho_grid[j]);
                out.exit_dens(i, j) =
                    density_series(model.kind, model.r, out.s_grid[i], out.rho_grid[j]);
            }
    }
    return out;
}

double ConditionedExitField::phi_at(double t, double rho) const {
    return std::exp(bilinear(t_grid, rho_grid, log_phi, t, rho));
}

ConditionedExitField phi_from_target(const HittingProfile& profile,
                                     const std::function<double(double)>& g) {
    if (!g) throw InvalidInputError("phi_from_target needs a target ratio g");
    const auto& s = profile.s_grid;
    const auto& rho = profile.rho_grid;
    std::size_t n_s = s.size() - 1;
    std::size_t n_rho = rho.size() - 1;
    double ds = s[1] - s[0];

    std::vector<double> g_vals(n_s + 1);
    for (std::size_t i = 0; i <= n_s; ++i) {
        g_vals[i] = g(s[i]);
        if (!(g_vals[i] >= 0) || !std::isfinite(g_vals[i]))
            throw InvalidInputError("target ratio g must be finite and nonnegative");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n_s; ++i)
        total += 0.5 * (g_vals[i] * profile.exit_dens(i, 0) +
                        g_vals[i + 1] * profile.exit_dens(i + 1, 0)) * ds;
    if (std::abs(total - 1.0) > 5e-3)
        throw InvalidInputError("g is not a density ratio for the exit law from the center");

    ConditionedExitField field;
    field.r = profile.model.r;
    field.tau_max = profile.tau_max;
    field.t_grid = s;
    field.rho_grid = rho;
    field.g = g;
    field.log_phi = Mat::Zero(n_s + 1, n_rho + 1);
    for (std::size_t i = 0; i <= n_s; ++i) {
        std::size_t m = n_s - i;  // remaining window indices
        for (std::size_t j = 0; j < n_rho; ++j) {
            double phi = 0.0;
            for (std::size_t k = 0; k < m; ++k)
                phi += 0.5 * (g_vals[i + k] * profile.exit_dens(k, j) +
                              g_vals[i + k + 1] * profile.exit_dens(k + 1, j)) * ds;
            field.log_phi(i, j) = std::log(std::max(phi, 1e-300));
        }
        // phi(t, r) = g(t): the exit time is immediate on the boundary
        field.log_phi(i, n_rho) = std::log(std::max(g_vals[i], 1e-300));
    }
    return field;
}

double conditioned_exit_drift(const ConditionedExitField& field, double t,
                              double rho) {
    if (rho < 0 || rho >= field.r)
        throw OutOfRangeError("drift is defined on 0 <= rho < r");
    if (t < 0 || t >= field.tau_max)
        throw OutOfRangeError("drift is defined on 0 <= t < tau_max");
    const auto& tg = field.t_grid;
    const auto& rg = field.rho_grid;
    double dt = tg[1] - tg[0];
    double drho = rg[1] - rg[0];
    std::size_t J = rg.size() - 1;
    std::size_t i = std::min(static_cast<std::size_t>(t / dt), tg.size() - 2);
    double wt = (t - tg[i]) / dt;
    std::size_t j = std::min(static_cast<std::size_t>(rho / drho), J - 1);
    double wr = (rho - rg[j]) / drho;

    auto node_deriv = [&](std::size_t row, std::size_t col) {
        if (col == 0) return 0.0;  // even in rho at the reflecting origin
        if (col == J)
            return (field.log_phi(row, J) - field.log_phi(row, J - 1)) / drho;
        return (field.log_phi(row, col + 1) - field.log_phi(row, col - 1)) /
               (2.0 * drho);
    };
    auto row_value = [&](std::size_t row) {
        return (1 - wr) * node_deriv(row, j) + wr * node_deriv(row, j + 1);
    };
    return (1 - wt) * row_value(i) + wt * row_value(i + 1);
}

std::vector<ExitSample> sample_conditioned_exit(const RadialModelSpec& model,
                                                const ConditionedExitField* field,
                                                double tau_max, double h,
                                                long n_paths, std::uint64_t seed) {
    if (model.kind == RadialModelSpec::Kind::RadialGrid)
        throw UnsupportedError("exit sampling needs an analytic radial model");
    if (!(h > 0) || !(tau_max > 0)) throw InvalidInputError("h and tau_max must be positive");
    if (n_paths <= 0) throw InvalidInputError("n_paths must be positive");
    const int d = (model.kind == RadialModelSpec::Kind::Ball3D) ? 3 : 1;
    const double r = model.r;
    const double drift_cap = 10.0 / std::sqrt(h);
    const long n_steps = static_cast<long>(std::ceil(tau_max / h));

    std::vector<ExitSample> out(n_paths);
    parallel_for(n_paths, [&](long p) {
        RngStream rng(seed, static_cast<std::uint64_t>(p));
        Vec x = Vec::Zero(d);
        ExitSample sample{tau_max, true};
        double t = 0.0;
        for (long k = 0; k < n_steps; ++k) {
            double rho = x.norm();
            Vec b = Vec::Zero(d);
            if (field != nullptr && rho > 1e-12 * r) {
                double mag = conditioned_exit_drift(
                    *field, std::min(t, field->tau_max * (1.0 - 1e-12)),
                    std::min(rho, r * (1.0 - 1e-12)));
                mag = std::clamp(mag, -drift_cap, drift_cap);
                b = (mag / rho) * x;
            }
            double step = std::min(h, tau_max - t);
            Vec xn = x + step * b;
            for (int i = 0; i < d; ++i) xn(i) += std::sqrt(step) * rng.next_gaussian();
            if (!xn.allFinite())
                throw NumericalError("exit sampler produced a non-finite state", k);
            double rho_n = xn.norm();
            if (rho_n >= r) {
                double frac = std::clamp((r - rho) / std::max(rho_n - rho, 1e-300), 0.0, 1.0);
                sample = {t + frac * step, false};
                break;
            }
            // Brownian-bridge probability of an unobserved crossing inside the step
            double p_cross = std::exp(-2.0 * (r - rho) * (r - rho_n) / step);
            if (rng.next_uniform() < p_cross) {
                double frac = (r - rho) / ((r - rho) + (r - rho_n));
                sample = {t + frac * step, false};
                break;
            }
            x = xn;
            t += step;
        }
        out[p] = sample;
    });
    return out;
}

}  // namespace csde::hitting
