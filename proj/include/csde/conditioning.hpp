#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "csde/development.hpp"
#include "csde/geometry.hpp"

namespace csde {

// The target law nu of the conditioned functional.
struct TargetLaw {
    enum class Kind { Dirac, Atoms, DensityRatio, TimeDensity };
    Kind kind = Kind::Dirac;

    std::vector<Vec> points;       // Dirac (one entry) / Atoms
    std::vector<double> weights;   // Atoms, positive, sum 1

    std::function<double(const Vec&)> xi;  // DensityRatio: dQ_Y/dP_Y, positive
    double xi_normalization = 1.0;         // Monte Carlo estimate of E_P[xi(X_T)]

    std::function<double(double)> g;  // TimeDensity on [0, tau_max]
    double tau_max = 0.0;

    static TargetLaw dirac(const Vec& y);
    static TargetLaw atoms(std::vector<Vec> points, std::vector<double> weights);
    static TargetLaw density_ratio(std::function<double(const Vec&)> xi,
                                   double normalization = 1.0);
    static TargetLaw time_density(std::function<double(double)> g, double tau_max);

    void validate() const;
};

struct ConditioningSpec {
    enum class Functional { Endpoint, HittingTime };

    ManifoldModel model = ManifoldModel::euclidean(1);
    Vec m;
    VectorFieldSpec V;
    Functional functional = Functional::Endpoint;
    double T = 1.0;
    double radius = 0.0;  // HittingTime
    TargetLaw target;
    int steps = 800;
    double terminal_gap = -1.0;  // < 0: max(h, kernel floor)

    double step_size() const { return T / steps; }
    // Kernel evaluation floor: 0 where the (possibly drifted) kernel is in
    // closed form (Euclidean), the series floor elsewhere.
    double kernel_floor() const;
    double effective_gap() const;
    void validate() const;
};

// Transition kernel of the development with drift V, dispatching between the
// drift-free model kernels and the flat drifted catalog (constant drift and
// scalar OU), where closed forms exist for all s > 0.
double log_kernel(const ConditioningSpec& spec, double s, const Vec& x, const Vec& y);
Vec grad_log_kernel(const ConditioningSpec& spec, double s, const Vec& x,
                    const Vec& y, bool* clamped = nullptr);

// eta_t^y = q_{T-t}(x, y) / q_T(m, y); eta_0 = 1.
double eta_density(const ConditioningSpec& spec, double t, const Vec& x, const Vec& y);

// Posterior atom weights w_i eta_t^{y_i} / sum_j w_j eta_t^{y_j}, computed in
// log-space. Dirac returns {1}.
std::vector<double> posterior_weights(const ConditioningSpec& spec, double t,
                                      const Vec& x);

// The conditioning drift F^nu(t, x) for endpoint targets (an ambient tangent
// vector at x, excluding the base drift V).
Vec endpoint_drift(const ConditioningSpec& spec, double t, const Vec& x,
                   bool* clamped = nullptr);

// Simulates the conditioned SDE: development with extra drift F^nu up to
// T - gap; Dirac/Atoms paths get the drawn target endpoint attached.
std::vector<PathSample> sample_csde(const ConditioningSpec& spec, long n_paths,
                                    std::uint64_t seed);

// Enlarged-filtration route: draw y ~ nu first, then run the bridge drift
// toward y. Same law as sample_csde; identical code path for Dirac.
std::vector<PathSample> sample_enlarged(const ConditioningSpec& spec, long n_paths,
                                        std::uint64_t seed);

}  // namespace csde
