#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "csde/geometry.hpp"

namespace csde::stats {

struct TestReport {
    std::string name;
    double statistic = 0.0;
    double p_value = std::numeric_limits<double>::quiet_NaN();
    double z_score = std::numeric_limits<double>::quiet_NaN();
    double threshold = 0.0;  // alpha for p-value tests, band for z tests
    bool pass = false;
    long n_samples = 0;
    std::uint64_t seed = 0;
    std::string to_json() const;
};

struct MeanSE {
    double mean;
    double se;
};

MeanSE mean_se(const std::vector<double>& xs);

// Survival function of the chi-square law with k degrees of freedom.
double chi_square_sf(double x, int k);
// Asymptotic Kolmogorov tail 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_sf(double lambda);

// Two-sample energy distance with a permutation p-value on a precomputed
// pooled distance matrix (first n_a rows/cols are sample A).
TestReport energy_distance_test(const Mat& pooled_dist, long n_a, long n_b,
                                int n_permutations = 200, double alpha = 0.01,
                                std::uint64_t seed = 1, std::string name = "energy");

TestReport energy_distance_test(
    const std::vector<Vec>& a, const std::vector<Vec>& b,
    const std::function<double(const Vec&, const Vec&)>& dist,
    int n_permutations = 200, double alpha = 0.01, std::uint64_t seed = 1,
    std::string name = "energy");

// One-sample Kolmogorov-Smirnov against an explicit CDF.
TestReport ks_test(std::vector<double> sample,
                   const std::function<double(double)>& cdf, double alpha = 0.01,
                   std::string name = "ks");

// Pearson chi-square of observed counts against expected cell probabilities.
TestReport chisq_atoms(const std::vector<long>& counts,
                       const std::vector<double>& expected_probs,
                       double alpha = 0.01, std::string name = "chisq");

// Chi-square of a continuous sample against a CDF using equal-probability
// bins (edges found by bisection on the CDF).
TestReport chisq_binned(const std::vector<double>& sample,
                        const std::function<double(double)>& cdf, int n_bins,
                        double lo, double hi, double alpha = 0.01,
                        std::string name = "chisq_binned");

// |estimate - truth| / se <= band.
TestReport z_band_test(double estimate, double truth, double se,
                       double band = 3.0, std::string name = "z");

}  // namespace csde::stats
