#include "csde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "csde/rng.hpp"

namespace csde::stats {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Regularized lower incomplete gamma P(a, x) (series for x < a+1, Lentz
// continued fraction otherwise).
double gamma_p(double a, double x) {
    if (x <= 0) return 0.0;
    double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int n = 0; n < 500; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - lg) * h;
}

double energy_statistic(const Mat& dist, const std::vector<long>& labels, long n_a,
                        long n_b) {
    double ab = 0.0, aa = 0.0, bb = 0.0;
    long n = n_a + n_b;
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j) {
            double dij = dist(i, j);
            if (labels[i] != labels[j])
                ab += dij;
            else if (labels[i] == 0)
                aa += dij;
            else
                bb += dij;
        }
    return 2.0 * ab / (static_cast<double>(n_a) * n_b) -
           2.0 * aa / (static_cast<double>(n_a) * n_a) -
           2.0 * bb / (static_cast<double>(n_b) * n_b);
}

}  // namespace

std::string TestReport::to_json() const {
    std::ostringstream os;
    os << "{\"name\":\"" << name << "\",\"statistic\":" << fmt17(statistic);
    if (std::isfinite(p_value)) os << ",\"p_value\":" << fmt17(p_value);
    if (std::isfinite(z_score)) os << ",\"z_score\":" << fmt17(z_score);
    os << ",\"threshold\":" << fmt17(threshold)
       << ",\"pass\":" << (pass ? "true" : "false") << ",\"n_samples\":" << n_samples
       << ",\"seed\":" << seed << "}";
    return os.str();
}

MeanSE mean_se(const std::vector<double>& xs) {
    double n = static_cast<double>(xs.size());
    double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= (n > 1 ? n - 1 : 1);
    return {mean, std::sqrt(var / n)};
}

double chi_square_sf(double x, int k) { return 1.0 - gamma_p(0.5 * k, 0.5 * x); }

double kolmogorov_sf(double lambda) {
    if (lambda < 1e-8) return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        double term = 2.0 * std::pow(-1.0, j - 1) * std::exp(-2.0 * j * j * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

TestReport energy_distance_test(const Mat& pooled_dist, long n_a, long n_b,
                                int n_permutations, double alpha,
                                std::uint64_t seed, std::string name) {
    if (n_a < 10 || n_b < 10)
        throw InvalidInputError("energy test is underpowered below 10 samples per side");
    long n = n_a + n_b;
    std::vector<long> labels(n, 0);
    std::fill(labels.begin() + n_a, labels.end(), 1L);
    double observed = energy_statistic(pooled_dist, labels, n_a, n_b);

    RngStream rng(seed, 0);
    long exceed = 0;
    std::vector<long> perm = labels;
    for (int it = 0; it < n_permutations; ++it) {
        for (long i = n - 1; i > 0; --i) {
            long j = static_cast<long>(rng.next_uniform() * (i + 1));
            if (j > i) j = i;
            std::swap(perm[i], perm[j]);
        }
        if (energy_statistic(pooled_dist, perm, n_a, n_b) >= observed) ++exceed;
    }
    TestReport rep;
    rep.name = std::move(name);
    rep.statistic = observed;
    rep.p_value = static_cast<double>(exceed + 1) / (n_permutations + 1);
    rep.threshold = alpha;
    rep.pass = rep.p_value >= alpha;
    rep.n_samples = n;
    rep.seed = seed;
    return rep;
}

TestReport energy_distance_test(
    const std::vector<Vec>& a, const std::vector<Vec>& b,
    const std::function<double(const Vec&, const Vec&)>& dist, int n_permutations,
    double alpha, std::uint64_t seed, std::string name) {
    long n = static_cast<long>(a.size() + b.size());
    Mat pooled(n, n);
    auto point = [&](long i) -> const Vec& {
        return i < static_cast<long>(a.size()) ? a[i] : b[i - a.size()];
    };
    for (long i = 0; i < n; ++i) {
        pooled(i, i) = 0.0;
        for (long j = i + 1; j < n; ++j) {
            double dij = dist(point(i), point(j));
            if (dij < 0) throw InvalidInputError("distances must be nonnegative");
            pooled(i, j) = pooled(j, i) = dij;
        }
    }
    return energy_distance_test(pooled, static_cast<long>(a.size()),
                                static_cast<long>(b.size()), n_permutations, alpha,
                                seed, std::move(name));
}

TestReport ks_test(std::vector<double> sample,
                   const std::function<double(double)>& cdf, double alpha,
                   std::string name) {
    std::sort(sample.begin(), sample.end());
    long n = static_cast<long>(sample.size());
    double d = 0.0;
    for (long i = 0; i < n; ++i) {
        double f = cdf(sample[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    double sqn = std::sqrt(static_cast<double>(n));
    TestReport rep;
    rep.name = std::move(name);
    rep.statistic = d;
    rep.p_value = kolmogorov_sf((sqn + 0.12 + 0.11 / sqn) * d);
    rep.threshold = alpha;
    rep.pass = rep.p_value >= alpha;
    rep.n_samples = n;
    return rep;
}

TestReport chisq_atoms(const std::vector<long>& counts,
                       const std::vector<double>& expected_probs, double alpha,
                       std::string name) {
    if (counts.size() != expected_probs.size() || counts.empty())
        throw InvalidInputError("chisq_atoms needs matching counts and probabilities");
    long total = std::accumulate(counts.begin(), counts.end(), 0L);
    if (total <= 0) throw InvalidInputError("chisq_atoms needs positive total count");
    double psum = std::accumulate(expected_probs.begin(), expected_probs.end(), 0.0);
    if (std::abs(psum - 1.0) > 1e-9)
        throw InvalidInputError("expected probabilities must sum to 1");
    double stat = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        double expect = expected_probs[i] * total;
        if (expect < 5.0)
            throw InvalidInputError("chisq_atoms expected count below 5; rebin");
        double diff = counts[i] - expect;
        stat += diff * diff / expect;
    }
    TestReport rep;
    rep.name = std::move(name);
    rep.statistic = stat;
    rep.p_value = chi_square_sf(stat, static_cast<int>(counts.size()) - 1);
    rep.threshold = alpha;
    rep.pass = rep.p_value >= alpha;
    rep.n_samples = total;
    return rep;
}

TestReport chisq_binned(const std::vector<double>& sample,
                        const std::function<double(double)>& cdf, int n_bins,
                        double lo, double hi, double alpha, std::string name) {
    // equal-probability bin edges by bisection on the CDF
    double f_lo = cdf(lo), f_hi = cdf(hi);
    std::vector<double> edges(n_bins + 1);
    edges[0] = lo;
    edges[n_bins] = hi;
    for (int b = 1; b < n_bins; ++b) {
        double target = f_lo + (f_hi - f_lo) * b / n_bins;
        double a = lo, c = hi;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (a + c);
            (cdf(mid) < target ? a : c) = mid;
        }
        edges[b] = 0.5 * (a + c);
    }
    std::vector<long> counts(n_bins, 0);
    for (double x : sample) {
        auto it = std::upper_bound(edges.begin(), edges.end(), x);
        int b = std::clamp(static_cast<int>(it - edges.begin()) - 1, 0, n_bins - 1);
        ++counts[b];
    }
    std::vector<double> probs(n_bins);
    for (int b = 0; b < n_bins; ++b)
        probs[b] = (cdf(edges[b + 1]) - cdf(edges[b])) / (f_hi - f_lo);
    return chisq_atoms(counts, probs, alpha, std::move(name));
}

TestReport z_band_test(double estimate, double truth, double se, double band,
                       std::string name) {
    TestReport rep;
    rep.name = std::move(name);
    rep.statistic = estimate;
    rep.z_score = (se > 0) ? (estimate - truth) / se
                           : (estimate == truth ? 0.0 : 1e300);
    rep.threshold = band;
    rep.pass = std::abs(rep.z_score) <= band;
    return rep;
}

}  // namespace csde::stats
