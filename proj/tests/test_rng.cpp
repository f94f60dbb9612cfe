#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "csde/rng.hpp"

using csde::RngStream;

TEST_CASE("streams are deterministic and keyed by (seed, stream)") {
    RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    bool same = true, diff_stream = false, diff_seed = false;
    for (int i = 0; i < 64; ++i) {
        auto va = a.next_u64();
        same = same && (va == b.next_u64());
        diff_stream = diff_stream || (va != c.next_u64());
        diff_seed = diff_seed || (va != d.next_u64());
    }
    CHECK(same);
    CHECK(diff_stream);
    CHECK(diff_seed);
}

TEST_CASE("uniforms lie in (0, 1]") {
    RngStream rng(1, 0);
    for (int i = 0; i < 10000; ++i) {
        double u = rng.next_uniform();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("gaussian moments within 3 standard errors") {
    RngStream rng(12345, 0);
    const long n = 200000;
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    for (long i = 0; i < n; ++i) {
        double g = rng.next_gaussian();
        sum += g;
        sum2 += g * g;
        sum4 += g * g * g * g;
    }
    double mean = sum / n, var = sum2 / n, kurt = sum4 / n;
    CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(kurt - 3.0) < 3.0 * std::sqrt(96.0 / n));
}

TEST_CASE("uniform bit generator interface works with std::shuffle") {
    std::vector<int> xs(100);
    std::iota(xs.begin(), xs.end(), 0);
    std::vector<int> ys = xs;
    RngStream r1(5, 1), r2(5, 1);
    std::shuffle(xs.begin(), xs.end(), r1);
    std::shuffle(ys.begin(), ys.end(), r2);
    CHECK(xs == ys);
    CHECK(!std::is_sorted(xs.begin(), xs.end()));
}

TEST_CASE("block counter advances past the first buffer") {
    RngStream rng(9, 9);
    std::vector<std::uint64_t> seen;
    for (int i = 0; i < 8; ++i) seen.push_back(rng.next_u64());
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}
