#pragma once

#include <functional>
#include <vector>

namespace csde {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre on [-1, 1]; cached per n.
const QuadRule& gauss_legendre(int n);

// Gauss-Hermite for the weight exp(-z^2); cached per n.
// E[f(mu + sigma Z)] = pi^{-1/2} sum_i w_i f(mu + sigma sqrt(2) z_i).
const QuadRule& gauss_hermite(int n);

// Expectation of f under N(mu, var) by Gauss-Hermite.
double gauss_expectation(std::function<double(double)> f, double mu, double var,
                         int n = 64);

}  // namespace csde
