#pragma once

#include <cstdint>

namespace rumorlab {

enum class ChernoffVariant { ADDITIVE, MULT_LOWER, MULT_UPPER, CROSSOVER };

/// Tail bound for a sum of independent 0/1 variables.
/// ADDITIVE:   Pr[X > E+t]      <= exp(-2 t^2 / n_vars)
/// MULT_LOWER: Pr[X < (1-e)E]   <= exp(-e^2 E / 2)
/// MULT_UPPER: Pr[X > (1+e)E]   <= exp(-e^2 E / 3)
/// CROSSOVER:  Pr[X > t]        <= 2^-t          (valid for t > 2e*E)
double chernoff_bound(double expectation, std::int64_t n_vars, double t_or_eps,
                      ChernoffVariant variant);

/// Tail bound for a sum of n_vars independent geometric variables exceeding
/// (1+delta) times its mean: exp(-delta^2 (n_vars-1) / (2(1+delta))).
double geometric_sum_bound(std::int64_t n_vars, double delta);

struct WuBound {
    double T;
    double failure_probability;
};

/// Round bound for the retry protocol with per-attempt success rate p:
/// T = (c/p)(ceil(log2(n-1))+1), exceeded with probability at most
/// n * exp(-((c-1)^2/(2c)) (ceil(log2(n-1))-1)).
WuBound wu_runtime_bound(std::uint32_t n, double p, double c);

struct RgpBound {
    double T;
    double failure_probability;
    double eps;
    double p;
};

/// Round bound for the randomized protocol against any f crashed processors:
/// eps = sqrt(ln n/(n-1)), p = 1 - f/(n-1), T = (c/(p-eps))(ceil(log2(n-1))+1),
/// exceeded with probability at most
/// (n^3/(n^2-1)) * exp(-((c-1)^2/(2c)) (ceil(log2(n-1))-1)).
/// Requires f < (n-1)(1-eps).
RgpBound rgp_runtime_bound(std::uint32_t n, std::int64_t f, double c);

struct DerandSettings {
    double delta;  // per-failure-set allowed violation fraction over the table
    double c;      // smallest c making the per-permutation bound q < n^-2
    double q;      // the bound at that c
    std::int64_t t0;  // ceil(delta * t), the tolerable number of bad rows
};

/// Parameters for a table of t stored permutations: delta is the larger of
/// e/n and the least value with delta * t strictly above 2n/log2(n); c is the
/// least constant with (n^3/(n^2-1)) exp(-((c-1)^2/(2c))(ceil(log2(n-1))-1))
/// strictly below n^-2. Throws if no delta < 1 exists or c lands above 8.
DerandSettings derand_params(std::uint32_t n, std::int64_t t);

}  // namespace rumorlab
