#include "rumorlab/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "rumorlab/util.hpp"

namespace rumorlab {

double chernoff_bound(double expectation, std::int64_t n_vars, double t_or_eps,
                      ChernoffVariant variant) {
    switch (variant) {
        case ChernoffVariant::ADDITIVE:
            if (n_vars < 1) throw std::invalid_argument("chernoff: n_vars must be >= 1");
            if (t_or_eps < 0) throw std::invalid_argument("chernoff: t must be >= 0");
            return std::exp(-2.0 * t_or_eps * t_or_eps / static_cast<double>(n_vars));
        case ChernoffVariant::MULT_LOWER:
            if (expectation < 0) throw std::invalid_argument("chernoff: expectation must be >= 0");
            if (!(t_or_eps > 0.0 && t_or_eps <= 1.0))
                throw std::invalid_argument("chernoff: eps must be in (0,1]");
            return std::exp(-t_or_eps * t_or_eps * expectation / 2.0);
        case ChernoffVariant::MULT_UPPER:
            if (expectation < 0) throw std::invalid_argument("chernoff: expectation must be >= 0");
            if (!(t_or_eps > 0.0 && t_or_eps <= 1.0))
                throw std::invalid_argument("chernoff: eps must be in (0,1]");
            return std::exp(-t_or_eps * t_or_eps * expectation / 3.0);
        case ChernoffVariant::CROSSOVER:
            if (!(t_or_eps > 2.0 * std::exp(1.0) * expectation))
                throw std::invalid_argument("chernoff: crossover needs t > 2e*E");
            return std::exp2(-t_or_eps);
    }
    throw std::invalid_argument("chernoff: unknown variant");
}

double geometric_sum_bound(std::int64_t n_vars, double delta) {
    if (n_vars < 1) throw std::invalid_argument("geometric_sum_bound: n_vars must be >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("geometric_sum_bound: delta must be > 0");
    const double nm1 = static_cast<double>(n_vars - 1);
    return std::exp(-delta * delta * nm1 / (2.0 * (1.0 + delta)));
}

namespace {

double tail_exponent_factor(std::uint32_t n, double c) {
    // (c-1)^2/(2c) * (ceil(log2(n-1)) - 1), the shared exponent of the
    // runtime bounds.
    const double levels = static_cast<double>(ceil_log2(n - 1) - 1);
    return (c - 1.0) * (c - 1.0) / (2.0 * c) * levels;
}

}  // namespace

WuBound wu_runtime_bound(std::uint32_t n, double p, double c) {
    if (n < 3) throw std::invalid_argument("wu_runtime_bound: n must be >= 3");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("wu_runtime_bound: p must be in (0,1]");
    if (!(c > 1.0)) throw std::invalid_argument("wu_runtime_bound: c must be > 1");
    const double path_len = static_cast<double>(ceil_log2(n - 1) + 1);
    WuBound b;
    b.T = c / p * path_len;
    b.failure_probability = static_cast<double>(n) * std::exp(-tail_exponent_factor(n, c));
    return b;
}

RgpBound rgp_runtime_bound(std::uint32_t n, std::int64_t f, double c) {
    if (n < 3) throw std::invalid_argument("rgp_runtime_bound: n must be >= 3");
    if (!(c > 1.0)) throw std::invalid_argument("rgp_runtime_bound: c must be > 1");
    if (f < 0 || f > static_cast<std::int64_t>(n) - 1)
        throw std::invalid_argument("rgp_runtime_bound: f out of range");
    const double nm1 = static_cast<double>(n - 1);
    RgpBound b;
    b.eps = std::sqrt(std::log(static_cast<double>(n)) / nm1);
    b.p = 1.0 - static_cast<double>(f) / nm1;
    if (!(static_cast<double>(f) < nm1 * (1.0 - b.eps)))
        throw std::invalid_argument("rgp_runtime_bound: need f < (n-1)(1-eps)");
    const double path_len = static_cast<double>(ceil_log2(n - 1) + 1);
    b.T = c / (b.p - b.eps) * path_len;
    const double nd = static_cast<double>(n);
    b.failure_probability =
        nd * nd * nd / (nd * nd - 1.0) * std::exp(-tail_exponent_factor(n, c));
    return b;
}

DerandSettings derand_params(std::uint32_t n, std::int64_t t) {
    if (n < 3) throw std::invalid_argument("derand_params: n must be >= 3");
    if (t < 1) throw std::invalid_argument("derand_params: t must be >= 1");
    const double nd = static_cast<double>(n);
    const double td = static_cast<double>(t);
    const double floor_value = 2.0 * nd / std::log2(nd);  // delta*t must exceed this

    DerandSettings s;
    s.delta = std::max(std::exp(1.0) / nd, floor_value / td);
    while (s.delta < 1.0 && !(s.delta * td > floor_value))
        s.delta = std::nextafter(s.delta, 2.0);
    if (s.delta >= 1.0)
        throw std::invalid_argument("derand_params: table too small, no delta < 1 exists");

    // Solve (c-1)^2/(2c) * L = ln(n^5/(n^2-1)) in closed form, then nudge c
    // upward until the bound is strictly below n^-2.
    const double L = static_cast<double>(ceil_log2(n - 1) - 1);
    if (L <= 0.0) throw std::invalid_argument("derand_params: n too small for the bound");
    const double A = std::log(std::pow(nd, 5) / (nd * nd - 1.0)) / L;
    s.c = (1.0 + A) + std::sqrt((1.0 + A) * (1.0 + A) - 1.0);
    const auto q_of = [&](double c) {
        return nd * nd * nd / (nd * nd - 1.0) * std::exp(-tail_exponent_factor(n, c));
    };
    const double target = std::pow(nd, -2.0);
    while (!(q_of(s.c) < target)) s.c = std::nextafter(s.c, 16.0);
    s.q = q_of(s.c);
    if (s.c > 8.0)
        throw std::logic_error("derand_params: solved c exceeds 8, bound out of expected range");
    s.t0 = static_cast<std::int64_t>(std::ceil(s.delta * td));
    return s;
}

}  // namespace rumorlab
