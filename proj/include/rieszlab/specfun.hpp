#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "quadrature.hpp"

namespace rieszlab::specfun {

struct BesselK {
    double value = 0.0;
    bool underflow = false;
};

inline void check_args(int n, double s) {
    if (n < 0) throw std::domain_error("bessel_k: order index must be >= 0");
    if (!(s > 0.0)) throw std::domain_error("bessel_k: argument must be positive");
}

// K_{(n+1)/2}(s). Half-integer orders use the terminating closed form
// sqrt(pi/(2s)) e^{-s} sum_j (k+j)!/(j!(k-j)!) (2s)^{-j}; integer orders defer
// to the standard library.
inline BesselK bessel_k_half(int n, double s) {
    check_args(n, s);
    if (s > 700.0 + 2.0 * n) return {0.0, true};
    const double beta = 0.5 * (n + 1);
    if (n % 2 == 1) return {std::cyl_bessel_k(beta, s), false};
    const int k = n / 2;
    // coefficients (k+j)!/(j!(k-j)!) built incrementally
    double term = 1.0, sum = 1.0;
    for (int j = 1; j <= k; ++j) {
        term *= static_cast<double>((k + j) * (k - j + 1)) / (j * 2.0 * s);
        sum += term;
    }
    return {std::sqrt(std::numbers::pi / (2.0 * s)) * std::exp(-s) * sum, false};
}

inline double k_half(int n, double s) { return bessel_k_half(n, s).value; }

// d/ds K_beta(s) = (beta/s) K_beta(s) - K_{beta+1}(s)
inline double bessel_k_derivative(int n, double s) {
    const double beta = 0.5 * (n + 1);
    return beta / s * k_half(n, s) - k_half(n + 2, s);
}

// K_beta(s) = s^beta / 2^{beta+1} int_0^inf exp(-t - s^2/(4t)) t^{-beta-1} dt,
// evaluated in t = e^x around the peak of the exponent.
inline double bessel_k_heat_integral(double beta, double s, double rel_tol = 1e-14) {
    if (!(s > 0.0)) throw std::domain_error("bessel_k: argument must be positive");
    const double q = 0.25 * s * s;
    auto expo = [&](double x) { return -std::exp(x) - q * std::exp(-x) - beta * x; };
    const double x0 = std::log(0.5 * (std::sqrt(beta * beta + s * s) - beta));
    const double e0 = expo(x0);
    double lo = x0 - 1.0, hi = x0 + 1.0;
    while (expo(lo) - e0 > -60.0) lo -= 1.0;
    while (expo(hi) - e0 > -60.0) hi += 1.0;
    quad::QuadSpec spec;
    spec.abs_tol = 0.0;
    spec.rel_tol = rel_tol;
    auto r = quad::integrate([&](double x) { return std::exp(expo(x) - e0); }, lo, hi, spec);
    const double logpref = beta * std::log(s) - (beta + 1.0) * std::numbers::ln2 + e0;
    return std::exp(logpref) * r.value;
}

// K_beta(s) = sqrt(pi)/Gamma(beta+1/2) (s/2)^beta int_1^inf e^{-st} (t^2-1)^{beta-1/2} dt,
// rewritten with t = 1 + u/s.
inline double bessel_k_laplace_integral(double beta, double s, double rel_tol = 1e-14) {
    if (!(s > 0.0)) throw std::domain_error("bessel_k: argument must be positive");
    if (!(beta > -0.5)) throw std::domain_error("bessel_k_laplace_integral: beta must exceed -1/2");
    const double p = beta - 0.5;
    quad::QuadSpec spec;
    spec.abs_tol = 0.0;
    spec.rel_tol = rel_tol;
    spec.decay = quad::DecayHint::exponential(1.0);
    auto body = [&](double u) { return p == 0.0 ? std::exp(-u) : std::exp(-u + p * std::log(u * (2.0 * s + u))); };
    double integral;
    if (p == 0.0) {
        integral = 1.0;
    } else {
        // split off the endpoint where (u(2s+u))^p is not smooth
        const double split = std::max(1.0, beta);
        integral = quad::integrate(body, 0.0, split, spec).value +
                   quad::integrate_semi_infinite(body, split, spec).value;
    }
    const double logpref = 0.5 * std::log(std::numbers::pi) - std::lgamma(beta + 0.5) -
                           beta * (std::numbers::ln2 + std::log(s)) - s;
    return std::exp(logpref) * integral;
}

// theta_nu(t) = nu^{d+1} (2 pi nu t)^{-(d+1)/2} K_{(d+1)/2}(nu t)
inline double theta_kernel(int d, double nu, double t) {
    if (d < 1) throw std::domain_error("theta_kernel: dimension must be >= 1");
    if (!(nu > 0.0) || !(t > 0.0)) throw std::domain_error("theta_kernel: nu and t must be positive");
    const double x = nu * t;
    const auto k = bessel_k_half(d, x);
    if (k.underflow) return 0.0;
    return std::pow(nu, d + 1) * std::pow(2.0 * std::numbers::pi * x, -0.5 * (d + 1)) * k.value;
}

// K_{(n+1)/2}(s) s^{(n+1)/2} e^{s/2}: bounded above on (0, inf)
inline double k_envelope_ratio(int n, double s) {
    const double beta = 0.5 * (n + 1);
    return k_half(n, s) * std::exp(beta * std::log(s) + 0.5 * s);
}

}  // namespace rieszlab::specfun
