#pragma once

// Semiclassical constants of sqrt(-Delta + mu^2) - mu: the bulk coefficient
// lambda1, the boundary coefficient lambda2 and the half-space kernel K_mu(t)
// whose t-integral defines lambda2.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "halfline.hpp"
#include "quadrature.hpp"

namespace rieszlab::constants {

inline constexpr double pi = std::numbers::pi;

// surface area of the unit sphere S^k in R^{k+1}; |S^0| = 2
inline double sphere_area(int k) {
    if (k < 0) throw std::domain_error("sphere_area: k must be >= 0");
    const double h = 0.5 * (k + 1);
    return 2.0 * std::pow(pi, h) / std::tgamma(h);
}

inline double ball_volume(int d) { return std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0); }

inline void check_dim(int d) {
    if (d < 2) throw std::domain_error("dimension d >= 2 required");
}
inline void check_mu(double mu) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::domain_error("mu must be >= 0");
}

// omega_d / (2 pi)^d
inline double c_d(int d) {
    check_dim(d);
    return ball_volume(d) / std::pow(2.0 * pi, d);
}

// int_0^R r^k sqrt(r^2 + mu^2) dr by the reduction
// I_k = R^{k-1} S^3/(k+2) - (k-1) mu^2 I_{k-2}/(k+2), S = sqrt(R^2 + mu^2)
inline double moment_sqrt(int k, double R, double mu) {
    const double S = std::sqrt(R * R + mu * mu);
    if (k == 0) return 0.5 * (R * S + (mu > 0.0 ? mu * mu * std::asinh(R / mu) : 0.0));
    if (k == 1) return (S * S * S - mu * mu * mu) / 3.0;
    return (std::pow(R, k - 1) * S * S * S - (k - 1) * mu * mu * moment_sqrt(k - 2, R, mu)) / (k + 2);
}

// (2 pi)^{-d} |S^{d-1}| int_0^{sqrt(1+2mu)} (1 + mu - sqrt(r^2+mu^2)) r^{d-1} dr
inline double lambda1(int d, double mu) {
    check_dim(d);
    check_mu(mu);
    const double R = std::sqrt(1.0 + 2.0 * mu);
    const double J = (1.0 + mu) * std::pow(R, d) / d - moment_sqrt(d - 1, R, mu);
    return sphere_area(d - 1) / std::pow(2.0 * pi, d) * J;
}

inline double lambda1_quadrature(int d, double mu) {
    check_dim(d);
    check_mu(mu);
    const double R = std::sqrt(1.0 + 2.0 * mu);
    quad::QuadSpec spec;
    spec.abs_tol = 0.0;
    spec.rel_tol = 1e-14;
    const auto r = quad::integrate(
        [&](double x) { return (1.0 + mu - std::sqrt(x * x + mu * mu)) * std::pow(x, d - 1); }, 0.0, R, spec);
    return sphere_area(d - 1) / std::pow(2.0 * pi, d) * r.value;
}

// |lambda1(mu) - lambda1(0) - C_d mu| / mu^2, assembled from pieces that are
// each O(mu^2) so nothing cancels at leading order:
//   int_1^R (1-r) r^{d-1} + mu (R^d - 1)/d - mu^2 int_0^R r^{d-1}/(sqrt(r^2+mu^2)+r)
inline double first_constant_gap(int d, double mu) {
    check_dim(d);
    if (!(mu > 0.0)) throw std::domain_error("first_constant_gap: mu must be > 0");
    const double R = std::sqrt(1.0 + 2.0 * mu), Rm1 = 2.0 * mu / (R + 1.0);
    quad::QuadSpec spec;
    spec.abs_tol = 0.0;
    spec.rel_tol = 1e-14;
    // int_1^R (1-r) r^{d-1} dr / mu^2 with r = 1 + (R-1) v
    const double t1 = -(Rm1 * Rm1 / (mu * mu)) *
                      quad::integrate([&](double v) { return v * std::pow(1.0 + Rm1 * v, d - 1); }, 0.0, 1.0, spec)
                          .value;
    double geo = 0.0;
    for (int k = 0; k < d; ++k) geo += std::pow(R, k);
    const double t2 = Rm1 * geo / (d * mu);
    const double t3 =
        quad::integrate([&](double r) { return std::pow(r, d - 1) / (std::sqrt(r * r + mu * mu) + r); }, 0.0, R, spec)
            .value;
    // t1 + t2 - t3 is exactly zero for d = 2; rounding leaves ~1e-16
    double sum = t1 + t2 - t3;
    if (std::abs(sum) < 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(t1) + std::abs(t2) + std::abs(t3)))
        sum = 0.0;
    return sphere_area(d - 1) / std::pow(2.0 * pi, d) * std::abs(sum);
}

// ---- one-dimensional bulk and boundary densities -------------------------

inline double lambda_cutoff(double mu, double nu) {
    const double v = (1.0 + 2.0 * mu) / (nu * nu) - 1.0;
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

// Psi_nu(lambda) = (psi_{mu/nu}(lambda^2+1) - 1/nu)_-  =  (1 + mu - sqrt(nu^2 (lambda^2+1) + mu^2))_+ / nu
inline double psi_minus(double mu, double nu, double lambda) {
    const double v = 1.0 + mu - std::sqrt(nu * nu * (lambda * lambda + 1.0) + mu * mu);
    return v > 0.0 ? v / nu : 0.0;
}

// J_{mu,nu} = (1/pi) int_0^Lambda Psi_nu(lambda) dlambda in closed form
inline double j_bulk(double mu, double nu) {
    check_mu(mu);
    if (!(nu > 0.0)) throw std::domain_error("j_bulk: nu must be > 0");
    const double L = lambda_cutoff(mu, nu);
    if (L == 0.0) return 0.0;
    const double c = std::sqrt(1.0 + mu * mu / (nu * nu));
    const double integral = (1.0 + mu) / nu * L - 0.5 * (L * std::sqrt(L * L + c * c) + c * c * std::asinh(L / c));
    return integral / pi;
}

// J^+_{mu,nu}(t) = (2/pi) int_0^Lambda Psi_nu(lambda) F_{mu/nu,lambda}(t)^2 dlambda
inline double j_plus(double mu, double nu, double t, int panels = 0) {
    check_mu(mu);
    if (!(nu > 0.0)) throw std::domain_error("j_plus: nu must be > 0");
    if (t < 0.0) throw std::domain_error("j_plus: t must be >= 0");
    const double L = lambda_cutoff(mu, nu);
    if (L == 0.0) return 0.0;
    const double omega = mu / nu;
    if (panels <= 0) panels = 2 + static_cast<int>(L * t / pi);
    // lambda = L sin(u) smooths the square-root vanishing of Psi at the cutoff
    const auto rule = quad::gauss_legendre_composite(0.0, 0.5 * pi, panels);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double lam = L * std::sin(rule.x[i]);
        const auto g = halfline::fit_g(omega, lam);
        const double F = halfline::eigenfunction_F(g, t);
        sum += rule.w[i] * L * std::cos(rule.x[i]) * psi_minus(mu, nu, lam) * F * F;
    }
    return 2.0 / pi * sum;
}

// ---- half-space kernel ----------------------------------------------------
//
// With rho = sqrt(nu^2 + mu^2) and x = lambda nu / rho the eigenfunctions satisfy
// F_{mu/nu,lambda}(nu t) = F_{0,x}(rho t), so
//   K_mu(t) = (C/pi) int dx int_mu^{(1+mu)/q} (rho^2-mu^2)^{(d-3)/2} rho^2 (1+mu-rho q) (1 - 2 F_{0,x}(rho t)^2) drho
// with q = sqrt(1+x^2) and C = (2 pi)^{-(d-1)} |S^{d-2}|. Only omega = 0
// corrections are ever needed.

inline void check_boundary_dim(int d) {
    if (d != 2 && d != 3)
        throw std::domain_error("boundary constants are implemented for d in {2, 3} only (d >= 2 required)");
}

inline double boundary_prefactor(int d) { return sphere_area(d - 2) / std::pow(2.0 * pi, d - 1); }

inline double x_limit(double mu) { return mu > 0.0 ? std::sqrt(1.0 + 2.0 * mu) / mu : INFINITY; }

// B_mu(x) = int (rho^2-mu^2)^{(d-3)/2} rho (1 + mu - rho q) drho
inline double boundary_weight(int d, double mu, double x) {
    const double q = std::sqrt(1.0 + x * x), P = (1.0 + mu) / q;
    if (P <= mu) return 0.0;
    if (d == 3) return 0.5 * (1.0 + mu) * (P - mu) * (P + mu) - q * (P * P * P - mu * mu * mu) / 3.0;
    const double W = std::sqrt((P - mu) * (P + mu));
    const double as = mu > 0.0 ? mu * mu * std::asinh(W / mu) : 0.0;
    return (1.0 + mu) * W - 0.5 * q * (W * P + as);
}

// Abel-regularised int_0^inf (1 - 2 F_{0,x}(u)^2) du from an exponential-sum G:
//   -sin(2 theta)/(2x) + 4 sum_i w_i (s_i sin theta + x cos theta)/(s_i^2 + x^2)
//   - 2 sum_ij w_i w_j/(s_i + s_j)
inline double abel_density(const halfline::GCorrection& g) {
    const double x = g.lambda, th = g.theta, st = std::sin(th), ct = std::cos(th);
    double S = 0.0, Q = 0.0;
    const std::size_t n = g.rates.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double s = g.rates[i], w = g.weights[i];
        if (w == 0.0) continue;
        S += w * (s * st + x * ct) / (s * s + x * x);
        for (std::size_t j = 0; j < n; ++j) Q += w * g.weights[j] / (s + g.rates[j]);
    }
    return -std::sin(2.0 * th) / (2.0 * x) + 4.0 * S - 2.0 * Q;
}

struct Lambda2Result {
    double value = 0.0;
    double error = 0.0;
    std::string method;
};

// Largest x covered by fitted corrections. Beyond it the Abel density is taken
// from the identity A_0(x) = -theta_0'(x), which needs no fit.
inline constexpr double kXCap = 1.0e3;

inline double x_upper(double mu) { return std::min(x_limit(mu), kXCap); }

// int_{kXCap}^{x_limit} -theta_0'(x) B_mu(x) dx, zero when the support ends first
inline double x_tail(int d, double mu) {
    if (x_limit(mu) <= kXCap) return 0.0;
    quad::QuadSpec spec;
    spec.abs_tol = 1e-16;
    spec.rel_tol = 1e-12;
    auto f = [&](double th) {
        const double x = std::tan(th);
        return -halfline::phase_shift_derivative(0.0, x) * boundary_weight(d, mu, x) * (1.0 + x * x);
    };
    return quad::integrate(f, std::atan(kXCap), std::atan(x_limit(mu)), spec).value;
}

// Nodes and weights in x for int_0^xmax h(x) dx: x = tan(theta), and for mu > 0
// theta = theta_max sin(pi v / 2) so the (xmax - x)^{3/2} vanishing of B becomes smooth.
inline quad::FixedRule x_rule(double mu, int panels) {
    const double th_max = std::atan(x_upper(mu));
    const bool graded = mu > 0.0;
    const auto base = quad::gauss_legendre_composite(0.0, graded ? 1.0 : th_max, panels);
    quad::FixedRule r;
    for (std::size_t i = 0; i < base.x.size(); ++i) {
        double th = base.x[i], dth = 1.0;
        if (graded) {
            th = th_max * std::sin(0.5 * pi * base.x[i]);
            dth = th_max * 0.5 * pi * std::cos(0.5 * pi * base.x[i]);
        }
        const double x = std::tan(th);
        r.x.push_back(x);
        r.w.push_back(base.w[i] * dth * (1.0 + x * x));
    }
    return r;
}

// lambda2 with the t-integral taken first (Abel limit), including the point
// mass (pi/4) delta(x) that the cos(2 x u + 2 theta) term leaves at x = 0:
//   (C/pi) [ (pi/4) B_mu(0) + int_0^xmax A_0(x) B_mu(x) dx ]
// The error adds the change from a half-resolution rule to the gap between the
// fitted density and -theta_0' on the same nodes.
inline Lambda2Result lambda2(int d, double mu, int panels = 12) {
    check_boundary_dim(d);
    check_mu(mu);
    double identity = 0.0;
    auto integral = [&](int np, bool with_identity) {
        const auto r = x_rule(mu, np);
        double s = 0.0;
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            const double wb = r.w[i] * boundary_weight(d, mu, r.x[i]);
            s += wb * abel_density(halfline::fit_g(0.0, r.x[i]));
            if (with_identity) identity -= wb * halfline::phase_shift_derivative(0.0, r.x[i]);
        }
        return s;
    };
    const double fine = integral(panels, true), coarse = integral(std::max(1, panels / 2), false);
    const double C = boundary_prefactor(d) / pi;
    return {C * (0.25 * pi * boundary_weight(d, mu, 0.0) + fine + x_tail(d, mu)),
            C * (std::abs(fine - coarse) + std::abs(fine - identity)), "abel"};
}

// Tabulates fits on a fixed x-rule so K_mu(t) can be evaluated for many t.
class HalfSpaceKernel {
public:
    // t_design: largest t the x-rule is built to resolve
    HalfSpaceKernel(int d, double mu, double t_design = 64.0) : d_(d), mu_(mu) {
        check_boundary_dim(d);
        check_mu(mu);
        const int panels = 6 + static_cast<int>(2.0 * (1.0 + mu) * t_design / pi);
        const auto rule = x_rule(mu, panels);
        xs_ = rule.x;
        wx_ = rule.w;
        for (double x : xs_) fits_.push_back(halfline::fit_g(0.0, x));
    }

    int dimension() const { return d_; }
    double mu() const { return mu_; }
    const std::vector<halfline::GCorrection>& fits() const { return fits_; }

    double operator()(double t) const {
        if (t < 0.0) throw std::domain_error("k_mu: t must be >= 0");
        double total = 0.0;
        for (std::size_t k = 0; k < xs_.size(); ++k) total += wx_[k] * inner(fits_[k], t);
        return boundary_prefactor(d_) / pi * total;
    }

private:
    // int drho weight(rho) (1 - 2 F_{0,x}(rho t)^2); for d = 2 in w = sqrt(rho^2 - mu^2)
    double inner(const halfline::GCorrection& g, double t) const {
        const double x = g.lambda, q = std::sqrt(1.0 + x * x), P = (1.0 + mu_) / q;
        if (P <= mu_) return 0.0;
        const double phase = 2.0 * x * P * t;
        const int panels = 1 + static_cast<int>(phase / (2.0 * pi));
        const double top = d_ == 2 ? std::sqrt((P - mu_) * (P + mu_)) : P;
        const double bottom = d_ == 2 ? 0.0 : mu_;
        const auto rule = quad::gauss_legendre_composite(bottom, top, panels);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            const double rho = d_ == 2 ? std::sqrt(rule.x[i] * rule.x[i] + mu_ * mu_) : rule.x[i];
            const double weight = d_ == 2 ? rho * (1.0 + mu_ - rho * q) : rho * rho * (1.0 + mu_ - rho * q);
            const double F = halfline::eigenfunction_F(g, rho * t);
            sum += rule.w[i] * weight * (1.0 - 2.0 * F * F);
        }
        return sum;
    }

    int d_;
    double mu_;
    std::vector<double> xs_, wx_;
    std::vector<halfline::GCorrection> fits_;
};

// Single evaluation; builds a kernel table, so prefer HalfSpaceKernel for sweeps.
inline double k_mu(int d, double mu, double t) { return HalfSpaceKernel(d, mu, std::max(8.0, t))(t); }

// K_mu tabulated on a composite Gauss-Legendre rule over [0, T] plus 24 points on [T/2, T]
struct KernelSamples {
    double T = 0.0;
    std::vector<double> t, w, k;
    std::vector<double> tail_t, tail_k;
};

inline KernelSamples sample_kernel(const HalfSpaceKernel& K, double T) {
    if (!(T > 0.0)) throw std::domain_error("sample_kernel: T must be positive");
    KernelSamples s;
    s.T = T;
    const auto rule = quad::gauss_legendre_composite(0.0, T, static_cast<int>(std::ceil(T / 2.0)));
    s.t = rule.x;
    s.w = rule.w;
    for (double t : s.t) s.k.push_back(K(t));
    const int m = 24;
    for (int i = 0; i < m; ++i) {
        const double t = 0.5 * T + 0.5 * T * i / (m - 1);
        s.tail_t.push_back(t);
        s.tail_k.push_back(K(t));
    }
    return s;
}

struct KernelIntegral {
    double head = 0.0;  // int_0^T
    double tail = 0.0;  // int_T^inf
    double a = 0.0, b = 0.0;
};

// int_0^T t^delta K(t) dt (or |K| when absolute) plus a tail. Signed: least-squares
// fit K ~ a/t^2 + b/t^3 on [T/2, T]. Absolute: |K| <= a/t^2 with a = max t^2 |K| there.
inline KernelIntegral integrate_kernel(const KernelSamples& s, double delta, bool absolute) {
    KernelIntegral out;
    for (std::size_t i = 0; i < s.t.size(); ++i)
        out.head += s.w[i] * std::pow(s.t[i], delta) * (absolute ? std::abs(s.k[i]) : s.k[i]);
    const auto m = static_cast<Eigen::Index>(s.tail_t.size());
    Eigen::MatrixXd M(m, 2);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        M(i, 0) = 1.0;
        M(i, 1) = 1.0 / s.tail_t[i];
        y(i) = s.tail_k[i] * s.tail_t[i] * s.tail_t[i];
    }
    const double T = s.T;
    if (absolute) {
        out.a = y.cwiseAbs().maxCoeff();
        out.tail = out.a * std::pow(T, delta - 1.0) / (1.0 - delta);
        return out;
    }
    const Eigen::Vector2d ab = M.colPivHouseholderQr().solve(y);
    out.a = ab(0);
    out.b = ab(1);
    out.tail = out.a * std::pow(T, delta - 1.0) / (1.0 - delta) + out.b * std::pow(T, delta - 2.0) / (2.0 - delta);
    return out;
}

// lambda2 with t as the outer integral: quadrature of K_mu on (0, T] plus the
// fitted t-tail, plus the x > kXCap part that the tabulated kernel leaves out.
inline Lambda2Result lambda2_swapped(int d, double mu, double T = 48.0) {
    const auto r = integrate_kernel(sample_kernel(HalfSpaceKernel(d, mu, T), T), 0.0, false);
    return {r.head + r.tail + boundary_prefactor(d) / pi * x_tail(d, mu), std::abs(r.tail), "t-outer"};
}

struct WeightedNorm {
    double delta = 0.0;
    double value = 0.0;
    double head = 0.0, tail = 0.0;
    double ratio = 0.0;  // value / (1+mu)^{(d-delta)/2}
    bool tail_dominates = false;
};

inline void check_delta(double delta) {
    if (!(delta >= 0.0 && delta < 1.0)) throw std::domain_error("weighted_k_norm: delta must lie in [0, 1)");
}

// int_0^inf t^delta |K_mu(t)| dt for several delta from one kernel table
inline std::vector<WeightedNorm> weighted_k_norms(int d, double mu, const std::vector<double>& deltas,
                                                  double T = 24.0) {
    check_boundary_dim(d);
    check_mu(mu);
    for (double delta : deltas) check_delta(delta);
    const auto samples = sample_kernel(HalfSpaceKernel(d, mu, T), T);
    std::vector<WeightedNorm> out;
    for (double delta : deltas) {
        const auto r = integrate_kernel(samples, delta, true);
        WeightedNorm n;
        n.delta = delta;
        n.head = r.head;
        n.tail = r.tail;
        n.value = r.head + r.tail;
        n.ratio = n.value / std::pow(1.0 + mu, 0.5 * (d - delta));
        n.tail_dominates = r.tail > 10.0 * r.head;
        out.push_back(n);
    }
    return out;
}

inline WeightedNorm weighted_k_norm(int d, double mu, double delta, double T = 24.0) {
    check_delta(delta);
    return weighted_k_norms(d, mu, {delta}, T).front();
}

}  // namespace rieszlab::constants
