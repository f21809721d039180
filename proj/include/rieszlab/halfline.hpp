#pragma once

// One-dimensional model operator sqrt(-d^2/dt^2 + 1 + omega^2) - omega on the
// half-line with Dirichlet exterior condition: phase shift, the completely
// monotone correction G and generalized eigenfunctions
// F(t) = sin(lambda t + theta) - G(t).

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nnls.hpp"
#include "quadrature.hpp"

namespace rieszlab::halfline {

inline void check_omega(double omega) {
    if (!(omega >= 0.0) || !std::isfinite(omega)) throw std::domain_error("halfline: omega must be >= 0");
}
inline void check_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::domain_error("halfline: lambda must be > 0");
}

// sqrt(t + omega^2) - omega, written to avoid cancellation
inline double psi(double omega, double t) {
    check_omega(omega);
    const double r = std::sqrt(t + omega * omega);
    return t / (r + omega);
}

inline double scale(double omega) { return std::sqrt(1.0 + omega * omega); }

// log[(R + c + lambda)/(R + c - lambda)] with R = sqrt(lambda^2 + c^2), c = sqrt(1+omega^2);
// this is exactly asinh(lambda / c)
inline double ltilde(double omega, double lambda) {
    check_omega(omega);
    return std::asinh(lambda / scale(omega));
}

inline double phase_shift_derivative(double omega, double lambda) {
    check_omega(omega);
    if (lambda < 0.0) throw std::domain_error("halfline: lambda must be >= 0");
    const double c = scale(omega);
    const double x = lambda / c;
    if (x < 1e-8) return (1.0 - x * x * (1.0 / 6.0 + 1.0)) / (std::numbers::pi * c);
    return std::asinh(x) / (std::numbers::pi * x * (x * x + 1.0) * c);
}

inline double phase_shift_second_derivative(double omega, double lambda) {
    check_omega(omega);
    check_lambda(lambda);
    const double c = scale(omega);
    const double x = lambda / c;
    double v;
    if (x < 1e-4) {
        v = -(7.0 / 3.0) * x / std::numbers::pi;  // series of the closed form below
    } else {
        const double x2 = x * x;
        v = -((3.0 * x2 + 1.0) / x * std::asinh(x) - std::sqrt(x2 + 1.0)) /
            (std::numbers::pi * x * (x2 + 1.0) * (x2 + 1.0));
    }
    return v / (c * c);
}

// theta_omega(lambda) as the integral of its derivative from 0
inline double phase_shift(double omega, double lambda, double rel_tol = 1e-14) {
    check_omega(omega);
    if (lambda < 0.0) throw std::domain_error("halfline: lambda must be >= 0");
    if (lambda == 0.0) return 0.0;
    const double c = scale(omega);
    quad::QuadSpec spec;
    spec.abs_tol = 0.0;
    spec.rel_tol = rel_tol;
    auto d = [&](double x) { return phase_shift_derivative(omega, x); };
    // the derivative changes scale around lambda ~ c
    if (lambda <= 4.0 * c) return quad::integrate(d, 0.0, lambda, spec).value;
    return quad::integrate(d, 0.0, 4.0 * c, spec).value + quad::integrate(d, 4.0 * c, lambda, spec).value;
}

// Independent evaluation of theta_0 on the unit interval:
// (1/pi) int_0^1 1/(1-t^2) log[(1+a(t))/(1+b(t))] dt with
// a = sqrt((x^2/t^2+1)/(x^2+1)), b = sqrt((x^2 t^2+1)/(x^2+1)), x = lambda/sqrt(1+omega^2).
inline double phase_shift_compact(double omega, double lambda, double rel_tol = 1e-12) {
    check_omega(omega);
    if (lambda < 0.0) throw std::domain_error("halfline: lambda must be >= 0");
    if (lambda == 0.0) return 0.0;
    const double x = lambda / scale(omega), x2 = x * x;
    auto integrand = [&](double t) {
        if (t <= 0.0) return 0.0;
        const double a = std::sqrt((x2 / (t * t) + 1.0) / (x2 + 1.0));
        const double b = std::sqrt((x2 * t * t + 1.0) / (x2 + 1.0));
        const double one_m = (1.0 - t) * (1.0 + t);
        // (a - b)/(1 + b) with the 1 - t^2 factor kept explicit
        const double d = x2 * one_m * (1.0 + t * t) / (t * t * (x2 + 1.0) * (a + b) * (1.0 + b));
        if (one_m == 0.0) return x2 * 2.0 / ((x2 + 1.0) * 2.0 * 2.0);
        return std::log1p(d) / one_m;
    };
    quad::QuadSpec spec;
    spec.abs_tol = 0.0;
    spec.rel_tol = rel_tol;
    spec.max_subdivisions = 2000;
    return quad::integrate(integrand, 0.0, 1.0, spec).value / std::numbers::pi;
}

namespace detail {

struct Geometry {
    double c, A;  // sqrt(1+omega^2), sqrt(lambda^2 + 1 + omega^2)
};

// log[(A + sqrt(s^2+c^2)) / (A + c)]
inline double log_ratio(const Geometry& g, double s) {
    const double s2 = s * s;
    return std::log1p(s2 / ((std::sqrt(s2 + g.c * g.c) + g.c) * (g.A + g.c)));
}

// (1/pi) int_0^inf t/(t^2+s^2) log_ratio(s) ds, integrated in s = e^y
inline double varphi_exponent(const Geometry& g, double t, double rel_tol) {
    if (t == 0.0) return 0.0;
    auto f = [&](double y) {
        const double s = std::exp(y);
        return t * s / (t * t + s * s) * log_ratio(g, s);
    };
    const double lt = std::log(t), lc = std::log(g.c), la = std::log(g.A);
    std::vector<double> br{std::min(lt, lc) - 18.0, lt, lc, la, std::max(lt, la) + 45.0};
    std::sort(br.begin(), br.end());
    quad::QuadSpec spec;
    spec.abs_tol = 0.0;
    spec.rel_tol = rel_tol;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < br.size(); ++i)
        if (br[i + 1] > br[i]) {
            // the first panel carries a negligible share; an absolute floor keeps it cheap
            quad::QuadSpec sp = spec;
            sp.abs_tol = 1e-18 * t;
            sum += quad::integrate(f, br[i], br[i + 1], sp).value;
        }
    return sum / std::numbers::pi;
}

}  // namespace detail

inline detail::Geometry geometry(double omega, double lambda) {
    const double c = scale(omega);
    return {c, std::sqrt(lambda * lambda + c * c)};
}

inline double varphi(double omega, double lambda, double t, double rel_tol = 1e-13) {
    check_omega(omega);
    check_lambda(lambda);
    if (t < 0.0) throw std::domain_error("varphi: t must be >= 0");
    return std::exp(detail::varphi_exponent(geometry(omega, lambda), t, rel_tol));
}

// phi'(0) = ((lambda^2+1+omega^2)/(1+omega^2)) theta'(lambda) = asinh(lambda/c)/(pi lambda)
inline double varphi_prime_zero(double omega, double lambda) {
    check_omega(omega);
    check_lambda(lambda);
    const double c2 = 1.0 + omega * omega;
    return (lambda * lambda + c2) / c2 * phase_shift_derivative(omega, lambda);
}

// Laplace transform of G at u >= 0:
// [lambda cos(theta) + u sin(theta) - lambda kappa phi(u)] / (lambda^2 + u^2),
// kappa = lambda sqrt(f'(lambda^2)/f(lambda^2)) = sqrt((A + c)/(2A)).
struct LaplaceG {
    double omega, lambda, theta;
    detail::Geometry geo;
    double kappa, cos_minus_kappa;

    LaplaceG(double om, double lam) : omega(om), lambda(lam) {
        check_omega(om);
        check_lambda(lam);
        theta = phase_shift(om, lam);
        geo = geometry(om, lam);
        const double A = geo.A, c = geo.c;
        kappa = std::sqrt((A + c) / (2.0 * A));
        // cos(theta) - kappa = (1 - kappa^2)/(1 + kappa) - 2 sin^2(theta/2)
        const double one_m_k2 = lam * lam / (2.0 * A * (A + c));
        const double sh = std::sin(0.5 * theta);
        cos_minus_kappa = one_m_k2 / (1.0 + kappa) - 2.0 * sh * sh;
    }

    double operator()(double u, double rel_tol = 1e-13) const {
        if (u < 0.0) throw std::domain_error("g_laplace: u must be >= 0");
        const double phim1 = std::expm1(detail::varphi_exponent(geo, u, rel_tol));
        const double num = lambda * cos_minus_kappa + u * std::sin(theta) - lambda * kappa * phim1;
        return num / (lambda * lambda + u * u);
    }
};

inline double g_laplace(double omega, double lambda, double u) { return LaplaceG(omega, lambda)(u); }

// Density of the measure whose Laplace transform is G. It lives on
// [sqrt(1+omega^2), inf) and comes from the jump of the transform across its cut.
inline double g_measure_density(double omega, double lambda, double s) {
    check_omega(omega);
    check_lambda(lambda);
    const auto geo = geometry(omega, lambda);
    if (s <= geo.c) return 0.0;
    const double kappa = std::sqrt((geo.A + geo.c) / (2.0 * geo.A));
    const double phi = std::exp(detail::varphi_exponent(geo, s, 1e-13));
    return lambda * kappa * std::sqrt((s - geo.c) * (s + geo.c)) /
           (std::numbers::pi * (lambda * lambda + s * s) * (geo.A + geo.c) * phi);
}

// G as an exponential sum sum_i w_i exp(-s_i t) with w_i >= 0
struct GCorrection {
    double omega = 0.0, lambda = 0.0, theta = 0.0;
    std::vector<double> rates, weights;
    double fit_residual = 0.0;

    double operator()(double t) const {
        double s = 0.0;
        for (std::size_t i = 0; i < rates.size(); ++i) s += weights[i] * std::exp(-rates[i] * t);
        return s;
    }
    double laplace(double u) const {
        double s = 0.0;
        for (std::size_t i = 0; i < rates.size(); ++i) s += weights[i] / (rates[i] + u);
        return s;
    }
    double mass() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }
    // int_0^inf t^k G(t) dt / k!
    double moment(int k) const {
        double s = 0.0;
        for (std::size_t i = 0; i < rates.size(); ++i) s += weights[i] / std::pow(rates[i], k + 1);
        return s;
    }
};

class FitError : public std::runtime_error {
public:
    FitError(GCorrection best, const std::string& what) : std::runtime_error(what), best_(std::move(best)) {}
    const GCorrection& best() const { return best_; }

private:
    GCorrection best_;
};

inline constexpr double kFitTarget = 1e-5;
inline constexpr double kFitCeiling = 1e-3;

inline std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1));
    return v;
}

// Non-negative least-squares fit of the Laplace transform of G on log-spaced
// rates starting at the edge sqrt(1+omega^2) of the representing measure.
// fit_residual is the worst relative error at validation_points log-spaced
// u in [1e-2, 1e2].
inline GCorrection fit_g(double omega, double lambda, int n_terms = 56, int validation_points = 20) {
    if (n_terms < 4) throw std::invalid_argument("fit_g: n_terms must be >= 4");
    if (validation_points < 1) throw std::invalid_argument("fit_g: validation_points must be >= 1");
    const LaplaceG lg(omega, lambda);
    GCorrection out;
    out.omega = omega;
    out.lambda = lambda;
    out.theta = lg.theta;
    out.rates = logspace(lg.geo.c, lg.geo.c * 1e6, n_terms);

    std::vector<double> us{0.0};
    for (double u : logspace(1e-4, 1e5, 4 * n_terms)) us.push_back(u);
    const Eigen::Index m = static_cast<Eigen::Index>(us.size()), n = n_terms;
    Eigen::MatrixXd A(m, n);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double g = lg(us[i]);
        const double wrow = 1.0 / std::abs(g);
        b(i) = 1.0;
        for (Eigen::Index j = 0; j < n; ++j) A(i, j) = wrow / (out.rates[j] + us[i]);
    }
    Eigen::VectorXd colscale = A.colwise().norm().cwiseInverse().transpose();
    Eigen::VectorXd y = nnls(A * colscale.asDiagonal(), b);
    out.weights.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) out.weights[j] = y(j) * colscale(j);

    double worst = 0.0;
    for (double u : logspace(1e-2, 1e2, validation_points)) {
        const double g = lg(u);
        worst = std::max(worst, std::abs(out.laplace(u) - g) / std::abs(g));
    }
    out.fit_residual = worst;
    if (!(worst <= kFitCeiling))
        throw FitError(out, "fit_g: residual " + std::to_string(worst) + " above ceiling at omega=" +
                                std::to_string(omega) + " lambda=" + std::to_string(lambda));
    return out;
}

inline double eigenfunction_F(const GCorrection& g, double t) {
    if (t < 0.0) throw std::domain_error("eigenfunction_F: t must be >= 0");
    return std::sin(g.lambda * t + g.theta) - g(t);
}

// Pi phi(lambda) = sqrt(2/pi) int_0^inf F_lambda(t) phi(t) dt for each lambda in the grid.
// spec carries the decay hint used for the t-integral.
inline std::vector<double> pi_transform(double omega, const std::function<double(double)>& phi,
                                        const std::vector<double>& lambda_grid, quad::QuadSpec spec = {}) {
    if (spec.decay.kind != quad::DecayHint::Kind::exponential) spec.decay = quad::DecayHint::exponential(1.0);
    spec.abs_tol = std::max(spec.abs_tol, 1e-13);
    const double t_cut = 40.0 / spec.decay.param;
    std::vector<double> out;
    out.reserve(lambda_grid.size());
    for (double lam : lambda_grid) {
        const GCorrection g = fit_g(omega, lam);
        auto f = [&](double t) { return eigenfunction_F(g, t) * phi(t); };
        // panels of a few oscillations each, then the exponentially small tail
        const int panels = 1 + static_cast<int>(lam * t_cut / (8.0 * std::numbers::pi));
        const double h = t_cut / panels;
        double sum = 0.0;
        for (int p = 0; p < panels; ++p) sum += quad::integrate(f, p * h, (p + 1) * h, spec).value;
        sum += quad::integrate_semi_infinite(f, t_cut, spec).value;
        out.push_back(std::sqrt(2.0 / std::numbers::pi) * sum);
    }
    return out;
}

}  // namespace rieszlab::halfline
