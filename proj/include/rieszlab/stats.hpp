#pragma once

// Counting function, Riesz and Cesaro means, heat trace of a computed spectrum
// and the two-term predictions built from the Weyl constants.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "constants.hpp"
#include "domains.hpp"
#include "galerkin.hpp"

namespace rieszlab::stats {

using galerkin::Spectrum;

struct StatsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kReliableFraction = 0.6;

// lambda_{floor(fraction * count)}: upper Rayleigh-Ritz modes are not trusted
inline double reliable_threshold(const std::vector<double>& ev, double fraction = kReliableFraction) {
    if (ev.empty()) throw StatsError("empty spectrum");
    if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("reliable fraction must lie in (0, 1]");
    const auto n = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(ev.size())));
    return ev[std::max<std::size_t>(n, 1) - 1];
}

// #{n : lambda_n < lambda}
inline int counting(const std::vector<double>& ev, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("counting: lambda must be >= 0");
    return static_cast<int>(std::lower_bound(ev.begin(), ev.end(), lambda) - ev.begin());
}

inline double riesz_mean_unchecked(const std::vector<double>& ev, double lambda) {
    double r = 0.0;
    for (double e : ev) {
        if (e >= lambda) break;
        r += lambda - e;
    }
    return r;
}

// sum (lambda - lambda_n)_+, refused past the reliable threshold
inline double riesz_mean(const std::vector<double>& ev, double lambda, double fraction = kReliableFraction) {
    const double top = reliable_threshold(ev, fraction);
    if (lambda > top)
        throw StatsError("riesz_mean: lambda " + std::to_string(lambda) + " exceeds the reliable threshold " +
                         std::to_string(top) + " of the truncated spectrum");
    return riesz_mean_unchecked(ev, lambda);
}

inline double cesaro_mean(const std::vector<double>& ev, int N) {
    if (N < 1 || N > static_cast<int>(ev.size())) throw std::out_of_range("cesaro_mean: N out of range");
    double s = 0.0;
    for (int n = 0; n < N; ++n) s += ev[n];
    return s / N;
}

// N(lambda) ~ C_d |Omega| lambda^d beyond the computed range, so the missing part
// of the heat trace is about C_d |Omega| d Gamma(d, t lambda_max) / t^d.
inline double weyl_heat_tail(int d, double volume, double lambda_max, double t) {
    const double x = t * lambda_max;
    double term = 1.0, sum = 1.0;  // Gamma(d, x) = (d-1)! e^{-x} sum_{k<d} x^k / k!
    for (int k = 1; k < d; ++k) {
        term *= x / k;
        sum += term;
    }
    const double weyl = constants::ball_volume(d) / std::pow(2.0 * constants::pi, d);
    return weyl * volume * d * std::tgamma(d) * std::exp(-x) * sum / std::pow(t, d);
}

struct HeatTrace {
    double value = 0.0;
    double tail_bound = 0.0;
};

inline constexpr double kHeatTailLimit = 1e-6;

// sum e^{-t lambda_n}; refused when the Weyl tail estimate exceeds 1e-6 of the head
inline HeatTrace heat_trace(const std::vector<double>& ev, int d, double volume, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("heat_trace: t must be positive");
    if (ev.empty()) throw StatsError("empty spectrum");
    HeatTrace h;
    for (double e : ev) h.value += std::exp(-t * e);
    h.tail_bound = weyl_heat_tail(d, volume, ev.back(), t);
    if (h.tail_bound > kHeatTailLimit * h.value)
        throw StatsError("heat_trace: t = " + std::to_string(t) +
                         " is below t_min; the truncated tail dominates the tolerance");
    return h;
}

// Smallest t accepted by heat_trace, by bisection on the tail criterion.
inline double heat_t_min(const std::vector<double>& ev, int d, double volume) {
    auto ok = [&](double t) {
        double head = 0.0;
        for (double e : ev) head += std::exp(-t * e);
        return weyl_heat_tail(d, volume, ev.back(), t) <= kHeatTailLimit * head;
    };
    double lo = 1e-8, hi = 1.0;
    while (!ok(hi)) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) (ok(0.5 * (lo + hi)) ? hi : lo) = 0.5 * (lo + hi);
    return hi;
}

enum class Statistic { riesz, cesaro, heat_trace, counting };

struct AsymptoticPrediction {
    Statistic statistic = Statistic::riesz;
    double leading_coeff = 0.0, leading_power = 0.0;
    double subleading_coeff = 0.0, subleading_power = 0.0;
    double remainder_exponent = 0.0;

    double operator()(double x) const {
        return leading_coeff * std::pow(x, leading_power) + subleading_coeff * std::pow(x, subleading_power);
    }
};

// Inputs shared by the predictions; lambda2_0 defaults to the Abel-limit value.
struct WeylData {
    int d = 2;
    double m = 0.0;
    double volume = 0.0, boundary = 0.0;
    double lambda1_0 = 0.0, lambda2_0 = 0.0, cd = 0.0;

    // Lambda_0^(2) |dOmega| - C_d |Omega| m, the coefficient of -lambda^d
    double boundary_coeff() const { return lambda2_0 * boundary - cd * volume * m; }
};

inline WeylData weyl_data(int d, double m, const Domain& dom, std::optional<double> lambda2_0 = std::nullopt) {
    constants::check_boundary_dim(d);
    if (dom.dim() != d) throw std::invalid_argument("domain dimension does not match d");
    if (!(m >= 0.0)) throw std::invalid_argument("mass m must be >= 0");
    WeylData w;
    w.d = d;
    w.m = m;
    w.volume = dom.volume();
    w.boundary = dom.boundary_measure();
    w.lambda1_0 = constants::lambda1(d, 0.0);
    w.lambda2_0 = lambda2_0 ? *lambda2_0 : constants::lambda2(d, 0.0).value;
    w.cd = constants::c_d(d);
    return w;
}

// Remainder metadata for a C^{1,gamma} boundary at gamma = 1: epsilon < gamma / (gamma + 2)
inline constexpr double kRemainderExponent = 1.0 / 3.0;

// R(lambda) ~ Lambda_0^(1) |Omega| lambda^{d+1} - b lambda^d
inline AsymptoticPrediction predict_riesz(const WeylData& w) {
    return {Statistic::riesz, w.lambda1_0 * w.volume, double(w.d + 1), -w.boundary_coeff(), double(w.d),
            kRemainderExponent};
}

// N(lambda) ~ (d+1) Lambda_0^(1) |Omega| lambda^d - d b lambda^{d-1}
inline AsymptoticPrediction predict_counting(const WeylData& w) {
    return {Statistic::counting, (w.d + 1) * w.lambda1_0 * w.volume, double(w.d), -w.d * w.boundary_coeff(),
            double(w.d - 1), kRemainderExponent};
}

// Legendre transform of the Riesz expansion:
// C1 = d (d+1)^{-1-1/d} Lambda_0^(1)^{-1/d} and C2 = 1 / ((d+1) Lambda_0^(1)) = 1 / C_d
inline double cesaro_c1(int d) {
    return d * std::pow(d + 1.0, -1.0 - 1.0 / d) * std::pow(constants::lambda1(d, 0.0), -1.0 / d);
}
inline double cesaro_c2(int d) { return 1.0 / ((d + 1) * constants::lambda1(d, 0.0)); }

inline double predict_cesaro(const WeylData& w, int N) {
    if (N < 1) throw std::invalid_argument("predict_cesaro: N must be >= 1");
    return cesaro_c1(w.d) * std::pow(w.volume, -1.0 / w.d) * std::pow(N, 1.0 / w.d) +
           cesaro_c2(w.d) * w.boundary_coeff() / w.volume;
}

// Heat trace coefficients from int e^{-t lambda} R(lambda) d lambda = Z(t) / t^2:
// D1 = Lambda_0^(1) Gamma(d+2), D2 = Lambda_0^(2) Gamma(d+1), D3 = C_d Gamma(d+1)
struct HeatCoefficients {
    double D1 = 0.0, D2 = 0.0, D3 = 0.0;
};

inline HeatCoefficients heat_coefficients(const WeylData& w) {
    return {w.lambda1_0 * std::tgamma(w.d + 2.0), w.lambda2_0 * std::tgamma(w.d + 1.0),
            w.cd * std::tgamma(w.d + 1.0)};
}

// Z(t) ~ D1 |Omega| t^{-d} - (D2 |dOmega| - D3 |Omega| m) t^{1-d}
inline AsymptoticPrediction predict_heat_trace(const WeylData& w) {
    const auto D = heat_coefficients(w);
    return {Statistic::heat_trace, D.D1 * w.volume, -double(w.d), -(D.D2 * w.boundary - D.D3 * w.volume * w.m),
            1.0 - w.d, kRemainderExponent};
}

// Heat trace with the unreliable modes replaced by the predicted counting
// function: sum_{lambda_n <= cut} e^{-t lambda_n} + int_cut^inf e^{-t lambda} dN_pred.
inline double heat_trace_completed(const std::vector<double>& ev, const WeylData& w, double t,
                                   double fraction = kReliableFraction) {
    if (!(t > 0.0)) throw std::invalid_argument("heat_trace_completed: t must be positive");
    const double cut = reliable_threshold(ev, fraction);
    double z = 0.0;
    for (double e : ev)
        if (e <= cut) z += std::exp(-t * e);
    // int_cut^inf e^{-t x} (a d x^{d-1} - c (d-1) x^{d-2}) dx with N_pred = a x^d - c x^{d-1}
    const auto N = predict_counting(w);
    auto upper_gamma = [](int s, double x) {  // Gamma(s, x) for integer s >= 1
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < s; ++k) {
            term *= x / k;
            sum += term;
        }
        return std::tgamma(s) * std::exp(-x) * sum;
    };
    const double x = t * cut;
    const int d = w.d;
    double tail = N.leading_coeff * d * upper_gamma(d, x) / std::pow(t, d);
    if (d >= 2) tail += N.subleading_coeff * (d - 1) * upper_gamma(d - 1, x) / std::pow(t, d - 1);
    return z + tail;
}

struct BoundaryEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    double nuisance = 0.0;
    int samples = 0;
};

inline constexpr double kFitConditionLimit = 1e10;

namespace detail {

inline Eigen::Vector2d fit_const_inv(const std::vector<double>& x, const std::vector<double>& y,
                                     const std::vector<int>& rows) {
    Eigen::MatrixXd A(rows.size(), 2);
    Eigen::VectorXd b(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = 1.0 / x[rows[i]];
        b(i) = y[rows[i]];
    }
    return A.colPivHouseholderQr().solve(b);
}

}  // namespace detail

// Least squares of (Lambda_0^(1) |Omega| lambda^{d+1} - R(lambda)) / lambda^d against
// b + c / lambda on a uniform grid in the window; standard error from a fixed-seed
// pairs bootstrap.
inline BoundaryEstimate extract_boundary_coefficient(const std::vector<double>& ev, const WeylData& w,
                                                     double lambda_lo, double lambda_hi, int samples = 64,
                                                     int bootstrap = 400, double fraction = kReliableFraction) {
    if (samples < 20) throw std::invalid_argument("extract_boundary_coefficient: needs >= 20 sample points");
    if (!(lambda_lo > 0.0 && lambda_hi > lambda_lo)) throw std::invalid_argument("window must satisfy 0 < lo < hi");
    if (lambda_hi > reliable_threshold(ev, fraction))
        throw StatsError("extract_boundary_coefficient: window exceeds the reliable threshold");
    std::vector<double> x(samples), y(samples);
    const double lead = w.lambda1_0 * w.volume;
    for (int i = 0; i < samples; ++i) {
        const double l = lambda_lo + (lambda_hi - lambda_lo) * i / (samples - 1);
        x[i] = l;
        y[i] = (lead * std::pow(l, w.d + 1) - riesz_mean_unchecked(ev, l)) / std::pow(l, w.d);
    }
    {
        Eigen::MatrixXd A(samples, 2);
        for (int i = 0; i < samples; ++i) A.row(i) << 1.0, 1.0 / x[i];
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
        const auto sv = svd.singularValues();
        if (sv(1) <= 0.0 || sv(0) / sv(1) > kFitConditionLimit)
            throw StatsError("extract_boundary_coefficient: ill-conditioned fit; widen the window");
    }
    std::vector<int> all(samples);
    for (int i = 0; i < samples; ++i) all[i] = i;
    const auto coef = detail::fit_const_inv(x, y, all);
    BoundaryEstimate out;
    out.estimate = coef(0);
    out.nuisance = coef(1);
    out.samples = samples;
    std::mt19937_64 rng(20240607);
    std::uniform_int_distribution<int> pick(0, samples - 1);
    double s = 0.0, s2 = 0.0;
    int used = 0;
    std::vector<int> rows(samples);
    for (int b = 0; b < bootstrap; ++b) {
        for (auto& r : rows) r = pick(rng);
        const auto mn = std::minmax_element(rows.begin(), rows.end());
        if (*mn.first == *mn.second) continue;
        const double v = detail::fit_const_inv(x, y, rows)(0);
        s += v;
        s2 += v * v;
        ++used;
    }
    if (used > 1) out.stderr_ = std::sqrt(std::max(0.0, (s2 - s * s / used) / (used - 1)));
    return out;
}

// Eigenvalues following N(lambda) = a lambda^d - c lambda^{d-1} exactly at the
// half-integer levels n - 1/2, with a = (d+1) lambda1 |Omega| and c = d b.
inline std::vector<double> planted_spectrum(const WeylData& w, int count) {
    const auto N = predict_counting(w);
    const double a = N.leading_coeff, c = -N.subleading_coeff;
    std::vector<double> out;
    double guess = std::pow(0.5 / a, 1.0 / w.d);
    for (int n = 1; n <= count; ++n) {
        const double target = n - 0.5;
        double l = std::max(guess, 1e-12);
        for (int it = 0; it < 100; ++it) {
            const double f = a * std::pow(l, w.d) - c * std::pow(l, w.d - 1) - target;
            const double fp = a * w.d * std::pow(l, w.d - 1) - c * (w.d - 1) * std::pow(l, w.d - 2);
            const double step = f / fp;
            l -= step;
            if (std::abs(step) < 1e-15 * l) break;
        }
        out.push_back(l);
        guess = l;
    }
    return out;
}

struct BerezinRow {
    double h = 0.0;
    double lhs = 0.0, rhs = 0.0;
    double margin() const { return rhs - lhs; }
    bool ok() const { return lhs <= rhs; }
};

struct BerezinReport {
    std::vector<BerezinRow> rows;
    int violations = 0;
};

// sum_n (h lambda_n - 1)_- <= Lambda_{hm}^(1) |Omega| h^{-d} for each h
inline BerezinReport berezin_check(const std::vector<double>& ev, const Domain& dom, int d, double m,
                                   const std::vector<double>& h_grid) {
    if (dom.dim() != d) throw std::invalid_argument("domain dimension does not match d");
    BerezinReport rep;
    for (double h : h_grid) {
        if (!(h > 0.0)) throw std::invalid_argument("berezin_check: h must be positive");
        BerezinRow r;
        r.h = h;
        for (double e : ev) r.lhs += std::max(0.0, 1.0 - h * e);
        r.rhs = constants::lambda1(d, h * m) * dom.volume() * std::pow(h, -d);
        if (!r.ok()) ++rep.violations;
        rep.rows.push_back(r);
    }
    return rep;
}

}  // namespace rieszlab::stats
