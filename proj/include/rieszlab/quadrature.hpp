#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace rieszlab::quad {

struct DecayHint {
    enum class Kind { none, exponential, algebraic };
    Kind kind = Kind::none;
    double param = 0.0;  // rate for exponential, power for algebraic

    static DecayHint exponential(double rate) { return {Kind::exponential, rate}; }
    static DecayHint algebraic(double power) { return {Kind::algebraic, power}; }
};

struct QuadSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 500;
    DecayHint decay{};

    void validate() const {
        if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0) || (abs_tol == 0.0 && rel_tol == 0.0))
            throw std::invalid_argument("QuadSpec: tolerances must be non-negative and not both zero");
        if (max_subdivisions < 1) throw std::invalid_argument("QuadSpec: max_subdivisions must be >= 1");
    }
    double target(double value) const { return std::max(abs_tol, rel_tol * std::abs(value)); }
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    int subdivisions = 0;
};

class QuadratureError : public std::runtime_error {
public:
    enum class Reason { not_converged, divergent, non_finite };
    QuadratureError(Reason r, QuadResult partial, const std::string& what)
        : std::runtime_error(what), reason_(r), partial_(partial) {}
    Reason reason() const { return reason_; }
    const QuadResult& partial() const { return partial_; }

private:
    Reason reason_;
    QuadResult partial_;
};

namespace detail {

struct Panel {
    double a, b, value, error, resabs;
};

// One G7K15 panel with QUADPACK-style error scaling.
template <class F>
Panel gk15(F& f, double a, double b) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    static const auto& xk = GK::abscissa();
    static const auto& wk = GK::weights();
    static const auto& wg = G::weights();

    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double rk = fc * wk[0], rg = fc * wg[0], rabs = std::abs(fc) * wk[0];
    double fv[16];
    fv[0] = fc;
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double f1 = f(c - h * xk[i]), f2 = f(c + h * xk[i]);
        fv[2 * i - 1] = f1;
        fv[2 * i] = f2;
        rk += wk[i] * (f1 + f2);
        rabs += wk[i] * (std::abs(f1) + std::abs(f2));
        if (i % 2 == 0) rg += wg[i / 2] * (f1 + f2);
    }
    const double mean = 0.5 * rk;
    double rasc = wk[0] * std::abs(fc - mean);
    for (std::size_t i = 1; i < xk.size(); ++i)
        rasc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));

    const double value = rk * h, resabs = rabs * std::abs(h), resasc = rasc * std::abs(h);
    double err = std::abs((rk - rg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    if (!std::isfinite(value) || !std::isfinite(err))
        throw QuadratureError(QuadratureError::Reason::non_finite, {value, err, 15, 0},
                              "integrand is not finite on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    return {a, b, value, err, resabs};
}

struct Adaptive {
    std::vector<Panel> panels;
    int evaluations = 0;
    int subdivisions = 0;
    bool converged = false;

    double value() const {
        double s = 0.0;
        for (const auto& p : panels) s += p.value;
        return s;
    }
    double error() const {
        double s = 0.0;
        for (const auto& p : panels) s += p.error;
        return s;
    }
    double roundoff_floor() const {
        double s = 0.0;
        for (const auto& p : panels) s += p.resabs;
        return 50.0 * std::numeric_limits<double>::epsilon() * s;
    }
};

// Global adaptive bisection: always split the panel with the largest error.
// A bisected pair never reports more error than its parent, so the total
// estimate is non-increasing under refinement.
template <class F>
Adaptive adapt(F& f, double a, double b, const QuadSpec& spec) {
    Adaptive st;
    st.panels.push_back(gk15(f, a, b));
    st.evaluations = 15;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    while (true) {
        const double v = st.value(), e = st.error();
        // below the rounding floor no further bisection can help
        if (e <= spec.target(v) || e <= 2.0 * st.roundoff_floor()) {
            st.converged = true;
            break;
        }
        if (st.subdivisions >= spec.max_subdivisions) break;
        // split where the error exceeds the rounding floor the most
        auto excess = [](const Panel& x) { return x.error - 50.0 * eps * x.resabs; };
        auto it = std::max_element(st.panels.begin(), st.panels.end(),
                                   [&](const Panel& x, const Panel& y) { return excess(x) < excess(y); });
        const Panel p = *it;
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b) || std::abs(p.b - p.a) <= 4.0 * eps * std::max(std::abs(p.a), std::abs(p.b))) {
            // panel can no longer be split in floating point
            break;
        }
        Panel l = gk15(f, p.a, mid), r = gk15(f, mid, p.b);
        st.evaluations += 30;
        ++st.subdivisions;
        const double child = l.error + r.error;
        if (child > p.error && child > 0.0) {
            const double s = p.error / child;
            l.error *= s;
            r.error *= s;
        }
        *it = l;
        st.panels.push_back(r);
    }
    std::sort(st.panels.begin(), st.panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    return st;
}

}  // namespace detail

// Adaptive G7K15 quadrature of f over [a, b]. Throws QuadratureError carrying
// the partial result if the tolerance is not met.
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadSpec& spec = {}) {
    spec.validate();
    if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("integrate: bounds must be finite");
    if (a == b) return {};
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    auto st = detail::adapt(f, a, b, spec);
    QuadResult res{sign * st.value(), st.error(), st.evaluations, st.subdivisions};
    if (!st.converged)
        throw QuadratureError(QuadratureError::Reason::not_converged, res,
                              "integrate: tolerance not reached after " + std::to_string(st.subdivisions) +
                                  " subdivisions (estimate " + std::to_string(res.value) + " +- " +
                                  std::to_string(res.error) + ")");
    return res;
}

// Integral of f over [a, inf). Exponential decay maps t = a - ln(u)/rate,
// anything else maps t = a + u/(1-u).
template <class F>
QuadResult integrate_semi_infinite(F&& f, double a, const QuadSpec& spec = {}) {
    spec.validate();
    const auto& hint = spec.decay;
    if (hint.kind == DecayHint::Kind::algebraic && hint.param <= 1.0)
        throw QuadratureError(QuadratureError::Reason::divergent, {},
                              "integrate_semi_infinite: algebraic decay power <= 1 diverges");
    if (hint.kind == DecayHint::Kind::exponential && !(hint.param > 0.0))
        throw std::invalid_argument("integrate_semi_infinite: exponential rate must be positive");

    const bool expo = hint.kind == DecayHint::Kind::exponential;
    const double rate = expo ? hint.param : 1.0;
    auto g = [&](double u) -> double {
        if (expo) {
            if (u <= 0.0) return 0.0;
            const double fv = f(a - std::log(u) / rate);
            return fv == 0.0 ? 0.0 : fv / (rate * u);
        }
        if (u >= 1.0) return 0.0;
        const double w = 1.0 - u;
        return f(a + u / w) / (w * w);
    };
    auto st = detail::adapt(g, 0.0, 1.0, spec);
    QuadResult res{st.value(), st.error(), st.evaluations, st.subdivisions};
    if (!st.converged) {
        // error piling up next to the image of infinity means the tail does not vanish
        const auto& edge = expo ? st.panels.front() : st.panels.back();
        const bool tail = edge.error > 0.5 * res.error && std::abs(edge.b - edge.a) < 1e-6;
        throw QuadratureError(tail ? QuadratureError::Reason::divergent : QuadratureError::Reason::not_converged,
                              res,
                              tail ? "integrate_semi_infinite: integral appears divergent"
                                   : "integrate_semi_infinite: tolerance not reached");
    }
    return res;
}

// Abel-regularised integral over [a, inf) of an integrand that oscillates like
// trig(freq*t + c) times a slowly varying amplitude. Partial integrals at
// half-period breakpoints are smoothed by repeated neighbour averaging.
template <class F>
QuadResult integrate_oscillatory_abel(F&& f, double freq, double a, const QuadSpec& spec = {},
                                      int max_pieces = 4096) {
    spec.validate();
    if (!(freq > 0.0)) throw std::invalid_argument("integrate_oscillatory_abel: frequency must be positive");
    const double half = std::numbers::pi / freq;

    std::vector<double> partial{0.0};
    double piece_err = 0.0;
    int evals = 0, subs = 0;
    QuadSpec piece = spec;
    piece.abs_tol = std::max(spec.abs_tol * 1e-2, 1e-300);
    piece.rel_tol = spec.rel_tol * 1e-2;
    auto extend = [&](int n) {
        while (static_cast<int>(partial.size()) <= n) {
            const int k = static_cast<int>(partial.size()) - 1;
            auto st = detail::adapt(f, a + k * half, a + (k + 1) * half, piece);
            evals += st.evaluations;
            subs += st.subdivisions;
            piece_err += st.error();
            partial.push_back(partial.back() + st.value());
        }
    };
    // Euler-type smoothing of the last depth+1 partial sums ending at index n
    auto smooth = [&](int n, int depth) {
        std::vector<double> s(partial.begin() + (n - depth), partial.begin() + n + 1);
        for (int lvl = 0; lvl < depth; ++lvl)
            for (int j = 0; j + 1 < static_cast<int>(s.size()) - lvl; ++j) s[j] = 0.5 * (s[j] + s[j + 1]);
        return s[0];
    };

    int n = 32;
    double value = 0.0, err = 0.0;
    while (true) {
        extend(n);
        const int depth = std::min(n / 2, 24);
        value = smooth(n, depth);
        const double e1 = std::abs(value - smooth(n - 1, depth));
        const double e2 = std::abs(value - smooth(n, depth - 2));
        err = std::max(e1, e2) + piece_err;
        if (err <= spec.target(value)) break;
        if (2 * n > max_pieces)
            throw QuadratureError(QuadratureError::Reason::not_converged, {value, err, evals, subs},
                                  "integrate_oscillatory_abel: averaged partial sums did not settle");
        n *= 2;
    }
    return {value, err, evals, subs};
}

// Composite Gauss-Legendre rule (20 points per panel) on [a, b].
struct FixedRule {
    std::vector<double> x, w;
};

inline FixedRule gauss_legendre_composite(double a, double b, int panels) {
    using G = boost::math::quadrature::gauss<double, 20>;
    const auto& xs = G::abscissa();
    const auto& ws = G::weights();
    FixedRule r;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h, hh = 0.5 * h;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (xs[i] == 0.0) {
                r.x.push_back(c);
                r.w.push_back(ws[i] * hh);
                continue;
            }
            r.x.push_back(c - hh * xs[i]);
            r.w.push_back(ws[i] * hh);
            r.x.push_back(c + hh * xs[i]);
            r.w.push_back(ws[i] * hh);
        }
    }
    return r;
}

}  // namespace rieszlab::quad
