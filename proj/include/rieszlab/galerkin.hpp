#pragma once

// Rayleigh-Ritz for (sqrt(-Delta + m^2) - m) with Dirichlet condition: the form
// int psi_m(|2 pi xi|^2) |u^(xi)|^2 dxi sampled on the frequency lattice of an
// embedding torus.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "domains.hpp"
#include "halfline.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace rieszlab::galerkin {

inline constexpr double pi = std::numbers::pi;

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpectralParams {
    int d = 2;
    double m = 0.0;
    double h = 1.0;
    double mu() const { return h * m; }
    void validate() const {
        if (d < 1 || d > 3) throw std::invalid_argument("SpectralParams: d must be 1, 2 or 3");
        if (!(m >= 0.0) || !std::isfinite(m)) throw std::invalid_argument("SpectralParams: m must be >= 0");
        if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("SpectralParams: h must be > 0");
    }
};

enum class BasisKind { tensor_sine, tent_grid };

inline std::string to_string(BasisKind k) { return k == BasisKind::tensor_sine ? "sine" : "tent"; }

struct BasisSpec {
    BasisKind kind = BasisKind::tensor_sine;
    std::vector<int> counts;
    double torus = 0.0;       // embedding period per axis; 0 picks 3 x diameter
    int lattice_factor = 8;   // lattice reaches this multiple of the top basis frequency
    int alias_terms = 32;     // tent grid: aliases summed per side and axis

    double period(const Domain& dom) const { return torus > 0.0 ? torus : 3.0 * dom.diameter(); }

    void validate(const Domain& dom) const {
        if (static_cast<int>(counts.size()) != dom.dim())
            throw std::invalid_argument("basis needs one count per axis (" + std::to_string(dom.dim()) + ")");
        for (int c : counts)
            if (c < 1) throw std::invalid_argument("basis counts must be positive");
        if (kind == BasisKind::tensor_sine && dom.kind() != DomainKind::interval &&
            dom.kind() != DomainKind::rectangle && dom.kind() != DomainKind::box)
            throw std::invalid_argument("sine basis needs an interval, rectangle or box");
        if (kind == BasisKind::tent_grid) {
            if (dom.dim() == 3) throw std::invalid_argument("tent grid supports d = 1 and d = 2");
            for (int c : counts)
                if (c < 2) throw std::invalid_argument("tent grid needs at least 2 cells per axis");
        }
        if (period(dom) < 3.0 * dom.diameter() * (1.0 - 1e-12))
            throw std::invalid_argument("torus period must be at least 3 x the domain diameter");
        if (lattice_factor < 1 || alias_terms < 1) throw std::invalid_argument("lattice settings must be positive");
    }
};

// psi_m(w^2) = sqrt(w^2 + m^2) - m, stable for small w
inline double multiplier(double w2, double m) {
    if (m == 0.0) return std::sqrt(w2);
    return w2 / (std::sqrt(w2 + m * m) + m);
}

struct Form {
    Eigen::MatrixXd form, mass;
    // tent grid: node coordinates of the kept tents
    std::vector<std::array<double, 2>> nodes;
};

namespace detail {

inline double constants_ball_volume(int d) { return std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0); }

// Fourier transform of sin(a x) on [0, len], a = j pi / len, up to a unimodular
// factor: real and stable through w = a.
inline double sine_transform(int j, double len, double w) {
    const double a = j * pi / len;
    const double z = 0.5 * (w - a) * len;
    const double sinc = std::abs(z) < 1e-8 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
    double sign;
    if (j % 2 == 0)
        sign = (j / 2) % 2 == 0 ? -1.0 : 1.0;
    else
        sign = ((j - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    return sign * a * len * sinc / (a + w);
}

// int_{w0}^inf psi_m(w^2) / w^4 dw
inline double multiplier_tail(double w0, double m) {
    if (m == 0.0) return 0.5 / (w0 * w0);
    const double r = (m / w0) * (m / w0);
    return std::expm1(1.5 * std::log1p(r)) / (3.0 * m * m) - m / (3.0 * w0 * w0 * w0);
}

// Jump kernel of psi_m(-Delta): J(r) = 2 (m / (2 pi r))^{(d+1)/2} K_{(d+1)/2}(m r),
// Gamma((d+1)/2) / (pi^{(d+1)/2} r^{d+1}) at m = 0. Returns J, J', J''.
inline std::array<double, 3> jump_kernel(int d, double m, double r) {
    const double nu = 0.5 * (d + 1);
    if (m == 0.0) {
        const double J = std::tgamma(nu) / (std::pow(pi, nu) * std::pow(r, d + 1));
        return {J, -(d + 1) * J / r, (d + 1) * (d + 2) * J / (r * r)};
    }
    const double x = m * r;
    const double c = 2.0 * std::pow(2.0 * pi, -nu) * std::pow(m, nu);
    const double k0 = specfun::k_half(d, x), k1 = specfun::k_half(d + 2, x), k2 = specfun::k_half(d + 4, x);
    const double rn = std::pow(r, -nu);
    return {c * rn * k0, -c * m * rn * k1, -c * m * (rn / r * k1 - m * rn * k2)};
}

// Sums over the nonzero image lattice (k_a period_a) of J and of d^2 J / dz_a^2,
// i.e. the value and Hessian diagonal at 0 of sum_{k != 0} J(z + k L).
struct ImageSums {
    double g0 = 0.0;
    std::array<double, 3> g2{};
};

inline ImageSums image_sums(int d, double m, const std::array<double, 3>& period) {
    const int R = d == 1 ? 4000 : (d == 2 ? 60 : 16);
    ImageSums out;
    std::array<int, 3> k{};
    const int hi1 = R, hi2 = d >= 2 ? R : 0, hi3 = d >= 3 ? R : 0;
    for (k[0] = -hi1; k[0] <= hi1; ++k[0])
        for (k[1] = -hi2; k[1] <= hi2; ++k[1])
            for (k[2] = -hi3; k[2] <= hi3; ++k[2]) {
                if (k[0] == 0 && k[1] == 0 && k[2] == 0) continue;
                double r2 = 0.0;
                std::array<double, 3> z{};
                for (int a = 0; a < d; ++a) {
                    z[a] = k[a] * period[a];
                    r2 += z[a] * z[a];
                }
                const double r = std::sqrt(r2);
                const auto J = jump_kernel(d, m, r);
                out.g0 += J[0];
                for (int a = 0; a < d; ++a) {
                    const double c2 = z[a] * z[a] / r2;
                    out.g2[a] += J[2] * c2 + J[1] / r * (1.0 - c2);
                }
            }
    // continuum tail outside the ball with the volume of the summed box
    double cell = 1.0;
    for (int a = 0; a < d; ++a) cell *= period[a];
    const double rho = std::pow(std::pow(2.0 * R + 1.0, d) * cell / constants_ball_volume(d), 1.0 / d);
    const double area = d * constants_ball_volume(d);
    quad::QuadSpec spec;
    spec.abs_tol = 0.0;
    spec.rel_tol = 1e-10;
    spec.decay = quad::DecayHint::algebraic(2.0);
    auto radial = [&](int which) {
        return quad::integrate_semi_infinite(
                   [&](double r) {
                       const auto J = jump_kernel(d, m, r);
                       const double v = which == 0 ? J[0] : (J[2] + (d - 1) * J[1] / r) / d;
                       return area * std::pow(r, d - 1) * v;
                   },
                   rho, spec)
                   .value /
               cell;
    };
    out.g0 += radial(0);
    const double lap = radial(1);
    for (int a = 0; a < d; ++a) out.g2[a] += lap;
    return out;
}

// Adds sum_{k != 0} int int u_i(x) u_j(y) J(x - y + k L), expanded to second
// order in x - y: g0 M0 M0^T + (1/2) sum_a g2_a (M2_a M0^T - 2 M1_a M1_a^T + M0 M2_a^T).
inline void add_image_correction(Eigen::MatrixXd& form, const ImageSums& g, const Eigen::VectorXd& M0,
                                 const std::vector<Eigen::VectorXd>& M1, const std::vector<Eigen::VectorXd>& M2) {
    form += g.g0 * M0 * M0.transpose();
    for (std::size_t a = 0; a < M1.size(); ++a) {
        const Eigen::MatrixXd t = M2[a] * M0.transpose();
        form += 0.5 * g.g2[a] * (t + t.transpose() - 2.0 * M1[a] * M1[a].transpose());
    }
}

// int_0^len (x - len/2)^p sin(a x) dx, a = j pi / len, p = 0, 1, 2
inline std::array<double, 3> sine_moments(int j, double len) {
    const double a = j * pi / len, sg = j % 2 == 0 ? 1.0 : -1.0, c = 0.5 * len;
    const double I0 = (1.0 - sg) / a;
    const double I1 = -len * sg / a + 0.0;
    const double I2 = -len * len * sg / a + 2.0 * (sg - 1.0) / (a * a * a);
    return {I0, I1 - c * I0, I2 - 2.0 * c * I1 + c * c * I0};
}

struct Axis {
    int n = 0;          // basis functions sin(j pi x / len), j = 1..n
    double len = 0.0;
    int top = 0;        // lattice indices 0..top
    double period = 0.0;
    Eigen::MatrixXd P;  // (top+1) x n^2, weighted products of transforms
    Eigen::MatrixXd tail;
};

inline Axis make_axis(int n, double len, double period, int factor) {
    Axis ax;
    ax.n = n;
    ax.len = len;
    ax.period = period;
    ax.top = static_cast<int>(std::ceil(factor * (n / (2.0 * len)) * period));
    ax.P = Eigen::MatrixXd::Zero(ax.top + 1, n * n);
    std::vector<double> s(n);
    for (int k = 0; k <= ax.top; ++k) {
        const double w = 2.0 * pi * k / period;
        const double c = (k == 0 ? 1.0 : 2.0) / period;  // +-k folded together
        for (int j = 0; j < n; ++j) s[j] = sine_transform(j + 1, len, w);
        for (int j = 0; j < n; ++j)
            for (int jj = j % 2; jj < n; jj += 2) ax.P(k, j * n + jj) = c * s[j] * s[jj];
    }
    ax.tail = Eigen::MatrixXd::Zero(n, n);
    return ax;
}

inline void fill_tail(Axis& ax, double m) {
    const double w0 = 2.0 * pi * (ax.top + 0.5) / ax.period;
    const double I = multiplier_tail(w0, m);
    for (int j = 0; j < ax.n; ++j)
        for (int jj = j % 2; jj < ax.n; jj += 2) {
            const double a = (j + 1) * pi / ax.len, aa = (jj + 1) * pi / ax.len;
            ax.tail(j, jj) = 2.0 * a * aa / pi * I;
        }
}

inline Form assemble_sine(const Domain& dom, double m, const BasisSpec& b) {
    const int d = dom.dim();
    const double L = b.period(dom);
    std::vector<Axis> axes;
    for (int i = 0; i < d; ++i) {
        axes.push_back(make_axis(b.counts[i], dom.extent()[i], L, b.lattice_factor));
        fill_tail(axes.back(), m);
    }
    auto psi_at = [&](int k1, int k2, int k3) {
        double w2 = 0.0;
        const int ks[3] = {k1, k2, k3};
        for (int i = 0; i < d; ++i) w2 += std::pow(2.0 * pi * ks[i] / L, 2);
        return multiplier(w2, m);
    };
    Form out;
    int total = 1;
    for (const auto& ax : axes) total *= ax.n;
    out.form = Eigen::MatrixXd::Zero(total, total);
    out.mass = Eigen::MatrixXd::Zero(total, total);

    if (d == 1) {
        const auto& A = axes[0];
        Eigen::VectorXd psi(A.top + 1);
        for (int k = 0; k <= A.top; ++k) psi(k) = psi_at(k, 0, 0);
        const Eigen::VectorXd R = A.P.transpose() * psi;
        for (int j = 0; j < A.n; ++j)
            for (int jj = 0; jj < A.n; ++jj) out.form(j, jj) = R(j * A.n + jj) + A.tail(j, jj);
    } else if (d == 2) {
        const auto &A = axes[0], &B = axes[1];
        Eigen::MatrixXd psi(A.top + 1, B.top + 1);
        for (int k1 = 0; k1 <= A.top; ++k1)
            for (int k2 = 0; k2 <= B.top; ++k2) psi(k1, k2) = psi_at(k1, k2, 0);
        const Eigen::MatrixXd T = psi * B.P;            // (A.top+1) x nB^2
        const Eigen::MatrixXd R = A.P.transpose() * T;  // nA^2 x nB^2
        const int na = A.n, nb = B.n;
        for (int j = 0; j < na; ++j)
            for (int k = 0; k < nb; ++k)
                for (int jj = 0; jj < na; ++jj)
                    for (int kk = 0; kk < nb; ++kk) {
                        double v = R(j * na + jj, k * nb + kk);
                        if (k == kk) v += A.tail(j, jj) * 0.5 * B.len;
                        if (j == jj) v += B.tail(k, kk) * 0.5 * A.len;
                        out.form(j * nb + k, jj * nb + kk) = v;
                    }
    } else {
        const auto &A = axes[0], &B = axes[1], &C = axes[2];
        const int na = A.n, nb = B.n, nc = C.n;
        // contract the third axis, then the second for each first-axis index
        Eigen::MatrixXd U(A.top + 1, nb * nb * nc * nc);
        Eigen::MatrixXd psi(B.top + 1, C.top + 1);
        for (int k1 = 0; k1 <= A.top; ++k1) {
            for (int k2 = 0; k2 <= B.top; ++k2)
                for (int k3 = 0; k3 <= C.top; ++k3) psi(k2, k3) = psi_at(k1, k2, k3);
            const Eigen::MatrixXd V = B.P.transpose() * (psi * C.P);  // nb^2 x nc^2
            U.row(k1) = Eigen::Map<const Eigen::RowVectorXd>(V.data(), V.size());
        }
        const Eigen::MatrixXd R = A.P.transpose() * U;  // na^2 x (nb^2 nc^2), column-major V
        for (int j = 0; j < na; ++j)
            for (int jj = 0; jj < na; ++jj)
                for (int k = 0; k < nb; ++k)
                    for (int kk = 0; kk < nb; ++kk)
                        for (int l = 0; l < nc; ++l)
                            for (int ll = 0; ll < nc; ++ll) {
                                const int row = k * nb + kk, col = l * nc + ll;
                                double v = R(j * na + jj, row + col * nb * nb);
                                if (k == kk && l == ll) v += A.tail(j, jj) * 0.25 * B.len * C.len;
                                if (j == jj && l == ll) v += B.tail(k, kk) * 0.25 * A.len * C.len;
                                if (j == jj && k == kk) v += C.tail(l, ll) * 0.25 * A.len * B.len;
                                out.form((j * nb + k) * nc + l, (jj * nb + kk) * nc + ll) = v;
                            }
    }
    {
        // moments of the tensor basis about the box centre
        Eigen::VectorXd M0 = Eigen::VectorXd::Ones(total);
        std::vector<Eigen::VectorXd> M1(d, M0), M2(d, M0);
        for (int I = 0; I < total; ++I) {
            int rest = I;
            std::array<int, 3> j{};
            for (int a = d - 1; a >= 0; --a) {
                j[a] = rest % axes[a].n + 1;
                rest /= axes[a].n;
            }
            for (int a = 0; a < d; ++a) {
                const auto mom = sine_moments(j[a], axes[a].len);
                M0(I) *= mom[0];
                for (int b = 0; b < d; ++b) {
                    M1[b](I) *= a == b ? mom[1] : mom[0];
                    M2[b](I) *= a == b ? mom[2] : mom[0];
                }
            }
        }
        add_image_correction(out.form, image_sums(d, m, {L, L, L}), M0, M1, M2);
    }
    double mass = 1.0;
    for (const auto& ax : axes) mass *= 0.5 * ax.len;
    out.mass.diagonal().setConstant(mass);
    out.form = 0.5 * (out.form + out.form.transpose()).eval();
    return out;
}

// Tent support [c - h, c + h] per axis fully inside the domain: corners and
// edge samples inside, and no polygon vertex strictly within the support.
inline bool support_inside(const Domain& dom, std::array<double, 2> c, double hx, double hy) {
    if (dom.dim() == 1) return dom.contains(c[0] - hx) && dom.contains(c[0] + hx);
    const int samples = 8;
    for (int i = 0; i <= samples; ++i) {
        const double s = -1.0 + 2.0 * i / samples;
        if (!dom.contains(c[0] + s * hx, c[1] - hy) || !dom.contains(c[0] + s * hx, c[1] + hy) ||
            !dom.contains(c[0] - hx, c[1] + s * hy) || !dom.contains(c[0] + hx, c[1] + s * hy))
            return false;
    }
    for (const auto& v : dom.vertices())
        if (std::abs(v.x - c[0]) < hx && std::abs(v.y - c[1]) < hy) return false;
    return true;
}

inline Form assemble_tent(const Domain& dom, double m, const BasisSpec& b) {
    const int d = dom.dim();
    const auto& box = dom.bounding_box();
    const int nx = b.counts[0], ny = d == 2 ? b.counts[1] : 1;
    const double hx = (box.hi[0] - box.lo[0]) / nx;
    const double hy = d == 2 ? (box.hi[1] - box.lo[1]) / ny : 1.0;
    const double L = b.period(dom);
    // torus periods rounded up to whole grid steps so that aliases fold exactly
    const int Mx = static_cast<int>(std::ceil(L / hx - 1e-9));
    const int My = d == 2 ? static_cast<int>(std::ceil(L / hy - 1e-9)) : 1;
    const double Lx = Mx * hx, Ly = d == 2 ? My * hy : 1.0;

    Form out;
    std::vector<std::array<int, 2>> idx;
    for (int i = 1; i < nx; ++i)
        for (int j = (d == 2 ? 1 : 0); j < (d == 2 ? ny : 1); ++j) {
            const std::array<double, 2> c{box.lo[0] + i * hx, d == 2 ? box.lo[1] + j * hy : 0.0};
            if (support_inside(dom, c, hx, hy)) {
                idx.push_back({i, j});
                out.nodes.push_back(c);
            }
        }
    if (idx.empty()) throw SolverError("tent grid: no tent fits inside the domain; refine the grid");

    // squared tent transform, h^2 sinc^4(pi xi h)
    auto tent2 = [](double xi, double h) {
        const double z = pi * xi * h;
        const double s = std::abs(z) < 1e-8 ? 1.0 : std::sin(z) / z;
        return h * h * s * s * s * s;
    };
    const int K = b.alias_terms;
    const int Ky = d == 2 ? K : 0;
    // folded lattice sums A(r, s), r in [0, Mx), s in [0, My)
    Eigen::MatrixXd A(Mx, My);
    std::vector<double> tx(2 * K + 1), ty(2 * Ky + 1);
    for (int r = 0; r < Mx; ++r) {
        for (int a = -K; a <= K; ++a) tx[a + K] = tent2(r / Lx + double(a) / hx, hx);
        for (int s = 0; s < My; ++s) {
            for (int bb = -Ky; bb <= Ky; ++bb) ty[bb + Ky] = d == 2 ? tent2(s / Ly + double(bb) / hy, hy) : 1.0;
            double sum = 0.0;
            for (int a = -K; a <= K; ++a) {
                const double x1 = 2.0 * pi * (r / Lx + double(a) / hx);
                for (int bb = -Ky; bb <= Ky; ++bb) {
                    const double x2 = d == 2 ? 2.0 * pi * (s / Ly + double(bb) / hy) : 0.0;
                    sum += multiplier(x1 * x1 + x2 * x2, m) * tx[a + K] * ty[bb + Ky];
                }
            }
            A(r, s) = sum / (Lx * Ly);
        }
    }
    // kappa(p, q) = sum_{r,s} A(r, s) cos(2 pi r p / Mx) cos(2 pi s q / My)
    Eigen::MatrixXd Cx(nx + 1, Mx), Cy(ny + 1, My);
    for (int p = 0; p <= nx; ++p)
        for (int r = 0; r < Mx; ++r) Cx(p, r) = std::cos(2.0 * pi * double((long(r) * p) % Mx) / Mx);
    for (int q = 0; q <= ny; ++q)
        for (int s = 0; s < My; ++s) Cy(q, s) = std::cos(2.0 * pi * double((long(s) * q) % My) / My);
    const Eigen::MatrixXd kappa = Cx * A * Cy.transpose();
    Eigen::MatrixXd image;

    {
        const auto nb = static_cast<Eigen::Index>(idx.size());
        const double cx = 0.5 * (box.lo[0] + box.hi[0]), cy = 0.5 * (box.lo[1] + box.hi[1]);
        const double vol = hx * (d == 2 ? hy : 1.0);
        Eigen::VectorXd M0 = Eigen::VectorXd::Constant(nb, vol);
        std::vector<Eigen::VectorXd> M1(d, M0), M2(d, M0);
        for (Eigen::Index i = 0; i < nb; ++i) {
            const double dx = out.nodes[i][0] - cx, dy = out.nodes[i][1] - cy;
            M1[0](i) = vol * dx;
            M2[0](i) = vol * (dx * dx + hx * hx / 6.0);
            if (d == 2) {
                M1[1](i) = vol * dy;
                M2[1](i) = vol * (dy * dy + hy * hy / 6.0);
            }
        }
        Eigen::MatrixXd corr = Eigen::MatrixXd::Zero(nb, nb);
        add_image_correction(corr, image_sums(d, m, {Lx, Ly, 1.0}), M0, M1, M2);
        image = corr;
    }
    auto mass1 = [](int off, double h) { return off == 0 ? 2.0 * h / 3.0 : (off == 1 ? h / 6.0 : 0.0); };
    const auto n = static_cast<Eigen::Index>(idx.size());
    out.form.resize(n, n);
    out.mass.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const int p = std::abs(idx[i][0] - idx[j][0]), q = std::abs(idx[i][1] - idx[j][1]);
            out.form(i, j) = kappa(p, q) + image(i, j);
            out.mass(i, j) = mass1(p, hx) * (d == 2 ? mass1(q, hy) : 1.0);
        }
    return out;
}

}  // namespace detail

inline Form assemble_form(const Domain& dom, double m, const BasisSpec& basis) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw std::invalid_argument("mass m must be >= 0");
    basis.validate(dom);
    return basis.kind == BasisKind::tensor_sine ? detail::assemble_sine(dom, m, basis)
                                                : detail::assemble_tent(dom, m, basis);
}

inline constexpr double kMassConditionLimit = 1e12;

// k smallest eigenvalues of form x = lambda mass x, ascending
inline std::vector<double> solve_spectrum(const Eigen::MatrixXd& form, const Eigen::MatrixXd& mass, int k) {
    const Eigen::Index n = form.rows();
    if (n == 0 || form.cols() != n || mass.rows() != n || mass.cols() != n)
        throw std::invalid_argument("solve_spectrum: matrices must be square and of equal size");
    if (k < 1 || k > n) throw std::invalid_argument("solve_spectrum: k must lie in [1, basis size]");
    const double scale = std::max(form.cwiseAbs().maxCoeff(), mass.cwiseAbs().maxCoeff());
    if ((form - form.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale ||
        (mass - mass.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("solve_spectrum: matrices must be symmetric");

    Eigen::VectorXd ev;
    const bool diagonal = (mass - Eigen::MatrixXd(mass.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
    if (diagonal) {
        const Eigen::VectorXd md = mass.diagonal();
        if (md.minCoeff() <= 0.0 || md.maxCoeff() / md.minCoeff() > kMassConditionLimit)
            throw SolverError("mass matrix is numerically singular; change the basis");
        const Eigen::VectorXd s = md.cwiseSqrt().cwiseInverse();
        const Eigen::MatrixXd S = s.asDiagonal() * form * s.asDiagonal();
        ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S, Eigen::EigenvaluesOnly).eigenvalues();
    } else {
        // the Cholesky pivots bound the mass condition number from below
        Eigen::LLT<Eigen::MatrixXd> llt(mass);
        if (llt.info() != Eigen::Success) throw SolverError("mass matrix is not positive definite; change the basis");
        const Eigen::VectorXd piv = llt.matrixLLT().diagonal();
        const double est = std::pow(piv.maxCoeff() / piv.minCoeff(), 2);
        if (est > kMassConditionLimit) throw SolverError("mass matrix is numerically singular; change the basis");
        ev = Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd>(form, mass, Eigen::EigenvaluesOnly)
                 .eigenvalues();
    }
    std::vector<double> out(ev.data(), ev.data() + k);
    std::sort(out.begin(), out.end());
    if (out.front() <= 0.0) throw SolverError("form matrix is not positive definite");
    return out;
}

struct Spectrum {
    std::vector<double> eigenvalues;
    std::string domain_spec;
    double m = 0.0;
    BasisSpec basis;
    int count() const { return static_cast<int>(eigenvalues.size()); }
};

inline Spectrum spectrum_for(const Domain& dom, const SpectralParams& params, const BasisSpec& basis, int k) {
    params.validate();
    if (params.d != dom.dim()) throw std::invalid_argument("SpectralParams.d does not match the domain dimension");
    const auto f = assemble_form(dom, params.m, basis);
    Spectrum s;
    s.eigenvalues = solve_spectrum(f.form, f.mass, k);
    s.domain_spec = dom.spec();
    s.m = params.m;
    s.basis = basis;
    s.basis.torus = basis.period(dom);
    return s;
}

// Exploratory only: on an interval of length len, k_n len = n pi - 2 theta_0(k_n / m)
// (theta -> pi/8 when m = 0) and lambda_n = sqrt(k_n^2 + m^2) - m.
inline std::vector<double> interval_phase_rule(double len, double m, int count) {
    std::vector<double> out;
    for (int n = 1; n <= count; ++n) {
        double k = (n * pi - 0.25 * pi) / len;
        for (int it = 0; it < 60 && m > 0.0; ++it) {
            const double next = (n * pi - 2.0 * halfline::phase_shift(0.0, k / m)) / len;
            if (std::abs(next - k) < 1e-14 * k) break;
            k = next;
        }
        out.push_back(multiplier(k * k, m));
    }
    return out;
}

}  // namespace rieszlab::galerkin
