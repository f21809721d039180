// rieszlab command-line front end. Exit status: 0 all checks pass, 1 a check or
// computation failed, 2 usage or domain error.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <rieszlab/constants.hpp>
#include <rieszlab/domains.hpp>
#include <rieszlab/galerkin.hpp>
#include <rieszlab/halfline.hpp>
#include <rieszlab/io.hpp>
#include <rieszlab/stats.hpp>

namespace {

using namespace rieszlab;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-")
        std::cout << text;
    else
        io::write_atomic(out, text);
}

int thread_cap() {
    const char* env = std::getenv("RIESZLAB_THREADS");
    if (!env || !*env) return 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw UsageError("RIESZLAB_THREADS must be a positive integer");
    return static_cast<int>(v);
}

galerkin::BasisSpec parse_basis(const std::string& text, double torus) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("basis must look like sine:24x24 or tent:64x64");
    galerkin::BasisSpec b;
    const auto kind = text.substr(0, colon);
    if (kind == "sine")
        b.kind = galerkin::BasisKind::tensor_sine;
    else if (kind == "tent")
        b.kind = galerkin::BasisKind::tent_grid;
    else
        throw UsageError("unknown basis kind '" + kind + "'");
    std::stringstream ss(text.substr(colon + 1));
    std::string part;
    while (std::getline(ss, part, 'x')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
            b.counts.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("basis count '" + part + "' is not an integer");
        }
    }
    b.torus = torus;
    return b;
}

std::pair<double, double> parse_window(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError("window must be lo,hi");
    try {
        const double lo = std::stod(text.substr(0, comma)), hi = std::stod(text.substr(comma + 1));
        if (!(hi > lo)) throw UsageError("window needs lo < hi");
        return {lo, hi};
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("window must be two numbers lo,hi");
    }
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

int cmd_constants(int d, const std::vector<double>& mus, bool with_lambda2, const std::string& out) {
    if (d < 2) throw UsageError("constants: d = " + std::to_string(d) + " is invalid; lambda2 requires d >= 2");
    if (with_lambda2) constants::check_boundary_dim(d);
    io::Csv csv({"d", "mu", "lambda1", "lambda2", "c_d", "method", "residual", "first_constant_gap"});
    for (double mu : mus) {
        constants::check_mu(mu);
        std::string l2 = "", method = "none", res = "";
        if (with_lambda2) {
            const auto r = constants::lambda2(d, mu);
            l2 = io::num(r.value);
            method = r.method;
            res = io::num(r.error);
        }
        const std::string gap = mu > 0.0 ? io::num(constants::first_constant_gap(d, mu)) : "";
        csv.row(d, mu, constants::lambda1(d, mu), l2, constants::c_d(d), method, res, gap);
    }
    emit(out, csv.str());
    return 0;
}

int cmd_phase_shift(double omega, double lambda_max, int samples, const std::string& out) {
    halfline::check_omega(omega);
    if (!(lambda_max > 0.0) || samples < 1) throw UsageError("phase-shift: need lambda-max > 0 and samples >= 1");
    io::Csv csv({"lambda", "theta", "theta_prime"});
    for (int i = 1; i <= samples; ++i) {
        const double l = lambda_max * i / samples;
        csv.row(l, halfline::phase_shift(omega, l), halfline::phase_shift_derivative(omega, l));
    }
    emit(out, csv.str());
    return 0;
}

int cmd_eigenfunction(double omega, double lambda, double t_max, int samples, const std::string& out) {
    halfline::check_omega(omega);
    halfline::check_lambda(lambda);
    if (!(t_max > 0.0) || samples < 1) throw UsageError("eigenfunction: need t-max > 0 and samples >= 1");
    const auto g = halfline::fit_g(omega, lambda);
    io::Csv csv({"t", "theta", "G", "F"});
    bool bounded = true;
    for (int i = 1; i <= samples; ++i) {
        const double t = t_max * i / samples;
        const double F = halfline::eigenfunction_F(g, t);
        bounded = bounded && std::abs(F) <= 2.0;
        csv.row(t, g.theta, g(t), F);
    }
    emit(out, csv.str());
    if (g.fit_residual > halfline::kFitTarget)
        std::cerr << "warning: G fit residual " << g.fit_residual << " above target " << halfline::kFitTarget << "\n";
    return bounded ? 0 : 1;
}

int cmd_spectrum(const std::string& domain, double m, const std::string& basis, double torus, int k,
                 const std::string& out) {
    const auto dom = parse_domain(domain);
    const auto b = parse_basis(basis, torus);
    galerkin::SpectralParams p;
    p.d = dom.dim();
    p.m = m;
    const auto s = galerkin::spectrum_for(dom, p, b, k);
    emit(out, io::spectrum_to_json(s));
    return 0;
}

struct Loaded {
    galerkin::Spectrum spec;
    Domain dom;
};

Loaded load(const std::string& path) {
    auto s = io::spectrum_from_json(io::read_file(path));
    auto dom = parse_domain(s.domain_spec);
    return {std::move(s), std::move(dom)};
}

std::vector<double> berezin_grid(const std::vector<double>& ev) {
    // h from well past the ground state down to the reliable range
    const double hi = 2.0 / ev.front(), lo = 0.5 / stats::reliable_threshold(ev);
    std::vector<double> h;
    for (int i = 0; i < 30; ++i) h.push_back(lo * std::pow(hi / lo, i / 29.0));
    return h;
}

int cmd_verify(const std::string& file, const std::string& statistic, const std::string& window,
               std::optional<double> lambda2, int samples, const std::string& out) {
    const auto [spec, dom] = load(file);
    const int d = dom.dim();
    const auto& ev = spec.eigenvalues;
    const auto w = stats::weyl_data(d, spec.m, dom, lambda2);
    const auto ber = stats::berezin_check(ev, dom, d, spec.m, berezin_grid(ev));
    bool pass = ber.violations == 0;
    std::ostringstream report;
    report << "berezin_check " << (ber.violations == 0 ? "PASS" : "FAIL") << " violations=" << ber.violations << "\n";

    if (statistic == "riesz" || statistic == "counting" || statistic == "cesaro") {
        const double top = stats::reliable_threshold(ev);
        auto [lo, hi] = window.empty() ? std::pair{ev.front(), top} : parse_window(window);
        if (hi > top) throw UsageError("window exceeds the reliable threshold " + io::num(top));
        if (statistic == "cesaro") {
            io::Csv csv({"N", "cesaro", "prediction", "residual"});
            const int n_lo = std::max(1, static_cast<int>(lo)), n_hi = static_cast<int>(hi);
            for (int n = n_lo; n <= n_hi && ev[n - 1] <= top; ++n) {
                const double c = stats::cesaro_mean(ev, n), p = stats::predict_cesaro(w, n);
                pass = pass && std::isfinite(c - p);
                csv.row(n, c, p, c - p);
            }
            emit(out, csv.str());
        } else {
            const auto pred = statistic == "riesz" ? stats::predict_riesz(w) : stats::predict_counting(w);
            io::Csv csv({"lambda", "N", "R", "prediction", "residual"});
            for (double l : linspace(lo, hi, samples)) {
                const int N = stats::counting(ev, l);
                const double R = stats::riesz_mean(ev, l);
                const double p = pred(l);
                const double r = (statistic == "riesz" ? R : N) - p;
                pass = pass && std::isfinite(r);
                csv.row(l, N, R, p, r);
            }
            emit(out, csv.str());
            if (statistic == "riesz" && hi - lo > 0.0) {
                try {
                    const auto est = stats::extract_boundary_coefficient(ev, w, lo, hi);
                    report << "boundary_coefficient estimate=" << io::num(est.estimate)
                           << " stderr=" << io::num(est.stderr_) << " predicted=" << io::num(w.boundary_coeff())
                           << "\n";
                } catch (const stats::StatsError& e) {
                    report << "boundary_coefficient skipped: " << e.what() << "\n";
                }
            }
        }
    } else if (statistic == "heat-trace" || statistic == "heat") {
        auto [lo, hi] = window.empty() ? std::pair{0.08, 0.2} : parse_window(window);
        if (!(lo > 0.0)) throw UsageError("heat-trace window must be positive");
        const auto pred = stats::predict_heat_trace(w);
        io::Csv csv({"t", "Z", "prediction", "residual"});
        double worst = 0.0;
        for (double t : linspace(lo, hi, samples)) {
            const double z = stats::heat_trace_completed(ev, w, t), p = pred(t);
            const double ratio = (z - pred.subleading_coeff * std::pow(t, pred.subleading_power)) /
                                 (pred.leading_coeff * std::pow(t, pred.leading_power));
            worst = std::max(worst, std::abs(ratio - 1.0));
            csv.row(t, z, p, z - p);
        }
        emit(out, csv.str());
        const bool ok = worst <= 0.05;
        report << "heat_trace leading_ratio_max_deviation=" << io::num(worst) << (ok ? " PASS" : " FAIL") << "\n";
        pass = pass && ok;
    } else {
        throw UsageError("unknown statistic '" + statistic + "' (riesz, counting, cesaro, heat-trace)");
    }
    std::cerr << report.str();
    return pass ? 0 : 1;
}

int cmd_heat_trace(const std::string& file, double t_lo, double t_hi, int samples, std::optional<double> lambda2,
                   const std::string& out) {
    if (!(t_lo > 0.0 && t_hi > t_lo) || samples < 1) throw UsageError("heat-trace: need 0 < t-min < t-max");
    const auto [spec, dom] = load(file);
    const auto w = stats::weyl_data(dom.dim(), spec.m, dom, lambda2);
    const auto pred = stats::predict_heat_trace(w);
    io::Csv csv({"t", "Z", "prediction", "residual"});
    for (double t : linspace(t_lo, t_hi, samples)) {
        const double z = stats::heat_trace(spec.eigenvalues, dom.dim(), dom.volume(), t).value;
        csv.row(t, z, pred(t), z - pred(t));
    }
    emit(out, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rieszlab: spectral asymptotics of the Dirichlet pseudo-relativistic operator"};
    app.require_subcommand(1);
    std::string out;

    int d = 2;
    std::vector<double> mus{0.0};
    bool no_lambda2 = false;
    auto* c = app.add_subcommand("constants", "tabulate lambda1, lambda2, c_d and the first-constant gap");
    c->add_option("--d", d, "dimension");
    c->add_option("--mu", mus, "relative mass values")->expected(1, -1);
    c->add_flag("--no-lambda2", no_lambda2, "skip the boundary constant");
    c->add_option("--out", out, "output CSV (default stdout)");

    double omega = 0.0, lambda = 1.0, lambda_max = 10.0, t_max = 20.0;
    int samples = 200;
    auto* ps = app.add_subcommand("phase-shift", "tabulate theta_omega and its derivative");
    ps->add_option("--omega", omega);
    ps->add_option("--lambda-max", lambda_max);
    ps->add_option("--samples", samples);
    ps->add_option("--out", out);

    auto* ef = app.add_subcommand("eigenfunction", "half-line generalized eigenfunction F");
    ef->add_option("--omega", omega);
    ef->add_option("--lambda", lambda);
    ef->add_option("--t-max", t_max);
    ef->add_option("--samples", samples);
    ef->add_option("--out", out);

    std::string domain, basis = "sine:24x24";
    double m = 0.0, torus = 0.0;
    int k = 60;
    auto* sp = app.add_subcommand("spectrum", "Rayleigh-Ritz eigenvalues as JSON");
    sp->add_option("--domain", domain, "interval:L, rect:WxH, box:WxHxD, disk:R or poly:x,y;...")->required();
    sp->add_option("--m", m, "mass");
    sp->add_option("--basis", basis, "sine:NxM or tent:NxM");
    sp->add_option("--torus", torus, "embedding period (default 3 x diameter)");
    sp->add_option("--k", k, "number of eigenvalues");
    sp->add_option("--out", out);

    std::string file, statistic = "riesz", window;
    std::optional<double> lambda2;
    int vsamples = 64;
    auto* ve = app.add_subcommand("verify", "compare a spectrum with the two-term predictions");
    ve->add_option("--spectrum", file)->required();
    ve->add_option("--statistic", statistic, "riesz, counting, cesaro or heat-trace");
    ve->add_option("--window", window, "lo,hi in lambda (N for cesaro, t for heat-trace)");
    ve->add_option("--lambda2", lambda2, "boundary constant Lambda_0^(2) (default: computed)");
    ve->add_option("--samples", vsamples);
    ve->add_option("--out", out);

    double t_lo = 0.5, t_hi = 2.0;
    auto* ht = app.add_subcommand("heat-trace", "heat trace of a spectrum against the prediction");
    ht->add_option("--spectrum", file)->required();
    ht->add_option("--t-min", t_lo);
    ht->add_option("--t-max", t_hi);
    ht->add_option("--samples", vsamples);
    ht->add_option("--lambda2", lambda2);
    ht->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        thread_cap();
        if (*c) return cmd_constants(d, mus, !no_lambda2, out);
        if (*ps) return cmd_phase_shift(omega, lambda_max, samples, out);
        if (*ef) return cmd_eigenfunction(omega, lambda, t_max, samples, out);
        if (*sp) return cmd_spectrum(domain, m, basis, torus, k, out);
        if (*ve) return cmd_verify(file, statistic, window, lambda2, vsamples, out);
        if (*ht) return cmd_heat_trace(file, t_lo, t_hi, vsamples, lambda2, out);
    } catch (const std::invalid_argument& e) {  // usage, geometry and format errors
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
