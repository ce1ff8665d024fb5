#include "fkpp/acceptance.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>

#include "fkpp/coherent.hpp"
#include "fkpp/ee.hpp"
#include "fkpp/error.hpp"
#include "fkpp/germ.hpp"
#include "fkpp/largetime.hpp"
#include "fkpp/linearized.hpp"
#include "fkpp/oracle.hpp"
#include "fkpp/quadrature.hpp"
#include "fkpp/specfun.hpp"
#include "fkpp/tasks.hpp"

namespace fkpp::app {
namespace {

std::string fmt(const char* f, ...) {
    va_list ap, copy;
    va_start(ap, f);
    va_copy(copy, ap);
    const int n = std::vsnprintf(nullptr, 0, f, copy);
    va_end(copy);
    std::string out(static_cast<std::size_t>(std::max(n, 0)), '\0');
    std::vsnprintf(out.data(), out.size() + 1, f, ap);
    va_end(ap);
    return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ModelSpec special_model(double a, double kappa, double b0, double gamma, double D) {
    ModelSpec m;
    m.D = D;
    m.kappa = kappa;
    m.a = ScalarCoefficient::constant(a);
    m.b = KernelCoefficient::gaussian(b0, gamma);
    return m;
}

LargeTimeParams reference_params() {
    LargeTimeParams p;
    p.a = 1.0;
    p.kappa = 1.0;
    p.b0 = 1.0;
    p.gamma = 1.0;
    p.theta = 2.0;
    p.beta0 = 1.0;
    p.eps = 0.05 * p.beta0;
    p.D = 0.01;
    return p;
}

double inner(const Field& a, const Field& b) {
    const auto w = a.grid.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * a.values[i] * b.values[i];
    return s;
}

FieldGrid grid_around(const CoherentState& s, double t, double half_width_sd, std::size_t n) {
    const double sd = std::sqrt(-s.D() * s.germ().Zm(t) / s.germ().Wm(t));
    const double c = s.center(t);
    return FieldGrid::make(c - half_width_sd * sd, c + half_width_sd * sd, n);
}

CoherentState make_state(double D, double b, double x0, double t1) {
    AssembleOptions o;
    o.germ_b = b;
    o.x0 = x0;
    return assemble_solution(0, special_model(1.0, 1.0, 1.0, 1.0, D), 0.0, t1, o).coherent();
}

// 1 ----------------------------------------------------------------------
CriterionResult ee_closed_form(const AcceptanceOptions& o) {
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto draw = [&](double lo, double hi) { return lo + (hi - lo) * U(rng); };
    // A draw is admissible when the closed form stays finite with sigma,
    // alpha2 > 0 on [0, 5]; some kernels drive alpha2 to finite-time blow-up.
    auto admissible = [](const SpecialCaseParams& p) {
        for (int i = 0; i <= 500; ++i) {
            const auto c = closed_form_m2(p, 5.0 * i / 500.0);
            if (!(std::isfinite(c.sigma) && std::isfinite(c.alpha2()) && c.sigma > 0.0 && c.alpha2() > 0.0)) {
                return false;
            }
        }
        return true;
    };
    double worst = 0.0;
    int rejected = 0;
    for (int k = 0; k < 20;) {
        const double D = draw(0.001, 0.05);
        const auto m = special_model(draw(0.5, 2.0), draw(0.5, 2.0), draw(0.5, 2.0), draw(0.5, 2.0), D);
        const auto s0 = MomentState::make(2, draw(0.2, 2.0), draw(-1.0, 1.0), {D * draw(0.5, 2.0)});
        const auto p = SpecialCaseParams::from(m, s0);
        if (!admissible(p)) {
            ++rejected;
            continue;
        }
        ++k;
        // dense output between steps is cubic Hermite (error ~ h^4), so cap the step
        const auto traj = integrate_ee(s0, 0.0, 5.0, m, {1e-12, 1e-12, 0.005});
        for (int i = 0; i <= 200; ++i) {
            const double t = 5.0 * i / 200.0;
            const auto e = traj.at(t);
            const auto c = closed_form_m2(p, t);
            worst = std::max({worst, std::abs(e.sigma - c.sigma), std::abs(e.x - c.x),
                              std::abs(e.alpha2() - c.alpha2())});
        }
    }
    return {1, "", worst <= 1e-8, fmt("max abs deviation %.2e (tol 1e-8), 20 draws (%d blow-up draws redrawn)", worst, rejected), 0.0};
}

// 2 ----------------------------------------------------------------------
CriterionResult germ_invariants(const AcceptanceOptions& o) {
    std::mt19937_64 rng(o.seed + 1);
    std::uniform_real_distribution<double> amp(-0.6, 0.6), freq(0.3, 3.0), phase(0.0, 6.283);
    double skew = 0.0, ric = 0.0;
    const double b = 1.0;
    for (int k = 0; k < 20; ++k) {
        std::vector<double> c, w, ph;
        for (int j = 0; j < 4; ++j) {
            c.push_back(amp(rng));
            w.push_back(freq(rng));
            ph.push_back(phase(rng));
        }
        const LambdaX lx = [c, w, ph](double t) {
            double s = 0.0;
            for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * std::sin(w[j] * t + ph[j]);
            return s;
        };
        const auto g = integrate_variations(lx, b, 0.0, 2.0);
        skew = std::max(skew, g.max_skew_drift() / (2 * b));
        const double T = g.t_end(), h = 1e-3;
        for (int i = 1; i < 40; ++i) {
            const double t = T * i / 40.0;
            if (t - 2 * h < 0.0 || t + 2 * h > T) continue;
            const double qd =
                (-q_ratio(g, t + 2 * h) + 8 * q_ratio(g, t + h) - 8 * q_ratio(g, t - h) + q_ratio(g, t - 2 * h)) /
                (12 * h);
            const double q = q_ratio(g, t);
            ric = std::max(ric, std::abs(0.5 * qd - q * q + lx(t) * q));
        }
    }
    return {2, "", skew <= 1e-9 && ric <= 1e-8,
            fmt("skew drift %.2e x 2b (tol 1e-9), Riccati residual %.2e (tol 1e-8)", skew, ric), 0.0};
}

// 3 ----------------------------------------------------------------------
CriterionResult hermite_identities(const AcceptanceOptions&) {
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n) {
        const double I = quad::trapezoid(
            [n](double y) { return specfun::hermite_poly(n, y) * std::exp(-y * y / 2); }, -40.0, 40.0, 16000);
        const double J = quad::trapezoid(
            [n](double y) { return y * y * specfun::hermite_poly(2 * n, y) * std::exp(-y * y / 2); }, -40.0, 40.0,
            16000);
        const double Iref = specfun::gauss_hermite_I(n), Jref = specfun::gauss_hermite_J(n);
        // odd I vanish: compare against the scale of the integrand
        const double eI = Iref == 0.0 ? std::abs(I) / specfun::double_factorial_ratio(n) : rel(I, Iref);
        worst = std::max({worst, eI, rel(J, Jref)});
    }
    return {3, "", worst <= 1e-10, fmt("max relative deviation %.2e over n <= 10 (tol 1e-10)", worst), 0.0};
}

// 4 ----------------------------------------------------------------------
CriterionResult moment_constants(const AcceptanceOptions&) {
    const double D = 0.01, b = 1.0, x0 = 0.3;
    const auto s = make_state(D, b, x0, 1.0);
    const auto g = grid_around(s, 0.0, 18.0, 8001);
    double worst = 0.0, odd = 0.0;
    for (int n : {0, 2, 4, 6}) {
        const auto ref = initial_moment_constants(n, D, b, x0);
        const auto got = moments_of_field(s.sample_state(n, g, 0.0), 2);
        worst = std::max({worst, rel(got.sigma, ref.sigma), std::abs(got.x - x0) / std::abs(x0),
                          rel(got.alpha2(), ref.alpha2())});
    }
    for (int n : {1, 3, 5}) odd = std::max(odd, std::abs(s.sample_state(n, g, 0.0).integral()));
    return {4, "", worst <= 1e-8 && odd <= 1e-10,
            fmt("even states 0..6: max relative deviation %.2e (tol 1e-8); odd mass %.2e (tol 1e-10)", worst, odd),
            0.0};
}

// 5 ----------------------------------------------------------------------
CriterionResult biorthogonality(const AcceptanceOptions&) {
    // germ b = 0.25 keeps Z+ away from zero on [0, 1]
    const auto s = make_state(0.01, 0.25, 0.0, 1.0);
    double worst = 0.0;
    for (double t : {0.0, 0.5, 1.0}) {
        const auto g = grid_around(s, t, 16.0, 8001);
        std::vector<Field> v, w;
        for (int n = 0; n <= 6; ++n) {
            v.push_back(s.sample_state(n, g, t));
            w.push_back(s.sample_dual(n, g, t));
        }
        for (int n = 0; n <= 6; ++n) {
            for (int k = 0; k <= 6; ++k) worst = std::max(worst, std::abs(inner(v[n], w[k]) - (n == k ? 1.0 : 0.0)));
        }
    }
    const auto g = grid_around(s, 0.0, 16.0, 8001);
    const Field f = Field::sample(g, [](double x) { return std::exp(-(x - 0.04) * (x - 0.04) / 0.03); });
    std::vector<double> errs;
    for (int N : {4, 8, 16}) {
        Field rec = Field::zeros(g);
        for (int n = 0; n <= N; ++n) {
            const Field vn = s.sample_state(n, g, 0.0);
            const double c = inner(s.sample_dual(n, g, 0.0), f);
            for (std::size_t i = 0; i < g.n; ++i) rec.values[i] += c * vn.values[i];
        }
        errs.push_back(l2_distance(rec, f));
    }
    const bool decreasing = errs[1] < errs[0] && errs[2] < errs[1];
    return {5, "", worst <= 1e-6 && decreasing,
            fmt("max|G-I| %.2e (tol 1e-6); reconstruction N=4,8,16: %.2e %.2e %.2e", worst, errs[0], errs[1],
                errs[2]),
            0.0};
}

// 6 ----------------------------------------------------------------------
CriterionResult leading_order_convergence(const AcceptanceOptions& o) {
    SweepOptions so;
    so.jobs = o.jobs;
    const auto r = convergence_sweep(special_model(1.0, 1.0, 1.0, 1.0, 0.01), {0.02, 0.01, 0.005, 0.0025}, 1.0, so);
    std::string errs;
    for (const auto& p : r.points) errs += fmt(" %.3e", p.err_leading);
    return {6, "", r.order_leading >= 1.2,
            fmt("fitted order %.3f (need >= 1.2); errors%s; associated linear vs nonlinear order %.2f",
                r.order_leading, errs.c_str(), r.order_linear),
            0.0};
}

// 7 ----------------------------------------------------------------------
CriterionResult verhulst_limit(const AcceptanceOptions&) {
    const auto p = reference_params();
    const double lim = p.a / (p.kappa * p.B());
    double worst_bg = 0.0, worst_chi = 0.0;
    const double t_cut = std::log(1e12) / p.a;
    for (double t : {t_cut, t_cut + 1.0, 40.0, 80.0}) worst_bg = std::max(worst_bg, rel(background(t, p), lim));
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double s) { return background(s, p); }, 0.0, t, 15, 1e-14);
        worst_chi = std::max(worst_chi, rel(chi(t, p), q));
    }
    return {7, "", worst_bg <= 1e-8 && worst_chi <= 1e-10,
            fmt("background vs a/(kB) %.2e (tol 1e-8); chi vs quadrature %.2e (tol 1e-10)", worst_bg, worst_chi),
            0.0};
}

// 8 ----------------------------------------------------------------------
CriterionResult largetime_coefficients(const AcceptanceOptions&) {
    const auto p = reference_params();
    const auto c = coefficients(0, {0.0, 1.0, 5.0}, 9, p);
    const double c00 = std::abs(c.values[0][0] - 1.0);
    double even0 = 0.0;
    for (int l = 1; l <= 4; ++l) even0 = std::max(even0, std::abs(c.values[0][2 * l]));
    bool odd_zero = true;
    for (const auto& row : c.values) {
        for (int m = 1; m <= 9; m += 2) odd_zero = odd_zero && row[static_cast<std::size_t>(m)] == 0.0;
    }
    const double t = 20.0 / p.a;
    const auto late = coefficients(0, {t}, 2, p);
    const double r0 = late.values[0][0] / coefficient_asymptote(0, t, p);
    const double r1 = late.values[0][2] / coefficient_asymptote(1, t, p);
    const bool pass = c00 <= 1e-10 && even0 <= 1e-10 && odd_zero && std::abs(r0 - 1.0) <= 0.1;
    return {8, "", pass,
            fmt("|C0(0)-1| %.1e, max|C2l(0)| %.1e, odd exactly zero: %s; at=20 ratio to asymptote l=0 %.3e, l=1 "
                "%.3e (need 1 +- 0.1)",
                c00, even0, odd_zero ? "yes" : "no", r0, r1),
            0.0};
}

// 9 ----------------------------------------------------------------------
CriterionResult linearized_consistency(const AcceptanceOptions&) {
    const auto p = reference_params();
    const auto g = FieldGrid::make(-15, 15, 601);
    const Field phi = Field::sample(g, [&](double x) { return hermite_profile(x, p); });
    const auto s = oracle::solve_linear_perturbation(phi, p, {0.5, 1.0});
    const double e1 = relative_l2_error(s.at(0.5), u1_field(g, 0.5, p));
    const double e2 = relative_l2_error(s.at(1.0), u1_field(g, 1.0, p));
    return {9, "", std::max(e1, e2) <= 1e-4,
            fmt("relative L2 at t=0.5: %.2e, t=1: %.2e (tol 1e-4)", e1, e2), 0.0};
}

// 10 ---------------------------------------------------------------------
CriterionResult multimodality(const AcceptanceOptions&) {
    const auto p = reference_params();
    const auto g = FieldGrid::make(-10, 10, 2001);
    auto profile = [&](double t) {
        const double beta = background(t, p);
        return Field::sample(g, [&](double x) { return beta + p.eps * u1_series(x, t, p); });
    };
    const int start = mode_count(profile(0.0), 0.01);
    double t_hit = -1.0;
    int modes = start;
    for (int i = 1; i <= 200 && t_hit < 0.0; ++i) {
        const double t = 0.05 * i;
        modes = mode_count(profile(t), 0.01);
        if (modes >= 2) t_hit = t;
    }
    std::string lobe;
    if (t_hit > 0.0) {
        // size of the strongest side lobe relative to the central excess
        const Field f = profile(t_hit);
        const double beta = background(t_hit, p);
        const std::size_t mid = g.n / 2;
        double side = 0.0;
        for (std::size_t i = 1; i + 1 < g.n; ++i) {
            if (i != mid && f.values[i] > f.values[i - 1] && f.values[i] > f.values[i + 1]) {
                side = std::max(side, f.values[i] - beta);
            }
        }
        lobe = fmt(", side lobe / central excess %.2e", side / (f.values[mid] - beta));
    }
    return {10, "", start == 1 && t_hit > 0.0,
            t_hit > 0.0 ? fmt("modes 1 -> %d at t = %.2f (scan step 0.05)%s", modes, t_hit, lobe.c_str())
                        : fmt("modes at t=0: %d; no transition on [0, 10]", start),
            0.0};
}

// 11 ---------------------------------------------------------------------
CriterionResult oracle_self_checks(const AcceptanceOptions&) {
    auto heat_model = [](double D) {
        ModelSpec m;
        m.D = D;
        m.kappa = 0.0;
        m.a = ScalarCoefficient::constant(0.0);
        m.b = KernelCoefficient::zero();
        return m;
    };
    const double kPi = 3.141592653589793;
    // spatial: heat kernel with a fixed small step
    const double D = 0.05, s2 = 0.04, T = 0.5;
    auto exact = [&](double x, double t) {
        const double v = s2 + 2 * D * t;
        return std::exp(-x * x / (2 * v)) / std::sqrt(2 * kPi * v);
    };
    std::vector<double> hs, es;
    for (std::size_t n : {41, 81, 161}) {
        const auto g = FieldGrid::make(-4, 4, n);
        oracle::SolverOptions so;
        so.dt = 1e-3;
        const auto s = oracle::solve_nonlinear(Field::sample(g, [&](double x) { return exact(x, 0); }), heat_model(D),
                                               0.0, {T}, so);
        hs.push_back(g.dx());
        es.push_back(relative_l2_error(s.final(), Field::sample(g, [&](double x) { return exact(x, T); })));
    }
    const double p_space = loglog_slope(hs, es);
    // temporal: nonlinear case on a fixed grid against a fine-step reference
    const auto g = FieldGrid::make(-4, 4, 161);
    const auto m = special_model(1.0, 1.0, 1.0, 1.0, 0.02);
    const Field u0 = Field::sample(g, [](double x) { return std::exp(-4 * x * x); });
    oracle::SolverOptions ro;
    ro.dt = 0.1 / 32;
    const Field ref = oracle::solve_nonlinear(u0, m, 0.0, {1.0}, ro).final();
    std::vector<double> dts, et;
    for (double dt : {0.1, 0.05, 0.025}) {
        oracle::SolverOptions so;
        so.dt = dt;
        dts.push_back(dt);
        et.push_back(relative_l2_error(oracle::solve_nonlinear(u0, m, 0.0, {1.0}, so).final(), ref));
    }
    const double p_time = loglog_slope(dts, et);
    // conservation: periodic, no reaction, with transport
    const auto gp = FieldGrid::make(-5, 5, 200, Boundary::Periodic);
    auto mc = heat_model(0.05);
    mc.V = ScalarCoefficient::callback([kPi](double x, double) { return 0.1 * std::cos(2 * kPi * x / 10.0); });
    const Field w0 = Field::sample(gp, [](double x) { return std::exp(-x * x) + 0.1; });
    const double horizon = 2.0;
    const auto sc = oracle::solve_nonlinear(w0, mc, 0.0, {horizon});
    const double drift = std::abs(sc.final().integral() - w0.integral()) / w0.integral() / horizon;
    const bool pass = p_space >= 3.5 && p_space <= 4.5 && p_time >= 3.5 && p_time <= 4.5 && drift <= 1e-12;
    return {11, "", pass,
            fmt("spatial order %.2f, temporal order %.2f (need [3.5, 4.5]); mass drift %.1e per unit time (tol 1e-12)",
                p_space, p_time, drift),
            0.0};
}

using CriterionFn = CriterionResult (*)(const AcceptanceOptions&);

struct Entry {
    const char* name;
    CriterionFn fn;
    double time_limit;  // seconds, 0 = none
};

const Entry kCriteria[kCriterionCount] = {
    {"ee-closed-form", ee_closed_form, 5.0},
    {"germ-invariants", germ_invariants, 0.0},
    {"hermite-identities", hermite_identities, 0.0},
    {"moment-constants", moment_constants, 0.0},
    {"biorthogonality", biorthogonality, 0.0},
    {"leading-order-in-D", leading_order_convergence, 120.0},
    {"verhulst-limit", verhulst_limit, 0.0},
    {"largetime-coefficients", largetime_coefficients, 0.0},
    {"linearized-consistency", linearized_consistency, 60.0},
    {"multimodality", multimodality, 0.0},
    {"oracle-self-checks", oracle_self_checks, 0.0},
};

}  // namespace

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, ErrorKind::InvalidArgument, "slope fit needs two or more points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(x[i] > 0.0 && y[i] > 0.0, ErrorKind::InvalidArgument, "slope fit needs positive data");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SweepResult convergence_sweep(const ModelSpec& model, const std::vector<double>& Ds, double t,
                              const SweepOptions& opts) {
    SweepResult out;
    out.points.resize(Ds.size());
    for_each_index(Ds.size(), opts.jobs, [&](std::size_t i) {
        ModelSpec m = model;
        m.D = Ds[i];
        AssembleOptions ao;
        ao.M = opts.M;
        ao.germ_b = opts.germ_b;
        ao.x0 = opts.x0;
        const auto u = assemble_solution(0, m, 0.0, t, ao);
        const auto& traj = u.coherent().trajectory();
        const auto g = oracle::auto_domain(traj, t, opts.dx_over_sqrt_D * std::sqrt(m.D), opts.k_sigma);
        const Field u0 = u.sample(g, 0.0);
        oracle::SolverOptions so;
        so.parallel = opts.parallel;
        const auto nl = oracle::solve_nonlinear(u0, m, 0.0, {t}, so);
        const auto lin = oracle::solve_linear_associated(u0, AssociatedOperator(traj), 0.0, {t}, so);
        auto& p = out.points[i];
        p.D = m.D;
        p.err_leading = relative_l2_error(u.sample(g, t), nl.final());
        p.err_linear = relative_l2_error(lin.final(), nl.final());
        p.nodes = g.n;
        p.min_positivity = std::min(nl.min_positivity, lin.min_positivity);
    });
    std::vector<double> d, el, ev;
    for (const auto& p : out.points) {
        d.push_back(p.D);
        el.push_back(p.err_leading);
        ev.push_back(p.err_linear);
    }
    out.order_leading = loglog_slope(d, el);
    out.order_linear = loglog_slope(d, ev);
    return out;
}

const char* criterion_name(int id) {
    require(id >= 1 && id <= kCriterionCount, ErrorKind::InvalidArgument, "criterion id out of range");
    return kCriteria[id - 1].name;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
    criterion_name(id);  // range check
    const auto& e = kCriteria[id - 1];
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = e.fn(opts);
    } catch (const Error& err) {
        r.pass = false;
        r.detail = std::string("error: ") + err.what();
    }
    r.id = id;
    r.name = e.name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (e.time_limit > 0.0 && r.seconds > e.time_limit) {
        r.pass = false;
        r.detail += fmt("; runtime %.1f s over the %.0f s budget", r.seconds, e.time_limit);
    }
    return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, const std::vector<int>& ids) {
    std::vector<int> todo = ids;
    if (todo.empty()) {
        for (int i = 1; i <= kCriterionCount; ++i) todo.push_back(i);
    }
    for (int id : todo) criterion_name(id);
    std::vector<CriterionResult> out(todo.size());
    for_each_index(todo.size(), opts.jobs, [&](std::size_t i) { out[i] = run_criterion(todo[i], opts); });
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

std::string format_line(const CriterionResult& r) {
    return fmt("%s %2d %-24s %s  (%.2f s)", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(),
               r.seconds);
}

}  // namespace fkpp::app
