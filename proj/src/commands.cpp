#include "fkpp/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fkpp/acceptance.hpp"
#include "fkpp/coherent.hpp"
#include "fkpp/ee.hpp"
#include "fkpp/error.hpp"
#include "fkpp/germ.hpp"
#include "fkpp/largetime.hpp"
#include "fkpp/linearized.hpp"
#include "fkpp/oracle.hpp"
#include "fkpp/tasks.hpp"

namespace fkpp::app {
namespace {

using json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// min(u)/max(u) below this counts as a positivity undershoot
constexpr double kUndershoot = -1e-8;

struct Entry {
    Command cmd;
    const char* name;
};

constexpr Entry kCommands[] = {
    {Command::EE, "ee"},         {Command::Germ, "germ"},           {Command::Coherent, "coherent"},
    {Command::Residual, "residual"}, {Command::Direct, "direct"},   {Command::LargeTime, "largetime"},
    {Command::Compare, "compare"}, {Command::Acceptance, "acceptance"},
};

std::string num(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return out;
}

struct Context {
    const ExperimentConfig& cfg;
    const RunOptions& opts;
    RunReport& report;
    ModelSpec model;
    int precision;

    CsvTable table(std::vector<std::string> cols) const { return CsvTable(std::move(cols), precision); }
};

AssembleOptions assemble_options(const ExperimentConfig& c) {
    AssembleOptions o;
    o.M = c.ee.M;
    o.germ_b = c.germ.b;
    o.x0 = c.coherent.x0;
    return o;
}

MomentState initial_state(const ExperimentConfig& c, const ModelSpec& model) {
    if (c.ee.sigma || c.ee.x || !c.ee.alpha.empty()) {
        const auto base = initial_moment_constants(0, model.D, c.germ.b, c.coherent.x0);
        std::vector<double> alpha = c.ee.alpha.empty() ? base.alpha : c.ee.alpha;
        return MomentState::make(c.ee.M, c.ee.sigma.value_or(base.sigma), c.ee.x.value_or(base.x), alpha);
    }
    const auto s = initial_moment_constants(0, model.D, c.germ.b, c.coherent.x0);
    return MomentState::make(c.ee.M, s.sigma, s.x, s.alpha);
}

ode::Tolerances ee_tolerances(const ExperimentConfig& c) {
    ode::Tolerances tol;
    tol.abs = c.ee.atol;
    tol.rel = c.ee.rtol;
    tol.max_step = c.ee.max_step;
    return tol;
}

std::vector<std::string> moment_columns(int M) {
    std::vector<std::string> cols{"t", "sigma", "x"};
    for (int k = 2; k <= M; ++k) cols.push_back("alpha" + std::to_string(k));
    return cols;
}

// ---------------------------------------------------------------------------

void run_ee(Context& ctx) {
    const auto& c = ctx.cfg;
    const auto s0 = initial_state(c, ctx.model);
    const auto traj = integrate_ee(s0, c.ee.t0, c.ee.t1, ctx.model, ee_tolerances(c));
    const bool special = c.ee.M == 2 && ctx.model.is_special_case();
    auto cols = moment_columns(c.ee.M);
    if (special) {
        cols.push_back("sigma_closed");
        cols.push_back("x_closed");
        cols.push_back("alpha2_closed");
    }
    auto t = ctx.table(cols);
    double worst = 0.0;
    std::optional<SpecialCaseParams> sp;
    if (special) sp = SpecialCaseParams::from(ctx.model, s0);
    for (double ti : linspace(c.ee.t0, c.ee.t1, c.ee.samples)) {
        const auto s = traj.at(ti);
        std::vector<double> row{ti, s.sigma, s.x};
        row.insert(row.end(), s.alpha.begin(), s.alpha.end());
        if (sp) {
            const auto e = closed_form_m2(*sp, ti - c.ee.t0);
            row.insert(row.end(), {e.sigma, e.x, e.alpha2()});
            worst = std::max({worst, std::abs(e.sigma - s.sigma), std::abs(e.x - s.x), std::abs(e.alpha2() - s.alpha2())});
        }
        t.row(row);
    }
    json res{{"t_end", traj.t_end()}};
    if (sp) res["max_abs_deviation_closed_form"] = worst;
    ctx.report.artifacts.add_csv("ee_trajectory.csv", t, res);
    ctx.report.lines.push_back("ee: integrated M=" + std::to_string(c.ee.M) + " on [" + num("%g", c.ee.t0) + ", " +
                               num("%g", c.ee.t1) + "]" +
                               (sp ? ", max deviation from closed form " + num("%.3e", worst) : std::string()));
}

void run_germ(Context& ctx) {
    const auto& c = ctx.cfg;
    const auto joint = integrate_joint(initial_state(c, ctx.model), ctx.model, c.germ.b, c.ee.t0, c.ee.t1);
    const auto& g = joint.germ;
    auto t = ctx.table({"t", "Wm", "Zm", "Wp", "Zp", "skew", "q", "lambda_x"});
    for (double ti : linspace(c.ee.t0, std::min(c.ee.t1, g.t_end()), c.ee.samples)) {
        t.row({ti, g.Wm(ti), g.Zm(ti), g.Wp(ti), g.Zp(ti), g.skew(ti), q_ratio(g, ti),
               lambda_x_on_trajectory(ti, joint.traj)});
    }
    json res{{"t_end", g.t_end()},
             {"end_reason", g.end_reason()},
             {"plus_focal_times", g.plus_focal_times()},
             {"max_skew_drift", g.max_skew_drift()}};
    ctx.report.artifacts.add_csv("germ.csv", t, res);
    if (g.t_end() < c.ee.t1) {
        ctx.report.warnings.push_back("germ window ends at t=" + num("%.6g", g.t_end()) + " (" + g.end_reason() + ")");
    }
    ctx.report.lines.push_back("germ: valid on [" + num("%g", g.t_begin()) + ", " + num("%.6g", g.t_end()) +
                               "], " + std::to_string(g.plus_focal_times().size()) +
                               " focal point(s) on the plus branch, skew drift " + num("%.2e", g.max_skew_drift()));
}

void run_coherent(Context& ctx) {
    const auto& c = ctx.cfg;
    const auto sol = assemble_solution(0, ctx.model, c.ee.t0, c.ee.t1, assemble_options(c));
    const auto& st = sol.coherent();
    const auto& times = c.coherent.times;
    auto profiles = ctx.table({"t", "n", "x", "state", "dual"});
    auto summary = ctx.table({"t", "n", "mass", "dual_inner"});
    int focal = 0;
    for (double t : times) {
        const double sd = std::sqrt(-st.D() * st.germ().Zm(t) / st.germ().Wm(t));
        const double x0 = st.center(t);
        const auto g = FieldGrid::make(x0 - c.coherent.half_width_sd * sd, x0 + c.coherent.half_width_sd * sd,
                                       c.coherent.points);
        const auto w = g.weights();
        for (int n : c.coherent.n) {
            const Field v = st.sample_state(n, g, t);
            std::optional<Field> dual;
            try {
                dual = st.sample_dual(n, g, t);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::FocalPoint) throw;
                ++focal;
            }
            double inner = kNaN;
            if (dual) {
                inner = 0.0;
                for (std::size_t i = 0; i < g.n; ++i) inner += w[i] * v.values[i] * dual->values[i];
            }
            summary.row({t, static_cast<double>(n), v.integral(), inner});
            for (std::size_t i = 0; i < g.n; ++i) {
                profiles.row({t, static_cast<double>(n), g.x(i), v.values[i], dual ? dual->values[i] : kNaN});
            }
        }
    }
    // initial moment constants of the even states
    auto consts = ctx.table({"n", "sigma", "x", "alpha2"});
    for (int n : c.coherent.n) {
        if (n % 2) continue;
        const auto s = initial_moment_constants(n, ctx.model.D, c.germ.b, c.coherent.x0);
        consts.row({static_cast<double>(n), s.sigma, s.x, s.alpha2()});
    }
    ctx.report.artifacts.add_csv("coherent_states.csv", profiles);
    ctx.report.artifacts.add_csv("coherent_summary.csv", summary, json{{"focal_duals_skipped", focal}});
    ctx.report.artifacts.add_csv("coherent_constants.csv", consts);
    ctx.report.lines.push_back("coherent: " + std::to_string(c.coherent.n.size()) + " states at " +
                               std::to_string(times.size()) + " times");
    // duals exist only while Zp > 0; states stay defined past the focal time
    if (focal) {
        ctx.report.lines.push_back("coherent: " + std::to_string(focal) +
                                   " dual state(s) left empty at or past the plus-branch focal time");
    }
}

void run_residual(Context& ctx) {
    const auto& c = ctx.cfg;
    const double half = 1e-4;
    const auto& Ds = c.sweep.D;
    std::vector<std::vector<ResidualReport>> rep(Ds.size());
    std::vector<std::size_t> nodes(Ds.size());
    for_each_index(Ds.size(), ctx.opts.jobs, [&](std::size_t i) {
        ModelSpec m = ctx.model;
        m.D = Ds[i];
        const double t_end = c.oracle.times.back() + 2.0 * half;
        const auto sol = assemble_solution(0, m, c.ee.t0, t_end, assemble_options(c));
        const auto& traj = sol.coherent().trajectory();
        const auto g = oracle::auto_domain(traj, t_end, c.oracle.dx_over_sqrt_D * std::sqrt(m.D), c.oracle.k_sigma);
        nodes[i] = g.n;
        const AssociatedOperator op(traj);
        for (double t : c.oracle.times) {
            if (t - half < c.ee.t0) continue;
            rep[i].push_back(residual_report([&](double x, double s) { return sol(x, s); }, g, t, half, op));
        }
    });
    auto t = ctx.table({"D", "t", "nodes", "residual_l2", "residual_over_norm"});
    std::vector<double> d, last;
    for (std::size_t i = 0; i < Ds.size(); ++i) {
        for (const auto& r : rep[i]) t.row({Ds[i], r.t, static_cast<double>(nodes[i]), r.residual_l2, r.residual_over_norm});
        if (!rep[i].empty()) {
            d.push_back(Ds[i]);
            last.push_back(rep[i].back().residual_over_norm);
        }
    }
    json res;
    if (d.size() >= 2) res["order_in_D_at_last_time"] = loglog_slope(d, last);
    ctx.report.artifacts.add_csv("residual.csv", t, res);
    ctx.report.lines.push_back("residual: " + std::to_string(t.rows()) + " rows" +
                               (res.contains("order_in_D_at_last_time")
                                    ? ", relative residual order in D " + num("%.3f", res["order_in_D_at_last_time"].get<double>())
                                    : std::string()));
}

void run_direct(Context& ctx) {
    const auto& c = ctx.cfg;
    const double t_last = c.oracle.times.back();
    const auto sol = assemble_solution(0, ctx.model, c.ee.t0, std::max(t_last, c.ee.t1), assemble_options(c));
    const auto& traj = sol.coherent().trajectory();
    FieldGrid g;
    if (c.oracle.x_min) {
        const auto b = c.oracle.boundary == "periodic" ? Boundary::Periodic : Boundary::DirichletZero;
        g = FieldGrid::make(*c.oracle.x_min, *c.oracle.x_max, c.oracle.points, b);
    } else {
        g = oracle::auto_domain(traj, t_last, c.oracle.dx_over_sqrt_D * std::sqrt(ctx.model.D), c.oracle.k_sigma);
    }
    const Field u0 = sol.sample(g, c.ee.t0);
    const auto snaps = oracle::solve_nonlinear(u0, ctx.model, c.ee.t0, c.oracle.times, c.oracle.solver());

    auto fields = ctx.table({"t", "x", "u", "u_leading"});
    auto moments = ctx.table({"t", "mass", "center", "variance", "ee_sigma", "ee_x", "ee_alpha2", "rel_l2_leading"});
    for (std::size_t k = 0; k < snaps.times.size(); ++k) {
        const double t = snaps.times[k];
        const Field& u = snaps.fields[k];
        const Field lead = sol.sample(g, t);
        for (std::size_t i = 0; i < g.n; ++i) fields.row({t, g.x(i), u.values[i], lead.values[i]});
        const auto fm = oracle::field_moments(u);
        const auto s = traj.at(t);
        moments.row({t, fm.mass, fm.center, fm.variance, s.sigma, s.x, s.alpha2(), relative_l2_error(lead, u)});
    }
    json res{{"nodes", g.n},
             {"dx", g.dx()},
             {"dt", snaps.dt},
             {"steps", snaps.steps},
             {"min_positivity", snaps.min_positivity},
             {"max_boundary_ratio", snaps.max_boundary_ratio}};
    ctx.report.artifacts.add_csv("direct_fields.csv", fields, res);
    ctx.report.artifacts.add_csv("direct_moments.csv", moments, res);
    if (snaps.min_positivity < kUndershoot) {
        ctx.report.warnings.push_back("positivity undershoot: min u / max u = " + num("%.3e", snaps.min_positivity));
    }
    ctx.report.lines.push_back("direct: " + std::to_string(g.n) + " nodes, " + std::to_string(snaps.steps) +
                               " steps of dt=" + num("%.3e", snaps.dt));
}

void run_largetime(Context& ctx) {
    const auto& lc = ctx.cfg.largetime;
    const auto& p = lc.params;
    const auto times = linspace(0.0, lc.t_end, lc.t_steps);

    auto bg = ctx.table({"t", "beta", "chi"});
    for (double t : times) bg.row({t, background(t, p), chi(t, p)});
    ctx.report.artifacts.add_csv("background.csv", bg, json{{"limit", p.a / (p.kappa * p.B())}});

    const auto cs = coefficients(p.n, times, lc.m_max, p);
    auto ct = ctx.table({"t", "m", "C", "asymptote"});
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (int m = 0; m <= lc.m_max; ++m) {
            const double asym = (p.n == 0 && m % 2 == 0 && times[i] > 0.0) ? coefficient_asymptote(m / 2, times[i], p) : kNaN;
            ct.row({times[i], static_cast<double>(m), cs.values[i][static_cast<std::size_t>(m)], asym});
        }
    }
    ctx.report.artifacts.add_csv("coefficients.csv", ct,
                                 json{{"max_terms", cs.max_terms},
                                      {"tail_bound", cs.tail_bound},
                                      {"quadrature_fallbacks", cs.quadrature_fallbacks}});
    if (cs.quadrature_fallbacks) {
        ctx.report.warnings.push_back(std::to_string(cs.quadrature_fallbacks) +
                                      " coefficient(s) fell back to quadrature after series cancellation");
    }

    // full profile beta + eps u1 (+ eps^2 u2) on the snapshot grid at every time
    const auto g = FieldGrid::make(lc.x_min, lc.x_max, lc.points);
    std::vector<Field> u1(times.size()), u2(times.size());
    std::vector<int> modes(times.size());
    U2Options uo;
    uo.time_panels = lc.u2_panels;
    for_each_index(times.size(), ctx.opts.jobs, [&](std::size_t i) {
        u1[i] = u1_field(g, times[i], p);
        Field f = u1[i];
        const double beta = background(times[i], p);
        if (lc.u2) u2[i] = u2_correction(g, times[i], p, uo);
        for (std::size_t k = 0; k < g.n; ++k) {
            f.values[k] = beta + p.eps * f.values[k] + (lc.u2 ? p.eps * p.eps * u2[i].values[k] : 0.0);
        }
        modes[i] = mode_count(f, lc.mode_threshold);
    });

    auto mc = ctx.table({"t", "modes"});
    double transition = kNaN;
    for (std::size_t i = 0; i < times.size(); ++i) {
        mc.row({times[i], static_cast<double>(modes[i])});
        if (std::isnan(transition) && modes[i] >= 2 && modes[0] < 2) transition = times[i];
    }
    json mres{{"threshold", lc.mode_threshold}, {"initial_modes", modes[0]}};
    mres["transition_time"] = std::isnan(transition) ? json(nullptr) : json(transition);
    ctx.report.artifacts.add_csv("mode_count.csv", mc, mres);

    // five snapshots spread over the window
    std::vector<std::string> cols{"t", "x", "beta", "u1", "u"};
    if (lc.u2) cols.insert(cols.begin() + 4, "u2");
    auto sn = ctx.table(cols);
    std::vector<std::size_t> picks;
    for (int k = 0; k < 5; ++k) picks.push_back(static_cast<std::size_t>(k * (lc.t_steps - 1) / 4));
    picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
    for (std::size_t i : picks) {
        const double beta = background(times[i], p);
        for (std::size_t k = 0; k < g.n; ++k) {
            const double v1 = u1[i].values[k];
            if (lc.u2) {
                const double v2 = u2[i].values[k];
                sn.row({times[i], g.x(k), beta, v1, v2, beta + p.eps * v1 + p.eps * p.eps * v2});
            } else {
                sn.row({times[i], g.x(k), beta, v1, beta + p.eps * v1});
            }
        }
    }
    ctx.report.artifacts.add_csv("largetime_snapshots.csv", sn);
    ctx.report.lines.push_back("largetime: C_0(0) = " + num("%.12g", cs.values[0][0]) + ", modes " +
                               std::to_string(modes[0]) + " -> " + std::to_string(modes.back()) +
                               (std::isnan(transition) ? std::string(", no transition")
                                                       : ", first multimodal at t=" + num("%g", transition)));
}

void run_compare(Context& ctx) {
    const auto& c = ctx.cfg;
    SweepOptions so;
    so.M = c.ee.M;
    so.germ_b = c.germ.b;
    so.x0 = c.coherent.x0;
    so.dx_over_sqrt_D = c.oracle.dx_over_sqrt_D;
    so.k_sigma = c.oracle.k_sigma;
    so.jobs = ctx.opts.jobs;
    so.parallel = c.oracle.parallel;
    const auto r = convergence_sweep(ctx.model, c.sweep.D, c.sweep.t, so);
    auto t = ctx.table({"D", "err_leading", "err_linear", "nodes", "min_positivity"});
    double minpos = 1.0;
    for (const auto& pt : r.points) {
        t.row({pt.D, pt.err_leading, pt.err_linear, static_cast<double>(pt.nodes), pt.min_positivity});
        minpos = std::min(minpos, pt.min_positivity);
    }
    ctx.report.artifacts.add_csv("compare.csv", t,
                                 json{{"t", c.sweep.t},
                                      {"order_leading", r.order_leading},
                                      {"order_linear", r.order_linear}});
    if (minpos < kUndershoot) {
        ctx.report.warnings.push_back("positivity undershoot: min u / max u = " + num("%.3e", minpos));
    }
    auto line = [](const char* what, double order) {
        return std::string(order >= 1.2 ? "PASS" : "FAIL") + " compare " + what + ": fitted order " +
               num("%.3f", order) + " (need >= 1.2)";
    };
    ctx.report.lines.push_back(line("leading-order solution", r.order_leading));
    ctx.report.lines.push_back(line("associated linear solution", r.order_linear));
}

void run_acceptance_cmd(Context& ctx) {
    AcceptanceOptions ao;
    ao.seed = ctx.opts.seed;
    ao.jobs = ctx.opts.jobs;
    const auto results = run_acceptance(ao, ctx.opts.criteria);
    auto t = ctx.table({"id", "name", "pass", "detail"});
    int passed = 0;
    for (const auto& r : results) {
        ctx.report.lines.push_back(format_line(r));
        t.text_row({std::to_string(r.id), r.name, r.pass ? "1" : "0", r.detail});
        passed += r.pass;
    }
    ctx.report.artifacts.add_csv("acceptance.csv", t, json{{"passed", passed}, {"total", results.size()}});
    ctx.report.lines.push_back(std::to_string(passed) + "/" + std::to_string(results.size()) + " criteria passed");
    ctx.report.acceptance_failed = passed != static_cast<int>(results.size());
}

// Matplotlib scripts, one per command, reading the CSVs next to them.
const char* plot_script(Command c) {
    switch (c) {
        case Command::EE:
            return R"py(import pandas as pd, matplotlib.pyplot as plt
d = pd.read_csv("ee_trajectory.csv")
fig, ax = plt.subplots(1, 3, figsize=(12, 3.5))
for a, col in zip(ax, ["sigma", "x", "alpha2"]):
    a.plot(d.t, d[col], label=col)
    if col + "_closed" in d:
        a.plot(d.t, d[col + "_closed"], "--", label="closed form")
    a.set_xlabel("t"); a.legend()
fig.tight_layout(); fig.savefig("ee.png", dpi=150)
)py";
        case Command::Germ:
            return R"py(import pandas as pd, matplotlib.pyplot as plt
d = pd.read_csv("germ.csv")
fig, ax = plt.subplots(1, 2, figsize=(10, 3.5))
for col in ["Wm", "Zm", "Wp", "Zp"]:
    ax[0].plot(d.t, d[col], label=col)
ax[0].axhline(0, color="k", lw=0.5); ax[0].legend(); ax[0].set_xlabel("t")
ax[1].plot(d.t, d.q); ax[1].set_title("q"); ax[1].set_xlabel("t")
fig.tight_layout(); fig.savefig("germ.png", dpi=150)
)py";
        case Command::Coherent:
            return R"py(import pandas as pd, matplotlib.pyplot as plt
d = pd.read_csv("coherent_states.csv")
times = sorted(d.t.unique())
fig, ax = plt.subplots(1, len(times), figsize=(4 * len(times), 3.5), squeeze=False)
for a, t in zip(ax[0], times):
    for n, g in d[d.t == t].groupby("n"):
        a.plot(g.x, g.state, label=f"n={n}")
    a.set_title(f"t={t:g}"); a.legend()
fig.tight_layout(); fig.savefig("coherent.png", dpi=150)
)py";
        case Command::Residual:
            return R"py(import pandas as pd, matplotlib.pyplot as plt
d = pd.read_csv("residual.csv")
for t, g in d.groupby("t"):
    plt.loglog(g.D, g.residual_over_norm, "o-", label=f"t={t:g}")
plt.xlabel("D"); plt.ylabel("||Lv|| / ||v||"); plt.legend()
plt.savefig("residual.png", dpi=150)
)py";
        case Command::Direct:
            return R"py(import pandas as pd, matplotlib.pyplot as plt
d = pd.read_csv("direct_fields.csv")
for t, g in d.groupby("t"):
    l, = plt.plot(g.x, g.u, label=f"t={t:g}")
    plt.plot(g.x, g.u_leading, "--", color=l.get_color())
plt.xlabel("x"); plt.legend(); plt.title("direct (solid), leading order (dashed)")
plt.savefig("direct.png", dpi=150)
)py";
        case Command::LargeTime:
            return R"py(import pandas as pd, matplotlib.pyplot as plt
s = pd.read_csv("largetime_snapshots.csv")
m = pd.read_csv("mode_count.csv")
fig, ax = plt.subplots(1, 2, figsize=(10, 3.5))
for t, g in s.groupby("t"):
    ax[0].plot(g.x, g.u, label=f"t={t:g}")
ax[0].legend(); ax[0].set_xlabel("x")
ax[1].step(m.t, m.modes, where="post"); ax[1].set_xlabel("t"); ax[1].set_ylabel("modes")
fig.tight_layout(); fig.savefig("largetime.png", dpi=150)
)py";
        case Command::Compare:
            return R"py(import pandas as pd, matplotlib.pyplot as plt
d = pd.read_csv("compare.csv")
plt.loglog(d.D, d.err_leading, "o-", label="leading order")
plt.loglog(d.D, d.err_linear, "s-", label="associated linear")
plt.xlabel("D"); plt.ylabel("relative L2 error"); plt.legend()
plt.savefig("compare.png", dpi=150)
)py";
        case Command::Acceptance:
            return R"py(import pandas as pd
d = pd.read_csv("acceptance.csv")
print(d[["id", "name", "pass"]].to_string(index=False))
)py";
    }
    return "";
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
    for (const auto& e : kCommands) {
        if (name == e.name) return e.cmd;
    }
    return std::nullopt;
}

const char* command_name(Command c) {
    for (const auto& e : kCommands) {
        if (e.cmd == c) return e.name;
    }
    return "?";
}

std::vector<std::string> command_names() {
    std::vector<std::string> out;
    for (const auto& e : kCommands) out.emplace_back(e.name);
    return out;
}

RunReport run_command(Command cmd, const ExperimentConfig& config, const RunOptions& opts, const std::string& out_dir) {
    json meta{{"command", command_name(cmd)}, {"seed", opts.seed}, {"config", config.resolved()}};
    RunReport report{Artifacts(out_dir.empty() ? config.output.dir : out_dir, std::move(meta)), {}, {}, false};
    Context ctx{config, opts, report, config.model.build(), config.output.precision};
    ctx.model.validate();
    switch (cmd) {
        case Command::EE: run_ee(ctx); break;
        case Command::Germ: run_germ(ctx); break;
        case Command::Coherent: run_coherent(ctx); break;
        case Command::Residual: run_residual(ctx); break;
        case Command::Direct: run_direct(ctx); break;
        case Command::LargeTime: run_largetime(ctx); break;
        case Command::Compare: run_compare(ctx); break;
        case Command::Acceptance: run_acceptance_cmd(ctx); break;
    }
    report.artifacts.add_text(std::string("plot_") + command_name(cmd) + ".py", plot_script(cmd));
    return report;
}

}  // namespace fkpp::app
