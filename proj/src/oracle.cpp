#include "fkpp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <span>
#include <string>

#include "fkpp/error.hpp"
#include "fkpp/kernels.hpp"

namespace fkpp::oracle {
namespace {

using Rhs = std::function<void(double, std::span<const double>, std::span<double>)>;

bool periodic(const FieldGrid& g) { return g.boundary == Boundary::Periodic; }

// Value at index i with odd reflection about the Dirichlet nodes, or wrap.
inline double ext(std::span<const double> u, long i, bool wrap) {
    const long n = static_cast<long>(u.size());
    if (wrap) return u[static_cast<std::size_t>(((i % n) + n) % n)];
    if (i < 0) return -u[static_cast<std::size_t>(-i)];
    if (i >= n) return -u[static_cast<std::size_t>(2 * (n - 1) - i)];
    return u[static_cast<std::size_t>(i)];
}

// du += D u_xx (4th order) - d_x flux (2nd order) on interior nodes.
void add_transport(const FieldGrid& g, double D, std::span<const double> u, std::span<const double> flux,
                   std::span<double> du, bool parallel) {
    const bool wrap = periodic(g);
    const long n = static_cast<long>(u.size());
    const double h = g.dx();
    const double c2 = D / (12.0 * h * h);
    const double c1 = 1.0 / (2.0 * h);
    const long lo = wrap ? 0 : 1;
    const long hi = wrap ? n : n - 1;
    (void)parallel;
#ifdef FKPP_HAVE_OPENMP
#pragma omp parallel for if (parallel) schedule(static)
#endif
    for (long i = lo; i < hi; ++i) {
        const double lap = -ext(u, i + 2, wrap) + 16.0 * ext(u, i + 1, wrap) - 30.0 * u[static_cast<std::size_t>(i)] +
                           16.0 * ext(u, i - 1, wrap) - ext(u, i - 2, wrap);
        double div = 0.0;
        if (!flux.empty()) div = (ext(flux, i + 1, wrap) - ext(flux, i - 1, wrap)) * c1;
        du[static_cast<std::size_t>(i)] += c2 * lap - div;
    }
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double near_boundary_ratio(const FieldGrid& g, std::span<const double> u, double peak) {
    if (periodic(g) || peak == 0.0) return 0.0;
    const std::size_t n = u.size();
    return std::max(std::abs(u[1]), std::abs(u[n - 2])) / peak;
}

double stable_dt(const FieldGrid& g, double D, double max_velocity, double max_rate) {
    const double h = g.dx();
    double dt = std::numeric_limits<double>::infinity();
    if (D > 0.0) dt = std::min(dt, 0.2 * h * h / D);
    if (max_velocity > 0.0) dt = std::min(dt, 0.5 * h / max_velocity);
    // reaction limit set for accuracy (RK4 error ~ (dt rate)^4), not stability
    if (max_rate > 0.0) dt = std::min(dt, 0.1 / max_rate);
    require(std::isfinite(dt), ErrorKind::InvalidArgument, "cannot choose a time step for a trivial right-hand side");
    return dt;
}

void check_times(double t0, const std::vector<double>& times) {
    require(!times.empty(), ErrorKind::InvalidArgument, "no output times requested");
    double prev = t0;
    for (double t : times) {
        require(std::isfinite(t) && t >= prev, ErrorKind::InvalidArgument, "output times must be sorted and >= t0");
        prev = t;
    }
}

Snapshots march(const Field& u0, double t0, const std::vector<double>& times, double dt, const SolverOptions& opts,
                const Rhs& rhs) {
    check_times(t0, times);
    require(u0.size() >= 16, ErrorKind::InvalidArgument, "oracle grids need at least 16 nodes");
    require(u0.all_finite(), ErrorKind::InvalidArgument, "initial field is not finite");
    require(dt > 0.0 && std::isfinite(dt), ErrorKind::InvalidArgument, "time step must be positive");

    const FieldGrid& g = u0.grid;
    const std::size_t n = u0.size();
    std::vector<double> u = u0.values;
    if (!periodic(g)) u.front() = u.back() = 0.0;
    const double peak0 = max_abs(u);
    require(peak0 > 0.0, ErrorKind::InvalidArgument, "initial field is identically zero");

    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    Snapshots out;
    out.dt = dt;

    auto monitor = [&](double t) {
        double peak = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (double v : u) {
            if (!std::isfinite(v)) fail(ErrorKind::NumericFailure, "oracle state became non-finite", t);
            peak = std::max(peak, std::abs(v));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (peak > opts.growth_limit * peak0) {
            fail(ErrorKind::NumericFailure, "oracle norm grew beyond the stability limit", t);
        }
        if (hi > 0.0) out.min_positivity = std::min(out.min_positivity, lo / hi);
        const double br = near_boundary_ratio(g, u, peak);
        out.max_boundary_ratio = std::max(out.max_boundary_ratio, br);
        if (opts.boundary_tol >= 0.0 && br > opts.boundary_tol) {
            char msg[96];
            std::snprintf(msg, sizeof msg, "solution reaches the Dirichlet boundary (ratio %.3e)", br);
            fail(ErrorKind::GridTooNarrow, msg, t);
        }
    };

    auto axpy = [&](double c, const std::vector<double>& k) {
        for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + c * k[i];
    };

    double t = t0;
    monitor(t);
    for (double target : times) {
        const double span = target - t;
        const auto steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
        const double h = steps > 0 ? span / static_cast<double>(steps) : 0.0;
        for (std::size_t s = 0; s < steps; ++s) {
            rhs(t, u, k1);
            axpy(0.5 * h, k1);
            rhs(t + 0.5 * h, tmp, k2);
            axpy(0.5 * h, k2);
            rhs(t + 0.5 * h, tmp, k3);
            axpy(h, k3);
            rhs(t + h, tmp, k4);
            for (std::size_t i = 0; i < n; ++i) u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            t = (s + 1 == steps) ? target : t + h;
            ++out.steps;
            monitor(t);
        }
        t = target;
        Field f{g, u};
        out.times.push_back(target);
        out.fields.push_back(std::move(f));
    }
    return out;
}

// Cached weighted kernel matrix, rebuilt per call for time-dependent kernels.
class KernelSum {
public:
    KernelSum(const FieldGrid& g, std::function<double(double, double, double)> k, bool time_dependent,
              bool parallel)
        : grid_(g), k_(std::move(k)), time_dependent_(time_dependent), parallel_(parallel) {}

    void apply(double t, std::span<const double> u, std::span<double> out) {
        if (kw_.empty() || (time_dependent_ && t != t_cached_)) {
            kw_ = kernels::weighted_matrix(grid_, [&](double x, double y) { return k_(x, y, t); });
            t_cached_ = t;
        }
        kernels::nonlocal_apply(kw_, u, out, parallel_);
    }

private:
    FieldGrid grid_;
    std::function<double(double, double, double)> k_;
    bool time_dependent_;
    bool parallel_;
    std::vector<double> kw_;
    double t_cached_ = 0.0;
};

}  // namespace

const Field& Snapshots::at(double t) const {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (std::abs(times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return fields[i];
    }
    fail(ErrorKind::InvalidArgument, "no snapshot at t=" + std::to_string(t));
}

Snapshots solve_nonlinear(const Field& u0, const ModelSpec& model, double t0, const std::vector<double>& times,
                          const SolverOptions& opts) {
    model.validate();
    const FieldGrid g = u0.grid;
    const std::size_t n = u0.size();
    const bool use_b = model.kappa != 0.0 && !model.b.is_zero();
    const bool use_W = model.kappa != 0.0 && !model.W.is_zero();
    const bool use_V = !model.V.is_zero();

    KernelSum kb(
        g, [&model](double x, double y, double t) { return model.b.value(x, y, t); }, model.b.time_dependent(),
        opts.parallel);
    KernelSum kW(
        g, [&model](double x, double y, double t) { return model.W.partial(1, 0, x, y, t); },
        model.W.time_dependent(), opts.parallel);

    std::vector<double> conv_b(n, 0.0), conv_W(n, 0.0), flux(n, 0.0), a_val(n), vx(n, 0.0);
    const bool a_static = model.a.analytic();
    const bool v_static = model.V.analytic();
    auto fill_coefficients = [&](double t) {
        for (std::size_t i = 0; i < n; ++i) {
            a_val[i] = model.a.value(g.x(i), t);
            if (use_V) vx[i] = model.V.dx(1, g.x(i), t);
        }
    };
    fill_coefficients(t0);

    const Rhs rhs = [&](double t, std::span<const double> u, std::span<double> du) {
        if (!a_static || !v_static) fill_coefficients(t);
        if (use_b) kb.apply(t, u, conv_b);
        if (use_W) kW.apply(t, u, conv_W);
        const bool has_flux = use_V || use_W;
        for (std::size_t i = 0; i < n; ++i) {
            if (has_flux) flux[i] = (vx[i] + model.kappa * conv_W[i]) * u[i];
            du[i] = a_val[i] * u[i] - model.kappa * u[i] * conv_b[i];
        }
        if (!periodic(g)) du[0] = du[n - 1] = 0.0;
        add_transport(g, model.D, u, has_flux ? std::span<const double>(flux) : std::span<const double>{}, du,
                      opts.parallel);
        if (!periodic(g)) du[0] = du[n - 1] = 0.0;
    };

    double dt = 0.0;
    if (opts.dt) {
        dt = *opts.dt;
    } else {
        if (use_b) kb.apply(t0, u0.values, conv_b);
        if (use_W) kW.apply(t0, u0.values, conv_W);
        double vel = 0.0, rate = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            vel = std::max(vel, std::abs(vx[i] + model.kappa * conv_W[i]));
            rate = std::max(rate, std::abs(a_val[i]) + model.kappa * std::abs(conv_b[i]));
        }
        dt = stable_dt(g, model.D, vel, rate);
    }
    return march(u0, t0, times, dt, opts, rhs);
}

Snapshots solve_linear_associated(const Field& v0, const AssociatedOperator& op, double t0,
                                  const std::vector<double>& times, const SolverOptions& opts) {
    const FieldGrid g = v0.grid;
    const std::size_t n = v0.size();
    const double D = op.model().D;
    std::vector<double> lam(n), A(n), flux(n);
    auto fill = [&](double t) {
        for (std::size_t i = 0; i < n; ++i) {
            lam[i] = coeff_lambda(g.x(i), t, op);
            A[i] = coeff_A(g.x(i), t, op);
        }
    };
    const Rhs rhs = [&](double t, std::span<const double> v, std::span<double> dv) {
        fill(t);
        for (std::size_t i = 0; i < n; ++i) {
            flux[i] = lam[i] * v[i];
            dv[i] = A[i] * v[i];
        }
        add_transport(g, D, v, flux, dv, opts.parallel);
        if (!periodic(g)) dv[0] = dv[n - 1] = 0.0;
    };
    double dt = 0.0;
    if (opts.dt) {
        dt = *opts.dt;
    } else {
        fill(t0);
        dt = stable_dt(g, D, max_abs(lam), max_abs(A));
    }
    return march(v0, t0, times, dt, opts, rhs);
}

Snapshots solve_linear_perturbation(const Field& phi, const LargeTimeParams& p, const std::vector<double>& times,
                                    const SolverOptions& opts) {
    p.validate();
    const FieldGrid g = phi.grid;
    const std::size_t n = phi.size();
    const double B = p.B();
    const auto ker = p.kernel_coefficient();
    KernelSum kb(
        g, [ker](double x, double y, double t) { return ker.value(x, y, t); }, false, opts.parallel);
    std::vector<double> conv(n, 0.0);
    const bool coupled = p.kappa != 0.0 && !ker.is_zero();

    const Rhs rhs = [&](double t, std::span<const double> w, std::span<double> dw) {
        const double beta = background(t, p);
        const double rate = p.a - p.kappa * B * beta;
        if (coupled) kb.apply(t, w, conv);
        for (std::size_t i = 0; i < n; ++i) dw[i] = rate * w[i] - p.kappa * beta * conv[i];
        if (!periodic(g)) dw[0] = dw[n - 1] = 0.0;
        add_transport(g, p.D, w, {}, dw, opts.parallel);
        if (!periodic(g)) dw[0] = dw[n - 1] = 0.0;
    };
    double dt = 0.0;
    if (opts.dt) {
        dt = *opts.dt;
    } else {
        const double beta_max = std::max(p.beta0, p.kappa * B > 0.0 ? p.a / (p.kappa * B) : p.beta0);
        dt = stable_dt(g, p.D, 0.0, std::abs(p.a) + 2.0 * p.kappa * std::abs(B) * beta_max);
    }
    return march(phi, 0.0, times, dt, opts, rhs);
}

FieldMoments field_moments(const Field& f) {
    const auto w = f.grid.weights();
    FieldMoments m;
    double first = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        m.mass += w[i] * f.values[i];
        first += w[i] * f.grid.x(i) * f.values[i];
    }
    if (m.mass == 0.0) return m;
    m.center = first / m.mass;
    double second = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = f.grid.x(i) - m.center;
        second += w[i] * d * d * f.values[i];
    }
    m.variance = second / m.mass;
    return m;
}

FieldGrid auto_domain(const EETrajectory& traj, double t_end, double dx, double k_sigma) {
    require(dx > 0.0 && k_sigma > 0.0, ErrorKind::InvalidArgument, "auto_domain needs positive dx and k_sigma");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    auto visit = [&](double t) {
        const auto s = traj.at(t);
        const double sd = std::sqrt(std::max(s.alpha2(), 0.0));
        lo = std::min(lo, s.x - k_sigma * sd);
        hi = std::max(hi, s.x + k_sigma * sd);
    };
    for (double t : traj.dense().times()) {
        if (t <= t_end) visit(t);
    }
    visit(std::min(t_end, traj.t_end()));
    const auto n = static_cast<std::size_t>(std::max(16.0, std::ceil((hi - lo) / dx) + 1.0));
    return FieldGrid::make(lo, lo + static_cast<double>(n - 1) * dx, n);
}

}  // namespace fkpp::oracle
