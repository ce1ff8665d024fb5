#include "fkpp/linearized.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "fkpp/error.hpp"

namespace fkpp {
namespace {

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double ghost(const Field& v, long i) {
    const long n = static_cast<long>(v.size());
    if (v.grid.boundary == Boundary::Periodic) return v.values[static_cast<std::size_t>(((i % n) + n) % n)];
    if (i < 0 || i >= n) return 0.0;
    return v.values[static_cast<std::size_t>(i)];
}

// sum_l W_{k,l} alpha^(l)/l!  and  sum_l b_{k,l} alpha^(l)/l!  on the trajectory.
double kernel_sum(const ModelSpec& m, KernelId which, int k, const MomentState& s, double t) {
    const KernelCoefficient& ker = which == KernelId::b ? m.b : m.W;
    if (ker.is_zero()) return 0.0;
    double acc = 0.0;
    for (int l = 0; l <= s.M; ++l) {
        const double mom = s.moment(l);
        if (mom == 0.0) continue;
        acc += (which == KernelId::b ? m.taylor_b(k, l, t, s.x) : m.taylor_W(k, l, t, s.x)) * mom / factorial(l);
    }
    return acc;
}

}  // namespace

AssociatedOperator::AssociatedOperator(EETrajectory traj) : traj_(std::move(traj)) {}

double AssociatedOperator::lambda_dx(int k, double x, double t) const {
    const auto s = traj_.at(t);
    const auto& m = model();
    double acc = 0.0;
    if (!m.W.is_zero()) {
        for (int l = 0; l <= s.M; ++l) {
            const double mom = s.moment(l);
            if (mom != 0.0) acc += m.W.partial(k + 1, l, x, s.x, t) * mom / factorial(l);
        }
    }
    const double v = m.V.is_zero() ? 0.0 : m.V.dx(k + 1, x, t);
    return v + m.kappa * s.sigma * acc;
}

double AssociatedOperator::A_dx(int k, double x, double t) const {
    const auto s = traj_.at(t);
    const auto& m = model();
    double acc = 0.0;
    if (!m.b.is_zero()) {
        for (int l = 0; l <= s.M; ++l) {
            const double mom = s.moment(l);
            if (mom != 0.0) acc += m.b.partial(k, l, x, s.x, t) * mom / factorial(l);
        }
    }
    return m.a.dx(k, x, t) - m.kappa * s.sigma * acc;
}

double coeff_lambda(double x, double t, const AssociatedOperator& op) { return op.lambda(x, t); }
double coeff_A(double x, double t, const AssociatedOperator& op) { return op.A(x, t); }

Field central_time_derivative(const Field& before, const Field& after, double half_step) {
    require(before.size() == after.size(), ErrorKind::InvalidArgument, "snapshots live on different grids");
    require(half_step > 0.0, ErrorKind::InvalidArgument, "time step must be positive");
    Field out = Field::zeros(before.grid);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.values[i] = (after.values[i] - before.values[i]) / (2.0 * half_step);
    }
    return out;
}

Field grid_dx(const Field& v) {
    Field out = Field::zeros(v.grid);
    const double h = v.grid.dx();
    for (long i = 0; i < static_cast<long>(v.size()); ++i) {
        out.values[static_cast<std::size_t>(i)] =
            (-ghost(v, i + 2) + 8.0 * ghost(v, i + 1) - 8.0 * ghost(v, i - 1) + ghost(v, i - 2)) / (12.0 * h);
    }
    return out;
}

Field grid_dxx(const Field& v) {
    Field out = Field::zeros(v.grid);
    const double h = v.grid.dx();
    for (long i = 0; i < static_cast<long>(v.size()); ++i) {
        out.values[static_cast<std::size_t>(i)] =
            (-ghost(v, i + 2) + 16.0 * ghost(v, i + 1) - 30.0 * ghost(v, i) + 16.0 * ghost(v, i - 1) -
             ghost(v, i - 2)) /
            (12.0 * h * h);
    }
    return out;
}

Field apply_operator(const Field& v, const Field& v_t, double t, const AssociatedOperator& op,
                     double boundary_tol) {
    require(v.size() == v_t.size(), ErrorKind::InvalidArgument, "time derivative lives on another grid");
    if (boundary_tol >= 0.0 && v.boundary_ratio() > boundary_tol) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "boundary values of v are %.3e of its maximum (limit %.1e)", v.boundary_ratio(),
                      boundary_tol);
        fail(ErrorKind::GridTooNarrow, buf);
    }
    const double D = op.model().D;
    Field flux = Field::zeros(v.grid);
    Field growth = Field::zeros(v.grid);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = v.grid.x(i);
        flux.values[i] = op.lambda(x, t) * v.values[i];
        growth.values[i] = op.A(x, t) * v.values[i];
    }
    const Field vxx = grid_dxx(v);
    const Field fx = grid_dx(flux);
    Field out = Field::zeros(v.grid);
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.values[i] = -v_t.values[i] + D * vxx.values[i] - fx.values[i] + growth.values[i];
    }
    return out;
}

ExpansionCoefficients expansion_coefficients(int order, double t, const AssociatedOperator& op) {
    require(order == 1 || order == 2, ErrorKind::InvalidArgument, "expansion order must be 1 or 2");
    const auto s = op.trajectory().at(t);
    const auto& m = op.model();
    const double sk = s.sigma * m.kappa;
    ExpansionCoefficients c;
    c.order = order;
    if (order == 1) {
        c.p_coef = s.moment(2) * (m.taylor_a(1, t, s.x) - sk * kernel_sum(m, KernelId::b, 1, s, t) +
                                  0.5 * m.taylor_V(2, t, s.x) + 0.5 * sk * kernel_sum(m, KernelId::W, 2, s, t));
        c.p_dx_coef = -0.5 * op.lambda_dx(2, s.x, t);
        c.dx_coef = m.D * op.A_dx(1, s.x, t);
        return c;
    }
    if (s.M < 3) {
        fail(ErrorKind::OrderExceeded, "second-order expansion needs EE order M >= 3");
    }
    c.p_coef = 0.5 * s.moment(3) *
               (m.taylor_a(2, t, s.x) - sk * kernel_sum(m, KernelId::b, 2, s, t) +
                (m.taylor_V(3, t, s.x) + sk * kernel_sum(m, KernelId::W, 3, s, t)) / 3.0);
    c.p_dx_coef = -op.lambda_dx(3, s.x, t) / 6.0;
    c.dx_coef = 0.5 * m.D * op.A_dx(2, s.x, t);
    return c;
}

Field apply_expansion(int order, const Field& v, double t, const AssociatedOperator& op) {
    const auto c = expansion_coefficients(order, t, op);
    const double X = op.trajectory().at(t).x;
    const double D = op.model().D;
    const int power = order == 1 ? 2 : 3;
    Field shifted = Field::zeros(v.grid);
    Field mult = Field::zeros(v.grid);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double dx = v.grid.x(i) - X;
        shifted.values[i] = std::pow(dx, power) * v.values[i];
        mult.values[i] = std::pow(dx, power - 1) * v.values[i];
    }
    const Field vx = grid_dx(v);
    const Field sx = grid_dx(shifted);
    Field out = Field::zeros(v.grid);
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.values[i] = c.p_coef * D * vx.values[i] + c.p_dx_coef * D * sx.values[i] + c.dx_coef * mult.values[i];
    }
    return out;
}

ResidualReport residual_report(const std::function<double(double, double)>& v, const FieldGrid& grid, double t,
                               double half_step, const AssociatedOperator& op, double boundary_tol) {
    require(half_step > 0.0, ErrorKind::InvalidArgument, "residual needs a positive time step");
    const Field now = Field::sample(grid, [&](double x) { return v(x, t); });
    const Field before = Field::sample(grid, [&](double x) { return v(x, t - half_step); });
    const Field after = Field::sample(grid, [&](double x) { return v(x, t + half_step); });
    const Field r = apply_operator(now, central_time_derivative(before, after, half_step), t, op, boundary_tol);
    ResidualReport rep;
    rep.t = t;
    rep.residual_l2 = r.l2_norm();
    const double norm = now.l2_norm();
    rep.residual_over_norm = norm > 0.0 ? rep.residual_l2 / norm : 0.0;
    return rep;
}

}  // namespace fkpp
