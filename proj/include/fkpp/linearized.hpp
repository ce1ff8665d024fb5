#pragma once

#include <functional>

#include "fkpp/ee.hpp"
#include "fkpp/field.hpp"

// Associated linear operator  -d_t + D d_xx - d_x(Lambda .) + A  built from an
// EE trajectory, plus the first two correction operators of its expansion
// around the trajectory.
namespace fkpp {

class AssociatedOperator {
public:
    explicit AssociatedOperator(EETrajectory traj);

    const EETrajectory& trajectory() const { return traj_; }
    const ModelSpec& model() const { return traj_.model(); }
    int order() const { return traj_.order(); }

    /// Lambda^(M)(x, t).
    double lambda(double x, double t) const { return lambda_dx(0, x, t); }
    /// A^(M)(x, t).
    double A(double x, double t) const { return A_dx(0, x, t); }
    /// x-derivatives of Lambda and A.
    double lambda_dx(int k, double x, double t) const;
    double A_dx(int k, double x, double t) const;

private:
    EETrajectory traj_;
};

double coeff_lambda(double x, double t, const AssociatedOperator& op);
double coeff_A(double x, double t, const AssociatedOperator& op);

/// Two-snapshot central difference (after - before) / (2 half_step).
Field central_time_derivative(const Field& before, const Field& after, double half_step);

/// [-d_t + D d_xx - d_x(Lambda .) + A] v on the grid with 4th-order central
/// differences; v_t supplied by the caller. Throws GridTooNarrow when the
/// boundary values of v exceed boundary_tol * max|v|. Negative disables the check.
Field apply_operator(const Field& v, const Field& v_t, double t, const AssociatedOperator& op,
                     double boundary_tol = 1e-12);

/// Scalar multipliers of the correction operators, with p = D d_x:
///   order 1:  p_coef p + p_dx_coef p dx^2 + dx_coef dx
///   order 2:  p_coef p + p_dx_coef p dx^3 + dx_coef dx^2
struct ExpansionCoefficients {
    int order = 1;
    double p_coef = 0.0;
    double p_dx_coef = 0.0;
    double dx_coef = 0.0;
};

/// Order 2 needs M >= 3 (uses alpha^(3)).
ExpansionCoefficients expansion_coefficients(int order, double t, const AssociatedOperator& op);

/// The correction operator of the given order applied to v on the grid
/// (p acts last: p dx^2 v = D d_x(dx^2 v)).
Field apply_expansion(int order, const Field& v, double t, const AssociatedOperator& op);

/// 4th-order central first and second derivatives with zero (Dirichlet) or
/// wrapped (periodic) ghost values.
Field grid_dx(const Field& v);
Field grid_dxx(const Field& v);

struct ResidualReport {
    double t = 0.0;
    double residual_l2 = 0.0;
    double residual_over_norm = 0.0;
};

/// Residual of v(x, t) under the associated operator on grid, with the time
/// derivative from samples at t -+ half_step.
ResidualReport residual_report(const std::function<double(double, double)>& v, const FieldGrid& grid, double t,
                               double half_step, const AssociatedOperator& op, double boundary_tol = 1e-12);

}  // namespace fkpp
