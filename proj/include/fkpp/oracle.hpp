#pragma once

#include <optional>
#include <vector>

#include "fkpp/ee.hpp"
#include "fkpp/field.hpp"
#include "fkpp/largetime.hpp"
#include "fkpp/linearized.hpp"
#include "fkpp/model.hpp"

// Direct method-of-lines solver: 4th-order d_xx, 2nd-order convection
// divergence, O(N^2) trapezoid sums for the nonlocal terms, classical RK4.
namespace fkpp::oracle {

struct SolverOptions {
    /// Fixed step; when unset the step is chosen from the stability limits.
    std::optional<double> dt;
    /// OpenMP row sums and RHS loops. The serial path is the reference.
    bool parallel = false;
    /// Dirichlet runs fail when |u| next to the boundary exceeds this
    /// fraction of max|u|. Negative disables the check.
    double boundary_tol = 1e-12;
    /// Fail when max|u| exceeds growth_limit * max|u0|.
    double growth_limit = 1e6;
};

struct Snapshots {
    std::vector<double> times;
    std::vector<Field> fields;
    double dt = 0.0;
    std::size_t steps = 0;
    /// min_t min(u) / max(u); negative values flag undershoot.
    double min_positivity = 1.0;
    double max_boundary_ratio = 0.0;

    const Field& final() const { return fields.back(); }
    /// Snapshot at a requested time (exact match within 1e-12).
    const Field& at(double t) const;
};

Snapshots solve_nonlinear(const Field& u0, const ModelSpec& model, double t0, const std::vector<double>& times,
                          const SolverOptions& opts = {});

/// v_t = D v_xx - d_x(Lambda v) + A v with coefficients from the EE trajectory.
Snapshots solve_linear_associated(const Field& v0, const AssociatedOperator& op, double t0,
                                  const std::vector<double>& times, const SolverOptions& opts = {});

/// w_t = D w_xx + (a - k B beta) w - k beta (b * w): the first-order
/// perturbation equation around the homogeneous background.
Snapshots solve_linear_perturbation(const Field& phi, const LargeTimeParams& p, const std::vector<double>& times,
                                    const SolverOptions& opts = {});

struct FieldMoments {
    double mass = 0.0;
    double center = 0.0;
    double variance = 0.0;
};
FieldMoments field_moments(const Field& f);

/// Dirichlet grid spanning the EE-predicted center +- k_sigma standard
/// deviations over [t_begin, t_end], sampled at the trajectory nodes.
FieldGrid auto_domain(const EETrajectory& traj, double t_end, double dx, double k_sigma = 8.0);

}  // namespace fkpp::oracle
