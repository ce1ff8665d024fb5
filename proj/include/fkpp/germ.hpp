#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fkpp/ee.hpp"
#include "fkpp/ode.hpp"

// System in variations  W' = -L W,  Z' = -2 W + L Z  with L = Lambda_x on the
// trajectory, for the two branches W(0) = -/+ b, Z(0) = 1.
namespace fkpp {

enum class Branch { Minus, Plus };

using LambdaX = std::function<double(double t)>;

/// max_step keeps the cubic Hermite dense output accurate enough for
/// finite-difference use (Riccati residual ~2e-9).
inline ode::Tolerances germ_tolerances() { return {1e-12, 1e-12, 0.0025, 1e-3, 2'000'000}; }

class GermState {
public:
    GermState() = default;
    GermState(double b, ode::DenseOutput dense, double valid_end, std::string end_reason,
              std::vector<double> plus_focal_times);

    double b() const { return b_; }
    double t_begin() const { return dense_.t_front(); }
    /// Last time where the sign condition Wm Zm < 0 holds.
    double t_end() const { return valid_end_; }
    /// Empty when the requested span was covered.
    const std::string& end_reason() const { return end_reason_; }
    bool covers(double t) const;
    /// Times where Zp crosses zero; the minus branch stays valid through them.
    const std::vector<double>& plus_focal_times() const { return plus_focal_; }
    const ode::DenseOutput& dense() const { return dense_; }

    double Wm(double t) const { return component(0, t); }
    double Zm(double t) const { return component(1, t); }
    double Wp(double t) const { return component(2, t); }
    double Zp(double t) const { return component(3, t); }
    double W(Branch br, double t) const { return br == Branch::Minus ? Wm(t) : Wp(t); }
    double Z(Branch br, double t) const { return br == Branch::Minus ? Zm(t) : Zp(t); }
    /// Wp Zm - Zp Wm, conserved and equal to 2b.
    double skew(double t) const;
    /// max |skew - 2b| over stored nodes.
    double max_skew_drift() const;

private:
    double component(std::size_t c, double t) const;

    double b_ = 1.0;
    ode::DenseOutput dense_;
    double valid_end_ = 0.0;
    std::string end_reason_;
    std::vector<double> plus_focal_;
};

/// d/dx Lambda^(M)(x, t) at x = x^(M)(t):  V_1 + k sigma sum_l W_{1,l} alpha^(l)/l!.
double lambda_x_on_trajectory(double t, const EETrajectory& traj);
double lambda_x_of_state(const MomentState& s, double t, const ModelSpec& model);

/// Integrates both branches on [t0, t1]. Stops early (and reports) when the
/// sign condition fails; throws NumericFailure on skew-product drift above
/// skew_rel * 2b.
GermState integrate_variations(const LambdaX& lambda_x, double b, double t0, double t1,
                               const ode::Tolerances& tol = germ_tolerances(), double skew_rel = 1e-9);
GermState integrate_variations(const EETrajectory& traj, double b, double t0, double t1,
                               const ode::Tolerances& tol = germ_tolerances(), double skew_rel = 1e-9);

struct JointSolution {
    EETrajectory traj;
    GermState germ;
};

/// EE system and variations integrated as one ODE with shared step control.
JointSolution integrate_joint(const MomentState& s0, const ModelSpec& model, double b, double t0, double t1,
                              const ode::Tolerances& tol = germ_tolerances(), double skew_rel = 1e-9);

/// Q = Wm / Zm.
double q_ratio(const GermState& g, double t);

/// exp(S/D) at leading order: sigma(t) / sigma(t_begin).
double action_and_mass_factor(const EETrajectory& traj, double t);

/// sqrt|Z(0) W(t) / (Z(t) W(0))| for the selected branch.
double phase_factor(const GermState& g, double t, Branch branch = Branch::Minus);

}  // namespace fkpp
