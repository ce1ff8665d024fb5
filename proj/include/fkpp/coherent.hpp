#pragma once

#include <complex>
#include <optional>

#include "fkpp/ee.hpp"
#include "fkpp/field.hpp"
#include "fkpp/germ.hpp"

// Trajectory-coherent states v_n built from the germ by the creation operator,
// their biorthogonal duals w_n, and the assembled leading-order solutions.
//
// Two different b's meet here: the competition kernel b(x, y) of the model and
// the germ normalization b > 0 carried by GermState::b().
namespace fkpp {

inline constexpr int kMaxExcitation = 50;

class CoherentState {
public:
    /// The germ must start where the trajectory starts.
    CoherentState(EETrajectory traj, GermState germ);

    const EETrajectory& trajectory() const { return traj_; }
    const GermState& germ() const { return germ_; }
    double D() const { return traj_.model().D; }
    double b() const { return germ_.b(); }
    /// N_D = (b / (pi D))^{1/4}.
    double normalizer() const;
    double center(double t) const { return traj_.at(t).x; }

    double vacuum(double x, double t) const;
    double state(int n, double x, double t) const;
    double dual_state(int n, double x, double t) const;

    Field sample_state(int n, const FieldGrid& grid, double t) const;
    Field sample_dual(int n, const FieldGrid& grid, double t) const;

    /// Ladder operators applied on the grid (4th-order d_x).
    Field annihilate(const Field& v, double t) const;
    Field create(const Field& v, double t) const;

private:
    void check_time(double t) const;
    /// (Zp/Zm)^{n/2} H_n(sqrt(b/(D Zm Zp)) dx), or (Zm/Zp)^{n/2} ... for duals,
    /// with complex intermediates once Zp < 0.
    double hermite_factor(int n, bool dual, double dx, double t) const;

    EETrajectory traj_;
    GermState germ_;
};

/// Initial constants of the even state n: sigma, center x0, alpha^(2) = D(1+4n)/b.
/// Odd n carry zero mass and are refused.
MomentState initial_moment_constants(int n, double D, double b, double x0);

struct AssembleOptions {
    int M = 2;
    double germ_b = 1.0;
    double x0 = 0.0;
    bool allow_odd = false;  // odd n then yields the zero function
    ode::Tolerances tol = germ_tolerances();
};

/// u_n(x, t) = v_n(x, t, C_n), the leading-order solution of the nonlinear
/// equation for even n.
class AsymptoticSolution {
public:
    AsymptoticSolution(int n, std::optional<CoherentState> state);

    int index() const { return n_; }
    bool is_zero() const { return !state_.has_value(); }
    const CoherentState& coherent() const;

    double operator()(double x, double t) const;
    Field sample(const FieldGrid& grid, double t) const;

private:
    int n_;
    std::optional<CoherentState> state_;
};

AsymptoticSolution assemble_solution(int n, const ModelSpec& model, double t0, double t1,
                                     const AssembleOptions& opts = {});

}  // namespace fkpp
