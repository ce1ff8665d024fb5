#pragma once

#include <vector>

#include "fkpp/field.hpp"
#include "fkpp/model.hpp"
#include "fkpp/ode.hpp"

// Order-M Einstein-Ehrenfest moment system: mass sigma, center x and
// central moments alpha^(2..M).
namespace fkpp {

inline constexpr int kMaxEEOrder = 5;

struct MomentState {
    int M = 2;
    double sigma = 1.0;
    double x = 0.0;
    std::vector<double> alpha;  // alpha^(2), ..., alpha^(M)

    static MomentState make(int M, double sigma, double x, std::vector<double> alpha = {});

    /// alpha^(k) with alpha^(0) = 1, alpha^(1) = 0 and 0 beyond M.
    double moment(int k) const;
    double alpha2() const { return moment(2); }
    void validate() const;

    std::vector<double> pack() const;
    static MomentState unpack(int M, const std::vector<double>& y);
};

/// Moments by composite quadrature on the field grid. Requires positive mass;
/// sign changes inside the field are allowed (excited coherent states).
MomentState moments_of_field(const Field& f, int M);

/// (sigma', x', alpha'^(2..M)). A monomial alpha^(k1)...alpha^(ks) is kept
/// iff k1 + ... + ks <= M; moments above M are 0.
std::vector<double> ee_rhs(const MomentState& s, double t, const ModelSpec& model);

class EETrajectory {
public:
    EETrajectory() = default;
    EETrajectory(int M, ModelSpec model, ode::DenseOutput dense);

    int order() const { return M_; }
    const ModelSpec& model() const { return model_; }
    const ode::DenseOutput& dense() const { return dense_; }
    double t_begin() const { return dense_.t_front(); }
    double t_end() const { return dense_.t_back(); }
    bool covers(double t) const { return dense_.covers(t); }

    MomentState at(double t) const;
    /// Right-hand side re-evaluated at the interpolated state.
    std::vector<double> rate(double t) const;
    double sigma_dot_over_sigma(double t) const;

private:
    int M_ = 2;
    ModelSpec model_;
    ode::DenseOutput dense_;
};

/// Throws NumericFailure (with the reached time) when sigma leaves (0, inf)
/// before t1.
EETrajectory integrate_ee(const MomentState& s0, double t0, double t1, const ModelSpec& model,
                          const ode::Tolerances& tol = {});

/// a const, V = W = 0, b(x - y) symmetric.
struct SpecialCaseParams {
    double a = 1.0;
    double kappa = 1.0;
    double b0 = 1.0;    // b(0)
    double beta = 0.0;  // b''(0)
    double D = 0.01;
    double sigma0 = 1.0;
    double x0 = 0.0;
    double alpha2_0 = 0.0;

    static SpecialCaseParams from(const ModelSpec& model, const MomentState& s0);
};

MomentState closed_form_m2(const SpecialCaseParams& p, double t);

/// Cauchy-form constants: the initial moment state of phi.
MomentState match_constants(const Field& phi, int M);

}  // namespace fkpp
