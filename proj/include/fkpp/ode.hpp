#pragma once

#include <cstddef>
#include <functional>
#include <vector>

// Thin adapter over boost::odeint's controlled Dormand-Prince 5(4) stepper
// plus the cubic-Hermite dense output every trajectory type in the library
// is built on.
namespace fkpp::ode {

using State = std::vector<double>;
using Rhs = std::function<void(const State& y, State& dydt, double t)>;

struct Tolerances {
    double abs = 1e-10;
    double rel = 1e-10;
    double max_step = 0.0;  // 0: unlimited
    double initial_step = 1e-3;
    std::size_t max_steps = 2'000'000;
};

/// Piecewise cubic Hermite interpolant through stored (t, y, y') nodes.
class DenseOutput {
public:
    void push(double t, State y, State slope);

    bool empty() const { return times_.empty(); }
    std::size_t size() const { return times_.size(); }
    double t_front() const { return times_.front(); }
    double t_back() const { return times_.back(); }
    const std::vector<double>& times() const { return times_; }
    const State& state(std::size_t i) const { return states_[i]; }
    const State& slope(std::size_t i) const { return slopes_[i]; }
    bool covers(double t) const;

    State at(double t) const;
    State slope_at(double t) const;
    double component(std::size_t c, double t) const;

private:
    std::size_t segment(double t) const;

    std::vector<double> times_;
    std::vector<State> states_;
    std::vector<State> slopes_;
};

struct Result {
    DenseOutput dense;
    bool completed = false;
    bool non_finite = false;
    double t_reached = 0.0;
};

/// Integrates y' = rhs(y, t) from t0 to t1 (t1 >= t0). `accept` sees every
/// accepted step, including t0; returning false ends the integration there.
/// Non-finite states end the integration with `non_finite` set.
Result integrate(const Rhs& rhs, State y0, double t0, double t1, const Tolerances& tol,
                 const std::function<bool(double, const State&)>& accept = {});

}  // namespace fkpp::ode
