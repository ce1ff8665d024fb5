#include "fkpp/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "fkpp/error.hpp"

namespace fkpp::ode {
namespace {

struct StopRequested {};
struct NonFiniteState {};

bool finite(const State& y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

void DenseOutput::push(double t, State y, State slope) {
    require(times_.empty() || t > times_.back(), ErrorKind::InvalidArgument,
            "dense output nodes must be strictly increasing");
    times_.push_back(t);
    states_.push_back(std::move(y));
    slopes_.push_back(std::move(slope));
}

bool DenseOutput::covers(double t) const {
    if (times_.empty()) return false;
    const double slack = 1e-12 * std::max(1.0, std::abs(times_.back()));
    return t >= times_.front() - slack && t <= times_.back() + slack;
}

std::size_t DenseOutput::segment(double t) const {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t i = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
    return std::min(i, times_.size() - 2);
}

State DenseOutput::at(double t) const {
    require(covers(t), ErrorKind::OutOfWindow, "time " + std::to_string(t) + " outside dense output");
    if (times_.size() == 1) return states_.front();
    const std::size_t i = segment(t);
    const double h = times_[i + 1] - times_[i];
    const double s = std::clamp((t - times_[i]) / h, 0.0, 1.0);
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    State y(states_[i].size());
    for (std::size_t c = 0; c < y.size(); ++c) {
        y[c] = h00 * states_[i][c] + h * h10 * slopes_[i][c] + h01 * states_[i + 1][c] +
               h * h11 * slopes_[i + 1][c];
    }
    return y;
}

State DenseOutput::slope_at(double t) const {
    require(covers(t), ErrorKind::OutOfWindow, "time " + std::to_string(t) + " outside dense output");
    if (times_.size() == 1) return slopes_.front();
    const std::size_t i = segment(t);
    const double h = times_[i + 1] - times_[i];
    const double s = std::clamp((t - times_[i]) / h, 0.0, 1.0);
    const double d00 = 6 * s * s - 6 * s;
    const double d10 = 3 * s * s - 4 * s + 1;
    const double d01 = -6 * s * s + 6 * s;
    const double d11 = 3 * s * s - 2 * s;
    State dy(states_[i].size());
    for (std::size_t c = 0; c < dy.size(); ++c) {
        dy[c] = (d00 * states_[i][c] + d01 * states_[i + 1][c]) / h + d10 * slopes_[i][c] +
                d11 * slopes_[i + 1][c];
    }
    return dy;
}

double DenseOutput::component(std::size_t c, double t) const { return at(t)[c]; }

Result integrate(const Rhs& rhs, State y0, double t0, double t1, const Tolerances& tol,
                 const std::function<bool(double, const State&)>& accept) {
    namespace odeint = boost::numeric::odeint;
    require(t1 >= t0, ErrorKind::InvalidArgument, "integration interval must be ordered");
    require(finite(y0), ErrorKind::InvalidArgument, "non-finite initial state");

    Result result;
    auto record = [&](double t, const State& y) {
        State f(y.size());
        rhs(y, f, t);
        result.dense.push(t, y, std::move(f));
        result.t_reached = t;
    };

    if (accept && !accept(t0, y0)) {
        record(t0, y0);
        return result;
    }
    if (t1 == t0) {
        record(t0, y0);
        result.completed = true;
        return result;
    }

    auto system = [&](const State& y, State& dydt, double t) {
        if (!finite(y)) throw NonFiniteState{};
        rhs(y, dydt, t);
    };
    std::size_t steps = 0;
    auto observer = [&](const State& y, double t) {
        if (!finite(y)) throw NonFiniteState{};
        if (++steps > tol.max_steps) {
            fail(ErrorKind::NumericFailure, "step budget exhausted", t);
        }
        if (!result.dense.empty() && t <= result.dense.t_back()) return;
        const bool keep_going = !accept || accept(t, y);
        record(t, y);
        if (!keep_going) throw StopRequested{};
    };

    using Stepper = odeint::runge_kutta_dopri5<State>;
    const double dt0 = std::min(tol.initial_step, t1 - t0);
    try {
        if (tol.max_step > 0.0) {
            odeint::integrate_adaptive(odeint::make_controlled(tol.abs, tol.rel, tol.max_step, Stepper()),
                                       system, y0, t0, t1, dt0, observer);
        } else {
            odeint::integrate_adaptive(odeint::make_controlled(tol.abs, tol.rel, Stepper()), system, y0,
                                       t0, t1, dt0, observer);
        }
        result.completed = true;
    } catch (const StopRequested&) {
        result.completed = false;
    } catch (const NonFiniteState&) {
        result.completed = false;
        result.non_finite = true;
    }
    return result;
}

}  // namespace fkpp::ode
