#include "fkpp/germ.hpp"

#include <cmath>
#include <string>

#include "fkpp/error.hpp"

namespace fkpp {
namespace {

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

void variations_rhs(double lx, const double* y, double* dy) {
    dy[0] = -lx * y[0];
    dy[1] = -2.0 * y[0] + lx * y[1];
    dy[2] = -lx * y[2];
    dy[3] = -2.0 * y[2] + lx * y[3];
}

ode::State germ_initial(double b) { return {-b, 1.0, b, 1.0}; }

bool sign_condition(const double* y) { return y[0] * y[1] < 0.0; }

double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

ode::DenseOutput slice(const ode::DenseOutput& d, std::size_t first, std::size_t count) {
    ode::DenseOutput out;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto& y = d.state(i);
        const auto& f = d.slope(i);
        out.push(d.times()[i], ode::State(y.begin() + first, y.begin() + first + count),
                 ode::State(f.begin() + first, f.begin() + first + count));
    }
    return out;
}

struct Scan {
    double valid_end;
    std::string reason;
    std::vector<double> plus_focal;
};

// Post-processes the stored germ nodes: window end and Zp zero crossings.
Scan scan(const ode::DenseOutput& g, bool stopped) {
    Scan s{g.t_back(), "", {}};
    const auto& ts = g.times();
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const double z0 = g.state(i)[3];
        const double z1 = g.state(i + 1)[3];
        if (z0 != 0.0 && (z0 < 0.0) != (z1 < 0.0)) {
            s.plus_focal.push_back(bisect([&](double t) { return g.component(3, t); }, ts[i], ts[i + 1]));
        }
    }
    if (stopped && g.size() >= 2) {
        const auto& last = g.state(g.size() - 1);
        if (!sign_condition(last.data())) {
            const std::size_t i = g.size() - 2;
            s.valid_end = bisect(
                [&](double t) {
                    const auto y = g.at(t);
                    return y[0] * y[1] < 0.0 ? -1.0 : 1.0;
                },
                ts[i], ts[i + 1]);
            s.valid_end = std::min(s.valid_end, ts[i + 1]);
            s.reason = last[1] == 0.0 ? "focal point: Zm = 0" : "sign condition Wm Zm < 0 violated";
        }
    }
    return s;
}

void check_skew(const GermState& g, double skew_rel) {
    const auto& d = g.dense();
    const double limit = skew_rel * 2.0 * g.b();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto& y = d.state(i);
        const double drift = std::abs(y[2] * y[1] - y[3] * y[0] - 2.0 * g.b());
        if (drift > limit) {
            fail(ErrorKind::NumericFailure, "skew product drifted by " + std::to_string(drift), d.times()[i]);
        }
    }
}

}  // namespace

GermState::GermState(double b, ode::DenseOutput dense, double valid_end, std::string end_reason,
                     std::vector<double> plus_focal_times)
    : b_(b),
      dense_(std::move(dense)),
      valid_end_(valid_end),
      end_reason_(std::move(end_reason)),
      plus_focal_(std::move(plus_focal_times)) {}

bool GermState::covers(double t) const {
    if (dense_.empty()) return false;
    const double slack = 1e-12 * std::max(1.0, std::abs(valid_end_));
    return t >= dense_.t_front() - slack && t <= valid_end_ + slack;
}

double GermState::component(std::size_t c, double t) const {
    if (!covers(t)) {
        fail(ErrorKind::OutOfWindow,
             "time " + std::to_string(t) + " outside germ validity window" +
                 (end_reason_.empty() ? std::string() : " (" + end_reason_ + ")"),
             t);
    }
    return dense_.component(c, std::min(t, dense_.t_back()));
}

double GermState::skew(double t) const { return Wp(t) * Zm(t) - Zp(t) * Wm(t); }

double GermState::max_skew_drift() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dense_.size(); ++i) {
        const auto& y = dense_.state(i);
        worst = std::max(worst, std::abs(y[2] * y[1] - y[3] * y[0] - 2.0 * b_));
    }
    return worst;
}

double lambda_x_of_state(const MomentState& s, double t, const ModelSpec& model) {
    double sum = 0.0;
    if (!model.W.is_zero()) {
        for (int l = 0; l <= s.M; ++l) {
            const double m = s.moment(l);
            if (m != 0.0) sum += model.taylor_W(1, l, t, s.x) * m / factorial(l);
        }
    }
    return model.taylor_V(1, t, s.x) + model.kappa * s.sigma * sum;
}

double lambda_x_on_trajectory(double t, const EETrajectory& traj) {
    return lambda_x_of_state(traj.at(t), t, traj.model());
}

GermState integrate_variations(const LambdaX& lambda_x, double b, double t0, double t1,
                               const ode::Tolerances& tol, double skew_rel) {
    require(b > 0.0, ErrorKind::InvalidArgument, "germ parameter b must be positive");
    auto rhs = [&](const ode::State& y, ode::State& dy, double t) {
        dy.resize(4);
        variations_rhs(lambda_x(t), y.data(), dy.data());
    };
    auto accept = [](double, const ode::State& y) { return sign_condition(y.data()); };
    auto result = ode::integrate(rhs, germ_initial(b), t0, t1, tol, accept);
    if (result.non_finite) fail(ErrorKind::NumericFailure, "non-finite germ state", result.t_reached);
    auto sc = scan(result.dense, !result.completed);
    GermState g(b, std::move(result.dense), sc.valid_end, sc.reason, sc.plus_focal);
    check_skew(g, skew_rel);
    return g;
}

GermState integrate_variations(const EETrajectory& traj, double b, double t0, double t1,
                               const ode::Tolerances& tol, double skew_rel) {
    require(traj.covers(t0) && traj.covers(t1), ErrorKind::OutOfWindow,
            "germ span must lie inside the EE trajectory window");
    return integrate_variations([&](double t) { return lambda_x_on_trajectory(t, traj); }, b, t0, t1, tol,
                                skew_rel);
}

JointSolution integrate_joint(const MomentState& s0, const ModelSpec& model, double b, double t0, double t1,
                              const ode::Tolerances& tol, double skew_rel) {
    s0.validate();
    model.validate();
    require(b > 0.0, ErrorKind::InvalidArgument, "germ parameter b must be positive");
    const int M = s0.M;
    const std::size_t ne = static_cast<std::size_t>(M + 1);
    auto rhs = [&](const ode::State& y, ode::State& dy, double t) {
        const auto s = MomentState::unpack(M, y);
        auto f = ee_rhs(s, t, model);
        dy.assign(ne + 4, 0.0);
        std::copy(f.begin(), f.end(), dy.begin());
        variations_rhs(lambda_x_of_state(s, t, model), y.data() + ne, dy.data() + ne);
    };
    auto accept = [&](double, const ode::State& y) {
        return y[0] > 0.0 && y[0] < 1e100 && sign_condition(y.data() + ne);
    };
    ode::State y0 = s0.pack();
    const auto g0 = germ_initial(b);
    y0.insert(y0.end(), g0.begin(), g0.end());
    auto result = ode::integrate(rhs, y0, t0, t1, tol, accept);
    if (result.non_finite) fail(ErrorKind::NumericFailure, "non-finite joint state", result.t_reached);
    const auto& last = result.dense.state(result.dense.size() - 1);
    if (!result.completed && !(last[0] > 0.0 && last[0] < 1e100)) {
        fail(ErrorKind::NumericFailure,
             "EE integration stopped: sigma left (0, inf) at t=" + std::to_string(result.t_reached),
             result.t_reached);
    }
    auto gdense = slice(result.dense, ne, 4);
    auto sc = scan(gdense, !result.completed);
    JointSolution out{EETrajectory(M, model, slice(result.dense, 0, ne)),
                      GermState(b, std::move(gdense), sc.valid_end, sc.reason, sc.plus_focal)};
    check_skew(out.germ, skew_rel);
    return out;
}

double q_ratio(const GermState& g, double t) {
    const double z = g.Zm(t);
    if (z == 0.0) fail(ErrorKind::FocalPoint, "Zm = 0: focal point", t);
    return g.Wm(t) / z;
}

double action_and_mass_factor(const EETrajectory& traj, double t) {
    return traj.at(t).sigma / traj.at(traj.t_begin()).sigma;
}

double phase_factor(const GermState& g, double t, Branch branch) {
    const double t0 = g.t_begin();
    const double zt = g.Z(branch, t);
    const double w0 = g.W(branch, t0);
    if (zt == 0.0 || w0 == 0.0) fail(ErrorKind::FocalPoint, "phase factor at a focal point", t);
    if (branch == Branch::Plus) {
        for (double tf : g.plus_focal_times()) {
            if (std::abs(tf - t) < 1e-12 * std::max(1.0, std::abs(t))) {
                fail(ErrorKind::FocalPoint, "phase factor at a focal point of the plus branch", t);
            }
        }
    }
    return std::sqrt(std::abs(g.Z(branch, t0) * g.W(branch, t) / (zt * w0)));
}

}  // namespace fkpp
