#include "fkpp/ee.hpp"

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

void check_order(int M) {
    if (M < 2 || M > kMaxEEOrder) {
        fail(ErrorKind::InvalidArgument, "EE order M=" + std::to_string(M) + " outside [2, 5]");
    }
}

// Truncated monomials.
struct Monomials {
    const MomentState& s;
    double operator()(int k) const { return k <= s.M ? s.moment(k) : 0.0; }
    double operator()(int k1, int k2) const { return k1 + k2 <= s.M ? s.moment(k1) * s.moment(k2) : 0.0; }
    double operator()(int k1, int k2, int k3) const {
        return k1 + k2 + k3 <= s.M ? s.moment(k1) * s.moment(k2) * s.moment(k3) : 0.0;
    }
};

}  // namespace

MomentState MomentState::make(int M, double sigma, double x, std::vector<double> alpha) {
    check_order(M);
    alpha.resize(static_cast<std::size_t>(M - 1), 0.0);
    MomentState s{M, sigma, x, std::move(alpha)};
    s.validate();
    return s;
}

double MomentState::moment(int k) const {
    if (k == 0) return 1.0;
    if (k == 1 || k > M) return 0.0;
    return alpha[static_cast<std::size_t>(k - 2)];
}

void MomentState::validate() const {
    check_order(M);
    require(alpha.size() == static_cast<std::size_t>(M - 1), ErrorKind::InvalidArgument,
            "moment vector has wrong length");
    require(std::isfinite(sigma) && std::isfinite(x), ErrorKind::InvalidArgument, "non-finite moment state");
    require(sigma > 0.0, ErrorKind::InvalidArgument, "sigma must be positive");
    for (double a : alpha) require(std::isfinite(a), ErrorKind::InvalidArgument, "non-finite central moment");
    require(alpha[0] >= 0.0, ErrorKind::InvalidArgument, "alpha^(2) must be nonnegative");
}

std::vector<double> MomentState::pack() const {
    std::vector<double> y{sigma, x};
    y.insert(y.end(), alpha.begin(), alpha.end());
    return y;
}

MomentState MomentState::unpack(int M, const std::vector<double>& y) {
    MomentState s;
    s.M = M;
    s.sigma = y[0];
    s.x = y[1];
    s.alpha.assign(y.begin() + 2, y.begin() + 2 + (M - 1));
    return s;
}

MomentState moments_of_field(const Field& f, int M) {
    check_order(M);
    require(f.all_finite(), ErrorKind::InvalidArgument, "field contains non-finite values");
    const auto w = f.grid.weights();
    double mass = 0.0;
    double abs_mass = 0.0;
    double first = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        mass += w[i] * f.values[i];
        abs_mass += w[i] * std::abs(f.values[i]);
        first += w[i] * f.grid.x(i) * f.values[i];
    }
    if (!(mass > 1e-10 * abs_mass) || abs_mass == 0.0) {
        fail(ErrorKind::InvalidArgument, "nonpositive total mass (" + std::to_string(mass) + ")");
    }
    MomentState s;
    s.M = M;
    s.sigma = mass;
    s.x = first / mass;
    s.alpha.assign(static_cast<std::size_t>(M - 1), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double dx = f.grid.x(i) - s.x;
        double p = dx * dx;
        for (int k = 2; k <= M; ++k) {
            s.alpha[static_cast<std::size_t>(k - 2)] += w[i] * p * f.values[i];
            p *= dx;
        }
    }
    for (double& a : s.alpha) a /= mass;
    return s;
}

std::vector<double> ee_rhs(const MomentState& s, double t, const ModelSpec& model) {
    check_order(s.M);
    const int M = s.M;
    const double X = s.x;
    const double sk = s.sigma * model.kappa;
    const Monomials m{s};

    const auto n = static_cast<std::size_t>(M + 1);
    std::vector<double> ak(n), Vk(n);
    std::vector<std::vector<double>> bkl(n, std::vector<double>(n, 0.0)), Wkl = bkl;
    for (int k = 0; k <= M; ++k) {
        ak[k] = model.taylor_a(k, t, X) / factorial(k);
        Vk[k] = model.taylor_V(k, t, X) / factorial(k);
        for (int l = 0; k + l <= M; ++l) {
            bkl[k][l] = model.taylor_b(k, l, t, X) / (factorial(k) * factorial(l));
            Wkl[k][l] = model.taylor_W(k, l, t, X) / (factorial(k) * factorial(l));
        }
    }

    std::vector<double> out(static_cast<std::size_t>(M + 1), 0.0);

    double growth = 0.0;
    for (int k = 0; k <= M; ++k) {
        growth += ak[k] * m(k);
        for (int l = 0; k + l <= M; ++l) growth -= sk * bkl[k][l] * m(k, l);
    }
    out[0] = s.sigma * growth;

    double xdot = 0.0;
    for (int k = 0; k <= M; ++k) {
        xdot += ak[k] * m(k + 1);
        xdot += Vk[k] * m(k);
        for (int l = 0; k + l <= M; ++l) {
            xdot -= sk * bkl[k][l] * m(k + 1, l);
            xdot += sk * Wkl[k][l] * m(k, l);
        }
    }
    out[1] = xdot;

    for (int p = 2; p <= M; ++p) {
        double r = model.D * p * (p - 1) * m(p - 2);
        for (int k = 0; k <= M; ++k) {
            r += p * Vk[k] * (m(k + p - 1) - m(k, p - 1));
            r += ak[k] * (m(k + p) - m(k, p) - p * m(k + 1, p - 1));
            for (int l = 0; k + l <= M; ++l) {
                r += sk * p * Wkl[k][l] * (m(l, k + p - 1) - m(l, k, p - 1));
                r += sk * bkl[k][l] * (-m(l, p + k) + p * m(l, k + 1, p - 1) + m(l, k, p));
            }
        }
        out[static_cast<std::size_t>(p)] = r;
    }
    return out;
}

EETrajectory::EETrajectory(int M, ModelSpec model, ode::DenseOutput dense)
    : M_(M), model_(std::move(model)), dense_(std::move(dense)) {
    check_order(M);
    require(!dense_.empty(), ErrorKind::InvalidArgument, "empty trajectory");
}

MomentState EETrajectory::at(double t) const {
    if (!covers(t)) {
        fail(ErrorKind::OutOfWindow, "time " + std::to_string(t) + " outside EE trajectory [" +
                                         std::to_string(t_begin()) + ", " + std::to_string(t_end()) + "]");
    }
    return MomentState::unpack(M_, dense_.at(t));
}

std::vector<double> EETrajectory::rate(double t) const { return ee_rhs(at(t), t, model_); }

double EETrajectory::sigma_dot_over_sigma(double t) const {
    const auto s = at(t);
    return ee_rhs(s, t, model_)[0] / s.sigma;
}

EETrajectory integrate_ee(const MomentState& s0, double t0, double t1, const ModelSpec& model,
                          const ode::Tolerances& tol) {
    s0.validate();
    model.validate();
    const int M = s0.M;
    auto rhs = [&](const ode::State& y, ode::State& dy, double t) {
        dy = ee_rhs(MomentState::unpack(M, y), t, model);
    };
    auto accept = [](double, const ode::State& y) { return y[0] > 0.0 && std::abs(y[0]) < 1e100; };
    auto result = ode::integrate(rhs, s0.pack(), t0, t1, tol, accept);
    if (!result.completed) {
        fail(ErrorKind::NumericFailure,
             "EE integration stopped: sigma left (0, inf) at t=" + std::to_string(result.t_reached),
             result.t_reached);
    }
    return EETrajectory(M, model, std::move(result.dense));
}

SpecialCaseParams SpecialCaseParams::from(const ModelSpec& model, const MomentState& s0) {
    require(model.is_special_case(), ErrorKind::InvalidArgument,
            "closed form needs a const, V = W = 0 and a symmetric kernel b(x - y)");
    SpecialCaseParams p;
    p.a = model.a.value(0.0, 0.0);
    p.kappa = model.kappa;
    p.b0 = model.b.value(0.0, 0.0, 0.0);
    p.beta = model.b.partial(2, 0, 0.0, 0.0, 0.0);
    p.D = model.D;
    p.sigma0 = s0.sigma;
    p.x0 = s0.x;
    p.alpha2_0 = s0.alpha2();
    return p;
}

MomentState closed_form_m2(const SpecialCaseParams& p, double t) {
    require(p.a != 0.0, ErrorKind::InvalidArgument, "closed form is singular for a = 0");
    const double w = p.b0 + p.beta * (p.alpha2_0 - 2.0 * p.D / p.a);
    const double denom =
        std::exp(-p.a * t) * (p.a / p.sigma0 - p.kappa * w) + 2.0 * p.D * p.kappa * p.beta * t + p.kappa * w;
    MomentState s;
    s.M = 2;
    s.sigma = p.a / denom;
    s.x = p.x0;
    s.alpha = {2.0 * p.D * t + p.alpha2_0};
    return s;
}

MomentState match_constants(const Field& phi, int M) { return moments_of_field(phi, M); }

}  // namespace fkpp
