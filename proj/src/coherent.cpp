#include "fkpp/coherent.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fkpp/error.hpp"
#include "fkpp/linearized.hpp"
#include "fkpp/specfun.hpp"

namespace fkpp {
namespace {

using specfun::Complex;

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

void check_index(int n) {
    require(n >= 0, ErrorKind::InvalidArgument, "state index must be nonnegative");
    if (n > kMaxExcitation) {
        fail(ErrorKind::OrderExceeded, "state index " + std::to_string(n) + " exceeds cap 50");
    }
}

}  // namespace

CoherentState::CoherentState(EETrajectory traj, GermState germ) : traj_(std::move(traj)), germ_(std::move(germ)) {
    require(std::abs(traj_.t_begin() - germ_.t_begin()) <= 1e-12 * std::max(1.0, std::abs(traj_.t_begin())),
            ErrorKind::InvalidArgument, "germ and trajectory start at different times");
}

double CoherentState::normalizer() const { return std::pow(b() / (std::numbers::pi * D()), 0.25); }

void CoherentState::check_time(double t) const {
    if (!germ_.covers(t) || !traj_.covers(t)) {
        fail(ErrorKind::OutOfWindow,
             "time " + std::to_string(t) + " outside the validity window" +
                 (germ_.end_reason().empty() ? std::string() : " (" + germ_.end_reason() + ")"),
             t);
    }
}

double CoherentState::vacuum(double x, double t) const {
    check_time(t);
    const double wm = germ_.Wm(t);
    const double zm = germ_.Zm(t);
    if (zm == 0.0) fail(ErrorKind::FocalPoint, "Zm = 0", t);
    if (!(wm * zm < 0.0)) fail(ErrorKind::SignCondition, "Wm Zm < 0 violated", t);
    // Mass ratio outside the root: the phase factor is sqrt|W/(bZ)|, the
    // action factor sigma(t)/sigma(0).
    const double mass = traj_.at(t).sigma / traj_.at(traj_.t_begin()).sigma;
    const double dx = x - center(t);
    return normalizer() * mass * std::sqrt(-wm / (b() * zm)) * std::exp(wm * dx * dx / (2.0 * D() * zm));
}

double CoherentState::hermite_factor(int n, bool dual, double dx, double t) const {
    if (n == 0) return 1.0;
    const double zm = germ_.Zm(t);
    const double zp = germ_.Zp(t);
    const double y = std::sqrt(b() / D()) * dx;
    if (zp == 0.0) {
        if (dual) fail(ErrorKind::FocalPoint, "Zp = 0: focal point of the plus branch", t);
        // limit of (Zp/Zm)^{n/2} H_n(y / sqrt(Zm Zp)): only the leading power survives
        return std::pow(2.0 * y / zm, n);
    }
    // One square root of Zp on both factors keeps every term a real power Zp^m.
    const Complex sp = std::sqrt(Complex(zp, 0.0));
    const Complex sm(std::sqrt(zm), 0.0);
    const Complex pre = dual ? std::pow(sm / sp, n) : std::pow(sp / sm, n);
    const Complex val = pre * specfun::hermite_poly(n, y / (sm * sp));
    if (std::abs(val.imag()) > 1e-10 * std::max(std::abs(val), 1e-300)) {
        fail(ErrorKind::NumericFailure, "coherent state picked up an imaginary part", t);
    }
    return val.real();
}

double CoherentState::state(int n, double x, double t) const {
    check_index(n);
    const double v0 = vacuum(x, t);
    if (n == 0) return v0;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign / std::sqrt(std::pow(2.0, n) * factorial(n)) * hermite_factor(n, false, x - center(t), t) * v0;
}

double CoherentState::dual_state(int n, double x, double t) const {
    check_index(n);
    check_time(t);
    const double wm = germ_.Wm(t);
    const double wp = germ_.Wp(t);
    const double zp = germ_.Zp(t);
    if (!(zp > 0.0)) {
        fail(ErrorKind::FocalPoint, "dual states need Zp > 0 (plus branch focal or past it)", t);
    }
    const double dx = x - center(t);
    const double sigma_ratio = traj_.at(traj_.t_begin()).sigma / traj_.at(t).sigma;
    const double w0 = normalizer() * sigma_ratio * std::sqrt(-b() / (wm * zp)) *
                      std::exp(-wp * dx * dx / (2.0 * D() * zp));
    if (n == 0) return w0;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign / std::sqrt(std::pow(2.0, n) * factorial(n)) * hermite_factor(n, true, dx, t) * w0;
}

Field CoherentState::sample_state(int n, const FieldGrid& grid, double t) const {
    return Field::sample(grid, [&](double x) { return state(n, x, t); });
}

Field CoherentState::sample_dual(int n, const FieldGrid& grid, double t) const {
    return Field::sample(grid, [&](double x) { return dual_state(n, x, t); });
}

Field CoherentState::annihilate(const Field& v, double t) const {
    check_time(t);
    const double c = -1.0 / std::sqrt(2.0 * b() * D());
    const double zm = germ_.Zm(t);
    const double wm = germ_.Wm(t);
    const double X = center(t);
    const Field vx = grid_dx(v);
    Field out = Field::zeros(v.grid);
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.values[i] = c * (zm * D() * vx.values[i] - wm * (v.grid.x(i) - X) * v.values[i]);
    }
    return out;
}

Field CoherentState::create(const Field& v, double t) const {
    check_time(t);
    const double c = 1.0 / std::sqrt(2.0 * b() * D());
    const double zp = germ_.Zp(t);
    const double wp = germ_.Wp(t);
    const double X = center(t);
    const Field vx = grid_dx(v);
    Field out = Field::zeros(v.grid);
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.values[i] = c * (zp * D() * vx.values[i] - wp * (v.grid.x(i) - X) * v.values[i]);
    }
    return out;
}

MomentState initial_moment_constants(int n, double D, double b, double x0) {
    require(n >= 0, ErrorKind::InvalidArgument, "state index must be nonnegative");
    require(D > 0.0 && b > 0.0, ErrorKind::InvalidArgument, "D and b must be positive");
    if (n % 2 != 0) {
        fail(ErrorKind::InvalidArgument,
             "odd state " + std::to_string(n) + " carries zero mass (sigma_{2l+1} = 0); no moment normalization");
    }
    const int l = n / 2;
    const double sigma =
        std::pow(4.0 * std::numbers::pi * D / b, 0.25) * std::sqrt(factorial(2 * l)) / (std::pow(2.0, l) * factorial(l));
    return MomentState::make(2, sigma, x0, {D * (1.0 + 4.0 * l) / b});
}

AsymptoticSolution::AsymptoticSolution(int n, std::optional<CoherentState> state) : n_(n), state_(std::move(state)) {}

const CoherentState& AsymptoticSolution::coherent() const {
    require(state_.has_value(), ErrorKind::InvalidArgument, "odd solution is the zero function");
    return *state_;
}

double AsymptoticSolution::operator()(double x, double t) const {
    if (!state_) return 0.0;
    return state_->state(n_, x, t);
}

Field AsymptoticSolution::sample(const FieldGrid& grid, double t) const {
    return Field::sample(grid, [&](double x) { return (*this)(x, t); });
}

AsymptoticSolution assemble_solution(int n, const ModelSpec& model, double t0, double t1,
                                     const AssembleOptions& opts) {
    check_index(n);
    if (n % 2 != 0) {
        if (opts.allow_odd) return AsymptoticSolution(n, std::nullopt);
        fail(ErrorKind::InvalidArgument, "odd solutions vanish identically; set allow_odd to obtain the zero function");
    }
    auto s0 = initial_moment_constants(n, model.D, opts.germ_b, opts.x0);
    if (opts.M > 2) s0 = MomentState::make(opts.M, s0.sigma, s0.x, s0.alpha);
    auto joint = integrate_joint(s0, model, opts.germ_b, t0, t1, opts.tol);
    return AsymptoticSolution(n, CoherentState(std::move(joint.traj), std::move(joint.germ)));
}

}  // namespace fkpp
