#include "fkpp/model.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "fkpp/error.hpp"
#include "fkpp/specfun.hpp"

namespace fkpp {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Central difference weights and offsets (in units of h) for order k.
double central(const std::function<double(double)>& f, int k, double x, double h) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        acc += sign * binomial(k, j) * f(x + (0.5 * k - j) * h);
    }
    return acc / std::pow(h, k);
}

double central2(const std::function<double(double, double)>& f, int k, int l, double x, double y,
                double h) {
    double acc = 0.0;
    for (int i = 0; i <= k; ++i) {
        const double si = ((i % 2 == 0) ? 1.0 : -1.0) * binomial(k, i);
        for (int j = 0; j <= l; ++j) {
            const double sj = ((j % 2 == 0) ? 1.0 : -1.0) * binomial(l, j);
            acc += si * sj * f(x + (0.5 * k - i) * h, y + (0.5 * l - j) * h);
        }
    }
    return acc / std::pow(h, k + l);
}

// m-th derivative of amp * exp(-((z - shift)/gamma)^2).
double gaussian_dz(const coef::Gaussian& g, int m, double z) {
    const double u = (z - g.shift) / g.gamma;
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    return g.amp * sign * std::pow(g.gamma, -m) * specfun::hermite_poly(m, u) * std::exp(-u * u);
}

double cosine_gaussian_dz(const coef::CosineGaussian& g, int m, double z) {
    const coef::Gaussian env{1.0, g.gamma, 0.0};
    double acc = 0.0;
    for (int j = 0; j <= m; ++j) {
        const double trig = std::pow(g.omega, j) * std::cos(g.omega * z + j * std::numbers::pi / 2);
        acc += binomial(m, j) * trig * gaussian_dz(env, m - j, z);
    }
    return g.amp * acc;
}

// Central differences have even error expansions: one level removes h^2,
// a second removes h^4.
template <class Stencil>
double richardson(Stencil&& d, double h, bool two_levels) {
    const double d1 = d(h), d2 = d(0.5 * h);
    const double r1 = (4.0 * d2 - d1) / 3.0;
    if (!two_levels) return r1;
    const double r2 = (4.0 * d(0.25 * h) - d2) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

void check_order(int order, int k_max, const char* what) {
    require(order >= 0, ErrorKind::InvalidArgument, std::string(what) + ": negative derivative order");
    if (order > k_max) {
        fail(ErrorKind::OrderExceeded, std::string(what) + ": derivative order " + std::to_string(order) +
                                           " exceeds K_max " + std::to_string(k_max));
    }
}

}  // namespace

double fd_step(int k, double x) {
    const double scale = 1.0 + std::abs(x);
    if (k <= 1) return std::max(1e-6, 1e-4 * scale);
    return scale * std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (k + 6));
}

double fd_derivative(const std::function<double(double)>& f, int k, double x) {
    if (k == 0) return f(x);
    const double h = fd_step(k, x);
    return richardson([&](double s) { return central(f, k, x, s); }, h, k >= 2);
}

double fd_mixed(const std::function<double(double, double)>& f, int k, int l, double x, double y) {
    if (k == 0 && l == 0) return f(x, y);
    const double h = fd_step(k + l, std::max(std::abs(x), std::abs(y)));
    return richardson([&](double s) { return central2(f, k, l, x, y, s); }, h, k + l >= 2);
}

double ScalarCoefficient::value(double x, double t) const { return dx(0, x, t); }

double ScalarCoefficient::dx(int k, double x, double t) const {
    require(k >= 0, ErrorKind::InvalidArgument, "negative derivative order");
    return std::visit(overloaded{
                          [&](const coef::Constant& c) { return k == 0 ? c.value : 0.0; },
                          [&](const coef::Polynomial& p) {
                              double acc = 0.0;
                              for (int i = static_cast<int>(p.c.size()) - 1; i >= k; --i) {
                                  double falling = 1.0;
                                  for (int j = 0; j < k; ++j) falling *= (i - j);
                                  acc = acc * x + p.c[static_cast<std::size_t>(i)] * falling;
                              }
                              return acc;
                          },
                          [&](const coef::ScalarCallback& cb) {
                              return fd_derivative([&](double s) { return cb.f(s, t); }, k, x);
                          },
                      },
                      family_);
}

bool ScalarCoefficient::is_zero() const {
    if (auto c = std::get_if<coef::Constant>(&family_)) return c->value == 0.0;
    if (auto p = std::get_if<coef::Polynomial>(&family_)) {
        for (double v : p->c) {
            if (v != 0.0) return false;
        }
        return true;
    }
    return false;
}

bool ScalarCoefficient::is_constant() const {
    if (std::holds_alternative<coef::Constant>(family_)) return true;
    if (auto p = std::get_if<coef::Polynomial>(&family_)) {
        for (std::size_t i = 1; i < p->c.size(); ++i) {
            if (p->c[i] != 0.0) return false;
        }
        return true;
    }
    return false;
}

double KernelCoefficient::value(double x, double y, double t) const { return partial(0, 0, x, y, t); }

double KernelCoefficient::partial(int k, int l, double x, double y, double t) const {
    require(k >= 0 && l >= 0, ErrorKind::InvalidArgument, "negative derivative order");
    const double ysign = (l % 2 == 0) ? 1.0 : -1.0;
    return std::visit(overloaded{
                          [&](const coef::Constant& c) { return (k == 0 && l == 0) ? c.value : 0.0; },
                          [&](const coef::Gaussian& g) { return ysign * gaussian_dz(g, k + l, x - y); },
                          [&](const coef::CosineGaussian& g) {
                              return ysign * cosine_gaussian_dz(g, k + l, x - y);
                          },
                          [&](const coef::KernelCallback& cb) {
                              return fd_mixed([&](double p, double q) { return cb.f(p, q, t); }, k, l, x, y);
                          },
                      },
                      family_);
}

bool KernelCoefficient::is_zero() const {
    if (auto c = std::get_if<coef::Constant>(&family_)) return c->value == 0.0;
    if (auto g = std::get_if<coef::Gaussian>(&family_)) return g->amp == 0.0;
    if (auto g = std::get_if<coef::CosineGaussian>(&family_)) return g->amp == 0.0;
    return false;
}

bool KernelCoefficient::time_dependent() const {
    if (auto cb = std::get_if<coef::KernelCallback>(&family_)) return cb->time_dependent;
    return false;
}

bool KernelCoefficient::translation_invariant() const {
    return !std::holds_alternative<coef::KernelCallback>(family_);
}

double KernelCoefficient::integral() const {
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    return std::visit(overloaded{
                          [&](const coef::Constant& c) {
                              require(c.value == 0.0, ErrorKind::InvalidArgument,
                                      "constant kernel is not integrable");
                              return 0.0;
                          },
                          [&](const coef::Gaussian& g) { return g.amp * g.gamma * sqrt_pi; },
                          [&](const coef::CosineGaussian& g) {
                              return g.amp * g.gamma * sqrt_pi *
                                     std::exp(-g.omega * g.omega * g.gamma * g.gamma / 4.0);
                          },
                          [&](const coef::KernelCallback&) -> double {
                              fail(ErrorKind::InvalidArgument,
                                   "kernel integral needs a built-in translation-invariant family");
                          },
                      },
                      family_);
}

void ModelSpec::validate() const {
    require(std::isfinite(D) && D > 0.0, ErrorKind::InvalidArgument, "D must be positive");
    require(std::isfinite(kappa) && kappa >= 0.0, ErrorKind::InvalidArgument, "kappa must be nonnegative");
    require(k_max >= 0, ErrorKind::InvalidArgument, "K_max must be nonnegative");
    if (auto g = std::get_if<coef::Gaussian>(&b.family())) {
        require(g->gamma > 0.0, ErrorKind::InvalidArgument, "kernel b: gamma must be positive");
    }
    if (auto g = std::get_if<coef::Gaussian>(&W.family())) {
        require(g->gamma > 0.0, ErrorKind::InvalidArgument, "kernel W: gamma must be positive");
    }
    if (auto g = std::get_if<coef::CosineGaussian>(&b.family())) {
        require(g->gamma > 0.0, ErrorKind::InvalidArgument, "kernel b: gamma must be positive");
    }
    if (auto g = std::get_if<coef::CosineGaussian>(&W.family())) {
        require(g->gamma > 0.0, ErrorKind::InvalidArgument, "kernel W: gamma must be positive");
    }
}

double ModelSpec::taylor_a(int k, double t, double X) const {
    if (!a.is_zero()) check_order(k, k_max, "a");
    return a.dx(k, X, t);
}

double ModelSpec::taylor_b(int k, int l, double t, double X) const {
    if (b.is_zero()) return 0.0;
    check_order(k + l, k_max, "b");
    return b.partial(k, l, X, X, t);
}

double ModelSpec::taylor_V(int k, double t, double X) const {
    if (V.is_zero()) return 0.0;
    check_order(k + 1, k_max, "V");
    return V.dx(k + 1, X, t);
}

double ModelSpec::taylor_W(int k, int l, double t, double X) const {
    if (W.is_zero()) return 0.0;
    check_order(k + 1 + l, k_max, "W");
    return W.partial(k + 1, l, X, X, t);
}

double ModelSpec::partial_kernel_y(KernelId which, int l, double x, double x_u, double t) const {
    if (which == KernelId::b) {
        if (b.is_zero()) return 0.0;
        check_order(l, k_max, "b");
        return b.partial(0, l, x, x_u, t);
    }
    if (W.is_zero()) return 0.0;
    check_order(l + 1, k_max, "W");
    return W.partial(1, l, x, x_u, t);
}

bool ModelSpec::is_special_case() const {
    if (!a.is_constant() || !V.is_zero() || !W.is_zero()) return false;
    if (auto g = std::get_if<coef::Gaussian>(&b.family())) return g->shift == 0.0;
    return b.translation_invariant();
}

}  // namespace fkpp
