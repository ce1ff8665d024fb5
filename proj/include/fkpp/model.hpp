#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

// Coefficient data of the nonlocal Fisher-KPP equation
//   u_t = D u_xx + a u - d/dx[ V_x u + k u \int W_x(x,y) u(y) dy ] - k u \int b(x,y) u(y) dy
// and the Taylor coefficients extracted from it.
namespace fkpp {

namespace coef {

struct Constant {
    double value = 0.0;
};

/// c[0] + c[1] x + c[2] x^2 + ...
struct Polynomial {
    std::vector<double> c;
};

struct ScalarCallback {
    std::function<double(double x, double t)> f;
};

/// amp * exp(-(x - y - shift)^2 / gamma^2)
struct Gaussian {
    double amp = 1.0;
    double gamma = 1.0;
    double shift = 0.0;
};

/// amp * cos(omega (x - y)) * exp(-(x - y)^2 / gamma^2)
struct CosineGaussian {
    double amp = 1.0;
    double gamma = 1.0;
    double omega = 1.0;
};

struct KernelCallback {
    std::function<double(double x, double y, double t)> f;
    bool time_dependent = true;
};

}  // namespace coef

/// a(x,t) or V(x,t).
class ScalarCoefficient {
public:
    using Family = std::variant<coef::Constant, coef::Polynomial, coef::ScalarCallback>;

    ScalarCoefficient() : family_(coef::Constant{0.0}) {}
    ScalarCoefficient(Family f) : family_(std::move(f)) {}  // NOLINT

    static ScalarCoefficient constant(double c) { return {coef::Constant{c}}; }
    static ScalarCoefficient polynomial(std::vector<double> c) { return {coef::Polynomial{std::move(c)}}; }
    static ScalarCoefficient callback(std::function<double(double, double)> f) {
        return {coef::ScalarCallback{std::move(f)}};
    }

    double value(double x, double t) const;
    /// k-th x-derivative; analytic for built-ins, Richardson-refined central
    /// differences for callbacks.
    double dx(int k, double x, double t) const;

    bool analytic() const { return !std::holds_alternative<coef::ScalarCallback>(family_); }
    bool is_zero() const;
    bool is_constant() const;
    const Family& family() const { return family_; }

private:
    Family family_;
};

/// b(x,y,t) or W(x,y,t).
class KernelCoefficient {
public:
    using Family = std::variant<coef::Constant, coef::Gaussian, coef::CosineGaussian, coef::KernelCallback>;

    KernelCoefficient() : family_(coef::Constant{0.0}) {}
    KernelCoefficient(Family f) : family_(std::move(f)) {}  // NOLINT

    static KernelCoefficient zero() { return {coef::Constant{0.0}}; }
    static KernelCoefficient constant(double c) { return {coef::Constant{c}}; }
    static KernelCoefficient gaussian(double amp, double gamma, double shift = 0.0) {
        return {coef::Gaussian{amp, gamma, shift}};
    }
    static KernelCoefficient cosine_gaussian(double amp, double gamma, double omega) {
        return {coef::CosineGaussian{amp, gamma, omega}};
    }
    static KernelCoefficient callback(std::function<double(double, double, double)> f,
                                      bool time_dependent = true) {
        return {coef::KernelCallback{std::move(f), time_dependent}};
    }

    double value(double x, double y, double t) const;
    /// d^{k+l} / dx^k dy^l.
    double partial(int k, int l, double x, double y, double t) const;

    bool analytic() const { return !std::holds_alternative<coef::KernelCallback>(family_); }
    bool is_zero() const;
    bool time_dependent() const;
    /// Depends on x - y only.
    bool translation_invariant() const;
    /// \int b(x,y) dy for translation-invariant built-ins.
    double integral() const;
    const Family& family() const { return family_; }

private:
    Family family_;
};

enum class KernelId { b, W };

struct ModelSpec {
    double D = 0.01;
    double kappa = 1.0;
    ScalarCoefficient a = ScalarCoefficient::constant(1.0);
    KernelCoefficient b = KernelCoefficient::gaussian(1.0, 1.0);
    ScalarCoefficient V;
    KernelCoefficient W;
    int k_max = 6;

    /// Throws InvalidArgument. kappa = 0 is accepted for degenerate checks.
    void validate() const;

    double taylor_a(int k, double t, double X) const;
    double taylor_b(int k, int l, double t, double X) const;
    /// k-th x-derivative of V_x, i.e. order k+1 of V.
    double taylor_V(int k, double t, double X) const;
    /// d^{k+l}/dx^k dy^l of W_x, i.e. order (k+1, l) of W.
    double taylor_W(int k, int l, double t, double X) const;
    /// l-th y-derivative at y = x_u of b, or of W_x, as a function of x.
    double partial_kernel_y(KernelId which, int l, double x, double x_u, double t) const;

    /// a constant, V = W = 0, b symmetric and translation invariant.
    bool is_special_case() const;
};

/// Central finite difference of order k; one Richardson step for k <= 1, two
/// for higher orders.
double fd_derivative(const std::function<double(double)>& f, int k, double x);
/// Tensor-product mixed partial d^{k+l}/dx^k dy^l, refined as fd_derivative.
double fd_mixed(const std::function<double(double, double)>& f, int k, int l, double x, double y);
/// Step rule for derivative order k: max(1e-6, 1e-4 (1+|x|)) for k <= 1,
/// (1+|x|) eps^{1/(k+6)} above.
double fd_step(int k, double x);

}  // namespace fkpp
