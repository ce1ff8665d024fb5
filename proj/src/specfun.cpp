#include "fkpp/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fkpp/error.hpp"

namespace fkpp::specfun {
namespace {

void check_order(int n) {
    require(n >= 0, ErrorKind::InvalidArgument, "Hermite order must be nonnegative");
    require(n <= kMaxHermiteOrder, ErrorKind::OrderExceeded,
            "Hermite order " + std::to_string(n) + " exceeds cap " +
                std::to_string(kMaxHermiteOrder));
}

}  // namespace

Complex hermite_poly(int n, Complex z) {
    check_order(n);
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::InvalidArgument,
            "non-finite Hermite argument");
    Complex prev(1.0, 0.0);
    if (n == 0) return prev;
    Complex cur = 2.0 * z;
    for (int k = 1; k < n; ++k) {
        Complex next = 2.0 * z * cur - 2.0 * static_cast<double>(k) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double hermite_poly(int n, double x) {
    check_order(n);
    require(std::isfinite(x), ErrorKind::InvalidArgument, "non-finite Hermite argument");
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        double next = 2.0 * x * cur - 2.0 * k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double hermite_function(int n, double x) {
    check_order(n);
    require(std::isfinite(x), ErrorKind::InvalidArgument, "non-finite Hermite argument");
    // psi_{k+1} = sqrt(2/(k+1)) x psi_k - sqrt(k/(k+1)) psi_{k-1}
    double prev = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
    if (n == 0) return prev;
    double cur = std::sqrt(2.0) * x * prev;
    for (int k = 1; k < n; ++k) {
        double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(double(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double double_factorial_ratio(int l) {
    double r = 1.0;
    for (int j = l + 1; j <= 2 * l; ++j) r *= j;
    return r;
}

double gauss_hermite_I(int n) {
    check_order(n);
    if (n % 2 == 1) return 0.0;
    return std::sqrt(2.0 * std::numbers::pi) * double_factorial_ratio(n / 2);
}

double gauss_hermite_J(int n) {
    require(n >= 0, ErrorKind::InvalidArgument, "J_n order must be nonnegative");
    check_order(2 * n);
    return std::sqrt(2.0 * std::numbers::pi) * double_factorial_ratio(n) * (1.0 + 4.0 * n);
}

double gaussian_linear_integral(double w, double s) {
    require(w > 0.0, ErrorKind::InvalidArgument, "Gaussian width parameter must be positive");
    return std::sqrt(std::numbers::pi) / w * std::exp(s * s / (w * w));
}

}  // namespace fkpp::specfun
