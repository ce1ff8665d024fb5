#include "fkpp/largetime.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fkpp/error.hpp"
#include "fkpp/kernels.hpp"
#include "fkpp/quadrature.hpp"
#include "fkpp/specfun.hpp"

namespace fkpp {
namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double btilde(double pval, const LargeTimeParams& p) {
    return p.gaussian() ? kernel_fourier(pval, p) : kernel_fourier_numeric(pval, p);
}

// lambda = k b0 sqrt(pi) gamma chi(t): the k-series variable.
double series_lambda(double t, const LargeTimeParams& p) {
    return p.kappa * p.b0 * std::sqrt(kPi) * p.gamma * chi(t, p);
}

void require_gaussian(const LargeTimeParams& p, const char* what) {
    if (!p.gaussian()) {
        fail(ErrorKind::InvalidArgument, std::string(what) + " needs the Gaussian kernel; use the quadrature path");
    }
}

// Iterates the alternating k-series sum_k (-lam)^k/k! g(k) with the shared
// truncation policy.
template <class Term>
double k_series(double lam, Term&& g, SeriesStats* stats, const char* what) {
    double coef = 1.0;
    double sum = 0.0;
    double sum_abs = 0.0;
    for (int k = 0; k < kMaxSeriesTerms; ++k) {
        if (k > 0) coef *= -lam / k;
        const double term = coef * g(k);
        sum += term;
        sum_abs += std::abs(term);
        if (k > lam && std::abs(term) <= kSeriesTail * sum_abs) {
            if (stats) {
                stats->terms = k + 1;
                stats->tail = sum_abs > 0.0 ? std::abs(term) / sum_abs : 0.0;
                stats->sum_abs = sum_abs;
                stats->sum = sum;
            }
            return sum;
        }
    }
    fail(ErrorKind::TruncationCap, std::string(what) + ": k-series did not reach its tail bound in 200 terms");
}

}  // namespace

KernelCoefficient LargeTimeParams::kernel_coefficient() const {
    return kernel ? *kernel : KernelCoefficient::gaussian(b0, gamma);
}

double LargeTimeParams::B() const {
    if (gaussian()) return b0 * gamma * std::sqrt(kPi);
    return kernel->integral();
}

double LargeTimeParams::profile_norm() const { return N / std::sqrt(theta); }

void LargeTimeParams::validate() const {
    require(a > 0.0 && std::isfinite(a), ErrorKind::InvalidArgument, "a must be positive");
    require(gamma > 0.0, ErrorKind::InvalidArgument, "gamma must be positive");
    require(kappa > 0.0, ErrorKind::InvalidArgument, "kappa must be positive");
    require(D > 0.0, ErrorKind::InvalidArgument, "D must be positive");
    require(beta0 > 0.0, ErrorKind::InvalidArgument, "beta0 must be positive");
    require(eps > 0.0, ErrorKind::InvalidArgument, "eps must be positive");
    require(theta > 0.0, ErrorKind::InvalidArgument, "theta must be positive");
    require(N > 0.0, ErrorKind::InvalidArgument, "N must be positive");
    require(n >= 0 && n <= specfun::kMaxHermiteOrder, ErrorKind::InvalidArgument, "Hermite index out of range");
    require(std::isfinite(B()), ErrorKind::InvalidArgument, "kernel integral must be finite");
    if (!(eps < 0.1 * beta0 / profile_norm())) {
        fail(ErrorKind::InvalidArgument, "perturbation too large: need eps < 0.1 beta0 / ||phi||");
    }
}

double background(double t, const LargeTimeParams& p) {
    const double q = p.kappa * p.beta0 * p.B() / p.a;
    const double at = p.a * t;
    if (at > 1.0) {
        const double den = std::exp(-at) - q * std::expm1(-at);
        if (!(den > 0.0)) fail(ErrorKind::NumericFailure, "background blows up in finite time", t);
        return p.beta0 / den;
    }
    const double den = 1.0 + q * std::expm1(at);
    if (!(den > 0.0)) fail(ErrorKind::NumericFailure, "background blows up in finite time", t);
    return p.beta0 * std::exp(at) / den;
}

double chi(double t, const LargeTimeParams& p) {
    const double kB = p.kappa * p.B();
    const double at = p.a * t;
    if (kB == 0.0) return p.beta0 * std::expm1(at) / p.a;
    const double q = p.kappa * p.beta0 * p.B() / p.a;
    double log_den;
    if (at > 1.0) {
        const double den = std::exp(-at) - q * std::expm1(-at);
        if (!(den > 0.0)) fail(ErrorKind::NumericFailure, "background blows up in finite time", t);
        log_den = at + std::log(den);
    } else {
        const double arg = q * std::expm1(at);
        if (!(arg > -1.0)) fail(ErrorKind::NumericFailure, "background blows up in finite time", t);
        log_den = std::log1p(arg);
    }
    return log_den / kB;
}

double kernel_fourier(double pval, const LargeTimeParams& p) {
    require_gaussian(p, "kernel_fourier");
    return p.gamma / std::sqrt(2.0) * p.b0 * std::exp(-pval * pval * p.gamma * p.gamma / 4.0);
}

double kernel_fourier_numeric(double pval, const LargeTimeParams& p, int nodes) {
    const auto ker = p.kernel_coefficient();
    const double w = p.kernel_half_width;
    const double integral =
        quad::trapezoid([&](double z) { return ker.value(z, 0.0, 0.0) * std::cos(pval * z); }, -w, w, nodes);
    return integral / std::sqrt(2.0 * kPi);
}

double hermite_profile(double x, const LargeTimeParams& p) {
    return p.N * specfun::hermite_function(p.n, p.theta * (x - p.x0));
}

Spectrum hermite_profile_spectrum(const LargeTimeParams& p) {
    Complex phase(1.0, 0.0);
    for (int i = 0; i < p.n % 4; ++i) phase *= Complex(0.0, -1.0);
    return [p, phase](double pval) {
        return phase * (p.N / p.theta) * std::exp(Complex(0.0, -pval * p.x0)) *
               specfun::hermite_function(p.n, pval / p.theta);
    };
}

double mode_factor(double pval, double t, double s, const LargeTimeParams& p) {
    const double dt = t - s;
    const double dchi = chi(t, p) - chi(s, p);
    return std::exp(p.a * dt - p.D * pval * pval * dt -
                    p.kappa * (p.B() + std::sqrt(2.0 * kPi) * btilde(pval, p)) * dchi);
}

Complex u1_fourier(double pval, double t, const LargeTimeParams& p, const Spectrum& phi) {
    return phi(pval) * mode_factor(pval, t, 0.0, p);
}

double u1_series(double x, double t, const LargeTimeParams& p, SeriesStats* stats) {
    require_gaussian(p, "u1_series");
    require(t >= 0.0, ErrorKind::InvalidArgument, "u1_series needs t >= 0");
    const int n = p.n;
    const double X = x - p.x0;
    const double th = p.theta;
    const double lam = series_lambda(t, p);
    const double pref = p.N * std::exp(p.a * t - p.kappa * p.B() * chi(t, p)) /
                        (th * std::sqrt(2.0 * kPi) * std::sqrt(std::pow(2.0, n) * factorial(n)) * std::pow(kPi, 0.25));
    Complex mi(1.0, 0.0);
    for (int i = 0; i < n % 4; ++i) mi *= Complex(0.0, -1.0);
    auto g = [&](int k) {
        const double A = p.D * t + k * p.gamma * p.gamma / 4.0 + 1.0 / (2.0 * th * th);
        const double gauss = std::sqrt(kPi / A) * std::exp(-X * X / (4.0 * A));
        if (n == 0 || gauss == 0.0) return gauss;
        const double r2 = 1.0 - 1.0 / (th * th * A);
        if (std::abs(r2) < 1e-12) return gauss * std::pow(X / (th * A), n);
        const Complex rho = std::sqrt(Complex(r2, 0.0));
        const Complex z = Complex(0.0, X / (2.0 * th * A)) / rho;
        const Complex h = mi * std::pow(rho, n) * specfun::hermite_poly(n, z);
        if (std::abs(h.imag()) > 1e-10 * std::max(std::abs(h), 1e-300)) {
            fail(ErrorKind::NumericFailure, "u1_series picked up an imaginary part", t);
        }
        return gauss * h.real();
    };
    return pref * k_series(lam, g, stats, "u1_series");
}

double u1_inverse_transform(double x, double t, const LargeTimeParams& p, int p_nodes) {
    const auto phi = hermite_profile_spectrum(p);
    const double P = p.theta * (std::sqrt(2.0 * p.n + 1.0) + 12.0);
    const double integral = quad::trapezoid(
        [&](double pv) { return (std::exp(Complex(0.0, pv * x)) * u1_fourier(pv, t, p, phi)).real(); }, -P, P,
        p_nodes - 1);
    return integral / std::sqrt(2.0 * kPi);
}

Field u1_field(const FieldGrid& grid, double t, const LargeTimeParams& p) {
    if (p.gaussian()) return Field::sample(grid, [&](double x) { return u1_series(x, t, p); });
    return Field::sample(grid, [&](double x) { return u1_inverse_transform(x, t, p); });
}

double coefficient_closed_form(int l, double t, const LargeTimeParams& p, SeriesStats* stats) {
    require_gaussian(p, "coefficient_closed_form");
    require(l >= 0, ErrorKind::InvalidArgument, "coefficient index must be nonnegative");
    const double th2 = p.theta * p.theta;
    const double lam = series_lambda(t, p);
    const double pref = p.N * std::sqrt(factorial(2 * l)) / (std::pow(2.0, l - 1) * factorial(l)) *
                        std::exp(p.a * t - p.kappa * p.B() * chi(t, p));
    auto g = [&](int k) {
        const double Q = 4.0 * p.D * th2 * t + k * p.gamma * p.gamma * th2;
        return std::pow(Q + 4.0, -0.5) * std::pow(Q / (Q + 4.0), l);
    };
    return pref * k_series(lam, g, stats, "coefficients");
}

double coefficient_quadrature(int n, int m, double t, const LargeTimeParams& p) {
    require(n >= 0 && m >= 0, ErrorKind::InvalidArgument, "coefficient indices must be nonnegative");
    if ((n + m) % 2 != 0) return 0.0;
    const double S = std::sqrt(2.0 * std::max(n, m) + 1.0) + 12.0;
    const double integral = quad::trapezoid(
        [&](double s) {
            return mode_factor(p.theta * s, t, 0.0, p) * specfun::hermite_function(n, s) *
                   specfun::hermite_function(m, s);
        },
        -S, S, 2400);
    const int half = std::abs(n - m) / 2;
    return p.N * (half % 2 == 0 ? 1.0 : -1.0) * integral;
}

CoefficientSeries coefficients(int n, const std::vector<double>& times, int m_max, const LargeTimeParams& p) {
    require(n >= 0 && m_max >= 0, ErrorKind::InvalidArgument, "coefficient indices must be nonnegative");
    CoefficientSeries out;
    out.n = n;
    out.times = times;
    for (double t : times) {
        std::vector<double> row(static_cast<std::size_t>(m_max + 1), 0.0);
        for (int m = 0; m <= m_max; ++m) {
            if ((n + m) % 2 != 0) continue;
            if (n == 0 && p.gaussian()) {
                SeriesStats st;
                const double v = coefficient_closed_form(m / 2, t, p, &st);
                out.max_terms = std::max(out.max_terms, st.terms);
                out.tail_bound = std::max(out.tail_bound, st.tail);
                // Alternating sum: sum|term| * eps bounds the rounding error.
                const double loss = st.sum != 0.0
                                        ? st.sum_abs * std::numeric_limits<double>::epsilon() / std::abs(st.sum)
                                        : std::numeric_limits<double>::infinity();
                if (loss > 1e-10) {
                    row[static_cast<std::size_t>(m)] = coefficient_quadrature(n, m, t, p);
                    ++out.quadrature_fallbacks;
                } else {
                    row[static_cast<std::size_t>(m)] = v;
                }
            } else {
                row[static_cast<std::size_t>(m)] = coefficient_quadrature(n, m, t, p);
            }
        }
        out.values.push_back(std::move(row));
    }
    return out;
}

double coefficient_asymptote(int l, double t, const LargeTimeParams& p) {
    require(t > 0.0, ErrorKind::InvalidArgument, "asymptote needs t > 0");
    return p.N * std::sqrt(factorial(2 * l)) / (std::pow(2.0, l) * factorial(l) * p.theta * p.theta * std::sqrt(p.D * t)) *
           std::exp(p.b0 * kPi * p.a * t / (p.gamma * p.B()));
}

Field u2_correction(const FieldGrid& grid, double t, const LargeTimeParams& p, const U2Options& opts) {
    require(opts.time_panels >= 2 && opts.time_panels % 2 == 0, ErrorKind::InvalidArgument,
            "u2 needs an even number of time panels");
    require(t >= 0.0, ErrorKind::InvalidArgument, "u2 needs t >= 0");
    Field out = Field::zeros(grid);
    if (t == 0.0 || p.kappa == 0.0) return out;

    const std::size_t n = grid.n;
    const auto w = grid.weights();
    const auto ker = p.kernel_coefficient();
    const auto kw = kernels::weighted_matrix(grid, [&](double x, double y) { return ker.value(x, y, 0.0); });

    const double L = grid.boundary == Boundary::Periodic ? grid.period() : (grid.x_max - grid.x_min + grid.dx());
    const double dp = kPi / L;
    const long Q = static_cast<long>(std::floor((kPi / grid.dx()) / dp));
    const std::size_t np = static_cast<std::size_t>(2 * Q + 1);
    std::vector<double> ps(np);
    for (std::size_t q = 0; q < np; ++q) ps[q] = (static_cast<long>(q) - Q) * dp;

    const int panels = opts.time_panels;
    const double hs = t / panels;
    std::vector<Complex> acc(np, Complex(0.0, 0.0));
    std::vector<double> conv(n);
    for (int j = 0; j <= panels; ++j) {
        const double s = j * hs;
        const double sw = (j == 0 || j == panels) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        Field u1 = u1_field(grid, s, p);
        if (u1.boundary_ratio() > opts.boundary_tol) {
            fail(ErrorKind::GridTooNarrow, "u1 reaches the grid boundary at s=" + std::to_string(s), s);
        }
        kernels::nonlocal_apply_serial(kw, u1.values, conv);
        for (std::size_t q = 0; q < np; ++q) {
            Complex ft(0.0, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double f = p.kappa * u1.values[i] * conv[i];
                if (f != 0.0) ft += w[i] * f * std::exp(Complex(0.0, -ps[q] * grid.x(i)));
            }
            ft /= std::sqrt(2.0 * kPi);
            acc[q] += (sw * hs / 3.0) * mode_factor(ps[q], t, s, p) * ft;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t q = 0; q < np; ++q) sum += (std::exp(Complex(0.0, ps[q] * grid.x(i))) * acc[q]).real();
        out.values[i] = -sum * dp / std::sqrt(2.0 * kPi);
    }
    return out;
}

int mode_count(const Field& f, double threshold) {
    require(f.all_finite(), ErrorKind::InvalidArgument, "mode_count needs a finite field");
    double peak = -std::numeric_limits<double>::infinity();
    for (double v : f.values) peak = std::max(peak, v);
    int count = 0;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        const double v = f.values[i];
        if (v > f.values[i - 1] && v > f.values[i + 1] && v >= threshold * peak) ++count;
    }
    return count;
}

}  // namespace fkpp
