#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "fkpp/largetime.hpp"
#include "fkpp/linearized.hpp"
#include "fkpp/quadrature.hpp"
#include "fkpp/specfun.hpp"
#include "support.hpp"

using namespace fkpp;
constexpr double kPi = std::numbers::pi;

namespace {

LargeTimeParams reference_params() {
    LargeTimeParams p;
    p.a = 1.0;
    p.b0 = 1.0;
    p.gamma = 1.0;
    p.kappa = 1.0;
    p.D = 0.01;
    p.beta0 = 1.0;
    p.theta = 2.0;
    p.eps = 0.05;
    p.N = 1.0;
    p.n = 0;
    return p;
}

double adaptive(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

// Real-polynomial form of the k-series, independent of the complex Hermite path.
double u1_real_form(double x, double t, const LargeTimeParams& p) {
    const int n = p.n;
    const double X = x - p.x0, th = p.theta;
    const double lam = p.kappa * p.b0 * std::sqrt(kPi) * p.gamma * chi(t, p);
    double nf = 1.0;
    for (int i = 2; i <= n; ++i) nf *= i;
    const double pref = p.N * std::exp(p.a * t - p.kappa * p.B() * chi(t, p)) /
                        (th * std::sqrt(2 * kPi) * std::sqrt(std::pow(2.0, n) * nf) * std::pow(kPi, 0.25));
    double sum = 0.0, coef = 1.0;
    for (int k = 0; k < 120; ++k) {
        if (k > 0) coef *= -lam / k;
        const double A = p.D * t + k * p.gamma * p.gamma / 4 + 1 / (2 * th * th);
        const double r2 = 1 - 1 / (th * th * A);
        double poly = 0.0;
        for (int m = 0; 2 * m <= n; ++m) {
            double c = nf;
            for (int i = 2; i <= m; ++i) c /= i;
            for (int i = 2; i <= n - 2 * m; ++i) c /= i;
            poly += c * std::pow(X / (th * A), n - 2 * m) * std::pow(r2, m);
        }
        sum += coef * std::sqrt(kPi / A) * std::exp(-X * X / (4 * A)) * poly;
    }
    return pref * sum;
}

Field reconstruct(const FieldGrid& g, const CoefficientSeries& c, std::size_t i, const LargeTimeParams& p) {
    return Field::sample(g, [&](double x) {
        double s = 0.0;
        for (std::size_t m = 0; m < c.values[i].size(); ++m) {
            s += c.values[i][m] * specfun::hermite_function(static_cast<int>(m), p.theta * (x - p.x0));
        }
        return s;
    });
}

}  // namespace

TEST_SUITE("largetime") {
    TEST_CASE("background") {
        auto p = reference_params();
        CHECK(background(0.0, p) == doctest::Approx(p.beta0));
        auto q = p;
        q.b0 = 0.0;
        CHECK(background(1.3, q) == doctest::Approx(p.beta0 * std::exp(1.3)).epsilon(1e-14));
        const double t = std::log(1e12) / p.a + 1.0;
        CHECK(test::rel(background(t, p), p.a / (p.kappa * p.B())) <= 1e-8);
        auto neg = p;
        neg.b0 = -1.0;
        CHECK(test::error_kind([&] { background(3.0, neg); }) == ErrorKind::NumericFailure);
    }

    TEST_CASE("chi against adaptive quadrature") {
        const auto p = reference_params();
        CHECK(chi(0.0, p) == 0.0);
        for (double t : {0.1, 0.5, 1.0, 2.0, 3.5, 5.0}) {
            const double q = adaptive([&](double s) { return background(s, p); }, 0.0, t);
            CHECK(test::rel(chi(t, p), q) <= 1e-10);
        }
        CHECK(chi(400.0, p) / 400.0 == doctest::Approx(p.a / (p.kappa * p.B())).epsilon(1e-2));
        auto q = p;
        q.b0 = 0.0;
        const double ref = adaptive([&](double s) { return background(s, q); }, 0.0, 2.0);
        CHECK(test::rel(chi(2.0, q), ref) <= 1e-10);
    }

    TEST_CASE("kernel transform") {
        const auto p = reference_params();
        CHECK(kernel_fourier(0.0, p) == doctest::Approx(p.gamma * p.b0 / std::sqrt(2.0)));
        CHECK(kernel_fourier(60.0, p) == doctest::Approx(0.0));
        for (double pv : {0.0, 0.7, 2.0, 5.0}) {
            CHECK(std::abs(kernel_fourier(pv, p) - kernel_fourier_numeric(pv, p)) <= 1e-10);
        }
        auto c = p;
        c.kernel = KernelCoefficient::gaussian(p.b0, p.gamma);
        CHECK(test::error_kind([&] { kernel_fourier(0.0, c); }) == ErrorKind::InvalidArgument);
        CHECK(c.B() == doctest::Approx(p.B()));
    }

    TEST_CASE("u1_fourier") {
        const auto p = reference_params();
        const auto phi = hermite_profile_spectrum(p);
        CHECK(std::abs(u1_fourier(0.8, 0.0, p, phi) - phi(0.8)) <= 1e-15);
        const double t = 0.9;
        const double expo = std::log(std::abs(u1_fourier(0.0, t, p, phi) / phi(0.0)));
        CHECK(expo == doctest::Approx(p.a * t - 2 * p.kappa * p.B() * chi(t, p)).epsilon(1e-12));
        // Fourier-space ODE
        for (double pv : {0.0, 1.3, 4.0}) {
            const double h = 1e-4;
            const auto d = (u1_fourier(pv, t + h, p, phi) - u1_fourier(pv, t - h, p, phi)) / (2 * h);
            const double rate =
                -p.D * pv * pv + p.a - p.kappa * (p.B() + std::sqrt(2 * kPi) * kernel_fourier(pv, p)) * background(t, p);
            CHECK(std::abs(d - rate * u1_fourier(pv, t, p, phi)) <= 1e-9);
        }
    }

    TEST_CASE("u1_series: initial data, symmetry, linearity") {
        auto p = reference_params();
        for (double x : {-0.4, 0.0, 0.3, 1.1}) {
            CHECK(std::abs(u1_series(x, 0.0, p) - p.N * specfun::hermite_function(0, p.theta * (x - p.x0))) <=
                  1e-10);
            CHECK(std::abs(u1_series(p.x0 + x, 0.7, p) - u1_series(p.x0 - x, 0.7, p)) <= 1e-14);
        }
        auto q = p;
        q.N = 2.0;
        CHECK(u1_series(0.2, 0.7, q) == 2.0 * u1_series(0.2, 0.7, p));
    }

    TEST_CASE("u1_series matches the spectral oracle and the real-polynomial form") {
        for (int n : {0, 1, 2, 3}) {
            auto p = reference_params();
            p.n = n;
            p.x0 = 0.3;
            const auto g = FieldGrid::make(-8, 8, 321);
            for (double t : {0.5, 1.0}) {
                const Field s = Field::sample(g, [&](double x) { return u1_series(x, t, p); });
                const Field q = Field::sample(g, [&](double x) { return u1_inverse_transform(x, t, p); });
                const Field r = Field::sample(g, [&](double x) { return u1_real_form(x, t, p); });
                CHECK(relative_l2_error(s, q) <= 1e-4);
                CHECK(relative_l2_error(s, r) <= 1e-10);
            }
        }
    }

    TEST_CASE("series statistics and truncation cap") {
        auto p = reference_params();
        SeriesStats st;
        u1_series(0.1, 1.0, p, &st);
        CHECK(st.terms > 1);
        CHECK(st.tail <= 1e-14);
        // lambda ~ a t at large t, so t = 400 needs more than 200 terms
        CHECK(test::error_kind([&] { u1_series(0.0, 400.0, p); }) == ErrorKind::TruncationCap);
    }

    TEST_CASE("coefficients at t=0 and parity") {
        const auto p = reference_params();
        const auto c = coefficients(0, {0.0, 0.5, 1.0}, 9, p);
        CHECK(std::abs(c.values[0][0] - 1.0) <= 1e-10);
        for (int l = 1; l <= 4; ++l) CHECK(std::abs(c.values[0][2 * l]) <= 1e-10);
        for (const auto& row : c.values) {
            for (int m = 1; m <= 9; m += 2) CHECK(row[static_cast<std::size_t>(m)] == 0.0);
        }
        CHECK(c.max_terms > 0);
        for (int l = 0; l <= 3; ++l) {
            CHECK(test::rel(coefficient_closed_form(l, 0.7, p), coefficient_quadrature(0, 2 * l, 0.7, p)) <= 1e-9);
        }
    }

    TEST_CASE("coefficient expansion reconstructs u1") {
        // Hermite basis at the profile scale: M_max = 16 is enough for 1e-6.
        auto p = reference_params();
        p.theta = 1.0;
        p.gamma = 0.5;
        const auto g = FieldGrid::make(-10, 10, 801);
        const std::vector<double> times{0.0, 0.25, 0.5, 0.75, 1.0};
        const auto c = coefficients(0, times, 16, p);
        for (std::size_t i = 0; i < times.size(); ++i) {
            CHECK(relative_l2_error(reconstruct(g, c, i, p), u1_field(g, times[i], p)) <= 1e-6);
        }
    }

    TEST_CASE("coefficient truncation decays geometrically with M_max") {
        // Wide k-terms against a narrow basis: slow but geometric convergence.
        const auto p = reference_params();
        const auto g = FieldGrid::make(-10, 10, 801);
        const Field ref = u1_field(g, 1.0, p);
        double prev = 1.0;
        for (int m : {16, 32, 64}) {
            const double err = relative_l2_error(reconstruct(g, coefficients(0, {1.0}, m, p), 0, p), ref);
            CHECK(err < 0.1 * prev);
            prev = err;
        }
        CHECK(prev <= 1e-5);
    }

    TEST_CASE("general n coefficients by quadrature") {
        auto p = reference_params();
        p.n = 2;
        const auto c = coefficients(2, {0.0}, 6, p);
        CHECK(c.values[0][2] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(c.values[0][0]) <= 1e-10);
        CHECK(std::abs(c.values[0][4]) <= 1e-10);
        CHECK(c.values[0][3] == 0.0);
    }

    TEST_CASE("asymptote prefactors and growth") {
        const auto p = reference_params();
        CHECK(coefficient_asymptote(1, 2.0, p) / coefficient_asymptote(0, 2.0, p) ==
              doctest::Approx(std::sqrt(2.0) / 2));
        CHECK(coefficient_asymptote(0, 3.0, p) > coefficient_asymptote(0, 2.0, p));
        CHECK(test::error_kind([&] { coefficient_asymptote(0, 0.0, p); }) == ErrorKind::InvalidArgument);
    }

    TEST_CASE("validation") {
        auto p = reference_params();
        p.eps = 1.0;
        CHECK(test::error_kind([&] { p.validate(); }) == ErrorKind::InvalidArgument);
        p = reference_params();
        CHECK_NOTHROW(p.validate());
    }

    TEST_CASE("mode_count") {
        const auto g = FieldGrid::make(-10, 10, 2001);
        const Field one = Field::sample(g, [](double x) { return std::exp(-x * x); });
        const Field two = Field::sample(g, [](double x) { return std::exp(-(x - 3) * (x - 3)) + std::exp(-(x + 3) * (x + 3)); });
        CHECK(mode_count(one, 0.01) == 1);
        CHECK(mode_count(two, 0.01) == 2);
        const Field flat = Field::sample(g, [](double) { return 1.0; });
        CHECK(mode_count(flat, 0.01) == 0);
    }

    TEST_CASE("u2 correction: trivial cases and the second-order equation") {
        auto p = reference_params();
        const auto g = FieldGrid::make(-15, 15, 601);
        CHECK(u2_correction(g, 0.0, p).max_abs() == 0.0);
        auto free = p;
        free.kappa = 0.0;
        CHECK(u2_correction(g, 0.5, free).max_abs() == 0.0);

        // Residual of w_t = D w_xx + (a - k B beta) w - k beta b*w - k u1 (b*u1).
        const double t = 0.5, h = 1e-3;
        U2Options o;
        o.time_panels = 64;
        const Field now = u2_correction(g, t, p, o);
        const Field before = u2_correction(g, t - h, p, o);
        const Field after = u2_correction(g, t + h, p, o);
        const Field wt = central_time_derivative(before, after, h);
        const Field wxx = grid_dxx(now);
        const Field u1 = u1_field(g, t, p);
        const auto w = g.weights();
        const double beta = background(t, p);
        Field res = Field::zeros(g);
        Field scale = Field::zeros(g);
        for (std::size_t i = 0; i < g.n; ++i) {
            double cw = 0.0, cu = 0.0;
            for (std::size_t j = 0; j < g.n; ++j) {
                const double k = p.b0 * std::exp(-std::pow((g.x(i) - g.x(j)) / p.gamma, 2));
                cw += w[j] * k * now.values[j];
                cu += w[j] * k * u1.values[j];
            }
            const double src = p.kappa * u1.values[i] * cu;
            res.values[i] = wt.values[i] - (p.D * wxx.values[i] + (p.a - p.kappa * p.B() * beta) * now.values[i] -
                                            p.kappa * beta * cw - src);
            scale.values[i] = src;
        }
        CHECK(res.l2_norm() / scale.l2_norm() <= 1e-5);
    }
}
