#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fkpp/coherent.hpp"
#include "fkpp/ee.hpp"
#include "fkpp/field.hpp"
#include "support.hpp"

using namespace fkpp;
constexpr double kPi = std::numbers::pi;

namespace {

ModelSpec special_model(double a, double kappa, double b0, double gamma, double D) {
    ModelSpec m;
    m.D = D;
    m.kappa = kappa;
    m.a = ScalarCoefficient::constant(a);
    m.b = KernelCoefficient::gaussian(b0, gamma);
    return m;
}

Field gaussian_field(double center, double var, double mass, double lo = -10, double hi = 10,
                     std::size_t n = 4001) {
    const auto g = FieldGrid::make(lo, hi, n);
    return Field::sample(g, [&](double x) {
        return mass * std::exp(-(x - center) * (x - center) / (2 * var)) / std::sqrt(2 * kPi * var);
    });
}

}  // namespace

TEST_SUITE("ee") {
    TEST_CASE("moments_of_field") {
        const auto s = moments_of_field(gaussian_field(0.0, 0.3, 1.0), 3);
        CHECK(std::abs(s.sigma - 1.0) <= 1e-8);
        CHECK(std::abs(s.x) <= 1e-8);
        CHECK(std::abs(s.alpha2() - 0.3) <= 1e-8);
        CHECK(std::abs(s.moment(3)) <= 1e-8);
        CHECK(s.moment(1) == 0.0);
        CHECK(s.moment(0) == 1.0);

        Field zero = Field::zeros(FieldGrid::make(-1, 1, 64));
        CHECK(test::error_kind([&] { moments_of_field(zero, 2); }) == ErrorKind::InvalidArgument);
        Field bad = gaussian_field(0, 1, 1);
        bad.values[10] = std::nan("");
        CHECK(test::error_kind([&] { moments_of_field(bad, 2); }) == ErrorKind::InvalidArgument);
    }

    TEST_CASE("translation covariance of moments") {
        const auto a = moments_of_field(gaussian_field(0.0, 0.2, 2.0), 4);
        const auto b = moments_of_field(gaussian_field(1.5, 0.2, 2.0), 4);
        CHECK(std::abs(b.x - a.x - 1.5) <= 1e-9);
        CHECK(std::abs(b.sigma - a.sigma) <= 1e-9);
        for (int k = 2; k <= 4; ++k) CHECK(std::abs(b.moment(k) - a.moment(k)) <= 1e-9);
    }

    TEST_CASE("ee_rhs special case M=2") {
        const double a = 1.0, kappa = 1.0, D = 0.01;
        const auto m = special_model(a, kappa, 1.0, 2.0, D);  // b''(0) = -2/gamma^2 = -0.5
        const auto s = MomentState::make(2, 1.3, 0.2, {0.05});
        const auto r = ee_rhs(s, 0.0, m);
        const double beta = -0.5;
        CHECK(r[0] == doctest::Approx(a * 1.3 - kappa * 1.3 * 1.3 * (1.0 + beta * 0.05)).epsilon(1e-13));
        CHECK(std::abs(r[1]) <= 1e-15);
        CHECK(r[2] == doctest::Approx(2 * D));
    }

    TEST_CASE("ee_rhs general M=2 matches the explicit M=2 system") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int draw = 0; draw < 10; ++draw) {
            ModelSpec m;
            m.D = 0.02;
            m.kappa = 0.8;
            m.a = ScalarCoefficient::polynomial({1.0 + 0.3 * u(rng), 0.4 * u(rng), 0.3 * u(rng)});
            m.V = ScalarCoefficient::polynomial({0.0, 0.2 * u(rng), 0.5 * u(rng), 0.2 * u(rng), 0.1 * u(rng)});
            m.b = KernelCoefficient::gaussian(1.0 + 0.2 * u(rng), 1.0 + 0.3 * u(rng), 0.3 * u(rng));
            m.W = KernelCoefficient::cosine_gaussian(0.5 * u(rng), 1.2, 1.0 + 0.5 * u(rng));
            const double t = 0.3, X = 0.4 * u(rng), sig = 1.0 + 0.5 * u(rng), a2 = 0.03 + 0.02 * u(rng);
            const auto s = MomentState::make(2, sig, X, {a2});
            const auto r = ee_rhs(s, t, m);
            const double k = m.kappa;
            const double sdot = sig * (m.taylor_a(0, t, X) + 0.5 * m.taylor_a(2, t, X) * a2) -
                                sig * sig * k *
                                    (m.taylor_b(0, 0, t, X) +
                                     0.5 * (m.taylor_b(0, 2, t, X) + m.taylor_b(2, 0, t, X)) * a2);
            const double xdot = m.taylor_V(0, t, X) + k * sig * m.taylor_W(0, 0, t, X) +
                                (m.taylor_a(1, t, X) + 0.5 * m.taylor_V(2, t, X) +
                                 k * sig * (0.5 * (m.taylor_W(0, 2, t, X) + m.taylor_W(2, 0, t, X)) -
                                            m.taylor_b(1, 0, t, X))) *
                                    a2;
            const double adot = 2 * m.D + 2 * m.taylor_V(1, t, X) * a2 + 2 * k * sig * m.taylor_W(1, 0, t, X) * a2;
            CHECK(r[0] == doctest::Approx(sdot).epsilon(1e-12));
            CHECK(r[1] == doctest::Approx(xdot).epsilon(1e-12));
            CHECK(r[2] == doctest::Approx(adot).epsilon(1e-12));
        }
    }

    TEST_CASE("asymmetric kernel moves the center") {
        ModelSpec m = special_model(1.0, 1.0, 1.0, 1.0, 0.01);
        m.b = KernelCoefficient::gaussian(1.0, 1.0, 0.2);  // b(x - y - 0.2)
        const auto s = MomentState::make(2, 1.0, 0.0, {0.01});
        const double v = m.taylor_b(1, 0, 0.0, 0.0);
        CHECK(v != 0.0);
        CHECK(ee_rhs(s, 0.0, m)[1] == doctest::Approx(-m.kappa * v * s.sigma * s.alpha2()).epsilon(1e-12));
    }

    TEST_CASE("integrate_ee vs closed form") {
        const auto m = special_model(1.0, 1.0, 1.0, 2.0, 0.01);
        const auto s0 = MomentState::make(2, 1.0, 0.0, {0.02});
        const auto traj = integrate_ee(s0, 0.0, 5.0, m);
        const auto p = SpecialCaseParams::from(m, s0);
        CHECK(p.beta == doctest::Approx(-0.5));
        for (int i = 0; i <= 100; ++i) {
            const double t = 0.05 * i;
            const auto e = traj.at(t), c = closed_form_m2(p, t);
            CHECK(std::abs(e.sigma - c.sigma) <= 1e-8);
            CHECK(std::abs(e.x - c.x) <= 1e-8);
            CHECK(std::abs(e.alpha2() - c.alpha2()) <= 1e-8);
        }
        CHECK(closed_form_m2(p, 3.0).alpha2() == doctest::Approx(0.08));
        const auto c0 = closed_form_m2(p, 0.0);
        CHECK(c0.sigma == doctest::Approx(1.0));
        auto q = p;
        q.a = 0.0;
        CHECK(test::error_kind([&] { closed_form_m2(q, 1.0); }) == ErrorKind::InvalidArgument);
    }

    TEST_CASE("logistic limit of closed form") {
        SpecialCaseParams p;
        p.a = 1.5;
        p.kappa = 0.7;
        p.b0 = 1.2;
        p.beta = 0.0;
        p.sigma0 = 0.4;
        p.D = 0.3;
        for (double t : {0.0, 0.5, 2.0}) {
            const double ref = p.a / (std::exp(-p.a * t) * (p.a / p.sigma0 - p.kappa * p.b0) + p.kappa * p.b0);
            CHECK(closed_form_m2(p, t).sigma == doctest::Approx(ref).epsilon(1e-14));
        }
    }

    TEST_CASE("pure diffusion moments") {
        auto m = special_model(0.0, 0.0, 1.0, 1.0, 0.05);
        const auto traj = integrate_ee(MomentState::make(2, 2.0, 0.7, {0.1}), 0.0, 3.0, m);
        const auto s = traj.at(3.0);
        CHECK(s.sigma == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(s.x == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(s.alpha2() == doctest::Approx(0.1 + 2 * 0.05 * 3).epsilon(1e-12));
        const auto same = integrate_ee(MomentState::make(2, 2.0, 0.7, {0.1}), 1.0, 1.0, m).at(1.0);
        CHECK(same.sigma == 2.0);
        CHECK(same.alpha2() == 0.1);
    }

    TEST_CASE("translation covariance of trajectories") {
        const auto m = special_model(1.0, 1.0, 1.0, 1.0, 0.01);
        const auto t1 = integrate_ee(MomentState::make(3, 1.0, 0.0, {0.02, 0.0}), 0.0, 2.0, m);
        const auto t2 = integrate_ee(MomentState::make(3, 1.0, 0.8, {0.02, 0.0}), 0.0, 2.0, m);
        for (double t : {0.5, 1.0, 2.0}) {
            CHECK(std::abs(t2.at(t).x - t1.at(t).x - 0.8) <= 1e-9);
            CHECK(std::abs(t2.at(t).sigma - t1.at(t).sigma) <= 1e-9);
            CHECK(std::abs(t2.at(t).alpha2() - t1.at(t).alpha2()) <= 1e-9);
        }
    }

    TEST_CASE("order range and blow-up report") {
        const auto m = special_model(1.0, 1.0, 1.0, 1.0, 0.01);
        CHECK(test::error_kind([&] { ee_rhs(MomentState::make(6, 1, 0, {0.1, 0, 0, 0, 0}), 0, m); }) ==
              ErrorKind::InvalidArgument);
        // Negative kernel: logistic blow-up in finite time.
        auto bad = special_model(1.0, 1.0, -1.0, 1.0, 0.01);
        try {
            integrate_ee(MomentState::make(2, 1.0, 0.0, {0.01}), 0.0, 5.0, bad);
            FAIL("expected a blow-up");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NumericFailure);
            REQUIRE(e.time().has_value());
            CHECK(*e.time() < 5.0);
        }
    }

    TEST_CASE("match_constants on coherent initial data") {
        const double D = 0.01, b = 1.0;
        const auto g = FieldGrid::make(-3, 3, 6001);
        const double ND = std::pow(b / (kPi * D), 0.25);
        const Field v0 = Field::sample(g, [&](double x) { return ND * std::exp(-b * x * x / (2 * D)); });
        const auto s = match_constants(v0, 2);
        CHECK(test::rel(s.sigma, std::pow(4 * kPi * D / b, 0.25)) <= 1e-8);
        CHECK(std::abs(s.x) <= 1e-12);
        CHECK(test::rel(s.alpha2(), D / b) <= 1e-8);
        const Field v1 = Field::sample(g, [&](double x) { return x * std::exp(-b * x * x / (2 * D)); });
        CHECK(test::error_kind([&] { match_constants(v1, 2); }) == ErrorKind::InvalidArgument);
    }
}
