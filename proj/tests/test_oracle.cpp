#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fkpp/coherent.hpp"
#include "fkpp/largetime.hpp"
#include "fkpp/oracle.hpp"
#include "fkpp/specfun.hpp"
#include "support.hpp"

using namespace fkpp;
constexpr double kPi = std::numbers::pi;

namespace {

ModelSpec heat_model(double D) {
    ModelSpec m;
    m.D = D;
    m.kappa = 0.0;
    m.a = ScalarCoefficient::constant(0.0);
    m.b = KernelCoefficient::zero();
    return m;
}

ModelSpec special_model(double D) {
    ModelSpec m;
    m.D = D;
    m.kappa = 1.0;
    m.a = ScalarCoefficient::constant(1.0);
    m.b = KernelCoefficient::gaussian(1.0, 1.0);
    return m;
}

// Gaussian of variance s2 at t=0 diffused for time t.
double heat_exact(double x, double t, double D, double s2) {
    const double v = s2 + 2 * D * t;
    return std::exp(-x * x / (2 * v)) / std::sqrt(2 * kPi * v);
}

LargeTimeParams reference_params() {
    LargeTimeParams p;
    p.D = 0.01;
    p.theta = 2.0;
    p.eps = 0.05;
    return p;
}

}  // namespace

TEST_SUITE("oracle") {
    TEST_CASE("homogeneous background follows the Verhulst solution") {
        const auto g = FieldGrid::make(-20, 20, 160, Boundary::Periodic);
        const auto m = special_model(0.01);
        const Field u0 = Field::sample(g, [](double) { return 1.0; });
        const auto s = oracle::solve_nonlinear(u0, m, 0.0, {2.0});
        LargeTimeParams p;
        const double ref = background(2.0, p);
        for (double v : s.final().values) CHECK(test::rel(v, ref) <= 1e-6);
    }

    TEST_CASE("heat kernel: spatial order four") {
        const double D = 0.05, s2 = 0.04, t = 0.5;
        std::vector<double> err, hs;
        for (std::size_t n : {41, 81, 161}) {
            const auto g = FieldGrid::make(-4, 4, n);
            oracle::SolverOptions o;
            o.dt = 1e-3;
            const auto s = oracle::solve_nonlinear(
                Field::sample(g, [&](double x) { return heat_exact(x, 0, D, s2); }), heat_model(D), 0.0, {t}, o);
            const Field ex = Field::sample(g, [&](double x) { return heat_exact(x, t, D, s2); });
            err.push_back(relative_l2_error(s.final(), ex));
            hs.push_back(g.dx());
        }
        const double order = test::loglog_slope(hs, err);
        CHECK(order >= 3.5);
        CHECK(order <= 4.5);
        CHECK(err.back() <= 0.1 * std::pow(hs.back() / std::sqrt(s2), 4));
    }

    TEST_CASE("temporal order four on a nonlinear case") {
        const auto g = FieldGrid::make(-4, 4, 161);
        const auto m = special_model(0.02);
        const Field u0 = Field::sample(g, [](double x) { return std::exp(-4 * x * x); });
        oracle::SolverOptions ref_o;
        ref_o.dt = 0.1 / 32;
        const Field ref = oracle::solve_nonlinear(u0, m, 0.0, {1.0}, ref_o).final();
        std::vector<double> err, dts;
        for (double dt : {0.1, 0.05, 0.025}) {
            oracle::SolverOptions o;
            o.dt = dt;
            err.push_back(relative_l2_error(oracle::solve_nonlinear(u0, m, 0.0, {1.0}, o).final(), ref));
            dts.push_back(dt);
        }
        const double order = test::loglog_slope(dts, err);
        CHECK(order >= 3.5);
        CHECK(order <= 4.5);
    }

    TEST_CASE("mass conservation without reaction") {
        const auto g = FieldGrid::make(-5, 5, 200, Boundary::Periodic);
        auto m = heat_model(0.05);
        m.V = ScalarCoefficient::callback([](double x, double) { return 0.1 * std::cos(2 * kPi * x / 10.0); });
        const Field u0 = Field::sample(g, [](double x) { return std::exp(-x * x) + 0.1; });
        const auto s = oracle::solve_nonlinear(u0, m, 0.0, {1.0, 2.0});
        const double m0 = u0.integral();
        CHECK(std::abs(s.final().integral() - m0) / m0 / 2.0 <= 1e-12);
    }

    TEST_CASE("snapshots land on requested times") {
        const auto g = FieldGrid::make(-8, 8, 161);
        const Field u0 = Field::sample(g, [](double x) { return std::exp(-x * x); });
        oracle::SolverOptions o;
        o.dt = 0.03;
        const auto s = oracle::solve_nonlinear(u0, heat_model(0.05), 0.0, {0.0, 0.1, 0.25}, o);
        REQUIRE(s.fields.size() == 3);
        CHECK(relative_l2_error(s.at(0.0), u0) <= 1e-15);
        CHECK(&s.at(0.25) == &s.final());
        CHECK(test::error_kind([&] { s.at(0.2); }) == ErrorKind::InvalidArgument);
        CHECK(test::error_kind([&] { oracle::solve_nonlinear(u0, heat_model(0.05), 0.0, {0.2, 0.1}); }) ==
              ErrorKind::InvalidArgument);
    }

    TEST_CASE("error monitors") {
        const auto g = FieldGrid::make(-2, 2, 81);
        const Field wide = Field::sample(g, [](double x) { return std::exp(-x * x); });
        CHECK(test::error_kind([&] { oracle::solve_nonlinear(wide, heat_model(0.05), 0.0, {0.1}); }) ==
              ErrorKind::GridTooNarrow);
        oracle::SolverOptions o;
        o.dt = 0.05;  // far above the diffusive limit
        o.boundary_tol = -1.0;
        const auto gg = FieldGrid::make(-4, 4, 161);
        const Field u0 = Field::sample(gg, [](double x) { return std::exp(-x * x); });
        CHECK(test::error_kind([&] { oracle::solve_nonlinear(u0, heat_model(1.0), 0.0, {50.0}, o); }) ==
              ErrorKind::NumericFailure);
    }

    TEST_CASE("serial and parallel runs agree bitwise") {
        const auto g = FieldGrid::make(-3, 3, 121);
        const Field u0 = Field::sample(g, [](double x) { return std::exp(-4 * x * x); });
        auto m = special_model(0.02);
        m.W = KernelCoefficient::gaussian(0.3, 0.5, 0.2);
        oracle::SolverOptions o;
        o.boundary_tol = -1.0;
        const auto a = oracle::solve_nonlinear(u0, m, 0.0, {0.5}, o);
        o.parallel = true;
        const auto b = oracle::solve_nonlinear(u0, m, 0.0, {0.5}, o);
        CHECK(a.final().values == b.final().values);
    }

    TEST_CASE("associated linear solver reduces to the free equation") {
        const double D = 0.01;
        auto m = special_model(D);
        m.kappa = 0.0;
        const auto u = assemble_solution(0, special_model(D), 0.0, 1.0);
        const auto traj = integrate_ee(u.coherent().trajectory().at(0.0), 0.0, 1.0, m);
        const AssociatedOperator op(traj);
        const auto g = oracle::auto_domain(traj, 1.0, std::sqrt(D) / 10);
        const Field v0 = u.sample(g, 0.0);
        const auto lin = oracle::solve_linear_associated(v0, op, 0.0, {1.0});
        const auto nl = oracle::solve_nonlinear(v0, m, 0.0, {1.0});
        CHECK(relative_l2_error(lin.final(), nl.final()) <= 1e-10);
    }

    TEST_CASE("associated linear solution approaches the nonlinear one as D shrinks") {
        std::vector<double> Ds, err;
        for (double D : {0.02, 0.01, 0.005}) {
            const auto m = special_model(D);
            const auto u = assemble_solution(0, m, 0.0, 1.0);
            const auto& traj = u.coherent().trajectory();
            const auto g = oracle::auto_domain(traj, 1.0, std::sqrt(D) / 10);
            const Field u0 = u.sample(g, 0.0);
            const auto nl = oracle::solve_nonlinear(u0, m, 0.0, {1.0});
            const auto lin = oracle::solve_linear_associated(u0, AssociatedOperator(traj), 0.0, {1.0});
            Ds.push_back(D);
            err.push_back(relative_l2_error(lin.final(), nl.final()));
        }
        CHECK(test::loglog_slope(Ds, err) >= 1.2);
    }

    TEST_CASE("coherent vacuum as initial data stays close to its analytic evolution") {
        const double D = 0.005;
        const auto u = assemble_solution(0, special_model(D), 0.0, 0.5);
        const auto& s = u.coherent();
        const auto g = oracle::auto_domain(s.trajectory(), 0.5, std::sqrt(D) / 10);
        const auto lin =
            oracle::solve_linear_associated(s.sample_state(0, g, 0.0), AssociatedOperator(s.trajectory()), 0.0, {0.5});
        CHECK(relative_l2_error(lin.final(), s.sample_state(0, g, 0.5)) <= 0.05);
        CHECK(lin.min_positivity >= -1e-10);
    }

    TEST_CASE("moments track the EE trajectory better as D shrinks") {
        std::vector<double> Ds, err;
        for (double D : {0.02, 0.01, 0.005}) {
            const auto m = special_model(D);
            const auto u = assemble_solution(0, m, 0.0, 1.0);
            const auto& traj = u.coherent().trajectory();
            const auto g = oracle::auto_domain(traj, 1.0, std::sqrt(D) / 10);
            const auto nl = oracle::solve_nonlinear(u.sample(g, 0.0), m, 0.0, {1.0});
            const auto fm = oracle::field_moments(nl.final());
            const auto ee = traj.at(1.0);
            Ds.push_back(D);
            err.push_back(std::abs(fm.mass - ee.sigma) / ee.sigma + std::abs(fm.variance - ee.alpha2()) / ee.alpha2());
        }
        CHECK(err[1] < err[0]);
        CHECK(err[2] < err[1]);
    }

    TEST_CASE("perturbation solver: trivial cases") {
        auto p = reference_params();
        const auto g = FieldGrid::make(-15, 15, 601);
        const Field phi = Field::sample(g, [&](double x) { return hermite_profile(x, p); });
        CHECK(relative_l2_error(oracle::solve_linear_perturbation(phi, p, {0.0}).final(), phi) <= 1e-15);

        p.b0 = 0.0;
        const double t = 1.0;
        const auto s = oracle::solve_linear_perturbation(phi, p, {t});
        // e^{at} times the heat evolution of N u_0(theta x): variance 1/theta^2 + 2 D t.
        const double v = 1 / (p.theta * p.theta) + 2 * p.D * t;
        const double amp = p.N * std::pow(kPi, -0.25) * std::sqrt(1 / (p.theta * p.theta) / v);
        const Field ex = Field::sample(g, [&](double x) { return std::exp(p.a * t) * amp * std::exp(-x * x / (2 * v)); });
        CHECK(relative_l2_error(s.final(), ex) <= 1e-6);
    }

    TEST_CASE("perturbation solver matches the series") {
        const auto p = reference_params();
        const auto g = FieldGrid::make(-15, 15, 601);
        const Field phi = Field::sample(g, [&](double x) { return hermite_profile(x, p); });
        const auto s = oracle::solve_linear_perturbation(phi, p, {0.5, 1.0});
        for (double t : {0.5, 1.0}) CHECK(relative_l2_error(s.at(t), u1_field(g, t, p)) <= 1e-4);
    }

    TEST_CASE("field moments and auto domain") {
        const auto g = FieldGrid::make(-10, 10, 2001);
        const Field f = Field::sample(g, [](double x) { return 3 * std::exp(-(x - 1) * (x - 1) / 0.5); });
        const auto fm = oracle::field_moments(f);
        CHECK(fm.mass == doctest::Approx(3 * std::sqrt(0.5 * kPi)));
        CHECK(fm.center == doctest::Approx(1.0));
        CHECK(fm.variance == doctest::Approx(0.25));

        const auto u = assemble_solution(0, special_model(0.01), 0.0, 1.0);
        const auto& traj = u.coherent().trajectory();
        const auto d = oracle::auto_domain(traj, 1.0, 0.01);
        const double sd = std::sqrt(traj.at(1.0).alpha2());
        CHECK(d.x_min <= -8 * sd + 1e-12);
        CHECK(d.x_max >= 8 * sd - 1e-12);
        CHECK(d.dx() == doctest::Approx(0.01));
    }
}
