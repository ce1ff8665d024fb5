#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fkpp/coherent.hpp"
#include "fkpp/linearized.hpp"
#include "fkpp/quadrature.hpp"
#include "support.hpp"

using namespace fkpp;
constexpr double kPi = std::numbers::pi;

namespace {

ModelSpec special_model(double D) {
    ModelSpec m;
    m.D = D;
    m.kappa = 1.0;
    m.a = ScalarCoefficient::constant(1.0);
    m.b = KernelCoefficient::gaussian(1.0, 1.0);
    return m;
}

AssociatedOperator op_at(const ModelSpec& m, MomentState s0, double t1 = 1.0) {
    return AssociatedOperator(integrate_ee(s0, 0.0, t1, m));
}

}  // namespace

TEST_SUITE("linearized") {
    TEST_CASE("coeff_lambda") {
        auto m = special_model(0.01);
        const auto s0 = MomentState::make(2, 1.0, 0.0, {0.01});
        CHECK(coeff_lambda(0.3, 0.5, op_at(m, s0)) == 0.0);
        m.V = ScalarCoefficient::polynomial({0.0, 1.7});
        CHECK(coeff_lambda(0.3, 0.5, op_at(m, s0)) == doctest::Approx(1.7));
    }

    TEST_CASE("Gaussian W velocity approximates the nonlocal quadrature to O(alpha^2)") {
        auto m = special_model(0.01);
        m.V = ScalarCoefficient();
        m.W = KernelCoefficient::gaussian(0.5, 1.0, 0.0);
        std::vector<double> err, var;
        for (double v : {0.04, 0.02, 0.01}) {
            const auto s0 = MomentState::make(2, 1.3, 0.2, {v});
            const auto op = op_at(m, s0, 0.1);
            const double x = 0.5;
            const double direct = m.kappa * quad::trapezoid(
                                                [&](double y) {
                                                    return m.W.partial(1, 0, x, y, 0.0) * 1.3 *
                                                           std::exp(-(y - 0.2) * (y - 0.2) / (2 * v)) /
                                                           std::sqrt(2 * kPi * v);
                                                },
                                                -8.0, 8.0, 16000);
            err.push_back(std::abs(coeff_lambda(x, 0.0, op) - direct));
            var.push_back(v);
        }
        CHECK(test::loglog_slope(var, err) >= 1.8);
    }

    TEST_CASE("coeff_A") {
        auto m = special_model(0.01);
        m.kappa = 0.0;
        m.a = ScalarCoefficient::polynomial({0.5, 0.2});
        const auto s0 = MomentState::make(2, 1.0, 0.0, {0.01});
        CHECK(coeff_A(0.7, 0.3, op_at(m, s0)) == doctest::Approx(0.5 + 0.2 * 0.7));

        auto c = special_model(0.01);
        c.b = KernelCoefficient::constant(0.3);
        const auto op = op_at(c, s0);
        const double sig = op.trajectory().at(0.4).sigma;
        CHECK(coeff_A(-1.2, 0.4, op) == doctest::Approx(1.0 - sig * 0.3).epsilon(1e-13));
    }

    TEST_CASE("A on the trajectory approaches sigma'/sigma linearly in D") {
        std::vector<double> Ds{0.02, 0.01, 0.005}, gaps;
        for (double D : Ds) {
            const auto m = special_model(D);
            const auto op = op_at(m, MomentState::make(2, 0.5, 0.0, {D}));
            const double X = op.trajectory().at(1.0).x;
            gaps.push_back(std::abs(coeff_A(X, 1.0, op) - op.trajectory().sigma_dot_over_sigma(1.0)));
        }
        CHECK(test::loglog_slope(Ds, gaps) == doctest::Approx(1.0).epsilon(0.05));
    }

    TEST_CASE("apply_operator on the heat kernel converges at second order in the time stencil") {
        ModelSpec m;
        m.D = 0.1;
        m.kappa = 0.0;
        m.a = ScalarCoefficient::constant(0.0);
        const auto op = op_at(m, MomentState::make(2, 1.0, 0.0, {0.1}), 2.0);
        auto heat = [&](double x, double t) {
            const double s = 4 * m.D * (t + 0.5);
            return std::exp(-x * x / s) / std::sqrt(kPi * s);
        };
        const auto coarse = residual_report(heat, FieldGrid::make(-6, 6, 1201), 1.0, 2e-2, op);
        const auto fine = residual_report(heat, FieldGrid::make(-6, 6, 2401), 1.0, 1e-2, op);
        CHECK(coarse.residual_over_norm / fine.residual_over_norm == doctest::Approx(4.0).epsilon(0.05));
        CHECK(fine.residual_over_norm <= 1e-4);

        const auto zero = residual_report([](double, double) { return 0.0; }, FieldGrid::make(-6, 6, 101), 1.0,
                                          1e-2, op);
        CHECK(zero.residual_l2 == 0.0);
        CHECK(test::error_kind([&] { residual_report(heat, FieldGrid::make(-1, 1, 201), 1.0, 1e-2, op); }) ==
              ErrorKind::GridTooNarrow);
    }

    TEST_CASE("expansion coefficients") {
        auto m = special_model(0.01);
        const auto op = op_at(m, MomentState::make(2, 1.0, 0.0, {0.01}));
        CHECK(std::abs(expansion_coefficients(1, 0.5, op).p_coef) <= 1e-15);
        CHECK(test::error_kind([&] { expansion_coefficients(2, 0.5, op); }) == ErrorKind::OrderExceeded);

        ModelSpec q;
        q.D = 0.01;
        q.kappa = 0.0;
        q.a = ScalarCoefficient::polynomial({1.0, 0.6});
        q.V = ScalarCoefficient::polynomial({0.0, 0.0, 0.0, 0.8 / 6.0});  // Lambda = 0.4 x^2
        const auto opq = op_at(q, MomentState::make(3, 1.0, 0.0, {0.01, 0.0}), 0.5);
        const auto c1 = expansion_coefficients(1, 0.2, opq);
        CHECK(c1.p_dx_coef == doctest::Approx(-0.4));
        CHECK(c1.dx_coef == doctest::Approx(0.01 * 0.6));
        const auto c2 = expansion_coefficients(2, 0.2, opq);
        CHECK(c2.p_dx_coef == doctest::Approx(0.0));
        CHECK(c2.dx_coef == doctest::Approx(0.0));
    }

    TEST_CASE("leading residual is reproduced by the first two correction operators") {
        std::vector<double> Ds{0.02, 0.01, 0.005}, rel_remainder, rel_residual;
        for (double D : Ds) {
            const auto m = special_model(D);
            AssembleOptions o;
            o.M = 3;
            const auto u0 = assemble_solution(0, m, 0.0, 1.2, o);
            const auto& traj = u0.coherent().trajectory();
            const AssociatedOperator op(traj);
            const double t = 1.0, h = 1e-4;
            const auto s = traj.at(t);
            const double w = 12.0 * std::sqrt(s.alpha2());
            const auto grid = FieldGrid::make(s.x - w, s.x + w, 2001);
            const Field v = u0.sample(grid, t);
            const Field vt = central_time_derivative(u0.sample(grid, t - h), u0.sample(grid, t + h), h);
            const Field r = apply_operator(v, vt, t, op);
            const Field l1 = apply_expansion(1, v, t, op);
            const Field l2 = apply_expansion(2, v, t, op);
            const double ident = D * (coeff_A(s.x, t, op) - traj.sigma_dot_over_sigma(t));
            Field rem = Field::zeros(grid);
            for (std::size_t i = 0; i < grid.n; ++i) {
                rem.values[i] = D * r.values[i] - l1.values[i] - l2.values[i] - ident * v.values[i];
            }
            rel_remainder.push_back(rem.l2_norm() / (D * r.l2_norm()));
            rel_residual.push_back(r.l2_norm() / v.l2_norm());
        }
        CHECK(test::loglog_slope(Ds, rel_residual) >= 0.4);
        CHECK(test::loglog_slope(Ds, rel_remainder) >= 0.4);
        CHECK(rel_remainder.back() <= 0.5);
    }
}
