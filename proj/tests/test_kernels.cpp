#include <doctest.h>

#include <cmath>
#include <random>

#include "fkpp/kernels.hpp"

using namespace fkpp;

TEST_SUITE("kernels") {
    TEST_CASE("weighted matrix folds trapezoid weights") {
        const auto g = FieldGrid::make(-1, 1, 21);
        const auto kw = kernels::weighted_matrix(g, [](double x, double y) { return x + 2 * y; });
        const auto w = g.weights();
        for (std::size_t i = 0; i < g.n; i += 5) {
            for (std::size_t j = 0; j < g.n; j += 3) {
                CHECK(kw[i * g.n + j] == doctest::Approx((g.x(i) + 2 * g.x(j)) * w[j]));
            }
        }
    }

    TEST_CASE("periodic grids use the minimum image") {
        const auto g = FieldGrid::make(0, 15, 16, Boundary::Periodic);
        const auto kw = kernels::weighted_matrix(g, [](double x, double y) { return y - x; });
        // period 16: node 15 seen from node 0 sits at -1
        CHECK(kw[15] == doctest::Approx(-1.0));
        CHECK(kw[15 * g.n + 0] == doctest::Approx(1.0));
        CHECK(kw[7] == doctest::Approx(7.0));
    }

    TEST_CASE("serial and OpenMP row sums are bitwise identical") {
        const auto g = FieldGrid::make(-5, 5, 257);
        const auto kw = kernels::weighted_matrix(g, [](double x, double y) { return std::exp(-(x - y) * (x - y)); });
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> U(-1, 1);
        std::vector<double> u(g.n), a(g.n), b(g.n);
        for (auto& v : u) v = U(rng);
        kernels::nonlocal_apply_serial(kw, u, a);
        kernels::nonlocal_apply_omp(kw, u, b);
        CHECK(a == b);
        kernels::nonlocal_apply(kw, u, b, false);
        CHECK(a == b);
        CHECK(kernels::max_threads() >= 1);
    }
}
