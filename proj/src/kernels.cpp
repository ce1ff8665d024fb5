#include "fkpp/kernels.hpp"

#include <cmath>

#include "fkpp/error.hpp"

#ifdef FKPP_HAVE_OPENMP
#include <omp.h>
#endif

namespace fkpp::kernels {
namespace {

inline double row_sum(const double* row, const double* u, std::size_t n) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * u[j];
    return acc;
}

void check(std::span<const double> kw, std::span<const double> u, std::span<double> out) {
    require(kw.size() == u.size() * u.size() && out.size() == u.size(), ErrorKind::InvalidArgument,
            "nonlocal sum: size mismatch");
}

}  // namespace

std::vector<double> weighted_matrix(const FieldGrid& grid, const std::function<double(double, double)>& k) {
    const std::size_t n = grid.n;
    const auto w = grid.weights();
    const double L = grid.period();
    const bool periodic = grid.boundary == Boundary::Periodic;
    std::vector<double> kw(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = grid.x(i);
        for (std::size_t j = 0; j < n; ++j) {
            double y = grid.x(j);
            if (periodic) {
                double d = y - xi;
                d -= L * std::floor(d / L + 0.5);
                y = xi + d;
            }
            kw[i * n + j] = k(xi, y) * w[j];
        }
    }
    return kw;
}

void nonlocal_apply_serial(std::span<const double> kw, std::span<const double> u, std::span<double> out) {
    check(kw, u, out);
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) out[i] = row_sum(kw.data() + i * n, u.data(), n);
}

void nonlocal_apply_omp(std::span<const double> kw, std::span<const double> u, std::span<double> out) {
    check(kw, u, out);
    const long n = static_cast<long>(u.size());
#ifdef FKPP_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] =
            row_sum(kw.data() + static_cast<std::size_t>(i) * u.size(), u.data(), u.size());
    }
}

void nonlocal_apply(std::span<const double> kw, std::span<const double> u, std::span<double> out, bool parallel) {
    if (parallel) {
        nonlocal_apply_omp(kw, u, out);
    } else {
        nonlocal_apply_serial(kw, u, out);
    }
}

int max_threads() {
#ifdef FKPP_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace fkpp::kernels
