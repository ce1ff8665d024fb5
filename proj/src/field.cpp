#include "fkpp/field.hpp"

#include <algorithm>
#include <cmath>

#include "fkpp/error.hpp"

namespace fkpp {

FieldGrid FieldGrid::make(double x_min, double x_max, std::size_t n, Boundary boundary) {
    require(std::isfinite(x_min) && std::isfinite(x_max) && x_min < x_max,
            ErrorKind::InvalidArgument, "grid requires finite x_min < x_max");
    require(n >= 16, ErrorKind::InvalidArgument, "grid requires at least 16 nodes");
    return FieldGrid{x_min, x_max, n, boundary};
}

std::vector<double> FieldGrid::nodes() const {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = x(i);
    return xs;
}

std::vector<double> FieldGrid::weights() const {
    std::vector<double> w(n, dx());
    if (boundary == Boundary::DirichletZero) {
        w.front() *= 0.5;
        w.back() *= 0.5;
    }
    return w;
}

Field Field::zeros(const FieldGrid& grid) { return Field{grid, std::vector<double>(grid.n, 0.0)}; }

Field Field::sample(const FieldGrid& grid, const std::function<double(double)>& f) {
    Field out = zeros(grid);
    for (std::size_t i = 0; i < grid.n; ++i) out.values[i] = f(grid.x(i));
    return out;
}

double Field::integral() const {
    const auto w = grid.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += w[i] * values[i];
    return s;
}

double Field::l2_norm() const {
    const auto w = grid.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += w[i] * values[i] * values[i];
    return std::sqrt(s);
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double Field::boundary_ratio() const {
    if (grid.boundary == Boundary::Periodic || values.empty()) return 0.0;
    const double peak = max_abs();
    if (peak == 0.0) return 0.0;
    return std::max(std::abs(values.front()), std::abs(values.back())) / peak;
}

bool Field::all_finite() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double l2_distance(const Field& a, const Field& b) {
    require(a.size() == b.size(), ErrorKind::InvalidArgument, "fields live on different grids");
    const auto w = a.grid.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        s += w[i] * d * d;
    }
    return std::sqrt(s);
}

double relative_l2_error(const Field& approx, const Field& reference) {
    const double norm = reference.l2_norm();
    require(norm > 0.0, ErrorKind::InvalidArgument, "reference field has zero norm");
    return l2_distance(approx, reference) / norm;
}

}  // namespace fkpp
