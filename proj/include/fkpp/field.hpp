#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fkpp {

enum class Boundary { DirichletZero, Periodic };

/// Uniform spatial grid. Nodes are x_min + i*dx, i = 0..n-1, with
/// dx = (x_max - x_min)/(n - 1). For periodic grids node n-1 is the last
/// distinct node and the period is n*dx.
struct FieldGrid {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t n = 16;
    Boundary boundary = Boundary::DirichletZero;

    static FieldGrid make(double x_min, double x_max, std::size_t n,
                          Boundary boundary = Boundary::DirichletZero);

    double dx() const { return (x_max - x_min) / static_cast<double>(n - 1); }
    double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
    double period() const { return static_cast<double>(n) * dx(); }
    std::vector<double> nodes() const;
    /// Quadrature weights: trapezoid for Dirichlet, uniform for periodic.
    std::vector<double> weights() const;
};

/// Sampled real function on a FieldGrid.
struct Field {
    FieldGrid grid;
    std::vector<double> values;

    static Field zeros(const FieldGrid& grid);
    static Field sample(const FieldGrid& grid, const std::function<double(double)>& f);

    std::size_t size() const { return values.size(); }
    double integral() const;
    double l2_norm() const;
    double max_abs() const;
    /// max |boundary value| / max |value|; 0 for periodic grids.
    double boundary_ratio() const;
    bool all_finite() const;
};

double l2_distance(const Field& a, const Field& b);
double relative_l2_error(const Field& approx, const Field& reference);

}  // namespace fkpp
