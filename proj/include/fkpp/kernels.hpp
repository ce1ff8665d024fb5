#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fkpp/field.hpp"

// O(N^2) nonlocal sums  out_i = sum_j K_ij u_j  with quadrature weights folded
// into K. The OpenMP and serial versions sum each row in the same order, so
// their results are bitwise identical.
namespace fkpp::kernels {

/// Row-major n x n matrix k(x_i, y_ij) w_j. On periodic grids y_ij is the
/// minimum image of x_j relative to x_i.
std::vector<double> weighted_matrix(const FieldGrid& grid, const std::function<double(double, double)>& k);

void nonlocal_apply_serial(std::span<const double> kw, std::span<const double> u, std::span<double> out);
void nonlocal_apply_omp(std::span<const double> kw, std::span<const double> u, std::span<double> out);
void nonlocal_apply(std::span<const double> kw, std::span<const double> u, std::span<double> out, bool parallel);

/// Threads OpenMP would use; 1 without OpenMP.
int max_threads();

}  // namespace fkpp::kernels
