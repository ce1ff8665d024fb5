#pragma once

#include <functional>
#include <span>

namespace fkpp::quad {

/// Composite trapezoid rule over uniformly spaced samples.
double trapezoid(std::span<const double> values, double h);

/// Composite Simpson rule; requires an even number of panels.
double simpson(std::span<const double> values, double h);

/// Trapezoid rule of f on [a, b] with n uniform panels.
double trapezoid(const std::function<double(double)>& f, double a, double b, int n);

}  // namespace fkpp::quad
