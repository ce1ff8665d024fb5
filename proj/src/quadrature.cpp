#include "fkpp/quadrature.hpp"

#include "fkpp/error.hpp"

namespace fkpp::quad {

double trapezoid(std::span<const double> values, double h) {
    if (values.size() < 2) return 0.0;
    double s = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
    return s * h;
}

double simpson(std::span<const double> values, double h) {
    const std::size_t n = values.size();
    require(n >= 3 && (n - 1) % 2 == 0, ErrorKind::InvalidArgument,
            "Simpson rule needs an even number of panels");
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) (i % 2 ? odd : even) += values[i];
    return h / 3.0 * (values.front() + values.back() + 4.0 * odd + 2.0 * even);
}

double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
    require(n >= 1, ErrorKind::InvalidArgument, "trapezoid needs at least one panel");
    const double h = (b - a) / n;
    double s = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i) s += f(a + i * h);
    return s * h;
}

}  // namespace fkpp::quad
