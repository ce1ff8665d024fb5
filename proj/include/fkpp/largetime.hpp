#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "fkpp/field.hpp"
#include "fkpp/model.hpp"

// Perturbations of the homogeneous Verhulst background for
//   u_t = D u_xx + a u - k u (b * u),   b(x) = b0 exp(-x^2/gamma^2),
// with initial data beta0 + eps N u_n(theta (x - x0)).
namespace fkpp {

struct LargeTimeParams {
    double a = 1.0;
    double b0 = 1.0;
    double gamma = 1.0;
    double kappa = 1.0;
    double D = 0.01;
    double beta0 = 1.0;
    double eps = 0.05;
    double theta = 1.0;
    double x0 = 0.0;
    double N = 1.0;
    int n = 0;
    /// Replaces the Gaussian kernel; Fourier data then come from quadrature.
    std::optional<KernelCoefficient> kernel;
    double kernel_half_width = 30.0;

    bool gaussian() const { return !kernel.has_value(); }
    KernelCoefficient kernel_coefficient() const;
    /// \int b.
    double B() const;
    /// ||phi||_2 of the initial profile N u_n(theta (x - x0)).
    double profile_norm() const;
    void validate() const;
};

/// beta(t) = beta0 e^{at} / (1 + k beta0 B (e^{at} - 1)/a).
double background(double t, const LargeTimeParams& p);
/// chi(t) = \int_0^t beta.
double chi(double t, const LargeTimeParams& p);

/// Fourier transform (1/sqrt(2 pi)) \int b(x) e^{-ipx} dx of the Gaussian kernel.
double kernel_fourier(double pval, const LargeTimeParams& p);
/// Same by quadrature for any translation-invariant kernel.
double kernel_fourier_numeric(double pval, const LargeTimeParams& p, int nodes = 4000);

using Spectrum = std::function<std::complex<double>(double)>;

/// N u_n(theta (x - x0)) and its transform.
double hermite_profile(double x, const LargeTimeParams& p);
Spectrum hermite_profile_spectrum(const LargeTimeParams& p);

/// Growth factor of mode p over [s, t].
double mode_factor(double pval, double t, double s, const LargeTimeParams& p);

/// phi~(p) exp{-D p^2 t + a t - k [B + sqrt(2 pi) b~(p)] chi(t)}.
std::complex<double> u1_fourier(double pval, double t, const LargeTimeParams& p, const Spectrum& phi);

struct SeriesStats {
    int terms = 0;
    double tail = 0.0;  // last |term| / sum |term|
    double sum_abs = 0.0;
    double sum = 0.0;
};

inline constexpr int kMaxSeriesTerms = 200;
inline constexpr double kSeriesTail = 1e-14;

/// First-order perturbation from the k-series over the kernel exponential.
double u1_series(double x, double t, const LargeTimeParams& p, SeriesStats* stats = nullptr);
/// First-order perturbation by direct quadrature of the inverse transform.
double u1_inverse_transform(double x, double t, const LargeTimeParams& p, int p_nodes = 4001);
Field u1_field(const FieldGrid& grid, double t, const LargeTimeParams& p);

struct CoefficientSeries {
    int n = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> values;  // values[i][m] = C_m(times[i])
    int max_terms = 0;
    double tail_bound = 0.0;
    int quadrature_fallbacks = 0;
};

/// C_m^(n)(t): coefficients of u1 in the basis u_m(theta (x - x0)).
/// n = 0 uses the closed k-series; it falls back to p-quadrature when the
/// alternating series loses more than 1e-10 relative to cancellation.
CoefficientSeries coefficients(int n, const std::vector<double>& times, int m_max, const LargeTimeParams& p);
double coefficient_closed_form(int l, double t, const LargeTimeParams& p, SeriesStats* stats = nullptr);
double coefficient_quadrature(int n, int m, double t, const LargeTimeParams& p);

/// N sqrt((2l)!) / (2^l l! theta^2 sqrt(D t)) exp(b0 pi a t / (gamma B)).
double coefficient_asymptote(int l, double t, const LargeTimeParams& p);

struct U2Options {
    int time_panels = 32;  // even
    double boundary_tol = 1e-10;
};

/// Second-order perturbation on the grid: Simpson in time, trapezoid in space,
/// Fourier-space Green function.
Field u2_correction(const FieldGrid& grid, double t, const LargeTimeParams& p, const U2Options& opts = {});

/// Strict interior local maxima with value >= threshold * max(f).
int mode_count(const Field& f, double threshold);

}  // namespace fkpp
