#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fkpp/model.hpp"

namespace fkpp::app {

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// D-sweep of the leading-order solution and the associated linear solution
// against the nonlinear oracle at a fixed time.
struct SweepOptions {
    int M = 2;
    double germ_b = 1.0;
    double x0 = 0.0;
    double dx_over_sqrt_D = 0.1;
    double k_sigma = 8.0;
    int jobs = 1;
    bool parallel = false;
};

struct SweepPoint {
    double D = 0.0;
    double err_leading = 0.0;  // ||u_0 - u|| / ||u||
    double err_linear = 0.0;   // ||v - u|| / ||u||
    std::size_t nodes = 0;
    double min_positivity = 1.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    double order_leading = 0.0;
    double order_linear = 0.0;
};

/// `model.D` is replaced by each entry of Ds.
SweepResult convergence_sweep(const ModelSpec& model, const std::vector<double>& Ds, double t,
                              const SweepOptions& opts = {});

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 20261016;
    int jobs = 1;
};

inline constexpr int kCriterionCount = 11;

const char* criterion_name(int id);
/// Numeric failures inside a criterion are reported as FAIL with the message.
CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {});
/// All criteria when `ids` is empty; results ordered by id.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {}, const std::vector<int>& ids = {});
/// "PASS  3 hermite-identities  <detail>  (0.01 s)"
std::string format_line(const CriterionResult& r);

}  // namespace fkpp::app
