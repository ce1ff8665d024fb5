#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fkpp/error.hpp"
#include "fkpp/largetime.hpp"
#include "fkpp/model.hpp"
#include "fkpp/oracle.hpp"

// Experiment configuration. The grammar (YAML, one mapping per section) is
// documented in docs/config.md.
namespace fkpp::app {

/// Config failure carrying every issue found, not just the first.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    std::vector<std::string> issues_;
};

struct ScalarSpec {
    std::string family = "constant";  // constant | polynomial
    double value = 0.0;
    std::vector<double> coeffs;

    ScalarCoefficient build() const;
};

struct KernelSpec {
    std::string family = "zero";  // zero | constant | gaussian | cosine_gaussian
    double value = 0.0;
    double amp = 1.0;
    double gamma = 1.0;
    double shift = 0.0;
    double omega = 1.0;

    KernelCoefficient build() const;
};

struct ModelConfig {
    double D = 0.01;
    double kappa = 1.0;
    ScalarSpec a{"constant", 1.0, {}};
    KernelSpec b{"gaussian"};
    ScalarSpec V;
    KernelSpec W;
    int k_max = 6;

    ModelSpec build() const;
};

struct EEConfig {
    int M = 2;
    double t0 = 0.0;
    double t1 = 1.0;
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = 0.005;  // bounds the dense-output interpolation error
    int samples = 101;
    /// Initial moments; when unset, the constants of coherent state n = 0.
    std::optional<double> sigma;
    std::optional<double> x;
    std::vector<double> alpha;  // alpha^(2..M)
};

struct GermConfig {
    double b = 1.0;
};

struct CoherentConfig {
    std::vector<int> n{0, 1, 2};
    double x0 = 0.0;
    std::vector<double> times{0.0, 0.25, 0.75, 1.0};
    std::size_t points = 801;
    /// Snapshot half width in standard deviations of the vacuum.
    double half_width_sd = 12.0;
};

struct LargeTimeConfig {
    LargeTimeParams params = default_params();
    double t_end = 10.0;
    int t_steps = 41;
    int m_max = 16;
    double mode_threshold = 0.01;
    double x_min = -10.0;
    double x_max = 10.0;
    std::size_t points = 801;
    bool u2 = false;
    int u2_panels = 32;

    static LargeTimeParams default_params();
};

struct OracleConfig {
    /// Explicit grid; when x_min/x_max are unset the domain comes from the EE
    /// trajectory (auto_domain) with dx = dx_over_sqrt_D * sqrt(D).
    std::optional<double> x_min;
    std::optional<double> x_max;
    std::size_t points = 0;
    std::string boundary = "dirichlet";  // dirichlet | periodic
    double dx_over_sqrt_D = 0.1;
    double k_sigma = 8.0;
    std::optional<double> dt;  // "auto" or a positive step
    bool parallel = false;
    std::vector<double> times{0.25, 0.5, 0.75, 1.0};

    oracle::SolverOptions solver() const;
};

struct SweepConfig {
    std::vector<double> D{0.02, 0.01, 0.005, 0.0025};
    double t = 1.0;
};

struct OutputConfig {
    std::string dir = "out";
    int precision = 12;
};

struct ExperimentConfig {
    ModelConfig model;
    EEConfig ee;
    GermConfig germ;
    CoherentConfig coherent;
    LargeTimeConfig largetime;
    OracleConfig oracle;
    SweepConfig sweep;
    OutputConfig output;

    /// Range checks across sections; empty when valid.
    std::vector<std::string> check() const;
    /// Fully resolved configuration, defaults included.
    nlohmann::ordered_json resolved() const;
};

/// Parses and validates. Throws ConfigError listing every problem: syntax,
/// unknown keys, wrong types, out-of-range values.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace fkpp::app
