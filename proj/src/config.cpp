#include "fkpp/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fkpp::app {
namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : "; ") + x;
    return s;
}

// Reads one mapping, remembering which keys were consumed.
class Reader {
public:
    Reader(YAML::Node node, std::string path, std::vector<std::string>& issues)
        : node_(std::move(node)), path_(std::move(path)), issues_(issues) {
        if (node_ && !node_.IsNull() && !node_.IsMap()) {
            issues_.push_back(path_ + ": expected a mapping");
            node_ = YAML::Node();
        }
    }

    template <class T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        if (!node_ || node_.IsNull()) return;
        const YAML::Node v = node_[key];
        if (!v) return;
        try {
            out = v.as<T>();
        } catch (const YAML::Exception&) {
            issues_.push_back(where(key) + ": wrong type");
        }
    }

    void get(const char* key, std::optional<double>& out, bool allow_auto) {
        seen_.insert(key);
        if (!node_ || node_.IsNull()) return;
        const YAML::Node v = node_[key];
        if (!v) return;
        if (allow_auto && v.IsScalar() && v.Scalar() == "auto") {
            out.reset();
            return;
        }
        try {
            out = v.as<double>();
        } catch (const YAML::Exception&) {
            issues_.push_back(where(key) + (allow_auto ? ": expected a number or 'auto'" : ": wrong type"));
        }
    }

    Reader section(const char* key) {
        seen_.insert(key);
        YAML::Node v = (node_ && node_.IsMap()) ? node_[key] : YAML::Node();
        return Reader(v, where(key), issues_);
    }

    bool has(const char* key) const { return node_ && node_.IsMap() && node_[key]; }

    void finish() {
        if (!node_ || !node_.IsMap()) return;
        for (const auto& kv : node_) {
            const auto k = kv.first.as<std::string>();
            if (!seen_.count(k)) issues_.push_back(where(k.c_str()) + ": unknown key");
        }
    }

    std::string where(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    YAML::Node node_;
    std::string path_;
    std::vector<std::string>& issues_;
    std::set<std::string> seen_;
};

void read_scalar(Reader r, ScalarSpec& s) {
    r.get("family", s.family);
    r.get("value", s.value);
    r.get("coeffs", s.coeffs);
    r.finish();
}

void read_kernel(Reader r, KernelSpec& k) {
    r.get("family", k.family);
    r.get("value", k.value);
    r.get("amp", k.amp);
    r.get("gamma", k.gamma);
    r.get("shift", k.shift);
    r.get("omega", k.omega);
    r.finish();
}

nlohmann::ordered_json scalar_json(const ScalarSpec& s) {
    nlohmann::ordered_json j{{"family", s.family}};
    if (s.family == "polynomial") {
        j["coeffs"] = s.coeffs;
    } else {
        j["value"] = s.value;
    }
    return j;
}

nlohmann::ordered_json kernel_json(const KernelSpec& k) {
    nlohmann::ordered_json j{{"family", k.family}};
    if (k.family == "constant") j["value"] = k.value;
    if (k.family == "gaussian" || k.family == "cosine_gaussian") {
        j["amp"] = k.amp;
        j["gamma"] = k.gamma;
    }
    if (k.family == "gaussian") j["shift"] = k.shift;
    if (k.family == "cosine_gaussian") j["omega"] = k.omega;
    return j;
}

template <class T>
nlohmann::ordered_json opt(const std::optional<T>& v, const char* none) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(none);
}

void positive(std::vector<std::string>& out, const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) out.push_back(std::string(name) + " must be positive");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : Error(ErrorKind::Config, join(issues)), issues_(std::move(issues)) {}

ScalarCoefficient ScalarSpec::build() const {
    if (family == "polynomial") return ScalarCoefficient::polynomial(coeffs);
    return ScalarCoefficient::constant(value);
}

KernelCoefficient KernelSpec::build() const {
    if (family == "constant") return KernelCoefficient::constant(value);
    if (family == "gaussian") return KernelCoefficient::gaussian(amp, gamma, shift);
    if (family == "cosine_gaussian") return KernelCoefficient::cosine_gaussian(amp, gamma, omega);
    return KernelCoefficient::zero();
}

ModelSpec ModelConfig::build() const {
    ModelSpec m;
    m.D = D;
    m.kappa = kappa;
    m.a = a.build();
    m.b = b.build();
    m.V = V.build();
    m.W = W.build();
    m.k_max = k_max;
    return m;
}

LargeTimeParams LargeTimeConfig::default_params() {
    LargeTimeParams p;
    p.theta = 2.0;
    p.eps = 0.05;
    return p;
}

oracle::SolverOptions OracleConfig::solver() const {
    oracle::SolverOptions o;
    o.dt = dt;
    o.parallel = parallel;
    return o;
}

std::vector<std::string> ExperimentConfig::check() const {
    std::vector<std::string> out;
    for (const auto* s : {&model.a, &model.V}) {
        if (s->family != "constant" && s->family != "polynomial") {
            out.push_back("unknown scalar family '" + s->family + "' (constant, polynomial)");
        }
    }
    for (const auto* k : {&model.b, &model.W}) {
        if (k->family != "zero" && k->family != "constant" && k->family != "gaussian" &&
            k->family != "cosine_gaussian") {
            out.push_back("unknown kernel family '" + k->family + "' (zero, constant, gaussian, cosine_gaussian)");
        }
    }
    if (out.empty()) {
        try {
            model.build().validate();
        } catch (const Error& e) {
            out.push_back(std::string("model: ") + e.what());
        }
    }
    if (ee.M < 2 || ee.M > 8) out.push_back("ee.M must be in [2, 8]");
    if (!(ee.t1 > ee.t0)) out.push_back("ee.t1 must exceed ee.t0");
    positive(out, "ee.rtol", ee.rtol);
    positive(out, "ee.atol", ee.atol);
    positive(out, "ee.max_step", ee.max_step);
    if (ee.samples < 2) out.push_back("ee.samples must be >= 2");
    if (ee.sigma && !(*ee.sigma > 0.0)) out.push_back("ee.sigma must be positive");
    if (!ee.alpha.empty() && static_cast<int>(ee.alpha.size()) != ee.M - 1) {
        out.push_back("ee.alpha must list alpha^(2..M), M-1 values");
    }
    if (ee.sigma.has_value() != ee.x.has_value()) out.push_back("ee.sigma and ee.x go together");
    positive(out, "germ.b", germ.b);
    if (coherent.n.empty()) out.push_back("coherent.n must not be empty");
    for (int n : coherent.n) {
        if (n < 0 || n > 60) out.push_back("coherent.n entries must be in [0, 60]");
    }
    for (double t : coherent.times) {
        if (t < ee.t0 || t > ee.t1) out.push_back("coherent.times must lie in [ee.t0, ee.t1]");
    }
    if (coherent.points < 16) out.push_back("coherent.points must be >= 16");
    positive(out, "coherent.half_width_sd", coherent.half_width_sd);
    try {
        largetime.params.validate();
    } catch (const Error& e) {
        out.push_back(std::string("largetime: ") + e.what());
    }
    positive(out, "largetime.t_end", largetime.t_end);
    if (largetime.t_steps < 2) out.push_back("largetime.t_steps must be >= 2");
    if (largetime.m_max < 0) out.push_back("largetime.m_max must be >= 0");
    positive(out, "largetime.mode_threshold", largetime.mode_threshold);
    if (!(largetime.x_max > largetime.x_min)) out.push_back("largetime.x_max must exceed x_min");
    if (largetime.points < 16) out.push_back("largetime.points must be >= 16");
    if (largetime.u2_panels < 2 || largetime.u2_panels % 2) out.push_back("largetime.u2_panels must be even");
    if (oracle.x_min.has_value() != oracle.x_max.has_value()) out.push_back("oracle.x_min and x_max go together");
    if (oracle.x_min && !(*oracle.x_max > *oracle.x_min)) out.push_back("oracle.x_max must exceed x_min");
    if (oracle.x_min && oracle.points < 16) out.push_back("oracle.points must be >= 16 with an explicit grid");
    if (oracle.boundary != "dirichlet" && oracle.boundary != "periodic") {
        out.push_back("oracle.boundary must be dirichlet or periodic");
    }
    if (oracle.boundary == "periodic" && !oracle.x_min) out.push_back("periodic oracle runs need x_min/x_max");
    positive(out, "oracle.dx_over_sqrt_D", oracle.dx_over_sqrt_D);
    positive(out, "oracle.k_sigma", oracle.k_sigma);
    if (oracle.dt) positive(out, "oracle.dt", *oracle.dt);
    if (oracle.times.empty()) out.push_back("oracle.times must not be empty");
    for (std::size_t i = 0; i < oracle.times.size(); ++i) {
        if (oracle.times[i] < ee.t0 || oracle.times[i] > ee.t1) out.push_back("oracle.times must lie in [ee.t0, ee.t1]");
        if (i && oracle.times[i] < oracle.times[i - 1]) out.push_back("oracle.times must be ascending");
    }
    if (sweep.D.size() < 2) out.push_back("sweep.D needs at least two values");
    for (double d : sweep.D) positive(out, "sweep.D entries", d);
    if (!(sweep.t > ee.t0) || sweep.t > ee.t1) out.push_back("sweep.t must lie in (ee.t0, ee.t1]");
    if (output.dir.empty()) out.push_back("output.dir must not be empty");
    if (output.precision < 6 || output.precision > 17) out.push_back("output.precision must be in [6, 17]");
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

nlohmann::ordered_json ExperimentConfig::resolved() const {
    nlohmann::ordered_json j;
    j["model"] = {{"D", model.D},
                  {"kappa", model.kappa},
                  {"k_max", model.k_max},
                  {"a", scalar_json(model.a)},
                  {"b", kernel_json(model.b)},
                  {"V", scalar_json(model.V)},
                  {"W", kernel_json(model.W)}};
    j["ee"] = {{"M", ee.M},         {"t0", ee.t0},       {"t1", ee.t1}, {"rtol", ee.rtol},
               {"atol", ee.atol},   {"max_step", ee.max_step}, {"samples", ee.samples}, {"sigma", opt(ee.sigma, "coherent")},
               {"x", opt(ee.x, "coherent")}, {"alpha", ee.alpha}};
    j["germ"] = {{"b", germ.b}};
    j["coherent"] = {{"n", coherent.n},
                     {"x0", coherent.x0},
                     {"times", coherent.times},
                     {"points", coherent.points},
                     {"half_width_sd", coherent.half_width_sd}};
    const auto& p = largetime.params;
    j["largetime"] = {{"a", p.a},
                      {"b0", p.b0},
                      {"gamma", p.gamma},
                      {"kappa", p.kappa},
                      {"D", p.D},
                      {"beta0", p.beta0},
                      {"eps", p.eps},
                      {"theta", p.theta},
                      {"x0", p.x0},
                      {"N", p.N},
                      {"n", p.n},
                      {"t_end", largetime.t_end},
                      {"t_steps", largetime.t_steps},
                      {"m_max", largetime.m_max},
                      {"mode_threshold", largetime.mode_threshold},
                      {"x_min", largetime.x_min},
                      {"x_max", largetime.x_max},
                      {"points", largetime.points},
                      {"u2", largetime.u2},
                      {"u2_panels", largetime.u2_panels}};
    j["oracle"] = {{"x_min", opt(oracle.x_min, "auto")},
                   {"x_max", opt(oracle.x_max, "auto")},
                   {"points", oracle.points},
                   {"boundary", oracle.boundary},
                   {"dx_over_sqrt_D", oracle.dx_over_sqrt_D},
                   {"k_sigma", oracle.k_sigma},
                   {"dt", opt(oracle.dt, "auto")},
                   {"parallel", oracle.parallel},
                   {"times", oracle.times}};
    j["sweep"] = {{"D", sweep.D}, {"t", sweep.t}};
    j["output"] = {{"dir", output.dir}, {"precision", output.precision}};
    return j;
}

ExperimentConfig parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError({std::string("syntax: ") + e.what()});
    }
    std::vector<std::string> issues;
    ExperimentConfig c;
    Reader top(root, "", issues);

    {
        auto r = top.section("model");
        r.get("D", c.model.D);
        r.get("kappa", c.model.kappa);
        r.get("k_max", c.model.k_max);
        read_scalar(r.section("a"), c.model.a);
        read_kernel(r.section("b"), c.model.b);
        read_scalar(r.section("V"), c.model.V);
        read_kernel(r.section("W"), c.model.W);
        r.finish();
    }
    {
        auto r = top.section("ee");
        r.get("M", c.ee.M);
        r.get("t0", c.ee.t0);
        r.get("t1", c.ee.t1);
        r.get("rtol", c.ee.rtol);
        r.get("atol", c.ee.atol);
        r.get("max_step", c.ee.max_step);
        r.get("samples", c.ee.samples);
        r.get("sigma", c.ee.sigma, false);
        r.get("x", c.ee.x, false);
        r.get("alpha", c.ee.alpha);
        r.finish();
    }
    {
        auto r = top.section("germ");
        r.get("b", c.germ.b);
        r.finish();
    }
    {
        auto r = top.section("coherent");
        r.get("n", c.coherent.n);
        r.get("x0", c.coherent.x0);
        r.get("times", c.coherent.times);
        r.get("points", c.coherent.points);
        r.get("half_width_sd", c.coherent.half_width_sd);
        r.finish();
    }
    {
        auto r = top.section("largetime");
        auto& p = c.largetime.params;
        r.get("a", p.a);
        r.get("b0", p.b0);
        r.get("gamma", p.gamma);
        r.get("kappa", p.kappa);
        r.get("D", p.D);
        r.get("beta0", p.beta0);
        r.get("eps", p.eps);
        r.get("theta", p.theta);
        r.get("x0", p.x0);
        r.get("N", p.N);
        r.get("n", p.n);
        r.get("t_end", c.largetime.t_end);
        r.get("t_steps", c.largetime.t_steps);
        r.get("m_max", c.largetime.m_max);
        r.get("mode_threshold", c.largetime.mode_threshold);
        r.get("x_min", c.largetime.x_min);
        r.get("x_max", c.largetime.x_max);
        r.get("points", c.largetime.points);
        r.get("u2", c.largetime.u2);
        r.get("u2_panels", c.largetime.u2_panels);
        r.finish();
    }
    {
        auto r = top.section("oracle");
        r.get("x_min", c.oracle.x_min, false);
        r.get("x_max", c.oracle.x_max, false);
        r.get("points", c.oracle.points);
        r.get("boundary", c.oracle.boundary);
        r.get("dx_over_sqrt_D", c.oracle.dx_over_sqrt_D);
        r.get("k_sigma", c.oracle.k_sigma);
        r.get("dt", c.oracle.dt, true);
        r.get("parallel", c.oracle.parallel);
        r.get("times", c.oracle.times);
        r.finish();
    }
    {
        auto r = top.section("sweep");
        r.get("D", c.sweep.D);
        r.get("t", c.sweep.t);
        r.finish();
    }
    {
        auto r = top.section("output");
        r.get("dir", c.output.dir);
        r.get("precision", c.output.precision);
        r.finish();
    }
    top.finish();

    // fields with the wrong type keep their defaults, so range checks still apply
    for (auto& i : c.check()) issues.push_back(std::move(i));
    std::sort(issues.begin(), issues.end());
    issues.erase(std::unique(issues.begin(), issues.end()), issues.end());
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace fkpp::app
