#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <string>

#include "fkpp/commands.hpp"
#include "fkpp/config.hpp"
#include "fkpp/csv.hpp"

using namespace fkpp::app;

namespace {

std::vector<std::string> issues_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.issues();
    }
    return {};
}

bool has(const std::vector<std::string>& v, const std::string& needle) {
    return std::any_of(v.begin(), v.end(), [&](const auto& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST_SUITE("app") {
    TEST_CASE("empty config resolves to the defaults") {
        const auto c = parse_config("{}");
        CHECK(c.model.D == 0.01);
        CHECK(c.ee.M == 2);
        CHECK(c.largetime.params.theta == 2.0);
        CHECK(c.largetime.params.eps == doctest::Approx(0.05));
        CHECK_FALSE(c.oracle.dt.has_value());
        const auto j = c.resolved();
        CHECK(j["oracle"]["dt"] == "auto");
        CHECK(j["model"]["b"]["family"] == "gaussian");
    }

    TEST_CASE("values are read per section") {
        const auto c = parse_config(R"(
model:
  D: 0.005
  b: {family: gaussian, amp: 2, gamma: 0.5}
ee: {M: 3, t1: 2}
oracle: {dt: 0.001, x_min: -3, x_max: 3, points: 101, boundary: periodic}
)");
        CHECK(c.model.D == 0.005);
        CHECK(c.model.b.amp == 2.0);
        CHECK(c.ee.M == 3);
        REQUIRE(c.oracle.dt.has_value());
        CHECK(*c.oracle.dt == 0.001);
        CHECK(c.oracle.boundary == "periodic");
    }

    TEST_CASE("every problem is reported at once") {
        const auto v = issues_of("model:\n  D: -1\n  bogus: 3\nee:\n  M: x\nextra: 1\n");
        CHECK(has(v, "model.bogus: unknown key"));
        CHECK(has(v, "ee.M: wrong type"));
        CHECK(has(v, "D must be positive"));
        CHECK(has(v, "extra: unknown key"));
        CHECK(std::is_sorted(v.begin(), v.end()));
    }

    TEST_CASE("syntax and range errors") {
        CHECK(has(issues_of("ee: [1\n"), "syntax"));
        CHECK(has(issues_of("oracle: {dt: fast}"), "'auto'"));
        CHECK(has(issues_of("oracle: {boundary: open}"), "dirichlet or periodic"));
        CHECK(has(issues_of("sweep: {D: [0.01]}"), "at least two"));
        CHECK(has(issues_of("ee: {M: 12}"), "ee.M"));
        CHECK(has(issues_of("model: {b: {family: lorentz}}"), "lorentz"));
        CHECK_THROWS_AS(load_config("/nonexistent/file.yaml"), ConfigError);
    }

    TEST_CASE("csv formatting is deterministic and quotes text") {
        CsvTable t({"a", "b"}, 6);
        t.row({1.0 / 3.0, 2.0});
        t.text_row({"x,y", "say \"hi\""});
        CHECK(t.str() == "a,b\n0.333333,2\n\"x,y\",\"say \"\"hi\"\"\"\n");
        CHECK_THROWS(t.row({1.0}));
    }

    TEST_CASE("commands build artifacts in memory only") {
        const auto dir = std::filesystem::temp_directory_path() / "fkpp_app_test_never_written";
        std::filesystem::remove_all(dir);
        const auto c = parse_config("ee: {samples: 11}");
        const auto r = run_command(Command::EE, c, {}, dir.string());
        CHECK_FALSE(std::filesystem::exists(dir));
        CHECK(r.artifacts.files().count("ee_trajectory.csv") == 1);
        CHECK(r.artifacts.files().count("ee_trajectory.csv.meta") == 1);
        CHECK(r.artifacts.files().count("plot_ee.py") == 1);
        const auto& csv = r.artifacts.files().at("ee_trajectory.csv");
        CHECK(csv.rfind("t,sigma,x,alpha2,sigma_closed,x_closed,alpha2_closed\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
        const auto meta = nlohmann::json::parse(r.artifacts.files().at("ee_trajectory.csv.meta"));
        CHECK(meta["command"] == "ee");
        CHECK(meta["results"]["max_abs_deviation_closed_form"].get<double>() < 1e-8);
    }

    TEST_CASE("repeated runs are byte identical") {
        const auto c = parse_config("largetime: {t_steps: 5, points: 101, m_max: 4}");
        RunOptions one, three;
        three.jobs = 3;
        const auto a = run_command(Command::LargeTime, c, one);
        const auto b = run_command(Command::LargeTime, c, three);
        CHECK(a.artifacts.files() == b.artifacts.files());
    }

    TEST_CASE("command names round trip") {
        for (const auto& n : command_names()) {
            const auto c = parse_command(n);
            REQUIRE(c.has_value());
            CHECK(std::string(command_name(*c)) == n);
        }
        CHECK_FALSE(parse_command("plot").has_value());
    }
}
