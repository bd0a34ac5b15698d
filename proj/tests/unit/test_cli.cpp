#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "stopflow_cli/commands.hpp"

using stopflow::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string tmp_path(const std::string& name) {
    const char* dir = std::getenv("STOPFLOW_TMPDIR");
    return std::string(dir ? dir : "/tmp") + "/" + name;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) out.push_back(line);
    return out;
}

std::vector<double> split_doubles(const std::string& line) {
    std::vector<double> out;
    std::istringstream is(line);
    for (std::string cell; std::getline(is, cell, ',');) out.push_back(std::stod(cell));
    return out;
}

}  // namespace

TEST_CASE("classify") {
    auto r = call({"classify", "--lambda", "-0.666667", "--beta", "2"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["case"] == "e");
    CHECK(j["stable_cycle_period"] == 4);

    r = call({"classify", "--lambda", "0.5", "--beta", "0.5"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["case"] == "a");

    r = call({"classify", "--lambda", "0.3", "--a", "-1.8", "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# stopflow v1\n", 0) == 0);

    r = call({"classify", "--lambda", "1.5", "--beta", "0"});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("usage errors") {
    CHECK(call({}).code == 2);
    CHECK(call({"bogus"}).code == 2);
    CHECK(call({"classify", "--lambda", "abc", "--beta", "0"}).code == 2);
    CHECK(call({"classify", "--lambda", "0.2", "--beta", "0", "--format", "xml"}).code == 2);
    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("simulate ends on the 2-cycle") {
    const auto r = call({"simulate", "--lambda", "0.3", "--a", "-1.8", "--x0", "0.1", "--s0", "0", "--n", "1000"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() >= 4);
    CHECK(ls[0] == "# stopflow v1");
    CHECK(ls[1] == "n,x,s,p");
    CHECK(ls.size() == 2 + 1001);
    const auto last = split_doubles(ls.back());
    const auto prev = split_doubles(ls[ls.size() - 2]);
    CHECK(std::abs(std::abs(last[1]) - 18.0 / 13.0) < 1e-9);
    CHECK(last[1] == doctest::Approx(-prev[1]));
}

TEST_CASE("hitting-map breakpoints") {
    const auto r = call({"hitting-map", "--lambda", "-0.5", "--a", "2", "--kmax", "10", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["ladder"].size() == 10);
    CHECK(j["ladder"][0]["q"].get<double>() == doctest::Approx(20.0 / 3.0).epsilon(1e-14));
    CHECK(j["ladder"][0]["r"].get<double>() == doctest::Approx(8.0 / 3.0).epsilon(1e-14));

    const auto csv = call({"hitting-map", "--lambda", "-0.5", "--a", "2", "--kmax", "10", "--format", "csv"});
    REQUIRE(csv.code == 0);
    CHECK(lines(csv.out)[1] == "kind,k,left,right,slope,intercept");
    CHECK(call({"hitting-map", "--lambda", "0.5", "--a", "2"}).code == 2);
}

TEST_CASE("a one-cell sweep agrees with classify") {
    const auto r = call({"sweep", "--lambda-min", "-0.5", "--lambda-max", "-0.5", "--lambda-res", "1", "--beta-min",
                         "1.5", "--beta-max", "1.5", "--beta-res", "1", "--starts", "4", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["cells"].size() == 1);
    const auto c = call({"classify", "--lambda", "-0.5", "--beta", "1.5"});
    CHECK(j["cells"][0]["case"] == nlohmann::json::parse(c.out)["case"]);
    CHECK(j["cells"][0]["predicted_period"] == nlohmann::json::parse(c.out)["stable_cycle_period"]);
}

TEST_CASE("output is deterministic") {
    const std::vector<std::string> args{"sweep", "--resolution", "3", "--starts", "3", "--transient", "500",
                                        "--window", "128", "--seed", "5"};
    const auto a = call(args);
    const auto b = call(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);

    const auto d1 = call({"dsge", "--preset", "fig7b", "--n", "200"});
    const auto d2 = call({"dsge", "--preset", "fig7b", "--n", "200"});
    REQUIRE(d1.code == 0);
    CHECK(d1.out == d2.out);
    CHECK(lines(d1.out)[1] == "n,y,u,v,s,sigma");
}

TEST_CASE("config file with flag override") {
    const auto cfg = tmp_path("stopflow_cli_config.json");
    {
        std::ofstream os(cfg);
        os << R"({"lambda": 0.5, "beta": 0.5, "format": "json"})";
    }
    auto r = call({"classify", "--config", cfg});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["case"] == "a");

    r = call({"classify", "--config", cfg, "--beta", "1.5"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["case"] == "b");

    CHECK(call({"classify", "--config", tmp_path("does_not_exist.json")}).code == 3);
}

TEST_CASE("file output and I/O errors") {
    const auto path = tmp_path("stopflow_cli_out.json");
    auto r = call({"classify", "--lambda", "0.5", "--beta", "0.5", "--out", path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream is(path);
    CHECK(nlohmann::json::parse(is)["case"] == "a");

    r = call({"classify", "--lambda", "0.5", "--beta", "0.5", "--out", "/nonexistent_dir/x.json"});
    CHECK(r.code == 3);
}

TEST_CASE("dsge shocks file") {
    const auto path = tmp_path("stopflow_cli_shocks.json");
    {
        std::ofstream os(path);
        os << R"({"eps": [0.1, 0, 0], "eta": [0, 0, 0], "xi": [0, 0, 0]})";
    }
    auto r = call({"dsge", "--preset", "fig7a", "--y0", "0", "--u0", "0", "--v0", "0", "--s0", "0", "--n", "3",
                   "--shocks", path});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 2 + 4);
    CHECK(split_doubles(ls[3])[1] != 0.0);

    r = call({"dsge", "--preset", "fig7a", "--n", "10", "--shocks", path});
    CHECK(r.code == 2);
    CHECK(call({"dsge", "--preset", "nope"}).code == 2);
}

TEST_CASE("omega-map on its default range") {
    const auto r = call({"omega-map", "--resolution", "3"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 2 + 9);
    CHECK(ls[1] == "beta,inv_lambda,lambda,a,omega_k,k0,predicted_period");
    // beta = 2, -1/lambda = 23/3 lies in the k = 3 set: 7 <= 23/3 < 8.
    const auto cell = split_doubles(ls[2 + 7]);
    CHECK(cell[0] == doctest::Approx(2.0));
    CHECK(cell[4] == 3);
    CHECK(cell[6] == 8);
    CHECK(call({"omega-map", "--beta-min", "0.5"}).code == 2);
}
