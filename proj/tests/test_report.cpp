#include "hplab/report.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hplab;
using report::Json;

TEST_CASE("number formatting round-trips")
{
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, 1e-5}) {
        CHECK(std::stod(report::format_number(x)) == x);
    }
    CHECK(report::format_number(NAN) == "nan");
    CHECK(report::format_number(INFINITY) == "inf");
    CHECK(report::format_number(-INFINITY) == "-inf");
}

TEST_CASE("residual report schema")
{
    ResidualReport r;
    r.family = "f";
    r.equation = "e";
    r.eta = {1, 2};
    r.t = {0};
    r.max_abs_residual = 2e-12;
    r.argmax_eta = 2;
    const Json j = report::residual_json(r);
    for (const char* key : {"family", "equation", "grid", "max_abs_residual", "mean_abs_residual", "argmax"}) {
        CHECK(j.contains(key));
    }
    CHECK(j["grid"]["eta"].size() == 2);
    CHECK(j["argmax"]["eta"] == 2.0);
}

TEST_CASE("catalog entry schema")
{
    const Json j = report::family_json(make_family("theorem22-blowup", {}));
    CHECK(j["name"] == "theorem22-blowup");
    CHECK(j["params"]["t0"] == 1.0);
    CHECK(j["validity"]["t"]["hi"] == 1.0);
    CHECK(j["validity"]["eta"]["hi"] == "inf");
    CHECK(j["equation_src"].get<std::string>().find("u*lap(u)") != std::string::npos);
}

TEST_CASE("snapshot csv")
{
    const RadialGrid g(0.5, 1.5, 11);
    Snapshot s;
    for (std::size_t i = 0; i < g.size(); ++i) {
        s.u.emplace_back(1.0 + i, 0.5);
        s.exact.emplace_back(1.0 + i, 0.0);
    }
    const std::string text = report::snapshot_csv(s, g);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "eta,u_real,u_imag,exact_real,exact_imag,abs_err");
    std::getline(in, line);
    CHECK(line == "0.5,1,0.5,1,0,0.5");
    int rows = 1;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 11);
}

TEST_CASE("atomic writes replace the target")
{
    const auto dir = std::filesystem::temp_directory_path() / "hplab_report_test";
    std::filesystem::create_directories(dir);
    const auto p = dir / "x.json";
    report::write_atomic(p, "first");
    report::write_atomic(p, "second");
    std::ifstream in(p);
    std::string s;
    std::getline(in, s);
    CHECK(s == "second");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
    CHECK(files == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("timestamp shape")
{
    const std::string ts = report::utc_timestamp();
    CHECK(ts.size() == 20);
    CHECK(ts.back() == 'Z');
}
