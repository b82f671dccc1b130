#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code;
    std::string out;
};

// stdout and stderr merged
Run run(const std::string& args) {
    const std::string cmd = std::string("\"") + CHIRAL_CLI_PATH + "\" " + args + " 2>&1";
    FILE* p = ::popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    const int status = ::pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

std::filesystem::path tmp(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("cli: single atom steady state") {
    const auto cfg = tmp("chiral_cli_one.json");
    std::ofstream(cfg) << R"({"n_atoms": 1, "xi": 0.5, "directionality": 0.0})";
    const Run r = run("steady --config " + cfg.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("site,re_sigma,im_sigma,population,normalized") != std::string::npos);
    CHECK(r.out.find("\n1,") != std::string::npos);
    CHECK(r.out.find(",1\n") != std::string::npos);
    std::filesystem::remove(cfg);
}

TEST_CASE("cli: spectrum at the critical point") {
    const Run r = run("spectrum -n 100 --xi 0 -d 0");
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    int free_modes = 0, rows = 0;
    double top = 0.0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("n,", 0) == 0) continue;
        ++rows;
        const auto a = line.find(',');
        const auto b = line.find(',', a + 1);
        const double rate = std::stod(line.substr(a + 1, b - a - 1));
        if (std::abs(rate) < 1e-10) ++free_modes;
        top = std::max(top, rate);
    }
    CHECK(rows == 100);
    CHECK(free_modes == 99);
    CHECK(top == doctest::Approx(50.0));
}

TEST_CASE("cli: error reporting") {
    Run r = run("phase-diagram --d-grid '' --sizes 20 --out-dir " + tmp("chiral_cli_empty").string());
    CHECK(r.code == 2);
    CHECK(r.out.find("error: {\"kind\":") != std::string::npos);

    const auto cfg = tmp("chiral_cli_bad.json");
    std::ofstream(cfg) << R"({"n_atoms": 5, "directionalty": 0.2})";
    r = run("steady --config " + cfg.string());
    CHECK(r.code == 2);
    CHECK(r.out.find("\"usage\"") != std::string::npos);
    CHECK(r.out.find("directionalty") != std::string::npos);
    std::filesystem::remove(cfg);

    r = run("recipe fig99");
    CHECK(r.code == 2);
    CHECK(r.out.find("fig1b") != std::string::npos);

    r = run("steady -n 0");
    CHECK(r.code == 2);
}

TEST_CASE("cli: phase diagram is independent of the worker count") {
    const auto a = tmp("chiral_cli_w1");
    const auto b = tmp("chiral_cli_w8");
    const std::string grid = "--d-grid 0,0.4,1 --xi-grid 0.3,1.4,2.4 --sizes 20,30,40 ";
    REQUIRE(run("--workers 1 phase-diagram " + grid + "--out-dir " + a.string()).code == 0);
    REQUIRE(run("--workers 8 phase-diagram " + grid + "--out-dir " + b.string()).code == 0);
    const std::string ca = slurp(a / "phase_diagram.csv");
    CHECK(!ca.empty());
    CHECK(ca == slurp(b / "phase_diagram.csv"));
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
}

TEST_CASE("cli: fit") {
    const Run r = run("fit power-law --sizes 25,50,100 --values 13.61,20.89,27.65");
    CHECK(r.code == 0);
    CHECK(r.out.find("alpha") != std::string::npos);
}
