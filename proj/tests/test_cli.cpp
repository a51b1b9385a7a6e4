#include <doctest.h>

#include "oulab/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace oulab::cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    return lines;
}

std::string column(const std::string& row, int index) {
    std::stringstream ss(row);
    std::string cell;
    for (int i = 0; i <= index; ++i) std::getline(ss, cell, ',');
    return cell;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("number and list parsing") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1.0 / 0.0) == "inf");
    CHECK(parse_int_list("2,4, 8") == std::vector<int>{2, 4, 8});
    CHECK(parse_double_list("0.25,1e1") == std::vector<double>{0.25, 10.0});
    CHECK_THROWS(parse_int_list("2,x"));
    CHECK_THROWS(parse_double_list("1.5abc"));
}

TEST_CASE("diverge output is byte-identical across runs") {
    const std::vector<std::string> args{"--seed", "7", "diverge", "--m", "2,4,8"};
    const Result a = call(args);
    const Result b = call(args);
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    const auto lines = data_lines(a.out);
    REQUIRE(lines.size() >= 4);
    CHECK(lines[0] == "m,delta,D_m,sqq_bound,chain_bound,sqrt_harmonic,kernel_scale,time_weighted");
    CHECK(a.out.find("# oulab ") == 0);
    CHECK(a.out.find("chain inequality D_m >= sqq_bound >= chain_bound: holds") != std::string::npos);
}

TEST_CASE("constant spectrum is a usage error") {
    const Result r = call({"diverge", "--spectrum", "constant:lambda=1", "--m", "2"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("scalar-bound") != std::string::npos);
}

TEST_CASE("kernel scales differ by a factor 2 in the table") {
    const Result d = call({"diverge", "--m", "16", "--kernel-scale", "derived"});
    const Result p = call({"diverge", "--m", "16", "--kernel-scale", "paper_si1"});
    REQUIRE(d.code == kExitOk);
    REQUIRE(p.code == kExitOk);
    const double vd = std::stod(column(data_lines(d.out)[1], 2));
    const double vp = std::stod(column(data_lines(p.out)[1], 2));
    CHECK(vd / vp == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(call({"diverge", "--m", "16", "--kernel-scale", "half"}).code == kExitUsage);
}

TEST_CASE("scalar-bound row count and empty suites") {
    const Result r = call({"scalar-bound", "--lambda", "1,4", "--f", "tanh,sign", "--m", "1,2", "--grid-points", "5"});
    CHECK(r.code == kExitOk);
    CHECK(data_lines(r.out).size() == 1 + 2 * 2 * 2);
    CHECK(call({"scalar-bound", "--f", ""}).code == kExitUsage);
    CHECK(call({"scalar-bound", "--f", "cosh"}).code == kExitUsage);
}

TEST_CASE("witness") {
    const Result r = call({"witness", "--n", "", "--m", "3"});
    CHECK(r.code == kExitOk);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[1].rfind("inf,3,", 0) == 0);
    CHECK(call({"witness", "--m", "1"}).code == kExitUsage);
}

TEST_CASE("plot schema detection") {
    CHECK(detect_schema("m,delta,D_m,sqq_bound,chain_bound,sqrt_harmonic,kernel_scale,time_weighted") == "diverge");
    CHECK(detect_schema("lambda,f_name,m,sup_value,bound,pass") == "scalar");
    CHECK(detect_schema("n,m,delta,value,limit_F0") == "witness");
    CHECK(detect_schema("m,ratio,ratio_std_error,D_m") == "p2");
    CHECK(detect_schema("a,b") == "");
    const std::string script = plot_script("# c\nn,m,delta,value,limit_F0\n1,8,1,0.5,1.6\ninf,8,1,1.6,1.6\n");
    CHECK(script.find("witness.png") != std::string::npos);
    CHECK(script.find("math.inf") != std::string::npos);
    CHECK_THROWS_AS(plot_script("x,y\n1,2\n"), std::invalid_argument);

    const std::string path = "cli_plot_input.csv";
    write_file(path, "x,y\n1,2\n");
    CHECK(call({"plot", "--in", path}).code == kExitUsage);
    write_file(path, "lambda,f_name,m,sup_value,bound,pass\n1,tanh,1,0.8,2.2,true\n");
    const Result ok = call({"plot", "--in", path});
    CHECK(ok.code == kExitOk);
    CHECK(ok.out.find("scalar_bound.png") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("config file values are overridden by flags") {
    const std::string path = "cli_test.cfg";
    write_file(path, "# comment\nseed = 11\nm = 2,4\nkernel_scale = paper_si1\n");
    const Result from_file = call({"--config", path, "diverge"});
    REQUIRE(from_file.code == kExitOk);
    auto lines = data_lines(from_file.out);
    CHECK(lines.size() == 3);
    CHECK(column(lines[1], 6) == "paper_si1");
    CHECK(from_file.out.find("# seed: 11") != std::string::npos);
    const Result overridden = call({"--config", path, "diverge", "--m", "8"});
    REQUIRE(overridden.code == kExitOk);
    lines = data_lines(overridden.out);
    CHECK(lines.size() == 2);
    CHECK(column(lines[1], 0) == "8");
    write_file(path, "no equals sign\n");
    CHECK(call({"--config", path, "diverge"}).code == kExitUsage);
    std::remove(path.c_str());
    CHECK(call({"--config", "missing.cfg", "diverge"}).code == kExitUsage);
}

TEST_CASE("usage errors") {
    CHECK(call({"diverge", "--bogus"}).code == kExitUsage);
    CHECK(call({"--format", "xml", "diverge"}).code == kExitUsage);
    CHECK(call({"frobnicate"}).code == kExitUsage);
    CHECK(call({"diverge", "--m", "1"}).code == kExitUsage);
}

TEST_CASE("output preamble records the invocation") {
    const Result r = call({"--seed", "5", "p2-contrast", "--m", "2", "--points", "20"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("# command: p2-contrast") != std::string::npos);
    CHECK(r.out.find("# seed: 5") != std::string::npos);
    CHECK(data_lines(r.out)[0] == "m,ratio,ratio_std_error,D_m");
}

TEST_CASE("verify pde") {
    const Result r = call({"verify", "--level", "pde"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("all checks passed") != std::string::npos);
}

TEST_CASE("output file") {
    const std::string path = "cli_out.csv";
    CHECK(call({"--out", path, "diverge", "--m", "2"}).code == kExitOk);
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str().find("m,delta,D_m") != std::string::npos);
    std::remove(path.c_str());
}

}  // TEST_SUITE
