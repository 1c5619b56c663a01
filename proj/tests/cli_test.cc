#include <doctest.h>

#include <stdexcept>

#include <chrono>
#include <cstdlib>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"

using nlohmann::json;

namespace {

struct Invocation {
    int code = -1;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "fockherald");
    std::vector<const char *> argv;
    for (const auto &a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Invocation r;
    r.code = fockherald::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> result;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) result.push_back(line);
    return result;
}

std::vector<std::string> split(const std::string &row) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t comma; (comma = row.find(',', start)) != std::string::npos; start = comma + 1) {
        fields.push_back(row.substr(start, comma - start));
    }
    fields.push_back(row.substr(start));
    return fields;
}

}  // namespace

TEST_CASE("params nls") {
    auto r = invoke({"params", "nls"});
    CHECK(r.code == 0);
    CHECK(r.out.find("gamma1=0.7573593128807") != std::string::npos);
    CHECK(r.out.find("gamma2=0.2265409196609") != std::string::npos);

    auto j = json::parse(invoke({"params", "nls", "--format", "json"}).out);
    CHECK(std::abs(j["residual_vacuum_vs_one"].get<double>()) < 1e-12);
    CHECK(std::abs(j["residual_vacuum_vs_two"].get<double>()) < 1e-12);
}

TEST_CASE("params teleport") {
    auto r = invoke({"params", "teleport", "--gamma2", "0.1", "--format", "json"});
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["gamma1"].get<double>() == doctest::Approx(0.15625).epsilon(1e-15));

    auto bad = invoke({"params", "teleport", "--gamma2", "0.6"});
    CHECK(bad.code == 2);
    auto e = json::parse(bad.err);
    CHECK(e["error"] == "gamma2 must lie in (0,0.5)");
    CHECK(e["exit_code"] == 2);

    CHECK(invoke({"params", "teleport"}).code == 2);
    CHECK(invoke({"params", "bogus"}).code == 2);
}

TEST_CASE("run nls with solved couplings") {
    auto r = invoke({"run", "nls", "--c0", "1", "--c1", "1", "--c2", "1", "--format", "json"});
    CHECK(r.code == 0);
    CHECK(r.err.find("normalized") != std::string::npos);
    auto j = json::parse(r.out);
    CHECK(j["success_probability"].get<double>() == doctest::Approx(0.0425155330752088).epsilon(1e-10));
    CHECK(j["paper_claimed_probability"].get<double>() == 0.0425);
    CHECK(j["fidelity"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("run nls with explicit couplings") {
    auto r = invoke({"run", "nls", "--gamma1", "0", "--gamma2", "0.2", "--cutoff", "16", "--format", "json"});
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    CHECK(json::parse(r.out)["success_probability"].get<double>() == doctest::Approx(0.16).epsilon(1e-13));

    CHECK(invoke({"run", "nls", "--gamma2", "0.2"}).code == 2);
}

TEST_CASE("run teleport-qubit in every format") {
    std::vector<std::string> base{"run", "teleport-qubit", "--gamma2", "0.1", "--c0", "1", "--c1", "1"};

    auto pretty = invoke(base);
    CHECK(pretty.code == 0);
    CHECK(pretty.out.find("success_probability  0.0759375") != std::string::npos);
    CHECK(pretty.out.find("herald outcomes") != std::string::npos);

    auto json_args = base;
    json_args.insert(json_args.end(), {"--format", "json"});
    auto j = json::parse(invoke(json_args).out);
    CHECK(j["gamma1"].get<double>() == doctest::Approx(0.15625));

    auto csv_args = base;
    csv_args.insert(csv_args.end(), {"--format", "csv"});
    auto csv = lines(invoke(csv_args).out);
    REQUIRE(csv.size() == 2);
    CHECK(csv[0] == "protocol,gamma1,gamma2,success_probability,paper_claimed_probability,fidelity,leaked_norm");
    auto fields = split(csv[1]);
    REQUIRE(fields.size() == 7);
    CHECK(fields[0] == "teleport-qubit");
    CHECK(std::stod(fields[1]) == doctest::Approx(0.15625).epsilon(1e-15));
    CHECK(std::stod(fields[2]) == 0.1);
    CHECK(std::stod(fields[3]) == doctest::Approx(0.0759375).epsilon(1e-14));
}

TEST_CASE("run input validation") {
    CHECK(invoke({"run", "teleport-qubit", "--gamma2", "0.1", "--c0", "0"}).code == 2);
    CHECK(invoke({"run", "teleport-qubit", "--gamma2", "0.1", "--c2", "1"}).code == 2);
    CHECK(invoke({"run", "teleport-qubit"}).code == 2);
    CHECK(invoke({"run", "teleport-qubit", "--gamma2", "0.3"}).code == 2);
    CHECK(invoke({"run", "teleport-qubit", "--gamma2", "0.1", "--format", "xml"}).code == 2);
    CHECK(invoke({"run", "nope"}).code == 2);
}

TEST_CASE("run complex coefficients") {
    auto r = invoke({"run", "teleport-qutrit", "--gamma2", "0.1", "--c0", "1", "--c1-im", "1", "--c2-re", "-1",
                     "--cutoff", "6", "--format", "json"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["fidelity"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(j["success_probability"].get<double>() == doctest::Approx(0.0759375 * 0.0759375).epsilon(1e-12));
}

TEST_CASE("sweep") {
    auto r = invoke({"sweep", "teleport-qubit", "--grid", "0.1,0.5,0.2"});
    CHECK(r.code == 0);
    auto rows = lines(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "gamma2,gamma1,probability,fidelity,leaked_norm,error");
    auto first = split(rows[1]);
    REQUIRE(first.size() == 6);
    CHECK(std::stod(first[0]) == 0.1);
    CHECK(std::stod(first[1]) == doctest::Approx(0.15625).epsilon(1e-15));
    CHECK(std::stod(first[2]) == doctest::Approx(0.0759375).epsilon(1e-14));
    CHECK(first[5].empty());
    CHECK(rows[2] == "0.5,,,,,\"gamma2 must lie in (0,0.5)\"");

    SUBCASE("single point agrees with run") {
        auto single = lines(invoke({"sweep", "teleport-qubit", "--grid", "0.2", "--c0", "1"}).out);
        auto run = json::parse(
            invoke({"run", "teleport-qubit", "--gamma2", "0.2", "--c0", "1", "--format", "json"}).out);
        REQUIRE(single.size() == 2);
        CHECK(std::stod(split(single[1])[2]) == run["success_probability"].get<double>());
    }

    SUBCASE("byte-identical across runs and thread counts") {
        std::vector<std::string> args{"sweep", "teleport-qutrit", "--from", "0.01", "--to", "0.3", "--points", "12",
                                      "--cutoff", "6"};
        auto first = invoke(args).out;
        CHECK(invoke(args).out == first);
        args.insert(args.end(), {"--threads", "4"});
        CHECK(invoke(args).out == first);
    }

    SUBCASE("hundred-point qubit sweep is fast") {
        auto start = std::chrono::steady_clock::now();
        auto big = invoke({"sweep", "teleport-qubit", "--from", "0.001", "--to", "0.249", "--points", "100"});
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        CHECK(big.code == 0);
        CHECK(lines(big.out).size() == 101);
        CHECK(seconds < 10.0);
    }

    CHECK(invoke({"sweep", "nls", "--grid", "0.1"}).code == 2);
    CHECK(invoke({"sweep", "teleport-qubit"}).code == 2);
}

TEST_CASE("oracle-check") {
    auto zero = invoke({"oracle-check", "--gamma", "0"});
    CHECK(zero.code == 0);
    CHECK(zero.out.find("max_deviation=0 PASS") != std::string::npos);

    auto weak = invoke({"oracle-check", "--gamma", "0.04"});
    CHECK(weak.code == 0);
    CHECK(weak.out.find("PASS") != std::string::npos);

    CHECK(invoke({"oracle-check", "--gamma", "0.3", "--cutoff", "17"}).code == 2);
    CHECK(invoke({"oracle-check", "--gamma", "1.0"}).code == 2);
    CHECK(invoke({"oracle-check"}).code == 2);
}

TEST_CASE("cutoff from the environment") {
    ::setenv("FOCKHERALD_CUTOFF", "3", 1);
    auto r = invoke({"run", "teleport-qubit", "--gamma2", "0.1", "--format", "json"});
    ::unsetenv("FOCKHERALD_CUTOFF");
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["output_state"]["cutoff"] == 3);
}

TEST_CASE("help and unknown commands") {
    CHECK(invoke({"--help"}).code == 0);
    CHECK(invoke({"frobnicate"}).code == 2);
}
