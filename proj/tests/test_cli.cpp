#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(CFDIM_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    r.status = pclose(pipe);
    return r;
}

// CSV body: everything after the '#'-prefixed metadata header lines
std::string csv_body(const std::string& out) {
    std::string body;
    std::size_t pos = 0;
    while (pos < out.size()) {
        std::size_t end = out.find('\n', pos);
        if (end == std::string::npos) end = out.size();
        const std::string line = out.substr(pos, end - pos);
        if (line.empty() || line[0] != '#') body += line + "\n";
        pos = end + 1;
    }
    return body;
}

}  // namespace

TEST_CASE("gauss-exact prints the pinned constant") {
    const RunResult r = run_cli("dim gauss-exact --format csv --no-timestamp --seed 1");
    CHECK(r.status == 0);
    CHECK(r.out.find("2.3731382") != std::string::npos);
}

TEST_CASE("measure defect emits the witness value") {
    const RunResult r = run_cli("measure defect --b 1 --a \"\" --c 1 --seed 1");
    CHECK(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["result"]["defect"].get<double>() == doctest::Approx(0.0202530).epsilon(1e-5));
}

TEST_CASE("cf helpers: eval, cylinder, digits") {
    const RunResult eval = run_cli("cf eval --word 2,3 --seed 1");
    CHECK(nlohmann::json::parse(eval.out)["result"]["value"] == "3/7");

    const RunResult cyl = run_cli("cf cylinder --word 1,1 --seed 1");
    const auto j = nlohmann::json::parse(cyl.out);
    CHECK(j["result"]["low"] == "1/2");
    CHECK(j["result"]["high"] == "2/3");

    const RunResult digits = run_cli("cf digits --x sqrt:2 --n 5 --format csv --no-timestamp --seed 1");
    CHECK(csv_body(digits.out) == "2 2 2 2 2\n");
}

TEST_CASE("determinism: identical config and seed give byte-identical csv bodies") {
    const std::string base =
        "dev decay --word 1 --q identity --delta 0.2 --ns 10,25 --samples 3000 "
        "--seed 7 --format csv --no-timestamp";
    const RunResult w1 = run_cli(base + " --workers 1");
    const RunResult w4 = run_cli(base + " --workers 4");
    CHECK(w1.status == 0);
    CHECK(csv_body(w1.out) == csv_body(w4.out));
    CHECK(csv_body(w1.out).rfind("n,estimate,stderr,samples\n", 0) == 0);
}

TEST_CASE("errors surface as machine-readable json with nonzero status") {
    const RunResult r = run_cli("cf eval --word \"\" --seed 1");
    CHECK(r.status != 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["error"]["code"] == "empty_word");
}

TEST_CASE("config file overrides flags and the seed lands in the metadata") {
    const std::string path = "/tmp/cfdim_test_config.json";
    {
        std::ofstream f(path);
        f << R"({"seed": 1234, "params": {"word": "2,3"}})";
    }
    const RunResult r = run_cli("cf eval --word 1,1 --config " + path);
    CHECK(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["result"]["value"] == "3/7");  // config word wins
    CHECK(j["meta"]["seed"] == 1234);
    std::remove(path.c_str());
}

TEST_CASE("seed is auto-generated and recorded when absent") {
    const RunResult r = run_cli("cf eval --word 1,2");
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["meta"].contains("seed"));
}

TEST_CASE("process sample exports whitespace-separated digits") {
    const RunResult r =
        run_cli("process sample --source gauss:1 --n 8 --seed 3 --format csv --no-timestamp");
    CHECK(r.status == 0);
    const std::string body = csv_body(r.out);
    int spaces = 0;
    for (char ch : body)
        if (ch == ' ') ++spaces;
    CHECK(spaces == 7);
}
