// Copyright 2026 The gbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "gbs/io.hpp"
#include "gbs/validation.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string &args, const std::string &env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + GBS_CLI_PATH + std::string(" ") + args + " 2>&1";
    Run r;
    FILE *pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("gbs_cli_test_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string &name) const { return (path / name).string(); }
};

std::string field(const std::string &out, const std::string &key) {
    std::istringstream in(out);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key + " ", 0) == 0) return line.substr(key.size() + 1);
    return {};
}

void write(const std::string &path, const std::string &text) { gbs::write_file_atomic(path, text); }

}  // namespace

TEST_CASE("prepare") {
    TempDir dir;
    Run r = run("prepare --modes 1 --squeezing 0.5 --out " + (dir / "sq.json"));
    CHECK(r.code == 0);
    CHECK(std::stod(field(r.out, "mean_photon")) == doctest::Approx(std::pow(std::sinh(0.5), 2)).epsilon(1e-12));
    const auto sq = gbs::read_state_file(dir / "sq.json");
    CHECK(sq.provenance.has_value());

    r = run("prepare --modes 2 --squeezing 0 --out " + (dir / "vac.json"));
    CHECK(r.code == 0);
    const auto vac = gbs::read_state_file(dir / "vac.json");
    CHECK(vac.state.cov() == gbs::RMatrix::Identity(4, 4));
    CHECK(std::stod(field(r.out, "mean_photon")) == 0.0);

    r = run("prepare --modes 1 --squeezing 0.5 --loss 1.5 --out " + (dir / "bad.json"));
    CHECK(r.code == 2);
    CHECK_FALSE(fs::exists(dir / "bad.json"));

    r = run("prepare --modes 3 --squeezing 0.5,0.4,0.3 --unitary haar:4 --loss 0.8 --displacement 0.1:0.2 --out " +
            (dir / "g.json"));
    CHECK(r.code == 0);
    CHECK(field(r.out, "pure") == "false");
    r = run("prepare --modes 3 --squeezing 0.5,0.4 --out " + (dir / "x.json"));
    CHECK(r.code == 3);
}

TEST_CASE("probability") {
    TempDir dir;
    REQUIRE(run("prepare --modes 2 --squeezing 0 --out " + (dir / "vac.json")).code == 0);
    REQUIRE(run("prepare --modes 1 --squeezing 0.5 --out " + (dir / "sq.json")).code == 0);
    Run r = run("probability --state " + (dir / "vac.json") + " --pattern \"0 0\"");
    CHECK(r.code == 0);
    CHECK(std::stod(field(r.out, "value")) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(field(r.out, "regime").empty());
    CHECK_FALSE(field(r.out, "hafnian_dim").empty());
    CHECK_FALSE(field(r.out, "wall_time_s").empty());

    r = run("probability --state " + (dir / "sq.json") + " --pattern 1");
    CHECK(r.code == 0);
    CHECK(std::abs(std::stod(field(r.out, "value"))) <= 1e-12);
    r = run("probability --state " + (dir / "sq.json") + " --pattern 2 --pure");
    CHECK(r.code == 0);
    const double t = std::tanh(0.5);
    CHECK(std::stod(field(r.out, "value")) == doctest::Approx(0.5 * t * t / std::cosh(0.5)).epsilon(1e-12));

    r = run("probability --state " + (dir / "vac.json") + " --pattern \"0 0 0\"");
    CHECK(r.code == 3);
    r = run("probability --state " + (dir / "vac.json") + " --pattern \"0 -1\"");
    CHECK(r.code == 2);
}

TEST_CASE("hafnian") {
    TempDir dir;
    write(dir / "x.json", R"({"n": 2, "matrix": [[[0,0],[1,0]],[[1,0],[0,0]]]})");
    Run r = run("hafnian --matrix " + (dir / "x.json"));
    CHECK(r.code == 0);
    CHECK(field(r.out, "value") == "1 0");

    gbs::write_matrix_file(dir / "ones6.json", gbs::CMatrix::Ones(6, 6));
    r = run("hafnian --matrix " + (dir / "ones6.json") + " --loops");
    CHECK(r.code == 0);
    CHECK(field(r.out, "value") == "76 0");
    for (const char *method : {"serial", "brute"}) {
        r = run("hafnian --matrix " + (dir / "ones6.json") + " --loops --method " + method);
        CHECK(field(r.out, "value") == "76 0");
    }

    gbs::write_matrix_file(dir / "ones16.json", gbs::CMatrix::Ones(16, 16));
    CHECK(run("hafnian --matrix " + (dir / "ones16.json") + " --method brute").code == 4);
    CHECK(run("hafnian --matrix " + (dir / "ones16.json")).code == 0);

    write(dir / "asym.json", R"({"n": 2, "matrix": [[[0,0],[1,0]],[[2,0],[0,0]]]})");
    CHECK(run("hafnian --matrix " + (dir / "asym.json")).code == 2);
    write(dir / "shape.json", R"({"n": 3, "matrix": [[[0,0],[1,0]],[[1,0],[0,0]]]})");
    CHECK(run("hafnian --matrix " + (dir / "shape.json")).code == 3);
    gbs::write_matrix_file(dir / "big.json", gbs::CMatrix::Ones(58, 58));
    CHECK(run("hafnian --matrix " + (dir / "big.json")).code == 4);
}

TEST_CASE("sample") {
    TempDir dir;
    REQUIRE(run("prepare --modes 2 --squeezing 0 --out " + (dir / "vac.json")).code == 0);
    Run r = run("sample --state " + (dir / "vac.json") + " --count 5");
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 6);
    CHECK(lines[0].rfind("# gbs-samples ", 0) == 0);
    for (std::size_t i = 1; i < 6; ++i) CHECK(lines[i] == "0 0");

    REQUIRE(run("prepare --modes 3 --squeezing 0.6 --unitary haar:2 --loss 0.9 --displacement 0.2 --out " +
                (dir / "g.json"))
                .code == 0);
    const std::string base = "sample --state " + (dir / "g.json") + " --count 200 --seed 42 --out ";
    CHECK(run(base + (dir / "a.txt"), "GBS_THREADS=1").code == 0);
    CHECK(run(base + (dir / "b.txt")).code == 0);
    CHECK(run(base + (dir / "c.txt") + " --threads 4").code == 0);
    const std::string a = gbs::read_text_file(dir / "a.txt");
    CHECK(a == gbs::read_text_file(dir / "b.txt"));
    CHECK(a == gbs::read_text_file(dir / "c.txt"));
    CHECK(run("sample --state " + (dir / "g.json") + " --count 200 --seed 43 --out " + (dir / "d.txt")).code == 0);
    CHECK(a != gbs::read_text_file(dir / "d.txt"));

    r = run("sample --state " + (dir / "g.json") + " --count 50 --seed 1 --threshold");
    CHECK(r.code == 0);
    const std::string body = r.out.substr(r.out.find('\n') + 1);
    CHECK(body.find_first_not_of("01 \n") == std::string::npos);
    CHECK(run("sample --state " + (dir / "missing.json") + " --count 1").code == 2);
}

TEST_CASE("bench") {
    TempDir dir;
    Run r = run("bench accuracy --dims 4,6,8 --out " + (dir / "acc"));
    CHECK(r.code == 0);
    const std::string csv = gbs::read_text_file(dir / "acc.csv");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,value,exact,relErr");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::stod(line.substr(line.rfind(',') + 1)) <= 1e-12);
    }
    CHECK(rows == 3);
    const auto meta = nlohmann::json::parse(gbs::read_text_file(dir / "acc.json"));
    CHECK(meta.contains("machine"));

    r = run("bench tvd --modes 2 --samples 2000 --unitaries 2 --cutoff 4 --out " + (dir / "tvd"));
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "tvd.csv"));
    const auto tvd = nlohmann::json::parse(gbs::read_text_file(dir / "tvd.json"));
    CHECK(tvd.contains("unitary_seeds"));

    r = run("bench timing --dims 6,8 --trials 2 --out " + (dir / "tim"));
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "tim.csv"));
    CHECK(run("bench tvd --modes 8 --cutoff 8 --samples 10 --unitaries 1 --out " + (dir / "big")).code == 4);
}

TEST_CASE("help documents every flag") {
    const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
        {"prepare", {"--modes", "--squeezing", "--unitary", "--loss", "--displacement", "--hbar", "--out"}},
        {"probability", {"--state", "--pattern", "--pure", "--precision", "--threads"}},
        {"hafnian", {"--matrix", "--loops", "--precision", "--method", "--threads"}},
        {"sample",
         {"--state", "--count", "--cutoff", "--seed", "--threshold", "--max-photons", "--precision", "--threads",
          "--out"}},
        {"bench tvd",
         {"--modes", "--squeezing", "--cutoff", "--samples", "--unitaries", "--seed", "--unitary-seed", "--loss",
          "--displacement", "--hbar", "--precision", "--threads", "--out"}},
        {"bench accuracy", {"--dims", "--precision", "--threads", "--out"}},
        {"bench timing", {"--dims", "--trials", "--precision", "--seed", "--threads", "--out"}},
    };
    for (const auto &[name, flags] : commands) {
        CAPTURE(name);
        const Run r = run(name + " --help");
        CHECK(r.code == 0);
        // Every option line carries a description, either after a gap on the
        // same line or on the following line. Counting options catches
        // flags missing from the list below.
        std::vector<std::string> lines;
        std::istringstream in(r.out);
        for (std::string line; std::getline(in, line);) lines.push_back(line);
        int options = 0;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const std::string &line = lines[i];
            if (line.rfind("  --", 0) != 0) continue;
            ++options;
            const auto gap = line.find("  ", 2);
            const bool inline_text = gap != std::string::npos && line.find_first_not_of(' ', gap) != std::string::npos;
            const bool next_text = i + 1 < lines.size() && lines[i + 1].rfind("      ", 0) == 0 &&
                                   lines[i + 1].find_first_not_of(' ') != std::string::npos;
            CHECK_MESSAGE((inline_text || next_text), line);
        }
        CHECK(options == static_cast<int>(flags.size()));
        for (const auto &flag : flags) CHECK(r.out.find("  " + flag + " ") != std::string::npos);
    }
    CHECK(run("--help").code == 0);
    CHECK(run("bench --help").code == 0);
    CHECK(run("prepare --no-such-flag").code == 2);
}
