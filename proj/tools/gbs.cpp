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

// gbs: command-line front end for state preparation, probabilities, loop
// hafnians, sampling and the validation benchmarks.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gbs/error.hpp"
#include "gbs/gaussian_state.hpp"
#include "gbs/hafnian.hpp"
#include "gbs/io.hpp"
#include "gbs/probabilities.hpp"
#include "gbs/rng.hpp"
#include "gbs/sampler.hpp"
#include "gbs/validation.hpp"

namespace {

using gbs::Error;
using gbs::ErrorCode;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr int kExitValidation = 2;
constexpr int kExitShape = 3;
constexpr int kExitGuard = 4;
constexpr const char *kThreadsEnv = "GBS_THREADS";

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::DimensionMismatch:
    case ErrorCode::OddDimension: return kExitShape;
    case ErrorCode::TooLarge:
    case ErrorCode::TooManyPatterns:
    case ErrorCode::CutoffMassTooSmall: return kExitGuard;
    default: return kExitValidation;
    }
}

int default_threads() {
    const char *env = std::getenv(kThreadsEnv);
    if (!env || !*env) return 0;
    try {
        const int n = std::stoi(env);
        return n > 0 ? n : 0;
    } catch (const std::exception &) {
        return 0;
    }
}

std::vector<std::string> split_list(const std::string &text) {
    std::vector<std::string> out;
    std::string token;
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!token.empty()) out.push_back(std::move(token));
            token.clear();
        } else {
            token += c;
        }
    }
    if (!token.empty()) out.push_back(std::move(token));
    return out;
}

double parse_real(const std::string &token, const std::string &what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used == token.size()) return v;
    } catch (const std::exception &) {
    }
    throw Error(ErrorCode::InvalidArgument, what + ": cannot parse \"" + token + "\" as a number");
}

int parse_int(const std::string &token, const std::string &what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(token, &used);
        if (used == token.size()) return v;
    } catch (const std::exception &) {
    }
    throw Error(ErrorCode::InvalidArgument, what + ": cannot parse \"" + token + "\" as an integer");
}

std::vector<double> parse_reals(const std::string &text, const std::string &what) {
    std::vector<double> out;
    for (const auto &t : split_list(text)) out.push_back(parse_real(t, what));
    return out;
}

std::vector<int> parse_ints(const std::string &text, const std::string &what) {
    std::vector<int> out;
    for (const auto &t : split_list(text)) out.push_back(parse_int(t, what));
    return out;
}

// "re" or "re:im".
std::complex<double> parse_complex(const std::string &token, const std::string &what) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) return {parse_real(token, what), 0.0};
    return {parse_real(token.substr(0, colon), what), parse_real(token.substr(colon + 1), what)};
}

// A single value is broadcast to every mode.
template <typename T>
std::vector<T> broadcast(std::vector<T> values, int modes, const std::string &what) {
    if (values.size() == 1) return std::vector<T>(static_cast<std::size_t>(modes), values.front());
    if (static_cast<int>(values.size()) != modes)
        throw Error(ErrorCode::DimensionMismatch,
                    what + " lists " + std::to_string(values.size()) + " values for " + std::to_string(modes) + " modes");
    return values;
}

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string format_complex(std::complex<double> z) {
    return gbs::format_double(z.real()) + " " + gbs::format_double(z.imag());
}

void write_report(const std::string &prefix, const std::string &csv, const json &meta) {
    gbs::write_file_atomic(prefix + ".csv", csv);
    gbs::write_file_atomic(prefix + ".json", meta.dump(2) + "\n");
    std::cout << "wrote " << prefix << ".csv and " << prefix << ".json\n";
}

// ---------------------------------------------------------------- prepare

struct PrepareArgs {
    int modes = 0;
    std::string squeezing = "0";
    std::string unitary = "identity";
    std::string loss = "1";
    std::string displacement = "0";
    double hbar = gbs::kDefaultHbar;
    std::string out = "state.json";
};

int run_prepare(const PrepareArgs &a) {
    if (a.modes < 1) throw Error(ErrorCode::InvalidArgument, "--modes must be positive");
    const auto squeezing = broadcast(parse_reals(a.squeezing, "--squeezing"), a.modes, "--squeezing");
    const auto transmission = broadcast(parse_reals(a.loss, "--loss"), a.modes, "--loss");
    std::vector<std::complex<double>> displacement;
    for (const auto &t : split_list(a.displacement)) displacement.push_back(parse_complex(t, "--displacement"));
    displacement = broadcast(displacement, a.modes, "--displacement");

    gbs::CMatrix u;
    if (a.unitary == "identity") {
        u = gbs::CMatrix::Identity(a.modes, a.modes);
    } else if (a.unitary.rfind("haar:", 0) == 0) {
        const std::string seed = a.unitary.substr(5);
        if (seed.empty() || seed.find_first_not_of("0123456789") != std::string::npos)
            throw Error(ErrorCode::InvalidArgument, "--unitary haar:SEED needs a non-negative integer seed");
        u = gbs::haar_unitary(a.modes, std::stoull(seed));
    } else {
        u = gbs::read_matrix_file(a.unitary);
    }

    const gbs::GaussianState state = gbs::prepare_gbs_state(squeezing, u, transmission, displacement, a.hbar);
    json disp = json::array();
    for (const auto &z : displacement) disp.push_back({z.real(), z.imag()});
    json provenance = {{"squeezing", squeezing},
                       {"unitary", a.unitary},
                       {"interferometer", gbs::complex_matrix_to_json(u)},
                       {"transmission", transmission},
                       {"displacement", disp}};
    gbs::write_state_file(a.out, state, provenance);
    std::cout << "mean_photon " << gbs::format_double(gbs::mean_photon(state)) << "\n";
    std::cout << "pure " << (state.is_pure() ? "true" : "false") << "\n";
    std::cout << "wrote " << a.out << "\n";
    return 0;
}

// ------------------------------------------------------------ probability

struct ProbabilityArgs {
    std::string state;
    std::string pattern;
    bool pure = false;
    std::string precision = "auto";
    int threads = 0;
};

int run_probability(const ProbabilityArgs &a) {
    const gbs::StateFile file = gbs::read_state_file(a.state);
    const gbs::PhotonPattern pattern(parse_ints(a.pattern, "--pattern"));
    if (pattern.modes() != file.state.modes())
        throw Error(ErrorCode::DimensionMismatch, "pattern has " + std::to_string(pattern.modes()) +
                                                      " entries but the state has " +
                                                      std::to_string(file.state.modes()) + " modes");
    gbs::KernelOptions kernel;
    kernel.precision = gbs::parse_precision(a.precision);
    kernel.threads = a.threads;

    const auto start = Clock::now();
    gbs::ProbabilityResult result;
    if (a.pure) {
        const gbs::ComplexForm form = gbs::build_complex_form(file.state, gbs::PureExtraction::Require);
        result = gbs::probability_pure(form, pattern, kernel);
    } else {
        result = gbs::probability_mixed(file.state, pattern, kernel);
    }
    const double elapsed = seconds_since(start);
    std::cout << "value " << gbs::format_double(result.value) << "\n";
    std::cout << "regime " << gbs::to_string(result.regime) << "\n";
    std::cout << "hafnian_dim " << result.expanded_dim << "\n";
    std::cout << "wall_time_s " << gbs::format_double(elapsed) << "\n";
    return 0;
}

// ---------------------------------------------------------------- hafnian

struct HafnianArgs {
    std::string matrix;
    bool loops = false;
    std::string precision = "auto";
    std::string method = "fast";
    int threads = 0;
};

int run_hafnian(const HafnianArgs &a) {
    const gbs::LHafInput input = gbs::LHafInput::make(gbs::read_symmetric_matrix_file(a.matrix), a.loops);
    gbs::KernelOptions kernel;
    kernel.precision = gbs::parse_precision(a.precision);
    kernel.threads = a.threads;

    const auto start = Clock::now();
    std::complex<double> value;
    if (a.method == "fast") {
        value = gbs::loop_hafnian_fast(input, kernel);
    } else if (a.method == "serial") {
        value = std::complex<double>(gbs::loop_hafnian_serial(input, gbs::effective_precision(kernel, input.dim())));
    } else {
        value = gbs::hafnian_bruteforce(input);
    }
    const double elapsed = seconds_since(start);
    std::cout << "value " << format_complex(value) << "\n";
    std::cout << "dim " << input.dim() << "\n";
    std::cout << "wall_time_s " << gbs::format_double(elapsed) << "\n";
    return 0;
}

// ----------------------------------------------------------------- sample

struct SampleArgs {
    std::string state;
    std::size_t count = 1;
    int cutoff = 6;
    std::uint64_t seed = 0;
    bool threshold = false;
    int max_photons = 0;
    std::string precision = "auto";
    int threads = 0;
    std::string out;
};

int run_sample(const SampleArgs &a) {
    const gbs::StateFile file = gbs::read_state_file(a.state);
    gbs::SamplerConfig config;
    config.cutoff = a.cutoff;
    config.seed = a.seed;
    config.threshold = a.threshold;
    if (a.max_photons > 0) config.max_photons = a.max_photons;
    config.kernel.precision = gbs::parse_precision(a.precision);

    const auto samples = gbs::generate_batch(file.state, config, a.count, a.threads);
    // The header deliberately leaves out the thread count: output must not
    // depend on it.
    json header = {{"state", a.state},     {"modes", file.state.modes()}, {"count", a.count},
                   {"cutoff", a.cutoff},   {"seed", a.seed},              {"threshold", a.threshold},
                   {"precision", a.precision}};
    if (a.max_photons > 0) header["max_photons"] = a.max_photons;
    const std::string text = gbs::format_samples(header, samples);
    if (a.out.empty() || a.out == "-") {
        std::cout << text;
    } else {
        gbs::write_file_atomic(a.out, text);
    }
    return 0;
}

// ------------------------------------------------------------------ bench

struct TvdArgs {
    int modes = 4;
    double squeezing = 0.5;
    int cutoff = 6;
    std::size_t samples = 200000;
    int unitaries = 10;
    std::uint64_t seed = 1;
    std::uint64_t unitary_seed = 1;
    double loss = 1.0;
    std::string displacement = "0";
    double hbar = gbs::kDefaultHbar;
    std::string precision = "double";
    int threads = 0;
    std::string out = "tvd";
};

int run_bench_tvd(const TvdArgs &a) {
    gbs::TvdConfig config;
    config.modes = a.modes;
    config.squeezing = a.squeezing;
    config.cutoff = a.cutoff;
    config.samples = a.samples;
    config.unitaries = a.unitaries;
    config.seed = a.seed;
    config.unitary_seed = a.unitary_seed;
    config.transmission = a.loss;
    config.displacement = parse_complex(a.displacement, "--displacement");
    config.hbar = a.hbar;
    config.threads = a.threads;
    config.kernel.precision = gbs::parse_precision(a.precision);

    const auto start = Clock::now();
    const gbs::TvdReport r = gbs::run_tvd_experiment(config);
    const double elapsed = seconds_since(start);

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < r.tvd_chain.size(); ++i)
        rows.push_back({std::to_string(i), std::to_string(r.unitary_seeds[i]), std::to_string(r.sample_seeds[i]),
                        gbs::format_double(r.tvd_chain[i]),
                        gbs::format_double(r.tvd_brute[i]), gbs::format_double(r.enumerated_mass[i])});
    const std::string csv = gbs::format_csv({"unitary", "unitary_seed", "sample_seed", "tvd_chain", "tvd_brute", "enumerated_mass"}, rows);
    json meta = {{"kind", "tvd"},
                 {"config",
                  {{"modes", a.modes},
                   {"squeezing", a.squeezing},
                   {"cutoff", a.cutoff},
                   {"samples", a.samples},
                   {"unitaries", a.unitaries},
                   {"seed", a.seed},
                   {"unitary_seed", a.unitary_seed},
                   {"transmission", a.loss},
                   {"displacement", {config.displacement.real(), config.displacement.imag()}},
                   {"hbar", a.hbar},
                   {"precision", a.precision},
                   {"threads", a.threads}}},
                 {"unitary_seeds", r.unitary_seeds},
                 {"sample_seeds", r.sample_seeds},
                 {"mean_chain", r.mean_chain},
                 {"std_chain", r.std_chain},
                 {"mean_brute", r.mean_brute},
                 {"std_brute", r.std_brute},
                 {"wall_time_s", elapsed},
                 {"machine", gbs::machine_descriptor()}};
    std::cout << "tvd_chain " << gbs::format_double(r.mean_chain) << " +- " << gbs::format_double(r.std_chain) << "\n";
    std::cout << "tvd_brute " << gbs::format_double(r.mean_brute) << " +- " << gbs::format_double(r.std_brute) << "\n";
    write_report(a.out, csv, meta);
    return 0;
}

struct AccuracyArgs {
    std::string dims = "4,6,8,10,12,14,16";
    std::string precision = "double";
    int threads = 0;
    std::string out = "accuracy";
};

int run_bench_accuracy(const AccuracyArgs &a) {
    const auto dims = parse_ints(a.dims, "--dims");
    const gbs::Precision precision = gbs::parse_precision(a.precision);
    const auto start = Clock::now();
    const gbs::AccuracyReport r = gbs::run_accuracy_experiment(dims, precision, a.threads);
    const double elapsed = seconds_since(start);

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < r.dims.size(); ++i) {
        char value[64];
        std::snprintf(value, sizeof value, "%.21Lg", r.values[i]);
        rows.push_back({std::to_string(r.dims[i]), value, r.exact[i], gbs::format_double(r.rel_err[i])});
    }
    const std::string csv = gbs::format_csv({"n", "value", "exact", "relErr"}, rows);
    json meta = {{"kind", "accuracy"},
                 {"config", {{"dims", dims}, {"precision", a.precision}, {"threads", a.threads}}},
                 {"matrix", "all-ones with loops"},
                 {"wall_time_s", elapsed},
                 {"machine", gbs::machine_descriptor()}};
    std::cout << csv;
    write_report(a.out, csv, meta);
    return 0;
}

struct TimingArgs {
    std::string dims = "24,26,28,30,32,34,36";
    int trials = 3;
    std::string precision = "extended";
    std::uint64_t seed = 7;
    int threads = 0;
    std::string out = "timing";
};

int run_bench_timing(const TimingArgs &a) {
    const auto dims = parse_ints(a.dims, "--dims");
    const gbs::Precision precision = gbs::parse_precision(a.precision);
    const gbs::TimingReport r = gbs::run_timing_experiment(dims, a.trials, a.threads, precision, a.seed);

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < r.dims.size(); ++i) {
        std::string ratio;
        if (i > 0 && r.dims[i] == r.dims[i - 1] + 2) ratio = gbs::format_double(r.median_seconds[i] / r.median_seconds[i - 1]);
        rows.push_back({std::to_string(r.dims[i]), gbs::format_double(r.median_seconds[i]), ratio});
    }
    const std::string csv = gbs::format_csv({"n", "median_s", "ratio_vs_n_minus_2"}, rows);
    json meta = {{"kind", "timing"},
                 {"config",
                  {{"dims", dims}, {"trials", a.trials}, {"precision", a.precision}, {"seed", a.seed}, {"threads", r.threads}}},
                 {"matrix", "complex symmetric, real and imaginary parts uniform in [0,1)"},
                 {"machine", r.machine}};
    std::cout << csv;
    write_report(a.out, csv, meta);
    return 0;
}

void add_threads(CLI::App *cmd, int &threads) {
    threads = default_threads();
    cmd->add_option("--threads", threads,
                    std::string("worker threads; 0 means the OpenMP default (default taken from ") + kThreadsEnv + ")")
        ->check(CLI::NonNegativeNumber);
}

void add_precision(CLI::App *cmd, std::string &precision, const char *fallback) {
    precision = fallback;
    cmd->add_option("--precision", precision, "kernel arithmetic: auto, double, extended or dd")
        ->check(CLI::IsMember({"auto", "double", "extended", "dd"}))
        ->capture_default_str();
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Gaussian boson sampling simulator"};
    app.require_subcommand(1);

    PrepareArgs prep;
    auto *prepare = app.add_subcommand("prepare", "build a GBS state and write it as JSON");
    prepare->add_option("--modes", prep.modes, "number of modes m")->required();
    prepare->add_option("--squeezing", prep.squeezing, "squeezing r, one value or a comma list of m values")
        ->capture_default_str();
    prepare->add_option("--unitary", prep.unitary, "interferometer: identity, haar:SEED or a matrix JSON file")
        ->capture_default_str();
    prepare->add_option("--loss", prep.loss, "transmission eta in [0,1], one value or a list of m values")
        ->capture_default_str();
    prepare->add_option("--displacement", prep.displacement, "displacement amplitudes, each re or re:im")
        ->capture_default_str();
    prepare->add_option("--hbar", prep.hbar, "value of hbar")->capture_default_str();
    prepare->add_option("--out", prep.out, "output state file")->capture_default_str();

    ProbabilityArgs prob;
    auto *probability = app.add_subcommand("probability", "probability of one photon-number pattern");
    probability->add_option("--state", prob.state, "state JSON file")->required();
    probability->add_option("--pattern", prob.pattern, "photon counts, e.g. \"1 0 2\"")->required();
    probability->add_flag("--pure", prob.pure, "use the pure-state route (state must be pure)");
    add_precision(probability, prob.precision, "auto");
    add_threads(probability, prob.threads);

    HafnianArgs haf;
    auto *hafnian = app.add_subcommand("hafnian", "hafnian or loop hafnian of a symmetric matrix");
    hafnian->add_option("--matrix", haf.matrix, "matrix JSON file")->required();
    hafnian->add_flag("--loops", haf.loops, "include the diagonal (loop hafnian)");
    add_precision(hafnian, haf.precision, "auto");
    hafnian->add_option("--method", haf.method, "fast, serial (reference kernel) or brute")
        ->check(CLI::IsMember({"fast", "serial", "brute"}))
        ->capture_default_str();
    add_threads(hafnian, haf.threads);

    SampleArgs smp;
    auto *sample = app.add_subcommand("sample", "draw photon-number samples with the chain-rule sampler");
    sample->add_option("--state", smp.state, "state JSON file")->required();
    sample->add_option("--count", smp.count, "number of samples")->capture_default_str();
    sample->add_option("--cutoff", smp.cutoff, "largest photon count per mode")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sample->add_option("--seed", smp.seed, "random seed")->capture_default_str();
    sample->add_flag("--threshold", smp.threshold, "report clicks (0/1) instead of photon counts");
    sample->add_option("--max-photons", smp.max_photons, "abort when a sample exceeds this total (0 = no limit)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    add_precision(sample, smp.precision, "auto");
    add_threads(sample, smp.threads);
    sample->add_option("--out", smp.out, "output file (standard output when omitted)");

    auto *bench = app.add_subcommand("bench", "validation benchmarks (CSV plus JSON metadata)");
    bench->require_subcommand(1);

    TvdArgs tvd;
    auto *btvd = bench->add_subcommand("tvd", "chain sampler vs brute-force sampler TVD over Haar unitaries");
    btvd->add_option("--modes", tvd.modes, "number of modes")->capture_default_str();
    btvd->add_option("--squeezing", tvd.squeezing, "squeezing r on every mode")->capture_default_str();
    btvd->add_option("--cutoff", tvd.cutoff, "photon cutoff per mode")->capture_default_str();
    btvd->add_option("--samples", tvd.samples, "samples per unitary and sampler")->capture_default_str();
    btvd->add_option("--unitaries", tvd.unitaries, "number of Haar unitaries")->capture_default_str();
    btvd->add_option("--seed", tvd.seed, "sampling seed")->capture_default_str();
    btvd->add_option("--unitary-seed", tvd.unitary_seed, "seed of the Haar unitaries")->capture_default_str();
    btvd->add_option("--loss", tvd.loss, "transmission eta on every mode")->capture_default_str();
    btvd->add_option("--displacement", tvd.displacement, "displacement on every mode, re or re:im")
        ->capture_default_str();
    btvd->add_option("--hbar", tvd.hbar, "value of hbar")->capture_default_str();
    add_precision(btvd, tvd.precision, "double");
    add_threads(btvd, tvd.threads);
    btvd->add_option("--out", tvd.out, "report prefix (writes PREFIX.csv and PREFIX.json)")->capture_default_str();

    AccuracyArgs acc;
    auto *bacc = bench->add_subcommand("accuracy", "all-ones loop hafnian against telephone numbers");
    bacc->add_option("--dims", acc.dims, "comma list of matrix dimensions")->capture_default_str();
    add_precision(bacc, acc.precision, "double");
    add_threads(bacc, acc.threads);
    bacc->add_option("--out", acc.out, "report prefix (writes PREFIX.csv and PREFIX.json)")->capture_default_str();

    TimingArgs tim;
    auto *btim = bench->add_subcommand("timing", "median kernel runtime per dimension");
    btim->add_option("--dims", tim.dims, "comma list of matrix dimensions")->capture_default_str();
    btim->add_option("--trials", tim.trials, "random matrices per dimension")->capture_default_str();
    add_precision(btim, tim.precision, "extended");
    btim->add_option("--seed", tim.seed, "seed for the random matrices")->capture_default_str();
    add_threads(btim, tim.threads);
    btim->add_option("--out", tim.out, "report prefix (writes PREFIX.csv and PREFIX.json)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }

    try {
        if (*prepare) return run_prepare(prep);
        if (*probability) return run_probability(prob);
        if (*hafnian) return run_hafnian(haf);
        if (*sample) return run_sample(smp);
        if (*btvd) return run_bench_tvd(tvd);
        if (*bacc) return run_bench_accuracy(acc);
        if (*btim) return run_bench_timing(tim);
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
