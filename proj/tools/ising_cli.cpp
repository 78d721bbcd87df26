// Command-line front end: exact Ising sampling at any temperature,
// validation against the enumeration oracle, coalescence benchmarks and
// duality info.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ising/sampler.hpp"
#include "ising/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;  // validation failure or coalescence cap
constexpr int kExitUsage = 2;

ising::Boundary parse_boundary(const std::string& s) {
    if (s == "free") return ising::Boundary::free_bc;
    if (s == "plus") return ising::Boundary::plus;
    if (s == "minus") return ising::Boundary::minus;
    throw CLI::ValidationError("--boundary", "must be free, plus or minus");
}

ising::Branch parse_branch(const std::string& s) {
    if (s == "auto") return ising::Branch::automatic;
    if (s == "direct") return ising::Branch::direct;
    if (s == "dual") return ising::Branch::dual;
    throw CLI::ValidationError("--branch", "must be auto, direct or dual");
}

// Run fn(i) for i in [0, count) across `jobs` threads; results land in
// index order.
template <typename F>
void parallel_indexed(int count, int jobs, F&& fn) {
    if (jobs <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

std::string grid_lines(const ising::SpinConfiguration& spins, int L) {
    std::string out;
    for (int r = 0; r < L; ++r) {
        for (int c = 0; c < L; ++c) out += spins[r * L + c] > 0 ? '+' : '-';
        out += '\n';
    }
    return out;
}

struct SampleOutput {
    std::string text;
    std::string stat_row;
    bool cap_exceeded = false;
};

int cmd_sample(int size, double beta, int samples, std::uint64_t seed,
               const std::string& boundary, const std::string& branch,
               const std::string& format, bool stats, std::uint64_t cap, int jobs) {
    ising::SamplerConfig base;
    base.side = size;
    base.beta = beta;
    base.boundary = parse_boundary(boundary);
    base.branch = parse_branch(branch);
    base.cftp.max_total_updates = cap;

    std::vector<SampleOutput> results(samples);
    parallel_indexed(samples, jobs, [&](int i) {
        ising::SamplerConfig config = base;
        config.seed = seed + static_cast<std::uint64_t>(i);
        auto t0 = std::chrono::steady_clock::now();
        try {
            ising::SampleResult r = ising::sample_ising(config);
            auto t1 = std::chrono::steady_clock::now();
            if (format == "grid")
                results[i].text = grid_lines(r.spins, size);
            else {
                nlohmann::json row = nlohmann::json::array();
                for (auto s : r.spins) row.push_back(static_cast<int>(s));
                results[i].text = row.dump();
            }
            std::ostringstream stat;
            stat << config.seed << ',' << ising::branch_name(r.branch_taken) << ','
                 << r.epochs_used << ',' << r.total_updates << ','
                 << std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
            results[i].stat_row = stat.str();
        } catch (const ising::CoalescenceCapExceeded&) {
            results[i].cap_exceeded = true;
        }
    });

    for (const auto& r : results) {
        if (r.cap_exceeded) {
            std::cerr << "error: coalescence cap of " << cap
                      << " updates exceeded (see --cap)\n";
            return kExitFailure;
        }
    }

    if (format == "grid") {
        for (int i = 0; i < samples; ++i) {
            if (i) std::cout << '\n';
            std::cout << results[i].text;
        }
    } else {
        std::cout << '[';
        for (int i = 0; i < samples; ++i) {
            if (i) std::cout << ',';
            std::cout << results[i].text;
        }
        std::cout << "]\n";
    }
    if (stats) {
        std::cerr << "seed,branch,epochs,total_updates,wall_ns\n";
        for (const auto& r : results) std::cerr << r.stat_row << '\n';
    }
    return kExitOk;
}

int cmd_info(double beta) {
    ising::DualityReport r = ising::describe(beta);
    std::cout << std::setprecision(12);
    std::cout << "beta      " << r.beta << '\n';
    std::cout << "beta_c    " << r.beta_c << '\n';
    std::cout << "branch    " << ising::branch_name(r.branch) << '\n';
    std::cout << "p         " << r.p << '\n';
    if (r.beta_star) {
        std::cout << "beta_star " << *r.beta_star << '\n';
        std::cout << "p_star    " << *r.p_star << '\n';
    }
    return kExitOk;
}

int cmd_validate(const std::string& level, std::uint64_t seed, long samples) {
    bool full = level == "full";
    auto checks = ising::run_validation(full, seed, samples);
    bool all_pass = true;
    std::size_t width = 0;
    for (const auto& c : checks) width = std::max(width, c.name.size());
    for (const auto& c : checks) {
        std::cout << (c.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(width + 2)
                  << c.name << c.detail << '\n';
        if (!c.pass) all_pass = false;
    }
    if (!all_pass) {
        for (const auto& c : checks)
            if (!c.pass) {
                std::cerr << "first failing check: " << c.name << '\n';
                break;
            }
        return kExitFailure;
    }
    return kExitOk;
}

struct BenchRow {
    int L = 0, rep = 0;
    std::string branch;
    int epochs = 0;
    std::uint64_t total_updates = 0;
    std::int64_t wall_ns = 0;
    bool censored = false;
};

int cmd_bench(const std::string& sizes_csv, double beta, int reps, std::uint64_t seed,
              const std::string& out_path, const std::string& branch, std::uint64_t cap,
              bool allow_cap, int jobs) {
    std::vector<int> sizes;
    std::stringstream ss(sizes_csv);
    for (std::string tok; std::getline(ss, tok, ',');) sizes.push_back(std::stoi(tok));
    if (sizes.empty()) {
        std::cerr << "error: --sizes is empty\n";
        return kExitUsage;
    }

    std::vector<BenchRow> rows(sizes.size() * reps);
    parallel_indexed(static_cast<int>(rows.size()), jobs, [&](int i) {
        int li = i / reps, rep = i % reps;
        BenchRow& row = rows[i];
        row.L = sizes[li];
        row.rep = rep;
        ising::SamplerConfig config;
        config.side = row.L;
        config.beta = beta;
        config.seed = seed + static_cast<std::uint64_t>(rep);
        config.branch = parse_branch(branch);
        config.cftp.max_total_updates = cap;
        auto t0 = std::chrono::steady_clock::now();
        try {
            ising::SampleResult r = ising::sample_ising(config);
            row.branch = ising::branch_name(r.branch_taken);
            row.epochs = r.epochs_used;
            row.total_updates = r.total_updates;
        } catch (const ising::CoalescenceCapExceeded&) {
            row.censored = true;
            ising::Branch attempted = config.branch;
            if (attempted == ising::Branch::automatic)
                attempted = (beta <= ising::beta_critical || row.L < 2)
                                ? ising::Branch::direct
                                : ising::Branch::dual;
            row.branch = ising::branch_name(attempted);
            row.epochs = -1;
            row.total_updates = cap;
        }
        auto t1 = std::chrono::steady_clock::now();
        row.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    });

    bool any_censored = false;
    for (const auto& r : rows) any_censored |= r.censored;
    if (any_censored && !allow_cap) {
        std::cerr << "error: coalescence cap of " << cap
                  << " updates exceeded (rerun with --allow-cap to record censored rows)\n";
        return kExitFailure;
    }

    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot open --out file " << out_path << '\n';
        return kExitUsage;
    }
    out << "L,N,beta,branch,rep,epochs,total_updates,wall_ns,ratio\n";
    for (const auto& r : rows)
        out << r.L << ',' << r.L * r.L << ',' << beta << ',' << r.branch << ',' << r.rep << ','
            << r.epochs << ',' << r.total_updates << ',' << r.wall_ns << ",\n";
    // summary row per L: mean total_updates and its ratio to N log N
    for (std::size_t li = 0; li < sizes.size(); ++li) {
        int L = sizes[li], N = L * L;
        double mean = 0.0;
        std::string branch;
        for (int rep = 0; rep < reps; ++rep) {
            const BenchRow& r = rows[li * reps + rep];
            mean += static_cast<double>(r.total_updates);
            branch = r.branch;
        }
        mean /= reps;
        double ratio = mean / (N * std::log(static_cast<double>(N)));
        out << L << ',' << N << ',' << beta << ',' << branch << ",mean,," << mean << ",,"
            << ratio << '\n';
        std::cout << "L=" << L << " mean_total_updates=" << mean
                  << " ratio_NlogN=" << ratio << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact sampling for the two-dimensional Ising model"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "Draw exact Ising configurations");
    int size = 0, samples = 1, jobs = 1;
    double beta = 0.0;
    std::uint64_t seed = 0, cap = std::uint64_t{1} << 30;
    std::string boundary = "free", branch = "auto", format = "grid";
    bool stats = false;
    sample->add_option("--size", size, "lattice side L")->required();
    sample->add_option("--beta", beta, "inverse temperature")->required()
        ->check(CLI::NonNegativeNumber);
    sample->add_option("--samples", samples, "number of samples")->default_val(1);
    sample->add_option("--seed", seed, "master seed")->required();
    sample->add_option("--boundary", boundary, "free|plus|minus")
        ->check(CLI::IsMember({"free", "plus", "minus"}));
    sample->add_option("--branch", branch, "auto|direct|dual")
        ->check(CLI::IsMember({"auto", "direct", "dual"}));
    sample->add_option("--format", format, "grid|json")
        ->check(CLI::IsMember({"grid", "json"}));
    sample->add_flag("--stats", stats, "emit per-sample records as CSV on stderr");
    sample->add_option("--cap", cap, "max single-site updates per sample");
    sample->add_option("--jobs", jobs, "worker threads (output stays in seed order)");

    // validate
    auto* validate = app.add_subcommand("validate", "Run the oracle certification suite");
    std::string level = "quick";
    std::uint64_t vseed = 1;
    long vsamples = 200000;
    validate->add_option("--level", level, "quick|full")
        ->check(CLI::IsMember({"quick", "full"}));
    validate->add_option("--seed", vseed, "seed for the sampling checks");
    validate->add_option("--samples", vsamples, "samples per distribution check");

    // bench
    auto* bench = app.add_subcommand("bench", "Coalescence scaling sweep, CSV output");
    std::string sizes_csv, out_path;
    int reps = 1, bjobs = 1;
    double bbeta = 0.0;
    std::uint64_t bseed = 0, bcap = std::uint64_t{1} << 30;
    bool allow_cap = false;
    bench->add_option("--sizes", sizes_csv, "comma-separated lattice sides")->required();
    bench->add_option("--beta", bbeta, "inverse temperature")->required()
        ->check(CLI::NonNegativeNumber);
    bench->add_option("--reps", reps, "repetitions per size")->default_val(1);
    bench->add_option("--seed", bseed, "master seed")->required();
    bench->add_option("--out", out_path, "CSV output path")->required();
    std::string bbranch = "auto";
    bench->add_option("--branch", bbranch, "auto|direct|dual")
        ->check(CLI::IsMember({"auto", "direct", "dual"}));
    bench->add_option("--cap", bcap, "max single-site updates per sample");
    bench->add_flag("--allow-cap", allow_cap, "record capped runs as censored rows");
    bench->add_option("--jobs", bjobs, "worker threads");

    // info
    auto* info = app.add_subcommand("info", "Print duality quantities for a temperature");
    double ibeta = 0.0;
    info->add_option("--beta", ibeta, "inverse temperature")->required()
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sample->parsed())
            return cmd_sample(size, beta, samples, seed, boundary, branch, format, stats, cap,
                              jobs);
        if (validate->parsed()) return cmd_validate(level, vseed, vsamples);
        if (bench->parsed())
            return cmd_bench(sizes_csv, bbeta, reps, bseed, out_path, bbranch, bcap, allow_cap,
                             bjobs);
        if (info->parsed()) return cmd_info(ibeta);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}
