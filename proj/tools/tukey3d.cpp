// tukey3d: generate clouds, compute depth regions, check them against the
// brute-force oracle and run the benchmark grid.
//
// Exit codes: 0 success (Empty regions included), 1 usage, 2 input/parse,
// 3 numerical degeneracy, 4 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <tukey3d/tukey3d.hpp>

using namespace tukey3d;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kDegenerate = 3, kVerify = 4 };

int exit_code(ErrorCode c) {
    switch (c) {
        case ErrorCode::ParseError:
        case ErrorCode::InputTooSmall: return kInput;
        case ErrorCode::DegenerateInput:
        case ErrorCode::SingularCovariance:
        case ErrorCode::EmptySearch:
        case ErrorCode::Unbounded:
        case ErrorCode::DualDegeneracy: return kDegenerate;
        case ErrorCode::RefuseTooLarge:
        case ErrorCode::InvalidQuery:
        case ErrorCode::InvalidArgument: return kUsage;
    }
    return kUsage;
}

struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file.open(path);
        if (!file) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
        os = &file;
    }
    std::ostream& operator*() { return *os; }
};

struct CloudSource {
    std::string input;
    std::string scenario;
    std::size_t n = 100;
    double epsilon = 0.0;
    double sigma0_sq = 9.0;
    std::uint64_t cloud_seed = 0;

    void add(CLI::App* app, bool allow_scenario) {
        auto* in = app->add_option("-i,--input", input, "CSV file with one x,y,z point per line");
        if (!allow_scenario) {
            in->required();
            return;
        }
        auto* sc = app->add_option("--scenario", scenario, "Generate the cloud instead: D1, D2 or D3");
        in->excludes(sc);
        app->add_option("--n", n, "Points to generate")->check(CLI::PositiveNumber);
        app->add_option("--epsilon", epsilon, "Contamination fraction");
        app->add_option("--sigma0-sq", sigma0_sq, "Contaminant variance");
        app->add_option("--cloud-seed", cloud_seed, "Seed for the generated cloud");
    }

    PointCloud load() const {
        if (!input.empty()) return read_csv(input);
        if (scenario.empty()) throw Error(ErrorCode::InvalidArgument, "pass -i FILE or --scenario");
        return generate({parse_scenario(scenario), n, epsilon, sigma0_sq, cloud_seed});
    }
};

int run_gen(const ScenarioSpec& params, const std::string& out) {
    const PointCloud c = generate(params);
    Output o(out);
    write_csv(c, *o);
    return kOk;
}

struct RegionArgs {
    CloudSource source;
    double tau = 0.0;
    bool whiten = false;
    double jitter = 0.0;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out, off, record;
};

int run_region(const RegionArgs& a) {
    PointCloud cloud = a.source.load();
    if (a.whiten) cloud = whiten(cloud);
    if (a.jitter > 0.0) cloud = jitter(cloud, a.jitter, a.seed);
    const auto start = std::chrono::steady_clock::now();
    DepthRegion region;
    try {
        region = compute_region(cloud, a.tau, {.seed = a.seed, .search = {.threads = a.threads}});
    } catch (const Error& e) {
        if (e.code() == ErrorCode::DegenerateInput)
            throw Error(e.code(), std::string(e.what()) + " (try --jitter 1e-8)");
        throw;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    {
        Output o(a.out);
        *o << region_to_json(region).dump(2) << '\n';
    }
    if (!a.off.empty()) {
        Output o(a.off);
        write_off(region, *o);
    }
    BenchRecord rec{a.source.input.empty() ? a.source.scenario : a.source.input,
                    cloud.size(),
                    a.tau,
                    a.source.input.empty() ? a.source.epsilon : 0.0,
                    a.seed,
                    region.defining.count(),
                    region.facet_count(),
                    secs,
                    to_string(region.status)};
    if (!a.record.empty()) {
        Output o(a.record);
        write_bench_csv({rec}, *o);
    }
    std::cerr << "status " << rec.status << ", directions " << rec.direction_count << ", facets " << rec.facet_count
              << ", vertices " << region.vertices.size() << ", " << secs << " s\n";
    return kOk;
}

int run_depth(const CloudSource& src, const std::string& point) {
    const PointCloud cloud = src.load();
    const Vec3 x = parse_point(point);
    const DepthValue d = tukey_depth(x, cloud);
    std::cout << d.count << ' ' << d.n << ' ' << d.value() << '\n';
    return kOk;
}

int run_verify_cmd(const VerifyOptions& opt) {
    const auto cells = run_verify(opt);
    bool ok = true;
    for (const auto& c : cells) {
        std::printf("n=%zu tau=%g %zu/%zu %s\n", c.n, c.tau, c.passed, c.clouds, c.ok() ? "PASS" : "FAIL");
        for (const auto& f : c.failures) std::printf("  %s\n", f.c_str());
        ok = ok && c.ok();
    }
    return ok ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Tukey depth regions of 3-D point clouds"};
    app.require_subcommand(1);

    ScenarioSpec gen_spec;
    std::string gen_scenario = "D1", gen_out;
    auto* gen = app.add_subcommand("gen", "Draw a simulation cloud and write it as CSV");
    gen->add_option("--scenario", gen_scenario, "D1, D2 or D3")->required();
    gen->add_option("--n", gen_spec.n, "Number of points")->required();
    gen->add_option("--epsilon", gen_spec.epsilon, "Contamination fraction in [0, 1)");
    gen->add_option("--sigma0-sq", gen_spec.sigma0_sq, "Contaminant variance");
    gen->add_option("--seed", gen_spec.seed, "Generator seed");
    gen->add_option("-o,--output", gen_out, "Output CSV (default stdout)");

    RegionArgs ra;
    auto* region = app.add_subcommand("region", "Compute the depth region at level tau");
    ra.source.add(region, true);
    region->add_option("--tau", ra.tau, "Depth level in [0, 1)")->required();
    region->add_flag("--whiten", ra.whiten, "Standardise by the sample mean and covariance first");
    region->add_option("--jitter", ra.jitter, "Perturb coordinates uniformly by this magnitude");
    region->add_option("--seed", ra.seed, "Search seed");
    region->add_option("--threads", ra.threads, "Threads for neighbour evaluation");
    region->add_option("-o,--output", ra.out, "Region JSON (default stdout)");
    region->add_option("--off", ra.off, "Also write the polytope as OFF");
    region->add_option("--record", ra.record, "Write the benchmark record as CSV");

    CloudSource depth_src;
    std::string point;
    auto* depth = app.add_subcommand("depth", "Tukey depth of one point");
    depth_src.add(depth, false);
    depth->add_option("--point", point, "x,y,z")->required();

    VerifyOptions vo;
    vo.threads = worker_threads();
    auto* verify = app.add_subcommand("verify", "Compare searched regions against the brute-force oracle");
    verify->add_option("--n", vo.n_list, "Cloud sizes")->delimiter(',')->required();
    verify->add_option("--tau", vo.tau_list, "Depth levels")->delimiter(',')->required();
    verify->add_option("--clouds", vo.clouds, "Clouds per cell");
    verify->add_option("--seed", vo.seed, "Master seed");
    verify->add_flag("--corrupt", vo.corrupt, "Drop one facet halfspace from each searched set")->group("");

    std::vector<std::string> scenarios{"D1"};
    BenchGrid grid{{}, {100}, {0.1}, {0.0}, 10, 1};
    std::string bench_out;
    auto* bench = app.add_subcommand("bench", "Run the benchmark grid and write CSV records");
    bench->add_option("--scenarios", scenarios, "Scenarios")->delimiter(',');
    bench->add_option("--n", grid.n_list, "Cloud sizes")->delimiter(',');
    bench->add_option("--tau", grid.tau_list, "Depth levels")->delimiter(',');
    bench->add_option("--epsilon", grid.epsilon_list, "Contamination fractions")->delimiter(',');
    bench->add_option("--repeats", grid.repeats, "Repeats per cell");
    bench->add_option("--seed", grid.master_seed, "Master seed");
    bench->add_option("-o,--output", bench_out, "Output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) {
            gen_spec.kind = parse_scenario(gen_scenario);
            return run_gen(gen_spec, gen_out);
        }
        if (*region) return run_region(ra);
        if (*depth) return run_depth(depth_src, point);
        if (*verify) return run_verify_cmd(vo);
        if (*bench) {
            for (const auto& s : scenarios) grid.scenarios.push_back(parse_scenario(s));
            const auto records = run_bench(grid);
            Output o(bench_out);
            write_bench_csv(records, *o);
            return kOk;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kDegenerate;
    }
    return kUsage;
}
