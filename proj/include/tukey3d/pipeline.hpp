#pragma once

// End-to-end region computation, oracle verification and the benchmark grid.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "core.hpp"
#include "oracle.hpp"
#include "polytope.hpp"
#include "region.hpp"
#include "rng.hpp"
#include "scenario.hpp"

namespace tukey3d {

struct RegionOptions {
    std::uint64_t seed = 1;
    SearchOptions search;
    PolytopeOptions polytope;
};

/// Critical-direction search followed by polytope extraction. When
/// floor(n*tau) > n - 3 no plane through three observations can be critical
/// and the region is reported Empty without searching.
inline DepthRegion compute_region(const PointCloud& cloud, double tau_value, const RegionOptions& options = {},
                                  SearchStats* stats = nullptr) {
    const Tau tau = Tau::make(tau_value, cloud.size());
    const CriticalDirectionSet set = critical_directions(cloud, tau, options.seed, options.search, stats);
    if (set.empty()) {
        DepthRegion r;
        r.tau = tau;
        r.defining = set;
        r.status = RegionStatus::Empty;
        return r;
    }
    return intersect_halfspaces(set, tau, options.polytope);
}

struct RegionComparison {
    bool equal = false;
    std::string reason;
    double max_vertex_error = 0.0;
    double volume_rel_error = 0.0;
};

/// Same status, same vertex count, every vertex matched within `vertex_tol`
/// per coordinate (both ways) and volumes within `volume_rel_tol`.
inline RegionComparison compare_regions(const DepthRegion& a, const DepthRegion& b, double vertex_tol = 1e-7,
                                        double volume_rel_tol = 1e-9) {
    RegionComparison out;
    if (a.status != b.status) {
        out.reason = std::string("status ") + to_string(a.status) + " vs " + to_string(b.status);
        return out;
    }
    if (a.status != RegionStatus::Nonempty) {
        out.equal = true;
        return out;
    }
    if (a.vertices.size() != b.vertices.size()) {
        out.reason = "vertex count " + std::to_string(a.vertices.size()) + " vs " + std::to_string(b.vertices.size());
        return out;
    }
    auto one_way = [&](const DepthRegion& p, const DepthRegion& q) {
        double worst = 0.0;
        for (const auto& v : p.vertices) {
            double best = INFINITY;
            for (const auto& w : q.vertices) best = std::min(best, max_abs(v - w));
            worst = std::max(worst, best);
        }
        return worst;
    };
    out.max_vertex_error = std::max(one_way(a, b), one_way(b, a));
    const double va = volume(a), vb = volume(b);
    out.volume_rel_error = std::abs(va - vb) / std::max({std::abs(va), std::abs(vb), 1e-300});
    if (out.max_vertex_error > vertex_tol) out.reason = "vertex mismatch " + std::to_string(out.max_vertex_error);
    else if (out.volume_rel_error > volume_rel_tol) out.reason = "volume mismatch " + std::to_string(out.volume_rel_error);
    else out.equal = true;
    return out;
}

/// Seed of one benchmark or verification cell: a hash_combine chain over
/// (master, scenario, n, tau bits, epsilon bits, repeat).
inline std::uint64_t cell_seed(std::uint64_t master, Scenario s, std::size_t n, double tau, double epsilon,
                               std::size_t repeat) {
    std::uint64_t h = hash_combine(master, static_cast<std::uint64_t>(s));
    h = hash_combine(h, static_cast<std::uint64_t>(n));
    h = hash_combine(h, tau);
    h = hash_combine(h, epsilon);
    return hash_combine(h, static_cast<std::uint64_t>(repeat));
}

/// Worker count: hardware concurrency capped by TUKEY3D_THREADS.
inline unsigned worker_threads() {
    unsigned n = std::max(1U, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TUKEY3D_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
    }
    return n;
}

/// Runs f(i) for i in [0, count) on `threads` workers.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, count); ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) f(i);
        });
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------- verify

struct VerifyCell {
    std::size_t n = 0;
    double tau = 0.0;
    std::size_t clouds = 0;
    std::size_t passed = 0;
    std::vector<std::string> failures;

    bool ok() const { return passed == clouds; }
};

struct VerifyOptions {
    std::vector<std::size_t> n_list;
    std::vector<double> tau_list;
    std::size_t clouds = 5;
    std::uint64_t seed = 1;
    /// Negative control: drop the first facet halfspace from the searched set.
    bool corrupt = false;
    unsigned threads = 1;
};

/// Cloud number c of a verification cell; scenarios cycle D1, D2, D3.
inline PointCloud verify_cloud(std::uint64_t master, std::size_t n, double tau, std::size_t c) {
    const auto kind = static_cast<Scenario>(c % 3);
    return generate({kind, n, 0.0, 9.0, cell_seed(master, kind, n, tau, 0.0, c)});
}

/// Searched region vs oracle region for one cloud; empty string on success.
inline std::string verify_one(const PointCloud& cloud, double tau_value, std::uint64_t seed, bool corrupt) {
    const Tau tau = Tau::make(tau_value, cloud.size());
    CriticalDirectionSet found = critical_directions(cloud, tau, seed);
    const CriticalDirectionSet truth = brute_force_critical_directions(cloud, tau);
    auto region_of = [&](const CriticalDirectionSet& s) {
        if (s.empty()) {
            DepthRegion r;
            r.tau = tau;
            r.status = RegionStatus::Empty;
            return r;
        }
        return intersect_halfspaces(s, tau);
    };
    const DepthRegion expected = region_of(truth);
    if (corrupt) {
        const DepthRegion full = region_of(found);
        if (!full.facets.empty()) found.halfspaces.erase(found.halfspaces.begin() + full.facets.front().halfspace);
    }
    DepthRegion got;
    try {
        got = region_of(found);
    } catch (const Error& e) {
        return std::string("searched set: ") + e.what();
    }
    const RegionComparison cmp = compare_regions(got, expected);
    return cmp.equal ? std::string() : cmp.reason;
}

inline std::vector<VerifyCell> run_verify(const VerifyOptions& options) {
    if (options.n_list.empty() || options.tau_list.empty() || options.clouds == 0)
        throw Error(ErrorCode::InvalidArgument, "verification grid is empty");
    std::vector<VerifyCell> cells;
    for (std::size_t n : options.n_list)
        for (double tau : options.tau_list) cells.push_back({n, tau, options.clouds, 0, {}});
    std::mutex mu;
    parallel_for(cells.size() * options.clouds, options.threads, [&](std::size_t job) {
        VerifyCell& cell = cells[job / options.clouds];
        const std::size_t c = job % options.clouds;
        std::string why;
        try {
            const PointCloud cloud = verify_cloud(options.seed, cell.n, cell.tau, c);
            why = verify_one(cloud, cell.tau, hash_combine(options.seed, static_cast<std::uint64_t>(c)), options.corrupt);
        } catch (const Error& e) {
            why = e.what();
        }
        std::lock_guard lock(mu);
        if (why.empty()) ++cell.passed;
        else cell.failures.push_back("cloud " + std::to_string(c) + ": " + why);
    });
    return cells;
}

// ---------------------------------------------------------------- bench

struct BenchRecord {
    std::string scenario;
    std::size_t n = 0;
    double tau = 0.0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::size_t direction_count = 0;
    std::size_t facet_count = 0;
    double wall_time_seconds = 0.0;
    std::string status;
};

struct BenchGrid {
    std::vector<Scenario> scenarios;
    std::vector<std::size_t> n_list;
    std::vector<double> tau_list;
    std::vector<double> epsilon_list;
    std::size_t repeats = 10;
    std::uint64_t master_seed = 1;
};

/// One cell: generate, search, extract. Errors end up in `status`.
inline BenchRecord bench_cell(Scenario s, std::size_t n, double tau, double epsilon, std::uint64_t seed) {
    BenchRecord rec{to_string(s), n, tau, epsilon, seed, 0, 0, 0.0, ""};
    try {
        const PointCloud cloud = generate({s, n, epsilon, 9.0, seed});
        const auto start = std::chrono::steady_clock::now();
        const DepthRegion region = compute_region(cloud, tau, {.seed = seed});
        rec.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rec.direction_count = region.defining.count();
        rec.facet_count = region.facet_count();
        rec.status = to_string(region.status);
    } catch (const Error& e) {
        rec.status = to_string(e.code());
    }
    return rec;
}

inline std::vector<BenchRecord> run_bench(const BenchGrid& grid, unsigned threads = worker_threads()) {
    if (grid.scenarios.empty() || grid.n_list.empty() || grid.tau_list.empty() || grid.epsilon_list.empty() ||
        grid.repeats == 0)
        throw Error(ErrorCode::InvalidArgument, "benchmark grid is empty");
    struct Job {
        Scenario s;
        std::size_t n;
        double tau, eps;
        std::size_t rep;
    };
    std::vector<Job> jobs;
    for (Scenario s : grid.scenarios)
        for (double eps : grid.epsilon_list)
            for (std::size_t n : grid.n_list)
                for (double tau : grid.tau_list)
                    for (std::size_t r = 0; r < grid.repeats; ++r) jobs.push_back({s, n, tau, eps, r});
    std::vector<BenchRecord> out(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t i) {
        const Job& j = jobs[i];
        out[i] = bench_cell(j.s, j.n, j.tau, j.eps, cell_seed(grid.master_seed, j.s, j.n, j.tau, j.eps, j.rep));
    });
    return out;
}

struct BenchSummary {
    std::string scenario;
    std::size_t n = 0;
    double tau = 0.0;
    double epsilon = 0.0;
    std::size_t runs = 0;
    double mean_direction_count = 0.0;
    double mean_wall_time_seconds = 0.0;
};

/// Mean count and time per (scenario, epsilon, n, tau) over successful runs.
inline std::vector<BenchSummary> summarize(const std::vector<BenchRecord>& records) {
    std::map<std::tuple<std::string, double, std::size_t, double>, BenchSummary> cells;
    for (const auto& r : records) {
        auto& c = cells[{r.scenario, r.epsilon, r.n, r.tau}];
        c.scenario = r.scenario, c.n = r.n, c.tau = r.tau, c.epsilon = r.epsilon;
        if (r.status != "Nonempty" && r.status != "Empty" && r.status != "Degenerate") continue;
        ++c.runs;
        c.mean_direction_count += static_cast<double>(r.direction_count);
        c.mean_wall_time_seconds += r.wall_time_seconds;
    }
    std::vector<BenchSummary> out;
    for (auto& [key, c] : cells) {
        if (c.runs > 0) {
            c.mean_direction_count /= static_cast<double>(c.runs);
            c.mean_wall_time_seconds /= static_cast<double>(c.runs);
        }
        out.push_back(c);
    }
    return out;
}

/// Records followed by summary rows (kind = "mean", seed and facet count empty).
inline void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
    out << "kind,scenario,n,tau,epsilon,seed,direction_count,facet_count,wall_time_seconds,status\n";
    for (const auto& r : records)
        out << "run," << r.scenario << ',' << r.n << ',' << r.tau << ',' << r.epsilon << ',' << r.seed << ','
            << r.direction_count << ',' << r.facet_count << ',' << r.wall_time_seconds << ',' << r.status << '\n';
    for (const auto& s : summarize(records))
        out << "mean," << s.scenario << ',' << s.n << ',' << s.tau << ',' << s.epsilon << ",," << s.mean_direction_count
            << ",," << s.mean_wall_time_seconds << ",runs=" << s.runs << '\n';
}

}  // namespace tukey3d
