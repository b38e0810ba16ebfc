#pragma once

// sample -> instantiate -> solve -> accumulate, in parallel.
//
// A pilot pass over the first min(100000, count) samples fixes the bounds
// (unless explicit bounds are configured); its roots are kept and binned.
// The remaining samples are processed in fixed-size chunks handed out to
// workers, each owning a private grid. Grids hold integer counts, so the
// merged result does not depend on the worker count or scheduling.

#include "polynomiogram/config.hpp"
#include "polynomiogram/density.hpp"
#include "polynomiogram/error.hpp"
#include "polynomiogram/family.hpp"
#include "polynomiogram/sampling.hpp"
#include "polynomiogram/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace polynomiogram::pipeline {

inline constexpr std::uint64_t kPilotSamples = 100000;
inline constexpr std::uint64_t kChunkSize = 512;

struct SweepOptions
{
    int width = 1024;
    int height = 1024;
    config::SolverConfig solver;
    config::BoundsConfig bounds;
    int workers = 0;                  // 0 = one per hardware thread
    std::uint64_t roots_csv_cap = 0;  // rows of (root, sample index) to keep
};

struct RootRow
{
    complex z;
    std::uint64_t sample;
};

struct SweepResult
{
    density::DensityGrid grid;
    bool degenerate_bounds = false;
    std::uint64_t samples = 0;
    std::uint64_t rejected = 0;        // vanishing leading coefficient
    std::uint64_t eval_errors = 0;     // coefficient expression failed to evaluate
    std::uint64_t solver_failures = 0; // NoConvergence / DerivativeBreakdown
    std::uint64_t roots_offered = 0;   // roots handed to the grid
    std::vector<RootRow> rows;         // first roots_csv_cap roots in sample order
    double seconds = 0.0;
    int workers = 1;
};

/// Roots of one polynomial with the configured engine and clean-up pass.
inline solver::RootSet solve(const Polynomial& p, const config::SolverConfig& cfg)
{
    if (cfg.engine == solver::Engine::CompanionQR) {
        auto rs = solver::roots_companion(p, cfg.degree_cap);
        return cfg.polish ? solver::polish(std::move(rs), p) : rs;
    }
    auto rs = solver::roots_aberth(p, cfg.precision);
    return cfg.polish ? solver::refine(std::move(rs), p, cfg.precision) : rs;
}

namespace detail {

enum class Outcome { Solved, Rejected, EvalFailed, SolveFailed };

struct Tally
{
    std::uint64_t rejected = 0, eval_errors = 0, solver_failures = 0;

    void add(const Tally& o)
    {
        rejected += o.rejected;
        eval_errors += o.eval_errors;
        solver_failures += o.solver_failures;
    }
};

inline Outcome solve_sample(const family::FamilySpec& family, const sampling::SamplingPlan& plan,
                            const config::SolverConfig& cfg, std::uint64_t index,
                            std::vector<complex>& roots)
{
    roots.clear();
    const auto [t1, t2] = sampling::draw_pair(plan, index);
    std::optional<Polynomial> p;
    try {
        p = family::instantiate(family, t1, t2, index);
    } catch (const EvalError&) {
        return Outcome::EvalFailed;
    }
    if (!p)
        return Outcome::Rejected;
    try {
        roots = solve(*p, cfg).roots;
    } catch (const NoConvergence&) {
        return Outcome::SolveFailed;
    } catch (const DerivativeBreakdown&) {
        return Outcome::SolveFailed;
    }
    return Outcome::Solved;
}

inline void count(Tally& t, Outcome o)
{
    switch (o) {
    case Outcome::Solved: break;
    case Outcome::Rejected: ++t.rejected; break;
    case Outcome::EvalFailed: ++t.eval_errors; break;
    case Outcome::SolveFailed: ++t.solver_failures; break;
    }
}

/// Runs body(worker, begin, end) over [first, last) in kChunkSize chunks.
template <typename Body>
void parallel_chunks(int workers, std::uint64_t first, std::uint64_t last, Body body)
{
    std::atomic<std::uint64_t> next{first};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&](int w) {
        try {
            for (;;) {
                const std::uint64_t begin = next.fetch_add(kChunkSize);
                if (begin >= last)
                    return;
                body(w, begin, std::min(last, begin + kChunkSize));
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next.store(last);
        }
    };
    if (workers <= 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(run, w);
        for (auto& t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace detail

inline int resolve_workers(int requested)
{
    if (requested > 0)
        return requested;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Full sweep over plan.count samples. Throws DegenerateInput if the pilot
/// pass yields no finite root to bound.
inline SweepResult sweep(const family::FamilySpec& family, const sampling::SamplingPlan& plan,
                         const SweepOptions& opt)
{
    const auto start = std::chrono::steady_clock::now();
    const int workers = resolve_workers(opt.workers);
    SweepResult out;
    out.samples = plan.count;
    out.workers = workers;

    const std::uint64_t degree = static_cast<std::uint64_t>(std::max(1, family.max_degree()));
    // Samples whose roots may land in the CSV: with at most `degree` roots per
    // sample, the first cap rows come from the first ceil(cap / degree) samples
    // unless some were rejected, in which case fewer rows are written.
    const std::uint64_t csv_samples =
        opt.roots_csv_cap == 0 ? 0 : (opt.roots_csv_cap + degree - 1) / degree;

    // Pilot pass, roots kept per sample so order stays by sample index.
    const std::uint64_t pilot = std::min(kPilotSamples, plan.count);
    std::vector<std::vector<complex>> pilot_roots(pilot);
    std::vector<detail::Tally> tallies(static_cast<std::size_t>(workers));
    detail::parallel_chunks(workers, 0, pilot, [&](int w, std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t i = b; i < e; ++i)
            detail::count(tallies[static_cast<std::size_t>(w)],
                          detail::solve_sample(family, plan, opt.solver, i, pilot_roots[i]));
    });

    density::Bounds bounds;
    if (opt.bounds.explicit_bounds) {
        bounds = *opt.bounds.explicit_bounds;
    } else {
        std::vector<complex> all;
        for (const auto& r : pilot_roots)
            all.insert(all.end(), r.begin(), r.end());
        const auto br = density::compute_bounds(all, opt.bounds.margin_fraction);
        bounds = br.bounds;
        out.degenerate_bounds = br.degenerate;
    }

    density::DensityGrid grid(opt.width, opt.height, bounds);
    for (std::uint64_t i = 0; i < pilot; ++i) {
        density::accumulate(grid, pilot_roots[i]);
        out.roots_offered += pilot_roots[i].size();
        if (i < csv_samples)
            for (const auto& z : pilot_roots[i])
                out.rows.push_back({z, i});
    }
    pilot_roots.clear();
    pilot_roots.shrink_to_fit();

    // Main pass with per-worker grids.
    std::vector<density::DensityGrid> grids(static_cast<std::size_t>(workers),
                                            density::DensityGrid(opt.width, opt.height, bounds));
    std::vector<std::uint64_t> offered(static_cast<std::size_t>(workers), 0);
    std::vector<std::vector<RootRow>> rows(static_cast<std::size_t>(workers));
    detail::parallel_chunks(workers, pilot, plan.count, [&](int w, std::uint64_t b, std::uint64_t e) {
        const auto wi = static_cast<std::size_t>(w);
        std::vector<complex> roots;
        for (std::uint64_t i = b; i < e; ++i) {
            detail::count(tallies[wi], detail::solve_sample(family, plan, opt.solver, i, roots));
            density::accumulate(grids[wi], roots);
            offered[wi] += roots.size();
            if (i < csv_samples)
                for (const auto& z : roots)
                    rows[wi].push_back({z, i});
        }
    });

    for (std::size_t w = 0; w < grids.size(); ++w) {
        grid = density::merge(grid, grids[w]);
        out.roots_offered += offered[w];
        out.rows.insert(out.rows.end(), rows[w].begin(), rows[w].end());
    }
    std::stable_sort(out.rows.begin(), out.rows.end(),
                     [](const RootRow& a, const RootRow& b) { return a.sample < b.sample; });
    if (out.rows.size() > opt.roots_csv_cap)
        out.rows.resize(opt.roots_csv_cap);

    detail::Tally total;
    for (const auto& t : tallies)
        total.add(t);
    out.rejected = total.rejected;
    out.eval_errors = total.eval_errors;
    out.solver_failures = total.solver_failures;
    out.grid = std::move(grid);
    if (out.grid.total_in + out.grid.total_dropped != out.roots_offered)
        throw Error("density bookkeeping violated: counts + dropped != offered");
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

inline SweepOptions options_from(const config::RunConfig& cfg)
{
    SweepOptions o;
    o.width = cfg.grid.width;
    o.height = cfg.grid.height;
    o.solver = cfg.solver;
    o.bounds = cfg.bounds;
    o.workers = cfg.workers;
    o.roots_csv_cap = cfg.output.roots_csv.empty() ? 0 : cfg.output.roots_csv_cap;
    return o;
}

inline SweepResult sweep(const config::RunConfig& cfg)
{
    return sweep(cfg.family, cfg.plan, options_from(cfg));
}

/// True when solver failures exceed 0.1% of samples.
inline bool too_many_failures(const SweepResult& r)
{
    return r.solver_failures * 1000 > r.samples;
}

} // namespace polynomiogram::pipeline
