#include "concur/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

namespace concur {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Runs body(i) for i in [0, n) on up to `jobs` threads. Results must be written by index.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& body) {
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    workers.clear();
    if (error) std::rethrow_exception(error);
}

std::vector<std::string> tracked_labels(const BinaryMatrix& b, const StudyConfig& cfg) {
    return cfg.tracked_vertices.empty() ? b.col_labels() : cfg.tracked_vertices;
}

VertexMembership membership(const std::vector<RunRecord>& runs, const std::vector<std::string>& labels) {
    VertexMembership out;
    std::vector<std::size_t> hits(labels.size(), 0);
    for (const auto& run : runs) {
        if (run.failed || !run.has_short_cycle()) continue;
        ++out.denominator;
        const auto vertices = run.cycle_vertices();
        for (std::size_t k = 0; k < labels.size(); ++k)
            if (std::binary_search(vertices.begin(), vertices.end(), labels[k])) ++hits[k];
    }
    for (std::size_t k = 0; k < labels.size(); ++k) {
        const double p = out.denominator ? static_cast<double>(hits[k]) / static_cast<double>(out.denominator) : 0.0;
        out.proportions.emplace_back(labels[k], p);
    }
    return out;
}

struct RunSummaries {
    std::optional<SixNumberSummary> lifespan;
    std::optional<SixNumberSummary> birth;
    std::size_t without_classes = 0;
    std::size_t without_short_cycle = 0;
};

RunSummaries summarize_runs(const std::vector<RunRecord>& runs) {
    std::vector<double> lifespans, births;
    RunSummaries out;
    for (const auto& run : runs) {
        if (run.failed) continue;
        if (!run.has_classes()) {
            ++out.without_classes;
            ++out.without_short_cycle;
            continue;
        }
        if (!run.has_short_cycle()) ++out.without_short_cycle;
        lifespans.push_back(run.max_lifespan());
        births.push_back(run.max_birth());
    }
    out.lifespan = summarize(std::move(lifespans));
    out.birth = summarize(std::move(births));
    return out;
}

}  // namespace

void StudyConfig::validate(const BinaryMatrix& b) const {
    if (n_synthetic < 1 || n_bootstrap < 1 || n_cutoff_resamples < 1)
        throw ContractError("study counts must be at least 1");
    if (max_flip_attempts < 1) throw ContractError("max_flip_attempts must be at least 1");
    if (jobs < 1) throw ContractError("jobs must be at least 1");
    const auto& labels = b.col_labels();
    for (const auto& v : tracked_vertices) {
        if (std::find(labels.begin(), labels.end(), v) == labels.end())
            throw ContractError("tracked vertex '" + v + "' is not a column label");
    }
}

std::uint64_t derive_seed(std::uint64_t master, SeedStream stream, std::uint64_t index) {
    const auto tag = static_cast<std::uint64_t>(stream);
    return splitmix64(splitmix64(master ^ (tag << 56)) + index);
}

std::optional<SixNumberSummary> summarize(std::vector<double> values) {
    if (values.empty()) return std::nullopt;
    std::sort(values.begin(), values.end());
    const auto quantile = [&](double p) {
        const double h = p * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const auto hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
    };
    SixNumberSummary s;
    s.count = values.size();
    s.min = values.front();
    s.q1 = quantile(0.25);
    s.median = quantile(0.5);
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    s.q3 = quantile(0.75);
    s.max = values.back();
    return s;
}

int RunRecord::max_lifespan() const {
    int best = 0;
    for (const auto& c : maximal_classes) best = std::max(best, c.lifespan);
    return best;
}

Level RunRecord::max_birth() const {
    Level best = 0;
    for (const auto& c : maximal_classes) best = std::max(best, c.birth);
    return best;
}

bool RunRecord::has_short_cycle() const {
    return std::any_of(maximal_classes.begin(), maximal_classes.end(),
                       [](const auto& c) { return !c.short_cycles.empty(); });
}

std::vector<std::string> RunRecord::cycle_vertices() const {
    std::set<std::string> vertices;
    for (const auto& c : maximal_classes)
        for (const auto& triple : c.short_cycles) vertices.insert(triple.begin(), triple.end());
    return {vertices.begin(), vertices.end()};
}

std::vector<MaximalClassRecord> analyze_maximal_classes(const BinaryMatrix& b, LifespanConvention convention) {
    const ReducedBoundary reduction(build_filtration(b));
    const auto& labels = b.col_labels();
    std::vector<MaximalClassRecord> out;
    for (const auto& cls : max_lifespan_classes(reduction.diagram(convention))) {
        MaximalClassRecord rec{cls.birth, cls.death, cls.lifespan, {}};
        for (const auto& sc : localize_short_cycles(reduction, cls))
            rec.short_cycles.push_back({labels[sc.a], labels[sc.b], labels[sc.c]});
        out.push_back(std::move(rec));
    }
    return out;
}

double exceedance_fraction(const std::vector<double>& values, double observed) {
    if (values.empty()) return 0.0;
    const auto above = std::count_if(values.begin(), values.end(), [&](double v) { return v > observed; });
    return static_cast<double>(above) / static_cast<double>(values.size());
}

ComparisonSummary compare_observed(const std::vector<RunRecord>& runs, const PersistenceDiagram& observed) {
    ComparisonSummary out;
    const auto maximal = max_lifespan_classes(observed);
    if (!maximal.empty()) {
        out.observed_lifespan = maximal.front().lifespan;
        for (const auto& c : maximal) out.observed_birth = std::max(out.observed_birth, c.birth);
    }
    std::vector<double> lifespans, births;
    for (const auto& run : runs) {
        if (run.failed || !run.has_classes()) continue;
        lifespans.push_back(run.max_lifespan());
        births.push_back(run.max_birth());
    }
    out.n_compared = lifespans.size();
    out.frac_lifespan_exceeds = exceedance_fraction(lifespans, out.observed_lifespan);
    out.frac_birth_exceeds = exceedance_fraction(births, out.observed_birth);
    return out;
}

ComparisonSummary compare_observed(const SimulationReport& report, const PersistenceDiagram& observed) {
    return compare_observed(report.runs, observed);
}

SimulationReport run_simulation_study(const BinaryMatrix& b, const StudyConfig& cfg) {
    cfg.validate(b);
    const NullSampler sampler(b);

    SimulationReport report;
    report.config = cfg;
    Rng cutoff_rng(derive_seed(cfg.master_seed, SeedStream::cutoff, 0));
    report.cutoff = bootstrap_cutoff(b, cfg.n_cutoff_resamples, cutoff_rng);
    if (!(report.cutoff > 0.0)) {
        throw StudyError("bootstrap cutoff is zero: every resample reproduces the data's Gram matrix");
    }

    const RefineOptions options{cfg.max_flip_attempts, false};
    report.runs.resize(cfg.n_synthetic);
    parallel_for(cfg.n_synthetic, cfg.jobs, [&](std::size_t i) {
        RunRecord& run = report.runs[i];
        run.index = i;
        run.seed = derive_seed(cfg.master_seed, SeedStream::synthesis, i);
        try {
            const auto rec = sampler.generate(run.seed, report.cutoff, options);
            run.synthesis = SynthesisStats{rec.threshold, rec.delta_initial, rec.delta_final, rec.flip_attempts,
                                           rec.successful_flips};
            run.maximal_classes = analyze_maximal_classes(rec.matrix, cfg.lifespan_convention);
        } catch (const NonConvergenceError& e) {
            const auto& best = e.best();
            run.failed = true;
            run.failure = e.what();
            run.synthesis = SynthesisStats{best.threshold, best.delta_initial, best.delta_final, best.flip_attempts,
                                           best.successful_flips};
        } catch (const NumericError& e) {
            run.failed = true;
            run.failure = e.what();
        }
    });

    std::vector<double> attempts, successes;
    for (const auto& run : report.runs) {
        if (run.failed) {
            ++report.n_failed;
            continue;
        }
        attempts.push_back(static_cast<double>(run.synthesis->flip_attempts));
        successes.push_back(static_cast<double>(run.synthesis->successful_flips));
    }
    if (report.n_failed * 10 > cfg.n_synthetic) {
        throw StudyError(std::to_string(report.n_failed) + " of " + std::to_string(cfg.n_synthetic) +
                         " syntheses failed to converge (more than 10%)");
    }
    auto sums = summarize_runs(report.runs);
    report.lifespan_summary = sums.lifespan;
    report.birth_summary = sums.birth;
    report.n_without_classes = sums.without_classes;
    report.n_without_short_cycle = sums.without_short_cycle;
    report.flip_attempt_summary = summarize(std::move(attempts));
    report.successful_flip_summary = summarize(std::move(successes));
    report.comparison =
        compare_observed(report.runs, persistent_homology(build_filtration(b), cfg.lifespan_convention));
    report.vertex_membership = membership(report.runs, tracked_labels(b, cfg));
    return report;
}

BootstrapReport run_bootstrap_study(const BinaryMatrix& b, const StudyConfig& cfg) {
    cfg.validate(b);
    BootstrapReport report;
    report.config = cfg;
    report.runs.resize(cfg.n_bootstrap);
    parallel_for(cfg.n_bootstrap, cfg.jobs, [&](std::size_t i) {
        RunRecord& run = report.runs[i];
        run.index = i;
        run.seed = derive_seed(cfg.master_seed, SeedStream::bootstrap, i);
        Rng rng(run.seed);
        run.maximal_classes = analyze_maximal_classes(resample_rows(b, rng), cfg.lifespan_convention);
    });
    auto sums = summarize_runs(report.runs);
    report.lifespan_summary = sums.lifespan;
    report.birth_summary = sums.birth;
    report.n_without_classes = sums.without_classes;
    report.n_without_short_cycle = sums.without_short_cycle;
    report.vertex_membership = membership(report.runs, tracked_labels(b, cfg));
    return report;
}

}  // namespace concur
