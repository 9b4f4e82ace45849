#include <set>

#include "concur/experiments.hpp"
#include "concur/report.hpp"
#include "doctest.h"
#include "support/planted.hpp"

using namespace concur;

namespace {

RunRecord run_with(int lifespan, Level birth) {
    RunRecord r;
    r.maximal_classes.push_back({birth, static_cast<Level>(birth - lifespan), lifespan, {}});
    return r;
}

PersistenceDiagram observed(Level birth, Level death) {
    PersistenceDiagram d;
    d.classes.push_back({birth, death, lifespan_of(birth, death, LifespanConvention::difference), {}});
    return d;
}

StudyConfig small_config(std::size_t n) {
    StudyConfig cfg;
    cfg.n_synthetic = n;
    cfg.n_bootstrap = n;
    cfg.n_cutoff_resamples = 200;
    cfg.master_seed = 99;
    return cfg;
}

}  // namespace

TEST_CASE("exceedance fractions") {
    CHECK(exceedance_fraction({3, 5, 7}, 5) == 1.0 / 3.0);
    CHECK(exceedance_fraction({1, 2, 3}, 5) == 0.0);
    CHECK(exceedance_fraction({6, 7, 8}, 5) == 1.0);
    CHECK(exceedance_fraction({}, 5) == 0.0);
}

TEST_CASE("compare observed") {
    const std::vector<RunRecord> runs{run_with(3, 4), run_with(5, 9), run_with(7, 10)};
    const auto c = compare_observed(runs, observed(8, 3));
    CHECK(c.observed_lifespan == 5);
    CHECK(c.observed_birth == 8);
    CHECK(c.n_compared == 3);
    CHECK(c.frac_lifespan_exceeds == 1.0 / 3.0);
    CHECK(c.frac_birth_exceeds == 2.0 / 3.0);

    CHECK(compare_observed(runs, observed(20, 1)).frac_lifespan_exceeds == 0.0);
    CHECK(compare_observed(runs, observed(2, 1)).frac_lifespan_exceeds == 1.0);

    auto with_failures = runs;
    with_failures.push_back(RunRecord{});  // no classes
    RunRecord failed = run_with(100, 100);
    failed.failed = true;
    with_failures.push_back(failed);
    CHECK(compare_observed(with_failures, observed(8, 3)).n_compared == 3);
}

TEST_CASE("summaries use interpolated quartiles") {
    const auto s = summarize({4, 1, 3, 2});
    REQUIRE(s);
    CHECK(s->min == 1);
    CHECK(s->q1 == 1.75);
    CHECK(s->median == 2.5);
    CHECK(s->mean == 2.5);
    CHECK(s->q3 == 3.25);
    CHECK(s->max == 4);
    CHECK(s->count == 4);

    const auto one = summarize({7});
    REQUIRE(one);
    CHECK(one->min == 7);
    CHECK(one->q1 == 7);
    CHECK(one->median == 7);
    CHECK(one->mean == 7);
    CHECK(one->q3 == 7);
    CHECK(one->max == 7);

    CHECK_FALSE(summarize({}));
}

TEST_CASE("derived seeds differ across streams and indices") {
    std::set<std::uint64_t> seen;
    for (auto stream : {SeedStream::cutoff, SeedStream::synthesis, SeedStream::bootstrap})
        for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(7, stream, i));
    CHECK(seen.size() == 3000);
    CHECK(derive_seed(7, SeedStream::synthesis, 3) == derive_seed(7, SeedStream::synthesis, 3));
    CHECK(derive_seed(7, SeedStream::synthesis, 3) != derive_seed(8, SeedStream::synthesis, 3));
}

TEST_CASE("config validation") {
    const auto b = planted::sampler_30x8();
    auto cfg = small_config(0);
    CHECK_THROWS_AS(cfg.validate(b), ContractError);
    cfg = small_config(2);
    cfg.tracked_vertices = {"g1", "nope"};
    CHECK_THROWS_AS(cfg.validate(b), ContractError);
    cfg.tracked_vertices = {"g1"};
    CHECK_NOTHROW(cfg.validate(b));
}

TEST_CASE("simulation: a single run collapses the summaries") {
    const auto report = run_simulation_study(planted::sampler_30x8(), small_config(1));
    REQUIRE(report.runs.size() == 1);
    REQUIRE(report.lifespan_summary);
    const auto& s = *report.lifespan_summary;
    CHECK(s.min == s.max);
    CHECK(s.q1 == s.min);
    CHECK(s.median == s.min);
    CHECK(s.mean == s.min);
    CHECK(s.q3 == s.min);
    CHECK(s.min == report.runs[0].max_lifespan());
}

TEST_CASE("simulation: planted matrix with 20 syntheses") {
    const auto b = planted::acceptance_60x10();
    auto cfg = small_config(20);
    cfg.tracked_vertices = {"g1", "g2", "g3"};
    const auto report = run_simulation_study(b, cfg);
    CHECK(report.cutoff > 0);
    CHECK(report.n_failed == 0);
    REQUIRE(report.lifespan_summary);
    REQUIRE(report.birth_summary);
    REQUIRE(report.flip_attempt_summary);
    REQUIRE(report.successful_flip_summary);
    for (const auto& s : {*report.lifespan_summary, *report.birth_summary}) {
        CHECK(s.min <= s.q1);
        CHECK(s.q1 <= s.median);
        CHECK(s.median <= s.q3);
        CHECK(s.q3 <= s.max);
    }
    CHECK(report.comparison.observed_lifespan > 0);
    CHECK(report.comparison.n_compared == 20 - report.n_without_classes);
    REQUIRE(report.vertex_membership.proportions.size() == 3);
    for (const auto& [label, p] : report.vertex_membership.proportions) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
    CHECK(report.vertex_membership.denominator + report.n_without_short_cycle == 20);
    for (const auto& run : report.runs) {
        CHECK_FALSE(run.failed);
        REQUIRE(run.synthesis);
        CHECK(run.synthesis->delta_final < report.cutoff);
        for (const auto& c : run.maximal_classes) CHECK(c.lifespan == int(c.birth) - int(c.death));
    }
}

TEST_CASE("simulation: identical across thread counts") {
    const auto b = planted::sampler_30x8();
    auto cfg = small_config(24);
    cfg.jobs = 1;
    const auto serial = report_to_json(run_simulation_study(b, cfg)).dump();
    cfg.jobs = 6;
    const auto parallel = report_to_json(run_simulation_study(b, cfg)).dump();
    CHECK(serial == parallel);
    cfg.master_seed = 100;
    CHECK(report_to_json(run_simulation_study(b, cfg)).dump() != serial);
}

TEST_CASE("simulation: inclusive convention shifts lifespans by one for dying classes") {
    const auto b = planted::sampler_30x8();
    auto cfg = small_config(5);
    cfg.lifespan_convention = LifespanConvention::inclusive;
    const auto report = run_simulation_study(b, cfg);
    for (const auto& run : report.runs)
        for (const auto& c : run.maximal_classes)
            CHECK(c.lifespan == lifespan_of(c.birth, c.death, LifespanConvention::inclusive));
}

TEST_CASE("bootstrap: toy matrix is reproducible") {
    const auto b = BinaryMatrix::from_rows({{1, 1, 0}, {0, 1, 1}});
    auto cfg = small_config(10);
    const auto a = report_to_json(run_bootstrap_study(b, cfg)).dump();
    cfg.jobs = 3;
    CHECK(report_to_json(run_bootstrap_study(b, cfg)).dump() == a);
}

TEST_CASE("bootstrap: planted triple survives most resamples") {
    const auto b = planted::acceptance_60x10();
    auto cfg = small_config(100);
    cfg.tracked_vertices = {"g1", "g2", "g3", "g4"};
    cfg.jobs = 4;
    const auto report = run_bootstrap_study(b, cfg);
    REQUIRE(report.vertex_membership.denominator > 50);
    for (const auto& [label, p] : report.vertex_membership.proportions) {
        INFO(label);
        if (label != "g4") CHECK(p > 0.5);
    }
    for (const auto& run : report.runs)
        for (const auto& c : run.maximal_classes) CHECK(c.lifespan == int(c.birth) - int(c.death));
}

TEST_CASE("run records round-trip through JSON") {
    const auto report = run_simulation_study(planted::sampler_30x8(), small_config(3));
    for (const auto& run : report.runs) {
        const auto j = run_record_to_json(run);
        CHECK(run_record_to_json(run_record_from_json(j)) == j);
    }
}
