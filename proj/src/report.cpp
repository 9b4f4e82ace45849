#include "concur/report.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace concur {

const char* to_string(LifespanConvention convention) {
    return convention == LifespanConvention::inclusive ? "inclusive" : "difference";
}

Json diagram_to_json(const ReducedBoundary& reduction, const PersistenceDiagram& diagram) {
    const auto& labels = reduction.filtration().labels();
    Json out = Json::array();
    for (const auto& cls : diagram.classes) {
        Json edges = Json::array();
        for (const auto& e : cls.representative) edges.push_back({labels[e.a], labels[e.b]});
        Json cycles = Json::array();
        for (const auto& sc : localize_short_cycles(reduction, cls)) {
            cycles.push_back({{"vertices", {labels[sc.a], labels[sc.b], labels[sc.c]}},
                              {"level_range", {sc.low, sc.high}}});
        }
        out.push_back({{"birth", cls.birth},
                       {"death", cls.death},
                       {"lifespan", cls.lifespan},
                       {"representative_edges", std::move(edges)},
                       {"short_cycles", std::move(cycles)}});
    }
    return out;
}

PersistenceDiagram diagram_from_json(const Json& j) {
    const Json& classes = j.is_object() ? j.at("classes") : j;
    if (!classes.is_array()) throw ParseError("diagram JSON must be an array of classes");
    PersistenceDiagram out;
    for (const auto& item : classes) {
        PersistentClass cls;
        cls.birth = item.at("birth").get<Level>();
        cls.death = item.at("death").get<Level>();
        cls.lifespan = item.contains("lifespan") ? item.at("lifespan").get<int>()
                                                 : static_cast<int>(cls.birth) - static_cast<int>(cls.death);
        if (cls.death >= cls.birth) throw ValueError("diagram class with death >= birth");
        out.classes.push_back(std::move(cls));
    }
    return out;
}

Json synthesis_record_to_json(const SynthesisRecord& r) {
    return {{"seed", r.seed},
            {"threshold", r.threshold},
            {"delta_initial", r.delta_initial},
            {"delta_final", r.delta_final},
            {"flip_attempts", r.flip_attempts},
            {"successful_flips", r.successful_flips}};
}

Json run_record_to_json(const RunRecord& run) {
    Json j{{"index", run.index}, {"seed", run.seed}, {"failed", run.failed}};
    if (run.failed) j["failure"] = run.failure;
    if (run.synthesis) {
        const auto& s = *run.synthesis;
        j["synthesis"] = {{"threshold", s.threshold},
                          {"delta_initial", s.delta_initial},
                          {"delta_final", s.delta_final},
                          {"flip_attempts", s.flip_attempts},
                          {"successful_flips", s.successful_flips}};
    }
    Json classes = Json::array();
    for (const auto& c : run.maximal_classes) {
        classes.push_back({{"birth", c.birth},
                           {"death", c.death},
                           {"lifespan", c.lifespan},
                           {"short_cycles", c.short_cycles}});
    }
    j["maximal_classes"] = std::move(classes);
    return j;
}

RunRecord run_record_from_json(const Json& j) {
    RunRecord run;
    run.index = j.at("index").get<std::size_t>();
    run.seed = j.at("seed").get<std::uint64_t>();
    run.failed = j.at("failed").get<bool>();
    if (run.failed) run.failure = j.value("failure", "");
    if (j.contains("synthesis")) {
        const auto& s = j.at("synthesis");
        run.synthesis = SynthesisStats{s.at("threshold").get<double>(), s.at("delta_initial").get<double>(),
                                       s.at("delta_final").get<double>(), s.at("flip_attempts").get<std::size_t>(),
                                       s.at("successful_flips").get<std::size_t>()};
    }
    for (const auto& c : j.at("maximal_classes")) {
        run.maximal_classes.push_back(MaximalClassRecord{
            c.at("birth").get<Level>(), c.at("death").get<Level>(), c.at("lifespan").get<int>(),
            c.at("short_cycles").get<std::vector<std::array<std::string, 3>>>()});
    }
    return run;
}

Json study_config_to_json(const StudyConfig& cfg) {
    return {{"n_synthetic", cfg.n_synthetic},
            {"n_bootstrap", cfg.n_bootstrap},
            {"n_cutoff_resamples", cfg.n_cutoff_resamples},
            {"max_flip_attempts", cfg.max_flip_attempts},
            {"seed", cfg.master_seed},
            {"lifespan_convention", to_string(cfg.lifespan_convention)},
            {"tracked_vertices", cfg.tracked_vertices}};
}

Json summary_to_json(const std::optional<SixNumberSummary>& s) {
    if (!s) return nullptr;
    return {{"min", s->min}, {"q1", s->q1},   {"median", s->median}, {"mean", s->mean},
            {"q3", s->q3},   {"max", s->max}, {"count", s->count}};
}

Json comparison_to_json(const ComparisonSummary& c) {
    return {{"observed_lifespan", c.observed_lifespan},
            {"observed_birth", c.observed_birth},
            {"n_compared", c.n_compared},
            {"frac_lifespan_exceeds_observed", c.frac_lifespan_exceeds},
            {"frac_birth_exceeds_observed", c.frac_birth_exceeds}};
}

namespace {

Json membership_to_json(const VertexMembership& m) {
    Json props = Json::object();
    for (const auto& [label, p] : m.proportions) props[label] = p;
    return {{"denominator", m.denominator}, {"proportions", std::move(props)}};
}

Json runs_to_json(const std::vector<RunRecord>& runs) {
    Json out = Json::array();
    for (const auto& run : runs) out.push_back(run_record_to_json(run));
    return out;
}

std::string fixed(double v, int digits) { return fmt::format("{:.{}f}", v, digits); }

}  // namespace

Json report_to_json(const SimulationReport& r) {
    return {{"study", "simulation"},
            {"cutoff", r.cutoff},
            {"n_runs", r.runs.size()},
            {"n_failed", r.n_failed},
            {"n_without_classes", r.n_without_classes},
            {"n_without_short_cycle", r.n_without_short_cycle},
            {"lifespan_summary", summary_to_json(r.lifespan_summary)},
            {"birth_summary", summary_to_json(r.birth_summary)},
            {"flip_attempt_summary", summary_to_json(r.flip_attempt_summary)},
            {"successful_flip_summary", summary_to_json(r.successful_flip_summary)},
            {"comparison", comparison_to_json(r.comparison)},
            {"vertex_membership", membership_to_json(r.vertex_membership)},
            {"per_run_records", runs_to_json(r.runs)}};
}

Json report_to_json(const BootstrapReport& r) {
    return {{"study", "bootstrap"},
            {"n_runs", r.runs.size()},
            {"n_without_classes", r.n_without_classes},
            {"n_without_short_cycle", r.n_without_short_cycle},
            {"lifespan_summary", summary_to_json(r.lifespan_summary)},
            {"birth_summary", summary_to_json(r.birth_summary)},
            {"vertex_membership", membership_to_json(r.vertex_membership)},
            {"per_resample_records", runs_to_json(r.runs)}};
}

std::string six_number_table(const std::optional<SixNumberSummary>& s) {
    if (!s) return "(no data)\n";
    std::string out = fmt::format("{:>8} {:>8} {:>8} {:>8} {:>8} {:>8}\n", "Min.", "1st Qu.", "Median", "Mean",
                                  "3rd Qu.", "Max.");
    out += fmt::format("{:>8.2f} {:>8.2f} {:>8.2f} {:>8.2f} {:>8.2f} {:>8.2f}\n", s->min, s->q1, s->median, s->mean,
                       s->q3, s->max);
    return out;
}

std::string label_value_grid(const std::vector<std::pair<std::string, std::string>>& cells, std::size_t per_line) {
    std::string out;
    for (std::size_t start = 0; start < cells.size(); start += per_line) {
        const auto stop = std::min(cells.size(), start + per_line);
        std::string labels, values;
        for (auto k = start; k < stop; ++k) {
            const auto width = std::max(cells[k].first.size(), cells[k].second.size());
            const bool last = k + 1 == stop;
            labels += last ? cells[k].first : fmt::format("{:<{}}", cells[k].first, width + 2);
            values += last ? cells[k].second : fmt::format("{:<{}}", cells[k].second, width + 2);
        }
        out += labels + "\n" + values + "\n";
    }
    return out;
}

std::string counts_table(const std::vector<std::pair<std::string, std::int64_t>>& counts) {
    std::vector<std::pair<std::string, std::string>> cells;
    for (const auto& [label, n] : counts) cells.emplace_back(label, std::to_string(n));
    return label_value_grid(cells);
}

std::string membership_table(const VertexMembership& m) {
    std::vector<std::pair<std::string, std::string>> cells;
    for (const auto& [label, p] : m.proportions) cells.emplace_back(label, fixed(p, 3));
    return label_value_grid(cells);
}

std::string render_simulation_text(const SimulationReport& r) {
    std::string out;
    out += fmt::format("bootstrap cutoff m2 = {:.6f}\n", r.cutoff);
    out += fmt::format("syntheses: {} (failed {}, without classes {}, without short cycle {})\n\n", r.runs.size(),
                       r.n_failed, r.n_without_classes, r.n_without_short_cycle);
    out += "Maximum lifespan\n" + six_number_table(r.lifespan_summary) + "\n";
    out += "Birth level of maximum-lifespan classes\n" + six_number_table(r.birth_summary) + "\n";
    out += "Flip attempts\n" + six_number_table(r.flip_attempt_summary) + "\n";
    out += "Successful flips\n" + six_number_table(r.successful_flip_summary) + "\n";
    out += fmt::format("Observed: maximum lifespan {}, birth {}\n", r.comparison.observed_lifespan,
                       r.comparison.observed_birth);
    out += fmt::format("fraction of runs with larger maximum lifespan: {}\n", fixed(r.comparison.frac_lifespan_exceeds, 3));
    out += fmt::format("fraction of runs with larger birth:            {}\n\n", fixed(r.comparison.frac_birth_exceeds, 3));
    out += fmt::format("Short-cycle vertex membership ({} runs with short cycles)\n", r.vertex_membership.denominator);
    out += membership_table(r.vertex_membership);
    return out;
}

std::string render_bootstrap_text(const BootstrapReport& r) {
    std::string out;
    out += fmt::format("resamples: {} (without classes {}, without short cycle {})\n\n", r.runs.size(),
                       r.n_without_classes, r.n_without_short_cycle);
    out += "Maximum lifespan\n" + six_number_table(r.lifespan_summary) + "\n";
    out += "Birth level of maximum-lifespan classes\n" + six_number_table(r.birth_summary) + "\n";
    out += fmt::format("Short-cycle vertex membership ({} resamples with short cycles)\n",
                       r.vertex_membership.denominator);
    out += membership_table(r.vertex_membership);
    return out;
}

}  // namespace concur
