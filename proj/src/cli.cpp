#include "concur/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "concur/experiments.hpp"
#include "concur/homology.hpp"
#include "concur/matrix.hpp"
#include "concur/plot.hpp"
#include "concur/report.hpp"

namespace concur::cli {

namespace {

struct Options {
    std::string command;
    std::string input;
    std::string output;
    std::string records;
    std::string report;
    std::uint64_t seed = kDefaultSeed;
    bool seed_given = false;
    std::size_t n_synthetic = 500;
    std::size_t n_bootstrap = 500;
    std::size_t n_cutoff_resamples = 2000;
    std::size_t max_flip_attempts = kDefaultMaxFlipAttempts;
    std::size_t jobs = 1;
    std::size_t disk_threshold = kDefaultDiskThreshold;
    std::string convention = "difference";
    std::vector<std::string> track;
    std::optional<Level> birth;
    std::optional<Level> death;
};

LifespanConvention parse_convention(const std::string& s) {
    return s == "inclusive" ? LifespanConvention::inclusive : LifespanConvention::difference;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::ios_base::failure("cannot open '" + path + "' for writing");
    file << content;
    if (!file) throw std::ios_base::failure("failed writing '" + path + "'");
}

// Writes to --output when given, else to the text stream.
void emit(const Options& opt, std::ostream& out, const std::string& content) {
    if (opt.output.empty())
        out << content;
    else
        write_file(opt.output, content);
}

BinaryMatrix load_binary(const Options& opt) { return dichotomize(load_scored_matrix_file(opt.input)); }

StudyConfig study_config(const Options& opt) {
    StudyConfig cfg;
    cfg.n_synthetic = opt.n_synthetic;
    cfg.n_bootstrap = opt.n_bootstrap;
    cfg.n_cutoff_resamples = opt.n_cutoff_resamples;
    cfg.max_flip_attempts = opt.max_flip_attempts;
    cfg.master_seed = opt.seed;
    cfg.lifespan_convention = parse_convention(opt.convention);
    cfg.tracked_vertices = opt.track;
    cfg.jobs = opt.jobs;
    return cfg;
}

// The effective configuration, echoed at the top of every output.
Json effective_config(const Options& opt, Json extra = Json::object()) {
    Json cfg{{"command", opt.command}, {"input", opt.input}};
    for (auto& [key, value] : extra.items()) cfg[key] = value;
    if (cfg.contains("seed")) cfg["seed_source"] = opt.seed_given ? "flag" : "default";
    return cfg;
}

std::string text_header(const Json& cfg) {
    std::string out = fmt::format("# concur {}\n", cfg.at("command").get<std::string>());
    for (const auto& [key, value] : cfg.items()) {
        if (key == "command") continue;
        std::string rendered;
        if (value.is_string()) {
            rendered = value.get<std::string>();
        } else if (value.is_array()) {
            for (const auto& v : value) rendered += (rendered.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
            if (rendered.empty()) rendered = "(all)";
        } else {
            rendered = value.dump();
        }
        out += fmt::format("# {} = {}\n", key, rendered);
    }
    return out;
}

std::string join_triples(const std::vector<ShortCycle>& cycles, const std::vector<std::string>& labels) {
    std::string out;
    for (const auto& sc : cycles) {
        if (!out.empty()) out += " and ";
        out += fmt::format("{}, {}, {}", labels[sc.a], labels[sc.b], labels[sc.c]);
    }
    return out;
}

int cmd_counts(const Options& opt, std::ostream& out) {
    const auto b = load_binary(opt);
    emit(opt, out, text_header(effective_config(opt)) + counts_table(mutation_counts(b)));
    return kSuccess;
}

int cmd_analyze(const Options& opt, std::ostream& out) {
    const auto b = load_binary(opt);
    const auto convention = parse_convention(opt.convention);
    const Json cfg = effective_config(opt, {{"lifespan_convention", opt.convention}});
    std::string text = text_header(cfg);
    text += fmt::format("samples {}, variables {}\n", b.rows(), b.cols());

    auto filtration = build_filtration(b);
    if (filtration.empty()) {
        text += "empty filtration: no variable is present in any sample\n";
        out << text;
        if (!opt.output.empty()) write_file(opt.output, "[]\n");
        return kSuccess;
    }
    const ReducedBoundary reduction(std::move(filtration));
    const auto diagram = reduction.diagram(convention);
    const auto& labels = reduction.filtration().labels();
    text += fmt::format("maximum frequency level {}\n", reduction.filtration().max_level());
    text += fmt::format("dimension 1 classes: {}\n", diagram.classes.size());

    std::map<std::pair<Level, Level>, std::size_t, std::greater<>> multiplicity;
    for (const auto& c : diagram.classes) ++multiplicity[{c.birth, c.death}];
    for (const auto& [point, count] : multiplicity)
        text += fmt::format("  born {:>3}, died {:>3}  x {}\n", point.first, point.second, count);

    const auto maximal = max_lifespan_classes(diagram);
    if (!maximal.empty()) {
        text += fmt::format("longest lifespan {} ({} class{})\n", maximal.front().lifespan, maximal.size(),
                            maximal.size() == 1 ? "" : "es");
        for (const auto& cls : maximal) {
            const auto cycles = localize_short_cycles(reduction, cls);
            text += fmt::format("  class ({}, {}): {}\n", cls.birth, cls.death,
                                cycles.empty() ? std::string("no short representative")
                                               : "short cycles " + join_triples(cycles, labels));
        }
    }
    out << text;
    if (!opt.output.empty()) write_file(opt.output, diagram_to_json(reduction, diagram).dump(2) + "\n");
    return kSuccess;
}

int cmd_localize(const Options& opt, std::ostream& out) {
    const auto b = load_binary(opt);
    const Json cfg = effective_config(opt, {{"lifespan_convention", opt.convention}});
    std::string text = text_header(cfg);
    auto filtration = build_filtration(b);
    if (filtration.empty()) {
        out << text << "empty filtration: no variable is present in any sample\n";
        if (!opt.output.empty()) write_file(opt.output, "[]\n");
        return kSuccess;
    }
    const ReducedBoundary reduction(std::move(filtration));
    auto diagram = reduction.diagram(parse_convention(opt.convention));
    std::erase_if(diagram.classes, [&](const PersistentClass& c) {
        return (opt.birth && c.birth != *opt.birth) || (opt.death && c.death != *opt.death);
    });
    const auto& labels = reduction.filtration().labels();
    for (const auto& cls : diagram.classes) {
        text += fmt::format("class ({}, {}) lifespan {}\n", cls.birth, cls.death, cls.lifespan);
        const auto cycles = localize_short_cycles(reduction, cls);
        if (cycles.empty()) text += "  no short representative\n";
        for (const auto& sc : cycles)
            text += fmt::format("  {}, {}, {}  levels {}..{}\n", labels[sc.a], labels[sc.b], labels[sc.c], sc.low,
                                sc.high);
    }
    out << text;
    if (!opt.output.empty()) write_file(opt.output, diagram_to_json(reduction, diagram).dump(2) + "\n");
    return kSuccess;
}

void write_records(const std::string& path, const std::vector<RunRecord>& runs) {
    std::string ndjson;
    for (const auto& run : runs) ndjson += run_record_to_json(run).dump() + "\n";
    write_file(path, ndjson);
}

int cmd_simulate(const Options& opt, std::ostream& out) {
    const auto b = load_binary(opt);
    const auto cfg = study_config(opt);
    const Json echo = effective_config(opt, study_config_to_json(cfg));
    const auto report = run_simulation_study(b, cfg);

    Json j{{"tool", "concur"}, {"config", echo}};
    const Json body = report_to_json(report);
    for (const auto& [key, value] : body.items()) j[key] = value;
    if (!opt.output.empty()) write_file(opt.output, j.dump(2) + "\n");
    if (!opt.records.empty()) write_records(opt.records, report.runs);
    out << text_header(echo) << render_simulation_text(report);
    return kSuccess;
}

int cmd_bootstrap(const Options& opt, std::ostream& out) {
    const auto b = load_binary(opt);
    const auto cfg = study_config(opt);
    const Json echo = effective_config(
        opt, {{"n_bootstrap", cfg.n_bootstrap},
              {"seed", cfg.master_seed},
              {"lifespan_convention", opt.convention},
              {"tracked_vertices", cfg.tracked_vertices}});
    const auto report = run_bootstrap_study(b, cfg);

    Json j{{"tool", "concur"}, {"config", echo}};
    const Json body = report_to_json(report);
    for (const auto& [key, value] : body.items()) j[key] = value;
    if (!opt.output.empty()) write_file(opt.output, j.dump(2) + "\n");
    if (!opt.records.empty()) write_records(opt.records, report.runs);
    out << text_header(echo) << render_bootstrap_text(report);
    return kSuccess;
}

int cmd_compare(const Options& opt, std::ostream& out) {
    std::ifstream in(opt.report);
    if (!in) throw std::ios_base::failure("cannot open '" + opt.report + "'");
    const Json report = Json::parse(in);
    const auto& records = report.contains("per_run_records") ? report.at("per_run_records") : report;
    std::vector<RunRecord> runs;
    for (const auto& r : records) runs.push_back(run_record_from_json(r));

    const auto b = load_binary(opt);
    const auto diagram = persistent_homology(build_filtration(b), parse_convention(opt.convention));
    const auto cmp = compare_observed(runs, diagram);

    const Json echo = effective_config(opt, {{"report", opt.report}, {"lifespan_convention", opt.convention}});
    std::string text = text_header(echo);
    text += fmt::format("runs compared: {}\n", cmp.n_compared);
    text += fmt::format("observed maximum lifespan {}, birth {}\n", cmp.observed_lifespan, cmp.observed_birth);
    text += fmt::format("fraction of runs with larger maximum lifespan: {:.3f}\n", cmp.frac_lifespan_exceeds);
    text += fmt::format("fraction of runs with larger birth:            {:.3f}\n", cmp.frac_birth_exceeds);
    out << text;
    if (!opt.output.empty()) {
        const Json j{{"tool", "concur"}, {"config", echo}, {"comparison", comparison_to_json(cmp)}};
        write_file(opt.output, j.dump(2) + "\n");
    }
    return kSuccess;
}

int cmd_plot(const Options& opt, std::ostream& out) {
    std::ifstream in(opt.input);
    if (!in) throw std::ios_base::failure("cannot open '" + opt.input + "'");
    const auto diagram = diagram_from_json(Json::parse(in));
    const auto plot = sunflower_plot_data(diagram, opt.disk_threshold);
    const Json echo = effective_config(opt, {{"disk_threshold", opt.disk_threshold}});
    std::string svg = render_sunflower_svg(plot);
    // Configuration echo as an XML comment after the declaration.
    const auto after_decl = svg.find('\n') + 1;
    std::string comment = "<!--\n" + text_header(echo) + "-->\n";
    svg.insert(after_decl, comment);
    emit(opt, out, svg);
    return kSuccess;
}

// Fills options not given on the command line from `key = value` lines. Keys are long option
// names, with '_' accepted for '-'.
void apply_config_file(CLI::App& sub, const std::string& path) {
    for (const auto& item : CLI::ConfigINI().from_file(path)) {
        if (!item.parents.empty()) throw CLI::ConfigError("config sections are not supported: " + item.fullname());
        std::string name = item.name;
        std::replace(name.begin(), name.end(), '_', '-');
        if (name == "config") throw CLI::ConfigError("config files cannot nest");
        CLI::Option* option = sub.get_option_no_throw("--" + name);
        if (option == nullptr) throw CLI::ConfigError("unknown config key '" + item.name + "'");
        if (option->count() > 0) continue;
        option->add_result(item.inputs);
        option->run_callback();
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opt;
    std::string config_path;
    CLI::App app{"Concurrence-topology persistent homology of binary data with a second-order null model",
                 "concur"};
    app.require_subcommand(1);

    const auto add_input = [&](CLI::App* sub, const std::string& what) {
        sub->add_option("--input,-i", opt.input, what)->required();
    };
    const auto add_output = [&](CLI::App* sub, const std::string& what) { sub->add_option("--output,-o", opt.output, what); };
    const auto add_convention = [&](CLI::App* sub) {
        sub->add_option("--lifespan-convention", opt.convention, "difference (birth - death) or inclusive")
            ->check(CLI::IsMember({"difference", "inclusive"}));
    };
    const auto add_seed = [&](CLI::App* sub) {
        sub->add_option("--seed", opt.seed, fmt::format("master 64-bit seed (default {})", kDefaultSeed));
    };
    const auto add_study = [&](CLI::App* sub) {
        add_seed(sub);
        add_convention(sub);
        sub->add_option("--track", opt.track, "gene label whose short-cycle membership is reported (repeatable)");
        sub->add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--records", opt.records, "newline-delimited JSON file of per-run records");
        sub->add_option("--config", config_path, "flat key = value configuration file; flags take precedence")
            ->check(CLI::ExistingFile);
    };

    std::map<CLI::App*, std::function<int(const Options&, std::ostream&)>> handlers;

    auto* counts = app.add_subcommand("counts", "per-variable presence counts, descending");
    add_input(counts, "score matrix (CSV/TSV)");
    add_output(counts, "table file (default stdout)");
    handlers[counts] = cmd_counts;

    auto* analyze = app.add_subcommand("analyze", "dimension-1 persistence diagram with short-cycle localization");
    add_input(analyze, "score matrix (CSV/TSV)");
    add_output(analyze, "diagram JSON file");
    add_convention(analyze);
    handlers[analyze] = cmd_analyze;

    auto* localize = app.add_subcommand("localize", "short-cycle representatives of each class");
    add_input(localize, "score matrix (CSV/TSV)");
    add_output(localize, "diagram JSON file");
    add_convention(localize);
    localize->add_option("--birth", opt.birth, "only classes born at this level");
    localize->add_option("--death", opt.death, "only classes dying at this level");
    handlers[localize] = cmd_localize;

    auto* simulate = app.add_subcommand("simulate", "null-model simulation study");
    add_input(simulate, "score matrix (CSV/TSV)");
    add_output(simulate, "report JSON file");
    add_study(simulate);
    simulate->add_option("--n-synthetic", opt.n_synthetic, "synthetic datasets")->check(CLI::PositiveNumber);
    simulate->add_option("--n-cutoff-resamples", opt.n_cutoff_resamples, "bootstrap resamples for the cutoff")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--max-flip-attempts", opt.max_flip_attempts, "flip attempts per synthesis")
        ->check(CLI::PositiveNumber);
    handlers[simulate] = cmd_simulate;

    auto* bootstrap = app.add_subcommand("bootstrap", "row-resampling bootstrap study");
    add_input(bootstrap, "score matrix (CSV/TSV)");
    add_output(bootstrap, "report JSON file");
    add_study(bootstrap);
    bootstrap->add_option("--n-bootstrap", opt.n_bootstrap, "resamples")->check(CLI::PositiveNumber);
    handlers[bootstrap] = cmd_bootstrap;

    auto* compare = app.add_subcommand("compare", "exceedance of simulated maxima over the observed data");
    add_input(compare, "score matrix (CSV/TSV)");
    add_output(compare, "comparison JSON file");
    add_convention(compare);
    compare->add_option("--report", opt.report, "simulation report JSON")->required();
    handlers[compare] = cmd_compare;

    auto* plot = app.add_subcommand("plot", "sunflower persistence plot (SVG)");
    add_input(plot, "diagram JSON");
    add_output(plot, "SVG file (default stdout)");
    plot->add_option("--disk-threshold", opt.disk_threshold, "largest multiplicity drawn with rays")
        ->check(CLI::PositiveNumber);
    handlers[plot] = cmd_plot;

    std::vector<std::string> argv_storage{"concur"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    opt.command = chosen->get_name();
    if (!config_path.empty()) {
        try {
            apply_config_file(*chosen, config_path);
        } catch (const CLI::Error& e) {
            err << "usage error: " << e.what() << "\n";
            return kUsage;
        }
    }
    if (auto* seed_opt = chosen->get_option_no_throw("--seed")) opt.seed_given = seed_opt->count() > 0;

    try {
        return handlers.at(chosen)(opt, out);
    } catch (const ContractError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kInputError;
    } catch (const ValueError& e) {
        err << "value error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::ios_base::failure& e) {
        err << "I/O error: " << e.what() << "\n";
        return kInputError;
    } catch (const nlohmann::json::exception& e) {
        err << "JSON error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kNumericError;
    }
}

}  // namespace concur::cli
