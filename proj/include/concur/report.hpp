#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "concur/experiments.hpp"
#include "concur/homology.hpp"
#include "concur/null_sampler.hpp"

namespace concur {

using Json = nlohmann::ordered_json;

// Diagram file: a JSON array of
//   {birth, death, lifespan, representative_edges: [[u, v], ...],
//    short_cycles: [{vertices: [a, b, c], level_range: [low, high]}, ...]}
// with vertices named by column label.
Json diagram_to_json(const ReducedBoundary& reduction, const PersistenceDiagram& diagram);

// Reads birth, death and lifespan back; representatives are not restored. Accepts either the
// bare array or an object holding it under "classes".
PersistenceDiagram diagram_from_json(const Json& j);

Json synthesis_record_to_json(const SynthesisRecord& record);
Json run_record_to_json(const RunRecord& run);
RunRecord run_record_from_json(const Json& j);

// Effective configuration echo. Thread count is left out: it never changes results.
Json study_config_to_json(const StudyConfig& cfg);

Json summary_to_json(const std::optional<SixNumberSummary>& s);
Json comparison_to_json(const ComparisonSummary& c);
Json report_to_json(const SimulationReport& report);
Json report_to_json(const BootstrapReport& report);

const char* to_string(LifespanConvention convention);

// Two-line table with the column headers "Min.  1st Qu.  Median  Mean  3rd Qu.  Max."
std::string six_number_table(const std::optional<SixNumberSummary>& s);

// Labels over values, `per_line` pairs per block, e.g. the mutation count table.
std::string label_value_grid(const std::vector<std::pair<std::string, std::string>>& cells, std::size_t per_line = 5);

std::string counts_table(const std::vector<std::pair<std::string, std::int64_t>>& counts);
std::string membership_table(const VertexMembership& m);

std::string render_simulation_text(const SimulationReport& report);
std::string render_bootstrap_text(const BootstrapReport& report);

}  // namespace concur
