#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "concur/homology.hpp"
#include "concur/matrix.hpp"
#include "concur/null_sampler.hpp"

namespace concur {

inline constexpr std::uint64_t kDefaultSeed = 20170611;

class StudyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StudyConfig {
    std::size_t n_synthetic = 500;
    std::size_t n_bootstrap = 500;
    std::size_t n_cutoff_resamples = 2000;
    std::size_t max_flip_attempts = kDefaultMaxFlipAttempts;
    std::uint64_t master_seed = kDefaultSeed;
    LifespanConvention lifespan_convention = LifespanConvention::difference;
    std::vector<std::string> tracked_vertices;  // empty: every column
    std::size_t jobs = 1;

    // Throws ContractError on zero counts or tracked labels missing from the matrix.
    void validate(const BinaryMatrix& b) const;
};

// Independent per-run seeds from a master seed, a stream tag and a run index (splitmix64 mixing).
enum class SeedStream : std::uint64_t { cutoff = 1, synthesis = 2, bootstrap = 3 };
std::uint64_t derive_seed(std::uint64_t master, SeedStream stream, std::uint64_t index);

// Min, quartiles (linear interpolation between order statistics), mean and max.
struct SixNumberSummary {
    double min = 0, q1 = 0, median = 0, mean = 0, q3 = 0, max = 0;
    std::size_t count = 0;
};
std::optional<SixNumberSummary> summarize(std::vector<double> values);

struct MaximalClassRecord {
    Level birth = 0;
    Level death = 0;
    int lifespan = 0;
    std::vector<std::array<std::string, 3>> short_cycles;
};

struct SynthesisStats {
    double threshold = 0;
    double delta_initial = 0;
    double delta_final = 0;
    std::size_t flip_attempts = 0;
    std::size_t successful_flips = 0;
};

// Outcome of one synthetic dataset or bootstrap resample.
struct RunRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    bool failed = false;
    std::string failure;
    std::optional<SynthesisStats> synthesis;
    std::vector<MaximalClassRecord> maximal_classes;

    bool has_classes() const noexcept { return !maximal_classes.empty(); }
    int max_lifespan() const;
    Level max_birth() const;  // largest birth among tied maximal classes
    bool has_short_cycle() const;
    std::vector<std::string> cycle_vertices() const;  // union over maximal classes, sorted
};

// Maximal-lifespan classes of one binary matrix together with their short cycles.
std::vector<MaximalClassRecord> analyze_maximal_classes(const BinaryMatrix& b, LifespanConvention convention);

struct ComparisonSummary {
    int observed_lifespan = 0;
    Level observed_birth = 0;
    std::size_t n_compared = 0;
    double frac_lifespan_exceeds = 0;
    double frac_birth_exceeds = 0;
};

// Fraction of values strictly greater than the observed one (0 for an empty list).
double exceedance_fraction(const std::vector<double>& values, double observed);

struct VertexMembership {
    std::vector<std::pair<std::string, double>> proportions;
    std::size_t denominator = 0;  // runs whose maximal classes have at least one short cycle
};

struct SimulationReport {
    StudyConfig config;
    double cutoff = 0;
    std::optional<SixNumberSummary> lifespan_summary;
    std::optional<SixNumberSummary> birth_summary;
    std::optional<SixNumberSummary> flip_attempt_summary;
    std::optional<SixNumberSummary> successful_flip_summary;
    ComparisonSummary comparison;
    VertexMembership vertex_membership;
    std::size_t n_failed = 0;
    std::size_t n_without_classes = 0;
    std::size_t n_without_short_cycle = 0;
    std::vector<RunRecord> runs;
};

struct BootstrapReport {
    StudyConfig config;
    std::optional<SixNumberSummary> lifespan_summary;
    std::optional<SixNumberSummary> birth_summary;
    VertexMembership vertex_membership;
    std::size_t n_without_classes = 0;
    std::size_t n_without_short_cycle = 0;
    std::vector<RunRecord> runs;
};

SimulationReport run_simulation_study(const BinaryMatrix& b, const StudyConfig& cfg);
BootstrapReport run_bootstrap_study(const BinaryMatrix& b, const StudyConfig& cfg);

// Strict exceedance of each run's maximum lifespan and birth over the observed diagram's.
ComparisonSummary compare_observed(const std::vector<RunRecord>& runs, const PersistenceDiagram& observed);
ComparisonSummary compare_observed(const SimulationReport& report, const PersistenceDiagram& observed);

}  // namespace concur
