#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "concur/matrix.hpp"

namespace concur {

// Frequency level of a descending concurrence filtration. A simplex is present at level f
// iff at least f rows contain all of its vertices.
using Level = std::uint32_t;

struct Edge {
    std::uint32_t a = 0;  // a < b
    std::uint32_t b = 0;
    auto operator<=>(const Edge&) const = default;
};

struct Triangle {
    std::uint32_t a = 0;  // a < b < c
    std::uint32_t b = 0;
    std::uint32_t c = 0;
    auto operator<=>(const Triangle&) const = default;
};

// Supports of every vertex, edge and triangle occurring in at least one row.
class ConcurrenceFiltration {
public:
    ConcurrenceFiltration() = default;
    ConcurrenceFiltration(std::vector<Level> vertex_support, std::map<Edge, Level> edge_support,
                          std::map<Triangle, Level> triangle_support,
                          std::vector<std::string> labels = {});

    std::size_t num_vertices() const noexcept { return vertex_support_.size(); }
    Level max_level() const noexcept { return max_level_; }
    bool empty() const noexcept { return max_level_ == 0; }

    Level vertex_support(std::uint32_t v) const { return vertex_support_.at(v); }
    Level edge_support(std::uint32_t u, std::uint32_t v) const;
    Level triangle_support(std::uint32_t u, std::uint32_t v, std::uint32_t w) const;

    const std::vector<Level>& vertex_supports() const noexcept { return vertex_support_; }
    const std::map<Edge, Level>& edges() const noexcept { return edge_support_; }
    const std::map<Triangle, Level>& triangles() const noexcept { return triangle_support_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

private:
    std::vector<Level> vertex_support_;
    std::map<Edge, Level> edge_support_;
    std::map<Triangle, Level> triangle_support_;
    std::vector<std::string> labels_;
    Level max_level_ = 0;
};

ConcurrenceFiltration build_filtration(const BinaryMatrix& b);

enum class LifespanConvention {
    difference,  // birth - death
    inclusive,   // number of levels at which the class is alive, counting the death level
};

int lifespan_of(Level birth, Level death, LifespanConvention convention);

// One bar of the dimension-1 barcode. death == 0 means the class survives to level 1.
struct PersistentClass {
    Level birth = 0;
    Level death = 0;
    int lifespan = 0;
    std::vector<Edge> representative;  // Z/2 cycle present at the birth level, sorted
};

struct PersistenceDiagram {
    int dimension = 1;
    std::vector<PersistentClass> classes;
};

// Boundary-matrix reduction of the filtration reindexed as an ascending one. Simplices are
// ordered by (entry level descending, dimension, vertex-lexicographic). The reduced triangle
// columns are kept so that later homology queries can be answered without rebuilding.
class ReducedBoundary {
public:
    explicit ReducedBoundary(ConcurrenceFiltration filtration);

    const ConcurrenceFiltration& filtration() const noexcept { return filtration_; }

    PersistenceDiagram diagram(LifespanConvention convention = LifespanConvention::difference) const;

    // True iff the Z/2 1-chain lies in the span of boundaries of triangles with support >= level.
    // Every edge of the chain must be present in the filtration.
    bool is_boundary(const std::vector<Edge>& chain, Level level) const;

private:
    struct Column {
        std::vector<std::uint32_t> entries;  // edge positions, ascending
        Level level = 0;
    };

    std::vector<std::uint32_t> positions_of(const std::vector<Edge>& chain) const;

    ConcurrenceFiltration filtration_;
    std::vector<Edge> edge_order_;
    std::vector<Level> edge_level_;
    std::map<Edge, std::uint32_t> edge_position_;
    std::unordered_map<std::uint32_t, Column> pivot_column_;  // pivot edge position -> reduced column
    std::vector<PersistentClass> classes_;
};

// The reduction's barcode in frequency-level units, without zero-length bars.
PersistenceDiagram persistent_homology(const ConcurrenceFiltration& filtration,
                                       LifespanConvention convention = LifespanConvention::difference);

// Classes achieving the maximum lifespan, ordered by birth descending then representative.
std::vector<PersistentClass> max_lifespan_classes(const PersistenceDiagram& diagram);

struct ShortCycle {
    std::uint32_t a = 0, b = 0, c = 0;  // a < b < c
    Level low = 0;                      // valid levels are [low, high]
    Level high = 0;
    auto operator<=>(const ShortCycle&) const = default;
};

// Three-vertex cycles homologous to the class representative at every level of the class's
// lifespan where the three edges exist.
std::vector<ShortCycle> localize_short_cycles(const ReducedBoundary& reduction,
                                              const PersistentClass& cls);
std::vector<ShortCycle> localize_short_cycles(const ConcurrenceFiltration& filtration,
                                              const PersistentClass& cls);

}  // namespace concur
