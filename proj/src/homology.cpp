#include "concur/homology.hpp"

#include <algorithm>
#include <deque>
#include <iterator>
#include <numeric>

namespace concur {

namespace {

std::vector<std::uint32_t> symmetric_difference(const std::vector<std::uint32_t>& x,
                                                const std::vector<std::uint32_t>& y) {
    std::vector<std::uint32_t> out;
    out.reserve(x.size() + y.size());
    std::set_symmetric_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    return out;
}

Edge make_edge(std::uint32_t u, std::uint32_t v) { return u < v ? Edge{u, v} : Edge{v, u}; }

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // Joins toward the smaller root index so the forest shape is order-determined.
    bool unite(std::uint32_t x, std::uint32_t y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        if (y < x) std::swap(x, y);
        parent_[y] = x;
        return true;
    }

private:
    std::vector<std::uint32_t> parent_;
};

// Edges of the unique forest path between two vertices of the same tree.
std::vector<Edge> forest_path(const std::vector<std::vector<std::uint32_t>>& adjacency,
                              std::uint32_t from, std::uint32_t to) {
    constexpr auto kUnseen = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> previous(adjacency.size(), kUnseen);
    std::deque<std::uint32_t> queue{from};
    previous[from] = from;
    while (!queue.empty()) {
        const auto u = queue.front();
        queue.pop_front();
        if (u == to) break;
        for (auto w : adjacency[u]) {
            if (previous[w] == kUnseen) {
                previous[w] = u;
                queue.push_back(w);
            }
        }
    }
    std::vector<Edge> path;
    for (auto v = to; v != from; v = previous[v]) path.push_back(make_edge(v, previous[v]));
    return path;
}

}  // namespace

ConcurrenceFiltration::ConcurrenceFiltration(std::vector<Level> vertex_support,
                                             std::map<Edge, Level> edge_support,
                                             std::map<Triangle, Level> triangle_support,
                                             std::vector<std::string> labels)
    : vertex_support_(std::move(vertex_support)),
      edge_support_(std::move(edge_support)),
      triangle_support_(std::move(triangle_support)),
      labels_(std::move(labels)) {
    if (labels_.empty()) {
        for (std::size_t v = 0; v < vertex_support_.size(); ++v) labels_.push_back("v" + std::to_string(v));
    }
    if (labels_.size() != vertex_support_.size()) throw ContractError("filtration label count mismatch");
    for (auto s : vertex_support_) max_level_ = std::max(max_level_, s);
}

Level ConcurrenceFiltration::edge_support(std::uint32_t u, std::uint32_t v) const {
    const auto it = edge_support_.find(make_edge(u, v));
    return it == edge_support_.end() ? 0 : it->second;
}

Level ConcurrenceFiltration::triangle_support(std::uint32_t u, std::uint32_t v, std::uint32_t w) const {
    std::uint32_t t[3] = {u, v, w};
    std::sort(t, t + 3);
    const auto it = triangle_support_.find(Triangle{t[0], t[1], t[2]});
    return it == triangle_support_.end() ? 0 : it->second;
}

ConcurrenceFiltration build_filtration(const BinaryMatrix& b) {
    const std::size_t d = b.cols();
    std::vector<Level> vertices(d, 0);
    std::map<Edge, Level> edges;
    std::map<Triangle, Level> triangles;
    std::vector<std::uint32_t> ones;
    for (std::size_t i = 0; i < b.rows(); ++i) {
        ones.clear();
        for (std::size_t j = 0; j < d; ++j)
            if (b(i, j)) ones.push_back(static_cast<std::uint32_t>(j));
        for (std::size_t p = 0; p < ones.size(); ++p) {
            ++vertices[ones[p]];
            for (std::size_t q = p + 1; q < ones.size(); ++q) {
                ++edges[Edge{ones[p], ones[q]}];
                for (std::size_t r = q + 1; r < ones.size(); ++r) ++triangles[Triangle{ones[p], ones[q], ones[r]}];
            }
        }
    }
    return ConcurrenceFiltration(std::move(vertices), std::move(edges), std::move(triangles), b.col_labels());
}

int lifespan_of(Level birth, Level death, LifespanConvention convention) {
    const int b = static_cast<int>(birth);
    const int d = static_cast<int>(death);
    switch (convention) {
        case LifespanConvention::difference:
            return b - d;
        case LifespanConvention::inclusive:
            return b - std::max(d, 1) + 1;
    }
    return b - d;
}

ReducedBoundary::ReducedBoundary(ConcurrenceFiltration filtration) : filtration_(std::move(filtration)) {
    // Edges: map order is lexicographic, so a stable sort on level gives the full simplex order.
    for (const auto& [edge, level] : filtration_.edges()) {
        edge_order_.push_back(edge);
        edge_level_.push_back(level);
    }
    std::vector<std::uint32_t> order(edge_order_.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t x, std::uint32_t y) { return edge_level_[x] > edge_level_[y]; });
    {
        std::vector<Edge> sorted_edges;
        std::vector<Level> sorted_levels;
        for (auto k : order) {
            sorted_edges.push_back(edge_order_[k]);
            sorted_levels.push_back(edge_level_[k]);
        }
        edge_order_ = std::move(sorted_edges);
        edge_level_ = std::move(sorted_levels);
    }
    for (std::uint32_t pos = 0; pos < edge_order_.size(); ++pos) edge_position_.emplace(edge_order_[pos], pos);

    // Dimension 0 -> 1: an edge closing a loop in the current forest creates a 1-cycle.
    const auto n = filtration_.num_vertices();
    UnionFind components(n);
    std::vector<std::vector<std::uint32_t>> forest(n);
    std::vector<std::pair<std::uint32_t, std::vector<Edge>>> creators;
    for (std::uint32_t pos = 0; pos < edge_order_.size(); ++pos) {
        const auto [u, v] = edge_order_[pos];
        if (components.unite(u, v)) {
            forest[u].push_back(v);
            forest[v].push_back(u);
            continue;
        }
        auto cycle = forest_path(forest, u, v);
        cycle.push_back(edge_order_[pos]);
        std::sort(cycle.begin(), cycle.end());
        creators.emplace_back(pos, std::move(cycle));
    }

    // Dimension 1 -> 2: standard column reduction of triangle boundaries over Z/2.
    std::vector<std::pair<Triangle, Level>> triangles(filtration_.triangles().begin(),
                                                      filtration_.triangles().end());
    std::stable_sort(triangles.begin(), triangles.end(),
                     [](const auto& x, const auto& y) { return x.second > y.second; });
    std::unordered_map<std::uint32_t, Level> killed_at;
    for (const auto& [tri, level] : triangles) {
        std::vector<std::uint32_t> column{edge_position_.at(Edge{tri.a, tri.b}),
                                          edge_position_.at(Edge{tri.a, tri.c}),
                                          edge_position_.at(Edge{tri.b, tri.c})};
        std::sort(column.begin(), column.end());
        while (!column.empty()) {
            const auto it = pivot_column_.find(column.back());
            if (it == pivot_column_.end()) break;
            column = symmetric_difference(column, it->second.entries);
        }
        if (column.empty()) continue;
        const auto pivot = column.back();
        killed_at.emplace(pivot, level);
        pivot_column_.emplace(pivot, Column{std::move(column), level});
    }

    for (auto& [pos, cycle] : creators) {
        const Level birth = edge_level_[pos];
        const auto killed = killed_at.find(pos);
        const Level death = killed == killed_at.end() ? 0 : killed->second;
        if (birth == death) continue;
        classes_.push_back(PersistentClass{birth, death, 0, std::move(cycle)});
    }
    std::sort(classes_.begin(), classes_.end(), [](const auto& x, const auto& y) {
        if (x.birth != y.birth) return x.birth > y.birth;
        if (x.death != y.death) return x.death < y.death;
        return x.representative < y.representative;
    });
}

PersistenceDiagram ReducedBoundary::diagram(LifespanConvention convention) const {
    PersistenceDiagram out;
    out.classes = classes_;
    for (auto& cls : out.classes) cls.lifespan = lifespan_of(cls.birth, cls.death, convention);
    return out;
}

std::vector<std::uint32_t> ReducedBoundary::positions_of(const std::vector<Edge>& chain) const {
    std::vector<std::uint32_t> positions;
    positions.reserve(chain.size());
    for (const auto& e : chain) {
        const auto it = edge_position_.find(e);
        if (it == edge_position_.end()) throw ContractError("chain uses an edge absent from the filtration");
        positions.push_back(it->second);
    }
    std::sort(positions.begin(), positions.end());
    // Z/2: repeated edges cancel in pairs.
    std::vector<std::uint32_t> reduced;
    for (std::size_t k = 0; k < positions.size();) {
        std::size_t run = 1;
        while (k + run < positions.size() && positions[k + run] == positions[k]) ++run;
        if (run % 2 == 1) reduced.push_back(positions[k]);
        k += run;
    }
    return reduced;
}

bool ReducedBoundary::is_boundary(const std::vector<Edge>& chain, Level level) const {
    auto column = positions_of(chain);
    while (!column.empty()) {
        const auto it = pivot_column_.find(column.back());
        if (it == pivot_column_.end() || it->second.level < level) return false;
        column = symmetric_difference(column, it->second.entries);
    }
    return true;
}

PersistenceDiagram persistent_homology(const ConcurrenceFiltration& filtration, LifespanConvention convention) {
    return ReducedBoundary(filtration).diagram(convention);
}

std::vector<PersistentClass> max_lifespan_classes(const PersistenceDiagram& diagram) {
    std::vector<PersistentClass> out;
    if (diagram.classes.empty()) return out;
    int best = diagram.classes.front().lifespan;
    for (const auto& cls : diagram.classes) best = std::max(best, cls.lifespan);
    for (const auto& cls : diagram.classes)
        if (cls.lifespan == best) out.push_back(cls);
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.birth != y.birth) return x.birth > y.birth;
        return x.representative < y.representative;
    });
    return out;
}

std::vector<ShortCycle> localize_short_cycles(const ReducedBoundary& reduction, const PersistentClass& cls) {
    const auto& filtration = reduction.filtration();
    const Level low = cls.death + 1;
    if (cls.birth < low) return {};

    std::vector<std::vector<std::uint32_t>> neighbours(filtration.num_vertices());
    for (const auto& [edge, level] : filtration.edges()) {
        if (level >= low) neighbours[edge.a].push_back(edge.b);  // ascending, since map order is lexicographic
    }

    std::vector<ShortCycle> found;
    for (std::uint32_t a = 0; a < neighbours.size(); ++a) {
        const auto& na = neighbours[a];
        for (std::size_t p = 0; p < na.size(); ++p) {
            const auto b = na[p];
            const auto& nb = neighbours[b];
            for (std::size_t q = p + 1; q < na.size(); ++q) {
                const auto c = na[q];
                if (!std::binary_search(nb.begin(), nb.end(), c)) continue;
                if (filtration.triangle_support(a, b, c) >= low) continue;  // filled somewhere in the lifespan
                const Level high = std::min({cls.birth, filtration.edge_support(a, b),
                                             filtration.edge_support(a, c), filtration.edge_support(b, c)});
                auto chain = cls.representative;
                chain.insert(chain.end(), {Edge{a, b}, Edge{a, c}, Edge{b, c}});
                // Boundary spaces only grow as the level drops, so the highest level decides.
                if (reduction.is_boundary(chain, high)) found.push_back(ShortCycle{a, b, c, low, high});
            }
        }
    }
    std::sort(found.begin(), found.end());
    return found;
}

std::vector<ShortCycle> localize_short_cycles(const ConcurrenceFiltration& filtration, const PersistentClass& cls) {
    return localize_short_cycles(ReducedBoundary(filtration), cls);
}

}  // namespace concur
