#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "concur/homology.hpp"
#include "concur/plot.hpp"
#include "doctest.h"
#include "support/oracles.hpp"
#include "support/planted.hpp"

using namespace concur;

namespace {

BinaryMatrix labelled(const std::vector<std::vector<int>>& rows, std::vector<std::string> cols) {
    auto b = BinaryMatrix::from_rows(rows);
    return BinaryMatrix(b.bits(), b.row_labels(), std::move(cols));
}

// Rows {AB, BC, CA}.
BinaryMatrix hollow_triangle(int copies = 1) {
    std::vector<std::vector<int>> rows;
    for (int k = 0; k < copies; ++k) {
        rows.push_back({1, 1, 0});
        rows.push_back({0, 1, 1});
        rows.push_back({1, 0, 1});
    }
    return labelled(rows, {"A", "B", "C"});
}

std::map<std::pair<int, int>, int> bars(const PersistenceDiagram& d) {
    std::map<std::pair<int, int>, int> out;
    for (const auto& c : d.classes) ++out[{static_cast<int>(c.birth), static_cast<int>(c.death)}];
    return out;
}

PersistenceDiagram diagram_of(const BinaryMatrix& b) { return persistent_homology(build_filtration(b)); }

PersistentClass bar(Level birth, Level death, std::vector<Edge> rep = {}) {
    return {birth, death, lifespan_of(birth, death, LifespanConvention::difference), std::move(rep)};
}

}  // namespace

TEST_CASE("filtration: hollow triangle supports") {
    const auto f = build_filtration(hollow_triangle());
    CHECK(f.vertex_supports() == std::vector<Level>{2, 2, 2});
    CHECK(f.edge_support(0, 1) == 1);
    CHECK(f.edge_support(1, 2) == 1);
    CHECK(f.edge_support(0, 2) == 1);
    CHECK(f.triangle_support(0, 1, 2) == 0);
    CHECK(f.max_level() == 2);
}

TEST_CASE("filtration: single full row") {
    const auto f = build_filtration(BinaryMatrix::from_rows({{1, 1, 1}}));
    CHECK(f.triangle_support(2, 0, 1) == 1);
    CHECK(f.edges().size() == 3);
    for (const auto& [e, s] : f.edges()) CHECK(s == 1);
    CHECK(f.vertex_supports() == std::vector<Level>{1, 1, 1});
}

TEST_CASE("filtration: identity has no edges") {
    const auto f = build_filtration(BinaryMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    CHECK(f.edges().empty());
    CHECK(f.triangles().empty());
    CHECK(f.max_level() == 1);
}

TEST_CASE("filtration: all-zero input is empty") {
    const auto f = build_filtration(BinaryMatrix(4, 3));
    CHECK(f.empty());
    CHECK(persistent_homology(f).classes.empty());
}

TEST_CASE("property: face monotonicity") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const auto b = planted::random_matrix(1 + rng() % 15, 2 + rng() % 7, 0.5, rng);
        const auto f = build_filtration(b);
        for (const auto& [e, s] : f.edges()) {
            REQUIRE(s >= 1);
            REQUIRE(s <= f.vertex_support(e.a));
            REQUIRE(s <= f.vertex_support(e.b));
        }
        for (const auto& [t, s] : f.triangles()) {
            REQUIRE(s <= f.edge_support(t.a, t.b));
            REQUIRE(s <= f.edge_support(t.a, t.c));
            REQUIRE(s <= f.edge_support(t.b, t.c));
        }
    }
}

TEST_CASE("diagram: hollow triangle") {
    CHECK(bars(diagram_of(hollow_triangle())) == std::map<std::pair<int, int>, int>{{{1, 0}, 1}});
    CHECK(bars(diagram_of(hollow_triangle(2))) == std::map<std::pair<int, int>, int>{{{2, 0}, 1}});
}

TEST_CASE("diagram: filled triangle dies when the triangle enters") {
    const auto b = labelled({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}}, {"A", "B", "C"});
    const auto d = diagram_of(b);
    REQUIRE(d.classes.size() == 1);
    CHECK(d.classes[0].birth == 2);
    CHECK(d.classes[0].death == 1);
    CHECK(d.classes[0].lifespan == 1);
}

TEST_CASE("lifespan conventions") {
    CHECK(lifespan_of(15, 3, LifespanConvention::difference) == 12);
    CHECK(lifespan_of(15, 3, LifespanConvention::inclusive) == 13);
    CHECK(lifespan_of(1, 0, LifespanConvention::difference) == 1);
    CHECK(lifespan_of(1, 0, LifespanConvention::inclusive) == 1);
    const auto d = persistent_homology(build_filtration(hollow_triangle(2)), LifespanConvention::inclusive);
    CHECK(d.classes.at(0).lifespan == 2);
}

TEST_CASE("max lifespan classes") {
    PersistenceDiagram d;
    d.classes.push_back(bar(15, 3, {{0, 1}, {0, 2}, {1, 2}}));
    for (int k = 0; k < 6; ++k) d.classes.push_back(bar(2, 1));
    for (int k = 0; k < 43; ++k) d.classes.push_back(bar(1, 0));
    d.classes.push_back(bar(15, 3, {{0, 1}, {0, 3}, {1, 3}}));
    const auto top = max_lifespan_classes(d);
    REQUIRE(top.size() == 2);
    for (const auto& c : top) {
        CHECK(c.birth == 15);
        CHECK(c.death == 3);
    }
    CHECK(top[0].representative < top[1].representative);

    PersistenceDiagram single;
    single.classes.push_back(bar(4, 2));
    CHECK(max_lifespan_classes(single).size() == 1);

    PersistenceDiagram tie;
    tie.classes.push_back(bar(4, 1));
    tie.classes.push_back(bar(5, 2));
    const auto both = max_lifespan_classes(tie);
    REQUIRE(both.size() == 2);
    CHECK(both[0].birth == 5);
    CHECK(both[1].birth == 4);

    CHECK(max_lifespan_classes(PersistenceDiagram{}).empty());
}

TEST_CASE("localize: hollow triangle") {
    const auto f = build_filtration(hollow_triangle());
    const auto d = persistent_homology(f);
    const auto cycles = localize_short_cycles(f, d.classes.at(0));
    REQUIRE(cycles.size() == 1);
    CHECK(cycles[0] == ShortCycle{0, 1, 2, 1, 1});
}

TEST_CASE("localize: filled triangle is short only at level 2") {
    const auto f = build_filtration(labelled({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}}, {"A", "B", "C"}));
    const auto d = persistent_homology(f);
    const auto cycles = localize_short_cycles(f, d.classes.at(0));
    REQUIRE(cycles.size() == 1);
    CHECK(cycles[0] == ShortCycle{0, 1, 2, 2, 2});
}

TEST_CASE("localize: two disjoint hollow triangles stay separate") {
    const auto b = labelled({{1, 1, 0, 0, 0, 0},
                             {0, 1, 1, 0, 0, 0},
                             {1, 0, 1, 0, 0, 0},
                             {0, 0, 0, 1, 1, 0},
                             {0, 0, 0, 0, 1, 1},
                             {0, 0, 0, 1, 0, 1}},
                            {"A", "B", "C", "D", "E", "F"});
    const auto f = build_filtration(b);
    const ReducedBoundary r(f);
    const auto d = r.diagram();
    REQUIRE(d.classes.size() == 2);
    std::set<std::array<std::uint32_t, 3>> seen;
    for (const auto& cls : d.classes) {
        const auto cycles = localize_short_cycles(r, cls);
        REQUIRE(cycles.size() == 1);
        const auto& c = cycles[0];
        std::set<std::uint32_t> rep_vertices;
        for (auto e : cls.representative) rep_vertices.insert({e.a, e.b});
        CHECK(rep_vertices == std::set<std::uint32_t>{c.a, c.b, c.c});
        seen.insert({c.a, c.b, c.c});
    }
    CHECK(seen == std::set<std::array<std::uint32_t, 3>>{{0, 1, 2}, {3, 4, 5}});
}

TEST_CASE("property: diagram matches the brute-force barcode") {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> density(0.2, 0.6);
    int nonempty = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng() % 12, d = 3 + rng() % 4;
        const auto b = planted::random_matrix(n, d, density(rng), rng);
        INFO("trial " << trial);
        const auto expected = oracle::barcode(b);
        REQUIRE(bars(diagram_of(b)) == expected);
        nonempty += expected.empty() ? 0 : 1;
    }
    CHECK(nonempty > 60);
}

TEST_CASE("property: representatives are cycles that are non-bounding at birth") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        const auto b = planted::random_matrix(4 + rng() % 10, 4 + rng() % 3, 0.45, rng);
        const auto f = build_filtration(b);
        const auto c = oracle::brute_complex(b);
        for (const auto& cls : persistent_homology(f).classes) {
            REQUIRE(cls.death < cls.birth);
            std::map<std::uint32_t, int> degree;
            oracle::Mask z = 0;
            for (auto e : cls.representative) {
                ++degree[e.a];
                ++degree[e.b];
                REQUIRE(f.edge_support(e.a, e.b) >= cls.birth);
                z ^= oracle::Mask{1} << c.edge_index(int(e.a), int(e.b));
            }
            for (auto [v, deg] : degree) REQUIRE(deg % 2 == 0);
            REQUIRE_FALSE(oracle::in_span(oracle::boundary_basis(c, int(cls.birth)), z));
        }
    }
}

TEST_CASE("property: diagram is invariant under row and column permutations") {
    std::mt19937_64 rng(88);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + rng() % 12, d = 3 + rng() % 5;
        const auto b = planted::random_matrix(n, d, 0.45, rng);
        std::vector<std::size_t> rp(n), cp(d);
        std::iota(rp.begin(), rp.end(), 0);
        std::iota(cp.begin(), cp.end(), 0);
        std::shuffle(rp.begin(), rp.end(), rng);
        std::shuffle(cp.begin(), cp.end(), rng);
        BinaryMatrix rows_only(n, d), both(n, d);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                rows_only.set(i, j, b(rp[i], j));
                both.set(i, j, b(rp[i], cp[j]));
            }
        const auto base = bars(diagram_of(b));
        REQUIRE(bars(diagram_of(rows_only)) == base);
        REQUIRE(bars(diagram_of(both)) == base);
        const auto total = [](const PersistenceDiagram& dg) {
            int s = 0;
            for (const auto& c : dg.classes) s += c.lifespan;
            return s;
        };
        REQUIRE(total(diagram_of(rows_only)) == total(diagram_of(b)));
    }
}

TEST_CASE("property: short cycles agree with the level-by-level oracle") {
    std::mt19937_64 rng(4242);
    std::size_t found = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto b = planted::random_matrix(4 + rng() % 9, 4 + rng() % 3, 0.35 + 0.2 * (rng() % 2), rng);
        const auto f = build_filtration(b);
        const ReducedBoundary r(f);
        for (const auto& cls : r.diagram().classes) {
            std::vector<std::pair<int, int>> rep;
            for (auto e : cls.representative) rep.emplace_back(e.a, e.b);
            std::set<std::tuple<int, int, int, int, int>> expected, actual;
            for (const auto& oc : oracle::short_cycles(b, int(cls.birth), int(cls.death), rep))
                expected.insert({oc.vertices[0], oc.vertices[1], oc.vertices[2], oc.low, oc.high});
            for (const auto& sc : localize_short_cycles(r, cls)) {
                actual.insert({int(sc.a), int(sc.b), int(sc.c), int(sc.low), int(sc.high)});
                for (Level level = sc.low; level <= sc.high; ++level) {
                    REQUIRE(f.edge_support(sc.a, sc.b) >= level);
                    REQUIRE(f.edge_support(sc.a, sc.c) >= level);
                    REQUIRE(f.edge_support(sc.b, sc.c) >= level);
                    REQUIRE(f.triangle_support(sc.a, sc.b, sc.c) < level);
                }
            }
            INFO("trial " << trial);
            REQUIRE(actual == expected);
            found += actual.size();
        }
    }
    CHECK(found > 20);
}

TEST_CASE("planted exclusive triple localizes to g1, g2, g3") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto b = planted::acceptance_60x10(seed);
        const ReducedBoundary r(build_filtration(b));
        std::size_t long_lived = 0;
        for (const auto& cls : r.diagram().classes) {
            if (cls.birth < 8) continue;
            ++long_lived;
            const auto cycles = localize_short_cycles(r, cls);
            INFO("seed " << seed);
            REQUIRE(cycles.size() == 1);
            CHECK(cycles[0].a == 0);
            CHECK(cycles[0].b == 1);
            CHECK(cycles[0].c == 2);
            CHECK(cycles[0].high == 8);
        }
        CHECK(long_lived == 1);
    }
}

TEST_CASE("planted triple with noise in every row is the only cycle reaching the birth level") {
    std::size_t extra = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto b = planted::exclusive_triple(60, 10, 8, 0.05, seed, planted::Noise::all_rows);
        const ReducedBoundary r(build_filtration(b));
        for (const auto& cls : r.diagram().classes) {
            if (cls.birth < 8) continue;
            std::vector<ShortCycle> at_birth;
            const auto cycles = localize_short_cycles(r, cls);
            for (const auto& c : cycles)
                if (c.high == cls.birth) at_birth.push_back(c);
            INFO("seed " << seed);
            REQUIRE(at_birth.size() == 1);
            CHECK(at_birth[0] == ShortCycle{0, 1, 2, cls.death + 1, 8});
            extra += cycles.size() - 1;
        }
    }
    CHECK(extra > 0);  // low-level triples through a noise column do occur
}

TEST_CASE("sunflower: glyph kinds") {
    PersistenceDiagram two;
    two.classes = {bar(15, 3), bar(15, 3)};
    auto p = sunflower_plot_data(two);
    REQUIRE(p.glyphs.size() == 1);
    CHECK(p.glyphs[0].kind == GlyphKind::rays);
    CHECK(p.glyphs[0].multiplicity == 2);
    CHECK(p.glyphs[0].birth == 15);
    CHECK(p.glyphs[0].death == 3);
    CHECK(p.axis_max == 16);

    PersistenceDiagram many;
    for (int k = 0; k < 43; ++k) many.classes.push_back(bar(1, 0));
    p = sunflower_plot_data(many);
    REQUIRE(p.glyphs.size() == 1);
    CHECK(p.glyphs[0].kind == GlyphKind::disk);
    CHECK(p.glyphs[0].multiplicity == 43);
    CHECK(render_sunflower_svg(p).find(">43<") != std::string::npos);

    PersistenceDiagram one;
    one.classes = {bar(3, 1)};
    p = sunflower_plot_data(one);
    REQUIRE(p.glyphs.size() == 1);
    CHECK(p.glyphs[0].kind == GlyphKind::dot);

    p = sunflower_plot_data(PersistenceDiagram{});
    CHECK(p.glyphs.empty());
    const auto svg = render_sunflower_svg(p);
    CHECK(svg.find("diagonal") != std::string::npos);
    CHECK(svg.find("class=\"dot\"") == std::string::npos);

    PersistenceDiagram ten;
    for (int k = 0; k < 10; ++k) ten.classes.push_back(bar(2, 1));
    CHECK(sunflower_plot_data(ten).glyphs[0].kind == GlyphKind::rays);
    CHECK(sunflower_plot_data(ten, 9).glyphs[0].kind == GlyphKind::disk);
}
