#include "doctest.h"
#include "voxsie/geometry.hpp"
#include "voxsie/presets.hpp"

using namespace voxsie;

namespace {

StructureDescription one_conductor(std::vector<Index3> v, double dv = 1.0) {
    StructureDescription s;
    s.voxel_size = dv;
    s.conductors.push_back({1, std::move(v)});
    return s;
}

}  // namespace

TEST_CASE("build_grid: tight bounding box") {
    auto g = build_grid(one_conductor({{3, 4, 5}}));
    CHECK(g.dims == Dims3{1, 1, 1});
    CHECK(g.voxel_count() == 1);
    CHECK(g.lattice_offset == Index3{3, 4, 5});
    CHECK(g.origin[0] == doctest::Approx(3.0));

    std::vector<Index3> cube;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) cube.push_back({i, j, k});
    g = build_grid(one_conductor(cube));
    CHECK(g.dims == Dims3{2, 2, 2});
    CHECK(g.voxel_count() == 8);
}

TEST_CASE("build_grid: rejects bad input") {
    StructureDescription s = one_conductor({{0, 0, 0}});
    s.conductors.push_back({2, {{0, 0, 0}}});
    CHECK_THROWS_AS(build_grid(s), InputError);

    StructureDescription e;
    e.voxel_size = 1.0;
    CHECK_THROWS_AS(build_grid(e), InputError);

    CHECK_THROWS_AS(build_grid(one_conductor({{0, 0, 0}}, 0.0)), InputError);
    CHECK_THROWS_AS(build_grid(one_conductor({{0, 0, 0}}, -1.0)), InputError);

    StructureDescription d = one_conductor({{0, 0, 0}});
    d.dielectrics.push_back({2.0, {{1, 0, 0}}});
    d.dielectrics.push_back({3.0, {{1, 0, 0}}});
    CHECK_THROWS_AS(build_grid(d), InputError);
}

TEST_CASE("enumerate_panels: counts and signs") {
    auto ps = enumerate_panels(build_grid(one_conductor({{0, 0, 0}})));
    CHECK(ps.size() == 6);
    CHECK(ps.n_conductor == 6);
    CHECK(ps.n_dielectric == 0);
    for (const auto& p : ps.panels) CHECK(p.area == doctest::Approx(1.0));

    ps = enumerate_panels(build_grid(one_conductor({{0, 0, 0}, {1, 0, 0}})));
    CHECK(ps.size() == 10);

    StructureDescription d;
    d.voxel_size = 0.5;
    d.conductors.push_back({1, {{10, 10, 10}}});  // far away, keeps the structure valid
    DielectricSpec cube{3.0, {}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) cube.voxels.push_back({i, j, k});
    d.dielectrics.push_back(cube);
    ps = enumerate_panels(build_grid(d));
    CHECK(ps.n_dielectric == 24);
    // outward normals: sign points away from the cube centre
    const double c = 0.5;
    for (std::size_t k = ps.n_conductor; k < ps.size(); ++k) {
        const Panel& p = ps.panels[k];
        CHECK(p.kind == PanelKind::Dielectric);
        CHECK(p.eps_in == 3.0);
        CHECK(p.eps_out == 1.0);
        CHECK((p.center[idx(p.dir)] - c) * p.sign > 0.0);
    }
}

TEST_CASE("enumerate_panels: closed surface parity and ordering") {
    std::vector<Index3> l{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}};
    auto ps = enumerate_panels(build_grid(one_conductor(l)));
    int net[3] = {0, 0, 0};
    for (const auto& p : ps.panels) net[idx(p.dir)] += p.sign;
    CHECK(net[0] == 0);
    CHECK(net[1] == 0);
    CHECK(net[2] == 0);
    auto by = ps.count_by_direction();
    CHECK(by[0] + by[1] + by[2] == ps.size());
    // direction-major, slots unique
    for (std::size_t k = 1; k < ps.size(); ++k) {
        const auto& a = ps.panels[k - 1];
        const auto& b = ps.panels[k];
        if (a.kind != b.kind) continue;
        CHECK(idx(a.dir) <= idx(b.dir));
        if (a.dir == b.dir) CHECK(!(a.slot == b.slot));
    }
}

TEST_CASE("enumerate_panels: translation invariance and centres") {
    std::vector<Index3> l{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}};
    std::vector<Index3> shifted;
    for (auto v : l) shifted.push_back({v[0] + 5, v[1] + 2, v[2] + 7});
    auto a = enumerate_panels(build_grid(one_conductor(l, 0.3)));
    auto b = enumerate_panels(build_grid(one_conductor(shifted, 0.3)));
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a.panels[k].slot == b.panels[k].slot);
        CHECK(a.panels[k].dir == b.panels[k].dir);
        CHECK(b.panels[k].center[0] - a.panels[k].center[0] == doctest::Approx(1.5));
    }
    // slot -> centre
    for (const auto& p : a.panels) {
        for (int k = 0; k < 3; ++k) {
            const double half = k == idx(p.dir) ? 0.0 : 0.5;
            CHECK(p.center[k] == doctest::Approx(a.origin[k] + (p.slot[k] + half) * 0.3));
        }
    }
}

TEST_CASE("enumerate_panels: embedded conductor and touching conductors") {
    StructureDescription s = one_conductor({{1, 1, 1}});
    DielectricSpec d{4.0, {}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) d.voxels.push_back({i, j, k});
    s.dielectrics.push_back(d);
    auto ps = enumerate_panels(build_grid(s));
    CHECK(ps.n_conductor == 6);
    CHECK(ps.n_dielectric == 54);
    for (std::size_t k = 0; k < ps.n_conductor; ++k) CHECK(ps.panels[k].eps_out == 4.0);

    StructureDescription t = one_conductor({{0, 0, 0}});
    t.conductors.push_back({2, {{1, 0, 0}}});
    CHECK_THROWS_AS(enumerate_panels(build_grid(t)), InputError);
}

TEST_CASE("voxelize_primitive") {
    PrimitiveParams box;
    box.lo = {0, 0, 0};
    box.hi = {2, 1, 1};
    CHECK(voxelize_primitive(Shape::Box, box, 1.0).size() == 2);

    PrimitiveParams sp;
    sp.radius = 0.25;
    auto v = voxelize_primitive(Shape::Sphere, sp, 0.25);
    // centres at (+-0.125)^3: |c| = 0.2165 < 0.25; next shell at 0.375 is out
    CHECK(v.size() == 8);

    sp.radius = 0.0;
    CHECK_THROWS_AS(voxelize_primitive(Shape::Sphere, sp, 0.25), InputError);

    auto s = coated_sphere(0.05);
    auto g = build_grid(s);
    CHECK(g.dims == Dims3{20, 20, 20});
    CHECK(g.voxel_count() == 8000);
}
