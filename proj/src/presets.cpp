#include "voxsie/presets.hpp"

#include <algorithm>
#include <random>

namespace voxsie {

namespace {

void add_box(std::vector<Index3>& out, Index3 lo, Index3 hi) {
    for (int i = lo[0]; i < hi[0]; ++i)
        for (int j = lo[1]; j < hi[1]; ++j)
            for (int k = lo[2]; k < hi[2]; ++k) out.push_back({i, j, k});
}

StructureDescription blank(double dv) {
    StructureDescription s;
    s.voxel_size = dv;
    return s;
}

}  // namespace

StructureDescription coated_sphere(double dv, double rc, double rd, double eps_r) {
    StructureDescription s = blank(dv);
    PrimitiveParams p;
    p.radius = rc;
    s.conductors.push_back({1, voxelize_primitive(Shape::Sphere, p, dv)});
    if (eps_r != 1.0) {
        // the full ball; the conductor claims the core
        p.radius = rd;
        s.dielectrics.push_back({eps_r, voxelize_primitive(Shape::Sphere, p, dv)});
    }
    return s;
}

StructureDescription coated_cube(int edge, int core, double eps_r, double dv) {
    if (edge < 1 || core < 0 || core > edge) throw InputError("coated cube needs 0 <= core <= edge");
    StructureDescription s = blank(dv);
    DielectricSpec d{eps_r, {}};
    add_box(d.voxels, {0, 0, 0}, {edge, edge, edge});
    s.dielectrics.push_back(std::move(d));
    if (core > 0) {
        const int a = (edge - core) / 2;
        ConductorSpec c{1, {}};
        add_box(c.voxels, {a, a, a}, {a + core, a + core, a + core});
        s.conductors.push_back(std::move(c));
    }
    return s;
}

StructureDescription parallel_plates(int side, int gap, double dv) {
    if (side < 1 || gap < 1) throw InputError("plates need side >= 1 and gap >= 1");
    StructureDescription s = blank(dv);
    ConductorSpec a{1, {}}, b{2, {}};
    add_box(a.voxels, {0, 0, 0}, {side, side, 1});
    add_box(b.voxels, {0, 0, gap + 1}, {side, side, gap + 2});
    s.conductors.push_back(std::move(a));
    s.conductors.push_back(std::move(b));
    return s;
}

StructureDescription interconnect_array(int rows, int cols, double eps_r, double dv) {
    // line 4 x 2 voxels, pitch 5 across and 4 up, length 16, margin 2
    const int w = 4, h = 2, px = 5, pz = 4, len = 16, m = 2;
    StructureDescription s = blank(dv);
    int id = 1;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            ConductorSpec cs{id++, {}};
            const int x0 = m + c * px, z0 = m + r * pz;
            add_box(cs.voxels, {x0, m, z0}, {x0 + w, m + len, z0 + h});
            s.conductors.push_back(std::move(cs));
        }
    DielectricSpec d{eps_r, {}};
    add_box(d.voxels, {0, 0, 0}, {2 * m + (cols - 1) * px + w, 2 * m + len, 2 * m + (rows - 1) * pz + h});
    s.dielectrics.push_back(std::move(d));
    return s;
}

StructureDescription crossing_buses(int n, double dv) {
    // bus 2 wide, 3 high, pitch 4; lower buses along x, upper along y
    const int w = 2, h = 3, p = 4, m = 2;
    const int span = 2 * m + (n - 1) * p + w;
    const int t_low = h + 2, t_sep = 1, t_up = h + 4;
    StructureDescription s = blank(dv);
    s.background_eps_r = 1.0;
    int id = 1;
    for (int b = 0; b < n; ++b) {
        ConductorSpec c{id++, {}};
        const int y0 = m + b * p;
        add_box(c.voxels, {0, y0, 1}, {span, y0 + w, 1 + h});
        s.conductors.push_back(std::move(c));
    }
    const int z_up = t_low + t_sep + 2;
    DielectricSpec coat{3.7, {}};
    for (int b = 0; b < n; ++b) {
        ConductorSpec c{id++, {}};
        const int x0 = m + b * p;
        add_box(c.voxels, {x0, 0, z_up}, {x0 + w, span, z_up + h});
        add_box(coat.voxels, {x0 - 1, 0, z_up - 1}, {x0 + w + 1, span, z_up + h + 1});
        s.conductors.push_back(std::move(c));
    }
    DielectricSpec low{2.6, {}}, sep{5.0, {}}, up{2.6, {}};
    add_box(low.voxels, {0, 0, 0}, {span, span, t_low});
    add_box(sep.voxels, {0, 0, t_low}, {span, span, t_low + t_sep});
    // the coating takes precedence inside the upper layer
    std::vector<Index3> upper;
    add_box(upper, {0, 0, t_low + t_sep}, {span, span, t_low + t_sep + t_up});
    std::sort(coat.voxels.begin(), coat.voxels.end());
    coat.voxels.erase(std::unique(coat.voxels.begin(), coat.voxels.end()), coat.voxels.end());
    for (const auto& v : upper)
        if (!std::binary_search(coat.voxels.begin(), coat.voxels.end(), v)) up.voxels.push_back(v);
    s.dielectrics.push_back(std::move(low));
    s.dielectrics.push_back(std::move(sep));
    s.dielectrics.push_back(std::move(up));
    s.dielectrics.push_back(std::move(coat));
    return s;
}

StructureDescription meander_lines(int n, int length, int turns, double dv) {
    if (n < 1 || turns < 0 || length < 4) throw InputError("bad meander parameters");
    // line 1 x 1 voxel, spacing 1; each line folds inside its own lane
    const int lane = 2 * turns + 2;
    StructureDescription s = blank(dv);
    int id = 1;
    for (int layer = 0; layer < n; ++layer)
        for (int l = 0; l < n; ++l) {
            ConductorSpec c{id++, {}};
            const int y0 = l * (lane + 1), z = 2 * layer;
            for (int t = 0; t <= turns; ++t) {
                const int y = y0 + 2 * t;
                add_box(c.voxels, {0, y, z}, {length, y + 1, z + 1});
                if (t < turns) {
                    const int x = (t % 2 == 0) ? length - 1 : 0;
                    add_box(c.voxels, {x, y + 1, z}, {x + 1, y + 2, z + 1});
                }
            }
            s.conductors.push_back(std::move(c));
        }
    return s;
}

StructureDescription random_structure(unsigned seed, int max_edge) {
    std::mt19937 rng(seed);
    auto uni = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
    StructureDescription s = blank(std::uniform_real_distribution<double>(0.5, 2.0)(rng));
    const int e = std::max(max_edge, 3);
    std::vector<std::pair<Index3, Index3>> boxes;
    auto separated = [&](const Index3& lo, const Index3& hi) {
        for (const auto& [l, h] : boxes) {
            bool apart = false;
            for (int k = 0; k < 3; ++k) apart |= lo[k] > h[k] || l[k] > hi[k];  // one voxel gap
            if (!apart) return false;
        }
        return true;
    };
    const int want = uni(1, 3);
    for (int tries = 0; tries < 200 && static_cast<int>(boxes.size()) < want; ++tries) {
        Index3 lo, hi;
        for (int k = 0; k < 3; ++k) {
            lo[k] = uni(0, e - 1);
            hi[k] = std::min(e, lo[k] + uni(1, 3));
        }
        if (!separated(lo, hi)) continue;
        boxes.push_back({lo, hi});
        ConductorSpec c{static_cast<int>(boxes.size()), {}};
        add_box(c.voxels, lo, hi);
        s.conductors.push_back(std::move(c));
    }
    const int nd = uni(0, 2);
    std::vector<Index3> taken;
    for (int d = 0; d < nd; ++d) {
        Index3 lo, hi;
        for (int k = 0; k < 3; ++k) {
            lo[k] = uni(0, e - 2);
            hi[k] = std::min(e, lo[k] + uni(2, 4));
        }
        DielectricSpec ds{std::uniform_real_distribution<double>(1.5, 8.0)(rng), {}};
        std::vector<Index3> vox;
        add_box(vox, lo, hi);
        for (const auto& v : vox)
            if (std::find(taken.begin(), taken.end(), v) == taken.end()) ds.voxels.push_back(v);
        taken.insert(taken.end(), ds.voxels.begin(), ds.voxels.end());
        if (!ds.voxels.empty()) s.dielectrics.push_back(std::move(ds));
    }
    return s;
}

std::vector<std::string> preset_names() {
    return {"coated-sphere", "interconnect", "crossing-bus", "meander", "parallel-plates"};
}

StructureDescription make_preset(const std::string& name, double dv) {
    if (name == "coated-sphere") return coated_sphere(dv > 0 ? dv : 0.05);
    if (name == "interconnect") return interconnect_array(2, 3, 7.0, dv > 0 ? dv : 1e-5);
    if (name == "crossing-bus") return crossing_buses(3, dv > 0 ? dv : 1e-8);
    if (name == "meander") return meander_lines(2, 24, 2, dv > 0 ? dv : 1e-4);
    if (name == "parallel-plates") return parallel_plates(10, 1, dv > 0 ? dv : 1.0);
    throw InputError("unknown preset \"" + name + "\"");
}

}  // namespace voxsie
