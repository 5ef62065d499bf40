#include "voxsie/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

namespace voxsie {

std::string to_string(const Dims3& d) {
    std::ostringstream os;
    os << d.nx << "x" << d.ny << "x" << d.nz;
    return os.str();
}

Material VoxelGrid::material(int i, int j, int k) const {
    if (i < 0 || j < 0 || k < 0 || i >= dims.nx || j >= dims.ny || k >= dims.nz)
        return {};
    return at(i, j, k);
}

double VoxelGrid::eps_r(const Material& m) const {
    if (m.kind == MaterialKind::Dielectric) return dielectric_eps[m.index];
    return background_eps_r;
}

std::array<std::size_t, 3> PanelSet::count_by_direction() const {
    std::array<std::size_t, 3> c{0, 0, 0};
    for (const auto& p : panels) ++c[idx(p.dir)];
    return c;
}

Dims3 panel_grid_dims(Axis a, Dims3 d) {
    Dims3 g = d;
    g[idx(a)] += 1;
    return g;
}

namespace {

struct Index3Hash {
    std::size_t operator()(const Index3& v) const {
        std::size_t h = static_cast<std::uint32_t>(v[0]);
        h = h * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint32_t>(v[1]);
        h = h * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint32_t>(v[2]);
        return h;
    }
};

std::string fmt_index(const Index3& v) {
    std::ostringstream os;
    os << "(" << v[0] << "," << v[1] << "," << v[2] << ")";
    return os.str();
}

}  // namespace

VoxelGrid build_grid(const StructureDescription& desc) {
    if (!(desc.voxel_size > 0.0) || !std::isfinite(desc.voxel_size))
        throw InputError("voxel_size must be positive");
    if (!(desc.background_eps_r > 0.0))
        throw InputError("background_eps_r must be positive");

    VoxelGrid g;
    g.voxel_size = desc.voxel_size;
    g.background_eps_r = desc.background_eps_r;

    std::unordered_map<Index3, Material, Index3Hash> claims;
    std::map<int, int> slot_of_id;
    for (const auto& c : desc.conductors) {
        if (!slot_of_id.count(c.id)) {
            slot_of_id[c.id] = static_cast<int>(g.conductor_ids.size());
            g.conductor_ids.push_back(c.id);
        }
    }
    for (const auto& c : desc.conductors) {
        const Material m{MaterialKind::Conductor, slot_of_id[c.id]};
        for (const auto& v : c.voxels) {
            auto [it, fresh] = claims.emplace(v, m);
            if (!fresh && !(it->second == m))
                throw InputError("voxel " + fmt_index(v) + " claimed by conductors " +
                                 std::to_string(g.conductor_ids[it->second.index]) +
                                 " and " + std::to_string(c.id));
        }
    }
    for (std::size_t r = 0; r < desc.dielectrics.size(); ++r) {
        const auto& d = desc.dielectrics[r];
        if (!(d.eps_r > 0.0)) throw InputError("dielectric eps_r must be positive");
        g.dielectric_eps.push_back(d.eps_r);
        const Material m{MaterialKind::Dielectric, static_cast<int>(r)};
        for (const auto& v : d.voxels) {
            auto [it, fresh] = claims.emplace(v, m);
            if (fresh || it->second == m) continue;
            // conductors displace dielectric material
            if (it->second.kind == MaterialKind::Conductor) continue;
            throw InputError("voxel " + fmt_index(v) + " claimed by two dielectric regions");
        }
    }
    if (claims.empty()) throw InputError("structure has no voxels");

    Index3 lo{INT32_MAX, INT32_MAX, INT32_MAX}, hi{INT32_MIN, INT32_MIN, INT32_MIN};
    for (const auto& [v, m] : claims)
        for (int k = 0; k < 3; ++k) {
            lo[k] = std::min(lo[k], v[k]);
            hi[k] = std::max(hi[k], v[k]);
        }
    g.lattice_offset = lo;
    g.dims = {hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1};
    for (int k = 0; k < 3; ++k) g.origin[k] = desc.origin[k] + lo[k] * desc.voxel_size;
    g.occupancy.assign(g.dims.total(), Material{});
    for (const auto& [v, m] : claims) {
        const std::size_t o = (static_cast<std::size_t>(v[0] - lo[0]) * g.dims.ny +
                               (v[1] - lo[1])) * g.dims.nz + (v[2] - lo[2]);
        g.occupancy[o] = m;
    }
    return g;
}

PanelRect rect_from_center(Axis normal, const Vec3& c, double dv) {
    PanelRect r;
    r.normal = normal;
    for (int k = 0; k < 3; ++k) {
        if (k == idx(normal)) {
            r.lo[k] = r.hi[k] = c[k];
        } else {
            r.lo[k] = c[k] - 0.5 * dv;
            r.hi[k] = c[k] + 0.5 * dv;
        }
    }
    return r;
}

PanelRect panel_rect(const Panel& p, double dv) { return rect_from_center(p.dir, p.center, dv); }

PanelSet enumerate_panels(const VoxelGrid& g) {
    PanelSet ps;
    ps.domain = g.dims;
    ps.voxel_size = g.voxel_size;
    ps.origin = g.origin;
    ps.conductor_ids = g.conductor_ids;
    const double dv = g.voxel_size;
    std::vector<Panel> cond, diel;

    for (Axis a : kAxes) {
        const int ax = idx(a);
        const Dims3 pd = panel_grid_dims(a, g.dims);
        // z, y, x lexicographic: x fastest
        for (int k = 0; k < pd.nz; ++k)
            for (int j = 0; j < pd.ny; ++j)
                for (int i = 0; i < pd.nx; ++i) {
                    Index3 hi_v{i, j, k};
                    Index3 lo_v = hi_v;
                    lo_v[ax] -= 1;
                    const Material ml = g.material(lo_v[0], lo_v[1], lo_v[2]);
                    const Material mh = g.material(hi_v[0], hi_v[1], hi_v[2]);
                    if (ml == mh) continue;

                    Panel p;
                    p.dir = a;
                    p.slot = hi_v;
                    p.area = dv * dv;
                    for (int q = 0; q < 3; ++q)
                        p.center[q] = g.origin[q] + (hi_v[q] + (q == ax ? 0.0 : 0.5)) * dv;

                    const bool cl = ml.kind == MaterialKind::Conductor;
                    const bool ch = mh.kind == MaterialKind::Conductor;
                    if (cl && ch)
                        throw InputError("conductors " +
                                         std::to_string(g.conductor_ids[ml.index]) + " and " +
                                         std::to_string(g.conductor_ids[mh.index]) +
                                         " share a face");
                    if (cl || ch) {
                        p.kind = PanelKind::Conductor;
                        p.sign = cl ? 1 : -1;
                        p.conductor = cl ? ml.index : mh.index;
                        p.eps_out = g.eps_r(cl ? mh : ml);
                        p.eps_in = p.eps_out;
                        cond.push_back(p);
                        continue;
                    }
                    const double el = g.eps_r(ml), eh = g.eps_r(mh);
                    if (el == eh) continue;
                    p.kind = PanelKind::Dielectric;
                    bool lo_is_d;
                    if (ml.kind == MaterialKind::Dielectric && mh.kind == MaterialKind::Dielectric)
                        lo_is_d = el > eh;
                    else
                        lo_is_d = ml.kind == MaterialKind::Dielectric;
                    p.sign = lo_is_d ? 1 : -1;
                    p.eps_in = lo_is_d ? el : eh;
                    p.eps_out = lo_is_d ? eh : el;
                    diel.push_back(p);
                }
    }
    ps.n_conductor = cond.size();
    ps.n_dielectric = diel.size();
    ps.panels = std::move(cond);
    ps.panels.insert(ps.panels.end(), diel.begin(), diel.end());
    return ps;
}

std::vector<Index3> voxelize_primitive(Shape shape, const PrimitiveParams& p, double dv,
                                       Vec3 o) {
    if (!(dv > 0.0)) throw InputError("voxel size must be positive");
    Vec3 blo{}, bhi{};
    switch (shape) {
        case Shape::Box:
            for (int k = 0; k < 3; ++k)
                if (!(p.hi[k] > p.lo[k])) throw InputError("degenerate box");
            blo = p.lo;
            bhi = p.hi;
            break;
        case Shape::Sphere:
            if (!(p.radius > 0.0)) throw InputError("sphere radius must be positive");
            for (int k = 0; k < 3; ++k) {
                blo[k] = p.center[k] - p.radius;
                bhi[k] = p.center[k] + p.radius;
            }
            break;
        case Shape::Shell:
            if (!(p.radius > 0.0) || p.inner_radius < 0.0 || !(p.inner_radius < p.radius))
                throw InputError("shell needs 0 <= inner_radius < radius");
            for (int k = 0; k < 3; ++k) {
                blo[k] = p.center[k] - p.radius;
                bhi[k] = p.center[k] + p.radius;
            }
            break;
    }
    Index3 ilo, ihi;
    for (int k = 0; k < 3; ++k) {
        ilo[k] = static_cast<int>(std::floor((blo[k] - o[k]) / dv)) - 1;
        ihi[k] = static_cast<int>(std::ceil((bhi[k] - o[k]) / dv)) + 1;
    }
    std::vector<Index3> out;
    for (int i = ilo[0]; i <= ihi[0]; ++i)
        for (int j = ilo[1]; j <= ihi[1]; ++j)
            for (int k = ilo[2]; k <= ihi[2]; ++k) {
                const Vec3 c{o[0] + (i + 0.5) * dv, o[1] + (j + 0.5) * dv,
                             o[2] + (k + 0.5) * dv};
                bool in = false;
                if (shape == Shape::Box) {
                    in = true;
                    for (int q = 0; q < 3; ++q) in = in && c[q] > p.lo[q] && c[q] < p.hi[q];
                } else {
                    double d2 = 0.0;
                    for (int q = 0; q < 3; ++q) d2 += (c[q] - p.center[q]) * (c[q] - p.center[q]);
                    const double d = std::sqrt(d2);
                    in = shape == Shape::Sphere ? d < p.radius
                                                : (d >= p.inner_radius && d < p.radius);
                }
                if (in) out.push_back({i, j, k});
            }
    return out;
}

}  // namespace voxsie
