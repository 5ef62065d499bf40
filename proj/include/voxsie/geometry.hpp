#pragma once

#include <optional>
#include <vector>

#include "voxsie/common.hpp"

namespace voxsie {

// One conductor or dielectric region, given as voxel indices on the global
// lattice (index i covers [origin + i*dv, origin + (i+1)*dv]).
struct ConductorSpec {
    int id = 1;
    std::vector<Index3> voxels;
};

struct DielectricSpec {
    double eps_r = 1.0;
    std::vector<Index3> voxels;
};

struct StructureDescription {
    double voxel_size = 0.0;
    Vec3 origin{0.0, 0.0, 0.0};
    double background_eps_r = 1.0;
    std::vector<ConductorSpec> conductors;
    std::vector<DielectricSpec> dielectrics;
};

enum class MaterialKind : std::uint8_t { Background, Conductor, Dielectric };

struct Material {
    MaterialKind kind = MaterialKind::Background;
    int index = -1;  // conductor slot or dielectric region number
    bool operator==(const Material&) const = default;
};

struct VoxelGrid {
    Dims3 dims;
    double voxel_size = 0.0;
    Vec3 origin{};            // world coordinate of the corner of voxel (0,0,0)
    Index3 lattice_offset{};  // lattice index of voxel (0,0,0)
    double background_eps_r = 1.0;
    std::vector<int> conductor_ids;     // conductor slot -> user id
    std::vector<double> dielectric_eps;  // region -> eps_r
    std::vector<Material> occupancy;     // C order over (x, y, z)

    std::size_t voxel_count() const { return dims.total(); }
    const Material& at(int i, int j, int k) const {
        return occupancy[(static_cast<std::size_t>(i) * dims.ny + j) * dims.nz + k];
    }
    // Outside the box everything is background.
    Material material(int i, int j, int k) const;
    double eps_r(const Material& m) const;
};

enum class PanelKind : std::uint8_t { Conductor, Dielectric };

struct Panel {
    Axis dir = Axis::X;
    int sign = 1;       // +1: normal along +dir
    Index3 slot{};      // index in the voxel-panel grid of dir
    PanelKind kind = PanelKind::Conductor;
    int conductor = -1;     // conductor slot (conductor panels)
    double eps_in = 1.0;    // dielectric side eps_r (dielectric panels)
    double eps_out = 1.0;   // eps_r the normal points into; for conductor
                            // panels, the adjacent medium
    Vec3 center{};
    double area = 0.0;
};

struct PanelSet {
    std::vector<Panel> panels;  // conductor panels first, then dielectric
    std::size_t n_conductor = 0;
    std::size_t n_dielectric = 0;
    Dims3 domain;
    double voxel_size = 0.0;
    Vec3 origin{};
    std::vector<int> conductor_ids;

    std::size_t size() const { return panels.size(); }
    std::array<std::size_t, 3> count_by_direction() const;
};

// Panel-grid extent of direction a on a domain: (N+1) along a, N elsewhere.
Dims3 panel_grid_dims(Axis a, Dims3 domain);

VoxelGrid build_grid(const StructureDescription& desc);
PanelSet enumerate_panels(const VoxelGrid& grid);

enum class Shape { Box, Sphere, Shell };

struct PrimitiveParams {
    Vec3 center{0, 0, 0};  // sphere/shell
    double radius = 0.0;   // sphere; outer radius of a shell
    double inner_radius = 0.0;  // shell
    Vec3 lo{0, 0, 0}, hi{0, 0, 0};  // box
};

// Voxels of the lattice (corner at `lattice_origin`, pitch dv) whose centers
// fall inside the shape. Box: lo < c < hi; sphere: |c - c0| < r;
// shell: r_in <= |c - c0| < r_out.
std::vector<Index3> voxelize_primitive(Shape shape, const PrimitiveParams& p,
                                       double dv,
                                       Vec3 lattice_origin = {0, 0, 0});

// Geometric description of a panel as an axis-aligned rectangle.
struct PanelRect {
    Axis normal = Axis::Z;
    Vec3 lo{}, hi{};  // lo[normal] == hi[normal]
};

PanelRect panel_rect(const Panel& p, double dv);
PanelRect rect_from_center(Axis normal, const Vec3& c, double dv);

}  // namespace voxsie
