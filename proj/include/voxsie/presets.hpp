#pragma once

#include <string>
#include <vector>

#include "voxsie/geometry.hpp"

namespace voxsie {

// PEC sphere of radius rc inside a dielectric shell out to rd, centred on a
// voxel corner.
StructureDescription coated_sphere(double dv, double rc = 0.25, double rd = 0.5, double eps_r = 2.0);

// Cube of `edge` voxels of eps_r with a conductor cube of `core` voxels in
// the middle (core = 0: dielectric only).
StructureDescription coated_cube(int edge, int core, double eps_r = 2.0, double dv = 1.0);

// Two square plates side x side voxels, one voxel thick, `gap` voxels apart.
StructureDescription parallel_plates(int side, int gap, double dv = 1.0);

// rows x cols array of lines along y in a substrate.
StructureDescription interconnect_array(int rows = 2, int cols = 3, double eps_r = 7.0, double dv = 1e-5);

// Two bus layers crossing at right angles, each in its own dielectric, with
// a thin separating layer and coated upper buses.
StructureDescription crossing_buses(int n = 3, double dv = 1e-8);

// n layers of n serpentine lines, each with `turns` folds.
StructureDescription meander_lines(int n = 2, int length = 24, int turns = 2, double dv = 1e-4);

// Small mixed structure: 1-3 separated conductor boxes and up to two
// dielectric boxes inside a domain of at most `max_edge` voxels per axis.
StructureDescription random_structure(unsigned seed, int max_edge = 7);

std::vector<std::string> preset_names();
// name as listed by preset_names(); dv <= 0 keeps the preset default
StructureDescription make_preset(const std::string& name, double dv = 0.0);

}  // namespace voxsie
