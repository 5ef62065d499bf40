#pragma once

#include <string>

#include "voxsie/geometry.hpp"

namespace voxsie {

inline constexpr const char* kStructureFormat = "voxsie-structure";
inline constexpr int kStructureVersion = 1;

// JSON document:
// {
//   "format": "voxsie-structure", "version": 1,
//   "voxel_size": 0.05, "origin": [x, y, z], "background_eps_r": 1,
//   "conductors": [{"id": 1, "voxels": [[i, j, k], ...]} |
//                  {"id": 1, "primitive": {"shape": "sphere", "center": [..], "radius": r}}],
//   "dielectrics": [{"eps_r": 2, "voxels": [...]} |
//                   {"eps_r": 2, "primitive": {"shape": "shell", "center": [..],
//                                              "inner_radius": a, "radius": b}}]
// }
// Box primitives take "lo" and "hi" corners. Primitives are voxelized on the
// lattice anchored at "origin".
StructureDescription parse_structure(const std::string& text);
StructureDescription load_structure(const std::string& path);

// Explicit voxel lists only.
std::string structure_to_json(const StructureDescription& s);
void save_structure(const StructureDescription& s, const std::string& path);

}  // namespace voxsie
