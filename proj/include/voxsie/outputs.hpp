#pragma once

#include <string>
#include <vector>

#include "voxsie/solver.hpp"

namespace voxsie {

// Matrix layout, 9 significant digits:
//   conductor,1,2
//   1,c11,c12
//   2,c21,c22
std::string capacitance_csv(const ExtractionResult& r);

// One row per panel: geometry, tags and one charge column per excitation.
std::string charges_csv(const PanelSet& ps, const ExtractionResult& r);

// 20 log10(|rho| / max |rho|), floored at kDbFloor.
inline constexpr float kDbFloor = -300.0f;
std::vector<float> charge_db(const std::vector<double>& rho);

// "VXSCHDB1", u32 version, u32 panel count, then count float32 (little endian)
void write_charge_db(const std::string& path, const std::vector<float>& db);
std::vector<float> read_charge_db(const std::string& path);

std::string telemetry_json(const Telemetry& t);
std::string telemetry_text(const Telemetry& t);

void write_text(const std::string& path, const std::string& text);

}  // namespace voxsie
