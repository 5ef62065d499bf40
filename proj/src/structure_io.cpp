#include "voxsie/structure_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace voxsie {

using nlohmann::json;

namespace {

Vec3 read_vec(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 3) throw InputError(std::string(what) + " must be a 3-element array");
    Vec3 v;
    for (int k = 0; k < 3; ++k) {
        if (!j[k].is_number()) throw InputError(std::string(what) + " must be numeric");
        v[k] = j[k].get<double>();
    }
    return v;
}

double read_number(const json& obj, const char* key) {
    if (!obj.contains(key)) throw InputError(std::string("missing \"") + key + "\"");
    if (!obj[key].is_number()) throw InputError(std::string("\"") + key + "\" must be a number");
    return obj[key].get<double>();
}

std::vector<Index3> read_region(const json& r, double dv, const Vec3& origin) {
    const bool has_vox = r.contains("voxels"), has_prim = r.contains("primitive");
    if (has_vox == has_prim) throw InputError("each region needs exactly one of \"voxels\" or \"primitive\"");
    std::vector<Index3> out;
    if (has_vox) {
        const json& vs = r["voxels"];
        if (!vs.is_array()) throw InputError("\"voxels\" must be an array");
        out.reserve(vs.size());
        for (const auto& v : vs) {
            if (!v.is_array() || v.size() != 3) throw InputError("voxel index must be [i, j, k]");
            Index3 ix;
            for (int k = 0; k < 3; ++k) {
                if (!v[k].is_number_integer()) throw InputError("voxel indices must be integers");
                ix[k] = v[k].get<int>();
                if (ix[k] < 0) throw InputError("voxel indices must be non-negative");
            }
            out.push_back(ix);
        }
        return out;
    }
    const json& p = r["primitive"];
    if (!p.is_object() || !p.contains("shape") || !p["shape"].is_string())
        throw InputError("primitive needs a \"shape\"");
    const std::string shape = p["shape"].get<std::string>();
    PrimitiveParams pp;
    Shape sh;
    if (shape == "box") {
        sh = Shape::Box;
        pp.lo = read_vec(p.value("lo", json()), "lo");
        pp.hi = read_vec(p.value("hi", json()), "hi");
    } else if (shape == "sphere" || shape == "shell") {
        sh = shape == "sphere" ? Shape::Sphere : Shape::Shell;
        pp.center = read_vec(p.value("center", json()), "center");
        pp.radius = read_number(p, "radius");
        if (sh == Shape::Shell) pp.inner_radius = read_number(p, "inner_radius");
    } else {
        throw InputError("unknown primitive shape \"" + shape + "\"");
    }
    out = voxelize_primitive(sh, pp, dv, origin);
    if (out.empty()) throw InputError("primitive \"" + shape + "\" contains no voxel centers");
    return out;
}

}  // namespace

StructureDescription parse_structure(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("structure file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("structure document must be an object");
    if (doc.contains("format") && doc["format"] != kStructureFormat)
        throw InputError("unexpected format tag");
    if (doc.contains("version")) {
        if (!doc["version"].is_number_integer() || doc["version"].get<int>() != kStructureVersion)
            throw InputError("unsupported structure version");
    }
    StructureDescription s;
    s.voxel_size = read_number(doc, "voxel_size");
    if (!(s.voxel_size > 0.0)) throw InputError("voxel_size must be positive");
    if (doc.contains("origin")) s.origin = read_vec(doc["origin"], "origin");
    if (doc.contains("background_eps_r")) s.background_eps_r = read_number(doc, "background_eps_r");

    if (!doc.contains("conductors") || !doc["conductors"].is_array())
        throw InputError("\"conductors\" array is required");
    for (const auto& c : doc["conductors"]) {
        ConductorSpec cs;
        if (!c.contains("id") || !c["id"].is_number_integer())
            throw InputError("conductor needs an integer \"id\"");
        cs.id = c["id"].get<int>();
        cs.voxels = read_region(c, s.voxel_size, s.origin);
        s.conductors.push_back(std::move(cs));
    }
    if (doc.contains("dielectrics")) {
        if (!doc["dielectrics"].is_array()) throw InputError("\"dielectrics\" must be an array");
        for (const auto& d : doc["dielectrics"]) {
            DielectricSpec ds;
            ds.eps_r = read_number(d, "eps_r");
            ds.voxels = read_region(d, s.voxel_size, s.origin);
            s.dielectrics.push_back(std::move(ds));
        }
    }
    return s;
}

StructureDescription load_structure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open structure file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_structure(ss.str());
}

std::string structure_to_json(const StructureDescription& s) {
    // shift so every written index is non-negative
    Index3 lo{0, 0, 0};
    for (const auto& c : s.conductors)
        for (const auto& v : c.voxels)
            for (int k = 0; k < 3; ++k) lo[k] = std::min(lo[k], v[k]);
    for (const auto& d : s.dielectrics)
        for (const auto& v : d.voxels)
            for (int k = 0; k < 3; ++k) lo[k] = std::min(lo[k], v[k]);
    json doc;
    doc["format"] = kStructureFormat;
    doc["version"] = kStructureVersion;
    doc["voxel_size"] = s.voxel_size;
    doc["origin"] = {s.origin[0] + lo[0] * s.voxel_size, s.origin[1] + lo[1] * s.voxel_size,
                     s.origin[2] + lo[2] * s.voxel_size};
    doc["background_eps_r"] = s.background_eps_r;
    auto vox = [&lo](const std::vector<Index3>& v) {
        json a = json::array();
        for (const auto& i : v) a.push_back({i[0] - lo[0], i[1] - lo[1], i[2] - lo[2]});
        return a;
    };
    doc["conductors"] = json::array();
    for (const auto& c : s.conductors) doc["conductors"].push_back({{"id", c.id}, {"voxels", vox(c.voxels)}});
    doc["dielectrics"] = json::array();
    for (const auto& d : s.dielectrics)
        doc["dielectrics"].push_back({{"eps_r", d.eps_r}, {"voxels", vox(d.voxels)}});
    return doc.dump();
}

void save_structure(const StructureDescription& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << structure_to_json(s) << "\n";
}

}  // namespace voxsie
