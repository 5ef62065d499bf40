#include "voxsie/outputs.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace voxsie {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return buf;
}

const char* kDbMagic = "VXSCHDB1";
constexpr std::uint32_t kDbVersion = 1;

}  // namespace

std::string capacitance_csv(const ExtractionResult& r) {
    std::ostringstream os;
    os << "conductor";
    for (int id : r.conductor_ids) os << ',' << id;
    os << '\n';
    for (std::size_t i = 0; i < r.conductor_ids.size(); ++i) {
        os << r.conductor_ids[i];
        for (std::size_t j = 0; j < r.conductor_ids.size(); ++j) os << ',' << sci(r.capacitance(i, j));
        os << '\n';
    }
    return os.str();
}

std::string charges_csv(const PanelSet& ps, const ExtractionResult& r) {
    std::ostringstream os;
    os << "panel,x,y,z,direction,sign,kind,conductor,eps_in,eps_out";
    for (int id : r.conductor_ids) os << ",rho_" << id;
    os << '\n';
    for (std::size_t k = 0; k < ps.size(); ++k) {
        const Panel& p = ps.panels[k];
        os << k << ',' << sci(p.center[0]) << ',' << sci(p.center[1]) << ',' << sci(p.center[2]) << ','
           << axis_name(p.dir) << ',' << (p.sign > 0 ? '+' : '-') << ','
           << (p.kind == PanelKind::Conductor ? "conductor" : "dielectric") << ','
           << (p.kind == PanelKind::Conductor ? ps.conductor_ids[p.conductor] : 0) << ','
           << p.eps_in << ',' << p.eps_out;
        for (const auto& rho : r.charges) os << ',' << sci(rho[k]);
        os << '\n';
    }
    return os.str();
}

std::vector<float> charge_db(const std::vector<double>& rho) {
    double mx = 0.0;
    for (double v : rho) mx = std::max(mx, std::abs(v));
    std::vector<float> out(rho.size(), kDbFloor);
    if (mx == 0.0) return out;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double a = std::abs(rho[i]);
        if (a == mx) {
            out[i] = 0.0f;
        } else if (a > 0.0) {
            out[i] = static_cast<float>(std::max<double>(20.0 * std::log10(a / mx), kDbFloor));
        }
    }
    return out;
}

void write_charge_db(const std::string& path, const std::vector<float>& db) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out.write(kDbMagic, 8);
    const std::uint32_t hdr[2] = {kDbVersion, static_cast<std::uint32_t>(db.size())};
    out.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
    out.write(reinterpret_cast<const char*>(db.data()), db.size() * sizeof(float));
    if (!out) throw InputError("write failed for " + path);
}

std::vector<float> read_charge_db(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    char magic[8];
    std::uint32_t hdr[2];
    if (!in.read(magic, 8) || std::memcmp(magic, kDbMagic, 8) != 0)
        throw InputError(path + ": not a charge dB file");
    if (!in.read(reinterpret_cast<char*>(hdr), sizeof hdr) || hdr[0] != kDbVersion)
        throw InputError(path + ": unsupported version");
    std::vector<float> db(hdr[1]);
    if (!in.read(reinterpret_cast<char*>(db.data()), db.size() * sizeof(float)))
        throw InputError(path + ": truncated");
    return db;
}

std::string telemetry_json(const Telemetry& t) {
    nlohmann::json j;
    j["stages"] = nlohmann::json::array();
    for (const auto& s : t.stages) j["stages"].push_back({{"name", s.name}, {"seconds", s.seconds}});
    j["panels"] = {{"total", t.panels}, {"conductor", t.conductor_panels}, {"dielectric", t.dielectric_panels}};
    j["domain"] = {t.domain.nx, t.domain.ny, t.domain.nz};
    j["kernel_source"] = t.kernel_source;
    j["memory_bytes"] = {{"toeplitz", t.toeplitz_bytes},
                         {"circulant", t.circulant_bytes},
                         {"circulant_compressed", t.circulant_compressed_bytes},
                         {"preconditioner", t.preconditioner_bytes},
                         {"preconditioner_undeduplicated", t.preconditioner_full_bytes}};
    j["compression_ratio"] = t.compression_ratio;
    j["overhead"] = t.overhead;
    j["tucker_error"] = t.tucker_error;
    j["boxes"] = t.boxes;
    j["unique_blocks"] = t.unique_blocks;
    j["iterations"] = t.iterations;
    j["converged"] = t.converged;
    j["rre"] = t.rre;
    j["true_rre"] = t.true_rre;
    j["solve_seconds"] = t.solve_seconds;
    j["ffts"] = {{"forward", t.forward_ffts}, {"inverse", t.inverse_ffts}, {"mvms", t.mvms}};
    j["warnings"] = t.warnings;
    return j.dump(2);
}

std::string telemetry_text(const Telemetry& t) {
    auto mb = [](std::size_t b) { return b / (1024.0 * 1024.0); };
    std::ostringstream os;
    char buf[160];
    os << "stage                                          time (s)\n";
    double total = 0.0;
    for (const auto& s : t.stages) {
        std::snprintf(buf, sizeof buf, "%-46s %10.3f\n", s.name.c_str(), s.seconds);
        os << buf;
        total += s.seconds;
    }
    std::snprintf(buf, sizeof buf, "%-46s %10.3f\n\n", "total", total);
    os << buf;
    std::snprintf(buf, sizeof buf, "panels %zu (conductor %zu, dielectric %zu), domain %dx%dx%d\n", t.panels,
                  t.conductor_panels, t.dielectric_panels, t.domain.nx, t.domain.ny, t.domain.nz);
    os << buf;
    os << "kernels from " << t.kernel_source << "\n";
    std::snprintf(buf, sizeof buf, "memory (MB): toeplitz %.3f, circulant %.3f -> %.3f, preconditioner %.3f\n",
                  mb(t.toeplitz_bytes), mb(t.circulant_bytes), mb(t.circulant_compressed_bytes),
                  mb(t.preconditioner_bytes));
    os << buf;
    std::snprintf(buf, sizeof buf, "CR %.2f, CO %.3f, boxes %zu, unique blocks %zu\n", t.compression_ratio,
                  t.overhead, t.boxes, t.unique_blocks);
    os << buf;
    for (std::size_t i = 0; i < t.iterations.size(); ++i) {
        std::snprintf(buf, sizeof buf, "excitation %zu: %d iterations, rre %.3e (true %.3e)%s\n", i + 1,
                      t.iterations[i], t.rre[i], t.true_rre[i], t.converged[i] ? "" : "  NOT CONVERGED");
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "ffts: %ld forward, %ld inverse over %ld mvms\n", t.forward_ffts, t.inverse_ffts,
                  t.mvms);
    os << buf;
    for (const auto& w : t.warnings) os << "warning: " << w << "\n";
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << text;
    if (!out) throw InputError("write failed for " + path);
}

}  // namespace voxsie
