#include "commands.hpp"

#include <cstdio>
#include <filesystem>

#include "voxsie/cache.hpp"
#include "voxsie/outputs.hpp"
#include "voxsie/presets.hpp"
#include "voxsie/structure_io.hpp"

namespace fs = std::filesystem;

namespace voxsie::cli {

int cmd_install_cache(const InstallOptions& o) {
    std::error_code ec;
    fs::create_directories(o.dir, ec);
    if (ec) throw CacheError("cannot create " + o.dir + ": " + ec.message());
    const InstallReport r = install_cache(o.dir, o.size_class, o.tol, o.kernel, o.force,
                                          [](const std::string& m) { std::printf("%s\n", m.c_str()); });
    std::printf("class %d, tol %.1e: %zu written, %zu skipped, %.3f MB raw -> %.3f MB stored, %.2f s\n",
                r.size_class, r.tol, r.written.size(), r.skipped.size(), r.raw_bytes / 1048576.0,
                r.compressed_bytes / 1048576.0, r.seconds);
    return kOk;
}

int cmd_extract(const ExtractOptions& o) {
    const StructureDescription s =
        o.preset.empty() ? load_structure(o.structure) : make_preset(o.preset, o.voxel_size);
    SolverConfig cfg = o.solver;
    cfg.cache_dir = o.use_cache ? o.cache_dir : "";

    System sys = build_system(s, cfg);
    ExtractionResult r = extract_capacitance(sys, cfg);

    std::error_code ec;
    fs::create_directories(o.out_dir, ec);
    if (ec) throw InputError("cannot create " + o.out_dir + ": " + ec.message());
    const fs::path out(o.out_dir);
    write_text((out / "capacitance.csv").string(), capacitance_csv(r));
    write_text((out / "charges.csv").string(), charges_csv(sys.panels, r));
    for (std::size_t j = 0; j < r.charges.size(); ++j)
        write_charge_db((out / ("charge_db_" + std::to_string(r.conductor_ids[j]) + ".bin")).string(),
                        charge_db(r.charges[j]));
    write_text((out / "telemetry.json").string(), telemetry_json(r.telemetry));
    const std::string report = telemetry_text(r.telemetry);
    write_text((out / "telemetry.txt").string(), report);
    if (!o.quiet) {
        std::printf("%s\n%s", report.c_str(), capacitance_csv(r).c_str());
    }
    for (std::size_t j = 0; j < r.failed.size(); ++j)
        if (r.failed[j]) {
            std::fprintf(stderr,
                         "{\"error\": \"solver\", \"conductor\": %d, \"iterations\": %d, \"rre\": %.3e}\n",
                         r.conductor_ids[j], r.telemetry.iterations[j], r.telemetry.rre[j]);
            return kSolverFailure;
        }
    return kOk;
}

}  // namespace voxsie::cli
