#include <cstdio>
#include <cstdlib>

#include "CLI11.hpp"
#include "json.hpp"
#include "commands.hpp"

using namespace voxsie;
using namespace voxsie::cli;

namespace {

std::string env_cache_dir() {
    const char* e = std::getenv("VOXSIE_CACHE_DIR");
    return e ? e : "";
}

int report(const char* kind, const char* what, int code) {
    const nlohmann::json j = {{"error", kind}, {"message", what}, {"exit_code", code}};
    std::fprintf(stderr, "%s\n", j.dump().c_str());
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"voxsie: capacitance extraction for voxelized structures"};
    app.require_subcommand(1);

    InstallOptions inst;
    auto* c_inst = app.add_subcommand("install-cache", "generate and compress unit-voxel kernel tensors");
    c_inst->add_option("--dir", inst.dir, "cache directory (default $VOXSIE_CACHE_DIR)");
    c_inst->add_option("--size", inst.size_class, "domain size class (voxels per edge)")->check(CLI::PositiveNumber);
    c_inst->add_option("--tol", inst.tol, "Tucker tolerance")->check(CLI::PositiveNumber);
    c_inst->add_flag("--force", inst.force, "regenerate even when valid files exist");
    c_inst->add_option("--near", inst.kernel.near_threshold, "closed-form threshold in panel sizes");
    c_inst->add_option("--far-order", inst.kernel.far_order, "Gauss points per axis beyond the threshold");

    ExtractOptions ex;
    std::string precond = "hybrid";
    int box = 10;
    bool no_cache = false, high_accuracy = false;
    auto* c_ex = app.add_subcommand("extract", "compute the capacitance matrix of a structure");
    auto* in_file = c_ex->add_option("structure", ex.structure, "structure JSON file");
    auto* in_preset = c_ex->add_option("--preset", ex.preset, "built-in structure instead of a file");
    in_file->excludes(in_preset);
    c_ex->add_option("--voxel-size", ex.voxel_size, "voxel size for presets");
    c_ex->add_option("-o,--out", ex.out_dir, "output directory");
    c_ex->add_option("--cache-dir", ex.cache_dir, "kernel cache (default $VOXSIE_CACHE_DIR)");
    c_ex->add_flag("--no-cache", no_cache, "always generate kernels directly");
    c_ex->add_option("--restart", ex.solver.restart, "GMRES restart length")->check(CLI::PositiveNumber);
    c_ex->add_option("--rre", ex.solver.rre, "target relative residual")->check(CLI::Range(1e-300, 1.0));
    c_ex->add_flag("--high-accuracy", high_accuracy, "target relative residual 1e-8");
    c_ex->add_option("--max-iterations", ex.solver.max_iterations, "iteration cap per excitation");
    c_ex->add_option("--preconditioner", precond, "hybrid | block | diagonal | none");
    c_ex->add_option("--box", box, "voxels per preconditioner box edge")->check(CLI::PositiveNumber);
    c_ex->add_option("--tucker-tol", ex.solver.tucker_tol, "circulant compression tolerance, 0 disables");
    c_ex->add_option("--near", ex.solver.kernel.near_threshold, "closed-form threshold in panel sizes");
    c_ex->add_option("--far-order", ex.solver.kernel.far_order, "Gauss points per axis beyond the threshold");
    c_ex->add_flag("-q,--quiet", ex.quiet, "no report on stdout");

    VerifyOptions ver;
    auto* c_ver = app.add_subcommand("verify", "run the self-check suites");
    c_ver->add_option("--level", ver.level, "quick | full")->check(CLI::IsMember({"quick", "full"}));
    c_ver->add_option("--cache-dir", ver.cache_dir, "also check this kernel cache");
    c_ver->add_option("--seed", ver.seed, "random seed for generated structures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }

    try {
        if (*c_inst) {
            if (inst.dir.empty()) inst.dir = env_cache_dir();
            if (inst.dir.empty()) throw InputError("no cache directory: pass --dir or set VOXSIE_CACHE_DIR");
            return cmd_install_cache(inst);
        }
        if (*c_ex) {
            if (ex.structure.empty() && ex.preset.empty()) throw InputError("give a structure file or --preset");
            if (ex.cache_dir.empty()) ex.cache_dir = env_cache_dir();
            ex.use_cache = !no_cache && !ex.cache_dir.empty();
            if (high_accuracy) ex.solver.rre = 1e-8;
            ex.solver.preconditioner = parse_preconditioner(precond);
            ex.solver.box_dims = {box, box, box};
            return cmd_extract(ex);
        }
        if (ver.cache_dir.empty()) ver.cache_dir = env_cache_dir();
        return cmd_verify(ver);
    } catch (const InputError& e) {
        return report("input", e.what(), kInputError);
    } catch (const CacheError& e) {
        return report("cache", e.what(), kCacheFailure);
    } catch (const SolverError& e) {
        return report("solver", e.what(), kSolverFailure);
    } catch (const std::exception& e) {
        return report("internal", e.what(), kSolverFailure);
    }
}
