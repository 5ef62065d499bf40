#pragma once

#include <string>

#include "voxsie/solver.hpp"

namespace voxsie::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kSolverFailure = 3,
    kCacheFailure = 4,
    kVerifyFailure = 5,
};

struct InstallOptions {
    std::string dir;
    int size_class = 64;
    double tol = 1e-8;
    bool force = false;
    KernelOptions kernel;
};

struct ExtractOptions {
    std::string structure;  // path, or empty with a preset
    std::string preset;
    double voxel_size = 0.0;  // preset override
    std::string out_dir = ".";
    bool use_cache = true;
    std::string cache_dir;
    SolverConfig solver;
    bool quiet = false;
};

struct VerifyOptions {
    std::string level = "quick";
    std::string cache_dir;
    unsigned seed = 1;
};

int cmd_install_cache(const InstallOptions& o);
int cmd_extract(const ExtractOptions& o);
int cmd_verify(const VerifyOptions& o);

}  // namespace voxsie::cli
