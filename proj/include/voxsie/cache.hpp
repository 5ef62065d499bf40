#pragma once

#include <functional>
#include <string>
#include <vector>

#include "voxsie/toeplitz.hpp"
#include "voxsie/tucker.hpp"

namespace voxsie {

// One compressed unit-voxel Toeplitz tensor as stored on disk.
struct CacheEntry {
    PairId pair;
    KernelKind kind = KernelKind::Potential;
    int size_class = 0;
    double tol = 0.0;
    RealTucker tensor;
};

inline constexpr std::uint32_t kCacheVersion = 1;

void write_cache_file(const std::string& path, const CacheEntry& e);
// throws CacheError on bad magic, version, or checksum
CacheEntry read_cache_file(const std::string& path);

std::string cache_file_name(PairId p, KernelKind k);

struct InstallReport {
    int size_class = 0;
    double tol = 0.0;
    std::vector<std::string> written, skipped;
    std::size_t raw_bytes = 0, compressed_bytes = 0;
    double seconds = 0.0;
};

using LogFn = std::function<void(const std::string&)>;

// Generate, compress and write the four canonical tensors. Existing files
// that parse, pass their checksums and match class and tol are kept.
InstallReport install_cache(const std::string& dir, int size_class, double tol,
                            const KernelOptions& opt = {}, bool force = false,
                            const LogFn& log = {});

struct LoadedKernels {
    ToeplitzKernelSet set;  // unit voxel, resized to the requested domain
    int size_class = 0;
    double tol = 0.0;
    double read_seconds = 0.0, restore_seconds = 0.0;
    std::size_t compressed_bytes = 0;
};

// Read the cache and restore the leading block needed for `domain`.
// Throws CacheError when the cache is missing, corrupt or too small.
LoadedKernels load_cache(const std::string& dir, Dims3 domain);

// Check every cache file in `dir`; returns one message per problem.
std::vector<std::string> verify_cache(const std::string& dir);

}  // namespace voxsie
