#include "voxsie/cache.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace voxsie {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'V', 'X', 'S', 'K', 'E', 'R', 'N', '1'};

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::string& buf, T v) {
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    buf.append(b, sizeof(T));
}

template <class T>
T get(const std::string& buf, std::size_t& pos) {
    if (pos + sizeof(T) > buf.size()) throw CacheError("truncated cache file");
    char b[sizeof(T)];
    std::memcpy(b, buf.data() + pos, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    pos += sizeof(T);
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}

std::uint32_t crc(const char* p, std::size_t n) {
    uLong c = crc32(0L, Z_NULL, 0);
    while (n > 0) {
        const uInt chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
        c = crc32(c, reinterpret_cast<const Bytef*>(p), chunk);
        p += chunk;
        n -= chunk;
    }
    return static_cast<std::uint32_t>(c);
}

void put_section(std::string& buf, const char tag[4], const double* v, std::size_t n) {
    buf.append(tag, 4);
    put<std::uint64_t>(buf, n);
    const std::size_t start = buf.size();
    for (std::size_t i = 0; i < n; ++i) put<double>(buf, v[i]);
    put<std::uint32_t>(buf, crc(buf.data() + start, buf.size() - start));
}

std::vector<double> get_section(const std::string& buf, std::size_t& pos, const char tag[4],
                                std::size_t expect, const std::string& path) {
    if (pos + 4 > buf.size() || std::memcmp(buf.data() + pos, tag, 4) != 0)
        throw CacheError(path + ": missing section " + std::string(tag, 4));
    pos += 4;
    const auto n = get<std::uint64_t>(buf, pos);
    if (n != expect) throw CacheError(path + ": section " + std::string(tag, 4) + " has wrong size");
    const std::size_t start = pos;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = get<double>(buf, pos);
    const std::uint32_t want = crc(buf.data() + start, pos - start);
    if (get<std::uint32_t>(buf, pos) != want)
        throw CacheError(path + ": checksum mismatch in section " + std::string(tag, 4));
    return v;
}

}  // namespace

std::string cache_file_name(PairId p, KernelKind k) {
    std::string s = k == KernelKind::Potential ? "A_" : "B_";
    s += axis_name(p.test);
    s += axis_name(p.source);
    return s + ".vxk";
}

void write_cache_file(const std::string& path, const CacheEntry& e) {
    std::string buf(kMagic, 8);
    put<std::uint32_t>(buf, kCacheVersion);
    put<std::uint8_t>(buf, static_cast<std::uint8_t>(idx(e.pair.test)));
    put<std::uint8_t>(buf, static_cast<std::uint8_t>(idx(e.pair.source)));
    put<std::uint8_t>(buf, static_cast<std::uint8_t>(e.kind));
    put<std::uint8_t>(buf, 0);
    put<std::int32_t>(buf, e.size_class);
    put<double>(buf, 1.0);  // generation voxel size
    put<double>(buf, e.tol);
    const Dims3 d = e.tensor.dims, r = e.tensor.ranks();
    for (int q = 0; q < 3; ++q) put<std::int32_t>(buf, d[q]);
    for (int q = 0; q < 3; ++q) put<std::int32_t>(buf, r[q]);
    put<std::uint32_t>(buf, crc(buf.data(), buf.size()));
    put_section(buf, "CORE", e.tensor.core.data(), e.tensor.core.size());
    const char* tags[3] = {"FAC0", "FAC1", "FAC2"};
    for (int q = 0; q < 3; ++q)
        put_section(buf, tags[q], e.tensor.factors[q].data(),
                    static_cast<std::size_t>(e.tensor.factors[q].size()));

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CacheError("cannot write " + tmp);
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        out.flush();
        if (!out) throw CacheError("write failed for " + tmp + " (disk full?)");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw CacheError("cannot move " + tmp + " into place: " + ec.message());
}

CacheEntry read_cache_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string buf = ss.str();
    if (buf.size() < 8 || std::memcmp(buf.data(), kMagic, 8) != 0)
        throw CacheError(path + ": not a kernel cache file");
    std::size_t pos = 8;
    if (get<std::uint32_t>(buf, pos) != kCacheVersion)
        throw CacheError(path + ": unsupported cache version");
    CacheEntry e;
    const int ta = get<std::uint8_t>(buf, pos), sa = get<std::uint8_t>(buf, pos);
    const int kind = get<std::uint8_t>(buf, pos);
    get<std::uint8_t>(buf, pos);
    if (ta > 2 || sa > 2 || kind > 1) throw CacheError(path + ": bad tensor tag");
    e.pair = {static_cast<Axis>(ta), static_cast<Axis>(sa)};
    e.kind = static_cast<KernelKind>(kind);
    e.size_class = get<std::int32_t>(buf, pos);
    if (get<double>(buf, pos) != 1.0) throw CacheError(path + ": not a unit-voxel cache");
    e.tol = get<double>(buf, pos);
    Dims3 d, r;
    for (int q = 0; q < 3; ++q) d[q] = get<std::int32_t>(buf, pos);
    for (int q = 0; q < 3; ++q) r[q] = get<std::int32_t>(buf, pos);
    const std::uint32_t want = crc(buf.data(), pos);
    if (get<std::uint32_t>(buf, pos) != want) throw CacheError(path + ": header checksum mismatch");
    for (int q = 0; q < 3; ++q)
        if (d[q] < 1 || r[q] < 1 || r[q] > d[q]) throw CacheError(path + ": bad dimensions");
    if (!(toeplitz_dims(e.pair, {e.size_class, e.size_class, e.size_class}) == d))
        throw CacheError(path + ": dimensions do not match the size class");

    e.tensor.dims = d;
    e.tensor.tol = e.tol;
    auto core = get_section(buf, pos, "CORE", r.total(), path);
    e.tensor.core = RealTensor(r);
    std::copy(core.begin(), core.end(), e.tensor.core.begin());
    const char* tags[3] = {"FAC0", "FAC1", "FAC2"};
    for (int q = 0; q < 3; ++q) {
        auto f = get_section(buf, pos, tags[q], static_cast<std::size_t>(d[q]) * r[q], path);
        e.tensor.factors[q] = Eigen::Map<Eigen::MatrixXd>(f.data(), d[q], r[q]);
    }
    return e;
}

namespace {

struct Canon {
    PairId pair;
    KernelKind kind;
};
constexpr Canon kCanon[4] = {{{Axis::X, Axis::X}, KernelKind::Potential},
                             {{Axis::X, Axis::Y}, KernelKind::Potential},
                             {{Axis::X, Axis::X}, KernelKind::Field},
                             {{Axis::X, Axis::Y}, KernelKind::Field}};

bool valid_existing(const std::string& path, int n, double tol) {
    try {
        const CacheEntry e = read_cache_file(path);
        return e.size_class == n && e.tol == tol;
    } catch (const CacheError&) {
        return false;
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

InstallReport install_cache(const std::string& dir, int n, double tol, const KernelOptions& opt,
                            bool force, const LogFn& log) {
    auto t0 = std::chrono::steady_clock::now();
    if (n < 1) throw InputError("cache size class must be at least 1");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw CacheError("cannot create cache directory " + dir + ": " + ec.message());
    InstallReport rep;
    rep.size_class = n;
    rep.tol = tol;
    for (const Canon& c : kCanon) {
        const std::string path = (fs::path(dir) / cache_file_name(c.pair, c.kind)).string();
        if (!force && valid_existing(path, n, tol)) {
            if (log) log("cache file " + path + " is valid, skipping");
            rep.skipped.push_back(path);
            const CacheEntry e = read_cache_file(path);
            rep.compressed_bytes += e.tensor.bytes();
            rep.raw_bytes += e.tensor.dims.total() * sizeof(double);
            continue;
        }
        if (log) log("generating " + cache_file_name(c.pair, c.kind) + " at class " + std::to_string(n));
        const ToeplitzTensor t = generate_toeplitz(c.pair, {n, n, n}, 1.0, c.kind, opt);
        CacheEntry e;
        e.pair = c.pair;
        e.kind = c.kind;
        e.size_class = n;
        e.tol = tol;
        e.tensor = compress(t.values, tol);
        write_cache_file(path, e);
        // re-read to catch disk corruption before declaring success
        const CacheEntry back = read_cache_file(path);
        if (back.tensor.ranks() != e.tensor.ranks())
            throw CacheError(path + ": re-read does not match what was written");
        rep.written.push_back(path);
        rep.raw_bytes += t.values.bytes();
        rep.compressed_bytes += e.tensor.bytes();
    }
    rep.seconds = seconds_since(t0);
    return rep;
}

namespace {

// leading block of a Tucker tensor: only the first rows of each factor
RealTensor restore_leading(const RealTucker& t, Dims3 want) {
    RealTucker cut = t;
    for (int q = 0; q < 3; ++q) {
        Eigen::MatrixXd f = t.factors[q].topRows(want[q]);
        cut.factors[q] = f;
    }
    cut.dims = want;
    return decompress(cut);
}

}  // namespace

LoadedKernels load_cache(const std::string& dir, Dims3 domain) {
    auto t0 = std::chrono::steady_clock::now();
    CacheEntry entries[4];
    for (int i = 0; i < 4; ++i)
        entries[i] = read_cache_file((fs::path(dir) / cache_file_name(kCanon[i].pair, kCanon[i].kind)).string());
    LoadedKernels out;
    out.size_class = entries[0].size_class;
    out.tol = entries[0].tol;
    for (const auto& e : entries) {
        if (e.size_class != out.size_class)
            throw CacheError("cache files in " + dir + " have mixed size classes");
        out.compressed_bytes += e.tensor.bytes();
    }
    out.read_seconds = seconds_since(t0);
    const int n = out.size_class;
    for (int q = 0; q < 3; ++q)
        if (domain[q] > n)
            throw CacheError("domain " + to_string(domain) + " exceeds the cache class " +
                             std::to_string(n) + "; rerun install-cache with a larger class");

    auto t1 = std::chrono::steady_clock::now();
    // restore only the block that the permuted tensors of `domain` touch
    const int m = std::max({domain.nx, domain.ny, domain.nz});
    CanonicalKernels c;
    c.size = m;
    c.potential_xx = restore_leading(entries[0].tensor, toeplitz_dims({Axis::X, Axis::X}, {m, m, m}));
    c.potential_xy = restore_leading(entries[1].tensor, toeplitz_dims({Axis::X, Axis::Y}, {m, m, m}));
    c.field_xx = restore_leading(entries[2].tensor, toeplitz_dims({Axis::X, Axis::X}, {m, m, m}));
    c.field_xy = restore_leading(entries[3].tensor, toeplitz_dims({Axis::X, Axis::Y}, {m, m, m}));
    ToeplitzKernelSet full = expand_canonical(c);
    out.set = (domain == full.domain) ? std::move(full) : resize_toeplitz(full, domain);
    out.restore_seconds = seconds_since(t1);
    return out;
}

std::vector<std::string> verify_cache(const std::string& dir) {
    std::vector<std::string> problems;
    int cls = -1;
    for (const Canon& c : kCanon) {
        const std::string path = (fs::path(dir) / cache_file_name(c.pair, c.kind)).string();
        try {
            const CacheEntry e = read_cache_file(path);
            if (!(e.pair == c.pair) || e.kind != c.kind)
                problems.push_back(path + ": tag does not match file name");
            if (cls < 0) cls = e.size_class;
            if (e.size_class != cls) problems.push_back(path + ": size class differs");
        } catch (const CacheError& ex) {
            problems.push_back(ex.what());
        }
    }
    return problems;
}

}  // namespace voxsie
