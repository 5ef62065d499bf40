#include "voxsie/toeplitz.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "parallel.hpp"

namespace voxsie {

std::pair<int, bool> potential_slot(Axis a, Axis b) {
    for (int s = 0; s < 6; ++s) {
        if (kPotentialPairs[s].test == a && kPotentialPairs[s].source == b) return {s, false};
        if (kPotentialPairs[s].test == b && kPotentialPairs[s].source == a) return {s, true};
    }
    throw ContractViolation("potential_slot: bad pair");
}

Dims3 toeplitz_dims(PairId p, Dims3 d) {
    Dims3 out = d;
    if (p.test == p.source) {
        out[idx(p.test)] += 1;
    } else {
        out[idx(p.test)] += 2;
        out[idx(p.source)] += 2;
    }
    return out;
}

Vec3 source_offset(PairId p, double dv) {
    Vec3 s{0, 0, 0};
    if (p.test != p.source) {
        s[idx(p.test)] = 0.5 * dv;
        s[idx(p.source)] = -0.5 * dv;
    }
    return s;
}

namespace {

// role of an axis for a panel direction: node when it is the normal axis
inline bool is_node(Axis dir, int axis) { return idx(dir) == axis; }

// Toeplitz index and reflection flag for a signed slot offset k on one axis
inline std::pair<int, bool> axis_lookup(bool test_node, bool src_node, int k) {
    if (k >= 0) return {k, false};
    const int p = -k;
    if (test_node == src_node) return {p, true};
    if (test_node) return {p + 1, true};
    return {p - 1, true};
}

ToeplitzTensor generate_any(PairId p, Dims3 domain, double dv, KernelKind kind,
                            const KernelOptions& opt) {
    if (!(dv > 0.0)) throw InputError("voxel size must be positive");
    if (domain.nx < 1 || domain.ny < 1 || domain.nz < 1)
        throw ContractViolation("generate_toeplitz: empty domain");
    ToeplitzTensor t;
    t.pair = p;
    t.kind = kind;
    const Dims3 P = toeplitz_dims(p, domain);
    t.values = RealTensor(P);
    const Vec3 S = source_offset(p, dv);
    const PanelRect src = rect_from_center(p.source, S, dv);
    parallel_for(0, P.nx, [&](int mx) {
        for (int my = 0; my < P.ny; ++my)
            for (int mz = 0; mz < P.nz; ++mz) {
                const Vec3 O{mx * dv, my * dv, mz * dv};
                const PanelRect test = rect_from_center(p.test, O, dv);
                double v;
                if (kind == KernelKind::Potential) {
                    v = potential_integral(test, src, opt);
                } else {
                    v = efield_integral(test, src, opt);
                }
                t.values(mx, my, mz) = v;
            }
    });
    return t;
}

}  // namespace

ToeplitzTensor generate_toeplitz(PairId p, Dims3 domain, double dv, KernelKind kind,
                                 const KernelOptions& opt) {
    if (kind == KernelKind::Potential) {
        auto [slot, transposed] = potential_slot(p.test, p.source);
        (void)slot;
        if (transposed)
            throw ContractViolation(std::string("no potential tensor is stored for pair ") +
                                    axis_name(p.test) + axis_name(p.source));
    }
    return generate_any(p, domain, dv, kind, opt);
}

ToeplitzTensor generate_toeplitz_unchecked(PairId p, Dims3 domain, double dv, KernelKind kind,
                                           const KernelOptions& opt) {
    return generate_any(p, domain, dv, kind, opt);
}

double ToeplitzKernelSet::potential_value(Axis a, const Index3& i, Axis b,
                                          const Index3& j) const {
    auto [slot, transposed] = potential_slot(a, b);
    if (transposed) return potential_value(b, j, a, i);
    const RealTensor& T = potential[slot].values;
    int ix[3];
    for (int q = 0; q < 3; ++q)
        ix[q] = axis_lookup(is_node(a, q), is_node(b, q), i[q] - j[q]).first;
    return T(ix[0], ix[1], ix[2]);
}

double ToeplitzKernelSet::field_value(Axis a, const Index3& i, Axis b, const Index3& j) const {
    const RealTensor& T = field[field_slot(a, b)].values;
    int ix[3];
    double s = 1.0;
    for (int q = 0; q < 3; ++q) {
        auto [k, refl] = axis_lookup(is_node(a, q), is_node(b, q), i[q] - j[q]);
        ix[q] = k;
        if (refl && q == idx(a)) s = -s;
    }
    return s * T(ix[0], ix[1], ix[2]);
}

std::size_t ToeplitzKernelSet::bytes() const {
    std::size_t b = 0;
    for (const auto& t : potential) b += t.values.bytes();
    for (const auto& t : field) b += t.values.bytes();
    return b;
}

ToeplitzKernelSet generate_kernel_set(Dims3 domain, double dv, const KernelOptions& opt) {
    ToeplitzKernelSet s;
    s.domain = domain;
    s.voxel_size = dv;
    for (int k = 0; k < 6; ++k)
        s.potential[k] = generate_any(kPotentialPairs[k], domain, dv, KernelKind::Potential, opt);
    for (Axis a : kAxes)
        for (Axis b : kAxes)
            s.field[field_slot(a, b)] = generate_any({a, b}, domain, dv, KernelKind::Field, opt);
    return s;
}

CanonicalKernels generate_canonical(int n, const KernelOptions& opt) {
    if (n < 1) throw InputError("cache class must be positive");
    const Dims3 d{n, n, n};
    CanonicalKernels c;
    c.size = n;
    c.potential_xx = generate_any({Axis::X, Axis::X}, d, 1.0, KernelKind::Potential, opt).values;
    c.potential_xy = generate_any({Axis::X, Axis::Y}, d, 1.0, KernelKind::Potential, opt).values;
    c.field_xx = generate_any({Axis::X, Axis::X}, d, 1.0, KernelKind::Field, opt).values;
    c.field_xy = generate_any({Axis::X, Axis::Y}, d, 1.0, KernelKind::Field, opt).values;
    return c;
}

namespace {

// T^{ab}(i_a, i_b, i_g) = T^{xy}(i_a, i_b, i_g): axis permutation of the
// canonical tensor for a cubic domain
ToeplitzTensor permute_from(const RealTensor& src, PairId p, KernelKind kind, int n) {
    int perm[3];  // perm[q] = axis of the pair that plays canonical axis q
    perm[0] = idx(p.test);
    if (p.test == p.source) {
        perm[1] = (perm[0] + 1) % 3;
        perm[2] = (perm[0] + 2) % 3;
    } else {
        perm[1] = idx(p.source);
        perm[2] = 3 - perm[0] - perm[1];
    }
    ToeplitzTensor t;
    t.pair = p;
    t.kind = kind;
    const Dims3 P = toeplitz_dims(p, {n, n, n});
    t.values = RealTensor(P);
    for (int i = 0; i < P.nx; ++i)
        for (int j = 0; j < P.ny; ++j)
            for (int k = 0; k < P.nz; ++k) {
                const int own[3] = {i, j, k};
                t.values(i, j, k) = src(own[perm[0]], own[perm[1]], own[perm[2]]);
            }
    return t;
}

}  // namespace

ToeplitzKernelSet expand_canonical(const CanonicalKernels& c) {
    ToeplitzKernelSet s;
    const int n = c.size;
    s.domain = {n, n, n};
    s.voxel_size = 1.0;
    for (int k = 0; k < 6; ++k) {
        const PairId p = kPotentialPairs[k];
        s.potential[k] = permute_from(p.test == p.source ? c.potential_xx : c.potential_xy, p,
                                      KernelKind::Potential, n);
    }
    for (Axis a : kAxes)
        for (Axis b : kAxes)
            s.field[field_slot(a, b)] =
                permute_from(a == b ? c.field_xx : c.field_xy, {a, b}, KernelKind::Field, n);
    return s;
}

ToeplitzKernelSet scale_toeplitz(const ToeplitzKernelSet& in, double dv) {
    if (!(dv > 0.0)) throw InputError("target voxel size must be positive");
    ToeplitzKernelSet s = in;
    const double fa = dv * dv * dv, fb = dv * dv;
    for (auto& t : s.potential)
        for (auto& v : t.values) v *= fa;
    for (auto& t : s.field)
        for (auto& v : t.values) v *= fb;
    s.voxel_size = in.voxel_size * dv;
    return s;
}

namespace {
ToeplitzTensor leading(const ToeplitzTensor& t, Dims3 target) {
    ToeplitzTensor out;
    out.pair = t.pair;
    out.kind = t.kind;
    const Dims3 P = toeplitz_dims(t.pair, target);
    out.values = RealTensor(P);
    for (int i = 0; i < P.nx; ++i)
        for (int j = 0; j < P.ny; ++j)
            for (int k = 0; k < P.nz; ++k) out.values(i, j, k) = t.values(i, j, k);
    return out;
}
}  // namespace

ToeplitzKernelSet resize_toeplitz(const ToeplitzKernelSet& in, Dims3 target) {
    for (int q = 0; q < 3; ++q)
        if (target[q] < 1 || target[q] > in.domain[q])
            throw CacheError("domain " + to_string(target) + " exceeds the kernel cache (" +
                             to_string(in.domain) + "); regenerate it with a larger class");
    ToeplitzKernelSet s;
    s.domain = target;
    s.voxel_size = in.voxel_size;
    for (int k = 0; k < 6; ++k) s.potential[k] = leading(in.potential[k], target);
    for (int k = 0; k < 9; ++k) s.field[k] = leading(in.field[k], target);
    return s;
}

Dims3 circulant_dims(Dims3 d) { return {2 * (d.nx + 1), 2 * (d.ny + 1), 2 * (d.nz + 1)}; }

Dims3 circulant_dims_unpadded(PairId p, Dims3 d) {
    Dims3 out;
    for (int q = 0; q < 3; ++q) {
        const bool any_node = is_node(p.test, q) || is_node(p.source, q);
        out[q] = 2 * (d[q] + (any_node ? 1 : 0));
    }
    return out;
}

namespace {

struct AxisEntry {
    int t = -1;  // Toeplitz index, -1 = zero entry
    bool reflected = false;
};

// circulant index -> Toeplitz entry along one axis, before padding
std::vector<AxisEntry> axis_table(bool tn, bool sn, int N) {
    const int L = 2 * (N + ((tn || sn) ? 1 : 0));
    std::vector<AxisEntry> e(L);
    if (tn == sn) {
        const int top = tn ? N : N - 1;  // largest offset
        for (int c = 0; c <= top; ++c) e[c] = {c, false};
        for (int p = 1; p <= top; ++p) e[L - p] = {p, true};
    } else if (tn) {
        for (int c = 0; c <= N; ++c) e[c] = {c, false};
        for (int p = 1; p <= N - 1; ++p) e[L - p] = {p + 1, true};
    } else {
        for (int c = 0; c <= N - 1; ++c) e[c] = {c, false};
        for (int p = 1; p <= N; ++p) e[L - p] = {p - 1, true};
    }
    return e;
}

}  // namespace

RealTensor embed_circulant(const ToeplitzTensor& t, Dims3 domain, bool pad) {
    const PairId p = t.pair;
    std::vector<AxisEntry> tab[3];
    for (int q = 0; q < 3; ++q) {
        tab[q] = axis_table(is_node(p.test, q), is_node(p.source, q), domain[q]);
        const int N = domain[q];
        if (pad && static_cast<int>(tab[q].size()) == 2 * N) {
            // two zero planes at positions N, N+1 (0-based)
            tab[q].insert(tab[q].begin() + N, 2, AxisEntry{});
        }
    }
    const bool odd = t.kind == KernelKind::Field;
    const int alpha = idx(p.test);
    RealTensor c(static_cast<int>(tab[0].size()), static_cast<int>(tab[1].size()),
                 static_cast<int>(tab[2].size()));
    for (int i = 0; i < c.dim(0); ++i) {
        const AxisEntry ei = tab[0][i];
        if (ei.t < 0) continue;
        for (int j = 0; j < c.dim(1); ++j) {
            const AxisEntry ej = tab[1][j];
            if (ej.t < 0) continue;
            for (int k = 0; k < c.dim(2); ++k) {
                const AxisEntry ek = tab[2][k];
                if (ek.t < 0) continue;
                double s = 1.0;
                if (odd) {
                    const bool r[3] = {ei.reflected, ej.reflected, ek.reflected};
                    if (r[alpha]) s = -1.0;
                }
                c(i, j, k) = s * t.values(ei.t, ej.t, ek.t);
            }
        }
    }
    return c;
}

namespace {

std::mutex g_plan_mutex;
std::map<std::tuple<int, int, int, int>, fftw_plan> g_plans;

fftw_plan get_plan(ComplexTensor& t, int sign) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_tuple(t.dim(0), t.dim(1), t.dim(2), sign);
    auto it = g_plans.find(key);
    if (it != g_plans.end()) return it->second;
    ComplexTensor scratch(t.dim(0), t.dim(1), t.dim(2));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_3d(t.dim(0), t.dim(1), t.dim(2), buf, buf, sign, FFTW_ESTIMATE);
    g_plans[key] = plan;
    return plan;
}

}  // namespace

void fft3_forward(ComplexTensor& t) {
    auto* b = reinterpret_cast<fftw_complex*>(t.data());
    fftw_execute_dft(get_plan(t, FFTW_FORWARD), b, b);
}

void fft3_inverse(ComplexTensor& t) {
    auto* b = reinterpret_cast<fftw_complex*>(t.data());
    fftw_execute_dft(get_plan(t, FFTW_BACKWARD), b, b);
    const double s = 1.0 / static_cast<double>(t.size());
    for (auto& v : t) v *= s;
}

namespace {
ComplexTensor to_spectrum(const RealTensor& r) {
    ComplexTensor c(r.dim(0), r.dim(1), r.dim(2));
    for (std::size_t i = 0; i < r.size(); ++i) c[i] = r[i];
    fft3_forward(c);
    return c;
}
}  // namespace

CirculantKernelSet fft_circulants(const ToeplitzKernelSet& set) {
    CirculantKernelSet c;
    c.domain = set.domain;
    c.dims = circulant_dims(set.domain);
    for (int k = 0; k < 6; ++k)
        c.potential[k] = to_spectrum(embed_circulant(set.potential[k], set.domain));
    for (int k = 0; k < 9; ++k) c.field[k] = to_spectrum(embed_circulant(set.field[k], set.domain));
    return c;
}

std::size_t CirculantKernelSet::bytes() const {
    std::size_t b = 0;
    for (const auto& t : potential) b += t.bytes();
    for (const auto& t : field) b += t.bytes();
    return b;
}

}  // namespace voxsie
