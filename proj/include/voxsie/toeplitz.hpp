#pragma once

#include <array>
#include <optional>

#include "voxsie/kernel.hpp"
#include "voxsie/tensor.hpp"

namespace voxsie {

enum class KernelKind : std::uint8_t { Potential = 0, Field = 1 };

struct PairId {
    Axis test = Axis::X;
    Axis source = Axis::X;
    bool operator==(const PairId&) const = default;
};

// stored potential pairs: xx yy zz xy xz yz
inline constexpr std::array<PairId, 6> kPotentialPairs{{{Axis::X, Axis::X},
                                                        {Axis::Y, Axis::Y},
                                                        {Axis::Z, Axis::Z},
                                                        {Axis::X, Axis::Y},
                                                        {Axis::X, Axis::Z},
                                                        {Axis::Y, Axis::Z}}};

// slot of (a, b) in kPotentialPairs and whether it is the transposed pair
std::pair<int, bool> potential_slot(Axis a, Axis b);
inline int field_slot(Axis a, Axis b) { return 3 * idx(a) + idx(b); }

Dims3 toeplitz_dims(PairId p, Dims3 domain);
Vec3 source_offset(PairId p, double dv);

struct ToeplitzTensor {
    PairId pair;
    KernelKind kind = KernelKind::Potential;
    RealTensor values;
};

ToeplitzTensor generate_toeplitz(PairId p, Dims3 domain, double dv, KernelKind kind,
                                 const KernelOptions& opt = {});

// Same, but also for the transposed potential pairs yx, zx, zy (used only to
// check the conjugation identity).
ToeplitzTensor generate_toeplitz_unchecked(PairId p, Dims3 domain, double dv, KernelKind kind,
                                           const KernelOptions& opt = {});

struct ToeplitzKernelSet {
    Dims3 domain;
    double voxel_size = 1.0;
    std::array<ToeplitzTensor, 6> potential;
    std::array<ToeplitzTensor, 9> field;

    // Interaction between a testing panel (direction a, slot i) and a source
    // panel (direction b, slot j) on the same domain.
    double potential_value(Axis a, const Index3& i, Axis b, const Index3& j) const;
    double field_value(Axis a, const Index3& i, Axis b, const Index3& j) const;
    std::size_t bytes() const;
};

ToeplitzKernelSet generate_kernel_set(Dims3 domain, double dv, const KernelOptions& opt = {});

// Unit-voxel tensors only for xx and xy of each kind; every other pair of a
// cubic domain is an axis permutation of these.
struct CanonicalKernels {
    int size = 0;  // cubic domain edge
    RealTensor potential_xx, potential_xy, field_xx, field_xy;
};

CanonicalKernels generate_canonical(int size, const KernelOptions& opt = {});
ToeplitzKernelSet expand_canonical(const CanonicalKernels& c);

ToeplitzKernelSet scale_toeplitz(const ToeplitzKernelSet& set, double dv_target);
ToeplitzKernelSet resize_toeplitz(const ToeplitzKernelSet& set, Dims3 target);

// Circulant embedding with the per-axis sign rules, real space, uniform dims.
Dims3 circulant_dims(Dims3 domain);
Dims3 circulant_dims_unpadded(PairId p, Dims3 domain);
RealTensor embed_circulant(const ToeplitzTensor& t, Dims3 domain, bool pad = true);

struct CirculantKernelSet {
    Dims3 domain;
    Dims3 dims;  // 2(N+1) per axis
    std::array<ComplexTensor, 6> potential;
    std::array<ComplexTensor, 9> field;
    std::size_t bytes() const;
};

CirculantKernelSet fft_circulants(const ToeplitzKernelSet& set);

// forward, unnormalized, in place
void fft3_forward(ComplexTensor& t);
// inverse, divided by the element count, in place
void fft3_inverse(ComplexTensor& t);

}  // namespace voxsie
