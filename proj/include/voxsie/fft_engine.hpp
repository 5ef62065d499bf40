#pragma once

#include <atomic>
#include <memory>
#include <vector>

#include "voxsie/geometry.hpp"
#include "voxsie/toeplitz.hpp"
#include "voxsie/tucker.hpp"

namespace voxsie {

// Source of Fourier-domain circulant kernels for the mvm. `get` may return
// `scratch` after filling it, so at most one restored tensor is alive per
// caller.
class CirculantStore {
public:
    virtual ~CirculantStore() = default;
    virtual Dims3 domain() const = 0;
    virtual Dims3 dims() const = 0;
    virtual const ComplexTensor& potential(int slot, ComplexTensor& scratch) const = 0;
    virtual const ComplexTensor& field(int slot, ComplexTensor& scratch) const = 0;
    virtual std::size_t bytes() const = 0;
    virtual int stored_potential_count() const { return 6; }
};

class DenseCirculants : public CirculantStore {
public:
    explicit DenseCirculants(CirculantKernelSet set) : set_(std::move(set)) {}
    Dims3 domain() const override { return set_.domain; }
    Dims3 dims() const override { return set_.dims; }
    const ComplexTensor& potential(int s, ComplexTensor&) const override { return set_.potential[s]; }
    const ComplexTensor& field(int s, ComplexTensor&) const override { return set_.field[s]; }
    std::size_t bytes() const override { return set_.bytes(); }
    const CirculantKernelSet& set() const { return set_; }

private:
    CirculantKernelSet set_;
};

class CompressedCirculants : public CirculantStore {
public:
    CompressedCirculants(const CirculantKernelSet& set, double tol);
    Dims3 domain() const override { return domain_; }
    Dims3 dims() const override { return dims_; }
    const ComplexTensor& potential(int s, ComplexTensor& scratch) const override;
    const ComplexTensor& field(int s, ComplexTensor& scratch) const override;
    std::size_t bytes() const override;
    const ComplexTucker& potential_tucker(int s) const { return potential_[s]; }
    const ComplexTucker& field_tucker(int s) const { return field_[s]; }
    double restore_seconds() const { return restore_ns_.load() * 1e-9; }
    long restore_count() const { return restores_.load(); }
    // largest relative reconstruction error seen while compressing
    double worst_error() const { return worst_error_; }

private:
    Dims3 domain_, dims_;
    std::array<ComplexTucker, 6> potential_;
    std::array<ComplexTucker, 9> field_;
    double worst_error_ = 0.0;
    mutable std::atomic<long> restore_ns_{0}, restores_{0};
};

// The system operator of the panel unknowns: conductor rows give potentials,
// dielectric rows normal fields plus the jump diagonal.
class FftOperator {
public:
    FftOperator(const PanelSet& panels, std::shared_ptr<const CirculantStore> kernels);

    std::size_t size() const { return n_; }
    void apply(const double* x, double* y) const;
    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        y.resize(n_);
        apply(x.data(), y.data());
    }

    // scatter into the 2(N+1)-sized direction tensors (sign free)
    std::array<ComplexTensor, 3> scatter(const double* x) const;
    // gather conductor/dielectric rows from potential and field tensors
    void gather(const std::array<ComplexTensor, 3>& c, const std::array<ComplexTensor, 3>& d,
                const double* x, double* y) const;

    const std::vector<double>& jump_diagonal() const { return jump_; }
    long forward_ffts() const { return fwd_.load(); }
    long inverse_ffts() const { return inv_.load(); }
    long mvm_count() const { return mvms_.load(); }
    const CirculantStore& kernels() const { return *kernels_; }

private:
    std::size_t n_;
    Dims3 dims_;
    std::vector<std::uint8_t> dir_;
    std::vector<std::size_t> offset_;
    std::vector<signed char> sign_;
    std::vector<bool> conductor_;
    std::vector<double> jump_;  // jump term on dielectric rows, 0 elsewhere
    std::shared_ptr<const CirculantStore> kernels_;
    mutable std::atomic<long> fwd_{0}, inv_{0}, mvms_{0};
};

}  // namespace voxsie
