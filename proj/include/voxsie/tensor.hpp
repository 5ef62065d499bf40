#pragma once

#include <complex>
#include <cstdlib>
#include <new>
#include <vector>

#include "voxsie/common.hpp"

namespace voxsie {

using cplx = std::complex<double>;

// 64-byte aligned storage so FFTW can use its SIMD codelets on every buffer
template <class T>
struct AlignedAllocator {
    using value_type = T;
    AlignedAllocator() = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) {}
    T* allocate(std::size_t n) {
        std::size_t bytes = ((n * sizeof(T) + 63) / 64) * 64;
        void* p = std::aligned_alloc(64, bytes == 0 ? 64 : bytes);
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) { std::free(p); }
    template <class U>
    bool operator==(const AlignedAllocator<U>&) const { return true; }
};

// Dense 3-D array, C order (last index fastest).
template <class T>
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(int n0, int n1, int n2, T fill = T{})
        : n_{n0, n1, n2},
          data_(static_cast<std::size_t>(n0) * n1 * n2, fill) {}
    explicit Tensor3(Dims3 d, T fill = T{}) : Tensor3(d.nx, d.ny, d.nz, fill) {}

    int dim(int i) const { return n_[i]; }
    Dims3 dims() const { return {n_[0], n_[1], n_[2]}; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    std::size_t offset(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n_[1] + j) * n_[2] + k;
    }
    T& operator()(int i, int j, int k) { return data_[offset(i, j, k)]; }
    const T& operator()(int i, int j, int k) const {
        return data_[offset(i, j, k)];
    }
    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

    void fill(T v) { std::fill(data_.begin(), data_.end(), v); }
    std::size_t bytes() const { return data_.size() * sizeof(T); }

private:
    std::array<int, 3> n_{0, 0, 0};
    std::vector<T, AlignedAllocator<T>> data_;
};

using RealTensor = Tensor3<double>;
using ComplexTensor = Tensor3<cplx>;

}  // namespace voxsie
