#pragma once

#include <Eigen/Dense>
#include <array>

#include "voxsie/tensor.hpp"

namespace voxsie {

template <class T>
struct TuckerTensor {
    using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
    Tensor3<T> core;
    std::array<Matrix, 3> factors;  // D_i x r_i, orthonormal columns
    Dims3 dims;
    double tol = 0.0;

    Dims3 ranks() const { return core.dims(); }
    std::size_t element_count() const;
    std::size_t bytes() const { return element_count() * sizeof(T); }
};

// Truncated HOSVD: per mode the discarded energy is at most (tol ||X||)^2 / 3.
template <class T>
TuckerTensor<T> compress(const Tensor3<T>& x, double tol);

template <class T>
Tensor3<T> decompress(const TuckerTensor<T>& t);

// decompress into a caller-owned buffer (reused between calls)
template <class T>
void decompress_into(const TuckerTensor<T>& t, Tensor3<T>& out);

// Y = X x_mode M, M is (R x D_mode)
template <class T>
Tensor3<T> mode_product(const Tensor3<T>& x,
                        const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& m, int mode);

struct TuckerMetrics {
    double compression_ratio = 0.0;
    double overhead = 0.0;  // restore time / convolution time
    std::size_t bytes = 0;
    std::size_t original_bytes = 0;
};

template <class T>
TuckerMetrics metrics(const TuckerTensor<T>& t, double restore_seconds, double conv_seconds);

template <class T>
double relative_error(const Tensor3<T>& a, const Tensor3<T>& b);

using RealTucker = TuckerTensor<double>;
using ComplexTucker = TuckerTensor<cplx>;

}  // namespace voxsie
