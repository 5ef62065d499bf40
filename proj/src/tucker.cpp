#include "voxsie/tucker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace voxsie {

namespace {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class T>
double sq_norm(const Tensor3<T>& x) {
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return s;
}

// conjugate transpose of the mode-n unfolding, (prod of other dims) x D_n
template <class T>
Mat<T> unfolding_h(const Tensor3<T>& x, int mode) {
    const int n0 = x.dim(0), n1 = x.dim(1), n2 = x.dim(2);
    const Eigen::Index m = static_cast<Eigen::Index>(x.size()) / x.dim(mode);
    Mat<T> a(m, x.dim(mode));
    if (mode == 0) {
        a = Eigen::Map<const Mat<T>>(x.data(), static_cast<Eigen::Index>(n1) * n2, n0).conjugate();
    } else if (mode == 2) {
        a = Eigen::Map<const RowMat<T>>(x.data(), static_cast<Eigen::Index>(n0) * n1, n2)
                .conjugate();
    } else {
        for (int i = 0; i < n0; ++i)
            for (int j = 0; j < n1; ++j)
                for (int k = 0; k < n2; ++k)
                    a(static_cast<Eigen::Index>(i) * n2 + k, j) = Eigen::numext::conj(x(i, j, k));
    }
    return a;
}

// left singular vectors and values of the mode-n unfolding
template <class T>
void mode_svd(const Tensor3<T>& x, int mode, Mat<T>& u, Eigen::VectorXd& s) {
    Mat<T> a = unfolding_h(x, mode);
    const Eigen::Index d = a.cols();
    if (a.rows() >= d) {
        Eigen::HouseholderQR<Mat<T>> qr(a);
        Mat<T> r = qr.matrixQR().topRows(d).template triangularView<Eigen::Upper>();
        // X_(n) = R^H Q^H
        Eigen::BDCSVD<Mat<T>> svd(r.adjoint(), Eigen::ComputeFullU);
        u = svd.matrixU();
        s = svd.singularValues();
    } else {
        Eigen::BDCSVD<Mat<T>> svd(a.adjoint(), Eigen::ComputeThinU);
        u = svd.matrixU();
        s = svd.singularValues();
    }
}

}  // namespace

template <class T>
std::size_t TuckerTensor<T>::element_count() const {
    std::size_t n = core.size();
    for (int i = 0; i < 3; ++i) n += static_cast<std::size_t>(factors[i].size());
    return n;
}

template <class T>
Tensor3<T> mode_product(const Tensor3<T>& x, const Mat<T>& m, int mode) {
    if (m.cols() != x.dim(mode)) throw ContractViolation("mode_product: dimension mismatch");
    const int n0 = x.dim(0), n1 = x.dim(1), n2 = x.dim(2);
    const int r = static_cast<int>(m.rows());
    if (mode == 0) {
        Tensor3<T> y(r, n1, n2);
        Eigen::Map<RowMat<T>>(y.data(), r, static_cast<Eigen::Index>(n1) * n2).noalias() =
            m * Eigen::Map<const RowMat<T>>(x.data(), n0, static_cast<Eigen::Index>(n1) * n2);
        return y;
    }
    if (mode == 2) {
        Tensor3<T> y(n0, n1, r);
        Eigen::Map<RowMat<T>>(y.data(), static_cast<Eigen::Index>(n0) * n1, r).noalias() =
            Eigen::Map<const RowMat<T>>(x.data(), static_cast<Eigen::Index>(n0) * n1, n2) *
            m.transpose();
        return y;
    }
    Tensor3<T> y(n0, r, n2);
    for (int i = 0; i < n0; ++i) {
        Eigen::Map<RowMat<T>>(y.data() + static_cast<std::size_t>(i) * r * n2, r, n2).noalias() =
            m * Eigen::Map<const RowMat<T>>(x.data() + static_cast<std::size_t>(i) * n1 * n2, n1,
                                            n2);
    }
    return y;
}

template <class T>
TuckerTensor<T> compress(const Tensor3<T>& x, double tol) {
    if (!(tol > 0.0 && tol < 1.0)) throw InputError("Tucker tolerance must lie in (0, 1)");
    if (x.empty()) throw InputError("cannot compress an empty tensor");
    TuckerTensor<T> t;
    t.dims = x.dims();
    t.tol = tol;
    const double norm2 = sq_norm(x);
    if (norm2 == 0.0) {
        for (int i = 0; i < 3; ++i) t.factors[i] = Mat<T>::Identity(x.dim(i), 1);
        t.core = Tensor3<T>(1, 1, 1);
        return t;
    }
    const double budget = tol * tol * norm2 / 3.0;
    for (int i = 0; i < 3; ++i) {
        Mat<T> u;
        Eigen::VectorXd s;
        mode_svd(x, i, u, s);
        Eigen::Index r = s.size();
        double tail = 0.0;
        while (r > 1 && tail + s[r - 1] * s[r - 1] <= budget) {
            tail += s[r - 1] * s[r - 1];
            --r;
        }
        t.factors[i] = u.leftCols(r);
    }
    // contract the largest modes first
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return x.dim(a) - t.factors[a].cols() > x.dim(b) - t.factors[b].cols();
    });
    Tensor3<T> core = mode_product<T>(x, t.factors[order[0]].adjoint(), order[0]);
    core = mode_product<T>(core, t.factors[order[1]].adjoint(), order[1]);
    t.core = mode_product<T>(core, t.factors[order[2]].adjoint(), order[2]);
    return t;
}

template <class T>
void decompress_into(const TuckerTensor<T>& t, Tensor3<T>& out) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return t.dims[a] < t.dims[b]; });
    Tensor3<T> y = mode_product<T>(t.core, t.factors[order[0]], order[0]);
    y = mode_product<T>(y, t.factors[order[1]], order[1]);
    out = mode_product<T>(y, t.factors[order[2]], order[2]);
}

template <class T>
Tensor3<T> decompress(const TuckerTensor<T>& t) {
    Tensor3<T> out;
    decompress_into(t, out);
    return out;
}

template <class T>
TuckerMetrics metrics(const TuckerTensor<T>& t, double restore_seconds, double conv_seconds) {
    TuckerMetrics m;
    m.bytes = t.bytes();
    m.original_bytes = t.dims.total() * sizeof(T);
    m.compression_ratio = static_cast<double>(t.dims.total()) / t.element_count();
    m.overhead = conv_seconds > 0.0 ? restore_seconds / conv_seconds : 0.0;
    return m;
}

template <class T>
double relative_error(const Tensor3<T>& a, const Tensor3<T>& b) {
    if (a.size() != b.size()) throw ContractViolation("relative_error: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(a[i]);
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

#define VOXSIE_TUCKER(T)                                                                   \
    template struct TuckerTensor<T>;                                                       \
    template TuckerTensor<T> compress<T>(const Tensor3<T>&, double);                       \
    template Tensor3<T> decompress<T>(const TuckerTensor<T>&);                             \
    template void decompress_into<T>(const TuckerTensor<T>&, Tensor3<T>&);                 \
    template Tensor3<T> mode_product<T>(const Tensor3<T>&, const Mat<T>&, int);            \
    template TuckerMetrics metrics<T>(const TuckerTensor<T>&, double, double);             \
    template double relative_error<T>(const Tensor3<T>&, const Tensor3<T>&);

VOXSIE_TUCKER(double)
VOXSIE_TUCKER(cplx)

}  // namespace voxsie
