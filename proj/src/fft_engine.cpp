#include "voxsie/fft_engine.hpp"

#include <chrono>

#include "voxsie/kernel.hpp"

namespace voxsie {

CompressedCirculants::CompressedCirculants(const CirculantKernelSet& set, double tol)
    : domain_(set.domain), dims_(set.dims) {
    for (int s = 0; s < 6; ++s) {
        potential_[s] = compress(set.potential[s], tol);
        worst_error_ = std::max(worst_error_, relative_error(set.potential[s], decompress(potential_[s])));
    }
    for (int s = 0; s < 9; ++s) {
        field_[s] = compress(set.field[s], tol);
        worst_error_ = std::max(worst_error_, relative_error(set.field[s], decompress(field_[s])));
    }
}

namespace {
template <class F>
void timed(std::atomic<long>& ns, std::atomic<long>& count, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    ns += std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0)
              .count();
    ++count;
}
}  // namespace

const ComplexTensor& CompressedCirculants::potential(int s, ComplexTensor& scratch) const {
    timed(restore_ns_, restores_, [&] { decompress_into(potential_[s], scratch); });
    return scratch;
}

const ComplexTensor& CompressedCirculants::field(int s, ComplexTensor& scratch) const {
    timed(restore_ns_, restores_, [&] { decompress_into(field_[s], scratch); });
    return scratch;
}

std::size_t CompressedCirculants::bytes() const {
    std::size_t b = 0;
    for (const auto& t : potential_) b += t.bytes();
    for (const auto& t : field_) b += t.bytes();
    return b;
}

FftOperator::FftOperator(const PanelSet& ps, std::shared_ptr<const CirculantStore> kernels)
    : n_(ps.size()), dims_(kernels->dims()), kernels_(std::move(kernels)) {
    if (!(kernels_->domain() == ps.domain))
        throw ContractViolation("FftOperator: kernel domain " + to_string(kernels_->domain()) +
                                " does not match panel domain " + to_string(ps.domain));
    dir_.resize(n_);
    offset_.resize(n_);
    sign_.resize(n_);
    conductor_.resize(n_);
    jump_.assign(n_, 0.0);
    const double area = ps.voxel_size * ps.voxel_size;
    for (std::size_t k = 0; k < n_; ++k) {
        const Panel& p = ps.panels[k];
        dir_[k] = static_cast<std::uint8_t>(idx(p.dir));
        offset_[k] = (static_cast<std::size_t>(p.slot[0]) * dims_.ny + p.slot[1]) * dims_.nz + p.slot[2];
        sign_[k] = static_cast<signed char>(p.sign);
        conductor_[k] = p.kind == PanelKind::Conductor;
        if (!conductor_[k]) jump_[k] = diagonal_entry({area, p.eps_in, p.eps_out});
    }
}

std::array<ComplexTensor, 3> FftOperator::scatter(const double* x) const {
    std::array<ComplexTensor, 3> q;
    for (int a = 0; a < 3; ++a) q[a] = ComplexTensor(dims_);
    for (std::size_t k = 0; k < n_; ++k) {
        cplx& slot = q[dir_[k]][offset_[k]];
        if (slot != cplx(0.0)) throw ContractViolation("scatter: two panels share a slot");
        slot = x[k];
    }
    return q;
}

void FftOperator::gather(const std::array<ComplexTensor, 3>& c, const std::array<ComplexTensor, 3>& d,
                         const double* x, double* y) const {
    for (std::size_t k = 0; k < n_; ++k) {
        if (conductor_[k]) {
            y[k] = c[dir_[k]][offset_[k]].real();
        } else {
            y[k] = sign_[k] * d[dir_[k]][offset_[k]].real() + jump_[k] * x[k];
        }
    }
}

namespace {
void accumulate(ComplexTensor& acc, const ComplexTensor& k, const ComplexTensor& q) {
    const std::size_t n = acc.size();
    cplx* a = acc.data();
    const cplx* kk = k.data();
    const cplx* qq = q.data();
    for (std::size_t i = 0; i < n; ++i) a[i] += kk[i] * qq[i];
}
void accumulate_conj(ComplexTensor& acc, const ComplexTensor& k, const ComplexTensor& q) {
    const std::size_t n = acc.size();
    cplx* a = acc.data();
    const cplx* kk = k.data();
    const cplx* qq = q.data();
    for (std::size_t i = 0; i < n; ++i) a[i] += std::conj(kk[i]) * qq[i];
}
}  // namespace

void FftOperator::apply(const double* x, double* y) const {
    auto q = scatter(x);
    for (int b = 0; b < 3; ++b) {
        fft3_forward(q[b]);
        ++fwd_;
    }
    std::array<ComplexTensor, 3> c, d;
    for (int a = 0; a < 3; ++a) {
        c[a] = ComplexTensor(dims_);
        d[a] = ComplexTensor(dims_);
    }
    ComplexTensor scratch;
    for (int s = 0; s < 6; ++s) {
        const int a = idx(kPotentialPairs[s].test), b = idx(kPotentialPairs[s].source);
        const ComplexTensor& k = kernels_->potential(s, scratch);
        accumulate(c[a], k, q[b]);
        // transposed pair through the conjugate, never stored
        if (a != b) accumulate_conj(c[b], k, q[a]);
    }
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) accumulate(d[a], kernels_->field(field_slot(kAxes[a], kAxes[b]), scratch), q[b]);
    for (int a = 0; a < 3; ++a) {
        fft3_inverse(c[a]);
        fft3_inverse(d[a]);
        inv_ += 2;
    }
    gather(c, d, x, y);
    ++mvms_;
}

}  // namespace voxsie
