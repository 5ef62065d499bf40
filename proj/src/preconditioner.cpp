#include "voxsie/preconditioner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "voxsie/kernel.hpp"

namespace voxsie {

PreconditionerMode parse_preconditioner(const std::string& s) {
    if (s == "hybrid") return PreconditionerMode::Hybrid;
    if (s == "block" || s == "block-diagonal") return PreconditionerMode::BlockDiagonal;
    if (s == "diagonal" || s == "diag") return PreconditionerMode::Diagonal;
    if (s == "none") return PreconditionerMode::None;
    throw InputError("unknown preconditioner '" + s + "' (hybrid|block|diagonal|none)");
}

std::string to_string(PreconditionerMode m) {
    switch (m) {
        case PreconditionerMode::Hybrid: return "hybrid";
        case PreconditionerMode::BlockDiagonal: return "block";
        case PreconditionerMode::Diagonal: return "diagonal";
        case PreconditionerMode::None: return "none";
    }
    return "?";
}

BoxPartition partition_boxes(const PanelSet& ps, Index3 box_dims) {
    BoxPartition bp;
    for (int q = 0; q < 3; ++q) {
        if (box_dims[q] < 1) throw InputError("box dimensions must be at least 1");
        bp.box_dims[q] = box_dims[q];
        bp.counts[q] = (ps.domain[q] + box_dims[q] - 1) / box_dims[q];
    }
    const std::size_t nb = static_cast<std::size_t>(bp.counts[0]) * bp.counts[1] * bp.counts[2];
    bp.members.assign(nb, {});
    bp.base.resize(nb);
    for (int i = 0; i < bp.counts[0]; ++i)
        for (int j = 0; j < bp.counts[1]; ++j)
            for (int k = 0; k < bp.counts[2]; ++k)
                bp.base[(static_cast<std::size_t>(i) * bp.counts[1] + j) * bp.counts[2] + k] = {
                    i * box_dims[0], j * box_dims[1], k * box_dims[2]};
    for (std::size_t p = 0; p < ps.size(); ++p) {
        Index3 b;
        for (int q = 0; q < 3; ++q) b[q] = std::min(ps.panels[p].slot[q] / box_dims[q], bp.counts[q] - 1);
        bp.members[(static_cast<std::size_t>(b[0]) * bp.counts[1] + b[1]) * bp.counts[2] + b[2]].push_back(p);
    }
    return bp;
}

double system_entry(const PanelSet& ps, const ToeplitzKernelSet& kern, std::size_t k, std::size_t l) {
    const Panel& a = ps.panels[k];
    const Panel& b = ps.panels[l];
    if (a.kind == PanelKind::Conductor) return kern.potential_value(a.dir, a.slot, b.dir, b.slot);
    double v = a.sign * kern.field_value(a.dir, a.slot, b.dir, b.slot);
    if (k == l) v += diagonal_entry({ps.voxel_size * ps.voxel_size, a.eps_in, a.eps_out});
    return v;
}

namespace {

using Signature = std::vector<std::tuple<int, int, int, int, int, int, double, double>>;

Signature signature_of(const PanelSet& ps, const std::vector<std::size_t>& rows, const Index3& base) {
    Signature s;
    s.reserve(rows.size());
    for (std::size_t k : rows) {
        const Panel& p = ps.panels[k];
        s.emplace_back(p.slot[0] - base[0], p.slot[1] - base[1], p.slot[2] - base[2], idx(p.dir),
                       p.sign, static_cast<int>(p.kind), p.eps_in, p.eps_out);
    }
    return s;
}

}  // namespace

Preconditioner::Preconditioner(const PanelSet& ps, const ToeplitzKernelSet& kern,
                               PreconditionerMode mode, Index3 box_dims)
    : n_(ps.size()), mode_(mode) {
    if (!(kern.domain == ps.domain)) throw ContractViolation("preconditioner: kernel domain mismatch");
    diag_inv_.assign(n_, 1.0);
    in_block_.assign(n_, false);
    if (mode == PreconditionerMode::None) return;

    if (mode == PreconditionerMode::Diagonal) {
        for (std::size_t k = 0; k < n_; ++k) diag_inv_[k] = 1.0 / system_entry(ps, kern, k, k);
        return;
    }
    const BoxPartition bp = partition_boxes(ps, box_dims);
    box_count_ = bp.members.size();
    box_block_.assign(box_count_, -1);
    members_.resize(box_count_);
    std::map<Signature, long> seen;
    for (std::size_t b = 0; b < box_count_; ++b) {
        std::vector<std::size_t> rows;
        for (std::size_t k : bp.members[b])
            if (mode == PreconditionerMode::BlockDiagonal || ps.panels[k].kind == PanelKind::Conductor)
                rows.push_back(k);
        if (rows.empty()) continue;
        members_[b] = rows;
        for (std::size_t k : rows) in_block_[k] = true;
        full_bytes_ += rows.size() * rows.size() * sizeof(double);
        Signature sig = signature_of(ps, rows, bp.base[b]);
        auto it = seen.find(sig);
        if (it != seen.end()) {
            box_block_[b] = it->second;
            continue;
        }
        const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
        Eigen::MatrixXd a(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) a(i, j) = system_entry(ps, kern, rows[i], rows[j]);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
        Eigen::MatrixXd inv = lu.inverse();
        const double res =
            (a * inv - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
        const Index3& o = bp.base[b];
        if (!std::isfinite(res) || res > 1e-10)
            throw SolverError("preconditioner block of box at voxel (" + std::to_string(o[0]) + "," +
                              std::to_string(o[1]) + "," + std::to_string(o[2]) +
                              ") is singular or ill-conditioned (residual " + std::to_string(res) + ")");
        worst_residual_ = std::max(worst_residual_, res);
        const long id = static_cast<long>(blocks_.size());
        blocks_.push_back(std::move(inv));
        seen.emplace(std::move(sig), id);
        box_block_[b] = id;
    }
    for (std::size_t k = 0; k < n_; ++k) {
        if (in_block_[k]) continue;
        // Hybrid: dielectric rows use the inverse jump diagonal
        const Panel& p = ps.panels[k];
        if (p.kind == PanelKind::Dielectric)
            diag_inv_[k] = 1.0 / diagonal_entry({ps.voxel_size * ps.voxel_size, p.eps_in, p.eps_out});
        else
            diag_inv_[k] = 1.0 / system_entry(ps, kern, k, k);
    }
}

std::size_t Preconditioner::block_bytes() const {
    std::size_t b = 0;
    for (const auto& m : blocks_) b += static_cast<std::size_t>(m.size()) * sizeof(double);
    return b;
}

void Preconditioner::apply(const double* r, double* z) const {
    for (std::size_t k = 0; k < n_; ++k)
        if (!in_block_[k]) z[k] = diag_inv_[k] * r[k];
    Eigen::VectorXd in, out;
    for (std::size_t b = 0; b < box_block_.size(); ++b) {
        if (box_block_[b] < 0) continue;
        const auto& rows = members_[b];
        const Eigen::MatrixXd& inv = blocks_[box_block_[b]];
        in.resize(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) in[i] = r[rows[i]];
        out.noalias() = inv * in;
        for (std::size_t i = 0; i < rows.size(); ++i) z[rows[i]] = out[i];
    }
}

}  // namespace voxsie
