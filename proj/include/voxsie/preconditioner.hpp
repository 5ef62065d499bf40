#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "voxsie/geometry.hpp"
#include "voxsie/toeplitz.hpp"

namespace voxsie {

enum class PreconditionerMode {
    Hybrid,         // conductor panels per box, inverse jump diagonal on dielectric rows
    BlockDiagonal,  // all panels of a box in its block
    Diagonal,       // inverse of the matrix diagonal
    None
};

PreconditionerMode parse_preconditioner(const std::string& s);
std::string to_string(PreconditionerMode m);

struct BoxPartition {
    Index3 box_dims{10, 10, 10};
    Index3 counts{1, 1, 1};
    std::vector<std::vector<std::size_t>> members;  // per box, ascending panel index
    std::vector<Index3> base;                       // lowest voxel of each box
};

// Panels go to box floor(slot / box_dims) per axis; the nodes on the far
// face of the domain fall into the last box.
BoxPartition partition_boxes(const PanelSet& ps, Index3 box_dims);

class Preconditioner {
public:
    Preconditioner() = default;
    // `kernels` must cover the panel domain at the panel voxel size.
    Preconditioner(const PanelSet& ps, const ToeplitzKernelSet& kernels, PreconditionerMode mode,
                   Index3 box_dims = {10, 10, 10});

    void apply(const double* r, double* z) const;
    void apply(const std::vector<double>& r, std::vector<double>& z) const {
        z.resize(n_);
        apply(r.data(), z.data());
    }

    PreconditionerMode mode() const { return mode_; }
    std::size_t box_count() const { return box_count_; }
    std::size_t unique_blocks() const { return blocks_.size(); }
    std::size_t block_bytes() const;       // stored, deduplicated
    std::size_t undeduplicated_bytes() const { return full_bytes_; }
    const Eigen::MatrixXd& block(std::size_t u) const { return blocks_[u]; }
    // per box: unique block id (or -1) and its panel list
    const std::vector<long>& box_block() const { return box_block_; }
    const std::vector<std::vector<std::size_t>>& box_members() const { return members_; }
    double worst_inverse_residual() const { return worst_residual_; }

private:
    std::size_t n_ = 0;
    PreconditionerMode mode_ = PreconditionerMode::None;
    std::size_t box_count_ = 0;
    std::vector<Eigen::MatrixXd> blocks_;
    std::vector<long> box_block_;
    std::vector<std::vector<std::size_t>> members_;
    std::vector<double> diag_inv_;  // rows outside blocks (1 for None)
    std::vector<bool> in_block_;
    std::size_t full_bytes_ = 0;
    double worst_residual_ = 0.0;
};

// Entry (k, l) of the system matrix from Toeplitz lookups.
double system_entry(const PanelSet& ps, const ToeplitzKernelSet& kernels, std::size_t k,
                    std::size_t l);

}  // namespace voxsie
