#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "voxsie/fft_engine.hpp"
#include "voxsie/geometry.hpp"
#include "voxsie/preconditioner.hpp"

namespace voxsie {

using LinearOp = std::function<void(const double*, double*)>;

struct GmresConfig {
    int restart = 35;
    double rre = 1e-4;
    int max_iterations = 1000;
};

struct GmresResult {
    std::vector<double> x;
    int iterations = 0;
    bool converged = false;
    std::vector<double> rre_history;  // preconditioned, one entry per iteration
    double final_rre = 1.0;           // recomputed preconditioned residual
};

// Left-preconditioned restarted GMRES (modified Gram-Schmidt with a second
// pass when the new vector loses more than ~30% of its norm).
GmresResult gmres_solve(const std::vector<double>& b, const LinearOp& a, const LinearOp& m,
                        const GmresConfig& cfg, std::size_t n);

struct SolverConfig {
    int restart = 35;
    double rre = 1e-4;
    int max_iterations = 1000;
    PreconditionerMode preconditioner = PreconditionerMode::Hybrid;
    Index3 box_dims{10, 10, 10};
    double tucker_tol = 1e-8;  // 0 keeps the circulants uncompressed
    KernelOptions kernel;
    std::string cache_dir;  // empty: generate kernels directly
};

struct StageTime {
    std::string name;
    double seconds = 0.0;
};

struct Telemetry {
    std::vector<StageTime> stages;
    std::size_t panels = 0, conductor_panels = 0, dielectric_panels = 0;
    Dims3 domain;
    std::string kernel_source;  // "cache" or "direct"
    std::size_t toeplitz_bytes = 0;
    std::size_t circulant_bytes = 0;             // before Tucker
    std::size_t circulant_compressed_bytes = 0;  // after (== before when off)
    double compression_ratio = 1.0;
    double overhead = 0.0;  // restore / convolution time for one tensor
    double tucker_error = 0.0;
    std::size_t preconditioner_bytes = 0, preconditioner_full_bytes = 0;
    std::size_t boxes = 0, unique_blocks = 0;
    std::vector<int> iterations;
    std::vector<bool> converged;
    std::vector<double> rre, true_rre;
    std::vector<double> solve_seconds;
    long forward_ffts = 0, inverse_ffts = 0, mvms = 0;
    std::vector<std::string> warnings;
};

// Everything the solves share: panels, kernels, operator, preconditioner.
struct System {
    VoxelGrid grid;
    PanelSet panels;
    ToeplitzKernelSet toeplitz;  // at the structure voxel size
    std::shared_ptr<const CirculantStore> circulants;
    std::unique_ptr<FftOperator> op;
    Preconditioner precond;
    Telemetry telemetry;
};

System build_system(const StructureDescription& s, const SolverConfig& cfg);

struct ExtractionResult {
    std::vector<int> conductor_ids;
    Eigen::MatrixXd capacitance;          // farads
    std::vector<std::vector<double>> charges;  // per excitation: solved densities (all panels)
    std::vector<std::vector<double>> free_charges;  // conductor panels scaled by adjacent eps_r
    std::vector<bool> failed;
    Telemetry telemetry;
};

// unit potential on each conductor in turn; C = V^T rho_c with free-charge scaling
ExtractionResult extract_capacitance(const StructureDescription& s, const SolverConfig& cfg);
ExtractionResult extract_capacitance(System& sys, const SolverConfig& cfg);

std::vector<double> excitation(const PanelSet& ps, std::size_t conductor_slot);

// scale conductor densities by their adjacent eps_r and sum A_k rho_k
Eigen::MatrixXd capacitance_from_charges(const PanelSet& ps,
                                         const std::vector<std::vector<double>>& rho);

struct DenseResult {
    Eigen::MatrixXd matrix;
    Eigen::MatrixXd capacitance;
    std::vector<std::vector<double>> charges;
};

inline constexpr std::size_t kDenseOracleLimit = 3000;

// Full system from the kernel module, solved with LU.
DenseResult dense_oracle(const StructureDescription& s, const KernelOptions& opt = {},
                         std::size_t limit = kDenseOracleLimit);
Eigen::MatrixXd assemble_dense(const PanelSet& ps, const KernelOptions& opt = {},
                               std::size_t limit = kDenseOracleLimit);

// 4 pi eps0 eps_r r_d r_c / ((r_d - r_c) + eps_r r_c)
double coated_sphere_capacitance(double r_c, double r_d, double eps_r);

}  // namespace voxsie
