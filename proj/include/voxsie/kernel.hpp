#pragma once

#include "voxsie/common.hpp"
#include "voxsie/geometry.hpp"

namespace voxsie {

struct KernelOptions {
    // closed forms when the centre distance is at most this many panel sizes
    double near_threshold = 5.0;
    // Gauss-Legendre points per panel axis beyond the threshold
    int far_order = 4;
};

enum class PairConfig { Identical, Parallel, Orthogonal };

PairConfig classify(const PanelRect& test, const PanelRect& src);

// Canonical frame for parallel panels: both normal to z, panel 1 is the
// testing (observer) panel.
struct ParallelPairGeometry {
    double xs1, xe1, ys1, ye1, z1;
    double xs2, xe2, ys2, ye2, z2;
};

// Canonical frame for orthogonal panels: testing panel normal to z spanning
// x and y at z1, source panel normal to y spanning x and z at y2.
struct OrthogonalPairGeometry {
    double xs1, xe1, ys1, ye1, z1;
    double xs2, xe2, zs2, ze2, y2;
};

ParallelPairGeometry to_parallel(const PanelRect& test, const PanelRect& src);
OrthogonalPairGeometry to_orthogonal(const PanelRect& test,
                                     const PanelRect& src);

// ∫∫ G dS' dS, G = 1/(4 pi eps0 r), exact closed forms.
double potential_parallel(const ParallelPairGeometry& g);
double potential_orthogonal(const OrthogonalPairGeometry& g);

// Derivative of the potential integral with respect to the testing panel's
// position along its normal axis (+z in the canonical frame).
double efield_integral_parallel(const ParallelPairGeometry& g);
double efield_integral_orthogonal(const OrthogonalPairGeometry& g);

// Dispatching versions: closed form near, Gauss product rule far.
double potential_integral(const PanelRect& test, const PanelRect& src,
                          const KernelOptions& opt = {});
// Derivative along +normal axis of the testing panel. Identical panels give 0:
// the self term lives in diagonal_entry.
double efield_integral(const PanelRect& test, const PanelRect& src,
                       const KernelOptions& opt = {});

struct DielectricJump {
    double area;
    double eps_d;  // relative permittivity, dielectric side
    double eps_b;  // relative permittivity, the side the normal points to
};

// A (eps_d + eps_b) / (2 eps0 (eps_d - eps_b))
double diagonal_entry(const DielectricJump& jump);

}  // namespace voxsie
