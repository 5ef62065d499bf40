#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "voxsie/kernel.hpp"

using namespace voxsie;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

KernelOptions exact() {
    KernelOptions o;
    o.near_threshold = 1e9;
    return o;
}

PanelRect at(Axis n, double x, double y, double z, double dv = 1.0) {
    return rect_from_center(n, {x, y, z}, dv);
}

}  // namespace

TEST_CASE("kernel: potential closed forms against quadrature") {
    const PanelRect cases[][2] = {
        {at(Axis::Z, 0, 0, 0), at(Axis::Z, 0, 0, 0)},          // self
        {at(Axis::Z, 0, 0, 0), at(Axis::Z, 1, 0, 0)},          // shared edge
        {at(Axis::Z, 0, 0, 0), at(Axis::Z, 1, 1, 0)},          // shared corner
        {at(Axis::Z, 0, 0, 0), at(Axis::Z, 0.3, -0.7, 1.5)},   // stacked
        {at(Axis::Z, 0, 0, 0.5), at(Axis::Y, 0, 0.5, 0)},      // orthogonal edge
        {at(Axis::Z, 0, 0, 0.5), at(Axis::X, 0.5, 1, 0)},      // orthogonal corner
        {at(Axis::X, 0, 0, 0), at(Axis::Z, 2.1, -0.4, 1.3)},   // orthogonal apart
    };
    for (const auto& c : cases) {
        const double ref = oracle::potential(c[0], c[1], 1e-12);
        CHECK(rel(potential_integral(c[0], c[1], exact()), ref) < 1e-9);
        // reciprocity
        CHECK(rel(potential_integral(c[1], c[0], exact()), ref) < 1e-12);
    }
    // self term of a unit square: 4 ln(1+sqrt2)... / (4 pi eps0) scaled form
    const double self = potential_integral(at(Axis::Z, 0, 0, 0), at(Axis::Z, 0, 0, 0));
    const double f = (4.0 * std::log(1.0 + std::sqrt(2.0)) - 4.0 / 3.0 * (std::sqrt(2.0) - 1.0)) / (4 * kPi * kEps0);
    CHECK(rel(self, f) < 1e-13);
}

TEST_CASE("kernel: 200 random pairs, potential 1e-8, field 1e-4") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    int done = 0;
    while (done < 200) {
        const Axis a = kAxes[rng() % 3], b = kAxes[rng() % 3];
        const PanelRect t = at(a, u(rng), u(rng), u(rng));
        const PanelRect s = at(b, u(rng), u(rng), u(rng));
        double gap = 0.0;
        for (int k = 0; k < 3; ++k) gap = std::max(gap, std::max(s.lo[k] - t.hi[k], t.lo[k] - s.hi[k]));
        if (gap < 0.2) continue;
        ++done;
        CHECK(rel(potential_integral(t, s, exact()), oracle::potential(t, s, 1e-12)) < 1e-8);
        const double e = efield_integral(t, s, exact());
        const double ref = oracle::efield_fd(t, s, 1e-4, 1e-12);
        CHECK(std::abs(e - ref) <= 1e-4 * std::abs(ref) + 1e-12 * std::abs(potential_integral(t, s)));
    }
}

TEST_CASE("kernel: touching and coplanar pairs stay finite") {
    const PanelRect t = at(Axis::Z, 0, 0, 0);
    const PanelRect touching[] = {at(Axis::Z, 1, 0, 0), at(Axis::Z, 1, 1, 0), at(Axis::Z, 3, 0, 0),
                                  at(Axis::Y, 0, 0.5, 0.5), at(Axis::Y, 0, 0.5, -0.5), at(Axis::X, 0.5, 0, 0.5),
                                  at(Axis::X, 1.5, 0, 0.5), at(Axis::Y, 0.3, 0.5, -0.5)};
    for (const auto& s : touching) {
        CHECK(std::isfinite(efield_integral(t, s, exact())));
        CHECK(std::isfinite(potential_integral(t, s, exact())));
    }
    // coplanar parallel panels: no normal field by symmetry
    CHECK(std::abs(efield_integral(t, at(Axis::Z, 1, 0, 0), exact())) < 1e-6 / (4 * kPi * kEps0));
    // orthogonal edge pair: one-sided difference away from the source plane
    const PanelRect s = at(Axis::Y, 0, 0.5, 0.5);
    const double h = 1e-5;
    PanelRect up = t;
    up.lo[2] += h;
    up.hi[2] += h;
    PanelRect up2 = t;
    up2.lo[2] += 2 * h;
    up2.hi[2] += 2 * h;
    PanelRect down = t;  // construct the forward three-point stencil
    const double fd = (-3 * oracle::potential(down, s, 1e-12) + 4 * oracle::potential(up, s, 1e-12) -
                       oracle::potential(up2, s, 1e-12)) / (2 * h);
    CHECK(rel(efield_integral(t, s, exact()), fd) < 1e-3);
    CHECK(efield_integral(t, t) == 0.0);
}

TEST_CASE("kernel: far-field rule matches closed forms beyond the threshold") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-8, 8);
    for (int i = 0; i < 50; ++i) {
        const PanelRect t = at(kAxes[i % 3], 0, 0, 0), s = at(kAxes[(i / 3) % 3], u(rng), u(rng), u(rng));
        double d = 0.0;
        for (int k = 0; k < 3; ++k) d += std::pow(0.5 * (s.lo[k] + s.hi[k]), 2);
        if (std::sqrt(d) <= 5.0) continue;
        CHECK(rel(potential_integral(t, s), potential_integral(t, s, exact())) < 1e-9);
        const double ex = efield_integral(t, s, exact());
        CHECK(std::abs(efield_integral(t, s) - ex) < 1e-8 * std::abs(potential_integral(t, s)) + 1e-8 * std::abs(ex));
    }
}

TEST_CASE("kernel: far field against Gauss oracle") {
    const PanelRect t = at(Axis::Z, 0, 0, 0);
    const PanelRect s[] = {at(Axis::Z, 4, 3, 2), at(Axis::X, -3.5, 2, 4), at(Axis::Y, 1, -6, -2)};
    for (const auto& p : s) CHECK(rel(efield_integral(t, p, exact()), oracle::efield_gauss(t, p, 8)) < 1e-9);
}

TEST_CASE("kernel: dielectric diagonal entry") {
    const double v = diagonal_entry({2.0, 4.0, 1.0});
    CHECK(rel(v, 2.0 * 5.0 / (2 * kEps0 * 3.0)) < 1e-15);
    CHECK(diagonal_entry({1.0, 1.0, 4.0}) < 0.0);
    CHECK_THROWS_AS(diagonal_entry({1.0, 2.0, 2.0}), ContractViolation);
    CHECK_THROWS_AS(diagonal_entry({1.0, -2.0, 2.0}), ContractViolation);
}

TEST_CASE("kernel: scaling with voxel size") {
    const double dv = 0.37;
    const PanelRect t1 = at(Axis::Z, 0, 0, 0), s1 = at(Axis::Y, 0.5, 1.5, 0.5);
    const PanelRect t2 = at(Axis::Z, 0, 0, 0, dv), s2 = at(Axis::Y, 0.5 * dv, 1.5 * dv, 0.5 * dv, dv);
    CHECK(rel(potential_integral(t2, s2), std::pow(dv, 3) * potential_integral(t1, s1)) < 1e-12);
    CHECK(rel(efield_integral(t2, s2), dv * dv * efield_integral(t1, s1)) < 1e-12);
}
