#include "voxsie/kernel.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <vector>

namespace voxsie {

namespace {

constexpr double kInv4PiEps0 = 1.0 / (4.0 * kPi * kEps0);

// a + r with r = sqrt(a^2 + rest), without cancellation for a < 0
inline double plus_r(double a, double r, double rest) {
    return a >= 0.0 ? a + r : rest / (r - a);
}

// log(a + r); -inf only when a + r is exactly 0
inline double log_plus_r(double a, double r, double rest) {
    return std::log(plus_r(a, r, rest));
}

// Fourfold antiderivative of 1/r over two parallel rectangles.
double prim_parallel(double a, double b, double z) {
    const double a2 = a * a, b2 = b * b, z2 = z * z;
    const double r = std::sqrt(a2 + b2 + z2);
    if (r == 0.0) return 0.0;
    double f = -r * (a2 + b2 - 2.0 * z2) / 6.0;
    if (b != 0.0 && a2 != z2) f += 0.5 * (a2 - z2) * b * log_plus_r(b, r, a2 + z2);
    if (a != 0.0 && b2 != z2) f += 0.5 * (b2 - z2) * a * log_plus_r(a, r, b2 + z2);
    if (a != 0.0 && b != 0.0 && z != 0.0) f -= a * b * z * std::atan(a * b / (z * r));
    return f;
}

// z-derivative of prim_parallel (regularized as in the printed closed form)
double dprim_parallel(double a, double b, double z) {
    const double a2 = a * a, b2 = b * b, z2 = z * z;
    const double r = std::sqrt(a2 + b2 + z2);
    double f = 2.0 * z * r / 3.0 - z * (a2 + b2 - 2.0 * z2) / (6.0 * r);
    if (a != 0.0) {
        const double ar = plus_r(a, r, b2 + z2);
        f += 0.5 * a * z * (b2 - z2) / (ar * r + kEpsReg);
        f -= a * z * std::log(ar + kEpsReg);
    }
    if (b != 0.0) {
        const double br = plus_r(b, r, a2 + z2);
        f += 0.5 * b * z * (a2 - z2) / (br * r + kEpsReg);
        f -= b * z * std::log(br + kEpsReg);
    }
    if (a != 0.0 && b != 0.0) {
        const double ab = a * b;
        f -= ab * std::atan(ab / (z * r));
        f += ab * ab * z * (z2 + r * r) / (r * (ab * ab + z2 * r * r));
    }
    return f;
}

// Antiderivative of 1/r for orthogonal rectangles sharing the x direction:
// d^4/(da^2 db dc) prim_orthogonal = 1/sqrt(a^2 + b^2 + c^2).
double prim_orthogonal(double a, double b, double c) {
    const double a2 = a * a, b2 = b * b, c2 = c * c;
    const double r = std::sqrt(a2 + b2 + c2);
    if (r == 0.0) return 0.0;
    double f = -b * c * r / 3.0;
    if (a != 0.0 && b != 0.0 && c != 0.0) f += a * b * c * log_plus_r(a, r, b2 + c2);
    const double cb = c * (0.5 * a2 - c2 / 6.0);
    if (cb != 0.0) f += cb * log_plus_r(b, r, a2 + c2);
    const double bc = b * (0.5 * a2 - b2 / 6.0);
    if (bc != 0.0) f += bc * log_plus_r(c, r, a2 + b2);
    if (a != 0.0 && b != 0.0 && c != 0.0) {
        f -= a2 * a / 6.0 * std::atan(b * c / (a * r));
        f -= 0.5 * a * b2 * std::atan(a * c / (b * r));
        f -= 0.5 * a * c2 * std::atan(a * b / (c * r));
    }
    return f;
}

// c-derivative of prim_orthogonal, term by term as in the printed closed form
// (with the 6 r denominator of the first term).
double dprim_orthogonal(double a, double b, double c) {
    const double a2 = a * a, b2 = b * b, c2 = c * c;
    const double r2 = a2 + b2 + c2;
    const double r = std::sqrt(r2);
    if (r == 0.0) return 0.0;
    double f = b * (3.0 * a2 - b2) / (6.0 * r);
    const double br = plus_r(b, r, a2 + c2) + kEpsReg;
    f += (3.0 * a2 * c2 - c2 * c2) / (6.0 * r * br);
    if (a2 != c2) f += 0.5 * (a2 - c2) * std::log(br) * (r2 + b * r) / (r * br);
    if (a != 0.0 && b != 0.0) {
        const double ar = plus_r(a, r, b2 + c2);
        f += a * b * c2 / (r * ar);
        f += a * b * std::log(ar + kEpsReg);
        f -= a2 * a2 * b / (6.0 * r * (a2 + c2));
        f -= a2 * b2 * b / (2.0 * r * (b2 + c2));
    }
    f -= b * (r2 + c2) / (3.0 * r);
    if (a != 0.0 && c != 0.0) {
        double t = 0.0;
        if (b != 0.0) t = a * b * c * (r2 + c2) / (r * (a2 + c2) * (b2 + c2));
        t -= 2.0 * std::atan(a * b / (c * r) + kEpsReg);
        f += 0.5 * a * c * t;
    }
    return f;
}

struct Corners {
    double v[4];
};

// alternating-sum corner offsets of the two intervals (s1, e1), (s2, e2)
inline Corners shared_axis(double s1, double e1, double s2, double e2) {
    return {{s2 - e1, e2 - e1, e2 - s1, s2 - s1}};
}

inline int other(int n, int k) { return (n + k) % 3; }

struct GaussRule {
    std::vector<double> x, w;  // on [-1, 1]
};

template <int N>
GaussRule make_rule() {
    using Q = boost::math::quadrature::gauss<double, N>;
    GaussRule g;
    const auto& ab = Q::abscissa();
    const auto& wt = Q::weights();
    for (std::size_t i = 0; i < ab.size(); ++i) {
        if (ab[i] == 0.0) {
            g.x.push_back(0.0);
            g.w.push_back(wt[i]);
        } else {
            g.x.push_back(ab[i]);
            g.w.push_back(wt[i]);
            g.x.push_back(-ab[i]);
            g.w.push_back(wt[i]);
        }
    }
    return g;
}

const GaussRule& gauss_rule(int n) {
    static const GaussRule r2 = make_rule<2>(), r3 = make_rule<3>(),
                           r4 = make_rule<4>(), r5 = make_rule<5>(),
                           r6 = make_rule<6>(), r8 = make_rule<8>(),
                           r10 = make_rule<10>(), r16 = make_rule<16>();
    if (n <= 2) return r2;
    if (n == 3) return r3;
    if (n == 4) return r4;
    if (n == 5) return r5;
    if (n == 6) return r6;
    if (n <= 8) return r8;
    if (n <= 10) return r10;
    return r16;
}

struct PanelPoints {
    std::vector<Vec3> p;
    std::vector<double> w;
};

PanelPoints panel_points(const PanelRect& rc, const GaussRule& g) {
    const int n = idx(rc.normal);
    const int t1 = other(n, 1), t2 = other(n, 2);
    const double c1 = 0.5 * (rc.lo[t1] + rc.hi[t1]), h1 = 0.5 * (rc.hi[t1] - rc.lo[t1]);
    const double c2 = 0.5 * (rc.lo[t2] + rc.hi[t2]), h2 = 0.5 * (rc.hi[t2] - rc.lo[t2]);
    PanelPoints pts;
    for (std::size_t i = 0; i < g.x.size(); ++i)
        for (std::size_t j = 0; j < g.x.size(); ++j) {
            Vec3 q{};
            q[n] = rc.lo[n];
            q[t1] = c1 + h1 * g.x[i];
            q[t2] = c2 + h2 * g.x[j];
            pts.p.push_back(q);
            pts.w.push_back(g.w[i] * g.w[j] * h1 * h2);
        }
    return pts;
}

double far_potential(const PanelRect& t, const PanelRect& s, int order) {
    const auto& g = gauss_rule(order);
    const auto pt = panel_points(t, g), ps = panel_points(s, g);
    double sum = 0.0;
    for (std::size_t i = 0; i < pt.p.size(); ++i) {
        double inner = 0.0;
        for (std::size_t j = 0; j < ps.p.size(); ++j) {
            const double dx = pt.p[i][0] - ps.p[j][0];
            const double dy = pt.p[i][1] - ps.p[j][1];
            const double dz = pt.p[i][2] - ps.p[j][2];
            inner += ps.w[j] / std::sqrt(dx * dx + dy * dy + dz * dz);
        }
        sum += pt.w[i] * inner;
    }
    return kInv4PiEps0 * sum;
}

double far_field(const PanelRect& t, const PanelRect& s, int order) {
    const auto& g = gauss_rule(order);
    const auto pt = panel_points(t, g), ps = panel_points(s, g);
    const int n = idx(t.normal);
    double sum = 0.0;
    for (std::size_t i = 0; i < pt.p.size(); ++i) {
        double inner = 0.0;
        for (std::size_t j = 0; j < ps.p.size(); ++j) {
            const double d[3] = {pt.p[i][0] - ps.p[j][0], pt.p[i][1] - ps.p[j][1],
                                 pt.p[i][2] - ps.p[j][2]};
            const double r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
            inner -= ps.w[j] * d[n] / (r2 * std::sqrt(r2));
        }
        sum += pt.w[i] * inner;
    }
    return kInv4PiEps0 * sum;
}

double size_of(const PanelRect& r) {
    double h = 0.0;
    for (int k = 0; k < 3; ++k) h = std::max(h, r.hi[k] - r.lo[k]);
    return h;
}

double center_distance(const PanelRect& a, const PanelRect& b) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double d = 0.5 * (a.lo[k] + a.hi[k] - b.lo[k] - b.hi[k]);
        s += d * d;
    }
    return std::sqrt(s);
}

bool is_far(const PanelRect& t, const PanelRect& s, const KernelOptions& opt) {
    const double h = std::max(size_of(t), size_of(s));
    return center_distance(t, s) > opt.near_threshold * h;
}

}  // namespace

PairConfig classify(const PanelRect& test, const PanelRect& src) {
    if (test.normal != src.normal) return PairConfig::Orthogonal;
    if (test.lo == src.lo && test.hi == src.hi) return PairConfig::Identical;
    return PairConfig::Parallel;
}

ParallelPairGeometry to_parallel(const PanelRect& t, const PanelRect& s) {
    if (t.normal != s.normal) throw ContractViolation("to_parallel: panels not parallel");
    const int n = idx(t.normal), u = other(n, 1), v = other(n, 2);
    return {t.lo[u], t.hi[u], t.lo[v], t.hi[v], t.lo[n],
            s.lo[u], s.hi[u], s.lo[v], s.hi[v], s.lo[n]};
}

OrthogonalPairGeometry to_orthogonal(const PanelRect& t, const PanelRect& s) {
    if (t.normal == s.normal) throw ContractViolation("to_orthogonal: panels parallel");
    const int za = idx(t.normal), yb = idx(s.normal), xg = 3 - za - yb;
    return {t.lo[xg], t.hi[xg], t.lo[yb], t.hi[yb], t.lo[za],
            s.lo[xg], s.hi[xg], s.lo[za], s.hi[za], s.lo[yb]};
}

double potential_parallel(const ParallelPairGeometry& g) {
    const Corners a = shared_axis(g.xs1, g.xe1, g.xs2, g.xe2);
    const Corners b = shared_axis(g.ys1, g.ye1, g.ys2, g.ye2);
    const double z = g.z2 - g.z1;
    double sum = 0.0;
    for (int k = 0; k < 4; ++k)
        for (int m = 0; m < 4; ++m) {
            const double s = ((k + m) % 2 == 0) ? 1.0 : -1.0;
            sum += s * prim_parallel(a.v[k], b.v[m], z);
        }
    return kInv4PiEps0 * sum;
}

double efield_integral_parallel(const ParallelPairGeometry& g) {
    const Corners a = shared_axis(g.xs1, g.xe1, g.xs2, g.xe2);
    const Corners b = shared_axis(g.ys1, g.ye1, g.ys2, g.ye2);
    const double z = g.z2 - g.z1 + kEpsReg;
    double sum = 0.0;
    for (int k = 0; k < 4; ++k)
        for (int m = 0; m < 4; ++m) {
            const double s = ((k + m) % 2 == 0) ? 1.0 : -1.0;
            sum += s * dprim_parallel(a.v[k], b.v[m], z);
        }
    // the bracket is d/dz of the antiderivative with z = z2 - z1
    return -kInv4PiEps0 * sum;
}

namespace {
struct OrthoCorners {
    Corners a;
    double b[2], c[2];
};

OrthoCorners ortho_corners(const OrthogonalPairGeometry& g) {
    OrthoCorners k;
    k.a = shared_axis(g.xs1, g.xe1, g.xs2, g.xe2);
    k.b[0] = g.y2 - g.ys1;
    k.b[1] = g.y2 - g.ye1;
    k.c[0] = g.ze2 - g.z1;
    k.c[1] = g.zs2 - g.z1;
    return k;
}
}  // namespace

double potential_orthogonal(const OrthogonalPairGeometry& g) {
    const OrthoCorners k = ortho_corners(g);
    double sum = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int m = 0; m < 2; ++m)
            for (int l = 0; l < 2; ++l) {
                const double s = ((i + m + l) % 2 == 0) ? 1.0 : -1.0;
                sum += s * prim_orthogonal(k.a.v[i], k.b[m], k.c[l]);
            }
    return kInv4PiEps0 * sum;
}

double efield_integral_orthogonal(const OrthogonalPairGeometry& g) {
    const OrthoCorners k = ortho_corners(g);
    double sum = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int m = 0; m < 2; ++m)
            for (int l = 0; l < 2; ++l) {
                const double s = ((i + m + l) % 2 == 0) ? 1.0 : -1.0;
                sum += s * dprim_orthogonal(k.a.v[i], k.b[m], k.c[l]);
            }
    return -kInv4PiEps0 * sum;
}

double potential_integral(const PanelRect& test, const PanelRect& src,
                          const KernelOptions& opt) {
    if (is_far(test, src, opt)) return far_potential(test, src, opt.far_order);
    if (test.normal == src.normal) return potential_parallel(to_parallel(test, src));
    return potential_orthogonal(to_orthogonal(test, src));
}

double efield_integral(const PanelRect& test, const PanelRect& src,
                       const KernelOptions& opt) {
    const PairConfig cfg = classify(test, src);
    if (cfg == PairConfig::Identical) return 0.0;
    if (is_far(test, src, opt)) return far_field(test, src, opt.far_order);
    if (cfg == PairConfig::Parallel)
        return efield_integral_parallel(to_parallel(test, src));
    return efield_integral_orthogonal(to_orthogonal(test, src));
}

double diagonal_entry(const DielectricJump& j) {
    if (j.eps_d == j.eps_b)
        throw ContractViolation("diagonal_entry: no permittivity contrast");
    if (!(j.eps_d > 0.0 && j.eps_b > 0.0))
        throw ContractViolation("diagonal_entry: permittivities must be positive");
    return j.area * (j.eps_d + j.eps_b) / (2.0 * kEps0 * (j.eps_d - j.eps_b));
}

}  // namespace voxsie
