#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "commands.hpp"
#include "json.hpp"
#include "oracle.hpp"
#include "voxsie/cache.hpp"
#include "voxsie/presets.hpp"

namespace voxsie::cli {

namespace {

struct SuiteResult {
    bool pass = true;
    std::string detail;
};

using Suite = std::function<SuiteResult()>;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

PanelRect random_rect(std::mt19937& rng, Axis n, double spread) {
    std::uniform_real_distribution<double> u(-spread, spread);
    return rect_from_center(n, {u(rng), u(rng), u(rng)}, 1.0);
}

SuiteResult kernel_suite(unsigned seed, int pairs) {
    std::mt19937 rng(seed);
    SuiteResult r;
    double worst_p = 0.0, worst_e = 0.0;
    for (int i = 0; i < pairs; ++i) {
        const Axis a = kAxes[i % 3], b = kAxes[(i / 3) % 3];
        PanelRect t = random_rect(rng, a, 3.0), s = random_rect(rng, b, 3.0);
        if (classify(t, s) == PairConfig::Identical) continue;
        // keep the pair apart so the finite difference is clean
        double gap = 0.0;
        for (int k = 0; k < 3; ++k)
            gap = std::max(gap, std::max(s.lo[k] - t.hi[k], t.lo[k] - s.hi[k]));
        if (gap < 0.25) continue;
        KernelOptions exact;
        exact.near_threshold = 1e9;
        worst_p = std::max(worst_p, rel(potential_integral(t, s, exact), oracle::potential(t, s, 1e-12)));
        worst_e = std::max(worst_e, rel(efield_integral(t, s, exact), oracle::efield_fd(t, s, 1e-4, 1e-12)));
    }
    r.pass = worst_p <= 1e-8 && worst_e <= 1e-4;
    char buf[128];
    std::snprintf(buf, sizeof buf, "worst potential %.2e, field %.2e", worst_p, worst_e);
    r.detail = buf;
    return r;
}

SuiteResult dense_suite(unsigned seed, int count) {
    SuiteResult r;
    double worst_c = 0.0, worst_mvm = 0.0;
    for (int i = 0; i < count; ++i) {
        const StructureDescription s = random_structure(seed + i);
        SolverConfig cfg;
        cfg.rre = 1e-12;
        cfg.tucker_tol = 0.0;
        System sys = build_system(s, cfg);
        const Eigen::MatrixXd a = assemble_dense(sys.panels);
        std::mt19937 rng(seed + 100 + i);
        std::normal_distribution<double> g;
        Eigen::VectorXd x(a.rows());
        for (int k = 0; k < x.size(); ++k) x[k] = g(rng);
        Eigen::VectorXd y(a.rows());
        sys.op->apply(x.data(), y.data());
        const Eigen::VectorXd yd = a * x;
        worst_mvm = std::max(worst_mvm, (y - yd).norm() / yd.norm());
        const ExtractionResult fr = extract_capacitance(sys, cfg);
        const DenseResult dr = dense_oracle(s);
        worst_c = std::max(worst_c, (fr.capacitance - dr.capacitance).norm() / dr.capacitance.norm());
    }
    r.pass = worst_c <= 1e-6 && worst_mvm <= 1e-10;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d structures, worst C %.2e, mvm %.2e", count, worst_c, worst_mvm);
    r.detail = buf;
    return r;
}

SuiteResult tucker_suite(int n) {
    SuiteResult r;
    const double tol = 1e-8;
    const ToeplitzKernelSet set = generate_kernel_set({n, n, n}, 1.0);
    double worst = 0.0;
    for (const auto& t : set.potential) worst = std::max(worst, relative_error(decompress(compress(t.values, tol)), t.values));
    for (const auto& t : set.field) worst = std::max(worst, relative_error(decompress(compress(t.values, tol)), t.values));
    r.pass = worst <= std::sqrt(3.0) * tol;
    char buf[96];
    std::snprintf(buf, sizeof buf, "worst round trip %.2e at tol %.0e", worst, tol);
    r.detail = buf;
    return r;
}

SuiteResult precond_suite(double dv) {
    SuiteResult r;
    const StructureDescription s = coated_sphere(dv);
    int it[4];
    const PreconditionerMode modes[4] = {PreconditionerMode::Hybrid, PreconditionerMode::BlockDiagonal,
                                         PreconditionerMode::Diagonal, PreconditionerMode::None};
    for (int m = 0; m < 4; ++m) {
        SolverConfig cfg;
        cfg.rre = 1e-8;
        cfg.preconditioner = modes[m];
        it[m] = extract_capacitance(s, cfg).telemetry.iterations.at(0);
    }
    r.pass = it[0] < it[1] && it[1] < it[2] && it[2] < it[3];
    r.detail = "iterations hybrid " + std::to_string(it[0]) + ", block " + std::to_string(it[1]) +
               ", diagonal " + std::to_string(it[2]) + ", none " + std::to_string(it[3]);
    return r;
}

SuiteResult sphere_suite() {
    SuiteResult r;
    const double exact = coated_sphere_capacitance(0.25, 0.5, 2.0);
    double err[2];
    int it[2];
    const double dvs[2] = {0.05, 0.025};
    for (int i = 0; i < 2; ++i) {
        const ExtractionResult e = extract_capacitance(coated_sphere(dvs[i]), SolverConfig{});
        err[i] = rel(e.capacitance(0, 0), exact);
        it[i] = e.telemetry.iterations.at(0);
    }
    r.pass = err[1] <= 0.05 && err[1] <= err[0] && std::abs(it[0] - 7) <= 3 && std::abs(it[1] - 7) <= 3;
    char buf[160];
    std::snprintf(buf, sizeof buf, "err %.3f%% / %.3f%%, iterations %d / %d", 100 * err[0], 100 * err[1], it[0],
                  it[1]);
    r.detail = buf;
    return r;
}

SuiteResult cache_suite(const std::string& dir) {
    SuiteResult r;
    const auto problems = verify_cache(dir);
    r.pass = problems.empty();
    r.detail = problems.empty() ? "all files intact" : problems.front();
    return r;
}

}  // namespace

int cmd_verify(const VerifyOptions& o) {
    const bool full = o.level == "full";
    std::vector<std::pair<std::string, Suite>> suites = {
        {"kernel-oracle", [&] { return kernel_suite(o.seed, full ? 200 : 30); }},
        {"dense-equivalence", [&] { return dense_suite(o.seed, full ? 5 : 2); }},
        {"tucker-roundtrip", [&] { return tucker_suite(full ? 24 : 10); }},
        {"preconditioner-ordering", [&] { return precond_suite(full ? 0.025 : 0.05); }},
    };
    if (full) suites.push_back({"coated-sphere", [] { return sphere_suite(); }});
    if (!o.cache_dir.empty()) suites.push_back({"cache-checksums", [&] { return cache_suite(o.cache_dir); }});

    bool all = true;
    for (const auto& [name, run] : suites) {
        const auto t0 = std::chrono::steady_clock::now();
        SuiteResult r;
        try {
            r = run();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        all = all && r.pass;
        const nlohmann::json j = {{"suite", name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", secs}};
        std::printf("%s\n", j.dump().c_str());
        std::fflush(stdout);
    }
    return all ? kOk : kVerifyFailure;
}

}  // namespace voxsie::cli
