#include "voxsie/solver.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "voxsie/cache.hpp"
#include "voxsie/kernel.hpp"

namespace voxsie {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

GmresResult gmres_solve(const std::vector<double>& b, const LinearOp& a, const LinearOp& m,
                        const GmresConfig& cfg, std::size_t n) {
    if (cfg.restart < 1) throw InputError("GMRES restart must be at least 1");
    if (!(cfg.rre > 0.0 && cfg.rre < 1.0)) throw InputError("target RRE must lie in (0, 1)");
    if (b.size() != n) throw ContractViolation("gmres_solve: rhs length mismatch");
    GmresResult res;
    res.x.assign(n, 0.0);
    std::vector<double> mb(n), tmp(n), r(n);
    m(b.data(), mb.data());
    const double beta0 = norm2(mb);
    if (beta0 == 0.0) {
        res.converged = true;
        res.final_rre = 0.0;
        return res;
    }
    const int k = cfg.restart;
    std::vector<std::vector<double>> v(k + 1, std::vector<double>(n));
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k + 1, k);
    std::vector<double> cs(k), sn(k), g(k + 1);
    r = mb;
    double beta = beta0;

    while (true) {
        for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / beta;
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;
        int j = 0;
        bool done = false;
        for (; j < k; ++j) {
            a(v[j].data(), tmp.data());
            m(tmp.data(), v[j + 1].data());
            double* w = v[j + 1].data();
            const double before = std::sqrt(dot(w, w, n));
            for (int i = 0; i <= j; ++i) {
                const double hij = dot(w, v[i].data(), n);
                h(i, j) = hij;
                for (std::size_t q = 0; q < n; ++q) w[q] -= hij * v[i][q];
            }
            double after = std::sqrt(dot(w, w, n));
            if (after < 0.7 * before) {
                for (int i = 0; i <= j; ++i) {
                    const double c = dot(w, v[i].data(), n);
                    h(i, j) += c;
                    for (std::size_t q = 0; q < n; ++q) w[q] -= c * v[i][q];
                }
                after = std::sqrt(dot(w, w, n));
            }
            h(j + 1, j) = after;
            const bool breakdown = after <= 1e-14 * before;
            if (!breakdown)
                for (std::size_t q = 0; q < n; ++q) w[q] /= after;
            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
                h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
                h(i, j) = t;
            }
            const double d = std::hypot(h(j, j), h(j + 1, j));
            cs[j] = h(j, j) / d;
            sn[j] = h(j + 1, j) / d;
            h(j, j) = d;
            h(j + 1, j) = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            ++res.iterations;
            const double est = std::abs(g[j + 1]) / beta0;
            res.rre_history.push_back(est);
            if (est <= cfg.rre || breakdown || res.iterations >= cfg.max_iterations) {
                ++j;
                done = true;
                break;
            }
        }
        // y = H^{-1} g on the leading j x j triangle
        std::vector<double> y(j);
        for (int i = j - 1; i >= 0; --i) {
            double s = g[i];
            for (int q = i + 1; q < j; ++q) s -= h(i, q) * y[q];
            y[i] = s / h(i, i);
        }
        for (int i = 0; i < j; ++i)
            for (std::size_t q = 0; q < n; ++q) res.x[q] += y[i] * v[i][q];

        a(res.x.data(), tmp.data());
        for (std::size_t q = 0; q < n; ++q) tmp[q] = b[q] - tmp[q];
        m(tmp.data(), r.data());
        beta = norm2(r);
        res.final_rre = beta / beta0;
        if (res.final_rre <= cfg.rre) {
            res.converged = true;
            break;
        }
        if (res.iterations >= cfg.max_iterations) break;
        if (done && beta == 0.0) break;
    }
    return res;
}

double coated_sphere_capacitance(double rc, double rd, double er) {
    return 4.0 * kPi * kEps0 * er * rd * rc / ((rd - rc) + er * rc);
}

std::vector<double> excitation(const PanelSet& ps, std::size_t slot) {
    std::vector<double> b(ps.size(), 0.0);
    for (std::size_t k = 0; k < ps.n_conductor; ++k)
        if (ps.panels[k].conductor == static_cast<int>(slot)) b[k] = ps.panels[k].area;
    return b;
}

Eigen::MatrixXd capacitance_from_charges(const PanelSet& ps, const std::vector<std::vector<double>>& rho) {
    const std::size_t m = ps.conductor_ids.size();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t j = 0; j < rho.size(); ++j)
        for (std::size_t k = 0; k < ps.n_conductor; ++k) {
            const Panel& p = ps.panels[k];
            c(p.conductor, j) += p.area * p.eps_out * rho[j][k];
        }
    return c;
}

System build_system(const StructureDescription& s, const SolverConfig& cfg) {
    System sys;
    Telemetry& tel = sys.telemetry;
    auto t0 = Clock::now();
    sys.grid = build_grid(s);
    sys.panels = enumerate_panels(sys.grid);
    if (sys.panels.conductor_ids.empty()) throw InputError("structure has no conductors");
    tel.stages.push_back({"panel identification", since(t0)});
    tel.panels = sys.panels.size();
    tel.conductor_panels = sys.panels.n_conductor;
    tel.dielectric_panels = sys.panels.n_dielectric;
    tel.domain = sys.grid.dims;
    const Dims3 dom = sys.grid.dims;
    const double dv = sys.grid.voxel_size;

    bool loaded = false;
    if (!cfg.cache_dir.empty()) {
        try {
            LoadedKernels lk = load_cache(cfg.cache_dir, dom);
            tel.stages.push_back({"read compressed toeplitz tensors", lk.read_seconds});
            auto t1 = Clock::now();
            sys.toeplitz = scale_toeplitz(lk.set, dv);
            tel.stages.push_back({"restore, resize and scale toeplitz tensors", lk.restore_seconds + since(t1)});
            tel.kernel_source = "cache";
            loaded = true;
        } catch (const CacheError& e) {
            tel.warnings.push_back(std::string("kernel cache unusable, generating directly: ") + e.what());
        }
    }
    if (!loaded) {
        auto t1 = Clock::now();
        sys.toeplitz = generate_kernel_set(dom, dv, cfg.kernel);
        tel.stages.push_back({"fill toeplitz tensors", since(t1)});
        tel.kernel_source = "direct";
    }
    tel.toeplitz_bytes = sys.toeplitz.bytes();

    auto t2 = Clock::now();
    CirculantKernelSet circ = fft_circulants(sys.toeplitz);
    tel.stages.push_back({"embed and fft circulant tensors", since(t2)});
    tel.circulant_bytes = circ.bytes();

    if (cfg.tucker_tol > 0.0) {
        auto t3 = Clock::now();
        auto cc = std::make_shared<CompressedCirculants>(circ, cfg.tucker_tol);
        tel.stages.push_back({"compress circulant tensors", since(t3)});
        tel.circulant_compressed_bytes = cc->bytes();
        tel.tucker_error = cc->worst_error();

        // overhead: restoring one tensor vs one fft / hadamard / ifft pass
        ComplexTensor scratch;
        auto t4 = Clock::now();
        (void)cc->potential(0, scratch);
        const double restore = since(t4);
        ComplexTensor q(circ.dims);
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& v : q) v = u(rng);
        auto t5 = Clock::now();
        fft3_forward(q);
        const ComplexTensor& k = circ.potential[0];
        for (std::size_t i = 0; i < q.size(); ++i) q[i] *= k[i];
        fft3_inverse(q);
        const double conv = since(t5);
        tel.overhead = conv > 0.0 ? restore / conv : 0.0;
        sys.circulants = cc;
    } else {
        tel.circulant_compressed_bytes = tel.circulant_bytes;
        sys.circulants = std::make_shared<DenseCirculants>(std::move(circ));
    }
    tel.compression_ratio = static_cast<double>(tel.circulant_bytes) / tel.circulant_compressed_bytes;
    sys.op = std::make_unique<FftOperator>(sys.panels, sys.circulants);

    auto t6 = Clock::now();
    sys.precond = Preconditioner(sys.panels, sys.toeplitz, cfg.preconditioner, cfg.box_dims);
    tel.stages.push_back({"build preconditioner", since(t6)});
    tel.preconditioner_bytes = sys.precond.block_bytes();
    tel.preconditioner_full_bytes = sys.precond.undeduplicated_bytes();
    tel.boxes = sys.precond.box_count();
    tel.unique_blocks = sys.precond.unique_blocks();
    return sys;
}

ExtractionResult extract_capacitance(System& sys, const SolverConfig& cfg) {
    ExtractionResult out;
    const PanelSet& ps = sys.panels;
    out.conductor_ids = ps.conductor_ids;
    const std::size_t n = ps.size();
    GmresConfig gc{cfg.restart, cfg.rre, cfg.max_iterations};
    const LinearOp a = [&](const double* x, double* y) { sys.op->apply(x, y); };
    const LinearOp m = [&](const double* x, double* y) { sys.precond.apply(x, y); };
    Telemetry& tel = sys.telemetry;
    for (std::size_t j = 0; j < ps.conductor_ids.size(); ++j) {
        auto t0 = Clock::now();
        const std::vector<double> b = excitation(ps, j);
        GmresResult r = gmres_solve(b, a, m, gc, n);
        const double secs = since(t0);
        std::vector<double> ax(n);
        a(r.x.data(), ax.data());
        double num = 0.0, den = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
            num += (b[q] - ax[q]) * (b[q] - ax[q]);
            den += b[q] * b[q];
        }
        tel.iterations.push_back(r.iterations);
        tel.converged.push_back(r.converged);
        tel.rre.push_back(r.final_rre);
        tel.true_rre.push_back(std::sqrt(num / den));
        tel.solve_seconds.push_back(secs);
        tel.stages.push_back({"solve, conductor " + std::to_string(ps.conductor_ids[j]), secs});
        out.failed.push_back(!r.converged);
        std::vector<double> fc(ps.n_conductor);
        for (std::size_t k = 0; k < ps.n_conductor; ++k) fc[k] = ps.panels[k].eps_out * r.x[k];
        out.free_charges.push_back(std::move(fc));
        out.charges.push_back(std::move(r.x));
    }
    out.capacitance = capacitance_from_charges(ps, out.charges);
    tel.forward_ffts = sys.op->forward_ffts();
    tel.inverse_ffts = sys.op->inverse_ffts();
    tel.mvms = sys.op->mvm_count();
    out.telemetry = tel;
    return out;
}

ExtractionResult extract_capacitance(const StructureDescription& s, const SolverConfig& cfg) {
    System sys = build_system(s, cfg);
    return extract_capacitance(sys, cfg);
}

Eigen::MatrixXd assemble_dense(const PanelSet& ps, const KernelOptions& opt, std::size_t limit) {
    const std::size_t n = ps.size();
    if (n > limit)
        throw InputError("dense oracle refuses " + std::to_string(n) + " panels (limit " +
                         std::to_string(limit) + ")");
    const double dv = ps.voxel_size;
    std::vector<PanelRect> rects(n);
    for (std::size_t k = 0; k < n; ++k) rects[k] = panel_rect(ps.panels[k], dv);
    Eigen::MatrixXd a(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const Panel& p = ps.panels[k];
        for (std::size_t l = 0; l < n; ++l) {
            if (p.kind == PanelKind::Conductor) {
                a(k, l) = potential_integral(rects[k], rects[l], opt);
            } else {
                a(k, l) = p.sign * efield_integral(rects[k], rects[l], opt);
            }
        }
        if (p.kind == PanelKind::Dielectric) a(k, k) += diagonal_entry({p.area, p.eps_in, p.eps_out});
    }
    return a;
}

DenseResult dense_oracle(const StructureDescription& s, const KernelOptions& opt, std::size_t limit) {
    const VoxelGrid g = build_grid(s);
    const PanelSet ps = enumerate_panels(g);
    DenseResult r;
    r.matrix = assemble_dense(ps, opt, limit);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(r.matrix);
    for (std::size_t j = 0; j < ps.conductor_ids.size(); ++j) {
        const std::vector<double> b = excitation(ps, j);
        Eigen::VectorXd x = lu.solve(Eigen::Map<const Eigen::VectorXd>(b.data(), b.size()));
        r.charges.emplace_back(x.data(), x.data() + x.size());
    }
    r.capacitance = capacitance_from_charges(ps, r.charges);
    return r;
}

}  // namespace voxsie
