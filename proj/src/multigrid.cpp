#include "decmg/multigrid.hpp"

#include "decmg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace decmg {

namespace {

void gauss_seidel_sweep(const SparseOperator& A, std::vector<double>& x,
                        const std::vector<double>& b, bool reverse) {
    const auto& rp = A.row_ptr();
    const auto& ci = A.col_idx();
    const auto& v = A.csr_values();
    const int n = A.rows();
    for (int step = 0; step < n; ++step) {
        const int i = reverse ? n - 1 - step : step;
        double diag = 0.0, sum = 0.0;
        for (int k = rp[i]; k < rp[i + 1]; ++k) {
            if (ci[k] == i) {
                diag = v[k];
            } else {
                sum += v[k] * x[ci[k]];
            }
        }
        if (diag == 0.0) {
            throw std::runtime_error("gauss_seidel: zero diagonal at row " + std::to_string(i));
        }
        x[i] = (b[i] - sum) / diag;
    }
}

void jacobi_sweep(const SparseOperator& A, std::vector<double>& x,
                  const std::vector<double>& b, double omega,
                  std::vector<double>& scratch) {
    const int n = A.rows();
    scratch.resize(n);
    A.apply(x.data(), scratch.data());
    const std::vector<double> diag = A.diagonal_vector();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        if (diag[i] == 0.0) scratch[i] = x[i];  // flagged below
    }
    for (int i = 0; i < n; ++i) {
        if (diag[i] == 0.0) {
            throw std::runtime_error("jacobi: zero diagonal at row " + std::to_string(i));
        }
    }
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        x[i] += omega * (b[i] - scratch[i]) / diag[i];
    }
}

// Fixed-iteration CG in the (optionally weighted) inner product; no
// convergence exit by contract. Solves -A x = -b internally when the level
// operator is negative (semi)definite by working with the residual of A
// directly: formulas only involve ratios, so the overall sign cancels as
// long as curvature p^T A p is nonzero.
void cg_fixed(const SparseOperator& A, std::vector<double>& x,
              const std::vector<double>& b, int iters,
              const std::vector<double>& weights) {
    const std::size_t n = x.size();
    std::vector<double> r(n), p(n), Ap(n);
    A.apply(x.data(), r.data());
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    auto wdot = [&](const std::vector<double>& a, const std::vector<double>& c) {
        if (weights.empty()) return kernels::dot(a.data(), c.data(), n);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += weights[i] * a[i] * c[i];
        return s;
    };
    p = r;
    double rr = wdot(r, r);
    for (int it = 0; it < iters; ++it) {
        if (rr == 0.0) break;
        A.apply(p.data(), Ap.data());
        const double curv = wdot(p, Ap);
        if (curv == 0.0) break;
        const double alpha = rr / curv;
        for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
        for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * Ap[i];
        const double rr_new = wdot(r, r);
        const double beta = rr_new / rr;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        rr = rr_new;
    }
}

} // namespace

void smooth(const SparseOperator& A, std::vector<double>& x,
            const std::vector<double>& b, const SmootherConfig& cfg, int iters,
            const std::vector<double>& weights) {
    if (A.rows() != A.cols() || static_cast<int>(x.size()) != A.rows() ||
        x.size() != b.size()) {
        throw std::invalid_argument("smooth: shape mismatch");
    }
    std::vector<double> scratch;
    switch (cfg.method) {
        case Smoother::GaussSeidel:
            for (int i = 0; i < iters; ++i) gauss_seidel_sweep(A, x, b, false);
            break;
        case Smoother::SymmetricGaussSeidel:
            for (int i = 0; i < iters; ++i) {
                gauss_seidel_sweep(A, x, b, false);
                gauss_seidel_sweep(A, x, b, true);
            }
            break;
        case Smoother::WeightedJacobi:
            for (int i = 0; i < iters; ++i) jacobi_sweep(A, x, b, cfg.jacobi_omega, scratch);
            break;
        case Smoother::Cg:
            cg_fixed(A, x, b, iters, weights);
            break;
    }
}

int CyclePlan::depth() const {
    int level = 0, deepest = 0;
    for (Transition t : walk) {
        level += (t == Transition::Down) ? 1 : -1;
        deepest = std::max(deepest, level);
    }
    return deepest + 1;
}

void CyclePlan::validate(int levels) const {
    int level = 0;
    for (Transition t : walk) {
        level += (t == Transition::Down) ? 1 : -1;
        if (level < 0) throw std::invalid_argument("CyclePlan: walk rises above the finest level");
        if (level > levels - 1) throw std::invalid_argument("CyclePlan: walk descends below the coarsest level");
    }
    if (level != 0) throw std::invalid_argument("CyclePlan: walk does not return to the finest level");
    if (static_cast<int>(pre.size()) < levels || static_cast<int>(post.size()) < levels) {
        throw std::invalid_argument("CyclePlan: missing per-level smoothing counts");
    }
    if (cycles < 0) throw std::invalid_argument("CyclePlan: negative cycle count");
}

namespace {

// Transitions for an approximate solve at level k (gamma visits), where the
// coarsest level is solved directly on arrival.
void emit_solve(std::vector<Transition>& out, int k, int levels, int gamma) {
    if (k == levels - 1) return;
    for (int g = 0; g < gamma; ++g) {
        out.push_back(Transition::Down);
        emit_solve(out, k + 1, levels, gamma);
        out.push_back(Transition::Up);
    }
}

// F-cycle: at each level, one F-solve followed by one V-solve.
void emit_f(std::vector<Transition>& out, int k, int levels) {
    if (k == levels - 1) return;
    out.push_back(Transition::Down);
    emit_f(out, k + 1, levels);
    out.push_back(Transition::Up);
    out.push_back(Transition::Down);
    emit_solve(out, k + 1, levels, 1);
    out.push_back(Transition::Up);
}

} // namespace

CyclePlan standard_plan(int levels, CycleKind kind, int pre, int post,
                        SmootherConfig smoother) {
    if (levels < 1) throw std::invalid_argument("standard_plan: levels >= 1");
    CyclePlan plan;
    plan.pre.assign(levels, pre);
    plan.post.assign(levels, post);
    plan.smoother = smoother;
    if (levels > 1) {
        // The finest level is visited once per cycle regardless of gamma.
        if (kind == CycleKind::V) {
            emit_solve(plan.walk, 0, levels, 1);
        } else {
            plan.walk.push_back(Transition::Down);
            if (kind == CycleKind::W) {
                emit_solve(plan.walk, 1, levels, 2);
            } else {
                emit_f(plan.walk, 1, levels);  // includes the trailing V-solve
            }
            plan.walk.push_back(Transition::Up);
        }
    }
    plan.validate(levels);
    return plan;
}

MultigridHierarchy::MultigridHierarchy(
    std::vector<std::shared_ptr<const EmbeddedComplex2D>> meshes,
    const std::vector<GeometricMap>& maps, const HierarchyOptions& opts) {
    if (meshes.empty()) throw std::invalid_argument("hierarchy: no meshes");
    if (maps.size() + 1 != meshes.size()) {
        throw std::invalid_argument("hierarchy: need one map per mesh pair");
    }
    const int L = static_cast<int>(meshes.size());
    levels_.resize(L);
    for (int k = 0; k < L; ++k) {
        MultigridLevel& lvl = levels_[k];
        lvl.mesh = meshes[k];
        if (k < L - 1) {
            const GeometricMap& f = maps[k];
            if (f.domain()->hash() != meshes[k]->hash() ||
                f.codomain()->hash() != meshes[k + 1]->hash()) {
                throw std::invalid_argument("hierarchy: map " + std::to_string(k) +
                                            " does not connect its meshes");
            }
            lvl.prolongation = matrix_of(f).transposed("prolongation");
            lvl.restriction = restriction_matrix(f);
            lvl.has_transfer = true;
        }
    }
    // Each level's operator is rediscretized from its own mesh; Galerkin
    // projection is an opt-in comparison path.
    for (int k = 0; k < L; ++k) {
        MultigridLevel& lvl = levels_[k];
        if (!opts.galerkin || k == 0) {
            const DualGeometry dual = build_dual(*lvl.mesh);
            lvl.ops = laplacian_0(*lvl.mesh, dual, opts.hodge);
        } else {
            const MultigridLevel& finer = levels_[k - 1];
            lvl.ops.laplacian =
                finer.restriction.multiply(finer.ops.laplacian).multiply(finer.prolongation);
            lvl.ops.laplacian.set_tag("laplacian0(galerkin)");
            const DualGeometry dual = build_dual(*lvl.mesh);
            lvl.ops.dual_areas = dual.dual_cell_area;
        }
    }
    coarse_solver_ = PinnedDirectSolver(levels_.back().ops.laplacian,
                                        levels_.back().ops.dual_areas);
}

std::vector<double> MultigridHierarchy::project_compatible(std::vector<double> b) const {
    const auto& w = levels_.front().ops.dual_areas;
    double mean = 0.0, total = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        mean += w[i] * b[i];
        total += w[i];
    }
    mean /= total;
    for (double& x : b) x -= mean;
    return b;
}

void MultigridHierarchy::cycle_once(const CyclePlan& plan,
                                    std::vector<std::vector<double>>& xs,
                                    std::vector<std::vector<double>>& bs) const {
    const int nw = static_cast<int>(plan.walk.size());
    int level = 0;
    std::vector<double> r;
    for (int w = 0; w < nw; ++w) {
        if (plan.walk[w] == Transition::Down) {
            MultigridLevel const& lvl = levels_[level];
            smooth(lvl.ops.laplacian, xs[level], bs[level], plan.smoother,
                   plan.pre[level], lvl.ops.dual_areas);
            r.resize(xs[level].size());
            lvl.ops.laplacian.apply(xs[level].data(), r.data());
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = bs[level][i] - r[i];
            ++level;
            bs[level] = levels_[level - 1].restriction.apply(r);
            kernels::fill(0.0, xs[level].data(), xs[level].size());
            if (level == levels() - 1) {
                xs[level] = coarse_solver_.solve(bs[level]);
            } else if (w + 1 < nw && plan.walk[w + 1] == Transition::Up) {
                // walk bottoms out above the coarsest level: smooth in place
                smooth(levels_[level].ops.laplacian, xs[level], bs[level],
                       plan.smoother, plan.pre[level], levels_[level].ops.dual_areas);
            }
        } else {
            const std::vector<double> corr =
                levels_[level - 1].prolongation.apply(xs[level]);
            --level;
            for (std::size_t i = 0; i < corr.size(); ++i) xs[level][i] += corr[i];
            smooth(levels_[level].ops.laplacian, xs[level], bs[level], plan.smoother,
                   plan.post[level], levels_[level].ops.dual_areas);
        }
    }
}

MultigridHierarchy::CycleResult MultigridHierarchy::run_cycle(
    const CyclePlan& plan, const std::vector<double>& b,
    const std::vector<double>& x0) const {
    plan.validate(levels());
    const SparseOperator& A = fine_operator();
    if (static_cast<int>(b.size()) != A.rows() || b.size() != x0.size()) {
        throw std::invalid_argument("run_cycle: rhs size mismatch");
    }
    // Re-visits of a coarse level inside one cycle reuse these work vectors;
    // a fresh descent overwrites them.
    std::vector<std::vector<double>> xs(levels()), bs(levels());
    for (int k = 0; k < levels(); ++k) {
        const int n = levels_[k].ops.laplacian.rows();
        xs[k].assign(n, 0.0);
        bs[k].assign(n, 0.0);
    }
    xs[0] = x0;
    bs[0] = b;

    CycleResult res;
    const double bnorm = kernels::norm2(b.data(), b.size());
    const double denom = bnorm > 0.0 ? bnorm : 1.0;
    std::vector<double> r(b.size());
    res.residual_history.reserve(plan.cycles);
    for (int c = 0; c < plan.cycles; ++c) {
        if (levels() == 1) {
            xs[0] = coarse_solver_.solve(bs[0]);
        } else {
            cycle_once(plan, xs, bs);
        }
        A.apply(xs[0].data(), r.data());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
        res.residual_history.push_back(kernels::norm2(r.data(), r.size()) / denom);
    }
    res.x = std::move(xs[0]);
    return res;
}

MultigridHierarchy build_hierarchy(
    const std::shared_ptr<const EmbeddedComplex2D>& base,
    const std::vector<SubdivisionResult>& tower, int use_levels,
    const HierarchyOptions& opts) {
    std::vector<std::shared_ptr<const EmbeddedComplex2D>> meshes;
    std::vector<GeometricMap> maps;
    for (const auto& s : tower) {
        meshes.push_back(s.fine);
        maps.push_back(s.map);
    }
    meshes.push_back(base);
    if (use_levels > 0 && use_levels < static_cast<int>(meshes.size())) {
        meshes.resize(use_levels);
        maps.resize(use_levels - 1);
    }
    return MultigridHierarchy(std::move(meshes), maps, opts);
}

} // namespace decmg
