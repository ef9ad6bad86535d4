#pragma once

#include "decmg/geometric_map.hpp"
#include "decmg/mesh.hpp"
#include "decmg/operators.hpp"
#include "decmg/sparse.hpp"
#include "decmg/subdivision.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace decmg {

/// Sparse LU with the constant-nullspace handling used throughout: vertex 0
/// is pinned (row/column replaced by identity) before factorization, right
/// hand sides are projected to weighted mean zero, and solutions are
/// reported weighted-mean-zero. `weights` is the star0 diagonal.
class PinnedDirectSolver {
public:
    PinnedDirectSolver();
    PinnedDirectSolver(const SparseOperator& A, std::vector<double> weights);
    ~PinnedDirectSolver();
    PinnedDirectSolver(PinnedDirectSolver&&) noexcept;
    PinnedDirectSolver& operator=(PinnedDirectSolver&&) noexcept;

    std::vector<double> solve(const std::vector<double>& b) const;
    bool ready() const { return impl_ != nullptr; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::vector<double> weights_;
    double weight_total_ = 0.0;
};

/// Plain sparse LU (no pinning, no projection) for nonsingular systems.
class DirectSolver {
public:
    DirectSolver();
    explicit DirectSolver(const SparseOperator& A);
    ~DirectSolver();
    DirectSolver(DirectSolver&&) noexcept;
    DirectSolver& operator=(DirectSolver&&) noexcept;

    std::vector<double> solve(const std::vector<double>& b) const;
    bool ready() const { return impl_ != nullptr; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

enum class Smoother { GaussSeidel, SymmetricGaussSeidel, WeightedJacobi, Cg };

struct SmootherConfig {
    Smoother method = Smoother::GaussSeidel;
    double jacobi_omega = 2.0 / 3.0;
};

/// Runs `iters` sweeps of the chosen smoother on A x = b, in place.
/// Gauss-Seidel sweeps forward in row order; the CG smoother runs a fixed
/// iteration count with no tolerance exit, in the weighted inner product
/// when `weights` is nonempty.
void smooth(const SparseOperator& A, std::vector<double>& x,
            const std::vector<double>& b, const SmootherConfig& cfg, int iters,
            const std::vector<double>& weights = {});

enum class Transition { Down, Up };

struct CyclePlan {
    std::vector<Transition> walk;  // starts and ends at the finest level
    std::vector<int> pre;          // pre-smoothing sweeps per level
    std::vector<int> post;         // post-smoothing sweeps per level
    SmootherConfig smoother;
    int cycles = 1;

    /// Number of levels the walk believes in (deepest level visited + 1).
    int depth() const;
    /// Throws if the walk leaves [0, levels-1] or is unbalanced.
    void validate(int levels) const;
};

enum class CycleKind { V, W, F };

/// Canonical V/W/F walk over `levels` grids with uniform smoothing counts.
CyclePlan standard_plan(int levels, CycleKind kind, int pre = 3, int post = 3,
                        SmootherConfig smoother = {});

struct MultigridLevel {
    std::shared_ptr<const EmbeddedComplex2D> mesh;
    LaplacianOperators ops;
    SparseOperator prolongation;  // absent on the coarsest level
    SparseOperator restriction;
    bool has_transfer = false;
};

struct HierarchyOptions {
    /// Assemble coarse operators by Galerkin projection R A P instead of
    /// rediscretizing on each mesh (comparison experiments only).
    bool galerkin = false;
    HodgeOptions hodge;
};

class MultigridHierarchy {
public:
    /// meshes are ordered finest first; maps[k] sends mesh k to mesh k+1.
    MultigridHierarchy(std::vector<std::shared_ptr<const EmbeddedComplex2D>> meshes,
                       const std::vector<GeometricMap>& maps,
                       const HierarchyOptions& opts = {});

    int levels() const { return static_cast<int>(levels_.size()); }
    const MultigridLevel& level(int k) const { return levels_[k]; }
    const SparseOperator& fine_operator() const { return levels_.front().ops.laplacian; }

    /// b projected onto the range of the fine operator (weighted mean zero).
    std::vector<double> project_compatible(std::vector<double> b) const;

    /// One multigrid application: runs plan.cycles cycles starting from x0.
    /// Residual history holds the fine-level relative residual after each
    /// completed cycle.
    struct CycleResult {
        std::vector<double> x;
        std::vector<double> residual_history;
    };
    CycleResult run_cycle(const CyclePlan& plan, const std::vector<double>& b,
                          const std::vector<double>& x0) const;

private:
    void cycle_once(const CyclePlan& plan, std::vector<std::vector<double>>& xs,
                    std::vector<std::vector<double>>& bs) const;

    std::vector<MultigridLevel> levels_;
    PinnedDirectSolver coarse_solver_;
};

/// Convenience: hierarchy over a subdivision tower plus its base complex.
/// `use_levels` keeps only the finest `use_levels` meshes (0 = all).
MultigridHierarchy build_hierarchy(
    const std::shared_ptr<const EmbeddedComplex2D>& base,
    const std::vector<SubdivisionResult>& tower, int use_levels = 0,
    const HierarchyOptions& opts = {});

} // namespace decmg
