#pragma once

#include "decmg/multigrid.hpp"
#include "decmg/sparse.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace decmg {

/// Outcome of any linear solve in the toolkit. Residuals are always the
/// relative residual ||L u - b||_2 / ||b||_2 of the original (unsymmetrized,
/// unpreconditioned) system, recomputed from the returned solution.
struct SolveReport {
    std::vector<double> solution;
    std::vector<double> residual_history;    // per cycle / iteration
    std::vector<double> cumulative_seconds;  // same length as the history
    int iterations = 0;
    bool converged = false;
    bool stagnated = false;
    double final_relative_residual = 0.0;
    double wall_seconds = 0.0;
    nlohmann::json config_echo;

    nlohmann::json to_json(bool include_solution = false) const;
    void write_residual_csv(const std::string& path) const;
};

/// Weighted-inner-product conjugate gradients on the similarity-symmetrized
/// Laplacian system (the operator is self-adjoint and negative semidefinite
/// in the star0 inner product). Stops when the relative residual reaches
/// tol; the optional preconditioner maps a residual to an approximate
/// error correction.
SolveReport weighted_cg(const SparseOperator& A, const std::vector<double>& weights,
                        const std::vector<double>& b, double tol, int maxiter,
                        const std::function<std::vector<double>(const std::vector<double>&)>*
                            preconditioner = nullptr,
                        const std::vector<double>* x0 = nullptr);

/// GMG-preconditioned CG: the preconditioner application is run_cycle with
/// x0 = 0 and the given inner plan.
SolveReport gmg_preconditioned_cg(const MultigridHierarchy& h, const CyclePlan& inner_plan,
                                  const std::vector<double>& b, double tol, int maxiter);

/// Restarted GMRES with an optional left preconditioner. Stagnation over a
/// full restart window is reported (flag), not fatal.
SolveReport gmres(const SparseOperator& A, const std::vector<double>& b,
                  const std::function<std::vector<double>(const std::vector<double>&)>*
                      preconditioner,
                  int restart, double tol, int maxiter,
                  const std::vector<double>* x0 = nullptr);

/// Standalone multigrid solve: repeats the plan until tol or max_cycles.
SolveReport gmg_solve(const MultigridHierarchy& h, const CyclePlan& plan,
                      const std::vector<double>& b, double tol, int max_cycles,
                      const std::vector<double>* x0 = nullptr);

} // namespace decmg
