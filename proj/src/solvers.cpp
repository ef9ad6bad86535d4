#include "decmg/solvers.hpp"

#include "decmg/kernels.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace decmg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double relative_residual(const SparseOperator& A, const std::vector<double>& x,
                         const std::vector<double>& b) {
    std::vector<double> r(b.size());
    A.apply(x.data(), r.data());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    const double bn = kernels::norm2(b);
    return kernels::norm2(r) / (bn > 0.0 ? bn : 1.0);
}

} // namespace

nlohmann::json SolveReport::to_json(bool include_solution) const {
    nlohmann::json j;
    j["iterations"] = iterations;
    j["converged"] = converged;
    j["stagnated"] = stagnated;
    j["final_relative_residual"] = final_relative_residual;
    j["wall_seconds"] = wall_seconds;
    j["residual_history"] = residual_history;
    j["cumulative_seconds"] = cumulative_seconds;
    j["config"] = config_echo;
    if (include_solution) j["solution"] = solution;
    return j;
}

void SolveReport::write_residual_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::fprintf(f, "cycle,rel_residual,cumulative_seconds\n");
    for (std::size_t i = 0; i < residual_history.size(); ++i) {
        const double t = i < cumulative_seconds.size() ? cumulative_seconds[i] : 0.0;
        std::fprintf(f, "%zu,%.17g,%.17g\n", i + 1, residual_history[i], t);
    }
    std::fclose(f);
}

SolveReport weighted_cg(const SparseOperator& A, const std::vector<double>& weights,
                        const std::vector<double>& b, double tol, int maxiter,
                        const std::function<std::vector<double>(const std::vector<double>&)>*
                            preconditioner,
                        const std::vector<double>* x0) {
    const auto t0 = Clock::now();
    const std::size_t n = b.size();
    SolveReport rep;
    rep.solution.assign(n, 0.0);
    if (x0) rep.solution = *x0;

    auto wdot = [&](const std::vector<double>& a, const std::vector<double>& c) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += weights[i] * a[i] * c[i];
        return s;
    };

    std::vector<double> r(n), Ap(n);
    A.apply(rep.solution.data(), r.data());
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    const double bn = kernels::norm2(b);
    const double denom = bn > 0.0 ? bn : 1.0;

    std::vector<double> z = preconditioner ? (*preconditioner)(r) : r;
    std::vector<double> p = z;
    double rz = wdot(r, z);
    double res = kernels::norm2(r) / denom;
    rep.residual_history.push_back(res);
    rep.cumulative_seconds.push_back(seconds_since(t0));

    int it = 0;
    while (res > tol && it < maxiter) {
        A.apply(p.data(), Ap.data());
        const double curv = wdot(p, Ap);
        if (curv == 0.0 || !std::isfinite(curv)) {
            throw std::runtime_error("cg: breakdown (zero curvature) at iteration " +
                                     std::to_string(it));
        }
        const double alpha = rz / curv;
        if (!std::isfinite(alpha)) {
            throw std::runtime_error("cg: breakdown (non-finite step) at iteration " +
                                     std::to_string(it));
        }
        for (std::size_t i = 0; i < n; ++i) rep.solution[i] += alpha * p[i];
        for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * Ap[i];
        z = preconditioner ? (*preconditioner)(r) : r;
        const double rz_new = wdot(r, z);
        const double beta = rz_new / rz;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        rz = rz_new;
        ++it;
        res = kernels::norm2(r) / denom;
        rep.residual_history.push_back(res);
        rep.cumulative_seconds.push_back(seconds_since(t0));
    }
    rep.iterations = it;
    rep.converged = res <= tol;
    rep.final_relative_residual = relative_residual(A, rep.solution, b);
    rep.wall_seconds = seconds_since(t0);
    return rep;
}

SolveReport gmg_preconditioned_cg(const MultigridHierarchy& h, const CyclePlan& inner_plan,
                                  const std::vector<double>& b, double tol, int maxiter) {
    const std::vector<double> bc = h.project_compatible(b);
    std::function<std::vector<double>(const std::vector<double>&)> prec =
        [&](const std::vector<double>& r) {
            const std::vector<double> x0(r.size(), 0.0);
            return h.run_cycle(inner_plan, r, x0).x;
        };
    SolveReport rep = weighted_cg(h.fine_operator(), h.level(0).ops.dual_areas, bc, tol,
                                  maxiter, &prec);
    rep.config_echo["solver"] = "gmg_pcg";
    return rep;
}

SolveReport gmres(const SparseOperator& A, const std::vector<double>& b,
                  const std::function<std::vector<double>(const std::vector<double>&)>*
                      preconditioner,
                  int restart, double tol, int maxiter,
                  const std::vector<double>* x0) {
    const auto t0 = Clock::now();
    const std::size_t n = b.size();
    if (restart < 1) throw std::invalid_argument("gmres: restart >= 1");
    SolveReport rep;
    rep.solution.assign(n, 0.0);
    if (x0) rep.solution = *x0;

    auto apply_prec = [&](std::vector<double> v) {
        return preconditioner ? (*preconditioner)(v) : v;
    };

    const double bn = kernels::norm2(b);
    const double denom = bn > 0.0 ? bn : 1.0;

    std::vector<double> r(n);
    A.apply(rep.solution.data(), r.data());
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double res = kernels::norm2(r) / denom;
    rep.residual_history.push_back(res);
    rep.cumulative_seconds.push_back(seconds_since(t0));

    int total_it = 0;
    while (res > tol && total_it < maxiter) {
        const double res_window_start = res;
        std::vector<double> z = apply_prec(r);
        const double beta = kernels::norm2(z);
        if (beta == 0.0) break;

        const int m = restart;
        std::vector<std::vector<double>> V;
        V.reserve(m + 1);
        std::vector<double> v0(z);
        kernels::scale(1.0 / beta, v0.data(), n);
        V.push_back(std::move(v0));
        // Hessenberg in column-major: H[j] has j+2 entries after step j.
        std::vector<std::vector<double>> H;
        std::vector<double> cs(m, 0.0), sn(m, 0.0);
        std::vector<double> g(m + 1, 0.0);
        g[0] = beta;

        int j = 0;
        for (; j < m && total_it < maxiter; ++j, ++total_it) {
            std::vector<double> w(n);
            A.apply(V[j].data(), w.data());
            w = apply_prec(std::move(w));
            std::vector<double> h(j + 2, 0.0);
            for (int i = 0; i <= j; ++i) {  // modified Gram-Schmidt
                h[i] = kernels::dot(w.data(), V[i].data(), n);
                kernels::axpy(-h[i], V[i].data(), w.data(), n);
            }
            h[j + 1] = kernels::norm2(w.data(), n);
            if (h[j + 1] > 0.0) {
                std::vector<double> vnext(w);
                kernels::scale(1.0 / h[j + 1], vnext.data(), n);
                V.push_back(std::move(vnext));
            }
            // apply accumulated Givens rotations, then create a new one
            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * h[i] + sn[i] * h[i + 1];
                h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
                h[i] = t;
            }
            const double rho = std::hypot(h[j], h[j + 1]);
            if (rho == 0.0) {
                cs[j] = 1.0;
                sn[j] = 0.0;
            } else {
                cs[j] = h[j] / rho;
                sn[j] = h[j + 1] / rho;
            }
            h[j] = rho;
            h[j + 1] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            H.push_back(std::move(h));

            // |g[j+1]| is the preconditioned residual norm; the true residual
            // is recomputed at the restart boundary.
            res = std::fabs(g[j + 1]) / denom;
            if (res <= tol) {
                ++j;
                ++total_it;
                break;
            }
        }
        // back-substitute y from the j x j triangular system
        std::vector<double> y(j, 0.0);
        for (int i = j - 1; i >= 0; --i) {
            double s = g[i];
            for (int k2 = i + 1; k2 < j; ++k2) s -= H[k2][i] * y[k2];
            y[i] = s / H[i][i];
        }
        for (int i = 0; i < j; ++i) {
            kernels::axpy(y[i], V[i].data(), rep.solution.data(), n);
        }

        A.apply(rep.solution.data(), r.data());
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
        res = kernels::norm2(r) / denom;
        rep.residual_history.push_back(res);
        rep.cumulative_seconds.push_back(seconds_since(t0));

        if (res >= res_window_start * (1.0 - 1e-12)) {
            rep.stagnated = true;  // no progress across a full restart window
            break;
        }
    }
    rep.iterations = total_it;
    rep.converged = res <= tol;
    rep.final_relative_residual = relative_residual(A, rep.solution, b);
    rep.wall_seconds = seconds_since(t0);
    return rep;
}

SolveReport gmg_solve(const MultigridHierarchy& h, const CyclePlan& plan,
                      const std::vector<double>& b, double tol, int max_cycles,
                      const std::vector<double>* x0) {
    const auto t0 = Clock::now();
    const std::vector<double> bc = h.project_compatible(b);
    SolveReport rep;
    rep.solution.assign(b.size(), 0.0);
    if (x0) rep.solution = *x0;

    CyclePlan one = plan;
    one.cycles = 1;
    int c = 0;
    double res = relative_residual(h.fine_operator(), rep.solution, bc);
    while (c < max_cycles) {
        auto out = h.run_cycle(one, bc, rep.solution);
        rep.solution = std::move(out.x);
        res = out.residual_history.back();
        rep.residual_history.push_back(res);
        rep.cumulative_seconds.push_back(seconds_since(t0));
        ++c;
        if (res <= tol) break;
    }
    rep.iterations = c;
    rep.converged = res <= tol;
    rep.final_relative_residual = relative_residual(h.fine_operator(), rep.solution, bc);
    rep.wall_seconds = seconds_since(t0);
    rep.config_echo["solver"] = "gmg";
    return rep;
}

} // namespace decmg
