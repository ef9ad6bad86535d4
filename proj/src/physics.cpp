#include "decmg/physics.hpp"

#include "decmg/kernels.hpp"
#include "decmg/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace decmg {

namespace {

using Clock = std::chrono::steady_clock;

double relative_residual(const SparseOperator& A, const std::vector<double>& x,
                         const std::vector<double>& b) {
    std::vector<double> r(b.size());
    A.apply(x.data(), r.data());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    const double bn = kernels::norm2(b);
    return kernels::norm2(r) / (bn > 0.0 ? bn : 1.0);
}

std::vector<double> project_weighted_mean_zero(std::vector<double> v,
                                               const std::vector<double>& w) {
    double mean = 0.0, total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        mean += w[i] * v[i];
        total += w[i];
    }
    mean /= total;
    for (double& x : v) x -= mean;
    return v;
}

} // namespace

std::shared_ptr<EmbeddedComplex2D> MeshSpec::build() const {
    switch (kind) {
        case Kind::Grid: return make_triangulated_grid(nx, ny, lx, ly);
        case Kind::Equilateral: return make_equilateral_grid(rows, cols, side);
        case Kind::Obj: return read_obj(path);
    }
    throw std::logic_error("MeshSpec: unknown kind");
}

std::vector<double> poisson_rhs_random(const SparseOperator& L, std::uint64_t seed) {
    const std::vector<double> r = uniform01_vector(seed, L.cols());
    return L.apply(r);
}

void ConvectionConfig::check() const {
    if (nx < 1 || ny < 1 || lx <= 0 || ly <= 0) {
        throw std::invalid_argument("convection: bad grid");
    }
    if (levels < 1) throw std::invalid_argument("convection: levels >= 1");
    const int factor = 1 << (levels - 1);
    if (nx % factor != 0 || ny % factor != 0) {
        throw std::invalid_argument(
            "convection: nx, ny must be divisible by 2^(levels-1)");
    }
    if (g <= 0 || alpha_rho0 <= 0 || phi <= 0 || Ra <= 0 || k_etaf <= 0 ||
        dT_walls <= 0 || rtol <= 0 || atol <= 0) {
        throw std::invalid_argument("convection: physical parameters must be positive");
    }
    if (t_final < 0) throw std::invalid_argument("convection: t_final >= 0");
}

ConvectionSetup ConvectionSetup::build(const ConvectionConfig& cfg) {
    cfg.check();
    ConvectionSetup s;
    s.cfg = cfg;

    const int factor = 1 << (cfg.levels - 1);
    auto base_raw = make_triangulated_grid(cfg.nx / factor, cfg.ny / factor, cfg.lx, cfg.ly);
    std::shared_ptr<const EmbeddedComplex2D> base =
        translated(*base_raw, Vec3(-cfg.lx / 2.0, -cfg.ly / 2.0, 0.0));

    std::vector<SubdivisionResult> tower;
    if (cfg.levels > 1) {
        tower = subdivision_tower(base, SubdivisionScheme::Binary, cfg.levels - 1);
        s.mesh = tower.front().fine;
    } else {
        s.mesh = base;
    }

    const DualGeometry dual = build_dual(*s.mesh);
    s.ops = laplacian_0(*s.mesh, dual);

    // Buoyancy 1-form: gravity points -y, so the Boussinesq lift enters the
    // Darcy law along +y with magnitude g.
    s.gravity_form = flat_constant(Vec3(0.0, cfg.g, 0.0), s.mesh);

    const double ylo = -cfg.ly / 2.0, yhi = cfg.ly / 2.0;
    const double wall_tol = 1e-9 * cfg.ly;
    s.is_wall.assign(s.mesh->num_vertices(), 0);
    for (int v = 0; v < s.mesh->num_vertices(); ++v) {
        const double y = s.mesh->positions[v].y;
        if (std::abs(y - yhi) <= wall_tol || std::abs(y - ylo) <= wall_tol) {
            s.is_wall[v] = 1;
            s.wall_vertices.push_back(v);
        }
    }

    const SolverSpec& sp = cfg.pressure_solver;
    if (sp.kind == SolverKind::Direct || sp.kind == SolverKind::Cg ||
        sp.kind == SolverKind::Gmres) {
        s.direct = std::make_unique<PinnedDirectSolver>(s.ops.laplacian, s.ops.dual_areas);
    }
    if (sp.kind == SolverKind::Gmg || sp.kind == SolverKind::GmgPcg) {
        s.hierarchy = std::make_unique<MultigridHierarchy>(
            build_hierarchy(base, tower, sp.coarsenings));
        s.gmg_plan = standard_plan(s.hierarchy->levels(), sp.cycle, sp.pre_smooth,
                                   sp.post_smooth, sp.smoother_config());
    }
    return s;
}

std::vector<double> ConvectionSetup::pressure_rhs(const std::vector<double>& T) const {
    Cochain Tc(mesh, 0);
    Tc.values = T;
    for (double& x : Tc.values) x *= cfg.alpha_rho0;
    const Cochain wedge = wedge_01(Tc, gravity_form);
    Cochain div = codifferential_1(ops, wedge);
    return std::move(div.values);
}

std::pair<std::vector<double>, double> ConvectionSetup::solve_pressure(
    const std::vector<double>& T, const std::vector<double>* warm) const {
    return solve_pressure_rhs(pressure_rhs(T), warm);
}

std::pair<std::vector<double>, double> ConvectionSetup::solve_pressure_rhs(
    const std::vector<double>& b, const std::vector<double>* warm) const {
    const SolverSpec& sp = cfg.pressure_solver;
    switch (sp.kind) {
        case SolverKind::Direct: {
            std::vector<double> P = direct->solve(b);
            return {std::move(P), relative_residual(ops.laplacian, P, b)};
        }
        case SolverKind::Gmg: {
            SolveReport rep = gmg_solve(*hierarchy, gmg_plan, b, sp.tol, sp.maxiter, warm);
            return {std::move(rep.solution), rep.final_relative_residual};
        }
        case SolverKind::GmgPcg: {
            CyclePlan inner = gmg_plan;
            inner.cycles = sp.precond_cycles;
            SolveReport rep = gmg_preconditioned_cg(*hierarchy, inner, b, sp.tol, sp.maxiter);
            return {std::move(rep.solution), rep.final_relative_residual};
        }
        case SolverKind::Cg: {
            SolveReport rep = weighted_cg(ops.laplacian, ops.dual_areas, b, sp.tol,
                                          sp.maxiter, nullptr, warm);
            return {std::move(rep.solution), rep.final_relative_residual};
        }
        case SolverKind::Gmres: {
            SolveReport rep = gmres(ops.laplacian, b, nullptr, sp.gmres_restart, sp.tol,
                                    sp.maxiter, warm);
            return {std::move(rep.solution), rep.final_relative_residual};
        }
    }
    throw std::logic_error("solve_pressure: unknown solver kind");
}

Cochain ConvectionSetup::darcy_flux(const std::vector<double>& T,
                                    const std::vector<double>& P) const {
    Cochain Tc(mesh, 0);
    Tc.values = T;
    const Cochain buoy = wedge_01(Tc, gravity_form);
    const std::vector<double> dP = ops.d0.apply(P);
    Cochain q(mesh, 1);
    for (std::size_t e = 0; e < q.values.size(); ++e) {
        q.values[e] = -cfg.k_etaf * (dP[e] - cfg.alpha_rho0 * buoy.values[e]);
    }
    return q;
}

std::vector<double> ConvectionSetup::temperature_rhs(const std::vector<double>& T,
                                                     const Cochain& q) const {
    Cochain Tc(mesh, 0);
    Tc.values = T;
    const Cochain adv = lie_derivative_0(q, Tc, ops);
    std::vector<double> lap = ops.laplacian.apply(T);
    const double diff = cfg.diffusivity();
    std::vector<double> out(T.size());
    for (std::size_t v = 0; v < out.size(); ++v) {
        out[v] = is_wall[v] ? 0.0
                            : -(1.0 / cfg.phi) * adv.values[v] + diff * lap[v];
    }
    return out;
}

Cochain initial_temperature(const ConvectionSetup& setup) {
    const auto& mesh = *setup.mesh;
    const ConvectionConfig& cfg = setup.cfg;
    double xlo = mesh.positions[0].x, xhi = xlo, ylo = mesh.positions[0].y, yhi = ylo;
    for (const Vec3& p : mesh.positions) {
        xlo = std::min(xlo, p.x); xhi = std::max(xhi, p.x);
        ylo = std::min(ylo, p.y); yhi = std::max(yhi, p.y);
    }
    const double cx = 0.5 * (xlo + xhi), cy = 0.5 * (ylo + yhi);
    const double cov = cfg.gaussian_covariance;
    const double prefactor = cfg.gaussian_scale / (2.0 * std::numbers::pi * cov);

    Cochain T(setup.mesh, 0);
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        const double dx = mesh.positions[v].x - cx;
        const double dy = mesh.positions[v].y - cy;
        T.values[v] = prefactor * std::exp(-0.5 * (dx * dx + dy * dy) / cov);
    }
    for (int v : setup.wall_vertices) {
        T.values[v] = mesh.positions[v].y > cy ? cfg.T_top : cfg.T_bottom;
    }
    return T;
}

ConvectionRun integrate_convection(const ConvectionConfig& cfg) {
    const auto t0 = Clock::now();
    ConvectionSetup setup = ConvectionSetup::build(cfg);
    ConvectionRun run;
    run.mesh = setup.mesh;

    Cochain T0 = initial_temperature(setup);
    std::vector<double> T = T0.values;

    std::vector<double> sample_times;
    for (int i = 0; i < cfg.num_samples; ++i) {
        sample_times.push_back(cfg.t_final * i / std::max(1, cfg.num_samples - 1));
    }

    std::vector<double> warm;  // previous accepted pressure, empty at t = 0

    auto rhs = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
        const std::vector<double> b = setup.pressure_rhs(y);
        auto [P, res] = setup.solve_pressure_rhs(b, warm.empty() ? nullptr : &warm);
        run.max_pressure_residual = std::max(run.max_pressure_residual, res);
        ++run.pressure_solves;
        const Cochain q = setup.darcy_flux(y, P);
        // discrete divergence of the flux, relative to the projection source
        const Cochain div = codifferential_1(setup.ops, q);
        const double bn = kernels::norm2(b);
        if (bn > 0.0) {
            run.max_relative_divergence =
                std::max(run.max_relative_divergence, kernels::norm2(div.values) / bn);
        }
        warm = P;
        dy = setup.temperature_rhs(y, q);
    };

    auto sample = [&](double t, const std::vector<double>& y) {
        ConvectionSample s;
        s.t = t;
        s.T = y;
        auto [P, res] = setup.solve_pressure(y, warm.empty() ? nullptr : &warm);
        s.P = std::move(P);
        run.samples.push_back(std::move(s));
    };

    Rk54Options opts;
    opts.rtol = cfg.rtol;
    opts.atol = cfg.atol;
    if (cfg.t_final > 0.0) {
        run.stats = rk54_integrate(rhs, T, 0.0, cfg.t_final, sample_times, sample, opts);
    } else {
        sample(0.0, T);
    }
    run.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return run;
}

std::vector<double> rmse_over_time(const ConvectionRun& a, const ConvectionRun& b) {
    if (a.samples.size() != b.samples.size()) {
        throw std::invalid_argument("rmse_over_time: sample count mismatch");
    }
    std::vector<double> out;
    out.reserve(a.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const auto& Ta = a.samples[i].T;
        const auto& Tb = b.samples[i].T;
        if (Ta.size() != Tb.size()) {
            throw std::invalid_argument("rmse_over_time: mismatched grids");
        }
        if (std::abs(a.samples[i].t - b.samples[i].t) >
            1e-12 * std::max(1.0, std::abs(a.samples[i].t))) {
            throw std::invalid_argument("rmse_over_time: mismatched sample times");
        }
        double s = 0.0;
        for (std::size_t k = 0; k < Ta.size(); ++k) {
            const double d = Ta[k] - Tb[k];
            s += d * d;
        }
        out.push_back(std::sqrt(s / static_cast<double>(Ta.size())));
    }
    return out;
}

std::vector<double> poisson_rhs_divrho(const std::shared_ptr<const EmbeddedComplex2D>& mesh,
                                       const LaplacianOperators& ops,
                                       double alpha_rho0, double g,
                                       double gaussian_scale, double gaussian_cov) {
    double xlo = mesh->positions[0].x, xhi = xlo, ylo = mesh->positions[0].y, yhi = ylo;
    for (const Vec3& p : mesh->positions) {
        xlo = std::min(xlo, p.x); xhi = std::max(xhi, p.x);
        ylo = std::min(ylo, p.y); yhi = std::max(yhi, p.y);
    }
    const double cx = 0.5 * (xlo + xhi), cy = 0.5 * (ylo + yhi);
    const double prefactor = gaussian_scale / (2.0 * std::numbers::pi * gaussian_cov);
    Cochain T(mesh, 0);
    for (int v = 0; v < mesh->num_vertices(); ++v) {
        const double dx = mesh->positions[v].x - cx;
        const double dy = mesh->positions[v].y - cy;
        T.values[v] = alpha_rho0 * prefactor *
                      std::exp(-0.5 * (dx * dx + dy * dy) / gaussian_cov);
    }
    const Cochain gform = flat_constant(Vec3(0.0, g, 0.0), mesh);
    const Cochain wedge = wedge_01(T, gform);
    Cochain div = codifferential_1(ops, wedge);
    return std::move(div.values);
}

SolveReport solve_poisson(const PoissonConfig& cfg) {
    auto base = cfg.mesh.build();
    std::vector<SubdivisionResult> tower;
    std::shared_ptr<const EmbeddedComplex2D> fine = base;
    if (cfg.levels > 0) {
        tower = subdivision_tower(base, cfg.scheme, cfg.levels);
        fine = tower.front().fine;
    }
    const DualGeometry dual = build_dual(*fine);
    const LaplacianOperators ops = laplacian_0(*fine, dual);

    std::vector<double> b;
    if (cfg.rhs == PoissonConfig::Rhs::Random) {
        b = poisson_rhs_random(ops.laplacian, cfg.seed);
    } else {
        b = poisson_rhs_divrho(fine, ops, 1.0 / 9.81, 9.81, 400.0, 0.5);
    }

    const SolverSpec& sp = cfg.solver;
    SolveReport rep;
    switch (sp.kind) {
        case SolverKind::Direct: {
            PinnedDirectSolver direct(ops.laplacian, ops.dual_areas);
            const auto t0 = Clock::now();
            rep.solution = direct.solve(b);
            rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
            rep.iterations = 1;
            rep.converged = true;
            rep.config_echo["solver"] = "direct";
            break;
        }
        case SolverKind::Gmg: {
            MultigridHierarchy h = build_hierarchy(base, tower, sp.coarsenings);
            CyclePlan plan = standard_plan(h.levels(), sp.cycle, sp.pre_smooth,
                                           sp.post_smooth, sp.smoother_config());
            rep = gmg_solve(h, plan, b, sp.tol, sp.cycles);
            break;
        }
        case SolverKind::GmgPcg: {
            MultigridHierarchy h = build_hierarchy(base, tower, sp.coarsenings);
            CyclePlan plan = standard_plan(h.levels(), sp.cycle, sp.pre_smooth,
                                           sp.post_smooth, sp.smoother_config());
            plan.cycles = sp.precond_cycles;
            rep = gmg_preconditioned_cg(h, plan, b, sp.tol, sp.maxiter);
            break;
        }
        case SolverKind::Cg: {
            rep = weighted_cg(ops.laplacian, ops.dual_areas,
                              project_weighted_mean_zero(b, ops.dual_areas), sp.tol,
                              sp.maxiter);
            rep.config_echo["solver"] = "cg";
            break;
        }
        case SolverKind::Gmres: {
            rep = gmres(ops.laplacian, project_weighted_mean_zero(b, ops.dual_areas),
                        nullptr, sp.gmres_restart, sp.tol, sp.maxiter);
            rep.config_echo["solver"] = "gmres";
            break;
        }
    }
    rep.final_relative_residual = relative_residual(ops.laplacian, rep.solution, b);
    rep.config_echo["seed"] = cfg.seed;
    rep.config_echo["levels"] = cfg.levels;
    rep.config_echo["scheme"] = cfg.scheme == SubdivisionScheme::Binary ? "binary" : "cubic";
    rep.config_echo["rhs"] = cfg.rhs == PoissonConfig::Rhs::Random ? "random" : "divrho";
    return rep;
}

} // namespace decmg
