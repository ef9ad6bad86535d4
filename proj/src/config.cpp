#include "decmg/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace decmg {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw std::invalid_argument(where + ": unknown key '" + it.key() + "'");
        }
    }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

CycleKind parse_cycle(const std::string& s) {
    if (s == "v") return CycleKind::V;
    if (s == "w") return CycleKind::W;
    if (s == "f") return CycleKind::F;
    throw std::invalid_argument("unknown cycle kind '" + s + "' (expected v|w|f)");
}

Smoother parse_smoother(const std::string& s) {
    if (s == "gauss_seidel") return Smoother::GaussSeidel;
    if (s == "symmetric_gauss_seidel") return Smoother::SymmetricGaussSeidel;
    if (s == "jacobi") return Smoother::WeightedJacobi;
    if (s == "cg") return Smoother::Cg;
    throw std::invalid_argument("unknown smoother '" + s + "'");
}

std::string smoother_name(Smoother s) {
    switch (s) {
        case Smoother::GaussSeidel: return "gauss_seidel";
        case Smoother::SymmetricGaussSeidel: return "symmetric_gauss_seidel";
        case Smoother::WeightedJacobi: return "jacobi";
        case Smoother::Cg: return "cg";
    }
    return "?";
}

std::string cycle_name(CycleKind c) {
    switch (c) {
        case CycleKind::V: return "v";
        case CycleKind::W: return "w";
        case CycleKind::F: return "f";
    }
    return "?";
}

MeshSpec parse_mesh(const json& j) {
    require_keys(j, "mesh",
                 {"type", "nx", "ny", "lx", "ly", "rows", "cols", "side", "path"});
    MeshSpec m;
    std::string type = "equilateral";
    get_if(j, "type", type);
    if (type == "grid") m.kind = MeshSpec::Kind::Grid;
    else if (type == "equilateral") m.kind = MeshSpec::Kind::Equilateral;
    else if (type == "obj") m.kind = MeshSpec::Kind::Obj;
    else throw std::invalid_argument("mesh.type: unknown '" + type + "'");
    get_if(j, "nx", m.nx);
    get_if(j, "ny", m.ny);
    get_if(j, "lx", m.lx);
    get_if(j, "ly", m.ly);
    get_if(j, "rows", m.rows);
    get_if(j, "cols", m.cols);
    get_if(j, "side", m.side);
    get_if(j, "path", m.path);
    if (m.kind == MeshSpec::Kind::Obj && m.path.empty()) {
        throw std::invalid_argument("mesh.path required for type 'obj'");
    }
    return m;
}

SolverSpec parse_solver(const json& j) {
    require_keys(j, "solver",
                 {"kind", "plan", "smoother", "iters", "tol", "maxiter", "cycles",
                  "precond_cycles", "gmres_restart", "coarsenings", "jacobi_omega"});
    SolverSpec s;
    std::string kind = "gmg";
    get_if(j, "kind", kind);
    s.kind = parse_solver_kind(kind);
    if (j.contains("plan")) s.cycle = parse_cycle(j.at("plan").get<std::string>());
    if (j.contains("smoother")) s.smoother = parse_smoother(j.at("smoother").get<std::string>());
    if (j.contains("iters")) {
        const auto& it = j.at("iters");
        if (it.is_array()) {
            if (it.size() != 2) throw std::invalid_argument("solver.iters: expected [pre, post]");
            s.pre_smooth = it[0].get<int>();
            s.post_smooth = it[1].get<int>();
        } else {
            s.pre_smooth = s.post_smooth = it.get<int>();
        }
    }
    get_if(j, "tol", s.tol);
    get_if(j, "maxiter", s.maxiter);
    get_if(j, "cycles", s.cycles);
    get_if(j, "precond_cycles", s.precond_cycles);
    get_if(j, "gmres_restart", s.gmres_restart);
    get_if(j, "coarsenings", s.coarsenings);
    get_if(j, "jacobi_omega", s.jacobi_omega);
    return s;
}

ConvectionConfig parse_convection(const json& j, const SolverSpec& solver) {
    require_keys(j, "convection",
                 {"nx", "ny", "lx", "ly", "levels", "g", "alpha_rho0", "phi", "Ra",
                  "k_etaf", "dT_walls", "T_top", "T_bottom", "gaussian_scale",
                  "gaussian_covariance", "t_final", "rtol", "atol", "num_samples"});
    ConvectionConfig c;
    c.pressure_solver = solver;
    get_if(j, "nx", c.nx);
    get_if(j, "ny", c.ny);
    get_if(j, "lx", c.lx);
    get_if(j, "ly", c.ly);
    get_if(j, "levels", c.levels);
    get_if(j, "g", c.g);
    get_if(j, "alpha_rho0", c.alpha_rho0);
    get_if(j, "phi", c.phi);
    get_if(j, "Ra", c.Ra);
    get_if(j, "k_etaf", c.k_etaf);
    get_if(j, "dT_walls", c.dT_walls);
    get_if(j, "T_top", c.T_top);
    get_if(j, "T_bottom", c.T_bottom);
    get_if(j, "gaussian_scale", c.gaussian_scale);
    get_if(j, "gaussian_covariance", c.gaussian_covariance);
    get_if(j, "t_final", c.t_final);
    get_if(j, "rtol", c.rtol);
    get_if(j, "atol", c.atol);
    get_if(j, "num_samples", c.num_samples);
    return c;
}

} // namespace

SolverKind parse_solver_kind(const std::string& s) {
    if (s == "direct") return SolverKind::Direct;
    if (s == "gmg") return SolverKind::Gmg;
    if (s == "cg") return SolverKind::Cg;
    if (s == "gmg_pcg") return SolverKind::GmgPcg;
    if (s == "gmres") return SolverKind::Gmres;
    throw std::invalid_argument("unknown solver kind '" + s + "'");
}

SubdivisionScheme parse_scheme(const std::string& s) {
    if (s == "binary") return SubdivisionScheme::Binary;
    if (s == "cubic") return SubdivisionScheme::Cubic;
    throw std::invalid_argument("unknown scheme '" + s + "' (expected binary|cubic)");
}

std::string to_string(SolverKind k) {
    switch (k) {
        case SolverKind::Direct: return "direct";
        case SolverKind::Gmg: return "gmg";
        case SolverKind::Cg: return "cg";
        case SolverKind::GmgPcg: return "gmg_pcg";
        case SolverKind::Gmres: return "gmres";
    }
    return "?";
}

std::string to_string(SubdivisionScheme s) {
    return s == SubdivisionScheme::Binary ? "binary" : "cubic";
}

RunConfig parse_run_config(const nlohmann::json& j) {
    require_keys(j, "config", {"mesh", "tower", "solver", "poisson", "convection", "output"});
    RunConfig cfg;
    if (j.contains("mesh")) cfg.mesh = parse_mesh(j.at("mesh"));
    if (j.contains("tower")) {
        const auto& t = j.at("tower");
        require_keys(t, "tower", {"scheme", "levels"});
        if (t.contains("scheme")) cfg.scheme = parse_scheme(t.at("scheme").get<std::string>());
        get_if(t, "levels", cfg.tower_levels);
    }
    if (j.contains("solver")) cfg.solver = parse_solver(j.at("solver"));
    if (j.contains("poisson")) {
        const auto& p = j.at("poisson");
        require_keys(p, "poisson", {"rhs", "seed"});
        if (p.contains("rhs")) {
            const std::string r = p.at("rhs").get<std::string>();
            if (r == "random") cfg.poisson_rhs = PoissonConfig::Rhs::Random;
            else if (r == "divrho") cfg.poisson_rhs = PoissonConfig::Rhs::DivRho;
            else throw std::invalid_argument("poisson.rhs: unknown '" + r + "'");
        }
        get_if(p, "seed", cfg.seed);
    }
    if (j.contains("convection")) {
        cfg.convection = parse_convection(j.at("convection"), cfg.solver);
    } else {
        cfg.convection.pressure_solver = cfg.solver;
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        require_keys(o, "output", {"dir", "formats"});
        get_if(o, "dir", cfg.output_dir);
        get_if(o, "formats", cfg.output_formats);
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    return parse_run_config(j);
}

PoissonConfig RunConfig::poisson_config() const {
    PoissonConfig p;
    p.mesh = mesh;
    p.scheme = scheme;
    p.levels = tower_levels;
    p.rhs = poisson_rhs;
    p.seed = seed;
    p.solver = solver;
    return p;
}

nlohmann::json RunConfig::echo() const {
    json j;
    json m;
    switch (mesh.kind) {
        case MeshSpec::Kind::Grid:
            m = {{"type", "grid"}, {"nx", mesh.nx}, {"ny", mesh.ny},
                 {"lx", mesh.lx}, {"ly", mesh.ly}};
            break;
        case MeshSpec::Kind::Equilateral:
            m = {{"type", "equilateral"}, {"rows", mesh.rows}, {"cols", mesh.cols},
                 {"side", mesh.side}};
            break;
        case MeshSpec::Kind::Obj:
            m = {{"type", "obj"}, {"path", mesh.path}};
            break;
    }
    j["mesh"] = m;
    j["tower"] = {{"scheme", to_string(scheme)}, {"levels", tower_levels}};
    j["solver"] = {{"kind", to_string(solver.kind)},
                   {"plan", cycle_name(solver.cycle)},
                   {"smoother", smoother_name(solver.smoother)},
                   {"iters", {solver.pre_smooth, solver.post_smooth}},
                   {"tol", solver.tol},
                   {"maxiter", solver.maxiter},
                   {"cycles", solver.cycles},
                   {"precond_cycles", solver.precond_cycles},
                   {"gmres_restart", solver.gmres_restart},
                   {"coarsenings", solver.coarsenings}};
    j["poisson"] = {{"rhs", poisson_rhs == PoissonConfig::Rhs::Random ? "random" : "divrho"},
                    {"seed", seed}};
    j["convection"] = {{"nx", convection.nx}, {"ny", convection.ny},
                       {"lx", convection.lx}, {"ly", convection.ly},
                       {"levels", convection.levels}, {"g", convection.g},
                       {"alpha_rho0", convection.alpha_rho0}, {"phi", convection.phi},
                       {"Ra", convection.Ra}, {"k_etaf", convection.k_etaf},
                       {"dT_walls", convection.dT_walls}, {"T_top", convection.T_top},
                       {"T_bottom", convection.T_bottom},
                       {"gaussian_scale", convection.gaussian_scale},
                       {"gaussian_covariance", convection.gaussian_covariance},
                       {"t_final", convection.t_final}, {"rtol", convection.rtol},
                       {"atol", convection.atol},
                       {"num_samples", convection.num_samples},
                       {"integrator", "dormand-prince-5(4)"}};
    j["output"] = {{"dir", output_dir}, {"formats", output_formats}};
    return j;
}

} // namespace decmg
