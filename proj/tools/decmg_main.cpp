// Command-line harness: Poisson benchmark runs, porous-convection runs, and
// mesh utilities, all emitting machine-readable CSV/JSON under --out.

#include "decmg/config.hpp"
#include "decmg/kernels.hpp"
#include "decmg/physics.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace decmg;

namespace {

// exit codes: 0 ok, 1 I/O, 2 usage, 3 validation, 4 solver failure
constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitSolver = 4;

struct CliError {
    int code;
    std::string message;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw CliError{kExitIo, "cannot write " + path.string()};
    out << text;
}

RunConfig load_config_or_default(const std::string& path) {
    if (path.empty()) return RunConfig{};
    try {
        return load_run_config(path);
    } catch (const std::runtime_error& e) {
        throw CliError{kExitIo, e.what()};
    } catch (const std::invalid_argument& e) {
        throw CliError{kExitValidation, e.what()};
    }
}

void write_trajectory_csv(const fs::path& dir, const ConvectionRun& run,
                          const EmbeddedComplex2D& mesh) {
    for (std::size_t i = 0; i < run.samples.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "traj_%03zu.csv", i);
        std::FILE* f = std::fopen((dir / name).string().c_str(), "w");
        if (!f) throw CliError{kExitIo, "cannot write trajectory CSV"};
        std::fprintf(f, "vertex,x,y,T,P\n");
        const auto& s = run.samples[i];
        for (int v = 0; v < mesh.num_vertices(); ++v) {
            std::fprintf(f, "%d,%.17g,%.17g,%.17g,%.17g\n", v, mesh.positions[v].x,
                         mesh.positions[v].y, s.T[v], s.P[v]);
        }
        std::fclose(f);
    }
    std::FILE* f = std::fopen((dir / "sample_times.csv").string().c_str(), "w");
    if (!f) throw CliError{kExitIo, "cannot write sample_times.csv"};
    std::fprintf(f, "sample,t\n");
    for (std::size_t i = 0; i < run.samples.size(); ++i) {
        std::fprintf(f, "%zu,%.17g\n", i, run.samples[i].t);
    }
    std::fclose(f);
}

std::vector<std::vector<double>> read_reference_T(const fs::path& dir, std::size_t nsamples) {
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < nsamples; ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "traj_%03zu.csv", i);
        std::ifstream in(dir / name);
        if (!in) throw CliError{kExitIo, "reference run misses " + (dir / name).string()};
        std::string line;
        std::getline(in, line);  // header
        std::vector<double> T;
        while (std::getline(in, line)) {
            // vertex,x,y,T,P
            std::size_t pos = 0;
            for (int c = 0; c < 3; ++c) pos = line.find(',', pos) + 1;
            const std::size_t end = line.find(',', pos);
            T.push_back(std::stod(line.substr(pos, end - pos)));
        }
        out.push_back(std::move(T));
    }
    return out;
}

int run_poisson(const std::string& config_path, std::optional<int> levels,
                std::optional<std::string> scheme, std::optional<int> cycles,
                std::optional<std::string> solver, std::optional<std::uint64_t> seed,
                std::string out_dir, bool timing) {
    RunConfig cfg = load_config_or_default(config_path);
    if (levels) cfg.tower_levels = *levels;
    if (scheme) cfg.scheme = parse_scheme(*scheme);
    if (cycles) cfg.solver.cycles = *cycles;
    if (solver) cfg.solver.kind = parse_solver_kind(*solver);
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.output_dir = out_dir;

    fs::create_directories(cfg.output_dir);
    PoissonConfig pc = cfg.poisson_config();
    SolveReport rep;
    try {
        rep = solve_poisson(pc);
    } catch (const std::exception& e) {
        throw CliError{kExitSolver, std::string("solver failure: ") + e.what()};
    }
    rep.config_echo["run"] = cfg.echo();
    write_text(fs::path(cfg.output_dir) / "report.json", rep.to_json().dump(2) + "\n");
    rep.write_residual_csv((fs::path(cfg.output_dir) / "residuals.csv").string());

    if (timing) {
        // Per-cycle cost via the 20-minus-10 protocol on this hierarchy.
        auto base = pc.mesh.build();
        auto tower = subdivision_tower(base, pc.scheme, pc.levels);
        MultigridHierarchy h = build_hierarchy(base, tower, pc.solver.coarsenings);
        CyclePlan plan = standard_plan(h.levels(), pc.solver.cycle, pc.solver.pre_smooth,
                                       pc.solver.post_smooth, pc.solver.smoother_config());
        const auto& L = h.fine_operator();
        std::vector<double> b = h.project_compatible(poisson_rhs_random(L, cfg.seed));
        std::vector<double> x0(b.size(), 0.0);
        auto time_cycles = [&](int n) {
            CyclePlan p = plan;
            p.cycles = n;
            const auto t0 = std::chrono::steady_clock::now();
            h.run_cycle(p, b, x0);
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        };
        const double t10 = time_cycles(10);
        const double t20 = time_cycles(20);
        std::FILE* f =
            std::fopen((fs::path(cfg.output_dir) / "percycle_timing.csv").string().c_str(), "w");
        if (!f) throw CliError{kExitIo, "cannot write percycle_timing.csv"};
        std::fprintf(f, "fine_vertices,seconds_per_cycle\n");
        std::fprintf(f, "%d,%.17g\n", L.rows(), (t20 - t10) / 10.0);
        std::fclose(f);
    }
    std::printf("poisson: solver=%s levels=%d rel_residual=%.3e (report in %s)\n",
                to_string(pc.solver.kind).c_str(), pc.levels,
                rep.final_relative_residual, cfg.output_dir.c_str());
    return kExitOk;
}

int run_convection(const std::string& config_path, std::optional<std::string> solver,
                   std::optional<double> tfinal, std::string out_dir,
                   const std::string& reference_dir) {
    RunConfig cfg = load_config_or_default(config_path);
    if (solver) cfg.convection.pressure_solver.kind = parse_solver_kind(*solver);
    if (tfinal) cfg.convection.t_final = *tfinal;
    if (!out_dir.empty()) cfg.output_dir = out_dir;

    fs::create_directories(cfg.output_dir);
    ConvectionRun run;
    try {
        run = integrate_convection(cfg.convection);
    } catch (const std::exception& e) {
        throw CliError{kExitSolver, std::string("solver failure: ") + e.what()};
    }
    write_trajectory_csv(cfg.output_dir, run, *run.mesh);

    json summary;
    summary["run"] = cfg.echo();
    summary["accepted_steps"] = run.stats.accepted;
    summary["rejected_steps"] = run.stats.rejected;
    summary["rhs_evaluations"] = run.stats.rhs_evaluations;
    summary["pressure_solves"] = run.pressure_solves;
    summary["max_relative_divergence"] = run.max_relative_divergence;
    summary["max_pressure_residual"] = run.max_pressure_residual;
    summary["wall_seconds"] = run.wall_seconds;
    summary["integrator"] = run.stats.method;

    if (!reference_dir.empty()) {
        const auto refT = read_reference_T(reference_dir, run.samples.size());
        std::FILE* f = std::fopen((fs::path(cfg.output_dir) / "rmse.csv").string().c_str(), "w");
        if (!f) throw CliError{kExitIo, "cannot write rmse.csv"};
        std::fprintf(f, "t,rmse\n");
        double final_rmse = 0.0;
        for (std::size_t i = 0; i < run.samples.size(); ++i) {
            if (refT[i].size() != run.samples[i].T.size()) {
                std::fclose(f);
                throw CliError{kExitValidation, "reference run has mismatched grid"};
            }
            double s = 0.0;
            for (std::size_t k = 0; k < refT[i].size(); ++k) {
                const double d = run.samples[i].T[k] - refT[i][k];
                s += d * d;
            }
            const double rmse = std::sqrt(s / static_cast<double>(refT[i].size()));
            final_rmse = rmse;
            // t = 0 is exactly zero by construction; keep the row, plots can
            // elide it from log scales.
            std::fprintf(f, "%.17g,%.17g\n", run.samples[i].t, rmse);
        }
        std::fclose(f);
        summary["final_rmse_vs_reference"] = final_rmse;
    }
    write_text(fs::path(cfg.output_dir) / "summary.json", summary.dump(2) + "\n");
    std::printf("convection: solver=%s t_final=%g steps=%ld (outputs in %s)\n",
                to_string(cfg.convection.pressure_solver.kind).c_str(),
                cfg.convection.t_final, run.stats.accepted, cfg.output_dir.c_str());
    return kExitOk;
}

int run_mesh_generate(const std::string& kind, std::vector<double> args,
                      const std::string& out_path) {
    std::shared_ptr<EmbeddedComplex2D> mesh;
    if (kind == "grid") {
        if (args.size() < 2) throw CliError{kExitUsage, "generate grid needs nx ny [lx ly]"};
        const double lx = args.size() > 2 ? args[2] : 1.0;
        const double ly = args.size() > 3 ? args[3] : 1.0;
        mesh = make_triangulated_grid(static_cast<int>(args[0]), static_cast<int>(args[1]),
                                      lx, ly);
    } else if (kind == "equilateral") {
        if (args.size() < 2)
            throw CliError{kExitUsage, "generate equilateral needs rows cols [side]"};
        const double side = args.size() > 2 ? args[2] : 1.0;
        mesh = make_equilateral_grid(static_cast<int>(args[0]), static_cast<int>(args[1]),
                                     side);
    } else {
        throw CliError{kExitUsage, "unknown generator '" + kind + "'"};
    }
    write_obj(*mesh, out_path);
    std::printf("wrote %s: %d vertices, %d edges, %d triangles\n", out_path.c_str(),
                mesh->num_vertices(), mesh->num_edges(), mesh->num_triangles());
    return kExitOk;
}

int run_mesh_subdivide(const std::string& in_path, const std::string& scheme_name,
                       int iterations, const std::string& out_mesh,
                       const std::string& out_map) {
    auto scheme = parse_scheme(scheme_name);
    std::shared_ptr<const EmbeddedComplex2D> mesh;
    try {
        mesh = read_obj(in_path);
    } catch (const std::exception& e) {
        throw CliError{kExitIo, e.what()};
    }
    auto tower = subdivision_tower(mesh, scheme, iterations);
    write_obj(*tower.front().fine, out_mesh);
    GeometricMap whole = tower.front().map;
    for (std::size_t i = 1; i < tower.size(); ++i) {
        whole = compose(tower[i].map, whole);
    }
    if (!out_map.empty()) {
        save_map(whole, out_map, out_map + ".json");
    }
    std::printf("subdivided %s x%d (%s): %d vertices, %d edges, %d triangles\n",
                in_path.c_str(), iterations, scheme_name.c_str(),
                tower.front().fine->num_vertices(), tower.front().fine->num_edges(),
                tower.front().fine->num_triangles());
    return kExitOk;
}

int run_mesh_inspect(const std::string& path) {
    std::shared_ptr<EmbeddedComplex2D> mesh;
    try {
        mesh = read_obj(path);
    } catch (const std::runtime_error& e) {
        // parse errors are validation failures for inspect
        std::fprintf(stderr, "%s\n", e.what());
        return kExitValidation;
    }
    const MeshDiagnostics diag = validate_complex(*mesh);
    std::printf("vertices:  %d\nedges:     %d\ntriangles: %d\neuler:     %d\n",
                mesh->num_vertices(), mesh->num_edges(), mesh->num_triangles(),
                mesh->euler_characteristic());
    std::printf("valid:     %s\n", diag.is_valid() ? "yes" : "no");
    if (!diag.is_valid()) {
        std::printf("%s", diag.summary().c_str());
        return kExitValidation;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete exterior calculus multigrid toolkit"};
    app.require_subcommand(1);

    // poisson
    auto* poisson = app.add_subcommand("poisson", "Poisson benchmark run");
    std::string p_config, p_out, p_scheme, p_solver;
    int p_levels = -1, p_cycles = -1;
    std::int64_t p_seed = -1;
    bool p_timing = false;
    poisson->add_option("--config", p_config, "JSON config file");
    poisson->add_option("--levels", p_levels, "subdivision levels");
    poisson->add_option("--scheme", p_scheme, "binary|cubic")
        ->check(CLI::IsMember({"binary", "cubic"}));
    poisson->add_option("--cycles", p_cycles, "multigrid cycles");
    poisson->add_option("--solver", p_solver, "direct|gmg|cg|gmg_pcg|gmres")
        ->check(CLI::IsMember({"direct", "gmg", "cg", "gmg_pcg", "gmres"}));
    poisson->add_option("--seed", p_seed, "rhs seed");
    poisson->add_option("--out", p_out, "output directory");
    poisson->add_flag("--timing", p_timing, "emit per-cycle timing (20-minus-10 protocol)");

    // convection
    auto* conv = app.add_subcommand("convection", "porous convection run");
    std::string c_config, c_out, c_solver, c_reference;
    double c_tfinal = -1.0;
    conv->add_option("--config", c_config, "JSON config file");
    conv->add_option("--solver", c_solver, "pressure solver: gmg|direct|gmres|cg|gmg_pcg")
        ->check(CLI::IsMember({"direct", "gmg", "cg", "gmg_pcg", "gmres"}));
    conv->add_option("--tfinal", c_tfinal, "final time");
    conv->add_option("--out", c_out, "output directory");
    conv->add_option("--reference", c_reference, "reference run directory for rmse.csv");

    // mesh
    auto* mesh = app.add_subcommand("mesh", "mesh utilities");
    mesh->require_subcommand(1);
    auto* gen = mesh->add_subcommand("generate", "generate a mesh OBJ");
    std::string g_kind, g_out = "mesh.obj";
    std::vector<double> g_args;
    gen->add_option("kind", g_kind, "grid|equilateral")->required();
    gen->add_option("args", g_args, "grid: nx ny [lx ly]; equilateral: rows cols [side]")
        ->expected(-2);
    gen->add_option("--out", g_out, "output OBJ path");

    auto* sub = mesh->add_subcommand("subdivide", "subdivide an OBJ mesh");
    std::string s_in, s_scheme = "binary", s_out = "fine.obj", s_map;
    int s_iters = 1;
    sub->add_option("input", s_in, "input OBJ")->required();
    sub->add_option("--scheme", s_scheme, "binary|cubic")
        ->check(CLI::IsMember({"binary", "cubic"}));
    sub->add_option("--iterations", s_iters, "subdivision count");
    sub->add_option("--out-mesh", s_out, "output OBJ path");
    sub->add_option("--out-map", s_map, "output Matrix Market map path");

    auto* ins = mesh->add_subcommand("inspect", "validate and describe an OBJ mesh");
    std::string i_in;
    ins->add_option("input", i_in, "input OBJ")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*poisson) {
            return run_poisson(p_config,
                               p_levels >= 0 ? std::optional<int>(p_levels) : std::nullopt,
                               p_scheme.empty() ? std::nullopt : std::optional(p_scheme),
                               p_cycles >= 0 ? std::optional<int>(p_cycles) : std::nullopt,
                               p_solver.empty() ? std::nullopt : std::optional(p_solver),
                               p_seed >= 0 ? std::optional<std::uint64_t>(p_seed)
                                           : std::nullopt,
                               p_out, p_timing);
        }
        if (*conv) {
            return run_convection(c_config,
                                  c_solver.empty() ? std::nullopt : std::optional(c_solver),
                                  c_tfinal >= 0 ? std::optional<double>(c_tfinal)
                                                : std::nullopt,
                                  c_out, c_reference);
        }
        if (*gen) return run_mesh_generate(g_kind, g_args, g_out);
        if (*sub) return run_mesh_subdivide(s_in, s_scheme, s_iters, s_out, s_map);
        if (*ins) return run_mesh_inspect(i_in);
    } catch (const CliError& e) {
        std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return e.code;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    }
    return kExitUsage;
}
