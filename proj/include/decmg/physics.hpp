#pragma once

#include "decmg/multigrid.hpp"
#include "decmg/operators.hpp"
#include "decmg/rk54.hpp"
#include "decmg/solvers.hpp"
#include "decmg/subdivision.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace decmg {

enum class SolverKind { Direct, Gmg, Cg, GmgPcg, Gmres };

struct SolverSpec {
    SolverKind kind = SolverKind::Gmg;
    CycleKind cycle = CycleKind::W;
    Smoother smoother = Smoother::GaussSeidel;
    int pre_smooth = 3;
    int post_smooth = 3;
    int cycles = 5;            // standalone GMG cycles per solve attempt
    int precond_cycles = 2;    // inner cycles when used as a preconditioner
    double tol = 1e-8;
    int maxiter = 2000;
    int gmres_restart = 30;
    int coarsenings = 0;       // hierarchy meshes used; 0 = all available
    double jacobi_omega = 2.0 / 3.0;

    SmootherConfig smoother_config() const { return {smoother, jacobi_omega}; }
};

struct MeshSpec {
    enum class Kind { Grid, Equilateral, Obj } kind = Kind::Equilateral;
    int nx = 8, ny = 8;
    double lx = 1.0, ly = 1.0;
    int rows = 4, cols = 8;
    double side = 1.0;
    std::string path;

    std::shared_ptr<EmbeddedComplex2D> build() const;
};

struct PoissonConfig {
    MeshSpec mesh;
    SubdivisionScheme scheme = SubdivisionScheme::Binary;
    int levels = 3;  // subdivisions applied to the base mesh
    enum class Rhs { Random, DivRho } rhs = Rhs::Random;
    std::uint64_t seed = 0;
    SolverSpec solver;
};

/// b = L r with r uniform in [0,1) from the seeded generator.
std::vector<double> poisson_rhs_random(const SparseOperator& L, std::uint64_t seed);

struct ConvectionConfig {
    int nx = 32, ny = 32;      // finest grid cells
    double lx = 2.0, ly = 2.0; // domain extents, centered on the origin
    int levels = 3;            // hierarchy depth (requires nx, ny divisible by 2^(levels-1))
    double g = 9.81;           // m/s^2
    double alpha_rho0 = 1.0 / 9.81;  // so alpha_rho0 * g = 1
    double phi = 0.1;
    double Ra = 1000.0;
    double k_etaf = 1.0;
    double dT_walls = 200.0;   // degrees C between the walls
    double T_top = -100.0;
    double T_bottom = 100.0;
    double gaussian_scale = 400.0;
    double gaussian_covariance = 0.5;  // Sigma = cov * I
    double t_final = 0.5;
    double rtol = 1e-9;
    double atol = 1e-9;
    int num_samples = 11;      // trajectory samples including t = 0
    SolverSpec pressure_solver;

    /// lambda / (rho0 cp) = (1/Ra) g alpha_rho0 k_etaf dT_walls y_max (1/phi).
    double diffusivity() const {
        return (1.0 / Ra) * g * alpha_rho0 * k_etaf * dT_walls * ly * (1.0 / phi);
    }
    void check() const;
};

/// Everything the convection right-hand side needs, assembled once.
struct ConvectionSetup {
    ConvectionConfig cfg;
    std::shared_ptr<const EmbeddedComplex2D> mesh;
    LaplacianOperators ops;
    Cochain gravity_form;            // buoyancy direction (+y) times g
    std::vector<int> wall_vertices;  // top and bottom rows
    std::vector<char> is_wall;
    std::unique_ptr<MultigridHierarchy> hierarchy;  // for gmg / gmg_pcg
    std::unique_ptr<PinnedDirectSolver> direct;     // for direct pressure solves
    CyclePlan gmg_plan;

    static ConvectionSetup build(const ConvectionConfig& cfg);

    /// Solves laplacian P = delta(g_form wedge (alpha_rho0 T)). Warm starts
    /// from `warm` when given. Returns the pressure and the relative
    /// residual of the solve.
    std::pair<std::vector<double>, double> solve_pressure(
        const std::vector<double>& T, const std::vector<double>* warm) const;
    std::pair<std::vector<double>, double> solve_pressure_rhs(
        const std::vector<double>& b, const std::vector<double>* warm) const;

    std::vector<double> pressure_rhs(const std::vector<double>& T) const;
    Cochain darcy_flux(const std::vector<double>& T, const std::vector<double>& P) const;
    /// dT/dt = -(1/phi) Lie_q T + diffusivity * laplacian T, zeroed on walls.
    std::vector<double> temperature_rhs(const std::vector<double>& T,
                                        const Cochain& q) const;
};

Cochain initial_temperature(const ConvectionSetup& setup);

struct ConvectionSample {
    double t = 0.0;
    std::vector<double> T;
    std::vector<double> P;
};

struct ConvectionRun {
    std::shared_ptr<const EmbeddedComplex2D> mesh;
    std::vector<ConvectionSample> samples;
    Rk54Stats stats;
    double max_relative_divergence = 0.0;  // ||delta q|| / ||rhs|| over all solves
    double max_pressure_residual = 0.0;
    long pressure_solves = 0;
    double wall_seconds = 0.0;
};

ConvectionRun integrate_convection(const ConvectionConfig& cfg);

/// Per-sample root-mean-square difference of the temperature fields.
std::vector<double> rmse_over_time(const ConvectionRun& a, const ConvectionRun& b);

/// Driver for the Poisson benchmark: builds the tower, assembles the
/// right-hand side, dispatches to the configured solver, and rechecks the
/// reported residual from scratch.
SolveReport solve_poisson(const PoissonConfig& cfg);

/// Pressure right-hand side delta(g wedge (alpha_rho0 T)) for the initial
/// temperature field of the convection problem, evaluated on an arbitrary
/// mesh (used as the "divrho" Poisson data).
std::vector<double> poisson_rhs_divrho(const std::shared_ptr<const EmbeddedComplex2D>& mesh,
                                       const LaplacianOperators& ops,
                                       double alpha_rho0, double g,
                                       double gaussian_scale, double gaussian_cov);

} // namespace decmg
