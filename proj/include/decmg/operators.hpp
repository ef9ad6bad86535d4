#pragma once

#include "decmg/mesh.hpp"
#include "decmg/sparse.hpp"

#include <memory>
#include <vector>

namespace decmg {

enum class Variance { Primal, Dual };

/// A discrete k-form: one value per k-simplex of its home complex.
struct Cochain {
    std::vector<double> values;
    int degree = 0;
    Variance variance = Variance::Primal;
    std::shared_ptr<const EmbeddedComplex2D> home;

    Cochain() = default;
    Cochain(std::shared_ptr<const EmbeddedComplex2D> c, int deg,
            Variance var = Variance::Primal);

    /// Simplex count for (degree, variance) on the home complex.
    static int expected_length(const EmbeddedComplex2D& c, int degree, Variance var);
    bool conforms() const;
    void require(int deg, Variance var, const char* what) const;
};

/// Options for Hodge-star assembly on meshes that are not well-centered.
struct HodgeOptions {
    /// Replace nonpositive dual cell areas by 1e-14 * mean area instead of
    /// raising an error.
    bool clamp_dual_areas = false;
};

// Exterior derivatives: signed incidence matrices. d1 * d0 == 0 exactly.
SparseOperator d0(const EmbeddedComplex2D& c);
SparseOperator d1(const EmbeddedComplex2D& c);

/// Diagonal 1-Hodge: |*e| / |e| per edge.
SparseOperator hodge_star_1(const EmbeddedComplex2D& c, const DualGeometry& dual);
/// Diagonal inverse 0-Hodge: 1 / |*v| per vertex. Errors on nonpositive
/// dual cells unless opts.clamp_dual_areas is set.
SparseOperator hodge_star_0_inv(const EmbeddedComplex2D& c, const DualGeometry& dual,
                                const HodgeOptions& opts = {});

/// Assembled 0-form Laplacian and its symmetric factor:
///   laplacian = star0_inv * (-d0^T) * star1 * d0
///   symmetric_part = -d0^T * star1 * d0   (negative semidefinite)
struct LaplacianOperators {
    SparseOperator d0;
    SparseOperator star1;
    SparseOperator star0_inv;
    SparseOperator symmetric_part;
    SparseOperator laplacian;
    std::vector<double> dual_areas;  // diagonal of star0
};

LaplacianOperators laplacian_0(const EmbeddedComplex2D& c, const DualGeometry& dual,
                               const HodgeOptions& opts = {});

/// delta applied to a primal 1-cochain; signed so that delta(d0 f) equals
/// laplacian * f as matrices.
Cochain codifferential_1(const LaplacianOperators& ops, const Cochain& alpha);

/// Primal 0-form / primal 1-form wedge: averages f over edge endpoints.
Cochain wedge_01(const Cochain& f, const Cochain& alpha);

/// Midpoint-rule flat of a per-vertex vector field.
Cochain flat(const std::vector<Vec3>& vertex_field,
             const std::shared_ptr<const EmbeddedComplex2D>& c);
Cochain flat_constant(const Vec3& v, const std::shared_ptr<const EmbeddedComplex2D>& c);

/// Lie derivative of a 0-form along a primal 1-form flux: the interior
/// product of d0 T, evaluated with the diagonal Hodge pairing
///   (L_q T)(v) = (1 / |*v|) * 1/2 * sum_{e at v} q_e (star1 d0 T)_e.
Cochain lie_derivative_0(const Cochain& q, const Cochain& T,
                         const LaplacianOperators& ops);

} // namespace decmg
