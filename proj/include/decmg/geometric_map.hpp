#pragma once

#include "decmg/mesh.hpp"
#include "decmg/operators.hpp"
#include "decmg/sparse.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace decmg {

/// A simplexwise-affine map between complexes, stored per domain vertex as a
/// sparse global barycentric coordinate vector over the codomain vertices
/// (at most 3 nonzeros, nonnegative, summing to 1, supported on the vertex
/// set of a single codomain simplex).
class GeometricMap {
public:
    using Column = std::vector<std::pair<int, double>>;  // (codomain vertex, weight)

    GeometricMap() = default;

    /// Canonicalizing constructor: weights within 1e-12 of zero are snapped
    /// away and each column is renormalized to unit sum.
    static GeometricMap make(std::shared_ptr<const EmbeddedComplex2D> domain,
                             std::shared_ptr<const EmbeddedComplex2D> codomain,
                             std::vector<Column> columns);

    /// No canonicalization; for building deliberately broken maps in tests.
    static GeometricMap raw(std::shared_ptr<const EmbeddedComplex2D> domain,
                            std::shared_ptr<const EmbeddedComplex2D> codomain,
                            std::vector<Column> columns);

    const std::shared_ptr<const EmbeddedComplex2D>& domain() const { return domain_; }
    const std::shared_ptr<const EmbeddedComplex2D>& codomain() const { return codomain_; }
    const std::vector<Column>& columns() const { return columns_; }

    /// n_codomain x n_domain column-stochastic matrix; column j holds the
    /// barycentric coordinates of the image of domain vertex j.
    SparseOperator matrix() const;

private:
    std::shared_ptr<const EmbeddedComplex2D> domain_, codomain_;
    std::vector<Column> columns_;
};

/// Checks nonnegativity, unit column sums, the <=3 support bound, support
/// realizability as a codomain simplex, and containment of every domain
/// simplex image in a single codomain simplex.
MeshDiagnostics validate_map(const GeometricMap& f);

GeometricMap identity_map(const std::shared_ptr<const EmbeddedComplex2D>& c);

/// Validated matrix of a map (throws if validate_map fails).
SparseOperator matrix_of(const GeometricMap& f);

/// g after f; requires codomain(f) == domain(g).
GeometricMap compose(const GeometricMap& g, const GeometricMap& f);

/// Pulls a codomain 0-cochain back to the domain: u_dom = M(f)^T u_cod.
Cochain interpolate(const GeometricMap& f, const Cochain& field_on_codomain);

/// Full-weighting restriction: row-normalization of M(f), applied to domain
/// (fine) column vectors. Errors if some codomain vertex has an all-zero row.
SparseOperator restriction_matrix(const GeometricMap& f);

/// Matrix Market dump of M(f) plus a JSON header naming the mesh hashes.
void save_map(const GeometricMap& f, const std::string& matrix_path,
              const std::string& header_path);

} // namespace decmg
