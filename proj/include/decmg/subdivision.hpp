#pragma once

#include "decmg/geometric_map.hpp"
#include "decmg/mesh.hpp"

#include <memory>
#include <variant>
#include <vector>

namespace decmg {

enum class SubdivisionScheme { Binary, Cubic };

/// Where a fine vertex came from.
struct CopiedVertex { int coarse_vertex; };
struct EdgePoint { int coarse_edge; double t; };                 // src -> tgt parameter
struct FacePoint { int coarse_triangle; double b0, b1, b2; };    // corner barycentrics
using VertexProvenance = std::variant<CopiedVertex, EdgePoint, FacePoint>;

struct SubdivisionResult {
    std::shared_ptr<EmbeddedComplex2D> fine;
    GeometricMap map;  // fine -> coarse
    std::vector<VertexProvenance> provenance;
};

/// 1 -> 4 split: new vertices at edge midpoints. Fine vertex numbering is
/// coarse vertices, then edge points by parent edge index.
SubdivisionResult binary_subdivide(const std::shared_ptr<const EmbeddedComplex2D>& c);

/// 1 -> 9 split: edge points at parameters 1/3 and 2/3 (in that order per
/// edge) and one face point per triangle, numbered after the edge points.
SubdivisionResult cubic_subdivide(const std::shared_ptr<const EmbeddedComplex2D>& c);

SubdivisionResult subdivide(const std::shared_ptr<const EmbeddedComplex2D>& c,
                            SubdivisionScheme scheme);

/// `levels` repeated subdivisions, returned finest first; entry k maps the
/// level-k complex to the next coarser one (entry levels-1 maps to `c`).
std::vector<SubdivisionResult> subdivision_tower(
    const std::shared_ptr<const EmbeddedComplex2D>& c, SubdivisionScheme scheme,
    int levels);

} // namespace decmg
