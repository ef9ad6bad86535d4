#pragma once

#include "decmg/geometry.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace decmg {

/// One violated validation rule with the offending simplex ids.
struct Violation {
    std::string rule;
    std::vector<int> simplices;
    std::string detail;
};

struct MeshDiagnostics {
    std::vector<Violation> violations;
    bool is_valid() const { return violations.empty(); }
    std::string summary() const;
};

/// A 2-D simplicial complex embedded in 3-space. Edges store an ordered
/// (src, tgt) vertex pair; triangles store an ordered edge triple
/// (e0, e1, e2) from which the corner cycle (v0, v1, v2) is derived:
/// v0 = e1 ∩ e2, v1 = e0 ∩ e2, v2 = e0 ∩ e1. The corner order carries the
/// triangle's orientation; generators emit counterclockwise corners.
class EmbeddedComplex2D {
public:
    std::vector<Vec3> positions;
    std::vector<std::array<int, 2>> edges;      // (src, tgt)
    std::vector<std::array<int, 3>> triangles;  // edge indices (e0, e1, e2)

    int num_vertices() const { return static_cast<int>(positions.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }
    int euler_characteristic() const {
        return num_vertices() - num_edges() + num_triangles();
    }

    int edge_src(int e) const { return edges[e][0]; }
    int edge_tgt(int e) const { return edges[e][1]; }

    /// Corner cycle (v0, v1, v2) of a triangle; requires derived corners
    /// (populated by from_triangles / finalize on a structurally sound mesh).
    const std::array<int, 3>& corners(int t) const { return tri_corners_[t]; }
    bool has_corners() const { return tri_corners_.size() == triangles.size(); }

    /// Edge index for an unordered vertex pair, -1 if absent.
    int find_edge(int a, int b) const;
    /// Triangle index for an unordered vertex triple, -1 if absent.
    int find_triangle(int a, int b, int c) const;

    const std::vector<std::vector<int>>& edges_of_vertex() const { return vertex_edges_; }
    const std::vector<std::vector<int>>& triangles_of_edge() const { return edge_triangles_; }

    /// Content hash over counts, connectivity, and position bits; used as the
    /// complex identity by geometric maps and serialized map headers.
    std::uint64_t hash() const { return hash_; }

    /// Builds the complex from per-triangle corner triples. Edges are the
    /// deduplicated unordered vertex pairs in lexicographic order, stored
    /// with src < tgt; each triangle's edge triple preserves the corner
    /// order given here.
    static std::shared_ptr<EmbeddedComplex2D> from_triangles(
        std::vector<Vec3> positions,
        const std::vector<std::array<int, 3>>& corner_triples);

    /// Builds lookup tables, derived corners, and the content hash from the
    /// raw member tables. Call after filling positions/edges/triangles by
    /// hand; corner derivation is skipped for triangles whose edges do not
    /// close up (validate_complex reports those).
    void finalize();

private:
    std::vector<std::array<int, 3>> tri_corners_;
    std::map<std::pair<int, int>, int> edge_lookup_;
    std::map<std::array<int, 3>, int> tri_lookup_;
    std::vector<std::vector<int>> vertex_edges_;
    std::vector<std::vector<int>> edge_triangles_;
    std::uint64_t hash_ = 0;
};

/// Checks every structural invariant and returns diagnostics; never throws.
MeshDiagnostics validate_complex(const EmbeddedComplex2D& c);

/// Circumcentric dual quantities of a complex.
struct DualGeometry {
    std::vector<Vec3> tri_circumcenter;
    std::vector<Vec3> edge_midpoint;
    std::vector<double> primal_edge_length;  // |e| > 0
    std::vector<double> tri_area;            // |t| > 0
    std::vector<double> dual_edge_length;    // |*e| >= 0
    std::vector<double> dual_cell_area;      // signed corner-wedge sums
    double total_area = 0.0;
};

/// Builds the circumcentric dual. Dual edge lengths sum the distance from
/// each incident triangle's circumcenter to the edge midpoint; dual cell
/// areas sum signed corner wedges so that the cells partition the surface
/// exactly. Throws on degenerate triangles or zero-length edges.
DualGeometry build_dual(const EmbeddedComplex2D& c);

/// Axis-aligned rectangle [0,lx]x[0,ly] triangulated with one diagonal per
/// cell (lower-left to upper-right).
std::shared_ptr<EmbeddedComplex2D> make_triangulated_grid(int nx, int ny,
                                                          double lx, double ly);

/// Sheared strip mesh of equilateral triangles: `rows` strip rows of `cols`
/// triangles each (alternating up/down). `cols` must be even unless rows == 1.
std::shared_ptr<EmbeddedComplex2D> make_equilateral_grid(int rows, int cols,
                                                         double side);

/// Rigid translation of every vertex (returns a new complex).
std::shared_ptr<EmbeddedComplex2D> translated(const EmbeddedComplex2D& c,
                                              const Vec3& offset);

// OBJ I/O restricted to `v x y z` and triangular `f i j k` records.
std::shared_ptr<EmbeddedComplex2D> read_obj(const std::string& path);
void write_obj(const EmbeddedComplex2D& c, const std::string& path);

/// JSON debug dump with positions / edges / triangles arrays.
std::string mesh_to_json(const EmbeddedComplex2D& c);

} // namespace decmg
