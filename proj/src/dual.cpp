#include "decmg/mesh.hpp"

#include <stdexcept>

namespace decmg {

DualGeometry build_dual(const EmbeddedComplex2D& c) {
    if (!c.has_corners()) {
        throw std::runtime_error("build_dual: complex lacks derived corners (invalid?)");
    }
    const int ne = c.num_edges(), nt = c.num_triangles(), nv = c.num_vertices();
    DualGeometry d;
    d.edge_midpoint.resize(ne);
    d.primal_edge_length.resize(ne);
    for (int e = 0; e < ne; ++e) {
        const Vec3& a = c.positions[c.edge_src(e)];
        const Vec3& b = c.positions[c.edge_tgt(e)];
        d.edge_midpoint[e] = midpoint(a, b);
        d.primal_edge_length[e] = (b - a).norm();
        if (d.primal_edge_length[e] <= 0.0) {
            throw std::runtime_error("build_dual: zero-length edge " + std::to_string(e));
        }
    }

    d.tri_circumcenter.resize(nt);
    d.tri_area.resize(nt);
    d.dual_edge_length.assign(ne, 0.0);
    d.dual_cell_area.assign(nv, 0.0);
    d.total_area = 0.0;

    for (int t = 0; t < nt; ++t) {
        const auto [v0, v1, v2] = c.corners(t);
        const Vec3& p0 = c.positions[v0];
        const Vec3& p1 = c.positions[v1];
        const Vec3& p2 = c.positions[v2];
        const Vec3 cc = circumcenter(p0, p1, p2);  // throws on degenerate input
        d.tri_circumcenter[t] = cc;
        const Vec3 n = (p1 - p0).cross(p2 - p0);
        const double area2 = n.norm();
        d.tri_area[t] = 0.5 * area2;
        d.total_area += d.tri_area[t];
        const Vec3 nhat = n / area2;

        for (int e : c.triangles[t]) {
            d.dual_edge_length[e] += (cc - d.edge_midpoint[e]).norm();
        }

        // Signed corner wedges: the fan (p_i, m_i, cc), (m_i, p_{i+1}, cc)
        // tiles the triangle; contributions can be negative when the
        // circumcenter falls outside, but they always sum to |t|.
        const Vec3 p[3] = {p0, p1, p2};
        const int vid[3] = {v0, v1, v2};
        for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3;
            const Vec3 m = midpoint(p[i], p[j]);
            const double wedge_i = 0.5 * (m - p[i]).cross(cc - p[i]).dot(nhat);
            const double wedge_j = 0.5 * (p[j] - m).cross(cc - m).dot(nhat);
            d.dual_cell_area[vid[i]] += wedge_i;
            d.dual_cell_area[vid[j]] += wedge_j;
        }
    }
    return d;
}

} // namespace decmg
