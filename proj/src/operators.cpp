#include "decmg/operators.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace decmg {

Cochain::Cochain(std::shared_ptr<const EmbeddedComplex2D> c, int deg, Variance var)
    : degree(deg), variance(var), home(std::move(c)) {
    values.assign(expected_length(*home, degree, variance), 0.0);
}

int Cochain::expected_length(const EmbeddedComplex2D& c, int degree, Variance var) {
    const int by_degree[3] = {c.num_vertices(), c.num_edges(), c.num_triangles()};
    if (degree < 0 || degree > 2) throw std::invalid_argument("cochain degree out of range");
    return var == Variance::Primal ? by_degree[degree] : by_degree[2 - degree];
}

bool Cochain::conforms() const {
    return home && static_cast<int>(values.size()) ==
                       expected_length(*home, degree, variance);
}

void Cochain::require(int deg, Variance var, const char* what) const {
    if (degree != deg || variance != var || !conforms()) {
        throw std::invalid_argument(std::string(what) + ": degree/variance mismatch");
    }
}

SparseOperator d0(const EmbeddedComplex2D& c) {
    const int ne = c.num_edges();
    std::vector<int> ri, ci;
    std::vector<double> v;
    ri.reserve(2 * ne);
    ci.reserve(2 * ne);
    v.reserve(2 * ne);
    for (int e = 0; e < ne; ++e) {
        ri.push_back(e); ci.push_back(c.edge_src(e)); v.push_back(-1.0);
        ri.push_back(e); ci.push_back(c.edge_tgt(e)); v.push_back(1.0);
    }
    return SparseOperator::from_triplets(ne, c.num_vertices(), ri, ci, v, "d0");
}

SparseOperator d1(const EmbeddedComplex2D& c) {
    if (!c.has_corners()) throw std::runtime_error("d1: complex lacks derived corners");
    const int nt = c.num_triangles();
    std::vector<int> ri, ci;
    std::vector<double> v;
    ri.reserve(3 * nt);
    ci.reserve(3 * nt);
    v.reserve(3 * nt);
    for (int t = 0; t < nt; ++t) {
        const auto [v0, v1, v2] = c.corners(t);
        const auto [e0, e1, e2] = c.triangles[t];
        // Boundary cycle v0 -> v1 -> v2 -> v0 traverses e2, e0, e1; the sign
        // records whether the stored edge orientation agrees.
        const int walk[3][3] = {{e2, v0, v1}, {e0, v1, v2}, {e1, v2, v0}};
        for (const auto& [e, a, b] : walk) {
            ri.push_back(t);
            ci.push_back(e);
            v.push_back(c.edge_src(e) == a && c.edge_tgt(e) == b ? 1.0 : -1.0);
        }
    }
    return SparseOperator::from_triplets(nt, c.num_edges(), ri, ci, v, "d1");
}

SparseOperator hodge_star_1(const EmbeddedComplex2D& c, const DualGeometry& dual) {
    const int ne = c.num_edges();
    std::vector<double> d(ne);
    for (int e = 0; e < ne; ++e) {
        if (dual.primal_edge_length[e] <= 0.0) {
            throw std::runtime_error("hodge_star_1: zero primal edge length at edge " +
                                     std::to_string(e));
        }
        d[e] = dual.dual_edge_length[e] / dual.primal_edge_length[e];
    }
    return SparseOperator::diagonal(d, "star1");
}

SparseOperator hodge_star_0_inv(const EmbeddedComplex2D& c, const DualGeometry& dual,
                                const HodgeOptions& opts) {
    const int nv = c.num_vertices();
    double mean = 0.0;
    for (double a : dual.dual_cell_area) mean += a;
    mean /= std::max(nv, 1);
    std::vector<double> d(nv);
    for (int v = 0; v < nv; ++v) {
        double a = dual.dual_cell_area[v];
        if (a <= 0.0) {
            if (!opts.clamp_dual_areas) {
                throw std::runtime_error("hodge_star_0_inv: non-well-centered dual cell at vertex " +
                                         std::to_string(v));
            }
            a = 1e-14 * mean;
        }
        d[v] = 1.0 / a;
    }
    return SparseOperator::diagonal(d, "star0_inv");
}

LaplacianOperators laplacian_0(const EmbeddedComplex2D& c, const DualGeometry& dual,
                               const HodgeOptions& opts) {
    LaplacianOperators ops;
    ops.d0 = d0(c);
    ops.star1 = hodge_star_1(c, dual);
    ops.star0_inv = hodge_star_0_inv(c, dual, opts);
    ops.dual_areas = dual.dual_cell_area;
    if (opts.clamp_dual_areas) {
        const auto& inv = ops.star0_inv.values();
        for (std::size_t i = 0; i < ops.dual_areas.size(); ++i) {
            ops.dual_areas[i] = 1.0 / inv[i];
        }
    }
    // A = -d0^T star1 d0; laplacian = star0_inv A.
    SparseOperator star1_d0 = ops.star1.multiply(ops.d0);
    ops.symmetric_part = ops.d0.transposed().multiply(star1_d0).scaled(-1.0);
    ops.symmetric_part.set_tag("-d0^T star1 d0");
    ops.laplacian = ops.symmetric_part.scale_rows(ops.star0_inv.values());
    ops.laplacian.set_tag("laplacian0");
    return ops;
}

Cochain codifferential_1(const LaplacianOperators& ops, const Cochain& alpha) {
    alpha.require(1, Variance::Primal, "codifferential_1");
    Cochain out(alpha.home, 0);
    // star0_inv * (-d0^T) * (star1 alpha)
    std::vector<double> w(alpha.values.size());
    const auto& s1 = ops.star1.values();
    for (std::size_t e = 0; e < w.size(); ++e) w[e] = s1[e] * alpha.values[e];
    std::vector<double> t = ops.d0.apply_transpose(w);
    const auto& s0 = ops.star0_inv.values();
    for (std::size_t v = 0; v < t.size(); ++v) out.values[v] = -s0[v] * t[v];
    return out;
}

Cochain wedge_01(const Cochain& f, const Cochain& alpha) {
    f.require(0, Variance::Primal, "wedge_01");
    alpha.require(1, Variance::Primal, "wedge_01");
    if (f.home->hash() != alpha.home->hash()) {
        throw std::invalid_argument("wedge_01: mismatched home complexes");
    }
    const EmbeddedComplex2D& c = *f.home;
    Cochain out(alpha.home, 1);
    for (int e = 0; e < c.num_edges(); ++e) {
        out.values[e] = alpha.values[e] *
                        0.5 * (f.values[c.edge_src(e)] + f.values[c.edge_tgt(e)]);
    }
    return out;
}

Cochain flat(const std::vector<Vec3>& vertex_field,
             const std::shared_ptr<const EmbeddedComplex2D>& c) {
    if (static_cast<int>(vertex_field.size()) != c->num_vertices()) {
        throw std::invalid_argument("flat: field length != vertex count");
    }
    Cochain out(c, 1);
    for (int e = 0; e < c->num_edges(); ++e) {
        const int s = c->edge_src(e), t = c->edge_tgt(e);
        const Vec3 avg = (vertex_field[s] + vertex_field[t]) * 0.5;
        out.values[e] = avg.dot(c->positions[t] - c->positions[s]);
    }
    return out;
}

Cochain flat_constant(const Vec3& v, const std::shared_ptr<const EmbeddedComplex2D>& c) {
    Cochain out(c, 1);
    for (int e = 0; e < c->num_edges(); ++e) {
        const int s = c->edge_src(e), t = c->edge_tgt(e);
        out.values[e] = v.dot(c->positions[t] - c->positions[s]);
    }
    return out;
}

Cochain lie_derivative_0(const Cochain& q, const Cochain& T,
                         const LaplacianOperators& ops) {
    q.require(1, Variance::Primal, "lie_derivative_0");
    T.require(0, Variance::Primal, "lie_derivative_0");
    if (q.home->hash() != T.home->hash()) {
        throw std::invalid_argument("lie_derivative_0: mismatched home complexes");
    }
    const EmbeddedComplex2D& c = *q.home;
    std::vector<double> dT = ops.d0.apply(T.values);
    const auto& s1 = ops.star1.values();
    for (std::size_t e = 0; e < dT.size(); ++e) dT[e] *= s1[e];

    Cochain out(T.home, 0);
    const auto& s0 = ops.star0_inv.values();
    for (int v = 0; v < c.num_vertices(); ++v) {
        double acc = 0.0;
        for (int e : c.edges_of_vertex()[v]) {
            acc += q.values[e] * dT[e];
        }
        out.values[v] = 0.5 * acc * s0[v];
    }
    return out;
}

} // namespace decmg
