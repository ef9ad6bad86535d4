#include "decmg/subdivision.hpp"

#include <stdexcept>

namespace decmg {

namespace {

// n-ary refinement of every triangle over the barycentric lattice
// { (i, j) : i + j <= n }, with lattice point (i, j) at
// v0 (n-i-j)/n + v1 i/n + v2 j/n. Binary is n = 2, cubic is n = 3.
SubdivisionResult subdivide_nary(const std::shared_ptr<const EmbeddedComplex2D>& c,
                                 int n) {
    const int nv = c->num_vertices(), ne = c->num_edges(), nt = c->num_triangles();
    if (!c->has_corners()) throw std::runtime_error("subdivide: invalid complex");

    const int pts_per_edge = n - 1;
    const int pts_per_face = (n - 1) * (n - 2) / 2;

    std::vector<Vec3> pos;
    pos.reserve(nv + pts_per_edge * ne + pts_per_face * nt);
    std::vector<GeometricMap::Column> cols;
    cols.reserve(pos.capacity());
    std::vector<VertexProvenance> prov;
    prov.reserve(pos.capacity());

    for (int v = 0; v < nv; ++v) {
        pos.push_back(c->positions[v]);
        cols.push_back({{v, 1.0}});
        prov.push_back(CopiedVertex{v});
    }
    const int edge_base = nv;
    for (int e = 0; e < ne; ++e) {
        const int s = c->edge_src(e), t = c->edge_tgt(e);
        for (int k = 1; k <= pts_per_edge; ++k) {
            const double tk = static_cast<double>(k) / n;
            pos.push_back(c->positions[s] * (1.0 - tk) + c->positions[t] * tk);
            GeometricMap::Column col{{s, 1.0 - tk}, {t, tk}};
            cols.push_back(std::move(col));
            prov.push_back(EdgePoint{e, tk});
        }
    }
    const int face_base = edge_base + pts_per_edge * ne;
    std::vector<std::vector<int>> face_points(nt);
    for (int t = 0; t < nt; ++t) {
        const auto [v0, v1, v2] = c->corners(t);
        for (int i = 1; i <= n - 2; ++i) {
            for (int j = 1; i + j <= n - 1; ++j) {
                const double b1 = static_cast<double>(i) / n;
                const double b2 = static_cast<double>(j) / n;
                const double b0 = 1.0 - b1 - b2;
                pos.push_back(c->positions[v0] * b0 + c->positions[v1] * b1 +
                              c->positions[v2] * b2);
                GeometricMap::Column col{{v0, b0}, {v1, b1}, {v2, b2}};
                cols.push_back(std::move(col));
                prov.push_back(FacePoint{t, b0, b1, b2});
                face_points[t].push_back(static_cast<int>(pos.size()) - 1);
            }
        }
    }

    // Fine vertex at lattice point (i, j) of triangle t.
    auto lattice_vertex = [&](int t, int i, int j) -> int {
        const auto [v0, v1, v2] = c->corners(t);
        const int k0 = n - i - j;
        if (i == 0 && j == 0) return v0;
        if (k0 == 0 && j == 0) return v1;
        if (k0 == 0 && i == 0) return v2;
        auto edge_point = [&](int a, int b, int k) {
            // k-th point (1-based) along corner a -> corner b
            const int e = c->find_edge(a, b);
            const int step = (c->edge_src(e) == a) ? k : n - k;
            return edge_base + e * pts_per_edge + (step - 1);
        };
        if (j == 0) return edge_point(v0, v1, i);
        if (i == 0) return edge_point(v0, v2, j);
        if (k0 == 0) return edge_point(v1, v2, j);
        // interior: row-major over (i, j) in the same order they were pushed
        int idx = 0;
        for (int ii = 1; ii <= n - 2; ++ii) {
            for (int jj = 1; ii + jj <= n - 1; ++jj) {
                if (ii == i && jj == j) return face_points[t][idx];
                ++idx;
            }
        }
        throw std::logic_error("subdivide: lattice point not found");
    };

    std::vector<std::array<int, 3>> tris;
    tris.reserve(static_cast<std::size_t>(nt) * n * n);
    for (int t = 0; t < nt; ++t) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; i + j < n; ++j) {
                tris.push_back({lattice_vertex(t, i, j), lattice_vertex(t, i + 1, j),
                                lattice_vertex(t, i, j + 1)});
                if (i + j < n - 1) {
                    tris.push_back({lattice_vertex(t, i + 1, j),
                                    lattice_vertex(t, i + 1, j + 1),
                                    lattice_vertex(t, i, j + 1)});
                }
            }
        }
    }

    SubdivisionResult res;
    res.fine = EmbeddedComplex2D::from_triangles(std::move(pos), tris);
    res.map = GeometricMap::make(res.fine, c, std::move(cols));
    res.provenance = std::move(prov);
    return res;
}

} // namespace

SubdivisionResult binary_subdivide(const std::shared_ptr<const EmbeddedComplex2D>& c) {
    return subdivide_nary(c, 2);
}

SubdivisionResult cubic_subdivide(const std::shared_ptr<const EmbeddedComplex2D>& c) {
    return subdivide_nary(c, 3);
}

SubdivisionResult subdivide(const std::shared_ptr<const EmbeddedComplex2D>& c,
                            SubdivisionScheme scheme) {
    return scheme == SubdivisionScheme::Binary ? binary_subdivide(c) : cubic_subdivide(c);
}

std::vector<SubdivisionResult> subdivision_tower(
    const std::shared_ptr<const EmbeddedComplex2D>& c, SubdivisionScheme scheme,
    int levels) {
    if (levels < 1) throw std::invalid_argument("subdivision_tower: levels >= 1");
    std::vector<SubdivisionResult> chain;
    std::shared_ptr<const EmbeddedComplex2D> cur = c;
    for (int k = 0; k < levels; ++k) {
        chain.push_back(subdivide(cur, scheme));
        cur = chain.back().fine;
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

} // namespace decmg
