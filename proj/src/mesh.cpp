#include "decmg/mesh.hpp"

#include <algorithm>
#include <cstring>
#include <set>
#include <sstream>

namespace decmg {

namespace {

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

// Shared corner of two edges, -1 if none / ambiguous.
int shared_vertex(const std::array<int, 2>& a, const std::array<int, 2>& b) {
    int found = -1;
    for (int va : a) {
        for (int vb : b) {
            if (va == vb) {
                if (found != -1 && found != va) return -1;
                found = va;
            }
        }
    }
    return found;
}

} // namespace

std::string MeshDiagnostics::summary() const {
    std::ostringstream os;
    if (is_valid()) {
        os << "valid";
        return os.str();
    }
    for (const auto& v : violations) {
        os << v.rule;
        if (!v.simplices.empty()) {
            os << " [";
            for (std::size_t i = 0; i < v.simplices.size() && i < 8; ++i) {
                if (i) os << ",";
                os << v.simplices[i];
            }
            if (v.simplices.size() > 8) os << ",...";
            os << "]";
        }
        if (!v.detail.empty()) os << " (" << v.detail << ")";
        os << "\n";
    }
    return os.str();
}

int EmbeddedComplex2D::find_edge(int a, int b) const {
    auto it = edge_lookup_.find({std::min(a, b), std::max(a, b)});
    return it == edge_lookup_.end() ? -1 : it->second;
}

int EmbeddedComplex2D::find_triangle(int a, int b, int c) const {
    std::array<int, 3> key{a, b, c};
    std::sort(key.begin(), key.end());
    auto it = tri_lookup_.find(key);
    return it == tri_lookup_.end() ? -1 : it->second;
}

void EmbeddedComplex2D::finalize() {
    const int nv = num_vertices(), ne = num_edges(), nt = num_triangles();

    edge_lookup_.clear();
    for (int e = 0; e < ne; ++e) {
        const auto [s, t] = edges[e];
        if (s >= 0 && s < nv && t >= 0 && t < nv && s != t) {
            edge_lookup_.emplace(std::make_pair(std::min(s, t), std::max(s, t)), e);
        }
    }

    tri_corners_.assign(nt, {-1, -1, -1});
    tri_lookup_.clear();
    for (int t = 0; t < nt; ++t) {
        const auto [e0, e1, e2] = triangles[t];
        if (e0 < 0 || e0 >= ne || e1 < 0 || e1 >= ne || e2 < 0 || e2 >= ne) continue;
        const int v0 = shared_vertex(edges[e1], edges[e2]);
        const int v1 = shared_vertex(edges[e0], edges[e2]);
        const int v2 = shared_vertex(edges[e0], edges[e1]);
        if (v0 < 0 || v1 < 0 || v2 < 0) continue;
        if (v0 == v1 || v1 == v2 || v0 == v2) continue;
        tri_corners_[t] = {v0, v1, v2};
        std::array<int, 3> key{v0, v1, v2};
        std::sort(key.begin(), key.end());
        tri_lookup_.emplace(key, t);
    }

    vertex_edges_.assign(nv, {});
    for (int e = 0; e < ne; ++e) {
        for (int v : edges[e]) {
            if (v >= 0 && v < nv) vertex_edges_[v].push_back(e);
        }
    }
    edge_triangles_.assign(ne, {});
    for (int t = 0; t < nt; ++t) {
        for (int e : triangles[t]) {
            if (e >= 0 && e < ne) edge_triangles_[e].push_back(t);
        }
    }

    std::uint64_t h = 1469598103934665603ULL;
    const int counts[3] = {nv, ne, nt};
    h = fnv1a(counts, sizeof(counts), h);
    if (!positions.empty()) h = fnv1a(positions.data(), positions.size() * sizeof(Vec3), h);
    if (!edges.empty()) h = fnv1a(edges.data(), edges.size() * sizeof(edges[0]), h);
    if (!triangles.empty())
        h = fnv1a(triangles.data(), triangles.size() * sizeof(triangles[0]), h);
    hash_ = h;
}

std::shared_ptr<EmbeddedComplex2D> EmbeddedComplex2D::from_triangles(
    std::vector<Vec3> positions, const std::vector<std::array<int, 3>>& corner_triples) {
    auto c = std::make_shared<EmbeddedComplex2D>();
    c->positions = std::move(positions);
    const int nv = c->num_vertices();

    std::set<std::pair<int, int>> pair_set;
    for (const auto& tri : corner_triples) {
        for (int i = 0; i < 3; ++i) {
            const int a = tri[i], b = tri[(i + 1) % 3];
            if (a < 0 || a >= nv || b < 0 || b >= nv || a == b) {
                throw std::out_of_range("from_triangles: bad corner triple");
            }
            pair_set.emplace(std::min(a, b), std::max(a, b));
        }
    }
    // std::set iteration is already the lexicographic edge order.
    std::map<std::pair<int, int>, int> index;
    c->edges.reserve(pair_set.size());
    for (const auto& p : pair_set) {
        index.emplace(p, static_cast<int>(c->edges.size()));
        c->edges.push_back({p.first, p.second});
    }

    auto edge_of = [&](int a, int b) {
        return index.at({std::min(a, b), std::max(a, b)});
    };
    c->triangles.reserve(corner_triples.size());
    for (const auto& tri : corner_triples) {
        const auto [v0, v1, v2] = tri;
        // e0 opposite v0, e1 opposite v1, e2 opposite v2.
        c->triangles.push_back({edge_of(v1, v2), edge_of(v0, v2), edge_of(v0, v1)});
    }
    c->finalize();
    return c;
}

MeshDiagnostics validate_complex(const EmbeddedComplex2D& c) {
    MeshDiagnostics d;
    const int nv = c.num_vertices(), ne = c.num_edges(), nt = c.num_triangles();

    for (int e = 0; e < ne; ++e) {
        const auto [s, t] = c.edges[e];
        if (s < 0 || s >= nv || t < 0 || t >= nv) {
            d.violations.push_back({"index out of range", {e}, "edge vertex"});
        } else if (s == t) {
            d.violations.push_back({"repeated face", {e}, "edge with equal endpoints"});
        }
    }
    for (int t = 0; t < nt; ++t) {
        for (int e : c.triangles[t]) {
            if (e < 0 || e >= ne) {
                d.violations.push_back({"index out of range", {t}, "triangle edge"});
            }
        }
    }
    if (!d.violations.empty()) return d;  // index checks gate the rest

    std::map<std::pair<int, int>, int> edge_seen;
    for (int e = 0; e < ne; ++e) {
        auto key = std::make_pair(std::min(c.edges[e][0], c.edges[e][1]),
                                  std::max(c.edges[e][0], c.edges[e][1]));
        auto [it, inserted] = edge_seen.emplace(key, e);
        if (!inserted) d.violations.push_back({"duplicate edge", {it->second, e}, ""});
    }

    std::vector<std::array<int, 3>> corner(nt, {-1, -1, -1});
    for (int t = 0; t < nt; ++t) {
        const auto [e0, e1, e2] = c.triangles[t];
        if (e0 == e1 || e1 == e2 || e0 == e2) {
            d.violations.push_back({"repeated face", {t}, "triangle repeats an edge"});
            continue;
        }
        const int v0 = shared_vertex(c.edges[e1], c.edges[e2]);
        const int v1 = shared_vertex(c.edges[e0], c.edges[e2]);
        const int v2 = shared_vertex(c.edges[e0], c.edges[e1]);
        if (v0 < 0 || v1 < 0 || v2 < 0 || v0 == v1 || v1 == v2 || v0 == v2) {
            d.violations.push_back(
                {"simplicial identity", {t}, "edges do not close into a triangle"});
            continue;
        }
        corner[t] = {v0, v1, v2};
    }

    std::map<std::array<int, 3>, int> tri_seen;
    for (int t = 0; t < nt; ++t) {
        if (corner[t][0] < 0) continue;
        std::array<int, 3> key = corner[t];
        std::sort(key.begin(), key.end());
        auto [it, inserted] = tri_seen.emplace(key, t);
        if (!inserted) d.violations.push_back({"duplicate triangle", {it->second, t}, ""});
    }

    std::vector<char> vertex_used(nv, 0), edge_used(ne, 0);
    for (int t = 0; t < nt; ++t) {
        for (int e : c.triangles[t]) {
            edge_used[e] = 1;
            vertex_used[c.edges[e][0]] = 1;
            vertex_used[c.edges[e][1]] = 1;
        }
    }
    for (int v = 0; v < nv; ++v) {
        if (!vertex_used[v]) d.violations.push_back({"dangling vertex", {v}, ""});
    }
    for (int e = 0; e < ne; ++e) {
        if (!edge_used[e]) d.violations.push_back({"dangling edge", {e}, ""});
    }
    return d;
}

std::shared_ptr<EmbeddedComplex2D> make_triangulated_grid(int nx, int ny,
                                                          double lx, double ly) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("make_triangulated_grid: zero cells");
    if (lx <= 0.0 || ly <= 0.0)
        throw std::invalid_argument("make_triangulated_grid: nonpositive extent");
    std::vector<Vec3> pos;
    pos.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
    const double dx = lx / nx, dy = ly / ny;
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            pos.emplace_back(i * dx, j * dy, 0.0);
        }
    }
    auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
    std::vector<std::array<int, 3>> tris;
    tris.reserve(static_cast<std::size_t>(nx) * ny * 2);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int bl = vid(i, j), br = vid(i + 1, j);
            const int tr = vid(i + 1, j + 1), tl = vid(i, j + 1);
            tris.push_back({bl, br, tr});  // diagonal bl-tr, counterclockwise
            tris.push_back({bl, tr, tl});
        }
    }
    return EmbeddedComplex2D::from_triangles(std::move(pos), tris);
}

std::shared_ptr<EmbeddedComplex2D> make_equilateral_grid(int rows, int cols,
                                                         double side) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("make_equilateral_grid: need rows, cols >= 1");
    if (side <= 0.0) throw std::invalid_argument("make_equilateral_grid: nonpositive side");
    if (cols % 2 != 0 && rows > 1)
        throw std::invalid_argument("make_equilateral_grid: odd cols requires rows == 1");

    const int nup = (cols + 1) / 2;      // up-triangles per strip row
    const int ndown = cols / 2;          // down-triangles per strip row
    const int row_verts = nup + 1;
    const double hy = side * std::sqrt(3.0) / 2.0;

    std::vector<Vec3> pos;
    for (int j = 0; j <= rows; ++j) {
        const int count = (j == rows && ndown < nup) ? ndown + 1 : row_verts;
        for (int i = 0; i < count; ++i) {
            pos.emplace_back(i * side + j * side / 2.0, j * hy, 0.0);
        }
    }
    auto vid = [row_verts](int i, int j) { return j * row_verts + i; };

    std::vector<std::array<int, 3>> tris;
    for (int j = 0; j < rows; ++j) {
        for (int i = 0; i < nup; ++i) {
            tris.push_back({vid(i, j), vid(i + 1, j), vid(i, j + 1)});
        }
        for (int i = 0; i < ndown; ++i) {
            tris.push_back({vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    }
    return EmbeddedComplex2D::from_triangles(std::move(pos), tris);
}

std::shared_ptr<EmbeddedComplex2D> translated(const EmbeddedComplex2D& c,
                                              const Vec3& offset) {
    auto out = std::make_shared<EmbeddedComplex2D>(c);
    for (auto& p : out->positions) p += offset;
    out->finalize();
    return out;
}

} // namespace decmg
