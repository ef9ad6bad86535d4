#include "decmg/geometric_map.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace decmg {

namespace {
constexpr double kSnapTol = 1e-12;
constexpr double kSumTol = 1e-12;
} // namespace

GeometricMap GeometricMap::make(std::shared_ptr<const EmbeddedComplex2D> domain,
                                std::shared_ptr<const EmbeddedComplex2D> codomain,
                                std::vector<Column> columns) {
    for (auto& col : columns) {
        Column kept;
        double sum = 0.0;
        for (auto& [v, w] : col) {
            if (std::fabs(w) <= kSnapTol) continue;
            kept.emplace_back(v, w);
            sum += w;
        }
        // Renormalize only plausible columns; badly scaled input is left
        // untouched so validate_map can report it.
        if (std::fabs(sum - 1.0) <= 1e-9 && sum != 0.0) {
            for (auto& [v, w] : kept) w /= sum;
        }
        std::sort(kept.begin(), kept.end());
        col = std::move(kept);
    }
    GeometricMap f;
    f.domain_ = std::move(domain);
    f.codomain_ = std::move(codomain);
    f.columns_ = std::move(columns);
    return f;
}

GeometricMap GeometricMap::raw(std::shared_ptr<const EmbeddedComplex2D> domain,
                               std::shared_ptr<const EmbeddedComplex2D> codomain,
                               std::vector<Column> columns) {
    GeometricMap f;
    f.domain_ = std::move(domain);
    f.codomain_ = std::move(codomain);
    f.columns_ = std::move(columns);
    for (auto& col : f.columns_) std::sort(col.begin(), col.end());
    return f;
}

SparseOperator GeometricMap::matrix() const {
    std::vector<int> ri, ci;
    std::vector<double> v;
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        for (const auto& [row, w] : columns_[j]) {
            ri.push_back(row);
            ci.push_back(static_cast<int>(j));
            v.push_back(w);
        }
    }
    return SparseOperator::from_triplets(codomain_->num_vertices(),
                                         static_cast<int>(columns_.size()), ri, ci, v,
                                         "M(f)");
}

namespace {

// True iff the vertex set is the vertex set of some codomain simplex.
bool is_simplex_support(const EmbeddedComplex2D& cod, const std::set<int>& verts) {
    if (verts.empty() || verts.size() > 3) return false;
    auto it = verts.begin();
    if (verts.size() == 1) return *it >= 0 && *it < cod.num_vertices();
    if (verts.size() == 2) {
        const int a = *it++, b = *it;
        return cod.find_edge(a, b) >= 0;
    }
    const int a = *it++, b = *it++, c = *it;
    return cod.find_triangle(a, b, c) >= 0;
}

} // namespace

MeshDiagnostics validate_map(const GeometricMap& f) {
    MeshDiagnostics d;
    const auto& dom = *f.domain();
    const auto& cod = *f.codomain();
    const auto& cols = f.columns();

    if (static_cast<int>(cols.size()) != dom.num_vertices()) {
        d.violations.push_back({"column count", {}, "one column per domain vertex required"});
        return d;
    }

    for (int j = 0; j < dom.num_vertices(); ++j) {
        double sum = 0.0;
        std::set<int> support;
        bool indexed_ok = true;
        for (const auto& [v, w] : cols[j]) {
            if (v < 0 || v >= cod.num_vertices()) {
                d.violations.push_back({"index out of range", {j}, "codomain vertex"});
                indexed_ok = false;
                break;
            }
            if (w < -kSnapTol) {
                d.violations.push_back({"negative coordinate", {j}, ""});
            }
            if (w != 0.0) support.insert(v);
            sum += w;
        }
        if (!indexed_ok) continue;
        if (std::fabs(sum - 1.0) > kSumTol) {
            d.violations.push_back({"column sum", {j}, "sum != 1"});
        }
        if (support.size() > 3) {
            d.violations.push_back({"support too large", {j}, "> 3 nonzeros"});
        } else if (!is_simplex_support(cod, support)) {
            d.violations.push_back({"support not a simplex", {j}, ""});
        }
    }
    if (!d.is_valid()) return d;

    // Images of domain simplices must land in a single codomain simplex.
    auto union_support = [&](std::initializer_list<int> verts) {
        std::set<int> u;
        for (int v : verts) {
            for (const auto& [w, x] : cols[v]) {
                if (x != 0.0) u.insert(w);
            }
        }
        return u;
    };
    for (int e = 0; e < dom.num_edges(); ++e) {
        const auto u = union_support({dom.edge_src(e), dom.edge_tgt(e)});
        if (!is_simplex_support(cod, u)) {
            d.violations.push_back(
                {"edge image not contained in a simplex", {e}, ""});
        }
    }
    if (dom.has_corners()) {
        for (int t = 0; t < dom.num_triangles(); ++t) {
            const auto [v0, v1, v2] = dom.corners(t);
            const auto u = union_support({v0, v1, v2});
            if (!is_simplex_support(cod, u)) {
                d.violations.push_back(
                    {"triangle image not contained in a simplex", {t}, ""});
            }
        }
    }
    return d;
}

GeometricMap identity_map(const std::shared_ptr<const EmbeddedComplex2D>& c) {
    std::vector<GeometricMap::Column> cols(c->num_vertices());
    for (int v = 0; v < c->num_vertices(); ++v) cols[v] = {{v, 1.0}};
    return GeometricMap::make(c, c, std::move(cols));
}

SparseOperator matrix_of(const GeometricMap& f) {
    const MeshDiagnostics d = validate_map(f);
    if (!d.is_valid()) {
        throw std::runtime_error("matrix_of: invalid geometric map: " + d.summary());
    }
    return f.matrix();
}

GeometricMap compose(const GeometricMap& g, const GeometricMap& f) {
    if (f.codomain()->hash() != g.domain()->hash()) {
        throw std::invalid_argument("compose: codomain(f) != domain(g)");
    }
    const auto& fc = f.columns();
    const auto& gc = g.columns();
    std::vector<GeometricMap::Column> cols(fc.size());
    std::map<int, double> acc;
    for (std::size_t j = 0; j < fc.size(); ++j) {
        acc.clear();
        for (const auto& [mid, wf] : fc[j]) {
            for (const auto& [out, wg] : gc[mid]) {
                acc[out] += wf * wg;
            }
        }
        cols[j].assign(acc.begin(), acc.end());
    }
    return GeometricMap::make(f.domain(), g.codomain(), std::move(cols));
}

Cochain interpolate(const GeometricMap& f, const Cochain& field_on_codomain) {
    field_on_codomain.require(0, Variance::Primal, "interpolate");
    if (field_on_codomain.home->hash() != f.codomain()->hash()) {
        throw std::invalid_argument("interpolate: field does not live on codomain(f)");
    }
    Cochain out(f.domain(), 0);
    const auto& cols = f.columns();
    for (std::size_t j = 0; j < cols.size(); ++j) {
        double s = 0.0;
        for (const auto& [v, w] : cols[j]) s += w * field_on_codomain.values[v];
        out.values[j] = s;
    }
    return out;
}

SparseOperator restriction_matrix(const GeometricMap& f) {
    SparseOperator M = matrix_of(f);
    std::vector<double> row_sum(M.rows(), 0.0);
    const auto& vals = M.values();
    const auto& rows = M.row_idx();
    for (std::size_t k = 0; k < vals.size(); ++k) row_sum[rows[k]] += vals[k];
    for (int i = 0; i < M.rows(); ++i) {
        if (row_sum[i] == 0.0) {
            throw std::runtime_error(
                "restriction_matrix: codomain vertex with no fine neighbor: " +
                std::to_string(i));
        }
    }
    std::vector<double> inv(row_sum.size());
    for (std::size_t i = 0; i < row_sum.size(); ++i) inv[i] = 1.0 / row_sum[i];
    SparseOperator R = M.scale_rows(inv);
    R.set_tag("restriction");
    return R;
}

void save_map(const GeometricMap& f, const std::string& matrix_path,
              const std::string& header_path) {
    f.matrix().write_matrix_market(matrix_path);
    nlohmann::json j;
    j["domain_hash"] = f.domain()->hash();
    j["codomain_hash"] = f.codomain()->hash();
    j["domain_vertices"] = f.domain()->num_vertices();
    j["codomain_vertices"] = f.codomain()->num_vertices();
    j["matrix_file"] = matrix_path;
    std::ofstream out(header_path);
    if (!out) throw std::runtime_error("cannot open " + header_path + " for writing");
    out << j.dump(2) << "\n";
}

} // namespace decmg
