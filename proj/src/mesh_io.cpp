#include "decmg/mesh.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace decmg {

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

} // namespace

std::shared_ptr<EmbeddedComplex2D> read_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::vector<Vec3> pos;
    std::vector<std::array<int, 3>> tris;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream is(line);
        std::string kind;
        if (!(is >> kind) || kind[0] == '#') continue;
        if (kind == "v") {
            double x, y, z;
            if (!(is >> x >> y >> z)) parse_fail(path, lineno, "malformed vertex record");
            pos.emplace_back(x, y, z);
        } else if (kind == "f") {
            std::vector<long> idx;
            std::string tok;
            while (is >> tok) {
                // accept bare indices only; "i/j/k" forms are out of contract
                std::size_t used = 0;
                long v = 0;
                try {
                    v = std::stol(tok, &used);
                } catch (const std::exception&) {
                    parse_fail(path, lineno, "malformed face index '" + tok + "'");
                }
                if (used != tok.size())
                    parse_fail(path, lineno, "malformed face index '" + tok + "'");
                idx.push_back(v);
            }
            if (idx.size() != 3)
                parse_fail(path, lineno, "non-triangular face at line " +
                                             std::to_string(lineno));
            std::array<int, 3> tri{};
            for (int i = 0; i < 3; ++i) {
                const long v = idx[i];
                if (v < 1 || v > static_cast<long>(pos.size()))
                    parse_fail(path, lineno, "face index out of range");
                tri[i] = static_cast<int>(v - 1);
            }
            tris.push_back(tri);
        } else {
            parse_fail(path, lineno, "unsupported record '" + kind + "'");
        }
    }
    if (tris.empty()) throw std::runtime_error(path + ": no faces");
    return EmbeddedComplex2D::from_triangles(std::move(pos), tris);
}

void write_obj(const EmbeddedComplex2D& c, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    for (const Vec3& p : c.positions) {
        std::fprintf(f, "v %.17g %.17g %.17g\n", p.x, p.y, p.z);
    }
    for (int t = 0; t < c.num_triangles(); ++t) {
        const auto [v0, v1, v2] = c.corners(t);
        std::fprintf(f, "f %d %d %d\n", v0 + 1, v1 + 1, v2 + 1);
    }
    std::fclose(f);
}

std::string mesh_to_json(const EmbeddedComplex2D& c) {
    nlohmann::json j;
    j["num_vertices"] = c.num_vertices();
    j["num_edges"] = c.num_edges();
    j["num_triangles"] = c.num_triangles();
    j["hash"] = c.hash();
    auto& pos = j["positions"] = nlohmann::json::array();
    for (const Vec3& p : c.positions) pos.push_back({p.x, p.y, p.z});
    auto& ed = j["edges"] = nlohmann::json::array();
    for (const auto& e : c.edges) ed.push_back({e[0], e[1]});
    auto& tr = j["triangles"] = nlohmann::json::array();
    for (const auto& t : c.triangles) tr.push_back({t[0], t[1], t[2]});
    return j.dump(2);
}

} // namespace decmg
