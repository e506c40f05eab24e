#include "cistair/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cistair/errors.hpp"

namespace cistair {

using nlohmann::json;

std::string fmt_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <class T>
void write_laminate_jsonl(std::ostream& os, const Laminate<T>& lam) {
    using S = Scalar<T>;
    json head{{"schema", kLaminateSchema}, {"nodes", lam.nodes().size()}, {"atoms", lam.atoms().size()},
              {"exact", S::exact}};
    os << head.dump() << '\n';
    const auto& nodes = lam.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        json r{{"node", i},
               {"parent", n.parent},
               {"left", n.left},
               {"right", n.right},
               {"atom", n.atom},
               {"lambda", S::to_string(n.lambda)},
               {"weight", S::to_string(n.weight)},
               {"matrix",
                {S::to_string(n.matrix.ap.re), S::to_string(n.matrix.ap.im), S::to_string(n.matrix.am.re),
                 S::to_string(n.matrix.am.im)}}};
        os << r.dump() << '\n';
    }
}

template void write_laminate_jsonl<double>(std::ostream&, const Laminate<double>&);
template void write_laminate_jsonl<Rational>(std::ostream&, const Laminate<Rational>&);

std::vector<LaminateRecord> read_laminate_jsonl(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) fail(ErrorCode::InvalidInput, "empty laminate file");
    json head;
    try {
        head = json::parse(line);
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidInput, std::string("laminate header: ") + e.what());
    }
    check_schema(head, kLaminateSchema, "laminate");
    std::vector<LaminateRecord> out;
    try {
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            const json r = json::parse(line);
            LaminateRecord x;
            x.node = r.at("node");
            x.parent = r.at("parent");
            x.left = r.at("left");
            x.right = r.at("right");
            x.atom = r.at("atom");
            x.lambda = r.at("lambda");
            x.weight = r.at("weight");
            const auto& m = r.at("matrix");
            x.ap_re = m.at(0);
            x.ap_im = m.at(1);
            x.am_re = m.at(2);
            x.am_im = m.at(3);
            out.push_back(std::move(x));
        }
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidInput, std::string("laminate record: ") + e.what());
    }
    if (out.size() != head.at("nodes").get<std::size_t>()) fail(ErrorCode::InvalidInput, "laminate node count mismatch");
    return out;
}

json mesh_to_json(const PiecewiseAffineMap& m, const std::vector<int>& phase) {
    auto pts = [](const Polygon& p) {
        json a = json::array();
        for (Vec2 v : p) a.push_back({v.x, v.y});
        return a;
    };
    json cells = json::array();
    for (std::size_t i = 0; i < m.cells.size(); ++i) {
        const Cell& c = m.cells[i];
        cells.push_back({{"id", i},
                         {"vertices", pts(c.poly)},
                         {"gradient", {c.G.m[0], c.G.m[1], c.G.m[2], c.G.m[3]}},
                         {"offset", {c.c.x, c.c.y}},
                         {"level", c.level},
                         {"active", c.active},
                         {"kind", kind_name(c.kind)},
                         {"phase", i < phase.size() ? phase[i] : 0}});
    }
    return json{{"schema", kMeshSchema},
                {"domain", pts(m.domain)},
                {"boundary", {m.boundary.m[0], m.boundary.m[1], m.boundary.m[2], m.boundary.m[3]}},
                {"cells", std::move(cells)}};
}

PiecewiseAffineMap mesh_from_json(const json& j, std::vector<int>* phase) {
    check_schema(j, kMeshSchema, "mesh");
    PiecewiseAffineMap m;
    auto pts = [](const json& a) {
        Polygon p;
        for (const auto& v : a) p.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        return p;
    };
    auto mat = [](const json& a) {
        if (a.size() != 4) fail(ErrorCode::InvalidInput, "mesh: matrix needs 4 entries");
        return Mat2<double>(a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>(), a.at(3).get<double>());
    };
    try {
        m.domain = pts(j.at("domain"));
        m.boundary = mat(j.at("boundary"));
        if (phase) phase->clear();
        for (const auto& c : j.at("cells")) {
            Cell x;
            x.poly = pts(c.at("vertices"));
            x.G = mat(c.at("gradient"));
            x.c = {c.at("offset").at(0).get<double>(), c.at("offset").at(1).get<double>()};
            x.level = c.at("level");
            x.active = c.at("active");
            const std::string k = c.at("kind");
            bool found = false;
            for (int e = 0; e <= 4; ++e)
                if (k == kind_name(static_cast<CellKind>(e))) x.kind = static_cast<CellKind>(e), found = true;
            if (!found) fail(ErrorCode::InvalidInput, "mesh: unknown cell kind '" + k + "'");
            if (phase) phase->push_back(c.at("phase"));
            m.cells.push_back(std::move(x));
        }
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidInput, std::string("mesh: ") + e.what());
    }
    return m;
}

void write_mesh_csv(std::ostream& os, const PiecewiseAffineMap& m, const std::vector<int>& phase) {
    os << "# schema: " << kMeshCsvSchema << '\n' << "cell_id,area,grad_norm,phase,level\n";
    for (std::size_t i = 0; i < m.cells.size(); ++i) {
        const Cell& c = m.cells[i];
        const double n = std::sqrt(c.G.m[0] * c.G.m[0] + c.G.m[1] * c.G.m[1] + c.G.m[2] * c.G.m[2] + c.G.m[3] * c.G.m[3]);
        os << i << ',' << fmt_real(polygon_area(c.poly)) << ',' << fmt_real(n) << ','
           << (i < phase.size() ? phase[i] : 0) << ',' << c.level << '\n';
    }
}

void check_schema(const json& j, const std::string& expected, const std::string& what) {
    if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string())
        fail(ErrorCode::InvalidInput, what + ": missing schema tag");
    const std::string s = j["schema"];
    if (s != expected) fail(ErrorCode::InvalidInput, what + ": unknown schema '" + s + "' (expected " + expected + ")");
}

void check_csv_schema(std::istream& is, const std::string& expected, const std::string& what) {
    std::string line;
    std::getline(is, line);
    const std::string tag = "# schema: ";
    if (line.rfind(tag, 0) != 0) fail(ErrorCode::InvalidInput, what + ": missing schema line");
    const std::string s = line.substr(tag.size());
    if (s != expected) fail(ErrorCode::InvalidInput, what + ": unknown schema '" + s + "' (expected " + expected + ")");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write " + path);
    out << text;
    if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) fail(ErrorCode::Io, "cannot create directory " + path + ": " + ec.message());
}

}  // namespace cistair
