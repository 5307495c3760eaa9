#include "tangentloci/jsonio.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <utility>

namespace tangentloci::jsonio {

namespace {

using nlohmann::json;

const char* regime_name(spheres::CenterGeometry g) {
    switch (g) {
        case spheres::CenterGeometry::Generic: return "Generic";
        case spheres::CenterGeometry::Coplanar: return "Coplanar";
        case spheres::CenterGeometry::Collinear: return "Collinear";
    }
    return "Generic";
}

std::string escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

double finite_number(const json& node, const char* what) {
    if (!node.is_number()) fail(Err::ParseError, std::string(what) + " must be a number");
    const double x = node.get<double>();
    if (!std::isfinite(x)) fail(Err::ParseError, std::string(what) + " must be finite");
    return x;
}

}  // namespace

std::string fmt17(double x) {
    if (!std::isfinite(x)) fail(Err::InvalidInput, "refusing to serialize a nonfinite number");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s = buf;
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

// ---- JsonWriter ------------------------------------------------------------------

void JsonWriter::prefix() {
    if (stack_.empty()) return;
    Level& t = stack_.back();
    if (t.kind == '{') {
        // value for the key that was just written
        t.key_open = false;
        return;
    }
    if (t.count > 0) out_ += ',';
    out_ += '\n';
    out_.append(2 * stack_.size(), ' ');
    ++t.count;
}

JsonWriter& JsonWriter::key(std::string_view k) {
    Level& t = stack_.back();
    if (t.count > 0) out_ += ',';
    out_ += '\n';
    out_.append(2 * stack_.size(), ' ');
    out_ += escape(k);
    out_ += ": ";
    t.key_open = true;
    ++t.count;
    return *this;
}

JsonWriter& JsonWriter::begin_object() {
    prefix();
    out_ += '{';
    stack_.push_back({'{', 0, false});
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    const Level t = stack_.back();
    stack_.pop_back();
    if (t.count > 0) {
        out_ += '\n';
        out_.append(2 * stack_.size(), ' ');
    }
    out_ += '}';
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    prefix();
    out_ += '[';
    stack_.push_back({'[', 0, false});
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    const Level t = stack_.back();
    stack_.pop_back();
    if (t.count > 0) {
        out_ += '\n';
        out_.append(2 * stack_.size(), ' ');
    }
    out_ += ']';
    return *this;
}

JsonWriter& JsonWriter::number(double x) {
    prefix();
    out_ += fmt17(x);
    return *this;
}

JsonWriter& JsonWriter::integer(long long x) {
    prefix();
    out_ += std::to_string(x);
    return *this;
}

JsonWriter& JsonWriter::boolean(bool b) {
    prefix();
    out_ += b ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::string(std::string_view s) {
    prefix();
    out_ += escape(s);
    return *this;
}

JsonWriter& JsonWriter::null() {
    prefix();
    out_ += "null";
    return *this;
}

JsonWriter& JsonWriter::complex(const cplx& z) {
    prefix();
    out_ += '[';
    out_ += fmt17(z.real());
    out_ += ", ";
    out_ += fmt17(z.imag());
    out_ += ']';
    return *this;
}

JsonWriter& JsonWriter::complex_vector(const Vec3c& v) {
    prefix();
    out_ += '[';
    for (int i = 0; i < 3; ++i) {
        if (i) out_ += ", ";
        out_ += '[';
        out_ += fmt17(v(i).real());
        out_ += ", ";
        out_ += fmt17(v(i).imag());
        out_ += ']';
    }
    out_ += ']';
    return *this;
}

JsonWriter& JsonWriter::real_vector(const Eigen::Vector3d& v) {
    prefix();
    out_ += '[';
    for (int i = 0; i < 3; ++i) {
        if (i) out_ += ", ";
        out_ += fmt17(v(i));
    }
    out_ += ']';
    return *this;
}

// ---- input parsing ---------------------------------------------------------------

SolveInput parse_solve_input(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(Err::ParseError, e.what());
    }

    auto one = [](const json& node, int idx) -> SolveInstance {
        const std::string where = "instance " + std::to_string(idx) + ": ";
        if (!node.is_object()) fail(Err::ParseError, where + "expected an object");
        if (!node.contains("spheres") || !node["spheres"].is_array() ||
            node["spheres"].size() != 4)
            fail(Err::ParseError, where + "\"spheres\" must be a list of exactly four entries");
        SolveInstance inst;
        for (int i = 0; i < 4; ++i) {
            const json& sp = node["spheres"][i];
            const std::string sw = where + "sphere " + std::to_string(i) + ": ";
            if (!sp.is_object() || !sp.contains("center") || !sp.contains("radius"))
                fail(Err::ParseError, sw + "expected {\"center\":[x,y,z],\"radius\":r}");
            const json& c = sp["center"];
            if (!c.is_array() || c.size() != 3)
                fail(Err::ParseError, sw + "\"center\" must have three coordinates");
            for (int k = 0; k < 3; ++k)
                inst.spheres[i].center(k) = finite_number(c[k], (sw + "center coordinate").c_str());
            inst.spheres[i].radius = finite_number(sp["radius"], (sw + "radius").c_str());
            if (inst.spheres[i].radius <= 0.0)
                fail(Err::ParseError, sw + "radius must be positive");
        }
        if (node.contains("seed")) {
            const json& s = node["seed"];
            if (!s.is_number_integer() && !s.is_number_unsigned())
                fail(Err::ParseError, where + "\"seed\" must be an integer");
            if (s.is_number_integer() && s.get<long long>() < 0)
                fail(Err::ParseError, where + "\"seed\" must be nonnegative");
            inst.seed = s.get<unsigned long long>();
        }
        if (node.contains("tol")) {
            const double t = finite_number(node["tol"], (where + "\"tol\"").c_str());
            if (t <= 0.0 || t >= 1.0) fail(Err::ParseError, where + "\"tol\" must lie in (0,1)");
            inst.tol = t;
        }
        return inst;
    };

    SolveInput in;
    if (root.is_array()) {
        in.batch = true;
        for (int i = 0; i < static_cast<int>(root.size()); ++i)
            in.instances.push_back(one(root[i], i));
        if (in.instances.empty()) fail(Err::ParseError, "batch list is empty");
    } else {
        in.instances.push_back(one(root, 0));
    }
    return in;
}

// ---- result serialization ---------------------------------------------------------

namespace {

double worst_residual(const spheres::TangentSolution& t) {
    return *std::max_element(t.residuals.begin(), t.residuals.end());
}

void write_degenerate(JsonWriter& w, const spheres::DegenerateReport& rep) {
    w.begin_object();
    w.key("axis_point").real_vector(rep.axis_point);
    w.key("axis_dir").real_vector(rep.axis_dir);
    w.key("abscissae").begin_array();
    for (double x : rep.abscissae) w.number(x);
    w.end_array();
    w.key("meridian_residual").number(rep.meridian_residual);
    w.key("classes").begin_array();
    for (const spheres::DegenerateEntry& e : rep.classes) {
        w.begin_object();
        w.key("class").string(spheres::degenerate_class_name(e.cls));
        w.key("axis_x").number(e.axis_x);
        w.key("circle_radius").number(e.circle_radius);
        w.key("A").number(e.A);
        w.key("B").number(e.B);
        w.key("C").number(e.C);
        w.end_object();
    }
    w.end_array();
    w.key("sample_tangents").begin_array();
    for (const linegeom::PVLine& l : rep.sample_tangents) write_pv_line(w, l);
    w.end_array();
    w.end_object();
}

}  // namespace

void write_solve_result(JsonWriter& w, const spheres::SolveResult& res) {
    w.begin_object();
    w.key("regime").string(regime_name(res.regime));
    w.key("borderline").boolean(res.borderline);
    w.key("complex_count").integer(res.complex_count);
    w.key("isotropic_excess").integer(res.isotropic_excess);
    w.key("tangents").begin_array();
    for (const spheres::TangentSolution& t : res.tangents) {
        w.begin_object();
        w.key("p").complex_vector(t.p);
        w.key("v").complex_vector(t.v);
        w.key("real").boolean(t.is_real);
        w.key("multiplicity").integer(t.multiplicity);
        w.key("residual").number(worst_residual(t));
        w.end_object();
    }
    w.end_array();
    if (res.degenerate) {
        w.key("degenerate");
        write_degenerate(w, *res.degenerate);
    }
    if (!res.note.empty()) w.key("note").string(res.note);
    w.end_object();
}

std::string solve_result_json(const spheres::SolveResult& res) {
    JsonWriter w;
    write_solve_result(w, res);
    return w.str();
}

// ---- CSV --------------------------------------------------------------------------

namespace {

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

}  // namespace

std::string solve_csv_header() {
    return "instance,regime,borderline,complex_count,isotropic_excess,degenerate_classes,"
           "tangent,multiplicity,real,residual,"
           "p0_re,p0_im,p1_re,p1_im,p2_re,p2_im,"
           "v0_re,v0_im,v1_re,v1_im,v2_re,v2_im,note\n";
}

void append_solve_csv(std::string& out, int instance, const spheres::SolveResult& res) {
    std::string classes;
    if (res.degenerate)
        for (const spheres::DegenerateEntry& e : res.degenerate->classes) {
            if (!classes.empty()) classes += ';';
            classes += spheres::degenerate_class_name(e.cls);
        }
    std::string head = std::to_string(instance);
    head += ',';
    head += regime_name(res.regime);
    head += res.borderline ? ",true," : ",false,";
    head += std::to_string(res.complex_count);
    head += ',';
    head += std::to_string(res.isotropic_excess);
    head += ',';
    head += csv_field(classes);
    head += ',';

    if (res.tangents.empty()) {
        out += head;
        out += ",,,,,,,,,,,,,,,";
        out += csv_field(res.note);
        out += '\n';
        return;
    }
    for (int i = 0; i < static_cast<int>(res.tangents.size()); ++i) {
        const spheres::TangentSolution& t = res.tangents[i];
        out += head;
        out += std::to_string(i);
        out += ',';
        out += std::to_string(t.multiplicity);
        out += t.is_real ? ",true," : ",false,";
        out += fmt17(worst_residual(t));
        for (int k = 0; k < 3; ++k) {
            out += ',';
            out += fmt17(t.p(k).real());
            out += ',';
            out += fmt17(t.p(k).imag());
        }
        for (int k = 0; k < 3; ++k) {
            out += ',';
            out += fmt17(t.v(k).real());
            out += ',';
            out += fmt17(t.v(k).imag());
        }
        out += ',';
        out += csv_field(res.note);
        out += '\n';
    }
}

void append_error_csv(std::string& out, int instance, std::string_view message) {
    out += std::to_string(instance);
    out += ",Error,,,,,,,,,,,,,,,,,,,,,";
    out += csv_field(message);
    out += '\n';
}

// ---- quadric and line interchange ---------------------------------------------------

void write_quadric(JsonWriter& w, const Mat4c& m) {
    w.begin_array();
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) w.complex(m(i, j));
    w.end_array();
}

Mat4c parse_quadric(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(Err::ParseError, e.what());
    }
    if (!root.is_array() || root.size() != 10)
        fail(Err::ParseError, "quadric must be a list of ten [re,im] pairs");
    Mat4c m;
    int n = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j, ++n) {
            const json& e = root[n];
            if (!e.is_array() || e.size() != 2)
                fail(Err::ParseError, "quadric entries must be [re,im] pairs");
            m(i, j) = cplx(finite_number(e[0], "quadric entry"),
                           finite_number(e[1], "quadric entry"));
            m(j, i) = m(i, j);
        }
    return m;
}

void write_plucker_line(JsonWriter& w, const linegeom::PluckerLine& l) {
    w.begin_object();
    w.key("plucker").begin_array();
    for (int i = 0; i < 6; ++i) w.complex(l.x(i));
    w.end_array();
    w.end_object();
}

void write_pv_line(JsonWriter& w, const linegeom::PVLine& l) {
    w.begin_object();
    w.key("pv").begin_object();
    w.key("p").real_vector(l.p.real());
    w.key("v").real_vector(l.v.real());
    w.end_object();
    w.end_object();
}

// ---- OBJ --------------------------------------------------------------------------

int ObjWriter::add_vertex(const Eigen::Vector3d& v) {
    vertices_.push_back(v);
    return static_cast<int>(vertices_.size());  // 1-based
}

void ObjWriter::add_icosphere(const Eigen::Vector3d& center, double radius, int subdivisions) {
    static const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Eigen::Vector3d> verts = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
        {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    for (Eigen::Vector3d& v : verts) v.normalize();
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const std::pair<int, int> k = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
            auto it = midpoint.find(k);
            if (it != midpoint.end()) return it->second;
            verts.push_back((verts[a] + verts[b]).normalized());
            const int idx = static_cast<int>(verts.size()) - 1;
            midpoint.emplace(k, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(4 * faces.size());
        for (const std::array<int, 3>& f : faces) {
            const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }

    const int base = static_cast<int>(vertices_.size());
    for (const Eigen::Vector3d& v : verts) add_vertex(center + radius * v);
    for (const std::array<int, 3>& f : faces)
        faces_.push_back({base + f[0] + 1, base + f[1] + 1, base + f[2] + 1});
}

void ObjWriter::add_segment(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    const int ia = add_vertex(a);
    const int ib = add_vertex(b);
    segments_.push_back({ia, ib});
}

std::string ObjWriter::str() const {
    std::string out;
    out.reserve(32 * vertices_.size() + 16 * faces_.size());
    for (const Eigen::Vector3d& v : vertices_) {
        out += "v ";
        out += fmt17(v(0));
        out += ' ';
        out += fmt17(v(1));
        out += ' ';
        out += fmt17(v(2));
        out += '\n';
    }
    for (const std::array<int, 3>& f : faces_) {
        out += "f ";
        out += std::to_string(f[0]);
        out += ' ';
        out += std::to_string(f[1]);
        out += ' ';
        out += std::to_string(f[2]);
        out += '\n';
    }
    for (const std::array<int, 2>& s : segments_) {
        out += "l ";
        out += std::to_string(s[0]);
        out += ' ';
        out += std::to_string(s[1]);
        out += '\n';
    }
    return out;
}

std::string tangents_obj(const std::array<spheres::Sphere, 4>& s,
                         const std::vector<spheres::TangentSolution>& tangents) {
    Eigen::Vector3d mid = Eigen::Vector3d::Zero();
    for (const spheres::Sphere& sp : s) mid += sp.center;
    mid /= 4.0;
    double radius = 0.0;
    for (const spheres::Sphere& sp : s)
        radius = std::max(radius, (sp.center - mid).norm() + sp.radius);
    const double half = 3.0 * radius;

    ObjWriter obj;
    for (const spheres::Sphere& sp : s) obj.add_icosphere(sp.center, sp.radius);
    for (const spheres::TangentSolution& t : tangents) {
        if (!t.is_real) continue;
        const Eigen::Vector3d p = t.p.real();
        const Eigen::Vector3d v = t.v.real().normalized();
        double lo = -std::numeric_limits<double>::infinity(), hi = -lo;
        bool miss = false;
        for (int k = 0; k < 3 && !miss; ++k) {
            if (std::abs(v(k)) < 1e-15) {
                if (std::abs(p(k) - mid(k)) > half) miss = true;
                continue;
            }
            double a = (mid(k) - half - p(k)) / v(k);
            double b = (mid(k) + half - p(k)) / v(k);
            if (a > b) std::swap(a, b);
            lo = std::max(lo, a);
            hi = std::min(hi, b);
        }
        if (!miss && lo < hi) obj.add_segment(p + lo * v, p + hi * v);
    }
    return obj.str();
}

}  // namespace tangentloci::jsonio
