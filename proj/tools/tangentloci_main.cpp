// Command-line front end: batch tangent solving, configuration demos, and
// the self-check suite. JSON in/out (CSV on request) plus OBJ emission.
#include <CLI11.hpp>
#include <json.hpp>

#include "tangentloci/baskets.hpp"
#include "tangentloci/jsonio.hpp"
#include "tangentloci/linegeom.hpp"
#include "tangentloci/selfcheck.hpp"
#include "tangentloci/spheres.hpp"
#include "tangentloci/symqr.hpp"
#include "tangentloci/types.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace {

using namespace tangentloci;

struct RunConfig {
    Config cfg;
    std::string format = "json";
    std::string emit_obj;  // empty: no OBJ output
};

// ---- tangents -----------------------------------------------------------

struct InstanceError {
    Err code;
    std::string message;
};

using InstanceOutcome = std::variant<spheres::SolveResult, InstanceError>;

InstanceOutcome solve_instance(const jsonio::SolveInstance& inst, const RunConfig& rc) {
    Config cfg = rc.cfg;
    if (inst.seed) cfg.seed = *inst.seed;
    if (inst.tol) cfg.tol = *inst.tol;
    try {
        return spheres::solve(inst.spheres, cfg);
    } catch (const Error& e) {
        return InstanceError{e.code(), e.what()};
    }
}

void write_instance_error(jsonio::JsonWriter& w, const InstanceError& err) {
    w.begin_object();
    w.key("error").begin_object();
    w.key("code").string(err_name(err.code));
    w.key("message").string(err.message);
    w.end_object();
    w.end_object();
}

int cmd_tangents(const std::string& input_path, const RunConfig& rc) {
    std::ifstream in(input_path, std::ios::binary);
    if (!in) {
        std::cerr << "tangentloci: cannot open input file '" << input_path << "'\n";
        return 1;
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    jsonio::SolveInput parsed;
    try {
        parsed = jsonio::parse_solve_input(buf.str());
    } catch (const Error& e) {
        std::cerr << "tangentloci: " << e.what() << "\n";
        return 1;
    }

    if (!rc.emit_obj.empty() && parsed.batch) {
        std::cerr << "tangentloci: --emit-obj requires a single-instance input\n";
        return 1;
    }

    std::vector<InstanceOutcome> outcomes(parsed.instances.size());
    if (parsed.instances.size() > 1) {
        std::vector<std::future<InstanceOutcome>> jobs;
        jobs.reserve(parsed.instances.size());
        for (const jsonio::SolveInstance& inst : parsed.instances)
            jobs.push_back(std::async(std::launch::async,
                                      [&inst, &rc] { return solve_instance(inst, rc); }));
        for (size_t i = 0; i < jobs.size(); ++i) outcomes[i] = jobs[i].get();
    } else {
        for (size_t i = 0; i < parsed.instances.size(); ++i)
            outcomes[i] = solve_instance(parsed.instances[i], rc);
    }

    bool any_input_error = false, any_solver_error = false;
    for (const InstanceOutcome& oc : outcomes)
        if (const InstanceError* err = std::get_if<InstanceError>(&oc)) {
            if (err->code == Err::DuplicateCenters || err->code == Err::InvalidInput ||
                err->code == Err::ParseError)
                any_input_error = true;
            else
                any_solver_error = true;
        }

    if (rc.format == "csv") {
        std::string out = jsonio::solve_csv_header();
        for (size_t i = 0; i < outcomes.size(); ++i) {
            if (const auto* res = std::get_if<spheres::SolveResult>(&outcomes[i]))
                jsonio::append_solve_csv(out, static_cast<int>(i), *res);
            else {
                const InstanceError& err = std::get<InstanceError>(outcomes[i]);
                jsonio::append_error_csv(out, static_cast<int>(i),
                                         std::string(err_name(err.code)) + ": " + err.message);
            }
        }
        std::cout << out;
    } else {
        jsonio::JsonWriter w;
        if (parsed.batch) w.begin_array();
        for (const InstanceOutcome& oc : outcomes) {
            if (const auto* res = std::get_if<spheres::SolveResult>(&oc))
                jsonio::write_solve_result(w, *res);
            else
                write_instance_error(w, std::get<InstanceError>(oc));
        }
        if (parsed.batch) w.end_array();
        std::cout << w.str() << "\n";
    }

    if (!rc.emit_obj.empty()) {
        if (const auto* res = std::get_if<spheres::SolveResult>(&outcomes[0])) {
            std::vector<spheres::TangentSolution> lines = res->tangents;
            if (res->degenerate)
                for (const linegeom::PVLine& pv : res->degenerate->sample_tangents) {
                    spheres::TangentSolution t;
                    t.p = pv.p;
                    t.v = pv.v;
                    t.is_real = true;
                    lines.push_back(t);
                }
            std::ofstream obj(rc.emit_obj, std::ios::binary);
            if (!obj) {
                std::cerr << "tangentloci: cannot write OBJ file '" << rc.emit_obj << "'\n";
                return 1;
            }
            obj << jsonio::tangents_obj(parsed.instances[0].spheres, lines);
        } else {
            std::cerr << "tangentloci: no OBJ emitted, the instance failed to solve\n";
        }
    }

    if (any_input_error) return 1;
    if (any_solver_error) return 2;
    return 0;
}

// ---- demos --------------------------------------------------------------

void write_conic(jsonio::JsonWriter& w, const Mat3c& m) {
    // upper triangle, row-major: m11 m12 m13 m22 m23 m33
    w.begin_array();
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) w.complex(m(i, j));
    w.end_array();
}

std::string demo_reye(const Config& cfg) {
    const baskets::ReyeConfiguration rey = baskets::standard_double_four(cfg);
    const baskets::ReyeDegrees deg = baskets::reye_incidence(rey, cfg);
    int basket_pairs = 0;
    double worst = 0;
    for (int i = 0; i < 4; ++i)
        for (int a = 0; a < 4; ++a)
            if (const auto w = baskets::is_basket_pair(rey.q[i], rey.b[a], cfg)) {
                ++basket_pairs;
                worst = std::max(worst, w->residual);
            }
    jsonio::JsonWriter w;
    w.begin_object();
    w.key("demo").string("reye");
    w.key("points").integer(12);
    w.key("lines").integer(16);
    w.key("ok").boolean(deg.ok && basket_pairs == 16);
    w.key("incidence_sum").integer(rey.incidence.sum());
    w.key("point_degrees").begin_array();
    for (int dgr : deg.point_degrees) w.integer(dgr);
    w.end_array();
    w.key("line_degrees").begin_array();
    for (int dgr : deg.line_degrees) w.integer(dgr);
    w.end_array();
    w.key("basket_pairs").integer(basket_pairs);
    w.key("worst_witness_residual").number(worst);
    w.key("q").begin_array();
    for (const auto& q : rey.q) jsonio::write_quadric(w, q.matrix());
    w.end_array();
    w.key("b").begin_array();
    for (const auto& q : rey.b) jsonio::write_quadric(w, q.matrix());
    w.end_array();
    w.key("d").begin_array();
    for (const auto& q : rey.d) jsonio::write_quadric(w, q.matrix());
    w.end_array();
    w.key("point_quadrics").begin_array();
    for (const auto& q : rey.points) jsonio::write_quadric(w, q.matrix());
    w.end_array();
    w.key("line_faces").begin_array();
    for (const baskets::ReyeLine& l : rey.lines) {
        w.begin_object();
        w.key("q_face").integer(l.q_face);
        w.key("b_face").integer(l.b_face);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

std::string demo_double5(const Config& cfg) {
    const baskets::DoubleFive df = baskets::double_five(cfg);
    jsonio::JsonWriter w;
    w.begin_object();
    w.key("demo").string("double5");
    w.key("pencils_with_rank_one").integer(df.pencils_with_rank_one);
    w.key("total_pencils").integer(25);
    w.key("ok").boolean(df.pencils_with_rank_one == 25);
    w.key("worst_residual").number(df.worst_residual);
    w.key("q").begin_array();
    for (const Mat3c& c : df.q) write_conic(w, c);
    w.end_array();
    w.key("b").begin_array();
    for (const Mat3c& c : df.b) write_conic(w, c);
    w.end_array();
    w.end_object();
    return w.str();
}

std::string demo_basket_pair(const Config& cfg) {
    Mat4c h = Mat4c::Zero(), s = Mat4c::Zero();
    h.diagonal() << 1, 1, -1, -1;  // ruled quadric
    s.diagonal() << 1, 1, 1, -1;   // sphere
    const symqr::ProjQuadric q1(h), q2(s);
    const auto witness = baskets::is_basket_pair(q1, q2, cfg);
    jsonio::JsonWriter w;
    w.begin_object();
    w.key("demo").string("basket-pair");
    w.key("is_basket").boolean(witness.has_value());
    if (witness) {
        w.key("residual").number(witness->residual);
        w.key("location").begin_array();
        w.complex(witness->location.lambda).complex(witness->location.mu);
        w.end_array();
        w.key("witness");
        jsonio::write_quadric(w, witness->d.matrix());
    }
    w.key("q1");
    jsonio::write_quadric(w, q1.matrix());
    w.key("q2");
    jsonio::write_quadric(w, q2.matrix());
    w.end_object();
    return w.str();
}

const char* quadrilateral_class_name(baskets::QuadrilateralClass c) {
    switch (c) {
        case baskets::QuadrilateralClass::Typical: return "Typical";
        case baskets::QuadrilateralClass::Special: return "Special";
        case baskets::QuadrilateralClass::Solvable: return "Solvable";
        case baskets::QuadrilateralClass::Other: return "Other";
    }
    return "Other";
}

std::string demo_quadrilateral(const Config& cfg) {
    std::array<symqr::ProjQuadric, 4> d;
    for (int i = 0; i < 4; ++i) {
        Mat4c e = Mat4c::Zero();
        e(i, i) = 1.0;
        d[i] = symqr::ProjQuadric(e);
    }
    Rng rng(Rng::mix(cfg.seed, 901));
    std::array<symqr::ProjQuadric, 3> plane;
    for (int a = 0; a < 3; ++a) {
        const VecXc y = rng.cgauss_vec(4);
        Mat4c m = Mat4c::Zero();
        for (int j = 0; j < 4; ++j) m += y(j) * d[j].matrix();
        plane[a] = symqr::ProjQuadric(m);
    }
    const baskets::CompleteQuadrilateral cq =
        baskets::construct_typical_quadrilateral(d, plane, cfg);
    const std::array<symqr::ProjQuadric, 4> rec = baskets::reconstruct_tetrahedron(cq, cfg);
    double recon = 0;
    for (const symqr::ProjQuadric& q : rec) {
        double best = 1.0;
        for (const symqr::ProjQuadric& dd : d) best = std::min(best, symqr::distance(q, dd));
        recon = std::max(recon, best);
    }
    jsonio::JsonWriter w;
    w.begin_object();
    w.key("demo").string("quadrilateral");
    w.key("classification").string(quadrilateral_class_name(cq.classification));
    w.key("reconstruction_residual").number(recon);
    w.key("vertex_ranks").begin_array();
    for (const baskets::QuadrilateralVertex& v : cq.vertices) w.integer(v.rank.rank);
    w.end_array();
    w.key("vertex_lines").begin_array();
    for (const baskets::QuadrilateralVertex& v : cq.vertices) {
        w.begin_array();
        w.integer(v.on_line_a).integer(v.on_line_b);
        w.end_array();
    }
    w.end_array();
    w.key("vertices").begin_array();
    for (const baskets::QuadrilateralVertex& v : cq.vertices)
        jsonio::write_quadric(w, v.q.matrix());
    w.end_array();
    w.key("plane").begin_array();
    for (const symqr::ProjQuadric& p : cq.plane) jsonio::write_quadric(w, p.matrix());
    w.end_array();
    w.end_object();
    return w.str();
}

// CSV for hierarchical reports: one "path,value" row per scalar leaf,
// depth-first in emission order.
void flatten_json(const nlohmann::ordered_json& j, const std::string& path, std::string& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            flatten_json(v, path.empty() ? k : path + "." + k, out);
    } else if (j.is_array()) {
        for (size_t i = 0; i < j.size(); ++i)
            flatten_json(j[i], path + "[" + std::to_string(i) + "]", out);
    } else {
        out += path;
        out += ",";
        out += j.is_string() ? j.get<std::string>() : j.dump();
        out += "\n";
    }
}

int emit_report(const std::string& json, const RunConfig& rc) {
    if (rc.format == "csv") {
        std::string out = "path,value\n";
        flatten_json(nlohmann::ordered_json::parse(json), "", out);
        std::cout << out;
    } else {
        std::cout << json << "\n";
    }
    return 0;
}

int cmd_demo(const std::string& name, const RunConfig& rc) {
    try {
        if (name == "reye") return emit_report(demo_reye(rc.cfg), rc);
        if (name == "double5") return emit_report(demo_double5(rc.cfg), rc);
        if (name == "basket-pair") return emit_report(demo_basket_pair(rc.cfg), rc);
        if (name == "quadrilateral") return emit_report(demo_quadrilateral(rc.cfg), rc);
    } catch (const Error& e) {
        std::cerr << "tangentloci: demo '" << name << "' failed: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "tangentloci: unknown demo '" << name
              << "'; available: reye, double5, basket-pair, quadrilateral\n";
    return 1;
}

// ---- selfcheck ------------------------------------------------------------

std::string csv_escape(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

int cmd_selfcheck(const RunConfig& rc) {
    const std::vector<selfcheck::CheckResult> results = selfcheck::run_all(rc.cfg);
    int failed = 0;
    for (const selfcheck::CheckResult& c : results)
        if (!c.pass) ++failed;

    if (rc.format == "csv") {
        std::string out = "name,pass,metric,threshold,note\n";
        for (const selfcheck::CheckResult& c : results) {
            out += c.name;
            out += c.pass ? ",true," : ",false,";
            out += jsonio::fmt17(c.metric);
            out += ",";
            out += jsonio::fmt17(c.threshold);
            out += ",";
            out += csv_escape(c.note);
            out += "\n";
        }
        std::cout << out;
    } else {
        jsonio::JsonWriter w;
        w.begin_object();
        w.key("checks").begin_array();
        for (const selfcheck::CheckResult& c : results) {
            w.begin_object();
            w.key("name").string(c.name);
            w.key("pass").boolean(c.pass);
            w.key("metric").number(c.metric);
            w.key("threshold").number(c.threshold);
            w.key("note").string(c.note);
            w.end_object();
        }
        w.end_array();
        w.key("passed").integer(static_cast<long long>(results.size()) - failed);
        w.key("failed").integer(failed);
        w.key("ok").boolean(failed == 0);
        w.end_object();
        std::cout << w.str() << "\n";
    }
    return failed == 0 ? 0 : 1;
}

std::string tol_range_validator(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || !(v > 0.0 && v < 1.0))
        return "must be a real number in (0,1)";
    return {};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Common tangent lines to four spheres: solver, demos, self-checks"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig rc;
    app.add_option("--tol", rc.cfg.tol, "numerical tolerance, in (0,1)")
        ->check(tol_range_validator);
    app.add_option("--tol-cluster", rc.cfg.tol_cluster, "root clustering tolerance, in (0,1)")
        ->check(tol_range_validator);
    app.add_option("--seed", rc.cfg.seed, "random seed for perturbations and sampling")
        ->envname("TANGENTLOCI_SEED");
    app.add_option("--format", rc.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));

    std::string input_path, demo_name;
    CLI::App* tangents = app.add_subcommand("tangents", "solve instances from a JSON file");
    tangents->add_option("input", input_path, "input JSON file")->required();
    tangents->add_option("--emit-obj", rc.emit_obj,
                         "write spheres and real tangents to an OBJ file");

    CLI::App* demo = app.add_subcommand(
        "demo", "emit a named configuration: reye, double5, basket-pair, quadrilateral");
    demo->add_option("name", demo_name, "demo name")->required();

    CLI::App* selfcheck_cmd = app.add_subcommand("selfcheck", "run the invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (tangents->parsed()) return cmd_tangents(input_path, rc);
        if (demo->parsed()) return cmd_demo(demo_name, rc);
        if (selfcheck_cmd->parsed()) return cmd_selfcheck(rc);
    } catch (const Error& e) {
        std::cerr << "tangentloci: " << err_name(e.code()) << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "tangentloci: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
