#include "abm/scene.hpp"

#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "abm/fields.hpp"
#include "abm/report_io.hpp"

namespace abm {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                ok = true;
                break;
            }
        if (!ok) fail(path, "unknown key '" + item.key() + "'");
    }
}

const json* find(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& obj, const std::string& path, const char* key) {
    const json* v = find(obj, key);
    if (!v) fail(path, std::string("missing key '") + key + "'");
    if (!v->is_number()) fail(path + "." + key, "expected a number");
    return v->get<double>();
}

double get_number_or(const json& obj, const std::string& path, const char* key, double fallback) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_number()) fail(path + "." + key, "expected a number");
    return v->get<double>();
}

int get_int_or(const json& obj, const std::string& path, const char* key, int fallback) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_number_integer()) fail(path + "." + key, "expected an integer");
    return v->get<int>();
}

bool get_bool_or(const json& obj, const std::string& path, const char* key, bool fallback) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(path + "." + key, "expected a boolean");
    return v->get<bool>();
}

Vec3 as_vec3(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
        fail(path, "expected an array of 3 numbers");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

Vec3 get_vec3(const json& obj, const std::string& path, const char* key) {
    const json* v = find(obj, key);
    if (!v) fail(path, std::string("missing key '") + key + "'");
    return as_vec3(*v, path + "." + key);
}

Vec3 get_vec3_or(const json& obj, const std::string& path, const char* key, const Vec3& fallback) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    return as_vec3(*v, path + "." + key);
}

void require_positive(double v, const std::string& path, const char* key) {
    if (!(v > 0)) fail(path + "." + key, "must be > 0");
}

DriftParams parse_drift(const json* v, const std::string& path, double current) {
    if (!v) return DriftParams::for_current(current);
    if (!v->is_object()) fail(path, "expected an object");
    check_keys(*v, path,
               {"carrier_density_cm3", "carrier_charge_esu", "cross_section_cm2", "drift_speed_cm_s"});
    DriftParams d;
    d.carrier_density = get_number(*v, path, "carrier_density_cm3");
    d.carrier_charge = get_number(*v, path, "carrier_charge_esu");
    d.cross_section = get_number(*v, path, "cross_section_cm2");
    d.drift_speed = get_number(*v, path, "drift_speed_cm_s");
    try {
        validate_drift(d, current);
    } catch (const InvalidInput& e) {
        fail(path, e.what());
    }
    return d;
}

BeamPath parse_path(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() < 2) fail(path, "expected an array of >= 2 vertices");
    BeamPath p;
    p.vertices.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        p.vertices.push_back(as_vec3(v[i], path + "[" + std::to_string(i) + "]"));
    return p;
}

SourceConfig parse_source(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object");
    const json* type = find(v, "type");
    if (!type || !type->is_string()) fail(path, "missing string key 'type'");
    const std::string t = type->get<std::string>();

    if (t == "solenoid") {
        check_keys(v, path,
                   {"type", "center_cm", "axis", "radius_cm", "loops_per_cm", "length_cm",
                    "current_statA", "include_axial_wire", "elements_per_loop"});
        SolenoidSourceConfig c;
        c.solenoid.center = get_vec3_or(v, path, "center_cm", {});
        c.solenoid.axis = get_vec3_or(v, path, "axis", {0, 0, 1});
        c.solenoid.radius = get_number(v, path, "radius_cm");
        require_positive(c.solenoid.radius, path, "radius_cm");
        c.solenoid.loops_per_length = get_number(v, path, "loops_per_cm");
        require_positive(c.solenoid.loops_per_length, path, "loops_per_cm");
        c.solenoid.length = get_number(v, path, "length_cm");
        require_positive(c.solenoid.length, path, "length_cm");
        c.solenoid.current = get_number(v, path, "current_statA");
        c.solenoid.include_axial_wire = get_bool_or(v, path, "include_axial_wire", false);
        c.elements_per_loop = get_int_or(v, path, "elements_per_loop", 360);
        try {
            c.solenoid.validate();
        } catch (const Error& e) {
            fail(path, e.what());
        }
        return c;
    }
    if (t == "rect_loop") {
        check_keys(v, path,
                   {"type", "center_cm", "normal", "arm_axis", "arm_length_s_cm", "half_gap_r_cm",
                    "current_statA", "elements_per_side", "drift"});
        RectSourceConfig c;
        c.loop.center = get_vec3_or(v, path, "center_cm", {});
        c.loop.normal = get_vec3_or(v, path, "normal", {0, 0, 1});
        c.loop.arm_axis = get_vec3_or(v, path, "arm_axis", {1, 0, 0});
        c.loop.arm_length_s = get_number(v, path, "arm_length_s_cm");
        require_positive(c.loop.arm_length_s, path, "arm_length_s_cm");
        c.loop.half_gap_r = get_number(v, path, "half_gap_r_cm");
        require_positive(c.loop.half_gap_r, path, "half_gap_r_cm");
        c.loop.current = get_number(v, path, "current_statA");
        c.loop.drift = parse_drift(find(v, "drift"), path + ".drift", c.loop.current);
        c.elements_per_side = get_int_or(v, path, "elements_per_side", 400);
        try {
            c.loop.validate();
        } catch (const Error& e) {
            fail(path, e.what());
        }
        return c;
    }
    if (t == "circ_loop") {
        check_keys(v, path,
                   {"type", "center_cm", "normal", "radius_cm", "current_statA", "elements", "drift"});
        CircSourceConfig c;
        c.loop.center = get_vec3_or(v, path, "center_cm", {});
        c.loop.normal = get_vec3_or(v, path, "normal", {0, 0, 1});
        c.loop.radius = get_number(v, path, "radius_cm");
        require_positive(c.loop.radius, path, "radius_cm");
        c.loop.current = get_number(v, path, "current_statA");
        c.loop.drift = parse_drift(find(v, "drift"), path + ".drift", c.loop.current);
        c.elements = get_int_or(v, path, "elements", 720);
        try {
            c.loop.validate();
        } catch (const Error& e) {
            fail(path, e.what());
        }
        return c;
    }
    if (t == "wire") {
        check_keys(v, path, {"type", "point_cm", "direction", "current_statA", "guard_radius_cm"});
        WireSourceConfig c;
        c.wire.point = get_vec3_or(v, path, "point_cm", {});
        c.wire.direction = get_vec3_or(v, path, "direction", {0, 0, 1});
        c.wire.current = get_number(v, path, "current_statA");
        c.wire.guard_radius = get_number_or(v, path, "guard_radius_cm", 1e-9);
        try {
            c.wire.validate();
        } catch (const Error& e) {
            fail(path, e.what());
        }
        return c;
    }
    fail(path + ".type", "unknown source type '" + t + "'");
}

}  // namespace

SceneConfig parse_scene(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    check_keys(root, "config",
               {"units", "quadrature", "sources", "charges", "phase", "fringe", "ramp", "field_grid"});

    SceneConfig cfg;

    if (const json* u = find(root, "units")) {
        if (!u->is_string()) fail("config.units", "expected \"gaussian\" or \"natural\"");
        const std::string mode = u->get<std::string>();
        if (mode == "gaussian")
            cfg.constants = Constants::gaussian();
        else if (mode == "natural")
            cfg.constants = Constants::natural();
        else
            fail("config.units", "expected \"gaussian\" or \"natural\", got '" + mode + "'");
    }

    if (const json* q = find(root, "quadrature")) {
        if (!q->is_object()) fail("config.quadrature", "expected an object");
        check_keys(*q, "config.quadrature", {"rule", "n_points", "rel_tol"});
        if (const json* rule = find(*q, "rule")) {
            const std::string r = rule->is_string() ? rule->get<std::string>() : "";
            if (r == "midpoint")
                cfg.quadrature.rule = QuadratureRule::midpoint;
            else if (r == "gauss_legendre")
                cfg.quadrature.rule = QuadratureRule::gauss_legendre;
            else
                fail("config.quadrature.rule", "expected \"midpoint\" or \"gauss_legendre\"");
        }
        cfg.quadrature.n_points = get_int_or(*q, "config.quadrature", "n_points", cfg.quadrature.n_points);
        cfg.quadrature.rel_tol = get_number_or(*q, "config.quadrature", "rel_tol", cfg.quadrature.rel_tol);
        try {
            cfg.quadrature.validate();
        } catch (const Error& e) {
            fail("config.quadrature", e.what());
        }
    }

    if (const json* sources = find(root, "sources")) {
        if (!sources->is_array()) fail("config.sources", "expected an array");
        for (std::size_t i = 0; i < sources->size(); ++i)
            cfg.sources.push_back(
                parse_source((*sources)[i], "config.sources[" + std::to_string(i) + "]"));
    }

    if (const json* charges = find(root, "charges")) {
        if (!charges->is_array()) fail("config.charges", "expected an array");
        for (std::size_t i = 0; i < charges->size(); ++i) {
            const json& c = (*charges)[i];
            const std::string path = "config.charges[" + std::to_string(i) + "]";
            if (!c.is_object()) fail(path, "expected an object");
            check_keys(c, path, {"q_esu", "position_cm", "mass_g", "velocity_cm_s"});
            PointCharge pc;
            pc.q = get_number(c, path, "q_esu");
            pc.position = get_vec3(c, path, "position_cm");
            pc.mass = get_number_or(c, path, "mass_g", 0.0);
            if (pc.mass < 0) fail(path + ".mass_g", "must be >= 0");
            pc.velocity = get_vec3_or(c, path, "velocity_cm_s", {});
            cfg.charges.push_back(pc);
        }
    }

    if (const json* phase = find(root, "phase")) {
        if (!phase->is_object()) fail("config.phase", "expected an object");
        check_keys(*phase, "config.phase", {"path1_cm", "path2_cm"});
        const json* p1 = find(*phase, "path1_cm");
        const json* p2 = find(*phase, "path2_cm");
        if (!p1 || !p2) fail("config.phase", "needs path1_cm and path2_cm");
        PhasePathsConfig pp;
        pp.path1 = parse_path(*p1, "config.phase.path1_cm");
        pp.path2 = parse_path(*p2, "config.phase.path2_cm");
        if (!(pp.path1.vertices.front() == pp.path2.vertices.front()) ||
            !(pp.path1.vertices.back() == pp.path2.vertices.back()))
            throw EndpointMismatch("config.phase: path1_cm and path2_cm must share exact endpoints");
        cfg.phase = std::move(pp);
    }

    if (const json* fringe = find(root, "fringe")) {
        if (!fringe->is_object()) fail("config.fringe", "expected an object");
        check_keys(*fringe, "config.fringe",
                   {"wavelength_cm", "slit_separation_cm", "screen_distance_cm", "screen_samples"});
        FringeSpec fs;
        fs.wavelength = get_number_or(*fringe, "config.fringe", "wavelength_cm", fs.wavelength);
        fs.slit_separation =
            get_number_or(*fringe, "config.fringe", "slit_separation_cm", fs.slit_separation);
        fs.screen_distance =
            get_number_or(*fringe, "config.fringe", "screen_distance_cm", fs.screen_distance);
        fs.screen_samples = get_int_or(*fringe, "config.fringe", "screen_samples", fs.screen_samples);
        try {
            fs.validate();
        } catch (const Error& e) {
            fail("config.fringe", e.what());
        }
        cfg.fringe = fs;
    }

    if (const json* ramp = find(root, "ramp")) {
        if (!ramp->is_object()) fail("config.ramp", "expected an object");
        check_keys(*ramp, "config.ramp", {"I0_statA", "duration_s", "dt_s", "mode", "shape"});
        RampConfig rc;
        rc.profile.I0 = get_number(*ramp, "config.ramp", "I0_statA");
        rc.profile.duration = get_number(*ramp, "config.ramp", "duration_s");
        require_positive(rc.profile.duration, "config.ramp", "duration_s");
        rc.dt = get_number_or(*ramp, "config.ramp", "dt_s", 0.0);
        if (const json* m = find(*ramp, "mode")) {
            const std::string mode = m->is_string() ? m->get<std::string>() : "";
            if (mode == "frozen")
                rc.mode = ChargeMode::frozen;
            else if (mode == "free")
                rc.mode = ChargeMode::free_motion;
            else
                fail("config.ramp.mode", "expected \"frozen\" or \"free\"");
        }
        if (const json* sh = find(*ramp, "shape")) {
            const std::string shape = sh->is_string() ? sh->get<std::string>() : "";
            if (shape == "linear")
                rc.profile.shape = RampShape::linear;
            else if (shape == "constant")
                rc.profile.shape = RampShape::constant;
            else
                fail("config.ramp.shape", "expected \"linear\" or \"constant\"");
        }
        cfg.ramp = rc;
    }

    if (const json* grid = find(root, "field_grid")) {
        if (!grid->is_object()) fail("config.field_grid", "expected an object");
        check_keys(*grid, "config.field_grid", {"min_cm", "max_cm", "counts"});
        GridConfig gc;
        gc.min = get_vec3(*grid, "config.field_grid", "min_cm");
        gc.max = get_vec3(*grid, "config.field_grid", "max_cm");
        const json* counts = find(*grid, "counts");
        if (!counts || !counts->is_array() || counts->size() != 3)
            fail("config.field_grid.counts", "expected an array of 3 integers");
        for (int a = 0; a < 3; ++a) {
            if (!(*counts)[static_cast<std::size_t>(a)].is_number_integer())
                fail("config.field_grid.counts", "expected an array of 3 integers");
            gc.counts[static_cast<std::size_t>(a)] = (*counts)[static_cast<std::size_t>(a)].get<int>();
            if (gc.counts[static_cast<std::size_t>(a)] < 1)
                fail("config.field_grid.counts", "counts must be >= 1");
        }
        cfg.field_grid = gc;
    }

    return cfg;
}

SceneConfig load_scene_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parse_scene(os.str());
}

namespace {

io::Json drift_json(const DriftParams& d) {
    io::Json j = io::Json::object();
    j.add("carrier_density_cm3", io::Json::number(d.carrier_density));
    j.add("carrier_charge_esu", io::Json::number(d.carrier_charge));
    j.add("cross_section_cm2", io::Json::number(d.cross_section));
    j.add("drift_speed_cm_s", io::Json::number(d.drift_speed));
    return j;
}

io::Json path_json(const BeamPath& p) {
    io::Json arr = io::Json::array();
    for (const Vec3& v : p.vertices) arr.push(io::Json::vec3(v));
    return arr;
}

}  // namespace

std::string scene_to_json(const SceneConfig& cfg) {
    io::Json root = io::Json::object();
    root.add("units",
             io::Json::string(cfg.constants.mode == UnitMode::gaussian ? "gaussian" : "natural"));

    io::Json quad = io::Json::object();
    quad.add("rule", io::Json::string(cfg.quadrature.rule == QuadratureRule::midpoint
                                          ? "midpoint"
                                          : "gauss_legendre"));
    quad.add("n_points", io::Json::integer(cfg.quadrature.n_points));
    quad.add("rel_tol", io::Json::number(cfg.quadrature.rel_tol));
    root.add("quadrature", std::move(quad));

    io::Json sources = io::Json::array();
    for (const SourceConfig& sc : cfg.sources) {
        io::Json s = io::Json::object();
        if (const auto* sol = std::get_if<SolenoidSourceConfig>(&sc)) {
            s.add("type", io::Json::string("solenoid"));
            s.add("center_cm", io::Json::vec3(sol->solenoid.center));
            s.add("axis", io::Json::vec3(sol->solenoid.axis));
            s.add("radius_cm", io::Json::number(sol->solenoid.radius));
            s.add("loops_per_cm", io::Json::number(sol->solenoid.loops_per_length));
            s.add("length_cm", io::Json::number(sol->solenoid.length));
            s.add("current_statA", io::Json::number(sol->solenoid.current));
            s.add("include_axial_wire", io::Json::boolean(sol->solenoid.include_axial_wire));
            s.add("elements_per_loop", io::Json::integer(sol->elements_per_loop));
        } else if (const auto* rect = std::get_if<RectSourceConfig>(&sc)) {
            s.add("type", io::Json::string("rect_loop"));
            s.add("center_cm", io::Json::vec3(rect->loop.center));
            s.add("normal", io::Json::vec3(rect->loop.normal));
            s.add("arm_axis", io::Json::vec3(rect->loop.arm_axis));
            s.add("arm_length_s_cm", io::Json::number(rect->loop.arm_length_s));
            s.add("half_gap_r_cm", io::Json::number(rect->loop.half_gap_r));
            s.add("current_statA", io::Json::number(rect->loop.current));
            s.add("elements_per_side", io::Json::integer(rect->elements_per_side));
            s.add("drift", drift_json(rect->loop.drift));
        } else if (const auto* circ = std::get_if<CircSourceConfig>(&sc)) {
            s.add("type", io::Json::string("circ_loop"));
            s.add("center_cm", io::Json::vec3(circ->loop.center));
            s.add("normal", io::Json::vec3(circ->loop.normal));
            s.add("radius_cm", io::Json::number(circ->loop.radius));
            s.add("current_statA", io::Json::number(circ->loop.current));
            s.add("elements", io::Json::integer(circ->elements));
            s.add("drift", drift_json(circ->loop.drift));
        } else {
            const auto& wire = std::get<WireSourceConfig>(sc);
            s.add("type", io::Json::string("wire"));
            s.add("point_cm", io::Json::vec3(wire.wire.point));
            s.add("direction", io::Json::vec3(wire.wire.direction));
            s.add("current_statA", io::Json::number(wire.wire.current));
            s.add("guard_radius_cm", io::Json::number(wire.wire.guard_radius));
        }
        sources.push(std::move(s));
    }
    root.add("sources", std::move(sources));

    io::Json charges = io::Json::array();
    for (const PointCharge& pc : cfg.charges) {
        io::Json c = io::Json::object();
        c.add("q_esu", io::Json::number(pc.q));
        c.add("position_cm", io::Json::vec3(pc.position));
        c.add("mass_g", io::Json::number(pc.mass));
        c.add("velocity_cm_s", io::Json::vec3(pc.velocity));
        charges.push(std::move(c));
    }
    root.add("charges", std::move(charges));

    if (cfg.phase) {
        io::Json p = io::Json::object();
        p.add("path1_cm", path_json(cfg.phase->path1));
        p.add("path2_cm", path_json(cfg.phase->path2));
        root.add("phase", std::move(p));
    }
    if (cfg.fringe) {
        io::Json f = io::Json::object();
        f.add("wavelength_cm", io::Json::number(cfg.fringe->wavelength));
        f.add("slit_separation_cm", io::Json::number(cfg.fringe->slit_separation));
        f.add("screen_distance_cm", io::Json::number(cfg.fringe->screen_distance));
        f.add("screen_samples", io::Json::integer(cfg.fringe->screen_samples));
        root.add("fringe", std::move(f));
    }
    if (cfg.ramp) {
        io::Json r = io::Json::object();
        r.add("I0_statA", io::Json::number(cfg.ramp->profile.I0));
        r.add("duration_s", io::Json::number(cfg.ramp->profile.duration));
        r.add("dt_s", io::Json::number(cfg.ramp->dt));
        r.add("mode", io::Json::string(cfg.ramp->mode == ChargeMode::frozen ? "frozen" : "free"));
        r.add("shape",
              io::Json::string(cfg.ramp->profile.shape == RampShape::linear ? "linear" : "constant"));
        root.add("ramp", std::move(r));
    }
    if (cfg.field_grid) {
        io::Json g = io::Json::object();
        g.add("min_cm", io::Json::vec3(cfg.field_grid->min));
        g.add("max_cm", io::Json::vec3(cfg.field_grid->max));
        io::Json counts = io::Json::array();
        for (int c : cfg.field_grid->counts) counts.push(io::Json::integer(c));
        g.add("counts", std::move(counts));
        root.add("field_grid", std::move(g));
    }
    return root.dump();
}

bool scene_equal(const SceneConfig& a, const SceneConfig& b) {
    return a.constants == b.constants && a.quadrature == b.quadrature && a.sources == b.sources &&
           a.charges == b.charges && a.phase == b.phase && a.fringe == b.fringe && a.ramp == b.ramp &&
           a.field_grid == b.field_grid;
}

namespace {

struct FieldLayers {
    Constants k;
    std::vector<Solenoid> solenoids;
    std::vector<StraightWire> wires;
    std::vector<std::shared_ptr<const std::vector<CircuitElement>>> loop_elements;
};

std::shared_ptr<FieldLayers> build_layers(const SceneConfig& cfg) {
    auto layers = std::make_shared<FieldLayers>();
    layers->k = cfg.constants;
    for (const SourceConfig& sc : cfg.sources) {
        if (const auto* sol = std::get_if<SolenoidSourceConfig>(&sc)) {
            layers->solenoids.push_back(sol->solenoid);
            if (const auto wire = solenoid_axial_wire(sol->solenoid)) layers->wires.push_back(*wire);
        } else if (const auto* rect = std::get_if<RectSourceConfig>(&sc)) {
            layers->loop_elements.push_back(std::make_shared<const std::vector<CircuitElement>>(
                discretize(rect->loop, rect->elements_per_side)));
        } else if (const auto* circ = std::get_if<CircSourceConfig>(&sc)) {
            layers->loop_elements.push_back(std::make_shared<const std::vector<CircuitElement>>(
                discretize(circ->loop, circ->elements)));
        } else {
            layers->wires.push_back(std::get<WireSourceConfig>(sc).wire);
        }
    }
    return layers;
}

}  // namespace

VectorField scene_A_field(const SceneConfig& cfg) {
    auto layers = build_layers(cfg);
    return [layers](const Vec3& p) {
        Vec3 A{};
        for (const Solenoid& s : layers->solenoids) A += solenoid_A_analytic(s, p, layers->k);
        for (const StraightWire& w : layers->wires) A += wire_A_analytic(w, p, layers->k);
        for (const auto& el : layers->loop_elements)
            A += vector_potential_numeric(*el, p, layers->k);
        return A;
    };
}

VectorField scene_B_field(const SceneConfig& cfg) {
    auto layers = build_layers(cfg);
    return [layers](const Vec3& p) {
        Vec3 B{};
        for (const Solenoid& s : layers->solenoids) B += solenoid_B_analytic(s, p, layers->k);
        for (const StraightWire& w : layers->wires) B += wire_B_analytic(w, p, layers->k);
        for (const auto& el : layers->loop_elements) B += B_numeric(*el, p, layers->k);
        return B;
    };
}

VectorField scene_E_field(const SceneConfig& cfg) {
    const std::vector<PointCharge> charges = cfg.charges;
    return [charges](const Vec3& p) {
        Vec3 E{};
        for (const PointCharge& c : charges) E += coulomb_E(c, p);
        return E;
    };
}

}  // namespace abm
