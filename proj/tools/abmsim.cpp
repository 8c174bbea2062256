// abmsim -- command-line front end: scene configuration ingestion,
// experiment orchestration, convergence sweeps, and CSV/JSON emission.
//
// Exit codes: 0 ok, 2 config error, 3 evaluation-domain error,
// 4 physics-consistency failure.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abm/dynamics.hpp"
#include "abm/fields.hpp"
#include "abm/momentum.hpp"
#include "abm/parallel.hpp"
#include "abm/phase.hpp"
#include "abm/report_io.hpp"
#include "abm/scene.hpp"
#include "abm/version.hpp"

namespace fs = std::filesystem;
using namespace abm;

namespace {

struct RunContext {
    SceneConfig cfg;
    std::string canonical_config;
    std::string out_dir;
    bool to_stdout = false;
    double tol = 0.02;
    std::string command_line;
};

void emit(const RunContext& ctx, const std::string& filename, const std::string& content) {
    if (ctx.to_stdout) {
        std::cout << content;
        return;
    }
    fs::create_directories(ctx.out_dir);
    io::write_text_file((fs::path(ctx.out_dir) / filename).string(), content);
    std::cerr << "wrote " << (fs::path(ctx.out_dir) / filename).string() << "\n";
}

io::RunManifest manifest_for(const RunContext& ctx, std::vector<std::string> outputs) {
    return io::make_manifest(ctx.command_line, ctx.canonical_config, std::move(outputs));
}

std::vector<std::string> vec3_cells(const Vec3& v) {
    return {io::format_sig17(v.x), io::format_sig17(v.y), io::format_sig17(v.z)};
}

// ---------------------------------------------------------------- fields --

struct GridFlags {
    std::vector<double> gmin, gmax;
    std::vector<int> gn;
};

int cmd_fields(const RunContext& ctx, const GridFlags& flags) {
    GridConfig grid;
    if (flags.gmin.size() == 3 && flags.gmax.size() == 3 && flags.gn.size() == 3) {
        grid.min = {flags.gmin[0], flags.gmin[1], flags.gmin[2]};
        grid.max = {flags.gmax[0], flags.gmax[1], flags.gmax[2]};
        grid.counts = {flags.gn[0], flags.gn[1], flags.gn[2]};
    } else if (ctx.cfg.field_grid) {
        grid = *ctx.cfg.field_grid;
    } else {
        throw ConfigError("fields: no grid given (use --grid-min/--grid-max/--grid-n or field_grid)");
    }

    const VectorField E = scene_E_field(ctx.cfg);
    const VectorField B = scene_B_field(ctx.cfg);
    const VectorField A = scene_A_field(ctx.cfg);

    io::CsvTable table;
    table.comments = io::manifest_comments(manifest_for(ctx, {"fields.csv"}));
    table.header = {"x_cm", "y_cm", "z_cm", "Ex", "Ey", "Ez", "Bx", "By", "Bz", "Ax", "Ay", "Az"};

    auto coord = [](double lo, double hi, int n, int i) {
        return n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    };
    for (int ix = 0; ix < grid.counts[0]; ++ix)
        for (int iy = 0; iy < grid.counts[1]; ++iy)
            for (int iz = 0; iz < grid.counts[2]; ++iz) {
                const Vec3 p{coord(grid.min.x, grid.max.x, grid.counts[0], ix),
                             coord(grid.min.y, grid.max.y, grid.counts[1], iy),
                             coord(grid.min.z, grid.max.z, grid.counts[2], iz)};
                const FieldSample sample{p, E(p), B(p), A(p)};
                std::vector<std::string> row = vec3_cells(sample.position);
                for (const Vec3& v : {sample.E, sample.B, sample.A})
                    for (const std::string& cell : vec3_cells(v)) row.push_back(cell);
                table.add_row(std::move(row));
            }
    emit(ctx, "fields.csv", table.dump());
    return 0;
}

// -------------------------------------------------------------- momentum --

std::optional<MomentumScene> momentum_scene_for(const SceneConfig& cfg, const PointCharge& charge) {
    std::optional<MomentumScene> scene;
    for (const SourceConfig& sc : cfg.sources) {
        MomentumScene ms;
        ms.charge = charge;
        ms.constants = cfg.constants;
        if (const auto* rect = std::get_if<RectSourceConfig>(&sc)) {
            ms.source = rect->loop;
            ms.elements_per_unit = rect->elements_per_side;
        } else if (const auto* circ = std::get_if<CircSourceConfig>(&sc)) {
            ms.source = circ->loop;
            ms.elements_per_unit = circ->elements;
        } else if (const auto* sol = std::get_if<SolenoidSourceConfig>(&sc)) {
            ms.source = sol->solenoid;
            ms.elements_per_unit = sol->elements_per_loop;
        } else {
            continue;  // bare wires carry no loop momentum scene
        }
        if (scene) throw ConfigError("momentum: scene must contain exactly one loop or solenoid");
        scene = std::move(ms);
    }
    return scene;
}

io::Json report_json(const MomentumReport& rep) {
    io::Json j = io::Json::object();
    j.add("p_qa", io::Json::vec3(rep.p_qa));
    j.add("p_drift_sum", io::Json::vec3(rep.p_drift_sum));
    j.add("p_energy_flux", io::Json::vec3(rep.p_energy_flux));
    j.add("p_dipole", io::Json::vec3(rep.p_dipole));
    if (rep.p_two_arm) j.add("p_two_arm", io::Json::vec3(*rep.p_two_arm));
    if (rep.p_field_integral) j.add("p_field_integral", io::Json::vec3(*rep.p_field_integral));
    io::Json diag = io::Json::object();
    diag.add("element_count", io::Json::integer(static_cast<long long>(rep.diagnostics.element_count)));
    diag.add("max_pairwise_rel_diff", io::Json::number(rep.diagnostics.max_pairwise_rel_diff));
    // Single-charge scenes use the bare-filament convention: no induced
    // surface charges are modeled.
    diag.add("filament_convention", io::Json::string("bare"));
    j.add("diagnostics", std::move(diag));
    return j;
}

int cmd_momentum(const RunContext& ctx) {
    if (ctx.cfg.charges.empty()) throw ConfigError("momentum: scene needs at least one charge");

    std::vector<MomentumReport> reports;
    for (const PointCharge& charge : ctx.cfg.charges) {
        const auto scene = momentum_scene_for(ctx.cfg, charge);
        if (!scene) throw ConfigError("momentum: scene needs a loop or solenoid source");
        reports.push_back(momentum_report(*scene));
    }

    io::Json root = io::Json::object();
    root.add("manifest", manifest_json(manifest_for(ctx, {"momentum.json", "momentum.csv"})));
    io::Json arr = io::Json::array();
    for (const MomentumReport& rep : reports) arr.push(report_json(rep));
    root.add("reports", std::move(arr));

    io::CsvTable table;
    table.comments = io::manifest_comments(manifest_for(ctx, {"momentum.json", "momentum.csv"}));
    table.header = {"charge_index", "formulation", "px", "py", "pz"};
    for (std::size_t ci = 0; ci < reports.size(); ++ci)
        for (const auto& [name, p] : reports[ci].populated()) {
            std::vector<std::string> row = {std::to_string(ci), name};
            for (const std::string& cell : vec3_cells(p)) row.push_back(cell);
            table.add_row(std::move(row));
        }

    emit(ctx, "momentum.json", root.dump());
    emit(ctx, "momentum.csv", table.dump());

    double worst = 0.0;
    for (const MomentumReport& rep : reports)
        worst = std::max(worst, rep.diagnostics.max_pairwise_rel_diff);
    if (worst > ctx.tol) {
        std::cerr << "momentum: cross-formulation disagreement " << worst << " exceeds --tol "
                  << ctx.tol << "\n";
        return 4;
    }
    return 0;
}

// ----------------------------------------------------------------- phase --

struct PhaseFlags {
    double circle_radius = 0.0;
    int circle_segments = 256;
    double delta_phi_override = std::nan("");
};

const Solenoid* first_solenoid(const SceneConfig& cfg) {
    for (const SourceConfig& sc : cfg.sources)
        if (const auto* sol = std::get_if<SolenoidSourceConfig>(&sc)) return &sol->solenoid;
    return nullptr;
}

std::pair<BeamPath, BeamPath> phase_paths(const RunContext& ctx, const PhaseFlags& flags) {
    if (flags.circle_radius > 0) {
        const Solenoid* sol = first_solenoid(ctx.cfg);
        if (!sol) throw ConfigError("phase: --circle-radius needs a solenoid source");
        return semicircle_pair(sol->center, flags.circle_radius, sol->axis, flags.circle_segments);
    }
    if (!ctx.cfg.phase) throw ConfigError("phase: config has no phase block and no --circle-radius");
    return {ctx.cfg.phase->path1, ctx.cfg.phase->path2};
}

PhaseResult compute_phase(const RunContext& ctx, const BeamPath& p1, const BeamPath& p2) {
    if (ctx.cfg.charges.empty()) throw ConfigError("phase: scene needs a charge (beam species)");
    const double q = ctx.cfg.charges.front().q;
    const VectorField A = scene_A_field(ctx.cfg);

    // Independent analytic flux when every flux-carrying source is an ideal
    // solenoid; otherwise the Stokes circulation stands in.
    std::optional<double> analytic_flux;
    bool analytic_ok = true;
    double flux = 0.0;
    const Polyline circuit = closed_circuit(p1, p2);
    for (const SourceConfig& sc : ctx.cfg.sources) {
        if (const auto* sol = std::get_if<SolenoidSourceConfig>(&sc)) {
            flux += winding_number(circuit, sol->solenoid.center, sol->solenoid.axis) *
                    solenoid_flux(sol->solenoid, ctx.cfg.constants);
        } else if (!std::holds_alternative<WireSourceConfig>(sc)) {
            analytic_ok = false;
        }
    }
    if (analytic_ok) analytic_flux = flux;
    return phase_difference(q, p1, p2, A, ctx.cfg.quadrature, ctx.cfg.constants, analytic_flux);
}

int cmd_phase(const RunContext& ctx, const PhaseFlags& flags) {
    const auto [p1, p2] = phase_paths(ctx, flags);
    const PhaseResult res = compute_phase(ctx, p1, p2);

    io::Json root = io::Json::object();
    root.add("manifest", manifest_json(manifest_for(ctx, {"phase.json"})));
    root.add("phi_path1", io::Json::number(res.phi_path1));
    root.add("phi_path2", io::Json::number(res.phi_path2));
    root.add("delta_phi", io::Json::number(res.delta_phi));
    root.add("enclosed_flux", io::Json::number(res.enclosed_flux));
    emit(ctx, "phase.json", root.dump());
    return 0;
}

int cmd_fringes(const RunContext& ctx, const PhaseFlags& flags) {
    double delta_phi = flags.delta_phi_override;
    if (std::isnan(delta_phi)) {
        const auto [p1, p2] = phase_paths(ctx, flags);
        delta_phi = compute_phase(ctx, p1, p2).delta_phi;
    }
    const FringeSpec spec = ctx.cfg.fringe.value_or(FringeSpec{});
    const FringeTable table = fringe_pattern(spec, delta_phi);

    io::CsvTable csv;
    csv.comments = io::manifest_comments(manifest_for(ctx, {"fringes.csv"}));
    csv.comments.push_back("# delta_phi_rad: " + io::format_sig17(delta_phi));
    csv.comments.push_back("# fringe_spacing_cm: " + io::format_sig17(table.fringe_spacing));
    csv.comments.push_back("# fringe_displacement_cm: " + io::format_sig17(table.displacement));
    csv.header = {"y_cm", "intensity"};
    for (std::size_t i = 0; i < table.y.size(); ++i)
        csv.add_row({io::format_sig17(table.y[i]), io::format_sig17(table.intensity[i])});
    emit(ctx, "fringes.csv", csv.dump());
    return 0;
}

// ------------------------------------------------------------------ ramp --

int cmd_ramp(const RunContext& ctx, double dt_flag) {
    if (!ctx.cfg.ramp) throw ConfigError("ramp: config has no ramp block");
    const Solenoid* sol = first_solenoid(ctx.cfg);
    if (!sol) throw ConfigError("ramp: scene needs a solenoid source");
    if (ctx.cfg.charges.empty()) throw ConfigError("ramp: scene needs a charge");

    const RampConfig& rc = *ctx.cfg.ramp;
    double dt = dt_flag > 0 ? dt_flag : rc.dt;
    if (dt <= 0) dt = rc.profile.duration / 1e4;

    const auto records = ramp_simulation(*sol, rc.profile, ctx.cfg.charges.front(), rc.mode, dt,
                                         ctx.cfg.constants);

    io::CsvTable table;
    table.comments = io::manifest_comments(manifest_for(ctx, {"ramp.csv"}));
    table.header = {"t_s",    "p_m_x", "p_m_y", "p_m_z", "p_e_x", "p_e_y",
                    "p_e_z",  "p_gen_x", "p_gen_y", "p_gen_z", "I_statA"};
    for (const TrajectoryRecord& rec : records) {
        std::vector<std::string> row = {io::format_sig17(rec.t)};
        for (const Vec3& v : {rec.p_m, rec.p_e, rec.p_gen})
            for (const std::string& cell : vec3_cells(v)) row.push_back(cell);
        row.push_back(io::format_sig17(rec.current));
        table.add_row(std::move(row));
    }
    emit(ctx, "ramp.csv", table.dump());
    return 0;
}

// ----------------------------------------------------------------- sweep --

struct SweepPoint {
    double value;
    double h;
    double error;
};

double fitted_order(const std::vector<SweepPoint>& pts) {
    // least-squares slope of ln(error) vs ln(h)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const SweepPoint& p : pts) {
        if (!(p.error > 0) || !(p.h > 0)) continue;
        const double lx = std::log(p.h), ly = std::log(p.error);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_sweep(const RunContext& ctx, const std::string& parameter, std::vector<double> values) {
    if (values.empty()) throw ConfigError("sweep: --values must not be empty");
    std::vector<SweepPoint> pts;
    const Constants& k = ctx.cfg.constants;

    if (parameter == "elements") {
        // Midpoint-rule convergence of the numeric A of a circular loop,
        // measured against a much finer discretization of the same loop.
        const CircSourceConfig* circ = nullptr;
        for (const SourceConfig& sc : ctx.cfg.sources)
            if (const auto* c = std::get_if<CircSourceConfig>(&sc)) circ = c;
        if (!circ || ctx.cfg.charges.empty())
            throw ConfigError("sweep elements: scene needs a circ_loop source and a charge");
        const Vec3 x0 = ctx.cfg.charges.front().position;
        int nmax = 0;
        for (double v : values) nmax = std::max(nmax, static_cast<int>(v));
        const auto ref_elements = discretize(circ->loop, 8 * nmax);
        const Vec3 A_ref = vector_potential_numeric(ref_elements, x0, k);
        for (double v : values) {
            const int n = static_cast<int>(v);
            const auto elements = discretize(circ->loop, n);
            const Vec3 A = vector_potential_numeric(elements, x0, k);
            pts.push_back({v, 1.0 / n, (A - A_ref).norm()});
        }
    } else if (parameter == "dt") {
        // RK4 convergence in free-motion mode against a 16x finer reference.
        if (!ctx.cfg.ramp) throw ConfigError("sweep dt: config has no ramp block");
        const Solenoid* sol = first_solenoid(ctx.cfg);
        if (!sol || ctx.cfg.charges.empty())
            throw ConfigError("sweep dt: scene needs a solenoid source and a charge");
        const PointCharge& charge = ctx.cfg.charges.front();
        if (!(charge.mass > 0)) throw ConfigError("sweep dt: charge needs mass_g > 0 (free mode)");
        double dt_min = values.front();
        for (double v : values) dt_min = std::min(dt_min, v);
        const auto ref = ramp_simulation(*sol, ctx.cfg.ramp->profile, charge,
                                         ChargeMode::free_motion, dt_min / 16.0, k);
        for (double dt : values) {
            const auto run = ramp_simulation(*sol, ctx.cfg.ramp->profile, charge,
                                             ChargeMode::free_motion, dt, k);
            pts.push_back({dt, dt, (run.back().p_m - ref.back().p_m).norm()});
        }
    } else if (parameter == "L_over_R") {
        // Field-integral convergence toward Q A(R1)/c as the solenoid grows.
        const SolenoidSourceConfig* sc = nullptr;
        for (const SourceConfig& s : ctx.cfg.sources)
            if (const auto* c = std::get_if<SolenoidSourceConfig>(&s)) sc = c;
        if (!sc || ctx.cfg.charges.empty())
            throw ConfigError("sweep L_over_R: scene needs a solenoid source and a charge");
        const PointCharge& charge = ctx.cfg.charges.front();
        const double R1 = detail::axial_frame(sc->solenoid.center, sc->solenoid.axis,
                                              charge.position)
                              .R;
        for (double v : values) {
            Solenoid s = sc->solenoid;
            s.length = v * R1;
            const Vec3 p_ref = momentum_qa(charge, solenoid_A_analytic(s, charge.position, k), k);
            const Vec3 p_fi = momentum_field_integral(s, charge, VolumeQuadSpec{}, k);
            pts.push_back({v, 1.0 / v, (p_fi - p_ref).norm() / p_ref.norm()});
        }
    } else if (parameter == "r_over_R") {
        // First-order gap between the two-arm closed form and the dipole
        // form, which tracks (r/R1)^2.
        const RectSourceConfig* rc = nullptr;
        for (const SourceConfig& s : ctx.cfg.sources)
            if (const auto* c = std::get_if<RectSourceConfig>(&s)) rc = c;
        if (!rc || ctx.cfg.charges.empty())
            throw ConfigError("sweep r_over_R: scene needs a rect_loop source and a charge");
        const PointCharge& charge = ctx.cfg.charges.front();
        const double R1 = (charge.position - rc->loop.center).norm();
        for (double v : values) {
            RectangularLoop loop = rc->loop;
            loop.half_gap_r = v * R1;
            const Vec3 p_two = momentum_two_arm_rect(loop, charge, k);
            const Vec3 E = coulomb_E(charge, loop.center);
            const Vec3 p_dip = momentum_dipole(E, loop, k);
            pts.push_back({v, v, (p_two - p_dip).norm() / p_dip.norm()});
        }
    } else {
        throw ConfigError("sweep: parameter must be one of elements, dt, L_over_R, r_over_R");
    }

    io::CsvTable table;
    table.comments = io::manifest_comments(manifest_for(ctx, {"sweep.csv"}));
    table.comments.push_back("# parameter: " + parameter);
    table.header = {"value", "h", "error", "local_order"};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double local = 0.0;
        if (i > 0 && pts[i - 1].error > 0 && pts[i].error > 0 && pts[i - 1].h != pts[i].h)
            local = std::log(pts[i - 1].error / pts[i].error) / std::log(pts[i - 1].h / pts[i].h);
        table.add_row({io::format_sig17(pts[i].value), io::format_sig17(pts[i].h),
                       io::format_sig17(pts[i].error), io::format_sig17(local)});
    }
    std::string out = table.dump();
    out += "# fitted_order: " + io::format_sig17(fitted_order(pts)) + "\n";
    emit(ctx, "sweep.csv", out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("ABM_NUM_THREADS")) par::set_threads(std::atoi(env));

    CLI::App app{"Aharonov-Bohm electromagnetic momentum simulator"};
    app.set_version_flag("--version", tool_version);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path;
    RunContext ctx;
    long long seed = 0;  // reserved
    app.add_option("--config", config_path, "scene configuration JSON")->required();
    app.add_option("--out", ctx.out_dir, "output directory")->default_val(".");
    app.add_option("--tol", ctx.tol, "cross-formulation agreement tolerance")->default_val(0.02);
    app.add_option("--seed", seed, "reserved");
    app.add_flag("--stdout", ctx.to_stdout, "write data to stdout instead of files");

    CLI::App* fields = app.add_subcommand("fields", "sample E, B, A over a grid");
    GridFlags grid_flags;
    fields->add_option("--grid-min", grid_flags.gmin, "grid minimum corner (x y z)")->expected(3);
    fields->add_option("--grid-max", grid_flags.gmax, "grid maximum corner (x y z)")->expected(3);
    fields->add_option("--grid-n", grid_flags.gn, "grid point counts (nx ny nz)")->expected(3);

    CLI::App* momentum = app.add_subcommand("momentum", "four-formulation momentum report");

    PhaseFlags phase_flags;
    CLI::App* phase = app.add_subcommand("phase", "AB phase difference between two beam paths");
    phase->add_option("--circle-radius", phase_flags.circle_radius,
                      "synthesize semicircular beam paths of this radius around the solenoid");
    phase->add_option("--circle-segments", phase_flags.circle_segments, "segments per synthesized path");

    CLI::App* fringes = app.add_subcommand("fringes", "two-beam fringe pattern");
    fringes->add_option("--delta-phi", phase_flags.delta_phi_override,
                        "phase shift in radians (otherwise computed from the scene)");
    fringes->add_option("--circle-radius", phase_flags.circle_radius,
                        "synthesize semicircular beam paths of this radius around the solenoid");
    fringes->add_option("--circle-segments", phase_flags.circle_segments,
                        "segments per synthesized path");

    CLI::App* ramp = app.add_subcommand("ramp", "current ramp-down trajectory");
    double dt_flag = 0.0;
    ramp->add_option("--dt", dt_flag, "integrator step (default duration/10^4)");

    CLI::App* sweep = app.add_subcommand("sweep", "convergence sweep");
    std::string sweep_parameter;
    std::vector<double> sweep_values;
    sweep->add_option("--parameter", sweep_parameter, "elements | dt | L_over_R | r_over_R")
        ->required();
    sweep->add_option("--values", sweep_values, "sweep values")->required()->delimiter(',');

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (int i = 0; i < argc; ++i) {
        if (i) ctx.command_line += ' ';
        ctx.command_line += argv[i];
    }

    try {
        ctx.cfg = load_scene_file(config_path);
        ctx.canonical_config = scene_to_json(ctx.cfg);
        if (fields->parsed()) return cmd_fields(ctx, grid_flags);
        if (momentum->parsed()) return cmd_momentum(ctx);
        if (phase->parsed()) return cmd_phase(ctx, phase_flags);
        if (fringes->parsed()) return cmd_fringes(ctx, phase_flags);
        if (ramp->parsed()) return cmd_ramp(ctx, dt_flag);
        if (sweep->parsed()) return cmd_sweep(ctx, sweep_parameter, sweep_values);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const PhysicsConsistencyError& e) {
        std::cerr << "consistency error: " << e.what() << "\n";
        return 4;
    } catch (const EvaluationDomainError& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return 3;
    } catch (const InvalidInput& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
