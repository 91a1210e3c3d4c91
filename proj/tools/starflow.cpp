// starflow: command-line front end for the curve-flow laboratory.
//
// Subcommands:
//   simulate          physical flow run -> trajectory CSVs
//   rescaled          rescaled flow run -> trajectory + functional reports
//   functionals       recompute functional reports from a run directory
//   verify-identities random-point battery over the derivation checks
//   characteristics   integrate characteristics of the weight PDE
//   profile-f         tabulate the profile function and its derivatives
//
// Exit codes: 0 success, 2 validation failure, 3 numerical failure.

#include <clocale>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "starflow/csv.hpp"
#include "starflow/errors.hpp"
#include "starflow/flow.hpp"
#include "starflow/functionals.hpp"
#include "starflow/profile.hpp"
#include "starflow/verify.hpp"
#include "starflow/zelenjak.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace starflow;

namespace {

struct Options {
    std::string command;
    std::string curve = "circle:r=1.4142135623730951";
    int n = 256;
    std::string scheme = "rk4";
    int order = 2;
    double cfl = 0.25;
    int resample_every = 10;
    double horizon = 1.0;
    double stride = 0.01;
    std::string g = "iso";
    std::string kinds = "huisken,raw,repaired";
    std::string out;
    std::string run_dir;
    std::uint64_t seed = 7;
    int points = 1000;
    int grid = 257;
    double psi_max = 1.5;
    double s_span = 2.0;
    double ds = 1e-3;
    double init_xi1 = 0.7;
    double init_xi2 = 0.4;
    double init_phi = 0.3;
    std::optional<double> init_b;
};

json to_json(const Options& o) {
    json j;
    j["command"] = o.command;
    j["curve"] = o.curve;
    j["n"] = o.n;
    j["scheme"] = o.scheme;
    j["order"] = o.order;
    j["cfl"] = o.cfl;
    j["resample_every"] = o.resample_every;
    j["horizon"] = o.horizon;
    j["stride"] = o.stride;
    j["g"] = o.g;
    j["kinds"] = o.kinds;
    j["out"] = o.out;
    j["run_dir"] = o.run_dir;
    j["seed"] = o.seed;
    j["points"] = o.points;
    j["grid"] = o.grid;
    j["psi_max"] = o.psi_max;
    j["s_span"] = o.s_span;
    j["ds"] = o.ds;
    j["init"] = {o.init_xi1, o.init_xi2, o.init_phi};
    j["init_b"] = o.init_b ? json(*o.init_b) : json(nullptr);
    return j;
}

void from_json_file(const fs::path& path, Options& o) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError("malformed config JSON: " + std::string(e.what()));
    }
    auto get = [&j](const char* key, auto& slot) {
        if (j.contains(key) && !j[key].is_null()) slot = j[key].template get<std::decay_t<decltype(slot)>>();
    };
    get("command", o.command);
    get("curve", o.curve);
    get("n", o.n);
    get("scheme", o.scheme);
    get("order", o.order);
    get("cfl", o.cfl);
    get("resample_every", o.resample_every);
    get("horizon", o.horizon);
    get("stride", o.stride);
    get("g", o.g);
    get("kinds", o.kinds);
    get("out", o.out);
    get("run_dir", o.run_dir);
    get("seed", o.seed);
    get("points", o.points);
    get("grid", o.grid);
    get("psi_max", o.psi_max);
    get("s_span", o.s_span);
    get("ds", o.ds);
    if (j.contains("init") && j["init"].is_array() && j["init"].size() == 3) {
        o.init_xi1 = j["init"][0].get<double>();
        o.init_xi2 = j["init"][1].get<double>();
        o.init_phi = j["init"][2].get<double>();
    }
    if (j.contains("init_b") && !j["init_b"].is_null()) o.init_b = j["init_b"].get<double>();
}

std::map<std::string, double> parse_params(const std::string& body) {
    std::map<std::string, double> params;
    std::size_t pos = 0;
    while (pos < body.size()) {
        const std::size_t comma = body.find(',', pos);
        const std::string item = body.substr(pos, comma == std::string::npos
                                                      ? std::string::npos
                                                      : comma - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("expected key=value in curve/g spec, got '" + item + "'");
        }
        try {
            std::size_t used = 0;
            const double v = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
            params[item.substr(0, eq)] = v;
        } catch (const std::exception&) {
            throw ValidationError("non-numeric value in spec item '" + item + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return params;
}

double require_param(const std::map<std::string, double>& p, const std::string& key,
                     const std::string& what) {
    const auto it = p.find(key);
    if (it == p.end()) throw ValidationError(what + " spec needs parameter '" + key + "'");
    return it->second;
}

ClosedCurve parse_curve(const std::string& spec, int n) {
    if (n < 16) throw ValidationError("node count must be at least 16");
    if (spec.size() > 4 && spec.substr(spec.size() - 4) == ".csv") {
        return read_curve_csv(spec);
    }
    const std::size_t colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const auto params = (colon == std::string::npos)
                            ? std::map<std::string, double>{}
                            : parse_params(spec.substr(colon + 1));
    const auto sz = static_cast<std::size_t>(n);
    if (name == "circle") {
        const double r = require_param(params, "r", "circle");
        const double cx = params.contains("cx") ? params.at("cx") : 0.0;
        const double cy = params.contains("cy") ? params.at("cy") : 0.0;
        return make_circle(r, {cx, cy}, sz);
    }
    if (name == "ellipse") {
        return make_ellipse(require_param(params, "a", "ellipse"),
                            require_param(params, "b", "ellipse"), sz);
    }
    if (name == "polar") {
        const double r0 = require_param(params, "r0", "polar");
        const double eps = require_param(params, "eps", "polar");
        const double k = require_param(params, "k", "polar");
        return make_polar([r0, eps, k](double t) { return r0 * (1.0 + eps * std::cos(k * t)); },
                          sz);
    }
    throw ValidationError("unknown curve spec '" + spec +
                          "' (expected circle:, ellipse:, polar:, or a .csv path)");
}

AnisotropySpec parse_g(const std::string& spec) {
    if (spec == "iso" || spec == "1") return AnisotropySpec::isotropic();
    const std::size_t colon = spec.find(':');
    if (spec.substr(0, colon) == "cosine") {
        const auto params = parse_params(spec.substr(colon + 1));
        return AnisotropySpec::cosine(require_param(params, "eps", "cosine"),
                                      static_cast<int>(require_param(params, "k", "cosine")));
    }
    throw ValidationError("unknown anisotropy spec '" + spec + "' (iso or cosine:eps=..,k=..)");
}

FlowConfig flow_config(const Options& o) {
    FlowConfig cfg;
    cfg.cfl = o.cfl;
    cfg.resample_every = o.resample_every;
    if (o.scheme == "rk4") {
        cfg.scheme = TimeScheme::rk4;
    } else if (o.scheme == "euler") {
        cfg.scheme = TimeScheme::forward_euler;
    } else {
        throw ValidationError("unknown scheme '" + o.scheme + "' (rk4 or euler)");
    }
    if (o.order == 2) {
        cfg.order = StencilOrder::second;
    } else if (o.order == 4) {
        cfg.order = StencilOrder::fourth;
    } else {
        throw ValidationError("derivative order must be 2 or 4");
    }
    return cfg;
}

fs::path resolve_out(const Options& o) {
    if (!o.out.empty()) return o.out;
    if (const char* env = std::getenv("STARFLOW_OUT")) {
        if (*env) return fs::path(env) / o.command;
    }
    return fs::path("starflow_out") / o.command;
}

fs::path prepare_out_dir(Options& o) {
    const fs::path dir = resolve_out(o);
    o.out = dir.string();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory " + dir.string());
    std::ofstream probe(dir / ".write_probe");
    if (!probe) throw ValidationError("output directory " + dir.string() + " is not writable");
    probe.close();
    fs::remove(dir / ".write_probe", ec);
    return dir;
}

void write_config_echo(const Options& o, const fs::path& dir) {
    std::ofstream out(dir / "config.json");
    if (!out) throw ValidationError("cannot write config echo");
    out << to_json(o).dump(4) << '\n';
}

std::string sample_file_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "sample_%06d.csv", index);
    return buf;
}

struct TrajectoryRow {
    int index;
    double time;
    double tau;
    double area;
    double length;
    double min_cospsi;
};

TrajectoryRow trajectory_row(const TrajectorySample& s, double tau, StencilOrder order) {
    TrajectoryRow row{};
    row.index = s.index;
    row.time = s.time;
    row.tau = tau;
    row.area = enclosed_area(s.curve);
    row.length = total_length(s.curve);
    row.min_cospsi = std::nan("");
    try {
        const CurveGeometry g = derivatives(s.curve, order);
        double worst = 1.0;
        for (double c : g.cos_psi) worst = std::min(worst, c);
        row.min_cospsi = worst;
    } catch (const NumericalError&) {
        // leave NaN: the curve touches the origin
    }
    return row;
}

void write_trajectory(const Trajectory& traj, const fs::path& dir, StencilOrder order,
                      std::optional<double> blowup_T) {
    const fs::path curves = dir / "curves";
    std::error_code ec;
    fs::create_directories(curves, ec);
    if (ec) throw ValidationError("cannot create " + curves.string());

    std::ofstream out(dir / "trajectory.csv");
    if (!out) throw ValidationError("cannot write trajectory.csv");
    out << "sample_index,time,tau,area,length,min_cospsi\n";
    for (const auto& s : traj.samples) {
        double tau = s.time;
        if (traj.kind == RhsKind::physical) {
            tau = (blowup_T && s.time < *blowup_T) ? -std::log(*blowup_T - s.time)
                                                   : std::nan("");
        }
        const TrajectoryRow row = trajectory_row(s, tau, order);
        out << csv_line({std::to_string(row.index), format_double(row.time),
                         format_double(row.tau), format_double(row.area),
                         format_double(row.length), format_double(row.min_cospsi)});
        write_curve_csv(s.curve, curves / sample_file_name(s.index));
    }
}

std::vector<DensityKind> parse_kinds(const std::string& spec) {
    std::vector<DensityKind> kinds;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const std::size_t comma = spec.find(',', pos);
        const std::string item = spec.substr(pos, comma == std::string::npos
                                                      ? std::string::npos
                                                      : comma - pos);
        if (item == "huisken") {
            kinds.push_back(DensityKind::huisken);
        } else if (item == "raw") {
            kinds.push_back(DensityKind::star_raw);
        } else if (item == "repaired") {
            kinds.push_back(DensityKind::star_repaired);
        } else if (!item.empty()) {
            throw ValidationError("unknown functional kind '" + item +
                                  "' (huisken, raw, repaired)");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (kinds.empty()) throw ValidationError("no functional kinds selected");
    return kinds;
}

void write_functional_reports(const std::vector<TrajectorySample>& samples,
                              const std::vector<DensityKind>& kinds,
                              const AnisotropySpec& g, StencilOrder order,
                              const fs::path& file) {
    std::ofstream out(file);
    if (!out) throw ValidationError("cannot write " + file.string());
    out << "tau,kind,value,dissipation,extra_term,residual\n";
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
        for (DensityKind kind : kinds) {
            FunctionalReport rep;
            switch (kind) {
                case DensityKind::huisken:
                    rep = huisken_identity(samples[i - 1], samples[i], samples[i + 1], g, order);
                    break;
                case DensityKind::star_raw:
                    rep = raw_star_identity(samples[i - 1], samples[i], samples[i + 1], g, order);
                    break;
                default:
                    rep = repaired_star_identity(samples[i - 1], samples[i], samples[i + 1], g,
                                                 order);
                    break;
            }
            out << csv_line({format_double(rep.tau), to_string(rep.kind),
                             format_double(rep.value), format_double(rep.dissipation),
                             format_double(rep.extra_term), format_double(rep.residual)});
        }
    }
}

int cmd_flow(Options& o, RhsKind kind) {
    const fs::path dir = prepare_out_dir(o);
    write_config_echo(o, dir);
    const ClosedCurve initial = parse_curve(o.curve, o.n);
    const AnisotropySpec g = parse_g(o.g);
    const FlowConfig cfg = flow_config(o);
    if (!(o.horizon > 0.0)) throw ValidationError("horizon must be positive");
    if (!(o.stride > 0.0)) throw ValidationError("stride must be positive");

    std::optional<double> T;
    if (kind == RhsKind::physical && g.is_isotropic()) {
        T = estimate_blowup_time(initial, g);
    }
    const Trajectory traj = run(initial, kind, g, cfg, o.horizon, o.stride);
    write_trajectory(traj, dir, cfg.order, T);
    if (traj.singular) {
        std::cerr << "run stopped early: the curve degenerated before the horizon\n";
        return 3;
    }
    if (kind == RhsKind::rescaled) {
        write_functional_reports(traj.samples, parse_kinds(o.kinds), g, cfg.order,
                                 dir / "functionals.csv");
    }
    std::cout << "wrote " << traj.samples.size() << " samples to " << dir.string() << '\n';
    return 0;
}

int cmd_functionals(Options& o) {
    if (o.run_dir.empty()) throw ValidationError("functionals needs --run-dir");
    const fs::path src(o.run_dir);
    std::ifstream cfg_in(src / "config.json");
    if (!cfg_in) throw ValidationError("no config.json in " + src.string());
    json src_cfg;
    cfg_in >> src_cfg;
    const std::string src_command = src_cfg.value("command", "");
    const AnisotropySpec g = parse_g(src_cfg.value("g", "iso"));
    const int order_int = src_cfg.value("order", 2);
    const StencilOrder order = order_int == 4 ? StencilOrder::fourth : StencilOrder::second;

    std::ifstream traj_in(src / "trajectory.csv");
    if (!traj_in) throw ValidationError("no trajectory.csv in " + src.string());
    std::string line;
    std::getline(traj_in, line);  // header
    std::vector<TrajectorySample> samples;
    while (std::getline(traj_in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string idx, time, tau;
        std::getline(ss, idx, ',');
        std::getline(ss, time, ',');
        std::getline(ss, tau, ',');
        const int index = std::stoi(idx);
        ClosedCurve curve = read_curve_csv(src / "curves" / sample_file_name(index));
        if (src_command == "simulate") {
            const double tau_val = std::stod(tau);
            if (!std::isfinite(tau_val)) {
                throw ValidationError(
                    "physical run has no rescaled time (anisotropic g); cannot report");
            }
            const double t = std::stod(time);
            const double T = t + std::exp(-tau_val);
            auto [rescaled, tau_chk] = to_rescaled(curve, t, T);
            samples.push_back({index, tau_chk, std::move(rescaled)});
        } else {
            samples.push_back({index, std::stod(time), std::move(curve)});
        }
    }
    if (samples.size() < 3) throw ValidationError("need at least 3 samples for reports");

    const fs::path dir = prepare_out_dir(o);
    write_config_echo(o, dir);
    write_functional_reports(samples, parse_kinds(o.kinds), g, order,
                             dir / "functionals.csv");
    std::cout << "wrote functional reports for " << samples.size() << " samples to "
              << dir.string() << '\n';
    return 0;
}

int cmd_verify(Options& o) {
    const fs::path dir = prepare_out_dir(o);
    write_config_echo(o, dir);
    if (o.points < 1) throw ValidationError("points must be positive");
    const auto results = verify_identities(o.points, o.seed);
    std::ofstream out(dir / "verify.csv");
    if (!out) throw ValidationError("cannot write verify.csv");
    out << "check_name,points,max_residual,pass\n";
    for (const auto& r : results) {
        const std::string pass = r.informational ? "info" : (r.pass ? "1" : "0");
        out << csv_line({r.name, std::to_string(r.points), format_double(r.max_residual),
                         pass});
        std::cout << r.name << ": max residual " << format_double(r.max_residual)
                  << (r.informational ? " (informational)" : (r.pass ? " PASS" : " FAIL"))
                  << '\n';
    }
    if (!all_passed(results)) {
        for (const auto& r : results) {
            if (!r.informational && !r.pass) {
                std::cerr << "check failed: " << r.name << " residual "
                          << format_double(r.max_residual) << " > tolerance "
                          << format_double(r.tolerance) << '\n';
            }
        }
        return 3;
    }
    return 0;
}

int cmd_characteristics(Options& o) {
    const fs::path dir = prepare_out_dir(o);
    write_config_echo(o, dir);
    const AnisotropySpec g = parse_g(o.g);
    CharState init{o.init_xi1, o.init_xi2, o.init_phi, 0.0};
    init.b = o.init_b ? *o.init_b
                      : -(init.xi1 * init.xi1 + init.xi2 * init.xi2) / 4.0;
    const auto path = characteristics_integrate(g, init, o.s_span, o.ds);
    std::ofstream out(dir / "characteristics.csv");
    if (!out) throw ValidationError("cannot write characteristics.csv");
    out << "s,xi1,xi2,phi,b\n";
    for (const auto& [s, st] : path) {
        out << csv_line({format_double(s), format_double(st.xi1), format_double(st.xi2),
                         format_double(st.phi), format_double(st.b)});
    }
    std::cout << "wrote " << path.size() << " states to " << dir.string() << '\n';
    return 0;
}

int cmd_profile_f(Options& o) {
    const fs::path dir = prepare_out_dir(o);
    write_config_echo(o, dir);
    if (o.grid < 2) throw ValidationError("grid must have at least 2 points");
    if (!(o.psi_max > 0.0) || !(o.psi_max < std::numbers::pi / 2.0)) {
        throw ValidationError("psi_max must lie in (0, pi/2)");
    }
    std::ofstream out(dir / "profile_f.csv");
    if (!out) throw ValidationError("cannot write profile_f.csv");
    out << "psi,f,f_prime,f_second\n";
    for (int j = 0; j < o.grid; ++j) {
        const double psi = -o.psi_max + 2.0 * o.psi_max * j / (o.grid - 1);
        out << csv_line({format_double(psi), format_double(f_profile(psi)),
                         format_double(f_profile_prime(psi)),
                         format_double(f_profile_second(psi))});
    }
    std::cout << "wrote " << o.grid << " profile rows to " << dir.string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_NUMERIC, "C");
    Options o;

    // Load --config first so command-line flags can override its values.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                from_json_file(argv[i + 1], o);
            } catch (const ValidationError& e) {
                std::cerr << "error: " << e.what() << '\n';
                return 2;
            }
        }
    }

    CLI::App app{"starflow: planar curve flows and their monotone functionals"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override it)");

    auto add_flow_opts = [&](CLI::App* cmd) {
        cmd->add_option("--curve", o.curve, "circle:r=..[,cx=..,cy=..] | ellipse:a=..,b=.. | "
                                            "polar:r0=..,eps=..,k=.. | path.csv");
        cmd->add_option("--N", o.n, "node count for builtin curves");
        cmd->add_option("--scheme", o.scheme, "rk4 | euler");
        cmd->add_option("--order", o.order, "derivative stencil order (2 or 4)");
        cmd->add_option("--cfl", o.cfl, "CFL number in (0, 0.5]");
        cmd->add_option("--resample-every", o.resample_every,
                        "steps between arclength resamples (0 = never)");
        cmd->add_option("--horizon", o.horizon, "integration horizon");
        cmd->add_option("--stride", o.stride, "observer stride (time units)");
        cmd->add_option("--g", o.g, "anisotropy: iso | cosine:eps=..,k=..");
        cmd->add_option("--out", o.out, "output directory");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "physical flow run");
    add_flow_opts(simulate);
    CLI::App* rescaled = app.add_subcommand("rescaled", "rescaled flow run with reports");
    add_flow_opts(rescaled);
    rescaled->add_option("--kinds", o.kinds, "report kinds: huisken,raw,repaired");

    CLI::App* functionals = app.add_subcommand("functionals",
                                               "recompute reports from a run directory");
    functionals->add_option("--run-dir", o.run_dir, "directory written by simulate/rescaled");
    functionals->add_option("--kinds", o.kinds, "report kinds: huisken,raw,repaired");
    functionals->add_option("--out", o.out, "output directory");

    CLI::App* verify = app.add_subcommand("verify-identities",
                                          "run the derivation check battery");
    verify->add_option("--points", o.points, "random points per check");
    verify->add_option("--seed", o.seed, "random seed");
    verify->add_option("--out", o.out, "output directory");

    CLI::App* chars = app.add_subcommand("characteristics",
                                         "integrate weight-PDE characteristics");
    chars->add_option("--xi1", o.init_xi1, "initial xi1~");
    chars->add_option("--xi2", o.init_xi2, "initial xi2~");
    chars->add_option("--phi", o.init_phi, "initial phi");
    double init_b_flag = 0.0;
    CLI::Option* bopt = chars->add_option("--b0", init_b_flag,
                                          "initial b (default: the Huisken weight)");
    chars->add_option("--s-span", o.s_span, "parameter span");
    chars->add_option("--ds", o.ds, "integration step");
    chars->add_option("--g", o.g, "anisotropy: iso | cosine:eps=..,k=..");
    chars->add_option("--out", o.out, "output directory");

    CLI::App* profile = app.add_subcommand("profile-f", "tabulate the profile function");
    profile->add_option("--grid", o.grid, "grid points");
    profile->add_option("--psi-max", o.psi_max, "half-width of the psi range");
    profile->add_option("--out", o.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (bopt->count() > 0) o.init_b = init_b_flag;

    try {
        if (simulate->parsed()) {
            o.command = "simulate";
            return cmd_flow(o, RhsKind::physical);
        }
        if (rescaled->parsed()) {
            o.command = "rescaled";
            return cmd_flow(o, RhsKind::rescaled);
        }
        if (functionals->parsed()) {
            o.command = "functionals";
            return cmd_functionals(o);
        }
        if (verify->parsed()) {
            o.command = "verify-identities";
            return cmd_verify(o);
        }
        if (chars->parsed()) {
            o.command = "characteristics";
            return cmd_characteristics(o);
        }
        if (profile->parsed()) {
            o.command = "profile-f";
            return cmd_profile_f(o);
        }
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
