// Command-line front end: geometry tables, trajectories, actions, sweeps and
// radius quantization for the Mylar balloon rigid body.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mylar/mylar.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace mylar;

enum ExitCode { kOk = 0, kValidation = 2, kNumeric = 3, kIo = 4 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class KeyType { Number, Integer, String };

struct KeySpec {
    std::string name;
    KeyType type;
    std::string help;
    json fallback;  // null: no default, key may stay absent
};

const std::vector<KeySpec>& shared_keys() {
    static const std::vector<KeySpec> keys = {
        {"r", KeyType::Number, "balloon radius", 1.0},
        {"m", KeyType::Number, "body mass", 1.0},
        {"inertia", KeyType::Number, "moment of inertia about the normal", 1.0},
        {"potential", KeyType::String, "geodetic | harmonic | anharmonic", "geodetic"},
        {"kappa", KeyType::Number, "harmonic stiffness", 1.0},
        {"alpha", KeyType::Number, "anharmonic x^4 coefficient", 1.0},
        {"beta", KeyType::Number, "anharmonic x^3 coefficient", 0.0},
        {"gamma", KeyType::Number, "anharmonic x^2 coefficient", 0.0},
        {"delta", KeyType::Number, "anharmonic x coefficient", 0.0},
        {"energy", KeyType::Number, "energy E", 1.0},
        {"l", KeyType::Number, "momentum p_v", 1.0},
        {"s", KeyType::Number, "momentum p_psi", 0.0},
        {"out", KeyType::String, "output path (default: stdout)", nullptr},
        {"format", KeyType::String, "csv | json", nullptr},
    };
    return keys;
}

std::vector<KeySpec> command_keys(const std::string& cmd) {
    std::vector<KeySpec> keys = shared_keys();
    const auto add = [&](std::initializer_list<KeySpec> extra) { keys.insert(keys.end(), extra); };
    if (cmd == "geometry") {
        add({{"u_min", KeyType::Number, "first u of the grid", -2.0},
             {"u_max", KeyType::Number, "last u of the grid", 2.0},
             {"nu", KeyType::Integer, "number of u samples", 21},
             {"v_min", KeyType::Number, "first v of the grid", 0.0},
             {"v_max", KeyType::Number, "last v of the grid", 0.0},
             {"nv", KeyType::Integer, "number of v samples", 1}});
    } else if (cmd == "simulate") {
        add({{"u0", KeyType::Number, "initial u", 0.0},
             {"v0", KeyType::Number, "initial v", 0.0},
             {"psi0", KeyType::Number, "initial psi", 0.0},
             {"pu0", KeyType::Number, "initial p_u (default: from energy, p_u >= 0)", nullptr},
             {"t_end", KeyType::Number, "final time (default: 100 sqrt(m r^2 / max(E, kappa, alpha, 1)))", nullptr},
             {"dt", KeyType::Number, "sample spacing (default: t_end / 1000)", nullptr},
             {"rel_tol", KeyType::Number, "integrator relative tolerance", 1e-12},
             {"abs_tol", KeyType::Number, "integrator absolute tolerance", 1e-12}});
    } else if (cmd == "actions") {
        add({{"seed", KeyType::Number, "u inside the well to use when several exist", nullptr},
             {"rel_tol", KeyType::Number, "quadrature relative tolerance", 1e-13},
             {"abs_tol", KeyType::Number, "quadrature absolute tolerance", 1e-15}});
    } else if (cmd == "sweep") {
        add({{"e_min", KeyType::Number, "first energy (default: energy)", nullptr},
             {"e_max", KeyType::Number, "last energy (default: e_min)", nullptr},
             {"e_count", KeyType::Integer, "energy samples", 1},
             {"l_min", KeyType::Number, "first l (default: l)", nullptr},
             {"l_max", KeyType::Number, "last l (default: l_min)", nullptr},
             {"l_count", KeyType::Integer, "l samples", 1},
             {"s_min", KeyType::Number, "first s (default: s)", nullptr},
             {"s_max", KeyType::Number, "last s (default: s_min)", nullptr},
             {"s_count", KeyType::Integer, "s samples", 1},
             {"rel_tol", KeyType::Number, "quadrature relative tolerance", 1e-13},
             {"abs_tol", KeyType::Number, "quadrature absolute tolerance", 1e-15},
             {"summary", KeyType::String, "path for the JSON summary (default: stderr)", nullptr}});
    } else if (cmd == "quantize") {
        add({{"n", KeyType::Integer, "positive integer N", 1}});
    }
    return keys;
}

std::string flag_of(const std::string& key) {
    std::string f = key;
    std::replace(f.begin(), f.end(), '_', '-');
    return "--" + f;
}

/// Raw flag values; only those given on the command line are merged.
struct FlagStore {
    std::map<std::string, double> numbers;
    std::map<std::string, long long> integers;
    std::map<std::string, std::string> strings;
    std::map<std::string, CLI::Option*> options;
};

void register_flags(CLI::App& sub, const std::vector<KeySpec>& keys, FlagStore& store) {
    for (const auto& k : keys) {
        std::string help = k.help;
        if (!k.fallback.is_null()) help += " [default: " + k.fallback.dump() + "]";
        CLI::Option* opt = nullptr;
        switch (k.type) {
            case KeyType::Number: opt = sub.add_option(flag_of(k.name), store.numbers[k.name], help); break;
            case KeyType::Integer: opt = sub.add_option(flag_of(k.name), store.integers[k.name], help); break;
            case KeyType::String: opt = sub.add_option(flag_of(k.name), store.strings[k.name], help); break;
        }
        store.options[k.name] = opt;
    }
}

json read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParameterError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ParameterError("config file must contain a JSON object");
    return j;
}

json effective_config(const std::string& cmd, const std::vector<KeySpec>& keys, const std::string& config_path,
                      const FlagStore& store) {
    json file = config_path.empty() ? json::object() : read_config_file(config_path);
    json cfg = json::object();
    cfg["command"] = cmd;
    for (const auto& k : keys)
        if (!k.fallback.is_null()) cfg[k.name] = k.fallback;
    for (auto it = file.begin(); it != file.end(); ++it) {
        const auto spec = std::find_if(keys.begin(), keys.end(), [&](const KeySpec& k) { return k.name == it.key(); });
        if (spec == keys.end()) throw ParameterError("unknown config key '" + it.key() + "' for " + cmd);
        const json& v = it.value();
        const bool ok = spec->type == KeyType::String    ? v.is_string()
                        : spec->type == KeyType::Integer ? v.is_number_integer()
                                                         : v.is_number();
        if (!ok) throw ParameterError("config key '" + it.key() + "' has the wrong type");
        cfg[it.key()] = spec->type == KeyType::Number ? json(v.get<double>()) : v;
    }
    for (const auto& k : keys) {
        if (store.options.at(k.name)->count() == 0) continue;
        switch (k.type) {
            case KeyType::Number: cfg[k.name] = store.numbers.at(k.name); break;
            case KeyType::Integer: cfg[k.name] = store.integers.at(k.name); break;
            case KeyType::String: cfg[k.name] = store.strings.at(k.name); break;
        }
    }
    return cfg;
}

double num(const json& cfg, const char* key) { return cfg.at(key).get<double>(); }
std::optional<double> opt_num(const json& cfg, const char* key) {
    if (!cfg.contains(key)) return std::nullopt;
    return cfg.at(key).get<double>();
}
long long integer(const json& cfg, const char* key) { return cfg.at(key).get<long long>(); }

BalloonParams params_of(const json& cfg) {
    BalloonParams p{num(cfg, "r"), num(cfg, "m"), num(cfg, "inertia")};
    p.validate();
    return p;
}

PotentialModel model_of(const json& cfg) {
    const std::string name = cfg.at("potential").get<std::string>();
    PotentialModel model;
    if (name == "geodetic") {
        model = Geodetic{};
    } else if (name == "harmonic") {
        model = Harmonic{num(cfg, "kappa")};
    } else if (name == "anharmonic") {
        model = Anharmonic{num(cfg, "alpha"), num(cfg, "beta"), num(cfg, "gamma"), num(cfg, "delta")};
    } else {
        throw ParameterError("potential must be geodetic, harmonic or anharmonic (got '" + name + "')");
    }
    validate_model(model);
    return model;
}

MotionConstants constants_of(const json& cfg) {
    const MotionConstants c{num(cfg, "energy"), num(cfg, "l"), num(cfg, "s")};
    if (!std::isfinite(c.energy) || !std::isfinite(c.l) || !std::isfinite(c.s))
        throw ParameterError("energy, l and s must be finite");
    return c;
}

std::string format_of(const json& cfg, const char* fallback) {
    const std::string f = cfg.contains("format") ? cfg.at("format").get<std::string>() : std::string(fallback);
    if (f != "csv" && f != "json") throw ParameterError("format must be csv or json (got '" + f + "')");
    return f;
}

/// Writes to --out when given, stdout otherwise.
class Sink {
public:
    explicit Sink(const json& cfg) {
        if (cfg.contains("out")) {
            path_ = cfg.at("out").get<std::string>();
            file_.open(path_, std::ios::trunc);
            if (!file_) throw IoError("cannot open output file '" + path_ + "'");
        }
    }
    std::ostream& os() { return path_.empty() ? std::cout : file_; }
    void close() {
        os().flush();
        if (!os()) throw IoError("write failed for '" + (path_.empty() ? std::string("stdout") : path_) + "'");
    }

private:
    std::string path_;
    std::ofstream file_;
};

void write_table(const json& cfg, const std::string& format, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows) {
    Sink sink(cfg);
    if (format == "csv") {
        sink.os() << "# " << cfg.dump() << '\n';
        for (std::size_t i = 0; i < columns.size(); ++i) sink.os() << (i ? "," : "") << columns[i];
        sink.os() << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) sink.os() << (i ? "," : "") << verify::format_number(row[i]);
            sink.os() << '\n';
        }
    } else {
        json out;
        out["config"] = cfg;
        out["columns"] = columns;
        out["rows"] = rows;
        sink.os() << out.dump(2) << '\n';
    }
    sink.close();
}

void write_object(const json& cfg, const std::string& format, json body) {
    Sink sink(cfg);
    if (format == "json") {
        json out;
        out["config"] = cfg;
        for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = it.value();
        sink.os() << out.dump(2) << '\n';
    } else {
        sink.os() << "# " << cfg.dump() << '\n';
        bool first = true;
        for (auto it = body.begin(); it != body.end(); ++it, first = false) sink.os() << (first ? "" : ",") << it.key();
        sink.os() << '\n';
        first = true;
        for (auto it = body.begin(); it != body.end(); ++it, first = false) {
            sink.os() << (first ? "" : ",");
            const json& v = it.value();
            if (v.is_number_float()) sink.os() << verify::format_number(v.get<double>());
            else if (v.is_string()) sink.os() << v.get<std::string>();
            else if (!v.is_null()) sink.os() << v.dump();
        }
        sink.os() << '\n';
    }
    sink.close();
}

int cmd_geometry(const json& cfg) {
    const BalloonParams params = params_of(cfg);
    const long long nu = integer(cfg, "nu"), nv = integer(cfg, "nv");
    if (nu < 1 || nv < 1) throw ParameterError("nu and nv must be >= 1");
    const Grid ug{num(cfg, "u_min"), num(cfg, "u_max"), static_cast<std::size_t>(nu)};
    const Grid vg{num(cfg, "v_min"), num(cfg, "v_max"), static_cast<std::size_t>(nv)};
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < ug.count; ++i) {
        const double u = ug.at(i);
        if (!std::isfinite(u) || std::abs(u) > kMaxConformalU)
            throw ParameterError("u grid must lie within [-40, 40]");
        const double K = geometry::gauss_curvature(u, params);
        for (std::size_t j = 0; j < vg.count; ++j) {
            const double v = vg.at(j);
            const Point3 p = geometry::embed({u, v}, params);
            rows.push_back({u, v, p.x, p.y, p.z, K});
        }
    }
    write_table(cfg, format_of(cfg, "csv"), {"u", "v", "x", "y", "z", "K"}, rows);
    return kOk;
}

int cmd_simulate(const json& cfg) {
    const BalloonParams params = params_of(cfg);
    const PotentialModel model = model_of(cfg);
    const MotionConstants c = constants_of(cfg);
    const double u0 = num(cfg, "u0");
    if (!std::isfinite(u0) || std::abs(u0) > kMaxConformalU) throw ParameterError("u0 must lie within [-40, 40]");
    double pu0;
    if (const auto given = opt_num(cfg, "pu0")) {
        pu0 = *given;
    } else {
        // H = E fixes p_u^2 = R(u0).
        const double R = action::radicand_u(u0, c, model, params);
        if (R < 0.0) throw NoClassicalMotion("energy is below the effective potential at u0");
        pu0 = std::sqrt(R);
    }
    const double scale = std::max({c.energy, std::get_if<Harmonic>(&model) ? std::get<Harmonic>(model).kappa : 0.0,
                                   std::get_if<Anharmonic>(&model) ? std::get<Anharmonic>(model).alpha : 0.0, 1.0});
    const double t_end = opt_num(cfg, "t_end").value_or(100.0 * std::sqrt(params.mr2() / scale));
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ParameterError("t_end must be > 0");
    IntegratorControls controls;
    controls.rel_tol = num(cfg, "rel_tol");
    controls.abs_tol = num(cfg, "abs_tol");
    controls.sample_interval = opt_num(cfg, "dt").value_or(t_end / 1000.0);
    if (!(controls.sample_interval > 0.0)) throw ParameterError("dt must be > 0");

    const PhasePoint start{u0, num(cfg, "v0"), num(cfg, "psi0"), pu0, c.l, c.s};
    const Trajectory tr = dynamics::integrate_trajectory(start, model, params, t_end, controls);
    std::vector<std::vector<double>> rows;
    rows.reserve(tr.samples.size());
    for (const auto& smp : tr.samples) {
        const PhasePoint& p = smp.state;
        const auto w = dynamics::omega_split(dynamics::legendre_inverse(p, params), params);
        rows.push_back({smp.t, p.u, p.v, p.psi, p.p_u, p.p_v, p.p_psi, dynamics::hamiltonian(p, model, params),
                        w.omega_drift, w.omega_relative});
    }
    write_table(cfg, format_of(cfg, "csv"),
                {"t", "u", "v", "psi", "p_u", "p_v", "p_psi", "H", "omega_drift", "omega_relative"}, rows);
    return kOk;
}

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

int cmd_actions(const json& cfg) {
    const BalloonParams params = params_of(cfg);
    const PotentialModel model = model_of(cfg);
    const MotionConstants c = constants_of(cfg);
    QuadratureOptions q;
    q.rel_tol = num(cfg, "rel_tol");
    q.abs_tol = num(cfg, "abs_tol");
    q.seed = opt_num(cfg, "seed");
    if (!(q.rel_tol > 0.0) || !(q.abs_tol > 0.0)) throw ParameterError("tolerances must be > 0");

    const ActionQuadrature ju = action::action_ju_quadrature(c, model, params, q);
    const CyclicActions cyc = action::actions_cyclic(c);
    json body;
    body["J_u"] = ju.value;
    body["J_u_error_estimate"] = ju.error_estimate;
    body["J_v"] = cyc.J_v;
    body["J_psi"] = cyc.J_psi;
    body["u_min"] = ju.turning.u_min;
    body["u_max"] = ju.turning.u_max;
    body["degenerate"] = ju.turning.degenerate;
    try {
        body["region"] = std::string(action::classify_region(cyc.J_v, cyc.J_psi).name);
    } catch (const BoundaryError&) {
        body["region"] = "boundary";
    }
    if (const auto* an = std::get_if<Anharmonic>(&model); an && !(an->alpha > 0.0)) {
        body["J_u_closed_form"] = nullptr;
        body["offset_term"] = nullptr;
        body["delta"] = nullptr;
    } else {
        const ClosedFormAction cf = action::closed_form_ju(model, cyc.J_v, cyc.J_psi, params);
        body["J_u_closed_form"] = cf.value;
        body["offset_term"] = cf.offset;
        body["delta"] = ju.value - cf.value;
    }
    write_object(cfg, format_of(cfg, "json"), body);
    return kOk;
}

Grid grid_of(const json& cfg, const char* lo, const char* hi, const char* count, const char* base) {
    const long long n = integer(cfg, count);
    if (n < 1) throw ParameterError(std::string(count) + " must be >= 1");
    const double a = opt_num(cfg, lo).value_or(num(cfg, base));
    const double b = opt_num(cfg, hi).value_or(a);
    return {a, b, static_cast<std::size_t>(n)};
}

int cmd_sweep(const json& cfg) {
    SweepSpec spec;
    spec.params = params_of(cfg);
    spec.model = model_of(cfg);
    spec.energy = grid_of(cfg, "e_min", "e_max", "e_count", "energy");
    spec.l = grid_of(cfg, "l_min", "l_max", "l_count", "l");
    spec.s = grid_of(cfg, "s_min", "s_max", "s_count", "s");
    spec.quadrature.rel_tol = num(cfg, "rel_tol");
    spec.quadrature.abs_tol = num(cfg, "abs_tol");
    spec.validate();
    const auto rows = verify::run_sweep(spec);
    const auto summary = verify::summarize(spec, rows);
    json sj;
    sj["config"] = cfg;
    sj["model"] = summary.model;
    sj["grid"] = {{"E", spec.energy.count}, {"l", spec.l.count}, {"s", spec.s.count}, {"size", summary.grid_size}};
    sj["n_admissible"] = summary.n_admissible;
    sj["max_delta"] = optional_json(summary.max_delta);
    sj["min_delta"] = optional_json(summary.min_delta);

    const std::string format = format_of(cfg, "csv");
    {
        Sink sink(cfg);
        if (format == "csv") {
            sink.os() << "# " << cfg.dump() << '\n';
            verify::write_sweep_csv(sink.os(), rows);
        } else {
            json out;
            out["config"] = cfg;
            json arr = json::array();
            for (const auto& row : rows) {
                json r;
                r["E"] = row.constants.energy;
                r["l"] = row.constants.l;
                r["s"] = row.constants.s;
                r["J_v"] = row.J_v;
                r["J_psi"] = row.J_psi;
                r["region"] = row.region ? std::string(action::region_name(*row.region)) : std::string("boundary");
                r["Ju_quadrature"] = optional_json(row.ju_quadrature);
                r["Ju_closed_form"] = row.ju_closed_form;
                r["delta"] = optional_json(row.delta);
                r["offset_term"] = row.offset_term;
                r["rel_delta"] = optional_json(row.relative_delta);
                r["status"] = std::string(status_name(row.status));
                arr.push_back(r);
            }
            out["rows"] = arr;
            out["summary"] = sj;
            sink.os() << out.dump(2) << '\n';
        }
        sink.close();
    }
    if (cfg.contains("summary")) {
        const std::string path = cfg.at("summary").get<std::string>();
        std::ofstream f(path, std::ios::trunc);
        if (!f) throw IoError("cannot open summary file '" + path + "'");
        f << sj.dump(2) << '\n';
        if (!f) throw IoError("write failed for '" + path + "'");
    } else if (format == "csv") {
        std::cerr << sj.dump() << '\n';
    }
    return kOk;
}

int cmd_quantize(const json& cfg) {
    const long long n = integer(cfg, "n");
    const double r = action::quantized_radius(n);
    json body;
    body["N"] = n;
    body["r"] = r;
    body["check"] = std::numbers::pi * r * r / 2.0;
    write_object(cfg, format_of(cfg, "json"), body);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rigid body on the Mylar balloon: geometry, dynamics and action variables"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand help for every subcommand");

    struct Command {
        const char* name;
        const char* about;
        int (*run)(const json&);
    };
    const Command commands[] = {
        {"geometry", "Embedding and curvature table over a (u, v) grid", cmd_geometry},
        {"simulate", "Integrate Hamilton's equations and write the trajectory", cmd_simulate},
        {"actions", "Action variables at one (E, l, s) point, with the closed-form prediction", cmd_actions},
        {"sweep", "Compare quadrature and closed-form J_u over an (E, l, s) grid", cmd_sweep},
        {"quantize", "Radius for which pi r^2 / 2 = N", cmd_quantize},
    };

    std::map<std::string, FlagStore> stores;
    std::map<std::string, std::string> config_paths;
    std::map<std::string, CLI::App*> subs;
    for (const auto& cmd : commands) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.about);
        register_flags(*sub, command_keys(cmd.name), stores[cmd.name]);
        sub->add_option("--config", config_paths[cmd.name], "JSON config file; flags override its keys");
        subs[cmd.name] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "mylar: error: %s\n", e.what());
        return kValidation;
    }

    for (const auto& cmd : commands) {
        if (!subs[cmd.name]->parsed()) continue;
        try {
            const json cfg = effective_config(cmd.name, command_keys(cmd.name), config_paths[cmd.name],
                                              stores[cmd.name]);
            return cmd.run(cfg);
        } catch (const IoError& e) {
            std::fprintf(stderr, "mylar: I/O error: %s\n", e.what());
            return kIo;
        } catch (const NumericError& e) {
            std::fprintf(stderr, "mylar: numeric failure: %s\n", e.what());
            return kNumeric;
        } catch (const std::invalid_argument& e) {
            std::fprintf(stderr, "mylar: invalid configuration: %s\n", e.what());
            return kValidation;
        } catch (const std::domain_error& e) {
            std::fprintf(stderr, "mylar: invalid configuration: %s\n", e.what());
            return kValidation;
        } catch (const json::exception& e) {
            std::fprintf(stderr, "mylar: invalid configuration: %s\n", e.what());
            return kValidation;
        }
    }
    return kValidation;
}
