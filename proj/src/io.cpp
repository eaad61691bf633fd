// Copyright 2026 The cvforge Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvforge/io.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

namespace cvforge {

using nlohmann::json;

namespace {

constexpr const char *kParamsFormat = "cvforge-params";

[[noreturn]] void bad(const std::string &path, const std::string &msg) {
    throw ConfigError("config field '" + path + "': " + msg);
}

void require_object(const json &j, const std::string &path) {
    if (!j.is_object()) {
        bad(path, "expected an object");
    }
}

void reject_unknown(const json &j, const std::string &path,
                    std::initializer_list<const char *> allowed) {
    for (const auto &item : j.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char *k) { return item.key() == k; });
        if (!known) {
            bad(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
        }
    }
}

std::string join(const std::string &path, const char *key) {
    return path.empty() ? std::string(key) : path + "." + key;
}

double get_number(const json &j, const std::string &path) {
    if (!j.is_number()) {
        bad(path, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        bad(path, "must be finite");
    }
    return v;
}

long long get_integer(const json &j, const std::string &path, long long lo,
                      long long hi = std::numeric_limits<long long>::max()) {
    if (!j.is_number_integer()) {
        bad(path, "expected an integer");
    }
    const auto v = j.get<long long>();
    if (v < lo || v > hi) {
        bad(path, "value " + std::to_string(v) + " outside [" + std::to_string(lo) +
                      ", " + std::to_string(hi) + "]");
    }
    return v;
}

std::uint64_t get_seed(const json &j, const std::string &path) {
    if (j.is_number_unsigned()) {
        return j.get<std::uint64_t>();
    }
    return static_cast<std::uint64_t>(get_integer(j, path, 0));
}

cplx get_complex(const json &j, const std::string &path) {
    if (j.is_number()) {
        return {get_number(j, path), 0.0};
    }
    if (j.is_array() && j.size() == 2) {
        return {get_number(j[0], path + "[0]"), get_number(j[1], path + "[1]")};
    }
    bad(path, "expected a number or a [re, im] pair");
}

template <class F>
void if_present(const json &j, const std::string &path, const char *key, F &&f) {
    if (j.contains(key)) {
        f(j.at(key), join(path, key));
    }
}

std::vector<double> get_vector(const json &j, const std::string &path) {
    if (!j.is_array()) {
        bad(path, "expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        out.push_back(get_number(j[k], path + "[" + std::to_string(k) + "]"));
    }
    return out;
}

Interferometer get_interferometer(const json &j, const std::string &path) {
    require_object(j, path);
    reject_unknown(j, path, {"theta", "phi", "rotation"});
    Interferometer u;
    for (const char *k : {"theta", "phi", "rotation"}) {
        if (!j.contains(k)) {
            bad(join(path, k), "missing");
        }
    }
    u.theta = get_vector(j.at("theta"), join(path, "theta"));
    u.phi = get_vector(j.at("phi"), join(path, "phi"));
    u.rotation = get_vector(j.at("rotation"), join(path, "rotation"));
    return u;
}

json interferometer_json(const Interferometer &u) {
    return {{"theta", u.theta}, {"phi", u.phi}, {"rotation", u.rotation}};
}

std::optional<Task> parse_task(std::string_view s) {
    for (Task t : {Task::Prepare, Task::Synthesize, Task::Sweep, Task::Analyze}) {
        if (task_name(t) == s) {
            return t;
        }
    }
    return std::nullopt;
}

} // namespace

std::string_view task_name(Task task) noexcept {
    switch (task) {
    case Task::Prepare:
        return "prepare";
    case Task::Synthesize:
        return "synthesize";
    case Task::Sweep:
        return "sweep";
    case Task::Analyze:
        return "analyze";
    }
    return "unknown";
}

TargetSpec parse_target(const json &doc) {
    const std::string path = "target";
    require_object(doc, path);
    reject_unknown(doc, path,
                   {"kind", "n", "N", "a", "alpha", "mu", "d_code", "delta",
                    "lattice_radius", "gamma", "kappa", "d", "seed"});
    if (!doc.contains("kind") || !doc.at("kind").is_string()) {
        bad("target.kind", "missing or not a string");
    }
    const auto kind = parse_target_kind(doc.at("kind").get<std::string>());
    if (!kind) {
        bad("target.kind", "unknown kind '" + doc.at("kind").get<std::string>() + "'");
    }
    TargetSpec t;
    t.kind = *kind;
    if_present(doc, path, "n", [&](const json &v, const std::string &p) { t.n = get_integer(v, p, 0); });
    if_present(doc, path, "N", [&](const json &v, const std::string &p) { t.n = get_integer(v, p, 1); });
    if_present(doc, path, "a", [&](const json &v, const std::string &p) { t.a = get_complex(v, p); });
    if_present(doc, path, "alpha", [&](const json &v, const std::string &p) { t.a = get_complex(v, p); });
    if_present(doc, path, "mu", [&](const json &v, const std::string &p) {
        t.mu = static_cast<int>(get_integer(v, p, 0, 1 << 20));
    });
    if_present(doc, path, "d_code", [&](const json &v, const std::string &p) {
        t.d_code = static_cast<int>(get_integer(v, p, 1, 1 << 20));
    });
    if_present(doc, path, "delta", [&](const json &v, const std::string &p) { t.delta = get_number(v, p); });
    if_present(doc, path, "lattice_radius", [&](const json &v, const std::string &p) {
        t.lattice_radius = static_cast<int>(get_integer(v, p, 0, 256));
    });
    if_present(doc, path, "gamma", [&](const json &v, const std::string &p) { t.gamma = get_number(v, p); });
    if_present(doc, path, "kappa", [&](const json &v, const std::string &p) { t.kappa = get_number(v, p); });
    if_present(doc, path, "d", [&](const json &v, const std::string &p) { t.d = get_integer(v, p, 1); });
    if_present(doc, path, "seed", [&](const json &v, const std::string &p) { t.seed = get_seed(v, p); });

    if (t.kind == TargetKind::HexGkp && !doc.contains("d_code")) {
        bad("target.d_code", "required for hex_gkp");
    }
    if ((t.kind == TargetKind::OnState || t.kind == TargetKind::Noon) && !doc.contains("N")) {
        bad("target.N", std::string("required for ") + std::string(target_kind_name(t.kind)));
    }
    if (is_gate_target(t.kind) || t.kind == TargetKind::RandomState) {
        if (!doc.contains("d")) {
            bad("target.d", std::string("required for ") + std::string(target_kind_name(t.kind)));
        }
    }
    try {
        t.validate();
    } catch (const PreconditionError &e) {
        throw ConfigError(std::string("config field 'target': ") + e.what());
    }
    return t;
}

json target_to_json(const TargetSpec &t) {
    json j{{"kind", std::string(target_kind_name(t.kind))}};
    switch (t.kind) {
    case TargetKind::SinglePhoton:
        break;
    case TargetKind::FockN:
        j["n"] = t.n;
        break;
    case TargetKind::OnState:
        j["N"] = t.n;
        j["a"] = {t.a.real(), t.a.imag()};
        break;
    case TargetKind::Noon:
        j["N"] = t.n;
        break;
    case TargetKind::Coherent:
        j["alpha"] = {t.a.real(), t.a.imag()};
        break;
    case TargetKind::HexGkp:
        j["mu"] = t.mu;
        j["d_code"] = t.d_code;
        j["delta"] = t.delta;
        j["lattice_radius"] = t.lattice_radius;
        break;
    case TargetKind::RandomState:
    case TargetKind::HaarGate:
        j["d"] = t.d;
        j["seed"] = t.seed;
        break;
    case TargetKind::QftGate:
        j["d"] = t.d;
        break;
    case TargetKind::CubicPhaseGate:
        j["d"] = t.d;
        j["gamma"] = t.gamma;
        break;
    case TargetKind::CrossKerrGate:
        j["d"] = t.d;
        j["kappa"] = t.kappa;
        break;
    }
    return j;
}

ExperimentConfig parse_config(const json &doc) {
    require_object(doc, "<root>");
    reject_unknown(doc, "",
                   {"task", "target", "network", "optimizer", "restarts", "parallelism",
                    "output_dir", "sweep", "mc_samples", "diagnostics", "description"});
    ExperimentConfig c;
    if (!doc.contains("task") || !doc.at("task").is_string()) {
        bad("task", "missing or not a string");
    }
    const auto task = parse_task(doc.at("task").get<std::string>());
    if (!task) {
        bad("task", "expected prepare, synthesize, sweep or analyze");
    }
    c.task = *task;
    if (!doc.contains("target")) {
        bad("target", "missing");
    }
    c.target = parse_target(doc.at("target"));

    if (!doc.contains("network")) {
        bad("network", "missing");
    }
    const json &net = doc.at("network");
    require_object(net, "network");
    reject_unknown(net, "network", {"layers", "modes", "cutoff"});
    for (const char *k : {"layers", "cutoff"}) {
        if (!net.contains(k)) {
            bad(join("network", k), "missing");
        }
    }
    c.network.layers = static_cast<int>(get_integer(net.at("layers"), "network.layers", 1, 10000));
    c.network.cutoff = static_cast<std::size_t>(get_integer(net.at("cutoff"), "network.cutoff", 2, 4096));
    c.network.modes = target_modes(c.target.kind);
    if_present(net, "network", "modes", [&](const json &v, const std::string &p) {
        c.network.modes = static_cast<int>(get_integer(v, p, 1, 2));
    });
    if (c.network.modes != target_modes(c.target.kind)) {
        bad("network.modes", std::string(target_kind_name(c.target.kind)) + " needs " +
                                 std::to_string(target_modes(c.target.kind)) + " mode(s)");
    }

    if (doc.contains("optimizer")) {
        const json &o = doc.at("optimizer");
        const std::string p = "optimizer";
        require_object(o, p);
        reject_unknown(o, p,
                       {"learning_rate", "beta1", "beta2", "eps_hat", "steps",
                        "penalty_weight", "seed", "active_std"});
        auto &a = c.optimizer;
        if_present(o, p, "learning_rate", [&](const json &v, const std::string &q) { a.learning_rate = get_number(v, q); });
        if_present(o, p, "beta1", [&](const json &v, const std::string &q) { a.beta1 = get_number(v, q); });
        if_present(o, p, "beta2", [&](const json &v, const std::string &q) { a.beta2 = get_number(v, q); });
        if_present(o, p, "eps_hat", [&](const json &v, const std::string &q) { a.eps_hat = get_number(v, q); });
        if_present(o, p, "steps", [&](const json &v, const std::string &q) {
            a.steps = static_cast<int>(get_integer(v, q, 0, std::numeric_limits<int>::max()));
        });
        if_present(o, p, "penalty_weight", [&](const json &v, const std::string &q) { a.penalty_weight = get_number(v, q); });
        if_present(o, p, "seed", [&](const json &v, const std::string &q) { a.seed = get_seed(v, q); });
        if_present(o, p, "active_std", [&](const json &v, const std::string &q) { a.active_std = get_number(v, q); });
        try {
            a.validate();
        } catch (const PreconditionError &e) {
            throw ConfigError(std::string("config field 'optimizer': ") + e.what());
        }
    }
    if_present(doc, "", "restarts", [&](const json &v, const std::string &p) {
        c.restarts = static_cast<std::size_t>(get_integer(v, p, 1, 1 << 20));
    });
    if_present(doc, "", "parallelism", [&](const json &v, const std::string &p) {
        c.parallelism = static_cast<std::size_t>(get_integer(v, p, 1, 4096));
    });
    if_present(doc, "", "output_dir", [&](const json &v, const std::string &p) {
        if (!v.is_string() || v.get<std::string>().empty()) {
            bad(p, "expected a non-empty string");
        }
        c.output_dir = v.get<std::string>();
    });
    if_present(doc, "", "mc_samples", [&](const json &v, const std::string &p) {
        c.mc_samples = static_cast<std::size_t>(get_integer(v, p, 1, 100000000));
    });
    if_present(doc, "", "sweep", [&](const json &v, const std::string &p) {
        require_object(v, p);
        reject_unknown(v, p, {"depths", "runs_per_depth"});
        if_present(v, p, "depths", [&](const json &dv, const std::string &dp) {
            if (!dv.is_array() || dv.empty()) {
                bad(dp, "expected a non-empty array of layer counts");
            }
            for (std::size_t k = 0; k < dv.size(); ++k) {
                c.sweep.depths.push_back(static_cast<int>(
                    get_integer(dv[k], dp + "[" + std::to_string(k) + "]", 1, 10000)));
            }
        });
        if_present(v, p, "runs_per_depth", [&](const json &rv, const std::string &rp) {
            c.sweep.runs_per_depth = static_cast<std::size_t>(get_integer(rv, rp, 1, 1 << 20));
        });
    });
    if (c.task == Task::Sweep && c.sweep.depths.empty()) {
        bad("sweep.depths", "required for task sweep");
    }
    if_present(doc, "", "diagnostics", [&](const json &v, const std::string &p) {
        require_object(v, p);
        reject_unknown(v, p, {"enabled", "grid", "wavefunction_points"});
        if_present(v, p, "enabled", [&](const json &e, const std::string &ep) {
            if (!e.is_boolean()) {
                bad(ep, "expected true or false");
            }
            c.diagnostics.enabled = e.get<bool>();
        });
        if_present(v, p, "wavefunction_points", [&](const json &e, const std::string &ep) {
            c.diagnostics.wavefunction_points = get_integer(e, ep, 1, 1000000);
        });
        if_present(v, p, "grid", [&](const json &g, const std::string &gp) {
            require_object(g, gp);
            reject_unknown(g, gp, {"x_min", "x_max", "nx", "p_min", "p_max", "ny"});
            auto &s = c.diagnostics.grid;
            if_present(g, gp, "x_min", [&](const json &e, const std::string &ep) { s.x_min = get_number(e, ep); });
            if_present(g, gp, "x_max", [&](const json &e, const std::string &ep) { s.x_max = get_number(e, ep); });
            if_present(g, gp, "p_min", [&](const json &e, const std::string &ep) { s.p_min = get_number(e, ep); });
            if_present(g, gp, "p_max", [&](const json &e, const std::string &ep) { s.p_max = get_number(e, ep); });
            if_present(g, gp, "nx", [&](const json &e, const std::string &ep) { s.nx = get_integer(e, ep, 1, 100000); });
            if_present(g, gp, "ny", [&](const json &e, const std::string &ep) { s.ny = get_integer(e, ep, 1, 100000); });
            try {
                s.validate();
            } catch (const PreconditionError &e) {
                bad(gp, e.what());
            }
        });
    });
    if (is_gate_target(c.target.kind)) {
        const auto limit = static_cast<Index>(c.network.cutoff);
        if (c.target.d > limit) {
            bad("target.d", "exceeds network.cutoff");
        }
    }
    return c;
}

json config_to_json(const ExperimentConfig &c) {
    const auto &o = c.optimizer;
    const auto &g = c.diagnostics.grid;
    json j{
        {"task", std::string(task_name(c.task))},
        {"target", target_to_json(c.target)},
        {"network",
         {{"layers", c.network.layers}, {"modes", c.network.modes}, {"cutoff", c.network.cutoff}}},
        {"optimizer",
         {{"learning_rate", o.learning_rate},
          {"beta1", o.beta1},
          {"beta2", o.beta2},
          {"eps_hat", o.eps_hat},
          {"steps", o.steps},
          {"penalty_weight", o.penalty_weight},
          {"seed", o.seed},
          {"active_std", o.active_std}}},
        {"restarts", c.restarts},
        {"parallelism", c.parallelism},
        {"output_dir", c.output_dir},
        {"mc_samples", c.mc_samples},
        {"diagnostics",
         {{"enabled", c.diagnostics.enabled},
          {"wavefunction_points", c.diagnostics.wavefunction_points},
          {"grid",
           {{"x_min", g.x_min}, {"x_max", g.x_max}, {"nx", g.nx},
            {"p_min", g.p_min}, {"p_max", g.p_max}, {"ny", g.ny}}}}},
    };
    if (!c.sweep.depths.empty()) {
        j["sweep"] = {{"depths", c.sweep.depths}, {"runs_per_depth", c.sweep.runs_per_depth}};
    }
    return j;
}

json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open '" + path.string() + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        std::size_t line = 1;
        std::size_t col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t k = 0; k < stop; ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError(path.string() + ":" + std::to_string(line) + ":" +
                          std::to_string(col) + ": invalid JSON (" + e.what() + ")");
    }
}

void write_json_file(const std::filesystem::path &path, const json &doc) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << doc.dump(2) << '\n';
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    return parse_config(read_json_file(path));
}

json params_to_json(const NetworkParams &p) {
    json layers = json::array();
    for (const auto &l : p.layers) {
        layers.push_back({{"u1", interferometer_json(l.u1)},
                          {"r", l.r},
                          {"u2", interferometer_json(l.u2)},
                          {"alpha_re", l.alpha_re},
                          {"alpha_im", l.alpha_im},
                          {"kappa", l.kappa}});
    }
    return {{"format", kParamsFormat},
            {"version", 1},
            {"modes", p.modes},
            {"cutoff", p.cutoff},
            {"layers", layers}};
}

NetworkParams params_from_json(const json &doc) {
    require_object(doc, "<params>");
    reject_unknown(doc, "", {"format", "version", "modes", "cutoff", "layers"});
    if (doc.contains("format") &&
        (!doc.at("format").is_string() || doc.at("format").get<std::string>() != kParamsFormat)) {
        bad("format", std::string("expected '") + kParamsFormat + "'");
    }
    for (const char *k : {"modes", "cutoff", "layers"}) {
        if (!doc.contains(k)) {
            bad(k, "missing");
        }
    }
    NetworkParams p;
    p.modes = static_cast<int>(get_integer(doc.at("modes"), "modes", 1, 2));
    p.cutoff = static_cast<std::size_t>(get_integer(doc.at("cutoff"), "cutoff", 2, 4096));
    const json &layers = doc.at("layers");
    if (!layers.is_array() || layers.empty()) {
        bad("layers", "expected a non-empty array");
    }
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const std::string path = "layers[" + std::to_string(k) + "]";
        const json &l = layers[k];
        require_object(l, path);
        reject_unknown(l, path, {"u1", "r", "u2", "alpha_re", "alpha_im", "kappa"});
        for (const char *key : {"u1", "r", "u2", "alpha_re", "alpha_im", "kappa"}) {
            if (!l.contains(key)) {
                bad(join(path, key), "missing");
            }
        }
        LayerParams lp;
        lp.u1 = get_interferometer(l.at("u1"), join(path, "u1"));
        lp.r = get_vector(l.at("r"), join(path, "r"));
        lp.u2 = get_interferometer(l.at("u2"), join(path, "u2"));
        lp.alpha_re = get_vector(l.at("alpha_re"), join(path, "alpha_re"));
        lp.alpha_im = get_vector(l.at("alpha_im"), join(path, "alpha_im"));
        lp.kappa = get_vector(l.at("kappa"), join(path, "kappa"));
        p.layers.push_back(std::move(lp));
    }
    try {
        (void)p.flatten();
    } catch (const DimensionMismatch &e) {
        throw ConfigError(std::string("parameter file: ") + e.what());
    }
    return p;
}

NetworkParams load_params(const std::filesystem::path &path) {
    return params_from_json(read_json_file(path));
}

} // namespace cvforge
