// Copyright 2026 The OAMNet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Declarative run configuration: one JSON tree (comments allowed) shared by
// every command, with architecture, dims, noise, protocol and sweep
// sections. Unknown keys are rejected to catch typos early.

#ifndef OAMNET_CONFIG_HPP
#define OAMNET_CONFIG_HPP

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "oamnet/fabric.hpp"

namespace oamnet {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class ProtocolKind { bb84, bbm92, active_ent, passive_ent };

struct ProtocolConfig {
    ProtocolKind kind = ProtocolKind::bb84;
    int sender = 0;
    int group = 0;
    int receiver = 0;
    int pair_a = 0;
    int pair_b = 1;
    int bits = 1000;
    int rounds = 1000;
    int samples = 1000;
};

struct SweepConfig {
    std::vector<double> magnitudes;
    int samples = 100;
};

struct RunConfig {
    NetworkSpec spec;
    uint64_t seed = 1;  // default seed when the file does not set one
    std::optional<ProtocolConfig> protocol;
    std::optional<SweepConfig> sweep;
};

namespace detail {

inline void require_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!obj.is_object()) {
        throw ConfigError("config: '" + where + "' must be an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw ConfigError("config: unknown key '" + key + "' in " + where);
        }
    }
}

inline int get_int(const nlohmann::json& obj, const std::string& key, int fallback,
                   const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) {
        throw ConfigError("config: '" + key + "' in " + where + " must be an integer");
    }
    return obj[key].get<int>();
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    detail::require_keys(root, {"architecture", "dims", "seed", "noise", "protocol", "sweep"},
                         "the top level");

    RunConfig config;
    if (!root.contains("architecture") || !root["architecture"].is_string()) {
        throw ConfigError("config: missing 'architecture'");
    }
    auto arch = architecture_from_name(root["architecture"].get<std::string>());
    if (!arch) {
        throw ConfigError("config: unknown architecture '" +
                          root["architecture"].get<std::string>() + "'");
    }
    config.spec.arch = *arch;

    if (!root.contains("dims")) {
        throw ConfigError("config: missing 'dims'");
    }
    const auto& dims = root["dims"];
    detail::require_keys(dims, {"d", "n", "d_s", "d_r", "groups", "band"}, "'dims'");
    config.spec.dims.d = detail::get_int(dims, "d", 0, "'dims'");
    if (dims.contains("n")) {
        if (config.spec.dims.d != 0) throw ConfigError("config: give either 'd' or 'n', not both");
        config.spec.dims.d = detail::get_int(dims, "n", 0, "'dims'");
    }
    config.spec.dims.d_s = detail::get_int(dims, "d_s", 0, "'dims'");
    config.spec.dims.d_r = detail::get_int(dims, "d_r", 0, "'dims'");
    config.spec.dims.groups = detail::get_int(dims, "groups", 1, "'dims'");
    config.spec.dims.band = detail::get_int(dims, "band", 0, "'dims'");

    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer()) {
            throw ConfigError("config: 'seed' must be a non-negative integer");
        }
        config.seed = root["seed"].get<uint64_t>();
    }

    if (root.contains("noise")) {
        const auto& noise = root["noise"];
        detail::require_keys(noise, {"magnitude", "seed", "errors"}, "'noise'");
        if (noise.contains("errors")) {
            if (noise.contains("magnitude") || noise.contains("seed")) {
                throw ConfigError("config: 'noise' takes either explicit 'errors' or "
                                  "'magnitude'+'seed', not both");
            }
            if (!noise["errors"].is_array()) {
                throw ConfigError("config: 'noise.errors' must be an array of arrays");
            }
            for (const auto& stage : noise["errors"]) {
                if (!stage.is_array()) {
                    throw ConfigError("config: 'noise.errors' must be an array of arrays");
                }
                PhaseErrors e;
                for (const auto& v : stage) {
                    if (!v.is_number()) throw ConfigError("config: noise errors must be numbers");
                    e.push_back(v.get<double>());
                }
                config.spec.noise.stage_errors.push_back(std::move(e));
            }
        } else {
            if (!noise.contains("magnitude")) {
                throw ConfigError("config: 'noise' needs 'magnitude' (with optional 'seed') or "
                                  "'errors'");
            }
            if (!noise["magnitude"].is_number()) {
                throw ConfigError("config: 'noise.magnitude' must be a number");
            }
            config.spec.noise.random = true;
            config.spec.noise.magnitude = noise["magnitude"].get<double>();
            config.spec.noise.seed = noise.contains("seed") ? noise["seed"].get<uint64_t>() : 0;
        }
    }

    if (root.contains("protocol")) {
        const auto& proto = root["protocol"];
        detail::require_keys(
            proto, {"type", "sender", "group", "receiver", "pair", "bits", "rounds", "samples"},
            "'protocol'");
        if (!proto.contains("type") || !proto["type"].is_string()) {
            throw ConfigError("config: 'protocol' needs a 'type'");
        }
        ProtocolConfig p;
        std::string type = proto["type"].get<std::string>();
        if (type == "bb84") {
            p.kind = ProtocolKind::bb84;
        } else if (type == "bbm92") {
            p.kind = ProtocolKind::bbm92;
        } else if (type == "active-ent") {
            p.kind = ProtocolKind::active_ent;
        } else if (type == "passive-ent") {
            p.kind = ProtocolKind::passive_ent;
        } else {
            throw ConfigError("config: unknown protocol type '" + type + "'");
        }
        p.sender = detail::get_int(proto, "sender", 0, "'protocol'");
        p.group = detail::get_int(proto, "group", 0, "'protocol'");
        p.receiver = detail::get_int(proto, "receiver", 0, "'protocol'");
        p.bits = detail::get_int(proto, "bits", 1000, "'protocol'");
        p.rounds = detail::get_int(proto, "rounds", 1000, "'protocol'");
        p.samples = detail::get_int(proto, "samples", 1000, "'protocol'");
        if (proto.contains("pair")) {
            if (!proto["pair"].is_array() || proto["pair"].size() != 2) {
                throw ConfigError("config: 'protocol.pair' must be [a, b]");
            }
            p.pair_a = proto["pair"][0].get<int>();
            p.pair_b = proto["pair"][1].get<int>();
        }
        config.protocol = p;
    }

    if (root.contains("sweep")) {
        const auto& sweep = root["sweep"];
        detail::require_keys(sweep, {"magnitudes", "samples"}, "'sweep'");
        if (!sweep.contains("magnitudes") || !sweep["magnitudes"].is_array()) {
            throw ConfigError("config: 'sweep' needs a 'magnitudes' array");
        }
        SweepConfig sc;
        for (const auto& m : sweep["magnitudes"]) {
            if (!m.is_number()) throw ConfigError("config: sweep magnitudes must be numbers");
            sc.magnitudes.push_back(m.get<double>());
        }
        sc.samples = detail::get_int(sweep, "samples", 100, "'sweep'");
        config.sweep = sc;
    }

    return config;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace oamnet

#endif
