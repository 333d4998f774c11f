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
// Network fabric: compiles a declarative NetworkSpec into an ordered list
// of optical elements and simulates end-to-end photon transport for every
// architecture. Pipelines are immutable after build; transmission is pure.

#ifndef OAMNET_FABRIC_HPP
#define OAMNET_FABRIC_HPP

#include <cstdio>
#include <functional>
#include <future>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oamnet/assignment.hpp"
#include "oamnet/elements.hpp"
#include "oamnet/ports.hpp"
#include "oamnet/rng.hpp"
#include "oamnet/state.hpp"

namespace oamnet {

// Sorter imperfections. Either explicit per-device arm-error vectors
// (matched to the pipeline's noise slots in build order) or random vectors
// drawn uniformly in [-magnitude, magnitude] per arm from `seed`.
struct NoiseSpec {
    std::vector<PhaseErrors> stage_errors;
    double magnitude = 0.0;
    uint64_t seed = 0;
    bool random = false;

    bool enabled() const { return random || !stage_errors.empty(); }
};

struct NetworkSpec {
    Architecture arch = Architecture::point_to_point;
    Dims dims;
    NoiseSpec noise;
};

struct Stage {
    Element element;
    std::vector<FactorRef> targets;
};

// Polarization payload α|H⟩ + β|V⟩ riding through a network untouched.
struct Payload {
    Complex h{1.0, 0.0};
    Complex v{0.0, 0.0};
};

struct TransmissionResult {
    State final_state;
    std::vector<double> port_probs;  // per user port
    double unrouted = 0.0;           // mass on internal ports (noise only)
    int designated_port = -1;
    double designated_probability = 0.0;
    double payload_fidelity = 0.0;
};

struct PairResult {
    int sender = 0;
    int group = 0;
    int receiver = 0;
    int label = 0;
    double probability = 0.0;
};

struct SweepPoint {
    double magnitude = 0.0;
    double mean_prob = 0.0;
    double min_prob = 0.0;
    int samples = 0;
};

class Pipeline {
  public:
    Pipeline(NetworkSpec spec, Layout layout, std::vector<Stage> stages, std::vector<int> port_of_path,
             int sender_count, std::vector<int> slot_arms)
        : spec_(std::move(spec)),
          layout_(std::move(layout)),
          stages_(std::move(stages)),
          port_of_path_(std::move(port_of_path)),
          sender_count_(sender_count),
          slot_arms_(std::move(slot_arms)) {
        for (size_t path = 0; path < port_of_path_.size(); ++path) {
            int port = port_of_path_[path];
            if (port >= 0) {
                if (port >= static_cast<int>(port_to_path_.size())) {
                    port_to_path_.resize(static_cast<size_t>(port) + 1, -1);
                }
                port_to_path_[static_cast<size_t>(port)] = static_cast<int>(path);
            }
        }
    }

    const NetworkSpec& spec() const { return spec_; }
    const Layout& layout() const { return layout_; }
    const std::vector<Stage>& stages() const { return stages_; }
    int sender_count() const { return sender_count_; }
    int user_port_count() const { return static_cast<int>(port_to_path_.size()); }
    int path_of_port(int port) const { return port_to_path_[static_cast<size_t>(port)]; }
    int port_of_path(int path) const { return port_of_path_[static_cast<size_t>(path)]; }
    int oam_dim() const { return layout_.dim_of({FactorKind::oam, 0}); }
    int path_dim() const { return layout_.dim_of({FactorKind::path, 0}); }
    const std::vector<int>& noise_slot_arms() const { return slot_arms_; }

    State run(State state) const {
        for (const auto& stage : stages_) {
            state = state.apply(stage.element, stage.targets);
        }
        return state;
    }

    // Adjoint pipeline: receivers play senders and every element runs
    // backwards. Running it on a forward output restores the input.
    Pipeline reversed() const {
        std::vector<Stage> rev;
        for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
            rev.push_back({it->element.adjoint(), it->targets});
        }
        return Pipeline(spec_, layout_, std::move(rev), port_of_path_, sender_count_, slot_arms_);
    }

  private:
    NetworkSpec spec_;
    Layout layout_;
    std::vector<Stage> stages_;
    std::vector<int> port_of_path_;
    std::vector<int> port_to_path_;
    int sender_count_;
    std::vector<int> slot_arms_;
};

namespace detail {

// Embeds an element acting on (oam, path[0..d)) into a wider path register,
// identity on path values >= d.
inline Element embed_path(const Element& u, int total_path) {
    const auto& fp = u.footprint();
    if (fp.size() != 2 || fp[0].kind != FactorKind::oam || fp[1].kind != FactorKind::path) {
        throw std::logic_error("embed_path: element must act on (oam, path)");
    }
    const int oam_dim = fp[0].dim;
    const int d = fp[1].dim;
    if (total_path < d) {
        throw std::logic_error("embed_path: path register too small");
    }
    if (total_path == d) return u;
    const int dim = oam_dim * total_path;
    CVec m(static_cast<size_t>(dim) * dim, Complex{0.0, 0.0});
    for (int l = 0; l < oam_dim; ++l) {
        for (int lp = 0; lp < oam_dim; ++lp) {
            for (int k = 0; k < d; ++k) {
                for (int kp = 0; kp < d; ++kp) {
                    Complex v = u.at(l * d + k, lp * d + kp);
                    if (v != Complex{0.0, 0.0}) {
                        m[static_cast<size_t>(l * total_path + k) * dim + (lp * total_path + kp)] = v;
                    }
                }
            }
        }
        for (int k = d; k < total_path; ++k) {
            m[static_cast<size_t>(l * total_path + k) * dim + (l * total_path + k)] = 1.0;
        }
    }
    return Element(std::move(m), {{FactorKind::oam, oam_dim}, {FactorKind::path, total_path}},
                   u.name() + "-embedded");
}

// Builds an OAM-controlled path permutation from a per-OAM partial map;
// unmapped inputs are completed onto unused outputs in ascending order.
inline Element oam_controlled_path_map(int oam_dim, int total_path,
                                       const std::function<void(int, std::map<int, int>&)>& fill,
                                       const std::string& name) {
    std::vector<int> full(static_cast<size_t>(oam_dim) * total_path, -1);
    for (int l = 0; l < oam_dim; ++l) {
        std::map<int, int> partial;
        fill(l, partial);
        std::vector<char> used(static_cast<size_t>(total_path), 0);
        for (const auto& [from, to] : partial) {
            if (from < 0 || from >= total_path || to < 0 || to >= total_path ||
                used[static_cast<size_t>(to)]) {
                throw std::logic_error(name + ": invalid partial path map");
            }
            used[static_cast<size_t>(to)] = 1;
            full[static_cast<size_t>(l) * total_path + from] = to;
        }
        int next_free = 0;
        for (int k = 0; k < total_path; ++k) {
            if (full[static_cast<size_t>(l) * total_path + k] >= 0) continue;
            while (used[static_cast<size_t>(next_free)]) ++next_free;
            used[static_cast<size_t>(next_free)] = 1;
            full[static_cast<size_t>(l) * total_path + k] = next_free;
        }
    }
    return Element::permutation(
        {{FactorKind::oam, oam_dim}, {FactorKind::path, total_path}},
        [&full, total_path](int c) {
            int l = c / total_path;
            int k = c % total_path;
            return l * total_path + full[static_cast<size_t>(l) * total_path + k];
        },
        name);
}

// Hands out per-sorter error vectors while a pipeline is being built.
class NoiseSource {
  public:
    NoiseSource(const NoiseSpec& spec, std::vector<int>& slot_arms)
        : spec_(spec), slot_arms_(slot_arms), rng_(spec.seed) {}

    // Returns the error vector for the next sorter slot (d arms), or an
    // empty vector when the device is ideal.
    PhaseErrors take(int arms) {
        slot_arms_.push_back(arms);
        size_t slot = slot_arms_.size() - 1;
        if (!spec_.enabled()) return {};
        PhaseErrors errors;
        if (!spec_.stage_errors.empty()) {
            if (slot >= spec_.stage_errors.size()) {
                throw std::invalid_argument("noise: expected at least " + std::to_string(slot + 1) +
                                            " stage error vectors");
            }
            errors = spec_.stage_errors[slot];
            if (static_cast<int>(errors.size()) != arms) {
                throw std::invalid_argument("noise: stage " + std::to_string(slot) + " needs " +
                                            std::to_string(arms) + " arm errors, got " +
                                            std::to_string(errors.size()));
            }
        } else {
            errors.resize(static_cast<size_t>(arms));
            for (auto& e : errors) e = rng_.uniform(-spec_.magnitude, spec_.magnitude);
        }
        bool all_zero = true;
        for (double e : errors) all_zero &= (e == 0.0);
        return all_zero ? PhaseErrors{} : errors;
    }

  private:
    const NoiseSpec& spec_;
    std::vector<int>& slot_arms_;
    Rng rng_;
};

// Sorter / MUX stage of dimension d, realized interferometrically when the
// slot carries errors.
inline Element sorter_stage(int d, int oam_dim, const PhaseErrors& errors, bool demux) {
    if (errors.empty()) {
        return demux ? sorter_unitary(d, oam_dim) : mux_unitary(d, oam_dim);
    }
    Element mz = interferometric_sorter(d, errors, oam_dim);
    return demux ? mz : mz.adjoint();
}

}  // namespace detail

// Compiles the architecture into an executable pipeline.
//
// Stage plans (single-photon architectures use layout pol ⊗ oam ⊗ path;
// senders enter on their path value, the long-range channel is an identity):
//   point-to-point    U_d† → U_d
//   p2mp-coprime      U_{d_s}† → U_{d_r}
//   p2mp-general      U_{d_s}† → group demultiplexer G^{d_r}_{d_s}
//   p2mp-multigroup   U_{d_s}† → per-group split of the group demultiplexer,
//                     channel g feeding port g of group g's device
//   …-variant         sender-side group multiplexer → per-group U_{d_r},
//                     channel g feeding port (g·d_s mod d_r)
//   fully-connected   one U_n traversed as DEMUX; circulators share fibers
//   ent-active        per-photon U_d fed on port 0 (two-photon layout)
//   ent-passive       per-photon F_d, SPP bank, U_d†, then the final shared
//                     U_d with the idler offset one port
inline Pipeline build(const NetworkSpec& spec) {
    std::vector<int> slot_arms;
    detail::NoiseSource noise(spec.noise, slot_arms);
    const Dims& dims = spec.dims;

    auto single_photon_layout = [](int oam_dim, int path_dim) {
        return Layout({{FactorKind::pol, 2}, {FactorKind::oam, oam_dim}, {FactorKind::path, path_dim}});
    };
    const FactorRef oam0{FactorKind::oam, 0};
    const FactorRef path0{FactorKind::path, 0};
    std::vector<FactorRef> op{oam0, path0};

    switch (spec.arch) {
        case Architecture::point_to_point: {
            if (dims.d < 2) throw std::invalid_argument("point-to-point: need d >= 2");
            int d = dims.d;
            std::vector<Stage> stages;
            stages.push_back({detail::sorter_stage(d, d, noise.take(d), false), op});
            stages.push_back({detail::sorter_stage(d, d, noise.take(d), true), op});
            std::vector<int> ports(static_cast<size_t>(d));
            std::iota(ports.begin(), ports.end(), 0);
            return Pipeline(spec, single_photon_layout(d, d), std::move(stages), std::move(ports), d,
                            std::move(slot_arms));
        }

        case Architecture::p2mp_coprime: {
            if (dims.d_s < 2 || dims.d_r < 2) throw std::invalid_argument("p2mp-coprime: need d_s, d_r >= 2");
            if (std::gcd(dims.d_s, dims.d_r) != 1) {
                throw std::domain_error("p2mp-coprime: dimensions " + std::to_string(dims.d_s) + ", " +
                                        std::to_string(dims.d_r) +
                                        " are not coprime; use p2mp-general");
            }
            int band = dims.d_s * dims.d_r;
            int path_dim = std::max(dims.d_s, dims.d_r);
            std::vector<Stage> stages;
            stages.push_back(
                {detail::embed_path(detail::sorter_stage(dims.d_s, band, noise.take(dims.d_s), false),
                                    path_dim),
                 op});
            stages.push_back(
                {detail::embed_path(detail::sorter_stage(dims.d_r, band, noise.take(dims.d_r), true),
                                    path_dim),
                 op});
            std::vector<int> ports(static_cast<size_t>(path_dim), -1);
            for (int r = 0; r < dims.d_r; ++r) ports[static_cast<size_t>(r)] = r;
            return Pipeline(spec, single_photon_layout(band, path_dim), std::move(stages),
                            std::move(ports), dims.d_s, std::move(slot_arms));
        }

        case Architecture::p2mp_general:
        case Architecture::ent_active: {
            bool active = spec.arch == Architecture::ent_active;
            int d_s = active ? 1 : dims.d_s;
            int d_r = active ? dims.d : dims.d_r;
            if (d_s < 1 || d_r < 1) throw std::invalid_argument("p2mp-general: need d_s, d_r >= 1");
            if (active && d_r < 2) throw std::invalid_argument("ent-active: need d >= 2");
            int band = d_s * d_r;

            std::vector<Stage> single_stages;
            if (d_s >= 2) {
                single_stages.push_back(
                    {detail::embed_path(detail::sorter_stage(d_s, band, noise.take(d_s), false), band),
                     op});
            }
            // Internal sorters of the group demultiplexer: the U_{d_s·d_r}
            // demultiplexer plus d_r block multiplexers.
            std::vector<PhaseErrors> internal;
            if (band >= 2) {
                internal.push_back(noise.take(band));
                for (int g = 0; g < d_r && d_s >= 2; ++g) {
                    internal.push_back(noise.take(d_s));
                }
                internal.resize(static_cast<size_t>(d_r) + 1);
            }
            bool any_internal = false;
            for (const auto& e : internal) any_internal |= !e.empty();
            single_stages.push_back({group_demux(d_s, d_r, any_internal ? internal
                                                                        : std::vector<PhaseErrors>{}),
                                     op});

            std::vector<int> ports(static_cast<size_t>(band), -1);
            for (int r = 0; r < d_r; ++r) ports[static_cast<size_t>(r)] = r;

            if (!active) {
                return Pipeline(spec, single_photon_layout(band, band), std::move(single_stages),
                                std::move(ports), d_s, std::move(slot_arms));
            }

            // Entanglement distribution reuses the same device for both
            // photons of the pair (one physical sorter).
            Layout two({{FactorKind::pol, 2}, {FactorKind::oam, band}, {FactorKind::path, band}},
                       {{FactorKind::pol, 2}, {FactorKind::oam, band}, {FactorKind::path, band}});
            std::vector<Stage> stages;
            for (const auto& s : single_stages) {
                stages.push_back({s.element, {{FactorKind::oam, 0}, {FactorKind::path, 0}}});
            }
            for (const auto& s : single_stages) {
                stages.push_back({s.element, {{FactorKind::oam, 1}, {FactorKind::path, 1}}});
            }
            return Pipeline(spec, two, std::move(stages), std::move(ports), 1, std::move(slot_arms));
        }

        case Architecture::p2mp_multigroup: {
            int d_s = dims.d_s, R = dims.d_r, G = dims.groups;
            if (d_s < 2 || R < 1 || G < 1) {
                throw std::invalid_argument("p2mp-multigroup: need d_s >= 2, d_r >= 1, groups >= 1");
            }
            if (G > d_s) {
                throw std::invalid_argument(
                    "p2mp-multigroup: groups cannot exceed the multiplexer ports (d_s)");
            }
            int band = default_band(dims);
            if (band != d_s * R) {
                throw std::invalid_argument("p2mp-multigroup: band must equal d_s*d_r (got " +
                                            std::to_string(band) + ")");
            }
            const int dev = band;           // local paths per split device
            const int blocks = band / d_s;  // output blocks per device
            int path_dim = d_s + G * dev;

            std::vector<Stage> stages;
            stages.push_back(
                {detail::embed_path(detail::sorter_stage(d_s, band, noise.take(d_s), false), path_dim),
                 op});
            // Channel g plugs into local port g of group g's device.
            stages.push_back({detail::oam_controlled_path_map(
                                  band, path_dim,
                                  [&](int, std::map<int, int>& m) {
                                      for (int g = 0; g < G; ++g) m[g] = d_s + g * dev + g;
                                  },
                                  "fan-out"),
                              op});
            // Split group demultiplexers, one per group (closed form).
            stages.push_back({detail::oam_controlled_path_map(
                                  band, path_dim,
                                  [&](int l, std::map<int, int>& m) {
                                      for (int g = 0; g < G; ++g) {
                                          for (int k = 0; k < dev; ++k) {
                                              int out = ((k + l) % band) / d_s + blocks * (k % d_s);
                                              m[d_s + g * dev + k] = d_s + g * dev + out;
                                          }
                                      }
                                  },
                                  "split-group-demux"),
                              op});

            std::vector<int> ports(static_cast<size_t>(path_dim), -1);
            for (int g = 0; g < G; ++g) {
                for (int r = 0; r < R; ++r) {
                    int path = d_s + g * dev + (r + blocks * (g % d_s));
                    ports[static_cast<size_t>(path)] = g * R + r;
                }
            }
            return Pipeline(spec, single_photon_layout(band, path_dim), std::move(stages),
                            std::move(ports), d_s, std::move(slot_arms));
        }

        case Architecture::p2mp_multigroup_variant: {
            int d_s = dims.d_s, R = dims.d_r, G = dims.groups;
            if (d_s < 1 || R < 2 || G < 1) {
                throw std::invalid_argument(
                    "p2mp-multigroup-variant: need d_s >= 1, d_r >= 2, groups >= 1");
            }
            int band = default_band(dims);
            if (band != d_s * R) {
                throw std::invalid_argument("p2mp-multigroup-variant: band must equal d_s*d_r (got " +
                                            std::to_string(band) + ")");
            }
            int path_dim = d_s + G * R;

            std::vector<Stage> stages;
            // Sender-side group multiplexer: sender s carrying OAM l leaves on
            // the channel g whose window contains (l + g·d_s) mod band; the
            // smallest such g wins when the label is ambiguous. The channel
            // plugs into port (g·d_s mod d_r) of group g's demultiplexer.
            stages.push_back({detail::oam_controlled_path_map(
                                  band, path_dim,
                                  [&](int l, std::map<int, int>& m) {
                                      for (int g = 0; g < G; ++g) {
                                          int s = ((l + g * d_s) % band) / R;
                                          if (!m.count(s)) {
                                              m[s] = d_s + g * R + (g * d_s) % R;
                                          }
                                      }
                                  },
                                  "group-mux"),
                              op});
            // Plain demultiplexers U_{d_r}, one per group.
            std::vector<PhaseErrors> group_errors;
            for (int g = 0; g < G; ++g) group_errors.push_back(noise.take(R));
            stages.push_back({[&]() {
                                  // Per-group U_R on its block, identity elsewhere.
                                  bool noisy = false;
                                  for (const auto& e : group_errors) noisy |= !e.empty();
                                  if (!noisy) {
                                      return detail::oam_controlled_path_map(
                                          band, path_dim,
                                          [&](int l, std::map<int, int>& m) {
                                              for (int g = 0; g < G; ++g) {
                                                  for (int k = 0; k < R; ++k) {
                                                      m[d_s + g * R + k] = d_s + g * R + (k + l) % R;
                                                  }
                                              }
                                          },
                                          "group-demuxes");
                                  }
                                  Element acc = Element::identity(
                                      {{FactorKind::oam, band}, {FactorKind::path, path_dim}});
                                  for (int g = 0; g < G; ++g) {
                                      Element u = group_errors[static_cast<size_t>(g)].empty()
                                                      ? sorter_unitary(R, band)
                                                      : interferometric_sorter(
                                                            R, group_errors[static_cast<size_t>(g)],
                                                            band);
                                      // Shift the block into position via relabels.
                                      Element into = detail::oam_controlled_path_map(
                                          band, path_dim,
                                          [&](int, std::map<int, int>& m) {
                                              for (int k = 0; k < R; ++k) m[d_s + g * R + k] = k;
                                          },
                                          "pick");
                                      Element widened = detail::embed_path(u, path_dim);
                                      acc = into.adjoint().after(widened.after(into.after(acc)));
                                  }
                                  return acc;
                              }(),
                              op});

            std::vector<int> ports(static_cast<size_t>(path_dim), -1);
            for (int g = 0; g < G; ++g) {
                for (int r = 0; r < R; ++r) {
                    ports[static_cast<size_t>(d_s + g * R + r)] = g * R + r;
                }
            }
            return Pipeline(spec, single_photon_layout(band, path_dim), std::move(stages),
                            std::move(ports), d_s, std::move(slot_arms));
        }

        case Architecture::fully_connected: {
            if (dims.d < 2) throw std::invalid_argument("fully-connected: need n >= 2");
            int n = dims.d;
            // Circulators let one fiber per node carry both directions; the
            // wiring must deliver node a's transmitter to sorter input a and
            // sorter output b to node b's receiver.
            for (int node = 0; node < n; ++node) {
                std::string node_dev = "node" + std::to_string(node);
                std::string hub_dev = "hub" + std::to_string(node);
                PortMap wiring = circulator(node_dev)
                                     .compose(circulator(hub_dev))
                                     .compose(fiber({node_dev, 2}, {hub_dev, 1}));
                PortPoint tx = wiring.trace({node_dev, 1, PortSide::in});
                PortPoint rx = wiring.trace({hub_dev, 3, PortSide::in});
                if (!(tx == PortPoint{hub_dev, 2, PortSide::out}) ||
                    !(rx == PortPoint{node_dev, 3, PortSide::out})) {
                    throw std::logic_error("fully-connected: circulator wiring check failed");
                }
            }
            std::vector<Stage> stages;
            stages.push_back({detail::sorter_stage(n, n, noise.take(n), true), op});
            std::vector<int> ports(static_cast<size_t>(n));
            std::iota(ports.begin(), ports.end(), 0);
            return Pipeline(spec, single_photon_layout(n, n), std::move(stages), std::move(ports), n,
                            std::move(slot_arms));
        }

        case Architecture::ent_passive: {
            if (dims.d < 2) throw std::invalid_argument("ent-passive: need d >= 2");
            int d = dims.d;
            Layout two({{FactorKind::pol, 2}, {FactorKind::oam, d}, {FactorKind::path, d}},
                       {{FactorKind::pol, 2}, {FactorKind::oam, d}, {FactorKind::path, d}});
            std::vector<Stage> stages;
            PhaseErrors mux_err[2] = {noise.take(d), noise.take(d)};
            PhaseErrors final_err = noise.take(d);
            for (int photon = 0; photon < 2; ++photon) {
                std::vector<FactorRef> pp{{FactorKind::oam, photon}, {FactorKind::path, photon}};
                std::vector<FactorRef> path_only{{FactorKind::path, photon}};
                stages.push_back({fourier_gate(d), path_only});
                stages.push_back({spp_bank(d), pp});
                stages.push_back({detail::sorter_stage(d, d, mux_err[photon], false), pp});
                if (photon == 1) {
                    // The idler enters the final sorter on port 1.
                    stages.push_back({path_shift(1, d), path_only});
                }
                stages.push_back({detail::sorter_stage(d, d, final_err, true), pp});
            }
            std::vector<int> ports(static_cast<size_t>(d));
            std::iota(ports.begin(), ports.end(), 0);
            return Pipeline(spec, two, std::move(stages), std::move(ports), 1, std::move(slot_arms));
        }
    }
    throw std::invalid_argument("build: unknown architecture");
}

// ---------------------------------------------------------------------------

// Sends a polarization payload from a sender port with a chosen OAM label
// through a built single-photon pipeline.
inline TransmissionResult transmit(const Pipeline& pipeline, int sender_port, int oam_label,
                                   const Payload& payload) {
    if (pipeline.layout().photon_count() != 1) {
        throw std::invalid_argument("transmit: use the protocol layer for two-photon networks");
    }
    if (sender_port < 0 || sender_port >= pipeline.sender_count()) {
        throw std::out_of_range("transmit: sender port out of range");
    }
    if (oam_label < 0 || oam_label >= pipeline.oam_dim()) {
        throw std::out_of_range("transmit: OAM label out of range");
    }
    double norm = std::sqrt(std::norm(payload.h) + std::norm(payload.v));
    if (std::abs(norm - 1.0) > 1e-9) {
        throw std::invalid_argument("transmit: payload is not normalized");
    }

    State in = State::superposition(pipeline.layout(), {
                                                           {{0, oam_label, sender_port}, payload.h},
                                                           {{1, oam_label, sender_port}, payload.v},
                                                       });
    State out = pipeline.run(in);

    TransmissionResult result{out, {}, 0.0, -1, 0.0, 0.0};
    std::vector<double> path_probs = out.measure_factor({FactorKind::path, 0});
    result.port_probs.assign(static_cast<size_t>(pipeline.user_port_count()), 0.0);
    for (size_t path = 0; path < path_probs.size(); ++path) {
        int port = pipeline.port_of_path(static_cast<int>(path));
        if (port >= 0) {
            result.port_probs[static_cast<size_t>(port)] += path_probs[path];
        } else {
            result.unrouted += path_probs[path];
        }
    }

    // Designated receiver: the planner's decode of this label for this sender
    // (smallest group index when the label is shared).
    const NetworkSpec& spec = pipeline.spec();
    for (const auto& match : decode(spec.arch, spec.dims, oam_label)) {
        if (match.sender != sender_port) continue;
        int receivers_per_group = spec.dims.d_r > 0 ? spec.dims.d_r : 1;
        result.designated_port = spec.dims.groups > 1
                                     ? match.group * receivers_per_group + match.receiver
                                     : match.receiver;
        break;
    }
    if (result.designated_port >= 0) {
        result.designated_probability = result.port_probs[static_cast<size_t>(result.designated_port)];
        // Polarization fidelity conditioned on arrival at the designated port.
        int path_value = pipeline.path_of_port(result.designated_port);
        int path_index = pipeline.layout().factor_index({FactorKind::path, 0});
        int pol_index = pipeline.layout().factor_index({FactorKind::pol, 0});
        int path_stride = pipeline.layout().stride(path_index);
        int path_dim = pipeline.layout().factor(path_index).dim;
        int pol_stride = pipeline.layout().stride(pol_index);
        Complex rho[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
        const CVec& amps = out.amplitudes();
        for (size_t idx = 0; idx < amps.size(); ++idx) {
            if ((static_cast<int>(idx) / path_stride) % path_dim != path_value) continue;
            int p = (static_cast<int>(idx) / pol_stride) % 2;
            if (p != 0) continue;
            size_t partner = idx + static_cast<size_t>(pol_stride);
            rho[0][0] += amps[idx] * std::conj(amps[idx]);
            rho[0][1] += amps[idx] * std::conj(amps[partner]);
            rho[1][0] += amps[partner] * std::conj(amps[idx]);
            rho[1][1] += amps[partner] * std::conj(amps[partner]);
        }
        if (result.designated_probability > 1e-15) {
            Complex f = std::conj(payload.h) * (rho[0][0] * payload.h + rho[0][1] * payload.v) +
                        std::conj(payload.v) * (rho[1][0] * payload.h + rho[1][1] * payload.v);
            result.payload_fidelity = f.real() / result.designated_probability;
        }
    }
    return result;
}

// Runs the planner's label for every (sender, group, receiver) combination
// through the fabric and reports the arrival probability at the designated
// port. Fully-connected self-pairs (ℓ = 0 loopback) are skipped unless
// `include_self` is set. Entanglement architectures are verified through
// their two-photon state instead (see below).
inline std::vector<PairResult> verify_all_pairs(const NetworkSpec& spec, bool include_self = false);

namespace detail {

inline std::vector<PairResult> verify_entanglement(const NetworkSpec& spec) {
    Pipeline pipeline = build(spec);
    int d = pipeline.oam_dim();
    std::vector<PairResult> results;
    const double inv_sqrt2 = std::sqrt(0.5);

    if (spec.arch == Architecture::ent_active) {
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                if (a == b) continue;
                State in = State::superposition(pipeline.layout(),
                                                {
                                                    {{0, a, 0, 0, b, 0}, Complex(inv_sqrt2, 0.0)},
                                                    {{1, a, 0, 1, b, 0}, Complex(inv_sqrt2, 0.0)},
                                                });
                State out = pipeline.run(in);
                auto joint = out.measure_joint({{FactorKind::path, 0}, {FactorKind::path, 1}});
                results.push_back({a, 0, b, 0, joint[static_cast<size_t>(a * d + b)]});
            }
        }
        return results;
    }

    // Passive scheme: the OAM of each photon must match its exit port
    // (signal l = port, idler l = port ⊖ 1) for every coincidence (i, j).
    State in = State::superposition(pipeline.layout(),
                                    {
                                        {{0, 0, 0, 0, 0, 0}, Complex(inv_sqrt2, 0.0)},
                                        {{1, 0, 0, 1, 0, 0}, Complex(inv_sqrt2, 0.0)},
                                    });
    State out = pipeline.run(in);
    auto joint = out.measure_joint({{FactorKind::path, 0},
                                    {FactorKind::path, 1},
                                    {FactorKind::oam, 0},
                                    {FactorKind::oam, 1}});
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            double path_mass = 0.0;
            double correct = 0.0;
            for (int li = 0; li < d; ++li) {
                for (int lj = 0; lj < d; ++lj) {
                    double p = joint[static_cast<size_t>(((i * d + j) * d + li) * d + lj)];
                    path_mass += p;
                    if (li == i && lj == (j - 1 + d) % d) correct += p;
                }
            }
            results.push_back({i, 0, j, 0, path_mass > 0.0 ? correct / path_mass : 0.0});
        }
    }
    return results;
}

}  // namespace detail

inline std::vector<PairResult> verify_all_pairs(const NetworkSpec& spec, bool include_self) {
    if (spec.arch == Architecture::ent_active || spec.arch == Architecture::ent_passive) {
        return detail::verify_entanglement(spec);
    }
    Pipeline pipeline = build(spec);
    AssignmentTable table = make_assignment_table(spec.arch, spec.dims);
    std::vector<PairResult> results;
    for (const auto& entry : table.entries) {
        if (spec.arch == Architecture::fully_connected && !include_self &&
            entry.sender == entry.receiver) {
            continue;
        }
        if (spec.arch == Architecture::p2mp_multigroup_variant) {
            // Shared labels route to the smallest matching group; skip the
            // assignments the hardware cannot serve.
            auto matches = decode(spec.arch, spec.dims, entry.label);
            bool served = false;
            for (const auto& m : matches) {
                if (m.sender != entry.sender) continue;
                served = (m.group == entry.group && m.receiver == entry.receiver);
                break;
            }
            if (!served) continue;
        }
        TransmissionResult t = transmit(pipeline, entry.sender, entry.label, Payload{});
        int expected_port = spec.dims.groups > 1 ? entry.group * spec.dims.d_r + entry.receiver
                                                 : entry.receiver;
        results.push_back({entry.sender, entry.group, entry.receiver, entry.label,
                           expected_port < pipeline.user_port_count()
                               ? t.port_probs[static_cast<size_t>(expected_port)]
                               : 0.0});
    }
    return results;
}

// Correct-routing probability statistics as a function of the sorter error
// magnitude. For each magnitude, `samples` error draws (uniform per arm in
// [-m, m], one independent vector per sorter instance) are evaluated over
// all sender/receiver pairs; the curve reports the mean and the minimum over
// pairs of the per-pair average probability. Draw directions are shared
// across magnitudes (common random numbers), so the curve is monotone where
// the underlying physics is.
inline std::vector<SweepPoint> noise_sweep(const NetworkSpec& spec,
                                           const std::vector<double>& magnitudes, int samples,
                                           uint64_t seed) {
    if (magnitudes.empty()) {
        throw std::invalid_argument("noise_sweep: empty magnitude grid");
    }
    if (samples < 1) {
        throw std::invalid_argument("noise_sweep: need at least one sample");
    }
    if (spec.arch == Architecture::ent_active || spec.arch == Architecture::ent_passive) {
        throw std::invalid_argument("noise_sweep: defined for prepare-and-measure architectures");
    }

    NetworkSpec ideal = spec;
    ideal.noise = {};
    Pipeline probe = build(ideal);
    const std::vector<int>& slots = probe.noise_slot_arms();

    // Unit draws in [-1, 1], shared across magnitudes.
    Rng rng(derive_seed(seed, {0x5eedu}));
    std::vector<std::vector<PhaseErrors>> directions(static_cast<size_t>(samples));
    for (auto& per_sample : directions) {
        for (int arms : slots) {
            PhaseErrors e(static_cast<size_t>(arms));
            for (auto& v : e) v = rng.uniform(-1.0, 1.0);
            per_sample.push_back(std::move(e));
        }
    }

    auto evaluate = [&](double magnitude) {
        SweepPoint point{magnitude, 0.0, 1.0, samples};
        std::vector<double> pair_sum;
        for (int i = 0; i < samples; ++i) {
            NetworkSpec noisy = spec;
            noisy.noise = {};
            noisy.noise.stage_errors = directions[static_cast<size_t>(i)];
            for (auto& stage : noisy.noise.stage_errors) {
                for (auto& v : stage) v *= magnitude;
            }
            std::vector<PairResult> pairs = verify_all_pairs(noisy);
            if (pair_sum.empty()) pair_sum.assign(pairs.size(), 0.0);
            for (size_t p = 0; p < pairs.size(); ++p) pair_sum[p] += pairs[p].probability;
        }
        double total = 0.0;
        double worst = 1.0;
        for (double s : pair_sum) {
            double mean = s / samples;
            total += mean;
            worst = std::min(worst, mean);
        }
        point.mean_prob = pair_sum.empty() ? 0.0 : total / static_cast<double>(pair_sum.size());
        point.min_prob = worst;
        return point;
    };

    // Grid points are independent; fan out and merge by index.
    std::vector<std::future<SweepPoint>> futures;
    futures.reserve(magnitudes.size());
    for (double m : magnitudes) {
        futures.push_back(std::async(std::launch::async, evaluate, m));
    }
    std::vector<SweepPoint> curve;
    curve.reserve(magnitudes.size());
    for (auto& f : futures) curve.push_back(f.get());
    return curve;
}

inline std::string sweep_to_csv(const std::vector<SweepPoint>& curve) {
    std::ostringstream out;
    out << "# schema: oamnet.sweep v1\n";
    out << "magnitude,mean_prob,min_prob,samples\n";
    char line[128];
    for (const auto& p : curve) {
        std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%d\n", p.magnitude, p.mean_prob,
                      p.min_prob, p.samples);
        out << line;
    }
    return out.str();
}

}  // namespace oamnet

#endif
