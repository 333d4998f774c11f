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
// Quantum communication protocols running over built networks: BB84 in
// polarization, active and passive entanglement distribution, coincidence
// post-selection and BBM92 key extraction from distributed pairs.

#ifndef OAMNET_PROTOCOLS_HPP
#define OAMNET_PROTOCOLS_HPP

#include <array>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oamnet/fabric.hpp"

namespace oamnet {

inline Element polarization_hadamard() {
    const double s = std::sqrt(0.5);
    return Element({Complex(s, 0), Complex(s, 0), Complex(s, 0), Complex(-s, 0)},
                   {{FactorKind::pol, 2}}, "H");
}

// ---------------------------------------------------------------------------
// BB84

struct Bb84Config {
    NetworkSpec spec;
    int sender = 0;
    int group = 0;
    int receiver = 0;
    int bits = 1;
    uint64_t bit_seed = 1;
    uint64_t basis_seed = 2;
};

struct KeyReport {
    int oam_label = 0;
    std::vector<uint8_t> sender_bits;
    std::vector<uint8_t> sender_bases;  // 0 = H/V, 1 = diagonal
    std::vector<uint8_t> receiver_bases;
    std::vector<uint8_t> receiver_bits;  // valid where detected
    std::vector<uint8_t> detected;
    std::vector<uint8_t> sift_mask;  // detected and bases agree
    std::vector<uint8_t> sifted_sender;
    std::vector<uint8_t> sifted_receiver;
    double qber = 0.0;
    double sift_fraction = 0.0;
    double detection_efficiency = 1.0;
};

// Prepare-and-measure BB84 in polarization. The sender encodes each bit in
// the basis chosen by its seeded stream and ships it with the planner's OAM
// label for (sender, receiver); the receiver picks a basis through a 50/50
// beamsplitter and measures behind a polarizing beamsplitter. On a noisy
// fabric, misrouted photons never reach the receiver's detectors and the
// round is dropped (detection efficiency < 1).
inline KeyReport bb84_run(const Bb84Config& config) {
    if (config.bits < 1) {
        throw std::invalid_argument("bb84: need at least one bit");
    }
    if (config.spec.arch == Architecture::ent_active ||
        config.spec.arch == Architecture::ent_passive) {
        throw std::invalid_argument("bb84: prepare-and-measure needs a routing architecture");
    }
    Pipeline pipeline = build(config.spec);
    AssignmentTable table = make_assignment_table(config.spec.arch, config.spec.dims);
    const AssignmentEntry* entry = table.find(config.sender, config.group, config.receiver);
    if (entry == nullptr) {
        throw std::invalid_argument("bb84: pair (" + std::to_string(config.sender) + ", " +
                                    std::to_string(config.receiver) + ") not in this architecture");
    }

    // The four BB84 states; rounds sharing a payload see the same transport.
    const double s = std::sqrt(0.5);
    const std::array<Payload, 4> payloads{
        Payload{{1.0, 0.0}, {0.0, 0.0}},  // |H⟩          bit 0, basis 0
        Payload{{0.0, 0.0}, {1.0, 0.0}},  // |V⟩          bit 1, basis 0
        Payload{{s, 0.0}, {s, 0.0}},      // |+⟩          bit 0, basis 1
        Payload{{s, 0.0}, {-s, 0.0}},     // |−⟩          bit 1, basis 1
    };

    int port = -1;
    std::array<std::vector<double>, 4> path_cdf;
    // P(receiver measures 1 | detected), per payload and receiver basis.
    double p_one[4][2];
    for (int i = 0; i < 4; ++i) {
        TransmissionResult t = transmit(pipeline, config.sender, entry->label, payloads[static_cast<size_t>(i)]);
        port = t.designated_port;
        auto probs = t.final_state.measure_factor({FactorKind::path, 0});
        double cum = 0.0;
        for (double p : probs) path_cdf[static_cast<size_t>(i)].push_back(cum += p);
        State detected_state = t.final_state.project({FactorKind::path, 0},
                                                     pipeline.path_of_port(port));
        for (int basis = 0; basis < 2; ++basis) {
            State measured = basis == 0 ? detected_state
                                        : detected_state.apply(polarization_hadamard(),
                                                               {{FactorKind::pol, 0}});
            p_one[i][basis] = measured.measure_factor({FactorKind::pol, 0})[1];
        }
    }
    int port_path = pipeline.path_of_port(port);

    Rng bit_rng(config.bit_seed);
    Rng basis_rng(config.basis_seed);
    Rng receiver_rng(derive_seed(config.basis_seed, {0xb0b, config.bit_seed}));

    KeyReport report;
    report.oam_label = entry->label;
    report.sender_bits.reserve(static_cast<size_t>(config.bits));
    int detected_count = 0;
    int sifted = 0;
    int errors = 0;
    for (int i = 0; i < config.bits; ++i) {
        uint8_t bit = bit_rng.coin() ? 1 : 0;
        uint8_t basis = basis_rng.coin() ? 1 : 0;
        uint8_t rbasis = receiver_rng.coin() ? 1 : 0;
        int payload = basis * 2 + bit;

        // Which detector bank fires: sample the arrival path.
        const std::vector<double>& cdf = path_cdf[static_cast<size_t>(payload)];
        double u = receiver_rng.uniform();
        int path = static_cast<int>(cdf.size()) - 1;
        for (size_t k = 0; k < cdf.size(); ++k) {
            if (u < cdf[k]) {
                path = static_cast<int>(k);
                break;
            }
        }
        uint8_t det = path == port_path ? 1 : 0;
        uint8_t rbit = 0;
        if (det) {
            ++detected_count;
            rbit = receiver_rng.uniform() < p_one[payload][rbasis] ? 1 : 0;
        }
        uint8_t sift = det && rbasis == basis;
        if (sift) {
            ++sifted;
            errors += (rbit != bit);
            report.sifted_sender.push_back(bit);
            report.sifted_receiver.push_back(rbit);
        }
        report.sender_bits.push_back(bit);
        report.sender_bases.push_back(basis);
        report.receiver_bases.push_back(rbasis);
        report.receiver_bits.push_back(rbit);
        report.detected.push_back(det);
        report.sift_mask.push_back(sift);
    }
    report.qber = sifted > 0 ? static_cast<double>(errors) / sifted : 0.0;
    report.sift_fraction = detected_count > 0 ? static_cast<double>(sifted) / detected_count : 0.0;
    report.detection_efficiency = static_cast<double>(detected_count) / config.bits;
    return report;
}

// Schema:
//   # schema: oamnet.bb84 v1
//   bit,sender_bit,sender_basis,receiver_basis,detected,receiver_bit,sifted
inline std::string key_report_to_csv(const KeyReport& report) {
    std::ostringstream out;
    out << "# schema: oamnet.bb84 v1\n";
    out << "bit,sender_bit,sender_basis,receiver_basis,detected,receiver_bit,sifted\n";
    for (size_t i = 0; i < report.sender_bits.size(); ++i) {
        out << i << "," << int(report.sender_bits[i]) << "," << int(report.sender_bases[i]) << ","
            << int(report.receiver_bases[i]) << "," << int(report.detected[i]) << ","
            << int(report.receiver_bits[i]) << "," << int(report.sift_mask[i]) << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Entanglement distribution

struct ActiveDistribution {
    State state;              // two-photon state at the output ports
    double port_probability;  // P(photon 1 at a, photon 2 at b)
    double bell_fidelity;     // polarization Bell fidelity at those ports
};

// The provider prepares a polarization Bell pair, stamps the photons with
// the OAM labels of the target nodes and routes both through the
// point-to-multipoint fabric.
inline ActiveDistribution active_distribute(const NetworkSpec& spec, int a, int b) {
    if (spec.arch != Architecture::ent_active) {
        throw std::invalid_argument("active_distribute: spec must be ent-active");
    }
    int d = spec.dims.d;
    if (a < 0 || a >= d || b < 0 || b >= d) {
        throw std::out_of_range("active_distribute: node out of range");
    }
    if (a == b) {
        throw std::invalid_argument("active_distribute: photons would collide on one output port");
    }
    Pipeline pipeline = build(spec);
    const double s = std::sqrt(0.5);
    State in = State::superposition(pipeline.layout(), {
                                                           {{0, a, 0, 0, b, 0}, Complex(s, 0.0)},
                                                           {{1, a, 0, 1, b, 0}, Complex(s, 0.0)},
                                                       });
    State out = pipeline.run(in);
    auto joint = out.measure_joint({{FactorKind::path, 0}, {FactorKind::path, 1}});
    double p = joint[static_cast<size_t>(a * d + b)];

    State expected = State::superposition(pipeline.layout(), {
                                                                 {{0, a, a, 0, b, b}, Complex(s, 0.0)},
                                                                 {{1, a, a, 1, b, b}, Complex(s, 0.0)},
                                                             });
    return {out, p, fidelity(out, expected)};
}

// Closed-form two-photon state of the passive scheme:
// (1/d) Σ_{i,j} |i, j⊖1⟩_oam |i, j⟩_path, carrying a polarization Bell pair.
inline State passive_closed_form(int d) {
    if (d < 2) {
        throw std::invalid_argument("passive_closed_form: need d >= 2");
    }
    Layout layout({{FactorKind::pol, 2}, {FactorKind::oam, d}, {FactorKind::path, d}},
                  {{FactorKind::pol, 2}, {FactorKind::oam, d}, {FactorKind::path, d}});
    std::vector<std::pair<std::vector<int>, Complex>> terms;
    const double amp = 1.0 / (d * std::sqrt(2.0));
    for (int pol = 0; pol < 2; ++pol) {
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                terms.push_back({{pol, i, i, pol, (j - 1 + d) % d, j}, Complex(amp, 0.0)});
            }
        }
    }
    return State::superposition(layout, terms);
}

// Runs the passive source: Fourier gates fan each photon over d arms, arm i
// raises the OAM to i with an i-th order spiral phase plate, the arms merge
// through a multiplexer, and the shared final sorter (signal on port 0,
// idler on port 1) scatters the pair across the users. The simulated state
// is checked against the closed form before being returned.
inline State passive_distribute_state(int d) {
    NetworkSpec spec{Architecture::ent_passive, {.d = d}};
    Pipeline pipeline = build(spec);
    const double s = std::sqrt(0.5);
    State in = State::superposition(pipeline.layout(), {
                                                           {{0, 0, 0, 0, 0, 0}, Complex(s, 0.0)},
                                                           {{1, 0, 0, 1, 0, 0}, Complex(s, 0.0)},
                                                       });
    State out = pipeline.run(in);
    if (fidelity(out, passive_closed_form(d)) < 1.0 - 1e-10) {
        throw std::logic_error("passive_distribute_state: simulation deviates from the closed form");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Coincidences

struct CoincidenceResult {
    int d = 0;
    std::vector<double> histogram;  // exact P(signal path i, idler path j), row-major
    int samples = 0;
    std::vector<std::pair<int, int>> post_selected;        // sampled events with i ≠ j
    std::map<std::pair<int, int>, int> pair_counts;        // events per user pair
    double same_port_fraction = 0.0;                       // sampled i == j fraction (discarded)
    double distinct_fraction_exact = 0.0;                  // Σ_{i≠j} histogram
};

// Detector coincidences across the two photons' output ports. Post-selection
// keeps events where the photons reached two distinct users; those pairs now
// share a polarization Bell state.
inline CoincidenceResult coincidences(const State& two_photon, int samples, uint64_t seed) {
    if (two_photon.layout().photon_count() != 2) {
        throw std::invalid_argument("coincidences: need a two-photon state");
    }
    CoincidenceResult result;
    result.d = two_photon.layout().dim_of({FactorKind::path, 0});
    result.histogram = two_photon.measure_joint({{FactorKind::path, 0}, {FactorKind::path, 1}});
    result.samples = samples;
    for (int i = 0; i < result.d; ++i) {
        for (int j = 0; j < result.d; ++j) {
            if (i != j) result.distinct_fraction_exact += result.histogram[static_cast<size_t>(i * result.d + j)];
        }
    }

    Rng rng(seed);
    std::vector<double> cdf;
    double cum = 0.0;
    for (double p : result.histogram) cdf.push_back(cum += p);
    int same = 0;
    for (int n = 0; n < samples; ++n) {
        double u = rng.uniform();
        int outcome = static_cast<int>(cdf.size()) - 1;
        for (size_t k = 0; k < cdf.size(); ++k) {
            if (u < cdf[k]) {
                outcome = static_cast<int>(k);
                break;
            }
        }
        int i = outcome / result.d;
        int j = outcome % result.d;
        if (i == j) {
            ++same;
            continue;
        }
        result.post_selected.emplace_back(i, j);
        ++result.pair_counts[{i, j}];
    }
    result.same_port_fraction = samples > 0 ? static_cast<double>(same) / samples : 0.0;
    return result;
}

// Schema:
//   # schema: oamnet.coincidences v1
//   signal_path,idler_path,probability
inline std::string coincidences_to_csv(const CoincidenceResult& result) {
    std::ostringstream out;
    out << "# schema: oamnet.coincidences v1\n";
    out << "signal_path,idler_path,probability\n";
    char line[96];
    for (int i = 0; i < result.d; ++i) {
        for (int j = 0; j < result.d; ++j) {
            std::snprintf(line, sizeof line, "%d,%d,%.12g\n", i, j,
                          result.histogram[static_cast<size_t>(i * result.d + j)]);
            out << line;
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// BBM92

struct Bbm92Report {
    std::vector<uint8_t> alice_bases;
    std::vector<uint8_t> bob_bases;
    std::vector<uint8_t> alice_bits;
    std::vector<uint8_t> bob_bits;
    std::vector<uint8_t> sift_mask;
    std::vector<uint8_t> sifted_alice;
    std::vector<uint8_t> sifted_bob;
    double qber = 0.0;
    double sift_fraction = 0.0;
};

// Entanglement-based key extraction from a delivered two-photon state: both
// parties measure polarization in a random basis; rounds with matching bases
// give correlated bits.
inline Bbm92Report bbm92_run(const State& pair_state, int rounds, uint64_t seed) {
    if (rounds < 1) {
        throw std::invalid_argument("bbm92: need at least one round");
    }
    if (pair_state.layout().photon_count() != 2) {
        throw std::invalid_argument("bbm92: need a two-photon state");
    }

    // Exact joint polarization distribution per basis pair; rounds sample it.
    Element h = polarization_hadamard();
    std::array<std::array<std::vector<double>, 2>, 2> joint;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            State rotated = pair_state;
            if (a) rotated = rotated.apply(h, {{FactorKind::pol, 0}});
            if (b) rotated = rotated.apply(h, {{FactorKind::pol, 1}});
            joint[static_cast<size_t>(a)][static_cast<size_t>(b)] =
                rotated.measure_joint({{FactorKind::pol, 0}, {FactorKind::pol, 1}});
        }
    }

    Rng rng(seed);
    Bbm92Report report;
    int sifted = 0;
    int errors = 0;
    for (int n = 0; n < rounds; ++n) {
        uint8_t a = rng.coin() ? 1 : 0;
        uint8_t b = rng.coin() ? 1 : 0;
        const std::vector<double>& dist = joint[a][b];
        double u = rng.uniform();
        int outcome = 3;
        double cum = 0.0;
        for (int k = 0; k < 4; ++k) {
            cum += dist[static_cast<size_t>(k)];
            if (u < cum) {
                outcome = k;
                break;
            }
        }
        uint8_t alice_bit = static_cast<uint8_t>(outcome >> 1);
        uint8_t bob_bit = static_cast<uint8_t>(outcome & 1);
        uint8_t sift = a == b;
        report.alice_bases.push_back(a);
        report.bob_bases.push_back(b);
        report.alice_bits.push_back(alice_bit);
        report.bob_bits.push_back(bob_bit);
        report.sift_mask.push_back(sift);
        if (sift) {
            ++sifted;
            errors += alice_bit != bob_bit;
            report.sifted_alice.push_back(alice_bit);
            report.sifted_bob.push_back(bob_bit);
        }
    }
    report.qber = sifted > 0 ? static_cast<double>(errors) / sifted : 0.0;
    report.sift_fraction = static_cast<double>(sifted) / rounds;
    return report;
}

}  // namespace oamnet

#endif
