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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "oamnet/fabric.hpp"
#include "testing.hpp"

using namespace oamnet;

namespace {

void expect_all_ones(const std::vector<PairResult>& pairs, const char* what) {
    ASSERT_FALSE(pairs.empty()) << what;
    for (const auto& p : pairs) {
        EXPECT_NEAR(p.probability, 1.0, 1e-9)
            << what << ": sender " << p.sender << " group " << p.group << " receiver " << p.receiver;
    }
}

Payload random_payload(Rng& rng) {
    Complex h = testkit::gaussian(rng);
    Complex v = testkit::gaussian(rng);
    double n = std::sqrt(std::norm(h) + std::norm(v));
    return {h / n, v / n};
}

}  // namespace

TEST(Build, PointToPointRoutesPairThroughSharedChannel) {
    // Bob (port 1, OAM 1) reaches Diana on port 1 with the payload intact.
    Pipeline p = build({Architecture::point_to_point, {.d = 2}});
    Payload psi{Complex(0.6, 0.0), Complex(0.0, 0.8)};
    TransmissionResult t = transmit(p, 1, 1, psi);
    EXPECT_EQ(t.designated_port, 1);
    EXPECT_NEAR(t.designated_probability, 1.0, 1e-12);
    EXPECT_NEAR(t.payload_fidelity, 1.0, 1e-12);

    // After the MUX alone the photon travels the common channel on path 0;
    // the full pipeline restores it to path 1.
    auto probs = t.final_state.measure_factor({FactorKind::path, 0});
    EXPECT_NEAR(probs[1], 1.0, 1e-12);
}

TEST(Build, CoprimeUsesCrtLabels) {
    Pipeline p = build({Architecture::p2mp_coprime, {.d_s = 2, .d_r = 3}});
    // Sender 0 with OAM 4 reaches receiver 1 (4 ≡ 0 mod 2, 4 ≡ 1 mod 3).
    TransmissionResult t = transmit(p, 0, 4, Payload{});
    EXPECT_EQ(t.designated_port, 1);
    EXPECT_NEAR(t.port_probs[1], 1.0, 1e-12);
}

TEST(Build, GeneralNetworkFollowsGroupDemux) {
    // |s + r·d_s⟩_oam on path s exits on path r.
    Pipeline p = build({Architecture::p2mp_general, {.d_s = 2, .d_r = 4}});
    for (int s = 0; s < 2; ++s) {
        for (int r = 0; r < 4; ++r) {
            TransmissionResult t = transmit(p, s, oam_group(s, r, 2), Payload{});
            EXPECT_NEAR(t.port_probs[static_cast<size_t>(r)], 1.0, 1e-12);
        }
    }
}

TEST(Build, ZeroLabelFromPortZeroStaysOnPortZero) {
    for (NetworkSpec spec : std::vector<NetworkSpec>{
             {Architecture::point_to_point, {.d = 3}},
             {Architecture::p2mp_coprime, {.d_s = 2, .d_r = 3}},
             {Architecture::p2mp_general, {.d_s = 3, .d_r = 2}},
             {Architecture::p2mp_multigroup, {.d_s = 2, .d_r = 2, .groups = 2}},
             {Architecture::p2mp_multigroup_variant, {.d_s = 2, .d_r = 2, .groups = 2}},
             {Architecture::fully_connected, {.d = 5}},
         }) {
        Pipeline p = build(spec);
        TransmissionResult t = transmit(p, 0, 0, Payload{});
        EXPECT_NEAR(t.port_probs[0], 1.0, 1e-12) << architecture_name(spec.arch);
    }
}

TEST(Build, FullyConnectedTableRouting) {
    Pipeline p = build({Architecture::fully_connected, {.d = 4}});
    // Sender B (port 1) with OAM 1 reaches receiver C (port 2).
    TransmissionResult t = transmit(p, 1, 1, Payload{});
    EXPECT_EQ(t.designated_port, 2);
    EXPECT_NEAR(t.port_probs[2], 1.0, 1e-12);
}

TEST(Build, RejectsInvalidSpecs) {
    EXPECT_THROW(build({Architecture::p2mp_coprime, {.d_s = 4, .d_r = 6}}), std::domain_error);
    EXPECT_THROW(build({Architecture::point_to_point, {.d = 1}}), std::invalid_argument);
    EXPECT_THROW(build({Architecture::p2mp_multigroup, {.d_s = 2, .d_r = 2, .groups = 3}}),
                 std::invalid_argument);
    EXPECT_THROW(build({Architecture::p2mp_multigroup, {.d_s = 2, .d_r = 2, .groups = 2, .band = 5}}),
                 std::invalid_argument);
}

TEST(Build, NonCoprimeDimensionsShareLabelsByPigeonhole) {
    // Wiring a plain MUX/DEMUX pair with gcd > 1 anyway: distinct pairs end
    // up sharing a label, so the assignment cannot be injective.
    const int d_s = 2, d_r = 4;
    std::set<std::pair<int, int>> reachable;
    std::map<std::pair<int, int>, int> label_of_pair;
    int collisions = 0;
    for (int l = 0; l < d_s * d_r; ++l) {
        // The congruence pair the hardware implements.
        std::pair<int, int> pair{l % d_s, l % d_r};
        if (label_of_pair.count(pair)) ++collisions;
        label_of_pair[pair] = l;
        reachable.insert(pair);
    }
    EXPECT_LT(static_cast<int>(reachable.size()), d_s * d_r);
    EXPECT_GT(collisions, 0);
}

TEST(VerifyAllPairs, AllArchitecturesRouteEveryPair) {
    expect_all_ones(verify_all_pairs({Architecture::point_to_point, {.d = 4}}), "p2p d=4");
    expect_all_ones(verify_all_pairs({Architecture::p2mp_coprime, {.d_s = 3, .d_r = 4}}),
                    "coprime (3,4)");
    for (int d_s = 1; d_s <= 4; ++d_s) {
        for (int d_r = 1; d_r <= 4; ++d_r) {
            if (d_s * d_r < 2) continue;
            expect_all_ones(verify_all_pairs({Architecture::p2mp_general, {.d_s = d_s, .d_r = d_r}}),
                            "general");
        }
    }
    expect_all_ones(verify_all_pairs({Architecture::p2mp_multigroup, {.d_s = 2, .d_r = 2, .groups = 2}}),
                    "multigroup Fig. 3D dims");
    expect_all_ones(verify_all_pairs({Architecture::p2mp_multigroup, {.d_s = 3, .d_r = 2, .groups = 3}}),
                    "multigroup (3,2,g3)");
    expect_all_ones(verify_all_pairs({Architecture::p2mp_multigroup, {.d_s = 4, .d_r = 3, .groups = 2}}),
                    "multigroup (4,3,g2)");
    expect_all_ones(verify_all_pairs({Architecture::fully_connected, {.d = 4}}), "fully n=4");
    expect_all_ones(verify_all_pairs({Architecture::fully_connected, {.d = 4}}, true),
                    "fully n=4 with self-pairs");
    // 16 entries when self-pairs are included, 12 otherwise.
    EXPECT_EQ(verify_all_pairs({Architecture::fully_connected, {.d = 4}}, true).size(), 16u);
    EXPECT_EQ(verify_all_pairs({Architecture::fully_connected, {.d = 4}}).size(), 12u);
}

TEST(VerifyAllPairs, MultigroupVariantServesUnambiguousAssignments) {
    // With d_r <= d_s every assignment is unambiguous.
    expect_all_ones(
        verify_all_pairs({Architecture::p2mp_multigroup_variant, {.d_s = 3, .d_r = 2, .groups = 2}}),
        "variant (3,2,g2)");
    expect_all_ones(
        verify_all_pairs({Architecture::p2mp_multigroup_variant, {.d_s = 4, .d_r = 3, .groups = 2}}),
        "variant (4,3,g2)");
    expect_all_ones(
        verify_all_pairs({Architecture::p2mp_multigroup_variant, {.d_s = 2, .d_r = 2, .groups = 2}}),
        "variant (2,2,g2)");

    // d_s < d_r: labels can collide across groups; the served subset still
    // routes perfectly and the reference examples are among it.
    NetworkSpec spec{Architecture::p2mp_multigroup_variant, {.d_s = 2, .d_r = 3, .groups = 2}};
    auto pairs = verify_all_pairs(spec);
    for (const auto& p : pairs) EXPECT_NEAR(p.probability, 1.0, 1e-9);
    Pipeline pipe = build(spec);
    // Sender 1, group 0, receiver 1 via label 4.
    TransmissionResult a = transmit(pipe, 1, 4, Payload{});
    EXPECT_EQ(a.designated_port, 1);
    EXPECT_NEAR(a.port_probs[1], 1.0, 1e-12);
    // Sender 0, group 1, receiver 0 via label 4 (port 3 = group 1, receiver 0).
    TransmissionResult b = transmit(pipe, 0, 4, Payload{});
    EXPECT_EQ(b.designated_port, 3);
    EXPECT_NEAR(b.port_probs[3], 1.0, 1e-12);
}

TEST(VerifyAllPairs, EntanglementArchitectures) {
    expect_all_ones(verify_all_pairs({Architecture::ent_active, {.d = 3}}), "ent-active d=3");
    expect_all_ones(verify_all_pairs({Architecture::ent_passive, {.d = 3}}), "ent-passive d=3");
}

TEST(Pipeline, ReversedPipelineRestoresInput) {
    Rng rng(2026);
    for (NetworkSpec spec : std::vector<NetworkSpec>{
             {Architecture::point_to_point, {.d = 3}},
             {Architecture::p2mp_coprime, {.d_s = 2, .d_r = 3}},
             {Architecture::p2mp_general, {.d_s = 2, .d_r = 3}},
             {Architecture::fully_connected, {.d = 5}},
         }) {
        Pipeline p = build(spec);
        State in = testkit::random_state(p.layout(), rng);
        State round_trip = p.reversed().run(p.run(in));
        EXPECT_GT(fidelity(in, round_trip), 1.0 - 1e-12) << architecture_name(spec.arch);
        EXPECT_NEAR(p.run(in).norm_sq(), 1.0, 1e-12);
    }
}

TEST(Pipeline, ReversedNetworkRoutesReceiversToSenders) {
    // Receivers become senders: feeding the label on the receiver port of the
    // adjoint pipeline returns the photon to the original sender port.
    NetworkSpec spec{Architecture::p2mp_general, {.d_s = 2, .d_r = 3}};
    Pipeline forward = build(spec);
    Pipeline backward = forward.reversed();
    for (int s = 0; s < 2; ++s) {
        for (int r = 0; r < 3; ++r) {
            int label = oam_group(s, r, 2);
            State in = State::superposition(forward.layout(), {
                                                                  {{0, label, r}, Complex(1.0, 0.0)},
                                                              });
            State out = backward.run(in);
            auto probs = out.measure_factor({FactorKind::path, 0});
            EXPECT_NEAR(probs[static_cast<size_t>(s)], 1.0, 1e-12);
        }
    }
}

TEST(Pipeline, PayloadTransparency) {
    Rng rng(77);
    std::vector<NetworkSpec> specs{
        {Architecture::point_to_point, {.d = 4}},
        {Architecture::p2mp_coprime, {.d_s = 3, .d_r = 4}},
        {Architecture::p2mp_general, {.d_s = 2, .d_r = 3}},
        {Architecture::p2mp_multigroup, {.d_s = 2, .d_r = 2, .groups = 2}},
        {Architecture::fully_connected, {.d = 6}},
    };
    int trials = 0;
    for (const auto& spec : specs) {
        Pipeline p = build(spec);
        AssignmentTable table = make_assignment_table(spec.arch, spec.dims);
        for (int i = 0; i < 20; ++i, ++trials) {
            const AssignmentEntry& e = table.entries[rng.uniform_int(table.entries.size())];
            TransmissionResult t = transmit(p, e.sender, e.label, random_payload(rng));
            EXPECT_NEAR(t.payload_fidelity, 1.0, 1e-10) << architecture_name(spec.arch);
        }
    }
    EXPECT_EQ(trials, 100);
}

TEST(Noise, ExplicitErrorVectorLowersRoutingProbability) {
    const double eps = 2.0 * std::numbers::pi / 15.0;
    NetworkSpec spec{Architecture::fully_connected, {.d = 3}};
    spec.noise.stage_errors = {{0.0, 0.0, eps}};
    auto pairs = verify_all_pairs(spec);
    double expected = (5.0 + 4.0 * std::cos(eps)) / 9.0;
    for (const auto& p : pairs) {
        EXPECT_NEAR(p.probability, expected, 1e-12);
        EXPECT_GT(p.probability, 0.96);
    }
}

TEST(Noise, RandomNoisePreservesNormOnEveryArchitecture) {
    Rng rng(31337);
    for (NetworkSpec spec : std::vector<NetworkSpec>{
             {Architecture::point_to_point, {.d = 3}},
             {Architecture::p2mp_coprime, {.d_s = 2, .d_r = 3}},
             {Architecture::p2mp_general, {.d_s = 2, .d_r = 3}},
             {Architecture::p2mp_multigroup, {.d_s = 2, .d_r = 2, .groups = 2}},
             {Architecture::p2mp_multigroup_variant, {.d_s = 3, .d_r = 2, .groups = 2}},
             {Architecture::fully_connected, {.d = 4}},
             {Architecture::ent_active, {.d = 3}},
             {Architecture::ent_passive, {.d = 3}},
         }) {
        spec.noise.random = true;
        spec.noise.magnitude = 0.3;
        spec.noise.seed = 99;
        Pipeline p = build(spec);
        State in = testkit::random_state(p.layout(), rng);
        State out = p.run(in);
        EXPECT_NEAR(out.norm_sq(), 1.0, 1e-12) << architecture_name(spec.arch);
        // Same seed rebuilds the same noisy fabric.
        State out2 = build(spec).run(in);
        EXPECT_GT(fidelity(out, out2), 1.0 - 1e-12) << architecture_name(spec.arch);
    }
}

TEST(Noise, WrongErrorVectorCountOrLengthIsRejected) {
    NetworkSpec spec{Architecture::point_to_point, {.d = 3}};
    spec.noise.stage_errors = {{0.0, 0.0, 0.0}};  // pipeline has two sorters
    EXPECT_THROW(build(spec), std::invalid_argument);
    spec.noise.stage_errors = {{0.0, 0.0}, {0.0, 0.0}};  // wrong arm count
    EXPECT_THROW(build(spec), std::invalid_argument);
}

TEST(NoiseSweep, ZeroMagnitudeIsExactlyPerfect) {
    NetworkSpec spec{Architecture::fully_connected, {.d = 3}};
    auto curve = noise_sweep(spec, {0.0}, 8, 42);
    ASSERT_EQ(curve.size(), 1u);
    EXPECT_EQ(curve[0].mean_prob, 1.0);
    EXPECT_EQ(curve[0].min_prob, 1.0);
}

TEST(NoiseSweep, MeanIsMonotoneNonIncreasing) {
    NetworkSpec spec{Architecture::fully_connected, {.d = 3}};
    std::vector<double> grid;
    for (int i = 0; i <= 8; ++i) grid.push_back(i * std::numbers::pi / 32.0);
    auto curve = noise_sweep(spec, grid, 64, 7);
    for (size_t i = 1; i < curve.size(); ++i) {
        EXPECT_LE(curve[i].mean_prob, curve[i - 1].mean_prob + 1e-12);
    }
}

TEST(NoiseSweep, DeterministicUnderFixedSeed) {
    NetworkSpec spec{Architecture::point_to_point, {.d = 3}};
    auto a = noise_sweep(spec, {0.1, 0.2}, 16, 5);
    auto b = noise_sweep(spec, {0.1, 0.2}, 16, 5);
    EXPECT_EQ(sweep_to_csv(a), sweep_to_csv(b));
    EXPECT_THROW(noise_sweep(spec, {}, 16, 5), std::invalid_argument);
}

TEST(NoiseSweep, CitedMagnitudeStaysAboveCitedProbability) {
    NetworkSpec spec{Architecture::fully_connected, {.d = 3}};
    auto curve = noise_sweep(spec, {2.0 * std::numbers::pi / 15.0}, 400, 11);
    ASSERT_EQ(curve.size(), 1u);
    EXPECT_GE(curve[0].min_prob, 0.96);
}

TEST(Transmit, RejectsBadPortsAndLabels) {
    Pipeline p = build({Architecture::point_to_point, {.d = 3}});
    EXPECT_THROW(transmit(p, 3, 0, Payload{}), std::out_of_range);
    EXPECT_THROW(transmit(p, -1, 0, Payload{}), std::out_of_range);
    EXPECT_THROW(transmit(p, 0, 3, Payload{}), std::out_of_range);
    EXPECT_THROW(transmit(p, 0, 0, Payload{{0.9, 0.0}, {0.0, 0.0}}), std::invalid_argument);
}

TEST(Transmit, ResultDistributionIsNormalized) {
    Pipeline p = build({Architecture::p2mp_general, {.d_s = 2, .d_r = 3}});
    TransmissionResult t = transmit(p, 1, 3, Payload{});
    double total = t.unrouted;
    for (double v : t.port_probs) total += v;
    EXPECT_NEAR(total, 1.0, 1e-12);
}
