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

#include "oamnet/protocols.hpp"
#include "testing.hpp"

using namespace oamnet;

TEST(Bb84, IdealPointToPointHasZeroQber) {
    Bb84Config config;
    config.spec = {Architecture::point_to_point, {.d = 2}};
    config.sender = 1;
    config.receiver = 1;
    config.bits = 2000;
    KeyReport report = bb84_run(config);
    EXPECT_EQ(report.qber, 0.0);
    EXPECT_EQ(report.detection_efficiency, 1.0);
    EXPECT_EQ(report.sifted_sender, report.sifted_receiver);
    // Sift fraction is binomial around 1/2; stay within 4 standard deviations.
    double sigma = 0.5 / std::sqrt(2000.0);
    EXPECT_NEAR(report.sift_fraction, 0.5, 4 * sigma);
}

TEST(Bb84, UsesThePlannersLabelForEveryPhoton) {
    Bb84Config config;
    config.spec = {Architecture::p2mp_general, {.d_s = 2, .d_r = 3}};
    config.sender = 0;
    config.receiver = 1;
    config.bits = 8;
    EXPECT_EQ(bb84_run(config).oam_label, 2);

    config.spec = {Architecture::p2mp_coprime, {.d_s = 2, .d_r = 3}};
    config.sender = 1;
    config.receiver = 2;
    EXPECT_EQ(bb84_run(config).oam_label, oam_coprime(1, 2, 2, 3));
}

TEST(Bb84, ZeroQberAcrossAllIdealArchitecturesAndPairs) {
    std::vector<NetworkSpec> specs{
        {Architecture::point_to_point, {.d = 3}},
        {Architecture::p2mp_coprime, {.d_s = 3, .d_r = 4}},
        {Architecture::p2mp_general, {.d_s = 2, .d_r = 4}},
        {Architecture::p2mp_multigroup, {.d_s = 2, .d_r = 2, .groups = 2}},
        {Architecture::fully_connected, {.d = 4}},
    };
    for (const auto& spec : specs) {
        AssignmentTable table = make_assignment_table(spec.arch, spec.dims);
        for (const auto& entry : table.entries) {
            if (spec.arch == Architecture::fully_connected && entry.sender == entry.receiver) continue;
            Bb84Config config;
            config.spec = spec;
            config.sender = entry.sender;
            config.group = entry.group;
            config.receiver = entry.receiver;
            config.bits = 300;
            config.bit_seed = derive_seed(9, {static_cast<uint64_t>(entry.label)});
            config.basis_seed = derive_seed(10, {static_cast<uint64_t>(entry.label)});
            KeyReport report = bb84_run(config);
            EXPECT_EQ(report.qber, 0.0) << architecture_name(spec.arch);
            EXPECT_EQ(report.sifted_sender, report.sifted_receiver);
            EXPECT_EQ(report.detection_efficiency, 1.0);
        }
    }
}

TEST(Bb84, NoisySorterDropsMisroutedPhotonsWithoutErrors) {
    const double eps = 2.0 * std::numbers::pi / 15.0;
    Bb84Config config;
    config.spec = {Architecture::fully_connected, {.d = 3}};
    config.spec.noise.stage_errors = {{0.0, 0.0, eps}};
    config.sender = 0;
    config.receiver = 1;
    config.bits = 4000;
    KeyReport report = bb84_run(config);
    // Sorting probability for this error vector is (5 + 4cos(2π/15))/9.
    double expected = (5.0 + 4.0 * std::cos(eps)) / 9.0;
    EXPECT_NEAR(report.detection_efficiency, expected, 0.02);
    EXPECT_LT(report.detection_efficiency, 1.0);
    // Polarization rides untouched, so surviving sifted bits still agree.
    EXPECT_EQ(report.qber, 0.0);
}

TEST(Bb84, DeterministicAndValidatesConfig) {
    Bb84Config config;
    config.spec = {Architecture::point_to_point, {.d = 2}};
    config.sender = 0;
    config.receiver = 0;
    config.bits = 64;
    EXPECT_EQ(key_report_to_csv(bb84_run(config)), key_report_to_csv(bb84_run(config)));

    Bb84Config bad = config;
    bad.bits = 0;
    EXPECT_THROW(bb84_run(bad), std::invalid_argument);
    bad = config;
    bad.receiver = 1;  // point-to-point pairs are (i, i)
    EXPECT_THROW(bb84_run(bad), std::invalid_argument);
    bad = config;
    bad.spec.arch = Architecture::ent_passive;
    bad.spec.dims = {.d = 2};
    EXPECT_THROW(bb84_run(bad), std::invalid_argument);
}

TEST(ActiveDistribution, DeliversBellPairToRequestedPorts) {
    NetworkSpec spec{Architecture::ent_active, {.d = 3}};
    ActiveDistribution dist = active_distribute(spec, 0, 2);
    EXPECT_NEAR(dist.port_probability, 1.0, 1e-12);
    EXPECT_NEAR(dist.bell_fidelity, 1.0, 1e-12);

    // Each photon's polarization alone is maximally mixed.
    auto p0 = dist.state.measure_factor({FactorKind::pol, 0});
    auto p1 = dist.state.measure_factor({FactorKind::pol, 1});
    EXPECT_NEAR(p0[0], 0.5, 1e-12);
    EXPECT_NEAR(p0[1], 0.5, 1e-12);
    EXPECT_NEAR(p1[0], 0.5, 1e-12);
    EXPECT_NEAR(p1[1], 0.5, 1e-12);

    EXPECT_THROW(active_distribute(spec, 1, 1), std::invalid_argument);
    EXPECT_THROW(active_distribute(spec, 0, 3), std::out_of_range);
}

TEST(ActiveDistribution, Bbm92OnDeliveredPairGivesCorrelatedKeys) {
    NetworkSpec spec{Architecture::ent_active, {.d = 3}};
    ActiveDistribution dist = active_distribute(spec, 1, 2);
    Bbm92Report report = bbm92_run(dist.state, 1000, 77);
    EXPECT_EQ(report.qber, 0.0);
    EXPECT_EQ(report.sifted_alice, report.sifted_bob);
    EXPECT_GT(report.sifted_alice.size(), 0u);
    double sigma = 0.5 / std::sqrt(1000.0);
    EXPECT_NEAR(report.sift_fraction, 0.5, 4 * sigma);
}

TEST(PassiveDistribution, MatchesClosedFormAndUniformMarginals) {
    for (int d = 2; d <= 4; ++d) {
        State state = passive_distribute_state(d);
        EXPECT_GT(fidelity(state, passive_closed_form(d)), 1.0 - 1e-10) << "d = " << d;
        auto joint = state.measure_joint({{FactorKind::path, 0}, {FactorKind::path, 1}});
        for (double p : joint) {
            EXPECT_NEAR(p, 1.0 / (d * d), 1e-12);
        }
    }
}

TEST(PassiveDistribution, OamTracksExitPorts) {
    // Signal path i carries OAM i; idler path j carries OAM j ⊖ 1.
    const int d = 3;
    State state = passive_distribute_state(d);
    auto joint = state.measure_joint({{FactorKind::path, 0},
                                      {FactorKind::oam, 0},
                                      {FactorKind::path, 1},
                                      {FactorKind::oam, 1}});
    for (int i = 0; i < d; ++i) {
        for (int li = 0; li < d; ++li) {
            for (int j = 0; j < d; ++j) {
                for (int lj = 0; lj < d; ++lj) {
                    double p = joint[static_cast<size_t>(((i * d + li) * d + j) * d + lj)];
                    bool allowed = (li == i) && (lj == (j - 1 + d) % d);
                    if (!allowed) {
                        EXPECT_NEAR(p, 0.0, 1e-12);
                    }
                }
            }
        }
    }
}

TEST(PassiveDistribution, SppArmsOnlyEverSeeOamZero) {
    // In-protocol the spiral phase plates always act on |0⟩_oam, so the mod-d
    // wrap of the simulated plates is never exercised.
    const int d = 4;
    Layout layout({{FactorKind::pol, 2}, {FactorKind::oam, d}, {FactorKind::path, d}});
    State s = State::basis(layout, {0, 0, 0}).apply(fourier_gate(d), {{FactorKind::path, 0}});
    auto oam_marginal = s.measure_factor({FactorKind::oam, 0});
    EXPECT_NEAR(oam_marginal[0], 1.0, 1e-12);
}

TEST(Coincidences, UniformHistogramAndPostSelection) {
    State d2 = passive_distribute_state(2);
    CoincidenceResult c = coincidences(d2, 4000, 5);
    for (double p : c.histogram) EXPECT_NEAR(p, 0.25, 1e-12);
    EXPECT_NEAR(c.distinct_fraction_exact, 0.5, 1e-12);
    EXPECT_NEAR(c.same_port_fraction, 0.5, 0.05);
    for (const auto& [pair, count] : c.pair_counts) {
        EXPECT_NE(pair.first, pair.second);
        EXPECT_GT(count, 0);
    }

    State d3 = passive_distribute_state(3);
    CoincidenceResult c3 = coincidences(d3, 100, 5);
    for (double p : c3.histogram) EXPECT_NEAR(p, 1.0 / 9.0, 1e-12);
}

TEST(Coincidences, SeededSamplingIsReproducible) {
    State state = passive_distribute_state(3);
    CoincidenceResult a = coincidences(state, 500, 123);
    CoincidenceResult b = coincidences(state, 500, 123);
    EXPECT_EQ(a.post_selected, b.post_selected);
    EXPECT_EQ(a.same_port_fraction, b.same_port_fraction);
    EXPECT_EQ(coincidences_to_csv(a), coincidences_to_csv(b));

    Layout single({{FactorKind::path, 2}});
    EXPECT_THROW(coincidences(State::basis(single, {0}), 10, 1), std::invalid_argument);
}

TEST(Bbm92, PassivePostSelectedPairsShareWorkingKey) {
    State state = passive_distribute_state(2);
    // Condition on the coincidence (signal at 0, idler at 1).
    State delivered = state.project({FactorKind::path, 0}, 0).project({FactorKind::path, 1}, 1);
    Bbm92Report report = bbm92_run(delivered, 500, 99);
    EXPECT_EQ(report.qber, 0.0);
    EXPECT_EQ(report.sifted_alice, report.sifted_bob);
}
