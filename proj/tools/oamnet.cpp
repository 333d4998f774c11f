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
// Command-line frontend. Subcommands:
//   plan      OAM assignment table (text grid + CSV) and resource plan
//   simulate  all-pairs routing verification
//   sweep     correct-routing probability vs sorter phase-error magnitude
//   protocol  BB84 / BBM92 / entanglement-distribution runs
//
// Exit codes: 0 success, 1 simulation assertion failure, 2 config error.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "oamnet/config.hpp"
#include "oamnet/protocols.hpp"

namespace fs = std::filesystem;
using namespace oamnet;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    uint64_t seed = 0;
    bool seed_given = false;
    bool force = false;
    bool include_self = false;
};

void write_output(const fs::path& path, const std::string& content, bool force) {
    if (fs::exists(path) && !force) {
        throw ConfigError("refusing to overwrite '" + path.string() + "' (pass --force)");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write '" + path.string() + "'");
    }
    out << content;
}

uint64_t effective_seed(const RunConfig& config, const Options& opts) {
    return opts.seed_given ? opts.seed : config.seed;
}

int run_plan(const RunConfig& config, const Options& opts) {
    AssignmentTable table = make_assignment_table(config.spec.arch, config.spec.dims);
    std::printf("OAM assignment — %s\n", architecture_name(config.spec.arch));
    std::fputs(render_grid(table).c_str(), stdout);
    std::printf("bandwidth: %d OAM values (signed range via l ↦ l - l_max - 1 fold)\n",
                table.bandwidth);
    std::printf("resources: %s\n",
                render_resource_plan(resource_plan(config.spec.arch, config.spec.dims)).c_str());

    fs::path csv = fs::path(opts.out_dir) / "assignment.csv";
    write_output(csv, to_csv(table, /*include_signed=*/true), opts.force);
    std::printf("wrote %s\n", csv.string().c_str());
    return 0;
}

int run_simulate(const RunConfig& config, const Options& opts) {
    std::vector<PairResult> pairs = verify_all_pairs(config.spec, opts.include_self);
    bool grouped = config.spec.dims.groups > 1;
    double min_prob = 1.0;
    for (const auto& p : pairs) {
        if (grouped) {
            std::printf("%d -> g%d:%d  label %d  probability %.12g\n", p.sender, p.group, p.receiver,
                        p.label, p.probability);
        } else {
            std::printf("%d -> %d  label %d  probability %.12g\n", p.sender, p.receiver, p.label,
                        p.probability);
        }
        min_prob = std::min(min_prob, p.probability);
    }
    std::printf("pairs: %zu, min probability: %.12g\n", pairs.size(), min_prob);

    if (config.spec.noise.enabled()) {
        std::printf("warning: noisy sorters configured; routing is probabilistic by design\n");
        return 0;
    }
    if (min_prob < 1.0 - 1e-9) {
        std::fprintf(stderr, "simulation assertion failed: ideal fabric must route with "
                             "probability 1\n");
        return 1;
    }
    return 0;
}

int run_sweep(const RunConfig& config, const Options& opts) {
    if (!config.sweep) {
        throw ConfigError("sweep: config has no 'sweep' section");
    }
    uint64_t seed = effective_seed(config, opts);
    std::vector<SweepPoint> curve =
        noise_sweep(config.spec, config.sweep->magnitudes, config.sweep->samples, seed);
    for (const auto& p : curve) {
        std::printf("magnitude %.12g  mean %.12g  min %.12g\n", p.magnitude, p.mean_prob, p.min_prob);
    }
    fs::path csv = fs::path(opts.out_dir) / "sweep.csv";
    write_output(csv, sweep_to_csv(curve), opts.force);
    std::printf("wrote %s (seed %" PRIu64 ")\n", csv.string().c_str(), seed);
    return 0;
}

std::string bbm92_to_csv(const Bbm92Report& report) {
    std::ostringstream out;
    out << "# schema: oamnet.bbm92 v1\n";
    out << "round,alice_basis,bob_basis,alice_bit,bob_bit,sifted\n";
    for (size_t i = 0; i < report.alice_bases.size(); ++i) {
        out << i << "," << int(report.alice_bases[i]) << "," << int(report.bob_bases[i]) << ","
            << int(report.alice_bits[i]) << "," << int(report.bob_bits[i]) << ","
            << int(report.sift_mask[i]) << "\n";
    }
    return out.str();
}

int run_protocol(const RunConfig& config, const Options& opts) {
    if (!config.protocol) {
        throw ConfigError("protocol: config has no 'protocol' section");
    }
    const ProtocolConfig& proto = *config.protocol;
    uint64_t seed = effective_seed(config, opts);
    Architecture arch = config.spec.arch;
    bool entangled = arch == Architecture::ent_active || arch == Architecture::ent_passive;

    switch (proto.kind) {
        case ProtocolKind::bb84: {
            if (entangled) {
                throw ConfigError("protocol: bb84 needs a prepare-and-measure architecture");
            }
            Bb84Config bb;
            bb.spec = config.spec;
            bb.sender = proto.sender;
            bb.group = proto.group;
            bb.receiver = proto.receiver;
            bb.bits = proto.bits;
            bb.bit_seed = derive_seed(seed, {0xb175});
            bb.basis_seed = derive_seed(seed, {0xba5e5});
            KeyReport report = bb84_run(bb);
            std::printf("bb84: label %d, QBER %.12g, sift fraction %.12g, efficiency %.12g, "
                        "sifted bits %zu\n",
                        report.oam_label, report.qber, report.sift_fraction,
                        report.detection_efficiency, report.sifted_sender.size());
            fs::path csv = fs::path(opts.out_dir) / "bb84_bits.csv";
            write_output(csv, key_report_to_csv(report), opts.force);
            std::printf("wrote %s\n", csv.string().c_str());
            return 0;
        }
        case ProtocolKind::bbm92: {
            if (arch != Architecture::ent_active) {
                throw ConfigError("protocol: bbm92 needs the ent-active architecture");
            }
            ActiveDistribution dist = active_distribute(config.spec, proto.pair_a, proto.pair_b);
            Bbm92Report report = bbm92_run(dist.state, proto.rounds, derive_seed(seed, {0xbb92}));
            std::printf("bbm92: pair (%d,%d), QBER %.12g, sift fraction %.12g, sifted bits %zu\n",
                        proto.pair_a, proto.pair_b, report.qber, report.sift_fraction,
                        report.sifted_alice.size());
            fs::path csv = fs::path(opts.out_dir) / "bbm92_rounds.csv";
            write_output(csv, bbm92_to_csv(report), opts.force);
            std::printf("wrote %s\n", csv.string().c_str());
            return 0;
        }
        case ProtocolKind::active_ent: {
            if (arch != Architecture::ent_active) {
                throw ConfigError("protocol: active-ent needs the ent-active architecture");
            }
            ActiveDistribution dist = active_distribute(config.spec, proto.pair_a, proto.pair_b);
            std::printf("active-ent: Bell fidelity %.12g, ports (%d,%d), probability %.12g\n",
                        dist.bell_fidelity, proto.pair_a, proto.pair_b, dist.port_probability);
            return 0;
        }
        case ProtocolKind::passive_ent: {
            if (arch != Architecture::ent_passive) {
                throw ConfigError("protocol: passive-ent needs the ent-passive architecture");
            }
            State state = passive_distribute_state(config.spec.dims.d);
            CoincidenceResult c = coincidences(state, proto.samples, derive_seed(seed, {0xc01c}));
            std::printf("passive-ent: d %d, coincidence outcomes %d, distinct-pair fraction %.12g "
                        "(exact), discarded same-port fraction %.12g (sampled)\n",
                        c.d, c.d * c.d, c.distinct_fraction_exact, c.same_port_fraction);
            for (const auto& [pair, count] : c.pair_counts) {
                std::printf("  pair (%d,%d): %d events\n", pair.first, pair.second, count);
            }
            fs::path csv = fs::path(opts.out_dir) / "coincidences.csv";
            write_output(csv, coincidences_to_csv(c), opts.force);
            std::printf("wrote %s\n", csv.string().c_str());
            return 0;
        }
    }
    throw ConfigError("protocol: unknown protocol kind");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OAM-routed quantum communication network planner and simulator"};
    app.require_subcommand(1);

    Options opts;
    auto add_common = [&opts](CLI::App* cmd, bool with_out) {
        cmd->add_option("--config", opts.config_path, "run configuration (JSON, comments allowed)")
            ->required();
        if (with_out) {
            cmd->add_option("--out", opts.out_dir, "output directory for CSV artifacts");
            cmd->add_flag("--force", opts.force, "overwrite existing output files");
        }
        cmd->add_option("--seed", opts.seed, "override the config seed (default 1)")
            ->each([&opts](const std::string&) { opts.seed_given = true; });
    };

    CLI::App* plan = app.add_subcommand("plan", "print the OAM assignment table and resource plan");
    add_common(plan, true);
    CLI::App* simulate = app.add_subcommand("simulate", "verify all-pairs routing");
    add_common(simulate, false);
    simulate->add_flag("--include-self", opts.include_self,
                       "also verify fully-connected self-pairs (ℓ = 0 loopback)");
    CLI::App* sweep = app.add_subcommand("sweep", "routing probability vs phase-error magnitude");
    add_common(sweep, true);
    CLI::App* protocol = app.add_subcommand("protocol", "run a QKD / distribution protocol");
    add_common(protocol, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunConfig config = load_config(opts.config_path);
        if (plan->parsed()) return run_plan(config, opts);
        if (simulate->parsed()) return run_simulate(config, opts);
        if (sweep->parsed()) return run_sweep(config, opts);
        if (protocol->parsed()) return run_protocol(config, opts);
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::out_of_range& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "simulation failure: %s\n", e.what());
        return 1;
    }
}
