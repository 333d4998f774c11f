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
// Classical OAM channel assignment: which OAM value a sender uses to reach
// a receiver, for every network architecture, plus the inverse lookup and
// the per-architecture bill of materials.

#ifndef OAMNET_ASSIGNMENT_HPP
#define OAMNET_ASSIGNMENT_HPP

#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oamnet {

enum class Architecture {
    point_to_point,
    p2mp_coprime,
    p2mp_general,
    p2mp_multigroup,
    p2mp_multigroup_variant,
    fully_connected,
    ent_active,
    ent_passive,
};

inline const char* architecture_name(Architecture a) {
    switch (a) {
        case Architecture::point_to_point: return "point-to-point";
        case Architecture::p2mp_coprime: return "p2mp-coprime";
        case Architecture::p2mp_general: return "p2mp-general";
        case Architecture::p2mp_multigroup: return "p2mp-multigroup";
        case Architecture::p2mp_multigroup_variant: return "p2mp-multigroup-variant";
        case Architecture::fully_connected: return "fully-connected";
        case Architecture::ent_active: return "ent-active";
        case Architecture::ent_passive: return "ent-passive";
    }
    return "?";
}

inline std::optional<Architecture> architecture_from_name(const std::string& name) {
    for (Architecture a :
         {Architecture::point_to_point, Architecture::p2mp_coprime, Architecture::p2mp_general,
          Architecture::p2mp_multigroup, Architecture::p2mp_multigroup_variant,
          Architecture::fully_connected, Architecture::ent_active, Architecture::ent_passive}) {
        if (name == architecture_name(a)) return a;
    }
    return std::nullopt;
}

// Network dimensions. Which fields matter depends on the architecture:
//   point-to-point          d (pair count; the MUX and DEMUX dimension)
//   p2mp-coprime/general    d_s senders, d_r receivers
//   p2mp-multigroup[-variant] d_s senders, d_r receivers per group, groups,
//                           band (0 = default modulus d_s·d_r)
//   fully-connected         d (node count n)
//   ent-active/passive      d (receiver count)
struct Dims {
    int d = 0;
    int d_s = 0;
    int d_r = 0;
    int groups = 1;
    int band = 0;
};

struct BezoutResult {
    long long p = 0;
    long long q = 0;
    long long gcd = 0;
};

// Extended Euclidean algorithm: p·a + q·b = gcd(a, b).
inline BezoutResult bezout(long long a, long long b) {
    if (a < 1 || b < 1) {
        throw std::invalid_argument("bezout: arguments must be positive");
    }
    long long old_r = a, r = b;
    long long old_p = 1, p = 0;
    long long old_q = 0, q = 1;
    while (r != 0) {
        long long quot = old_r / r;
        old_r = std::exchange(r, old_r - quot * r);
        old_p = std::exchange(p, old_p - quot * p);
        old_q = std::exchange(q, old_q - quot * q);
    }
    return {old_p, old_q, old_r};
}

namespace detail {
inline int positive_mod_ll(long long v, int m) {
    long long r = v % m;
    if (r < 0) r += m;
    return static_cast<int>(r);
}
}  // namespace detail

// Unique OAM value for sender s → receiver r when gcd(d_s, d_r) = 1: the
// solution of l ≡ s (mod d_s), l ≡ r (mod d_r) in [0, d_s·d_r), computed as
// s·q·d_r + r·p·d_s from the Bezout identity p·d_s + q·d_r = 1 and reduced
// into the canonical band.
inline int oam_coprime(int s, int r, int d_s, int d_r) {
    if (d_s < 1 || d_r < 1) {
        throw std::invalid_argument("oam_coprime: dimensions must be positive");
    }
    BezoutResult bz = bezout(d_s, d_r);
    if (bz.gcd != 1) {
        throw std::domain_error("oam_coprime: " + std::to_string(d_s) + " and " + std::to_string(d_r) +
                                " are not coprime (gcd " + std::to_string(bz.gcd) +
                                "); use the general architecture");
    }
    if (s < 0 || s >= d_s || r < 0 || r >= d_r) {
        throw std::out_of_range("oam_coprime: sender or receiver out of range");
    }
    long long l = static_cast<long long>(s) * bz.q * d_r + static_cast<long long>(r) * bz.p * d_s;
    return detail::positive_mod_ll(l, d_s * d_r);
}

// General point-to-multipoint: l = s + r·d_s.
inline int oam_group(int s, int r, int d_s) {
    if (s < 0 || s >= d_s) {
        throw std::out_of_range("oam_group: sender out of range");
    }
    if (r < 0) {
        throw std::out_of_range("oam_group: receiver out of range");
    }
    return s + r * d_s;
}

// Multi-group point-to-multipoint: l = (s + r·d_s − g) mod band, where g is
// the multiplexer output port feeding the receiver group.
inline int oam_multigroup(int s, int g, int r, int d_s, int band) {
    if (s < 0 || s >= d_s) {
        throw std::out_of_range("oam_multigroup: sender out of range");
    }
    if (r < 0 || g < 0 || band < 1) {
        throw std::out_of_range("oam_multigroup: bad group/receiver/band");
    }
    return detail::positive_mod_ll(static_cast<long long>(s) + static_cast<long long>(r) * d_s - g,
                                   band);
}

// Variant with the group multiplexer on the sender side:
// l = (r + s·d_r − g·d_s) mod band.
inline int oam_multigroup_variant(int s, int g, int r, int d_r, int d_s, int band) {
    if (r < 0 || r >= d_r) {
        throw std::out_of_range("oam_multigroup_variant: receiver out of range");
    }
    if (s < 0 || g < 0 || band < 1) {
        throw std::out_of_range("oam_multigroup_variant: bad sender/group/band");
    }
    return detail::positive_mod_ll(
        static_cast<long long>(r) + static_cast<long long>(s) * d_r -
            static_cast<long long>(g) * d_s,
        band);
}

// Fully-connected network: sender a reaches receiver b with l = (b − a) mod n.
inline int fully_connected_label(int a, int b, int n) {
    if (n < 2) {
        throw std::invalid_argument("fully_connected_label: n must be >= 2");
    }
    if (a < 0 || a >= n || b < 0 || b >= n) {
        throw std::out_of_range("fully_connected_label: node out of range");
    }
    return detail::positive_mod_ll(static_cast<long long>(b) - a, n);
}

// Physical signed OAM for a logical label in [0, l_max]: values in the upper
// half fold to negative charges (l ↦ l − l_max − 1), minimizing |OAM|. This
// halves the largest charge a protocol needs.
inline int signed_label(int l, int l_max) {
    if (l < 0 || l > l_max) {
        throw std::out_of_range("signed_label: label out of range");
    }
    return 2 * l <= l_max ? l : l - l_max - 1;
}

// ---------------------------------------------------------------------------

struct AssignmentEntry {
    int sender = 0;
    int group = 0;
    int receiver = 0;
    int label = 0;
};

struct AssignmentTable {
    Architecture arch;
    Dims dims;
    int bandwidth = 0;  // labels live in [0, bandwidth)
    std::vector<AssignmentEntry> entries;

    const AssignmentEntry* find(int sender, int group, int receiver) const {
        for (const auto& e : entries) {
            if (e.sender == sender && e.group == group && e.receiver == receiver) return &e;
        }
        return nullptr;
    }
};

inline int default_band(const Dims& dims) { return dims.band > 0 ? dims.band : dims.d_s * dims.d_r; }

inline AssignmentTable make_assignment_table(Architecture arch, const Dims& dims) {
    AssignmentTable table{arch, dims, 0, {}};
    switch (arch) {
        case Architecture::point_to_point: {
            if (dims.d < 1) throw std::invalid_argument("point-to-point: need d >= 1");
            table.bandwidth = dims.d;
            for (int i = 0; i < dims.d; ++i) table.entries.push_back({i, 0, i, i});
            break;
        }
        case Architecture::p2mp_coprime: {
            if (dims.d_s < 1 || dims.d_r < 1) throw std::invalid_argument("p2mp-coprime: need d_s, d_r");
            if (std::gcd(dims.d_s, dims.d_r) != 1) {
                throw std::domain_error("p2mp-coprime: dimensions " + std::to_string(dims.d_s) + ", " +
                                        std::to_string(dims.d_r) + " are not coprime");
            }
            table.bandwidth = dims.d_s * dims.d_r;
            for (int s = 0; s < dims.d_s; ++s) {
                for (int r = 0; r < dims.d_r; ++r) {
                    table.entries.push_back({s, 0, r, oam_coprime(s, r, dims.d_s, dims.d_r)});
                }
            }
            break;
        }
        case Architecture::p2mp_general: {
            if (dims.d_s < 1 || dims.d_r < 1) throw std::invalid_argument("p2mp-general: need d_s, d_r");
            table.bandwidth = dims.d_s * dims.d_r;
            for (int s = 0; s < dims.d_s; ++s) {
                for (int r = 0; r < dims.d_r; ++r) {
                    table.entries.push_back({s, 0, r, oam_group(s, r, dims.d_s)});
                }
            }
            break;
        }
        case Architecture::p2mp_multigroup: {
            if (dims.d_s < 1 || dims.d_r < 1 || dims.groups < 1) {
                throw std::invalid_argument("p2mp-multigroup: need d_s, d_r, groups");
            }
            table.bandwidth = default_band(dims);
            for (int s = 0; s < dims.d_s; ++s) {
                for (int g = 0; g < dims.groups; ++g) {
                    for (int r = 0; r < dims.d_r; ++r) {
                        table.entries.push_back(
                            {s, g, r, oam_multigroup(s, g, r, dims.d_s, table.bandwidth)});
                    }
                }
            }
            break;
        }
        case Architecture::p2mp_multigroup_variant: {
            if (dims.d_s < 1 || dims.d_r < 1 || dims.groups < 1) {
                throw std::invalid_argument("p2mp-multigroup-variant: need d_s, d_r, groups");
            }
            table.bandwidth = default_band(dims);
            for (int s = 0; s < dims.d_s; ++s) {
                for (int g = 0; g < dims.groups; ++g) {
                    for (int r = 0; r < dims.d_r; ++r) {
                        table.entries.push_back(
                            {s, g, r,
                             oam_multigroup_variant(s, g, r, dims.d_r, dims.d_s, table.bandwidth)});
                    }
                }
            }
            break;
        }
        case Architecture::fully_connected: {
            if (dims.d < 2) throw std::invalid_argument("fully-connected: need n >= 2");
            table.bandwidth = dims.d;
            for (int a = 0; a < dims.d; ++a) {
                for (int b = 0; b < dims.d; ++b) {
                    table.entries.push_back({a, 0, b, fully_connected_label(a, b, dims.d)});
                }
            }
            break;
        }
        case Architecture::ent_active:
        case Architecture::ent_passive: {
            if (dims.d < 2) throw std::invalid_argument("entanglement network: need d >= 2");
            // Receiver r is reached with label r (single provider port).
            table.bandwidth = dims.d;
            for (int r = 0; r < dims.d; ++r) table.entries.push_back({0, 0, r, r});
            break;
        }
    }
    return table;
}

// Inverse lookup: which (sender, group, receiver) combinations produce
// `label`. Injective architectures give a single match; the multi-group
// schemes can give several. For fully-connected networks the arrival port
// identifies the receiver and hence the sender.
inline std::vector<AssignmentEntry> decode(Architecture arch, const Dims& dims, int label,
                                           int arrival_port = -1) {
    AssignmentTable table = make_assignment_table(arch, dims);
    if (label < 0 || label >= table.bandwidth) {
        throw std::out_of_range("decode: label " + std::to_string(label) + " outside bandwidth " +
                                std::to_string(table.bandwidth));
    }
    std::vector<AssignmentEntry> matches;
    for (const auto& e : table.entries) {
        if (e.label != label) continue;
        if (arch == Architecture::fully_connected && arrival_port >= 0 && e.receiver != arrival_port) {
            continue;
        }
        matches.push_back(e);
    }
    return matches;
}

// ---------------------------------------------------------------------------

struct ResourceItem {
    int count = 0;
    std::string component;
};

// Bill of materials per architecture (sorters U_d and spiral phase plates).
inline std::vector<ResourceItem> resource_plan(Architecture arch, const Dims& dims) {
    auto sorter = [](int d) { return "U_" + std::to_string(d); };
    switch (arch) {
        case Architecture::point_to_point:
        case Architecture::p2mp_coprime: {
            int d_s = dims.d_s > 0 ? dims.d_s : dims.d;
            int d_r = dims.d_r > 0 ? dims.d_r : dims.d;
            if (d_s < 1 || d_r < 1) throw std::invalid_argument("resource_plan: missing dims");
            return {{1, sorter(d_s)}, {1, sorter(d_r)}};
        }
        case Architecture::p2mp_general: {
            if (dims.d_s < 1 || dims.d_r < 1) throw std::invalid_argument("resource_plan: missing dims");
            int d = dims.d_s * dims.d_r;
            return {{1, sorter(d)}, {d / 2 + 1, sorter(2)}};
        }
        case Architecture::p2mp_multigroup:
        case Architecture::p2mp_multigroup_variant: {
            if (dims.d_s < 1 || dims.d_r < 1) throw std::invalid_argument("resource_plan: missing dims");
            return {{1, sorter(dims.d_s)}, {dims.d_s, sorter(dims.d_r)}};
        }
        case Architecture::fully_connected: {
            if (dims.d < 2) throw std::invalid_argument("resource_plan: missing n");
            return {{1, sorter(dims.d)}};
        }
        case Architecture::ent_active: {
            if (dims.d < 2) throw std::invalid_argument("resource_plan: missing d");
            return {{1, sorter(dims.d)}, {dims.d / 2 + 1, sorter(2)}};
        }
        case Architecture::ent_passive: {
            if (dims.d < 2) throw std::invalid_argument("resource_plan: missing d");
            return {{3, sorter(dims.d)}, {2 * dims.d, "SPP(i)"}};
        }
    }
    throw std::invalid_argument("resource_plan: unknown architecture");
}

inline std::string render_resource_plan(const std::vector<ResourceItem>& items) {
    std::ostringstream out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out << "; ";
        out << items[i].count << "x " << items[i].component;
    }
    return out.str();
}

// ---------------------------------------------------------------------------

// CSV serialization. Schema (first line is the version comment):
//   # schema: oamnet.assignment v1
//   sender,group,receiver,oam_label[,signed_oam]
inline std::string to_csv(const AssignmentTable& table, bool include_signed = false) {
    std::ostringstream out;
    out << "# schema: oamnet.assignment v1\n";
    out << "sender,group,receiver,oam_label";
    if (include_signed) out << ",signed_oam";
    out << "\n";
    for (const auto& e : table.entries) {
        out << e.sender << "," << e.group << "," << e.receiver << "," << e.label;
        if (include_signed) out << "," << signed_label(e.label, table.bandwidth - 1);
        out << "\n";
    }
    return out.str();
}

// Human-readable sender × receiver grid in the same layout as the reference
// charts: one row per sender, one column per receiver (columns expand to
// group:receiver when there are several groups). Fully-connected networks
// label nodes A, B, C, ... like the n = 4 chart.
inline std::string render_grid(const AssignmentTable& table) {
    bool letters = table.arch == Architecture::fully_connected && table.dims.d <= 26;
    auto node_name = [letters](int i) {
        return letters ? std::string(1, static_cast<char>('A' + i)) : std::to_string(i);
    };

    std::vector<int> senders;
    std::vector<std::pair<int, int>> columns;  // (group, receiver)
    for (const auto& e : table.entries) {
        bool have_s = false;
        for (int s : senders) have_s |= (s == e.sender);
        if (!have_s) senders.push_back(e.sender);
        bool have_c = false;
        for (auto& c : columns) have_c |= (c.first == e.group && c.second == e.receiver);
        if (!have_c) columns.emplace_back(e.group, e.receiver);
    }

    bool grouped = table.dims.groups > 1;
    std::ostringstream out;
    out << "sender\\receiver";
    for (const auto& [g, r] : columns) {
        out << "\t";
        if (grouped) out << "g" << g << ":";
        out << node_name(r);
    }
    out << "\n";
    for (int s : senders) {
        out << node_name(s);
        for (const auto& [g, r] : columns) {
            const AssignmentEntry* e = table.find(s, g, r);
            out << "\t" << (e ? std::to_string(e->label) : "-");
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace oamnet

#endif
