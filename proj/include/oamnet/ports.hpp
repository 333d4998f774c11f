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
// Classical port wiring. Circulators and fibers are not unitaries: no
// interference happens across them, they only determine which device port a
// signal reaches next. A PortMap is a set of directed hops that can be
// composed and then traced from an entry point to wherever the signal
// leaves the map.

#ifndef OAMNET_PORTS_HPP
#define OAMNET_PORTS_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace oamnet {

// A signal either enters a device port or leaves from one.
enum class PortSide { in, out };

struct PortPoint {
    std::string device;
    int port = 0;
    PortSide side = PortSide::in;

    bool operator<(const PortPoint& o) const {
        if (device != o.device) return device < o.device;
        if (port != o.port) return port < o.port;
        return side < o.side;
    }
    bool operator==(const PortPoint& o) const {
        return device == o.device && port == o.port && side == o.side;
    }
};

class PortMap {
  public:
    // Adds a directed hop; at most one hop may leave any point.
    void connect(const PortPoint& from, const PortPoint& to) {
        if (hops_.count(from)) {
            throw std::invalid_argument("port map: two signals merge at " + describe(from));
        }
        hops_[from] = to;
    }

    // Union of two maps (fails if they disagree on a source point).
    PortMap compose(const PortMap& other) const {
        PortMap merged = *this;
        for (const auto& [from, to] : other.hops_) {
            merged.connect(from, to);
        }
        return merged;
    }

    // Follows hops from `start` until the signal leaves the map.
    PortPoint trace(PortPoint start) const {
        int guard = static_cast<int>(hops_.size()) + 1;
        auto it = hops_.find(start);
        while (it != hops_.end()) {
            if (--guard < 0) {
                throw std::logic_error("port map: wiring loop detected at " + describe(start));
            }
            start = it->second;
            it = hops_.find(start);
        }
        return start;
    }

    size_t size() const { return hops_.size(); }

    static std::string describe(const PortPoint& p) {
        return p.device + ":" + std::to_string(p.port) + (p.side == PortSide::in ? ":in" : ":out");
    }

  private:
    std::map<PortPoint, PortPoint> hops_;
};

// Three-port circulator: a signal entering port p[0] exits p[1], entering
// p[1] exits p[2], entering p[2] exits p[0].
inline PortMap circulator(const std::string& device, const std::vector<int>& ports = {1, 2, 3}) {
    if (ports.size() != 3 || ports[0] == ports[1] || ports[1] == ports[2] || ports[0] == ports[2]) {
        throw std::invalid_argument("circulator: need three distinct ports");
    }
    PortMap map;
    for (int i = 0; i < 3; ++i) {
        map.connect({device, ports[static_cast<size_t>(i)], PortSide::in},
                    {device, ports[static_cast<size_t>((i + 1) % 3)], PortSide::out});
    }
    return map;
}

// Bidirectional fiber between two device ports.
inline PortMap fiber(const PortPoint& a, const PortPoint& b) {
    PortMap map;
    map.connect({a.device, a.port, PortSide::out}, {b.device, b.port, PortSide::in});
    map.connect({b.device, b.port, PortSide::out}, {a.device, a.port, PortSide::in});
    return map;
}

}  // namespace oamnet

#endif
