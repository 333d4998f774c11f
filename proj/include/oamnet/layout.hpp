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

#ifndef OAMNET_LAYOUT_HPP
#define OAMNET_LAYOUT_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace oamnet {

// Degrees of freedom a photon can carry in this simulator.
enum class FactorKind { oam, path, pol, local_path };

inline const char* factor_name(FactorKind k) {
    switch (k) {
        case FactorKind::oam: return "oam";
        case FactorKind::path: return "path";
        case FactorKind::pol: return "pol";
        case FactorKind::local_path: return "local-path";
    }
    return "?";
}

struct Factor {
    FactorKind kind;
    int dim;
};

// Names one factor of a (possibly two-photon) composite space.
struct FactorRef {
    FactorKind kind;
    int photon = 0;
};

// Tensor-product structure of one or two photons. Flat amplitude indices
// use mixed-radix encoding over the factor list, most significant factor
// first (photon 0 factors before photon 1 factors). This ordering is
// frozen; all address/index conversions below rely on it.
class Layout {
  public:
    explicit Layout(std::vector<Factor> photon0) : photons_(1) {
        photons_[0] = std::move(photon0);
        init();
    }

    Layout(std::vector<Factor> photon0, std::vector<Factor> photon1) : photons_(2) {
        photons_[0] = std::move(photon0);
        photons_[1] = std::move(photon1);
        init();
    }

    int photon_count() const { return static_cast<int>(photons_.size()); }
    int factor_count() const { return static_cast<int>(flat_.size()); }
    const Factor& factor(int i) const { return flat_[static_cast<size_t>(i)]; }
    int dim() const { return total_dim_; }

    // Flattened position of a factor; throws if the label does not exist.
    int factor_index(FactorRef ref) const {
        if (ref.photon < 0 || ref.photon >= photon_count()) {
            throw std::invalid_argument("layout: no photon " + std::to_string(ref.photon));
        }
        int base = 0;
        for (int p = 0; p < ref.photon; ++p) {
            base += static_cast<int>(photons_[static_cast<size_t>(p)].size());
        }
        const auto& fs = photons_[static_cast<size_t>(ref.photon)];
        for (size_t i = 0; i < fs.size(); ++i) {
            if (fs[i].kind == ref.kind) {
                return base + static_cast<int>(i);
            }
        }
        throw std::invalid_argument(std::string("layout: photon ") + std::to_string(ref.photon) +
                                    " has no '" + factor_name(ref.kind) + "' factor");
    }

    int dim_of(FactorRef ref) const { return flat_[static_cast<size_t>(factor_index(ref))].dim; }

    // Amplitude stride of factor i in the flat vector.
    int stride(int i) const { return strides_[static_cast<size_t>(i)]; }

    // Mixed-radix encoding of a per-factor index list.
    int flat_index(const std::vector<int>& address) const {
        if (address.size() != flat_.size()) {
            throw std::invalid_argument("address: expected " + std::to_string(flat_.size()) +
                                        " indices, got " + std::to_string(address.size()));
        }
        int idx = 0;
        for (size_t i = 0; i < flat_.size(); ++i) {
            if (address[i] < 0 || address[i] >= flat_[i].dim) {
                throw std::out_of_range("address: index " + std::to_string(address[i]) +
                                        " out of range for factor " + std::to_string(i) +
                                        " (dim " + std::to_string(flat_[i].dim) + ")");
            }
            idx += address[i] * strides_[i];
        }
        return idx;
    }

    std::vector<int> address_of(int flat) const {
        std::vector<int> address(flat_.size());
        for (size_t i = 0; i < flat_.size(); ++i) {
            address[i] = (flat / strides_[i]) % flat_[i].dim;
        }
        return address;
    }

    bool operator==(const Layout& other) const {
        if (photons_.size() != other.photons_.size()) return false;
        for (size_t p = 0; p < photons_.size(); ++p) {
            if (photons_[p].size() != other.photons_[p].size()) return false;
            for (size_t i = 0; i < photons_[p].size(); ++i) {
                if (photons_[p][i].kind != other.photons_[p][i].kind ||
                    photons_[p][i].dim != other.photons_[p][i].dim) {
                    return false;
                }
            }
        }
        return true;
    }
    bool operator!=(const Layout& other) const { return !(*this == other); }

  private:
    void init() {
        for (const auto& fs : photons_) {
            for (size_t i = 0; i < fs.size(); ++i) {
                if (fs[i].dim < 1) {
                    throw std::invalid_argument("layout: factor dimension must be >= 1");
                }
                for (size_t j = i + 1; j < fs.size(); ++j) {
                    if (fs[i].kind == fs[j].kind) {
                        throw std::invalid_argument(std::string("layout: duplicate '") +
                                                    factor_name(fs[i].kind) +
                                                    "' factor within one photon");
                    }
                }
                flat_.push_back(fs[i]);
            }
        }
        if (flat_.empty()) {
            throw std::invalid_argument("layout: no factors");
        }
        strides_.assign(flat_.size(), 1);
        for (int i = static_cast<int>(flat_.size()) - 2; i >= 0; --i) {
            strides_[static_cast<size_t>(i)] =
                strides_[static_cast<size_t>(i) + 1] * flat_[static_cast<size_t>(i) + 1].dim;
        }
        total_dim_ = strides_[0] * flat_[0].dim;
    }

    std::vector<std::vector<Factor>> photons_;
    std::vector<Factor> flat_;
    std::vector<int> strides_;
    int total_dim_ = 0;
};

}  // namespace oamnet

#endif
