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
// Optical building blocks. Every element is a dense unitary over a declared
// footprint of factors, e.g. the sorter acts on (oam, path). Elements are
// immutable after construction and validated against U†U = I.

#ifndef OAMNET_ELEMENTS_HPP
#define OAMNET_ELEMENTS_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oamnet/layout.hpp"

namespace oamnet {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

// Per-arm phase errors of an interferometric sorter, one entry per internal
// path. The zero vector is the ideal device.
using PhaseErrors = std::vector<double>;

// Acceptable deviation from unitarity when constructing an element.
inline constexpr double kUnitarityTolerance = 1e-8;

// Dense unitary acting on the tensor product of the factors named in its
// footprint (row/column index is mixed-radix over the footprint dims, first
// footprint entry most significant).
class Element {
    struct Trusted {};  // tag: matrix already known unitary, skip the O(n³) check

  public:
    Element(CVec matrix, std::vector<Factor> footprint, std::string name = "")
        : Element(std::move(matrix), std::move(footprint), std::move(name), false) {}

    Element(CVec matrix, std::vector<Factor> footprint, std::string name, Trusted)
        : Element(std::move(matrix), std::move(footprint), std::move(name), true) {}

    int dim() const { return dim_; }
    const std::vector<Factor>& footprint() const { return footprint_; }
    const std::string& name() const { return name_; }
    const CVec& matrix() const { return m_; }

    Complex at(int row, int col) const { return m_[static_cast<size_t>(row) * dim_ + col]; }

    // Max-entry deviation of U†U from the identity.
    double unitarity_defect() const {
        double worst = 0.0;
        for (int i = 0; i < dim_; ++i) {
            for (int j = 0; j < dim_; ++j) {
                Complex s = 0.0;
                for (int k = 0; k < dim_; ++k) {
                    s += std::conj(at(k, i)) * at(k, j);
                }
                if (i == j) s -= 1.0;
                worst = std::max(worst, std::abs(s));
            }
        }
        return worst;
    }

    Element adjoint() const {
        CVec out(m_.size());
        for (int r = 0; r < dim_; ++r) {
            for (int c = 0; c < dim_; ++c) {
                out[static_cast<size_t>(r) * dim_ + c] = std::conj(at(c, r));
            }
        }
        return Element(std::move(out), footprint_, name_.empty() ? "" : name_ + "†", Trusted{});
    }

    // Composition: (*this) applied after `first`.
    Element after(const Element& first, std::string name = "") const {
        if (first.dim_ != dim_) {
            throw std::invalid_argument("element composition: dimension mismatch");
        }
        CVec out(m_.size(), Complex{0.0, 0.0});
        for (int r = 0; r < dim_; ++r) {
            for (int k = 0; k < dim_; ++k) {
                Complex a = at(r, k);
                if (a == Complex{0.0, 0.0}) continue;
                for (int c = 0; c < dim_; ++c) {
                    out[static_cast<size_t>(r) * dim_ + c] += a * first.at(k, c);
                }
            }
        }
        return Element(std::move(out), footprint_, std::move(name), Trusted{});
    }

    static Element identity(std::vector<Factor> footprint, std::string name = "identity") {
        int d = 1;
        for (const auto& f : footprint) d *= f.dim;
        CVec m(static_cast<size_t>(d) * d, Complex{0.0, 0.0});
        for (int i = 0; i < d; ++i) m[static_cast<size_t>(i) * d + i] = 1.0;
        return Element(std::move(m), std::move(footprint), std::move(name), Trusted{});
    }

    // Builds a permutation element from a basis map; the map must be a
    // bijection on [0, dim).
    static Element permutation(std::vector<Factor> footprint, const std::function<int(int)>& target,
                               std::string name) {
        int d = 1;
        for (const auto& f : footprint) d *= f.dim;
        CVec m(static_cast<size_t>(d) * d, Complex{0.0, 0.0});
        std::vector<char> hit(static_cast<size_t>(d), 0);
        for (int c = 0; c < d; ++c) {
            int r = target(c);
            if (r < 0 || r >= d || hit[static_cast<size_t>(r)]) {
                throw std::invalid_argument("element '" + name + "': basis map is not a bijection");
            }
            hit[static_cast<size_t>(r)] = 1;
            m[static_cast<size_t>(r) * d + c] = 1.0;
        }
        return Element(std::move(m), std::move(footprint), std::move(name), Trusted{});
    }

  private:
    Element(CVec matrix, std::vector<Factor> footprint, std::string name, bool trusted)
        : m_(std::move(matrix)), footprint_(std::move(footprint)), name_(std::move(name)) {
        dim_ = 1;
        for (const auto& f : footprint_) dim_ *= f.dim;
        if (static_cast<int>(m_.size()) != static_cast<int>(static_cast<size_t>(dim_) * dim_)) {
            throw std::invalid_argument("element '" + name_ + "': matrix size " +
                                        std::to_string(m_.size()) + " does not match footprint dim " +
                                        std::to_string(dim_));
        }
        if (!trusted) {
            double defect = unitarity_defect();
            if (defect > kUnitarityTolerance) {
                throw std::invalid_argument("element '" + name_ +
                                            "': matrix is not unitary (max |U†U - I| = " +
                                            std::to_string(defect) + ")");
            }
        }
    }

    CVec m_;
    std::vector<Factor> footprint_;
    std::string name_;
    int dim_;
};

namespace detail {
inline int positive_mod(long long v, int m) {
    long long r = v % m;
    if (r < 0) r += m;
    return static_cast<int>(r);
}
}  // namespace detail

// Sorter U_d (DEMUX): |l⟩|k⟩ → |l⟩|k ⊕ l mod d⟩. The path register has d
// ports; the OAM register may be wider than d (oam_dim >= d), in which case
// the shift wraps cyclically, e.g. OAM d behaves like OAM 0.
inline Element sorter_unitary(int d, int oam_dim = 0) {
    if (d < 2) {
        throw std::invalid_argument("sorter_unitary: d must be >= 2");
    }
    if (oam_dim == 0) oam_dim = d;
    if (oam_dim < d) {
        throw std::invalid_argument("sorter_unitary: oam_dim must be >= d");
    }
    std::vector<Factor> fp{{FactorKind::oam, oam_dim}, {FactorKind::path, d}};
    return Element::permutation(
        fp, [d](int c) { return (c / d) * d + (c % d + c / d) % d; }, "U_" + std::to_string(d));
}

// MUX U_d†: |l⟩|k⟩ → |l⟩|k ⊖ l mod d⟩.
inline Element mux_unitary(int d, int oam_dim = 0) {
    if (d < 2) {
        throw std::invalid_argument("mux_unitary: d must be >= 2");
    }
    if (oam_dim == 0) oam_dim = d;
    if (oam_dim < d) {
        throw std::invalid_argument("mux_unitary: oam_dim must be >= d");
    }
    std::vector<Factor> fp{{FactorKind::oam, oam_dim}, {FactorKind::path, d}};
    return Element::permutation(
        fp, [d](int c) { return (c / d) * d + detail::positive_mod(c % d - c / d, d); },
        "U_" + std::to_string(d) + "†");
}

// Discrete Fourier gate on the path register: F_d|k⟩ = (1/√d) Σ_j ω^{kj}|j⟩,
// ω = e^{2πi/d}. Satisfies F² = parity and F⁴ = I.
inline Element fourier_gate(int d) {
    if (d < 1) {
        throw std::invalid_argument("fourier_gate: d must be >= 1");
    }
    CVec m(static_cast<size_t>(d) * d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            double angle = 2.0 * std::numbers::pi * j * k / d;
            m[static_cast<size_t>(j) * d + k] = std::polar(scale, angle);
        }
    }
    return Element(std::move(m), {{FactorKind::path, d}}, "F_" + std::to_string(d));
}

// Spiral phase plate of order i: |m⟩_oam → |m ⊕ i mod d⟩_oam.
inline Element spp(int order, int d) {
    if (d < 1) {
        throw std::invalid_argument("spp: d must be >= 1");
    }
    return Element::permutation(
        {{FactorKind::oam, d}}, [order, d](int c) { return detail::positive_mod(c + order, d); },
        "SPP^" + std::to_string(order));
}

// Dove prism rotated by alpha: imprints phase e^{i·2·l·alpha} on OAM l.
inline Element dove_phase(double alpha, int d) {
    if (d < 1) {
        throw std::invalid_argument("dove_phase: d must be >= 1");
    }
    CVec m(static_cast<size_t>(d) * d, Complex{0.0, 0.0});
    for (int l = 0; l < d; ++l) {
        m[static_cast<size_t>(l) * d + l] = std::polar(1.0, 2.0 * l * alpha);
    }
    return Element(std::move(m), {{FactorKind::oam, d}}, "dove");
}

// Bank of arm-wise spiral phase plates: SPP^i in interferometer arm i,
// |m⟩_oam |i⟩_path → |m ⊕ i⟩_oam |i⟩_path.
inline Element spp_bank(int d) {
    if (d < 2) {
        throw std::invalid_argument("spp_bank: d must be >= 2");
    }
    std::vector<Factor> fp{{FactorKind::oam, d}, {FactorKind::path, d}};
    return Element::permutation(
        fp, [d](int c) { return ((c / d + c % d) % d) * d + c % d; }, "SPP-bank");
}

// Cyclic path relabel |k⟩ → |k + amount mod d⟩ (fiber rerouting into a
// different input port).
inline Element path_shift(int amount, int d) {
    if (d < 1) {
        throw std::invalid_argument("path_shift: d must be >= 1");
    }
    return Element::permutation(
        {{FactorKind::path, d}}, [amount, d](int c) { return detail::positive_mod(c + amount, d); },
        "shift");
}

// Mach-Zehnder realization of the sorter: F_d on path, then in each arm k a
// Dove prism at α_k = kπ/d plus that arm's phase error ε_k, then F_d† on
// path. With zero errors this reproduces sorter_unitary(d) exactly. The ε_k
// enter as arm phase offsets (common to all OAM values travelling arm k), so
// only differences ε_j − ε_k are observable.
inline Element interferometric_sorter(int d, const PhaseErrors& errors, int oam_dim = 0) {
    if (d < 2) {
        throw std::invalid_argument("interferometric_sorter: d must be >= 2");
    }
    if (oam_dim == 0) oam_dim = d;
    if (oam_dim < d) {
        throw std::invalid_argument("interferometric_sorter: oam_dim must be >= d");
    }
    if (static_cast<int>(errors.size()) != d) {
        throw std::invalid_argument("interferometric_sorter: expected " + std::to_string(d) +
                                    " phase errors, got " + std::to_string(errors.size()));
    }
    for (double e : errors) {
        if (!std::isfinite(e)) {
            throw std::invalid_argument("interferometric_sorter: phase errors must be finite");
        }
    }
    std::vector<Factor> fp{{FactorKind::oam, oam_dim}, {FactorKind::path, d}};
    const int dim = oam_dim * d;

    CVec fourier(static_cast<size_t>(dim) * dim, Complex{0.0, 0.0});
    CVec fourier_adj(static_cast<size_t>(dim) * dim, Complex{0.0, 0.0});
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int l = 0; l < oam_dim; ++l) {
        for (int j = 0; j < d; ++j) {
            for (int k = 0; k < d; ++k) {
                double angle = 2.0 * std::numbers::pi * j * k / d;
                fourier[static_cast<size_t>(l * d + j) * dim + (l * d + k)] = std::polar(scale, angle);
                fourier_adj[static_cast<size_t>(l * d + j) * dim + (l * d + k)] =
                    std::polar(scale, -angle);
            }
        }
    }

    CVec arms(static_cast<size_t>(dim) * dim, Complex{0.0, 0.0});
    for (int l = 0; l < oam_dim; ++l) {
        for (int k = 0; k < d; ++k) {
            double alpha_k = k * std::numbers::pi / d;
            double phase = 2.0 * l * alpha_k + errors[static_cast<size_t>(k)];
            arms[static_cast<size_t>(l * d + k) * dim + (l * d + k)] = std::polar(1.0, phase);
        }
    }

    Element f(std::move(fourier), fp, "F");
    Element prisms(std::move(arms), fp, "arms");
    Element fadj(std::move(fourier_adj), fp, "F†");
    return fadj.after(prisms.after(f), "MZ-sorter_" + std::to_string(d));
}

// Probability that the interferometric sorter with the given arm errors
// routes |l⟩_oam|0⟩_path to its correct output port l.
inline double sorting_probability(int d, const PhaseErrors& errors, int l) {
    if (l < 0 || l >= d) {
        throw std::out_of_range("sorting_probability: OAM label out of range");
    }
    Element u = interferometric_sorter(d, errors);
    int col = l * d + 0;
    int row = l * d + l;
    return std::norm(u.at(row, col));
}

// --- Group demultiplexer -------------------------------------------------
//
// G^{d_r}_{d_s} splits one channel into d_s·d_r OAM-sorted local paths and
// merges them back into d_r groups of d_s. Both the physical composition
// (U_{d_s·d_r}, then d_r block multiplexers U_{d_s}†, then the port relabel)
// and the equivalent closed-form permutation are provided; they are equal as
// matrices. Output path r + d_r·c encodes group r = port/receiver index and
// within-group remainder c (c = 0 on the ports used in-protocol).

inline int group_demux_port_group(int out_port, int d_s, int d_r) {
    (void)d_s;
    return out_port % d_r;
}

inline Element group_demux_closed_form(int d_s, int d_r) {
    if (d_s < 1 || d_r < 1) {
        throw std::invalid_argument("group_demux: dimensions must be >= 1");
    }
    const int total = d_s * d_r;
    std::vector<Factor> fp{{FactorKind::oam, total}, {FactorKind::path, total}};
    return Element::permutation(
        fp,
        [d_s, d_r, total](int c) {
            int l = c / total;
            int k = c % total;
            int group = ((k + l) % total) / d_s;
            int rem = k % d_s;
            return l * total + (group + d_r * rem);
        },
        "G^" + std::to_string(d_r) + "_" + std::to_string(d_s));
}

// Composition form, with optional phase errors for the internal sorters:
// internal_errors[0] is for the U_{d_s·d_r} demultiplexer (d_s·d_r arms) and
// internal_errors[1..d_r] for the block multiplexers (d_s arms each). Pass
// an empty list for the fully ideal device; an empty entry keeps that one
// device ideal.
inline Element group_demux(int d_s, int d_r, const std::vector<PhaseErrors>& internal_errors = {}) {
    if (d_s < 1 || d_r < 1) {
        throw std::invalid_argument("group_demux: dimensions must be >= 1");
    }
    const int total = d_s * d_r;
    std::vector<Factor> fp{{FactorKind::oam, total}, {FactorKind::path, total}};
    if (!internal_errors.empty() && static_cast<int>(internal_errors.size()) != d_r + 1) {
        throw std::invalid_argument("group_demux: expected " + std::to_string(d_r + 1) +
                                    " internal error vectors");
    }
    auto errors_for = [&internal_errors](size_t device) -> const PhaseErrors* {
        if (device >= internal_errors.size() || internal_errors[device].empty()) return nullptr;
        return &internal_errors[device];
    };

    if (total < 2) {
        // d_s = d_r = 1: the device is trivially the identity channel.
        return Element::identity(fp, "G^1_1");
    }

    // Stage 1: full demultiplexer onto local paths.
    Element demux = errors_for(0) ? interferometric_sorter(total, *errors_for(0))
                                  : sorter_unitary(total);

    // Stage 2: d_r block multiplexers U_{d_s}† on local-path groups.
    CVec blocks(static_cast<size_t>(total * total) * static_cast<size_t>(total * total),
                Complex{0.0, 0.0});
    const int dim = total * total;
    auto put_block = [&](int group, const Element& mux_el, int mux_path_dim) {
        // mux_el acts on (oam: total, path: mux_path_dim); embed its path into
        // local paths [group*d_s, group*d_s + d_s).
        for (int l = 0; l < total; ++l) {
            for (int a = 0; a < mux_path_dim; ++a) {
                for (int b = 0; b < mux_path_dim; ++b) {
                    Complex v = mux_el.at(l * mux_path_dim + a, l * mux_path_dim + b);
                    if (v == Complex{0.0, 0.0}) continue;
                    int row = l * total + (group * d_s + a);
                    int col = l * total + (group * d_s + b);
                    blocks[static_cast<size_t>(row) * dim + col] += v;
                }
            }
        }
    };
    if (d_s >= 2) {
        for (int g = 0; g < d_r; ++g) {
            const PhaseErrors* e = errors_for(static_cast<size_t>(g) + 1);
            Element mux = e ? interferometric_sorter(d_s, *e, total).adjoint()
                            : mux_unitary(d_s, total);
            put_block(g, mux, d_s);
        }
    } else {
        for (int i = 0; i < dim; ++i) blocks[static_cast<size_t>(i) * dim + i] = 1.0;
    }
    Element block_stage(std::move(blocks), fp, "block-mux");

    // Stage 3: local→global port relabel r·d_s + c → r + d_r·c.
    Element relabel = Element::permutation(
        fp,
        [d_s, d_r, total](int c) {
            int l = c / total;
            int t = c % total;
            return l * total + (t / d_s + d_r * (t % d_s));
        },
        "port-relabel");

    return relabel.after(block_stage.after(demux),
                         "G^" + std::to_string(d_r) + "_" + std::to_string(d_s));
}

}  // namespace oamnet

#endif
