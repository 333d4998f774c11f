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
// Exact pure-state simulation over a small tensor product of photonic
// degrees of freedom. States are immutable values: every operation returns
// a new state, so concurrent use on distinct inputs is safe.

#ifndef OAMNET_STATE_HPP
#define OAMNET_STATE_HPP

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "oamnet/elements.hpp"
#include "oamnet/layout.hpp"
#include "oamnet/rng.hpp"

namespace oamnet {

class State {
  public:
    State(Layout layout, CVec amplitudes) : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
        if (static_cast<int>(amps_.size()) != layout_.dim()) {
            throw std::invalid_argument("state: amplitude vector length " +
                                        std::to_string(amps_.size()) + " does not match layout dim " +
                                        std::to_string(layout_.dim()));
        }
    }

    static State basis(const Layout& layout, const std::vector<int>& address) {
        CVec amps(static_cast<size_t>(layout.dim()), Complex{0.0, 0.0});
        amps[static_cast<size_t>(layout.flat_index(address))] = 1.0;
        return State(layout, std::move(amps));
    }

    // Builds Σ amplitude·|address⟩ from a term list. The caller supplies a
    // normalized amplitude set.
    static State superposition(const Layout& layout,
                               const std::vector<std::pair<std::vector<int>, Complex>>& terms) {
        CVec amps(static_cast<size_t>(layout.dim()), Complex{0.0, 0.0});
        for (const auto& [address, amplitude] : terms) {
            amps[static_cast<size_t>(layout.flat_index(address))] += amplitude;
        }
        State s(layout, std::move(amps));
        if (std::abs(s.norm_sq() - 1.0) > 1e-9) {
            throw std::invalid_argument("state: superposition terms are not normalized");
        }
        return s;
    }

    const Layout& layout() const { return layout_; }
    const CVec& amplitudes() const { return amps_; }
    Complex amplitude(const std::vector<int>& address) const {
        return amps_[static_cast<size_t>(layout_.flat_index(address))];
    }

    double norm_sq() const {
        double n = 0.0;
        for (const auto& a : amps_) n += std::norm(a);
        return n;
    }

    // Applies u to the named factors (identity elsewhere). The footprint of
    // u fixes the order in which target factors enter the matrix index.
    State apply(const Element& u, const std::vector<FactorRef>& targets) const {
        if (targets.size() != u.footprint().size()) {
            throw std::invalid_argument("apply: element footprint has " +
                                        std::to_string(u.footprint().size()) + " factors, got " +
                                        std::to_string(targets.size()) + " targets");
        }
        std::vector<int> tindex(targets.size());
        std::vector<int> tstride(targets.size());
        std::vector<int> tdim(targets.size());
        for (size_t i = 0; i < targets.size(); ++i) {
            tindex[i] = layout_.factor_index(targets[i]);
            tdim[i] = layout_.factor(tindex[i]).dim;
            tstride[i] = layout_.stride(tindex[i]);
            if (tdim[i] != u.footprint()[i].dim) {
                throw std::invalid_argument(
                    "apply: dimension mismatch on factor '" + std::string(factor_name(targets[i].kind)) +
                    "': element expects " + std::to_string(u.footprint()[i].dim) + ", layout has " +
                    std::to_string(tdim[i]));
            }
            for (size_t j = i + 1; j < targets.size(); ++j) {
                if (targets[i].kind == targets[j].kind && targets[i].photon == targets[j].photon) {
                    throw std::invalid_argument("apply: duplicate target factor");
                }
            }
        }

        // Flat offsets of each matrix index within the amplitude vector.
        const int sub = u.dim();
        std::vector<int> offset(static_cast<size_t>(sub), 0);
        for (int m = 0; m < sub; ++m) {
            int rest = m;
            int off = 0;
            for (size_t i = targets.size(); i-- > 0;) {
                off += (rest % tdim[i]) * tstride[i];
                rest /= tdim[i];
            }
            offset[static_cast<size_t>(m)] = off;
        }

        // Every flat index decomposes as base + offset[m] with base ranging
        // over indices whose target digits are all zero.
        CVec out(amps_.size());
        std::vector<char> is_target(static_cast<size_t>(layout_.factor_count()), 0);
        for (int ti : tindex) is_target[static_cast<size_t>(ti)] = 1;
        std::vector<int> free_dims;
        std::vector<int> free_strides;
        for (int i = 0; i < layout_.factor_count(); ++i) {
            if (!is_target[static_cast<size_t>(i)]) {
                free_dims.push_back(layout_.factor(i).dim);
                free_strides.push_back(layout_.stride(i));
            }
        }
        std::vector<int> counter(free_dims.size(), 0);
        CVec in_block(static_cast<size_t>(sub));
        while (true) {
            int base = 0;
            for (size_t i = 0; i < counter.size(); ++i) base += counter[i] * free_strides[i];
            for (int m = 0; m < sub; ++m) {
                in_block[static_cast<size_t>(m)] = amps_[static_cast<size_t>(base + offset[static_cast<size_t>(m)])];
            }
            for (int r = 0; r < sub; ++r) {
                Complex acc{0.0, 0.0};
                for (int c = 0; c < sub; ++c) {
                    acc += u.at(r, c) * in_block[static_cast<size_t>(c)];
                }
                out[static_cast<size_t>(base + offset[static_cast<size_t>(r)])] = acc;
            }
            size_t k = counter.size();
            while (k > 0) {
                --k;
                if (++counter[k] < free_dims[k]) break;
                counter[k] = 0;
                if (k == 0) goto done;
            }
            if (counter.empty()) break;
        }
    done:
        return State(layout_, std::move(out));
    }

    // Single-photon convenience overload: targets resolved on photon 0.
    State apply(const Element& u) const {
        std::vector<FactorRef> targets;
        for (const auto& f : u.footprint()) targets.push_back({f.kind, 0});
        return apply(u, targets);
    }

    // Marginal outcome distribution of one factor.
    std::vector<double> measure_factor(FactorRef factor) const {
        return measure_joint({factor});
    }

    // Joint marginal over several factors, row-major in the given order.
    std::vector<double> measure_joint(const std::vector<FactorRef>& factors) const {
        std::vector<int> fstride(factors.size());
        std::vector<int> fdim(factors.size());
        int total = 1;
        for (size_t i = 0; i < factors.size(); ++i) {
            int fi = layout_.factor_index(factors[i]);
            fstride[i] = layout_.stride(fi);
            fdim[i] = layout_.factor(fi).dim;
            total *= fdim[i];
        }
        std::vector<double> probs(static_cast<size_t>(total), 0.0);
        for (size_t idx = 0; idx < amps_.size(); ++idx) {
            double p = std::norm(amps_[idx]);
            if (p == 0.0) continue;
            int bucket = 0;
            for (size_t i = 0; i < factors.size(); ++i) {
                bucket = bucket * fdim[i] + (static_cast<int>(idx) / fstride[i]) % fdim[i];
            }
            probs[static_cast<size_t>(bucket)] += p;
        }
        return probs;
    }

    // Samples a projective measurement of one factor and collapses.
    std::pair<int, State> sample_factor(FactorRef factor, Rng& rng) const {
        std::vector<double> probs = measure_factor(factor);
        double u = rng.uniform();
        int outcome = static_cast<int>(probs.size()) - 1;
        double cum = 0.0;
        for (size_t i = 0; i < probs.size(); ++i) {
            cum += probs[i];
            if (u < cum) {
                outcome = static_cast<int>(i);
                break;
            }
        }
        return {outcome, collapse(factor, outcome, probs[static_cast<size_t>(outcome)])};
    }

    // Projects one factor onto `outcome` and renormalizes.
    State project(FactorRef factor, int outcome) const {
        std::vector<double> probs = measure_factor(factor);
        if (outcome < 0 || outcome >= static_cast<int>(probs.size())) {
            throw std::out_of_range("project: outcome out of range");
        }
        double p = probs[static_cast<size_t>(outcome)];
        if (p <= 0.0) {
            throw std::domain_error("project: outcome has zero probability");
        }
        return collapse(factor, outcome, p);
    }

  private:
    State collapse(FactorRef factor, int outcome, double prob) const {
        int fi = layout_.factor_index(factor);
        int stride = layout_.stride(fi);
        int dim = layout_.factor(fi).dim;
        double scale = 1.0 / std::sqrt(prob);
        CVec out(amps_.size(), Complex{0.0, 0.0});
        for (size_t idx = 0; idx < amps_.size(); ++idx) {
            if ((static_cast<int>(idx) / stride) % dim == outcome) {
                out[idx] = amps_[idx] * scale;
            }
        }
        return State(layout_, std::move(out));
    }

    Layout layout_;
    CVec amps_;
};

// |⟨a|b⟩|²; global phase drops out, which is why all state comparisons in
// this library go through fidelity rather than amplitude equality.
inline double fidelity(const State& a, const State& b) {
    if (a.layout() != b.layout()) {
        throw std::invalid_argument("fidelity: states have different layouts");
    }
    Complex overlap{0.0, 0.0};
    const CVec& av = a.amplitudes();
    const CVec& bv = b.amplitudes();
    for (size_t i = 0; i < av.size(); ++i) {
        overlap += std::conj(av[i]) * bv[i];
    }
    return std::norm(overlap);
}

}  // namespace oamnet

#endif
