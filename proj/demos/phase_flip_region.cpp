// Copyright 2026 The qmacea Authors
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

// Walks through the collective phase-flip channel: pentagon at the maximally
// mixed inputs, the closed form, corner rates, and a small code simulation.

#include <cstdio>
#include <vector>

#include "qmacea/qmacea.hpp"

using namespace qmacea;

int main() {
    const std::vector<double> p{0.75, 0.25};
    const auto m = make_collective_phase_flip(2, p);
    const auto pi = maximally_mixed(2);

    const auto pent = region_for_inputs(m, pi, pi);
    const auto closed = phase_flip_region_closed_form(2, p);
    std::printf("pentagon  r1=%.6f r2=%.6f rsum=%.6f\n", pent.r1, pent.r2, pent.rsum);
    std::printf("closed    r1=%.6f r2=%.6f rsum=%.6f\n", closed.r1, closed.r2, closed.rsum);
    for (const auto& v : pent.vertices) std::printf("  vertex (%.4f, %.4f)\n", v[0], v[1]);

    const auto sd = successive_decode_rates(m, pi, pi);
    std::printf("successive decoding corner (%.4f, %.4f)\n", sd.rates[0], sd.rates[1]);

    const auto c = resource_corner_rates(m, pi, pi);
    std::printf("ebits consumed E1=%.4f E2=%.4f\n", c.e1, c.e2);

    // Superdense coding through a noiseless qubit: four Paulis, perfect decoding.
    PackingConfig cfg;
    cfg.n = 1;
    cfg.rate = 2;
    cfg.delta = 0.5;
    cfg.trials = 1;
    cfg.kind = CodebookKind::Paulis;
    const auto sim = simulate_packing(make_identity_channel(2), pi, cfg);
    std::printf("superdense: %zu codewords, min success %.12f\n", sim.codewords, sim.min_success);
    return 0;
}
