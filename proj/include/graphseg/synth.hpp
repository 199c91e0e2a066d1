#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "graphseg/panel.hpp"

namespace graphseg {

// One covariance regime of the synthetic fixture: every country loads on a
// global factor, on one of n_blocks block factors, and on idiosyncratic
// noise; the whole regime is scaled by amplitude so that later regimes
// dominate windows that straddle a switch.
struct SynthRegime {
    int n_blocks = 1;
    double global_loading = 0.0;
    double block_loading = 0.0;
    double idio_loading = 1.0;
    double amplitude = 1.0;
};

struct SynthSpec {
    int months = 720;
    int countries = 30;
    std::array<int, 2> switch_months = {240, 480};
    std::array<SynthRegime, 3> regimes = {
        SynthRegime{5, 0.30, 1.00, 0.90, 6.0},
        SynthRegime{1, 1.40, 0.00, 0.65, 24.0},
        SynthRegime{15, 0.30, 1.30, 0.70, 96.0},
    };
    double base_level = 1000.0;
    MonthStamp first_month = {1955, 1};
};

// Deterministic three-regime monthly panel. Same seed, same panel, on any
// platform (the generator carries its own PRNG).
PricePanel synthetic_panel(std::uint64_t seed, const SynthSpec& spec = {});

// Window indices after which the regime switches become visible: a switch
// at month m first affects the window that first contains m, so the
// planted break sits just before it.
std::vector<int> synthetic_change_windows(const WindowSpec& window,
                                          const SynthSpec& spec = {});

}  // namespace graphseg
