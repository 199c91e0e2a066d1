#include "graphseg/synth.hpp"

#include <cmath>
#include <numbers>

namespace graphseg {

namespace {

// splitmix64; fixed here so fixtures reproduce across platforms.
struct Prng {
    std::uint64_t state;
    explicit Prng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform_pos() {  // (0, 1]
        return (double((next() >> 11)) + 1.0) * 0x1.0p-53;
    }
    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform_pos();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }
};

}  // namespace

PricePanel synthetic_panel(std::uint64_t seed, const SynthSpec& spec) {
    const int M = spec.months, N = spec.countries;
    Prng rng(seed);

    PricePanel panel;
    panel.dates.reserve(M);
    for (int t = 0; t < M; ++t)
        panel.dates.push_back(spec.first_month.plus_months(t));
    panel.countries.reserve(N);
    for (int i = 0; i < N; ++i) {
        char code[16];
        std::snprintf(code, sizeof(code), "C%02d", i);
        panel.countries.emplace_back(code);
    }
    panel.values.resize(M, N);

    const std::array<int, 4> bounds = {0, spec.switch_months[0],
                                       spec.switch_months[1], M};
    std::vector<double> block_factor;
    for (int g = 0; g < 3; ++g) {
        const SynthRegime& reg = spec.regimes[g];
        block_factor.resize(reg.n_blocks);
        for (int t = bounds[g]; t < bounds[g + 1]; ++t) {
            const double global = rng.normal();
            for (int b = 0; b < reg.n_blocks; ++b)
                block_factor[b] = rng.normal();
            for (int i = 0; i < N; ++i) {
                const double shock = reg.global_loading * global +
                                     reg.block_loading *
                                         block_factor[i % reg.n_blocks] +
                                     reg.idio_loading * rng.normal();
                panel.values(t, i) = spec.base_level + reg.amplitude * shock;
            }
        }
    }
    panel.validate();
    return panel;
}

std::vector<int> synthetic_change_windows(const WindowSpec& window,
                                          const SynthSpec& spec) {
    std::vector<int> out;
    for (int m : spec.switch_months) {
        // first window whose range [t*s, t*s+L-1] reaches month m
        const int t_first =
            (m - window.length_months + 1 + window.step_months - 1) /
            window.step_months;
        out.push_back(t_first - 1);
    }
    return out;
}

}  // namespace graphseg
