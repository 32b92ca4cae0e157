#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "srm/series.hpp"

namespace srm::synth {

enum class SynthKind { WHITE_NOISE, AR1, AR2, SEASONAL_AR1 };

SynthKind kind_from_string(const std::string& name);
std::string to_string(SynthKind kind);

/// Recipe for a seeded synthetic state/observation pair: a stationary
/// autoregressive state with target variance sigma_x^2, observed through
/// additive Gaussian noise of variance R * sigma_x^2.
struct SynthSpec {
    SynthKind kind = SynthKind::AR1;
    double alpha = 0.7;    ///< lag-1 coefficient (AR1/AR2, SEASONAL_AR1)
    double alpha2 = 0.0;   ///< lag-2 coefficient (AR2 only)
    double sigma_x = 1.0;  ///< target state standard deviation
    double noise_ratio = 0.0;  ///< measurement-noise variance over state variance
    std::size_t length = 1000;
    std::uint64_t seed = 1;
    /// Cyclic deseasonalizing profile for SEASONAL_AR1; the state then
    /// describes the ratio's deviation around one, so exported values are
    /// profile * (1 + state + noise).
    std::vector<double> seasonal_profile;
    int step_minutes = 60;
    std::int64_t start_unix_s = 1577836800;  // 2020-01-01T00:00:00Z

    void validate() const;  ///< throws UnstableSpec / std::invalid_argument
};

struct SynthOutput {
    MeteoSeries truth;     ///< the latent state (scaled by the profile when seasonal)
    MeteoSeries observed;  ///< truth plus measurement noise
    TrendSeries trend;     ///< the seasonal profile, or ones
};

/// Deterministic generation: identical spec (including seed) reproduces
/// identical output bitwise. Innovations and measurement noise come from a
/// seeded mt19937_64 through std::normal_distribution; a burn-in of ten
/// autoregressive memory lengths is discarded before recording.
SynthOutput generate(const SynthSpec& spec);

/// Write the observed series (plus the trend as a `clearsky` column when
/// requested) in the CSV layout the ingestion schema expects.
void write_series_csv(std::ostream& out, const MeteoSeries& observed,
                      const TrendSeries* clearsky = nullptr);

}  // namespace srm::synth
