#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace srm::stats {

/// One lag of a sample autocorrelation function estimated on masked data.
struct AcfEstimate {
    int lag = 1;
    double rho = 0.0;             ///< clamped to [-1, 1]
    std::size_t pair_count = 0;   ///< number of valid (t, t+lag) pairs used
};

/// Arithmetic mean over valid entries. Throws NoValidData if none.
double mean(std::span<const double> values, std::span<const std::uint8_t> valid);

/// Population variance (divide by count) over valid entries.
/// Throws NotEnoughValidData if fewer than two valid entries.
double variance(std::span<const double> values, std::span<const std::uint8_t> valid);

/// Lag-`lag` autocorrelation with pairwise deletion: pairs straddling a
/// masked entry are dropped, never imputed. The centering mean and the
/// normalizing variance are taken over all valid entries.
///
/// Throws ZeroVariance for constant series and NotEnoughValidPairs when
/// fewer than two valid pairs remain.
AcfEstimate acf(std::span<const double> values, std::span<const std::uint8_t> valid, int lag);

/// Inverse CDF of the standard normal distribution (Acklam's rational
/// approximation, |relative error| < 1.2e-9). Requires p in (0, 1).
double normal_quantile(double p);

}  // namespace srm::stats
