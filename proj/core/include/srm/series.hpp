#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace srm {

/// Physical unit of a measured variable.
enum class Unit { IRRADIANCE_WH_M2, CELSIUS, METERS_PER_SECOND, DIMENSIONLESS };

/// How deseasonalization treats samples where the trend falls below the
/// daylight threshold: pin the index to one, or mask the sample.
enum class NightMode { SET_TO_ONE, EXCLUDE };

std::string to_string(NightMode mode);
NightMode night_mode_from_string(const std::string& name);

/// Regularly spaced observations of one meteorological variable.
///
/// Timestamps are implicit: sample i lives at start_unix_s + i * 60 * step_minutes.
/// Masked entries are never read by any statistic or model.
struct MeteoSeries {
    std::int64_t start_unix_s = 0;
    int step_minutes = 60;
    Unit unit = Unit::DIMENSIONLESS;
    std::vector<double> values;
    std::vector<std::uint8_t> valid;

    std::size_t size() const { return values.size(); }
    bool is_valid(std::size_t i) const { return valid[i] != 0; }
    std::int64_t time_at(std::size_t i) const {
        return start_unix_s + static_cast<std::int64_t>(i) * 60 * step_minutes;
    }
};

/// The deseasonalizing reference, aligned index-for-index with its series
/// (clear-sky irradiance, or a mean profile for variables without a
/// physical model). Values are non-negative.
struct TrendSeries {
    std::int64_t start_unix_s = 0;
    int step_minutes = 60;
    std::vector<double> values;
    std::vector<std::uint8_t> valid;

    std::size_t size() const { return values.size(); }
    bool is_valid(std::size_t i) const { return valid[i] != 0; }
};

/// Deseasonalized (ratio-to-trend) series. Every unmasked value lies in
/// [0, beta_cap]; samples below the daylight threshold were handled
/// according to night_mode.
struct KappaSeries {
    std::vector<double> values;
    std::vector<std::uint8_t> valid;
    double beta_cap = 1.2;
    double epsilon = 10.0;
    NightMode night_mode = NightMode::SET_TO_ONE;

    std::size_t size() const { return values.size(); }
    bool is_valid(std::size_t i) const { return valid[i] != 0; }
};

/// Outcome of the residual-seasonality check at period m.
struct SeasonalityVerdict {
    int m = 0;
    double t_m = 0.0;      ///< decision threshold
    double rho_m = 0.0;    ///< lag-m autocorrelation on the subsample
    int n = 0;             ///< subsample size
    double confidence = 0.9;
    bool deseasonalized = false;  ///< |rho_m| < t_m
};

// ---- CSV ingestion -----------------------------------------------------

/// Column mapping for CSV input. `timestamp` and `value` are required in
/// the header; `clearsky` and `zenith` are picked up when present.
struct CsvSchema {
    std::string timestamp_col = "timestamp";
    std::string value_col = "value";
    std::string clearsky_col = "clearsky";
    std::string zenith_col = "zenith_deg";
    Unit unit = Unit::IRRADIANCE_WH_M2;
};

struct IngestResult {
    MeteoSeries series;
    std::optional<TrendSeries> clearsky;
    /// Zenith angle in degrees, NaN where absent; same length as the series.
    std::optional<std::vector<double>> zenith_deg;
    std::size_t unparsable_cells = 0;
    std::size_t negative_masked = 0;
    std::size_t gap_samples = 0;
};

/// Read a CSV stream onto a regular time grid of `step_minutes`.
///
/// Rows must carry strictly increasing ISO-8601 UTC timestamps whose
/// spacing is a multiple of the step; holes become masked entries.
/// Non-numeric cells are masked, as are negative irradiance readings.
///
/// Throws MalformedRow, NonMonotonicTimestamps, StepMismatch.
IngestResult ingest_csv(std::istream& source, const CsvSchema& schema, int step_minutes);

// ---- operations ------------------------------------------------------------

/// Mask every sample whose solar zenith angle exceeds 85 degrees. Existing
/// masks are preserved; NaN zenith entries leave the sample untouched.
/// Throws LengthMismatch if zenith is not aligned with the series.
MeteoSeries quality_filter(const MeteoSeries& series, std::span<const double> zenith_deg);

/// Deseasonalize a series by its trend: kappa = min(value / trend, beta),
/// clamped to zero from below, wherever trend >= epsilon and the sample is
/// valid. Below the threshold the night rule applies. Samples invalid in
/// the input stay masked in both modes.
///
/// Requires epsilon in [1, 30] and beta in [1, 2]; throws AlignmentError
/// if the series and trend differ in shape.
KappaSeries to_kappa(const MeteoSeries& series, const TrendSeries& trend, double epsilon,
                     double beta, NightMode night_mode);

/// Model-free trend: the mean of all valid samples sharing the same phase
/// (index modulo cycle_length), tiled over the full series length. Phases
/// with no valid sample produce masked trend entries.
/// Throws InsufficientHistory unless the series covers two full cycles.
TrendSeries mean_profile_trend(const MeteoSeries& series, std::size_t cycle_length);

/// Decision threshold for the residual-seasonality test:
///   t = q * sqrt((1 + 2 * sum_rho_sq) / n)
/// where q is the standard-normal quantile at 1 - (1-confidence)/2,
/// rounded to three decimals (the conventional z-table value).
double seasonality_threshold(double sum_rho_sq, int n, double confidence);

inline constexpr std::uint64_t kDefaultSeasonalitySeed = 42;

/// Test whether a deseasonalized series still carries a period-m cycle.
///
/// The lag-1..m autocorrelations are estimated from n anchor points drawn
/// without replacement (seeded), so the verdict is deterministic for a
/// given seed and its sampling error matches the sqrt(1/n) scale of the
/// threshold. Throws NotEnoughValidData when the series cannot supply
/// m + n valid samples or n anchor pairs.
SeasonalityVerdict seasonality_test(const KappaSeries& kappa, int m, int n, double confidence,
                                    std::uint64_t seed = kDefaultSeasonalitySeed);

// ---- time helpers ---------------------------------------------------------

/// Parse "YYYY-MM-DDTHH:MM:SS[Z]" (T or space separator) as UTC seconds.
std::optional<std::int64_t> parse_iso8601_utc(const std::string& text);

/// Format UTC seconds as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601_utc(std::int64_t unix_s);

}  // namespace srm
