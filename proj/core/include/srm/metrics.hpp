#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "srm/models.hpp"
#include "srm/series.hpp"

namespace srm::metrics {

/// Normalized mean absolute error, in percent: absolute target errors
/// summed over the evaluation origins, divided by the measured values at
/// those origins. Only origins at or after eval_begin with a valid
/// measurement at both endpoints and an available prediction contribute.
/// Throws ZeroNormalizer when the measured sum vanishes.
double nmae(const MeteoSeries& actual, const models::ForecastSeries& forecast,
            std::size_t eval_begin);

/// Normalized root-mean-square error, in percent, with the sqrt(n) factor
/// that makes a constant offset read identically to nmae.
double nrmse(const MeteoSeries& actual, const models::ForecastSeries& forecast,
             std::size_t eval_begin);

/// Mean absolute scaled error over all supplied horizons, in percent:
/// forecast errors scaled by the period-m naive difference of the
/// measurements. m = 0 selects the non-periodic variant (lag-1 naive).
/// Denominator pairs with a masked endpoint are skipped.
/// Throws ZeroDenominator when the naive error vanishes.
double mase(const MeteoSeries& actual, std::span<const models::ForecastSeries> forecasts, int m,
            std::size_t eval_begin);

/// All forecasts one model produced over a backtest, one per horizon.
struct ModelRun {
    models::ModelId id = models::ModelId::PER;
    std::vector<models::ForecastSeries> forecasts;
};

struct BenchmarkReport {
    struct Meta {
        std::string site_id;
        std::size_t split_index = 0;
        std::vector<int> horizons;
        double r_value = 0.05;
        double beta = 1.2;
        double epsilon = 10.0;
        std::string night_mode = "set-to-one";
        int mase_m = 13;
        std::uint64_t seed = 42;
    };
    struct Cell {
        std::string model;
        int horizon = 1;
        double nmae = 0.0;
        double nrmse = 0.0;
    };

    Meta meta;
    std::vector<Cell> cells;  ///< model-major, horizons in configured order
    std::vector<std::pair<std::string, double>> mase_by_model;
};

/// Score a set of completed model runs.
BenchmarkReport build_report(const MeteoSeries& actual, std::span<const ModelRun> runs,
                             std::size_t split_index, int mase_m,
                             const BenchmarkReport::Meta& meta);

/// Convenience wrapper: run the models, then score them.
BenchmarkReport build_report(const MeteoSeries& series, const TrendSeries& trend,
                             std::span<const models::ModelId> model_ids,
                             std::span<const int> horizons, std::size_t split_index, int mase_m,
                             const models::ModelOptions& opts, const std::string& site_id = "");

std::string to_json(const BenchmarkReport& report);
BenchmarkReport report_from_json(const std::string& text);

/// CSV rendering: `model,horizon,nmae,nrmse` rows followed by a
/// `model,mase` summary block.
std::string to_csv(const BenchmarkReport& report);

/// Fixed-width console table, models by horizons with nRMSE/nMAE rows.
std::string to_table(const BenchmarkReport& report);

}  // namespace srm::metrics
