#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srm/artu.hpp"
#include "srm/grid.hpp"
#include "srm/series.hpp"

namespace srm::models {

enum class ModelId { PER, CLIM, CLIPER, ES, ARTU, COMB };

std::string to_string(ModelId id);
ModelId model_from_string(const std::string& name);

/// One forecast task: predict the sample at origin_index + horizon using
/// nothing newer than origin_index.
struct ForecastRequest {
    int horizon = 1;
    std::size_t origin_index = 0;
    double beta = 1.2;
    double epsilon = 10.0;
};

/// Fixed-horizon predictions aligned to their target timestamps:
/// predictions[j] forecasts sample j and was issued at j - horizon.
/// Unproduced targets are masked.
struct ForecastSeries {
    ModelId model = ModelId::PER;
    int horizon = 1;
    std::vector<double> predictions;
    std::vector<std::uint8_t> valid;

    std::size_t size() const { return predictions.size(); }
    bool is_valid(std::size_t i) const { return valid[i] != 0; }
};

/// Backtest configuration shared by all models.
struct ModelOptions {
    double beta = 1.2;
    double epsilon = 10.0;
    NightMode night_mode = NightMode::SET_TO_ONE;
    double artu_r = 0.05;           ///< measurement-noise ratio for the coefficient solve
    int es_window = 48;             ///< smoothing window length in samples
    std::optional<double> es_alpha; ///< fixed smoothing weight; unset = lag-1 autocorrelation
    bool es_alpha_at_horizon = false;  ///< estimate the weight at lag h instead of lag 1
    artu::SolverOptions solver;
    const artu::CoefficientGrid* grid = nullptr;  ///< optional interpolation source for ARTU
    std::vector<ModelId> comb_members{ModelId::CLIPER, ModelId::ARTU, ModelId::PER,
                                      ModelId::ES};
};

// ---- single-origin forecasters ---------------------------------------------
//
// Each returns the forecast of the sample at origin_index + horizon. The
// kappa series passed in covers the full record; statistics (mean, rho)
// come from samples before `insample_end` only.

/// Scaled persistence: carry the most recent daylight ratio forward.
/// Backtracks from the origin until the trend clears the epsilon threshold
/// and the sample is valid; throws NoDaylightHistory when none exists.
double persistence(const MeteoSeries& series, const TrendSeries& trend,
                   const ForecastRequest& req);

/// Historical-mean forecast on the deseasonalized scale.
double climatology(const KappaSeries& kappa, std::size_t insample_end, const TrendSeries& trend,
                   const ForecastRequest& req);

/// Convex mix of persistence and climatology weighted by the lag-h
/// autocorrelation rho_h of the in-sample deseasonalized series.
double cliper(const KappaSeries& kappa, std::size_t insample_end, const TrendSeries& trend,
              double rho_h, const ForecastRequest& req);

/// Simple exponential smoothing over the trailing window, with the
/// remaining geometric tail assigned to the historical mean. Requires
/// alpha in (0, 1]; throws InvalidAlpha otherwise.
double exp_smoothing(const KappaSeries& kappa, std::size_t insample_end,
                     const TrendSeries& trend, double alpha, int window,
                     const ForecastRequest& req);

/// Gain-filtered two-lag forecaster: S*k(t) - P*k(t-h) + (1+P-S)*mean,
/// with (S, P) from a solved coefficient pair. Unresolvable lag samples
/// fall back to the historical mean. Floored at zero.
double artu_forecast(const KappaSeries& kappa, std::size_t insample_end,
                     const TrendSeries& trend, const artu::ArtuSolution& sol,
                     const ForecastRequest& req);

/// Plain arithmetic average of member forecasts.
/// Throws EmptyEnsemble with fewer than two members.
double combine(std::span<const double> member_predictions);

// ---- backtest driver ---------------------------------------------------------

/// Direct multi-step backtest: one ForecastSeries per horizon over the
/// out-of-sample region [split_index, end). Model parameters are estimated
/// on the in-sample region only; no out-of-sample value influences any
/// prediction. Deterministic for fixed inputs and solver seed.
std::vector<ForecastSeries> run_model(ModelId model, const MeteoSeries& series,
                                      const TrendSeries& trend, std::span<const int> horizons,
                                      std::size_t split_index, const ModelOptions& opts = {});

}  // namespace srm::models
