#include "srm/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "srm/errors.hpp"
#include "srm/stats.hpp"

namespace srm::models {

std::string to_string(ModelId id) {
    switch (id) {
        case ModelId::PER: return "PER";
        case ModelId::CLIM: return "CLIM";
        case ModelId::CLIPER: return "CLIPER";
        case ModelId::ES: return "ES";
        case ModelId::ARTU: return "ARTU";
        case ModelId::COMB: return "COMB";
    }
    return "?";
}

ModelId model_from_string(const std::string& name) {
    std::string up;
    for (char c : name) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (up == "PER") return ModelId::PER;
    if (up == "CLIM") return ModelId::CLIM;
    if (up == "CLIPER") return ModelId::CLIPER;
    if (up == "ES") return ModelId::ES;
    if (up == "ARTU") return ModelId::ARTU;
    if (up == "COMB") return ModelId::COMB;
    throw std::invalid_argument("models: unknown model '" + name + "'");
}

namespace {

void check_request(std::size_t series_len, const ForecastRequest& req) {
    if (req.horizon < 1) throw std::invalid_argument("models: horizon must be >= 1");
    if (req.origin_index + static_cast<std::size_t>(req.horizon) >= series_len) {
        throw AlignmentError("models: forecast target beyond the end of the series");
    }
}

double clamp_pred(double kappa_pred, double beta) { return std::clamp(kappa_pred, 0.0, beta); }

/// Value of the deseasonalized series at idx, when the night rule left one.
std::optional<double> resolve_kappa(const KappaSeries& kappa, std::size_t idx) {
    if (idx < kappa.size() && kappa.is_valid(idx)) return kappa.values[idx];
    return std::nullopt;
}

/// Latest index at or before origin with a usable deseasonalized value.
std::optional<std::size_t> backtrack_kappa(const KappaSeries& kappa, std::size_t origin) {
    for (std::size_t i = origin + 1; i-- > 0;) {
        if (kappa.is_valid(i)) return i;
    }
    return std::nullopt;
}

double mean_insample(const KappaSeries& kappa, std::size_t insample_end) {
    const std::size_t end = std::min(insample_end, kappa.size());
    return stats::mean(std::span(kappa.values).first(end), std::span(kappa.valid).first(end));
}

double scale_to_target(double kappa_pred, const TrendSeries& trend, std::size_t target) {
    if (!trend.is_valid(target)) {
        throw NoDaylightHistory("models: trend undefined at the forecast target");
    }
    return kappa_pred * trend.values[target];
}

double cliper_kernel(double kappa_origin, double kappa_mean, double rho, double beta) {
    return clamp_pred(rho * kappa_origin + (1.0 - rho) * kappa_mean, beta);
}

double es_kernel(const KappaSeries& kappa, std::size_t origin, double alpha, int window,
                 double kappa_mean, double beta) {
    double acc = 0.0;
    double weight = alpha;
    for (int i = 0; i < window; ++i) {
        double k = kappa_mean;  // history exhausted or masked: fall back to the mean
        if (origin >= static_cast<std::size_t>(i)) {
            if (const auto v = resolve_kappa(kappa, origin - static_cast<std::size_t>(i))) k = *v;
        }
        acc += weight * k;
        weight *= 1.0 - alpha;
    }
    acc += kappa_mean * std::pow(1.0 - alpha, window);
    return clamp_pred(acc, beta);
}

double artu_kernel(double kappa_t, double kappa_tmh, double kappa_mean, double S, double P,
                   double beta) {
    return clamp_pred(S * kappa_t - P * kappa_tmh + (1.0 + P - S) * kappa_mean, beta);
}

}  // namespace

double persistence(const MeteoSeries& series, const TrendSeries& trend,
                   const ForecastRequest& req) {
    check_request(series.size(), req);
    if (trend.size() != series.size()) {
        throw AlignmentError("models: series and trend differ in length");
    }
    const std::size_t target = req.origin_index + static_cast<std::size_t>(req.horizon);

    for (std::size_t i = req.origin_index + 1; i-- > 0;) {
        if (series.is_valid(i) && trend.is_valid(i) && trend.values[i] >= req.epsilon) {
            const double kappa = clamp_pred(series.values[i] / trend.values[i], req.beta);
            return scale_to_target(kappa, trend, target);
        }
    }
    throw NoDaylightHistory("models: no daylight sample before the forecast origin");
}

double climatology(const KappaSeries& kappa, std::size_t insample_end, const TrendSeries& trend,
                   const ForecastRequest& req) {
    check_request(kappa.size(), req);
    const double mean = mean_insample(kappa, insample_end);
    const std::size_t target = req.origin_index + static_cast<std::size_t>(req.horizon);
    return scale_to_target(clamp_pred(mean, req.beta), trend, target);
}

double cliper(const KappaSeries& kappa, std::size_t insample_end, const TrendSeries& trend,
              double rho_h, const ForecastRequest& req) {
    check_request(kappa.size(), req);
    const double mean = mean_insample(kappa, insample_end);
    const auto last = backtrack_kappa(kappa, req.origin_index);
    if (!last) throw NoDaylightHistory("models: no usable sample before the forecast origin");
    const std::size_t target = req.origin_index + static_cast<std::size_t>(req.horizon);
    return scale_to_target(cliper_kernel(kappa.values[*last], mean, rho_h, req.beta), trend,
                           target);
}

double exp_smoothing(const KappaSeries& kappa, std::size_t insample_end,
                     const TrendSeries& trend, double alpha, int window,
                     const ForecastRequest& req) {
    check_request(kappa.size(), req);
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw InvalidAlpha("models: smoothing weight must lie in (0, 1]");
    }
    if (window < 1) throw std::invalid_argument("models: smoothing window must be >= 1");
    const double mean = mean_insample(kappa, insample_end);
    const std::size_t target = req.origin_index + static_cast<std::size_t>(req.horizon);
    return scale_to_target(es_kernel(kappa, req.origin_index, alpha, window, mean, req.beta),
                           trend, target);
}

double artu_forecast(const KappaSeries& kappa, std::size_t insample_end,
                     const TrendSeries& trend, const artu::ArtuSolution& sol,
                     const ForecastRequest& req) {
    check_request(kappa.size(), req);
    const double mean = mean_insample(kappa, insample_end);
    const std::size_t origin = req.origin_index;
    const std::size_t h = static_cast<std::size_t>(req.horizon);
    const double k_t = resolve_kappa(kappa, origin).value_or(mean);
    const double k_tmh = origin >= h ? resolve_kappa(kappa, origin - h).value_or(mean) : mean;
    const std::size_t target = origin + h;
    return scale_to_target(artu_kernel(k_t, k_tmh, mean, sol.S, sol.P, req.beta), trend, target);
}

double combine(std::span<const double> member_predictions) {
    if (member_predictions.size() < 2) {
        throw EmptyEnsemble("models: ensemble needs at least two members");
    }
    double sum = 0.0;
    for (double p : member_predictions) sum += p;
    return sum / static_cast<double>(member_predictions.size());
}

namespace {

/// Autocorrelation of the in-sample deseasonalized series, nudged inside
/// the open interval the coefficient solver requires.
double insample_rho(const KappaSeries& kappa, std::size_t insample_end, int lag) {
    const std::size_t end = std::min(insample_end, kappa.size());
    const auto est = stats::acf(std::span(kappa.values).first(end),
                                std::span(kappa.valid).first(end), lag);
    constexpr double kMargin = 1e-9;
    return std::clamp(est.rho, -1.0 + kMargin, 1.0 - kMargin);
}

artu::ArtuSolution artu_coefficients(double rho_h, double rho_2h, const ModelOptions& opts) {
    if (opts.grid != nullptr) {
        try {
            const auto [alpha, K] = artu::interpolate(*opts.grid, rho_h, rho_2h);
            artu::ArtuSolution sol;
            sol.alpha = alpha;
            sol.K = K;
            sol.S = K + alpha;
            sol.P = K * alpha;
            sol.mse = artu::mse_value(alpha, K, artu::ArtuInputs{opts.grid->R, rho_h, rho_2h});
            const auto [e1, e2] =
                artu::residuals(alpha, K, artu::ArtuInputs{opts.grid->R, rho_h, rho_2h});
            sol.residual_norm = std::sqrt(e1 * e1 + e2 * e2);
            sol.acf_degeneracy = rho_h * rho_h - rho_2h;
            return sol;
        } catch (const Error&) {
            // fall through to the direct solve
        }
    }
    return artu::solve(artu::ArtuInputs{opts.artu_r, rho_h, rho_2h}, opts.solver);
}

std::vector<ForecastSeries> run_comb(const MeteoSeries& series, const TrendSeries& trend,
                                     std::span<const int> horizons, std::size_t split_index,
                                     const ModelOptions& opts) {
    if (opts.comb_members.size() < 2) {
        throw EmptyEnsemble("models: ensemble needs at least two members");
    }
    std::vector<std::vector<ForecastSeries>> member_runs;
    for (ModelId member : opts.comb_members) {
        if (member == ModelId::COMB) {
            throw std::invalid_argument("models: ensemble cannot contain itself");
        }
        member_runs.push_back(run_model(member, series, trend, horizons, split_index, opts));
    }

    std::vector<ForecastSeries> out;
    for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
        ForecastSeries fs;
        fs.model = ModelId::COMB;
        fs.horizon = horizons[hi];
        fs.predictions.assign(series.size(), 0.0);
        fs.valid.assign(series.size(), 0);
        std::vector<double> members(member_runs.size());
        for (std::size_t j = 0; j < series.size(); ++j) {
            bool all = true;
            for (std::size_t k = 0; k < member_runs.size(); ++k) {
                if (!member_runs[k][hi].is_valid(j)) {
                    all = false;
                    break;
                }
                members[k] = member_runs[k][hi].predictions[j];
            }
            if (all) {
                fs.predictions[j] = combine(members);
                fs.valid[j] = 1;
            }
        }
        out.push_back(std::move(fs));
    }
    return out;
}

}  // namespace

std::vector<ForecastSeries> run_model(ModelId model, const MeteoSeries& series,
                                      const TrendSeries& trend, std::span<const int> horizons,
                                      std::size_t split_index, const ModelOptions& opts) {
    if (series.size() != trend.size()) {
        throw AlignmentError("models: series and trend differ in length");
    }
    if (split_index < 2 || split_index >= series.size()) {
        throw std::invalid_argument("models: split index leaves an empty sample");
    }
    if (horizons.empty()) throw std::invalid_argument("models: no horizons requested");
    for (int h : horizons) {
        if (h < 1 || split_index + static_cast<std::size_t>(h) >= series.size()) {
            throw std::invalid_argument("models: horizon " + std::to_string(h) +
                                        " leaves no out-of-sample target");
        }
    }

    if (model == ModelId::COMB) return run_comb(series, trend, horizons, split_index, opts);

    const KappaSeries kappa = to_kappa(series, trend, opts.epsilon, opts.beta, opts.night_mode);
    const std::size_t len = series.size();

    std::vector<ForecastSeries> out;
    for (int h : horizons) {
        ForecastSeries fs;
        fs.model = model;
        fs.horizon = h;
        fs.predictions.assign(len, 0.0);
        fs.valid.assign(len, 0);

        // Per-horizon parameters, in-sample only.
        double kappa_mean = 0.0;
        double rho_h = 0.0;
        double es_alpha = 0.0;
        artu::ArtuSolution sol;
        if (model != ModelId::PER) kappa_mean = mean_insample(kappa, split_index);
        if (model == ModelId::CLIPER) rho_h = insample_rho(kappa, split_index, h);
        if (model == ModelId::ES) {
            if (opts.es_alpha) {
                es_alpha = *opts.es_alpha;
                if (!(es_alpha > 0.0 && es_alpha <= 1.0)) {
                    throw InvalidAlpha("models: smoothing weight must lie in (0, 1]");
                }
            } else {
                // A non-positive estimated correlation would leave the
                // weight outside its domain; floor it so the model
                // degrades toward climatology instead of failing.
                const int lag = opts.es_alpha_at_horizon ? h : 1;
                es_alpha = std::clamp(insample_rho(kappa, split_index, lag), 1e-6, 1.0);
            }
        }
        if (model == ModelId::ARTU) {
            sol = artu_coefficients(insample_rho(kappa, split_index, h),
                                    insample_rho(kappa, split_index, 2 * h), opts);
        }

        const std::size_t hh = static_cast<std::size_t>(h);
        for (std::size_t t = split_index; t + hh < len; ++t) {
            const std::size_t target = t + hh;
            double pred = 0.0;
            bool ok = true;
            try {
                switch (model) {
                    case ModelId::PER: {
                        ForecastRequest req{h, t, opts.beta, opts.epsilon};
                        pred = persistence(series, trend, req);
                        break;
                    }
                    case ModelId::CLIM: {
                        if (!trend.is_valid(target)) throw NoDaylightHistory("");
                        pred = clamp_pred(kappa_mean, opts.beta) * trend.values[target];
                        break;
                    }
                    case ModelId::CLIPER: {
                        const auto last = backtrack_kappa(kappa, t);
                        if (!last || !trend.is_valid(target)) throw NoDaylightHistory("");
                        pred = cliper_kernel(kappa.values[*last], kappa_mean, rho_h, opts.beta) *
                               trend.values[target];
                        break;
                    }
                    case ModelId::ES: {
                        if (!trend.is_valid(target)) throw NoDaylightHistory("");
                        pred = es_kernel(kappa, t, es_alpha, opts.es_window, kappa_mean,
                                         opts.beta) *
                               trend.values[target];
                        break;
                    }
                    case ModelId::ARTU: {
                        if (!trend.is_valid(target)) throw NoDaylightHistory("");
                        const double k_t = resolve_kappa(kappa, t).value_or(kappa_mean);
                        const double k_tmh =
                            t >= hh ? resolve_kappa(kappa, t - hh).value_or(kappa_mean)
                                    : kappa_mean;
                        pred = artu_kernel(k_t, k_tmh, kappa_mean, sol.S, sol.P, opts.beta) *
                               trend.values[target];
                        break;
                    }
                    case ModelId::COMB: break;  // handled above
                }
            } catch (const NoDaylightHistory&) {
                ok = false;
            }
            if (ok) {
                fs.predictions[target] = pred;
                fs.valid[target] = 1;
            }
        }
        out.push_back(std::move(fs));
    }
    return out;
}

}  // namespace srm::models
