#include "srm/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "srm/errors.hpp"

namespace srm::metrics {

namespace {

struct ErrorSums {
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    double normalizer = 0.0;
    std::size_t count = 0;
};

ErrorSums accumulate_errors(const MeteoSeries& actual, const models::ForecastSeries& forecast,
                            std::size_t eval_begin) {
    if (forecast.size() != actual.size()) {
        throw AlignmentError("metrics: forecast not aligned with measurements");
    }
    const std::size_t h = static_cast<std::size_t>(forecast.horizon);
    ErrorSums sums;
    for (std::size_t t = eval_begin; t + h < actual.size(); ++t) {
        const std::size_t target = t + h;
        if (!actual.is_valid(t) || !actual.is_valid(target) || !forecast.is_valid(target)) {
            continue;
        }
        const double err = actual.values[target] - forecast.predictions[target];
        sums.abs_sum += std::abs(err);
        sums.sq_sum += err * err;
        sums.normalizer += actual.values[t];
        ++sums.count;
    }
    if (sums.count == 0) throw NotEnoughValidData("metrics: no valid forecast pairs");
    if (sums.normalizer <= 0.0) throw ZeroNormalizer("metrics: measured sum is not positive");
    return sums;
}

}  // namespace

double nmae(const MeteoSeries& actual, const models::ForecastSeries& forecast,
            std::size_t eval_begin) {
    const ErrorSums sums = accumulate_errors(actual, forecast, eval_begin);
    return 100.0 * sums.abs_sum / sums.normalizer;
}

double nrmse(const MeteoSeries& actual, const models::ForecastSeries& forecast,
             std::size_t eval_begin) {
    const ErrorSums sums = accumulate_errors(actual, forecast, eval_begin);
    return 100.0 * std::sqrt(static_cast<double>(sums.count)) * std::sqrt(sums.sq_sum) /
           sums.normalizer;
}

double mase(const MeteoSeries& actual, std::span<const models::ForecastSeries> forecasts, int m,
            std::size_t eval_begin) {
    if (m < 0) throw std::invalid_argument("metrics: period must be >= 0");
    if (forecasts.empty()) throw std::invalid_argument("metrics: no forecasts supplied");
    const std::size_t lag = static_cast<std::size_t>(m == 0 ? 1 : m);

    double numerator = 0.0;
    for (const auto& fs : forecasts) {
        if (fs.size() != actual.size()) {
            throw AlignmentError("metrics: forecast not aligned with measurements");
        }
        const std::size_t h = static_cast<std::size_t>(fs.horizon);
        for (std::size_t t = eval_begin; t + h < actual.size(); ++t) {
            const std::size_t target = t + h;
            if (!actual.is_valid(t) || !actual.is_valid(target) || !fs.is_valid(target)) {
                continue;
            }
            numerator += std::abs(actual.values[target] - fs.predictions[target]);
        }
    }

    double denominator = 0.0;
    for (std::size_t t = eval_begin; t < actual.size(); ++t) {
        if (t < lag || !actual.is_valid(t) || !actual.is_valid(t - lag)) continue;
        denominator += std::abs(actual.values[t] - actual.values[t - lag]);
    }
    if (denominator == 0.0) {
        throw ZeroDenominator("metrics: naive seasonal error vanishes");
    }
    return (100.0 / static_cast<double>(forecasts.size())) * numerator / denominator;
}

BenchmarkReport build_report(const MeteoSeries& actual, std::span<const ModelRun> runs,
                             std::size_t split_index, int mase_m,
                             const BenchmarkReport::Meta& meta) {
    BenchmarkReport report;
    report.meta = meta;
    report.meta.split_index = split_index;
    report.meta.mase_m = mase_m;
    for (const ModelRun& run : runs) {
        const std::string name = models::to_string(run.id);
        for (const auto& fs : run.forecasts) {
            BenchmarkReport::Cell cell;
            cell.model = name;
            cell.horizon = fs.horizon;
            cell.nmae = nmae(actual, fs, split_index);
            cell.nrmse = nrmse(actual, fs, split_index);
            report.cells.push_back(std::move(cell));
        }
        report.mase_by_model.emplace_back(name, mase(actual, run.forecasts, mase_m, split_index));
    }
    return report;
}

BenchmarkReport build_report(const MeteoSeries& series, const TrendSeries& trend,
                             std::span<const models::ModelId> model_ids,
                             std::span<const int> horizons, std::size_t split_index, int mase_m,
                             const models::ModelOptions& opts, const std::string& site_id) {
    std::vector<ModelRun> runs;
    for (models::ModelId id : model_ids) {
        runs.push_back(
            ModelRun{id, models::run_model(id, series, trend, horizons, split_index, opts)});
    }
    BenchmarkReport::Meta meta;
    meta.site_id = site_id;
    meta.horizons.assign(horizons.begin(), horizons.end());
    meta.r_value = opts.artu_r;
    meta.beta = opts.beta;
    meta.epsilon = opts.epsilon;
    meta.night_mode = to_string(opts.night_mode);
    meta.seed = opts.solver.seed;
    return build_report(series, runs, split_index, mase_m, meta);
}

// ---- serialization ------------------------------------------------------

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string to_json(const BenchmarkReport& report) {
    ordered_json meta;
    meta["site_id"] = report.meta.site_id;
    meta["split_index"] = report.meta.split_index;
    meta["horizons"] = report.meta.horizons;
    meta["r"] = report.meta.r_value;
    meta["beta"] = report.meta.beta;
    meta["epsilon"] = report.meta.epsilon;
    meta["night_mode"] = report.meta.night_mode;
    meta["mase_m"] = report.meta.mase_m;
    meta["seed"] = report.meta.seed;

    ordered_json model_block;
    for (const auto& [name, mase_val] : report.mase_by_model) {
        ordered_json horizons;
        for (const auto& cell : report.cells) {
            if (cell.model != name) continue;
            horizons[std::to_string(cell.horizon)] = {{"nmae", cell.nmae},
                                                      {"nrmse", cell.nrmse}};
        }
        model_block[name] = {{"horizons", horizons}, {"mase", mase_val}};
    }

    ordered_json root;
    root["meta"] = meta;
    root["models"] = model_block;
    return root.dump(2) + "\n";
}

BenchmarkReport report_from_json(const std::string& text) {
    const ordered_json root = ordered_json::parse(text);
    BenchmarkReport report;
    const auto& meta = root.at("meta");
    report.meta.site_id = meta.at("site_id").get<std::string>();
    report.meta.split_index = meta.at("split_index").get<std::size_t>();
    report.meta.horizons = meta.at("horizons").get<std::vector<int>>();
    report.meta.r_value = meta.at("r").get<double>();
    report.meta.beta = meta.at("beta").get<double>();
    report.meta.epsilon = meta.at("epsilon").get<double>();
    report.meta.night_mode = meta.at("night_mode").get<std::string>();
    report.meta.mase_m = meta.at("mase_m").get<int>();
    report.meta.seed = meta.at("seed").get<std::uint64_t>();

    for (const auto& [name, body] : root.at("models").items()) {
        for (const auto& [hz, metrics_obj] : body.at("horizons").items()) {
            BenchmarkReport::Cell cell;
            cell.model = name;
            cell.horizon = std::stoi(hz);
            cell.nmae = metrics_obj.at("nmae").get<double>();
            cell.nrmse = metrics_obj.at("nrmse").get<double>();
            report.cells.push_back(std::move(cell));
        }
        report.mase_by_model.emplace_back(name, body.at("mase").get<double>());
    }
    return report;
}

std::string to_csv(const BenchmarkReport& report) {
    std::ostringstream out;
    out << "model,horizon,nmae,nrmse\n";
    for (const auto& cell : report.cells) {
        out << cell.model << ',' << cell.horizon << ',' << fmt17(cell.nmae) << ','
            << fmt17(cell.nrmse) << "\n";
    }
    out << "model,mase\n";
    for (const auto& [name, value] : report.mase_by_model) {
        out << name << ',' << fmt17(value) << "\n";
    }
    return out.str();
}

std::string to_table(const BenchmarkReport& report) {
    std::ostringstream out;
    char buf[64];
    out << "model    metric ";
    for (int h : report.meta.horizons) {
        std::snprintf(buf, sizeof(buf), " h=%-5d", h);
        out << buf;
    }
    out << "\n";
    for (const auto& [name, mase_val] : report.mase_by_model) {
        std::snprintf(buf, sizeof(buf), "%-8s nRMSE  ", name.c_str());
        out << buf;
        for (int h : report.meta.horizons) {
            for (const auto& cell : report.cells) {
                if (cell.model == name && cell.horizon == h) {
                    std::snprintf(buf, sizeof(buf), " %7.2f", cell.nrmse);
                    out << buf;
                }
            }
        }
        out << "\n         nMAE   ";
        for (int h : report.meta.horizons) {
            for (const auto& cell : report.cells) {
                if (cell.model == name && cell.horizon == h) {
                    std::snprintf(buf, sizeof(buf), " %7.2f", cell.nmae);
                    out << buf;
                }
            }
        }
        std::snprintf(buf, sizeof(buf), "\n         MASE    %7.2f\n", mase_val);
        out << buf;
    }
    return out.str();
}

}  // namespace srm::metrics
