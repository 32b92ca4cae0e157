#include "srm/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <stdexcept>

#include "srm/errors.hpp"
#include "srm/stats.hpp"

namespace srm {

std::string to_string(NightMode mode) {
    return mode == NightMode::SET_TO_ONE ? "set-to-one" : "exclude";
}

NightMode night_mode_from_string(const std::string& name) {
    if (name == "set-to-one") return NightMode::SET_TO_ONE;
    if (name == "exclude") return NightMode::EXCLUDE;
    throw std::invalid_argument("series: unknown night mode '" + name + "'");
}

// ---- civil time ------------------------------------------------------------

namespace {

// Howard Hinnant's civil-from-days algorithms (public domain).
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<int>(yoe) + static_cast<int>(era) * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

bool parse_fixed_uint(const char* s, int width, unsigned& out) {
    out = 0;
    for (int i = 0; i < width; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        out = out * 10 + static_cast<unsigned>(s[i] - '0');
    }
    return true;
}

}  // namespace

std::optional<std::int64_t> parse_iso8601_utc(const std::string& text) {
    // YYYY-MM-DD{T| }HH:MM:SS with optional trailing 'Z'.
    if (text.size() < 19) return std::nullopt;
    const char* s = text.c_str();
    unsigned yy, mo, dd, hh, mi, ss;
    if (!parse_fixed_uint(s, 4, yy) || s[4] != '-' || !parse_fixed_uint(s + 5, 2, mo) ||
        s[7] != '-' || !parse_fixed_uint(s + 8, 2, dd) || (s[10] != 'T' && s[10] != ' ') ||
        !parse_fixed_uint(s + 11, 2, hh) || s[13] != ':' || !parse_fixed_uint(s + 14, 2, mi) ||
        s[16] != ':' || !parse_fixed_uint(s + 17, 2, ss)) {
        return std::nullopt;
    }
    std::size_t rest = 19;
    if (rest < text.size() && text[rest] == 'Z') ++rest;
    if (rest != text.size()) return std::nullopt;
    if (mo < 1 || mo > 12 || dd < 1 || dd > 31 || hh > 23 || mi > 59 || ss > 60) {
        return std::nullopt;
    }
    const std::int64_t days = days_from_civil(static_cast<int>(yy), mo, dd);
    return days * 86400 + hh * 3600 + mi * 60 + ss;
}

std::string format_iso8601_utc(std::int64_t unix_s) {
    std::int64_t days = unix_s / 86400;
    std::int64_t sod = unix_s % 86400;
    if (sod < 0) {
        sod += 86400;
        --days;
    }
    int y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", y, m, d,
                  static_cast<long long>(sod / 3600), static_cast<long long>((sod / 60) % 60),
                  static_cast<long long>(sod % 60));
    return buf;
}

// ---- CSV ingestion -----------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    out.push_back(cell);
    return out;
}

std::optional<double> parse_double_cell(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size()) return std::nullopt;
    if (std::isnan(v)) return std::nullopt;
    return v;
}

int find_column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

}  // namespace

IngestResult ingest_csv(std::istream& source, const CsvSchema& schema, int step_minutes) {
    if (step_minutes <= 0) throw std::invalid_argument("series: step must be positive");

    std::string line;
    if (!std::getline(source, line)) throw MalformedRow(1, "empty input");
    const auto header = split_csv_line(line);
    const int ts_col = find_column(header, schema.timestamp_col);
    const int val_col = find_column(header, schema.value_col);
    if (ts_col < 0) throw MalformedRow(1, "missing column '" + schema.timestamp_col + "'");
    if (val_col < 0) throw MalformedRow(1, "missing column '" + schema.value_col + "'");
    const int cs_col = find_column(header, schema.clearsky_col);
    const int zen_col = find_column(header, schema.zenith_col);

    struct Row {
        std::int64_t ts;
        std::optional<double> value;
        std::optional<double> clearsky;
        std::optional<double> zenith;
    };
    std::vector<Row> rows;
    IngestResult result;

    std::size_t line_no = 1;
    while (std::getline(source, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw MalformedRow(line_no, "expected " + std::to_string(header.size()) +
                                            " cells, got " + std::to_string(cells.size()));
        }
        const auto ts = parse_iso8601_utc(cells[static_cast<std::size_t>(ts_col)]);
        if (!ts) throw MalformedRow(line_no, "unparsable timestamp");
        if (!rows.empty() && *ts <= rows.back().ts) {
            throw NonMonotonicTimestamps("series: timestamps not strictly increasing at line " +
                                         std::to_string(line_no));
        }
        Row row;
        row.ts = *ts;
        row.value = parse_double_cell(cells[static_cast<std::size_t>(val_col)]);
        if (!row.value) ++result.unparsable_cells;
        if (cs_col >= 0) row.clearsky = parse_double_cell(cells[static_cast<std::size_t>(cs_col)]);
        if (zen_col >= 0) row.zenith = parse_double_cell(cells[static_cast<std::size_t>(zen_col)]);
        rows.push_back(row);
    }
    if (rows.empty()) throw MalformedRow(line_no, "no data rows");

    const std::int64_t step_s = static_cast<std::int64_t>(step_minutes) * 60;
    const std::int64_t span = rows.back().ts - rows.front().ts;
    const std::size_t len = static_cast<std::size_t>(span / step_s) + 1;

    MeteoSeries series;
    series.start_unix_s = rows.front().ts;
    series.step_minutes = step_minutes;
    series.unit = schema.unit;
    series.values.assign(len, 0.0);
    series.valid.assign(len, 0);

    TrendSeries clearsky;
    clearsky.start_unix_s = series.start_unix_s;
    clearsky.step_minutes = step_minutes;
    if (cs_col >= 0) {
        clearsky.values.assign(len, 0.0);
        clearsky.valid.assign(len, 0);
    }
    std::vector<double> zenith;
    if (zen_col >= 0) zenith.assign(len, std::nan(""));

    for (const Row& row : rows) {
        const std::int64_t offset = row.ts - series.start_unix_s;
        if (offset % step_s != 0) {
            throw StepMismatch("series: timestamp " + format_iso8601_utc(row.ts) +
                               " is not on the " + std::to_string(step_minutes) +
                               "-minute grid");
        }
        const std::size_t i = static_cast<std::size_t>(offset / step_s);
        if (row.value) {
            const bool negative_irradiance =
                schema.unit == Unit::IRRADIANCE_WH_M2 && *row.value < 0.0;
            if (negative_irradiance) {
                ++result.negative_masked;
            } else {
                series.values[i] = *row.value;
                series.valid[i] = 1;
            }
        }
        if (cs_col >= 0 && row.clearsky && *row.clearsky >= 0.0) {
            clearsky.values[i] = *row.clearsky;
            clearsky.valid[i] = 1;
        }
        if (zen_col >= 0 && row.zenith) zenith[i] = *row.zenith;
    }
    result.gap_samples = len - rows.size();

    result.series = std::move(series);
    if (cs_col >= 0) result.clearsky = std::move(clearsky);
    if (zen_col >= 0) result.zenith_deg = std::move(zenith);
    return result;
}

// ---- operations ------------------------------------------------------------

MeteoSeries quality_filter(const MeteoSeries& series, std::span<const double> zenith_deg) {
    if (zenith_deg.size() != series.size()) {
        throw LengthMismatch("series: zenith sequence not aligned with series");
    }
    MeteoSeries out = series;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!std::isnan(zenith_deg[i]) && zenith_deg[i] > 85.0) out.valid[i] = 0;
    }
    return out;
}

KappaSeries to_kappa(const MeteoSeries& series, const TrendSeries& trend, double epsilon,
                     double beta, NightMode night_mode) {
    if (series.size() != trend.size()) {
        throw AlignmentError("series: series and trend differ in length");
    }
    if (!(epsilon >= 1.0 && epsilon <= 30.0)) {
        throw std::invalid_argument("series: epsilon must lie in [1, 30]");
    }
    if (!(beta >= 1.0 && beta <= 2.0)) {
        throw std::invalid_argument("series: beta must lie in [1, 2]");
    }

    KappaSeries kappa;
    kappa.beta_cap = beta;
    kappa.epsilon = epsilon;
    kappa.night_mode = night_mode;
    kappa.values.assign(series.size(), 0.0);
    kappa.valid.assign(series.size(), 0);

    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!series.is_valid(i)) continue;  // original masks survive both modes
        const bool night = !trend.is_valid(i) || trend.values[i] < epsilon;
        if (night) {
            if (night_mode == NightMode::SET_TO_ONE) {
                kappa.values[i] = 1.0;
                kappa.valid[i] = 1;
            }
            continue;
        }
        const double ratio = series.values[i] / trend.values[i];
        kappa.values[i] = std::clamp(ratio, 0.0, beta);
        kappa.valid[i] = 1;
    }
    return kappa;
}

TrendSeries mean_profile_trend(const MeteoSeries& series, std::size_t cycle_length) {
    if (cycle_length == 0) throw std::invalid_argument("series: cycle length must be positive");
    if (series.size() < 2 * cycle_length) {
        throw InsufficientHistory("series: need at least two cycles of history");
    }

    std::vector<double> sums(cycle_length, 0.0);
    std::vector<std::size_t> counts(cycle_length, 0);
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.is_valid(i)) {
            sums[i % cycle_length] += series.values[i];
            ++counts[i % cycle_length];
        }
    }

    TrendSeries trend;
    trend.start_unix_s = series.start_unix_s;
    trend.step_minutes = series.step_minutes;
    trend.values.assign(series.size(), 0.0);
    trend.valid.assign(series.size(), 0);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::size_t phase = i % cycle_length;
        if (counts[phase] > 0) {
            trend.values[i] = sums[phase] / static_cast<double>(counts[phase]);
            trend.valid[i] = 1;
        }
    }
    return trend;
}

double seasonality_threshold(double sum_rho_sq, int n, double confidence) {
    if (n < 1) throw std::invalid_argument("series: subsample size must be positive");
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw std::invalid_argument("series: confidence must lie in (0, 1)");
    }
    const double alpha = 1.0 - confidence;
    // Conventional z-table value (1.645, 1.960, ...), three decimals.
    const double q = std::round(stats::normal_quantile(1.0 - alpha / 2.0) * 1000.0) / 1000.0;
    return q * std::sqrt((1.0 + 2.0 * sum_rho_sq) / static_cast<double>(n));
}

SeasonalityVerdict seasonality_test(const KappaSeries& kappa, int m, int n, double confidence,
                                    std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("series: seasonal period must be >= 1");
    if (n < 2) throw std::invalid_argument("series: subsample size must be >= 2");
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw std::invalid_argument("series: confidence must lie in (0, 1)");
    }

    const std::size_t len = kappa.size();
    std::size_t valid_count = 0;
    for (std::size_t i = 0; i < len; ++i) {
        if (kappa.is_valid(i)) ++valid_count;
    }
    if (valid_count < static_cast<std::size_t>(m + n)) {
        throw NotEnoughValidData("series: seasonality test needs m + n valid samples");
    }

    // Anchor points: positions where both endpoints of the lag-m pair are valid.
    const std::size_t lag_m = static_cast<std::size_t>(m);
    std::vector<std::size_t> anchors;
    for (std::size_t t = 0; t + lag_m < len; ++t) {
        if (kappa.is_valid(t) && kappa.is_valid(t + lag_m)) anchors.push_back(t);
    }
    if (anchors.size() < static_cast<std::size_t>(n)) {
        throw NotEnoughValidData("series: not enough lag-m pairs for the subsample");
    }

    // Partial Fisher-Yates draw of n anchors without replacement.
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, anchors.size() - 1);
        std::swap(anchors[i], anchors[pick(rng)]);
    }
    anchors.resize(static_cast<std::size_t>(n));

    const double mu = stats::mean(kappa.values, kappa.valid);
    const double var = stats::variance(kappa.values, kappa.valid);
    if (var == 0.0) throw ZeroVariance("series: seasonality test on constant series");

    std::vector<double> rho(static_cast<std::size_t>(m), 0.0);
    for (int lag = 1; lag <= m; ++lag) {
        double acc = 0.0;
        std::size_t count = 0;
        for (const std::size_t t : anchors) {
            const std::size_t u = t + static_cast<std::size_t>(lag);
            if (u < len && kappa.is_valid(u)) {
                acc += (kappa.values[t] - mu) * (kappa.values[u] - mu);
                ++count;
            }
        }
        if (count < 2) throw NotEnoughValidData("series: lag " + std::to_string(lag) +
                                                " lacks valid pairs in the subsample");
        rho[static_cast<std::size_t>(lag - 1)] =
            std::clamp(acc / (static_cast<double>(count) * var), -1.0, 1.0);
    }

    double sum_sq = 0.0;
    for (int i = 0; i + 1 < m; ++i) sum_sq += rho[static_cast<std::size_t>(i)] * rho[static_cast<std::size_t>(i)];

    SeasonalityVerdict verdict;
    verdict.m = m;
    verdict.n = n;
    verdict.confidence = confidence;
    verdict.rho_m = rho[static_cast<std::size_t>(m - 1)];
    verdict.t_m = seasonality_threshold(sum_sq, n, confidence);
    verdict.deseasonalized = std::abs(verdict.rho_m) < verdict.t_m;
    return verdict;
}

}  // namespace srm
