#include "srm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "srm/errors.hpp"

namespace srm::stats {

namespace {

void check_shapes(std::span<const double> values, std::span<const std::uint8_t> valid) {
    if (values.size() != valid.size()) {
        throw LengthMismatch("stats: values and mask differ in length");
    }
}

}  // namespace

double mean(std::span<const double> values, std::span<const std::uint8_t> valid) {
    check_shapes(values, valid);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (valid[i]) {
            sum += values[i];
            ++count;
        }
    }
    if (count == 0) throw NoValidData("stats: mean of all-masked series");
    return sum / static_cast<double>(count);
}

double variance(std::span<const double> values, std::span<const std::uint8_t> valid) {
    check_shapes(values, valid);
    const double mu = [&] {
        try {
            return mean(values, valid);
        } catch (const NoValidData&) {
            throw NotEnoughValidData("stats: variance needs at least two valid entries");
        }
    }();
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (valid[i]) {
            const double d = values[i] - mu;
            acc += d * d;
            ++count;
        }
    }
    if (count < 2) throw NotEnoughValidData("stats: variance needs at least two valid entries");
    return acc / static_cast<double>(count);
}

AcfEstimate acf(std::span<const double> values, std::span<const std::uint8_t> valid, int lag) {
    check_shapes(values, valid);
    if (lag < 1) throw std::invalid_argument("stats: acf lag must be >= 1");

    const double mu = mean(values, valid);
    const double var = variance(values, valid);
    if (var == 0.0) throw ZeroVariance("stats: acf undefined for constant series");

    const std::size_t n = values.size();
    const std::size_t l = static_cast<std::size_t>(lag);
    double acc = 0.0;
    std::size_t pairs = 0;
    if (n > l) {
        for (std::size_t i = 0; i + l < n; ++i) {
            if (valid[i] && valid[i + l]) {
                acc += (values[i] - mu) * (values[i + l] - mu);
                ++pairs;
            }
        }
    }
    if (pairs < 2) throw NotEnoughValidPairs("stats: acf needs at least two valid pairs");

    double rho = acc / (static_cast<double>(pairs) * var);
    rho = std::clamp(rho, -1.0, 1.0);
    return AcfEstimate{lag, rho, pairs};
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("stats: normal_quantile requires p in (0, 1)");
    }
    // Coefficients from Peter Acklam's inverse normal CDF approximation.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace srm::stats
