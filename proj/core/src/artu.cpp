#include "srm/artu.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "srm/errors.hpp"

namespace srm::artu {

void ArtuInputs::validate() const {
    if (!(R >= 0.0 && R <= 1.0)) {
        throw std::invalid_argument("artu: R must lie in [0, 1]");
    }
    if (!(std::abs(rho1) < 1.0) || !(std::abs(rho2) < 1.0)) {
        throw std::invalid_argument("artu: autocorrelations must lie in (-1, 1)");
    }
}

std::pair<double, double> residuals(double alpha, double K, const ArtuInputs& in) {
    const double r1 = in.rho1;
    const double r2 = in.rho2;
    const double e1 = K * (1.0 + in.R) + alpha * (1.0 + r2) - 2.0 * K * alpha * r1 -
                      alpha * alpha * r1 + K * alpha * alpha - r1;
    const double e2 = K * (1.0 + r2) - 2.0 * K * alpha * r1 + alpha - K * K * r1 +
                      K * K * alpha - r1;
    return {e1, e2};
}

Mat2 jacobian(double alpha, double K, const ArtuInputs& in) {
    const double r1 = in.rho1;
    const double r2 = in.rho2;
    const double off = r2 + 2.0 * K * alpha - 2.0 * K * r1 - 2.0 * alpha * r1 + 1.0;
    Mat2 j;
    j.a00 = alpha * alpha - 2.0 * r1 * alpha + 1.0 + in.R;
    j.a01 = off;
    j.a10 = off;
    j.a11 = K * K - 2.0 * K * r1 + 1.0;
    return j;
}

double mse_value(double alpha, double K, const ArtuInputs& in) {
    const double r1 = in.rho1;
    const double r2 = in.rho2;
    return K * K * (in.R / 2.0 + 0.5) - K * r1 -
           alpha * (K * K * r1 - K * (r2 + 1.0) + r1) +
           alpha * alpha * (K * K / 2.0 - K * r1 + 0.5);
}

namespace {

struct Root {
    double alpha;
    double K;
    double mse;
    double residual_norm;
};

double residual_norm(double alpha, double K, const ArtuInputs& in) {
    const auto [e1, e2] = residuals(alpha, K, in);
    return std::sqrt(e1 * e1 + e2 * e2);
}

/// One Levenberg-Marquardt descent on the residual system from (alpha0, K0).
std::optional<Root> lm_from(double alpha0, double K0, const ArtuInputs& in,
                            const SolverOptions& opts) {
    double alpha = alpha0;
    double K = K0;
    double lambda = 1e-3;
    double norm = residual_norm(alpha, K, in);

    for (int iter = 0; iter < opts.max_iter && norm >= opts.tol; ++iter) {
        const auto [e1, e2] = residuals(alpha, K, in);
        const Mat2 j = jacobian(alpha, K, in);

        // Normal equations J^T J delta = J^T r with Marquardt damping on the
        // diagonal; variables ordered (K, alpha) like the residual system.
        const double a00 = j.a00 * j.a00 + j.a10 * j.a10;
        const double a01 = j.a00 * j.a01 + j.a10 * j.a11;
        const double a11 = j.a01 * j.a01 + j.a11 * j.a11;
        const double g0 = j.a00 * e1 + j.a10 * e2;
        const double g1 = j.a01 * e1 + j.a11 * e2;

        bool stepped = false;
        for (int damp = 0; damp < 40; ++damp) {
            const double d00 = a00 + lambda * std::max(a00, 1e-12);
            const double d11 = a11 + lambda * std::max(a11, 1e-12);
            const double det = d00 * d11 - a01 * a01;
            if (det != 0.0 && std::isfinite(det)) {
                const double dK = (d11 * g0 - a01 * g1) / det;
                const double dAlpha = (d00 * g1 - a01 * g0) / det;
                const double new_K = K - dK;
                const double new_alpha = alpha - dAlpha;
                const double new_norm = residual_norm(new_alpha, new_K, in);
                if (new_norm < norm) {
                    K = new_K;
                    alpha = new_alpha;
                    norm = new_norm;
                    lambda = std::max(lambda * 0.25, 1e-12);
                    stepped = true;
                    break;
                }
            }
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
        if (!stepped) break;  // stalled; the start either converged already or is hopeless
    }

    if (!(norm < opts.tol)) return std::nullopt;
    if (!(std::abs(alpha) < 1.0)) return std::nullopt;  // process stability
    return Root{alpha, K, mse_value(alpha, K, in), norm};
}

/// Second-order admissibility via central differences of the residuals
/// (the residuals are the objective's gradient, so their differences give
/// its Hessian). Requires a positive determinant -- with a -1e-9 floor so
/// the exactly-semidefinite degenerate minimum survives -- and positive
/// curvature in the K direction.
bool is_strict_minimum(const Root& root, const ArtuInputs& in) {
    constexpr double kStep = 1e-6;
    constexpr double kDetFloor = -1e-9;
    const auto [r1p, r2p] = residuals(root.alpha, root.K + kStep, in);
    const auto [r1m, r2m] = residuals(root.alpha, root.K - kStep, in);
    const auto [s1p, s2p] = residuals(root.alpha + kStep, root.K, in);
    const auto [s1m, s2m] = residuals(root.alpha - kStep, root.K, in);
    const double h_kk = (r1p - r1m) / (2.0 * kStep);
    const double h_ka = (s1p - s1m) / (2.0 * kStep);
    const double h_ak = (r2p - r2m) / (2.0 * kStep);
    const double h_aa = (s2p - s2m) / (2.0 * kStep);
    const double det = h_kk * h_aa - h_ka * h_ak;
    return det > kDetFloor && h_kk > 0.0;
}

}  // namespace

ArtuSolution solve(const ArtuInputs& in, const SolverOptions& opts) {
    in.validate();
    if (opts.restarts < 1) throw std::invalid_argument("artu: need at least one start");

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    std::vector<Root> admissible;
    for (int start = 0; start < opts.restarts; ++start) {
        // Start 0 sits on the known exponential-decay root (rho1, 0); the
        // rest are uniform draws over the coefficient box.
        double a0, k0;
        if (start == 0) {
            a0 = in.rho1;
            k0 = 0.0;
        } else {
            a0 = unit(rng);
            k0 = unit(rng);
        }
        const auto root = lm_from(a0, k0, in, opts);
        if (root && is_strict_minimum(*root, in)) admissible.push_back(*root);
    }

    if (admissible.empty()) {
        throw NoAdmissibleSolution("artu: no admissible root for R=" + std::to_string(in.R) +
                                   ", rho1=" + std::to_string(in.rho1) +
                                   ", rho2=" + std::to_string(in.rho2));
    }

    double best_mse = admissible.front().mse;
    for (const Root& r : admissible) best_mse = std::min(best_mse, r.mse);

    // Objective ties break toward the smaller gain magnitude.
    constexpr double kMseTie = 1e-10;
    const Root* chosen = nullptr;
    for (const Root& r : admissible) {
        if (r.mse > best_mse + kMseTie) continue;
        if (!chosen || std::abs(r.K) < std::abs(chosen->K)) chosen = &r;
    }

    ArtuSolution sol;
    sol.alpha = chosen->alpha;
    sol.K = chosen->K;
    sol.S = chosen->K + chosen->alpha;
    sol.P = chosen->K * chosen->alpha;
    sol.mse = chosen->mse;
    sol.residual_norm = chosen->residual_norm;
    sol.acf_degeneracy = in.acf_degeneracy();
    return sol;
}

}  // namespace srm::artu
