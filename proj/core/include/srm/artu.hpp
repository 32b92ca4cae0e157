#pragma once

#include <cstdint>
#include <utility>

namespace srm::artu {

/// Inputs of the coefficient problem: the measurement-noise ratio
/// R = sigma_v^2 / sigma_x^2 and the autocorrelations of the
/// deseasonalized signal at the forecast lag and at twice that lag.
struct ArtuInputs {
    double R = 0.0;
    double rho1 = 0.0;  ///< rho(h), |rho1| < 1
    double rho2 = 0.0;  ///< rho(2h), |rho2| < 1

    /// Throws std::invalid_argument when outside the solvable domain
    /// (R in [0, 1], |rho1| < 1, |rho2| < 1).
    void validate() const;

    /// Distance from the exponential-decay family rho(2h) = rho(h)^2,
    /// where filtering degenerates and the model collapses to a plain
    /// lag-h regression. Zero means the inputs sit on that parabola.
    double acf_degeneracy() const { return rho1 * rho1 - rho2; }
};

/// A solved coefficient pair with its derived parameterization
/// S = K + alpha (weight of the newest sample) and P = K * alpha
/// (weight of the lag-h sample), plus solution diagnostics.
struct ArtuSolution {
    double alpha = 0.0;
    double K = 0.0;
    double S = 0.0;
    double P = 0.0;
    double mse = 0.0;            ///< objective value; comparisons only (integration constant fixed to 0)
    double residual_norm = 0.0;  ///< Euclidean norm of the stationarity system at the root
    double acf_degeneracy = 0.0; ///< rho1^2 - rho2 of the inputs that produced the solution
};

/// Residuals of the two stationarity equations (left minus right side);
/// both vanish at an optimal (alpha, K).
std::pair<double, double> residuals(double alpha, double K, const ArtuInputs& in);

/// Tiny dense 2x2 matrix, row major.
struct Mat2 {
    double a00 = 0.0, a01 = 0.0, a10 = 0.0, a11 = 0.0;
};

/// Analytic Jacobian of the residual system. The first column direction is
/// K and the second alpha, matching the residual ordering; since the
/// residuals are the gradient of the objective, this is also its Hessian
/// and is symmetric.
Mat2 jacobian(double alpha, double K, const ArtuInputs& in);

/// The integrated objective (normalized mean-square forecast error up to
/// an additive constant, fixed to zero). Only differences are meaningful;
/// its partial derivatives with respect to K and alpha are `residuals`.
double mse_value(double alpha, double K, const ArtuInputs& in);

struct SolverOptions {
    int restarts = 100;      ///< number of random initializations
    int max_iter = 200;      ///< Levenberg-Marquardt iteration cap per start
    double tol = 1e-10;      ///< residual-norm convergence target
    std::uint64_t seed = 42;
};

/// Solve for (alpha, K) by multi-start Levenberg-Marquardt.
///
/// Starts are uniform in [-1, 1]^2, preceded by one deterministic start at
/// (rho1, 0), the exact root on the exponential-decay parabola. Converged
/// roots must satisfy |alpha| < 1 (process stability) and the second-order
/// minimum conditions, evaluated by central finite differences of the
/// residuals: positive Hessian determinant (to a -1e-9 floor, so exactly
/// semidefinite minima survive) and positive d2/dK2. Among admissible
/// roots the smallest objective wins; objective ties below 1e-10 break
/// toward smaller |K|.
///
/// Throws NoAdmissibleSolution when no start yields an admissible root.
ArtuSolution solve(const ArtuInputs& in, const SolverOptions& opts = {});

}  // namespace srm::artu
