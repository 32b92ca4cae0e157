#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <utility>
#include <vector>

#include "srm/artu.hpp"

namespace srm::artu {

/// Dense lattice of solved (alpha, K) coefficients over the
/// rho(h) x rho(2h) square at a fixed noise ratio R. Cells where no
/// admissible solution exists are masked.
struct CoefficientGrid {
    double R = 0.0;
    double step = 0.01;
    std::vector<double> rho1_axis;   ///< ascending, spans [-1, 1]
    std::vector<double> rho2_axis;
    std::vector<double> alpha_table;  ///< row major, rho1-major
    std::vector<double> K_table;
    std::vector<double> mse_table;
    std::vector<std::uint8_t> solved;  ///< 1 = admissible solution stored

    std::size_t n1() const { return rho1_axis.size(); }
    std::size_t n2() const { return rho2_axis.size(); }
    std::size_t index(std::size_t i, std::size_t j) const { return i * n2() + j; }
    bool is_solved(std::size_t i, std::size_t j) const { return solved[index(i, j)] != 0; }

    /// Cells near the rho(h)=0 line or the rho(2h)=rho(h)^2 parabola, where
    /// distinct root families meet; flagged for downstream diagnostics.
    bool is_boundary_cell(std::size_t i, std::size_t j) const;
};

struct GridGenOptions {
    double step = 0.01;
    SolverOptions solver;             ///< per-cell settings; the seed acts as master seed
    unsigned threads = 1;             ///< cells are independent; output is scheduling-invariant
};

/// Deterministic per-cell seed derived from the master seed (splitmix64 mix).
std::uint64_t cell_seed(std::uint64_t master, std::size_t i, std::size_t j);

/// Solve every lattice cell of the [-1, 1]^2 square at resolution `step`.
/// Cells on the |rho| = 1 rim or without an admissible root are masked
/// rather than failing the sweep.
CoefficientGrid generate_grid(double R, const GridGenOptions& opts = {});

/// Bilinear interpolation of alpha and K, independently, from the four
/// cells surrounding the query point.
/// Throws OutsideGrid beyond the axes and NeighborUnsolved when any of the
/// four corners is masked (callers may fall back to a direct solve).
std::pair<double, double> interpolate(const CoefficientGrid& grid, double rho1, double rho2);

/// Grid file v1: a `# artu-grid v1, R=<val>, step=<val>` header, a column
/// header, then `rho1,rho2,alpha,K,mse,solved` rows in rho1-major ascending
/// order. Doubles carry 17 significant digits so a write/read round trip is
/// lossless.
void write_grid_csv(const CoefficientGrid& grid, std::ostream& out);
CoefficientGrid read_grid_csv(std::istream& in);

}  // namespace srm::artu
