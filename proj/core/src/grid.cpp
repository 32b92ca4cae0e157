#include "srm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "srm/errors.hpp"

namespace srm::artu {

bool CoefficientGrid::is_boundary_cell(std::size_t i, std::size_t j) const {
    const double r1 = rho1_axis[i];
    const double r2 = rho2_axis[j];
    return std::abs(r1) < step || std::abs(r1 * r1 - r2) < step;
}

std::uint64_t cell_seed(std::uint64_t master, std::size_t i, std::size_t j) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(master ^ (0x517cc1b727220a95ULL * (i + 1))) ^ (0x2545f4914f6cdd1dULL * (j + 1)));
}

namespace {

std::vector<double> make_axis(double step) {
    if (!(step > 0.0 && step <= 1.0)) {
        throw std::invalid_argument("grid: step must lie in (0, 1]");
    }
    const double cells = 2.0 / step;
    const auto n = static_cast<std::size_t>(std::llround(cells));
    if (std::abs(cells - static_cast<double>(n)) > 1e-9) {
        throw std::invalid_argument("grid: step must divide the [-1, 1] span evenly");
    }
    std::vector<double> axis(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        axis[i] = -1.0 + static_cast<double>(i) * step;
    }
    axis.front() = -1.0;
    axis.back() = 1.0;
    return axis;
}

}  // namespace

CoefficientGrid generate_grid(double R, const GridGenOptions& opts) {
    CoefficientGrid grid;
    grid.R = R;
    grid.step = opts.step;
    grid.rho1_axis = make_axis(opts.step);
    grid.rho2_axis = grid.rho1_axis;

    const std::size_t n1 = grid.n1();
    const std::size_t n2 = grid.n2();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    grid.alpha_table.assign(n1 * n2, nan);
    grid.K_table.assign(n1 * n2, nan);
    grid.mse_table.assign(n1 * n2, nan);
    grid.solved.assign(n1 * n2, 0);

    auto solve_row_range = [&](std::size_t row_begin, std::size_t row_end) {
        for (std::size_t i = row_begin; i < row_end; ++i) {
            for (std::size_t j = 0; j < n2; ++j) {
                const double r1 = grid.rho1_axis[i];
                const double r2 = grid.rho2_axis[j];
                if (std::abs(r1) >= 1.0 || std::abs(r2) >= 1.0) continue;  // rim stays masked
                SolverOptions cell_opts = opts.solver;
                cell_opts.seed = cell_seed(opts.solver.seed, i, j);
                try {
                    const ArtuSolution sol = solve(ArtuInputs{R, r1, r2}, cell_opts);
                    const std::size_t idx = grid.index(i, j);
                    grid.alpha_table[idx] = sol.alpha;
                    grid.K_table[idx] = sol.K;
                    grid.mse_table[idx] = sol.mse;
                    grid.solved[idx] = 1;
                } catch (const NoAdmissibleSolution&) {
                    // recorded by the mask
                }
            }
        }
    };

    const unsigned threads = std::max(1u, opts.threads);
    if (threads == 1) {
        solve_row_range(0, n1);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n1 + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = std::min(n1, static_cast<std::size_t>(t) * chunk);
            const std::size_t end = std::min(n1, begin + chunk);
            if (begin < end) pool.emplace_back(solve_row_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return grid;
}

std::pair<double, double> interpolate(const CoefficientGrid& grid, double rho1, double rho2) {
    if (grid.n1() < 2 || grid.n2() < 2) throw OutsideGrid("grid: too small to interpolate");
    const auto& a1 = grid.rho1_axis;
    const auto& a2 = grid.rho2_axis;
    if (rho1 < a1.front() || rho1 > a1.back() || rho2 < a2.front() || rho2 > a2.back()) {
        throw OutsideGrid("grid: query outside the axis range");
    }

    auto locate = [](const std::vector<double>& axis, double x) {
        auto it = std::upper_bound(axis.begin(), axis.end(), x);
        std::size_t hi = static_cast<std::size_t>(it - axis.begin());
        if (hi == 0) hi = 1;
        if (hi == axis.size()) hi = axis.size() - 1;
        return hi - 1;  // cell [lo, lo+1] containing x
    };
    const std::size_t i = locate(a1, rho1);
    const std::size_t j = locate(a2, rho2);

    if (!grid.is_solved(i, j) || !grid.is_solved(i + 1, j) || !grid.is_solved(i, j + 1) ||
        !grid.is_solved(i + 1, j + 1)) {
        throw NeighborUnsolved("grid: a surrounding cell has no solution");
    }

    const double u = (rho1 - a1[i]) / (a1[i + 1] - a1[i]);
    const double v = (rho2 - a2[j]) / (a2[j + 1] - a2[j]);
    auto blend = [&](const std::vector<double>& table) {
        const double f00 = table[grid.index(i, j)];
        const double f10 = table[grid.index(i + 1, j)];
        const double f01 = table[grid.index(i, j + 1)];
        const double f11 = table[grid.index(i + 1, j + 1)];
        return f00 * (1.0 - u) * (1.0 - v) + f10 * u * (1.0 - v) + f01 * (1.0 - u) * v +
               f11 * u * v;
    };
    return {blend(grid.alpha_table), blend(grid.K_table)};
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_grid_csv(const CoefficientGrid& grid, std::ostream& out) {
    out << "# artu-grid v1, R=" << fmt17(grid.R) << ", step=" << fmt17(grid.step) << "\n";
    out << "rho1,rho2,alpha,K,mse,solved\n";
    for (std::size_t i = 0; i < grid.n1(); ++i) {
        for (std::size_t j = 0; j < grid.n2(); ++j) {
            const std::size_t idx = grid.index(i, j);
            out << fmt17(grid.rho1_axis[i]) << ',' << fmt17(grid.rho2_axis[j]) << ','
                << fmt17(grid.alpha_table[idx]) << ',' << fmt17(grid.K_table[idx]) << ','
                << fmt17(grid.mse_table[idx]) << ',' << (grid.solved[idx] ? 1 : 0) << "\n";
        }
    }
}

CoefficientGrid read_grid_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw MalformedRow(1, "empty grid file");
    CoefficientGrid grid;
    double r_val = 0.0, step_val = 0.0;
    if (std::sscanf(line.c_str(), "# artu-grid v1, R=%lf, step=%lf", &r_val, &step_val) != 2) {
        throw MalformedRow(1, "bad grid header: " + line);
    }
    grid.R = r_val;
    grid.step = step_val;
    if (!std::getline(in, line)) throw MalformedRow(2, "missing column header");

    struct Cell {
        double rho1, rho2, alpha, K, mse;
        int solved;
    };
    std::vector<Cell> cells;
    std::size_t line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        Cell c{};
        char* cursor = line.data();
        auto take = [&](double& out_val) {
            char* end = nullptr;
            out_val = std::strtod(cursor, &end);
            if (end == cursor) throw MalformedRow(line_no, "bad numeric cell");
            cursor = (*end == ',') ? end + 1 : end;
        };
        take(c.rho1);
        take(c.rho2);
        take(c.alpha);
        take(c.K);
        take(c.mse);
        double solved_val = 0.0;
        take(solved_val);
        c.solved = solved_val != 0.0 ? 1 : 0;
        cells.push_back(c);
    }
    if (cells.empty()) throw MalformedRow(line_no, "grid file has no cells");

    // Rows are rho1-major ascending: the rho2 axis is the leading run.
    std::size_t n2 = 1;
    while (n2 < cells.size() && cells[n2].rho1 == cells[0].rho1) ++n2;
    if (cells.size() % n2 != 0) throw MalformedRow(line_no, "grid is not rectangular");
    const std::size_t n1 = cells.size() / n2;

    grid.rho1_axis.resize(n1);
    grid.rho2_axis.resize(n2);
    grid.alpha_table.resize(n1 * n2);
    grid.K_table.resize(n1 * n2);
    grid.mse_table.resize(n1 * n2);
    grid.solved.resize(n1 * n2);
    for (std::size_t j = 0; j < n2; ++j) grid.rho2_axis[j] = cells[j].rho2;
    for (std::size_t i = 0; i < n1; ++i) {
        grid.rho1_axis[i] = cells[i * n2].rho1;
        for (std::size_t j = 0; j < n2; ++j) {
            const Cell& c = cells[i * n2 + j];
            if (c.rho1 != grid.rho1_axis[i] || c.rho2 != grid.rho2_axis[j]) {
                throw MalformedRow(3 + i * n2 + j, "grid rows out of order");
            }
            const std::size_t idx = grid.index(i, j);
            grid.alpha_table[idx] = c.alpha;
            grid.K_table[idx] = c.K;
            grid.mse_table[idx] = c.mse;
            grid.solved[idx] = static_cast<std::uint8_t>(c.solved);
        }
    }
    return grid;
}

}  // namespace srm::artu
