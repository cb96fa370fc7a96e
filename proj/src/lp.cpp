#include "acceptmc/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace acceptmc::lp {

namespace {

constexpr double kEps = 1e-9;

struct Tableau {
    // rows x cols dense tableau; last column is the RHS, last row the
    // (maximization) objective in reduced-cost form.
    std::vector<std::vector<double>> t;
    std::vector<int> basis;      // variable label per constraint row
    int rows = 0;                // constraint rows
    int cols = 0;                // variable columns (excl. RHS)

    double& at(int i, int j) { return t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    double at(int i, int j) const { return t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

    void pivot(int row, int col) {
        const double inv = 1.0 / at(row, col);
        for (int j = 0; j <= cols; ++j) at(row, j) *= inv;
        at(row, col) = 1.0;
        for (int i = 0; i <= rows; ++i) {
            if (i == row) continue;
            const double factor = at(i, col);
            if (std::abs(factor) < kEps) {
                at(i, col) = 0.0;
                continue;
            }
            for (int j = 0; j <= cols; ++j) at(i, j) -= factor * at(row, j);
            at(i, col) = 0.0;
        }
        basis[static_cast<std::size_t>(row)] = col;
    }

    // Bland's rule: entering column is the lowest-index improving one,
    // leaving row breaks ratio ties by the lowest basis label.
    // Returns Optimal when no improving column exists.
    Status run(const std::vector<bool>& allowed) {
        for (;;) {
            int col = -1;
            for (int j = 0; j < cols; ++j) {
                if (allowed[static_cast<std::size_t>(j)] && at(rows, j) > kEps) {
                    col = j;
                    break;
                }
            }
            if (col < 0) return Status::Optimal;
            int row = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < rows; ++i) {
                if (at(i, col) > kEps) {
                    const double ratio = at(i, cols) / at(i, col);
                    if (ratio < best_ratio - kEps ||
                        (ratio < best_ratio + kEps && row >= 0 &&
                         basis[static_cast<std::size_t>(i)] <
                             basis[static_cast<std::size_t>(row)])) {
                        best_ratio = ratio;
                        row = i;
                    }
                }
            }
            if (row < 0) return Status::Unbounded;
            pivot(row, col);
        }
    }
};

}  // namespace

Result simplex_max(const std::vector<std::vector<double>>& A,
                   const std::vector<double>& b, const std::vector<double>& c) {
    const int m = static_cast<int>(A.size());
    const int n = static_cast<int>(c.size());
    for (const auto& row : A) {
        if (static_cast<int>(row.size()) != n) {
            throw std::invalid_argument("simplex_max: ragged constraint matrix");
        }
    }
    if (static_cast<int>(b.size()) != m) {
        throw std::invalid_argument("simplex_max: rhs size mismatch");
    }

    // Columns: n originals, m slacks, then one artificial per negative rhs.
    int n_art = 0;
    for (double v : b) {
        if (v < 0.0) ++n_art;
    }
    Tableau tab;
    tab.rows = m;
    tab.cols = n + m + n_art;
    tab.t.assign(static_cast<std::size_t>(m + 1),
                 std::vector<double>(static_cast<std::size_t>(tab.cols) + 1, 0.0));
    tab.basis.assign(static_cast<std::size_t>(m), -1);

    int art = n + m;
    for (int i = 0; i < m; ++i) {
        const double sign = (b[static_cast<std::size_t>(i)] < 0.0) ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) {
            tab.at(i, j) = sign * A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        tab.at(i, n + i) = sign;  // slack
        tab.at(i, tab.cols) = sign * b[static_cast<std::size_t>(i)];
        if (sign < 0.0) {
            tab.at(i, art) = 1.0;
            tab.basis[static_cast<std::size_t>(i)] = art;
            ++art;
        } else {
            tab.basis[static_cast<std::size_t>(i)] = n + i;
        }
    }

    std::vector<bool> allowed(static_cast<std::size_t>(tab.cols), true);

    if (n_art > 0) {
        // Phase one: maximize -sum(artificials); price out the basic ones.
        for (int j = n + m; j < tab.cols; ++j) tab.at(m, j) = -1.0;
        for (int i = 0; i < m; ++i) {
            if (tab.basis[static_cast<std::size_t>(i)] >= n + m) {
                for (int j = 0; j <= tab.cols; ++j) tab.at(m, j) += tab.at(i, j);
            }
        }
        tab.run(allowed);
        if (tab.at(m, tab.cols) < -1e-7) {
            return {Status::Infeasible, 0.0, {}};
        }
        // Drive any degenerate artificial out of the basis.
        for (int i = 0; i < m; ++i) {
            if (tab.basis[static_cast<std::size_t>(i)] >= n + m) {
                for (int j = 0; j < n + m; ++j) {
                    if (std::abs(tab.at(i, j)) > kEps) {
                        tab.pivot(i, j);
                        break;
                    }
                }
            }
        }
        for (int j = n + m; j < tab.cols; ++j) allowed[static_cast<std::size_t>(j)] = false;
    }

    // Phase two objective, priced out against the current basis.
    for (int j = 0; j <= tab.cols; ++j) tab.at(m, j) = 0.0;
    for (int j = 0; j < n; ++j) tab.at(m, j) = c[static_cast<std::size_t>(j)];
    for (int i = 0; i < m; ++i) {
        const int bj = tab.basis[static_cast<std::size_t>(i)];
        if (bj < n && std::abs(c[static_cast<std::size_t>(bj)]) > 0.0) {
            const double factor = c[static_cast<std::size_t>(bj)];
            for (int j = 0; j <= tab.cols; ++j) {
                tab.at(m, j) -= factor * tab.at(i, j);
            }
        }
    }
    const Status status = tab.run(allowed);
    if (status == Status::Unbounded) return {Status::Unbounded, 0.0, {}};

    Result out;
    out.status = Status::Optimal;
    out.x.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < m; ++i) {
        const int bj = tab.basis[static_cast<std::size_t>(i)];
        if (bj < n) out.x[static_cast<std::size_t>(bj)] = tab.at(i, tab.cols);
    }
    out.objective = 0.0;
    for (int j = 0; j < n; ++j) {
        out.objective += c[static_cast<std::size_t>(j)] * out.x[static_cast<std::size_t>(j)];
    }
    return out;
}

}  // namespace acceptmc::lp
