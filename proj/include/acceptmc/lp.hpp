#pragma once

#include <vector>

namespace acceptmc::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
    Status status = Status::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

/// Dense two-phase simplex with Bland's rule:
///   maximize c.x  subject to  A x <= b,  x >= 0.
/// Right-hand sides may be negative (phase one introduces artificials).
/// Intended for desk-scale problems; everything is O(rows * cols) per pivot.
Result simplex_max(const std::vector<std::vector<double>>& A,
                   const std::vector<double>& b, const std::vector<double>& c);

}  // namespace acceptmc::lp
