#pragma once

#include <string>
#include <vector>

#include "exalm/grid.hpp"
#include "exalm/optimal_control.hpp"
#include "exalm/solver.hpp"

namespace exalm {

/// 17-significant-digit decimal (round-trips IEEE doubles exactly).
std::string format_g17(double v);

/// One row per cell/node: coordinates, then components.
void write_grid_function_csv(const GridFunction& f, const std::string& path);

/// One row per time cell: center time, then control components.
void write_control_csv(const ControlFunction& u, const std::string& path);

/// Fixed columns: iter,L,f,feas_eq,feas_ineq,eta,kkt_stationarity,
/// kkt_feas_eq,kkt_feas_ineq,kkt_complementarity,kkt_sign,c,step.
void write_iterate_log_csv(const std::vector<IterateRow>& log, const std::string& path);

/// Diagnostic row (L, f, ||F||, |max(g,0)|, eta, KKT residuals, sigma_max)
/// at one evaluation point; appends to the CSV at `path` (with header when
/// the file is new).
void append_diagnostic_csv(const ConstrainedProblem& p, const Vec& x, const DualState& d,
                           double sigma_max, const std::string& path);

/// Numeric cells of a CSV produced by the writers above (header skipped).
std::vector<std::vector<double>> read_csv(const std::string& path);

}  // namespace exalm
