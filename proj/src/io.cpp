#include "exalm/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "exalm/auglag.hpp"

namespace exalm {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path, bool append = false) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_grid_function_csv(const GridFunction& f, const std::string& path) {
  std::ofstream out = open_out(path);
  const int n = f.grid.dim();
  for (int a = 0; a < n; ++a) out << "x" << a << ",";
  for (int c = 0; c < f.components; ++c) out << "u" << c << (c + 1 < f.components ? "," : "\n");
  for (std::size_t site = 0; site < f.site_count(); ++site) {
    const std::vector<double> x = f.site_coords(site);
    for (double xi : x) out << format_g17(xi) << ",";
    for (int c = 0; c < f.components; ++c)
      out << format_g17(f.at(site, c)) << (c + 1 < f.components ? "," : "\n");
  }
}

void write_control_csv(const ControlFunction& u, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "t";
  for (int c = 0; c < u.u_dim; ++c) out << ",u" << c;
  out << "\n";
  for (int k = 0; k < u.steps; ++k) {
    out << format_g17(u.center_time(k));
    for (int c = 0; c < u.u_dim; ++c) out << "," << format_g17(u.at(k, c));
    out << "\n";
  }
}

void write_iterate_log_csv(const std::vector<IterateRow>& log, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "iter,L,f,feas_eq,feas_ineq,eta,kkt_stationarity,kkt_feas_eq,kkt_feas_ineq,"
         "kkt_complementarity,kkt_sign,c,step\n";
  for (const IterateRow& r : log) {
    out << r.iteration << "," << format_g17(r.L) << "," << format_g17(r.f) << ","
        << format_g17(r.feas_eq) << "," << format_g17(r.feas_ineq) << "," << format_g17(r.eta)
        << "," << format_g17(r.kkt.stationarity) << "," << format_g17(r.kkt.feasibility_eq) << ","
        << format_g17(r.kkt.feasibility_ineq) << "," << format_g17(r.kkt.complementarity) << ","
        << format_g17(r.kkt.sign) << "," << format_g17(r.c) << "," << format_g17(r.step) << "\n";
  }
}

void append_diagnostic_csv(const ConstrainedProblem& p, const Vec& x, const DualState& d,
                           double sigma_max, const std::string& path) {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out = open_out(path, true);
  if (fresh)
    out << "L,f,feas_eq,feas_ineq,eta,kkt_stationarity,kkt_feas_eq,kkt_feas_ineq,"
           "kkt_complementarity,kkt_sign,sigma_max\n";
  AugLagParts parts = augmented_lagrangian_parts(p, x, d);
  KKTResidual k = kkt_residual(p, x, d);
  out << format_g17(parts.value) << "," << format_g17(parts.f) << "," << format_g17(parts.feas_eq)
      << "," << format_g17(parts.feas_ineq) << "," << format_g17(parts.eta) << ","
      << format_g17(k.stationarity) << "," << format_g17(k.feasibility_eq) << ","
      << format_g17(k.feasibility_ineq) << "," << format_g17(k.complementarity) << ","
      << format_g17(k.sign) << "," << format_g17(sigma_max) << "\n";
}

std::vector<std::vector<double>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {  // header
      first = false;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace exalm
