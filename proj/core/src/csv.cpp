#include "fblab/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "fblab/errors.hpp"

namespace fblab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os), columns_(header.size()) {
  for (std::size_t k = 0; k < header.size(); ++k) os_ << (k ? "," : "") << header[k];
  os_ << '\n';
}

void CsvWriter::put_sep(bool& first) {
  if (!first) os_ << ',';
  first = false;
}

void CsvWriter::put(double v) { os_ << format_double(v); }
void CsvWriter::put(int v) { os_ << v; }
void CsvWriter::put(long v) { os_ << v; }
void CsvWriter::put(bool v) { os_ << (v ? 1 : 0); }

void CsvWriter::put(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) {
    os_ << v;
    return;
  }
  os_ << '"';
  for (char c : v) {
    if (c == '"') os_ << '"';
    os_ << c;
  }
  os_ << '"';
}

void CsvWriter::end_row() { os_ << '\n'; }

void CsvWriter::throw_width(std::size_t got) const {
  throw DimensionError("csv row has " + std::to_string(got) + " cells, header has " + std::to_string(columns_));
}

void write_sweep_csv(std::ostream& os, const ConvergenceReport& rep) {
  CsvWriter w(os, {"eps", "ok", "iterations", "residual", "sup_diff", "grad_sup_diff", "w22_diff", "w24_diff",
                   "lap_l2_diff", "bmo", "J_eps", "J_limit", "transition_area", "error"});
  for (const SweepRow& r : rep.rows) {
    w.row(r.eps, r.ok, r.iterations, r.residual, r.sup_diff, r.grad_sup_diff, r.w22_diff, r.w24_diff, r.lap_l2_diff,
          r.bmo, r.J_eps, r.J_limit, r.transition_area, r.error);
  }
}

void write_trace_csv(std::ostream& os, const SolveReport& rep) {
  CsvWriter w(os, {"iter", "residual", "energy"});
  for (const IterationRecord& r : rep.trace) w.row(r.iter, r.residual, r.energy);
}

void write_weiss_csv(std::ostream& os, const WeissReport& rep) {
  CsvWriter w(os, {"r", "E", "boundary", "bulk", "history", "dE", "dissipation", "dissipation_other", "defect"});
  for (std::size_t k = 0; k < rep.energies.size(); ++k) {
    const WeissEnergy& e = rep.energies[k];
    if (k < rep.dE.size()) {
      w.row(e.r, e.E, e.boundary, e.bulk, e.history, rep.dE[k], rep.dissipation[k], rep.dissipation_other_variant[k],
            rep.identity_defect[k]);
    } else {
      w.row(e.r, e.E, e.boundary, e.bulk, e.history, "", "", "", "");
    }
  }
}

void write_identity_csv(std::ostream& os, const IdentitySuiteReport& rep) {
  CsvWriter w(os, {"field_id", "xlo", "xhi", "ylo", "yhi", "lhs", "rhs", "residual", "relative_defect"});
  for (const IdentitySuiteRow& r : rep.rows) {
    w.row(r.field_id, r.support.xlo, r.support.xhi, r.support.ylo, r.support.yhi, r.lhs, r.rhs, r.residual,
          r.relative_defect);
  }
}

void write_detachment_csv(std::ostream& os, const std::vector<DetachmentFit>& fits,
                          const std::vector<DetachmentClass>& classes) {
  if (fits.size() != classes.size()) throw DimensionError("fits and classes differ in length");
  CsvWriter w(os, {"cx", "cy", "dir_x", "dir_y", "alpha", "gamma", "residual", "label", "defect"});
  for (std::size_t k = 0; k < fits.size(); ++k) {
    const DetachmentFit& f = fits[k];
    w.row(f.center.x, f.center.y, f.direction.x, f.direction.y, f.alpha, f.gamma, f.fit_residual,
          std::string(to_string(classes[k].label)), classes[k].defect);
  }
}

void write_game_csv(std::ostream& os, const GameReport& rep) {
  CsvWriter w(os, {"px", "py", "mc_mean", "mc_se", "pde_value", "z"});
  for (const GameProbeRow& r : rep.rows) w.row(r.px, r.py, r.mc_mean, r.mc_se, r.pde_value, r.z);
}

void write_contr_profile_csv(std::ostream& os, double eps, const std::vector<double>& xs) {
  CsvWriter w(os, {"x", "u", "u1", "u2", "u3", "u4"});
  for (double x : xs) {
    const auto d = contr_u(x, eps);
    w.row(x, d[0], d[1], d[2], d[3], d[4]);
  }
}

void write_beta_csv(std::ostream& os, const std::vector<double>& ts, const std::vector<double>& beta) {
  if (ts.size() != beta.size()) throw DimensionError("t and beta differ in length");
  CsvWriter w(os, {"t", "beta"});
  for (std::size_t k = 0; k < ts.size(); ++k) w.row(ts[k], beta[k]);
}

void write_contr_blowup_csv(std::ostream& os, const ContrBlowupReport& rep) {
  CsvWriter w(os, {"eps", "delta", "max_abs_u2", "probe_x", "probe_u2", "reference", "probe_defect"});
  for (const ContrBlowupRow& r : rep.rows) {
    w.row(r.eps, r.delta, r.max_abs_u2, r.probe_x, r.probe_u2, r.reference, r.probe_defect);
  }
}

void write_decay_csv(std::ostream& os, const std::vector<DecayReport>& rows) {
  CsvWriter w(os, {"x0", "y0", "R", "R0", "lhs", "grad_integral", "hess_integral", "m", "var_integral",
                   "mean_integral", "c_hat", "fitted_C", "fitted_C_signed"});
  for (const DecayReport& r : rows) {
    w.row(r.x0.x, r.x0.y, r.R, r.R0, r.lhs, r.grad_integral, r.hess_integral, r.m, r.var_integral, r.mean_integral,
          r.c_hat, r.fitted_C, r.fitted_C_signed);
  }
}

}  // namespace fblab
