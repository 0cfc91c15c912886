#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fblab/blowup.hpp"
#include "fblab/counterexamples.hpp"
#include "fblab/diagnostics.hpp"
#include "fblab/identity.hpp"
#include "fblab/monotonicity.hpp"
#include "fblab/montecarlo.hpp"
#include "fblab/solver.hpp"

namespace fblab {

/// Comma-separated rows with a fixed header. Doubles use the shortest
/// round-trip form; non-finite values print as nan / inf / -inf. Strings with
/// commas or quotes are quoted.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header);

  template <class... T>
  void row(const T&... cells) {
    static_assert(sizeof...(T) > 0);
    if (sizeof...(T) != columns_) throw_width(sizeof...(T));
    bool first = true;
    ((put_sep(first), put(cells)), ...);
    end_row();
  }

 private:
  void put_sep(bool& first);
  void put(double v);
  void put(int v);
  void put(long v);
  void put(bool v);
  void put(const std::string& v);
  void put(const char* v) { put(std::string(v)); }
  void end_row();
  [[noreturn]] void throw_width(std::size_t got) const;

  std::ostream& os_;
  std::size_t columns_;
};

std::string format_double(double v);

/// eps,ok,iterations,residual,sup_diff,grad_sup_diff,w22_diff,w24_diff,
/// lap_l2_diff,bmo,J_eps,J_limit,transition_area,error
void write_sweep_csv(std::ostream& os, const ConvergenceReport& rep);
/// iter,residual,energy
void write_trace_csv(std::ostream& os, const SolveReport& rep);
/// r,E,boundary,bulk,history,dE,dissipation,dissipation_other,defect (the
/// interval columns refer to [r_k, r_{k+1}] and are empty on the last row)
void write_weiss_csv(std::ostream& os, const WeissReport& rep);
/// field_id,xlo,xhi,ylo,yhi,lhs,rhs,residual,relative_defect
void write_identity_csv(std::ostream& os, const IdentitySuiteReport& rep);
/// cx,cy,dir_x,dir_y,alpha,gamma,residual,label,defect
void write_detachment_csv(std::ostream& os, const std::vector<DetachmentFit>& fits,
                          const std::vector<DetachmentClass>& classes);
/// px,py,mc_mean,mc_se,pde_value,z
void write_game_csv(std::ostream& os, const GameReport& rep);
/// x,u,u1,u2,u3,u4
void write_contr_profile_csv(std::ostream& os, double eps, const std::vector<double>& xs);
/// t,beta
void write_beta_csv(std::ostream& os, const std::vector<double>& ts, const std::vector<double>& beta);
/// eps,delta,max_abs_u2,probe_x,probe_u2,reference,probe_defect
void write_contr_blowup_csv(std::ostream& os, const ContrBlowupReport& rep);
/// x0,y0,R,R0,lhs,grad_integral,hess_integral,m,var_integral,mean_integral,c_hat,fitted_C,fitted_C_signed
void write_decay_csv(std::ostream& os, const std::vector<DecayReport>& rows);

}  // namespace fblab
