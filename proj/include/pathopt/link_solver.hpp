#pragma once

#include <cstddef>
#include <vector>

#include <pathopt/path_core.hpp>

namespace pathopt
{

struct SolverOptions
{
  int max_iterations{ 500 };
  double cap_tol{ 1e-7 };   ///< max relative size change per pass
  double delay_tol{ 1e-9 }; ///< relative delay change per pass

  /// Over-relaxation factor of the log-domain update; 0 picks one from the
  /// number of free gates, 1 is the plain fixed-point sweep.
  double relaxation{ 0.0 };
};

struct LinkSolution
{
  Sizing sizing;
  double delay{ 0.0 }; ///< full-model delay at `sizing`
  int iterations{ 0 };
  std::vector<std::size_t> clamped; ///< free gates held at cref
  double residual{ 0.0 };           ///< max |dT/dcin - a| * cref / delay over unclamped gates
};

/*! \brief Initial sizing from a single backward pass.
 *
 * Starting at the output, each free gate is sized from its link equation
 * with its predecessor taken at `init_cref`; results are clamped at cref.
 */
Sizing backward_initial_sizing( const LogicPath& path, const ProcessParams& params, const GateLibrary& library,
                                double a, double init_cref );

/*! \brief Solves the constant-sensitivity link equations.
 *
 * Finds the sizing at which every free component of the frozen-model
 * gradient equals `a` (a <= 0; a = 0 gives the delay minimum). Each pass
 * refreshes the coefficients at the current sizing and sweeps the free
 * gates from output to input with
 *
 *   cin[i] <- sqrt( a[i] (cin[i+1] + fixed_par[i]) / (a[i-1] / cin[i-1] - a) )
 *
 * over-relaxed in log(cin) and clamped at cref. Throws ConvergenceError
 * when `max_iterations` passes do not meet both tolerances.
 */
LinkSolution solve_link_equations( const LogicPath& path, const ProcessParams& params, const GateLibrary& library,
                                   double a, Sizing start, const SolverOptions& options = {} );

/// Default over-relaxation factor for `free_gates` unknowns.
double default_relaxation( std::size_t free_gates ) noexcept;

} // namespace pathopt
