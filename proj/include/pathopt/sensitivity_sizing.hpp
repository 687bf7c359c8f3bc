#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <pathopt/link_solver.hpp>
#include <pathopt/path_core.hpp>

namespace pathopt
{

/// Sizing at which every free gate has the same delay sensitivity `a`.
struct SensitivitySolution
{
  double a{ 0.0 }; ///< ps/fF, <= 0
  Sizing sizing;
  double delay{ 0.0 }; ///< ps, full model
  double area{ 0.0 };  ///< um, total transistor width
  int iterations{ 0 };
  std::vector<std::size_t> clamped;
  bool saturated{ false }; ///< constraint met by the all-minimum-drive sizing
};

/// Solves dT/dcin[i] = a on every free gate. `start` warm-starts the solver.
SensitivitySolution solve_at_sensitivity( const LogicPath& path, double a, const ProcessParams& params,
                                          const GateLibrary& library, const SolverOptions& options = {},
                                          std::optional<Sizing> start = std::nullopt );

struct DistributeOptions
{
  SolverOptions solver;
  double tolerance{ 1e-3 }; ///< relative delay band below tc
  int max_bisections{ 200 };
};

/*! \brief Meets a delay constraint at minimum area.
 *
 * Bisection on the sensitivity over [a_lo, 0]; a_lo is expanded
 * geometrically until its delay exceeds tc or every gate is clamped. The
 * returned delay lies in [tc (1 - tolerance), tc]. Throws InfeasibleError
 * when tc < t_min.
 */
SensitivitySolution distribute_constraint( const LogicPath& path, double tc, const ProcessParams& params,
                                           const GateLibrary& library, const DistributeOptions& options = {} );

/// Most negative useful sensitivity: below it every free gate sits at cref.
double saturation_sensitivity( const LogicPath& path, const ProcessParams& params, const GateLibrary& library );

/// `points` values: a geometric ramp from a_min towards zero, ending with a = 0.
std::vector<double> sweep_values( const LogicPath& path, const ProcessParams& params, const GateLibrary& library,
                                  std::size_t points, std::optional<double> a_min = std::nullopt );

struct SweepRow
{
  double a;
  double delay;
  double area;
};

struct SweepFailure
{
  double a;
  std::string message;
};

struct SweepResult
{
  std::vector<SweepRow> rows; ///< ordered by a
  std::vector<SweepFailure> failures;
};

/// One constant-sensitivity solution per a value.
SweepResult sweep( const LogicPath& path, std::span<const double> a_values, const ProcessParams& params,
                   const GateLibrary& library, const SolverOptions& options = {} );

struct EqualDelayOptions
{
  int max_rounds{ 50 };
  double size_tol{ 1e-9 };
  double slack{ 0.01 }; ///< accepted relative excess of the total delay over tc
};

/*! \brief Equal-delay baseline.
 *
 * Every stage gets the target tc / n. Gates are sized from the output
 * backwards by a monotone 1-D solve on their own delay, with input slopes
 * taken from the previous forward evaluation; rounds repeat until sizes
 * settle. Throws InfeasibleError if a stage target cannot be met at any size
 * or the resulting path delay exceeds tc by more than `slack`.
 */
Sizing equal_delay_distribution( const LogicPath& path, double tc, const ProcessParams& params,
                                 const GateLibrary& library, const EqualDelayOptions& options = {} );

} // namespace pathopt
