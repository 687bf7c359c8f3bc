#pragma once

#include <optional>

#include <pathopt/link_solver.hpp>
#include <pathopt/path_core.hpp>

namespace pathopt
{

struct MaxDelayResult
{
  Sizing sizing;
  double delay;
};

/// Pseudo upper bound: every free gate at minimum drive.
MaxDelayResult max_delay_sizing( const LogicPath& path, const ProcessParams& params, const GateLibrary& library );

/*! \brief Minimum achievable delay of a bounded path.
 *
 * Backward initialization with the predecessor of each gate at `init_cref`
 * (cref when not given), then fixed-point iteration of the link equations.
 * The returned delay is the full-model delay at convergence.
 */
LinkSolution min_delay_sizing( const LogicPath& path, const ProcessParams& params, const GateLibrary& library,
                               std::optional<double> init_cref = std::nullopt, const SolverOptions& options = {} );

struct DelayBounds
{
  double t_min{ 0.0 };
  double t_max{ 0.0 };
  Sizing sizing_min;
  Sizing sizing_max;
  int iterations{ 0 };
};

DelayBounds compute_bounds( const LogicPath& path, const ProcessParams& params, const GateLibrary& library,
                            const SolverOptions& options = {} );

/// True iff the constraint can be met without changing the path structure.
inline bool feasibility( double tc, const DelayBounds& bounds ) noexcept
{
  return tc >= bounds.t_min;
}

} // namespace pathopt
