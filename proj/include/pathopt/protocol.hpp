#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <pathopt/buffering.hpp>
#include <pathopt/errors.hpp>
#include <pathopt/path_core.hpp>
#include <pathopt/sensitivity_sizing.hpp>

namespace pathopt
{

enum class Domain
{
  infeasible,
  hard,
  medium,
  weak
};

std::string_view to_string( Domain d ) noexcept;

struct ConstraintDomain
{
  Domain kind;
  double ratio; ///< tc / t_min
};

/// Weak above weak_threshold * t_min, medium above hard_threshold * t_min, hard down to t_min; ties go to the harder domain.
ConstraintDomain classify_constraint( double tc, double t_min, const ProcessParams& params );

enum class StepKind
{
  bounds,
  classify,
  restruct,
  insert_buffers,
  distribute,
  note
};

std::string_view to_string( StepKind k ) noexcept;

/// One protocol step. Structural steps carry the gate index in the path they were applied to.
struct TraceStep
{
  StepKind kind;
  std::string detail;
  std::size_t index{ 0 };
  BufferMode mode{ BufferMode::inverter_pair };
};

struct OptimizeOptions
{
  bool allow_restructure{ true };
  bool allow_buffer{ true };
  BufferMode buffer_mode{ BufferMode::inverter_pair };
  DistributeOptions distribute;
};

struct OptimizationResult
{
  LogicPath final_path;
  Sizing sizing;
  double achieved_delay{ 0.0 }; ///< independent full-model evaluation of the final structure
  double area{ 0.0 };
  ConstraintDomain domain;       ///< classification of the input path
  double t_min_initial{ 0.0 };
  double t_min_final{ 0.0 };
  double sensitivity{ 0.0 };
  std::vector<TraceStep> trace;
};

/// Constraint not met after every allowed structural change.
class OptimizationFailure : public InfeasibleError
{
public:
  OptimizationFailure( double tc, double best_t_min, LogicPath best_path, std::vector<TraceStep> trace );

  const LogicPath& best_path() const noexcept { return best_path_; }
  const std::vector<TraceStep>& trace() const noexcept { return trace_; }

private:
  LogicPath best_path_;
  std::vector<TraceStep> trace_;
};

/*! \brief Selects and applies sizing, buffer insertion or restructuring.
 *
 * - weak: constant-sensitivity distribution only;
 * - medium: distribution; buffering kept only if it lowers the area;
 * - hard: buffering with global sizing, then distribution, unless the
 *   sizing-only area is strictly smaller;
 * - infeasible: De Morgan rewrites of the least efficient gates (then
 *   buffering) and buffering alone are tried; the feasible structure with
 *   the smaller area is then handled as above for its own domain.
 *
 * Throws OptimizationFailure if the constraint stays below every reachable t_min.
 */
OptimizationResult optimize( const LogicPath& path, double tc, const ProcessParams& params, const GateLibrary& library,
                             const OptimizeOptions& options = {} );

/// Applies the structural steps of a trace to a path.
LogicPath replay( const LogicPath& path, const std::vector<TraceStep>& trace, const GateLibrary& library );

/// One `step=<kind> detail=<...>` line per step.
std::string format_trace( const std::vector<TraceStep>& trace );

/// Human-readable summary of a result: trace, per-gate table and totals.
std::string format_report( const OptimizationResult& result, double tc, const ProcessParams& params,
                           const GateLibrary& library );

} // namespace pathopt
