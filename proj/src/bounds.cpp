#include <pathopt/bounds.hpp>

#include <algorithm>

namespace pathopt
{

MaxDelayResult max_delay_sizing( const LogicPath& path, const ProcessParams& params, const GateLibrary& library )
{
  auto s = uniform_sizing( path, params.cref_ff );
  const double d = evaluate_path( path, s, params, library ).total_delay;
  return { std::move( s ), d };
}

LinkSolution min_delay_sizing( const LogicPath& path, const ProcessParams& params, const GateLibrary& library,
                               std::optional<double> init_cref, const SolverOptions& options )
{
  auto start = backward_initial_sizing( path, params, library, 0.0, init_cref.value_or( params.cref_ff ) );
  return solve_link_equations( path, params, library, 0.0, std::move( start ), options );
}

DelayBounds compute_bounds( const LogicPath& path, const ProcessParams& params, const GateLibrary& library,
                            const SolverOptions& options )
{
  auto hi = max_delay_sizing( path, params, library );
  auto lo = min_delay_sizing( path, params, library, std::nullopt, options );
  DelayBounds b;
  // with every gate clamped the two sizings coincide; keep t_min <= t_max exact
  b.t_min = std::min( lo.delay, hi.delay );
  b.t_max = hi.delay;
  b.sizing_min = lo.delay <= hi.delay ? std::move( lo.sizing ) : hi.sizing;
  b.sizing_max = std::move( hi.sizing );
  b.iterations = lo.iterations;
  return b;
}

} // namespace pathopt
