#include <pathopt/sensitivity_sizing.hpp>

#include <pathopt/bounds.hpp>
#include <pathopt/errors.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace pathopt
{

SensitivitySolution solve_at_sensitivity( const LogicPath& path, double a, const ProcessParams& params,
                                          const GateLibrary& library, const SolverOptions& options,
                                          std::optional<Sizing> start )
{
  if ( a > 0.0 )
    throw std::invalid_argument( fmt::format( "sensitivity must be <= 0 (got {})", a ) );
  auto init = start ? std::move( *start ) : backward_initial_sizing( path, params, library, a, params.cref_ff );
  auto link = solve_link_equations( path, params, library, a, std::move( init ), options );

  SensitivitySolution sol;
  sol.a = a;
  sol.area = path_area( path, link.sizing, params );
  sol.sizing = std::move( link.sizing );
  sol.delay = link.delay;
  sol.iterations = link.iterations;
  sol.clamped = std::move( link.clamped );
  return sol;
}

double saturation_sensitivity( const LogicPath& path, const ProcessParams& params, const GateLibrary& library )
{
  const auto s = uniform_sizing( path, params.cref_ff );
  const auto grad = path_gradient( path, s, path_coefficients( path, s, params, library ) );
  double a = 0.0;
  for ( auto g : grad )
    a = std::min( a, g );
  return a;
}

std::vector<double> sweep_values( const LogicPath& path, const ProcessParams& params, const GateLibrary& library,
                                  std::size_t points, std::optional<double> a_min )
{
  constexpr double span = 1e-3; // last nonzero value relative to a_min
  std::vector<double> values;
  if ( points == 0 )
    return values;
  const double lo = a_min.value_or( saturation_sensitivity( path, params, library ) );
  if ( lo > 0.0 )
    throw std::invalid_argument( "a_min must be <= 0" );
  const std::size_t ramp = points - 1;
  for ( std::size_t k = 0; k < ramp; ++k )
  {
    const double t = ramp == 1 ? 0.0 : static_cast<double>( k ) / static_cast<double>( ramp - 1 );
    values.push_back( lo * std::pow( span, t ) );
  }
  values.push_back( 0.0 );
  return values;
}

SweepResult sweep( const LogicPath& path, std::span<const double> a_values, const ProcessParams& params,
                   const GateLibrary& library, const SolverOptions& options )
{
  std::vector<double> sorted( a_values.begin(), a_values.end() );
  std::sort( sorted.begin(), sorted.end() );

  SweepResult out;
  std::optional<Sizing> warm;
  for ( auto a : sorted )
  {
    try
    {
      auto sol = solve_at_sensitivity( path, a, params, library, options, warm );
      out.rows.push_back( { a, sol.delay, sol.area } );
      warm = std::move( sol.sizing );
    }
    catch ( const std::exception& e )
    {
      out.failures.push_back( { a, e.what() } );
    }
  }
  return out;
}

SensitivitySolution distribute_constraint( const LogicPath& path, double tc, const ProcessParams& params,
                                           const GateLibrary& library, const DistributeOptions& options )
{
  auto fastest = solve_at_sensitivity( path, 0.0, params, library, options.solver );
  if ( tc < fastest.delay )
    throw InfeasibleError( tc, fastest.delay, "delay constraint below the minimum path delay" );
  if ( tc <= fastest.delay * ( 1.0 + options.tolerance ) )
    return fastest;

  const auto slowest = max_delay_sizing( path, params, library );
  const double a_sat = saturation_sensitivity( path, params, library );
  if ( tc >= slowest.delay )
  {
    SensitivitySolution sol;
    sol.a = a_sat;
    sol.sizing = slowest.sizing;
    sol.delay = slowest.delay;
    sol.area = path_area( path, slowest.sizing, params );
    sol.saturated = true;
    for ( std::size_t i = 1; i < path.size(); ++i )
      sol.clamped.push_back( i );
    return sol;
  }

  SensitivitySolution hi = std::move( fastest ); // delay <= tc
  SensitivitySolution lo;                        // delay >= tc
  double a_lo = a_sat * 1e-3;
  auto in_band = [&] ( const SensitivitySolution& s ) {
    return s.delay <= tc && s.delay >= tc * ( 1.0 - options.tolerance );
  };
  for ( ;; )
  {
    lo = solve_at_sensitivity( path, a_lo, params, library, options.solver, hi.sizing );
    if ( in_band( lo ) )
      return lo;
    if ( lo.delay > tc || a_lo <= a_sat )
      break;
    hi = std::move( lo );
    a_lo = std::max( a_lo * 10.0, a_sat );
  }

  for ( int it = 0; it < options.max_bisections; ++it )
  {
    const double a_mid = 0.5 * ( lo.a + hi.a );
    if ( !( a_mid < hi.a && a_mid > lo.a ) )
      break;
    auto mid = solve_at_sensitivity( path, a_mid, params, library, options.solver, hi.sizing );
    if ( in_band( mid ) )
      return mid;
    if ( mid.delay <= tc )
    {
      hi = std::move( mid );
    }
    else
    {
      lo = std::move( mid );
    }
  }
  return hi;
}

namespace
{

/// Smallest cin >= cref giving a stage delay <= target, or nullopt if none up to `max_cin`.
std::optional<double> size_for_stage_delay( const GateTemplate& gate, double input_slope, Edge out, double next_cin,
                                            double target, const ProcessParams& params, double max_cin )
{
  auto delay_at = [&] ( double c ) {
    const GateInstance inst{ &gate, c };
    return gate_delay( inst, input_slope, out, next_cin + inst.parasitic_ff(), params ).delay_ps;
  };
  double lo = params.cref_ff;
  if ( delay_at( lo ) <= target )
    return lo;
  double hi = lo;
  while ( delay_at( hi ) > target )
  {
    lo = hi;
    hi *= 2.0;
    if ( hi > max_cin )
      return std::nullopt;
  }
  for ( int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it )
  {
    const double mid = std::sqrt( lo * hi );
    ( delay_at( mid ) > target ? lo : hi ) = mid;
  }
  return hi;
}

} // namespace

Sizing equal_delay_distribution( const LogicPath& path, double tc, const ProcessParams& params,
                                 const GateLibrary& library, const EqualDelayOptions& options )
{
  const auto fastest = min_delay_sizing( path, params, library );
  if ( tc < fastest.delay )
    throw InfeasibleError( tc, fastest.delay, "delay constraint below the minimum path delay" );

  const auto n = path.size();
  const double target = tc / static_cast<double>( n );
  const double max_cin = 1e12 * params.cref_ff;
  auto s = uniform_sizing( path, params.cref_ff );
  auto timing = evaluate_path( path, s, params, library );

  for ( int round = 0; round < options.max_rounds; ++round )
  {
    double change = 0.0;
    for ( std::size_t i = n; i-- > 1; )
    {
      const double slope_in = timing.stage_slope[i - 1];
      const double next = i + 1 < n ? s[i + 1] : path.terminal_load_ff;
      const auto& gate = library.at( path.gates[i].kind );
      auto c = size_for_stage_delay( gate, slope_in, path.output_edge_of( i ), next, target, params, max_cin );
      if ( !c )
        throw InfeasibleError( tc, fastest.delay,
                               fmt::format( "equal-delay target {:.6g} ps unreachable at stage {} ('{}')", target,
                                            i + 1, gate.name ) );
      change = std::max( change, std::abs( *c - s[i] ) / s[i] );
      s[i] = *c;
    }
    timing = evaluate_path( path, s, params, library );
    if ( change < options.size_tol )
      break;
  }

  if ( timing.total_delay > tc * ( 1.0 + options.slack ) )
    throw InfeasibleError( tc, fastest.delay,
                           fmt::format( "equal-delay sizing reaches {:.6g} ps, above the constraint", timing.total_delay ) );
  return s;
}

} // namespace pathopt
