#include <pathopt/link_solver.hpp>

#include <pathopt/errors.hpp>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pathopt
{

double default_relaxation( std::size_t free_gates ) noexcept
{
  // optimal SOR factor of the tridiagonal model problem
  return 2.0 / ( 1.0 + std::sin( std::numbers::pi / static_cast<double>( free_gates + 1 ) ) );
}

namespace
{

double link_target( const CoefficientSet& c, const Sizing& s, std::size_t i, double next, double a )
{
  const double denom = c.a[i - 1] / s[i - 1] - a;
  assert( denom > 0.0 );
  return std::sqrt( c.a[i] * ( next + c.fixed_par[i] ) / denom );
}

} // namespace

Sizing backward_initial_sizing( const LogicPath& path, const ProcessParams& params, const GateLibrary& library,
                                double a, double init_cref )
{
  if ( !( init_cref > 0.0 ) )
    throw std::invalid_argument( "init_cref must be > 0" );
  if ( a > 0.0 )
    throw std::invalid_argument( "sensitivity must be <= 0" );
  auto s = uniform_sizing( path, init_cref );
  const auto coeffs = path_coefficients( path, s, params, library );
  const auto n = path.size();
  for ( std::size_t i = n; i-- > 1; )
  {
    const double next = i + 1 < n ? s[i + 1] : path.terminal_load_ff;
    const double pred = i - 1 == 0 ? path.input_cap_ff : init_cref;
    const double denom = coeffs.a[i - 1] / pred - a;
    s[i] = std::max( params.cref_ff, std::sqrt( coeffs.a[i] * ( next + coeffs.fixed_par[i] ) / denom ) );
  }
  return s;
}

LinkSolution solve_link_equations( const LogicPath& path, const ProcessParams& params, const GateLibrary& library,
                                   double a, Sizing start, const SolverOptions& options )
{
  if ( a > 0.0 )
    throw std::invalid_argument( "sensitivity must be <= 0" );
  if ( start.size() != path.size() )
    throw std::invalid_argument( "start sizing does not match the path" );

  const auto n = path.size();
  const double cref = params.cref_ff;
  LinkSolution sol;
  sol.sizing = std::move( start );
  auto& s = sol.sizing;
  s[0] = path.input_cap_ff;
  for ( std::size_t i = 1; i < n; ++i )
    s[i] = std::max( s[i], cref );

  sol.delay = evaluate_path( path, s, params, library ).total_delay;
  if ( n < 2 )
    return sol;

  const double omega = options.relaxation > 0.0 ? options.relaxation : default_relaxation( n - 1 );
  double change = 0.0;
  for ( int it = 1; it <= options.max_iterations; ++it )
  {
    const auto coeffs = path_coefficients( path, s, params, library );
    change = 0.0;
    for ( std::size_t i = n - 1; i >= 1; --i )
    {
      const double next = i + 1 < n ? s[i + 1] : path.terminal_load_ff;
      const double target = link_target( coeffs, s, i, next, a );
      const double x = std::log( s[i] );
      const double updated = std::max( cref, std::exp( x + omega * ( std::log( target ) - x ) ) );
      change = std::max( change, std::abs( updated - s[i] ) / s[i] );
      s[i] = updated;
    }

    const double delay = evaluate_path( path, s, params, library ).total_delay;
    const double delay_change = std::abs( delay - sol.delay ) / delay;
    sol.delay = delay;
    sol.iterations = it;
    if ( change < options.cap_tol && delay_change < options.delay_tol )
    {
      const auto final_coeffs = path_coefficients( path, s, params, library );
      const auto grad = path_gradient( path, s, final_coeffs );
      for ( std::size_t i = 1; i < n; ++i )
      {
        const double next = i + 1 < n ? s[i + 1] : path.terminal_load_ff;
        if ( s[i] <= cref * ( 1.0 + 1e-12 ) && link_target( final_coeffs, s, i, next, a ) <= cref )
          sol.clamped.push_back( i );
        else
          sol.residual = std::max( sol.residual, std::abs( grad[i - 1] - a ) * cref / delay );
      }
      return sol;
    }
  }
  throw ConvergenceError( options.max_iterations, change, "link equations did not converge" );
}

} // namespace pathopt
