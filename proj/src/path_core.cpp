#include <pathopt/path_core.hpp>

#include <bit>
#include <stdexcept>

#include <fmt/format.h>

namespace pathopt
{

std::size_t LogicPath::off_path_inverters() const noexcept
{
  std::size_t n = 0;
  for ( const auto& g : gates )
    n += static_cast<std::size_t>( std::popcount( g.side_inverted ) );
  return n;
}

void LogicPath::validate( const ProcessParams& params, const GateLibrary& library ) const
{
  if ( gates.empty() )
    throw std::invalid_argument( "path has no gates" );
  if ( !( input_cap_ff >= params.cref_ff ) )
    throw std::invalid_argument( fmt::format( "input_cap_ff ({}) below cref ({})", input_cap_ff, params.cref_ff ) );
  if ( !( terminal_load_ff > 0.0 ) )
    throw std::invalid_argument( "load_ff must be > 0" );
  if ( driver_slope_rise_ps < 0.0 || driver_slope_fall_ps < 0.0 )
    throw std::invalid_argument( "driver slopes must be >= 0" );
  for ( std::size_t i = 0; i < gates.size(); ++i )
  {
    const auto& g = library.at( gates[i].kind );
    if ( !g.inverting )
      throw std::invalid_argument( fmt::format( "gate {} ('{}') is not inverting", i + 1, g.name ) );
    if ( gates[i].side_inverted >> ( g.n_inputs - 1 ) )
      throw std::invalid_argument( fmt::format( "gate {} ('{}') side-input mask exceeds its inputs", i + 1, g.name ) );
    if ( gates[i].cin_ff && !( *gates[i].cin_ff >= params.cref_ff ) )
      throw std::invalid_argument( fmt::format( "gate {} ('{}') cin below cref", i + 1, g.name ) );
  }
}

Sizing initial_sizing( const LogicPath& path, const ProcessParams& params )
{
  Sizing s;
  s.cin.reserve( path.size() );
  for ( const auto& g : path.gates )
    s.cin.push_back( g.cin_ff.value_or( params.cref_ff ) );
  if ( !s.cin.empty() )
    s.cin[0] = path.input_cap_ff;
  return s;
}

Sizing uniform_sizing( const LogicPath& path, double cin_ff )
{
  Sizing s{ std::vector<double>( path.size(), cin_ff ) };
  if ( !s.cin.empty() )
    s.cin[0] = path.input_cap_ff;
  return s;
}

namespace
{

void check_sizing( const LogicPath& path, const Sizing& sizing )
{
  if ( sizing.size() != path.size() )
    throw std::invalid_argument(
        fmt::format( "sizing has {} entries for a {}-gate path", sizing.size(), path.size() ) );
}

double next_cin( const LogicPath& path, const Sizing& sizing, std::size_t i )
{
  return i + 1 < path.size() ? sizing[i + 1] : path.terminal_load_ff;
}

} // namespace

double stage_load( const LogicPath& path, const Sizing& sizing, std::size_t i, const GateLibrary& library )
{
  const GateInstance gate{ &library.at( path.gates[i].kind ), sizing[i] };
  return next_cin( path, sizing, i ) + gate.parasitic_ff();
}

PathTiming evaluate_path( const LogicPath& path, const Sizing& sizing, const ProcessParams& params,
                          const GateLibrary& library )
{
  check_sizing( path, sizing );
  PathTiming t;
  const auto n = path.size();
  t.stage_delay.resize( n );
  t.stage_slope.resize( n );
  t.stage_load.resize( n );

  double slope = path.driver_slope( path.input_edge );
  for ( std::size_t i = 0; i < n; ++i )
  {
    const GateInstance gate{ &library.at( path.gates[i].kind ), sizing[i] };
    const double load = next_cin( path, sizing, i ) + gate.parasitic_ff();
    const auto stage = gate_delay( gate, slope, path.output_edge_of( i ), load, params );
    t.stage_delay[i] = stage.delay_ps;
    t.stage_slope[i] = stage.output_slope_ps;
    t.stage_load[i] = load;
    t.total_delay += stage.delay_ps;
    t.slow_input_stages += stage.slow_input ? 1u : 0u;
    slope = stage.output_slope_ps;
  }
  t.off_path_width = static_cast<double>( path.off_path_inverters() ) * width_of( params.cref_ff, params ).total();
  t.total_width = path_area( path, sizing, params );
  return t;
}

double path_area( const LogicPath& path, const Sizing& sizing, const ProcessParams& params )
{
  check_sizing( path, sizing );
  double w = static_cast<double>( path.off_path_inverters() ) * width_of( params.cref_ff, params ).total();
  for ( auto c : sizing.cin )
    w += width_of( c, params ).total();
  return w;
}

CoefficientSet path_coefficients( const LogicPath& path, const Sizing& sizing, const ProcessParams& params,
                                  const GateLibrary& library )
{
  check_sizing( path, sizing );
  const auto n = path.size();
  CoefficientSet c;
  c.a.resize( n );
  c.fixed_par.resize( n );
  c.miller.resize( n );

  c.constant_term = 0.5 * switching_threshold( path.output_edge_of( 0 ), params ) * path.driver_slope( path.input_edge );
  for ( std::size_t i = 0; i < n; ++i )
  {
    const auto& tmpl = library.at( path.gates[i].kind );
    const GateInstance gate{ &tmpl, sizing[i] };
    const Edge out = path.output_edge_of( i );
    const double load = next_cin( path, sizing, i ) + gate.parasitic_ff();
    const double m = miller_factor( gate.coupling_ff( out, params ), load );
    // the successor's slope term weights this gate's transition time by its threshold
    const double vt_next = i + 1 < n ? switching_threshold( path.output_edge_of( i + 1 ), params ) : 0.0;
    const double s = symmetry_factors( tmpl, params ).for_output( out );

    c.miller[i] = m;
    c.a[i] = 0.5 * params.tau_ps * s * ( m + vt_next );
    c.fixed_par[i] = tmpl.par_fixed_ff;
    c.constant_term += c.a[i] * tmpl.par_coeff;
  }
  return c;
}

double frozen_delay( const LogicPath& path, const Sizing& sizing, const CoefficientSet& coeffs )
{
  check_sizing( path, sizing );
  double t = coeffs.constant_term;
  for ( std::size_t i = 0; i < path.size(); ++i )
    t += coeffs.a[i] * ( next_cin( path, sizing, i ) + coeffs.fixed_par[i] ) / sizing[i];
  return t;
}

std::vector<double> path_gradient( const LogicPath& path, const Sizing& sizing, const CoefficientSet& coeffs )
{
  check_sizing( path, sizing );
  std::vector<double> g;
  if ( path.size() < 2 )
    return g;
  g.reserve( path.size() - 1 );
  for ( std::size_t i = 1; i < path.size(); ++i )
  {
    const double ci = sizing[i];
    g.push_back( coeffs.a[i - 1] / sizing[i - 1] -
                 coeffs.a[i] * ( next_cin( path, sizing, i ) + coeffs.fixed_par[i] ) / ( ci * ci ) );
  }
  return g;
}

} // namespace pathopt
