#include <pathopt/buffering.hpp>

#include <pathopt/bounds.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace pathopt
{

std::string_view to_string( BufferMode mode ) noexcept
{
  return mode == BufferMode::single_inverter ? "single" : "pair";
}

double optimal_buffer_size( double a_gate, double cin_gate, double a_buf, double fixed_par_buf, double load_ff,
                            double cref_ff ) noexcept
{
  return std::max( cref_ff, std::sqrt( a_buf * ( load_ff + fixed_par_buf ) * cin_gate / a_gate ) );
}

double size_buffer( const GateTemplate& gate, double cin_gate, Edge gate_output, const GateTemplate& buffer,
                    double load_ff, const ProcessParams& params )
{
  const Edge buffer_output = flip( gate_output );
  const double s_gate = symmetry_factors( gate, params ).for_output( gate_output );
  const double s_buf = symmetry_factors( buffer, params ).for_output( buffer_output );
  const GateInstance g{ &gate, cin_gate };

  auto refreeze = [&] ( double c_buf ) {
    const GateInstance b{ &buffer, c_buf };
    const double m_gate = miller_factor( g.coupling_ff( gate_output, params ), c_buf + g.parasitic_ff() );
    const double m_buf = miller_factor( b.coupling_ff( buffer_output, params ), load_ff + b.parasitic_ff() );
    const double a_gate = 0.5 * params.tau_ps * s_gate * ( m_gate + switching_threshold( buffer_output, params ) );
    const double a_buf = 0.5 * params.tau_ps * s_buf * m_buf;
    return optimal_buffer_size( a_gate, cin_gate, a_buf, buffer.par_fixed_ff, load_ff, params.cref_ff );
  };
  return refreeze( refreeze( std::sqrt( load_ff * cin_gate ) ) );
}

namespace
{

constexpr double flimit_gate_cin_refs = 4.0; // gate size in units of cref for the A/B comparison
constexpr double flimit_lo = 1.0;
constexpr double flimit_hi = 100.0;
constexpr double flimit_tol = 1e-3;

const GateTemplate& buffer_template( const GateLibrary& library, std::string_view kind )
{
  return library.at( kind.empty() ? std::string_view( library.inverter() ) : kind );
}

double structure_delay( const std::vector<std::string>& kinds, const Sizing& s, double load, Edge input_edge,
                        const ProcessParams& params, const GateLibrary& library )
{
  LogicPath p;
  for ( const auto& k : kinds )
    p.gates.push_back( { k, std::nullopt, 0u } );
  p.input_cap_ff = s[0];
  p.terminal_load_ff = load;
  p.input_edge = input_edge;
  // fanout-of-one inverter transition at the driver input; identical for A and B
  const auto& inv = library.at( library.inverter() );
  const auto sf = symmetry_factors( inv, params );
  p.driver_slope_rise_ps = params.tau_ps * sf.s_lh * ( 1.0 + inv.par_coeff );
  p.driver_slope_fall_ps = params.tau_ps * sf.s_hl * ( 1.0 + inv.par_coeff );
  return evaluate_path( p, s, params, library ).total_delay;
}

} // namespace

BufferComparison compare_buffering( const GateTemplate& driver, const GateTemplate& gate, double fanout,
                                    const ProcessParams& params, const GateLibrary& library,
                                    std::string_view buffer_kind )
{
  const auto& buffer = buffer_template( library, buffer_kind );
  const double cin_gate = flimit_gate_cin_refs * params.cref_ff;
  const double load = fanout * cin_gate;

  BufferComparison out{ 0.0, 0.0 };
  for ( Edge input_edge : { Edge::rising, Edge::falling } )
  {
    const Edge gate_output = input_edge; // two inversions: driver, then gate
    const double c_buf = size_buffer( gate, cin_gate, gate_output, buffer, load, params );
    out.unbuffered +=
        0.5 * structure_delay( { driver.name, gate.name }, Sizing{ { cin_gate, cin_gate } }, load, input_edge, params, library );
    out.buffered += 0.5 * structure_delay( { driver.name, gate.name, buffer.name }, Sizing{ { cin_gate, cin_gate, c_buf } },
                                           load, input_edge, params, library );
  }
  return out;
}

FanoutLimit flimit( const GateTemplate& driver, const GateTemplate& gate, const ProcessParams& params,
                    const GateLibrary& library, std::string_view buffer_kind )
{
  FanoutLimit out{ driver.name, gate.name, std::nullopt };
  auto gain = [&] ( double f ) {
    const auto c = compare_buffering( driver, gate, f, params, library, buffer_kind );
    return c.unbuffered - c.buffered; // > 0 once buffering pays off
  };
  double lo = flimit_lo, hi = flimit_hi;
  const double g_lo = gain( lo ), g_hi = gain( hi );
  if ( !( g_lo < 0.0 && g_hi > 0.0 ) )
    return out;
  while ( hi - lo > flimit_tol )
  {
    const double mid = 0.5 * ( lo + hi );
    ( gain( mid ) > 0.0 ? hi : lo ) = mid;
  }
  out.f_limit = 0.5 * ( lo + hi );
  return out;
}

FlimitTable FlimitTable::compute( const ProcessParams& params, const GateLibrary& library, std::string_view buffer_kind )
{
  FlimitTable t;
  const auto kinds = library.kinds();
  for ( const auto& d : kinds )
    for ( const auto& g : kinds )
      t.entries_.push_back( flimit( library.at( d ), library.at( g ), params, library, buffer_kind ) );
  return t;
}

std::optional<double> FlimitTable::at( std::string_view driver, std::string_view gate ) const
{
  for ( const auto& e : entries_ )
    if ( e.driver == driver && e.gate == gate )
      return e.f_limit;
  throw std::out_of_range( fmt::format( "no limit for driver '{}' and gate '{}'", driver, gate ) );
}

std::vector<CriticalNode> find_critical_nodes( const LogicPath& path, const Sizing& sizing, const FlimitTable& limits,
                                               const GateLibrary& library )
{
  std::vector<CriticalNode> out;
  if ( path.size() < 2 )
    return out;
  for ( std::size_t i = 0; i < path.size(); ++i )
  {
    const auto& driver = i == 0 ? library.inverter() : path.gates[i - 1].kind;
    const auto limit = limits.at( driver, path.gates[i].kind );
    if ( !limit )
      continue;
    const double fanout = stage_load( path, sizing, i, library ) / sizing[i];
    if ( fanout > *limit )
      out.push_back( { i, fanout, *limit } );
  }
  std::stable_sort( out.begin(), out.end(), [] ( const CriticalNode& a, const CriticalNode& b ) {
    return a.fanout / a.limit > b.fanout / b.limit;
  } );
  return out;
}

LogicPath insert_buffers( const LogicPath& path, std::span<const std::size_t> after, BufferMode mode,
                          const GateLibrary& library )
{
  std::vector<std::size_t> idx( after.begin(), after.end() );
  std::sort( idx.begin(), idx.end() );
  idx.erase( std::unique( idx.begin(), idx.end() ), idx.end() );
  if ( !idx.empty() && idx.back() >= path.size() )
    throw std::out_of_range( fmt::format( "buffer position {} outside a {}-gate path", idx.back(), path.size() ) );

  LogicPath out = path;
  const PathGate buffer{ library.inverter(), std::nullopt, 0u };
  const std::size_t count = mode == BufferMode::inverter_pair ? 2 : 1;
  for ( auto it = idx.rbegin(); it != idx.rend(); ++it )
  {
    out.gates.insert( out.gates.begin() + static_cast<std::ptrdiff_t>( *it + 1 ), count, buffer );
    if ( mode == BufferMode::single_inverter )
      ++out.polarity_flips;
  }
  return out;
}

BufferingResult min_delay_with_buffers( const LogicPath& path, const ProcessParams& params, const GateLibrary& library,
                                        const FlimitTable& limits, const BufferingOptions& options )
{
  auto best = min_delay_sizing( path, params, library, std::nullopt, options.solver );
  BufferingResult r;
  r.path = path;
  r.t_min_unbuffered = best.delay;

  for ( std::size_t round = 0; round < options.max_rounds; ++round )
  {
    const auto nodes = find_critical_nodes( r.path, best.sizing, limits, library );
    if ( nodes.empty() )
      break;
    const std::size_t worst = nodes.front().index;
    auto candidate = insert_buffers( r.path, std::span( &worst, 1 ), options.mode, library );
    auto sized = min_delay_sizing( candidate, params, library, std::nullopt, options.solver );
    if ( !( sized.delay < best.delay * ( 1.0 - options.min_gain ) ) )
      break;
    r.path = std::move( candidate );
    r.insertions.push_back( worst );
    best = std::move( sized );
  }
  r.sizing = std::move( best.sizing );
  r.t_min = best.delay;
  return r;
}

} // namespace pathopt
