#include <pathopt/restructure.hpp>

#include <pathopt/buffering.hpp>
#include <pathopt/errors.hpp>

#include <algorithm>

#include <fmt/format.h>

namespace pathopt
{

bool PathSegment::evaluate( bool critical, std::uint64_t sides ) const
{
  bool v = critical;
  for ( const auto& g : gates )
  {
    bool all = v, any = v;
    for ( const auto& s : g.sides )
    {
      const bool in = ( ( sides >> s.var ) & 1u ) != 0 ? !s.inverted : s.inverted;
      all = all && in;
      any = any || in;
    }
    switch ( g.function )
    {
    case LogicFunction::inv:
      v = !v;
      break;
    case LogicFunction::nand:
      v = !all;
      break;
    case LogicFunction::nor:
      v = !any;
      break;
    }
  }
  return v;
}

PathSegment segment_of( const LogicPath& path, std::size_t first, std::size_t last, const GateLibrary& library )
{
  if ( first > last || last > path.size() )
    throw std::out_of_range( fmt::format( "segment [{}, {}) outside a {}-gate path", first, last, path.size() ) );
  PathSegment seg;
  for ( std::size_t i = first; i < last; ++i )
  {
    const auto& tmpl = library.at( path.gates[i].kind );
    SegmentGate g{ tmpl.function, {} };
    for ( unsigned j = 0; j + 1 < tmpl.n_inputs; ++j )
      g.sides.push_back( { seg.side_vars++, ( ( path.gates[i].side_inverted >> j ) & 1u ) != 0 } );
    seg.gates.push_back( std::move( g ) );
  }
  return seg;
}

bool local_equivalence_check( const PathSegment& before, const PathSegment& after )
{
  if ( before.inputs() != after.inputs() )
    throw StructureError( fmt::format( "segments differ in input count ({} vs {})", before.inputs(), after.inputs() ) );
  if ( before.inputs() > 6 )
    throw StructureError( fmt::format( "segment has {} inputs; exhaustive check limited to 6", before.inputs() ) );
  const std::uint64_t rows = std::uint64_t{ 1 } << before.side_vars;
  for ( std::uint64_t sides = 0; sides < rows; ++sides )
    for ( bool x : { false, true } )
      if ( before.evaluate( x, sides ) != after.evaluate( x, sides ) )
        return false;
  return true;
}

LogicPath demorgan_rewrite( const LogicPath& path, std::size_t index, const GateLibrary& library )
{
  if ( index >= path.size() )
    throw std::out_of_range( fmt::format( "gate index {} outside a {}-gate path", index, path.size() ) );
  const auto& gate = path.gates[index];
  const auto& tmpl = library.at( gate.kind );
  if ( tmpl.function == LogicFunction::inv || tmpl.n_inputs > 3 )
    throw StructureError( fmt::format( "gate '{}' at index {} is not a rewritable nand/nor", gate.kind, index ) );

  const auto dual_fn = tmpl.function == LogicFunction::nor ? LogicFunction::nand : LogicFunction::nor;
  const auto dual = library.find( dual_fn, tmpl.n_inputs );
  if ( !dual )
    throw StructureError( fmt::format( "library has no {}{} for rewriting '{}'", to_string( dual_fn ), tmpl.n_inputs, gate.kind ) );

  const std::uint32_t all_sides = ( std::uint32_t{ 1 } << ( tmpl.n_inputs - 1 ) ) - 1u;
  const PathGate inv{ library.inverter(), std::nullopt, 0u };
  const PathGate core{ *dual, std::nullopt, gate.side_inverted ^ all_sides };

  LogicPath out = path;
  auto pos = out.gates.erase( out.gates.begin() + static_cast<std::ptrdiff_t>( index ) );
  out.gates.insert( pos, { inv, core, inv } );
  return out;
}

CancelResult cancel_inverter_pairs( const LogicPath& path, const GateLibrary& library, std::size_t first, std::size_t last )
{
  CancelResult r{ path, 0 };
  auto& gates = r.path.gates;
  last = std::min( last, gates.size() );
  auto is_inv = [&] ( std::size_t i ) { return library.at( gates[i].kind ).function == LogicFunction::inv; };

  bool changed = true;
  while ( changed )
  {
    changed = false;
    for ( std::size_t i = first; i + 1 < last; ++i )
    {
      if ( gates.size() <= 2 )
        break;
      if ( is_inv( i ) && is_inv( i + 1 ) )
      {
        gates.erase( gates.begin() + static_cast<std::ptrdiff_t>( i ), gates.begin() + static_cast<std::ptrdiff_t>( i + 2 ) );
        last -= 2;
        ++r.pairs;
        changed = true;
        break;
      }
    }
  }
  return r;
}

std::string describe( const RestructureStep& step )
{
  return fmt::format( "restruct@{}: {} -> inv+{}+inv (cancelled: {})", step.index, step.from, step.to, step.cancelled );
}

RewriteOutcome restructure_gate( const LogicPath& path, std::size_t index, const GateLibrary& library )
{
  auto rewritten = demorgan_rewrite( path, index, library );
  auto is_inv = [&] ( std::size_t i ) { return library.at( path.gates[i].kind ).function == LogicFunction::inv; };
  const std::size_t lo = index > 0 && is_inv( index - 1 ) ? index - 1 : index;
  const std::size_t hi_before = index + 1 < path.size() && is_inv( index + 1 ) ? index + 2 : index + 1;
  auto cancelled = cancel_inverter_pairs( rewritten, library, lo, hi_before + 2 );
  const std::size_t hi_after = hi_before + 2 - 2 * cancelled.pairs;

  const auto before = segment_of( path, lo, hi_before, library );
  const auto after = segment_of( cancelled.path, lo, hi_after, library );
  if ( !local_equivalence_check( before, after ) )
    throw StructureError( fmt::format( "rewrite of '{}' at index {} changed the logic function", path.gates[index].kind, index ) );

  RestructureStep step{ index, path.gates[index].kind, rewritten.gates[index + 1].kind, cancelled.pairs };
  return { std::move( cancelled.path ), std::move( step ) };
}

std::vector<GateEfficiency> rank_gate_efficiency( const GateLibrary& library, const ProcessParams& params )
{
  const auto& inv = library.at( library.inverter() );
  std::vector<GateEfficiency> out;
  for ( const auto& kind : library.kinds() )
    out.push_back( { kind, flimit( inv, library.at( kind ), params, library ).f_limit } );

  std::sort( out.begin(), out.end(), [&] ( const GateEfficiency& a, const GateEfficiency& b ) {
    const double fa = a.f_limit.value_or( std::numeric_limits<double>::infinity() );
    const double fb = b.f_limit.value_or( std::numeric_limits<double>::infinity() );
    if ( fa != fb )
      return fa < fb;
    const double da = library.at( a.kind ).dw_hl, db = library.at( b.kind ).dw_hl;
    if ( da != db )
      return da > db;
    return a.kind < b.kind;
  } );
  return out;
}

} // namespace pathopt
