#include <doctest.h>

#include <pathopt/bounds.hpp>
#include <pathopt/errors.hpp>
#include <pathopt/restructure.hpp>

#include <oracle.hpp>

#include <random>

using namespace pathopt;

namespace
{

LogicPath chain( std::vector<std::string> kinds )
{
  LogicPath p;
  for ( auto& k : kinds )
    p.gates.push_back( { std::move( k ), std::nullopt, 0u } );
  p.input_cap_ff = 4;
  p.terminal_load_ff = 100;
  p.driver_slope_rise_ps = p.driver_slope_fall_ps = 40;
  return p;
}

std::vector<std::string> kinds_of( const LogicPath& p )
{
  std::vector<std::string> out;
  for ( const auto& g : p.gates )
    out.push_back( g.kind );
  return out;
}

/// Output of the whole chain; side inputs are drawn from `sides` in path order.
bool chain_output( const LogicPath& path, const GateLibrary& lib, bool x, unsigned sides )
{
  bool v = x;
  unsigned var = 0;
  for ( const auto& g : path.gates )
  {
    const auto& t = lib.at( g.kind );
    std::vector<bool> in{ v };
    for ( unsigned j = 0; j + 1 < t.n_inputs; ++j, ++var )
    {
      bool s = ( sides >> var ) & 1u;
      if ( ( g.side_inverted >> j ) & 1u )
        s = !s;
      in.push_back( s );
    }
    bool and_all = true, or_any = false;
    for ( bool b : in )
      and_all = and_all && b, or_any = or_any || b;
    if ( t.function == LogicFunction::nand )
      v = !and_all;
    else if ( t.function == LogicFunction::nor )
      v = !or_any;
    else
      v = !v;
  }
  return v;
}

unsigned side_count( const LogicPath& path, const GateLibrary& lib )
{
  unsigned n = 0;
  for ( const auto& g : path.gates )
    n += lib.at( g.kind ).n_inputs - 1;
  return n;
}

bool same_function( const LogicPath& a, const LogicPath& b, const GateLibrary& lib )
{
  const unsigned n = side_count( a, lib );
  if ( n != side_count( b, lib ) )
    return false;
  for ( unsigned s = 0; s < ( 1u << n ); ++s )
    for ( bool x : { false, true } )
      if ( chain_output( a, lib, x, s ) != chain_output( b, lib, x, s ) )
        return false;
  return true;
}

} // namespace

TEST_SUITE( "restructure" )
{

TEST_CASE( "De Morgan rewrites" )
{
  const auto& lib = oracle::ref().library;
  using V = std::vector<std::string>;

  const auto nor2 = chain( { "nand2", "nor2", "nand2" } );
  const auto r2 = demorgan_rewrite( nor2, 1, lib );
  CHECK( kinds_of( r2 ) == V{ "nand2", "inv", "nand2", "inv", "nand2" } );
  CHECK( r2.gates[2].side_inverted == 1u );
  CHECK( r2.off_path_inverters() == 1 );
  CHECK( same_function( nor2, r2, lib ) );

  const auto nor3 = chain( { "nor3" } );
  const auto r3 = demorgan_rewrite( nor3, 0, lib );
  CHECK( kinds_of( r3 ) == V{ "inv", "nand3", "inv" } );
  CHECK( r3.gates[1].side_inverted == 3u );
  CHECK( same_function( nor3, r3, lib ) );

  auto nand2 = chain( { "nand2" } );
  nand2.gates[0].side_inverted = 1u;
  const auto rn = demorgan_rewrite( nand2, 0, lib );
  CHECK( kinds_of( rn ) == V{ "inv", "nor2", "inv" } );
  CHECK( rn.gates[1].side_inverted == 0u );
  CHECK( same_function( nand2, rn, lib ) );
}

TEST_CASE( "rewrite rejections" )
{
  const auto& lib = oracle::ref().library;
  const auto p = chain( { "inv", "nor2" } );
  try
  {
    demorgan_rewrite( p, 0, lib );
    FAIL( "rewrote an inverter" );
  }
  catch ( const StructureError& e )
  {
    CHECK( std::string( e.what() ).find( "'inv'" ) != std::string::npos );
  }
  CHECK_THROWS_AS( demorgan_rewrite( p, 2, lib ), std::out_of_range );

  std::vector<GateTemplate> gates{ lib.at( "inv" ), lib.at( "nor2" ) };
  const GateLibrary no_nand( gates );
  CHECK_THROWS_AS( demorgan_rewrite( p, 1, no_nand ), StructureError );
}

TEST_CASE( "inverter pair cancellation" )
{
  const auto& lib = oracle::ref().library;
  using V = std::vector<std::string>;

  auto r = cancel_inverter_pairs( chain( { "nand2", "inv", "inv", "nor2" } ), lib );
  CHECK( kinds_of( r.path ) == V{ "nand2", "nor2" } );
  CHECK( r.pairs == 1 );

  r = cancel_inverter_pairs( chain( { "nand2", "inv", "inv", "inv", "nor2" } ), lib );
  CHECK( kinds_of( r.path ) == V{ "nand2", "inv", "nor2" } );

  const auto plain = chain( { "inv", "nand2", "inv" } );
  r = cancel_inverter_pairs( plain, lib );
  CHECK( r.path == plain );
  CHECK( r.pairs == 0 );

  r = cancel_inverter_pairs( chain( { "inv", "inv" } ), lib );
  CHECK( r.path.size() == 2 );

  // window limits
  r = cancel_inverter_pairs( chain( { "inv", "inv", "nand2", "inv", "inv" } ), lib, 2, 5 );
  CHECK( kinds_of( r.path ) == V{ "inv", "inv", "nand2" } );
}

TEST_CASE( "local equivalence check" )
{
  const auto& lib = oracle::ref().library;
  const auto nor2 = chain( { "nor2" } );
  const auto cluster = demorgan_rewrite( nor2, 0, lib );
  const auto before = segment_of( nor2, 0, 1, lib );
  CHECK( local_equivalence_check( before, segment_of( cluster, 0, 3, lib ) ) );
  CHECK_FALSE( local_equivalence_check( before, segment_of( chain( { "nand2" } ), 0, 1, lib ) ) );
  CHECK( local_equivalence_check( before, before ) );

  CHECK_THROWS_AS( local_equivalence_check( before, segment_of( chain( { "nor3" } ), 0, 1, lib ) ), StructureError );
  const auto big = segment_of( chain( { "nand3", "nor3", "nand2" } ), 0, 3, lib );
  CHECK( big.inputs() == 6 );
  CHECK( local_equivalence_check( big, big ) );
  const auto too_big = segment_of( chain( { "nand3", "nor3", "nand3" } ), 0, 3, lib );
  CHECK_THROWS_AS( local_equivalence_check( too_big, too_big ), StructureError );
  CHECK_THROWS_AS( segment_of( nor2, 0, 2, lib ), std::out_of_range );
}

TEST_CASE( "nor3 fixture rewrite cancels into its neighbours" )
{
  const auto& cfg = oracle::ref();
  const auto path = oracle::fixture( "nor3_chain.path" );
  const auto r = restructure_gate( path, 2, cfg.library );
  CHECK( kinds_of( r.path ) == std::vector<std::string>{ "inv", "nand3", "inv" } );
  CHECK( r.step.cancelled == 2 );
  CHECK( describe( r.step ) == "restruct@2: nor3 -> inv+nand3+inv (cancelled: 2)" );
  CHECK( same_function( path, r.path, cfg.library ) );
  CHECK( r.path.off_path_inverters() == 2 );
  CHECK( min_delay_sizing( r.path, cfg.params, cfg.library ).delay
         < min_delay_sizing( path, cfg.params, cfg.library ).delay );
}

TEST_CASE( "rewrites of random paths preserve the path function" )
{
  const auto& cfg = oracle::ref();
  std::mt19937 rng( 5 );
  int checked = 0;
  for ( int n = 0; n < 200; ++n )
  {
    auto path = oracle::random_path( rng, 2 + n % 5, cfg.params, cfg.library );
    for ( auto& g : path.gates )
      g.side_inverted = rng() & 3u & ( ( 1u << ( cfg.library.at( g.kind ).n_inputs - 1 ) ) - 1u );
    for ( std::size_t i = 0; i < path.size(); ++i )
    {
      if ( cfg.library.at( path.gates[i].kind ).function == LogicFunction::inv )
        continue;
      const auto r = restructure_gate( path, i, cfg.library );
      CHECK( r.path.size() + 2 * r.step.cancelled == path.size() + 2 );
      if ( side_count( path, cfg.library ) <= 10 )
      {
        CHECK( same_function( path, r.path, cfg.library ) );
        ++checked;
      }
    }
  }
  CHECK( checked > 100 );
}

TEST_CASE( "gate efficiency ranking" )
{
  const auto& cfg = oracle::ref();
  const auto rank = rank_gate_efficiency( cfg.library, cfg.params );
  REQUIRE( rank.size() == 5 );
  std::vector<std::string> order;
  for ( const auto& e : rank )
    order.push_back( e.kind );
  CHECK( order == std::vector<std::string>{ "nor3", "nor2", "nand3", "nand2", "inv" } );

  const GateLibrary inv_only( { cfg.library.at( "inv" ) } );
  CHECK( rank_gate_efficiency( inv_only, cfg.params ).size() == 1 );

  auto twin = cfg.library.at( "nand2" );
  twin.name = "a_nand2";
  const GateLibrary twins( { cfg.library.at( "inv" ), cfg.library.at( "nand2" ), twin } );
  const auto tied = rank_gate_efficiency( twins, cfg.params );
  REQUIRE( tied.size() == 3 );
  CHECK( tied[0].kind == "a_nand2" );
  CHECK( tied[1].kind == "nand2" );
}

}
