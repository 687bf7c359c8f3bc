#include <doctest.h>

#include <pathopt/bounds.hpp>
#include <pathopt/errors.hpp>

#include <oracle.hpp>

#include <cmath>
#include <random>

using namespace pathopt;

namespace
{

/// Symmetric process with negligible thresholds and no coupling or parasitics:
/// every stage coefficient is the same, so the link equations become C_i^2 = C_{i-1} C_{i+1}.
struct IdealChain
{
  ProcessParams params;
  GateLibrary library;

  IdealChain()
  {
    params.tau_ps = 10;
    params.vtn = params.vtp = 1e-12;
    params.r_ratio = 2;
    params.k_ratio = 2;
    params.cref_ff = 0.01;
    params.cap_per_width_ff_um = 1;
    GateTemplate inv;
    inv.name = "inv";
    inv.cm_override_ff = 0.0;
    library = GateLibrary( { inv } );
  }

  LogicPath path( std::size_t n, double input_cap, double load ) const
  {
    LogicPath p;
    p.gates.assign( n, PathGate{ "inv", std::nullopt, 0u } );
    p.input_cap_ff = input_cap;
    p.terminal_load_ff = load;
    return p;
  }
};

} // namespace

TEST_SUITE( "bounds" )
{

TEST_CASE( "maximum delay sizing is minimum drive" )
{
  const auto& cfg = oracle::ref();
  const auto path = oracle::fixture( "chain11.path" );
  const auto r = max_delay_sizing( path, cfg.params, cfg.library );
  CHECK( r.sizing[0] == path.input_cap_ff );
  for ( std::size_t i = 1; i < path.size(); ++i )
    CHECK( r.sizing[i] == cfg.params.cref_ff );
  CHECK( r.delay == doctest::Approx( oracle::delay( path, r.sizing.cin, cfg.params, cfg.library ) ) );

  auto heavier = path;
  heavier.terminal_load_ff *= 1.5;
  CHECK( max_delay_sizing( heavier, cfg.params, cfg.library ).delay > r.delay );
}

TEST_CASE( "single-gate path has no free variable" )
{
  const auto& cfg = oracle::ref();
  auto path = oracle::fixture( "chain11.path" );
  path.gates.resize( 1 );
  const auto b = compute_bounds( path, cfg.params, cfg.library );
  CHECK( b.t_min == b.t_max );
}

TEST_CASE( "ideal chain: geometric mean and equal taper" )
{
  const IdealChain ideal;
  auto r = min_delay_sizing( ideal.path( 2, 1, 64 ), ideal.params, ideal.library );
  CHECK( r.sizing[1] == doctest::Approx( 8 ).epsilon( 1e-6 ) );

  r = min_delay_sizing( ideal.path( 3, 1, 64 ), ideal.params, ideal.library );
  CHECK( r.sizing[1] == doctest::Approx( 4 ).epsilon( 1e-6 ) );
  CHECK( r.sizing[2] == doctest::Approx( 16 ).epsilon( 1e-6 ) );
}

TEST_CASE( "minimum delay matches an exhaustive grid search" )
{
  const auto& cfg = oracle::ref();
  auto path = oracle::fixture( "chain11.path" );
  path.gates = { { "inv" }, { "nand2" }, { "nor2" }, { "inv" } };
  path.terminal_load_ff = 60;
  const auto r = min_delay_sizing( path, cfg.params, cfg.library );
  const auto grid = oracle::grid_search( path, cfg.params, 4 * path.terminal_load_ff, [&] ( const std::vector<double>& c ) {
    return oracle::delay( path, c, cfg.params, cfg.library );
  } );
  CHECK( std::abs( r.delay / grid.value - 1 ) <= 5e-3 );
}

TEST_CASE( "minimum delay is independent of the initial sizing" )
{
  const auto& cfg = oracle::ref();
  for ( const char* f : { "chain11.path", "chain13.path", "heavy_load.path" } )
  {
    const auto path = oracle::fixture( f );
    const double ref = min_delay_sizing( path, cfg.params, cfg.library ).delay;
    for ( double m : { 0.25, 1.0, 4.0, 10.0 } )
    {
      const auto r = min_delay_sizing( path, cfg.params, cfg.library, m * cfg.params.cref_ff );
      CHECK( std::abs( r.delay / ref - 1 ) <= 1e-3 );
      CHECK( r.iterations < 500 );
    }
  }
}

TEST_CASE( "link equations hold at convergence" )
{
  const auto& cfg = oracle::ref();
  for ( const char* f : { "chain11.path", "chain13.path", "nor3_chain.path" } )
  {
    const auto path = oracle::fixture( f );
    const auto r = min_delay_sizing( path, cfg.params, cfg.library );
    const auto& s = r.sizing;
    const auto c = path_coefficients( path, s, cfg.params, cfg.library );
    for ( std::size_t i = 1; i < path.size(); ++i )
    {
      if ( std::find( r.clamped.begin(), r.clamped.end(), i ) != r.clamped.end() )
        continue;
      const double next = i + 1 < path.size() ? s[i + 1] : path.terminal_load_ff;
      const double rhs = c.a[i] / c.a[i - 1] * ( next + c.fixed_par[i] ) * s[i - 1];
      CHECK( std::abs( s[i] * s[i] / rhs - 1 ) <= 1e-5 );
    }
    const auto g = path_gradient( path, s, c );
    for ( std::size_t i = 1; i < path.size(); ++i )
      if ( std::find( r.clamped.begin(), r.clamped.end(), i ) == r.clamped.end() )
        CHECK( std::abs( g[i - 1] ) * cfg.params.cref_ff / r.delay < 1e-6 );
  }
}

TEST_CASE( "minimum delay is below random sizings" )
{
  const auto& cfg = oracle::ref();
  std::mt19937 rng( 17 );
  for ( const char* f : { "chain11.path", "chain13.path", "nor3_chain.path" } )
  {
    const auto path = oracle::fixture( f );
    const double t_min = min_delay_sizing( path, cfg.params, cfg.library ).delay;
    for ( int n = 0; n < 100; ++n )
    {
      const auto s = oracle::random_sizing( rng, path, cfg.params, 100 );
      CHECK( t_min <= oracle::delay( path, s.cin, cfg.params, cfg.library ) );
    }
  }
}

TEST_CASE( "appending gates to a lightly loaded path never lowers the minimum" )
{
  const auto& cfg = oracle::ref();
  auto path = oracle::fixture( "chain11.path" );
  path.terminal_load_ff = 20;
  double prev = min_delay_sizing( path, cfg.params, cfg.library ).delay;
  for ( const char* kind : { "inv", "nand2", "nor3", "inv" } )
  {
    path.gates.push_back( { kind } );
    const double t = min_delay_sizing( path, cfg.params, cfg.library ).delay;
    CHECK( t >= prev );
    prev = t;
  }
}

TEST_CASE( "feasibility" )
{
  const auto& cfg = oracle::ref();
  const auto b = compute_bounds( oracle::fixture( "chain11.path" ), cfg.params, cfg.library );
  CHECK( b.t_min < b.t_max );
  CHECK( feasibility( b.t_min, b ) );
  CHECK_FALSE( feasibility( 0.9 * b.t_min, b ) );
  CHECK( feasibility( 2 * b.t_max, b ) );
}

TEST_CASE( "iteration budget exhaustion is reported" )
{
  const auto& cfg = oracle::ref();
  SolverOptions opts;
  opts.max_iterations = 2;
  try
  {
    min_delay_sizing( oracle::fixture( "chain13.path" ), cfg.params, cfg.library, std::nullopt, opts );
    FAIL( "converged in two passes" );
  }
  catch ( const ConvergenceError& e )
  {
    CHECK( e.iterations() == 2 );
    CHECK( e.residual() > 0 );
  }
}

TEST_CASE( "clamped gates are reported" )
{
  const auto& cfg = oracle::ref();
  auto path = oracle::fixture( "chain11.path" );
  path.terminal_load_ff = 2;
  path.input_cap_ff = 2;
  const auto r = min_delay_sizing( path, cfg.params, cfg.library );
  CHECK_FALSE( r.clamped.empty() );
  for ( auto i : r.clamped )
    CHECK( r.sizing[i] == cfg.params.cref_ff );
}

}
