#include <doctest.h>

#include <pathopt/cli.hpp>

#include <oracle.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

using namespace pathopt;

namespace
{

struct Run
{
  int code;
  std::string out;
  std::string err;
};

Run cli( std::vector<std::string> args )
{
  std::ostringstream out, err;
  const int code = run( args, out, err );
  return { code, out.str(), err.str() };
}

std::string proc()
{
  return oracle::data_file( "ref.proc" );
}

std::string fixture( const char* name )
{
  return oracle::data_file( name );
}

/// Value of a `key = value` line.
double value_of( const std::string& text, const std::string& key )
{
  const auto pos = text.find( key + " = " );
  REQUIRE( pos != std::string::npos );
  return std::stod( text.substr( pos + key.size() + 3 ) );
}

std::vector<std::string> lines( const std::string& text )
{
  std::vector<std::string> out;
  std::istringstream is( text );
  for ( std::string l; std::getline( is, l ); )
    out.push_back( l );
  return out;
}

std::string fmt_tc( double tc )
{
  std::ostringstream os;
  os.precision( 17 );
  os << tc;
  return os.str();
}

} // namespace

TEST_SUITE( "cli" )
{

TEST_CASE( "bounds" )
{
  const auto r = cli( { "bounds", proc(), fixture( "chain11.path" ) } );
  REQUIRE( r.code == 0 );
  CHECK( r.err.empty() );
  CHECK( value_of( r.out, "t_min_ps" ) < value_of( r.out, "t_max_ps" ) );
  const auto l = lines( r.out );
  REQUIRE( l.size() == 3 + 1 + 11 );
  CHECK( l[3] == "gate,kind,cin_tmin_ff,cin_tmax_ff" );
  CHECK( l[4].rfind( "0,inv,4,4", 0 ) == 0 );
}

TEST_CASE( "size" )
{
  const auto b = cli( { "bounds", proc(), fixture( "chain11.path" ) } );
  const double t_min = value_of( b.out, "t_min_ps" );

  auto r = cli( { "size", proc(), fixture( "chain11.path" ), "--tc", fmt_tc( 1.5 * t_min ) } );
  REQUIRE( r.code == 0 );
  CHECK( value_of( r.out, "a" ) < 0 );
  CHECK( value_of( r.out, "delay_ps" ) <= 1.5 * t_min * ( 1 + 1e-5 ) );
  CHECK( r.out.find( "gate,kind,cin_ff,wn_um,wp_um,delay_ps,slope_ps\n" ) != std::string::npos );
  CHECK( r.out.find( "saturated" ) == std::string::npos );

  r = cli( { "size", proc(), fixture( "chain11.path" ), "--tc", fmt_tc( 0.9 * t_min ) } );
  CHECK( r.code == 2 );
  CHECK( r.out.empty() );
  CHECK( r.err.rfind( "error: ", 0 ) == 0 );
  CHECK( r.err.find( "t_min" ) != std::string::npos );

  r = cli( { "size", proc(), fixture( "chain11.path" ), "--tc", "1e7" } );
  REQUIRE( r.code == 0 );
  CHECK( r.out.find( "saturated = true\n" ) != std::string::npos );
}

TEST_CASE( "equal-delay" )
{
  auto r = cli( { "equal-delay", proc(), fixture( "nor3_chain.path" ), "--tc", "450" } );
  REQUIRE( r.code == 0 );
  CHECK( value_of( r.out, "tc_ps" ) == 450 );
  CHECK( lines( r.out ).size() == 3 + 1 + 5 );

  r = cli( { "equal-delay", proc(), fixture( "nor3_chain.path" ), "--tc", "10" } );
  CHECK( r.code == 2 );
  CHECK( r.out.empty() );
}

TEST_CASE( "flimit" )
{
  auto r = cli( { "flimit", proc(), "--table" } );
  REQUIRE( r.code == 0 );
  const auto l = lines( r.out );
  REQUIRE( l.size() == 26 );
  CHECK( l[0] == "driver,gate,f_limit" );
  std::map<std::string, double> inv;
  for ( std::size_t i = 1; i < l.size(); ++i )
    if ( l[i].rfind( "inv,", 0 ) == 0 )
    {
      const auto comma = l[i].find( ',', 4 );
      inv[l[i].substr( 4, comma - 4 )] = std::stod( l[i].substr( comma + 1 ) );
    }
  REQUIRE( inv.size() == 5 );
  CHECK( inv["inv"] > inv["nand2"] );
  CHECK( inv["nand2"] > inv["nand3"] );
  CHECK( inv["nand3"] > inv["nor2"] );
  CHECK( inv["nor2"] > inv["nor3"] );

  r = cli( { "flimit", proc(), "--driver", "inv", "--gate", "nor3" } );
  REQUIRE( r.code == 0 );
  CHECK( value_of( r.out, "f_limit" ) == doctest::Approx( inv["nor3"] ).epsilon( 1e-5 ) );

  r = cli( { "flimit", proc(), "--driver", "inv" } );
  CHECK( r.code == 1 );
  CHECK( r.out.empty() );
  r = cli( { "flimit", proc(), "--driver", "inv", "--gate", "xor9" } );
  CHECK( r.code == 1 );
  CHECK( r.err.find( "xor9" ) != std::string::npos );
}

TEST_CASE( "sweep" )
{
  auto r = cli( { "sweep", proc(), fixture( "chain11.path" ), "--points", "7" } );
  REQUIRE( r.code == 0 );
  const auto l = lines( r.out );
  REQUIRE( l.size() == 8 );
  CHECK( l[0] == "a,delay_ps,area_um" );
  CHECK( l.back().rfind( "0,", 0 ) == 0 );

  r = cli( { "sweep", proc(), fixture( "chain11.path" ), "--points", "3", "--a-min", "-2" } );
  REQUIRE( r.code == 0 );
  CHECK( lines( r.out )[1].rfind( "-2,", 0 ) == 0 );

  CHECK( cli( { "sweep", proc(), fixture( "chain11.path" ), "--points", "1" } ).code == 1 );
}

TEST_CASE( "optimize" )
{
  const auto b = cli( { "bounds", proc(), fixture( "heavy_load.path" ) } );
  const double t_min = value_of( b.out, "t_min_ps" );
  const auto json = std::filesystem::temp_directory_path() / "pathopt_cli_trace.json";

  auto r = cli( { "optimize", proc(), fixture( "heavy_load.path" ), "--tc", fmt_tc( 1.1 * t_min ), "--json-trace",
                  json.string() } );
  REQUIRE( r.code == 0 );
  CHECK( r.out.find( "step=bounds" ) != std::string::npos );
  CHECK( r.out.find( "step=insert_buffers" ) != std::string::npos );
  CHECK( r.out.find( "final path" ) != std::string::npos );
  std::ifstream is( json );
  const auto trace = nlohmann::json::parse( is );
  REQUIRE( trace.is_array() );
  CHECK( trace.front()["step"] == "bounds" );
  CHECK( trace.back()["step"] == "distribute" );
  bool buffered = false;
  for ( const auto& s : trace )
    if ( s["step"] == "insert_buffers" )
      buffered = s.contains( "index" ) && s["mode"] == "pair";
  CHECK( buffered );
  std::filesystem::remove( json );

  r = cli( { "optimize", proc(), fixture( "heavy_load.path" ), "--tc", fmt_tc( 1.1 * t_min ), "--no-buffer" } );
  REQUIRE( r.code == 0 );
  CHECK( r.out.find( "step=insert_buffers" ) == std::string::npos );

  r = cli( { "optimize", proc(), fixture( "heavy_load.path" ), "--tc", fmt_tc( 0.5 * t_min ) } );
  CHECK( r.code == 2 );
  CHECK( r.out.empty() );
  CHECK( r.err.find( "step=bounds" ) != std::string::npos );
  CHECK( r.err.find( "error: " ) != std::string::npos );

  CHECK( cli( { "optimize", proc(), fixture( "heavy_load.path" ), "--tc", "100", "--buffer-mode", "triple" } ).code == 1 );
}

TEST_CASE( "outputs are deterministic" )
{
  const std::vector<std::vector<std::string>> runs{
      { "bounds", proc(), fixture( "chain13.path" ) },
      { "flimit", proc(), "--table" },
      { "sweep", proc(), fixture( "chain13.path" ) },
      { "optimize", proc(), fixture( "chain13.path" ), "--tc", "900" } };
  for ( const auto& args : runs )
  {
    const auto a = cli( args ), b = cli( args );
    CHECK( a.code == 0 );
    CHECK( a.out == b.out );
    CHECK( a.err == b.err );
  }
}

TEST_CASE( "usage and input errors" )
{
  auto r = cli( {} );
  CHECK( r.code == 1 );
  CHECK( r.out.empty() );
  CHECK_FALSE( r.err.empty() );

  CHECK( cli( { "bounds", proc() } ).code == 1 );
  CHECK( cli( { "size", proc(), fixture( "chain11.path" ) } ).code == 1 );
  CHECK( cli( { "size", proc(), fixture( "chain11.path" ), "--tc", "-5" } ).code == 1 );
  CHECK( cli( { "frobnicate" } ).code == 1 );
  CHECK( cli( { "--help" } ).code == 0 );

  r = cli( { "bounds", proc(), fixture( "missing.path" ) } );
  CHECK( r.code == 1 );
  CHECK( r.out.empty() );
  CHECK( r.err.find( "missing.path" ) != std::string::npos );

  const auto bad = std::filesystem::temp_directory_path() / "pathopt_cli_bad.proc";
  {
    std::ofstream os( bad );
    os << "tau_ps = 12\nvtn = 0.2\nvtp = 0.2\nr_ratio = fast\n";
  }
  r = cli( { "bounds", bad.string(), fixture( "chain11.path" ) } );
  CHECK( r.code == 1 );
  CHECK( r.err.find( "pathopt_cli_bad.proc" ) != std::string::npos );
  CHECK( r.err.find( "4" ) != std::string::npos );
  CHECK( r.err.find( "r_ratio" ) != std::string::npos );
  std::filesystem::remove( bad );

  r = cli( { "bounds", proc(), fixture( "chain11.path" ) } );
  CHECK( r.code == 0 );
}

}
