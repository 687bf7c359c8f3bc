#include <pathopt/cli.hpp>

#include <pathopt/bounds.hpp>
#include <pathopt/buffering.hpp>
#include <pathopt/errors.hpp>
#include <pathopt/io.hpp>
#include <pathopt/protocol.hpp>
#include <pathopt/sensitivity_sizing.hpp>

#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

namespace pathopt
{

namespace
{

struct Inputs
{
  std::string process_file;
  std::string path_file;
  double tc{ 0.0 };
  std::string driver, gate;
  bool table{ false };
  std::size_t points{ 20 };
  std::optional<double> a_min;
  bool no_restruct{ false };
  bool no_buffer{ false };
  std::string buffer_mode{ "pair" };
  std::string json_trace;
};

void warn_slow_inputs( const PathTiming& t, std::ostream& err )
{
  if ( t.slow_input_stages > 0 )
    err << fmt::format( "warning: {} stage(s) driven by slow input transitions; delay model outside its fast-input range\n",
                        t.slow_input_stages );
}

void print_sizing( const LogicPath& path, const Sizing& s, const ProcessParams& params, const GateLibrary& library,
                   std::ostream& out, std::ostream& err )
{
  const auto t = evaluate_path( path, s, params, library );
  out << fmt::format( "delay_ps = {:.6g}\narea_um = {:.6g}\n", t.total_delay, t.total_width );
  out << "gate,kind,cin_ff,wn_um,wp_um,delay_ps,slope_ps\n";
  for ( std::size_t i = 0; i < path.size(); ++i )
  {
    const auto w = width_of( s[i], params );
    out << fmt::format( "{},{},{:.6g},{:.6g},{:.6g},{:.6g},{:.6g}\n", i, path.gates[i].kind, s[i], w.wn_um, w.wp_um,
                        t.stage_delay[i], t.stage_slope[i] );
  }
  warn_slow_inputs( t, err );
}

std::string format_limit( const std::optional<double>& f )
{
  return f ? fmt::format( "{:.6g}", *f ) : std::string( "none" );
}

int cmd_bounds( const Inputs& in, std::ostream& out )
{
  const auto cfg = load_process_config( in.process_file );
  const auto path = load_path_file( in.path_file, &cfg );
  const auto b = compute_bounds( path, cfg.params, cfg.library );
  out << fmt::format( "t_min_ps = {:.6g}\nt_max_ps = {:.6g}\niterations = {}\n", b.t_min, b.t_max, b.iterations );
  out << "gate,kind,cin_tmin_ff,cin_tmax_ff\n";
  for ( std::size_t i = 0; i < path.size(); ++i )
    out << fmt::format( "{},{},{:.6g},{:.6g}\n", i, path.gates[i].kind, b.sizing_min[i], b.sizing_max[i] );
  return 0;
}

int cmd_size( const Inputs& in, std::ostream& out, std::ostream& err )
{
  const auto cfg = load_process_config( in.process_file );
  const auto path = load_path_file( in.path_file, &cfg );
  const auto sol = distribute_constraint( path, in.tc, cfg.params, cfg.library );
  out << fmt::format( "tc_ps = {:.6g}\na = {:.6g}\n", in.tc, sol.a );
  if ( sol.saturated )
    out << "saturated = true\n";
  print_sizing( path, sol.sizing, cfg.params, cfg.library, out, err );
  return 0;
}

int cmd_equal_delay( const Inputs& in, std::ostream& out, std::ostream& err )
{
  const auto cfg = load_process_config( in.process_file );
  const auto path = load_path_file( in.path_file, &cfg );
  const auto s = equal_delay_distribution( path, in.tc, cfg.params, cfg.library );
  out << fmt::format( "tc_ps = {:.6g}\n", in.tc );
  print_sizing( path, s, cfg.params, cfg.library, out, err );
  return 0;
}

int cmd_flimit( const Inputs& in, std::ostream& out, std::ostream& err )
{
  const auto cfg = load_process_config( in.process_file );
  if ( in.table )
  {
    const auto t = FlimitTable::compute( cfg.params, cfg.library );
    out << "driver,gate,f_limit\n";
    for ( const auto& e : t.entries() )
      out << fmt::format( "{},{},{}\n", e.driver, e.gate, format_limit( e.f_limit ) );
    return 0;
  }
  if ( in.driver.empty() || in.gate.empty() )
  {
    err << "flimit: give --driver and --gate, or --table\n";
    return 1;
  }
  const auto f = flimit( cfg.library.at( in.driver ), cfg.library.at( in.gate ), cfg.params, cfg.library );
  out << fmt::format( "f_limit = {}\n", format_limit( f.f_limit ) );
  return 0;
}

int cmd_sweep( const Inputs& in, std::ostream& out, std::ostream& err )
{
  const auto cfg = load_process_config( in.process_file );
  const auto path = load_path_file( in.path_file, &cfg );
  const auto values = sweep_values( path, cfg.params, cfg.library, in.points, in.a_min );
  const auto r = sweep( path, values, cfg.params, cfg.library );
  out << "a,delay_ps,area_um\n";
  for ( const auto& row : r.rows )
    out << fmt::format( "{:.6g},{:.6g},{:.6g}\n", row.a, row.delay, row.area );
  for ( const auto& f : r.failures )
    err << fmt::format( "warning: a = {:.6g} skipped: {}\n", f.a, f.message );
  return 0;
}

void write_json_trace( const std::string& file, const std::vector<TraceStep>& trace )
{
  nlohmann::json j = nlohmann::json::array();
  for ( const auto& s : trace )
  {
    nlohmann::json step{ { "step", to_string( s.kind ) }, { "detail", s.detail } };
    if ( s.kind == StepKind::restruct || s.kind == StepKind::insert_buffers )
      step["index"] = s.index;
    if ( s.kind == StepKind::insert_buffers )
      step["mode"] = to_string( s.mode );
    j.push_back( std::move( step ) );
  }
  std::ofstream os( file );
  if ( !os )
    throw std::runtime_error( fmt::format( "cannot write '{}'", file ) );
  os << j.dump( 2 ) << '\n';
}

int cmd_optimize( const Inputs& in, std::ostream& out, std::ostream& err )
{
  const auto cfg = load_process_config( in.process_file );
  const auto path = load_path_file( in.path_file, &cfg );
  OptimizeOptions opts;
  opts.allow_restructure = !in.no_restruct;
  opts.allow_buffer = !in.no_buffer;
  opts.buffer_mode = in.buffer_mode == "single" ? BufferMode::single_inverter : BufferMode::inverter_pair;
  try
  {
    const auto r = optimize( path, in.tc, cfg.params, cfg.library, opts );
    out << format_report( r, in.tc, cfg.params, cfg.library );
    out << "\nfinal path\n" << format_path( r.final_path, &r.sizing );
    warn_slow_inputs( evaluate_path( r.final_path, r.sizing, cfg.params, cfg.library ), err );
    if ( !in.json_trace.empty() )
      write_json_trace( in.json_trace, r.trace );
  }
  catch ( const OptimizationFailure& e )
  {
    if ( !in.json_trace.empty() )
      write_json_trace( in.json_trace, e.trace() );
    err << format_trace( e.trace() );
    throw;
  }
  return 0;
}

} // namespace

int run( int argc, const char* const* argv, std::ostream& out, std::ostream& err )
{
  CLI::App app{ "Delay-constrained minimum-area sizing of bounded CMOS gate paths", "pathopt" };
  app.require_subcommand( 1, 1 );
  Inputs in;

  auto files = [&] ( CLI::App* sub, bool with_path ) {
    sub->add_option( "process", in.process_file, "process and gate library file" )->required();
    if ( with_path )
      sub->add_option( "path", in.path_file, "path file" )->required();
  };
  auto tc_option = [&] ( CLI::App* sub ) {
    sub->add_option( "--tc", in.tc, "delay constraint (ps)" )->required()->check( CLI::PositiveNumber );
  };

  auto* bounds = app.add_subcommand( "bounds", "minimum and maximum path delay" );
  files( bounds, true );

  auto* size = app.add_subcommand( "size", "minimum-area sizing under a delay constraint" );
  files( size, true );
  tc_option( size );

  auto* equal = app.add_subcommand( "equal-delay", "equal stage-delay sizing baseline" );
  files( equal, true );
  tc_option( equal );

  auto* fl = app.add_subcommand( "flimit", "buffer insertion fanout limits" );
  files( fl, false );
  fl->add_option( "--driver", in.driver, "driving gate kind" );
  fl->add_option( "--gate", in.gate, "gate kind" );
  fl->add_flag( "--table", in.table, "full driver x gate matrix as CSV" );

  auto* sw = app.add_subcommand( "sweep", "delay/area frontier over the sensitivity" );
  files( sw, true );
  sw->add_option( "--points", in.points, "number of sensitivity values" )->check( CLI::Range( 2, 100000 ) );
  sw->add_option( "--a-min", in.a_min, "most negative sensitivity (ps/fF)" );

  auto* opt = app.add_subcommand( "optimize", "select and apply sizing, buffering and restructuring" );
  files( opt, true );
  tc_option( opt );
  opt->add_flag( "--no-restruct", in.no_restruct, "disable De Morgan restructuring" );
  opt->add_flag( "--no-buffer", in.no_buffer, "disable buffer insertion" );
  opt->add_option( "--buffer-mode", in.buffer_mode, "inserted buffer: single inverter or inverter pair" )
      ->check( CLI::IsMember( { "single", "pair" } ) );
  opt->add_option( "--json-trace", in.json_trace, "write the step trace as JSON" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( const CLI::ParseError& e )
  {
    return app.exit( e, out, err ) == 0 ? 0 : 1;
  }

  try
  {
    if ( bounds->parsed() )
      return cmd_bounds( in, out );
    if ( size->parsed() )
      return cmd_size( in, out, err );
    if ( equal->parsed() )
      return cmd_equal_delay( in, out, err );
    if ( fl->parsed() )
      return cmd_flimit( in, out, err );
    if ( sw->parsed() )
      return cmd_sweep( in, out, err );
    return cmd_optimize( in, out, err );
  }
  catch ( const InfeasibleError& e )
  {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  catch ( const ConvergenceError& e )
  {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  catch ( const std::exception& e )
  {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run( const std::vector<std::string>& args, std::ostream& out, std::ostream& err )
{
  std::vector<const char*> argv{ "pathopt" };
  for ( const auto& a : args )
    argv.push_back( a.c_str() );
  return run( static_cast<int>( argv.size() ), argv.data(), out, err );
}

} // namespace pathopt
