#include <pathopt/io.hpp>

#include <pathopt/errors.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace pathopt
{

namespace
{

std::string_view trim( std::string_view s )
{
  const auto b = s.find_first_not_of( " \t\r" );
  if ( b == std::string_view::npos )
    return {};
  const auto e = s.find_last_not_of( " \t\r" );
  return s.substr( b, e - b + 1 );
}

std::string_view strip_comment( std::string_view s )
{
  return s.substr( 0, s.find( '#' ) );
}

std::optional<double> to_double( std::string_view s )
{
  double v{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars( s.data(), end, v );
  if ( ec != std::errc{} || ptr != end )
    return std::nullopt;
  return v;
}

struct Entry
{
  std::string value;
  std::size_t line;
};

/// `key = value` split; nullopt if the line is not of that shape.
std::optional<std::pair<std::string, std::string>> split_assignment( std::string_view line )
{
  const auto eq = line.find( '=' );
  if ( eq == std::string_view::npos )
    return std::nullopt;
  auto key = trim( line.substr( 0, eq ) );
  if ( key.empty() || key.find_first_of( " \t" ) != std::string_view::npos )
    return std::nullopt;
  return std::pair{ std::string( key ), std::string( trim( line.substr( eq + 1 ) ) ) };
}

std::string read_file( const std::filesystem::path& file )
{
  std::ifstream in( file );
  if ( !in )
    throw ParseError( file.string(), 0, "", "cannot open file" );
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class KeyBlock
{
public:
  KeyBlock( std::string source, std::size_t header_line ) : source_( std::move( source ) ), header_line_( header_line ) {}

  void add( std::string key, std::string value, std::size_t line )
  {
    if ( entries_.contains( key ) )
      throw ParseError( source_, line, key, "duplicate key" );
    entries_.emplace( std::move( key ), Entry{ std::move( value ), line } );
  }

  bool has( const std::string& key ) const { return entries_.contains( key ); }

  std::size_t line_of( const std::string& key ) const
  {
    auto it = entries_.find( key );
    return it == entries_.end() ? header_line_ : it->second.line;
  }

  double number( const std::string& key ) const
  {
    auto it = entries_.find( key );
    if ( it == entries_.end() )
      throw ParseError( source_, header_line_, key, "missing required key" );
    auto v = to_double( it->second.value );
    if ( !v )
      throw ParseError( source_, it->second.line, key, fmt::format( "non-numeric value '{}'", it->second.value ) );
    return *v;
  }

  double number_or( const std::string& key, double fallback ) const { return has( key ) ? number( key ) : fallback; }

  const std::string& text( const std::string& key ) const
  {
    auto it = entries_.find( key );
    if ( it == entries_.end() )
      throw ParseError( source_, header_line_, key, "missing required key" );
    return it->second.value;
  }

  void require( bool ok, const std::string& key, const std::string& message ) const
  {
    if ( !ok )
      throw ParseError( source_, line_of( key ), key, message );
  }

  void reject_unknown( std::initializer_list<std::string_view> known ) const
  {
    for ( const auto& [key, e] : entries_ )
      if ( std::find( known.begin(), known.end(), key ) == known.end() )
        throw ParseError( source_, e.line, key, "unknown key" );
  }

private:
  std::string source_;
  std::size_t header_line_;
  std::map<std::string, Entry> entries_;
};

std::optional<LogicFunction> function_from_name( std::string_view name )
{
  if ( name.starts_with( "nand" ) )
    return LogicFunction::nand;
  if ( name.starts_with( "nor" ) )
    return LogicFunction::nor;
  if ( name.starts_with( "inv" ) )
    return LogicFunction::inv;
  return std::nullopt;
}

ProcessParams build_params( const KeyBlock& kb )
{
  kb.reject_unknown( { "tau_ps", "vtn", "vtp", "r_ratio", "k_ratio", "cref_ff", "cap_per_width_ff_um", "weak_threshold",
                       "hard_threshold", "slope_warn_ratio" } );
  ProcessParams p;
  p.tau_ps = kb.number( "tau_ps" );
  p.vtn = kb.number( "vtn" );
  p.vtp = kb.number( "vtp" );
  p.r_ratio = kb.number( "r_ratio" );
  p.k_ratio = kb.number( "k_ratio" );
  p.cref_ff = kb.number( "cref_ff" );
  p.cap_per_width_ff_um = kb.number( "cap_per_width_ff_um" );
  p.weak_threshold = kb.number_or( "weak_threshold", p.weak_threshold );
  p.hard_threshold = kb.number_or( "hard_threshold", p.hard_threshold );
  p.slope_warn_ratio = kb.number_or( "slope_warn_ratio", p.slope_warn_ratio );

  kb.require( p.tau_ps > 0.0, "tau_ps", "tau_ps must be > 0" );
  kb.require( p.vtn > 0.0 && p.vtn < 0.5, "vtn", "vtn out of (0,0.5)" );
  kb.require( p.vtp > 0.0 && p.vtp < 0.5, "vtp", "vtp out of (0,0.5)" );
  kb.require( p.r_ratio > 0.0, "r_ratio", "r_ratio must be > 0" );
  kb.require( p.k_ratio > 0.0, "k_ratio", "k_ratio must be > 0" );
  kb.require( p.cref_ff > 0.0, "cref_ff", "cref_ff must be > 0" );
  kb.require( p.cap_per_width_ff_um > 0.0, "cap_per_width_ff_um", "cap_per_width_ff_um must be > 0" );
  kb.require( p.hard_threshold >= 1.0, "hard_threshold", "hard_threshold must be >= 1" );
  kb.require( p.weak_threshold > p.hard_threshold, "weak_threshold", "weak_threshold must exceed hard_threshold" );
  kb.require( p.slope_warn_ratio >= 0.0, "slope_warn_ratio", "slope_warn_ratio must be >= 0" );
  return p;
}

GateTemplate build_gate( const std::string& name, const KeyBlock& kb )
{
  kb.reject_unknown( { "inputs", "dw_hl", "dw_lh", "par_coeff", "par_fixed_ff", "cm_override_ff", "function" } );
  GateTemplate g;
  g.name = name;
  const double inputs = kb.number( "inputs" );
  kb.require( inputs >= 1.0 && inputs <= 6.0 && inputs == static_cast<double>( static_cast<unsigned>( inputs ) ), "inputs",
              "inputs must be an integer in [1,6]" );
  g.n_inputs = static_cast<unsigned>( inputs );
  g.dw_hl = kb.number( "dw_hl" );
  g.dw_lh = kb.number( "dw_lh" );
  g.par_coeff = kb.number( "par_coeff" );
  g.par_fixed_ff = kb.number_or( "par_fixed_ff", 0.0 );
  if ( kb.has( "cm_override_ff" ) )
    g.cm_override_ff = kb.number( "cm_override_ff" );

  std::optional<LogicFunction> fn;
  if ( kb.has( "function" ) )
  {
    const auto& f = kb.text( "function" );
    fn = f == "inv" ? std::optional{ LogicFunction::inv }
         : f == "nand" ? std::optional{ LogicFunction::nand }
         : f == "nor" ? std::optional{ LogicFunction::nor }
                      : std::nullopt;
    kb.require( fn.has_value(), "function", fmt::format( "unknown function '{}'", f ) );
  }
  else
  {
    fn = function_from_name( name );
    kb.require( fn.has_value(), "function", "cannot infer the logic function from the name; add 'function ='" );
  }
  g.function = *fn;

  kb.require( g.dw_hl >= 1.0, "dw_hl", "dw_hl must be >= 1" );
  kb.require( g.dw_lh >= 1.0, "dw_lh", "dw_lh must be >= 1" );
  kb.require( g.par_coeff >= 0.0, "par_coeff", "par_coeff must be >= 0" );
  kb.require( g.par_fixed_ff >= 0.0, "par_fixed_ff", "par_fixed_ff must be >= 0" );
  kb.require( !g.cm_override_ff || *g.cm_override_ff >= 0.0, "cm_override_ff", "cm_override_ff must be >= 0" );
  if ( g.function == LogicFunction::inv )
  {
    kb.require( g.n_inputs == 1, "inputs", "an inverter has exactly one input" );
    kb.require( g.dw_hl == 1.0 && g.dw_lh == 1.0, "dw_hl", "an inverter has dw_hl = dw_lh = 1" );
  }
  else
  {
    kb.require( g.n_inputs >= 2, "inputs", "nand/nor gates need at least two inputs" );
  }
  return g;
}

} // namespace

ProcessConfig parse_process_config( std::string_view text, std::string_view source_view )
{
  const std::string source( source_view );
  KeyBlock process( source, 1 );
  std::vector<std::pair<std::string, KeyBlock>> gates;

  std::size_t lineno = 0;
  std::istringstream in{ std::string( text ) };
  for ( std::string raw; std::getline( in, raw ); )
  {
    ++lineno;
    const auto line = trim( strip_comment( raw ) );
    if ( line.empty() )
      continue;
    if ( line.front() == '[' )
    {
      if ( line.back() != ']' )
        throw ParseError( source, lineno, "", "unterminated section header" );
      const auto inner = trim( line.substr( 1, line.size() - 2 ) );
      if ( !inner.starts_with( "gate" ) || inner.size() < 5 || ( inner[4] != ' ' && inner[4] != '\t' ) )
        throw ParseError( source, lineno, "", fmt::format( "unknown section '{}'", inner ) );
      const std::string name( trim( inner.substr( 4 ) ) );
      if ( name.empty() || name.find_first_of( " \t" ) != std::string::npos )
        throw ParseError( source, lineno, "", "gate section needs a single name" );
      for ( const auto& [n, kb] : gates )
        if ( n == name )
          throw ParseError( source, lineno, name, "duplicate gate" );
      gates.emplace_back( name, KeyBlock( source, lineno ) );
      continue;
    }
    auto kv = split_assignment( line );
    if ( !kv )
      throw ParseError( source, lineno, "", fmt::format( "expected 'key = value', got '{}'", line ) );
    ( gates.empty() ? process : gates.back().second ).add( std::move( kv->first ), std::move( kv->second ), lineno );
  }

  ProcessConfig cfg;
  cfg.params = build_params( process );
  std::vector<GateTemplate> templates;
  for ( const auto& [name, kb] : gates )
    templates.push_back( build_gate( name, kb ) );
  if ( templates.empty() )
    throw ParseError( source, lineno, "", "no [gate] blocks" );
  cfg.library = GateLibrary( std::move( templates ) );
  return cfg;
}

ProcessConfig load_process_config( const std::filesystem::path& file )
{
  return parse_process_config( read_file( file ), file.string() );
}

LogicPath parse_path( std::string_view text, std::string_view source_view, const ProcessConfig* config )
{
  const std::string source( source_view );
  KeyBlock header( source, 1 );
  LogicPath path;
  std::vector<std::size_t> gate_lines;

  std::size_t lineno = 0;
  std::istringstream in{ std::string( text ) };
  for ( std::string raw; std::getline( in, raw ); )
  {
    ++lineno;
    const auto line = trim( strip_comment( raw ) );
    if ( line.empty() )
      continue;
    if ( auto kv = split_assignment( line ) )
    {
      if ( !path.gates.empty() )
        throw ParseError( source, lineno, kv->first, "header key after the first gate line" );
      header.add( std::move( kv->first ), std::move( kv->second ), lineno );
      continue;
    }

    std::istringstream tokens{ std::string( line ) };
    PathGate gate;
    tokens >> gate.kind;
    if ( config && !config->library.contains( gate.kind ) )
      throw ParseError( source, lineno, gate.kind, "unknown gate kind" );
    for ( std::string tok; tokens >> tok; )
    {
      const auto eq = tok.find( '=' );
      const auto key = tok.substr( 0, eq );
      const auto value = eq == std::string::npos ? std::string{} : tok.substr( eq + 1 );
      if ( key == "cin" )
      {
        auto v = to_double( value );
        if ( !v || !( *v > 0.0 ) )
          throw ParseError( source, lineno, "cin", fmt::format( "invalid capacitance '{}'", value ) );
        gate.cin_ff = *v;
      }
      else if ( key == "side_inv" )
      {
        unsigned mask{};
        auto [ptr, ec] = std::from_chars( value.data(), value.data() + value.size(), mask );
        if ( ec != std::errc{} || ptr != value.data() + value.size() )
          throw ParseError( source, lineno, "side_inv", fmt::format( "invalid mask '{}'", value ) );
        gate.side_inverted = mask;
      }
      else
      {
        throw ParseError( source, lineno, key, "unknown gate attribute" );
      }
    }
    path.gates.push_back( std::move( gate ) );
    gate_lines.push_back( lineno );
  }

  header.reject_unknown(
      { "input_cap_ff", "load_ff", "input_edge", "driver_slope_rise_ps", "driver_slope_fall_ps", "polarity_flips" } );
  path.input_cap_ff = header.number( "input_cap_ff" );
  path.terminal_load_ff = header.number( "load_ff" );
  const auto& edge = header.text( "input_edge" );
  if ( edge == "rise" || edge == "rising" )
    path.input_edge = Edge::rising;
  else if ( edge == "fall" || edge == "falling" )
    path.input_edge = Edge::falling;
  else
    throw ParseError( source, header.line_of( "input_edge" ), "input_edge", "expected rise or fall" );
  path.driver_slope_rise_ps = header.number_or( "driver_slope_rise_ps", 0.0 );
  path.driver_slope_fall_ps = header.number_or( "driver_slope_fall_ps", 0.0 );
  path.polarity_flips = static_cast<int>( header.number_or( "polarity_flips", 0.0 ) );

  header.require( path.terminal_load_ff > 0.0, "load_ff", "load_ff must be > 0" );
  header.require( path.driver_slope_rise_ps >= 0.0, "driver_slope_rise_ps", "slope must be >= 0" );
  header.require( path.driver_slope_fall_ps >= 0.0, "driver_slope_fall_ps", "slope must be >= 0" );
  if ( path.gates.empty() )
    throw ParseError( source, lineno, "", "path has no gates" );

  if ( config )
  {
    header.require( path.input_cap_ff >= config->params.cref_ff, "input_cap_ff", "input_cap_ff below cref_ff" );
    for ( std::size_t i = 0; i < path.size(); ++i )
    {
      const auto& g = path.gates[i];
      const auto& tmpl = config->library.at( g.kind );
      if ( g.cin_ff && *g.cin_ff < config->params.cref_ff )
        throw ParseError( source, gate_lines[i], "cin", "cin below cref_ff" );
      if ( g.side_inverted >> ( tmpl.n_inputs - 1 ) )
        throw ParseError( source, gate_lines[i], "side_inv", "mask exceeds the gate's side inputs" );
    }
  }
  return path;
}

LogicPath load_path_file( const std::filesystem::path& file, const ProcessConfig* config )
{
  return parse_path( read_file( file ), file.string(), config );
}

std::string format_path( const LogicPath& path, const Sizing* sizing )
{
  std::string out;
  auto it = std::back_inserter( out );
  fmt::format_to( it, "input_cap_ff = {:.10g}\n", path.input_cap_ff );
  fmt::format_to( it, "load_ff = {:.10g}\n", path.terminal_load_ff );
  fmt::format_to( it, "input_edge = {}\n", to_string( path.input_edge ) );
  fmt::format_to( it, "driver_slope_rise_ps = {:.10g}\n", path.driver_slope_rise_ps );
  fmt::format_to( it, "driver_slope_fall_ps = {:.10g}\n", path.driver_slope_fall_ps );
  if ( path.polarity_flips != 0 )
    fmt::format_to( it, "polarity_flips = {}\n", path.polarity_flips );
  for ( std::size_t i = 0; i < path.size(); ++i )
  {
    const auto& g = path.gates[i];
    fmt::format_to( it, "{}", g.kind );
    if ( sizing && i > 0 )
      fmt::format_to( it, " cin={:.10g}", ( *sizing )[i] );
    else if ( !sizing && g.cin_ff )
      fmt::format_to( it, " cin={:.10g}", *g.cin_ff );
    if ( g.side_inverted )
      fmt::format_to( it, " side_inv={}", g.side_inverted );
    out += '\n';
  }
  return out;
}

} // namespace pathopt
