#include <pathopt/process_model.hpp>

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace pathopt
{

std::string_view to_string( Edge e ) noexcept
{
  return e == Edge::rising ? "rise" : "fall";
}

std::string_view to_string( LogicFunction f ) noexcept
{
  switch ( f )
  {
  case LogicFunction::inv:
    return "inv";
  case LogicFunction::nand:
    return "nand";
  case LogicFunction::nor:
    return "nor";
  }
  return "?";
}

void ProcessParams::validate() const
{
  auto require = [] ( bool ok, const char* what ) {
    if ( !ok )
      throw std::invalid_argument( what );
  };
  require( tau_ps > 0.0, "tau_ps must be > 0" );
  require( cref_ff > 0.0, "cref_ff must be > 0" );
  require( cap_per_width_ff_um > 0.0, "cap_per_width_ff_um must be > 0" );
  require( vtn > 0.0 && vtn < 0.5, "vtn out of (0,0.5)" );
  require( vtp > 0.0 && vtp < 0.5, "vtp out of (0,0.5)" );
  require( r_ratio > 0.0, "r_ratio must be > 0" );
  require( k_ratio > 0.0, "k_ratio must be > 0" );
  require( hard_threshold >= 1.0, "hard_threshold must be >= 1" );
  require( weak_threshold > hard_threshold, "weak_threshold must exceed hard_threshold" );
  require( slope_warn_ratio >= 0.0, "slope_warn_ratio must be >= 0" );
}

void GateTemplate::validate() const
{
  auto require = [this] ( bool ok, std::string_view what ) {
    if ( !ok )
      throw std::invalid_argument( fmt::format( "gate '{}': {}", name, what ) );
  };
  require( !name.empty(), "empty name" );
  require( n_inputs >= 1, "inputs must be >= 1" );
  require( dw_hl >= 1.0 && dw_lh >= 1.0, "dw_hl and dw_lh must be >= 1" );
  require( par_coeff >= 0.0, "par_coeff must be >= 0" );
  require( par_fixed_ff >= 0.0, "par_fixed_ff must be >= 0" );
  require( !cm_override_ff || *cm_override_ff >= 0.0, "cm_override_ff must be >= 0" );
  require( inverting, "only inverting gates are supported" );
  if ( function == LogicFunction::inv )
  {
    require( n_inputs == 1, "an inverter has exactly one input" );
    require( dw_hl == 1.0 && dw_lh == 1.0, "an inverter has unit logical weights" );
  }
  else
  {
    require( n_inputs >= 2, "nand/nor gates need at least two inputs" );
  }
}

GateLibrary::GateLibrary( std::vector<GateTemplate> gates )
{
  for ( auto& g : gates )
  {
    g.validate();
    auto name = g.name;
    if ( !gates_.emplace( name, std::move( g ) ).second )
      throw std::invalid_argument( fmt::format( "duplicate gate '{}'", name ) );
  }
  if ( auto it = gates_.find( "inv" ); it != gates_.end() && it->second.function == LogicFunction::inv )
    inverter_ = "inv";
  else
    for ( const auto& [name, g] : gates_ )
      if ( g.function == LogicFunction::inv )
      {
        inverter_ = name;
        break;
      }
}

const GateTemplate& GateLibrary::at( std::string_view name ) const
{
  auto it = gates_.find( name );
  if ( it == gates_.end() )
    throw std::out_of_range( fmt::format( "unknown gate kind '{}'", name ) );
  return it->second;
}

bool GateLibrary::contains( std::string_view name ) const
{
  return gates_.find( name ) != gates_.end();
}

const std::string& GateLibrary::inverter() const
{
  if ( inverter_.empty() )
    throw std::out_of_range( "library has no inverter" );
  return inverter_;
}

std::optional<std::string> GateLibrary::find( LogicFunction function, unsigned n_inputs ) const
{
  for ( const auto& [name, g] : gates_ )
    if ( g.function == function && g.n_inputs == n_inputs )
      return name;
  return std::nullopt;
}

std::vector<std::string> GateLibrary::kinds() const
{
  std::vector<std::string> out;
  out.reserve( gates_.size() );
  for ( const auto& [name, g] : gates_ )
    out.push_back( name );
  return out;
}

SymmetryFactors symmetry_factors( const GateTemplate& gate, const ProcessParams& params ) noexcept
{
  const double k = params.k_ratio;
  return { ( 1.0 + k ) * gate.dw_hl, params.r_ratio * ( ( 1.0 + k ) / k ) * gate.dw_lh };
}

double GateInstance::parasitic_ff() const noexcept
{
  return gate->par_coeff * cin_ff + gate->par_fixed_ff;
}

double GateInstance::coupling_ff( Edge output_edge, const ProcessParams& params ) const noexcept
{
  if ( gate->cm_override_ff )
    return *gate->cm_override_ff;
  const double k = params.k_ratio;
  // falling output <=> rising input: the P transistor couples
  return output_edge == Edge::falling ? k * cin_ff / ( 2.0 * ( 1.0 + k ) ) : cin_ff / ( 2.0 * ( 1.0 + k ) );
}

double switching_threshold( Edge output_edge, const ProcessParams& params ) noexcept
{
  return output_edge == Edge::falling ? params.vtn : params.vtp;
}

double miller_factor( double coupling_ff, double load_ff ) noexcept
{
  if ( coupling_ff <= 0.0 )
    return 1.0;
  return 1.0 + 2.0 * coupling_ff / ( coupling_ff + load_ff );
}

double transition_time( const GateInstance& gate, Edge output_edge, double load_ff, const ProcessParams& params )
{
  if ( !( load_ff > 0.0 ) )
    throw std::domain_error( fmt::format( "gate '{}': load must be > 0 (got {})", gate.gate->name, load_ff ) );
  return params.tau_ps * symmetry_factors( *gate.gate, params ).for_output( output_edge ) * ( load_ff / gate.cin_ff );
}

StageDelay gate_delay( const GateInstance& gate, double input_slope_ps, Edge output_edge, double load_ff,
                       const ProcessParams& params )
{
  const double tout = transition_time( gate, output_edge, load_ff, params );
  const double m = miller_factor( gate.coupling_ff( output_edge, params ), load_ff );
  const double delay = 0.5 * switching_threshold( output_edge, params ) * input_slope_ps + 0.5 * m * tout;
  const bool slow = params.slope_warn_ratio > 0.0 && input_slope_ps > params.slope_warn_ratio * tout;
  return { delay, tout, m, slow };
}

Widths width_of( double cin_ff, const ProcessParams& params )
{
  if ( !( cin_ff > 0.0 ) )
    throw std::domain_error( "input capacitance must be > 0" );
  const double total = cin_ff / params.cap_per_width_ff_um;
  const double wn = total / ( 1.0 + params.k_ratio );
  return { wn, total - wn };
}

double cin_of_width( double total_width_um, const ProcessParams& params ) noexcept
{
  return total_width_um * params.cap_per_width_ff_um;
}

} // namespace pathopt
