#include <pathopt/errors.hpp>

#include <fmt/format.h>

namespace pathopt
{

ParseError::ParseError( std::string source, std::size_t line, std::string key, const std::string& message )
    : std::runtime_error( fmt::format( "{}:{}: {}{}", source, line, key.empty() ? "" : "'" + key + "': ", message ) ),
      source_( std::move( source ) ),
      line_( line ),
      key_( std::move( key ) )
{
}

InfeasibleError::InfeasibleError( double tc_ps, double t_min_ps, const std::string& message )
    : std::runtime_error( fmt::format( "{} (tc = {:.6g} ps, t_min = {:.6g} ps)", message, tc_ps, t_min_ps ) ),
      tc_( tc_ps ),
      t_min_( t_min_ps )
{
}

ConvergenceError::ConvergenceError( int iterations, double residual, const std::string& message )
    : std::runtime_error( fmt::format( "{} after {} iterations (last residual {:.3g})", message, iterations, residual ) ),
      iterations_( iterations ),
      residual_( residual )
{
}

} // namespace pathopt
