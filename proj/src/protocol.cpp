#include <pathopt/protocol.hpp>

#include <pathopt/bounds.hpp>
#include <pathopt/restructure.hpp>

#include <optional>
#include <span>
#include <stdexcept>

#include <fmt/format.h>

namespace pathopt
{

std::string_view to_string( Domain d ) noexcept
{
  switch ( d )
  {
  case Domain::infeasible:
    return "infeasible";
  case Domain::hard:
    return "hard";
  case Domain::medium:
    return "medium";
  case Domain::weak:
    return "weak";
  }
  return "?";
}

std::string_view to_string( StepKind k ) noexcept
{
  switch ( k )
  {
  case StepKind::bounds:
    return "bounds";
  case StepKind::classify:
    return "classify";
  case StepKind::restruct:
    return "restruct";
  case StepKind::insert_buffers:
    return "insert_buffers";
  case StepKind::distribute:
    return "distribute";
  case StepKind::note:
    return "note";
  }
  return "?";
}

ConstraintDomain classify_constraint( double tc, double t_min, const ProcessParams& params )
{
  if ( !( t_min > 0.0 ) )
    throw std::invalid_argument( fmt::format( "t_min must be positive, got {}", t_min ) );
  const double ratio = tc / t_min;
  if ( ratio < 1.0 )
    return { Domain::infeasible, ratio };
  if ( ratio <= params.hard_threshold )
    return { Domain::hard, ratio };
  if ( ratio <= params.weak_threshold )
    return { Domain::medium, ratio };
  return { Domain::weak, ratio };
}

OptimizationFailure::OptimizationFailure( double tc, double best_t_min, LogicPath best_path, std::vector<TraceStep> trace )
    : InfeasibleError( tc, best_t_min, "constraint below the minimum delay of every reachable structure" ),
      best_path_( std::move( best_path ) ),
      trace_( std::move( trace ) )
{
}

namespace
{

struct Candidate
{
  LogicPath path;
  double t_min;
  std::vector<TraceStep> steps;
  std::string label{};
};

struct Context
{
  const ProcessParams& params;
  const GateLibrary& library;
  const OptimizeOptions& options;
  double tc;
  std::optional<FlimitTable> limits{};

  const FlimitTable& flimits()
  {
    if ( !limits )
      limits = FlimitTable::compute( params, library );
    return *limits;
  }

  BufferingOptions buffering() const
  {
    BufferingOptions b;
    b.mode = options.buffer_mode;
    b.solver = options.distribute.solver;
    return b;
  }

  double t_min( const LogicPath& p ) const
  {
    return min_delay_sizing( p, params, library, std::nullopt, options.distribute.solver ).delay;
  }
};

void add_buffers( Context& ctx, Candidate& c )
{
  const auto r = min_delay_with_buffers( c.path, ctx.params, ctx.library, ctx.flimits(), ctx.buffering() );
  LogicPath p = c.path;
  for ( std::size_t idx : r.insertions )
  {
    p = insert_buffers( p, std::span( &idx, 1 ), ctx.options.buffer_mode, ctx.library );
    c.steps.push_back( { StepKind::insert_buffers,
                         fmt::format( "after {} ({}) mode={}", idx, c.path.gates[std::min( idx, c.path.size() - 1 )].kind,
                                      to_string( ctx.options.buffer_mode ) ),
                         idx, ctx.options.buffer_mode } );
    c.path = p;
  }
  if ( !r.insertions.empty() )
    c.t_min = r.t_min;
}

/// De Morgan rewrites of gates whose dual is more efficient, least efficient kinds first.
void add_rewrites( Context& ctx, Candidate& c )
{
  const auto ranking = rank_gate_efficiency( ctx.library, ctx.params );
  auto limit_of = [&] ( const std::string& kind ) {
    for ( const auto& e : ranking )
      if ( e.kind == kind )
        return e.f_limit.value_or( 0.0 );
    return 0.0;
  };

  for ( const auto& entry : ranking )
  {
    const auto& tmpl = ctx.library.at( entry.kind );
    if ( tmpl.function == LogicFunction::inv || tmpl.n_inputs > 3 )
      continue;
    const auto dual = ctx.library.find( tmpl.function == LogicFunction::nor ? LogicFunction::nand : LogicFunction::nor,
                                        tmpl.n_inputs );
    if ( !dual || !( limit_of( *dual ) > entry.f_limit.value_or( 0.0 ) ) )
      continue;

    for ( std::size_t i = 0; i < c.path.size() && c.t_min > ctx.tc; ++i )
    {
      if ( c.path.gates[i].kind != entry.kind )
        continue;
      auto outcome = restructure_gate( c.path, i, ctx.library );
      const double t = ctx.t_min( outcome.path );
      if ( !( t < c.t_min * ( 1.0 - 1e-3 ) ) )
        continue;
      c.steps.push_back( { StepKind::restruct, fmt::format( "{} t_min={:.6g}", describe( outcome.step ), t ), i,
                           ctx.options.buffer_mode } );
      c.path = std::move( outcome.path );
      c.t_min = t;
    }
    if ( c.t_min <= ctx.tc )
      return;
  }
}

double area_of( const LogicPath& p, const SensitivitySolution& s, const ProcessParams& params )
{
  return path_area( p, s.sizing, params );
}

} // namespace

OptimizationResult optimize( const LogicPath& path, double tc, const ProcessParams& params, const GateLibrary& library,
                             const OptimizeOptions& options )
{
  path.validate( params, library );
  if ( !( tc > 0.0 ) )
    throw std::invalid_argument( fmt::format( "delay constraint must be positive, got {}", tc ) );

  Context ctx{ params, library, options, tc };
  std::vector<TraceStep> trace;

  const auto bounds = compute_bounds( path, params, library, options.distribute.solver );
  trace.push_back( { StepKind::bounds, fmt::format( "t_min={:.6g} t_max={:.6g}", bounds.t_min, bounds.t_max ) } );
  const auto domain = classify_constraint( tc, bounds.t_min, params );
  trace.push_back( { StepKind::classify, fmt::format( "domain={} ratio={:.6g}", to_string( domain.kind ), domain.ratio ) } );

  Candidate current{ path, bounds.t_min, {} };

  if ( domain.kind == Domain::infeasible )
  {
    std::vector<Candidate> feasible;
    std::optional<Candidate> best_effort;
    auto consider = [&] ( Candidate c, std::string label ) {
      trace.push_back( { StepKind::note, fmt::format( "candidate={} t_min={:.6g} gates={}", label, c.t_min, c.path.size() ) } );
      c.label = std::move( label );
      if ( c.t_min <= tc )
        feasible.push_back( std::move( c ) );
      else if ( !best_effort || c.t_min < best_effort->t_min )
        best_effort = std::move( c );
    };

    if ( options.allow_restructure )
    {
      Candidate r = current;
      add_rewrites( ctx, r );
      if ( r.t_min > tc && options.allow_buffer )
        add_buffers( ctx, r );
      if ( !r.steps.empty() )
        consider( std::move( r ), "restruct" );
    }
    if ( options.allow_buffer )
    {
      Candidate b = current;
      add_buffers( ctx, b );
      if ( !b.steps.empty() )
        consider( std::move( b ), "buffer" );
    }

    if ( feasible.empty() )
    {
      const Candidate& best = best_effort ? *best_effort : current;
      for ( const auto& s : best.steps )
        trace.push_back( s );
      throw OptimizationFailure( tc, best.t_min, best.path, std::move( trace ) );
    }

    // smaller area after distribution wins; ties keep the earlier (restructured) candidate
    std::size_t pick = 0;
    double pick_area = 0.0;
    for ( std::size_t i = 0; i < feasible.size(); ++i )
    {
      const auto s = distribute_constraint( feasible[i].path, tc, params, library, options.distribute );
      const double a = area_of( feasible[i].path, s, params );
      trace.push_back( { StepKind::note, fmt::format( "candidate={} area={:.6g}", feasible[i].label, a ) } );
      if ( i == 0 || a < pick_area )
      {
        pick = i;
        pick_area = a;
      }
    }
    current = std::move( feasible[pick] );
    for ( const auto& s : current.steps )
      trace.push_back( s );
    current.steps.clear();
  }

  // domain handling on the (possibly restructured) path
  const auto local = classify_constraint( tc, current.t_min, params );
  if ( domain.kind == Domain::infeasible )
    trace.push_back( { StepKind::classify, fmt::format( "domain={} ratio={:.6g}", to_string( local.kind ), local.ratio ) } );

  auto solution = distribute_constraint( current.path, tc, params, library, options.distribute );
  if ( local.kind != Domain::weak && options.allow_buffer )
  {
    Candidate b = current;
    add_buffers( ctx, b );
    if ( !b.steps.empty() )
    {
      // every prefix of the greedy insertions is a candidate; the fewest insertions win ties
      const double a_plain = area_of( current.path, solution, params );
      std::size_t best_j = 0;
      double best_area = 0.0;
      std::optional<SensitivitySolution> best_sol;
      LogicPath p = current.path;
      for ( std::size_t j = 0; j < b.steps.size(); ++j )
      {
        p = insert_buffers( p, std::span( &b.steps[j].index, 1 ), b.steps[j].mode, library );
        auto sj = distribute_constraint( p, tc, params, library, options.distribute );
        const double aj = area_of( p, sj, params );
        if ( !best_sol || aj < best_area )
        {
          best_j = j + 1;
          best_area = aj;
          best_sol = std::move( sj );
        }
      }
      const bool keep = local.kind == Domain::hard ? best_area <= a_plain : best_area < a_plain;
      if ( keep )
      {
        for ( std::size_t j = 0; j < best_j; ++j )
        {
          trace.push_back( b.steps[j] );
          current.path = insert_buffers( current.path, std::span( &b.steps[j].index, 1 ), b.steps[j].mode, library );
        }
        current.t_min = ctx.t_min( current.path );
        solution = std::move( *best_sol );
      }
      else
        trace.push_back( { StepKind::note, fmt::format( "buffering rejected: area {:.6g} um vs {:.6g} um sizing only",
                                                        best_area, a_plain ) } );
    }
  }

  const auto timing = evaluate_path( current.path, solution.sizing, params, library );
  trace.push_back( { StepKind::distribute, fmt::format( "a={:.6g} delay={:.6g} area={:.6g}", solution.a, timing.total_delay,
                                                        timing.total_width ) } );

  OptimizationResult out{ current.path,  solution.sizing, timing.total_delay, timing.total_width,
                          domain,        bounds.t_min,    current.t_min,      solution.a,
                          std::move( trace ) };
  return out;
}

LogicPath replay( const LogicPath& path, const std::vector<TraceStep>& trace, const GateLibrary& library )
{
  LogicPath p = path;
  for ( const auto& s : trace )
  {
    if ( s.kind == StepKind::restruct )
      p = restructure_gate( p, s.index, library ).path;
    else if ( s.kind == StepKind::insert_buffers )
      p = insert_buffers( p, std::span( &s.index, 1 ), s.mode, library );
  }
  return p;
}

std::string format_trace( const std::vector<TraceStep>& trace )
{
  std::string out;
  for ( const auto& s : trace )
    out += fmt::format( "step={} detail={}\n", to_string( s.kind ), s.detail );
  return out;
}

std::string format_report( const OptimizationResult& result, double tc, const ProcessParams& params,
                           const GateLibrary& library )
{
  const auto timing = evaluate_path( result.final_path, result.sizing, params, library );
  std::string out;
  out += fmt::format( "constraint  {:.6g} ps ({}, tc/t_min = {:.6g})\n", tc, to_string( result.domain.kind ),
                      result.domain.ratio );
  out += fmt::format( "t_min       {:.6g} ps initial, {:.6g} ps final\n", result.t_min_initial, result.t_min_final );
  out += "\n" + format_trace( result.trace );
  out += fmt::format( "\n{:>3}  {:<7} {:>10} {:>9} {:>9} {:>10} {:>10}\n", "#", "gate", "cin_fF", "wn_um", "wp_um",
                      "delay_ps", "slope_ps" );
  for ( std::size_t i = 0; i < result.final_path.size(); ++i )
  {
    const auto w = width_of( result.sizing[i], params );
    out += fmt::format( "{:>3}  {:<7} {:>10.6g} {:>9.4g} {:>9.4g} {:>10.6g} {:>10.6g}\n", i, result.final_path.gates[i].kind,
                        result.sizing[i], w.wn_um, w.wp_um, timing.stage_delay[i], timing.stage_slope[i] );
  }
  out += fmt::format( "\ndelay       {:.6g} ps\n", result.achieved_delay );
  out += fmt::format( "area        {:.6g} um ({} off-path inverters, {:.6g} um)\n", result.area,
                      result.final_path.off_path_inverters(), timing.off_path_width );
  return out;
}

} // namespace pathopt
