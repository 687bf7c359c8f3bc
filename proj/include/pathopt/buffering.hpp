#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <pathopt/link_solver.hpp>
#include <pathopt/path_core.hpp>

namespace pathopt
{

/*! \brief Buffer size minimizing the frozen two-stage delay
 *
 *   a_gate (C_buf + par_gate) / cin_gate + a_buf (load + fixed_par_buf) / C_buf
 *
 * i.e. C_buf = sqrt(a_buf (load + fixed_par_buf) cin_gate / a_gate), clamped at cref.
 * The buffer's own size-proportional parasitic adds a constant and drops out.
 */
double optimal_buffer_size( double a_gate, double cin_gate, double a_buf, double fixed_par_buf, double load_ff,
                            double cref_ff ) noexcept;

/// Optimal buffer after `gate` (output edge `gate_output`) driving `load_ff`: closed form, then one re-freeze pass.
double size_buffer( const GateTemplate& gate, double cin_gate, Edge gate_output, const GateTemplate& buffer,
                    double load_ff, const ProcessParams& params );

/// Load buffer-insertion limit of `gate` when driven by `driver`.
struct FanoutLimit
{
  std::string driver;
  std::string gate;
  std::optional<double> f_limit; ///< nullopt: no crossing in [1, 100]
};

/*! \brief Fanout above which a buffer after `gate` beats driving the load directly.
 *
 * Structure A is driver -> gate -> F * cin_gate; structure B puts an
 * optimally sized `buffer_kind` between the gate and the same load, with the
 * driver and gate sizes unchanged. Delays are full-model chains averaged over
 * both input edges. The crossing is bracketed in F in [1, 100] to 1e-3.
 */
FanoutLimit flimit( const GateTemplate& driver, const GateTemplate& gate, const ProcessParams& params,
                    const GateLibrary& library, std::string_view buffer_kind = {} );

/// Averaged A and B structure delays at fanout F (exposed for bracketing checks).
struct BufferComparison
{
  double unbuffered;
  double buffered;
};
BufferComparison compare_buffering( const GateTemplate& driver, const GateTemplate& gate, double fanout,
                                    const ProcessParams& params, const GateLibrary& library,
                                    std::string_view buffer_kind = {} );

/// Limits for every driver x gate pair of a library.
class FlimitTable
{
public:
  static FlimitTable compute( const ProcessParams& params, const GateLibrary& library, std::string_view buffer_kind = {} );

  std::optional<double> at( std::string_view driver, std::string_view gate ) const;
  const std::vector<FanoutLimit>& entries() const noexcept { return entries_; }

private:
  std::vector<FanoutLimit> entries_;
};

struct CriticalNode
{
  std::size_t index; ///< gate whose output node is overloaded
  double fanout;     ///< (next cin + own parasitic) / cin
  double limit;
};

/*! \brief Gates whose fanout exceeds the limit for their (driver, gate) pair.
 *
 * The first gate is taken as driven by the library inverter. A single-gate
 * path has no free size and yields no nodes. Sorted by fanout / limit,
 * largest first.
 */
std::vector<CriticalNode> find_critical_nodes( const LogicPath& path, const Sizing& sizing, const FlimitTable& limits,
                                               const GateLibrary& library );

enum class BufferMode
{
  single_inverter,
  inverter_pair
};

std::string_view to_string( BufferMode mode ) noexcept;

/// Buffers after each listed gate. New gates enter at cref; single mode flips the path polarity once per insertion.
LogicPath insert_buffers( const LogicPath& path, std::span<const std::size_t> after, BufferMode mode,
                          const GateLibrary& library );

struct BufferingResult
{
  LogicPath path;
  Sizing sizing;
  double t_min{ 0.0 };
  double t_min_unbuffered{ 0.0 };
  std::vector<std::size_t> insertions; ///< gate index buffered in each accepted round, in the path of that round
};

struct BufferingOptions
{
  BufferMode mode{ BufferMode::inverter_pair };
  double min_gain{ 1e-3 }; ///< relative t_min improvement required to accept an insertion
  std::size_t max_rounds{ 64 };
  SolverOptions solver;
};

/*! \brief Buffer insertion with global sizing.
 *
 * Repeatedly sizes for minimum delay, buffers the worst over-limit node and
 * re-sizes; stops when no node exceeds its limit or the gain falls below
 * `min_gain`. Never returns a slower structure than the input.
 */
BufferingResult min_delay_with_buffers( const LogicPath& path, const ProcessParams& params, const GateLibrary& library,
                                        const FlimitTable& limits, const BufferingOptions& options = {} );

} // namespace pathopt
