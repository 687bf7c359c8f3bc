#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <pathopt/process_model.hpp>

namespace pathopt
{

/// One gate on the critical chain.
struct PathGate
{
  std::string kind;
  std::optional<double> cin_ff;      ///< initial size, if given
  std::uint32_t side_inverted{ 0u }; ///< bit j set: side input j is driven through an off-path inverter

  friend bool operator==( const PathGate&, const PathGate& ) = default;
};

/*! \brief A bounded combinational path.
 *
 * The input capacitance of the first gate is fixed by the latch driving the
 * path, and the terminal load by whatever the path drives. Only the sizes of
 * gates 2..n are free.
 */
struct LogicPath
{
  std::vector<PathGate> gates;
  double input_cap_ff{ 0.0 };
  double terminal_load_ff{ 0.0 };
  Edge input_edge{ Edge::rising };
  double driver_slope_rise_ps{ 0.0 };
  double driver_slope_fall_ps{ 0.0 };
  int polarity_flips{ 0 }; ///< logic inversions added by single-inverter buffering

  std::size_t size() const noexcept { return gates.size(); }

  double driver_slope( Edge e ) const noexcept
  {
    return e == Edge::rising ? driver_slope_rise_ps : driver_slope_fall_ps;
  }

  Edge input_edge_of( std::size_t i ) const noexcept { return ( i % 2 == 0 ) ? input_edge : flip( input_edge ); }
  Edge output_edge_of( std::size_t i ) const noexcept { return flip( input_edge_of( i ) ); }

  /// Number of off-path side-input inverters.
  std::size_t off_path_inverters() const noexcept;

  /// Throws std::invalid_argument on an invariant violation.
  void validate( const ProcessParams& params, const GateLibrary& library ) const;

  friend bool operator==( const LogicPath&, const LogicPath& ) = default;
};

/// Per-gate input capacitances; cin[0] is the fixed path input capacitance.
struct Sizing
{
  std::vector<double> cin;

  std::size_t size() const noexcept { return cin.size(); }
  double operator[]( std::size_t i ) const { return cin[i]; }
  double& operator[]( std::size_t i ) { return cin[i]; }
};

/// Sizing from the path file: given sizes where present, cref elsewhere, input_cap for gate 1.
Sizing initial_sizing( const LogicPath& path, const ProcessParams& params );

/// Every free gate at `cin_ff`.
Sizing uniform_sizing( const LogicPath& path, double cin_ff );

struct PathTiming
{
  std::vector<double> stage_delay;
  std::vector<double> stage_slope;
  std::vector<double> stage_load;
  double total_delay{ 0.0 };
  double total_width{ 0.0 };    ///< on-path plus off-path width (um)
  double off_path_width{ 0.0 }; ///< side-input inverters at minimum drive
  std::size_t slow_input_stages{ 0 };
};

/// Load on gate i: next gate's cin (terminal load for the last gate) plus own parasitic.
double stage_load( const LogicPath& path, const Sizing& sizing, std::size_t i, const GateLibrary& library );

/// Full-model path delay and width.
PathTiming evaluate_path( const LogicPath& path, const Sizing& sizing, const ProcessParams& params,
                          const GateLibrary& library );

/// Total width (um) of a sized path, including off-path inverters.
double path_area( const LogicPath& path, const Sizing& sizing, const ProcessParams& params );

/*! \brief Path delay linearized around a snapshot sizing.
 *
 * Grouping each gate's output transition time gives
 *
 *   T = constant_term + sum_i a[i] * (cin[i+1] + fixed_par[i]) / cin[i]
 *
 * with cin[n] the terminal load. `a[i]` freezes the coupling factor of gate i
 * and the threshold of gate i+1. The part of the parasitic proportional to
 * cin[i] contributes a size-independent a[i] * par_coeff and lives in
 * constant_term; only the size-independent parasitic enters the fanout term.
 */
struct CoefficientSet
{
  std::vector<double> a;
  std::vector<double> fixed_par;
  std::vector<double> miller;
  double constant_term{ 0.0 };
};

CoefficientSet path_coefficients( const LogicPath& path, const Sizing& sizing, const ProcessParams& params,
                                  const GateLibrary& library );

/// Delay predicted by the frozen model at an arbitrary sizing.
double frozen_delay( const LogicPath& path, const Sizing& sizing, const CoefficientSet& coeffs );

/// dT/dcin[i] of the frozen model for the free gates i = 1..n-1 (entry 0 is gate 2).
std::vector<double> path_gradient( const LogicPath& path, const Sizing& sizing, const CoefficientSet& coeffs );

} // namespace pathopt
