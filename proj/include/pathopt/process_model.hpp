#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pathopt
{

/// Signal transition direction at a node.
enum class Edge
{
  rising,
  falling
};

constexpr Edge flip( Edge e ) noexcept
{
  return e == Edge::rising ? Edge::falling : Edge::rising;
}

std::string_view to_string( Edge e ) noexcept;

/*! \brief Process constants shared by every delay equation.
 *
 * Units are fixed: times in ps, capacitances in fF, widths in um.
 * `vtn` and `vtp` are threshold voltages reduced by the supply (V_T / V_DD).
 */
struct ProcessParams
{
  double tau_ps{ 0.0 };
  double vtn{ 0.0 };
  double vtp{ 0.0 };
  double r_ratio{ 0.0 };             ///< N/P current ratio at equal width
  double k_ratio{ 0.0 };             ///< P/N width configuration ratio
  double cref_ff{ 0.0 };             ///< minimum available gate input capacitance
  double cap_per_width_ff_um{ 0.0 }; ///< input capacitance per um of total width
  double weak_threshold{ 2.5 };
  double hard_threshold{ 1.2 };

  /// Stages whose input slope exceeds this multiple of their output
  /// transition time are flagged as leaving the fast-input range.
  /// Zero disables the check.
  double slope_warn_ratio{ 0.0 };

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;
};

enum class LogicFunction
{
  inv,
  nand,
  nor
};

std::string_view to_string( LogicFunction f ) noexcept;

/*! \brief Per-kind gate data of the library.
 *
 * `par_coeff` gives the output parasitic as a fraction of the gate's own
 * input capacitance. `par_fixed_ff` is an optional size-independent output
 * parasitic (diffusion stub, local wire). `cm_override_ff` replaces the
 * derived input-to-output coupling capacitance on both edges.
 */
struct GateTemplate
{
  std::string name;
  unsigned n_inputs{ 1 };
  double dw_hl{ 1.0 };
  double dw_lh{ 1.0 };
  double par_coeff{ 0.0 };
  double par_fixed_ff{ 0.0 };
  std::optional<double> cm_override_ff;
  LogicFunction function{ LogicFunction::inv };
  bool inverting{ true };

  void validate() const;
};

/// Immutable name -> template map.
class GateLibrary
{
public:
  GateLibrary() = default;
  explicit GateLibrary( std::vector<GateTemplate> gates );

  const GateTemplate& at( std::string_view name ) const;
  bool contains( std::string_view name ) const;

  /// Name of the library inverter used for buffering and De Morgan clusters.
  const std::string& inverter() const;

  /// Kind with the given function and input count, if the library has one.
  std::optional<std::string> find( LogicFunction function, unsigned n_inputs ) const;

  /// Kinds in name order.
  std::vector<std::string> kinds() const;

  std::size_t size() const noexcept { return gates_.size(); }

private:
  std::map<std::string, GateTemplate, std::less<>> gates_;
  std::string inverter_;
};

struct SymmetryFactors
{
  double s_hl;
  double s_lh;

  double for_output( Edge output_edge ) const noexcept
  {
    return output_edge == Edge::falling ? s_hl : s_lh;
  }
};

SymmetryFactors symmetry_factors( const GateTemplate& gate, const ProcessParams& params ) noexcept;

/// A library gate at a given size on the critical pin.
struct GateInstance
{
  const GateTemplate* gate{ nullptr };
  double cin_ff{ 0.0 };

  /// Output parasitic capacitance: par_coeff * cin + par_fixed.
  double parasitic_ff() const noexcept;

  /// Input-to-output coupling: half the input capacitance of the transistor
  /// that does not drive the output transition.
  double coupling_ff( Edge output_edge, const ProcessParams& params ) const noexcept;
};

/// Threshold of the transistor that switches a gate producing `output_edge`.
double switching_threshold( Edge output_edge, const ProcessParams& params ) noexcept;

/// Input-to-output coupling multiplier 1 + 2 Cm / (Cm + CL).
double miller_factor( double coupling_ff, double load_ff ) noexcept;

/// Output transition time tau * S * CL / Cin. Throws std::domain_error for load <= 0.
double transition_time( const GateInstance& gate, Edge output_edge, double load_ff, const ProcessParams& params );

struct StageDelay
{
  double delay_ps;
  double output_slope_ps;
  double miller;
  bool slow_input; ///< input slope outside the fast-input range (see ProcessParams::slope_warn_ratio)
};

/// Switching delay of one gate including the input slope and coupling effects.
StageDelay gate_delay( const GateInstance& gate, double input_slope_ps, Edge output_edge, double load_ff,
                       const ProcessParams& params );

struct Widths
{
  double wn_um;
  double wp_um;

  double total() const noexcept { return wn_um + wp_um; }
};

/// N and P widths realizing an input capacitance, split by the k ratio.
Widths width_of( double cin_ff, const ProcessParams& params );

/// Inverse of width_of: input capacitance for a total width.
double cin_of_width( double total_width_um, const ProcessParams& params ) noexcept;

} // namespace pathopt
