#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <pathopt/path_core.hpp>

namespace pathopt
{

struct SideInput
{
  unsigned var;  ///< index into the segment's side variables
  bool inverted; ///< driven through an off-path inverter
};

struct SegmentGate
{
  LogicFunction function;
  std::vector<SideInput> sides;
};

/*! \brief A contiguous piece of a critical chain as a Boolean function.
 *
 * The critical input enters the first gate; each gate's remaining inputs are
 * side variables. Side variables are numbered in path order, so two segments
 * over the same original gates share their numbering.
 */
struct PathSegment
{
  std::vector<SegmentGate> gates;
  unsigned side_vars{ 0 };

  unsigned inputs() const noexcept { return side_vars + 1; }
  bool evaluate( bool critical, std::uint64_t sides ) const;
};

/// Segment over gates [first, last) of a path.
PathSegment segment_of( const LogicPath& path, std::size_t first, std::size_t last, const GateLibrary& library );

/// Exhaustive truth-table comparison. Throws StructureError on an input-count mismatch or more than 6 inputs.
bool local_equivalence_check( const PathSegment& before, const PathSegment& after );

/*! \brief De Morgan rewrite of the gate at `index`.
 *
 * nor_m becomes inv, nand_m, inv on the critical chain with every side input
 * inverted off-path (nand_m becomes inv, nor_m, inv likewise). Throws
 * StructureError if the gate is not a nand/nor of arity <= 3 or the library
 * lacks its dual.
 */
LogicPath demorgan_rewrite( const LogicPath& path, std::size_t index, const GateLibrary& library );

struct CancelResult
{
  LogicPath path;
  std::size_t pairs{ 0 };
};

/// Removes adjacent inverter pairs within [first, last) until none remain. Never empties the path.
CancelResult cancel_inverter_pairs( const LogicPath& path, const GateLibrary& library, std::size_t first = 0,
                                    std::size_t last = std::numeric_limits<std::size_t>::max() );

struct RestructureStep
{
  std::size_t index;
  std::string from;
  std::string to;
  std::size_t cancelled;
};

/// `restruct@<index>: nor3 -> inv+nand3+inv (cancelled: n)`
std::string describe( const RestructureStep& step );

struct RewriteOutcome
{
  LogicPath path;
  RestructureStep step;
};

/*! \brief Rewrite, local inverter cancellation and equivalence proof.
 *
 * Cancellation is limited to the rewritten cluster and the inverters directly
 * next to it.
 * The touched window is checked exhaustively against the original gates;
 * a mismatch throws StructureError.
 */
RewriteOutcome restructure_gate( const LogicPath& path, std::size_t index, const GateLibrary& library );

struct GateEfficiency
{
  std::string kind;
  std::optional<double> f_limit; ///< nullopt: no finite limit (sorts last)
};

/// Gate kinds by inverter-driven buffer limit, least efficient (smallest limit) first.
/// Ties go to the larger dw_hl, then the name.
std::vector<GateEfficiency> rank_gate_efficiency( const GateLibrary& library, const ProcessParams& params );

} // namespace pathopt
