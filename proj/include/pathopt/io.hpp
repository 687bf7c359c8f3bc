#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <pathopt/path_core.hpp>
#include <pathopt/process_model.hpp>

namespace pathopt
{

struct ProcessConfig
{
  ProcessParams params;
  GateLibrary library;
};

/*! \brief Parses a process/library description.
 *
 * Line oriented `key = value` text with `#` comments. Process keys come
 * first; each `[gate <name>]` line opens a gate block. Every error is a
 * ParseError carrying the source name, line number and key.
 */
ProcessConfig parse_process_config( std::string_view text, std::string_view source = "<config>" );
ProcessConfig load_process_config( const std::filesystem::path& file );

/*! \brief Parses a path description.
 *
 * Header `key = value` lines (input_cap_ff, load_ff, input_edge,
 * driver_slope_rise_ps, driver_slope_fall_ps, polarity_flips), then one gate
 * per line, input to output: `<kind> [cin=<fF>] [side_inv=<mask>]`.
 * With a library, gate kinds and path invariants are checked with line numbers.
 */
LogicPath parse_path( std::string_view text, std::string_view source = "<path>", const ProcessConfig* config = nullptr );
LogicPath load_path_file( const std::filesystem::path& file, const ProcessConfig* config = nullptr );

/// Path file text; with a sizing, every gate after the first carries `cin=`.
std::string format_path( const LogicPath& path, const Sizing* sizing = nullptr );

} // namespace pathopt
