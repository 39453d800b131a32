#pragma once

#include "chemoswarm/episode.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace chemo {

/// Column order of trace CSV files. The first 15 columns are the public
/// schema; px, py (position one step before the row) follow so that
/// per-step displacement survives strided logging.
inline constexpr const char* kTraceHeader =
    "step,agent_id,s0,s1,s2,s3,s4,s5,o0,o1,c0,c1,x,y,gain,px,py";

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Rows are written step-major (all agents for a step, ascending agent id).
void write_trace_csv(std::ostream& out, std::span<const AgentTrace> traces);

/// Groups rows by agent id (ascending). Throws ParseError naming the line on a
/// header mismatch, wrong column count, or unparsable number.
std::vector<AgentTrace> read_trace_csv(std::istream& in);

} // namespace chemo
