/*
   Copyright 2026 The gac Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// Membership traces: the `op,identity,timestamp` text format, synthetic
// revocation-rate traces and traces derived from a VCS author log.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gac {

enum class TraceOp : std::uint8_t { add, remove };

std::string_view to_string(TraceOp op) noexcept;

struct TraceEvent {
    TraceOp op = TraceOp::add;
    std::string identity;
    /// Seconds; informational only.
    std::int64_t timestamp = 0;

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

using Trace = std::vector<TraceEvent>;

inline constexpr std::string_view kTraceHeader = "op,identity,timestamp";

/// Throws Error(parse_error) naming the offending line.
Trace read_trace(std::istream& in);
Trace read_trace_file(const std::filesystem::path& path);
void write_trace(std::ostream& out, std::span<const TraceEvent> trace);
void write_trace_file(const std::filesystem::path& path, std::span<const TraceEvent> trace);

/// Throws Error(trace_violation) naming the first event index that removes a
/// non-member or adds a current member.
void validate_trace(std::span<const TraceEvent> trace);

/// round(n_ops * rate) prefill adds at timestamp 0, then n_ops shuffled
/// workload events at timestamps 1..n_ops: the remaining adds plus exactly
/// round(n_ops * rate) removes, each of a uniformly chosen current member.
/// The prefill keeps every rate in [0, 1] feasible.
/// Throws Error(invalid_input) for a rate outside [0, 1].
Trace gen_synthetic_trace(std::size_t n_ops, double revocation_rate, std::uint64_t seed);

/// Size of the prefill for the given parameters.
std::size_t synthetic_prefill(std::size_t n_ops, double revocation_rate);

/// Input: `author,timestamp` lines ('#' comments and blank lines skipped).
/// Lines are stably sorted by timestamp. An author's first line becomes an
/// add; their last line becomes a remove when any line follows it.
/// Throws Error(parse_error) with the line number for malformed lines.
Trace ingest_vcs_log(std::istream& in);

}  // namespace gac
