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

// Sequential trace replay through either scheme against a MetadataStore,
// with per-event wall-clock and op-count measurement and CSV output.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gac/group_manager.hpp"
#include "gac/op_counter.hpp"
#include "gac/trace.hpp"

namespace gac {

enum class Scheme { ibbe_sgx, he };
enum class StoreBackend { memory, directory };

std::string_view to_string(Scheme s) noexcept;
std::string_view to_string(StoreBackend b) noexcept;
/// Accepts "ibbe-sgx" / "he" and "memory" / "file"; throws Error(invalid_input).
Scheme parse_scheme(std::string_view s);
StoreBackend parse_backend(std::string_view s);

struct ReplayConfig {
    Scheme scheme = Scheme::ibbe_sgx;
    /// Ignored for the HE scheme.
    std::size_t partition_size = 1000;
    StoreBackend backend = StoreBackend::memory;
    /// Root directory for the file backend.
    std::filesystem::path store_root;
    std::uint64_t seed = 1;
    /// Decrypt as a random current member after every k-th event; 0 disables.
    std::size_t sample_every = 0;
    std::string group_id = "replay";
    RepartitionPolicy policy{};
};

struct EventRecord {
    std::size_t index = 0;
    TraceOp op = TraceOp::add;
    std::string identity;
    double admin_us = 0;
    /// Administrator-side counts for this event, store writes included.
    OpCounts ops;
    std::size_t members = 0;
    std::size_t partitions = 0;
    std::size_t metadata_bytes = 0;
    std::optional<double> decrypt_us;
    OpCounts decrypt_ops;
};

struct ReplayReport {
    Scheme scheme = Scheme::ibbe_sgx;
    std::size_t partition_size = 0;
    std::vector<EventRecord> events;

    [[nodiscard]] double total_admin_us() const;
    [[nodiscard]] std::optional<double> mean_decrypt_us() const;
    [[nodiscard]] std::size_t peak_metadata_bytes() const;
    [[nodiscard]] std::size_t peak_partitions() const;
    /// Broadcast keys refreshed over the run: rekeys plus removes.
    [[nodiscard]] std::uint64_t partition_rekeys() const;
};

/// Throws Error(trace_violation) with the event index before touching the store.
ReplayReport replay(std::span<const TraceEvent> trace, const ReplayConfig& config);

inline constexpr std::string_view kReplaySchema = "gac-replay/1";

/// `# schema=gac-replay/1`, a header row, then one row per event.
void write_report_csv(std::ostream& out, const ReplayReport& report);
/// The op-count columns only, one row per event (timings excluded).
std::vector<std::vector<std::uint64_t>> op_count_columns(const ReplayReport& report);

struct SummaryRow {
    std::string label;
    Scheme scheme = Scheme::ibbe_sgx;
    std::size_t partition_size = 0;
    std::size_t events = 0;
    double total_admin_ms = 0;
    std::optional<double> mean_decrypt_ms;
    std::size_t peak_metadata_bytes = 0;
    std::size_t peak_partitions = 0;
    std::uint64_t partition_rekeys = 0;
};

SummaryRow report_summarize(const ReplayReport& report, std::string label);
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);

}  // namespace gac
