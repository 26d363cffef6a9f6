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

#include "gac/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "gac/errors.hpp"
#include "gac/rng.hpp"

namespace gac {

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
    throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": " + what);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool valid_identity(std::string_view id) {
    return !id.empty() && id.find_first_of(",\r\n") == std::string_view::npos;
}

bool parse_i64(std::string_view s, std::int64_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

std::string fresh_identity(std::size_t n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "u%07zu", n);
    return buf;
}

}  // namespace

std::string_view to_string(TraceOp op) noexcept { return op == TraceOp::add ? "add" : "remove"; }

Trace read_trace(std::istream& in) {
    Trace out;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto s = trim(line);
        if (!header) {
            if (s != kTraceHeader) parse_fail(line_no, "expected header '" + std::string(kTraceHeader) + "'");
            header = true;
            continue;
        }
        if (s.empty()) continue;
        auto c1 = s.find(',');
        auto c2 = c1 == std::string_view::npos ? c1 : s.find(',', c1 + 1);
        if (c2 == std::string_view::npos || s.find(',', c2 + 1) != std::string_view::npos)
            parse_fail(line_no, "expected op,identity,timestamp");
        TraceEvent ev;
        auto op = s.substr(0, c1);
        if (op == "add")
            ev.op = TraceOp::add;
        else if (op == "remove")
            ev.op = TraceOp::remove;
        else
            parse_fail(line_no, "unknown op '" + std::string(op) + "'");
        ev.identity = std::string(s.substr(c1 + 1, c2 - c1 - 1));
        if (!valid_identity(ev.identity)) parse_fail(line_no, "empty identity");
        if (!parse_i64(s.substr(c2 + 1), ev.timestamp)) parse_fail(line_no, "bad timestamp");
        out.push_back(std::move(ev));
    }
    if (!header) parse_fail(1, "missing header");
    return out;
}

Trace read_trace_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot read " + path.string());
    try {
        return read_trace(in);
    } catch (const Error& e) {
        if (e.code() != Errc::parse_error) throw;
        throw Error(Errc::parse_error, path.string() + ": " + e.what());
    }
}

void write_trace(std::ostream& out, std::span<const TraceEvent> trace) {
    out << kTraceHeader << '\n';
    for (const auto& ev : trace) {
        if (!valid_identity(ev.identity))
            throw Error(Errc::invalid_input, "identity '" + ev.identity + "' cannot be written to a trace");
        out << to_string(ev.op) << ',' << ev.identity << ',' << ev.timestamp << '\n';
    }
}

void write_trace_file(const std::filesystem::path& path, std::span<const TraceEvent> trace) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
    write_trace(out, trace);
    if (!out) throw Error(Errc::io_error, "short write to " + path.string());
}

void validate_trace(std::span<const TraceEvent> trace) {
    std::unordered_set<std::string_view> members;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& ev = trace[i];
        if (ev.op == TraceOp::add && !members.insert(ev.identity).second)
            throw Error(Errc::trace_violation,
                        "event " + std::to_string(i) + ": add of current member '" + ev.identity + "'");
        if (ev.op == TraceOp::remove && members.erase(ev.identity) == 0)
            throw Error(Errc::trace_violation,
                        "event " + std::to_string(i) + ": remove of non-member '" + ev.identity + "'");
    }
}

std::size_t synthetic_prefill(std::size_t n_ops, double revocation_rate) {
    if (!(revocation_rate >= 0.0 && revocation_rate <= 1.0))
        throw Error(Errc::invalid_input, "revocation rate must lie in [0, 1]");
    return static_cast<std::size_t>(std::llround(static_cast<double>(n_ops) * revocation_rate));
}

Trace gen_synthetic_trace(std::size_t n_ops, double revocation_rate, std::uint64_t seed) {
    const auto removes = synthetic_prefill(n_ops, revocation_rate);
    auto rng = Rng::seeded(seed);

    Trace out;
    out.reserve(removes + n_ops);
    std::vector<std::string> members;
    std::size_t next_id = 0;
    auto add = [&](std::int64_t ts) {
        members.push_back(fresh_identity(next_id++));
        out.push_back({TraceOp::add, members.back(), ts});
    };

    for (std::size_t i = 0; i < removes; ++i) add(0);

    std::vector<TraceOp> ops(n_ops, TraceOp::add);
    std::fill(ops.begin(), ops.begin() + static_cast<std::ptrdiff_t>(removes), TraceOp::remove);
    for (std::size_t i = ops.size(); i > 1; --i) std::swap(ops[i - 1], ops[rng.uniform(i)]);

    for (std::size_t i = 0; i < n_ops; ++i) {
        const auto ts = static_cast<std::int64_t>(i + 1);
        if (ops[i] == TraceOp::add) {
            add(ts);
            continue;
        }
        auto victim = rng.uniform(members.size());
        std::swap(members[victim], members.back());
        out.push_back({TraceOp::remove, std::move(members.back()), ts});
        members.pop_back();
    }
    return out;
}

Trace ingest_vcs_log(std::istream& in) {
    struct Line {
        std::string author;
        std::int64_t ts;
    };
    std::vector<Line> lines;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto s = trim(raw);
        if (s.empty() || s.front() == '#') continue;
        auto comma = s.rfind(',');
        if (comma == std::string_view::npos) parse_fail(line_no, "expected author,timestamp");
        auto author = trim(s.substr(0, comma));
        if (!valid_identity(author)) parse_fail(line_no, "bad author");
        Line l{std::string(author), 0};
        if (!parse_i64(trim(s.substr(comma + 1)), l.ts)) parse_fail(line_no, "bad timestamp");
        lines.push_back(std::move(l));
    }
    std::stable_sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.ts < b.ts; });

    std::unordered_map<std::string_view, std::size_t> last;
    for (std::size_t i = 0; i < lines.size(); ++i) last[lines[i].author] = i;

    Trace out;
    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& l = lines[i];
        if (seen.insert(l.author).second) out.push_back({TraceOp::add, l.author, l.ts});
        if (last[l.author] == i && i + 1 < lines.size()) out.push_back({TraceOp::remove, l.author, l.ts});
    }
    return out;
}

}  // namespace gac
