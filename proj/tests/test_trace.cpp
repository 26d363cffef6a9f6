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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "gac/errors.hpp"
#include "gac/trace.hpp"

using namespace gac;

namespace {

std::size_t count(const Trace& t, TraceOp op) {
    return static_cast<std::size_t>(std::count_if(t.begin(), t.end(), [&](const auto& e) { return e.op == op; }));
}

std::string serialize(const Trace& t) {
    std::ostringstream out;
    write_trace(out, t);
    return out.str();
}

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::io_error;
}

}  // namespace

TEST(Synthetic, ZeroRateIsAllAdds) {
    auto t = gen_synthetic_trace(500, 0.0, 1);
    EXPECT_EQ(t.size(), 500u);
    EXPECT_EQ(count(t, TraceOp::add), 500u);
    EXPECT_NO_THROW(validate_trace(t));
}

TEST(Synthetic, RemoveCountMatchesRate) {
    for (double rate : {0.1, 0.25, 0.5, 0.9, 1.0}) {
        const std::size_t n = 10000;
        auto t = gen_synthetic_trace(n, rate, 7);
        auto expected = static_cast<std::size_t>(std::llround(n * rate));
        EXPECT_EQ(count(t, TraceOp::remove), expected) << rate;
        EXPECT_EQ(synthetic_prefill(n, rate), expected);
        EXPECT_EQ(t.size(), n + expected);
        EXPECT_NO_THROW(validate_trace(t)) << rate;
        std::size_t workload_removes = 0;
        for (const auto& e : t)
            if (e.timestamp > 0 && e.op == TraceOp::remove) ++workload_removes;
        EXPECT_EQ(workload_removes, expected);
    }
}

TEST(Synthetic, PrefillThenTimestampedWorkload) {
    auto t = gen_synthetic_trace(100, 0.3, 2);
    for (std::size_t i = 0; i < 30; ++i) {
        EXPECT_EQ(t[i].op, TraceOp::add);
        EXPECT_EQ(t[i].timestamp, 0);
    }
    for (std::size_t i = 30; i < t.size(); ++i) EXPECT_EQ(t[i].timestamp, static_cast<std::int64_t>(i - 29));
}

TEST(Synthetic, SameSeedSameBytes) {
    EXPECT_EQ(serialize(gen_synthetic_trace(2000, 0.4, 99)), serialize(gen_synthetic_trace(2000, 0.4, 99)));
    EXPECT_NE(serialize(gen_synthetic_trace(2000, 0.4, 99)), serialize(gen_synthetic_trace(2000, 0.4, 100)));
}

TEST(Synthetic, RejectsRateOutsideUnitInterval) {
    EXPECT_EQ(code_of([] { (void)gen_synthetic_trace(10, 1.5, 1); }), Errc::invalid_input);
    EXPECT_EQ(code_of([] { (void)gen_synthetic_trace(10, -0.1, 1); }), Errc::invalid_input);
    EXPECT_EQ(code_of([] { (void)gen_synthetic_trace(10, std::nan(""), 1); }), Errc::invalid_input);
}

TEST(Synthetic, RemovesPickVariousMembers) {
    auto t = gen_synthetic_trace(2000, 0.5, 3);
    std::set<std::string> removed;
    for (const auto& e : t)
        if (e.op == TraceOp::remove) removed.insert(e.identity);
    EXPECT_EQ(removed.size(), 1000u);
}

TEST(Validate, ReportsFirstBadIndex) {
    Trace t{{TraceOp::add, "a", 0}, {TraceOp::add, "b", 1}, {TraceOp::remove, "a", 2}, {TraceOp::remove, "a", 3}};
    try {
        validate_trace(t);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::trace_violation);
        EXPECT_NE(std::string(e.what()).find("event 3"), std::string::npos) << e.what();
    }
    Trace dup{{TraceOp::add, "a", 0}, {TraceOp::add, "a", 1}};
    try {
        validate_trace(dup);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("event 1"), std::string::npos) << e.what();
    }
    Trace readd{{TraceOp::add, "a", 0}, {TraceOp::remove, "a", 1}, {TraceOp::add, "a", 2}};
    EXPECT_NO_THROW(validate_trace(readd));
}

TEST(TraceFormat, RoundTrip) {
    auto t = gen_synthetic_trace(300, 0.2, 5);
    auto text = serialize(t);
    EXPECT_EQ(text.substr(0, text.find('\n')), kTraceHeader);
    std::istringstream in(text);
    EXPECT_EQ(read_trace(in), t);
}

TEST(TraceFormat, ToleratesBlankLinesAndCarriageReturns) {
    std::istringstream in("op,identity,timestamp\r\nadd,alice,5\r\n\nremove,alice,-3\n");
    auto t = read_trace(in);
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t[1], (TraceEvent{TraceOp::remove, "alice", -3}));
}

TEST(TraceFormat, ParseErrorsNameTheLine) {
    struct Case {
        std::string text;
        std::string where;
    };
    std::vector<Case> cases{
        {"add,a,1\n", "line 1"},
        {"", "line 1"},
        {"op,identity,timestamp\nadd,a,1\njoin,b,2\n", "line 3"},
        {"op,identity,timestamp\nadd,,1\n", "line 2"},
        {"op,identity,timestamp\n\nadd,a\n", "line 3"},
        {"op,identity,timestamp\nadd,a,1,2\n", "line 2"},
        {"op,identity,timestamp\nadd,a,x\n", "line 2"},
    };
    for (const auto& c : cases) {
        std::istringstream in(c.text);
        try {
            (void)read_trace(in);
            FAIL() << c.text;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::parse_error);
            EXPECT_NE(std::string(e.what()).find(c.where), std::string::npos) << e.what();
        }
    }
}

TEST(TraceFormat, RefusesUnwritableIdentity) {
    Trace t{{TraceOp::add, "a,b", 0}};
    std::ostringstream out;
    EXPECT_EQ(code_of([&] { write_trace(out, t); }), Errc::invalid_input);
}

TEST(Vcs, FirstCommitAddsLastCommitRemoves) {
    std::istringstream in(
        "# author,timestamp\n"
        "bob,20\n"
        "alice,10\n"
        "\n"
        "alice,30\n"
        "carol,40\n");
    auto t = ingest_vcs_log(in);
    Trace expected{
        {TraceOp::add, "alice", 10},
        {TraceOp::add, "bob", 20},
        {TraceOp::remove, "bob", 20},
        {TraceOp::remove, "alice", 30},
        {TraceOp::add, "carol", 40},
    };
    EXPECT_EQ(t, expected);
    EXPECT_NO_THROW(validate_trace(t));
}

TEST(Vcs, SingleCommitAuthorAddsAndRemoves) {
    std::istringstream in("a,1\nb,2\n");
    auto t = ingest_vcs_log(in);
    Trace expected{{TraceOp::add, "a", 1}, {TraceOp::remove, "a", 1}, {TraceOp::add, "b", 2}};
    EXPECT_EQ(t, expected);
}

TEST(Vcs, StableOnEqualTimestamps) {
    std::istringstream in("x,5\ny,5\nx,5\n");
    auto t = ingest_vcs_log(in);
    Trace expected{{TraceOp::add, "x", 5}, {TraceOp::add, "y", 5}, {TraceOp::remove, "y", 5}};
    EXPECT_EQ(t, expected);
}

TEST(Vcs, AuthorNamesWithSpaces) {
    std::istringstream in("Ada Lovelace , 3\n");
    auto t = ingest_vcs_log(in);
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].identity, "Ada Lovelace");
}

TEST(Vcs, MalformedLinesNameTheLine) {
    for (auto [text, where] : std::vector<std::pair<std::string, std::string>>{
             {"a,1\nno comma\n", "line 2"}, {"a,1\n#c\nb,zz\n", "line 3"}, {",4\n", "line 1"}}) {
        std::istringstream in(text);
        try {
            (void)ingest_vcs_log(in);
            FAIL() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::parse_error);
            EXPECT_NE(std::string(e.what()).find(where), std::string::npos) << e.what();
        }
    }
}
