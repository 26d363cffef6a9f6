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

#include <filesystem>
#include <sstream>

#include "gac/errors.hpp"
#include "gac/replay.hpp"

using namespace gac;

namespace fs = std::filesystem;

namespace {

ReplayConfig ibbe_config(std::size_t m) {
    ReplayConfig cfg;
    cfg.partition_size = m;
    return cfg;
}

std::vector<std::string> csv_lines(const ReplayReport& r) {
    std::ostringstream out;
    write_report_csv(out, r);
    std::vector<std::string> lines;
    std::istringstream in(out.str());
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    return lines;
}

}  // namespace

TEST(Replay, EmptyTraceGivesEmptyReport) {
    auto r = replay({}, ibbe_config(4));
    EXPECT_TRUE(r.events.empty());
    EXPECT_EQ(r.total_admin_us(), 0.0);
    EXPECT_FALSE(r.mean_decrypt_us().has_value());
}

TEST(Replay, MembershipFollowsTrace) {
    auto trace = gen_synthetic_trace(200, 0.3, 4);
    auto r = replay(trace, ibbe_config(8));
    ASSERT_EQ(r.events.size(), trace.size());
    std::size_t members = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        members += trace[i].op == TraceOp::add ? 1 : -1;
        ASSERT_EQ(r.events[i].members, members) << i;
        ASSERT_GE(r.events[i].partitions * 8, members) << i;
        ASSERT_EQ(r.events[i].identity, trace[i].identity);
    }
}

TEST(Replay, FullRevocationEndsEmpty) {
    auto trace = gen_synthetic_trace(60, 1.0, 5);
    auto r = replay(trace, ibbe_config(6));
    EXPECT_EQ(r.events.back().members, 0u);
    EXPECT_EQ(r.events.back().partitions, 0u);
    EXPECT_LT(r.events.back().metadata_bytes, 241u);
}

TEST(Replay, RemoveRefreshesEveryPartition) {
    ReplayConfig cfg = ibbe_config(5);
    cfg.policy = {0, 1, 1, 1};
    auto trace = gen_synthetic_trace(150, 0.4, 6);
    auto r = replay(trace, cfg);
    for (std::size_t i = 1; i < r.events.size(); ++i) {
        const auto& e = r.events[i];
        if (e.op != TraceOp::remove) continue;
        EXPECT_EQ(e.ops.ibbe_remove, 1u) << i;
        EXPECT_EQ(e.ops.ibbe_rekey + e.ops.ibbe_remove, r.events[i - 1].partitions) << i;
    }
}

TEST(Replay, AddTouchesAtMostOnePartition) {
    auto trace = gen_synthetic_trace(120, 0.0, 7);
    auto r = replay(trace, ibbe_config(10));
    for (std::size_t i = 1; i < r.events.size(); ++i) {
        const auto& ops = r.events[i].ops;
        EXPECT_EQ(ops.ibbe_add + ops.ibbe_encrypt, 1u) << i;
        EXPECT_EQ(ops.ibbe_rekey, 0u);
    }
    EXPECT_EQ(r.events.back().partitions, 12u);
}

TEST(Replay, OpCountsAreDeterministic) {
    auto trace = gen_synthetic_trace(150, 0.5, 8);
    ReplayConfig cfg = ibbe_config(7);
    cfg.sample_every = 10;
    auto a = replay(trace, cfg);
    auto b = replay(trace, cfg);
    EXPECT_EQ(op_count_columns(a), op_count_columns(b));
    cfg.seed = 2;
    auto c = replay(trace, cfg);
    EXPECT_EQ(c.events.size(), a.events.size());
}

TEST(Replay, SampledDecrypts) {
    auto trace = gen_synthetic_trace(100, 0.2, 9);
    ReplayConfig cfg = ibbe_config(16);
    cfg.sample_every = 5;
    auto r = replay(trace, cfg);
    std::size_t sampled = 0;
    for (const auto& e : r.events)
        if (e.decrypt_us) {
            ++sampled;
            EXPECT_GE(e.decrypt_ops.pairing, 2u);
        }
    EXPECT_EQ(sampled, trace.size() / 5);
    EXPECT_TRUE(r.mean_decrypt_us().has_value());
}

TEST(Replay, HybridBaseline) {
    auto trace = gen_synthetic_trace(80, 0.25, 10);
    ReplayConfig cfg;
    cfg.scheme = Scheme::he;
    cfg.sample_every = 4;
    auto r = replay(trace, cfg);
    EXPECT_EQ(r.partition_size, 0u);
    for (std::size_t i = 1; i < r.events.size(); ++i) {
        const auto& e = r.events[i];
        EXPECT_EQ(e.metadata_bytes, e.members * 92) << i;
        EXPECT_EQ(e.partitions, 0u);
        if (e.op == TraceOp::add)
            EXPECT_EQ(e.ops.he_wrap, 1u);
        else
            EXPECT_EQ(e.ops.he_wrap, e.members);
    }
}

TEST(Replay, FileBackendWritesLayout) {
    auto root = fs::temp_directory_path() / "gac_replay_files";
    fs::remove_all(root);
    auto trace = gen_synthetic_trace(40, 0.2, 11);
    ReplayConfig cfg = ibbe_config(8);
    cfg.backend = StoreBackend::directory;
    cfg.store_root = root;
    cfg.group_id = "team";
    auto r = replay(trace, cfg);
    EXPECT_TRUE(fs::exists(root / "team" / "group.meta"));
    EXPECT_TRUE(fs::exists(root / "team" / "index"));
    std::size_t parts = 0;
    for (const auto& entry : fs::directory_iterator(root / "team"))
        if (entry.path().extension() == ".part") ++parts;
    EXPECT_EQ(parts, r.events.back().partitions);

    EXPECT_EQ(op_count_columns(r), op_count_columns(replay(trace, ibbe_config(8))));

    try {
        (void)replay(trace, cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::invalid_input);
    }
    fs::remove_all(root);
}

TEST(Replay, InvalidTraceRejectedWithIndex) {
    Trace t{{TraceOp::add, "a", 0}, {TraceOp::remove, "b", 1}};
    try {
        (void)replay(t, ibbe_config(4));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::trace_violation);
        EXPECT_NE(std::string(e.what()).find("event 1"), std::string::npos);
    }
    EXPECT_THROW((void)replay(gen_synthetic_trace(3, 0, 1), ibbe_config(0)), Error);
}

TEST(ReplayCsv, SchemaAndRowCount) {
    auto trace = gen_synthetic_trace(30, 0.2, 12);
    ReplayConfig cfg = ibbe_config(4);
    cfg.sample_every = 3;
    auto r = replay(trace, cfg);
    auto lines = csv_lines(r);
    ASSERT_EQ(lines.size(), trace.size() + 2);
    EXPECT_EQ(lines[0].rfind("# schema=gac-replay/1", 0), 0u);
    EXPECT_NE(lines[0].find("partition_size=4"), std::string::npos);
    EXPECT_EQ(lines[1].rfind("index,op,identity,admin_us", 0), 0u);
    auto columns = std::count(lines[1].begin(), lines[1].end(), ',');
    for (std::size_t i = 2; i < lines.size(); ++i)
        EXPECT_EQ(std::count(lines[i].begin(), lines[i].end(), ','), columns) << lines[i];
}

TEST(ReplayCsv, Summary) {
    auto trace = gen_synthetic_trace(50, 0.5, 13);
    auto r = replay(trace, ibbe_config(5));
    auto row = report_summarize(r, "m5");
    EXPECT_EQ(row.events, trace.size());
    EXPECT_EQ(row.peak_partitions, r.peak_partitions());
    EXPECT_GT(row.partition_rekeys, 0u);
    EXPECT_FALSE(row.mean_decrypt_ms.has_value());

    std::vector<SummaryRow> rows{row};
    std::ostringstream out;
    write_summary_csv(out, rows);
    auto text = out.str();
    EXPECT_EQ(text.rfind("# schema=gac-replay/1", 0), 0u);
    EXPECT_NE(text.find("\nm5,ibbe-sgx,5,"), std::string::npos);
}

TEST(Replay, PeakBytesBounds) {
    auto trace = gen_synthetic_trace(100, 0.0, 14);
    auto r = replay(trace, ibbe_config(10));
    // 10 full partitions: one 241-byte ciphertext and one 60-byte envelope each, plus the sealed gk.
    auto peak = r.peak_metadata_bytes();
    EXPECT_GE(peak, 10u * (241 + 60));
    EXPECT_LT(peak, 10u * (241 + 60) + 200);
}

TEST(Parse, SchemesAndBackends) {
    EXPECT_EQ(parse_scheme("ibbe-sgx"), Scheme::ibbe_sgx);
    EXPECT_EQ(parse_scheme("he"), Scheme::he);
    EXPECT_EQ(parse_backend("file"), StoreBackend::directory);
    EXPECT_THROW((void)parse_scheme("rsa"), Error);
    EXPECT_THROW((void)parse_backend("s3"), Error);
}
