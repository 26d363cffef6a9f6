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
#include <memory>
#include <thread>

#include "gac/errors.hpp"
#include "gac/metadata_store.hpp"

using namespace gac;
using namespace std::chrono_literals;

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    return p;
}

class StoreTest : public ::testing::TestWithParam<std::string> {
  protected:
    void SetUp() override {
        if (GetParam() == "memory") {
            store_ = std::make_unique<MemoryStore>();
        } else {
            root_ = fresh_dir("gac_store_param");
            store_ = std::make_unique<DirectoryStore>(root_);
        }
    }
    void TearDown() override {
        store_.reset();
        if (!root_.empty()) fs::remove_all(root_);
    }

    std::unique_ptr<MetadataStore> store_;
    fs::path root_;
};

}  // namespace

TEST_P(StoreTest, PutGetVersions) {
    auto& s = *store_;
    EXPECT_EQ(s.put("g/group.meta", Bytes{1}), 1u);
    EXPECT_EQ(s.put("g/p0.part", Bytes{2, 3}), 2u);
    EXPECT_EQ(s.put("h/group.meta", Bytes{4}), 1u);
    auto rec = s.get("g/p0.part");
    EXPECT_EQ(rec.payload, (Bytes{2, 3}));
    EXPECT_EQ(rec.version, 2u);
    EXPECT_EQ(s.group_version("g"), 2u);
    EXPECT_TRUE(s.contains("g/group.meta"));
    EXPECT_FALSE(s.contains("g/p9.part"));
}

TEST_P(StoreTest, MissingPathIsNotFound) {
    try {
        (void)store_->get("g/group.meta");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::not_found);
    }
}

TEST_P(StoreTest, WatchReturnsChangesAfterVersion) {
    auto& s = *store_;
    auto v1 = s.put("g/p1.part", Bytes{1});
    s.put("g/group.meta", Bytes{2});
    auto cs = s.watch("g", v1, 0ms);
    ASSERT_FALSE(cs.timed_out());
    EXPECT_EQ(cs.paths, (std::vector<std::string>{"g/group.meta"}));
    EXPECT_EQ(cs.version, 2u);

    auto all = s.watch("g", 0, 0ms);
    EXPECT_EQ(all.paths, (std::vector<std::string>{"g/p1.part", "g/group.meta"}));
}

TEST_P(StoreTest, WatchTimesOut) {
    store_->put("g/group.meta", Bytes{1});
    auto start = std::chrono::steady_clock::now();
    auto cs = store_->watch("g", 1, 30ms);
    EXPECT_TRUE(cs.timed_out());
    EXPECT_EQ(cs.version, 1u);
    EXPECT_GE(std::chrono::steady_clock::now() - start, 25ms);
    EXPECT_TRUE(store_->watch("unknown", 0, 1ms).timed_out());
}

TEST_P(StoreTest, EraseShowsUpInWatch) {
    auto& s = *store_;
    s.put("g/p1.part", Bytes{1});
    auto v = s.put("g/p2.part", Bytes{1});
    s.erase("g/p1.part");
    s.erase("g/p1.part");
    EXPECT_EQ(s.group_version("g"), v + 1);
    EXPECT_FALSE(s.contains("g/p1.part"));
    auto cs = s.watch("g", v, 0ms);
    EXPECT_EQ(cs.paths, (std::vector<std::string>{"g/p1.part"}));
    EXPECT_EQ(s.list_group("g"), (std::vector<std::string>{"g/p2.part"}));
}

TEST_P(StoreTest, RewriteAfterEraseIsLive) {
    auto& s = *store_;
    s.put("g/p1.part", Bytes{1});
    s.erase("g/p1.part");
    s.put("g/p1.part", Bytes{7});
    EXPECT_EQ(s.get("g/p1.part").payload, (Bytes{7}));
    EXPECT_EQ(s.watch("g", 0, 0ms).paths, (std::vector<std::string>{"g/p1.part"}));
}

TEST_P(StoreTest, ListGroupOnlyPartitions) {
    auto& s = *store_;
    s.put("g/group.meta", Bytes{1});
    s.put("g/p2.part", Bytes{1});
    s.put("g/p10.part", Bytes{1});
    s.put("other/p1.part", Bytes{1});
    auto list = s.list_group("g");
    EXPECT_EQ(list.size(), 2u);
    EXPECT_TRUE(std::is_sorted(list.begin(), list.end()));
    EXPECT_TRUE(s.list_group("nothing").empty());
}

TEST_P(StoreTest, RejectsInvalidPaths) {
    auto& s = *store_;
    for (std::string bad : {"nogroup", "../x/group.meta", "g/..", "g/a/b", "/group.meta", "g/index", "g/"}) {
        try {
            s.put(bad, Bytes{1});
            FAIL() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::invalid_input) << bad;
        }
    }
    EXPECT_THROW((void)MetadataStore::group_record_path("a/b"), Error);
}

TEST_P(StoreTest, WatcherWakesOnWrite) {
    auto& s = *store_;
    s.put("g/group.meta", Bytes{1});
    ChangeSet seen;
    std::thread watcher([&] { seen = s.watch("g", 1, 5000ms); });
    std::this_thread::sleep_for(20ms);
    s.put("g/p3.part", Bytes{9});
    watcher.join();
    ASSERT_FALSE(seen.timed_out());
    EXPECT_EQ(seen.paths, (std::vector<std::string>{"g/p3.part"}));
}

INSTANTIATE_TEST_SUITE_P(Backends, StoreTest, ::testing::Values("memory", "file"));

TEST(DirectoryStore, LayoutAndReload) {
    auto root = fresh_dir("gac_store_reload");
    {
        DirectoryStore s(root);
        s.put("g/group.meta", Bytes{1, 2});
        s.put(MetadataStore::partition_record_path("g", 4), Bytes{3});
        s.put("g/p5.part", Bytes{4});
        s.erase("g/p5.part");
    }
    EXPECT_TRUE(fs::exists(root / "g" / "group.meta"));
    EXPECT_TRUE(fs::exists(root / "g" / "p4.part"));
    EXPECT_FALSE(fs::exists(root / "g" / "p5.part"));
    EXPECT_TRUE(fs::exists(root / "g" / "index"));

    DirectoryStore again(root);
    EXPECT_EQ(again.group_version("g"), 4u);
    EXPECT_EQ(again.get("g/group.meta").payload, (Bytes{1, 2}));
    EXPECT_EQ(again.get("g/p4.part").version, 2u);
    EXPECT_EQ(again.watch("g", 3, 0ms).paths, (std::vector<std::string>{"g/p5.part"}));
    EXPECT_EQ(again.put("g/group.meta", Bytes{0}), 5u);
    fs::remove_all(root);
}

TEST(DirectoryStore, MatchesMemoryStore) {
    auto root = fresh_dir("gac_store_equiv");
    MemoryStore mem;
    DirectoryStore dir(root);
    for (MetadataStore* s : {static_cast<MetadataStore*>(&mem), static_cast<MetadataStore*>(&dir)}) {
        for (int i = 0; i < 20; ++i) {
            s->put("g/p" + std::to_string(i % 5) + ".part", Bytes{static_cast<std::uint8_t>(i)});
            if (i % 7 == 6) s->erase("g/p" + std::to_string(i % 3) + ".part");
            s->put("g/group.meta", Bytes{static_cast<std::uint8_t>(i)});
        }
    }
    EXPECT_EQ(mem.group_version("g"), dir.group_version("g"));
    EXPECT_EQ(mem.list_group("g"), dir.list_group("g"));
    for (const auto& p : mem.list_group("g")) {
        EXPECT_EQ(mem.get(p).payload, dir.get(p).payload);
        EXPECT_EQ(mem.get(p).version, dir.get(p).version);
    }
    EXPECT_EQ(mem.watch("g", 10, 0ms).paths, dir.watch("g", 10, 0ms).paths);
    fs::remove_all(root);
}
