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

// Stand-in for the cloud storage: a bi-level hierarchy of records
// ("<group>/group.meta", "<group>/<partition>.part"), a per-group monotone
// version counter, and a blocking watch() that emulates long polling.

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "gac/bytes.hpp"

namespace gac {

struct StoreRecord {
    Bytes payload;
    std::uint64_t version = 0;
};

struct ChangeSet {
    /// Group version observed when the watch returned.
    std::uint64_t version = 0;
    /// Paths written or erased after `since_version`, oldest first. Empty on timeout.
    std::vector<std::string> paths;

    [[nodiscard]] bool timed_out() const noexcept { return paths.empty(); }
};

/// Thread-safe. A single writer per group is assumed; any number of readers
/// and watchers may run concurrently.
class MetadataStore {
  public:
    virtual ~MetadataStore() = default;
    MetadataStore(const MetadataStore&) = delete;
    MetadataStore& operator=(const MetadataStore&) = delete;

    /// Writes a record and returns its version (the group's new version).
    std::uint64_t put(std::string_view path, ByteView payload);
    /// Throws Error(not_found) for a missing path.
    [[nodiscard]] StoreRecord get(std::string_view path) const;
    /// Removes a record; counts as a change. Missing paths are ignored.
    void erase(std::string_view path);
    [[nodiscard]] bool contains(std::string_view path) const;

    /// Blocks until the group has changes newer than since_version or the
    /// timeout elapses.
    [[nodiscard]] ChangeSet watch(std::string_view group, std::uint64_t since_version,
                                  std::chrono::milliseconds timeout) const;

    /// Partition record paths of a group, sorted.
    [[nodiscard]] std::vector<std::string> list_group(std::string_view group) const;
    [[nodiscard]] std::uint64_t group_version(std::string_view group) const;

    static std::string group_record_path(std::string_view group);
    static std::string partition_record_path(std::string_view group, std::uint64_t partition_id);

  protected:
    MetadataStore() = default;

    struct GroupState {
        std::uint64_t version = 0;
        std::map<std::string, std::uint64_t> live;     // path -> version written
        std::map<std::string, std::uint64_t> erased;   // path -> version erased
    };

    virtual void write_payload(const std::string& path, ByteView payload) = 0;
    [[nodiscard]] virtual Bytes read_payload(const std::string& path) const = 0;
    virtual void remove_payload(const std::string& path) = 0;
    /// Called with the lock held after every state change.
    virtual void persist_state(const std::string& /*group*/, const GroupState& /*state*/) {}

    void restore_state(const std::string& group, GroupState state);

  private:
    mutable std::mutex mu_;
    mutable std::condition_variable changed_;
    std::map<std::string, GroupState, std::less<>> groups_;
};

class MemoryStore final : public MetadataStore {
  public:
    MemoryStore() = default;

  private:
    void write_payload(const std::string& path, ByteView payload) override;
    [[nodiscard]] Bytes read_payload(const std::string& path) const override;
    void remove_payload(const std::string& path) override;

    std::map<std::string, Bytes> payloads_;
};

/// Durable backend: `<root>/<group>/group.meta`, `<root>/<group>/<id>.part`
/// and `<root>/<group>/index` holding the group version and per-record
/// versions. Existing groups under root are loaded on construction.
class DirectoryStore final : public MetadataStore {
  public:
    explicit DirectoryStore(std::filesystem::path root);

    [[nodiscard]] const std::filesystem::path& root() const noexcept { return root_; }

  private:
    void write_payload(const std::string& path, ByteView payload) override;
    [[nodiscard]] Bytes read_payload(const std::string& path) const override;
    void remove_payload(const std::string& path) override;
    void persist_state(const std::string& group, const GroupState& state) override;

    std::filesystem::path root_;
};

}  // namespace gac
