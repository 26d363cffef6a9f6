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

#include "gac/metadata_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "gac/errors.hpp"

namespace gac {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kGroupRecord = "group.meta";
constexpr std::string_view kIndexFile = "index";

bool valid_component(std::string_view c) {
    if (c.empty() || c == "." || c == "..") return false;
    return std::all_of(c.begin(), c.end(), [](char ch) {
        return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_' ||
               ch == '-' || ch == '.';
    });
}

struct SplitPath {
    std::string group;
    std::string name;
};

SplitPath split_path(std::string_view path) {
    auto slash = path.find('/');
    if (slash == std::string_view::npos) throw Error(Errc::invalid_input, "path must be <group>/<record>");
    SplitPath sp{std::string(path.substr(0, slash)), std::string(path.substr(slash + 1))};
    if (!valid_component(sp.group) || !valid_component(sp.name) || sp.name == kIndexFile)
        throw Error(Errc::invalid_input, "invalid store path '" + std::string(path) + "'");
    return sp;
}

void check_group(std::string_view group) {
    if (!valid_component(group)) throw Error(Errc::invalid_input, "invalid group id '" + std::string(group) + "'");
}

void write_file_atomic(const fs::path& target, ByteView data) {
    auto tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::io_error, "cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
        out.flush();
        if (!out) throw Error(Errc::io_error, "short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace

// --- MetadataStore -------------------------------------------------------------

std::string MetadataStore::group_record_path(std::string_view group) {
    check_group(group);
    return std::string(group) + "/" + std::string(kGroupRecord);
}

std::string MetadataStore::partition_record_path(std::string_view group, std::uint64_t partition_id) {
    check_group(group);
    return std::string(group) + "/p" + std::to_string(partition_id) + ".part";
}

std::uint64_t MetadataStore::put(std::string_view path, ByteView payload) {
    auto sp = split_path(path);
    std::string key(path);
    std::lock_guard lock(mu_);
    write_payload(key, payload);
    auto& st = groups_[sp.group];
    ++st.version;
    st.live[key] = st.version;
    st.erased.erase(key);
    persist_state(sp.group, st);
    changed_.notify_all();
    return st.version;
}

StoreRecord MetadataStore::get(std::string_view path) const {
    auto sp = split_path(path);
    std::string key(path);
    std::lock_guard lock(mu_);
    auto g = groups_.find(sp.group);
    if (g == groups_.end()) throw Error(Errc::not_found, key);
    auto it = g->second.live.find(key);
    if (it == g->second.live.end()) throw Error(Errc::not_found, key);
    return {read_payload(key), it->second};
}

void MetadataStore::erase(std::string_view path) {
    auto sp = split_path(path);
    std::string key(path);
    std::lock_guard lock(mu_);
    auto g = groups_.find(sp.group);
    if (g == groups_.end() || !g->second.live.contains(key)) return;
    remove_payload(key);
    auto& st = g->second;
    ++st.version;
    st.live.erase(key);
    st.erased[key] = st.version;
    persist_state(sp.group, st);
    changed_.notify_all();
}

bool MetadataStore::contains(std::string_view path) const {
    auto sp = split_path(path);
    std::lock_guard lock(mu_);
    auto g = groups_.find(sp.group);
    return g != groups_.end() && g->second.live.contains(std::string(path));
}

ChangeSet MetadataStore::watch(std::string_view group, std::uint64_t since_version,
                               std::chrono::milliseconds timeout) const {
    check_group(group);
    std::unique_lock lock(mu_);
    auto newer = [&] {
        auto g = groups_.find(group);
        return g != groups_.end() && g->second.version > since_version;
    };
    ChangeSet out;
    if (!changed_.wait_for(lock, timeout, newer)) {
        auto g = groups_.find(group);
        out.version = g == groups_.end() ? 0 : g->second.version;
        return out;
    }
    const auto& st = groups_.find(group)->second;
    std::vector<std::pair<std::uint64_t, std::string>> changes;
    for (const auto& [p, v] : st.live)
        if (v > since_version) changes.emplace_back(v, p);
    for (const auto& [p, v] : st.erased)
        if (v > since_version) changes.emplace_back(v, p);
    std::sort(changes.begin(), changes.end());
    out.version = st.version;
    for (auto& c : changes) out.paths.push_back(std::move(c.second));
    return out;
}

std::vector<std::string> MetadataStore::list_group(std::string_view group) const {
    check_group(group);
    std::lock_guard lock(mu_);
    std::vector<std::string> out;
    auto g = groups_.find(group);
    if (g == groups_.end()) return out;
    for (const auto& [p, v] : g->second.live)
        if (p.ends_with(".part")) out.push_back(p);
    return out;
}

std::uint64_t MetadataStore::group_version(std::string_view group) const {
    check_group(group);
    std::lock_guard lock(mu_);
    auto g = groups_.find(group);
    return g == groups_.end() ? 0 : g->second.version;
}

void MetadataStore::restore_state(const std::string& group, GroupState state) {
    std::lock_guard lock(mu_);
    groups_[group] = std::move(state);
}

// --- MemoryStore -----------------------------------------------------------------

void MemoryStore::write_payload(const std::string& path, ByteView payload) {
    payloads_[path] = Bytes(payload.begin(), payload.end());
}

Bytes MemoryStore::read_payload(const std::string& path) const { return payloads_.at(path); }

void MemoryStore::remove_payload(const std::string& path) { payloads_.erase(path); }

// --- DirectoryStore ----------------------------------------------------------------

DirectoryStore::DirectoryStore(fs::path root) : root_(std::move(root)) {
    fs::create_directories(root_);
    for (const auto& entry : fs::directory_iterator(root_)) {
        if (!entry.is_directory()) continue;
        auto index = entry.path() / kIndexFile;
        if (!fs::exists(index)) continue;
        std::ifstream in(index);
        std::string group = entry.path().filename().string();
        GroupState st;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            std::istringstream ls(line);
            std::string kind, name;
            std::uint64_t v = 0;
            if (line_no == 1) {
                if (line != "gac-store-index 1")
                    throw Error(Errc::parse_error, index.string() + ": unknown index format");
                continue;
            }
            if (!(ls >> kind)) continue;
            if (kind == "version" && ls >> v) {
                st.version = v;
            } else if ((kind == "live" || kind == "erased") && ls >> name >> v) {
                (kind == "live" ? st.live : st.erased)[group + "/" + name] = v;
            } else {
                throw Error(Errc::parse_error, index.string() + ":" + std::to_string(line_no) + ": bad entry");
            }
        }
        restore_state(group, std::move(st));
    }
}

void DirectoryStore::write_payload(const std::string& path, ByteView payload) {
    auto target = root_ / path;
    fs::create_directories(target.parent_path());
    write_file_atomic(target, payload);
}

Bytes DirectoryStore::read_payload(const std::string& path) const {
    std::ifstream in(root_ / path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read " + (root_ / path).string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void DirectoryStore::remove_payload(const std::string& path) { fs::remove(root_ / path); }

void DirectoryStore::persist_state(const std::string& group, const GroupState& state) {
    std::ostringstream out;
    out << "gac-store-index 1\n";
    out << "version " << state.version << '\n';
    auto strip = [&](const std::string& p) { return p.substr(group.size() + 1); };
    for (const auto& [p, v] : state.live) out << "live " << strip(p) << ' ' << v << '\n';
    for (const auto& [p, v] : state.erased) out << "erased " << strip(p) << ' ' << v << '\n';
    auto text = out.str();
    fs::create_directories(root_ / group);
    write_file_atomic(root_ / group / kIndexFile, as_bytes(text));
}

}  // namespace gac
