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

// gacctl: administration and benchmark front end.
//
//   gacctl [--config gac.json] setup --capacity 64
//   gacctl extract-key --identity alice --out alice.usk
//   gacctl group create|add|remove|decrypt|show ...
//   gacctl gen-trace --ops 10000 --rate 0.3 --seed 7 --out t.csv
//   gacctl ingest-vcs --log authors.txt --out t.csv
//   gacctl replay --trace t.csv --scheme ibbe-sgx --partition-size 1000 --out r.csv
//   gacctl sweep --ops 2000 --partition-size 200 --out sweep.csv
//   gacctl params

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gac/errors.hpp"
#include "gac/group_manager.hpp"
#include "gac/ibbe.hpp"
#include "gac/metadata_store.hpp"
#include "gac/pairing.hpp"
#include "gac/replay.hpp"
#include "gac/trace.hpp"

namespace fs = std::filesystem;
using namespace gac;

namespace {

struct Config {
    fs::path file;
    fs::path sealing_key;
    fs::path store_root;
    fs::path public_key;
    fs::path sealed_master_key;
};

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

Config load_config(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(Errc::io_error, "cannot read config " + file.string() + " (run `gacctl setup` first)");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, file.string() + ": " + e.what());
    }
    auto base = file.parent_path().empty() ? fs::path(".") : file.parent_path();
    Config c;
    c.file = file;
    try {
        c.sealing_key = resolve(base, j.at("sealing_key").get<std::string>());
        c.store_root = resolve(base, j.at("store_root").get<std::string>());
        c.public_key = resolve(base, j.value("public_key", (fs::path(j.at("store_root").get<std::string>()) / "public.key").string()));
        c.sealed_master_key =
            resolve(base, j.value("sealed_master_key",
                                  (fs::path(j.at("store_root").get<std::string>()) / "master.sealed").string()));
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, file.string() + ": " + e.what());
    }
    return c;
}

Bytes read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read " + p.string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& p, ByteView data) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot write " + p.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

GroupAdmin load_admin(const Config& c) {
    auto pk = ibbe::PublicKey::deserialize(read_file(c.public_key));
    return GroupAdmin::from_sealed(read_file(c.sealed_master_key), std::move(pk), Sealer::from_file(c.sealing_key));
}

std::vector<std::string> split_members(const std::string& csv, const std::string& file) {
    std::vector<std::string> out;
    auto push = [&](std::string s) {
        while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
        if (!s.empty()) out.push_back(std::move(s));
    };
    std::stringstream ss(csv);
    for (std::string item; std::getline(ss, item, ',');) push(item);
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw Error(Errc::io_error, "cannot read " + file);
        for (std::string line; std::getline(in, line);) push(line);
    }
    return out;
}

template <class F>
void with_output(const std::string& path, F&& f) {
    if (path.empty() || path == "-") {
        f(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot write " + path);
    f(out);
}

std::string describe(const GroupMetadata& meta) {
    std::ostringstream s;
    s << meta.group_id << ": version " << meta.version << ", " << meta.member_count() << " members in "
      << meta.partitions.size() << " partitions of size " << meta.partition_size << ", "
      << meta.envelope_bytes() << " metadata bytes";
    return s.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Group access control with partitioned IBBE"};
    app.require_subcommand(1);
    std::string config_path = "gac.json";
    app.add_option("-c,--config", config_path, "JSON config file")->capture_default_str();

    // setup
    auto* setup = app.add_subcommand("setup", "Create the sealing key and system keys");
    std::size_t capacity = 1000;
    std::string init_store = "store", init_seal = "sealing.key";
    bool force = false;
    setup->add_option("--capacity", capacity, "Largest partition size the public key supports")->capture_default_str();
    setup->add_option("--store-root", init_store, "Store root written to a new config")->capture_default_str();
    setup->add_option("--sealing-key", init_seal, "Sealing key path written to a new config")->capture_default_str();
    setup->add_flag("--force", force, "Overwrite existing system keys");

    // extract-key
    auto* extract = app.add_subcommand("extract-key", "Issue a user secret key");
    std::string identity, key_out;
    extract->add_option("--identity", identity)->required();
    extract->add_option("--out", key_out, "Output file")->required();

    // group
    auto* group = app.add_subcommand("group", "Membership operations");
    group->require_subcommand(1);
    std::string group_id, user, members_csv, members_file, usk_path;
    std::size_t partition_size = 0;
    auto* g_create = group->add_subcommand("create", "Create a group");
    g_create->add_option("group", group_id)->required();
    g_create->add_option("--partition-size,-m", partition_size)->required();
    g_create->add_option("--members", members_csv, "Comma-separated identities");
    g_create->add_option("--members-file", members_file, "One identity per line");
    auto* g_add = group->add_subcommand("add", "Add a member");
    g_add->add_option("group", group_id)->required();
    g_add->add_option("user", user)->required();
    auto* g_remove = group->add_subcommand("remove", "Remove a member and rotate the group key");
    g_remove->add_option("group", group_id)->required();
    g_remove->add_option("user", user)->required();
    auto* g_decrypt = group->add_subcommand("decrypt", "Recover the group key as a member");
    g_decrypt->add_option("group", group_id)->required();
    g_decrypt->add_option("--key", usk_path, "User secret key file")->required();
    auto* g_show = group->add_subcommand("show", "Print group metadata");
    g_show->add_option("group", group_id)->required();

    // gen-trace
    auto* gen = app.add_subcommand("gen-trace", "Generate a synthetic membership trace");
    std::size_t n_ops = 10000;
    double rate = 0.0;
    std::uint64_t seed = 1;
    std::string out_path;
    gen->add_option("--ops,-n", n_ops)->capture_default_str();
    gen->add_option("--rate,-r", rate, "Revocation rate in [0, 1]")->capture_default_str();
    gen->add_option("--seed", seed)->capture_default_str();
    gen->add_option("--out,-o", out_path, "Output trace ('-' for stdout)");

    // ingest-vcs
    auto* ingest = app.add_subcommand("ingest-vcs", "Turn an author,timestamp log into a trace");
    std::string log_path;
    ingest->add_option("--log", log_path)->required();
    ingest->add_option("--out,-o", out_path);

    // replay
    auto* rep = app.add_subcommand("replay", "Replay a trace and write per-event CSV");
    std::string trace_path, scheme = "ibbe-sgx", backend = "memory", store_root, summary_path, label;
    std::size_t sample_every = 0;
    std::size_t replay_m = 1000;
    rep->add_option("--trace", trace_path)->required();
    rep->add_option("--scheme", scheme, "ibbe-sgx or he")->capture_default_str();
    rep->add_option("--partition-size,-m", replay_m)->capture_default_str();
    rep->add_option("--backend", backend, "memory or file")->capture_default_str();
    rep->add_option("--store-root", store_root, "Root for the file backend");
    rep->add_option("--seed", seed)->capture_default_str();
    rep->add_option("--sample-every", sample_every, "Sampled client decrypt period, 0 disables")->capture_default_str();
    rep->add_option("--out,-o", out_path, "Per-event CSV");
    rep->add_option("--summary", summary_path, "Summary CSV");
    rep->add_option("--label", label, "Summary row label");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Revocation-rate sweep: summary rows per rate and partition size");
    std::vector<std::size_t> sizes{1000, 1500, 2000};
    std::size_t steps = 10;
    sweep->add_option("--ops,-n", n_ops)->capture_default_str();
    sweep->add_option("--partition-size,-m", sizes, "Partition sizes")->capture_default_str();
    sweep->add_option("--steps", steps, "Rates 0, 1/steps, ..., 1")->capture_default_str();
    sweep->add_option("--scheme", scheme)->capture_default_str();
    sweep->add_option("--seed", seed)->capture_default_str();
    sweep->add_option("--sample-every", sample_every)->capture_default_str();
    sweep->add_option("--out,-o", out_path);

    auto* params = app.add_subcommand("params", "Print curve and encoding sizes");
    params->add_option("--capacity", capacity, "Capacity used for the public key size")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*setup) {
            fs::path cfg_file(config_path);
            if (!fs::exists(cfg_file)) {
                nlohmann::json j{{"sealing_key", init_seal}, {"store_root", init_store}};
                std::ofstream(cfg_file) << j.dump(2) << '\n';
            }
            auto c = load_config(cfg_file);
            if (fs::exists(c.public_key) && !force)
                throw Error(Errc::invalid_input, c.public_key.string() + " exists; pass --force to replace it");
            auto rng = Rng::system();
            fs::create_directories(c.store_root);
            auto sealer = fs::exists(c.sealing_key) ? Sealer::from_file(c.sealing_key)
                                                    : Sealer::create_file(c.sealing_key, rng);
            auto keys = ibbe::setup(capacity, rng);
            write_file(c.public_key, keys.pk.serialize());
            GroupAdmin admin(std::move(keys.msk), keys.pk, sealer);
            write_file(c.sealed_master_key, admin.seal_master_key(rng));
            std::cout << "public key (capacity " << capacity << "): " << c.public_key.string() << '\n'
                      << "sealed master key: " << c.sealed_master_key.string() << '\n';
        } else if (*extract) {
            auto admin = load_admin(load_config(config_path));
            auto usk = admin.extract_user_key(identity);
            write_file(key_out, usk.serialize());
            std::cout << "wrote key for " << identity << " to " << key_out << '\n';
        } else if (*group) {
            auto c = load_config(config_path);
            DirectoryStore store(c.store_root);
            if (*g_decrypt) {
                auto pk = ibbe::PublicKey::deserialize(read_file(c.public_key));
                auto usk = ibbe::UserSecretKey::deserialize(read_file(usk_path));
                auto gk = client_decrypt_from_store(usk, pk, store, group_id);
                std::cout << to_hex(gk.bytes) << '\n';
                return 0;
            }
            if (*g_show) {
                std::cout << describe(load_group(store, group_id)) << '\n';
                return 0;
            }
            auto admin = load_admin(c);
            auto rng = Rng::system();
            if (*g_create) {
                if (store.group_version(group_id) != 0)
                    throw Error(Errc::invalid_input, "group '" + group_id + "' already exists");
                auto members = split_members(members_csv, members_file);
                auto meta = admin.create_group(group_id, members, partition_size, rng);
                store_group(store, nullptr, meta);
                std::cout << describe(meta) << '\n';
            } else {
                auto meta = load_group(store, group_id);
                auto next = *g_add ? admin.add_user(meta, user, rng) : admin.remove_user(meta, user, rng);
                store_group(store, &meta, next);
                std::cout << describe(next) << '\n';
            }
        } else if (*gen) {
            auto trace = gen_synthetic_trace(n_ops, rate, seed);
            with_output(out_path, [&](std::ostream& o) { write_trace(o, trace); });
        } else if (*ingest) {
            std::ifstream in(log_path);
            if (!in) throw Error(Errc::io_error, "cannot read " + log_path);
            auto trace = ingest_vcs_log(in);
            with_output(out_path, [&](std::ostream& o) { write_trace(o, trace); });
        } else if (*rep) {
            ReplayConfig cfg;
            cfg.scheme = parse_scheme(scheme);
            cfg.partition_size = replay_m;
            cfg.backend = parse_backend(backend);
            cfg.store_root = store_root;
            cfg.seed = seed;
            cfg.sample_every = sample_every;
            auto report = replay(read_trace_file(trace_path), cfg);
            with_output(out_path, [&](std::ostream& o) { write_report_csv(o, report); });
            if (!summary_path.empty()) {
                auto row = report_summarize(report, label.empty() ? fs::path(trace_path).stem().string() : label);
                with_output(summary_path, [&](std::ostream& o) { write_summary_csv(o, std::span(&row, 1)); });
            }
        } else if (*sweep) {
            if (steps == 0) throw Error(Errc::invalid_input, "--steps must be positive");
            std::vector<SummaryRow> rows;
            auto s = parse_scheme(scheme);
            for (auto m : s == Scheme::he ? std::vector<std::size_t>{0} : sizes) {
                for (std::size_t i = 0; i <= steps; ++i) {
                    double r = static_cast<double>(i) / static_cast<double>(steps);
                    auto trace = gen_synthetic_trace(n_ops, r, seed + i);
                    ReplayConfig cfg;
                    cfg.scheme = s;
                    cfg.partition_size = m;
                    cfg.seed = seed;
                    cfg.sample_every = sample_every;
                    char lbl[32];
                    std::snprintf(lbl, sizeof lbl, "rate=%.2f", r);
                    rows.push_back(report_summarize(replay(trace, cfg), lbl));
                    std::cerr << lbl << " m=" << m << " done\n";
                }
            }
            with_output(out_path, [&](std::ostream& o) { write_summary_csv(o, rows); });
        } else if (*params) {
            auto p = curve_params();
            nlohmann::json j{
                {"curve", std::string(p.curve)},
                {"security_bits", p.security_bits},
                {"scalar_bytes", p.scalar_bytes},
                {"g1_bytes", p.g1_bytes},
                {"g2_bytes", p.g2_bytes},
                {"gt_bytes", p.gt_bytes},
                {"ciphertext_bytes", ibbe::BroadcastCiphertext::kEncodedSize},
                {"user_key_bytes_excluding_identity", G1::kEncodedSize},
                {"public_key_bytes", 1 + G1::kEncodedSize + GT::kEncodedSize + 4 + (capacity + 1) * G2::kEncodedSize},
                {"public_key_capacity", capacity},
            };
            std::cout << j.dump(2) << '\n';
        }
    } catch (const Error& e) {
        std::cerr << "gacctl: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "gacctl: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
