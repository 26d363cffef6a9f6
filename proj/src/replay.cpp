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

#include "gac/replay.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "gac/errors.hpp"
#include "gac/he_baseline.hpp"
#include "gac/ibbe.hpp"

namespace gac {

namespace {

using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point start) {
    return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

struct Snapshot {
    std::size_t members = 0;
    std::size_t partitions = 0;
    std::size_t metadata_bytes = 0;
};

class Runner {
  public:
    virtual ~Runner() = default;
    virtual void apply(const TraceEvent& ev) = 0;
    [[nodiscard]] virtual Snapshot snapshot() const = 0;
    [[nodiscard]] virtual std::size_t member_count() const = 0;
    /// Untimed preparation for a sampled decrypt by the i-th member.
    virtual void prepare_sample(std::size_t i) = 0;
    virtual void run_sample() = 0;
};

class IbbeRunner final : public Runner {
  public:
    IbbeRunner(const ReplayConfig& cfg, MetadataStore& store, Rng& rng)
        : cfg_(cfg), store_(store), rng_(rng), admin_(make_admin(cfg, rng)) {}

    void apply(const TraceEvent& ev) override {
        if (!meta_) {
            std::vector<std::string> first{ev.identity};
            auto created = admin_.create_group(cfg_.group_id, first, cfg_.partition_size, rng_);
            store_group(store_, nullptr, created);
            meta_ = std::move(created);
            return;
        }
        auto next = ev.op == TraceOp::add ? admin_.add_user(*meta_, ev.identity, rng_)
                                          : admin_.remove_user(*meta_, ev.identity, rng_);
        store_group(store_, &*meta_, next);
        meta_ = std::move(next);
    }

    Snapshot snapshot() const override {
        if (!meta_) return {};
        return {meta_->member_count(), meta_->partitions.size(), meta_->envelope_bytes()};
    }

    std::size_t member_count() const override { return meta_ ? meta_->member_count() : 0; }

    void prepare_sample(std::size_t i) override {
        auto it = std::next(meta_->index.begin(), static_cast<std::ptrdiff_t>(i));
        auto cached = keys_.find(it->first);
        if (cached == keys_.end()) cached = keys_.emplace(it->first, admin_.extract_user_key(it->first)).first;
        sample_ = &cached->second;
    }

    void run_sample() override {
        (void)client_decrypt_from_store(*sample_, admin_.public_key(), store_, cfg_.group_id);
    }

  private:
    static GroupAdmin make_admin(const ReplayConfig& cfg, Rng& rng) {
        if (cfg.partition_size == 0) throw Error(Errc::invalid_capacity, "partition size must be at least 1");
        auto keys = ibbe::setup(cfg.partition_size, rng);
        Key256 sealing{};
        rng.fill(sealing);
        return GroupAdmin(std::move(keys.msk), std::move(keys.pk), Sealer(sealing), cfg.policy);
    }

    const ReplayConfig& cfg_;
    MetadataStore& store_;
    Rng& rng_;
    GroupAdmin admin_;
    std::optional<GroupMetadata> meta_;
    std::unordered_map<std::string, ibbe::UserSecretKey> keys_;
    const ibbe::UserSecretKey* sample_ = nullptr;
};

class HeRunner final : public Runner {
  public:
    HeRunner(const ReplayConfig& cfg, MetadataStore& store, Rng& rng)
        : cfg_(cfg), store_(store), rng_(rng), admin_(dir_, make_sealer(rng)) {}

    void apply(const TraceEvent& ev) override {
        if (!meta_) {
            std::vector<std::string> first{ev.identity};
            meta_ = admin_.create_group(cfg_.group_id, first, rng_);
        } else {
            meta_ = ev.op == TraceOp::add ? admin_.add_user(*meta_, ev.identity, rng_)
                                          : admin_.remove_user(*meta_, ev.identity, rng_);
        }
        he::store_group(store_, *meta_);
    }

    /// Keys are issued by the directory ahead of the admin operation.
    void enroll(const TraceEvent& ev) {
        if (ev.op == TraceOp::add && !dir_.contains(ev.identity)) dir_.insert(he::generate_keypair(ev.identity, rng_));
    }

    Snapshot snapshot() const override {
        if (!meta_) return {};
        return {meta_->member_count(), 0, meta_->envelope_bytes()};
    }

    std::size_t member_count() const override { return meta_ ? meta_->member_count() : 0; }

    void prepare_sample(std::size_t i) override { sample_ = &dir_.at(meta_->entries[i].identity); }

    void run_sample() override { (void)he::client_decrypt(*sample_, he::load_group(store_, cfg_.group_id)); }

  private:
    static Sealer make_sealer(Rng& rng) {
        Key256 sealing{};
        rng.fill(sealing);
        return Sealer(sealing);
    }

    const ReplayConfig& cfg_;
    MetadataStore& store_;
    Rng& rng_;
    he::KeyDirectory dir_;
    he::HEAdmin admin_;
    std::optional<he::HEGroupMetadata> meta_;
    const he::MemberKeyPair* sample_ = nullptr;
};

std::unique_ptr<MetadataStore> open_store(const ReplayConfig& cfg) {
    if (cfg.backend == StoreBackend::memory) return std::make_unique<MemoryStore>();
    if (cfg.store_root.empty()) throw Error(Errc::invalid_input, "file backend needs a store root");
    auto store = std::make_unique<DirectoryStore>(cfg.store_root);
    if (store->group_version(cfg.group_id) != 0)
        throw Error(Errc::invalid_input, "group '" + cfg.group_id + "' already exists under " + cfg.store_root.string());
    return store;
}

std::string fmt_double(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << v;
    return s.str();
}

}  // namespace

std::string_view to_string(Scheme s) noexcept { return s == Scheme::ibbe_sgx ? "ibbe-sgx" : "he"; }
std::string_view to_string(StoreBackend b) noexcept { return b == StoreBackend::memory ? "memory" : "file"; }

Scheme parse_scheme(std::string_view s) {
    if (s == "ibbe-sgx" || s == "ibbe") return Scheme::ibbe_sgx;
    if (s == "he") return Scheme::he;
    throw Error(Errc::invalid_input, "unknown scheme '" + std::string(s) + "'");
}

StoreBackend parse_backend(std::string_view s) {
    if (s == "memory") return StoreBackend::memory;
    if (s == "file" || s == "directory") return StoreBackend::directory;
    throw Error(Errc::invalid_input, "unknown store backend '" + std::string(s) + "'");
}

double ReplayReport::total_admin_us() const {
    double t = 0;
    for (const auto& e : events) t += e.admin_us;
    return t;
}

std::optional<double> ReplayReport::mean_decrypt_us() const {
    double t = 0;
    std::size_t n = 0;
    for (const auto& e : events)
        if (e.decrypt_us) {
            t += *e.decrypt_us;
            ++n;
        }
    if (n == 0) return std::nullopt;
    return t / static_cast<double>(n);
}

std::size_t ReplayReport::peak_metadata_bytes() const {
    std::size_t peak = 0;
    for (const auto& e : events) peak = std::max(peak, e.metadata_bytes);
    return peak;
}

std::size_t ReplayReport::peak_partitions() const {
    std::size_t peak = 0;
    for (const auto& e : events) peak = std::max(peak, e.partitions);
    return peak;
}

std::uint64_t ReplayReport::partition_rekeys() const {
    std::uint64_t n = 0;
    for (const auto& e : events) n += e.ops.ibbe_rekey + e.ops.ibbe_remove;
    return n;
}

ReplayReport replay(std::span<const TraceEvent> trace, const ReplayConfig& config) {
    validate_trace(trace);

    ReplayReport report;
    report.scheme = config.scheme;
    report.partition_size = config.scheme == Scheme::ibbe_sgx ? config.partition_size : 0;
    if (trace.empty()) return report;

    auto store = open_store(config);
    auto rng = Rng::seeded(config.seed);
    auto sample_rng = Rng::seeded(config.seed ^ 0x5a5a5a5a5a5a5a5aULL);

    std::unique_ptr<Runner> runner;
    HeRunner* he_runner = nullptr;
    if (config.scheme == Scheme::ibbe_sgx) {
        runner = std::make_unique<IbbeRunner>(config, *store, rng);
    } else {
        auto r = std::make_unique<HeRunner>(config, *store, rng);
        he_runner = r.get();
        runner = std::move(r);
    }

    report.events.reserve(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& ev = trace[i];
        if (he_runner) he_runner->enroll(ev);

        EventRecord rec;
        rec.index = i;
        rec.op = ev.op;
        rec.identity = ev.identity;
        {
            OpScope scope;
            auto start = Clock::now();
            runner->apply(ev);
            rec.admin_us = micros_since(start);
            rec.ops = scope.delta();
        }
        auto snap = runner->snapshot();
        rec.members = snap.members;
        rec.partitions = snap.partitions;
        rec.metadata_bytes = snap.metadata_bytes;

        if (config.sample_every != 0 && (i + 1) % config.sample_every == 0 && runner->member_count() != 0) {
            runner->prepare_sample(sample_rng.uniform(runner->member_count()));
            OpScope scope;
            auto start = Clock::now();
            runner->run_sample();
            rec.decrypt_us = micros_since(start);
            rec.decrypt_ops = scope.delta();
        }
        report.events.push_back(std::move(rec));
    }
    return report;
}

// --- CSV ------------------------------------------------------------------------------

void write_report_csv(std::ostream& out, const ReplayReport& report) {
    out << "# schema=" << kReplaySchema << " scheme=" << to_string(report.scheme)
        << " partition_size=" << report.partition_size << '\n';
    out << "index,op,identity,admin_us,members,partitions,metadata_bytes";
    for (const auto& c : OpCounts::column_names()) out << ",ops_" << c;
    out << ",decrypt_us,decrypt_scalar_mul,decrypt_pairing\n";
    for (const auto& e : report.events) {
        out << e.index << ',' << to_string(e.op) << ',' << e.identity << ',' << fmt_double(e.admin_us) << ','
            << e.members << ',' << e.partitions << ',' << e.metadata_bytes;
        for (auto v : e.ops.values()) out << ',' << v;
        out << ',';
        if (e.decrypt_us) out << fmt_double(*e.decrypt_us);
        out << ',' << e.decrypt_ops.scalar_mul << ',' << e.decrypt_ops.pairing << '\n';
    }
}

std::vector<std::vector<std::uint64_t>> op_count_columns(const ReplayReport& report) {
    std::vector<std::vector<std::uint64_t>> rows;
    rows.reserve(report.events.size());
    for (const auto& e : report.events) {
        auto row = e.ops.values();
        auto d = e.decrypt_ops.values();
        row.insert(row.end(), d.begin(), d.end());
        row.push_back(e.members);
        row.push_back(e.partitions);
        row.push_back(e.metadata_bytes);
        rows.push_back(std::move(row));
    }
    return rows;
}

SummaryRow report_summarize(const ReplayReport& report, std::string label) {
    SummaryRow row;
    row.label = std::move(label);
    row.scheme = report.scheme;
    row.partition_size = report.partition_size;
    row.events = report.events.size();
    row.total_admin_ms = report.total_admin_us() / 1000.0;
    if (auto m = report.mean_decrypt_us()) row.mean_decrypt_ms = *m / 1000.0;
    row.peak_metadata_bytes = report.peak_metadata_bytes();
    row.peak_partitions = report.peak_partitions();
    row.partition_rekeys = report.partition_rekeys();
    return row;
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
    out << "# schema=" << kReplaySchema << " summary\n";
    out << "label,scheme,partition_size,events,total_admin_ms,mean_decrypt_ms,peak_metadata_bytes,"
           "peak_partitions,partition_rekeys\n";
    for (const auto& r : rows) {
        out << r.label << ',' << to_string(r.scheme) << ',' << r.partition_size << ',' << r.events << ','
            << fmt_double(r.total_admin_ms) << ',';
        if (r.mean_decrypt_ms) out << fmt_double(*r.mean_decrypt_ms);
        out << ',' << r.peak_metadata_bytes << ',' << r.peak_partitions << ',' << r.partition_rekeys << '\n';
    }
}

}  // namespace gac
