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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any of them fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gac/errors.hpp"
#include "gac/group_manager.hpp"
#include "gac/he_baseline.hpp"
#include "gac/ibbe.hpp"
#include "gac/ibbe_testing.hpp"
#include "gac/op_counter.hpp"
#include "gac/replay.hpp"
#include "gac/trace.hpp"
#include "support.hpp"

using namespace gac;

namespace {

struct CheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename... Args>
std::string fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void require(bool cond, const std::string& what) {
    if (!cond) throw CheckFailed(what);
}

std::vector<std::string> members_except(const std::vector<std::string>& s, const std::string& u) {
    std::vector<std::string> out;
    for (const auto& x : s)
        if (x != u) out.push_back(x);
    return out;
}

// --- 1 ---------------------------------------------------------------------------

std::string round_trip() {
    const auto& keys = test::system_keys(32);
    auto rng = Rng::seeded(101);
    std::size_t decrypts = 0;
    for (std::size_t n : {1, 2, 3, 8, 16, 32}) {
        auto s = test::random_identities(n, rng);
        auto by_msk = ibbe::encrypt_msk(keys.msk, keys.pk, s, rng);
        auto by_pk = ibbe::encrypt_pk(keys.pk, s, rng);
        for (const auto& u : s) {
            auto usk = ibbe::extract_user_key(keys.msk, u);
            require(ibbe::decrypt(usk, s, by_msk.ct, keys.pk) == by_msk.key, fmt("msk mode, |S|=%zu", n));
            require(ibbe::decrypt(usk, s, by_pk.ct, keys.pk) == by_pk.key, fmt("pk mode, |S|=%zu", n));
            decrypts += 2;
        }
    }
    return fmt("%zu member decrypts recovered the broadcast key", decrypts);
}

// --- 2 ---------------------------------------------------------------------------

std::string cross_mode() {
    const auto& keys = test::system_keys(32);
    auto rng = Rng::seeded(102);
    for (int trial = 0; trial < 50; ++trial) {
        auto s = test::random_identities(1 + rng.uniform(32), rng);
        auto k = rand_scalar(rng);
        auto a = ibbe::testing::encrypt_pk_with(keys.pk, s, k);
        auto b = ibbe::testing::encrypt_msk_with(keys.msk, keys.pk, s, k);
        require(a.ct.serialize() == b.ct.serialize(), fmt("ciphertexts differ in trial %d", trial));
        require(a.key == b.key, fmt("broadcast keys differ in trial %d", trial));
    }
    return "50 random sets, byte-identical ciphertexts";
}

// --- 3 ---------------------------------------------------------------------------

std::string incremental_ops() {
    const auto& keys = test::system_keys(33);
    auto rng = Rng::seeded(103);
    const auto& msk = keys.msk;
    const auto& pk = keys.pk;
    for (int trial = 0; trial < 50; ++trial) {
        auto s = test::random_identities(1 + rng.uniform(32), rng);
        auto k = rand_scalar(rng);
        auto base = ibbe::testing::encrypt_msk_with(msk, pk, s, k);

        auto newcomer = "new#" + std::to_string(trial);
        auto grown = s;
        grown.push_back(newcomer);
        auto added = ibbe::add_user_msk(msk, pk, base.ct, s, newcomer);
        require(added.serialize() == ibbe::testing::encrypt_msk_with(msk, pk, grown, k).ct.serialize(),
                fmt("add differs in trial %d", trial));

        auto k2 = rand_scalar(rng);
        auto rekeyed = ibbe::testing::rekey_with(base.ct, pk, k2);
        auto fresh = ibbe::testing::encrypt_msk_with(msk, pk, s, k2);
        require(rekeyed.ct.serialize() == fresh.ct.serialize() && rekeyed.key == fresh.key,
                fmt("rekey differs in trial %d", trial));

        if (s.size() < 2) {
            s.push_back("extra#" + std::to_string(trial));
            base = ibbe::testing::encrypt_msk_with(msk, pk, s, k);
        }
        auto victim = s[rng.uniform(s.size())];
        auto k3 = rand_scalar(rng);
        auto removed = ibbe::testing::remove_user_msk_with(msk, pk, base.ct, s, victim, k3);
        auto fresh_rm = ibbe::testing::encrypt_msk_with(msk, pk, members_except(s, victim), k3);
        require(removed.ct.serialize() == fresh_rm.ct.serialize() && removed.key == fresh_rm.key,
                fmt("remove differs in trial %d", trial));
    }
    return "add, remove and rekey each matched fresh encryption in 50 trials";
}

// --- 4 ---------------------------------------------------------------------------

std::string complexity() {
    const auto& keys = test::system_keys(64);
    auto rng = Rng::seeded(104);
    std::vector<double> xs, msk, pk, dec;
    for (std::size_t n : {8, 16, 32, 64}) {
        auto s = test::identities(n);
        auto usk = ibbe::extract_user_key(keys.msk, s[n / 2]);
        auto enc = ibbe::encrypt_msk(keys.msk, keys.pk, s, rng);
        auto count = [](auto&& f) {
            OpScope scope;
            f();
            return static_cast<double>(scope.delta().scalar_mul);
        };
        xs.push_back(static_cast<double>(n));
        msk.push_back(count([&] { (void)ibbe::encrypt_msk(keys.msk, keys.pk, s, rng); }));
        pk.push_back(count([&] { (void)ibbe::encrypt_pk(keys.pk, s, rng); }));
        dec.push_back(count([&] { (void)ibbe::decrypt(usk, s, enc.ct, keys.pk); }));
    }
    auto e_msk = test::loglog_slope(xs, msk);
    auto e_pk = test::loglog_slope(xs, pk);
    auto e_dec = test::loglog_slope(xs, dec);
    require(std::abs(e_msk - 1.0) <= 0.2, fmt("encrypt_msk exponent %.3f", e_msk));
    require(std::abs(e_pk - 2.0) <= 0.2, fmt("encrypt_pk exponent %.3f", e_pk));
    require(std::abs(e_dec - 2.0) <= 0.2, fmt("decrypt exponent %.3f", e_dec));

    const auto& big = test::system_keys(200);
    std::vector<OpCounts> add, rk;
    for (std::size_t n : {2, 200}) {
        auto s = test::identities(n);
        auto prefix = std::span<const std::string>(s).first(n - 1);
        auto enc = ibbe::encrypt_msk(big.msk, big.pk, prefix, rng);
        OpScope a;
        (void)ibbe::add_user_msk(big.msk, big.pk, enc.ct, prefix, s.back());
        add.push_back(a.delta());
        OpScope r;
        (void)ibbe::rekey(enc.ct, big.pk, rng);
        rk.push_back(r.delta());
    }
    require(add[0] == add[1], "add_user_msk op counts depend on |S|");
    require(rk[0] == rk[1], "rekey op counts depend on |S|");
    return fmt("exponents msk=%.3f pk=%.3f decrypt=%.3f; add and rekey constant over |S| in {2,200}", e_msk, e_pk,
               e_dec);
}

// --- 5 ---------------------------------------------------------------------------

std::string ciphertext_size() {
    const auto& keys = test::system_keys(1000);
    auto rng = Rng::seeded(105);
    std::set<std::size_t> sizes;
    for (std::size_t n : {1, 10, 1000}) {
        auto s = test::identities(n);
        sizes.insert(ibbe::encrypt_msk(keys.msk, keys.pk, s, rng).ct.serialize().size());
        if (n <= 10) sizes.insert(ibbe::encrypt_pk(keys.pk, s, rng).ct.serialize().size());
    }
    require(sizes.size() == 1, "ciphertext length varies with |S|");
    return fmt("%zu bytes for |S| in {1,10,1000}", *sizes.begin());
}

// --- 6 ---------------------------------------------------------------------------

std::string storage_ratio() {
    const std::size_t ct_bytes = ibbe::BroadcastCiphertext::kEncodedSize;
    const std::size_t he_bytes = he::envelope_bytes_for(100000);
    const double ratio = static_cast<double>(he_bytes) / static_cast<double>(ct_bytes);
    require(ratio >= 1e4, fmt("ratio %.0f at 10^5 members", ratio));

    // Materialized check at 10^4: the formula matches real metadata on both sides.
    const std::size_t n = 10000;
    auto rng = Rng::seeded(106);
    auto ids = test::identities(n);
    he::KeyDirectory dir;
    dir.ensure(ids, rng);
    Key256 sk{};
    rng.fill(sk);
    he::HEAdmin admin(dir, Sealer(sk));
    auto meta = admin.create_group("big", ids, rng);
    require(meta.entries.size() == n, "HE group lost entries");
    require(meta.envelope_bytes() == he::envelope_bytes_for(n), "HE wrap bytes differ from formula");
    for (const auto& e : meta.entries) require(e.wrapped_gk.size() == he::kWrappedSize, "HE wrap of wrong size");
    require(meta.serialize().size() >= he::envelope_bytes_for(n), "serialized HE metadata below wrap bytes");
    auto gk = he::client_decrypt(dir.at(ids[0]), meta);
    require(he::client_decrypt(dir.at(ids[n - 1]), meta) == gk, "HE members disagree");

    const auto& keys = test::system_keys(n);
    auto enc = ibbe::encrypt_msk(keys.msk, keys.pk, ids, rng);
    require(enc.ct.serialize().size() == ct_bytes, "IBBE ciphertext for 10^4 members changed size");
    auto usk = ibbe::extract_user_key(keys.msk, ids[n / 3]);
    require(ibbe::decrypt(usk, ids, enc.ct, keys.pk) == enc.key, "IBBE member of 10^4 cannot decrypt");

    return fmt("10^5: HE %zu bytes / IBBE %zu bytes = %.0f; 10^4 materialized HE %zu bytes", he_bytes, ct_bytes,
               ratio, meta.serialize().size());
}

// --- 7 ---------------------------------------------------------------------------

std::string revocation() {
    const std::size_t m = 8;
    const auto& keys = test::system_keys(m);
    auto rng = Rng::seeded(107);
    Key256 sk{};
    rng.fill(sk);
    GroupAdmin admin(keys.msk, keys.pk, Sealer(sk));
    auto ids = test::identities(30);
    auto meta = admin.create_group("rev", ids, m, rng);

    std::size_t attempts = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto victim = ids[rng.uniform(ids.size())];
        auto usk = admin.extract_user_key(victim);
        auto next = admin.remove_user(meta, victim, rng);
        auto witness = next.partitions.front().members.front();
        auto gk = client_decrypt(admin.extract_user_key(witness), keys.pk, next);
        require(next.partitions.size() >= 2, "group is not partitioned");
        require(!next.index.contains(victim), "victim still indexed");

        // The revoked key gets every partition's record as if it were still listed there.
        for (const auto& p : next.partitions) {
            auto forged = next;
            for (auto& fp : forged.partitions)
                if (fp.id == p.id) fp.members.push_back(victim);
            forged.index[victim] = p.id;
            ++attempts;
            try {
                auto got = client_decrypt(usk, keys.pk, forged);
                require(!(got == gk), fmt("trial %d: revoked key recovered gk", trial));
            } catch (const Error& e) {
                require(e.code() == Errc::stale_metadata, fmt("trial %d: unexpected error %s", trial, e.what()));
            }
        }
        meta = admin.add_user(next, victim, rng);
    }
    return fmt("100 removals, %zu forged decrypt attempts, none recovered gk", attempts);
}

// --- 8 ---------------------------------------------------------------------------

std::string fuzz_invariants() {
    const std::size_t m = 64;
    const auto& keys = test::system_keys(m);
    auto rng = Rng::seeded(108);
    Key256 sk{};
    rng.fill(sk);
    GroupAdmin admin(keys.msk, keys.pk, Sealer(sk));
    MemoryStore store;

    std::vector<std::string> pool = test::identities(400, "fz");
    std::map<std::string, ibbe::UserSecretKey> usks;
    auto key_of = [&](const std::string& u) -> const ibbe::UserSecretKey& {
        auto it = usks.find(u);
        if (it == usks.end()) it = usks.emplace(u, admin.extract_user_key(u)).first;
        return it->second;
    };

    std::vector<std::string> initial(pool.begin(), pool.begin() + 100);
    std::set<std::string> members(initial.begin(), initial.end());
    auto meta = admin.create_group("fz", initial, m, rng);
    store_group(store, nullptr, meta);
    auto prev_gk = client_decrypt(key_of(initial.front()), keys.pk, meta);

    auto full_sweep = [&](const GroupMetadata& g, const GroupKey& gk, int event) {
        for (const auto& u : members)
            require(client_decrypt(key_of(u), keys.pk, g) == gk, fmt("event %d: %s disagrees", event, u.c_str()));
    };

    std::size_t checks = 0;
    for (int event = 0; event < 1000; ++event) {
        const bool remove = !members.empty() && (members.size() >= 140 || (members.size() > 60 && rng.uniform(2)));
        std::string u;
        if (remove) {
            u = *std::next(members.begin(), static_cast<std::ptrdiff_t>(rng.uniform(members.size())));
        } else {
            do u = pool[rng.uniform(pool.size())];
            while (members.contains(u));
        }
        auto next = remove ? admin.remove_user(meta, u, rng) : admin.add_user(meta, u, rng);
        store_group(store, &meta, next);
        if (remove)
            members.erase(u);
        else
            members.insert(u);

        auto problems = check_invariants(next);
        require(problems.empty(), fmt("event %d: %s", event, problems.empty() ? "" : problems.front().c_str()));
        require(next.version == meta.version + 1, fmt("event %d: version %llu after %llu", event,
                                                      static_cast<unsigned long long>(next.version),
                                                      static_cast<unsigned long long>(meta.version)));
        require(next.index.size() == members.size(), fmt("event %d: index size mismatch", event));
        for (const auto& x : members) require(next.index.contains(x), fmt("event %d: %s not indexed", event, x.c_str()));

        const auto& first = next.partitions.front().members.front();
        auto gk = client_decrypt(key_of(first), keys.pk, next);
        require(remove != (gk == prev_gk), fmt("event %d: group key %s", event, remove ? "kept" : "changed"));
        prev_gk = gk;
        for (const auto& p : next.partitions) {
            const auto& pick = p.members[rng.uniform(p.members.size())];
            auto got = client_decrypt_from_store(key_of(pick), keys.pk, store, "fz");
            require(got == gk, fmt("event %d: %s disagrees", event, pick.c_str()));
            ++checks;
        }
        if (remove) {
            try {
                (void)client_decrypt(key_of(u), keys.pk, next);
                require(false, fmt("event %d: removed member still decrypts", event));
            } catch (const Error& e) {
                require(e.code() == Errc::not_a_member, fmt("event %d: %s", event, e.what()));
            }
        }
        if (event % 100 == 99) {
            full_sweep(next, gk, event);
            checks += members.size();
        }
        meta = std::move(next);
    }
    require(store.group_version("fz") >= meta.version, "store version behind metadata");
    return fmt("1000 events at m=%zu, %zu member decrypts, final |S|=%zu in %zu partitions", m, checks,
               members.size(), meta.partitions.size());
}

// --- 9 ---------------------------------------------------------------------------

std::string repartition_table() {
    struct Case {
        std::vector<std::size_t> occ;
        std::size_t m;
        bool expected;
    };
    const std::vector<Case> cases{
        {{1, 1, 3}, 3, true},     {{3, 3, 3}, 3, false},   {{1, 3}, 3, false},  {{2, 2, 2}, 3, false},
        {{}, 3, false},           {{5, 5, 5}, 8, true},    {{1}, 8, false},     {{4, 4, 4, 4}, 8, true},
    };
    for (std::size_t i = 0; i < cases.size(); ++i)
        require(repartition_needed(cases[i].occ, cases[i].m) == cases[i].expected, fmt("case %zu", i));
    return fmt("%zu cases matched", cases.size());
}

// --- 10 --------------------------------------------------------------------------

std::string sweep_shape() {
    std::vector<std::uint64_t> rekeys;
    std::string detail;
    for (int step = 0; step <= 10; ++step) {
        const double rate = step / 10.0;
        auto trace = gen_synthetic_trace(2000, rate, 110);
        ReplayConfig cfg;
        cfg.partition_size = 200;
        cfg.seed = 110;
        auto start = std::chrono::steady_clock::now();
        auto report = replay(trace, cfg);
        auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        rekeys.push_back(report.partition_rekeys());
        std::printf("    rate %.1f: %zu events, %llu partition rekeys, %.0f ms\n", rate, trace.size(),
                    static_cast<unsigned long long>(rekeys.back()), ms);
    }
    for (int step = 1; step <= 5; ++step)
        require(rekeys[step] >= rekeys[step - 1], fmt("rekeys drop between rate %.1f and %.1f", (step - 1) / 10.0,
                                                      step / 10.0));
    return fmt("rekeys non-decreasing on [0, 0.5]: %llu -> %llu", static_cast<unsigned long long>(rekeys[0]),
               static_cast<unsigned long long>(rekeys[5]));
}

// --- 11 --------------------------------------------------------------------------

std::string determinism() {
    auto trace = gen_synthetic_trace(600, 0.4, 111);
    ReplayConfig cfg;
    cfg.partition_size = 50;
    cfg.seed = 111;
    cfg.sample_every = 10;
    auto a = op_count_columns(replay(trace, cfg));
    auto b = op_count_columns(replay(trace, cfg));
    require(a == b, "op-count columns differ between runs");

    cfg.scheme = Scheme::he;
    require(op_count_columns(replay(trace, cfg)) == op_count_columns(replay(trace, cfg)), "HE columns differ");
    return fmt("%zu rows x %zu columns identical", a.size(), a.empty() ? 0 : a.front().size());
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<std::string()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "round-trip correctness", round_trip},
        {2, "cross-mode oracle", cross_mode},
        {3, "incremental-op oracle", incremental_ops},
        {4, "complexity via op counts", complexity},
        {5, "constant ciphertext size", ciphertext_size},
        {6, "storage ratio", storage_ratio},
        {7, "revocation soundness", revocation},
        {8, "partition invariants under fuzzing", fuzz_invariants},
        {9, "repartition truth table", repartition_table},
        {10, "synthetic sweep shape", sweep_shape},
        {11, "replay determinism", determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            detail = c.run();
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s (%s) [%.1fs]\n", ok ? "PASS" : "FAIL", c.id, c.name, detail.c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
