#include "mqpc/protocol_engine.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "mqpc/errors.hpp"

namespace mqpc {

namespace {

std::string join_digits(const std::vector<int>& xs) {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out << ',';
        out << xs[i];
    }
    out << ')';
    return out.str();
}

void check_pinned_length(const std::vector<int>& xs, int n, const char* what) {
    if (!xs.empty() && static_cast<int>(xs.size()) != n)
        throw ConfigError(std::string("pinned ") + what + " has wrong length");
}

// Joint T1 outcomes for one Bell pair in the shortcut backend, sampled the
// first time either end measures.
std::pair<int, int> pair_outcomes(BellPairRecord& rec, int d, RandomStream& rng) {
    if (!rec.outcomes) rec.outcomes = measure_pair_computational(rec.u, rec.v, d, rng);
    return *rec.outcomes;
}

int measure_half(const SlotPayload& slot, int half, std::vector<BellPairRecord>& pairs,
                 int d, RandomStream& rng) {
    if (auto* ref = std::get_if<QuditRef>(&slot)) {
        if (!ref->reg->alive(ref->id))
            throw ProtocolDesyncError("carrier particle already consumed");
        return ref->reg->measure(ref->id, BasisChoice::T1, rng);
    }
    const auto& tag = std::get<BellHalfTag>(slot);
    if (tag.pair_index < 0 || tag.pair_index >= static_cast<int>(pairs.size()))
        throw ProtocolDesyncError("carrier tag points outside the pair table");
    auto [m1, m2] = pair_outcomes(pairs[tag.pair_index], d, rng);
    return half == 0 ? m1 : m2;
}

} // namespace

std::string render_announcement(const Announcement& a) {
    std::ostringstream out;
    for (std::size_t c = 0; c < a.ordering.size(); ++c) {
        if (c) out << '>';
        for (std::size_t j = 0; j < a.ordering[c].size(); ++j) {
            if (j) out << '=';
            out << 'P' << a.ordering[c][j];
        }
    }
    return out.str();
}

Announcement descending_ordering(const std::vector<int>& values) {
    const int n = static_cast<int>(values.size());
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)];
    });
    Announcement out;
    for (int idx : order) {
        const int value = values[static_cast<std::size_t>(idx)];
        if (out.ordering.empty() ||
            values[static_cast<std::size_t>(out.ordering.back().front() - 1)] != value)
            out.ordering.emplace_back();
        out.ordering.back().push_back(idx + 1);
    }
    for (auto& cls : out.ordering) std::sort(cls.begin(), cls.end());
    return out;
}

std::vector<int> simulated_qkd(int n, int d, RandomStream& rng) {
    if (n < 1) throw OutOfDomainError("key count must be positive");
    std::vector<int> keys(static_cast<std::size_t>(n));
    for (auto& k : keys) k = rng.uniform_digit(d);
    return keys;
}

Step1Output step1_prepare(const ProtocolParams& params, CarrierBackend backend,
                          RandomStream& rng, const PinnedValues* pinned) {
    const int d = params.dims.d;
    const int n = params.n;
    if (backend == CarrierBackend::Auto)
        throw ConfigError("step1_prepare needs a resolved backend");

    Step1Output out;
    out.pairs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        BellPairRecord rec;
        rec.u = pinned && !pinned->u_list.empty() ? pinned->u_list[static_cast<std::size_t>(i)]
                                                  : rng.uniform_digit(d);
        rec.v = pinned && !pinned->v_list.empty() ? pinned->v_list[static_cast<std::size_t>(i)]
                                                  : rng.uniform_digit(d);
        if (rec.u < 0 || rec.u >= d || rec.v < 0 || rec.v >= d)
            throw InvalidDigitError("pinned Bell indices must lie in [0, d)");

        if (backend == CarrierBackend::Exact) {
            rec.reg = QuditRegister::make(bell_state(rec.u, rec.v, d));
            out.s1.push_back(QuditRef{rec.reg, 0});
            out.s2.push_back(QuditRef{rec.reg, 1});
        } else {
            if (pinned && !pinned->m1_list.empty()) {
                const int m1 = pinned->m1_list[static_cast<std::size_t>(i)];
                if (m1 < 0 || m1 >= d)
                    throw InvalidDigitError("pinned measurement outcome must lie in [0, d)");
                rec.outcomes = std::pair<int, int>{m1, mod_add(m1, rec.v, d)};
            }
            out.s1.push_back(BellHalfTag{i, 0});
            out.s2.push_back(BellHalfTag{i, 1});
        }
        out.tp1.v_list.push_back(rec.v);
        out.tp1.u_list.push_back(rec.u);
        out.pairs.push_back(std::move(rec));
    }
    return out;
}

std::variant<std::vector<SlotPayload>, SecurityCheckReport> send_checked(
    std::vector<SlotPayload> carriers, int L, int d, const EavesdropperModel& model,
    RandomStream& rng_channel, RandomStream& rng_eve, RandomStream& rng_check) {
    DressedSequence dressed = insert_decoys(std::move(carriers), L, d, rng_channel);
    DressedSequence received = transmit(std::move(dressed), model, d, rng_eve);
    SecurityCheckReport report = security_check(received.ledger, received, rng_check);
    if (!report.passed) return report;
    return strip_decoys(received, received.ledger);
}

int step5_user_compute(int m2, const UserSecret& secret, const DimensionParams& dims) {
    if (m2 < 0 || m2 >= dims.d) throw InvalidDigitError("measurement outcome out of range");
    if (secret.p < 0 || secret.p > dims.h)
        throw OutOfDomainError("comparison input must lie in [0, h]");
    if (secret.k < 0 || secret.k >= dims.d)
        throw InvalidDigitError("pre-shared key digit out of range");
    return mod_add(mod_add(m2, secret.p, dims.d), secret.k, dims.d);
}

Tp2ComputeResult step6_tp2_compute(std::vector<SlotPayload> s1_delivered,
                                   std::vector<BellPairRecord>& pairs,
                                   const std::vector<int>& k_list,
                                   const std::vector<int>& r2_list,
                                   const DimensionParams& dims, RandomStream& rng,
                                   std::optional<int> pinned_q) {
    const int d = dims.d;
    const int n = static_cast<int>(s1_delivered.size());
    if (static_cast<int>(k_list.size()) != n || static_cast<int>(r2_list.size()) != n)
        throw ProtocolDesyncError("key and response vectors must match the carrier count");

    Tp2ComputeResult out;
    out.q = pinned_q ? *pinned_q : rng.uniform_int(dims.h, d - 1);
    if (out.q < dims.h || out.q >= d)
        throw OutOfDomainError("shared offset must lie in [h, d-1]");

    for (int i = 0; i < n; ++i) {
        const int m1 =
            measure_half(s1_delivered[static_cast<std::size_t>(i)], 0, pairs, d, rng);
        out.m1_list.push_back(m1);
        const int r1 = mod_add(mod_add(m1, out.q, d), k_list[static_cast<std::size_t>(i)], d);
        out.r_vector.push_back(mod_sub(r1, r2_list[static_cast<std::size_t>(i)], d));
    }
    return out;
}

Tp1ComputeResult step7_tp1_compute(const std::vector<int>& r_vector,
                                   const std::vector<int>& v_list,
                                   const DimensionParams& dims) {
    if (r_vector.size() != v_list.size())
        throw ProtocolDesyncError("response vector does not match the recorded pairs");
    const int n = static_cast<int>(r_vector.size());

    Tp1ComputeResult out;
    out.m_vector.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out.m_vector.push_back(
            (dims.d - 1) -
            mod_add(r_vector[static_cast<std::size_t>(i)], v_list[static_cast<std::size_t>(i)],
                    dims.d));

    out.announcement = descending_ordering(out.m_vector);
    return out;
}

RunResult run_protocol(const ProtocolParams& params, const std::vector<UserSecret>& secrets,
                       const EavesdropperModel& model,
                       const std::optional<PinnedValues>& pinned) {
    const int d = params.dims.d;
    const int n = params.n;
    if (n < 2) throw ConfigError("a comparison needs at least two users");
    if (static_cast<int>(secrets.size()) != n)
        throw ConfigError("secret count does not match the user count");
    if (params.L < 1 && !params.test_mode)
        throw ConfigError("at least one decoy per transmission is required");
    if (params.L < 0) throw ConfigError("decoy count cannot be negative");
    validate_model(model, d);

    CarrierBackend backend = params.backend;
    if (backend == CarrierBackend::Auto)
        backend = std::holds_alternative<Honest>(model) ? CarrierBackend::Shortcut
                                                        : CarrierBackend::Exact;
    if (!std::holds_alternative<Honest>(model) && backend == CarrierBackend::Shortcut)
        throw ConfigError("attack models need exact carrier simulation");

    const PinnedValues* pin = pinned ? &*pinned : nullptr;
    if (pin) {
        check_pinned_length(pin->v_list, n, "v");
        check_pinned_length(pin->u_list, n, "u");
        check_pinned_length(pin->k_list, n, "k");
        check_pinned_length(pin->m1_list, n, "m1");
        if (!pin->m1_list.empty() && backend != CarrierBackend::Shortcut)
            throw ConfigError("pinned measurement outcomes need the shortcut backend");
    }

    RandomStream master(params.seed);
    RandomStream rng_qkd = master.split("qkd");
    RandomStream rng_tp1 = master.split("tp1");
    RandomStream rng_tp2 = master.split("tp2");
    RandomStream rng_pairs = master.split("pairs");

    RunResult result;
    Transcript& tr = result.transcript;

    // Key setup: explicit secret.k wins, then pinned fixture, then fresh
    // uniform digits standing in for a key-distribution session.
    std::vector<int> fresh_keys = simulated_qkd(n, d, rng_qkd);
    for (int i = 0; i < n; ++i) {
        int k = secrets[static_cast<std::size_t>(i)].k;
        if (k < 0 && pin && !pin->k_list.empty()) k = pin->k_list[static_cast<std::size_t>(i)];
        if (k < 0) k = fresh_keys[static_cast<std::size_t>(i)];
        if (k >= d) throw InvalidDigitError("pre-shared key digit out of range");
        result.k.push_back(k);
    }

    // Step 1: Bell-pair preparation at TP1.
    Step1Output prep = step1_prepare(params, backend, rng_tp1, pin);
    result.v = prep.tp1.v_list;
    result.u = prep.tp1.u_list;
    tr.events.push_back({1, "internal", "TP1", "TP1",
                         "prepared " + std::to_string(n) + " Bell pairs (d=" +
                             std::to_string(d) + ")"});

    auto abort_run = [&](int step, std::string label, const SecurityCheckReport& report) {
        tr.events.push_back({step, "classical", "TP1", "broadcast",
                             "abort: security check on " + label + " found " +
                                 std::to_string(report.mismatches) + "/" +
                                 std::to_string(report.checked) + " mismatches"});
        result.outcome = Aborted{step, std::move(label), report};
    };

    // Step 2: sequence S1' to TP2, decoy check between TP1 and TP2.
    {
        RandomStream rng_chan = master.split("chan:s1");
        RandomStream rng_eve = master.split("eve:s1");
        RandomStream rng_check = master.split("check:s1");
        tr.events.push_back({2, "quantum", "TP1", "TP2",
                             "sequence S1': " + std::to_string(n) + " carriers + " +
                                 std::to_string(params.L) + " decoys"});
        tr.qudit_count += n;
        auto sent = send_checked(std::move(prep.s1), params.L, d, model, rng_chan, rng_eve,
                                 rng_check);
        if (auto* report = std::get_if<SecurityCheckReport>(&sent)) {
            abort_run(2, "s1", *report);
            return result;
        }
        prep.s1 = std::move(std::get<std::vector<SlotPayload>>(sent));
        tr.events.push_back({2, "classical", "TP2", "TP1", "decoy check passed"});
    }

    // Steps 3-4: one single-carrier sequence G_i' per user, each with its own
    // decoy check.
    std::vector<SlotPayload> user_slots;
    for (int i = 0; i < n; ++i) {
        const std::string user = "P" + std::to_string(i + 1);
        const std::string label = "g" + std::to_string(i + 1);
        RandomStream rng_chan = master.split("chan:" + label);
        RandomStream rng_eve = master.split("eve:" + label);
        RandomStream rng_check = master.split("check:" + label);
        tr.events.push_back({3, "quantum", "TP1", user,
                             "sequence G" + std::to_string(i + 1) + "': 1 carrier + " +
                                 std::to_string(params.L) + " decoys"});
        tr.qudit_count += 1;
        std::vector<SlotPayload> one{std::move(prep.s2[static_cast<std::size_t>(i)])};
        auto sent =
            send_checked(std::move(one), params.L, d, model, rng_chan, rng_eve, rng_check);
        if (auto* report = std::get_if<SecurityCheckReport>(&sent)) {
            abort_run(4, label, *report);
            return result;
        }
        user_slots.push_back(std::move(std::get<std::vector<SlotPayload>>(sent).front()));
        tr.events.push_back({4, "classical", user, "TP1", "decoy check passed"});
    }

    // Step 5: each user measures in T1 and sends r2 = m2 + p + k to TP2.
    for (int i = 0; i < n; ++i) {
        const int m2 =
            measure_half(user_slots[static_cast<std::size_t>(i)], 1, prep.pairs, d, rng_pairs);
        UserSecret secret = secrets[static_cast<std::size_t>(i)];
        secret.k = result.k[static_cast<std::size_t>(i)];
        const int r2 = step5_user_compute(m2, secret, params.dims);
        result.m2.push_back(m2);
        result.r2.push_back(r2);
        tr.events.push_back({5, "classical", "P" + std::to_string(i + 1), "TP2",
                             "r2 = " + std::to_string(r2)});
        tr.classical_dit_count += 1;
    }

    // Step 6: TP2 measures S1, draws the shared offset q, sends R to TP1.
    std::optional<int> pinned_q;
    if (pin && pin->q >= 0) pinned_q = pin->q;
    Tp2ComputeResult tp2 = step6_tp2_compute(std::move(prep.s1), prep.pairs, result.k,
                                             result.r2, params.dims, rng_tp2, pinned_q);
    result.q = tp2.q;
    result.m1 = tp2.m1_list;
    result.r = tp2.r_vector;
    for (int i = 0; i < n; ++i)
        result.r1.push_back(mod_add(mod_add(result.m1[static_cast<std::size_t>(i)], tp2.q, d),
                                    result.k[static_cast<std::size_t>(i)], d));
    tr.events.push_back({6, "classical", "TP2", "TP1", "R = " + join_digits(tp2.r_vector)});
    tr.classical_dit_count += n;

    // Step 7: TP1 recovers the comparable values and broadcasts the ordering.
    Tp1ComputeResult tp1 = step7_tp1_compute(tp2.r_vector, result.v, params.dims);
    result.M = tp1.m_vector;
    result.outcome = tp1.announcement;
    tr.events.push_back({7, "classical", "TP1", "broadcast",
                         "ordering: " + render_announcement(tp1.announcement)});
    tr.completed = true;
    return result;
}

GoldenExample golden_example() {
    GoldenExample g;
    g.params.dims = DimensionParams::for_dimension(11);
    g.params.n = 4;
    g.params.L = 2;
    g.params.seed = 0x600d5eedULL;
    g.secrets = {{4, -1}, {3, -1}, {1, -1}, {5, -1}};
    g.pinned.v_list = {3, 4, 5, 6};
    g.pinned.u_list = {0, 0, 0, 0};
    g.pinned.k_list = {7, 8, 6, 2};
    g.pinned.m1_list = {6, 9, 8, 3};
    g.pinned.q = 6;
    g.expected_m2 = {9, 2, 2, 9};
    g.expected_r2 = {9, 2, 9, 5};
    g.expected_r1 = {8, 1, 9, 0};
    g.expected_r = {10, 10, 0, 6};
    g.expected_m = {8, 7, 5, 9};
    g.expected_announcement.ordering = {{4}, {1}, {2}, {3}};
    return g;
}

} // namespace mqpc
