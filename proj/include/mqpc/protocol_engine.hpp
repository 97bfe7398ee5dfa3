#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mqpc/quantum_channel.hpp"
#include "mqpc/qudit_math.hpp"
#include "mqpc/rng.hpp"

namespace mqpc {

// How Bell-pair carriers are simulated inside a protocol run. The shortcut
// backend samples both T1 outcomes jointly (m1 uniform, m2 = m1 + v) and is
// valid only while nothing disturbs the carriers, so Auto picks it for the
// honest channel and falls back to exact statevectors under any attack model.
enum class CarrierBackend { Auto, Exact, Shortcut };

struct ProtocolParams {
    DimensionParams dims;
    int n = 2;               // user count
    int L = 1;               // decoys per quantum transmission
    std::uint64_t seed = 0;
    CarrierBackend backend = CarrierBackend::Auto;
    bool test_mode = false;  // permits L = 0
};

// Each user's private comparison input p in [0, h] and pre-shared key digit
// k in [0, d). k = -1 means "not yet established"; the run then draws it via
// simulated_qkd during setup.
struct UserSecret {
    int p = 0;
    int k = -1;
};

struct TranscriptEvent {
    int step;
    std::string channel; // "quantum" or "classical"
    std::string from;
    std::string to;      // party name or "broadcast"
    std::string summary;
};

// Every message on every channel plus the resource counters. Counters follow
// the protocol's own accounting: carriers only (no decoys) for qudits, the
// r2 and R payloads only (no check traffic, no key pre-sharing) for classical
// dits.
struct Transcript {
    std::vector<TranscriptEvent> events;
    int qudit_count = 0;
    int classical_dit_count = 0;
    bool completed = false;
};

// Size-relationship output: equivalence classes of 1-based user indices,
// sorted by strictly descending private value; users inside a class compared
// equal.
struct Announcement {
    std::vector<std::vector<int>> ordering;

    bool operator==(const Announcement&) const = default;
};

// Rendered as classes joined by '>' with '=' inside, e.g. "P4>P1>P2>P3".
std::string render_announcement(const Announcement& a);

// Tie-aware descending ordering of a value vector, as 1-based index classes.
Announcement descending_ordering(const std::vector<int>& values);

struct Aborted {
    int step;                  // protocol step whose check failed (2 or 4)
    std::string channel_label; // "s1" or "g<i>"
    SecurityCheckReport report;
};

// Fixture injection for reproducing a worked example exactly: any populated
// field bypasses the corresponding random draw. Requires the shortcut
// backend (pinned m1 forces m2 = m1 + v through the Bell correlation).
struct PinnedValues {
    std::vector<int> v_list;
    std::vector<int> u_list;
    std::vector<int> k_list;
    std::vector<int> m1_list;
    int q = -1;
};

struct Tp1State {
    std::vector<int> v_list;
    std::vector<int> u_list;
    std::optional<std::vector<int>> r_vector_received;
};

struct Tp2State {
    int q = -1;
    std::vector<int> k_list;
    std::vector<int> m1_list;
    std::vector<int> r2_received;
};

// Carrier bookkeeping for one Bell pair during a run.
struct BellPairRecord {
    int u = 0;
    int v = 0;
    std::shared_ptr<QuditRegister> reg;        // exact backend only (ids 0 and 1)
    std::optional<std::pair<int, int>> outcomes; // shortcut backend, sampled lazily
};

struct Step1Output {
    Tp1State tp1;
    std::vector<SlotPayload> s1;
    std::vector<SlotPayload> s2;
    std::vector<BellPairRecord> pairs;
};

struct RunResult {
    std::variant<Announcement, Aborted> outcome;
    Transcript transcript;

    // Simulator-side record of every intermediate (populated as far as the
    // run progressed); the only value any party broadcasts is the ordering.
    std::vector<int> v, u, k, m1, m2, r2, r1, r, M;
    int q = -1;

    bool completed() const { return std::holds_alternative<Announcement>(outcome); }
    const Announcement& announcement() const { return std::get<Announcement>(outcome); }
};

// Pre-shared keys: n independent uniform digits, known to P_i and TP2 only.
// Stands in for a key-distribution protocol that is outside this simulator's
// scope.
std::vector<int> simulated_qkd(int n, int d, RandomStream& rng);

// Step 1: n Bell pairs with uniform (u, v); first particles form S1, second
// particles S2; v is recorded by TP1.
Step1Output step1_prepare(const ProtocolParams& params, CarrierBackend backend,
                          RandomStream& rng, const PinnedValues* pinned = nullptr);

// Steps 2-4 share one shape: dress with decoys, transmit under the model,
// run the security check, strip. Returns the delivered carriers or the
// failed check.
std::variant<std::vector<SlotPayload>, SecurityCheckReport> send_checked(
    std::vector<SlotPayload> carriers, int L, int d, const EavesdropperModel& model,
    RandomStream& rng_channel, RandomStream& rng_eve, RandomStream& rng_check);

// Step 5: r2 = m2 + p + k mod d. Enforces p <= h.
int step5_user_compute(int m2, const UserSecret& secret, const DimensionParams& dims);

struct Tp2ComputeResult {
    int q;
    std::vector<int> m1_list;
    std::vector<int> r_vector;
};

// Step 6: TP2 measures every S1 particle in T1, draws q uniform in [h, d-1],
// and forms r_i = (m1_i + q + k_i) - r2_i mod d.
Tp2ComputeResult step6_tp2_compute(std::vector<SlotPayload> s1_delivered,
                                   std::vector<BellPairRecord>& pairs,
                                   const std::vector<int>& k_list,
                                   const std::vector<int>& r2_list,
                                   const DimensionParams& dims, RandomStream& rng,
                                   std::optional<int> pinned_q = std::nullopt);

struct Tp1ComputeResult {
    std::vector<int> m_vector;
    Announcement announcement;
};

// Step 7: M_i = (d-1) - (r_i + v_i mod d), then the tie-aware descending
// ordering of M. Only the ordering is ever broadcast.
Tp1ComputeResult step7_tp1_compute(const std::vector<int>& r_vector,
                                   const std::vector<int>& v_list,
                                   const DimensionParams& dims);

// Full seven-step run over simulated channels. A failed security check
// yields the Aborted outcome, not an error.
RunResult run_protocol(const ProtocolParams& params, const std::vector<UserSecret>& secrets,
                       const EavesdropperModel& model,
                       const std::optional<PinnedValues>& pinned = std::nullopt);

// The built-in worked example: d = 11, four users, every intermediate pinned.
struct GoldenExample {
    ProtocolParams params;
    std::vector<UserSecret> secrets;
    PinnedValues pinned;
    std::vector<int> expected_m2, expected_r2, expected_r1, expected_r, expected_m;
    Announcement expected_announcement;
};

GoldenExample golden_example();

} // namespace mqpc
