#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mqpc/protocol_engine.hpp"
#include "mqpc/quantum_channel.hpp"
#include "mqpc/rng.hpp"

namespace mqpc {

// ---------------------------------------------------------------------------
// Decoy-detection experiments
// ---------------------------------------------------------------------------

// One row of a detection-rate experiment. std_error is the standard error of
// the empirical frequency at the closed-form rate (or at the empirical rate
// when the model has no closed form).
struct AttackExperimentResult {
    std::string model;
    int d = 0;
    int L = 0;
    long long trials = 0;
    long long detections = 0;
    double empirical = 0.0;
    double theoretical = 0.0; // NaN when no closed form exists
    double std_error = 0.0;
};

// Monte Carlo estimate of the probability that a single dressed transmission
// under `model` fails its decoy check. Each trial gets an independent
// substream of `base`, so results do not depend on trial order.
AttackExperimentResult attack_experiment(const EavesdropperModel& model, int d, int L,
                                         long long trials, const RandomStream& base);

// ---------------------------------------------------------------------------
// Entangle-measure analysis
// ---------------------------------------------------------------------------

// Exact audit of one entangling attack operator acting on data x probe, with
// the probe starting in |0>. For each basis state of T1 and T2 the audit
// computes the exact probability that re-measuring the data in the
// preparation basis detects a disturbance; the worst case per basis is
// reported. When the operator is stealthy in both bases, the audit also
// reports the minimum pairwise fidelity over all 2d probe states conditioned
// on the data surviving unchanged — the no-leakage claim is that this
// minimum stays at 1.
struct EntangleMeasureVerdict {
    double max_error_t1 = 0.0;
    double max_error_t2 = 0.0;
    bool stealthy = false;
    std::optional<double> probe_independence; // present iff stealthy
};

EntangleMeasureVerdict entangle_measure_audit(const Eigen::MatrixXcd& unitary, int d,
                                              int probe_dim, double stealth_tol = 1e-9);

// Random scan for counterexamples to "stealthy implies leak-free".
struct TheoremScanSummary {
    int examined = 0;
    int stealthy_count = 0;
    int violations = 0;               // stealthy yet probe-dependent
    double closest_stealth_gap = 1.0; // min over scans of the worst basis error
};

TheoremScanSummary theorem_scan(int d, int probe_dim, int count, RandomStream& rng,
                                double stealth_tol = 1e-9, double fidelity_tol = 1e-6);

// Haar-distributed unitary of the given dimension (complex Ginibre followed
// by QR with the phase convention fixed).
Eigen::MatrixXcd haar_unitary(int dim, RandomStream& rng);

// Generalized controlled shift |t,e> -> |t, e + t mod probe_dim>: invisible
// in T1 but maximally disturbing in T2 (for d = 2 it is CNOT).
Eigen::MatrixXcd controlled_shift_unitary(int d, int probe_dim);

// Identity on the data qudit tensored with a Haar unitary on the probe:
// stealthy by construction and necessarily leak-free.
Eigen::MatrixXcd probe_only_unitary(int d, int probe_dim, RandomStream& rng);

// ---------------------------------------------------------------------------
// Masking (one-time-pad) checks
// ---------------------------------------------------------------------------

// Frequency test that r2 = m2 + p + k mod d is uniform when only the key k is
// random, i.e. with the measurement outcome and the private input pinned.
struct OtpUniformityReport {
    int d = 0;
    long long samples = 0;
    double statistic = 0.0;
    double p_value = 0.0;
    std::vector<long long> counts;
};

// Requires samples >= 100 * d so every bin has a sound expected count.
OtpUniformityReport otp_uniformity_test(int d, int p, int m2, long long samples,
                                        RandomStream& rng);

// Exhaustive check that for every fixed (m2, p) the key map k -> r2 is a
// bijection on [0, d).
bool otp_bijection_holds(int d);

// ---------------------------------------------------------------------------
// Coalition analysis
// ---------------------------------------------------------------------------

// Which parties pool their records. The trust model forbids the two third
// parties from colluding with each other; everything else is fair game.
struct Coalition {
    bool tp1 = false;
    bool tp2 = false;
    std::vector<int> users; // 1-based indices

    static Coalition outside() { return {}; }
    static Coalition third_party_1() { return {true, false, {}}; }
    static Coalition third_party_2() { return {false, true, {}}; }
};

// Everything a coalition holds after a completed run. The classical payloads
// r2 and R travel on authenticated but readable channels, so every observer
// has them; per-user entries are populated only where some coalition member
// actually knows the value.
struct CoalitionView {
    int d = 0;
    int n = 0;
    int h = 0;
    Coalition coalition;
    std::vector<int> r2;
    std::vector<int> r;
    std::optional<int> q;
    std::vector<std::optional<int>> k, m1, m2, v, p;
    std::optional<Announcement> announcement;
};

// Assemble the view a coalition has of one completed run. The broadcast
// ordering is opt-in so pre-announcement knowledge can be analyzed too.
CoalitionView view_of(const ProtocolParams& params, const RunResult& run,
                      const Coalition& coalition, bool include_announcement);

// All values of user `target`'s private input (1-based, outside the
// coalition) that admit an assignment of every hidden variable consistent
// with the view. Brute force over the shared offset, the unknown inputs and
// the unknown keys; throws EnumerationBudgetError when the search exceeds
// `budget` elementary steps.
std::vector<int> coalition_consistent_set(const CoalitionView& view, int target,
                                          long long budget = 50'000'000);

// Closed form for what the broadcast ordering alone permits: a contiguous
// range of inputs leaving room for the classes ranked strictly above and
// below the target's class.
std::vector<int> announcement_permitted_set(const Announcement& announcement, int target,
                                            int h);

} // namespace mqpc
