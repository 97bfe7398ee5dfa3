// Acceptance gate for the comparison-protocol laboratory. Each criterion
// prints exactly one [PASS]/[FAIL] line with its runtime; the process exits 0
// only when every criterion passes. All tolerances and budgets are pinned
// here, in code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "mqpc/errors.hpp"
#include "mqpc/io.hpp"
#include "mqpc/metrics.hpp"
#include "mqpc/protocol_engine.hpp"
#include "mqpc/quantum_channel.hpp"
#include "mqpc/qudit_math.hpp"
#include "mqpc/rng.hpp"
#include "mqpc/security_lab.hpp"
#include "mqpc/stats.hpp"

using namespace mqpc;

namespace {

constexpr std::uint64_t kSeed = 20260826;

struct CriterionResult {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        ok = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
    void note(const std::string& what) {
        if (ok && detail.empty()) detail = what;
    }
};

std::string fmt_list(const std::vector<int>& xs) {
    std::string out = "(";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(xs[i]);
    }
    return out + ")";
}

// --- 1. Worked example, bit exact -----------------------------------------

CriterionResult golden_example_exact() {
    CriterionResult result;
    const GoldenExample golden = golden_example();
    const RunResult run = run_protocol(golden.params, golden.secrets, Honest{}, golden.pinned);
    if (!run.completed()) {
        result.fail("run aborted");
        return result;
    }
    const auto expect = [&](const char* name, const std::vector<int>& got,
                            const std::vector<int>& want) {
        if (got != want)
            result.fail(std::string(name) + " = " + fmt_list(got) + ", expected " +
                        fmt_list(want));
    };
    expect("m2", run.m2, golden.expected_m2);
    expect("r2", run.r2, golden.expected_r2);
    expect("r1", run.r1, golden.expected_r1);
    expect("r", run.r, golden.expected_r);
    expect("M", run.M, golden.expected_m);
    if (!(run.announcement() == golden.expected_announcement))
        result.fail("announcement mismatch");
    const std::string rendered = render_announcement(run.announcement());
    if (rendered != "P4>P1>P2>P3")
        result.fail("rendered announcement '" + rendered + "' != 'P4>P1>P2>P3'");
    result.note("all intermediates and the ordering reproduced exactly");
    return result;
}

// --- 2. Correctness sweep ---------------------------------------------------

CriterionResult correctness_sweep() {
    CriterionResult result;
    const std::vector<int> dims = {3, 5, 8, 11, 16};
    const std::vector<int> sizes = {2, 3, 4, 5, 6};
    const int runs_per_cell = 400; // 25 cells x 400 = 10^4 runs
    long long runs = 0;
    const RandomStream base = RandomStream(kSeed).split("sweep");

    for (const int d : dims) {
        for (const int n : sizes) {
            const DimensionParams dp = DimensionParams::for_dimension(d);
            RandomStream cell = base.split(static_cast<std::uint64_t>(d * 100 + n));
            for (int rep = 0; rep < runs_per_cell; ++rep) {
                ProtocolParams params;
                params.dims = dp;
                params.n = n;
                params.L = 1;
                params.seed = cell.next_u64();
                std::vector<UserSecret> secrets;
                std::vector<int> p_values;
                for (int i = 0; i < n; ++i) {
                    p_values.push_back(cell.uniform_int(0, dp.h));
                    secrets.push_back({p_values.back(), -1});
                }
                const RunResult run = run_protocol(params, secrets, Honest{});
                ++runs;
                if (!run.completed()) {
                    result.fail("honest run aborted at d=" + std::to_string(d));
                    return result;
                }
                for (int i = 0; i < n; ++i) {
                    const auto s = static_cast<std::size_t>(i);
                    if (run.M[s] != p_values[s] + d - 1 - run.q) {
                        result.fail("M[" + std::to_string(i + 1) + "] != p + d - 1 - q at d=" +
                                    std::to_string(d) + ", n=" + std::to_string(n));
                        return result;
                    }
                }
                // Plaintext sort oracle, recomputed here from scratch.
                std::vector<int> idx(static_cast<std::size_t>(n));
                std::iota(idx.begin(), idx.end(), 0);
                std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
                    return p_values[static_cast<std::size_t>(a)] >
                           p_values[static_cast<std::size_t>(b)];
                });
                Announcement oracle;
                for (std::size_t i = 0; i < idx.size();) {
                    std::vector<int> cls;
                    const int value = p_values[static_cast<std::size_t>(idx[i])];
                    while (i < idx.size() &&
                           p_values[static_cast<std::size_t>(idx[i])] == value)
                        cls.push_back(idx[i++] + 1);
                    oracle.ordering.push_back(std::move(cls));
                }
                if (!(run.announcement() == oracle)) {
                    result.fail("ordering disagrees with the plaintext sort oracle at d=" +
                                std::to_string(d) + ", n=" + std::to_string(n));
                    return result;
                }
            }
        }
    }
    result.note(std::to_string(runs) + " honest runs, every value and ordering correct");
    return result;
}

// --- 3 & 4. Detection-rate grids ---------------------------------------------

CriterionResult detection_grid(const EavesdropperModel& model, const char* label) {
    CriterionResult result;
    const long long trials = 100000;
    int cells = 0;
    double worst_sigma = 0.0;
    for (const int d : {2, 3, 7, 11}) {
        for (const int L : {1, 2, 4, 8}) {
            const RandomStream base = RandomStream(kSeed).split(
                std::string(label) + ":" + std::to_string(d) + ":" + std::to_string(L));
            const AttackExperimentResult row = attack_experiment(model, d, L, trials, base);
            const double p = row.theoretical;
            const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
            const double deviation = std::abs(row.empirical - p);
            if (se > 0.0) worst_sigma = std::max(worst_sigma, deviation / se);
            if (deviation > 3.0 * se) {
                std::ostringstream why;
                why << "d=" << d << ", L=" << L << ": empirical " << fmt9(row.empirical)
                    << " vs " << fmt9(p) << " (|dev| " << fmt9(deviation) << " > 3 SE "
                    << fmt9(3.0 * se) << ")";
                result.fail(why.str());
            }
            ++cells;
        }
    }
    std::ostringstream note;
    note << cells << " cells x " << trials << " trials, worst deviation "
         << fmt9(worst_sigma) << " SE";
    result.note(note.str());
    return result;
}

// --- 5. Entangling-attack theorem ------------------------------------------

CriterionResult entangling_theorem() {
    CriterionResult result;
    RandomStream rng = RandomStream(kSeed).split("stealth");

    // (a) Ten constructed stealth operators must audit stealthy and leak-free.
    for (int i = 0; i < 10; ++i) {
        const int d = i < 5 ? 2 : 3;
        const int probe_dim = 2;
        const auto verdict =
            entangle_measure_audit(probe_only_unitary(d, probe_dim, rng), d, probe_dim);
        if (!verdict.stealthy) {
            result.fail("constructed stealth operator " + std::to_string(i) +
                        " judged detectable");
            continue;
        }
        if (!verdict.probe_independence || *verdict.probe_independence < 1.0 - 1e-6)
            result.fail("stealth operator " + std::to_string(i) +
                        " has conditioned-probe fidelity below 1 - 1e-6");
    }

    // (b) The controlled shift at d = 2 disturbs the superposition basis with
    // probability exactly 1/2.
    const auto shift = entangle_measure_audit(controlled_shift_unitary(2, 2), 2, 2);
    if (std::abs(shift.max_error_t2 - 0.5) > 1e-9)
        result.fail("controlled-shift superposition-basis error " + fmt9(shift.max_error_t2) +
                    " != 0.5 +/- 1e-9");
    if (shift.max_error_t1 > 1e-9)
        result.fail("controlled shift should be invisible in the computational basis");
    if (shift.stealthy) result.fail("controlled shift must not be judged stealthy");

    // (c) Random scans across two geometries must find no stealthy-but-leaky
    // operator.
    for (const auto [d, probe_dim] : {std::pair{2, 2}, std::pair{3, 2}}) {
        RandomStream scan_rng = RandomStream(kSeed).split(
            "scan:" + std::to_string(d) + ":" + std::to_string(probe_dim));
        const auto scan = theorem_scan(d, probe_dim, 100, scan_rng);
        if (scan.examined != 100)
            result.fail("scan examined " + std::to_string(scan.examined) + " != 100");
        if (scan.violations != 0)
            result.fail(std::to_string(scan.violations) + " theorem violations at d=" +
                        std::to_string(d));
    }
    result.note("10 stealth constructions, the controlled shift and 200 random scans agree");
    return result;
}

// --- 6. Key masking ----------------------------------------------------------

CriterionResult key_masking() {
    CriterionResult result;
    for (const int d : {2, 11}) {
        RandomStream rng = RandomStream(kSeed).split("otp:" + std::to_string(d));
        const DimensionParams dims = DimensionParams::for_dimension(d);
        const auto report =
            otp_uniformity_test(d, dims.h, d - 1, 100000, rng);
        if (report.p_value <= 0.01)
            result.fail("uniformity p-value " + fmt9(report.p_value) + " <= 0.01 at d=" +
                        std::to_string(d));
    }
    for (int d = 2; d <= 16; ++d)
        if (!otp_bijection_holds(d))
            result.fail("key map is not a bijection at d=" + std::to_string(d));
    result.note("masked responses uniform at 10^5 samples; key map bijective for d <= 16");
    return result;
}

// --- 7. Efficiency -----------------------------------------------------------

CriterionResult efficiency_exact() {
    CriterionResult result;
    for (int n = 2; n <= 10; ++n) {
        const EfficiencyReport closed = efficiency_closed_form(n);
        if (!(closed.eta == Rational(1, 4LL * n))) {
            result.fail("closed form at n=" + std::to_string(n) + " is " + closed.eta.str());
            continue;
        }
        ProtocolParams params;
        params.dims = DimensionParams::for_dimension(7);
        params.n = n;
        params.L = 1;
        params.seed = kSeed + static_cast<std::uint64_t>(n);
        RandomStream inputs = RandomStream(kSeed).split("eff:" + std::to_string(n));
        std::vector<UserSecret> secrets;
        for (int i = 0; i < n; ++i) secrets.push_back({inputs.uniform_int(0, 3), -1});
        const RunResult run = run_protocol(params, secrets, Honest{});
        if (!run.completed()) {
            result.fail("honest run aborted at n=" + std::to_string(n));
            continue;
        }
        const EfficiencyReport measured = efficiency_from_transcript(run.transcript);
        if (!(measured.eta == closed.eta) || measured.x != closed.x || measured.y != closed.y)
            result.fail("transcript counters disagree with the closed form at n=" +
                        std::to_string(n) + " (got " + measured.eta.str() + ")");
    }
    result.note("transcript-derived ratio equals 1/(4n) exactly for n in [2, 10]");
    return result;
}

// --- 8. Privacy enumeration --------------------------------------------------

CriterionResult privacy_enumeration() {
    CriterionResult result;
    const GoldenExample golden = golden_example();
    const RunResult run = run_protocol(golden.params, golden.secrets, Honest{}, golden.pinned);
    if (!run.completed()) {
        result.fail("reference run aborted");
        return result;
    }
    const int n = golden.params.n;
    const int h = golden.params.dims.h;
    std::vector<int> full;
    for (int p = 0; p <= h; ++p) full.push_back(p);

    // The key-holding third party sees every key, outcome and the offset, yet
    // every admissible input stays consistent for every user.
    const CoalitionView tp2 =
        view_of(golden.params, run, Coalition::third_party_2(), false);
    for (int target = 1; target <= n; ++target) {
        const auto set = coalition_consistent_set(tp2, target);
        if (set != full)
            result.fail("key-holder view narrows user " + std::to_string(target) + " to " +
                        fmt_list(set));
    }

    // An outside observer learns exactly what the broadcast ordering permits,
    // nothing more and nothing less.
    const CoalitionView outside = view_of(golden.params, run, Coalition::outside(), true);
    for (int target = 1; target <= n; ++target) {
        const auto set = coalition_consistent_set(outside, target);
        const auto permitted =
            announcement_permitted_set(golden.expected_announcement, target, h);
        if (set != permitted)
            result.fail("outside view for user " + std::to_string(target) + " is " +
                        fmt_list(set) + ", ordering permits " + fmt_list(permitted));
    }
    result.note("key-holder view spans {0..5}; outside view equals the ordering's range");
    return result;
}

struct Entry {
    const char* name;
    double budget_seconds;
    CriterionResult (*fn)();
};

} // namespace

int main() {
    const Entry entries[] = {
        {"1. worked example reproduced bit-exactly", 1.0, golden_example_exact},
        {"2. 10^4-run correctness sweep", 30.0, correctness_sweep},
        {"3. intercept-resend detection grid", 120.0, [] {
             return detection_grid(InterceptResend{}, "ir");
         }},
        {"4. measure-resend detection grid", 120.0, [] {
             return detection_grid(MeasureResend{}, "mr");
         }},
        {"5. entangling-attack stealth theorem", 60.0, entangling_theorem},
        {"6. key masking uniformity and bijection", 60.0, key_masking},
        {"7. exact efficiency ratio", 30.0, efficiency_exact},
        {"8. coalition privacy enumeration", 10.0, privacy_enumeration},
    };

    int failures = 0;
    for (const Entry& entry : entries) {
        const auto start = std::chrono::steady_clock::now();
        CriterionResult result;
        try {
            result = entry.fn();
        } catch (const std::exception& e) {
            result.fail(std::string("exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > entry.budget_seconds)
            result.fail("runtime " + fmt9(elapsed) + " s exceeds the " +
                        fmt9(entry.budget_seconds) + " s budget");
        failures += !result.ok;
        std::printf("[%s] %s (%.2f s / %.0f s)%s%s\n", result.ok ? "PASS" : "FAIL",
                    entry.name, elapsed, entry.budget_seconds,
                    result.detail.empty() ? "" : ": ", result.detail.c_str());
        std::fflush(stdout);
    }
    if (failures == 0) {
        std::printf("acceptance: all %zu criteria passed\n", std::size(entries));
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", failures);
    return 1;
}
