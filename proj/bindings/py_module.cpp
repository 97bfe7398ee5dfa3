// Python bindings: thin dict-returning wrappers over the simulator core.
// Configuration goes in as the same JSON text the CLI accepts, results come
// out as plain dicts/lists/ndarrays so no custom types leak into Python.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

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

namespace py = pybind11;
using namespace mqpc;

namespace {

EavesdropperModel model_from_name(const std::string& name, int d, std::uint64_t seed) {
    if (name == "honest" || name == "none") return Honest{};
    if (name == "intercept_resend") return InterceptResend{};
    if (name == "measure_resend") return MeasureResend{};
    if (name == "entangle_measure") {
        EntangleMeasure em;
        em.probe_dim = 2;
        RandomStream rng = RandomStream(seed).split("attack-unitary");
        em.unitary = haar_unitary(d * em.probe_dim, rng);
        return em;
    }
    throw ConfigError("unknown attack model '" + name + "'");
}

RunConfig config_with_inputs(const std::string& config_text) {
    RunConfig config = parse_config(config_text);
    if (config.secrets.empty()) {
        RandomStream inputs = RandomStream(config.params.seed).split("inputs");
        for (int i = 0; i < config.params.n; ++i)
            config.secrets.push_back({inputs.uniform_int(0, config.params.dims.h), -1});
    }
    return config;
}

py::dict run_dict(const RunConfig& config, const RunResult& run) {
    py::dict out;
    out["d"] = config.params.dims.d;
    out["h"] = config.params.dims.h;
    out["n"] = config.params.n;
    out["L"] = config.params.L;
    out["seed"] = config.params.seed;
    std::vector<int> p;
    for (const auto& s : config.secrets) p.push_back(s.p);
    out["p"] = p;
    out["completed"] = run.completed();
    out["v"] = run.v;
    out["u"] = run.u;
    out["k"] = run.k;
    out["m1"] = run.m1;
    out["m2"] = run.m2;
    out["r2"] = run.r2;
    out["r1"] = run.r1;
    out["r"] = run.r;
    out["M"] = run.M;
    out["q"] = run.q;
    out["qudit_count"] = run.transcript.qudit_count;
    out["classical_dit_count"] = run.transcript.classical_dit_count;
    if (run.completed()) {
        out["announcement"] = render_announcement(run.announcement());
        out["ordering"] = run.announcement().ordering;
        out["efficiency"] = efficiency_from_transcript(run.transcript).eta.str();
        out["aborted"] = py::none();
    } else {
        const auto& aborted = std::get<Aborted>(run.outcome);
        out["announcement"] = py::none();
        out["ordering"] = py::none();
        out["efficiency"] = py::none();
        py::dict why;
        why["step"] = aborted.step;
        why["label"] = aborted.channel_label;
        why["checked"] = aborted.report.checked;
        why["mismatches"] = aborted.report.mismatches;
        out["aborted"] = why;
    }
    return out;
}

py::dict run_from_config(const std::string& config_text) {
    const RunConfig config = config_with_inputs(config_text);
    return run_dict(config, run_protocol(config.params, config.secrets, config.model));
}

py::dict demo() {
    const GoldenExample golden = golden_example();
    const RunResult run = run_protocol(golden.params, golden.secrets, Honest{}, golden.pinned);
    RunConfig config;
    config.params = golden.params;
    config.secrets = golden.secrets;
    py::dict out = run_dict(config, run);
    out["matches"] = run.completed() && run.m2 == golden.expected_m2 &&
                     run.r2 == golden.expected_r2 && run.r1 == golden.expected_r1 &&
                     run.r == golden.expected_r && run.M == golden.expected_m &&
                     run.announcement() == golden.expected_announcement;
    return out;
}

py::dict experiment_dict(const AttackExperimentResult& row) {
    py::dict out;
    out["model"] = row.model;
    out["d"] = row.d;
    out["L"] = row.L;
    out["trials"] = row.trials;
    out["detections"] = row.detections;
    out["empirical"] = row.empirical;
    out["theoretical"] = row.theoretical; // NaN when no closed form exists
    out["std_error"] = row.std_error;
    return out;
}

py::dict run_attack_experiment(const std::string& attack, int d, int L, long long trials,
                               std::uint64_t seed) {
    const EavesdropperModel model = model_from_name(attack, d, seed);
    return experiment_dict(
        attack_experiment(model, d, L, trials, RandomStream(seed).split("trials")));
}

double closed_form_detection(const std::string& attack, int d, int L) {
    return detection_probability(model_from_name(attack, d, 0), d, L);
}

py::dict verdict_dict(const EntangleMeasureVerdict& verdict) {
    py::dict out;
    out["max_error_T1"] = verdict.max_error_t1;
    out["max_error_T2"] = verdict.max_error_t2;
    out["stealthy"] = verdict.stealthy;
    if (verdict.probe_independence)
        out["probe_independence"] = *verdict.probe_independence;
    else
        out["probe_independence"] = py::none();
    return out;
}

py::dict audit_unitary(const Eigen::MatrixXcd& unitary, int d, int probe_dim) {
    return verdict_dict(entangle_measure_audit(unitary, d, probe_dim));
}

py::dict scan_dict(int d, int probe_dim, int count, std::uint64_t seed) {
    RandomStream rng = RandomStream(seed).split("scan");
    const TheoremScanSummary summary = theorem_scan(d, probe_dim, count, rng);
    py::dict out;
    out["examined"] = summary.examined;
    out["stealthy"] = summary.stealthy_count;
    out["violations"] = summary.violations;
    out["closest_stealth_gap"] = summary.closest_stealth_gap;
    return out;
}

Eigen::MatrixXcd haar_from_seed(int dim, std::uint64_t seed) {
    RandomStream rng = RandomStream(seed).split("haar");
    return haar_unitary(dim, rng);
}

Eigen::MatrixXcd probe_only_from_seed(int d, int probe_dim, std::uint64_t seed) {
    RandomStream rng = RandomStream(seed).split("probe-only");
    return probe_only_unitary(d, probe_dim, rng);
}

py::dict otp_dict(int d, int p, int m2, long long samples, std::uint64_t seed) {
    RandomStream rng = RandomStream(seed).split("otp");
    const OtpUniformityReport report = otp_uniformity_test(d, p, m2, samples, rng);
    py::dict out;
    out["d"] = report.d;
    out["samples"] = report.samples;
    out["statistic"] = report.statistic;
    out["p_value"] = report.p_value;
    out["counts"] = report.counts;
    return out;
}

py::dict efficiency_dict(int n) {
    const EfficiencyReport report = efficiency_closed_form(n);
    py::dict out;
    out["x"] = report.x;
    out["y"] = report.y;
    out["z"] = report.z;
    out["eta"] = report.eta.str();
    return out;
}

std::vector<int> consistent_set_from_config(const std::string& config_text, bool tp1,
                                            bool tp2, const std::vector<int>& users,
                                            bool include_announcement, int target,
                                            long long budget) {
    const RunConfig config = config_with_inputs(config_text);
    const RunResult run = run_protocol(config.params, config.secrets, config.model);
    Coalition coalition;
    coalition.tp1 = tp1;
    coalition.tp2 = tp2;
    coalition.users = users;
    const CoalitionView view = view_of(config.params, run, coalition, include_announcement);
    return coalition_consistent_set(view, target, budget);
}

std::vector<int> permitted_from_ordering(const std::vector<std::vector<int>>& ordering,
                                         int target, int h) {
    return announcement_permitted_set(Announcement{ordering}, target, h);
}

std::string render_ordering(const std::vector<std::vector<int>>& ordering) {
    return render_announcement(Announcement{ordering});
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Deterministic simulator and security laboratory for a multi-party "
              "private-comparison protocol over d-dimensional entangled pairs";

    m.def("run", &run_from_config, py::arg("config"),
          "Execute one protocol run from a JSON configuration string and return every "
          "intermediate, the transcript counters and the outcome.");
    m.def("demo", &demo,
          "Run the built-in worked example (d=11, four users) and report whether every "
          "intermediate matches the expected digits.");
    m.def("attack_experiment", &run_attack_experiment, py::arg("attack"), py::arg("d"),
          py::arg("L"), py::arg("trials"), py::arg("seed") = 0,
          "Monte Carlo detection rate of one dressed transmission under an eavesdropper "
          "model.");
    m.def("detection_probability", &closed_form_detection, py::arg("attack"), py::arg("d"),
          py::arg("L"),
          "Closed-form aggregate decoy detection probability; raises ValueError for "
          "models without one.");
    m.def("audit_unitary", &audit_unitary, py::arg("unitary"), py::arg("d"),
          py::arg("probe_dim"),
          "Exact stealth/leakage audit of an entangling attack operator.");
    m.def("theorem_scan", &scan_dict, py::arg("d"), py::arg("probe_dim"), py::arg("count"),
          py::arg("seed") = 0,
          "Scan random attack operators for stealthy-but-leaky counterexamples.");
    m.def("haar_unitary", &haar_from_seed, py::arg("dim"), py::arg("seed") = 0,
          "Haar-distributed random unitary as a complex ndarray.");
    m.def("controlled_shift_unitary", &controlled_shift_unitary, py::arg("d"),
          py::arg("probe_dim"),
          "Probe-shift coupling |t,e> -> |t, e+t mod probe_dim>.");
    m.def("probe_only_unitary", &probe_only_from_seed, py::arg("d"), py::arg("probe_dim"),
          py::arg("seed") = 0, "Identity on the data qudit tensored with a random probe "
          "unitary; stealthy by construction.");
    m.def("otp_uniformity", &otp_dict, py::arg("d"), py::arg("p"), py::arg("m2"),
          py::arg("samples"), py::arg("seed") = 0,
          "Chi-square uniformity report for the key-masked response digit.");
    m.def("otp_bijection_holds", &otp_bijection_holds, py::arg("d"),
          "Exhaustive check that the key map k -> r2 is a bijection for every fixed "
          "(m2, p).");
    m.def("efficiency_closed_form", &efficiency_dict, py::arg("n"),
          "Resource efficiency of an n-user comparison: one secret per 4n transmissions.");
    m.def("consistent_set", &consistent_set_from_config, py::arg("config"),
          py::arg("tp1") = false, py::arg("tp2") = false,
          py::arg("users") = std::vector<int>{}, py::arg("include_announcement") = false,
          py::arg("target") = 1, py::arg("budget") = 50'000'000LL,
          "Run the configured protocol, then enumerate every private input of `target` "
          "consistent with the chosen coalition's records.");
    m.def("announcement_permitted_set", &permitted_from_ordering, py::arg("ordering"),
          py::arg("target"), py::arg("h"),
          "Inputs permitted for `target` by a broadcast ordering alone.");
    m.def("render_ordering", &render_ordering, py::arg("ordering"),
          "Render ordering classes as 'P4>P1=P2>P3' notation.");
}
