#pragma once

#include <string>
#include <vector>

#include "mqpc/metrics.hpp"
#include "mqpc/protocol_engine.hpp"
#include "mqpc/security_lab.hpp"

namespace mqpc {

// Fixed 9-significant-digit rendering used for every floating-point value we
// emit, so identical runs produce byte-identical files across platforms.
std::string fmt9(double x);

// A fully parsed run configuration. `secrets` is empty when the file omits
// "p"; the caller then draws inputs from the seed.
struct RunConfig {
    ProtocolParams params;
    std::vector<UserSecret> secrets;
    EavesdropperModel model = Honest{};
};

// Parse the run-configuration JSON object:
//   {"d": int, "n": int, "L": int, "seed": int, "p": [int],
//    "attack": name, "attack_params": object}
// "d" is required; "n" may be inferred from "p". Unknown keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// JSON renderings (single line, fixed key order).
std::string to_json(const SecurityCheckReport& report);
std::string to_json(const EfficiencyReport& report);
std::string to_json(const EntangleMeasureVerdict& verdict);
std::string to_json(const TheoremScanSummary& summary);
std::string to_json(const OtpUniformityReport& report);

// Amplitude vector as a JSON array of [re, im] pairs in row-major outcome
// order.
std::string state_to_json(const AmplitudeState& state);

// Detection-experiment CSV.
std::string attack_csv_header();
std::string attack_csv_row(const AttackExperimentResult& row);

// Transcript as JSON lines: one event object per line, then one trailing
// record with the resource counters.
std::string transcript_to_jsonl(const Transcript& transcript);

} // namespace mqpc
