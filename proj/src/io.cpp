#include "mqpc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "mqpc/errors.hpp"

namespace mqpc {

using nlohmann::json;

std::string fmt9(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

namespace {

[[noreturn]] void bad_config(const std::string& what) { throw ConfigError(what); }

int require_int(const json& j, const char* key, int lo, int hi) {
    if (!j.at(key).is_number_integer()) bad_config(std::string(key) + " must be an integer");
    const long long value = j.at(key).get<long long>();
    if (value < lo || value > hi)
        bad_config(std::string(key) + " out of range [" + std::to_string(lo) + ", " +
                   std::to_string(hi) + "]");
    return static_cast<int>(value);
}

EavesdropperModel parse_model(const std::string& name, const json& attack_params, int d) {
    double probability = 1.0;
    if (attack_params.contains("probability")) {
        if (!attack_params.at("probability").is_number())
            bad_config("attack_params.probability must be a number");
        probability = attack_params.at("probability").get<double>();
        if (probability < 0.0 || probability > 1.0)
            bad_config("attack_params.probability out of range [0, 1]");
    }

    if (name == "honest" || name == "none") return Honest{};
    if (name == "intercept_resend") return InterceptResend{probability};
    if (name == "measure_resend") return MeasureResend{probability};
    if (name != "entangle_measure") bad_config("unknown attack model '" + name + "'");

    EntangleMeasure em;
    em.attack_probability = probability;
    em.probe_dim = 2;
    if (attack_params.contains("probe_dim"))
        em.probe_dim = require_int(attack_params, "probe_dim", 1, 64);

    if (attack_params.contains("unitary")) {
        const json& u = attack_params.at("unitary");
        const int total = d * em.probe_dim;
        if (!u.is_array() || static_cast<int>(u.size()) != total)
            bad_config("attack_params.unitary must be a " + std::to_string(total) + "-row matrix");
        em.unitary = Eigen::MatrixXcd(total, total);
        for (int r = 0; r < total; ++r) {
            const json& row = u.at(static_cast<std::size_t>(r));
            if (!row.is_array() || static_cast<int>(row.size()) != total)
                bad_config("attack_params.unitary rows must have " + std::to_string(total) +
                           " entries");
            for (int c = 0; c < total; ++c) {
                const json& cell = row.at(static_cast<std::size_t>(c));
                if (!cell.is_array() || cell.size() != 2 || !cell.at(0).is_number() ||
                    !cell.at(1).is_number())
                    bad_config("unitary entries must be [re, im] pairs");
                em.unitary(r, c) = cxd{cell.at(0).get<double>(), cell.at(1).get<double>()};
            }
        }
        return em;
    }

    std::string kind = "haar";
    if (attack_params.contains("kind")) {
        if (!attack_params.at("kind").is_string()) bad_config("attack_params.kind must be a string");
        kind = attack_params.at("kind").get<std::string>();
    }
    if (kind == "controlled_shift") {
        em.unitary = controlled_shift_unitary(d, em.probe_dim);
    } else if (kind == "haar") {
        std::uint64_t haar_seed = 0;
        if (attack_params.contains("haar_seed")) {
            if (!attack_params.at("haar_seed").is_number_integer())
                bad_config("attack_params.haar_seed must be an integer");
            haar_seed = attack_params.at("haar_seed").get<std::uint64_t>();
        }
        RandomStream rng(haar_seed);
        em.unitary = haar_unitary(d * em.probe_dim, rng);
    } else {
        bad_config("unknown entangle-measure kind '" + kind + "'");
    }
    return em;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        bad_config(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) bad_config("configuration must be a JSON object");

    static const char* known[] = {"d", "n", "L", "seed", "p", "attack", "attack_params"};
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) bad_config("unknown configuration key '" + key + "'");
    }
    if (!j.contains("d")) bad_config("missing required key 'd'");

    RunConfig config;
    config.params.dims = DimensionParams::for_dimension(require_int(j, "d", 2, 64));
    config.params.L = j.contains("L") ? require_int(j, "L", 1, 1 << 20) : 1;
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer()) bad_config("seed must be an integer");
        config.params.seed = j.at("seed").get<std::uint64_t>();
    }

    if (j.contains("p")) {
        const json& p = j.at("p");
        if (!p.is_array() || p.size() < 2) bad_config("p must be an array of at least 2 inputs");
        for (const json& entry : p) {
            if (!entry.is_number_integer()) bad_config("entries of p must be integers");
            const long long value = entry.get<long long>();
            if (value < 0 || value > config.params.dims.h)
                bad_config("entries of p must lie in [0, " +
                           std::to_string(config.params.dims.h) + "]");
            config.secrets.push_back(UserSecret{static_cast<int>(value), -1});
        }
        config.params.n = static_cast<int>(config.secrets.size());
        if (j.contains("n") && require_int(j, "n", 2, 1 << 20) != config.params.n)
            bad_config("n does not match the length of p");
    } else {
        if (!j.contains("n")) bad_config("provide n or p");
        config.params.n = require_int(j, "n", 2, 1 << 20);
    }

    const std::string attack =
        j.contains("attack") ? j.at("attack").get<std::string>() : std::string("honest");
    const json attack_params = j.contains("attack_params") ? j.at("attack_params") : json::object();
    if (!attack_params.is_object()) bad_config("attack_params must be an object");
    config.model = parse_model(attack, attack_params, config.params.dims.d);
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string to_json(const SecurityCheckReport& report) {
    std::ostringstream out;
    out << "{\"checked\": " << report.checked << ", \"mismatches\": " << report.mismatches
        << ", \"passed\": " << (report.passed ? "true" : "false") << "}";
    return out.str();
}

std::string to_json(const EfficiencyReport& report) {
    std::ostringstream out;
    out << "{\"x\": " << report.x << ", \"y\": " << report.y << ", \"z\": " << report.z
        << ", \"eta\": \"" << report.eta.str() << "\"}";
    return out.str();
}

std::string to_json(const EntangleMeasureVerdict& verdict) {
    std::ostringstream out;
    out << "{\"max_error_T1\": " << fmt9(verdict.max_error_t1)
        << ", \"max_error_T2\": " << fmt9(verdict.max_error_t2)
        << ", \"stealthy\": " << (verdict.stealthy ? "true" : "false")
        << ", \"probe_independence\": "
        << (verdict.probe_independence ? fmt9(*verdict.probe_independence) : "null") << "}";
    return out.str();
}

std::string to_json(const TheoremScanSummary& summary) {
    std::ostringstream out;
    out << "{\"examined\": " << summary.examined
        << ", \"stealthy\": " << summary.stealthy_count
        << ", \"violations\": " << summary.violations
        << ", \"closest_stealth_gap\": " << fmt9(summary.closest_stealth_gap) << "}";
    return out.str();
}

std::string to_json(const OtpUniformityReport& report) {
    std::ostringstream out;
    out << "{\"d\": " << report.d << ", \"samples\": " << report.samples
        << ", \"statistic\": " << fmt9(report.statistic)
        << ", \"p_value\": " << fmt9(report.p_value) << ", \"counts\": [";
    for (std::size_t i = 0; i < report.counts.size(); ++i) {
        if (i) out << ", ";
        out << report.counts[i];
    }
    out << "]}";
    return out.str();
}

std::string state_to_json(const AmplitudeState& state) {
    std::ostringstream out;
    out << "[";
    const auto& amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i) out << ", ";
        out << "[" << fmt9(amps[i].real()) << ", " << fmt9(amps[i].imag()) << "]";
    }
    out << "]";
    return out.str();
}

std::string attack_csv_header() {
    return "model,d,L,trials,detections,empirical,theoretical,std_error";
}

std::string attack_csv_row(const AttackExperimentResult& row) {
    std::ostringstream out;
    out << row.model << ',' << row.d << ',' << row.L << ',' << row.trials << ','
        << row.detections << ',' << fmt9(row.empirical) << ',' << fmt9(row.theoretical)
        << ',' << fmt9(row.std_error);
    return out.str();
}

std::string transcript_to_jsonl(const Transcript& transcript) {
    std::ostringstream out;
    for (const TranscriptEvent& e : transcript.events) {
        const nlohmann::ordered_json line = {{"step", e.step},
                                             {"channel", e.channel},
                                             {"from", e.from},
                                             {"to", e.to},
                                             {"summary", e.summary}};
        out << line.dump() << '\n';
    }
    const nlohmann::ordered_json tail = {{"qudit_count", transcript.qudit_count},
                                         {"classical_dit_count", transcript.classical_dit_count},
                                         {"completed", transcript.completed}};
    out << tail.dump() << '\n';
    return out.str();
}

} // namespace mqpc
