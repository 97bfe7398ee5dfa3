// Command-line driver: demo, protocol runs, attack experiments, audits and
// efficiency reports. Exit codes: 0 success, 2 protocol aborted, 3 result
// mismatch, 64 usage error, 1 unexpected failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "mqpc/errors.hpp"
#include "mqpc/io.hpp"
#include "mqpc/metrics.hpp"
#include "mqpc/protocol_engine.hpp"
#include "mqpc/security_lab.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAborted = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitUsage = 64;

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

void write_output(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw mqpc::ConfigError("cannot open output file '" + out_path + "'");
    out << content;
}

int cmd_demo(const std::string& out_path) {
    const mqpc::GoldenExample golden = mqpc::golden_example();
    const mqpc::RunResult run =
        mqpc::run_protocol(golden.params, golden.secrets, mqpc::Honest{}, golden.pinned);

    std::ostringstream out;
    out << "d=" << golden.params.dims.d << " n=" << golden.params.n
        << " L=" << golden.params.L << " h=" << golden.params.dims.h << '\n';
    std::vector<int> p;
    for (const auto& s : golden.secrets) p.push_back(s.p);
    out << "p  = " << join_digits(p) << '\n';
    out << "v  = " << join_digits(run.v) << '\n';
    out << "k  = " << join_digits(run.k) << '\n';
    out << "m1 = " << join_digits(run.m1) << '\n';
    out << "m2 = " << join_digits(run.m2) << '\n';
    out << "q  = " << run.q << '\n';
    out << "r2 = " << join_digits(run.r2) << '\n';
    out << "r1 = " << join_digits(run.r1) << '\n';
    out << "r  = " << join_digits(run.r) << '\n';
    out << "M  = " << join_digits(run.M) << '\n';

    int mismatches = 0;
    auto check = [&](const char* name, const std::vector<int>& got,
                     const std::vector<int>& expected) {
        if (got != expected) {
            ++mismatches;
            out << "mismatch: " << name << " expected " << join_digits(expected) << " got "
                << join_digits(got) << '\n';
        }
    };
    check("m2", run.m2, golden.expected_m2);
    check("r2", run.r2, golden.expected_r2);
    check("r1", run.r1, golden.expected_r1);
    check("r", run.r, golden.expected_r);
    check("M", run.M, golden.expected_m);

    if (!run.completed()) {
        out << "mismatch: run did not complete\n";
        ++mismatches;
    } else {
        out << "announcement: " << mqpc::render_announcement(run.announcement()) << '\n';
        if (!(run.announcement() == golden.expected_announcement)) {
            ++mismatches;
            out << "mismatch: announcement expected "
                << mqpc::render_announcement(golden.expected_announcement) << '\n';
        }
    }
    out << (mismatches == 0 ? "demo: all intermediates match\n"
                            : "demo: " + std::to_string(mismatches) + " mismatch(es)\n");
    write_output(out.str(), out_path);
    return mismatches == 0 ? kExitOk : kExitMismatch;
}

int cmd_run(const std::string& config_path, int d, int n, int L, std::uint64_t seed,
            const std::string& attack, const std::string& out_path) {
    mqpc::RunConfig config;
    if (!config_path.empty()) {
        config = mqpc::load_config(config_path);
    } else {
        if (d < 2) throw mqpc::ConfigError("provide --config or --d");
        std::ostringstream text;
        text << "{\"d\": " << d << ", \"n\": " << (n > 0 ? n : 2) << ", \"L\": " << L
             << ", \"seed\": " << seed << ", \"attack\": \"" << attack << "\"}";
        config = mqpc::parse_config(text.str());
    }
    if (config.secrets.empty()) {
        // No explicit inputs: draw them from their own substream of the seed.
        mqpc::RandomStream inputs = mqpc::RandomStream(config.params.seed).split("inputs");
        for (int i = 0; i < config.params.n; ++i)
            config.secrets.push_back(
                mqpc::UserSecret{inputs.uniform_int(0, config.params.dims.h), -1});
    }

    const mqpc::RunResult run =
        mqpc::run_protocol(config.params, config.secrets, config.model);
    write_output(mqpc::transcript_to_jsonl(run.transcript), out_path);

    if (run.completed()) {
        std::cout << "{\"announcement\": \""
                  << mqpc::render_announcement(run.announcement()) << "\"}\n";
        return kExitOk;
    }
    const auto& aborted = std::get<mqpc::Aborted>(run.outcome);
    std::cout << "{\"aborted\": {\"step\": " << aborted.step << ", \"label\": \""
              << aborted.channel_label << "\", \"checked\": " << aborted.report.checked
              << ", \"mismatches\": " << aborted.report.mismatches << "}}\n";
    return kExitAborted;
}

int cmd_attack(const std::string& attack, int d, int L, long long trials,
               std::uint64_t seed, const std::string& format, const std::string& out_path) {
    mqpc::EavesdropperModel model;
    if (attack == "honest" || attack == "none") model = mqpc::Honest{};
    else if (attack == "intercept_resend") model = mqpc::InterceptResend{};
    else if (attack == "measure_resend") model = mqpc::MeasureResend{};
    else if (attack == "entangle_measure") {
        mqpc::EntangleMeasure em;
        em.probe_dim = 2;
        mqpc::RandomStream rng = mqpc::RandomStream(seed).split("attack-unitary");
        em.unitary = mqpc::haar_unitary(d * em.probe_dim, rng);
        model = em;
    } else {
        throw mqpc::ConfigError("unknown attack model '" + attack + "'");
    }

    const mqpc::RandomStream base = mqpc::RandomStream(seed).split("trials");
    const mqpc::AttackExperimentResult row =
        mqpc::attack_experiment(model, d, L, trials, base);

    std::ostringstream out;
    if (format == "csv") {
        out << mqpc::attack_csv_header() << '\n' << mqpc::attack_csv_row(row) << '\n';
    } else if (format == "text") {
        out << row.model << " d=" << row.d << " L=" << row.L << ": detected "
            << row.detections << "/" << row.trials << " (empirical "
            << mqpc::fmt9(row.empirical) << ", theoretical " << mqpc::fmt9(row.theoretical)
            << ", std error " << mqpc::fmt9(row.std_error) << ")\n";
    } else {
        throw mqpc::ConfigError("attack output supports --format csv or text");
    }
    write_output(out.str(), out_path);
    return kExitOk;
}

int cmd_audit(int d, int probe_dim, int samples, std::uint64_t seed,
              const std::string& out_path) {
    if (d * probe_dim > 64)
        throw mqpc::ConfigError("audit dimension budget is d * probe_dim <= 64");
    mqpc::RandomStream master(seed);
    mqpc::RandomStream stealth_rng = master.split("stealth");
    mqpc::RandomStream scan_rng = master.split("scan");

    const auto identity_verdict = mqpc::entangle_measure_audit(
        mqpc::probe_only_unitary(d, probe_dim, stealth_rng), d, probe_dim);
    const auto shift_verdict = mqpc::entangle_measure_audit(
        mqpc::controlled_shift_unitary(d, probe_dim), d, probe_dim);
    const auto scan = mqpc::theorem_scan(d, probe_dim, samples, scan_rng);

    std::ostringstream out;
    out << "{\"case\": \"probe_only\", \"verdict\": " << mqpc::to_json(identity_verdict)
        << "}\n";
    out << "{\"case\": \"controlled_shift\", \"verdict\": " << mqpc::to_json(shift_verdict)
        << "}\n";
    out << "{\"case\": \"haar_scan\", \"summary\": " << mqpc::to_json(scan) << "}\n";
    write_output(out.str(), out_path);

    const bool identity_ok = identity_verdict.stealthy &&
                             identity_verdict.probe_independence &&
                             *identity_verdict.probe_independence >= 1.0 - 1e-6;
    if (!identity_ok) return kExitMismatch;
    return scan.violations == 0 ? kExitOk : kExitMismatch;
}

int cmd_efficiency(const std::string& config_path, int n, const std::string& format,
                   const std::string& out_path) {
    mqpc::EfficiencyReport report;
    if (!config_path.empty()) {
        mqpc::RunConfig config = mqpc::load_config(config_path);
        if (config.secrets.empty()) {
            mqpc::RandomStream inputs =
                mqpc::RandomStream(config.params.seed).split("inputs");
            for (int i = 0; i < config.params.n; ++i)
                config.secrets.push_back(
                    mqpc::UserSecret{inputs.uniform_int(0, config.params.dims.h), -1});
        }
        const mqpc::RunResult run =
            mqpc::run_protocol(config.params, config.secrets, config.model);
        if (!run.completed()) return kExitAborted;
        report = mqpc::efficiency_from_transcript(run.transcript);
    } else {
        if (n < 2) throw mqpc::ConfigError("provide --config or --n >= 2");
        report = mqpc::efficiency_closed_form(n);
    }

    std::ostringstream out;
    if (format == "json") {
        out << mqpc::to_json(report) << '\n';
    } else if (format == "text") {
        out << "eta = " << report.eta.str() << " (x=" << report.x << ", y=" << report.y
            << ", z=" << report.z << ")\n";
    } else {
        throw mqpc::ConfigError("efficiency output supports --format json or text");
    }
    write_output(out.str(), out_path);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator and security laboratory for a multi-party private-comparison "
                 "protocol over d-dimensional entangled pairs"};
    app.require_subcommand(1);

    std::string config_path, attack = "honest", out_path, format;
    int d = 0, n = 0, L = 1, probe_dim = 2, samples = 100;
    long long trials = 100000;
    std::uint64_t seed = 0;

    CLI::App* demo = app.add_subcommand("demo", "Run the built-in worked example");
    demo->add_option("--out", out_path, "Write the report to a file");

    CLI::App* run = app.add_subcommand("run", "Execute one protocol run");
    run->add_option("--config", config_path, "JSON run configuration");
    run->add_option("--d", d, "Qudit dimension");
    run->add_option("--n", n, "User count");
    run->add_option("--L", L, "Decoys per transmission");
    run->add_option("--seed", seed, "Random seed");
    run->add_option("--attack", attack, "Eavesdropper model");
    run->add_option("--out", out_path, "Write the transcript to a file");

    CLI::App* atk = app.add_subcommand("attack", "Measure decoy detection rates");
    atk->add_option("--attack", attack, "Eavesdropper model")->required();
    atk->add_option("--d", d, "Qudit dimension")->required();
    atk->add_option("--L", L, "Decoys per transmission");
    atk->add_option("--trials", trials, "Number of independent transmissions");
    atk->add_option("--seed", seed, "Random seed");
    atk->add_option("--format", format, "csv or text");
    atk->add_option("--out", out_path, "Write results to a file");

    CLI::App* audit = app.add_subcommand("audit", "Audit entangling attacks for leakage");
    audit->add_option("--d", d, "Qudit dimension")->required();
    audit->add_option("--probe-dim", probe_dim, "Probe dimension");
    audit->add_option("--samples", samples, "Random unitaries to scan");
    audit->add_option("--seed", seed, "Random seed");
    audit->add_option("--out", out_path, "Write verdicts to a file");

    CLI::App* eff = app.add_subcommand("efficiency", "Report the resource efficiency");
    eff->add_option("--config", config_path, "Derive from a simulated run");
    eff->add_option("--n", n, "User count for the closed form");
    eff->add_option("--format", format, "json or text");
    eff->add_option("--out", out_path, "Write the report to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*demo) return cmd_demo(out_path);
        if (*run) return cmd_run(config_path, d, n, L, seed, attack, out_path);
        if (*atk)
            return cmd_attack(attack, d, L, trials, seed, format.empty() ? "csv" : format,
                              out_path);
        if (*audit) return cmd_audit(d, probe_dim, samples, seed, out_path);
        if (*eff)
            return cmd_efficiency(config_path, n, format.empty() ? "json" : format, out_path);
        return kExitUsage;
    } catch (const mqpc::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
