#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "scholartrace/ingest/event_store.hpp"
#include "scholartrace/ingest/wire_api.hpp"
#include "scholartrace/pipeline/pipeline.hpp"
#include "scholartrace/pipeline/report.hpp"
#include "scholartrace/pipeline/simulate.hpp"

namespace fs = std::filesystem;
using namespace scholartrace;

namespace {

nlohmann::json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return nlohmann::json::parse(in);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
}

ingest::EventStore open_store(const fs::path& path, ingest::EventStore::Clock clock) {
    auto config = ingest::StoreConfig::from_environment();
    config.log_path = path;
    if (fs::exists(path)) return ingest::EventStore::open(std::move(config), std::move(clock));
    return ingest::EventStore(std::move(config), std::move(clock));
}

pipeline::ReportFormat format_of(const std::string& name) {
    return name == "text" ? pipeline::ReportFormat::Text : pipeline::ReportFormat::Json;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Literature-access study pipeline: simulate cohorts, collect events, analyze."};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic cohort and its ground truth");
    std::string spec_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::string fields_path = ST_DATA_DIR "/pmid_fields.csv";
    std::string risk_path = ST_CONFIG_DIR "/risk_synthetic_example.json";
    simulate->add_option("--spec", spec_path, "Cohort spec JSON")->check(CLI::ExistingFile);
    simulate->add_option("--seed", seed, "RNG seed (overrides the spec)");
    simulate->add_option("--out", out_dir, "Output directory")->required();
    simulate->add_option("--fields", fields_path, "PMID to field table")->check(CLI::ExistingFile);
    simulate->add_option("--risk-model", risk_path, "Risk model JSON")->check(CLI::ExistingFile);

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP intake endpoints");
    std::string store_path;
    std::string host = "127.0.0.1";
    int port = 8080;
    serve->add_option("--store-path", store_path, "Append-only store log")->required();
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--port", port, "Port, 0 for any free port");

    // replay
    auto* replay = app.add_subcommand("replay", "Replay cohort logs into a persistent store");
    std::string config_path;
    replay->add_option("--config", config_path, "Pipeline config JSON")->required()->check(CLI::ExistingFile);
    replay->add_option("--store-path", store_path, "Append-only store log")->required();

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Run the full pipeline and print the report");
    std::string format = "text";
    std::string report_out, features_out, scored_out;
    analyze->add_option("--config", config_path, "Pipeline config JSON")->required()->check(CLI::ExistingFile);
    analyze->add_option("--store-path", store_path, "Analyze an existing store log instead of the config logs")
        ->check(CLI::ExistingFile);
    analyze->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
    analyze->add_option("--out", report_out, "Write the report here instead of stdout");
    analyze->add_option("--features", features_out, "Write per-participant JSON-lines features");
    analyze->add_option("--scored", scored_out, "Write the scored-survey CSV");

    // report
    auto* report = app.add_subcommand("report", "Render a saved JSON report");
    std::string input;
    report->add_option("--input", input, "Report JSON")->required()->check(CLI::ExistingFile);
    report->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
    report->add_option("--out", report_out, "Write here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) {
            pipeline::CohortSpec spec;
            if (!spec_path.empty()) {
                auto doc = read_json(spec_path);
                if (seed) doc["seed"] = *seed;
                spec = pipeline::spec_from_json(doc);
            } else if (seed) {
                spec.seed = *seed;
            } else {
                throw pipeline::SpecError("a seed is required: pass --seed or --spec");
            }
            const auto sim = pipeline::simulate(spec, pipeline::read_field_rows(fields_path));
            pipeline::write_simulation(sim, out_dir, fields_path, risk_path);
            std::cout << "participants " << sim.participants.size() << ", events " << sim.events.size()
                      << ", surveys " << sim.surveys.size() << ", vpn ips " << sim.vpn_ips.size() << " -> "
                      << out_dir << "\n";
        } else if (*serve) {
            sigset_t signals;
            sigemptyset(&signals);
            sigaddset(&signals, SIGINT);
            sigaddset(&signals, SIGTERM);
            pthread_sigmask(SIG_BLOCK, &signals, nullptr);

            auto store = open_store(store_path, &ingest::EventStore::system_now);
            ingest::WireApi api(store);
            ingest::HttpFrontend frontend(api);
            const int bound = frontend.bind(host, port);
            if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
            std::cout << "listening on " << host << ":" << bound << std::endl;
            std::thread waiter([&] {
                int sig = 0;
                sigwait(&signals, &sig);
                frontend.stop();
            });
            waiter.detach();
            frontend.run();
        } else if (*replay) {
            const auto config = pipeline::load_config(config_path);
            Timestamp clock{};
            auto store = open_store(store_path, [&clock] { return clock; });
            const auto summary = pipeline::replay_logs(pipeline::load_logs(config), config.downtime, store, clock);
            pipeline::PipelineReport r;
            r.ingest = summary;
            std::cout << pipeline::report_to_json(r)["ingest"].dump(2) << "\n";
        } else if (*analyze) {
            const auto config = pipeline::load_config(config_path);
            pipeline::PipelineRun run;
            if (!store_path.empty()) {
                const auto store = open_store(store_path, &ingest::EventStore::system_now);
                run = pipeline::analyze_snapshot(store.snapshot(), config);
            } else {
                run = pipeline::run_pipeline_detailed(pipeline::load_logs(config), config);
            }
            emit(pipeline::report_render(run.report, format_of(format)), report_out);
            if (!features_out.empty()) {
                std::string lines;
                for (const auto& f : run.features) lines += pipeline::to_json(f).dump() + "\n";
                emit(lines, features_out);
            }
            if (!scored_out.empty()) {
                std::ostringstream csv;
                pipeline::write_scored_csv(csv, run.scored);
                emit(csv.str(), scored_out);
            }
        } else if (*report) {
            const auto r = pipeline::report_from_json(read_json(input));
            emit(pipeline::report_render(r, format_of(format)), report_out);
        }
    } catch (const pipeline::PipelineError& e) {
        std::cerr << "error [" << e.stage() << "]: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
