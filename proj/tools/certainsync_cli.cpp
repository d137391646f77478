#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "certainsync/bench.hpp"
#include "certainsync/net.hpp"
#include "certainsync/reduce.hpp"
#include "certainsync/sync.hpp"

namespace cs = certainsync;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDataset = 3;

cs::Scheme scheme_from_flag(const std::string& name) {
    auto scheme = cs::parse_scheme(name);
    if (!scheme) throw cs::ConfigError("unknown scheme: " + name);
    return *scheme;
}

cs::Scenario scenario_from_flag(const std::string& name) {
    if (name == "superset") return cs::Scenario::Superset;
    if (name == "general") return cs::Scenario::General;
    throw cs::ConfigError("unknown scenario: " + name + " (use superset or general)");
}

cs::Family family_from_flag(const std::string& name) {
    if (name == "EGH") return cs::Family::EGH;
    if (name == "OLS") return cs::Family::OLS;
    if (name == "EH") return cs::Family::ExtendedHamming;
    throw cs::ConfigError("unknown family: " + name + " (use EGH, OLS, or EH)");
}

std::vector<std::uint64_t> load_set_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cs::ConfigError("cannot open set file: " + path);
    std::vector<std::uint64_t> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stoull(line, &used));
            if (used != line.size()) throw std::invalid_argument(line);
        } catch (const std::exception&) {
            throw cs::ConfigError("set file line " + std::to_string(line_no) +
                                  " is not an integer");
        }
    }
    return out;
}

void emit_csv(const std::vector<cs::TrialRecord>& records, const std::string& out_path,
              bool with_means) {
    if (out_path.empty()) {
        cs::write_csv(records, std::cout, with_means);
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw cs::ConfigError("cannot open output file: " + out_path);
    cs::write_csv(records, out, with_means);
}

void print_outcome_summary(const char* role, const cs::ReconOutcome& outcome,
                           std::size_t final_size) {
    std::cout << role << ": status="
              << (outcome.status == cs::ReconOutcome::Status::Done ? "done" : "exhausted")
              << " received_missing=" << (role[0] == 's' ? outcome.receiver_only.size()
                                                         : outcome.sender_only.size())
              << " chunks=" << outcome.chunks_used << " cells=" << outcome.cells_used
              << " cell_bits=" << outcome.bits_on_wire << " wire_bytes=" << outcome.wire_bytes
              << " final_set_size=" << final_size << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rateless set reconciliation experiments and protocol endpoints"};
    app.require_subcommand(1);

    std::string scheme_flag = "CertainSync-EGH";
    std::uint64_t n_flag = 1000;
    std::vector<std::uint64_t> diff_flag;
    std::vector<std::uint64_t> n_list_flag;
    std::uint32_t trials_flag = 10;
    std::uint64_t delta_flag = 1;
    std::uint64_t seed_flag = 1;
    std::string scenario_flag = "superset";
    std::string out_flag;
    std::string dataset_flag;
    std::uint32_t minutes_flag = 40;

    auto* sweep_diff = app.add_subcommand(
        "sweep-diff", "Fix the universe, sweep symmetric-difference sizes");
    sweep_diff->add_option("--scheme", scheme_flag, "Scheme name, e.g. CertainSync-EGH");
    sweep_diff->add_option("--n", n_flag, "Universe size");
    sweep_diff->add_option("--diff", diff_flag, "Difference sizes")->required()->delimiter(',');
    sweep_diff->add_option("--trials", trials_flag, "Trials per difference size");
    sweep_diff->add_option("--delta", delta_flag, "Collision budget for reduction schemes");
    sweep_diff->add_option("--seed", seed_flag, "Master seed");
    sweep_diff->add_option("--scenario", scenario_flag, "superset or general");
    sweep_diff->add_option("--out", out_flag, "CSV output path (stdout when omitted)");

    auto* sweep_universe = app.add_subcommand(
        "sweep-universe", "Fix the difference size, sweep universe sizes");
    sweep_universe->add_option("--scheme", scheme_flag, "Scheme name");
    sweep_universe->add_option("--n", n_list_flag, "Universe sizes")->required()->delimiter(',');
    sweep_universe->add_option("--diff", diff_flag, "Difference size (exactly one)")
        ->required()
        ->delimiter(',');
    sweep_universe->add_option("--trials", trials_flag, "Trials per universe size");
    sweep_universe->add_option("--delta", delta_flag, "Collision budget for reduction schemes");
    sweep_universe->add_option("--seed", seed_flag, "Master seed");
    sweep_universe->add_option("--scenario", scenario_flag, "superset or general");
    sweep_universe->add_option("--out", out_flag, "CSV output path");

    auto* success_curve = app.add_subcommand(
        "success-curve", "Sweep difference sizes past the guaranteed maximum");
    success_curve->add_option("--scheme", scheme_flag, "Scheme name");
    success_curve->add_option("--n", n_flag, "Universe size");
    success_curve->add_option("--diff", diff_flag, "Difference sizes")->required()->delimiter(',');
    success_curve->add_option("--trials", trials_flag, "Trials per difference size");
    success_curve->add_option("--delta", delta_flag, "Collision budget for reduction schemes");
    success_curve->add_option("--seed", seed_flag, "Master seed");
    success_curve->add_option("--scenario", scenario_flag, "superset or general");
    success_curve->add_option("--out", out_flag, "CSV output path");

    auto* txpool = app.add_subcommand(
        "txpool", "Reconcile two nodes' transaction pools minute by minute");
    txpool->add_option("--dataset", dataset_flag,
                       "Snapshot file (node_id,minute,hex_id[;hex_id...]); synthetic when omitted");
    txpool->add_option("--minutes", minutes_flag, "Synthetic dataset length");
    txpool->add_option("--delta", delta_flag, "Collision budget for the reduction scheme");
    txpool->add_option("--seed", seed_flag, "Synthetic generator / session seed");
    txpool->add_option("--out", out_flag, "CSV output path");

    std::string host_flag = "127.0.0.1";
    std::uint16_t port_flag = 0;
    std::string family_flag = "EGH";
    std::string set_file_flag;

    auto* serve = app.add_subcommand("serve", "Listen for one session as the decoding side");
    serve->add_option("--port", port_flag, "TCP port (0 picks one)");
    serve->add_option("--family", family_flag, "EGH, OLS, or EH");
    serve->add_option("--n", n_flag, "Universe size");
    serve->add_option("--set-file", set_file_flag, "File with one integer element per line")
        ->required();

    auto* connect = app.add_subcommand("connect", "Connect and stream cells as the sending side");
    connect->add_option("--host", host_flag, "Server host");
    connect->add_option("--port", port_flag, "Server port")->required();
    connect->add_option("--family", family_flag, "EGH, OLS, or EH");
    connect->add_option("--n", n_flag, "Universe size");
    connect->add_option("--set-file", set_file_flag, "File with one integer element per line")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (sweep_diff->parsed() || success_curve->parsed()) {
            cs::ExperimentConfig config;
            config.scheme = scheme_from_flag(scheme_flag);
            config.n = n_flag;
            config.diffs = diff_flag;
            config.trials = trials_flag;
            config.scenario = scenario_from_flag(scenario_flag);
            config.delta_max_collisions = delta_flag;
            config.seed = seed_flag;
            config.allow_beyond_max_diff = success_curve->parsed();
            emit_csv(cs::run_experiment(config), out_flag, true);
        } else if (sweep_universe->parsed()) {
            if (diff_flag.size() != 1) {
                throw cs::ConfigError("sweep-universe takes exactly one --diff value");
            }
            std::vector<cs::TrialRecord> records;
            for (std::uint64_t n : n_list_flag) {
                cs::ExperimentConfig config;
                config.scheme = scheme_from_flag(scheme_flag);
                config.n = n;
                config.diffs = diff_flag;
                config.trials = trials_flag;
                config.scenario = scenario_from_flag(scenario_flag);
                config.delta_max_collisions = delta_flag;
                config.seed = seed_flag;
                auto part = cs::run_experiment(config);
                records.insert(records.end(), part.begin(), part.end());
            }
            emit_csv(records, out_flag, true);
        } else if (txpool->parsed()) {
            std::vector<cs::NodePool> dataset = dataset_flag.empty()
                                                    ? cs::gen_txpool_dataset(seed_flag, minutes_flag)
                                                    : cs::load_txpool_dataset(dataset_flag);
            emit_csv(cs::run_txpool(dataset, delta_flag, seed_flag), out_flag, false);
        } else if (serve->parsed()) {
            cs::ConstructionSpec spec = family_from_flag(family_flag) == cs::Family::EGH
                                            ? cs::ConstructionSpec::egh(n_flag)
                                        : family_from_flag(family_flag) == cs::Family::OLS
                                            ? cs::ConstructionSpec::ols(n_flag)
                                            : cs::ConstructionSpec::extended_hamming(n_flag);
            std::vector<std::uint64_t> set = load_set_file(set_file_flag);
            cs::TcpListener listener(port_flag);
            std::cout << "listening on port " << listener.port() << '\n';
            auto transport = listener.accept_one();
            auto outcome = cs::run_sync_receiver(*transport, /*session=*/1,
                                                 cs::SpecMapper{spec}, set);
            print_outcome_summary("receiver", outcome, set.size());
        } else if (connect->parsed()) {
            cs::ConstructionSpec spec = family_from_flag(family_flag) == cs::Family::EGH
                                            ? cs::ConstructionSpec::egh(n_flag)
                                        : family_from_flag(family_flag) == cs::Family::OLS
                                            ? cs::ConstructionSpec::ols(n_flag)
                                            : cs::ConstructionSpec::extended_hamming(n_flag);
            std::vector<std::uint64_t> set = load_set_file(set_file_flag);
            auto transport = cs::tcp_connect(host_flag, port_flag);
            auto outcome = cs::run_sync_sender(*transport, /*session=*/1,
                                               cs::SpecMapper{spec}, set);
            print_outcome_summary("sender", outcome, set.size());
        }
    } catch (const cs::MalformedDataset& e) {
        std::cerr << "dataset error: " << e.what() << '\n';
        return kExitDataset;
    } catch (const cs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
