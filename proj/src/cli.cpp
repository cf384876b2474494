#include "sdcsim/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "sdcsim/errors.hpp"
#include "sdcsim/scenario.hpp"

#include <CLI11.hpp>

namespace sdcsim::cli {

namespace {

namespace fs = std::filesystem;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write file: " + path.string());
    out << content;
}

void emit_report(const RunReport& report, const std::string& out_dir) {
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "requests.csv", report.csv);
        write_file(fs::path(out_dir) / "summary.json", report.summary_text());
    }
    std::cout << report.summary_text();
}

int exit_code_for(const SimError& e) {
    switch (e.kind()) {
        case ErrorKind::EmbeddingInfeasible:
        case ErrorKind::PlacementInfeasible:
            return 3;
        case ErrorKind::InternalInconsistency:
            return 4;
        default:
            return 2;
    }
}

Congestion parse_congestion(const std::string& text) {
    if (text == "low") return Congestion::Low;
    if (text == "medium") return Congestion::Medium;
    if (text == "high") return Congestion::High;
    throw InvalidArgumentError("congestion must be low|medium|high");
}

PlacementPolicy parse_policy(const std::string& text) {
    if (text == "bestfit") return PlacementPolicy::BestFit;
    if (text == "worstfit") return PlacementPolicy::WorstFit;
    throw InvalidArgumentError("policy must be bestfit|worstfit");
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"sdcsim - software-defined cloud data center simulator"};
    app.require_subcommand(1);

    // run
    auto* cmd_run = app.add_subcommand("run", "simulate supplied topology and workload documents");
    std::string physical_file;
    std::string virtual_file;
    std::string workload_file;
    std::uint64_t run_seed = 1;
    std::optional<double> until;
    std::string run_out;
    std::string run_policy = "bestfit";
    std::optional<std::string> run_trace;
    cmd_run->add_option("--physical", physical_file, "physical topology JSON")->required();
    cmd_run->add_option("--virtual", virtual_file, "virtual topology JSON")->required();
    cmd_run->add_option("--workload", workload_file, "request workload JSONL")->required();
    cmd_run->add_option("--seed", run_seed, "seed echoed into the report");
    cmd_run->add_option("--until", until, "stop after events at or before this time (seconds)");
    cmd_run->add_option("--out", run_out, "output directory for requests.csv and summary.json");
    cmd_run->add_option("--policy", run_policy, "placement policy: bestfit|worstfit");
    cmd_run->add_option("--trace", run_trace, "write an event trace to this file");

    // usecase1
    auto* cmd_uc1 = app.add_subcommand("usecase1", "QoS-aware bandwidth allocation experiment");
    std::string congestion = "medium";
    std::string priority = "off";
    std::uint64_t uc1_seed = 1;
    std::optional<double> reservation;
    std::optional<double> capacity;
    double duration = 30.0;
    std::string uc1_out;
    std::string dump_workload;
    std::string dump_physical;
    std::string dump_virtual;
    cmd_uc1->add_option("--congestion", congestion, "low|medium|high");
    cmd_uc1->add_option("--priority", priority, "on|off");
    cmd_uc1->add_option("--seed", uc1_seed, "workload seed");
    cmd_uc1->add_option("--reservation-bps", reservation, "override both priority reservations");
    cmd_uc1->add_option("--capacity-bps", capacity, "override the link capacity");
    cmd_uc1->add_option("--duration", duration, "workload generation window (seconds)");
    cmd_uc1->add_option("--out", uc1_out, "output directory");
    cmd_uc1->add_option("--dump-workload", dump_workload, "write the generated requests as JSONL");
    cmd_uc1->add_option("--dump-physical", dump_physical, "write the scenario's physical topology");
    cmd_uc1->add_option("--dump-virtual", dump_virtual, "write the scenario's virtual topology");

    // usecase2
    auto* cmd_uc2 = app.add_subcommand("usecase2", "energy-aware VM placement experiment");
    std::string policy = "bestfit";
    std::uint64_t uc2_seed = 1;
    std::string uc2_out;
    Usecase2Workload uc2_defaults;
    double arrival_rate = uc2_defaults.arrival_rate;
    double life_location = uc2_defaults.lifetime.location;
    double life_shape = uc2_defaults.lifetime.shape;
    int n_vms = uc2_defaults.n_vms;
    cmd_uc2->add_option("--policy", policy, "bestfit|worstfit");
    cmd_uc2->add_option("--seed", uc2_seed, "workload seed");
    cmd_uc2->add_option("--out", uc2_out, "output directory");
    cmd_uc2->add_option("--arrival-rate", arrival_rate, "VM arrivals per second");
    cmd_uc2->add_option("--lifetime-location", life_location, "Pareto lifetime location (seconds)");
    cmd_uc2->add_option("--lifetime-shape", life_shape, "Pareto lifetime shape");
    cmd_uc2->add_option("--vms", n_vms, "number of VM creation requests");

    // validate
    auto* cmd_validate = app.add_subcommand("validate", "check topology documents");
    std::string val_physical;
    std::string val_virtual;
    cmd_validate->add_option("--physical", val_physical, "physical topology JSON")->required();
    cmd_validate->add_option("--virtual", val_virtual, "virtual topology JSON");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (cmd_run->parsed()) {
            RunOptions opt;
            opt.physical_json = slurp(physical_file);
            opt.virtual_json = slurp(virtual_file);
            opt.workload_jsonl = slurp(workload_file);
            opt.seed = run_seed;
            opt.until_s = until;
            opt.policy = parse_policy(run_policy);
            opt.trace_path = run_trace;
            emit_report(run_documents(opt), run_out);
        } else if (cmd_uc1->parsed()) {
            Usecase1Options opt;
            opt.congestion = parse_congestion(congestion);
            if (priority != "on" && priority != "off") {
                throw InvalidArgumentError("priority must be on|off");
            }
            opt.priority_on = priority == "on";
            opt.seed = uc1_seed;
            opt.duration_s = duration;
            opt.reservation_bps = reservation;
            if (capacity) opt.capacity_bps = *capacity;
            if (!dump_workload.empty()) {
                Usecase1Workload wl;
                wl.congestion = opt.congestion;
                wl.duration_s = opt.duration_s;
                wl.seed = opt.seed;
                write_file(dump_workload, dump_requests_jsonl(gen_usecase1(wl)));
            }
            if (!dump_physical.empty()) write_file(dump_physical, serialize(usecase1_physical(opt)));
            if (!dump_virtual.empty()) write_file(dump_virtual, serialize(usecase1_virtual(opt)));
            emit_report(run_usecase1(opt), uc1_out);
        } else if (cmd_uc2->parsed()) {
            Usecase2Options opt;
            opt.policy = parse_policy(policy);
            opt.seed = uc2_seed;
            opt.workload.arrival_rate = arrival_rate;
            opt.workload.lifetime = DistSpec::pareto(life_location, life_shape);
            opt.workload.n_vms = n_vms;
            emit_report(run_usecase2(opt), uc2_out);
        } else if (cmd_validate->parsed()) {
            const PhysicalTopology pt = load_physical(slurp(val_physical));
            std::cout << "physical topology ok: " << pt.nodes.size() << " nodes, "
                      << pt.links.size() << " links\n";
            if (!val_virtual.empty()) {
                const VirtualTopology vt = load_virtual(slurp(val_virtual));
                std::cout << "virtual topology ok: " << vt.vms.size() << " vms, "
                          << vt.middleboxes.size() << " middleboxes, " << vt.vlinks.size()
                          << " vlinks\n";
            }
        }
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}

}  // namespace sdcsim::cli
