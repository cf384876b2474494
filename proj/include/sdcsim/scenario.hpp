#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "sdcsim/engine.hpp"
#include "sdcsim/placement.hpp"
#include "sdcsim/workload.hpp"

#include <json.hpp>

namespace sdcsim {

/// Per-class response summary.
struct ResponseStats {
    std::size_t count = 0;
    double mean_s = 0.0;
    double median_s = 0.0;
    double p95_s = 0.0;
};

ResponseStats response_stats(const std::vector<double>& responses);

/// Everything a scenario run reports: statistics, the energy summary, and
/// the per-request CSV the statistics are recomputable from.
struct RunReport {
    std::string scenario;
    std::uint64_t seed = 0;
    nlohmann::ordered_json config_echo;

    std::map<std::string, ResponseStats> per_class;  // "normal" / "priority"
    double energy_wh_total = 0.0;
    std::map<std::string, double> energy_wh_per_host;
    int max_hosts = 0;
    int idle_switches_final = 0;

    std::string csv;  // request_id,class,submit_s,finish_s,response_s

    [[nodiscard]] nlohmann::ordered_json summary() const;
    [[nodiscard]] std::string summary_text() const { return summary().dump(2) + "\n"; }
};

/// QoS-aware bandwidth allocation scenario: the three-host fat-tree with a
/// three-tier application and four virtual channels.
///
/// The link capacity default is sized so the app host NIC congests under
/// the medium and high normal-traffic rates while staying comfortable at
/// the low rate; the per-channel reservation default is twice the mean
/// offered priority load, clamped so the reservations fit the path.
struct Usecase1Options {
    Congestion congestion = Congestion::Medium;
    bool priority_on = false;
    std::uint64_t seed = 1;
    double duration_s = 30.0;
    double capacity_bps = 4.2e6;
    double latency_s = 1e-3;
    std::optional<double> reservation_bps;  // overrides both priority channels
    HostProfile host_profile{16, 40000.0, {}};
    std::optional<std::string> trace_path;
};

RunReport run_usecase1(const Usecase1Options& opt);

/// Builds the use-case-1 physical and virtual topologies without running.
PhysicalTopology usecase1_physical(const Usecase1Options& opt);
VirtualTopology usecase1_virtual(const Usecase1Options& opt);

/// Network-aware VM placement scenario: 40 gigabit hosts, 100 timed VM
/// requests, one of the two packing heuristics.
struct Usecase2Options {
    PlacementPolicy policy = PlacementPolicy::BestFit;
    std::uint64_t seed = 1;
    int n_hosts = 40;
    int hosts_per_edge = 10;
    double capacity_bps = 1e9;
    double latency_s = 1e-3;
    HostProfile host_profile{16, 4000.0, {}};
    Usecase2Workload workload;
};

RunReport run_usecase2(const Usecase2Options& opt);

/// General runner over externally supplied documents.
struct RunOptions {
    std::string physical_json;
    std::string virtual_json;
    std::string workload_jsonl;
    std::uint64_t seed = 1;
    std::optional<double> until_s;
    PlacementPolicy policy = PlacementPolicy::BestFit;
    std::optional<std::string> trace_path;
};

RunReport run_documents(const RunOptions& opt);

}  // namespace sdcsim
