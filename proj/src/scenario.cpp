#include "sdcsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "sdcsim/errors.hpp"
#include "sdcsim/power.hpp"

namespace sdcsim {

using ordered_json = nlohmann::ordered_json;

ResponseStats response_stats(const std::vector<double>& responses) {
    ResponseStats stats;
    stats.count = responses.size();
    if (responses.empty()) return stats;

    double sum = 0.0;
    for (const double r : responses) sum += r;
    stats.mean_s = sum / static_cast<double>(responses.size());

    std::vector<double> sorted = responses;
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double p) {
        const auto n = sorted.size();
        const auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n))) - 1;
        return sorted[std::min(idx, n - 1)];
    };
    stats.median_s = quantile(0.5);
    stats.p95_s = quantile(0.95);
    return stats;
}

ordered_json RunReport::summary() const {
    ordered_json doc;
    doc["scenario"] = scenario;
    doc["seed"] = seed;
    doc["config"] = config_echo;
    ordered_json mean = ordered_json::object();
    ordered_json median = ordered_json::object();
    ordered_json p95 = ordered_json::object();
    ordered_json counts = ordered_json::object();
    for (const auto& [cls, stats] : per_class) {
        mean[cls] = stats.mean_s;
        median[cls] = stats.median_s;
        p95[cls] = stats.p95_s;
        counts[cls] = stats.count;
    }
    doc["mean_response_s"] = std::move(mean);
    doc["median_response_s"] = std::move(median);
    doc["p95_response_s"] = std::move(p95);
    doc["completed_requests"] = std::move(counts);
    doc["energy_wh_total"] = energy_wh_total;
    ordered_json per_host = ordered_json::object();
    for (const auto& [host, wh] : energy_wh_per_host) per_host[host] = wh;
    doc["energy_wh_per_host"] = std::move(per_host);
    doc["max_hosts"] = max_hosts;
    doc["idle_switches_final"] = idle_switches_final;
    return doc;
}

namespace {

std::string render_csv(const Metrics& metrics) {
    std::ostringstream out;
    out << "request_id,class,submit_s,finish_s,response_s\n";
    char line[160];
    for (const auto& r : metrics.completed) {
        std::snprintf(line, sizeof line, "%s,%s,%.9f,%.9f,%.9f\n", r.id.c_str(),
                      to_string(r.cls).c_str(), r.submit_s, r.finish_s, r.response_s());
        out << line;
    }
    return out.str();
}

void fill_report(RunReport& report, const Simulation& sim) {
    report.per_class["normal"] = response_stats(sim.metrics().responses(RequestClass::Normal));
    report.per_class["priority"] = response_stats(sim.metrics().responses(RequestClass::Priority));
    report.energy_wh_total = sim.energy().total_wh();
    report.energy_wh_per_host = sim.energy().per_host_wh();
    report.max_hosts = sim.energy().max_hosts_in_use();
    report.idle_switches_final = idle_switch_count(sim.topology(), sim.placement().hosts());
    report.csv = render_csv(sim.metrics());
}

double lognormal_mean_bytes(const DistSpec& d) {
    return std::exp(d.mu + d.sigma * d.sigma / 2.0);
}

std::unique_ptr<std::ofstream> attach_trace(Simulation& sim,
                                            const std::optional<std::string>& path) {
    if (!path) return nullptr;
    auto out = std::make_unique<std::ofstream>(*path, std::ios::binary);
    if (!*out) throw FormatError("cannot write trace file: " + *path);
    sim.set_trace([sink = out.get()](const std::string& line) { *sink << line << "\n"; });
    return out;
}

}  // namespace

PhysicalTopology usecase1_physical(const Usecase1Options& opt) {
    return build_fat_tree(3, 2, opt.capacity_bps, opt.latency_s, opt.host_profile);
}

VirtualTopology usecase1_virtual(const Usecase1Options& opt) {
    const WebTrafficModel model;
    // Default reservation: mean priority demand per channel (two legs per
    // request) times the priority rate, with a safety factor of 2. The two
    // reservations share the app-host link, so the larger one is clamped to
    // keep the pair within 90% of the link.
    const double rate = 100.0;
    double r3 = opt.reservation_bps.value_or(
        2.0 * rate * 2.0 * 8.0 * lognormal_mean_bytes(model.size_ch3));
    double r4 = opt.reservation_bps.value_or(
        2.0 * rate * 2.0 * 8.0 * lognormal_mean_bytes(model.size_ch4));
    if (!opt.reservation_bps) {
        r3 = std::min(r3, 0.9 * opt.capacity_bps);
        r4 = std::min(r4, 0.9 * opt.capacity_bps - r3);
    }

    VirtualTopology vt;
    const VmSpec base{"", "tier", opt.host_profile.mips_per_core, opt.host_profile.cores,
                      opt.capacity_bps};
    for (const char* name : {"web", "app", "db"}) {
        VmSpec vm = base;
        vm.id = name;
        vm.type_name = name;
        vt.vms.push_back(std::move(vm));
    }
    const ChannelClass qos = opt.priority_on ? ChannelClass::Priority : ChannelClass::Standard;
    vt.vlinks = {
        {"ch1", "web", "app", 1000.0, std::nullopt, ChannelClass::Standard},
        {"ch2", "app", "db", 1000.0, std::nullopt, ChannelClass::Standard},
        {"ch3", "web", "app", opt.priority_on ? r3 : 1000.0, std::nullopt, qos},
        {"ch4", "app", "db", opt.priority_on ? r4 : 1000.0, std::nullopt, qos},
    };
    return vt;
}

RunReport run_usecase1(const Usecase1Options& opt) {
    const PhysicalTopology pt = usecase1_physical(opt);
    const VirtualTopology vt = usecase1_virtual(opt);

    Simulation sim(pt);
    const auto trace = attach_trace(sim, opt.trace_path);
    sim.deploy(vt, PlacementPolicy::BestFit);
    if (!opt.priority_on) {
        // Without the QoS split every request shares the standard channels;
        // ch3/ch4 sit idle and hold no bandwidth share.
        sim.set_channel_alias("ch3", "ch1");
        sim.set_channel_alias("ch4", "ch2");
    }

    Usecase1Workload workload;
    workload.congestion = opt.congestion;
    workload.duration_s = opt.duration_s;
    workload.seed = opt.seed;
    for (const auto& request : gen_usecase1(workload)) {
        sim.submit(request);
    }
    sim.run_all();
    sim.finalize_energy();

    RunReport report;
    report.scenario = "usecase1";
    report.seed = opt.seed;
    report.config_echo = {
        {"congestion", to_string(opt.congestion)},
        {"priority", opt.priority_on ? "on" : "off"},
        {"duration_s", opt.duration_s},
        {"capacity_bps", opt.capacity_bps},
        {"latency_s", opt.latency_s},
        {"normal_rate_rps", normal_rate_for(opt.congestion)},
        {"priority_rate_rps", 100.0},
        {"reservation_bps",
         ordered_json{{"ch3", vt.vlinks[2].bandwidth_bps}, {"ch4", vt.vlinks[3].bandwidth_bps}}},
        {"host_cores", opt.host_profile.cores},
        {"host_mips_per_core", opt.host_profile.mips_per_core},
    };
    fill_report(report, sim);
    return report;
}

RunReport run_usecase2(const Usecase2Options& opt) {
    const PhysicalTopology pt = build_fat_tree(opt.n_hosts, opt.hosts_per_edge, opt.capacity_bps,
                                               opt.latency_s, opt.host_profile);
    Simulation sim(pt);

    Usecase2Workload workload = opt.workload;
    workload.seed = opt.seed;
    for (const auto& req : gen_usecase2(workload)) {
        sim.schedule_vm(req.create_s, req.spec, opt.policy, req.lifetime_s);
    }
    sim.run_all();
    sim.finalize_energy();

    RunReport report;
    report.scenario = "usecase2";
    report.seed = opt.seed;
    report.config_echo = {
        {"policy", opt.policy == PlacementPolicy::BestFit ? "bestfit" : "worstfit"},
        {"n_hosts", opt.n_hosts},
        {"hosts_per_edge", opt.hosts_per_edge},
        {"capacity_bps", opt.capacity_bps},
        {"latency_s", opt.latency_s},
        {"n_vms", workload.n_vms},
        {"arrival_rate_per_s", workload.arrival_rate},
        {"lifetime_location_s", workload.lifetime.location},
        {"lifetime_shape", workload.lifetime.shape},
        {"host_cores", opt.host_profile.cores},
        {"host_mips_per_core", opt.host_profile.mips_per_core},
    };
    fill_report(report, sim);
    return report;
}

RunReport run_documents(const RunOptions& opt) {
    const PhysicalTopology pt = load_physical(opt.physical_json);
    const VirtualTopology vt = load_virtual(opt.virtual_json);
    const std::vector<Request> requests = load_requests_jsonl(opt.workload_jsonl);

    Simulation sim(pt);
    const auto trace = attach_trace(sim, opt.trace_path);
    sim.deploy(vt, opt.policy);
    for (const auto& request : requests) {
        sim.submit(request);
    }
    if (opt.until_s) {
        sim.run_until(*opt.until_s);
    } else {
        sim.run_all();
    }
    sim.finalize_energy();

    RunReport report;
    report.scenario = "run";
    report.seed = opt.seed;
    report.config_echo = {
        {"policy", opt.policy == PlacementPolicy::BestFit ? "bestfit" : "worstfit"},
        {"requests", requests.size()},
    };
    if (opt.until_s) report.config_echo["until_s"] = *opt.until_s;
    fill_report(report, sim);
    return report;
}

}  // namespace sdcsim
