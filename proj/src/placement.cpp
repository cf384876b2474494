#include "sdcsim/placement.hpp"

#include <algorithm>

#include "sdcsim/errors.hpp"

namespace sdcsim {

NormalizedDemand normalized_demand(const VmSpec& vm, const PhysNode& host, double nic_capacity_bps) {
    if (!host.is_host()) throw InvalidArgumentError("normalized_demand: node is not a host");
    return {vm.total_mips() / host.total_mips(), vm.bandwidth_bps / nic_capacity_bps};
}

NormalizedDemand normalized_demand(const VmSpec& vm, const HostState& host) {
    return {vm.total_mips() / host.total_mips(), vm.bandwidth_bps / host.nic_bps};
}

double idleness(const HostState& host) {
    const double free_cpu = 1.0 - host.allocated_mips / host.total_mips();
    const double free_bw = 1.0 - host.allocated_bw / host.nic_bps;
    return free_cpu * free_bw;
}

namespace {

bool fits(const VmSpec& vm, const HostState& host) {
    return host.allocated_mips + vm.total_mips() <= host.total_mips() &&
           host.allocated_bw + vm.bandwidth_bps <= host.nic_bps;
}

// Both dimensions are checked independently; feasibility is never
// scalarized. better(a, b) says "a is preferred over b".
template <typename Better>
std::size_t select_host(const VmSpec& vm, std::span<const HostState> hosts, Better better) {
    std::size_t chosen = hosts.size();
    for (std::size_t i = 0; i < hosts.size(); ++i) {
        if (!fits(vm, hosts[i])) continue;
        if (chosen == hosts.size()) {
            chosen = i;
            continue;
        }
        const double cand = idleness(hosts[i]);
        const double best = idleness(hosts[chosen]);
        if (better(cand, best) || (cand == best && hosts[i].id < hosts[chosen].id)) {
            chosen = i;
        }
    }
    if (chosen == hosts.size()) {
        throw PlacementInfeasibleError("no feasible host for vm " + vm.id);
    }
    return chosen;
}

}  // namespace

std::size_t place_best_fit(const VmSpec& vm, std::span<const HostState> hosts) {
    return select_host(vm, hosts, [](double cand, double best) { return cand < best; });
}

std::size_t place_worst_fit(const VmSpec& vm, std::span<const HostState> hosts) {
    return select_host(vm, hosts, [](double cand, double best) { return cand > best; });
}

PlacementState::PlacementState(const PhysicalTopology& pt) {
    for (std::size_t i = 0; i < pt.nodes.size(); ++i) {
        const auto& n = pt.nodes[i];
        if (!n.is_host()) continue;
        HostState hs;
        hs.id = n.id;
        hs.node_index = static_cast<int>(i);
        hs.cores = n.cores;
        hs.mips_per_core = n.mips_per_core;
        hs.nic_bps = pt.nic_capacity_bps(n.id);
        hs.power = n.power;
        hosts_.push_back(std::move(hs));
    }
    std::sort(hosts_.begin(), hosts_.end(),
              [](const HostState& a, const HostState& b) { return a.id < b.id; });
}

HostState& PlacementState::host_by_id(const std::string& id) {
    for (auto& h : hosts_) {
        if (h.id == id) return h;
    }
    throw NotFoundError("unknown host: " + id);
}

const VmSpec& PlacementState::vm_spec(const std::string& vm_id) const {
    auto it = placed_.find(vm_id);
    if (it == placed_.end()) throw NotFoundError("unknown vm: " + vm_id);
    return it->second;
}

int PlacementState::powered_on_count() const {
    return static_cast<int>(
        std::count_if(hosts_.begin(), hosts_.end(), [](const HostState& h) { return h.powered_on; }));
}

std::string PlacementState::place(const VmSpec& vm, PlacementPolicy policy) {
    if (placed_.count(vm.id)) throw ConflictError("vm already placed: " + vm.id);
    const std::size_t idx = policy == PlacementPolicy::BestFit ? place_best_fit(vm, hosts_)
                                                               : place_worst_fit(vm, hosts_);
    HostState& host = hosts_[idx];
    host.allocated_mips += vm.total_mips();
    host.allocated_bw += vm.bandwidth_bps;
    host.resident.insert(vm.id);
    host.powered_on = true;
    vm_to_host_[vm.id] = host.id;
    placed_[vm.id] = vm;
    return host.id;
}

void PlacementState::unplace(const std::string& vm_id) {
    const VmSpec& vm = vm_spec(vm_id);
    HostState& host = host_by_id(vm_to_host_.at(vm_id));
    host.allocated_mips -= vm.total_mips();
    host.allocated_bw -= vm.bandwidth_bps;
    host.resident.erase(vm_id);
    if (host.resident.empty()) {
        host.powered_on = false;
        // Exact zero once empty; releases undo placements bit for bit.
        host.allocated_mips = 0.0;
        host.allocated_bw = 0.0;
    }
    vm_to_host_.erase(vm_id);
    placed_.erase(vm_id);
}

void PlacementState::release(const std::string& vm_id, NetworkState& net) {
    if (!placed_.count(vm_id)) throw NotFoundError("unknown vm: " + vm_id);
    net.remove_channels_of_vm(vm_id);
    unplace(vm_id);
}

Embedding PlacementState::embed(const VirtualTopology& vt, PlacementPolicy policy,
                                NetworkState& net) {
    // Snapshot-and-restore keeps a failed embed bit-identical to the state
    // before the call.
    const std::vector<HostState> hosts_before = hosts_;
    const std::map<std::string, std::string> locations_before = vm_to_host_;
    const std::map<std::string, VmSpec> placed_before = placed_;
    NetworkState::Snapshot net_before = net.snapshot();

    Embedding result;
    try {
        for (const auto& vm : vt.vms) {
            result.vm_to_host[vm.id] = place(vm, policy);
        }
        for (const auto& mb : vt.middleboxes) {
            result.vm_to_host[mb.id] = place(mb.as_vm(), policy);
        }
        for (const auto& vl : vt.vlinks) {
            try {
                result.vlink_to_channel[vl.id] = net.create_channel(vl, result.vm_to_host);
            } catch (const EmbeddingInfeasibleError& e) {
                throw EmbeddingInfeasibleError(e.reason(), "vlink " + vl.id + ": " + e.what());
            }
        }
    } catch (...) {
        hosts_ = hosts_before;
        vm_to_host_ = locations_before;
        placed_ = placed_before;
        net.restore(std::move(net_before));
        throw;
    }
    return result;
}

}  // namespace sdcsim
