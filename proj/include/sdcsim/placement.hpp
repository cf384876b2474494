#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sdcsim/netos.hpp"
#include "sdcsim/topology.hpp"

namespace sdcsim {

enum class PlacementPolicy { BestFit, WorstFit };

/// Mutable per-host allocation state. The host NIC capacity is the capacity
/// of its edge link.
struct HostState {
    std::string id;
    int node_index = -1;
    int cores = 0;
    double mips_per_core = 0.0;
    double nic_bps = 0.0;
    PowerParams power;

    double allocated_mips = 0.0;
    double allocated_bw = 0.0;
    std::set<std::string> resident;
    bool powered_on = false;

    [[nodiscard]] double total_mips() const { return cores * mips_per_core; }

    bool operator==(const HostState&) const = default;
};

struct NormalizedDemand {
    double cpu_fraction = 0.0;
    double bw_fraction = 0.0;
};

/// 2-D normalized requirements: CPU as (cores x mips) over the host's, and
/// bandwidth over the host NIC capacity.
NormalizedDemand normalized_demand(const VmSpec& vm, const PhysNode& host, double nic_capacity_bps);
NormalizedDemand normalized_demand(const VmSpec& vm, const HostState& host);

/// Available area of the 2-D resource space: free CPU fraction times free
/// bandwidth fraction. 1.0 for an empty host, 0.0 for a full one.
double idleness(const HostState& host);

/// Best fit: the most utilized feasible host (argmin idleness); worst fit:
/// the least loaded (argmax). Ties break toward the lexicographically
/// smallest host id. Returns an index into hosts.
/// Throws PlacementInfeasibleError when no host can take the VM.
std::size_t place_best_fit(const VmSpec& vm, std::span<const HostState> hosts);
std::size_t place_worst_fit(const VmSpec& vm, std::span<const HostState> hosts);

/// Realized mapping of a virtual topology.
struct Embedding {
    std::map<std::string, std::string> vm_to_host;
    std::map<std::string, std::string> vlink_to_channel;
};

/// The Planner / Computing Manager: drives VM packing and link embedding
/// over one physical topology.
class PlacementState {
public:
    explicit PlacementState(const PhysicalTopology& pt);

    [[nodiscard]] const std::vector<HostState>& hosts() const { return hosts_; }
    [[nodiscard]] const std::map<std::string, std::string>& vm_locations() const { return vm_to_host_; }
    [[nodiscard]] bool is_resident(const std::string& vm_id) const { return placed_.count(vm_id) != 0; }
    [[nodiscard]] const VmSpec& vm_spec(const std::string& vm_id) const;
    [[nodiscard]] int powered_on_count() const;

    /// Place one VM under the policy. Returns the chosen host id.
    std::string place(const VmSpec& vm, PlacementPolicy policy);

    /// Return a VM's allocations, remove its channels, and power the host
    /// off when it empties.
    void release(const std::string& vm_id, NetworkState& net);

    /// Place all VMs and middleboxes in declaration order, then embed every
    /// vlink. Atomic: on any failure all partial allocations are rolled back
    /// and the failing element is named in the error.
    Embedding embed(const VirtualTopology& vt, PlacementPolicy policy, NetworkState& net);

private:
    HostState& host_by_id(const std::string& id);
    void unplace(const std::string& vm_id);

    std::vector<HostState> hosts_;  // sorted by id
    std::map<std::string, std::string> vm_to_host_;
    std::map<std::string, VmSpec> placed_;
};

}  // namespace sdcsim
