#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sdcsim {

enum class NodeKind { Host, EdgeSwitch, AggregationSwitch, CoreSwitch };

[[nodiscard]] std::string to_string(NodeKind kind);

/// Linear power model parameters for a host.
struct PowerParams {
    double p_idle_w = 100.0;
    double p_peak_w = 250.0;

    bool operator==(const PowerParams&) const = default;
};

/// A physical node: either a host (with compute capacity) or a switch.
struct PhysNode {
    std::string id;
    NodeKind kind = NodeKind::Host;
    int cores = 0;              // hosts only
    double mips_per_core = 0.0; // hosts only
    PowerParams power;          // hosts only

    [[nodiscard]] bool is_host() const { return kind == NodeKind::Host; }
    [[nodiscard]] double total_mips() const { return cores * mips_per_core; }

    bool operator==(const PhysNode&) const = default;
};

/// Undirected capacity/latency-annotated link between two nodes.
struct Link {
    std::string a;
    std::string b;
    double capacity_bps = 0.0;
    double latency_s = 0.0;

    bool operator==(const Link&) const = default;
};

struct PhysicalTopology {
    std::vector<PhysNode> nodes;
    std::vector<Link> links;

    [[nodiscard]] const PhysNode* find_node(const std::string& id) const;
    [[nodiscard]] int node_index(const std::string& id) const;   // -1 when absent
    [[nodiscard]] std::vector<int> links_touching(const std::string& id) const;
    [[nodiscard]] int host_count() const;

    /// Capacity of the (single) link attaching a host; the host NIC.
    [[nodiscard]] double nic_capacity_bps(const std::string& host_id) const;

    bool operator==(const PhysicalTopology&) const = default;
};

/// Mutation a middlebox applies to a traversing packet descriptor.
struct RequestTransform {
    std::optional<std::string> set_dst;
    std::optional<double> size_factor;

    bool operator==(const RequestTransform&) const = default;
};

struct VmSpec {
    std::string id;
    std::string type_name;
    double mips_per_core = 0.0;
    int cores = 0;
    double bandwidth_bps = 0.0;

    [[nodiscard]] double total_mips() const { return cores * mips_per_core; }

    bool operator==(const VmSpec&) const = default;
};

struct MiddleboxSpec {
    std::string id;
    std::string type_name;
    double mips_per_core = 0.0;
    int cores = 0;
    double bandwidth_bps = 0.0;
    RequestTransform transform;

    [[nodiscard]] VmSpec as_vm() const { return {id, type_name, mips_per_core, cores, bandwidth_bps}; }

    bool operator==(const MiddleboxSpec&) const = default;
};

enum class ChannelClass { Standard, Priority };

[[nodiscard]] std::string to_string(ChannelClass cls);

struct VLinkSpec {
    std::string id;
    std::string src;
    std::string dst;
    double bandwidth_bps = 0.0;
    std::optional<double> max_latency_s;
    ChannelClass channel_class = ChannelClass::Standard;

    bool operator==(const VLinkSpec&) const = default;
};

struct VirtualTopology {
    std::vector<VmSpec> vms;
    std::vector<MiddleboxSpec> middleboxes;
    std::vector<VLinkSpec> vlinks;

    [[nodiscard]] bool declares(const std::string& id) const;

    bool operator==(const VirtualTopology&) const = default;
};

/// One invariant violation. Violations are data, not errors.
struct ValidationIssue {
    std::string rule;     // stable identifier, e.g. "unreachable"
    std::string message;  // human form, e.g. "unreachable: h2"
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    [[nodiscard]] bool ok() const { return issues.empty(); }
    [[nodiscard]] std::string joined() const;
};

/// Compute profile given to hosts generated by build_fat_tree.
struct HostProfile {
    int cores = 16;
    double mips_per_core = 4000.0;
    PowerParams power;
};

/// Canonical two-level fat-tree: ceil(n_hosts / hosts_per_edge) edge
/// switches, one core switch, every link sharing the given capacity and
/// latency. Node ids are "h<i>", "e<i>", "c0", zero-based left to right.
PhysicalTopology build_fat_tree(int n_hosts, int hosts_per_edge,
                                double link_capacity_bps, double link_latency_s,
                                const HostProfile& hosts = {});

ValidationReport validate(const PhysicalTopology& pt);
ValidationReport validate(const VirtualTopology& vt);

/// Parse and validate the external JSON formats. Throws FormatError on
/// syntax/schema problems and ValidationError when invariants fail.
PhysicalTopology load_physical(const std::string& json_text);
VirtualTopology load_virtual(const std::string& json_text);

std::string serialize(const PhysicalTopology& pt);
std::string serialize(const VirtualTopology& vt);

}  // namespace sdcsim
