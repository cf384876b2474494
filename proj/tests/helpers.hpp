#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sdcsim/netos.hpp"
#include "sdcsim/topology.hpp"

namespace sdcsim::testing {

/// The three-host, two-edge, one-core evaluation topology.
inline PhysicalTopology fig3_topology(double capacity_bps = 1e9, double latency_s = 1e-3) {
    return build_fat_tree(3, 2, capacity_bps, latency_s);
}

/// Exhaustive constrained-path oracle: enumerate every simple path, filter
/// by residual bandwidth and latency, pick minimum hops with lexicographic
/// node-sequence tie-break. Returns the node sequence (src included), or
/// nothing when infeasible. Independent of the production search.
inline std::optional<std::vector<std::string>> oracle_path(
    const PhysicalTopology& pt, const std::vector<LinkState>& states, const std::string& src,
    const std::string& dst, double required_bw,
    std::optional<double> max_latency = std::nullopt) {
    std::vector<std::vector<std::string>> feasible;

    std::vector<std::string> current{src};
    std::set<std::string> visited{src};
    double latency = 0.0;

    std::function<void()> walk = [&]() {
        const std::string here = current.back();  // copy: current reallocates below
        if (here == dst) {
            feasible.push_back(current);
            return;
        }
        for (std::size_t li = 0; li < pt.links.size(); ++li) {
            const Link& l = pt.links[li];
            std::string next;
            if (l.a == here) {
                next = l.b;
            } else if (l.b == here) {
                next = l.a;
            } else {
                continue;
            }
            if (visited.count(next)) continue;
            if (pt.links[li].capacity_bps - states[li].reserved_bps < required_bw) continue;
            if (max_latency && latency + l.latency_s > *max_latency) continue;
            visited.insert(next);
            current.push_back(next);
            latency += l.latency_s;
            walk();
            latency -= l.latency_s;
            current.pop_back();
            visited.erase(next);
        }
    };
    walk();

    if (feasible.empty()) return std::nullopt;
    return *std::min_element(feasible.begin(), feasible.end(),
                             [](const auto& a, const auto& b) {
                                 if (a.size() != b.size()) return a.size() < b.size();
                                 return a < b;
                             });
}

inline std::vector<std::string> node_sequence(const std::string& src, const Path& path) {
    std::vector<std::string> nodes{src};
    for (const auto& hop : path) nodes.push_back(hop.to);
    return nodes;
}

}  // namespace sdcsim::testing
