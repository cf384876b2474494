#include "sdcsim/power.hpp"

#include <deque>
#include <set>

#include "sdcsim/errors.hpp"

namespace sdcsim {

double instantaneous_power_w(const HostState& host) {
    if (!host.powered_on) return 0.0;
    const double u = host.allocated_mips / host.total_mips();
    return host.power.p_idle_w + (host.power.p_peak_w - host.power.p_idle_w) * u;
}

namespace {

int kind_rank(NodeKind kind) {
    switch (kind) {
        case NodeKind::Host: return 0;
        case NodeKind::EdgeSwitch: return 1;
        case NodeKind::AggregationSwitch: return 2;
        case NodeKind::CoreSwitch: return 3;
    }
    return 0;
}

}  // namespace

int idle_switch_count(const PhysicalTopology& pt, const std::vector<HostState>& hosts) {
    std::set<std::string> powered;
    for (const auto& h : hosts) {
        if (h.powered_on) powered.insert(h.id);
    }

    int idle = 0;
    for (const auto& sw : pt.nodes) {
        if (sw.is_host()) continue;
        // Walk strictly downward in the tier order so an edge switch sees
        // only its own leaves while a core switch sees every host under it.
        bool any_powered = false;
        std::set<std::string> seen{sw.id};
        std::deque<const PhysNode*> frontier{&sw};
        while (!frontier.empty() && !any_powered) {
            const PhysNode* cur = frontier.front();
            frontier.pop_front();
            for (const int li : pt.links_touching(cur->id)) {
                const auto& l = pt.links[li];
                const std::string& peer_id = (l.a == cur->id) ? l.b : l.a;
                const PhysNode* peer = pt.find_node(peer_id);
                if (!peer || kind_rank(peer->kind) >= kind_rank(cur->kind)) continue;
                if (peer->is_host()) {
                    if (powered.count(peer->id)) {
                        any_powered = true;
                        break;
                    }
                } else if (seen.insert(peer->id).second) {
                    frontier.push_back(peer);
                }
            }
        }
        if (!any_powered) ++idle;
    }
    return idle;
}

void EnergyLedger::accrue(const std::string& host_id, double power_w, double dt_s) {
    if (dt_s < 0) throw InternalInconsistencyError("energy accrual over negative dt");
    energy_wh_[host_id] += power_w * dt_s / 3600.0;
}

void EnergyLedger::sync(double t, const std::vector<HostState>& hosts) {
    int powered = 0;
    for (const auto& h : hosts) {
        Tracked& tr = tracked_[h.id];
        accrue(h.id, tr.power_w, t - tr.since_s);
        tr.power_w = instantaneous_power_w(h);
        tr.since_s = t;
        if (h.powered_on) ++powered;
    }
    max_hosts_ = std::max(max_hosts_, powered);
}

double EnergyLedger::energy_wh(const std::string& host_id) const {
    auto it = energy_wh_.find(host_id);
    return it == energy_wh_.end() ? 0.0 : it->second;
}

double EnergyLedger::total_wh() const {
    double total = 0.0;
    for (const auto& [id, wh] : energy_wh_) total += wh;
    return total;
}

}  // namespace sdcsim
