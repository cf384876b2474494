#pragma once

#include <map>
#include <string>
#include <vector>

#include "sdcsim/placement.hpp"
#include "sdcsim/topology.hpp"

namespace sdcsim {

/// Linear host power: 0 W when powered off, otherwise
/// p_idle + (p_peak - p_idle) * u with u = allocated_mips / total_mips.
double instantaneous_power_w(const HostState& host);

/// Number of switches whose attached hosts (transitively downward, so a
/// core counts every host below it) are all powered off.
int idle_switch_count(const PhysicalTopology& pt, const std::vector<HostState>& hosts);

/// Per-host accumulated energy and the running maximum of hosts in use.
/// Power is piecewise constant between syncs; callers sync at every event
/// boundary that changes any host's utilization.
class EnergyLedger {
public:
    /// Low-level accrual step: energy += power * dt / 3600.
    void accrue(const std::string& host_id, double power_w, double dt_s);

    /// Accrue every host at its previously recorded power up to time t,
    /// then record current powers and update the hosts-in-use maximum.
    void sync(double t, const std::vector<HostState>& hosts);

    [[nodiscard]] double energy_wh(const std::string& host_id) const;
    [[nodiscard]] double total_wh() const;
    [[nodiscard]] const std::map<std::string, double>& per_host_wh() const { return energy_wh_; }
    [[nodiscard]] int max_hosts_in_use() const { return max_hosts_; }

private:
    struct Tracked {
        double power_w = 0.0;
        double since_s = 0.0;
    };
    std::map<std::string, double> energy_wh_;
    std::map<std::string, Tracked> tracked_;
    int max_hosts_ = 0;
};

}  // namespace sdcsim
