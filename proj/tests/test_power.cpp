#include <doctest.h>

#include "sdcsim/errors.hpp"
#include "sdcsim/power.hpp"

#include "helpers.hpp"

using namespace sdcsim;
using sdcsim::testing::fig3_topology;

namespace {

HostState host_at(double utilization, bool on = true) {
    HostState h;
    h.id = "h0";
    h.cores = 16;
    h.mips_per_core = 4000.0;
    h.nic_bps = 1e9;
    h.power = {100.0, 250.0};
    h.allocated_mips = utilization * h.total_mips();
    h.powered_on = on;
    if (on) h.resident.insert("vm");
    return h;
}

std::vector<HostState> fig3_hosts(std::initializer_list<bool> powered) {
    std::vector<HostState> hosts;
    int i = 0;
    for (const bool on : powered) {
        HostState h = host_at(on ? 0.5 : 0.0, on);
        h.id = "h" + std::to_string(i++);
        if (!on) h.resident.clear();
        hosts.push_back(std::move(h));
    }
    return hosts;
}

}  // namespace

TEST_CASE("linear power model endpoints") {
    CHECK(instantaneous_power_w(host_at(0.3, false)) == 0.0);
    CHECK(instantaneous_power_w(host_at(0.0)) == 100.0);
    CHECK(instantaneous_power_w(host_at(1.0)) == 250.0);
    CHECK(instantaneous_power_w(host_at(0.5)) == doctest::Approx(175.0));
}

TEST_CASE("power is affine in utilization") {
    const double p25 = instantaneous_power_w(host_at(0.25));
    const double p50 = instantaneous_power_w(host_at(0.5));
    const double p75 = instantaneous_power_w(host_at(0.75));
    CHECK(p50 - p25 == doctest::Approx(p75 - p50).epsilon(1e-12));
}

TEST_CASE("accrue converts watt-seconds to watt-hours") {
    EnergyLedger ledger;
    ledger.accrue("h0", 250.0, 7200.0);
    CHECK(ledger.energy_wh("h0") == doctest::Approx(500.0));
    ledger.accrue("h0", 99.0, 0.0);
    CHECK(ledger.energy_wh("h0") == doctest::Approx(500.0));
    CHECK_THROWS_AS(ledger.accrue("h0", 100.0, -1.0), InternalInconsistencyError);
}

TEST_CASE("piecewise schedule matches the closed-form integral") {
    // Full power for 10 s, then off: 250 * 10 / 3600 Wh.
    EnergyLedger ledger;
    std::vector<HostState> hosts{host_at(1.0)};
    ledger.sync(0.0, hosts);
    ledger.sync(10.0, hosts);
    hosts[0].powered_on = false;
    hosts[0].resident.clear();
    hosts[0].allocated_mips = 0.0;
    ledger.sync(10.0, hosts);
    ledger.sync(20.0, hosts);
    const double expected = 250.0 * 10.0 / 3600.0;
    CHECK(ledger.energy_wh("h0") == doctest::Approx(expected).epsilon(1e-9));
    CHECK(ledger.total_wh() == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("energy is additive over any partition of the horizon") {
    std::vector<HostState> hosts{host_at(0.42)};
    EnergyLedger coarse;
    coarse.sync(0.0, hosts);
    coarse.sync(100.0, hosts);

    EnergyLedger fine;
    for (int i = 0; i <= 100; ++i) fine.sync(static_cast<double>(i), hosts);
    CHECK(fine.energy_wh("h0") == doctest::Approx(coarse.energy_wh("h0")).epsilon(1e-12));
}

TEST_CASE("an off host contributes exactly zero energy") {
    EnergyLedger ledger;
    std::vector<HostState> hosts{host_at(0.0, false)};
    ledger.sync(0.0, hosts);
    ledger.sync(1000.0, hosts);
    CHECK(ledger.energy_wh("h0") == 0.0);
}

TEST_CASE("max hosts in use tracks the running maximum") {
    EnergyLedger ledger;
    std::vector<HostState> hosts = fig3_hosts({false, false, false});
    ledger.sync(0.0, hosts);
    CHECK(ledger.max_hosts_in_use() == 0);

    hosts = fig3_hosts({true, false, false});
    ledger.sync(1.0, hosts);
    hosts = fig3_hosts({false, false, false});
    ledger.sync(2.0, hosts);
    CHECK(ledger.max_hosts_in_use() == 1);

    hosts = fig3_hosts({true, true, true});
    ledger.sync(3.0, hosts);
    hosts = fig3_hosts({false, true, false});
    ledger.sync(4.0, hosts);
    CHECK(ledger.max_hosts_in_use() == 3);
}

TEST_CASE("idle switch count walks attachment downward") {
    const PhysicalTopology pt = fig3_topology();
    SUBCASE("all hosts off idles every switch") {
        CHECK(idle_switch_count(pt, fig3_hosts({false, false, false})) == 3);
    }
    SUBCASE("all hosts on idles none") {
        CHECK(idle_switch_count(pt, fig3_hosts({true, true, true})) == 0);
    }
    SUBCASE("only the edge above an off host idles") {
        // h2 is alone under e1; the core still serves h0/h1.
        CHECK(idle_switch_count(pt, fig3_hosts({true, true, false})) == 1);
    }
}
