#include <doctest.h>

#include "sdcsim/errors.hpp"
#include "sdcsim/placement.hpp"
#include "sdcsim/rng.hpp"
#include "sdcsim/workload.hpp"

#include "helpers.hpp"

using namespace sdcsim;
using sdcsim::testing::fig3_topology;

namespace {

// The 16 x 4000 MIPS gigabit host of the consolidation experiment.
HostState big_host(const std::string& id = "hA") {
    HostState h;
    h.id = id;
    h.cores = 16;
    h.mips_per_core = 4000.0;
    h.nic_bps = 1e9;
    return h;
}

VmSpec app_server() { return {"vm-app", "app", 3000.0, 8, 1e8}; }
VmSpec firewall() { return {"vm-fw", "firewall", 3000.0, 8, 5e8}; }

void occupy(HostState& h, double cpu_fraction, double bw_fraction) {
    h.allocated_mips = cpu_fraction * h.total_mips();
    h.allocated_bw = bw_fraction * h.nic_bps;
    h.resident.insert("x" + h.id);
    h.powered_on = true;
}

// Replay oracle: at every step scan all hosts, keep the feasible ones and
// pick the extreme idleness with the lexicographic tie-break.
std::size_t oracle_choice(const VmSpec& vm, const std::vector<HostState>& hosts, bool best_fit) {
    std::size_t chosen = hosts.size();
    for (std::size_t i = 0; i < hosts.size(); ++i) {
        const HostState& h = hosts[i];
        if (h.allocated_mips + vm.total_mips() > h.total_mips()) continue;
        if (h.allocated_bw + vm.bandwidth_bps > h.nic_bps) continue;
        if (chosen == hosts.size()) {
            chosen = i;
            continue;
        }
        const double a = idleness(h);
        const double b = idleness(hosts[chosen]);
        const bool wins = best_fit ? a < b : a > b;
        if (wins || (a == b && h.id < hosts[chosen].id)) chosen = i;
    }
    return chosen;
}

}  // namespace

TEST_CASE("normalized demand follows the 2-D definition") {
    PhysNode host{"h0", NodeKind::Host, 16, 4000.0, {}};
    SUBCASE("app server on a gigabit host") {
        const NormalizedDemand d = normalized_demand(app_server(), host, 1e9);
        CHECK(d.cpu_fraction == doctest::Approx(0.375));
        CHECK(d.bw_fraction == doctest::Approx(0.1));
    }
    SUBCASE("firewall is bandwidth heavy") {
        const NormalizedDemand d = normalized_demand(firewall(), host, 1e9);
        CHECK(d.cpu_fraction == doctest::Approx(0.375));
        CHECK(d.bw_fraction == doctest::Approx(0.5));
    }
    SUBCASE("a VM equal to the full host") {
        const VmSpec full{"vm", "full", 4000.0, 16, 1e9};
        const NormalizedDemand d = normalized_demand(full, host, 1e9);
        CHECK(d.cpu_fraction == 1.0);
        CHECK(d.bw_fraction == 1.0);
    }
}

TEST_CASE("idleness is the free 2-D area") {
    HostState h = big_host();
    CHECK(idleness(h) == 1.0);

    occupy(h, 0.375, 0.1);  // resident app server
    CHECK(idleness(h) == doctest::Approx(0.625 * 0.9));

    occupy(h, 1.0, 1.0);
    CHECK(idleness(h) == 0.0);
}

TEST_CASE("best fit takes the most utilized feasible host") {
    std::vector<HostState> hosts{big_host("hA"), big_host("hB")};
    occupy(hosts[0], 0.5, 0.4);  // idleness 0.3
    occupy(hosts[1], 0.2, 0.5);  // idleness 0.4
    const VmSpec vm{"vm", "web", 2000.0, 2, 1e8};
    CHECK(hosts[place_best_fit(vm, hosts)].id == "hA");
    CHECK(hosts[place_worst_fit(vm, hosts)].id == "hB");
}

TEST_CASE("infeasible hosts are filtered before ranking") {
    std::vector<HostState> hosts{big_host("hA"), big_host("hB")};
    occupy(hosts[0], 0.7, 0.1);  // most utilized but lacks CPU for an app server
    const VmSpec vm = app_server();
    CHECK(hosts[place_best_fit(vm, hosts)].id == "hB");
    CHECK(hosts[place_worst_fit(vm, hosts)].id == "hB");
}

TEST_CASE("placement with no feasible host fails") {
    std::vector<HostState> hosts{big_host()};
    occupy(hosts[0], 0.9, 0.9);
    CHECK_THROWS_AS(place_best_fit(app_server(), hosts), PlacementInfeasibleError);
}

TEST_CASE("equal idleness breaks ties toward the smaller host id") {
    std::vector<HostState> hosts{big_host("hB"), big_host("hA")};
    const VmSpec vm{"vm", "web", 2000.0, 2, 1e8};
    CHECK(hosts[place_best_fit(vm, hosts)].id == "hA");
    CHECK(hosts[place_worst_fit(vm, hosts)].id == "hA");
}

TEST_CASE("policy choices equal the replay oracle on random streams") {
    SplitMix64 rng(5);
    const auto& catalog = vm_type_catalog();
    for (int trial = 0; trial < 60; ++trial) {
        const int n_hosts = 2 + static_cast<int>(rng.next_u64() % 5);
        const PlacementPolicy policy =
            rng.next_u64() % 2 ? PlacementPolicy::BestFit : PlacementPolicy::WorstFit;
        const PhysicalTopology pt = build_fat_tree(n_hosts, 2, 1e9, 1e-3);
        PlacementState ps(pt);
        NetworkState net(pt);

        const int n_vms = 1 + static_cast<int>(rng.next_u64() % 12);
        for (int v = 0; v < n_vms; ++v) {
            VmSpec vm = catalog[rng.next_u64() % catalog.size()];
            vm.id = "vm" + std::to_string(trial) + "-" + std::to_string(v);
            const std::size_t expected =
                oracle_choice(vm, ps.hosts(), policy == PlacementPolicy::BestFit);
            CAPTURE(trial);
            CAPTURE(v);
            if (expected == ps.hosts().size()) {
                CHECK_THROWS_AS(ps.place(vm, policy), PlacementInfeasibleError);
            } else {
                CHECK(ps.place(vm, policy) == ps.hosts()[expected].id);
            }
            // Interleave releases to exercise churn.
            if (rng.next_u64() % 4 == 0 && !ps.vm_locations().empty()) {
                ps.release(ps.vm_locations().begin()->first, net);
            }
        }
        for (const auto& h : ps.hosts()) {
            CHECK(h.allocated_mips <= h.total_mips());
            CHECK(h.allocated_bw <= h.nic_bps);
            CHECK(h.powered_on == !h.resident.empty());
        }
    }
}

TEST_CASE("a three-tier application lands on three distinct hosts") {
    // Each VM is sized to a full host, so every host takes exactly one.
    VirtualTopology vt;
    for (const char* name : {"web", "app", "db"}) {
        vt.vms.push_back({name, name, 4000.0, 16, 1e9});
    }
    vt.vlinks.push_back({"front", "web", "app", 1e6, std::nullopt, ChannelClass::Standard});
    vt.vlinks.push_back({"back", "app", "db", 1e6, std::nullopt, ChannelClass::Standard});

    const PhysicalTopology pt = fig3_topology();
    PlacementState ps(pt);
    NetworkState net(pt);
    const Embedding emb = ps.embed(vt, PlacementPolicy::BestFit, net);
    CHECK(emb.vm_to_host.at("web") == "h0");
    CHECK(emb.vm_to_host.at("app") == "h1");
    CHECK(emb.vm_to_host.at("db") == "h2");
    CHECK(emb.vlink_to_channel.size() == 2);
}

TEST_CASE("failed embedding rolls state back bit for bit") {
    const PhysicalTopology pt = build_fat_tree(1, 1, 1e9, 1e-3, HostProfile{16, 4000.0, {}});
    PlacementState ps(pt);
    NetworkState net(pt);
    const std::vector<HostState> before_hosts = ps.hosts();
    const std::vector<LinkState> before_links = net.link_states();

    VirtualTopology vt;
    vt.vms.push_back({"a", "full", 4000.0, 16, 1e9});
    vt.vms.push_back({"b", "full", 4000.0, 16, 1e9});  // no room for the second
    CHECK_THROWS_AS(ps.embed(vt, PlacementPolicy::BestFit, net), PlacementInfeasibleError);
    CHECK(ps.hosts() == before_hosts);
    CHECK(net.link_states() == before_links);
    CHECK(ps.vm_locations().empty());

    // Same rollback when the vlink embedding is what fails: the two VMs
    // land on distinct hosts and the reservation exceeds link capacity.
    const PhysicalTopology pt2 = build_fat_tree(2, 2, 1e9, 1e-3, HostProfile{16, 4000.0, {}});
    PlacementState ps2(pt2);
    NetworkState net2(pt2);
    const std::vector<HostState> before_hosts2 = ps2.hosts();
    const std::vector<LinkState> before_links2 = net2.link_states();
    VirtualTopology vt2;
    vt2.vms.push_back({"a", "full", 4000.0, 16, 1e9});
    vt2.vms.push_back({"b", "full", 4000.0, 16, 1e9});
    vt2.vlinks.push_back({"l", "a", "b", 2e9, std::nullopt, ChannelClass::Priority});
    CHECK_THROWS_AS(ps2.embed(vt2, PlacementPolicy::BestFit, net2), EmbeddingInfeasibleError);
    CHECK(ps2.hosts() == before_hosts2);
    CHECK(net2.link_states() == before_links2);
    CHECK(ps2.vm_locations().empty());
}

TEST_CASE("release restores idleness and powers empty hosts off") {
    const PhysicalTopology pt = build_fat_tree(2, 2, 1e9, 1e-3);
    PlacementState ps(pt);
    NetworkState net(pt);
    const std::vector<HostState> before = ps.hosts();

    VmSpec vm = app_server();
    const std::string host = ps.place(vm, PlacementPolicy::BestFit);
    CHECK(host == "h0");
    CHECK(ps.hosts()[0].powered_on);
    CHECK(idleness(ps.hosts()[0]) < 1.0);

    ps.release(vm.id, net);
    CHECK(ps.hosts() == before);
    CHECK_FALSE(ps.hosts()[0].powered_on);
    CHECK_THROWS_AS(ps.release(vm.id, net), NotFoundError);
}

TEST_CASE("releasing a vm removes the channels that touch it") {
    const PhysicalTopology pt = build_fat_tree(3, 2, 1e9, 1e-3, HostProfile{16, 4000.0, {}});
    PlacementState ps(pt);
    NetworkState net(pt);
    VirtualTopology vt;
    vt.vms.push_back({"a", "t", 2000.0, 2, 1e8});
    vt.vms.push_back({"b", "t", 2000.0, 2, 1e8});
    vt.vlinks.push_back({"l", "a", "b", 1e8, std::nullopt, ChannelClass::Priority});
    ps.embed(vt, PlacementPolicy::WorstFit, net);
    CHECK(net.has_channel("l"));
    ps.release("a", net);
    CHECK_FALSE(net.has_channel("l"));
    for (const auto& ls : net.link_states()) CHECK(ls.reserved_bps == 0.0);
}
