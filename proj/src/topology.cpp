#include "sdcsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include "sdcsim/errors.hpp"

#include <json.hpp>

namespace sdcsim {

using ordered_json = nlohmann::ordered_json;

std::string to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::Host: return "host";
        case NodeKind::EdgeSwitch: return "edge";
        case NodeKind::AggregationSwitch: return "aggregation";
        case NodeKind::CoreSwitch: return "core";
    }
    return "?";
}

std::string to_string(ChannelClass cls) {
    return cls == ChannelClass::Priority ? "priority" : "standard";
}

const PhysNode* PhysicalTopology::find_node(const std::string& id) const {
    for (const auto& n : nodes) {
        if (n.id == id) return &n;
    }
    return nullptr;
}

int PhysicalTopology::node_index(const std::string& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

std::vector<int> PhysicalTopology::links_touching(const std::string& id) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < links.size(); ++i) {
        if (links[i].a == id || links[i].b == id) out.push_back(static_cast<int>(i));
    }
    return out;
}

int PhysicalTopology::host_count() const {
    return static_cast<int>(std::count_if(nodes.begin(), nodes.end(),
                                          [](const PhysNode& n) { return n.is_host(); }));
}

double PhysicalTopology::nic_capacity_bps(const std::string& host_id) const {
    for (const auto& l : links) {
        if (l.a == host_id || l.b == host_id) return l.capacity_bps;
    }
    return 0.0;
}

bool VirtualTopology::declares(const std::string& id) const {
    for (const auto& v : vms) {
        if (v.id == id) return true;
    }
    for (const auto& m : middleboxes) {
        if (m.id == id) return true;
    }
    return false;
}

std::string ValidationReport::joined() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < issues.size(); ++i) {
        if (i) out << "; ";
        out << issues[i].message;
    }
    return out.str();
}

PhysicalTopology build_fat_tree(int n_hosts, int hosts_per_edge,
                                double link_capacity_bps, double link_latency_s,
                                const HostProfile& hosts) {
    if (n_hosts < 1) throw InvalidArgumentError("build_fat_tree: n_hosts must be >= 1");
    if (hosts_per_edge < 1) throw InvalidArgumentError("build_fat_tree: hosts_per_edge must be >= 1");
    if (!(link_capacity_bps > 0)) throw InvalidArgumentError("build_fat_tree: link capacity must be > 0");
    if (link_latency_s < 0) throw InvalidArgumentError("build_fat_tree: link latency must be >= 0");
    if (hosts.cores < 1 || !(hosts.mips_per_core > 0))
        throw InvalidArgumentError("build_fat_tree: invalid host profile");

    const int n_edges = (n_hosts + hosts_per_edge - 1) / hosts_per_edge;

    PhysicalTopology pt;
    for (int i = 0; i < n_hosts; ++i) {
        PhysNode h;
        h.id = "h" + std::to_string(i);
        h.kind = NodeKind::Host;
        h.cores = hosts.cores;
        h.mips_per_core = hosts.mips_per_core;
        h.power = hosts.power;
        pt.nodes.push_back(std::move(h));
    }
    for (int i = 0; i < n_edges; ++i) {
        pt.nodes.push_back({"e" + std::to_string(i), NodeKind::EdgeSwitch, 0, 0.0, {}});
    }
    pt.nodes.push_back({"c0", NodeKind::CoreSwitch, 0, 0.0, {}});

    for (int i = 0; i < n_hosts; ++i) {
        pt.links.push_back({"h" + std::to_string(i), "e" + std::to_string(i / hosts_per_edge),
                            link_capacity_bps, link_latency_s});
    }
    for (int i = 0; i < n_edges; ++i) {
        pt.links.push_back({"e" + std::to_string(i), "c0", link_capacity_bps, link_latency_s});
    }
    return pt;
}

namespace {

bool finite(double v) { return std::isfinite(v); }

void check_connectivity(const PhysicalTopology& pt, ValidationReport& report) {
    if (pt.nodes.empty()) return;
    std::map<std::string, std::vector<std::string>> adjacency;
    for (const auto& l : pt.links) {
        adjacency[l.a].push_back(l.b);
        adjacency[l.b].push_back(l.a);
    }
    std::set<std::string> seen;
    std::deque<std::string> frontier{pt.nodes.front().id};
    seen.insert(pt.nodes.front().id);
    while (!frontier.empty()) {
        const std::string cur = frontier.front();
        frontier.pop_front();
        for (const auto& next : adjacency[cur]) {
            if (seen.insert(next).second) frontier.push_back(next);
        }
    }
    for (const auto& n : pt.nodes) {
        if (!seen.count(n.id)) {
            report.issues.push_back({"unreachable", "unreachable: " + n.id});
        }
    }
}

}  // namespace

ValidationReport validate(const PhysicalTopology& pt) {
    ValidationReport report;

    std::set<std::string> ids;
    for (const auto& n : pt.nodes) {
        if (!ids.insert(n.id).second) {
            report.issues.push_back({"duplicate-id", "duplicate id: " + n.id});
        }
        if (n.is_host()) {
            if (n.cores < 1 || !(n.mips_per_core > 0)) {
                report.issues.push_back(
                    {"host-compute", "host " + n.id + " must have cores >= 1 and mips_per_core > 0"});
            }
            if (!(n.power.p_idle_w >= 0) || !(n.power.p_peak_w >= n.power.p_idle_w)) {
                report.issues.push_back(
                    {"power-params", "host " + n.id + " requires 0 <= p_idle_w <= p_peak_w"});
            }
        } else if (n.cores != 0 || n.mips_per_core != 0.0) {
            report.issues.push_back(
                {"switch-compute", "switch " + n.id + " must not carry compute fields"});
        }
    }

    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& l : pt.links) {
        for (const auto& end : {l.a, l.b}) {
            if (!ids.count(end)) {
                report.issues.push_back({"unknown-endpoint", "unknown endpoint " + end});
            }
        }
        if (!(l.capacity_bps > 0)) {
            report.issues.push_back(
                {"link-capacity", "link " + l.a + "-" + l.b + " capacity must be > 0"});
        }
        if (l.latency_s < 0) {
            report.issues.push_back(
                {"link-latency", "link " + l.a + "-" + l.b + " latency must be >= 0"});
        }
        auto key = std::minmax(l.a, l.b);
        if (!pairs.insert(key).second) {
            report.issues.push_back({"duplicate-link", "duplicate link " + l.a + "-" + l.b});
        }
        if (l.a == l.b) {
            report.issues.push_back({"self-link", "self link at " + l.a});
        }
    }

    // Hosts attach to exactly one edge switch and to nothing else.
    for (const auto& n : pt.nodes) {
        if (!n.is_host()) continue;
        int edge_links = 0;
        int other_links = 0;
        for (const int li : pt.links_touching(n.id)) {
            const auto& l = pt.links[li];
            const std::string& peer = (l.a == n.id) ? l.b : l.a;
            const PhysNode* peer_node = pt.find_node(peer);
            if (peer_node && peer_node->kind == NodeKind::EdgeSwitch) {
                ++edge_links;
            } else {
                ++other_links;
            }
        }
        if (edge_links != 1 || other_links != 0) {
            report.issues.push_back(
                {"host-attachment", "host " + n.id + " must attach to exactly one edge switch"});
        }
    }

    check_connectivity(pt, report);
    return report;
}

ValidationReport validate(const VirtualTopology& vt) {
    ValidationReport report;

    std::set<std::string> ids;
    auto claim = [&](const std::string& id) {
        if (!ids.insert(id).second) {
            report.issues.push_back({"duplicate-id", "duplicate id: " + id});
        }
    };

    for (const auto& v : vt.vms) {
        claim(v.id);
        if (v.cores < 1 || !(v.mips_per_core > 0) || !(v.bandwidth_bps > 0)) {
            report.issues.push_back({"vm-spec", "vm " + v.id + " numeric fields must be > 0"});
        }
    }
    for (const auto& m : vt.middleboxes) {
        claim(m.id);
        if (m.cores < 1 || !(m.mips_per_core > 0) || !(m.bandwidth_bps > 0)) {
            report.issues.push_back({"vm-spec", "middlebox " + m.id + " numeric fields must be > 0"});
        }
        if (m.transform.size_factor && !(*m.transform.size_factor > 0)) {
            report.issues.push_back(
                {"transform", "middlebox " + m.id + " size_factor must be > 0"});
        }
        if (m.transform.set_dst && !vt.declares(*m.transform.set_dst)) {
            report.issues.push_back(
                {"transform", "middlebox " + m.id + " set_dst references unknown id " +
                                  *m.transform.set_dst});
        }
    }
    for (const auto& vl : vt.vlinks) {
        claim(vl.id);
        if (!(vl.bandwidth_bps > 0)) {
            report.issues.push_back({"vlink-bandwidth", "vlink " + vl.id + " bandwidth must be > 0"});
        }
        if (vl.max_latency_s && !(*vl.max_latency_s > 0)) {
            report.issues.push_back({"vlink-latency", "vlink " + vl.id + " max latency must be > 0"});
        }
        for (const auto& end : {vl.src, vl.dst}) {
            if (!vt.declares(end)) {
                report.issues.push_back({"unknown-endpoint", "unknown endpoint " + end});
            }
        }
    }
    return report;
}

namespace {

[[noreturn]] void unknown_field(const std::string& where, const std::string& key) {
    throw FormatError("unknown field '" + key + "' in " + where);
}

void expect_keys(const ordered_json& obj, const std::string& where,
                 const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) unknown_field(where, it.key());
    }
}

double get_number(const ordered_json& obj, const std::string& where, const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw FormatError(where + "." + key + " must be a number");
    const double d = v.get<double>();
    if (!finite(d)) throw FormatError(where + "." + key + " must be finite");
    return d;
}

int get_int(const ordered_json& obj, const std::string& where, const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw FormatError(where + "." + key + " must be an integer");
    return v.get<int>();
}

std::string get_string(const ordered_json& obj, const std::string& where, const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_string()) throw FormatError(where + "." + key + " must be a string");
    return v.get<std::string>();
}

void require(const ordered_json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) throw FormatError(where + " is missing required field '" + key + "'");
}

ordered_json parse_document(const std::string& text) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("parse failure: ") + e.what());
    }
}

NodeKind parse_kind(const std::string& where, const std::string& kind) {
    if (kind == "host") return NodeKind::Host;
    if (kind == "edge") return NodeKind::EdgeSwitch;
    if (kind == "aggregation") return NodeKind::AggregationSwitch;
    if (kind == "core") return NodeKind::CoreSwitch;
    throw FormatError(where + ".kind must be one of host|edge|aggregation|core, got '" + kind + "'");
}

void check_valid(const ValidationReport& report) {
    if (!report.ok()) throw ValidationError(report.joined());
}

VmSpec parse_vm_fields(const ordered_json& obj, const std::string& where) {
    for (const char* key : {"id", "type", "mips_per_core", "cores", "bandwidth_bps"}) {
        require(obj, where, key);
    }
    VmSpec vm;
    vm.id = get_string(obj, where, "id");
    vm.type_name = get_string(obj, where, "type");
    vm.mips_per_core = get_number(obj, where, "mips_per_core");
    vm.cores = get_int(obj, where, "cores");
    vm.bandwidth_bps = get_number(obj, where, "bandwidth_bps");
    return vm;
}

}  // namespace

PhysicalTopology load_physical(const std::string& json_text) {
    const ordered_json doc = parse_document(json_text);
    if (!doc.is_object()) throw FormatError("document root must be an object");
    expect_keys(doc, "document", {"nodes", "links"});

    PhysicalTopology pt;
    std::size_t index = 0;
    for (const auto& item : doc.value("nodes", ordered_json::array())) {
        const std::string where = "nodes[" + std::to_string(index++) + "]";
        if (!item.is_object()) throw FormatError(where + " must be an object");
        expect_keys(item, where, {"id", "kind", "cores", "mips_per_core", "p_idle_w", "p_peak_w"});
        require(item, where, "id");
        require(item, where, "kind");

        PhysNode node;
        node.id = get_string(item, where, "id");
        node.kind = parse_kind(where, get_string(item, where, "kind"));
        if (item.contains("cores")) node.cores = get_int(item, where, "cores");
        if (item.contains("mips_per_core")) node.mips_per_core = get_number(item, where, "mips_per_core");
        if (item.contains("p_idle_w")) node.power.p_idle_w = get_number(item, where, "p_idle_w");
        if (item.contains("p_peak_w")) node.power.p_peak_w = get_number(item, where, "p_peak_w");
        pt.nodes.push_back(std::move(node));
    }

    index = 0;
    for (const auto& item : doc.value("links", ordered_json::array())) {
        const std::string where = "links[" + std::to_string(index++) + "]";
        if (!item.is_object()) throw FormatError(where + " must be an object");
        expect_keys(item, where, {"a", "b", "capacity_bps", "latency_s"});
        for (const char* key : {"a", "b", "capacity_bps", "latency_s"}) require(item, where, key);

        Link link;
        link.a = get_string(item, where, "a");
        link.b = get_string(item, where, "b");
        link.capacity_bps = get_number(item, where, "capacity_bps");
        link.latency_s = get_number(item, where, "latency_s");
        pt.links.push_back(std::move(link));
    }

    check_valid(validate(pt));
    return pt;
}

VirtualTopology load_virtual(const std::string& json_text) {
    const ordered_json doc = parse_document(json_text);
    if (!doc.is_object()) throw FormatError("document root must be an object");
    expect_keys(doc, "document", {"vms", "middleboxes", "vlinks"});

    VirtualTopology vt;
    std::size_t index = 0;
    for (const auto& item : doc.value("vms", ordered_json::array())) {
        const std::string where = "vms[" + std::to_string(index++) + "]";
        if (!item.is_object()) throw FormatError(where + " must be an object");
        expect_keys(item, where, {"id", "type", "mips_per_core", "cores", "bandwidth_bps"});
        vt.vms.push_back(parse_vm_fields(item, where));
    }

    index = 0;
    for (const auto& item : doc.value("middleboxes", ordered_json::array())) {
        const std::string where = "middleboxes[" + std::to_string(index++) + "]";
        if (!item.is_object()) throw FormatError(where + " must be an object");
        expect_keys(item, where,
                    {"id", "type", "mips_per_core", "cores", "bandwidth_bps", "transform"});
        const VmSpec vm = parse_vm_fields(item, where);
        MiddleboxSpec mb{vm.id, vm.type_name, vm.mips_per_core, vm.cores, vm.bandwidth_bps, {}};
        if (item.contains("transform")) {
            const auto& tr = item.at("transform");
            if (!tr.is_object()) throw FormatError(where + ".transform must be an object");
            expect_keys(tr, where + ".transform", {"set_dst", "size_factor"});
            if (tr.contains("set_dst")) mb.transform.set_dst = get_string(tr, where + ".transform", "set_dst");
            if (tr.contains("size_factor"))
                mb.transform.size_factor = get_number(tr, where + ".transform", "size_factor");
        }
        vt.middleboxes.push_back(std::move(mb));
    }

    index = 0;
    for (const auto& item : doc.value("vlinks", ordered_json::array())) {
        const std::string where = "vlinks[" + std::to_string(index++) + "]";
        if (!item.is_object()) throw FormatError(where + " must be an object");
        expect_keys(item, where, {"id", "src", "dst", "bandwidth_bps", "max_latency_s", "class"});
        for (const char* key : {"id", "src", "dst", "bandwidth_bps", "class"}) require(item, where, key);

        VLinkSpec vl;
        vl.id = get_string(item, where, "id");
        vl.src = get_string(item, where, "src");
        vl.dst = get_string(item, where, "dst");
        vl.bandwidth_bps = get_number(item, where, "bandwidth_bps");
        if (item.contains("max_latency_s")) vl.max_latency_s = get_number(item, where, "max_latency_s");
        const std::string cls = get_string(item, where, "class");
        if (cls == "standard") {
            vl.channel_class = ChannelClass::Standard;
        } else if (cls == "priority") {
            vl.channel_class = ChannelClass::Priority;
        } else {
            throw FormatError(where + ".class must be standard|priority, got '" + cls + "'");
        }
        vt.vlinks.push_back(std::move(vl));
    }

    check_valid(validate(vt));
    return vt;
}

std::string serialize(const PhysicalTopology& pt) {
    ordered_json doc;
    doc["nodes"] = ordered_json::array();
    for (const auto& n : pt.nodes) {
        ordered_json item;
        item["id"] = n.id;
        item["kind"] = to_string(n.kind);
        if (n.is_host()) {
            item["cores"] = n.cores;
            item["mips_per_core"] = n.mips_per_core;
            item["p_idle_w"] = n.power.p_idle_w;
            item["p_peak_w"] = n.power.p_peak_w;
        }
        doc["nodes"].push_back(std::move(item));
    }
    doc["links"] = ordered_json::array();
    for (const auto& l : pt.links) {
        doc["links"].push_back({{"a", l.a}, {"b", l.b},
                                {"capacity_bps", l.capacity_bps}, {"latency_s", l.latency_s}});
    }
    return doc.dump(2);
}

std::string serialize(const VirtualTopology& vt) {
    ordered_json doc;
    doc["vms"] = ordered_json::array();
    for (const auto& v : vt.vms) {
        doc["vms"].push_back({{"id", v.id}, {"type", v.type_name},
                              {"mips_per_core", v.mips_per_core}, {"cores", v.cores},
                              {"bandwidth_bps", v.bandwidth_bps}});
    }
    doc["middleboxes"] = ordered_json::array();
    for (const auto& m : vt.middleboxes) {
        ordered_json item{{"id", m.id}, {"type", m.type_name},
                          {"mips_per_core", m.mips_per_core}, {"cores", m.cores},
                          {"bandwidth_bps", m.bandwidth_bps}};
        ordered_json tr = ordered_json::object();
        if (m.transform.set_dst) tr["set_dst"] = *m.transform.set_dst;
        if (m.transform.size_factor) tr["size_factor"] = *m.transform.size_factor;
        item["transform"] = std::move(tr);
        doc["middleboxes"].push_back(std::move(item));
    }
    doc["vlinks"] = ordered_json::array();
    for (const auto& vl : vt.vlinks) {
        ordered_json item{{"id", vl.id}, {"src", vl.src}, {"dst", vl.dst},
                          {"bandwidth_bps", vl.bandwidth_bps}};
        if (vl.max_latency_s) item["max_latency_s"] = *vl.max_latency_s;
        item["class"] = to_string(vl.channel_class);
        doc["vlinks"].push_back(std::move(item));
    }
    return doc.dump(2);
}

}  // namespace sdcsim
