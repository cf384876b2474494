#include "sdcsim/netos.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "sdcsim/errors.hpp"

namespace sdcsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool txn_less(const Channel::ActiveTxn& a, const Channel::ActiveTxn& b) {
    if (a.v_target != b.v_target) return a.v_target < b.v_target;
    return a.seq < b.seq;
}

// std heap algorithms build max-heaps; invert the order for a min-heap.
bool heap_cmp(const Channel::ActiveTxn& a, const Channel::ActiveTxn& b) { return txn_less(b, a); }

struct Adjacency {
    // node -> sorted (neighbor, link index)
    std::map<std::string, std::vector<std::pair<std::string, int>>> edges;
};

Adjacency build_adjacency(const PhysicalTopology& pt) {
    Adjacency adj;
    for (std::size_t i = 0; i < pt.links.size(); ++i) {
        const auto& l = pt.links[i];
        adj.edges[l.a].push_back({l.b, static_cast<int>(i)});
        adj.edges[l.b].push_back({l.a, static_cast<int>(i)});
    }
    for (auto& [node, neighbors] : adj.edges) {
        std::sort(neighbors.begin(), neighbors.end());
    }
    return adj;
}

bool reachable(const Adjacency& adj, const std::string& src, const std::string& dst,
               const std::vector<bool>& link_ok) {
    std::set<std::string> seen{src};
    std::deque<std::string> frontier{src};
    while (!frontier.empty()) {
        const std::string cur = frontier.front();
        frontier.pop_front();
        if (cur == dst) return true;
        auto it = adj.edges.find(cur);
        if (it == adj.edges.end()) continue;
        for (const auto& [next, link] : it->second) {
            if (!link_ok[link]) continue;
            if (seen.insert(next).second) frontier.push_back(next);
        }
    }
    return false;
}

// Depth-first search for a feasible path of exactly `hops` links, visiting
// neighbors in ascending node-id order so the first hit is the
// lexicographically smallest node sequence of that length.
bool lex_dfs(const Adjacency& adj, const PhysicalTopology& pt, const std::vector<bool>& link_ok,
             const std::string& cur, const std::string& dst, int hops_left, double latency_left,
             std::set<std::string>& visited, Path& out) {
    if (hops_left == 0) return cur == dst;
    if (cur == dst) return false;  // simple path: cannot revisit dst later
    auto it = adj.edges.find(cur);
    if (it == adj.edges.end()) return false;
    for (const auto& [next, link] : it->second) {
        if (!link_ok[link] || visited.count(next)) continue;
        const double lat = pt.links[link].latency_s;
        if (lat > latency_left) continue;
        visited.insert(next);
        out.push_back({link, cur, next});
        if (lex_dfs(adj, pt, link_ok, next, dst, hops_left - 1, latency_left - lat, visited, out)) {
            return true;
        }
        out.pop_back();
        visited.erase(next);
    }
    return false;
}

}  // namespace

Path find_path(const PhysicalTopology& pt, const std::vector<LinkState>& link_states,
               const std::string& src, const std::string& dst, double required_bw_bps,
               std::optional<double> max_latency_s) {
    const PhysNode* src_node = pt.find_node(src);
    const PhysNode* dst_node = pt.find_node(dst);
    if (!src_node || !src_node->is_host()) throw InvalidArgumentError("find_path: src is not a host: " + src);
    if (!dst_node || !dst_node->is_host()) throw InvalidArgumentError("find_path: dst is not a host: " + dst);
    if (src == dst) return {};

    const Adjacency adj = build_adjacency(pt);

    std::vector<bool> any(pt.links.size(), true);
    if (!reachable(adj, src, dst, any)) {
        throw EmbeddingInfeasibleError(InfeasibleReason::Disconnected,
                                       "no path between " + src + " and " + dst);
    }

    std::vector<bool> bw_ok(pt.links.size());
    for (std::size_t i = 0; i < pt.links.size(); ++i) {
        const double residual = pt.links[i].capacity_bps - link_states[i].reserved_bps;
        bw_ok[i] = residual >= required_bw_bps;
    }
    if (!reachable(adj, src, dst, bw_ok)) {
        throw EmbeddingInfeasibleError(InfeasibleReason::Bandwidth,
                                       "no path between " + src + " and " + dst +
                                           " with residual capacity for the requested bandwidth");
    }

    const double latency_budget = max_latency_s.value_or(kInf);
    const int max_hops = static_cast<int>(pt.nodes.size()) - 1;
    for (int hops = 1; hops <= max_hops; ++hops) {
        std::set<std::string> visited{src};
        Path path;
        if (lex_dfs(adj, pt, bw_ok, src, dst, hops, latency_budget, visited, path)) {
            return path;
        }
    }
    throw EmbeddingInfeasibleError(InfeasibleReason::Latency,
                                   "every path between " + src + " and " + dst +
                                       " exceeds the maximum latency");
}

double Channel::total_latency_s(const PhysicalTopology& pt) const {
    double total = 0.0;
    for (const auto& hop : path) total += pt.links[hop.link].latency_s;
    return total;
}

NetworkState::NetworkState(const PhysicalTopology& pt)
    : pt_(&pt), link_states_(pt.links.size()) {}

const Channel& NetworkState::channel(const std::string& id) const {
    auto it = channels_.find(id);
    if (it == channels_.end()) throw NotFoundError("unknown channel: " + id);
    return it->second;
}

std::string NetworkState::create_channel(const VLinkSpec& vlink,
                                         const std::map<std::string, std::string>& vm_to_host) {
    if (channels_.count(vlink.id)) {
        throw ConflictError("channel already exists: " + vlink.id);
    }
    auto src_it = vm_to_host.find(vlink.src);
    auto dst_it = vm_to_host.find(vlink.dst);
    if (src_it == vm_to_host.end() || dst_it == vm_to_host.end()) {
        throw NotFoundError("vlink " + vlink.id + " endpoint is not placed");
    }

    Channel ch;
    ch.id = vlink.id;
    ch.vlink = vlink;
    ch.cls = vlink.channel_class;
    ch.path = find_path(*pt_, link_states_, src_it->second, dst_it->second, vlink.bandwidth_bps,
                        vlink.max_latency_s);
    if (ch.cls == ChannelClass::Priority) {
        ch.reservation_bps = vlink.bandwidth_bps;
        for (const auto& hop : ch.path) {
            link_states_[hop.link].reserved_bps += ch.reservation_bps;
        }
    }
    channels_.emplace(ch.id, std::move(ch));
    recompute_rates();
    return vlink.id;
}

void NetworkState::remove_channel(const std::string& id) {
    auto it = channels_.find(id);
    if (it == channels_.end()) throw NotFoundError("unknown channel: " + id);
    if (!it->second.active.empty()) {
        throw ConflictError("channel " + id + " has active transmissions");
    }
    if (it->second.cls == ChannelClass::Priority) {
        for (const auto& hop : it->second.path) {
            link_states_[hop.link].reserved_bps -= it->second.reservation_bps;
        }
    }
    channels_.erase(it);
    recompute_rates();
}

void NetworkState::remove_channels_of_vm(const std::string& vm_id) {
    std::vector<std::string> doomed;
    for (const auto& [id, ch] : channels_) {
        if (ch.vlink.src == vm_id || ch.vlink.dst == vm_id) doomed.push_back(id);
    }
    for (const auto& id : doomed) remove_channel(id);
}

double NetworkState::standard_pool(int link) const {
    return pt_->links[link].capacity_bps - link_states_[link].reserved_bps;
}

void NetworkState::apply_rates() {
    for (auto& ls : link_states_) ls.standard_active = 0;
    for (const auto& [id, ch] : channels_) {
        if (ch.cls == ChannelClass::Standard && !ch.active.empty()) {
            for (const auto& hop : ch.path) ++link_states_[hop.link].standard_active;
        }
    }
    for (auto& [id, ch] : channels_) {
        if (ch.cls == ChannelClass::Priority) {
            ch.current_rate_bps = ch.path.empty() ? kInf : ch.reservation_bps;
            continue;
        }
        if (ch.active.empty()) {
            ch.current_rate_bps = 0.0;  // idle standard channels hold no share
            continue;
        }
        double rate = kInf;
        for (const auto& hop : ch.path) {
            const auto& ls = link_states_[hop.link];
            rate = std::min(rate, standard_pool(hop.link) / ls.standard_active);
        }
        ch.current_rate_bps = std::max(rate, 0.0);
    }
}

std::map<std::string, double> NetworkState::recompute_rates() {
    apply_rates();
    std::map<std::string, double> rates;
    for (const auto& [id, ch] : channels_) rates[id] = ch.current_rate_bps;
    return rates;
}

void NetworkState::advance_to(double t) {
    for (auto& [id, ch] : channels_) {
        const double dt = t - ch.last_update_s;
        if (dt < 0) throw InternalInconsistencyError("network clock moved backwards");
        if (!ch.active.empty() && ch.current_rate_bps > 0 && dt > 0) {
            if (std::isinf(ch.current_rate_bps)) {
                // Unconstrained channel (same-host path): everything active
                // completes instantly, so jump progress to the largest target.
                double max_target = ch.v_bits;
                for (const auto& txn : ch.active) max_target = std::max(max_target, txn.v_target);
                ch.v_bits = max_target;
            } else {
                ch.v_bits += ch.current_rate_bps / ch.active.size() * dt;
            }
        }
        ch.last_update_s = t;
    }
}

std::uint64_t NetworkState::on_transmission_start(const std::string& channel, double size_bits,
                                                  double now) {
    auto it = channels_.find(channel);
    if (it == channels_.end()) throw NotFoundError("unknown channel: " + channel);
    if (!(size_bits > 0)) throw InvalidArgumentError("transmission size must be > 0");
    advance_to(now);
    Channel& ch = it->second;
    Channel::ActiveTxn txn;
    txn.v_start = ch.v_bits;
    txn.v_target = ch.v_bits + size_bits;
    txn.seq = next_txn_seq_++;
    ch.active.push_back(txn);
    std::push_heap(ch.active.begin(), ch.active.end(), heap_cmp);
    recompute_rates();
    return txn.seq;
}

TxnCompletion NetworkState::on_transmission_finish(const std::string& channel, double now) {
    auto it = channels_.find(channel);
    if (it == channels_.end()) throw NotFoundError("unknown channel: " + channel);
    Channel& ch = it->second;
    if (ch.active.empty()) {
        throw InternalInconsistencyError("transmission finish on idle channel " + channel);
    }
    advance_to(now);
    std::pop_heap(ch.active.begin(), ch.active.end(), heap_cmp);
    const Channel::ActiveTxn txn = ch.active.back();
    ch.active.pop_back();
    const double integral = std::min(ch.v_bits, txn.v_target) - txn.v_start;
    // Snap progress onto the completion boundary; any residue is fp noise
    // from the event-time round trip.
    ch.v_bits = std::max(ch.v_bits, txn.v_target);
    recompute_rates();
    return {channel, txn.seq, txn.v_target - txn.v_start, integral};
}

void NetworkState::restore(Snapshot s) {
    link_states_ = std::move(s.link_states);
    channels_ = std::move(s.channels);
}

std::optional<NetworkState::NextCompletion> NetworkState::next_completion() const {
    std::optional<NextCompletion> best;
    for (const auto& [id, ch] : channels_) {
        if (ch.active.empty()) continue;
        const Channel::ActiveTxn& front = ch.active.front();
        double when;
        if (std::isinf(ch.current_rate_bps)) {
            when = ch.last_update_s;
        } else if (ch.current_rate_bps <= 0) {
            continue;  // stalled: no completion until capacity frees up
        } else {
            const double remaining = std::max(0.0, front.v_target - ch.v_bits);
            when = ch.last_update_s + remaining / (ch.current_rate_bps / ch.active.size());
        }
        if (!best || when < best->time) {
            best = NextCompletion{when, id, front.seq};
        }
    }
    return best;
}

}  // namespace sdcsim
