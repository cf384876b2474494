#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdcsim/topology.hpp"

namespace sdcsim {

/// One step of a physical path, as a directed traversal of an undirected link.
struct PathHop {
    int link = -1;       // index into PhysicalTopology::links
    std::string from;
    std::string to;

    bool operator==(const PathHop&) const = default;
};

using Path = std::vector<PathHop>;

/// Per-link bookkeeping. A link is one shared capacity pool: priority
/// reservations are carved out of it and the remainder is the standard pool,
/// split evenly among the standard channels that are busy at that instant.
struct LinkState {
    double reserved_bps = 0.0;
    int standard_active = 0;

    bool operator==(const LinkState&) const = default;
};

/// Minimum-hop simple path from src host to dst host such that every link
/// has residual capacity (capacity - reserved) >= required_bw and the summed
/// latency stays within max_latency when given. Ties between equal-hop paths
/// break toward the lexicographically smallest node-id sequence.
///
/// Throws EmbeddingInfeasibleError with reason bandwidth | latency |
/// disconnected when no such path exists.
Path find_path(const PhysicalTopology& pt, const std::vector<LinkState>& link_states,
               const std::string& src, const std::string& dst, double required_bw_bps,
               std::optional<double> max_latency_s = std::nullopt);

/// An embedded virtual link. Transmissions inside a channel progress by
/// processor sharing: the channel rate is divided evenly among its active
/// transmissions, tracked through a per-channel virtual progress counter
/// (bits served per active transmission slot).
struct Channel {
    std::string id;
    VLinkSpec vlink;
    Path path;
    ChannelClass cls = ChannelClass::Standard;
    double reservation_bps = 0.0;  // priority only
    double current_rate_bps = 0.0;

    struct ActiveTxn {
        double v_target = 0.0;  // virtual progress at which this txn completes
        double v_start = 0.0;
        std::uint64_t seq = 0;
    };
    std::vector<ActiveTxn> active;  // min-heap on (v_target, seq)
    double v_bits = 0.0;            // virtual progress
    double last_update_s = 0.0;

    [[nodiscard]] int active_transmissions() const { return static_cast<int>(active.size()); }
    [[nodiscard]] double total_latency_s(const PhysicalTopology& pt) const;
};

/// Record returned when a transmission completes.
struct TxnCompletion {
    std::string channel;
    std::uint64_t txn = 0;
    double size_bits = 0.0;
    double integral_bits = 0.0;  // integral of the txn's instantaneous rate
};

/// The simulated network operating system: owns per-link reservations and
/// all channels, recomputes flow rates on every arrival and departure.
class NetworkState {
public:
    explicit NetworkState(const PhysicalTopology& pt);

    [[nodiscard]] const std::vector<LinkState>& link_states() const { return link_states_; }
    [[nodiscard]] const std::map<std::string, Channel>& channels() const { return channels_; }
    [[nodiscard]] const Channel& channel(const std::string& id) const;
    [[nodiscard]] bool has_channel(const std::string& id) const { return channels_.count(id) != 0; }

    /// Embed a vlink between placed endpoints. Priority channels subtract
    /// their reservation from every path link. Returns the channel id
    /// (the vlink id).
    std::string create_channel(const VLinkSpec& vlink,
                               const std::map<std::string, std::string>& vm_to_host);

    /// Release a channel and its reservations. The channel must be idle.
    void remove_channel(const std::string& id);

    /// Remove every channel whose vlink touches the given VM.
    void remove_channels_of_vm(const std::string& vm_id);

    /// Recompute every channel's rate from link pools; returns the rates.
    std::map<std::string, double> recompute_rates();

    /// A transmission of size_bits joins the channel at time now.
    std::uint64_t on_transmission_start(const std::string& channel, double size_bits, double now);

    /// Complete the channel's earliest-finishing transmission at time now.
    TxnCompletion on_transmission_finish(const std::string& channel, double now);

    /// Earliest pending completion over all channels, if any.
    struct NextCompletion {
        double time = 0.0;
        std::string channel;
        std::uint64_t txn = 0;
    };
    [[nodiscard]] std::optional<NextCompletion> next_completion() const;

    /// Advance every channel's virtual progress to time t.
    void advance_to(double t);

    /// Full-state snapshot, used to make multi-step embeddings atomic:
    /// restoring is bit-exact where arithmetic rollback would not be.
    struct Snapshot {
        std::vector<LinkState> link_states;
        std::map<std::string, Channel> channels;
    };
    [[nodiscard]] Snapshot snapshot() const { return {link_states_, channels_}; }
    void restore(Snapshot s);

private:
    void apply_rates();
    [[nodiscard]] double standard_pool(int link) const;

    const PhysicalTopology* pt_;
    std::vector<LinkState> link_states_;
    std::map<std::string, Channel> channels_;  // ordered: deterministic iteration
    std::uint64_t next_txn_seq_ = 1;
};

}  // namespace sdcsim
