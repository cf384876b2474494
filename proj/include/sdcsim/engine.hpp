#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "sdcsim/netos.hpp"
#include "sdcsim/placement.hpp"
#include "sdcsim/power.hpp"
#include "sdcsim/topology.hpp"

namespace sdcsim {

enum class RequestClass { Normal, Priority };

[[nodiscard]] std::string to_string(RequestClass cls);

struct ProcessingActivity {
    std::string vm_id;
    double workload_mi = 0.0;
};

struct TransmissionActivity {
    std::string channel_id;
    double packet_bytes = 0.0;
};

using Activity = std::variant<ProcessingActivity, TransmissionActivity>;

/// The simulated unit of work: a timestamped sequence of processing and
/// transmission activities.
struct Request {
    std::string id;
    double submission_s = 0.0;
    std::vector<Activity> activities;
    RequestClass cls = RequestClass::Normal;
};

struct CompletedRequest {
    std::string id;
    RequestClass cls = RequestClass::Normal;
    double submit_s = 0.0;
    double finish_s = 0.0;

    [[nodiscard]] double response_s() const { return finish_s - submit_s; }
};

struct TxnRecord {
    std::string channel;
    double size_bits = 0.0;
    double integral_bits = 0.0;
};

struct Metrics {
    std::vector<CompletedRequest> completed;
    std::vector<TxnRecord> transmissions;

    [[nodiscard]] std::vector<double> responses(RequestClass cls) const;
};

struct SimConfig {
    double middlebox_burst_mi = 100.0;
    bool record_transmissions = true;
};

/// Packet descriptor as seen by a middlebox after its processing burst.
struct PacketDescriptor {
    std::string src;
    std::string dst;
    double bytes = 0.0;
};

/// Pure transform application: rewrites destination and size per the
/// middlebox spec, leaving everything else untouched.
PacketDescriptor apply_middlebox_transform(const MiddleboxSpec& mb, PacketDescriptor packet);

/// Discrete-event kernel. Events dequeue in (time, insertion sequence)
/// order, so equal-time events dispatch deterministically in the order they
/// were scheduled.
class Simulation {
public:
    explicit Simulation(PhysicalTopology pt, SimConfig cfg = {});

    [[nodiscard]] double now() const { return clock_; }
    [[nodiscard]] const PhysicalTopology& topology() const { return pt_; }
    [[nodiscard]] const PlacementState& placement() const { return placement_; }
    [[nodiscard]] const NetworkState& network() const { return net_; }
    [[nodiscard]] const EnergyLedger& energy() const { return ledger_; }
    [[nodiscard]] const Metrics& metrics() const { return metrics_; }
    [[nodiscard]] const VirtualTopology& deployed() const { return deployed_; }

    /// Embed a virtual topology at the current clock.
    Embedding deploy(const VirtualTopology& vt, PlacementPolicy policy);

    /// Release one VM (and its channels) at the current clock.
    void release_vm(const std::string& vm_id);

    /// Schedule a timed VM creation with a fixed lifetime (expiry runs
    /// release_vm automatically).
    void schedule_vm(double create_s, const VmSpec& spec, PlacementPolicy policy, double lifetime_s);

    /// Queue a request; its first activity starts at submission time.
    /// References to unknown VMs or channels fail here.
    void submit(const Request& request);

    /// Re-route transmissions addressed to one channel onto another.
    void set_channel_alias(const std::string& from, const std::string& to);

    /// Process exactly one event; returns its time, or nothing when the
    /// queue is empty (simulation complete).
    std::optional<double> step();

    /// Process all events with time <= t.
    void run_until(double t);

    /// Run to queue exhaustion.
    void run_all();

    /// Accrue host energy up to the current clock (piecewise-constant power
    /// makes this exact at any event boundary).
    void finalize_energy();

    /// Newline-delimited "time,event_kind,subject_id,detail" records.
    void set_trace(std::function<void(const std::string&)> sink) { trace_ = std::move(sink); }

private:
    struct StartRequest {
        std::size_t request;
    };
    struct ProcessingDone {
        std::string vm_id;
        std::size_t request;
    };
    struct TxnJoin {
        std::size_t request;
        std::string channel;
        double size_bits;
    };
    struct NetPoll {
        std::uint64_t epoch;
    };
    struct VmCreate {
        VmSpec spec;
        PlacementPolicy policy;
        double lifetime_s;
    };
    struct VmExpire {
        std::string vm_id;
    };
    using Payload = std::variant<StartRequest, ProcessingDone, TxnJoin, NetPoll, VmCreate, VmExpire>;

    struct Event {
        double time;
        std::uint64_t seq;
        Payload payload;
    };
    struct EventOrder {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    struct VmRuntime {
        VmSpec spec;
        int free_cores = 0;
        std::deque<std::pair<std::size_t, double>> fifo;  // (request index, workload MI)
    };

    struct RunningRequest {
        Request def;
        std::size_t next_activity = 0;
        double last_packet_bytes = 0.0;
        std::optional<RequestTransform> pending_transform;
        std::string transform_src;  // middlebox the pending transform came from
        bool in_mb_burst = false;
        bool done = false;
    };

    void schedule(double t, Payload payload);
    void dispatch(const Event& ev);
    void advance_request(std::size_t idx);
    void start_processing(const std::string& vm_id, std::size_t request, double workload_mi);
    void begin_transmission(std::size_t idx, const TransmissionActivity& act);
    void finish_request(std::size_t idx);
    void refresh_net_poll();
    void sync_energy();
    void create_vm_runtimes(const VirtualTopology& vt);
    void trace(const std::string& kind, const std::string& subject, const std::string& detail);
    [[nodiscard]] const std::string& resolve_channel(const std::string& id) const;

    PhysicalTopology pt_;
    SimConfig cfg_;
    NetworkState net_;
    PlacementState placement_;
    EnergyLedger ledger_;
    Metrics metrics_;
    VirtualTopology deployed_;

    double clock_ = 0.0;
    std::uint64_t next_seq_ = 1;
    std::uint64_t net_epoch_ = 0;
    std::priority_queue<Event, std::vector<Event>, EventOrder> queue_;

    std::vector<RunningRequest> requests_;
    std::map<std::string, VmRuntime> vm_runtimes_;
    std::map<std::string, MiddleboxSpec> middleboxes_;
    std::map<std::uint64_t, std::size_t> txn_owner_;  // network txn seq -> request
    std::map<std::string, std::string> channel_alias_;

    std::function<void(const std::string&)> trace_;
};

}  // namespace sdcsim
