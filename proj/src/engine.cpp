#include "sdcsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sdcsim/errors.hpp"

namespace sdcsim {

std::string to_string(RequestClass cls) {
    return cls == RequestClass::Priority ? "priority" : "normal";
}

std::vector<double> Metrics::responses(RequestClass cls) const {
    std::vector<double> out;
    for (const auto& r : completed) {
        if (r.cls == cls) out.push_back(r.response_s());
    }
    return out;
}

PacketDescriptor apply_middlebox_transform(const MiddleboxSpec& mb, PacketDescriptor packet) {
    packet.src = mb.id;
    if (mb.transform.set_dst) packet.dst = *mb.transform.set_dst;
    if (mb.transform.size_factor) packet.bytes *= *mb.transform.size_factor;
    return packet;
}

Simulation::Simulation(PhysicalTopology pt, SimConfig cfg)
    : pt_(std::move(pt)), cfg_(cfg), net_(pt_), placement_(pt_) {}

void Simulation::trace(const std::string& kind, const std::string& subject,
                       const std::string& detail) {
    if (!trace_) return;
    char stamp[32];
    std::snprintf(stamp, sizeof stamp, "%.9f", clock_);
    trace_(std::string(stamp) + "," + kind + "," + subject + "," + detail);
}

void Simulation::create_vm_runtimes(const VirtualTopology& vt) {
    for (const auto& vm : vt.vms) {
        vm_runtimes_[vm.id] = VmRuntime{vm, vm.cores, {}};
    }
    for (const auto& mb : vt.middleboxes) {
        vm_runtimes_[mb.id] = VmRuntime{mb.as_vm(), mb.cores, {}};
        middleboxes_[mb.id] = mb;
    }
}

Embedding Simulation::deploy(const VirtualTopology& vt, PlacementPolicy policy) {
    const ValidationReport report = validate(vt);
    if (!report.ok()) throw ValidationError(report.joined());
    const Embedding embedding = placement_.embed(vt, policy, net_);
    create_vm_runtimes(vt);
    deployed_.vms.insert(deployed_.vms.end(), vt.vms.begin(), vt.vms.end());
    deployed_.middleboxes.insert(deployed_.middleboxes.end(), vt.middleboxes.begin(),
                                 vt.middleboxes.end());
    deployed_.vlinks.insert(deployed_.vlinks.end(), vt.vlinks.begin(), vt.vlinks.end());
    sync_energy();
    for (const auto& [vm, host] : embedding.vm_to_host) trace("vm_place", vm, host);
    return embedding;
}

void Simulation::release_vm(const std::string& vm_id) {
    placement_.release(vm_id, net_);
    vm_runtimes_.erase(vm_id);
    middleboxes_.erase(vm_id);
    sync_energy();
    trace("vm_release", vm_id, "");
}

void Simulation::schedule_vm(double create_s, const VmSpec& spec, PlacementPolicy policy,
                             double lifetime_s) {
    if (create_s < clock_) throw InvalidArgumentError("vm creation scheduled in the past");
    if (!(lifetime_s > 0)) throw InvalidArgumentError("vm lifetime must be > 0");
    schedule(create_s, VmCreate{spec, policy, lifetime_s});
}

void Simulation::set_channel_alias(const std::string& from, const std::string& to) {
    if (!net_.has_channel(to)) throw NotFoundError("alias target channel missing: " + to);
    channel_alias_[from] = to;
}

const std::string& Simulation::resolve_channel(const std::string& id) const {
    auto it = channel_alias_.find(id);
    return it == channel_alias_.end() ? id : it->second;
}

void Simulation::submit(const Request& request) {
    if (request.submission_s < clock_) {
        throw InvalidArgumentError("request " + request.id + " submitted in the past");
    }
    if (request.activities.empty()) {
        throw ValidationError("request " + request.id + " has no activities");
    }
    for (const auto& act : request.activities) {
        if (const auto* proc = std::get_if<ProcessingActivity>(&act)) {
            if (!vm_runtimes_.count(proc->vm_id)) {
                throw ValidationError("request " + request.id + " references unknown vm " +
                                      proc->vm_id);
            }
            if (!(proc->workload_mi > 0)) {
                throw ValidationError("request " + request.id + " has non-positive workload");
            }
        } else {
            const auto& xmit = std::get<TransmissionActivity>(act);
            if (!net_.has_channel(resolve_channel(xmit.channel_id))) {
                throw ValidationError("request " + request.id + " references unknown channel " +
                                      xmit.channel_id);
            }
            if (!(xmit.packet_bytes > 0)) {
                throw ValidationError("request " + request.id + " has non-positive packet size");
            }
        }
    }
    requests_.push_back(RunningRequest{request, 0, 0.0, std::nullopt, "", false, false});
    schedule(request.submission_s, StartRequest{requests_.size() - 1});
}

void Simulation::schedule(double t, Payload payload) {
    if (t < clock_) {
        // Completion times computed from virtual progress can land a few
        // ulps before the clock; genuine causality violations are larger.
        if (clock_ - t > 1e-9 * std::max(1.0, clock_)) {
            throw InternalInconsistencyError("event scheduled in the past");
        }
        t = clock_;
    }
    queue_.push(Event{t, next_seq_++, std::move(payload)});
}

void Simulation::refresh_net_poll() {
    ++net_epoch_;
    if (const auto next = net_.next_completion()) {
        schedule(std::max(next->time, clock_), NetPoll{net_epoch_});
    }
}

void Simulation::sync_energy() {
    ledger_.sync(clock_, placement_.hosts());
}

void Simulation::finalize_energy() {
    sync_energy();
}

std::optional<double> Simulation::step() {
    if (queue_.empty()) return std::nullopt;
    const Event ev = queue_.top();
    queue_.pop();
    clock_ = std::max(clock_, ev.time);
    dispatch(ev);
    return ev.time;
}

void Simulation::run_until(double t) {
    if (t < clock_) throw InvalidArgumentError("run_until target precedes the clock");
    while (!queue_.empty() && queue_.top().time <= t) {
        step();
    }
}

void Simulation::run_all() {
    while (step()) {
    }
}

void Simulation::dispatch(const Event& ev) {
    if (const auto* start = std::get_if<StartRequest>(&ev.payload)) {
        trace("request_start", requests_[start->request].def.id, "");
        advance_request(start->request);
        return;
    }
    if (const auto* done = std::get_if<ProcessingDone>(&ev.payload)) {
        VmRuntime& vm = vm_runtimes_.at(done->vm_id);
        ++vm.free_cores;
        if (!vm.fifo.empty()) {
            const auto [queued_request, workload] = vm.fifo.front();
            vm.fifo.pop_front();
            --vm.free_cores;
            schedule(clock_ + workload / vm.spec.mips_per_core,
                     ProcessingDone{done->vm_id, queued_request});
            trace("proc_start", requests_[queued_request].def.id, done->vm_id);
        }
        trace("proc_end", requests_[done->request].def.id, done->vm_id);
        RunningRequest& req = requests_[done->request];
        if (req.in_mb_burst) {
            req.in_mb_burst = false;
            req.pending_transform = middleboxes_.at(done->vm_id).transform;
            req.transform_src = done->vm_id;
        }
        advance_request(done->request);
        return;
    }
    if (const auto* join = std::get_if<TxnJoin>(&ev.payload)) {
        const std::uint64_t txn = net_.on_transmission_start(join->channel, join->size_bits, clock_);
        txn_owner_[txn] = join->request;
        trace("txn_join", requests_[join->request].def.id, join->channel);
        refresh_net_poll();
        return;
    }
    if (const auto* poll = std::get_if<NetPoll>(&ev.payload)) {
        if (poll->epoch != net_epoch_) return;  // superseded by a later rate change
        const auto next = net_.next_completion();
        if (!next) return;
        const TxnCompletion completion = net_.on_transmission_finish(next->channel, clock_);
        if (cfg_.record_transmissions) {
            metrics_.transmissions.push_back(
                {completion.channel, completion.size_bits, completion.integral_bits});
        }
        const std::size_t request = txn_owner_.at(completion.txn);
        txn_owner_.erase(completion.txn);
        trace("txn_end", requests_[request].def.id, completion.channel);
        refresh_net_poll();

        const std::string& dst = net_.channel(completion.channel).vlink.dst;
        if (middleboxes_.count(dst)) {
            // Arriving at a middlebox triggers a short CPU burst before the
            // (transformed) request continues.
            RunningRequest& req = requests_[request];
            req.in_mb_burst = true;
            req.transform_src = dst;
            start_processing(dst, request, cfg_.middlebox_burst_mi);
        } else {
            advance_request(request);
        }
        return;
    }
    if (const auto* create = std::get_if<VmCreate>(&ev.payload)) {
        VirtualTopology vt;
        vt.vms.push_back(create->spec);
        deploy(vt, create->policy);
        schedule(clock_ + create->lifetime_s, VmExpire{create->spec.id});
        trace("vm_create", create->spec.id, create->spec.type_name);
        return;
    }
    if (const auto* expire = std::get_if<VmExpire>(&ev.payload)) {
        release_vm(expire->vm_id);
        return;
    }
}

void Simulation::advance_request(std::size_t idx) {
    RunningRequest& req = requests_[idx];
    if (req.next_activity >= req.def.activities.size()) {
        finish_request(idx);
        return;
    }
    const Activity& act = req.def.activities[req.next_activity++];
    if (const auto* proc = std::get_if<ProcessingActivity>(&act)) {
        start_processing(proc->vm_id, idx, proc->workload_mi);
    } else {
        begin_transmission(idx, std::get<TransmissionActivity>(act));
    }
}

void Simulation::start_processing(const std::string& vm_id, std::size_t request,
                                  double workload_mi) {
    VmRuntime& vm = vm_runtimes_.at(vm_id);
    if (vm.free_cores > 0) {
        --vm.free_cores;
        schedule(clock_ + workload_mi / vm.spec.mips_per_core, ProcessingDone{vm_id, request});
        trace("proc_start", requests_[request].def.id, vm_id);
    } else {
        vm.fifo.push_back({request, workload_mi});
        trace("proc_queue", requests_[request].def.id, vm_id);
    }
}

void Simulation::begin_transmission(std::size_t idx, const TransmissionActivity& act) {
    RunningRequest& req = requests_[idx];
    std::string channel_id = act.channel_id;
    double bytes = act.packet_bytes;

    if (req.pending_transform) {
        const PacketDescriptor packet = apply_middlebox_transform(
            middleboxes_.at(req.transform_src), {req.transform_src, "", req.last_packet_bytes});
        if (req.pending_transform->size_factor) bytes = packet.bytes;
        if (req.pending_transform->set_dst) {
            // Re-route onto the channel from the middlebox toward the new
            // destination; lexicographically first when several qualify.
            channel_id.clear();
            for (const auto& [id, ch] : net_.channels()) {
                if (ch.vlink.src == packet.src && ch.vlink.dst == packet.dst) {
                    channel_id = id;
                    break;
                }
            }
            if (channel_id.empty()) {
                throw ValidationError("no channel from " + packet.src + " to " + packet.dst);
            }
        }
        req.pending_transform.reset();
    }

    channel_id = resolve_channel(channel_id);
    const Channel& ch = net_.channel(channel_id);
    req.last_packet_bytes = bytes;
    // Propagation latency is charged once, up front; the flow-level share
    // then drains the volume.
    schedule(clock_ + ch.total_latency_s(pt_), TxnJoin{idx, channel_id, bytes * 8.0});
}

void Simulation::finish_request(std::size_t idx) {
    RunningRequest& req = requests_[idx];
    if (req.done) throw InternalInconsistencyError("request finished twice: " + req.def.id);
    req.done = true;
    metrics_.completed.push_back({req.def.id, req.def.cls, req.def.submission_s, clock_});
    trace("request_end", req.def.id, "");
}

}  // namespace sdcsim
