#include "sdcsim/workload.hpp"

#include <cmath>
#include <sstream>

#include "sdcsim/errors.hpp"

#include <json.hpp>

namespace sdcsim {

using ordered_json = nlohmann::ordered_json;

DistSpec DistSpec::lognormal(double mu, double sigma) {
    DistSpec d;
    d.family = DistFamily::LogNormal;
    d.mu = mu;
    d.sigma = sigma;
    return d;
}

DistSpec DistSpec::pareto(double location, double shape) {
    DistSpec d;
    d.family = DistFamily::Pareto;
    d.location = location;
    d.shape = shape;
    return d;
}

DistSpec DistSpec::exponential(double rate) {
    DistSpec d;
    d.family = DistFamily::Exponential;
    d.rate = rate;
    return d;
}

DistSpec DistSpec::fixed_rate(double rate) {
    DistSpec d;
    d.family = DistFamily::FixedRate;
    d.rate = rate;
    return d;
}

double DistSpec::mean() const {
    switch (family) {
        case DistFamily::LogNormal: return std::exp(mu + sigma * sigma / 2.0);
        case DistFamily::Pareto:
            return shape > 1.0 ? location * shape / (shape - 1.0)
                               : std::numeric_limits<double>::infinity();
        case DistFamily::Exponential: return 1.0 / rate;
        case DistFamily::FixedRate: return 1.0 / rate;
    }
    return 0.0;
}

double sample(const DistSpec& d, SplitMix64& rng) {
    switch (d.family) {
        case DistFamily::LogNormal:
            if (!(d.sigma > 0)) throw InvalidArgumentError("lognormal sigma must be > 0");
            return std::exp(d.mu + d.sigma * rng.normal());
        case DistFamily::Pareto:
            if (!(d.shape > 0) || !(d.location > 0)) {
                throw InvalidArgumentError("pareto needs shape > 0 and location > 0");
            }
            return d.location / std::pow(rng.uniform01(), 1.0 / d.shape);
        case DistFamily::Exponential:
            if (!(d.rate > 0)) throw InvalidArgumentError("exponential rate must be > 0");
            return -std::log(rng.uniform01()) / d.rate;
        case DistFamily::FixedRate:
            if (!(d.rate > 0)) throw InvalidArgumentError("fixed rate must be > 0");
            return 1.0 / d.rate;
    }
    throw InvalidArgumentError("unknown distribution family");
}

std::string to_string(Congestion level) {
    switch (level) {
        case Congestion::Low: return "low";
        case Congestion::Medium: return "medium";
        case Congestion::High: return "high";
    }
    return "?";
}

double normal_rate_for(Congestion level) {
    switch (level) {
        case Congestion::Low: return 100.0;
        case Congestion::Medium: return 250.0;
        case Congestion::High: return 500.0;
    }
    return 0.0;
}

namespace {

struct ClassStreams {
    SplitMix64 arrivals;
    SplitMix64 size_front;  // web <-> app channel
    SplitMix64 size_back;   // app <-> db channel
    SplitMix64 workload;
};

std::vector<Request> gen_class(const Usecase1Workload& cfg, RequestClass cls,
                               const DistSpec& arrival_dist, const DistSpec& front,
                               const DistSpec& back, ClassStreams& streams) {
    const std::string front_ch = cls == RequestClass::Priority ? "ch3" : "ch1";
    const std::string back_ch = cls == RequestClass::Priority ? "ch4" : "ch2";
    const char prefix = cls == RequestClass::Priority ? 'p' : 'n';

    std::vector<Request> out;
    double t = 0.0;
    int n = 0;
    for (;;) {
        t += sample(arrival_dist, streams.arrivals);
        if (t >= cfg.duration_s) break;
        Request r;
        char id[16];
        std::snprintf(id, sizeof id, "%c%06d", prefix, ++n);
        r.id = id;
        r.cls = cls;
        r.submission_s = t;
        // web -> app -> db and all the way back; packet sizes are fresh
        // draws from the traversed channel's model on each leg.
        r.activities = {
            ProcessingActivity{"web", sample(cfg.model.workload_mi, streams.workload)},
            TransmissionActivity{front_ch, sample(front, streams.size_front)},
            ProcessingActivity{"app", sample(cfg.model.workload_mi, streams.workload)},
            TransmissionActivity{back_ch, sample(back, streams.size_back)},
            ProcessingActivity{"db", sample(cfg.model.workload_mi, streams.workload)},
            TransmissionActivity{back_ch, sample(back, streams.size_back)},
            TransmissionActivity{front_ch, sample(front, streams.size_front)},
        };
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

std::vector<Request> gen_usecase1(const Usecase1Workload& cfg) {
    const double normal_rate = normal_rate_for(cfg.congestion);

    ClassStreams normal{substream(cfg.seed, "arrivals/normal"), substream(cfg.seed, "sizes/ch1"),
                        substream(cfg.seed, "sizes/ch2"), substream(cfg.seed, "workload/normal")};
    ClassStreams priority{substream(cfg.seed, "arrivals/priority"), substream(cfg.seed, "sizes/ch3"),
                          substream(cfg.seed, "sizes/ch4"),
                          substream(cfg.seed, "workload/priority")};

    // Fixed-rate Poisson streams by default; the table's lognormal
    // inter-arrival model is the off-by-default alternative for both classes.
    const bool poisson = cfg.arrivals == ArrivalModel::PoissonFixedRates;
    const DistSpec normal_arrivals =
        poisson ? DistSpec::exponential(normal_rate) : cfg.model.interarrival;
    const DistSpec priority_arrivals =
        poisson ? DistSpec::exponential(cfg.priority_rate) : cfg.model.interarrival;

    std::vector<Request> normals = gen_class(cfg, RequestClass::Normal, normal_arrivals,
                                             cfg.model.size_ch1, cfg.model.size_ch2, normal);
    std::vector<Request> priorities = gen_class(cfg, RequestClass::Priority, priority_arrivals,
                                                cfg.model.size_ch3, cfg.model.size_ch4, priority);

    // Stable merge by submission time; RNG state is never consumed here.
    std::vector<Request> merged;
    merged.reserve(normals.size() + priorities.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < normals.size() || j < priorities.size()) {
        const bool take_normal =
            j == priorities.size() ||
            (i < normals.size() && normals[i].submission_s <= priorities[j].submission_s);
        merged.push_back(take_normal ? std::move(normals[i++]) : std::move(priorities[j++]));
    }
    return merged;
}

const std::vector<VmSpec>& vm_type_catalog() {
    static const std::vector<VmSpec> catalog = {
        {"", "web", 2000.0, 2, 100e6},
        {"", "app", 3000.0, 8, 100e6},
        {"", "db", 2400.0, 8, 100e6},
        {"", "proxy", 2000.0, 8, 500e6},
        {"", "firewall", 3000.0, 8, 500e6},
    };
    return catalog;
}

std::vector<TimedVmRequest> gen_usecase2(const Usecase2Workload& cfg) {
    SplitMix64 arrivals = substream(cfg.seed, "arrivals/vm");
    SplitMix64 types = substream(cfg.seed, "types");
    SplitMix64 lifetimes = substream(cfg.seed, "lifetimes");
    const DistSpec gap = DistSpec::exponential(cfg.arrival_rate);
    const auto& catalog = vm_type_catalog();

    std::vector<TimedVmRequest> out;
    double t = 0.0;
    for (int i = 0; i < cfg.n_vms; ++i) {
        t += sample(gap, arrivals);
        TimedVmRequest req;
        char id[16];
        std::snprintf(id, sizeof id, "vm%04d", i + 1);
        req.id = id;
        req.create_s = t;
        req.lifetime_s = sample(cfg.lifetime, lifetimes);
        const auto pick = static_cast<std::size_t>(types.next_u64() % catalog.size());
        req.spec = catalog[pick];
        req.spec.id = req.id;
        out.push_back(std::move(req));
    }
    return out;
}

std::string dump_requests_jsonl(const std::vector<Request>& requests) {
    std::ostringstream out;
    for (const auto& r : requests) {
        ordered_json doc;
        doc["id"] = r.id;
        doc["class"] = to_string(r.cls);
        doc["submit_s"] = r.submission_s;
        doc["activities"] = ordered_json::array();
        for (const auto& act : r.activities) {
            if (const auto* proc = std::get_if<ProcessingActivity>(&act)) {
                doc["activities"].push_back(
                    {{"kind", "proc"}, {"vm", proc->vm_id}, {"mi", proc->workload_mi}});
            } else {
                const auto& xmit = std::get<TransmissionActivity>(act);
                doc["activities"].push_back(
                    {{"kind", "xmit"}, {"channel", xmit.channel_id}, {"bytes", xmit.packet_bytes}});
            }
        }
        out << doc.dump() << "\n";
    }
    return out.str();
}

std::vector<Request> load_requests_jsonl(const std::string& text) {
    std::vector<Request> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            const ordered_json doc = ordered_json::parse(line);
            Request r;
            r.id = doc.at("id").get<std::string>();
            const std::string cls = doc.at("class").get<std::string>();
            if (cls == "normal") {
                r.cls = RequestClass::Normal;
            } else if (cls == "priority") {
                r.cls = RequestClass::Priority;
            } else {
                throw FormatError("class must be normal|priority");
            }
            r.submission_s = doc.at("submit_s").get<double>();
            for (const auto& act : doc.at("activities")) {
                const std::string kind = act.at("kind").get<std::string>();
                if (kind == "proc") {
                    r.activities.push_back(ProcessingActivity{act.at("vm").get<std::string>(),
                                                              act.at("mi").get<double>()});
                } else if (kind == "xmit") {
                    r.activities.push_back(TransmissionActivity{
                        act.at("channel").get<std::string>(), act.at("bytes").get<double>()});
                } else {
                    throw FormatError("activity kind must be proc|xmit");
                }
            }
            out.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("workload line " + std::to_string(lineno) + ": " + e.what());
        } catch (const FormatError& e) {
            throw FormatError("workload line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace sdcsim
