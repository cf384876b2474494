#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdcsim/engine.hpp"
#include "sdcsim/rng.hpp"
#include "sdcsim/topology.hpp"

namespace sdcsim {

enum class DistFamily { LogNormal, Pareto, Exponential, FixedRate };

/// Family-specific parameterization:
///   lognormal:   exp(mu + sigma * Z)
///   pareto:      location / U^(1/shape)
///   exponential: -ln(U) / rate
///   fixed-rate:  1 / rate, deterministic
struct DistSpec {
    DistFamily family = DistFamily::Exponential;
    double mu = 0.0;
    double sigma = 0.0;
    double location = 0.0;
    double shape = 0.0;
    double rate = 0.0;

    [[nodiscard]] static DistSpec lognormal(double mu, double sigma);
    [[nodiscard]] static DistSpec pareto(double location, double shape);
    [[nodiscard]] static DistSpec exponential(double rate);
    [[nodiscard]] static DistSpec fixed_rate(double rate);

    /// Closed-form mean (lognormal/exponential/fixed-rate; pareto needs
    /// shape > 1).
    [[nodiscard]] double mean() const;
};

double sample(const DistSpec& d, SplitMix64& rng);

/// Per-channel packet-size models and the shared workload-size model of the
/// three-tier web traffic generator.
struct WebTrafficModel {
    DistSpec interarrival = DistSpec::lognormal(1.5627, 1.5458);  // alternative arrivals
    DistSpec size_ch1 = DistSpec::lognormal(5.6129, 0.1343);
    DistSpec size_ch2 = DistSpec::lognormal(4.6455, 0.8013);
    DistSpec size_ch3 = DistSpec::lognormal(3.6839, 0.8261);
    DistSpec size_ch4 = DistSpec::lognormal(7.0104, 0.8481);
    DistSpec workload_mi = DistSpec::pareto(12.3486, 0.9713);
};

enum class Congestion { Low, Medium, High };

[[nodiscard]] std::string to_string(Congestion level);
[[nodiscard]] double normal_rate_for(Congestion level);  // 100 / 250 / 500 req/s

enum class ArrivalModel { PoissonFixedRates, LogNormalInterarrival };

struct Usecase1Workload {
    Congestion congestion = Congestion::Medium;
    double duration_s = 30.0;
    std::uint64_t seed = 1;
    double priority_rate = 100.0;
    ArrivalModel arrivals = ArrivalModel::PoissonFixedRates;
    WebTrafficModel model;
};

/// Three-tier request streams: a Poisson normal stream at the congestion
/// level's rate and a Poisson priority stream at a fixed rate. Each request
/// runs web -> app -> db and back. Normal requests transmit over ch1/ch2,
/// priority requests over ch3/ch4, with packet sizes drawn from the
/// channel's model. Every random quantity has its own seeded substream, so
/// the priority stream is identical across congestion levels at equal seed.
std::vector<Request> gen_usecase1(const Usecase1Workload& cfg);

/// One VM creation request with a start time and a lifetime.
struct TimedVmRequest {
    std::string id;
    double create_s = 0.0;
    double lifetime_s = 0.0;
    VmSpec spec;
};

struct Usecase2Workload {
    int n_vms = 100;
    std::uint64_t seed = 1;
    double arrival_rate = 1.0 / 30.0;  // per second
    DistSpec lifetime = DistSpec::pareto(1000.0, 1.5);
};

/// VM types are drawn uniformly over the five catalog rows; inter-arrivals
/// are exponential and lifetimes Pareto.
std::vector<TimedVmRequest> gen_usecase2(const Usecase2Workload& cfg);

/// The five-VM-type catalog used by the consolidation experiment
/// (per-core MIPS, cores, bandwidth).
const std::vector<VmSpec>& vm_type_catalog();

/// Requests as JSON lines, one request per line, for replay and
/// cross-implementation comparison.
std::string dump_requests_jsonl(const std::vector<Request>& requests);
std::vector<Request> load_requests_jsonl(const std::string& text);

}  // namespace sdcsim
