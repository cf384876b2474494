#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "sdcsim/workload.hpp"

using namespace sdcsim;

namespace {

double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (const double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

std::vector<double> draws(const DistSpec& d, std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> out(n);
    for (auto& v : out) v = sample(d, rng);
    return out;
}

}  // namespace

TEST_CASE("lognormal sample mean matches the closed form within 1%") {
    const DistSpec d = DistSpec::lognormal(5.6129, 0.1343);
    const double expected = d.mean();  // exp(mu + sigma^2/2) ~ 276.4
    CHECK(expected == doctest::Approx(276.4).epsilon(2e-3));
    CHECK(mean_of(draws(d, 1'000'000, 7)) == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("exponential sample mean matches 1/rate within 1%") {
    const DistSpec d = DistSpec::exponential(250.0);
    CHECK(mean_of(draws(d, 1'000'000, 8)) == doctest::Approx(1.0 / 250.0).epsilon(0.01));
}

TEST_CASE("pareto samples respect the location bound exactly") {
    const DistSpec d = DistSpec::pareto(12.3486, 0.9713);
    for (const double x : draws(d, 100'000, 9)) {
        REQUIRE(x >= 12.3486);
    }
}

TEST_CASE("fixed-rate gaps are deterministic") {
    SplitMix64 rng(1);
    const DistSpec d = DistSpec::fixed_rate(100.0);
    CHECK(sample(d, rng) == 0.01);
    CHECK(sample(d, rng) == 0.01);
}

TEST_CASE("request stream counts follow the configured rates") {
    Usecase1Workload cfg;
    cfg.congestion = Congestion::Low;  // 100 req/s normal + 100 req/s priority
    cfg.duration_s = 10.0;
    cfg.seed = 42;
    const std::vector<Request> requests = gen_usecase1(cfg);
    int normal = 0;
    int priority = 0;
    for (const auto& r : requests) {
        (r.cls == RequestClass::Normal ? normal : priority)++;
    }
    // Poisson(1000): three sigma is roughly +/- 95.
    CHECK(std::abs(normal - 1000) < 95);
    CHECK(std::abs(priority - 1000) < 95);
    for (std::size_t i = 1; i < requests.size(); ++i) {
        CHECK(requests[i - 1].submission_s <= requests[i].submission_s);
    }
}

TEST_CASE("priority transmissions draw sizes from the ch4 model") {
    Usecase1Workload cfg;
    cfg.congestion = Congestion::Medium;
    cfg.duration_s = 60.0;
    cfg.seed = 3;
    std::vector<double> log_sizes;
    for (const auto& r : gen_usecase1(cfg)) {
        if (r.cls != RequestClass::Priority) continue;
        for (const auto& act : r.activities) {
            if (const auto* xmit = std::get_if<TransmissionActivity>(&act)) {
                if (xmit->channel_id == "ch4") log_sizes.push_back(std::log(xmit->packet_bytes));
            }
        }
    }
    REQUIRE(log_sizes.size() > 5000);
    const double n = static_cast<double>(log_sizes.size());
    const double m = mean_of(log_sizes);
    double var = 0.0;
    for (const double x : log_sizes) var += (x - m) * (x - m);
    var /= n - 1;
    // Four standard errors around the model parameters.
    CHECK(std::abs(m - 7.0104) < 4.0 * 0.8481 / std::sqrt(n));
    CHECK(std::abs(std::sqrt(var) - 0.8481) < 4.0 * 0.8481 / std::sqrt(2.0 * n));
}

TEST_CASE("the request template walks the three tiers and back") {
    Usecase1Workload cfg;
    cfg.duration_s = 1.0;
    const std::vector<Request> requests = gen_usecase1(cfg);
    REQUIRE_FALSE(requests.empty());
    const Request& r = requests.front();
    REQUIRE(r.activities.size() == 7);
    const auto vm_of = [&](std::size_t i) {
        return std::get<ProcessingActivity>(r.activities[i]).vm_id;
    };
    const auto ch_of = [&](std::size_t i) {
        return std::get<TransmissionActivity>(r.activities[i]).channel_id;
    };
    CHECK(vm_of(0) == "web");
    CHECK(vm_of(2) == "app");
    CHECK(vm_of(4) == "db");
    const bool is_priority = r.cls == RequestClass::Priority;
    CHECK(ch_of(1) == (is_priority ? "ch3" : "ch1"));
    CHECK(ch_of(3) == (is_priority ? "ch4" : "ch2"));
    CHECK(ch_of(5) == ch_of(3));  // return legs retrace the path
    CHECK(ch_of(6) == ch_of(1));
}

TEST_CASE("equal seeds reproduce the stream; the priority stream ignores congestion") {
    Usecase1Workload a;
    a.seed = 11;
    a.duration_s = 5.0;
    Usecase1Workload b = a;
    const auto ra = gen_usecase1(a);
    const auto rb = gen_usecase1(b);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
        CHECK(ra[i].id == rb[i].id);
        CHECK(ra[i].submission_s == rb[i].submission_s);
    }

    // Changing only the congestion level leaves the priority stream
    // byte-identical (independent substreams per quantity).
    Usecase1Workload high = a;
    high.congestion = Congestion::High;
    auto priority_only = [](const std::vector<Request>& rs) {
        std::vector<Request> out;
        for (const auto& r : rs) {
            if (r.cls == RequestClass::Priority) out.push_back(r);
        }
        return out;
    };
    const auto pa = priority_only(gen_usecase1(a));
    const auto ph = priority_only(gen_usecase1(high));
    REQUIRE(pa.size() == ph.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
        CHECK(pa[i].submission_s == ph[i].submission_s);
        REQUIRE(pa[i].activities.size() == ph[i].activities.size());
        for (std::size_t k = 0; k < pa[i].activities.size(); ++k) {
            if (const auto* xa = std::get_if<TransmissionActivity>(&pa[i].activities[k])) {
                CHECK(xa->packet_bytes ==
                      std::get<TransmissionActivity>(ph[i].activities[k]).packet_bytes);
            }
        }
    }
}

TEST_CASE("the lognormal inter-arrival model is available as an alternative") {
    Usecase1Workload cfg;
    cfg.arrivals = ArrivalModel::LogNormalInterarrival;
    cfg.duration_s = 600.0;
    cfg.seed = 4;
    const auto requests = gen_usecase1(cfg);
    REQUIRE(requests.size() > 10);
    // Heavy-tailed gaps: far fewer arrivals than the Poisson rates produce.
    Usecase1Workload poisson = cfg;
    poisson.arrivals = ArrivalModel::PoissonFixedRates;
    CHECK(requests.size() < gen_usecase1(poisson).size() / 10);
    for (std::size_t i = 1; i < requests.size(); ++i) {
        CHECK(requests[i - 1].submission_s <= requests[i].submission_s);
    }
}

TEST_CASE("vm request stream covers the catalog uniformly") {
    Usecase2Workload cfg;
    cfg.seed = 5;
    const auto requests = gen_usecase2(cfg);
    CHECK(requests.size() == 100);
    const std::set<std::string> types{"web", "app", "db", "proxy", "firewall"};
    for (const auto& r : requests) {
        CHECK(types.count(r.spec.type_name) == 1);
        CHECK(r.lifetime_s >= cfg.lifetime.location);
        CHECK(r.spec.id == r.id);
    }
    for (std::size_t i = 1; i < requests.size(); ++i) {
        CHECK(requests[i - 1].create_s < requests[i].create_s);
    }

    // Uniform type selection: each frequency within 1% at 1e5 draws.
    Usecase2Workload big = cfg;
    big.n_vms = 100'000;
    std::map<std::string, int> freq;
    for (const auto& r : gen_usecase2(big)) ++freq[r.spec.type_name];
    for (const auto& [type, count] : freq) {
        CHECK(std::abs(count / 100000.0 - 0.2) < 0.01);
    }
}

TEST_CASE("requests survive a JSONL round trip") {
    Usecase1Workload cfg;
    cfg.duration_s = 0.5;
    cfg.seed = 23;
    const auto requests = gen_usecase1(cfg);
    REQUIRE_FALSE(requests.empty());
    const auto reloaded = load_requests_jsonl(dump_requests_jsonl(requests));
    REQUIRE(reloaded.size() == requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i) {
        CHECK(reloaded[i].id == requests[i].id);
        CHECK(reloaded[i].cls == requests[i].cls);
        CHECK(reloaded[i].submission_s == requests[i].submission_s);
        REQUIRE(reloaded[i].activities.size() == requests[i].activities.size());
        for (std::size_t k = 0; k < requests[i].activities.size(); ++k) {
            if (const auto* proc = std::get_if<ProcessingActivity>(&requests[i].activities[k])) {
                const auto& got = std::get<ProcessingActivity>(reloaded[i].activities[k]);
                CHECK(got.vm_id == proc->vm_id);
                CHECK(got.workload_mi == proc->workload_mi);
            } else {
                const auto& want = std::get<TransmissionActivity>(requests[i].activities[k]);
                const auto& got = std::get<TransmissionActivity>(reloaded[i].activities[k]);
                CHECK(got.channel_id == want.channel_id);
                CHECK(got.packet_bytes == want.packet_bytes);
            }
        }
    }
}
