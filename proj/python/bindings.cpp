#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sdcsim/errors.hpp"
#include "sdcsim/netos.hpp"
#include "sdcsim/scenario.hpp"
#include "sdcsim/topology.hpp"
#include "sdcsim/workload.hpp"

#include <json.hpp>

namespace py = pybind11;

namespace {

using sdcsim::Congestion;
using sdcsim::DistSpec;
using sdcsim::PlacementPolicy;

py::object json_to_py(const nlohmann::ordered_json& value) {
    using value_t = nlohmann::ordered_json::value_t;
    switch (value.type()) {
        case value_t::null: return py::none();
        case value_t::boolean: return py::bool_(value.get<bool>());
        case value_t::number_integer: return py::int_(value.get<long long>());
        case value_t::number_unsigned: return py::int_(value.get<unsigned long long>());
        case value_t::number_float: return py::float_(value.get<double>());
        case value_t::string: return py::str(value.get<std::string>());
        case value_t::array: {
            py::list out;
            for (const auto& item : value) out.append(json_to_py(item));
            return out;
        }
        case value_t::object: {
            py::dict out;
            for (auto it = value.begin(); it != value.end(); ++it) {
                out[py::str(it.key())] = json_to_py(it.value());
            }
            return out;
        }
        default: return py::none();
    }
}

Congestion congestion_from(const std::string& text) {
    if (text == "low") return Congestion::Low;
    if (text == "medium") return Congestion::Medium;
    if (text == "high") return Congestion::High;
    throw py::value_error("congestion must be low|medium|high");
}

PlacementPolicy policy_from(const std::string& text) {
    if (text == "bestfit") return PlacementPolicy::BestFit;
    if (text == "worstfit") return PlacementPolicy::WorstFit;
    throw py::value_error("policy must be bestfit|worstfit");
}

py::dict report_to_dict(const sdcsim::RunReport& report) {
    py::dict out = json_to_py(report.summary());
    out["csv"] = py::str(report.csv);
    return out;
}

}  // namespace

PYBIND11_MODULE(_sdcsim, m) {
    m.doc() = "software-defined cloud data center simulator";

    py::register_exception<sdcsim::SimError>(m, "SimulationError");

    m.def(
        "build_fat_tree",
        [](int n_hosts, int hosts_per_edge, double capacity_bps, double latency_s) {
            return sdcsim::serialize(
                sdcsim::build_fat_tree(n_hosts, hosts_per_edge, capacity_bps, latency_s));
        },
        py::arg("n_hosts"), py::arg("hosts_per_edge"), py::arg("capacity_bps") = 1e9,
        py::arg("latency_s") = 1e-3,
        "Build a canonical fat-tree and return it as topology JSON.");

    m.def(
        "validate_physical",
        [](const std::string& json_text) {
            // Parse without invariant enforcement so callers see the report.
            try {
                sdcsim::load_physical(json_text);
                return std::vector<std::string>{};
            } catch (const sdcsim::ValidationError& e) {
                return std::vector<std::string>{e.what()};
            }
        },
        py::arg("json_text"), "Empty list when valid, otherwise the violated rules.");

    m.def(
        "find_path",
        [](const std::string& physical_json, const std::string& src, const std::string& dst,
           double required_bw_bps, std::optional<double> max_latency_s) {
            const auto pt = sdcsim::load_physical(physical_json);
            const std::vector<sdcsim::LinkState> states(pt.links.size());
            const auto path =
                sdcsim::find_path(pt, states, src, dst, required_bw_bps, max_latency_s);
            std::vector<std::string> nodes{src};
            for (const auto& hop : path) nodes.push_back(hop.to);
            return nodes;
        },
        py::arg("physical_json"), py::arg("src"), py::arg("dst"), py::arg("required_bw_bps"),
        py::arg("max_latency_s") = std::nullopt,
        "Minimum-hop feasible path as a node-id sequence.");

    m.def(
        "sample",
        [](const std::string& family, py::kwargs kwargs) {
            DistSpec spec;
            auto want = [&](const char* key) {
                if (!kwargs.contains(key)) throw py::value_error(std::string("missing ") + key);
                return kwargs[key].cast<double>();
            };
            std::uint64_t seed = kwargs.contains("seed") ? kwargs["seed"].cast<std::uint64_t>() : 1;
            const std::size_t n = kwargs.contains("n") ? kwargs["n"].cast<std::size_t>() : 1;
            if (family == "lognormal") {
                spec = DistSpec::lognormal(want("mu"), want("sigma"));
            } else if (family == "pareto") {
                spec = DistSpec::pareto(want("location"), want("shape"));
            } else if (family == "exponential") {
                spec = DistSpec::exponential(want("rate"));
            } else if (family == "fixed_rate") {
                spec = DistSpec::fixed_rate(want("rate"));
            } else {
                throw py::value_error("family must be lognormal|pareto|exponential|fixed_rate");
            }
            sdcsim::SplitMix64 rng(seed);
            std::vector<double> out(n);
            for (auto& v : out) v = sdcsim::sample(spec, rng);
            return out;
        },
        py::arg("family"), "Seeded draws from one of the workload distributions.");

    m.def(
        "run_usecase1",
        [](const std::string& congestion, bool priority_on, std::uint64_t seed, double duration_s,
           std::optional<double> reservation_bps, std::optional<double> capacity_bps) {
            sdcsim::Usecase1Options opt;
            opt.congestion = congestion_from(congestion);
            opt.priority_on = priority_on;
            opt.seed = seed;
            opt.duration_s = duration_s;
            opt.reservation_bps = reservation_bps;
            if (capacity_bps) opt.capacity_bps = *capacity_bps;
            return report_to_dict(sdcsim::run_usecase1(opt));
        },
        py::arg("congestion"), py::arg("priority_on"), py::arg("seed") = 1,
        py::arg("duration_s") = 30.0, py::arg("reservation_bps") = std::nullopt,
        py::arg("capacity_bps") = std::nullopt,
        "QoS-aware bandwidth allocation experiment; returns the run report.");

    m.def(
        "run_usecase2",
        [](const std::string& policy, std::uint64_t seed) {
            sdcsim::Usecase2Options opt;
            opt.policy = policy_from(policy);
            opt.seed = seed;
            return report_to_dict(sdcsim::run_usecase2(opt));
        },
        py::arg("policy"), py::arg("seed") = 1,
        "Energy-aware VM placement experiment; returns the run report.");

    m.def(
        "run_documents",
        [](const std::string& physical_json, const std::string& virtual_json,
           const std::string& workload_jsonl, std::uint64_t seed, std::optional<double> until_s,
           const std::string& policy) {
            sdcsim::RunOptions opt;
            opt.physical_json = physical_json;
            opt.virtual_json = virtual_json;
            opt.workload_jsonl = workload_jsonl;
            opt.seed = seed;
            opt.until_s = until_s;
            opt.policy = policy_from(policy);
            return report_to_dict(sdcsim::run_documents(opt));
        },
        py::arg("physical_json"), py::arg("virtual_json"), py::arg("workload_jsonl"),
        py::arg("seed") = 1, py::arg("until_s") = std::nullopt, py::arg("policy") = "bestfit",
        "Simulate externally supplied documents; returns the run report.");
}
