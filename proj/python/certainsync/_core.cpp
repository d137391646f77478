// Python bindings for the reconciliation library: construction inspection,
// in-memory sync, universe reduction, and the experiment runner.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "certainsync/bench.hpp"
#include "certainsync/construction.hpp"
#include "certainsync/errors.hpp"
#include "certainsync/reduce.hpp"
#include "certainsync/sync.hpp"

namespace py = pybind11;
using namespace certainsync;

namespace {

py::dict recon_dict(const ReconOutcome& o) {
    py::dict d;
    d["status"] = o.status == ReconOutcome::Status::Done ? "done" : "exhausted";
    d["receiver_only"] = o.receiver_only;
    d["sender_only"] = o.sender_only;
    d["chunks_used"] = o.chunks_used;
    d["cells_used"] = o.cells_used;
    d["bits_on_wire"] = o.bits_on_wire;
    d["wire_bytes"] = o.wire_bytes;
    return d;
}

py::dict reduce_dict(const ReduceOutcome& o) {
    py::dict d;
    d["receiver_only"] = o.receiver_only;
    d["sender_only"] = o.sender_only;
    d["rounds"] = o.rounds;
    d["chunks_used"] = o.chunks_used;
    d["cells_used"] = o.cells_used;
    d["bits_on_wire"] = o.bits_on_wire;
    d["wire_bytes"] = o.wire_bytes;
    return d;
}

py::dict record_dict(const TrialRecord& r) {
    py::dict d;
    d["scheme"] = r.scheme;
    d["n"] = r.n;
    d["diff"] = r.diff;
    d["trial"] = r.trial;
    d["chunks"] = r.chunks;
    d["cells"] = r.cells;
    d["bits"] = r.bits;
    d["success"] = r.success;
    d["rounds"] = r.rounds;
    d["ms"] = r.ms;
    d["wire_bytes"] = r.wire_bytes;
    return d;
}

Scenario parse_scenario(const std::string& name) {
    if (name == "superset") return Scenario::Superset;
    if (name == "general") return Scenario::General;
    throw ConfigError("unknown scenario: " + name);
}

ExperimentConfig make_config(const std::string& scheme, std::uint64_t n,
                             const std::vector<std::uint64_t>& diffs, std::uint32_t trials,
                             const std::string& scenario, std::uint64_t delta_max_collisions,
                             std::uint64_t seed) {
    auto parsed = parse_scheme(scheme);
    if (!parsed) throw ConfigError("unknown scheme: " + scheme);
    ExperimentConfig config;
    config.scheme = *parsed;
    config.n = n;
    config.diffs = diffs;
    config.trials = trials;
    config.scenario = parse_scenario(scenario);
    config.delta_max_collisions = delta_max_collisions;
    config.seed = seed;
    return config;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Rateless set reconciliation with guaranteed listing";

    // Base first: translators run newest-first, so the specific types must be
    // registered after their base to win.
    auto error_base = py::register_exception<Error>(m, "Error");
    py::register_exception<ConfigError>(m, "ConfigError", error_base.ptr());
    py::register_exception<ElementOutOfUniverse>(m, "ElementOutOfUniverse", error_base.ptr());
    py::register_exception<DiffSizeUnsupported>(m, "DiffSizeUnsupported", error_base.ptr());
    py::register_exception<ChunkLimitExceeded>(m, "ChunkLimitExceeded", error_base.ptr());
    py::register_exception<ExhaustedBeforeDecode>(m, "ExhaustedBeforeDecode", error_base.ptr());
    py::register_exception<RoundLimitExceeded>(m, "RoundLimitExceeded", error_base.ptr());

    py::enum_<Family>(m, "Family")
        .value("EGH", Family::EGH)
        .value("OLS", Family::OLS)
        .value("ExtendedHamming", Family::ExtendedHamming);

    py::class_<ConstructionSpec>(m, "ConstructionSpec")
        .def_static("egh", &ConstructionSpec::egh, py::arg("n"))
        .def_static("ols", [](std::uint64_t n, std::uint64_t s) { return ConstructionSpec::ols(n, s); },
                    py::arg("n"), py::arg("s") = 0)
        .def_static("extended_hamming", &ConstructionSpec::extended_hamming, py::arg("n"))
        .def_readonly("family", &ConstructionSpec::family)
        .def_readonly("n", &ConstructionSpec::n)
        .def_readonly("ols_order", &ConstructionSpec::ols_order)
        .def("__repr__", [](const ConstructionSpec& spec) {
            std::ostringstream out;
            out << "ConstructionSpec(" << family_name(spec.family) << ", n=" << spec.n;
            if (spec.family == Family::OLS) out << ", s=" << spec.ols_order;
            out << ")";
            return out.str();
        });

    m.def("family_name", [](Family f) { return std::string(family_name(f)); }, py::arg("family"));
    m.def("default_ols_order", &default_ols_order, py::arg("n"));
    m.def("max_diff_size", &max_diff_size, py::arg("spec"));
    m.def("chunk_count_limit", &chunk_count_limit, py::arg("spec"));
    m.def("smallest_prime_count", &smallest_prime_count, py::arg("n"), py::arg("i"));

    m.def("chunk_schedule",
          [](const ConstructionSpec& spec, std::uint64_t max_chunks) {
              return chunk_schedule(spec, max_chunks).sizes;
          },
          py::arg("spec"), py::arg("max_chunks"),
          "Cell counts of the first max_chunks chunks, in transmission order.");

    m.def("decodability_profile",
          [](const ConstructionSpec& spec, std::uint64_t up_to_d) {
              return decodability_profile(spec, up_to_d).cumulative_rows;
          },
          py::arg("spec"), py::arg("up_to_d"),
          "Cumulative cell counts guaranteeing listing of diffs of size 1..up_to_d.");

    m.def("rows_for_element",
          [](const ConstructionSpec& spec, std::uint64_t chunk, std::uint64_t element) {
              return rows_for_element(spec, chunk, element);
          },
          py::arg("spec"), py::arg("chunk"), py::arg("element"),
          "0-based row offsets of the element inside the 1-based chunk.");

    m.def("materialize_rows",
          [](const ConstructionSpec& spec, std::uint64_t chunks) {
              BinaryMatrix matrix = materialize(spec, chunks);
              std::vector<std::string> rows(matrix.rows);
              for (std::uint64_t r = 0; r < matrix.rows; ++r) {
                  std::string& row = rows[r];
                  row.resize(matrix.cols);
                  for (std::uint64_t c = 0; c < matrix.cols; ++c) row[c] = matrix.at(r, c) ? '1' : '0';
              }
              return rows;
          },
          py::arg("spec"), py::arg("chunks"),
          "The first chunks of the mapping matrix as '0'/'1' strings, one per row.");

    m.def("stopping_distance",
          [](const ConstructionSpec& spec, std::uint64_t chunks) {
              return stopping_distance(materialize(spec, chunks));
          },
          py::arg("spec"), py::arg("chunks"),
          "Exhaustive smallest stopping set size of the materialized prefix.");

    m.def("reconcile",
          [](const ConstructionSpec& spec, std::vector<std::uint64_t> set1,
             std::vector<std::uint64_t> set2) {
              auto outcome = reconcile_in_memory(spec, set1, set2);
              py::dict d = recon_dict(outcome);
              d["set1"] = set1;
              d["set2"] = set2;
              return d;
          },
          py::arg("spec"), py::arg("set1"), py::arg("set2"),
          "Run one full session in memory; set1 sends, set2 receives, both converge.");

    m.def("reduced_universe_size", &reduced_universe_size, py::arg("m"),
          py::arg("delta_max_collisions"));
    m.def("expected_collisions", &expected_collisions, py::arg("m"), py::arg("n_r"));
    m.def("digest",
          [](const std::vector<std::uint64_t>& set) {
              SyncDigest d = digest(set);
              return py::make_tuple(d.cardinality, d.xor_hash);
          },
          py::arg("set"), "Order-independent (cardinality, xor-of-checksums) fingerprint.");

    m.def("universe_reduce",
          [](std::vector<std::uint64_t> set1, std::vector<std::uint64_t> set2,
             std::uint64_t delta_max_collisions, Family family, std::uint64_t seed,
             std::uint32_t round_cap) {
              auto outcome =
                  universe_reduce_sync<std::uint64_t>(set1, set2, delta_max_collisions, family,
                                                     seed, round_cap);
              py::dict d = reduce_dict(outcome);
              d["set1"] = set1;
              d["set2"] = set2;
              return d;
          },
          py::arg("set1"), py::arg("set2"), py::arg("delta_max_collisions") = 1,
          py::arg("family") = Family::EGH, py::arg("seed") = 1,
          py::arg("round_cap") = kDefaultRoundCap,
          "Reconcile arbitrary 64-bit values through salted universe reduction.");

    m.def("gen_superset_scenario",
          [](std::uint64_t n, std::uint64_t d, std::uint64_t seed) {
              std::mt19937_64 rng(seed);
              return gen_superset_scenario(n, d, rng);
          },
          py::arg("n"), py::arg("d"), py::arg("seed"));

    m.def("gen_general_scenario",
          [](std::uint64_t n, std::uint64_t a_only, std::uint64_t b_only, std::uint64_t shared,
             std::uint64_t seed) {
              std::mt19937_64 rng(seed);
              return gen_general_scenario(n, a_only, b_only, shared, rng);
          },
          py::arg("n"), py::arg("a_only"), py::arg("b_only"), py::arg("shared"), py::arg("seed"));

    m.def("run_experiment",
          [](const std::string& scheme, std::uint64_t n, const std::vector<std::uint64_t>& diffs,
             std::uint32_t trials, const std::string& scenario, std::uint64_t delta_max_collisions,
             std::uint64_t seed) {
              auto records = run_experiment(
                  make_config(scheme, n, diffs, trials, scenario, delta_max_collisions, seed));
              py::list out;
              for (const auto& r : records) out.append(record_dict(r));
              return out;
          },
          py::arg("scheme"), py::arg("n"), py::arg("diffs"), py::arg("trials") = 10,
          py::arg("scenario") = "superset", py::arg("delta_max_collisions") = 1,
          py::arg("seed") = 1, "Per-trial records for one scheme across the given diff sizes.");

    m.def("experiment_csv",
          [](const std::string& scheme, std::uint64_t n, const std::vector<std::uint64_t>& diffs,
             std::uint32_t trials, const std::string& scenario, std::uint64_t delta_max_collisions,
             std::uint64_t seed) {
              auto records = run_experiment(
                  make_config(scheme, n, diffs, trials, scenario, delta_max_collisions, seed));
              std::ostringstream out;
              write_csv(records, out);
              return out.str();
          },
          py::arg("scheme"), py::arg("n"), py::arg("diffs"), py::arg("trials") = 10,
          py::arg("scenario") = "superset", py::arg("delta_max_collisions") = 1,
          py::arg("seed") = 1, "The same records rendered as CSV with per-group mean rows.");
}
