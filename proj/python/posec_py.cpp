#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "posec/error.hpp"
#include "posec/generators.hpp"
#include "posec/greedy.hpp"
#include "posec/poset.hpp"
#include "posec/poset_io.hpp"
#include "posec/rational.hpp"
#include "posec/simulator.hpp"
#include "posec/statistics.hpp"

namespace py = pybind11;
using namespace posec;

namespace {

WeightRanking ranking_from(const std::vector<std::size_t>& rank) { return WeightRanking(rank); }

}  // namespace

PYBIND11_MODULE(_posec, m) {
  m.doc() = "C++ core of the partially ordered secretary toolkit";
  m.attr("__version__") = POSEC_VERSION;
  m.attr("DEFAULT_THRESHOLD") = kDefaultThreshold;

  auto base = py::register_exception<Error>(m, "PosecError");
  py::register_exception<CycleError>(m, "CycleError", base.ptr());
  py::register_exception<ElementIndexError>(m, "ElementIndexError", base.ptr());
  py::register_exception<EmptyPosetError>(m, "EmptyPosetError", base.ptr());
  py::register_exception<TooLargeError>(m, "TooLargeError", base.ptr());
  py::register_exception<NotMaximalError>(m, "NotMaximalError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<ZeroTrialsError>(m, "ZeroTrialsError", base.ptr());
  py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  py::class_<Poset>(m, "Poset")
      .def(py::init([](std::size_t n, const std::vector<Relation>& pairs) { return Poset::from_relations(n, pairs); }),
           py::arg("n"), py::arg("relations") = std::vector<Relation>{})
      .def_property_readonly("n", &Poset::size)
      .def("__len__", &Poset::size)
      .def("less", &Poset::less)
      .def("maximal_elements", &Poset::maximal_elements)
      .def("is_maximal", &Poset::is_maximal)
      .def("elements_above", &Poset::elements_above)
      .def("relations", &Poset::relations)
      .def("cover_relations", &Poset::cover_relations)
      .def("induced", [](const Poset& p, const std::vector<ElementId>& members) { return p.induced(SubsetMap(members)); })
      .def("__eq__", [](const Poset& a, const Poset& b) { return a == b; })
      .def("__repr__", [](const Poset& p) {
        return "<Poset n=" + std::to_string(p.size()) + " relations=" + std::to_string(p.relation_count()) + ">";
      });

  m.def("chain", &chain);
  m.def("antichain", &antichain);
  m.def("wedge", &wedge);
  m.def("boolean_lattice", &boolean_lattice);
  m.def("random_poset", &random_poset, py::arg("n"), py::arg("p"), py::arg("seed"));
  m.def("forest_of_chains", [](const std::vector<std::size_t>& lengths) { return forest_of_chains(lengths); });
  m.def("load_poset_source", [](const std::string& s) { return load_poset_source(s); });
  m.def("parse_poset", [](const std::string& s) { return parse_poset(s); });
  m.def("format_poset", &format_poset);

  m.def("greedy_chain", [](const Poset& p, const std::vector<std::size_t>& rank) {
    return greedy_chain(p, ranking_from(rank));
  }, py::arg("poset"), py::arg("rank"));
  m.def("greedy_maximum", [](const Poset& p, const std::vector<std::size_t>& rank) {
    return greedy_maximum(p, ranking_from(rank));
  }, py::arg("poset"), py::arg("rank"));
  m.def("is_tagged", [](const Poset& p, ElementId x, const std::vector<std::size_t>& rank) {
    return is_tagged(p, x, ranking_from(rank));
  }, py::arg("poset"), py::arg("x"), py::arg("rank"));

  // Exact values cross the boundary as "p/q" strings; the Python wrapper turns
  // them into fractions.Fraction.
  m.def("mu_exact", [](const Poset& p, std::size_t cap) {
    const MuTable table = mu_exact(p, cap);
    std::vector<std::string> out;
    for (ElementId x = 0; x < table.size(); ++x) out.push_back(to_string(table.at(x)));
    return out;
  }, py::arg("poset"), py::arg("cap") = kMuEnumerationCap);
  m.def("mu_t_exact", [](const Poset& p, ElementId x, const std::string& t, std::size_t cap) {
    return to_string(mu_t_exact(p, x, parse_rational(t), cap));
  }, py::arg("poset"), py::arg("x"), py::arg("t"), py::arg("cap") = kMuTEnumerationCap);
  m.def("check_mu_monotonicity", [](const Poset& p, const std::vector<std::string>& grid, std::size_t cap) {
    std::vector<Rational> ts;
    for (const auto& t : grid) ts.push_back(parse_rational(t));
    std::vector<std::tuple<ElementId, std::string, std::string, std::string>> out;
    for (const auto& v : check_mu_monotonicity(p, ts, cap).violations) {
      out.emplace_back(v.element, to_string(v.t), to_string(v.mu_t), to_string(v.mu));
    }
    return out;
  }, py::arg("poset"), py::arg("grid"), py::arg("cap") = kMuTEnumerationCap);

  py::class_<Trial>(m, "Trial")
      .def(py::init([](std::vector<double> times, std::vector<double> weights) {
        return Trial{std::move(times), std::move(weights)};
      }), py::arg("arrival_time"), py::arg("weight"))
      .def_readwrite("arrival_time", &Trial::arrival_time)
      .def_readwrite("weight", &Trial::weight)
      .def("__len__", &Trial::size);

  m.def("sample_trial", [](std::size_t n, std::uint64_t seed) {
    Engine rng(seed);
    return sample_trial(n, rng);
  }, py::arg("n"), py::arg("seed"));
  m.def("discrete_adapter", [](const std::vector<ElementId>& order, std::uint64_t seed) {
    Engine rng(seed);
    return discrete_adapter(order, rng);
  }, py::arg("arrival_order"), py::arg("seed"));

  py::class_<TagEvent>(m, "TagEvent")
      .def_readonly("time", &TagEvent::time)
      .def_readonly("element", &TagEvent::element)
      .def_readonly("tagged", &TagEvent::tagged)
      .def("__repr__", [](const TagEvent& e) {
        return "<TagEvent t=" + std::to_string(e.time) + " element=" + std::to_string(e.element) +
               (e.tagged ? " tagged>" : ">");
      });

  py::class_<Outcome>(m, "Outcome")
      .def_readonly("accepted", &Outcome::accepted)
      .def_readonly("accept_time", &Outcome::accept_time)
      .def_readonly("success", &Outcome::success)
      .def_readonly("log", &Outcome::log);

  m.def("run_strategy", &run_strategy, py::arg("poset"), py::arg("trial"), py::arg("tau") = kDefaultThreshold);
  m.def("tag_sequence", &tag_sequence, py::arg("poset"), py::arg("trial"));

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("successes", &Estimate::successes)
      .def_readonly("trials", &Estimate::trials)
      .def_readonly("p_hat", &Estimate::p_hat)
      .def_readonly("ci_low", &Estimate::ci_low)
      .def_readonly("ci_high", &Estimate::ci_high)
      .def_readonly("confidence", &Estimate::confidence)
      .def_readonly("master_seed", &Estimate::master_seed)
      .def_readonly("tau", &Estimate::tau)
      .def("__eq__", [](const Estimate& a, const Estimate& b) { return a == b; })
      .def("__repr__", [](const Estimate& e) {
        return "<Estimate p_hat=" + std::to_string(e.p_hat) + " ci=[" + std::to_string(e.ci_low) + ", " +
               std::to_string(e.ci_high) + "] trials=" + std::to_string(e.trials) + ">";
      });

  py::class_<LemmaReport>(m, "LemmaReport")
      .def_readonly("statistic", &LemmaReport::statistic)
      .def_readonly("label", &LemmaReport::label)
      .def_readonly("observed", &LemmaReport::observed)
      .def_readonly("reference", &LemmaReport::reference)
      .def_readonly("p_value", &LemmaReport::p_value)
      .def_readonly("passed", &LemmaReport::passed)
      .def_readonly("sample_size", &LemmaReport::sample_size);

  auto options = [](unsigned workers, double confidence) { return SimulationOptions{workers, confidence}; };

  m.def("estimate_success", [options](const Poset& p, double tau, std::uint64_t trials, std::uint64_t seed,
                                      unsigned workers, double confidence) {
    py::gil_scoped_release release;
    return estimate_success(p, tau, trials, seed, options(workers, confidence));
  }, py::arg("poset"), py::arg("tau") = kDefaultThreshold, py::arg("trials") = 1'000'000, py::arg("seed") = 1,
     py::arg("workers") = 0, py::arg("confidence") = kDefaultConfidence);
  m.def("threshold_sweep", [options](const Poset& p, const std::vector<double>& taus, std::uint64_t trials,
                                     std::uint64_t seed, unsigned workers, double confidence) {
    py::gil_scoped_release release;
    return threshold_sweep(p, taus, trials, seed, options(workers, confidence));
  }, py::arg("poset"), py::arg("taus"), py::arg("trials") = 1'000'000, py::arg("seed") = 1, py::arg("workers") = 0,
     py::arg("confidence") = kDefaultConfidence);
  m.def("verify_tag_marginals", [](const Poset& p, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
    py::gil_scoped_release release;
    return verify_tag_marginals(p, trials, seed, {workers, kDefaultConfidence});
  }, py::arg("poset"), py::arg("trials"), py::arg("seed") = 1, py::arg("workers") = 0);
  m.def("verify_tag_independence", [](const Poset& p, std::uint64_t trials, std::uint64_t seed, double alpha,
                                      unsigned workers) {
    IndependenceReport report;
    {
      py::gil_scoped_release release;
      report = verify_tag_independence(p, trials, seed, alpha, {workers, kDefaultConfidence});
    }
    return std::make_tuple(report.tests, report.flagged, report.passed());
  }, py::arg("poset"), py::arg("trials"), py::arg("seed") = 1, py::arg("alpha") = kDefaultAlpha,
     py::arg("workers") = 0);
  m.def("verify_last_tag_uniform", [](const Poset& p, double t, std::uint64_t trials, std::uint64_t seed,
                                      double alpha, unsigned workers) {
    py::gil_scoped_release release;
    return verify_last_tag_uniform(p, t, trials, seed, alpha, {workers, kDefaultConfidence});
  }, py::arg("poset"), py::arg("t"), py::arg("trials"), py::arg("seed") = 1, py::arg("alpha") = kDefaultAlpha,
     py::arg("workers") = 0);
  m.def("verify_tagged_given_arrival", [](const Poset& p, ElementId x, double t, std::uint64_t trials,
                                          std::uint64_t seed, unsigned workers) {
    py::gil_scoped_release release;
    return verify_tagged_given_arrival(p, x, t, trials, seed, {workers, kDefaultConfidence});
  }, py::arg("poset"), py::arg("x"), py::arg("t"), py::arg("trials"), py::arg("seed") = 1, py::arg("workers") = 0);
}
