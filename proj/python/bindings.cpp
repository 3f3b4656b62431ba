#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kab/discovery.hpp"
#include "kab/search.hpp"
#include "kab/verifier.hpp"
#include "kab/version.hpp"

namespace py = pybind11;
using namespace kab;

namespace {

std::vector<std::string> strs(const auto& words) {
  std::vector<std::string> out;
  for (const Word& w : words) out.push_back(w.str());
  return out;
}

AvoidancePredicate predicate(int power, int k, int min_period, std::optional<int> budget) {
  AvoidancePredicate p{power, k, min_period, budget};
  p.validate();
  return p;
}

SearchLimits limits(std::optional<std::size_t> max_length, std::optional<std::uint64_t> max_nodes) {
  SearchLimits l;
  l.max_length = max_length;
  l.max_nodes = max_nodes;
  return l;
}

py::dict report_dict(const SearchReport& r) {
  py::dict d;
  d["exhausted"] = r.exhausted;
  d["node_count"] = r.node_count;
  d["max_depth"] = r.max_depth;
  d["witness"] = r.witness.str();
  d["per_depth_counts"] = r.per_depth_counts;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "k-abelian repetition avoidance";
  m.attr("__version__") = kVersion;

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

  m.def(
      "k_abelian_eq",
      [](const std::string& u, const std::string& v, std::size_t k, int alphabet) {
        return k_abelian_eq(Word::parse(u, alphabet), Word::parse(v, alphabet), k);
      },
      py::arg("u"), py::arg("v"), py::arg("k"), py::arg("alphabet") = 0);

  m.def(
      "find_power",
      [](const std::string& w, int power, int k, int min_period) -> std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> {
        const auto o = find_power(Word::parse(w), predicate(power, k, min_period, {}));
        if (!o) return std::nullopt;
        return std::make_tuple(o->start, o->period, o->power);
      },
      "First occurrence as (start, period, power), or None.", py::arg("word"), py::arg("power") = 2,
      py::arg("k") = 1, py::arg("min_period") = 1);

  m.def(
      "distinct_squares", [](const std::string& w, int k) { return strs(distinct_squares(Word::parse(w), k)); },
      py::arg("word"), py::arg("k"));

  m.def(
      "lyndon_factorize", [](const std::string& w) { return strs(lyndon_factorize(Word::parse(w))); },
      py::arg("word"));

  m.def(
      "search",
      [](int alphabet, int power, int k, int min_period, std::optional<int> budget, const std::string& mode,
         std::optional<std::size_t> max_length, std::optional<std::uint64_t> max_nodes, unsigned threads) {
        ExecutionOptions e;
        e.threads = threads;
        SearchReport r;
        {
          py::gil_scoped_release release;
          r = exhaustive_search(alphabet, predicate(power, k, min_period, budget), parse_search_mode(mode),
                                limits(max_length, max_nodes), e);
        }
        return report_dict(r);
      },
      py::arg("alphabet"), py::arg("power") = 2, py::arg("k") = 1, py::arg("min_period") = 1,
      py::arg("budget") = py::none(), py::arg("mode") = "full", py::arg("max_length") = py::none(),
      py::arg("max_nodes") = py::none(), py::arg("threads") = 1);

  m.def(
      "random_long_word",
      [](int alphabet, int power, int k, int min_period, std::size_t target, std::uint64_t seed)
          -> std::optional<std::string> {
        RandomSearchConfig cfg;
        cfg.seed = seed;
        cfg.target_length = target;
        const auto w = random_long_word(alphabet, predicate(power, k, min_period, {}), cfg);
        if (!w) return std::nullopt;
        return w->str();
      },
      py::arg("alphabet"), py::arg("power"), py::arg("k"), py::arg("min_period"), py::arg("target"),
      py::arg("seed") = 1);

  py::class_<Morphism>(m, "Morphism")
      .def(py::init([](const std::vector<std::string>& images) {
             std::vector<Word> ws;
             for (const auto& s : images) ws.push_back(Word::parse(s));
             return Morphism(std::move(ws));
           }),
           py::arg("images"))
      .def_static("parse", &parse_morphism, py::arg("text"))
      .def_static("load", [](const std::string& path) { return load_morphism(path); }, py::arg("path"))
      .def_property_readonly("images", [](const Morphism& h) { return strs(h.images()); })
      .def("apply", [](const Morphism& h, const std::string& w) { return h.apply(Word::parse(w, int(h.domain_size()))).str(); })
      .def("__str__", &format_morphism);

  m.def(
      "verify",
      [](const Morphism& h, std::size_t k, std::size_t p, const std::string& engine, unsigned threads) {
        VerifyOptions o;
        o.threads = threads;
        o.engine = engine == "direct" ? VerifyEngine::direct : VerifyEngine::indexed;
        VerificationReport r;
        {
          py::gil_scoped_release release;
          r = verify(h, k, p, o);
        }
        py::dict d;
        d["verdict"] = to_string(r.verdict);
        d["reason"] = r.reason;
        d["raw_triples"] = r.stats.raw_triples;
        d["lattice_survivors"] = r.stats.lattice_survivors;
        d["det"] = std::to_string(r.det.numerator()) +
                   (r.det.denominator() == 1 ? "" : "/" + std::to_string(r.det.denominator()));
        return d;
      },
      py::arg("morphism"), py::arg("k"), py::arg("p"), py::arg("engine") = "indexed", py::arg("threads") = 1);

  m.def(
      "surviving_squares",
      [](const Morphism& h, std::size_t k, std::size_t p) { return strs(surviving_squares(h, k, p)); },
      py::arg("morphism"), py::arg("k"), py::arg("p"));
}
