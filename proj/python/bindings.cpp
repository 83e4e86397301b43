#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "recur/error.hpp"
#include "recur/io.hpp"
#include "recur/spectrum.hpp"
#include "recur/thermo.hpp"
#include "recur/verify.hpp"

namespace py = pybind11;
using namespace recur;

namespace {

MarkovExpandingMap map_named(const std::string& name) {
  return io::parse_map("family = " + name + "\n");
}

SubshiftOfFiniteType shift_named(const std::string& name) {
  if (name == "golden") return SubshiftOfFiniteType::golden_mean();
  if (name.rfind("full:", 0) == 0)
    return SubshiftOfFiniteType::full_shift(std::stoul(name.substr(5)));
  fail(ErrorKind::ConfigError, "unknown shift '" + name + "'");
}

py::dict estimate_dict(const RecurrenceEstimate& e) {
  py::dict d;
  d["lower"] = e.lower;
  d["upper"] = e.upper;
  d["policy"] = e.policy;
  d["samples"] = e.samples;
  return d;
}

}  // namespace

PYBIND11_MODULE(_recur, m) {
  m.doc() = "Recurrence rates, pressure and dimension for expanding Markov maps";

  static py::exception<Error> error(m, "RecurError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(),
                      (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  m.def("exit_code", [](const std::string& kind) {
    for (int k = 0; k <= static_cast<int>(ErrorKind::VerificationFailed); ++k)
      if (to_string(static_cast<ErrorKind>(k)) == kind)
        return exit_code(static_cast<ErrorKind>(k));
    throw py::value_error("unknown error kind");
  });

  m.def("repetition_times",
        [](const std::vector<Symbol>& w) { return repetition_times(w); },
        "R_k for k = 0..len-1 (index 0 unused; None when the block never recurs)");

  m.def(
      "pressure",
      [](const std::string& shift, const std::vector<double>& symbol_values) {
        const auto sft = shift_named(shift);
        const auto phi = symbol_values.empty()
                             ? Potential::constant(sft.base_alphabet(), 0.0)
                             : Potential::from_symbol_values(symbol_values);
        return pressure(sft, phi);
      },
      py::arg("shift") = "full:2", py::arg("symbol_values") = std::vector<double>{});

  m.def(
      "pressure_with_holes",
      [](const std::string& shift, const std::vector<std::string>& holes) {
        const auto sft = shift_named(shift);
        std::vector<Word> words;
        for (const auto& h : holes) words.push_back(Word::parse(h, sft.base_alphabet()));
        return pressure_with_holes(sft, Potential::constant(sft.base_alphabet(), 0.0),
                                   words);
      },
      py::arg("shift"), py::arg("holes"));

  m.def(
      "bowen_dimension",
      [](const std::string& map, std::size_t level) {
        return bowen_dimension(map_named(map), level).dimension;
      },
      py::arg("map"), py::arg("level") = 1);

  m.def(
      "ell_sequence",
      [](double lower, double upper, std::size_t max_index, std::size_t n0,
         std::uint64_t cap) {
        return build_ell_sequence(lower, upper, max_index, n0, cap).values;
      },
      py::arg("lower"), py::arg("upper"), py::arg("max_index"), py::arg("n0") = 2,
      py::arg("cap") = kNoCap);

  m.def(
      "lemma_trials",
      [](std::size_t trials, std::size_t alphabet, std::uint64_t limit,
         std::uint64_t seed, bool mutant, std::size_t threads) {
        InsertOptions opt;
        opt.skip_y_rule = mutant;
        py::list out;
        for (const auto& r : lemma_trials(trials, alphabet, limit, seed, opt, threads)) {
          py::dict d;
          d["seed"] = r.seed;
          d["outer_size"] = r.outer_size;
          d["n0"] = r.n0;
          d["k_max"] = r.k_max;
          d["violations"] = r.violations;
          out.append(d);
        }
        return out;
      },
      py::arg("trials"), py::arg("alphabet") = 0, py::arg("limit") = 1000000,
      py::arg("seed") = 1, py::arg("mutant") = false, py::arg("threads") = 1);

  m.def(
      "construct",
      [](double alpha, double beta, std::size_t n, std::size_t horizon,
         std::uint64_t seed, const std::string& map, const std::string& cylinder) {
        const auto mp = map_named(map);
        ConstructOptions opt;
        if (!cylinder.empty())
          opt.cylinder = Word::parse(cylinder, mp.shift().base_alphabet());
        const auto p = construct_E_point(mp, alpha, beta, n, horizon, seed, opt);
        py::dict d;
        d["x"] = p.x;
        d["lambda"] = p.lambda;
        d["mean_return"] = p.mean_return;
        d["ell"] = p.ell.values;
        d["ell_first"] = p.ell.first_index();
        d["accessible"] = p.accessible;
        d["identities_hold"] = p.identities_hold();
        d["perturbations_hold"] = p.perturbations_hold();
        d["symbolic"] = estimate_dict(p.symbolic);
        return d;
      },
      py::arg("alpha"), py::arg("beta"), py::arg("n"), py::arg("horizon") = 1000000,
      py::arg("seed") = 1, py::arg("map") = "doubling", py::arg("cylinder") = "");

  m.def(
      "ae_experiment",
      [](const std::string& map, std::vector<double> weights, std::size_t points,
         std::size_t horizon, std::uint64_t seed, int r_from, int r_to,
         std::size_t threads) {
        const auto mp = map_named(map);
        Potential phi = log_derivative_potential(mp, 1).scaled(-1);
        if (!weights.empty()) {
          for (auto& w : weights) w = std::log(w);
          phi = Potential::from_symbol_values(weights);
        }
        const auto s = ae_rate_experiment(mp, phi, points, horizon, seed,
                                          dyadic_radii(r_from, r_to), threads);
        py::dict d;
        d["median"] = s.median;
        d["q1"] = s.q1;
        d["q3"] = s.q3;
        d["target"] = s.target;
        std::vector<double> rates;
        for (const auto& r : s.rows) rates.push_back(r.rate ? *r.rate : NAN);
        d["rates"] = rates;
        return d;
      },
      py::arg("map") = "doubling", py::arg("weights") = std::vector<double>{},
      py::arg("points") = 100, py::arg("horizon") = 1000000, py::arg("seed") = 1,
      py::arg("r_from") = 5, py::arg("r_to") = 16, py::arg("threads") = 1);

  m.def(
      "dimension_ladder",
      [](const std::string& map, const std::vector<std::size_t>& schedule) {
        const auto l = dimension_ladder(map_named(map), schedule);
        py::dict d;
        d["full_dimension"] = l.full_dimension;
        std::vector<double> dims, gaps;
        for (const auto& r : l.rows) {
          dims.push_back(r.dimension);
          gaps.push_back(r.pressure_gap);
        }
        d["dimensions"] = dims;
        d["pressure_gaps"] = gaps;
        return d;
      },
      py::arg("map"), py::arg("schedule"));

  m.def(
      "sandwich",
      [](const std::string& map, std::size_t points, std::size_t k_max,
         std::uint64_t seed, std::size_t word_length) {
        const auto s = sandwich_trials(map_named(map), points, k_max, seed, word_length);
        py::dict d;
        d["rows"] = s.rows.size();
        d["violations"] = s.violations;
        d["censored"] = s.censored;
        return d;
      },
      py::arg("map"), py::arg("points") = 50, py::arg("k_max") = 14,
      py::arg("seed") = 1, py::arg("word_length") = 1u << 20);
}
