#include <cmath>
#include <iostream>
#include <optional>

#include "commands.hpp"
#include "recur/error.hpp"
#include "recur/thermo.hpp"

namespace cli {

using namespace recur;

namespace {

struct ShiftArgs {
  std::string map, sft_file, shift;
};

SubshiftOfFiniteType pick_shift(const ShiftArgs& a,
                                std::optional<MarkovExpandingMap>& map) {
  const int given = !a.map.empty() + !a.sft_file.empty() + !a.shift.empty();
  if (given > 1)
    fail(ErrorKind::ConfigError, "use only one of --map, --sft, --shift");
  if (!a.map.empty()) {
    map = load_map_arg(a.map);
    return map->shift();
  }
  if (!a.sft_file.empty()) return io::load_sft(a.sft_file);
  const std::string s = a.shift.empty() ? "full:2" : a.shift;
  if (s == "golden") return SubshiftOfFiniteType::golden_mean();
  if (s.rfind("full:", 0) == 0) {
    const auto n = io::parse_list(s.substr(5));
    if (n.size() != 1 || n[0] < 1 || n[0] != std::floor(n[0]))
      fail(ErrorKind::ConfigError, "bad --shift '" + s + "'");
    return SubshiftOfFiniteType::full_shift(static_cast<std::size_t>(n[0]));
  }
  fail(ErrorKind::ConfigError, "unknown --shift '" + s + "' (full:N, golden)");
}

std::vector<Word> parse_words(const std::string& text, std::size_t alphabet) {
  std::vector<Word> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(Word::parse(cur, alphabet));
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ' ') flush();
    else cur.push_back(ch);
  }
  flush();
  return out;
}

// log of the largest root of x^n = x^{n-1} + ... + 1.
double ones_reference(std::size_t n) {
  auto f = [n](double x) {
    double rhs = 0.0, p = 1.0;
    for (std::size_t i = 0; i < n; ++i, p *= x) rhs += p;
    return p - rhs;
  };
  double lo = 1.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? hi : lo) = mid;
  }
  return std::log(0.5 * (lo + hi));
}

}  // namespace

void add_pressure(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("pressure", "Topological pressure of a potential");
  auto a = std::make_shared<ShiftArgs>();
  auto potential = std::make_shared<std::string>();
  auto weights = std::make_shared<std::string>();
  auto logdf = std::make_shared<bool>(false);
  auto scale = std::make_shared<double>(1.0);
  auto holes = std::make_shared<std::string>();
  cmd->add_option("--map", a->map, "map family or config file");
  cmd->add_option("--sft", a->sft_file, "adjacency list file");
  cmd->add_option("--shift", a->shift, "full:N or golden (default full:2)");
  cmd->add_option("--potential", *potential, "CSV of cylinder,value");
  cmd->add_option("--weights", *weights,
                  "symbol probabilities p_i; potential log p_i");
  cmd->add_flag("--logdf", *logdf, "potential log|Df| of the map");
  cmd->add_option("--scale", *scale, "multiply the potential");
  cmd->add_option("--holes", *holes, "comma-separated hole words");
  cmd->callback([=, &ctx] {
    ctx.command = "pressure";
    ctx.params = {{"map", a->map},       {"sft", a->sft_file},
                  {"shift", a->shift},   {"potential", *potential},
                  {"weights", *weights}, {"logdf", *logdf},
                  {"scale", num(*scale)}, {"holes", *holes}};
    std::optional<MarkovExpandingMap> map;
    const auto sft = pick_shift(*a, map);
    const std::size_t base = sft.base_alphabet();
    std::optional<Potential> phi;
    const int kinds = !potential->empty() + !weights->empty() + *logdf;
    if (kinds > 1)
      fail(ErrorKind::ConfigError,
           "use only one of --potential, --weights, --logdf");
    if (!potential->empty()) {
      phi = io::load_potential(*potential, base);
    } else if (!weights->empty()) {
      auto p = io::parse_list(*weights);
      if (p.size() != base)
        fail(ErrorKind::ConfigError, "--weights needs one value per symbol");
      for (auto& v : p) {
        if (!(v > 0)) fail(ErrorKind::ConfigError, "weights must be positive");
        v = std::log(v);
      }
      phi = Potential::from_symbol_values(std::move(p));
    } else if (*logdf) {
      if (!map) fail(ErrorKind::ConfigError, "--logdf needs --map");
      phi = log_derivative_potential(*map, 1);
    } else {
      phi = Potential::constant(base, 0.0);
    }
    *phi = phi->scaled(*scale);
    const auto hole_words = parse_words(*holes, base);
    if (ctx.dry_run) return ctx.write_manifest("dry-run");

    const auto mu = equilibrium_state(sft, *phi);
    json out = {{"pressure", num(mu.pressure())},
                {"entropy", num(mu.entropy())},
                {"mean_potential", num(mu.mean_potential())},
                {"gibbs_constant", num(mu.gibbs_constant())},
                {"states", sft.alphabet_size()}};
    if (!hole_words.empty())
      out["pressure_with_holes"] =
          num(pressure_with_holes(sft, *phi, hole_words));
    ctx.write_json("pressure.json", out);
    std::cout << out.dump() << '\n';
    ctx.write_manifest("ok");
  });
}

void add_dimension(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("dimension", "Bowen dimension of a repeller");
  auto map_arg = std::make_shared<std::string>("doubling");
  auto level = std::make_shared<std::size_t>(1);
  auto boundary_n = std::make_shared<std::size_t>(0);
  cmd->add_option("--map", *map_arg, "map family or config file");
  cmd->add_option("--level", *level, "cylinder level of log|Df|")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--boundary-n", *boundary_n,
                  "also remove boundary cylinders up to this depth");
  cmd->callback([=, &ctx] {
    ctx.command = "dimension";
    ctx.params = {{"map", *map_arg},
                  {"level", *level},
                  {"boundary_n", *boundary_n}};
    const auto map = load_map_arg(*map_arg);
    if (ctx.dry_run) return ctx.write_manifest("dry-run");
    const auto bd = bowen_dimension(map, *level);
    json out = {{"map", map.name()},
                {"dimension", num(bd.dimension)},
                {"level", bd.level},
                {"refinement_gap", num(bd.refinement_gap)}};
    if (*boundary_n > 0) {
      auto table = ctx.csv("boundary.csv",
                           {"n", "holes", "dimension", "survivor"});
      for (const auto& s : boundary_removal_schedule(map, *boundary_n,
                                                     std::nullopt, *level))
        table.row({str(s.n), str(s.hole_count), io::fmt(s.dimension),
                   s.survivor ? "yes" : "empty"});
    }
    ctx.write_json("dimension.json", out);
    std::cout << out.dump() << '\n';
    ctx.write_manifest("ok");
  });
}

void add_holes(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("holes", "Pressure of open systems with growing holes");
  auto family = std::make_shared<std::string>("ones");
  auto map_arg = std::make_shared<std::string>("doubling");
  auto n_max = std::make_shared<std::size_t>(20);
  auto cylinder = std::make_shared<std::string>();
  auto scale = std::make_shared<double>(0.0);
  cmd->add_option("--family", *family, "ones (H_n=[1^n] on the 2-shift) or long-return")
      ->check(CLI::IsMember({"ones", "long-return"}));
  cmd->add_option("--map", *map_arg, "map for long-return holes");
  cmd->add_option("--n-max", *n_max, "largest n")->check(CLI::Range(1, 64));
  cmd->add_option("--cylinder", *cylinder, "base cylinder A (long-return)");
  cmd->add_option("--scale", *scale,
                  "potential: 0 for phi=0 (ones), else -scale*log|Df|; "
                  "long-return defaults to the Bowen dimension");
  cmd->callback([=, &ctx] {
    ctx.command = "holes";
    ctx.params = {{"family", *family}, {"map", *map_arg},
                  {"n_max", *n_max},   {"cylinder", *cylinder},
                  {"scale", num(*scale)}};
    if (*family == "ones") {
      if (ctx.dry_run) return ctx.write_manifest("dry-run");
      const auto sft = SubshiftOfFiniteType::full_shift(2);
      const auto phi = Potential::constant(2, *scale);
      const double full = pressure(sft, phi);
      auto table = ctx.csv("holes.csv", {"n", "pressure", "reference", "gap"});
      json rows = json::array();
      for (std::size_t n = 1; n <= *n_max; ++n) {
        const double p = pressure_with_holes(
            sft, phi, {Word(std::vector<Symbol>(n, 1), 2)});
        const double ref = ones_reference(n) + *scale;
        table.row({str(n), io::fmt(p), io::fmt(ref), io::fmt(full - p)});
        rows.push_back({{"n", n}, {"pressure", num(p)}, {"reference", num(ref)}});
      }
      json out = {{"family", "ones"}, {"full_pressure", num(full)}, {"rows", rows}};
      ctx.write_json("holes.json", out);
      std::cout << out.dump() << '\n';
      return ctx.write_manifest("ok");
    }
    const auto map = load_map_arg(*map_arg);
    const auto& sft = map.shift();
    const Word a = cylinder->empty()
                       ? find_connecting_paths(sft).a
                       : Word::parse(*cylinder, sft.base_alphabet());
    if (ctx.dry_run) return ctx.write_manifest("dry-run");
    const double s = *scale > 0 ? *scale : bowen_dimension(map).dimension;
    const auto phi = log_derivative_potential(map, 1).scaled(-s);
    const auto mu = equilibrium_state(sft, phi);
    const auto decay = hole_measure_decay(mu, a, *n_max);
    auto table = ctx.csv("holes.csv", {"n", "holes", "pressure", "mass"});
    json rows = json::array();
    for (const auto& [n, mass] : decay.rows) {
      if (n < 2) continue;
      const auto holes = long_return_holes(sft, a, n);
      const double p = pressure_with_holes(sft, phi, holes);
      table.row({str(n), str(holes.size()), io::fmt(p), io::fmt(mass)});
      rows.push_back({{"n", n}, {"holes", holes.size()}, {"pressure", num(p)},
                      {"mass", num(mass)}});
    }
    json out = {{"family", "long-return"}, {"cylinder", a.to_string()},
                {"scale", num(s)}, {"full_pressure", num(mu.pressure())},
                {"decay_rate", num(decay.log_rate)}, {"rows", rows}};
    ctx.write_json("holes.json", out);
    std::cout << out.dump() << '\n';
    ctx.write_manifest("ok");
  });
}

}  // namespace cli
