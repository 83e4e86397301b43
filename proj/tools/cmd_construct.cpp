#include <cmath>
#include <iostream>
#include <limits>
#include <random>

#include "commands.hpp"
#include "recur/error.hpp"
#include "recur/spectrum.hpp"

namespace cli {

using namespace recur;

namespace {

double parse_rate(const std::string& s, const char* what) {
  const auto v = io::parse_list(s);
  if (v.size() != 1 || !(v[0] >= 0))
    fail(ErrorKind::ConfigError, std::string("bad ") + what + " '" + s + "'");
  return v[0];
}

json estimate_json(const RecurrenceEstimate& e) {
  return {{"lower", num(e.lower)},
          {"upper", num(e.upper)},
          {"window_from", e.window_from},
          {"window_to", e.window_to},
          {"policy", e.policy},
          {"samples", e.samples.size()},
          {"censored", e.censored}};
}

void write_rates(Context& ctx, const std::string& name, const char* scale,
                 const RecurrenceEstimate& e) {
  auto t = ctx.csv(name, {scale, "ratio", "in_window"});
  for (std::size_t i = 0; i < e.samples.size(); ++i)
    t.row({io::fmt(e.samples[i].first), io::fmt(e.samples[i].second),
           i >= e.window_from && i <= e.window_to ? "1" : "0"});
}

}  // namespace

void add_construct(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand(
      "construct", "Build a point with prescribed lower/upper recurrence rates");
  struct Args {
    std::string map = "doubling", alpha = "0.3", beta = "0.8", cylinder;
    std::size_t n = 3, horizon = 1000000, n0 = 0;
    double tolerance = 0.05;
    bool geometric = false;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--map", a->map, "map family or config file");
  cmd->add_option("--alpha", a->alpha, "lower rate");
  cmd->add_option("--beta", a->beta, "upper rate (inf allowed)");
  cmd->add_option("--n", a->n, "return-time bound of the source")
      ->check(CLI::Range(2, 64));
  cmd->add_option("--horizon", a->horizon, "induced letters to build")
      ->check(CLI::Range(16, 100000000));
  cmd->add_option("--cylinder", a->cylinder, "base cylinder A");
  cmd->add_option("--n0", a->n0, "first l-index (0: automatic)");
  cmd->add_option("--tolerance", a->tolerance, "Birkhoff tolerance of the source")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--geometric", a->geometric, "also run the geometric route");
  cmd->callback([=, &ctx] {
    ctx.command = "construct";
    const double alpha = parse_rate(a->alpha, "--alpha");
    const double beta = parse_rate(a->beta, "--beta");
    if (alpha > beta) fail(ErrorKind::ConfigError, "need alpha <= beta");
    ctx.params = {{"map", a->map},         {"alpha", num(alpha)},
                  {"beta", num(beta)},     {"n", a->n},
                  {"horizon", a->horizon}, {"cylinder", a->cylinder},
                  {"n0", a->n0},           {"tolerance", num(a->tolerance)},
                  {"geometric", a->geometric}};
    const auto map = load_map_arg(a->map);
    ConstructOptions opt;
    opt.n0 = a->n0;
    opt.birkhoff_tolerance = a->tolerance;
    opt.geometric = a->geometric;
    if (!a->cylinder.empty())
      opt.cylinder = Word::parse(a->cylinder, map.shift().base_alphabet());
    if (ctx.dry_run) return ctx.write_manifest("dry-run");

    const auto p =
        construct_E_point(map, alpha, beta, a->n, a->horizon, ctx.seed, opt);
    {
      auto t = ctx.csv("ell.csv", {"k", "ell", "log_rate"});
      for (std::size_t k = p.ell.first_index(); k <= p.ell.last_index(); ++k)
        t.row({str(k), std::to_string(p.ell.at(k)),
               io::fmt(std::log(static_cast<double>(p.ell.at(k))) / k)});
    }
    {
      auto t = ctx.csv("identities.csv",
                       {"k", "ell", "induced_repetition", "base_scale",
                        "expected_base", "base_repetition", "holds"});
      auto opt_str = [](const std::optional<std::size_t>& v) {
        return v ? std::to_string(*v) : std::string("censored");
      };
      for (const auto& c : p.identities)
        t.row({str(c.k), std::to_string(c.ell), opt_str(c.induced_repetition),
               str(c.base_scale), str(c.expected_base),
               opt_str(c.base_repetition), c.holds ? "1" : "0"});
    }
    {
      auto t = ctx.csv("perturbation.csv", {"k", "deviation", "bound", "holds"});
      for (const auto& c : p.perturbations)
        t.row({str(c.k), io::fmt(c.deviation), io::fmt(c.bound),
               c.holds ? "1" : "0"});
    }
    write_rates(ctx, "rates.csv", "scale", p.symbolic);
    if (p.geometric) write_rates(ctx, "geometric.csv", "radius", *p.geometric);

    json out = {{"alpha", num(p.alpha)},
                {"beta", num(p.beta)},
                {"n", p.n},
                {"cylinder", p.outer.base.to_string()},
                {"marker", p.marker.to_string()},
                {"lambda", num(p.lambda)},
                {"mean_return", num(p.mean_return)},
                {"rate_lower", num(p.rate_lower)},
                {"rate_upper", num(p.rate_upper)},
                {"outer_letters", p.outer.size()},
                {"c", p.spec.c},
                {"c_bar", p.spec.c_bar},
                {"ell_first", p.ell.first_index()},
                {"ell_last", p.ell.last_index()},
                {"x", num(p.x)},
                {"base_length", p.base.size()},
                {"accessible", p.accessible},
                {"identities_hold", p.identities_hold()},
                {"perturbations_hold", p.perturbations_hold()},
                {"symbolic", estimate_json(p.symbolic)},
                {"source_attempts", p.source.attempts},
                {"source_psi_average", num(p.source.psi_average)},
                {"source_return_average", num(p.source.return_average)}};
    if (p.geometric) out["geometric"] = estimate_json(*p.geometric);
    ctx.write_json("construct.json", out);
    std::cout << out.dump() << '\n';
    if (!p.identities_hold()) {
      ctx.write_manifest("failed");
      fail(ErrorKind::VerificationFailed,
           "the repetition identity failed at some accessible k");
    }
    ctx.write_manifest("ok");
  });
}

void add_recurrence(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("recurrence", "Return times and recurrence rates of one point");
  struct Args {
    std::string map = "doubling", word;
    std::optional<double> x;
    bool periodic = false, sample = false;
    std::size_t horizon = 1000000;
    int r_from = 5, r_to = 16;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--map", a->map, "map family or config file");
  auto* ox = cmd->add_option("--x", a->x, "point in [0,1]");
  auto* ow = cmd->add_option("--word", a->word, "coding word of the point");
  auto* os = cmd->add_flag("--sample", a->sample,
                           "draw the point from the measure of maximal dimension");
  ox->excludes(ow)->excludes(os);
  ow->excludes(os);
  cmd->add_flag("--periodic", a->periodic, "repeat --word periodically");
  cmd->add_option("--horizon", a->horizon, "orbit length")
      ->check(CLI::Range(2, 200000000));
  cmd->add_option("--r-from", a->r_from, "largest radius 2^-r_from");
  cmd->add_option("--r-to", a->r_to, "smallest radius 2^-r_to");
  cmd->callback([=, &ctx] {
    ctx.command = "recurrence";
    ctx.params = {{"map", a->map},         {"word", a->word},
                  {"periodic", a->periodic}, {"sample", a->sample},
                  {"horizon", a->horizon}, {"r_from", a->r_from},
                  {"r_to", a->r_to}};
    if (a->x) ctx.params["x"] = num(*a->x);
    if (!a->x && a->word.empty() && !a->sample)
      fail(ErrorKind::ConfigError, "give one of --x, --word, --sample");
    if (a->r_from < 1 || a->r_to < a->r_from || a->r_to > 60)
      fail(ErrorKind::ConfigError, "need 1 <= r-from <= r-to <= 60");
    const auto map = load_map_arg(a->map);
    const std::size_t B = map.shift().base_alphabet();
    const std::size_t length = a->horizon + decode_tail(map);
    std::optional<Word> given;
    if (!a->word.empty()) given = Word::parse(a->word, B);
    if (ctx.dry_run) return ctx.write_manifest("dry-run");

    Word w;
    if (a->x) {
      w = code(map, *a->x, length);
    } else if (given) {
      if (a->periodic) {
        std::vector<Symbol> s;
        s.reserve(length);
        while (s.size() < length) s.push_back((*given)[s.size() % given->size()]);
        w = Word(std::move(s), B);
      } else {
        if (given->size() < length)
          fail(ErrorKind::HorizonTooShort,
               "word has " + str(given->size()) + " symbols, need " +
                   str(length) + " (or pass --periodic)");
        w = *given;
      }
    } else {
      const double s = bowen_dimension(map).dimension;
      const ChainSampler sampler(equilibrium_state(
          map.shift(), log_derivative_potential(map, 1).scaled(-s)));
      w = sampler.sample(length, ctx.seed);
    }
    const auto orbit = orbit_from_word(map, w, a->horizon);
    const auto radii = dyadic_radii(a->r_from, a->r_to);
    const auto taus = return_times(orbit, radii);
    const auto geo = geometric_rate(orbit, radii);
    const auto slope = regression_rate(taus, radii);
    {
      auto t = ctx.csv("recurrence.csv", {"radius", "tau", "ratio"});
      for (std::size_t i = 0; i < radii.size(); ++i) {
        if (censored(taus[i])) {
          t.row({io::fmt(radii[i]), "censored", "nan"});
          continue;
        }
        const double tau = static_cast<double>(value_of(taus[i]));
        t.row({io::fmt(radii[i]), str(value_of(taus[i])),
               io::fmt(std::log(tau) / -std::log(radii[i]))});
      }
    }
    std::vector<std::size_t> scales;
    for (std::size_t k = 1; k < 64 && k < w.size(); ++k) scales.push_back(k);
    const auto sym = symbolic_rate(map, w.prefix(a->horizon), scales);
    write_rates(ctx, "symbolic.csv", "k", sym);
    json out = {{"x", num(orbit.front())},
                {"geometric", estimate_json(geo)},
                {"symbolic", estimate_json(sym)},
                {"regression_rate", slope ? num(*slope) : json(nullptr)},
                {"censored", geo.censored}};
    ctx.write_json("recurrence.json", out);
    std::cout << out.dump() << '\n';
    if (!slope) {
      ctx.write_manifest("censored");
      fail(ErrorKind::Censored, "fewer than two radii returned within the horizon");
    }
    ctx.write_manifest("ok");
  });
}

}  // namespace cli
