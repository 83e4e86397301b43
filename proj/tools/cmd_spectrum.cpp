#include <cmath>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "recur/error.hpp"
#include "recur/spectrum.hpp"
#include "recur/verify.hpp"

namespace cli {

using namespace recur;

namespace {

std::string rt(const ReturnTime& t) {
  return censored(t) ? std::string("censored") : str(value_of(t));
}

Potential measure_potential(const MarkovExpandingMap& map,
                            const std::string& measure,
                            const std::string& weights) {
  if (measure == "lebesgue") return log_derivative_potential(map, 1).scaled(-1);
  if (measure == "max-dim")
    return log_derivative_potential(map, 1)
        .scaled(-bowen_dimension(map).dimension);
  auto p = io::parse_list(weights);
  if (p.size() != map.shift().base_alphabet())
    fail(ErrorKind::ConfigError, "--weights needs one value per branch");
  double total = 0;
  for (double v : p) {
    if (!(v > 0)) fail(ErrorKind::ConfigError, "weights must be positive");
    total += v;
  }
  for (auto& v : p) v = std::log(v / total);
  return Potential::from_symbol_values(std::move(p));
}

struct GridPair {
  double alpha, beta;
  std::size_t n;
  std::string cylinder;
};

// "alpha:beta:n[:A]" entries separated by ';' or whitespace.
std::vector<GridPair> parse_pairs(const std::string& text) {
  std::vector<GridPair> out;
  std::string item;
  std::string norm = text;
  for (auto& c : norm)
    if (c == ';') c = ' ';
  std::istringstream in(norm);
  while (in >> item) {
    std::vector<std::string> f;
    std::string cur;
    for (char c : item + ":") {
      if (c == ':') {
        f.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (f.size() < 3 || f.size() > 4)
      fail(ErrorKind::ConfigError, "grid entry '" + item + "' is not alpha:beta:n[:A]");
    const auto a = io::parse_list(f[0]), b = io::parse_list(f[1]),
               n = io::parse_list(f[2]);
    if (a.size() != 1 || b.size() != 1 || n.size() != 1 || n[0] < 2 ||
        a[0] < 0 || a[0] > b[0])
      fail(ErrorKind::ConfigError, "bad grid entry '" + item + "'");
    out.push_back({a[0], b[0], static_cast<std::size_t>(n[0]),
                   f.size() == 4 ? f[3] : std::string()});
  }
  if (out.empty()) fail(ErrorKind::ConfigError, "empty --pairs");
  return out;
}

}  // namespace

void add_spectrum(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("spectrum", "Recurrence-rate spectrum experiments");
  struct Args {
    std::string mode = "ae", map, measure = "lebesgue", weights, pairs,
                schedule;
    std::size_t points = 100, horizon = 1000000, n_from = 4, n_to = 14,
                level = 1;
    int r_from = 5, r_to = 16;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--mode", a->mode, "ae, ladder or grid")
      ->check(CLI::IsMember({"ae", "ladder", "grid"}));
  cmd->add_option("--map", a->map, "map family or config file");
  cmd->add_option("--measure", a->measure, "ae: lebesgue, max-dim or weights")
      ->check(CLI::IsMember({"lebesgue", "max-dim", "weights"}));
  cmd->add_option("--weights", a->weights, "ae: Bernoulli weights per branch");
  cmd->add_option("--points", a->points, "ae: sample points")->check(CLI::PositiveNumber);
  cmd->add_option("--horizon", a->horizon, "orbit length / induced letters");
  cmd->add_option("--r-from", a->r_from, "ae: largest radius 2^-r_from");
  cmd->add_option("--r-to", a->r_to, "ae: smallest radius 2^-r_to");
  cmd->add_option("--n-from", a->n_from, "ladder: first n");
  cmd->add_option("--n-to", a->n_to, "ladder: last n");
  cmd->add_option("--schedule", a->schedule, "ladder: explicit n list");
  cmd->add_option("--level", a->level, "ladder: cylinder level of log|Df|");
  cmd->add_option("--pairs", a->pairs, "grid: alpha:beta:n[:A] entries");
  cmd->callback([=, &ctx] {
    ctx.command = "spectrum";
    ctx.params = {{"mode", a->mode}, {"map", a->map}};
    if (a->mode == "ae") {
      const auto map = load_map_arg(a->map.empty() ? "doubling" : a->map);
      ctx.params.update({{"measure", a->measure}, {"weights", a->weights},
                         {"points", a->points},   {"horizon", a->horizon},
                         {"r_from", a->r_from},   {"r_to", a->r_to}});
      if (a->r_from < 1 || a->r_to <= a->r_from || a->r_to > 60)
        fail(ErrorKind::ConfigError, "need 1 <= r-from < r-to <= 60");
      const auto phi = measure_potential(map, a->measure, a->weights);
      if (ctx.dry_run) return ctx.write_manifest("dry-run");
      const auto s = ae_rate_experiment(map, phi, a->points, a->horizon,
                                        ctx.seed, dyadic_radii(a->r_from, a->r_to),
                                        ctx.threads);
      auto t = ctx.csv("ae.csv", {"index", "seed", "x", "rate", "ratio_lower",
                                  "ratio_upper", "censored"});
      for (const auto& r : s.rows)
        t.row({str(r.index), std::to_string(r.seed), io::fmt(r.x),
               r.rate ? io::fmt(*r.rate) : "nan", io::fmt(r.ratio_lower),
               io::fmt(r.ratio_upper), str(r.censored)});
      json out = {{"mode", "ae"},           {"target", num(s.target)},
                  {"median", num(s.median)}, {"q1", num(s.q1)},
                  {"q3", num(s.q3)},         {"points", s.rows.size()}};
      ctx.write_json("spectrum.json", out);
      std::cout << out.dump() << '\n';
      return ctx.write_manifest("ok");
    }
    if (a->mode == "ladder") {
      const auto map = load_map_arg(a->map.empty() ? "slopes24" : a->map);
      std::vector<std::size_t> schedule;
      if (!a->schedule.empty()) {
        for (double v : io::parse_list(a->schedule)) {
          if (v < 2 || v != std::floor(v))
            fail(ErrorKind::ConfigError, "schedule entries must be integers >= 2");
          schedule.push_back(static_cast<std::size_t>(v));
        }
      } else {
        if (a->n_from < 2 || a->n_to < a->n_from)
          fail(ErrorKind::ConfigError, "need 2 <= n-from <= n-to");
        for (std::size_t n = a->n_from; n <= a->n_to; ++n) schedule.push_back(n);
      }
      ctx.params.update({{"schedule", schedule}, {"level", a->level}});
      if (ctx.dry_run) return ctx.write_manifest("dry-run");
      const auto ladder = dimension_ladder(map, schedule, a->level);
      auto t = ctx.csv("ladder.csv", {"n", "feasible", "pressure_gap", "dimension",
                                      "lambda", "holes", "note"});
      for (const auto& r : ladder.rows)
        t.row({str(r.n), r.feasible ? "1" : "0", io::fmt(r.pressure_gap),
               io::fmt(r.dimension), io::fmt(r.lambda), str(r.hole_count),
               r.note});
      json out = {{"mode", "ladder"},
                  {"full_dimension", num(ladder.full_dimension)},
                  {"gap_rate", num(ladder.gap_rate)}};
      if (!ladder.rows.empty())
        out["final_gap"] =
            num(ladder.full_dimension - ladder.rows.back().dimension);
      ctx.write_json("spectrum.json", out);
      std::cout << out.dump() << '\n';
      return ctx.write_manifest("ok");
    }
    const auto map = load_map_arg(a->map.empty() ? "doubling" : a->map);
    const auto pairs = parse_pairs(a->pairs.empty()
                                       ? "0:0:16:000;0.3:0.3:4:0;0.3:0.8:3:0"
                                       : a->pairs);
    ctx.params.update({{"pairs", a->pairs}, {"horizon", a->horizon}});
    if (ctx.dry_run) return ctx.write_manifest("dry-run");
    auto t = ctx.csv("grid.csv", {"alpha", "beta", "n", "cylinder", "lower",
                                  "upper", "identities_hold", "status"});
    json rows = json::array();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& g = pairs[i];
      ConstructOptions opt;
      if (!g.cylinder.empty())
        opt.cylinder = Word::parse(g.cylinder, map.shift().base_alphabet());
      try {
        const auto p = construct_E_point(map, g.alpha, g.beta, g.n, a->horizon,
                                         derive_seed(ctx.seed, i), opt);
        t.row({io::fmt(g.alpha), io::fmt(g.beta), str(g.n),
               p.outer.base.to_string(), io::fmt(p.symbolic.lower),
               io::fmt(p.symbolic.upper), p.identities_hold() ? "1" : "0", "ok"});
        rows.push_back({{"alpha", num(g.alpha)}, {"beta", num(g.beta)},
                        {"lower", num(p.symbolic.lower)},
                        {"upper", num(p.symbolic.upper)},
                        {"identities_hold", p.identities_hold()}});
      } catch (const Error& e) {
        t.row({io::fmt(g.alpha), io::fmt(g.beta), str(g.n), g.cylinder, "nan",
               "nan", "0", std::string(to_string(e.kind()))});
        rows.push_back({{"alpha", num(g.alpha)}, {"beta", num(g.beta)},
                        {"error", std::string(to_string(e.kind()))}});
      }
    }
    json out = {{"mode", "grid"}, {"rows", rows}};
    ctx.write_json("spectrum.json", out);
    std::cout << out.dump() << '\n';
    ctx.write_manifest("ok");
  });
}

void add_verify(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("verify", "Randomized checks of exact identities and inclusions");
  struct Args {
    std::string what = "lemma-g", map = "cantor3";
    std::size_t alphabet = 0, trials = 1000, limit = 1000000, points = 50,
                k_max = 14, word_length = 1u << 20;
    bool mutant = false;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("check", a->what, "lemma-g, sandwich or ball")
      ->check(CLI::IsMember({"lemma-g", "sandwich", "ball"}));
  cmd->add_option("--alphabet", a->alphabet, "lemma-g: outer alphabet size (0 random)");
  cmd->add_option("--trials", a->trials, "lemma-g: trials")->check(CLI::PositiveNumber);
  cmd->add_option("--limit", a->limit, "lemma-g: check k while l_k + k <= limit");
  cmd->add_flag("--mutant", a->mutant, "lemma-g: drop the y rule; expect failures");
  cmd->add_option("--map", a->map, "sandwich/ball: map family or config file");
  cmd->add_option("--points", a->points, "sandwich/ball: points")->check(CLI::PositiveNumber);
  cmd->add_option("--k-max", a->k_max, "sandwich/ball: largest level")
      ->check(CLI::Range(1, 40));
  cmd->add_option("--word-length", a->word_length, "sandwich/ball: coding length");
  cmd->callback([=, &ctx] {
    ctx.command = "verify";
    if (a->what == "lemma-g") {
      ctx.params = {{"check", a->what},   {"alphabet", a->alphabet},
                    {"trials", a->trials}, {"limit", a->limit},
                    {"mutant", a->mutant}};
      if (a->alphabet != 0 && a->alphabet < 3)
        fail(ErrorKind::ConfigError, "--alphabet must be 0 or >= 3");
      if (a->limit < 64) fail(ErrorKind::ConfigError, "--limit must be >= 64");
      if (ctx.dry_run) return ctx.write_manifest("dry-run");
      InsertOptions opt;
      opt.skip_y_rule = a->mutant;
      const auto rows =
          lemma_trials(a->trials, a->alphabet, a->limit, ctx.seed, opt, ctx.threads);
      auto t = ctx.csv("lemma.csv", {"trial", "seed", "outer_size", "n0",
                                     "k_max", "violations"});
      std::size_t violations = 0, failing = 0;
      for (const auto& r : rows) {
        t.row({str(r.trial), std::to_string(r.seed), str(r.outer_size),
               str(r.n0), str(r.k_max), str(r.violations)});
        violations += r.violations;
        failing += r.violations > 0;
      }
      json out = {{"check", "lemma-g"},     {"mutant", a->mutant},
                  {"trials", rows.size()},  {"violations", violations},
                  {"failing_trials", failing}};
      ctx.write_json("verify.json", out);
      std::cout << out.dump() << '\n';
      const bool ok = a->mutant ? failing > 0 : violations == 0;
      ctx.write_manifest(ok ? "ok" : "failed");
      if (!ok)
        fail(ErrorKind::VerificationFailed,
             a->mutant ? "the mutant went undetected"
                       : "repetition times differ from the prescribed sequence");
      return;
    }
    ctx.params = {{"check", a->what},       {"map", a->map},
                  {"points", a->points},    {"k_max", a->k_max},
                  {"word_length", a->word_length}};
    const auto map = load_map_arg(a->map);
    if (ctx.dry_run) return ctx.write_manifest("dry-run");
    const auto s = sandwich_trials(map, a->points, a->k_max, ctx.seed,
                                   a->word_length, ctx.threads);
    const bool ball_only = a->what == "ball";
    auto t = ctx.csv(ball_only ? "ball.csv" : "sandwich.csv",
                     {"point", "k", "birkhoff", "small_radius", "large_radius",
                      "tau_small", "repetition", "tau_large", "recurrence_holds",
                      "inner_radius", "gap_to_outside", "outer_radius", "reach",
                      "ball_holds"});
    std::size_t ball_violations = 0;
    for (const auto& r : s.rows) {
      const auto& q = r.recurrence;
      ball_violations += !r.ball.holds();
      t.row({str(r.point), str(q.k), io::fmt(q.birkhoff), io::fmt(q.small_radius),
             io::fmt(q.large_radius), rt(q.tau_small), str(q.repetition),
             rt(q.tau_large), q.holds ? "1" : "0", io::fmt(r.ball.inner_radius),
             io::fmt(r.ball.gap_to_outside), io::fmt(r.ball.outer_radius),
             io::fmt(r.ball.reach), r.ball.holds() ? "1" : "0"});
    }
    const std::size_t violations = ball_only ? ball_violations : s.violations;
    json out = {{"check", a->what},
                {"map", map.name()},
                {"kappa", num(s.distortion.kappa)},
                {"distortion", num(s.distortion.distortion)},
                {"rows", s.rows.size()},
                {"violations", violations},
                {"censored", s.censored}};
    ctx.write_json("verify.json", out);
    std::cout << out.dump() << '\n';
    ctx.write_manifest(violations == 0 ? "ok" : "failed");
    if (violations)
      fail(ErrorKind::VerificationFailed, str(violations) + " inclusion violations");
  });
}

}  // namespace cli
