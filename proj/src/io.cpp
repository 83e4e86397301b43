#include "recur/io.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <limits>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "recur/error.hpp"

namespace recur::io {

namespace fs = std::filesystem;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open " + path.string());
  return in;
}

double to_double(std::string s, const std::string& what) {
  boost::algorithm::trim(s);
  if (s == "inf" || s == "+inf" || s == "infinity")
    return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::ConfigError, "bad number for " + what + ": '" + s + "'");
}

std::string unquote(std::string s) {
  boost::algorithm::trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') &&
      s.back() == s.front())
    s = s.substr(1, s.size() - 2);
  return s;
}

}  // namespace

SubshiftOfFiniteType read_sft(std::istream& in) {
  std::string line;
  std::optional<std::size_t> size;
  std::vector<SubshiftOfFiniteType::Edge> edges;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    boost::algorithm::trim(line);
    if (line.empty()) continue;
    std::istringstream ss(line);
    if (!size) {
      std::size_t n = 0;
      if (!(ss >> n) || n == 0)
        fail(ErrorKind::ConfigError, "line " + std::to_string(lineno) +
                                         ": expected the alphabet size");
      size = n;
      continue;
    }
    long long i = -1, j = -1;
    std::string rest;
    if (!(ss >> i >> j) || (ss >> rest) || i < 0 || j < 0 ||
        static_cast<std::size_t>(i) >= *size ||
        static_cast<std::size_t>(j) >= *size)
      fail(ErrorKind::ConfigError,
           "line " + std::to_string(lineno) + ": expected 'i j' in range");
    edges.emplace_back(static_cast<Symbol>(i), static_cast<Symbol>(j));
  }
  if (!size) fail(ErrorKind::ConfigError, "empty adjacency file");
  try {
    return SubshiftOfFiniteType::from_edges(*size, std::move(edges));
  } catch (const Error& e) {
    fail(ErrorKind::ConfigError, std::string("adjacency: ") + e.what());
  }
}

SubshiftOfFiniteType load_sft(const fs::path& path) {
  auto in = open_in(path);
  return read_sft(in);
}

void write_sft(std::ostream& out, const SubshiftOfFiniteType& sft) {
  out << sft.alphabet_size() << '\n';
  for (auto [i, j] : sft.edges()) out << i << ' ' << j << '\n';
}

EventuallyPeriodic parse_eventually_periodic(std::string_view text,
                                            std::size_t alphabet) {
  std::string s(text);
  boost::algorithm::trim(s);
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')')
    fail(ErrorKind::ConfigError, "expected prefix(cycle), got '" + s + "'");
  EventuallyPeriodic ep;
  try {
    ep.prefix = Word::parse(s.substr(0, open), alphabet);
    ep.cycle = Word::parse(s.substr(open + 1, s.size() - open - 2), alphabet);
  } catch (const Error& e) {
    fail(ErrorKind::ConfigError, std::string("boundary word: ") + e.what());
  }
  if (ep.cycle.empty())
    fail(ErrorKind::ConfigError, "empty cycle in '" + s + "'");
  return ep;
}

MarkovExpandingMap parse_map(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::ConfigError, std::string("map config: ") + e.what());
  }
  const pt::ptree& sec =
      tree.get_child_optional("map") ? tree.get_child("map") : tree;
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    if (auto v = sec.get_optional<std::string>(key)) return unquote(*v);
    return std::nullopt;
  };
  const auto family = get("family");
  if (!family) fail(ErrorKind::ConfigError, "map config lacks 'family'");

  std::optional<MarkovExpandingMap> map;
  try {
    if (*family == "doubling") map = MarkovExpandingMap::doubling();
    else if (*family == "cantor3") map = MarkovExpandingMap::cantor3();
    else if (*family == "slopes24") map = MarkovExpandingMap::slopes24();
    else if (*family == "golden") map = MarkovExpandingMap::golden();
    else if (*family == "sine-doubling") {
      const auto eps = get("epsilon");
      map = MarkovExpandingMap::sine_doubling(
          eps ? to_double(*eps, "epsilon") : 0.1);
    } else if (*family == "linear") {
      const auto dom = get("domains");
      if (!dom) fail(ErrorKind::ConfigError, "linear map needs 'domains'");
      std::vector<std::string> parts;
      boost::algorithm::split(parts, *dom, boost::is_any_of(","));
      std::vector<Interval> domains;
      for (auto& p : parts) {
        const auto colon = p.find(':');
        if (colon == std::string::npos)
          fail(ErrorKind::ConfigError, "domain '" + p + "' is not lo:hi");
        domains.push_back({to_double(p.substr(0, colon), "domain"),
                           to_double(p.substr(colon + 1), "domain")});
      }
      map = MarkovExpandingMap::linear_full(get("name").value_or("linear"),
                                            std::move(domains));
    } else {
      fail(ErrorKind::ConfigError, "unknown map family '" + *family + "'");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    fail(ErrorKind::ConfigError, std::string("map: ") + e.what());
  }

  if (const auto b = get("boundary")) {
    std::vector<std::string> parts;
    boost::algorithm::split(parts, *b, boost::is_any_of(","));
    std::vector<EventuallyPeriodic> boundary;
    for (const auto& p : parts)
      if (!boost::algorithm::trim_copy(p).empty())
        boundary.push_back(
            parse_eventually_periodic(p, map->shift().alphabet_size()));
    std::vector<Branch> branches;
    for (std::size_t i = 0; i < map->branch_count(); ++i)
      branches.push_back(map->branch(i));
    map = MarkovExpandingMap(map->name(), std::move(branches),
                             std::move(boundary));
  }
  return std::move(*map);
}

MarkovExpandingMap load_map(const fs::path& path) {
  auto in = open_in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_map(ss.str());
}

Potential read_potential(std::istream& in, std::size_t base_alphabet) {
  std::vector<std::pair<Word, double>> values;
  std::optional<std::size_t> level;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    boost::algorithm::trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      fail(ErrorKind::ConfigError,
           "potential line " + std::to_string(lineno) + " lacks a comma");
    std::string word = boost::algorithm::trim_copy(line.substr(0, comma));
    if (lineno == 1 && (word == "cylinder" || word == "word")) continue;
    Word w;
    try {
      w = Word::parse(word, base_alphabet);
    } catch (const Error& e) {
      fail(ErrorKind::ConfigError, std::string("potential: ") + e.what());
    }
    if (level && *level != w.size())
      fail(ErrorKind::ConfigError, "potential cylinders differ in length");
    level = w.size();
    values.emplace_back(std::move(w),
                        to_double(line.substr(comma + 1), "potential value"));
  }
  if (!level || *level == 0)
    fail(ErrorKind::ConfigError, "potential file has no entries");
  return Potential::from_cylinders(*level, base_alphabet, values);
}

Potential load_potential(const fs::path& path, std::size_t base_alphabet) {
  auto in = open_in(path);
  return read_potential(in, base_alphabet);
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<std::string> parts;
  std::string s(text);
  boost::algorithm::split(parts, s, boost::is_any_of(","));
  std::vector<double> out;
  for (const auto& p : parts)
    if (!boost::algorithm::trim_copy(p).empty())
      out.push_back(to_double(p, "list entry"));
  return out;
}

CsvWriter::CsvWriter(const fs::path& path, std::vector<std::string> header)
    : path_(path),
      columns_(header.size()),
      out_(std::make_unique<std::ofstream>(path)) {
  if (!*out_) fail(ErrorKind::ConfigError, "cannot write " + path.string());
  *out_ << boost::algorithm::join(header, ",") << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  require(cells.size() == columns_, ErrorKind::InvalidArgument,
          "CSV row width mismatch");
  *out_ << boost::algorithm::join(cells, ",") << '\n';
}

}  // namespace recur::io
