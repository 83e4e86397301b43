#include "cli_common.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

namespace cli {

json num(double v) {
  if (!std::isfinite(v)) return recur::io::fmt(v);
  return std::stod(recur::io::fmt(v));
}

std::string str(std::size_t v) { return std::to_string(v); }

fs::path Context::file(const std::string& name) {
  fs::create_directories(out);
  if (std::find(files.begin(), files.end(), name) == files.end())
    files.push_back(name);
  return out / name;
}

void Context::write_json(const std::string& name, const json& j) {
  std::ofstream f(file(name));
  f << j.dump(2) << '\n';
}

recur::io::CsvWriter Context::csv(const std::string& name,
                                  std::vector<std::string> header) {
  return recur::io::CsvWriter(file(name), std::move(header));
}

void Context::write_manifest(const std::string& status, const json& extra) {
  json m;
  m["tool"] = "recur";
  m["command"] = command;
  m["status"] = status;
  m["seed"] = seed;
  m["threads"] = threads;
  m["dry_run"] = dry_run;
  m["params"] = params;
  m["files"] = files;
  if (!extra.is_null())
    for (auto it = extra.begin(); it != extra.end(); ++it)
      m[it.key()] = it.value();
  fs::create_directories(out);
  std::ofstream f(out / "manifest.json");
  f << m.dump(2) << '\n';
}

recur::MarkovExpandingMap load_map_arg(const std::string& arg) {
  if (fs::exists(arg)) return recur::io::load_map(arg);
  return recur::io::parse_map("family = " + arg + "\n");
}

}  // namespace cli
