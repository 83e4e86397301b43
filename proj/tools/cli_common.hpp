#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "recur/geometry.hpp"
#include "recur/io.hpp"

namespace cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

/// Number rounded to 12 significant digits; non-finite values as strings.
json num(double v);

struct Context {
  std::uint64_t seed = 1;
  fs::path out = "out";
  std::size_t threads = 1;
  bool dry_run = false;
  std::string command;
  json params = json::object();
  std::vector<std::string> files;

  fs::path file(const std::string& name);  // registers it in the manifest
  void write_json(const std::string& name, const json& j);
  recur::io::CsvWriter csv(const std::string& name,
                           std::vector<std::string> header);
  void write_manifest(const std::string& status, const json& extra = {});
};

/// Built-in family name (doubling, cantor3, slopes24, golden,
/// sine-doubling) or a path to a map config file.
recur::MarkovExpandingMap load_map_arg(const std::string& arg);

std::string str(std::size_t v);

}  // namespace cli
