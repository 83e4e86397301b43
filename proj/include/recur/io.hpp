#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "recur/geometry.hpp"
#include "recur/symbolic.hpp"
#include "recur/thermo.hpp"

namespace recur::io {

/// Twelve significant digits, the output format for every float.
std::string fmt(double v);

/// Adjacency list text: the alphabet size on the first line, then "i j" per
/// allowed transition.  '#' starts a comment.
SubshiftOfFiniteType read_sft(std::istream& in);
SubshiftOfFiniteType load_sft(const std::filesystem::path& path);
void write_sft(std::ostream& out, const SubshiftOfFiniteType& sft);

/// INI/TOML-style map description, keys in an optional [map] section:
///   family   = doubling | cantor3 | slopes24 | golden | sine-doubling | linear
///   epsilon  = 0.1               (sine-doubling)
///   domains  = 0:0.25, 0.5:1     (linear; full branches onto [0,1])
///   boundary = 0(1), (0)         (optional, prefix(cycle) codings)
MarkovExpandingMap parse_map(std::string_view text);
MarkovExpandingMap load_map(const std::filesystem::path& path);

/// "prefix(cycle)" with symbols as in Word::parse.
EventuallyPeriodic parse_eventually_periodic(std::string_view text,
                                            std::size_t alphabet);

/// CSV of "cylinder-word,value" lines; all words share one length.
Potential read_potential(std::istream& in, std::size_t base_alphabet);
Potential load_potential(const std::filesystem::path& path,
                         std::size_t base_alphabet);

/// Comma-separated list of integers or floats.
std::vector<double> parse_list(std::string_view text);

/// Minimal CSV writer: header once, then rows of preformatted cells.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::size_t columns_;
  std::unique_ptr<std::ofstream> out_;
};

}  // namespace recur::io
