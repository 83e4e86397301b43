#include <sstream>

#include "doctest.h"
#include "recur/error.hpp"
#include "recur/io.hpp"

using namespace recur;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("twelve significant digits") {
  CHECK(io::fmt(1.0 / 3) == "0.333333333333");
  CHECK(io::fmt(123456789.123456789) == "123456789.123");
  CHECK(io::fmt(1.0 / 0.0) == "inf");
}

TEST_CASE("adjacency files") {
  std::istringstream ok("# golden mean\n2\n0 0\n0 1\n1 0\n");
  const auto sft = io::read_sft(ok);
  CHECK(sft.alphabet_size() == 2);
  CHECK_FALSE(sft.allows(1, 1));
  std::ostringstream out;
  io::write_sft(out, sft);
  std::istringstream back(out.str());
  CHECK(io::read_sft(back).edges() == sft.edges());

  std::istringstream bad("2\n0 5\n");
  CHECK(kind_of([&] { io::read_sft(bad); }) == ErrorKind::ConfigError);
  std::istringstream empty("# nothing\n");
  CHECK(kind_of([&] { io::read_sft(empty); }) == ErrorKind::ConfigError);
}

TEST_CASE("map configs") {
  const auto m = io::parse_map("[map]\nfamily = slopes24\n");
  CHECK(m.name() == "slopes24");
  const auto lin = io::parse_map("family = linear\ndomains = 0:0.25, 0.5:1\nname = mine\n");
  CHECK(lin.branch_count() == 2);
  CHECK(lin.name() == "mine");
  const auto b = io::parse_map("family = doubling\nboundary = (0), (1)\n");
  CHECK(b.boundary().size() == 2);
  CHECK(kind_of([] { io::parse_map("family = nope\n"); }) == ErrorKind::ConfigError);
  CHECK(kind_of([] { io::parse_map("epsilon = 0.1\n"); }) == ErrorKind::ConfigError);
  CHECK(kind_of([] { io::parse_map("family = linear\ndomains = 0-1\n"); }) ==
        ErrorKind::ConfigError);
}

TEST_CASE("potential files") {
  std::istringstream in("cylinder,value\n00,0.1\n01,0.2\n10,0.3\n11,0.4\n");
  const auto phi = io::read_potential(in, 2);
  CHECK(phi.level() == 2);
  CHECK(phi.at(Word::parse("10", 2)) == doctest::Approx(0.3));
  std::istringstream mixed("0,1\n01,2\n");
  CHECK(kind_of([&] { io::read_potential(mixed, 2); }) == ErrorKind::ConfigError);
}

TEST_CASE("lists and eventually periodic words") {
  CHECK(io::parse_list("1, 2.5,inf").size() == 3);
  CHECK(kind_of([] { io::parse_list("1,x"); }) == ErrorKind::ConfigError);
  const auto ep = io::parse_eventually_periodic("01(10)", 2);
  CHECK(ep.prefix.to_string() == "01");
  CHECK(ep.cycle.to_string() == "10");
}
