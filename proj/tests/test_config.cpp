#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "slowtrap/config.hpp"

using namespace slowtrap;

TEST_CASE("parse sections, comments and lists") {
  const auto c = Config::parse("# top\n[E6]\nn = 500   # trailing\nt = 0.5, 1\n\n[general]\nseed=9\nflag = true\n");
  CHECK(c.get_int("E6", "n", 0) == 500);
  CHECK(c.get_doubles("E6", "t", {}) == std::vector<double>{0.5, 1.0});
  CHECK(c.get_int("general", "seed", 0) == 9);
  CHECK(c.get_bool("general", "flag", false));
  CHECK(c.get_double("E6", "missing", 2.5) == 2.5);
  CHECK(c.has("E6", "n"));
  CHECK_FALSE(c.has("E6", "missing"));
  CHECK(c.sections() == std::vector<std::string>{"E6", "general"});
}

TEST_CASE("malformed input is an error") {
  CHECK_THROWS_AS(Config::parse("[E6]\nn = 1\nn = 2\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("key = 1\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[E6\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[E6]\njust words\n"), ConfigError);
  const auto c = Config::parse("[E6]\nn = ten\nb = maybe\n");
  CHECK_THROWS_AS((void)c.get_int("E6", "n", 0), ConfigError);
  CHECK_THROWS_AS((void)c.get_double("E6", "n", 0), ConfigError);
  CHECK_THROWS_AS((void)c.get_bool("E6", "b", false), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/slowtrap.cfg"), ConfigError);
}

TEST_CASE("merge replaces key by key") {
  auto base = Config::parse("[E1]\nn = 50\nt = 1\n");
  base.merge(Config::parse("[E1]\nn = 200\n[E3]\nn = 7\n"));
  CHECK(base.get_int("E1", "n", 0) == 200);
  CHECK(base.get_double("E1", "t", 0) == 1.0);
  CHECK(base.get_int("E3", "n", 0) == 7);
}

TEST_CASE("unknown keys and sections are named") {
  const auto c = Config::parse("[E6]\nn = 1\nbogus = 2\n");
  try {
    c.require_known("E6", {"n"});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
  CHECK_NOTHROW(c.require_known("E6", {"n", "bogus"}));
  CHECK_THROWS_AS(c.require_sections({"E1"}), ConfigError);
}

TEST_CASE("load from file") {
  const auto p = std::filesystem::temp_directory_path() / "slowtrap_test_config.cfg";
  std::ofstream(p) << "[E9]\nbetas = 0.25, 0.5\n";
  const auto c = Config::load(p);
  CHECK(c.get_doubles("E9", "betas", {}).size() == 2);
}
