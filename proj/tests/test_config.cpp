#include <gtest/gtest.h>

#include <sstream>

#include "config.hpp"

using namespace actspec::cli;

namespace {

FlatConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_flat_config(is, "test");
}

}  // namespace

TEST(FlatConfig, ValuesCommentsAndQuotes) {
  const auto c = parse(
      "# run settings\n"
      "tau = 0.25   # trailing comment\n"
      "input = \"data/a#b.abf\"\n"
      "rates = [0.0, 0.25, 0.5]\n"
      "noise_seeds = 4\n"
      "\n"
      "no-runtime = true\n");
  EXPECT_EQ(c.at("tau"), "0.25");
  EXPECT_EQ(c.at("input"), "data/a#b.abf");
  EXPECT_EQ(c.at("rates"), "0.0,0.25,0.5");
  EXPECT_EQ(c.at("noise-seeds"), "4");
  EXPECT_EQ(c.at("no-runtime"), "true");
}

TEST(FlatConfig, EscapesInStrings) {
  const auto c = parse("name = \"a \\\"b\\\" c\"\n");
  EXPECT_EQ(c.at("name"), "a \"b\" c");
}

TEST(FlatConfig, Errors) {
  EXPECT_THROW(parse("[search]\ntau = 1\n"), ConfigError);
  EXPECT_THROW(parse("tau 1\n"), ConfigError);
  EXPECT_THROW(parse("tau = \n"), ConfigError);
  EXPECT_THROW(parse("t.au = 1\n"), ConfigError);
  EXPECT_THROW(parse("tau = 1\ntau = 2\n"), ConfigError);
  EXPECT_THROW(parse("rates = [1, 2\n"), ConfigError);
  EXPECT_THROW(parse("name = \"open\n"), ConfigError);
  EXPECT_THROW(load_flat_config("/nonexistent/run.toml"), ConfigError);
}

TEST(ApplyConfig, FlagsWinAndValuesAreInserted) {
  const FlatConfig c{{"tau", "0.5"}, {"seed", "3"}, {"exact", "true"}, {"quiet", "false"}};
  const OptionShapes shapes{{"tau", false}, {"seed", false}, {"exact", true}, {"quiet", true}};
  const std::vector<std::string> args{"prog", "analyze", "--tau", "0.1", "--input", "x.abf"};
  const auto out = apply_config(args, 2, c, shapes, {});
  const std::vector<std::string> want{"prog", "analyze", "--exact", "--seed", "3", "--tau", "0.1", "--input", "x.abf"};
  EXPECT_EQ(out, want);
}

TEST(ApplyConfig, EqualsFormCountsAsGiven) {
  const FlatConfig c{{"tau", "0.5"}};
  const auto out = apply_config({"prog", "wht", "--tau=0.2"}, 2, c, {{"tau", false}}, {});
  EXPECT_EQ(out.size(), 3u);
}

TEST(ApplyConfig, UnknownAndForeignKeys) {
  const OptionShapes shapes{{"tau", false}};
  EXPECT_THROW(apply_config({"prog", "wht"}, 2, {{"bogus", "1"}}, shapes, {"tau"}), ConfigError);
  EXPECT_EQ(apply_config({"prog", "wht"}, 2, {{"rates", "0,1"}}, shapes, {"tau", "rates"}).size(), 2u);
  EXPECT_THROW(apply_config({"prog", "wht"}, 2, {{"flag", "yes"}}, {{"flag", true}}, {}), ConfigError);
}
