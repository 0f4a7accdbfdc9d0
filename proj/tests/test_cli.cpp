#include <gtest/gtest.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qcap/cli.hpp"
#include "qcap/errors.hpp"

using namespace qcap;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << content;
  return path;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

TEST(ChannelJson, RoundTripIsBitExact) {
  RngStream rng(1, 0, StreamDomain::kChannel);
  const KrausChannel ch = haar_random_channel(3, 2, 3, rng);
  const std::string text = channel_to_json(ch).dump();
  const KrausChannel back = channel_from_json(Json::parse(text));
  ASSERT_EQ(back.size(), ch.size());
  for (std::size_t k = 0; k < ch.size(); ++k) {
    EXPECT_TRUE((back[k].array() == ch[k].array()).all());
  }
  EXPECT_EQ(back.name(), "haar_random");
}

TEST(ChannelJson, MalformedInputsAreInputErrors) {
  EXPECT_THROW(channel_from_json(Json::parse("[]")), InputError);
  EXPECT_THROW(channel_from_json(Json::parse(R"({"input_dim":2,"output_dim":2,"kraus":[]})")),
               InputError);
  EXPECT_THROW(channel_from_json(Json::parse(
                   R"({"input_dim":2,"output_dim":2,"kraus":[[[[1,0]],[[0,0]]]]})")),
               InputError);
  EXPECT_THROW(channel_from_json(Json::parse(
                   R"({"input_dim":1,"output_dim":1,"kraus":[[[1,0]]]})")),
               InputError);
}

TEST(Builtins, ParseAndReject) {
  EXPECT_EQ(resolve_channel("builtin:depolarizing:0.3", 0).size(), 4u);
  EXPECT_EQ(resolve_channel("builtin:haar_random:2,3,2", 5).output_dim(), 3);
  EXPECT_THROW(resolve_channel("builtin:phase_flip:abc", 0), InputError);
  EXPECT_THROW(resolve_channel("builtin:phase_flip:0.1,0.2", 0), InputError);
  EXPECT_THROW(resolve_channel("builtin:nope:1", 0), InputError);
  EXPECT_THROW(resolve_channel("builtin:identity:2.5", 0), InputError);
}

TEST(Builtins, RandomChannelsFollowTheSeed) {
  const auto a = resolve_channel("builtin:random_unitary:3,2", 9);
  const auto b = resolve_channel("builtin:random_unitary:3,2", 9);
  const auto c = resolve_channel("builtin:random_unitary:3,2", 10);
  EXPECT_TRUE((a[0].array() == b[0].array()).all());
  EXPECT_FALSE(channels_equivalent(a, c));
}

TEST(FormatDouble, RoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 2.0 / 3.0 * 1e-300, 123456789.123456789, -0.0}) {
    const std::string s = format_double(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, x) << s;
    EXPECT_LE(s.size(), 24u);
  }
}

TEST(Cli, InfoReportsChannel) {
  const auto r = run_cli({"info", "--channel", "builtin:phase_flip:0.25", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["config"]["seed"], 3);
  EXPECT_TRUE(j["result"]["info"]["is_unital"].get<bool>());
  EXPECT_FALSE(j["result"]["info"]["is_uniform"].get<bool>());
  EXPECT_NEAR(j["result"]["info"]["coherent_information"].get<double>(), 0.188721875540867,
              1e-9);
  EXPECT_TRUE(j.contains("formulas"));
  EXPECT_TRUE(j["run"].contains("timestamp"));
}

TEST(Cli, ChannelFileIsAccepted) {
  const std::string path =
      temp_file("pf.json", channel_to_json(phase_flip(0.1)).dump());
  const auto r = run_cli({"info", "--channel", path, "--seed", "0"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"info", "--channel", "builtin:identity:2"}).code, 2);  // no seed
  EXPECT_EQ(run_cli({"info", "--seed", "1"}).code, 2);
  EXPECT_EQ(run_cli({"info", "--channel", "/no/such/file.json", "--seed", "1"}).code, 2);
  EXPECT_EQ(run_cli({"info", "--channel", temp_file("bad.json", "{not json"), "--seed", "1"}).code,
            2);
  // Σ A†A = 2 I is not a channel.
  const std::string not_cp = temp_file(
      "notcp.json",
      R"({"name":"x","input_dim":1,"output_dim":1,"kraus":[[[[1,0]]],[[[1,0]]]]})");
  EXPECT_EQ(run_cli({"info", "--channel", not_cp, "--seed", "1"}).code, 3);
  EXPECT_EQ(run_cli({"typicality", "--channel", "builtin:amplitude_damping:0.3", "--n-min", "2",
                     "--n-max", "40", "--seed", "1"})
                .code,
            4);
  EXPECT_EQ(run_cli({"rate-demo", "--channel", "builtin:phase_flip:0.1", "--seed", "1"}).code, 2);
}

TEST(Cli, EnsembleCanonicalJsonIgnoresThreads) {
  const std::vector<std::string> base = {"ensemble", "--channel", "builtin:depolarizing:0.3",
                                         "--code-dim", "2", "--samples", "500", "--seed", "77",
                                         "--canonical"};
  auto one = base;
  one.insert(one.end(), {"--threads", "1"});
  auto many = base;
  many.insert(many.end(), {"--threads", "8"});
  const auto a = run_cli(one);
  const auto b = run_cli(many);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(Json::parse(a.out).contains("run"));
}

TEST(Cli, RateDemoCsv) {
  const auto r = run_cli({"rate-demo", "--channel", "builtin:phase_flip:0.25", "--rate", "0.1",
                          "--epsilon", "0.1", "--n-min", "2", "--n-max", "6", "--seed", "1",
                          "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::stringstream ss(r.out);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "n,K_n,reduced_length,transmission,penalty,bound");

  const auto j = run_cli({"rate-demo", "--channel", "builtin:phase_flip:0.25", "--rate", "0.1",
                          "--epsilon", "0.1", "--n-min", "2", "--n-max", "6", "--seed", "1"});
  const Json rows = Json::parse(j.out)["result"]["rows"];
  std::size_t i = 0;
  while (std::getline(ss, line)) {
    const auto cells = split(line, ',');
    ASSERT_EQ(cells.size(), 6u);
    double t = 0.0;
    std::from_chars(cells[3].data(), cells[3].data() + cells[3].size(), t);
    EXPECT_EQ(t, rows[i]["transmission"].get<double>());
    ++i;
  }
  EXPECT_EQ(i, rows.size());
}

TEST(Cli, TypicalityWithDistribution) {
  const auto r = run_cli({"typicality", "--distribution", "0.9,0.1", "--epsilon", "0.1",
                          "--n-min", "8", "--n-max", "12", "--seed", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["result"]["rows"].size(), 5u);
  EXPECT_TRUE(j["result"]["decay"].contains("predicted_rate"));
}

TEST(Cli, MomentsAndBound) {
  const auto m = run_cli({"moments", "--dim", "2", "--samples", "2000", "--seed", "4"});
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_EQ(Json::parse(m.out)["result"]["moments"].size(), 3u);
  const auto b = run_cli({"bound", "--channel", "builtin:identity:3", "--code-dim", "2",
                          "--samples", "3", "--seed", "4", "--format", "csv"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(b.out.find("bound_kraus"), std::string::npos);
}

TEST(Cli, OutputFile) {
  const std::string path = ::testing::TempDir() + "report.json";
  std::remove(path.c_str());
  const auto r = run_cli({"info", "--channel", "builtin:identity:2", "--seed", "1", "--out", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  EXPECT_NO_THROW(Json::parse(in));
}
