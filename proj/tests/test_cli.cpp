#include <gtest/gtest.h>
#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cmccyl_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const fs::path& out, const std::string& args) {
  const std::string cmd = "CMC_OUT_DIR='" + out.string() + "' '" CMC_CLI "' " + args + " >" + (out / "stdout").string() +
                          " 2>" + (out / "stderr").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<fs::path> manifests(const fs::path& root) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.path().filename() == "manifest.json") out.push_back(e.path());
  }
  return out;
}

}  // namespace

TEST(Cli, PresetRunWritesManifest) {
  const fs::path out = fresh_dir("preset");
  ASSERT_EQ(run(out, "presets sol-embedded-H1"), 0);
  const auto m = manifests(out);
  ASSERT_EQ(m.size(), 1u);
  std::ifstream in(m[0]);
  const auto j = nlohmann::json::parse(in);
  EXPECT_NEAR(j["results"]["a0"].get<double>(), -0.642176, 1e-4);
  EXPECT_TRUE(fs::exists(m[0].parent_path() / "profile.csv") || !j["files"].empty());
}

TEST(Cli, ListsPresets) {
  const fs::path out = fresh_dir("list");
  ASSERT_EQ(run(out, "presets"), 0);
  std::ifstream in(out / "stdout");
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  EXPECT_NE(text.find("sol-embedded-H1"), std::string::npos);
}

TEST(Cli, ConfigErrorsExitTwo) {
  const fs::path out = fresh_dir("config");
  std::ofstream(out / "empty.json") << "\n";
  EXPECT_EQ(run(out, "solve --config " + (out / "empty.json").string()), 2);
  std::ofstream(out / "bad.json") << R"({"pipeline":"solve","H":1,"frobnicate":true})";
  EXPECT_EQ(run(out, "solve --config " + (out / "bad.json").string()), 2);
  EXPECT_EQ(run(out, "presets no-such-preset"), 2);
  EXPECT_EQ(run(out, "solve --space banana"), 2);
}

TEST(Cli, BracketWithoutSignChangeExitsThree) {
  const fs::path out = fresh_dir("bracket");
  EXPECT_EQ(run(out, "solve --H 1 --bracket -0.3 -0.1"), 3);
  // the failed run still leaves a manifest with its exit code
  for (const auto& m : manifests(out)) {
    std::ifstream in(m);
    EXPECT_EQ(nlohmann::json::parse(in)["status"]["exit_code"], 3);
  }
}

TEST(Cli, OutDirFlagOverridesEnvironment) {
  const fs::path env = fresh_dir("env"), flag = fresh_dir("flag");
  ASSERT_EQ(run(env, "--out-dir '" + flag.string() + "' solve --H 1"), 0);
  EXPECT_EQ(manifests(flag).size(), 1u);
  EXPECT_TRUE(manifests(env).empty());
}
