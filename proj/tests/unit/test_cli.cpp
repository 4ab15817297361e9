#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kTmp = fs::temp_directory_path() / "bf_cli_tests";

std::string data(const std::string& name) { return std::string(BF_TEST_DATA_DIR) + "/" + name; }

int run(const std::string& args) {
  const std::string cmd = std::string(BF_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path write_temp(const std::string& name, const std::string& text) {
  fs::create_directories(kTmp);
  const fs::path p = kTmp / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("table1 command") {
  const fs::path out = kTmp / "t1";
  REQUIRE(run("table1 --scenario " + data("table1_n4_k1.json") + " --out " + out.string()) == 0);
  CHECK(slurp(out / "table1.csv") ==
        "separation,xor,time_sharing\nspacelike,1,0.75\ntimelike_latest_dishonest,0,0.75\n");
}

TEST_CASE("run command on the adaptive timelike scenario forces the target") {
  const fs::path out = kTmp / "run";
  REQUIRE(run("run --scenario " + data("adaptive_timelike.json") + " --out " + out.string()) == 0);
  std::ifstream csv(out / "resultant.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "stream_index,xor,time_sharing,hash");
  const std::string scenario = slurp(data("adaptive_timelike.json"));
  std::string target;
  for (std::size_t p = scenario.find('[', scenario.find("\"target\"")); scenario[p] != ']'; ++p) {
    if (scenario[p] == '0' || scenario[p] == '1') target += scenario[p];
  }
  std::string xor_column;
  while (std::getline(csv, line)) xor_column += line.substr(line.find(',') + 1, 1);
  CHECK(xor_column.size() == 1024);
  CHECK(xor_column == target);
  CHECK(fs::exists(out / "ledger.csv"));
}

TEST_CASE("exit codes") {
  const std::string out = " --out " + (kTmp / "codes").string();
  CHECK(run("run --scenario " + data("all_honest.json") + out) == 0);
  CHECK(run("run --scenario " + write_temp("broken.json", "{\"alphabet\": ").string() + out) == 2);
  CHECK(run("run --scenario " + (kTmp / "missing.json").string() + out) == 2);
  CHECK(run("fly --scenario " + data("all_honest.json") + out) == 2);
  CHECK(run("run" + out) == 2);
  CHECK(run("run --scenario " + data("all_honest.json") + out + " --trials 0") == 2);
  const auto hash10 = write_temp("hash10.json", R"({"alphabet": 10, "length": 2, "combiner": "hash",
      "master_seed": 0, "beacons": [{"position": 0, "period": 1}]})");
  CHECK(run("run --scenario " + hash10.string() + out) == 3);
  const auto period = write_temp("period.json", R"({"alphabet": 2, "length": 2, "combiner": "xor",
      "master_seed": 0, "beacons": [{"position": 0, "period": 0}]})");
  CHECK(run("run --scenario " + period.string() + out) == 3);
  const auto big = write_temp("big.json", R"({"alphabet": 16, "length": 12, "combiner": "xor",
      "master_seed": 0, "beacons": [{"position": 0, "period": 1}, {"position": 9, "period": 1}]})");
  CHECK(run("entropy --scenario " + big.string() + out) == 4);
  CHECK(run("entropy --empirical --trials 1000 --scenario " + big.string() + out) == 0);
}

TEST_CASE("predictability map command") {
  const fs::path out = kTmp / "map";
  REQUIRE(run("predictability-map --scenario " + data("gap_two_beacons.json") + " --out " + out.string() +
              " --x-range 0 0 --x-steps 1 --t-range 1 1 --t-steps 1") == 0);
  CHECK(slurp(out / "predictability.csv") == "x,t,label\n0,1,AccompliceOnly\n");
  REQUIRE(run("predictability-map --scenario " + data("all_honest.json") + " --out " + out.string()) == 0);
  CHECK(slurp(out / "predictability.csv").find("AccompliceOnly") == std::string::npos);
}

TEST_CASE("seeded reruns are byte-identical") {
  for (const char* cmd : {"run", "table1", "entropy"}) {
    const fs::path a = kTmp / (std::string(cmd) + "_a"), b = kTmp / (std::string(cmd) + "_b");
    REQUIRE(run(std::string(cmd) + " --scenario " + data("table1_n4_k1.json") + " --seed 3 --out " + a.string()) == 0);
    REQUIRE(run(std::string(cmd) + " --scenario " + data("table1_n4_k1.json") + " --seed 3 --out " + b.string()) == 0);
    for (const auto& f : fs::directory_iterator(a)) CHECK(slurp(f.path()) == slurp(b / f.path().filename()));
  }
}
