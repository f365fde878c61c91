#include "doctest.h"

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support/oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class Workdir {
 public:
  Workdir() {
    path_ = fs::temp_directory_path() /
            ("fairfront_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~Workdir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name, std::ios::binary) << text;
    return path_ / name;
  }
  const fs::path& path() const { return path_; }

  Run run(const std::string& args) const {
    const fs::path out = path_ / "stdout.txt", err = path_ / "stderr.txt";
    const std::string cmd = std::string("\"") + FAIRFRONT_CLI_PATH + "\" " + args + " >\"" +
                            out.string() + "\" 2>\"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    Run r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

const std::string kData = FAIRFRONT_DATA_DIR;
const std::string kFixture = " --dataset " + kData + "/fixture4.csv --id-col id";
const std::string kCaseStudy = " --config " + kData + "/case_study.json";

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

}  // namespace

TEST_CASE("optimal-threshold") {
  Workdir w;
  const Run r = w.run("optimal-threshold" + kCaseStudy);
  CHECK(r.exit_code == 0);
  CHECK(r.out == "0.909090909091\n");

  const fs::path always = w.write("always.json", R"({
    "dm_utility": {"table": {"d1y1": 1, "d1y0": 1, "d0y1": 0, "d0y0": 0}},
    "ds_utility": {"table": {"d1y1": 1, "d1y0": 0, "d0y1": 0, "d0y0": 0}},
    "claims": "all", "pattern": "maximin"})");
  const Run d = w.run("optimal-threshold --config " + always.string());
  CHECK(d.exit_code == 2);
  CHECK(d.err.find("DegenerateSpec") != std::string::npos);
  CHECK(d.err.find("always accept") != std::string::npos);
}

TEST_CASE("validate") {
  Workdir w;
  const Run ok = w.run("validate" + kFixture + kCaseStudy);
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("\"valid\": true") != std::string::npos);

  const fs::path no_group = w.write("bad.csv", "id,score,outcome\na,0.5,1\n");
  const Run missing = w.run("validate --dataset " + no_group.string() + kCaseStudy);
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("MissingColumn") != std::string::npos);

  const fs::path zero = w.write("zero.json", R"({
    "dm_utility": {"lending": {"interest_rate": 0.1}},
    "ds_utility": {"table": {"d1y1": 10, "d1y0": -5, "d0y1": -1, "d0y0": 0}},
    "claims": {"outcome_equals": 0}, "pattern": "maximin"})");
  const Run empty = w.run("validate" + kFixture + " --config " + zero.string());
  CHECK(empty.exit_code == 2);
  CHECK(empty.out.find("\"empty_positions\"") != std::string::npos);
  CHECK(w.run("sweep" + kFixture + " --config " + zero.string()).exit_code == 2);

  const fs::path broken = w.write("broken.json", "{\"dm_utility\": 3}");
  const Run schema = w.run("validate" + kFixture + " --config " + broken.string());
  CHECK(schema.exit_code == 1);
  CHECK(schema.err.find("/dm_utility") != std::string::npos);
}

TEST_CASE("evaluate") {
  Workdir w;
  const Run u = w.run("evaluate" + kFixture + kCaseStudy + " --rule u:0.8");
  CHECK(u.exit_code == 0);
  CHECK(u.out.find("\"key\": \"F=0.8,M=0.8\"") != std::string::npos);

  const Run g = w.run("evaluate" + kFixture + kCaseStudy + " --rule g:F=0.5,M=1.01");
  CHECK(g.exit_code == 0);
  CHECK(g.out.find("\"M\": 0") != std::string::npos);

  CHECK(w.run("evaluate" + kFixture + kCaseStudy + " --rule g:F=0.5").exit_code == 2);
  CHECK(w.run("evaluate" + kFixture + kCaseStudy + " --rule bogus").exit_code == 1);
}

TEST_CASE("sweep output is byte-identical across runs and thread counts") {
  Workdir w;
  const fs::path data = w.write(
      "synthetic.csv", fairfront::testing::synthetic_csv({.size = 400, .groups = 3, .seed = 6}));
  const fs::path config = w.write("grid.json", R"({
    "dm_utility": {"lending": {"interest_rate": 0.1}},
    "ds_utility": {"table": {"d1y1": 10, "d1y0": -5, "d0y1": -1, "d0y0": 0}},
    "claims": {"outcome_equals": 1},
    "pattern": {"prioritarian": {"weights": [3, 2, 1]}},
    "grid": {"n": 16}})");
  const std::string base =
      "sweep --dataset " + data.string() + " --id-col id --config " + config.string();
  for (const std::string format : {"csv", "json"}) {
    const Run first = w.run(base + " --format " + format + " --threads 1");
    REQUIRE(first.exit_code == 0);
    CHECK(first.out.size() > 1000);
    for (const std::string threads : {"1", "2", "4"}) {
      const Run again = w.run(base + " --format " + format + " --threads " + threads);
      CHECK(again.exit_code == 0);
      CHECK(again.out == first.out);
    }
  }

  const fs::path out = w.path() / "sweep.csv";
  const Run to_file = w.run(base + " --format csv --out " + out.string());
  CHECK(to_file.exit_code == 0);
  CHECK(to_file.out.find("4096 rules") != std::string::npos);
  CHECK(slurp(out) == w.run(base + " --format csv").out);
}

TEST_CASE("front flags in the CSV agree with the quadratic oracle") {
  Workdir w;
  const Run r = w.run("sweep" + kFixture + kCaseStudy + " --format csv");
  REQUIRE(r.exit_code == 0);
  const auto rows = split_csv(r.out);
  REQUIRE(rows.size() == 10202);
  const auto& header = rows[0];
  CHECK(header[2] == "dm_utility");
  CHECK(header[3] == "fairness_score");
  CHECK(header[6] == "on_front");
  std::vector<double> x, y;
  std::vector<std::uint8_t> flags;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    x.push_back(std::stod(rows[i][2]));
    y.push_back(std::stod(rows[i][3]));
    flags.push_back(rows[i][6] == "1" ? 1 : 0);
  }
  CHECK(flags == fairfront::testing::brute_force_front(x, y));

  const Run front = w.run("pareto" + kFixture + kCaseStudy + " --format csv");
  REQUIRE(front.exit_code == 0);
  const auto front_rows = split_csv(front.out);
  CHECK(front_rows.size() - 1 ==
        static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1)));
}

TEST_CASE("capacity and argument errors") {
  Workdir w;
  const Run cap = w.run("sweep" + kFixture + kCaseStudy + " --cap 100");
  CHECK(cap.exit_code == 3);
  CHECK(cap.err.find("SweepTooLarge") != std::string::npos);
  CHECK(w.run("").exit_code == 1);
  CHECK(w.run("sweep --config x.json").exit_code == 1);
  CHECK(w.run("sweep --dataset /nonexistent.csv" + kCaseStudy).exit_code == 1);
}
