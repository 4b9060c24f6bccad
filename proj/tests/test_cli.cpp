// Drives the built abshift binary end to end.
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "abshift_cli_test";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& body) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << body;
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + ABSHIFT_CLI_PATH + "\" " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<nlohmann::json> records(const fs::path& p) {
  std::vector<nlohmann::json> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) out.push_back(nlohmann::json::parse(line));
  return out;
}

const std::string kDefault = ABSHIFT_DEFAULT_CONFIG;

}  // namespace

TEST_CASE("empty target list exits 2 with a diagnostic record") {
  const fs::path cfg = write_file("empty.json", R"({"targets": []})");
  const fs::path out = scratch() / "empty.jsonl";
  CHECK(run_cli("kernel --config " + cfg.string() + " --out " + out.string()) == 2);
  const auto recs = records(out);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0]["message"] == "no target points");
  CHECK(recs[0]["r"].is_null());
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("kernel") == 2);
  CHECK(run_cli("unknown --config x") == 2);
  CHECK(run_cli("kernel --config " + kDefault + " --format xml") == 2);
}

TEST_CASE("verify-bounds emits 200 satisfied kernel rows") {
  const fs::path out = scratch() / "bounds.jsonl";
  CHECK(run_cli("verify-bounds --config " + kDefault + " --out " + out.string()) == 0);
  int kernel_rows = 0;
  for (const auto& r : records(out)) {
    CHECK(r["flags"]["bound_ok"] == true);
    if (r["experiment"] == "verify-bounds:kernel") ++kernel_rows;
  }
  CHECK(kernel_rows == 200);
}

TEST_CASE("supershift scenario rows decrease in error") {
  const fs::path out = scratch() / "supershift.jsonl";
  CHECK(run_cli("supershift --config " + kDefault + " --out " + out.string()) == 0);
  const auto recs = records(out);
  REQUIRE(recs.size() == 4);
  const std::vector<int> ns{4, 8, 16, 24};
  for (std::size_t k = 0; k < recs.size(); ++k) {
    CHECK(recs[k]["n"] == ns[k]);
    for (const char* key : {"experiment", "r", "phi", "t", "xi", "a", "n", "re", "im", "error",
                            "kappa", "flags"}) {
      CHECK(recs[k].contains(key));
    }
    if (k > 0) CHECK(recs[k]["error"].get<double>() < recs[k - 1]["error"].get<double>());
  }
}

TEST_CASE("identical configs give byte-identical output") {
  const fs::path a = scratch() / "det_a.jsonl", b = scratch() / "det_b.jsonl";
  for (const char* sub : {"superosc", "kernel", "evolve"}) {
    CHECK(run_cli(std::string(sub) + " --config " + kDefault + " --out " + a.string()) == 0);
    CHECK(run_cli(std::string(sub) + " --config " + kDefault + " --out " + b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK_FALSE(slurp(a).empty());
  }
}

TEST_CASE("csv output has a header and one line per record") {
  const fs::path csv = scratch() / "kernel.csv", jl = scratch() / "kernel.jsonl";
  CHECK(run_cli("kernel --config " + kDefault + " --format csv --out " + csv.string()) == 0);
  CHECK(run_cli("kernel --config " + kDefault + " --out " + jl.string()) == 0);
  const std::string text = slurp(csv);
  CHECK(text.rfind("experiment,r,phi,t,xi,a,n,re,im,error,kappa", 0) == 0);
  const auto lines = std::count(text.begin(), text.end(), '\n');
  CHECK(lines == static_cast<long>(records(jl).size()) + 1);
}
