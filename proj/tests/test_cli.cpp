#include <catch_amalgamated.hpp>

#include "document.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace ihsig;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(IHSIG_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string sample(const std::string& name) { return std::string(IHSIG_SAMPLES) + "/" + name; }

std::string temp_document(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("ihsig_test_" + name + ".json");
  std::ofstream(path) << text;
  return path.string();
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("shift command", "[cli]") {
  auto r = run("shift --c 1 --f 5");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "normative_k             0"));
  r = run("--format machine shift --c 1/3 --f 4");
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["record"] == "shift");
  CHECK(j["normative_k"] == 1);
  CHECK(j["literal_k"] == 2);
  CHECK(j["discrepancy"] == true);
  CHECK(run("shift --c 0 --f 3").code == 2);
  CHECK(run("shift --c 3/2 --f 3").code == 2);
  CHECK(run("shift --c 0.5 --f 3").code == 2);
  CHECK(run("shift --c 0 --f 3").out.empty());
}

TEST_CASE("ih-table command", "[cli]") {
  auto r = run("--format machine ih-table --input " + sample("product_s2_s1.json"));
  CHECK(r.code == 0);
  std::vector<nlohmann::json> records;
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);) records.push_back(nlohmann::json::parse(line));
  bool saw_local = false;
  for (const auto& j : records) {
    if (j["record"] == "local") {
      saw_local = true;
      CHECK(j["fiber"] == nlohmann::json::array({1, 1, 1, 1}));
      CHECK(j["ih_q"] == nlohmann::json::array({1, 1, 0, 0}));
    }
    if (j["record"] == "table") CHECK(j["oracle"] == "agree");
  }
  CHECK(saw_local);

  r = run("ih-table --input " + sample("hopf.json"));
  CHECK(r.code == 0);
  CHECK(contains(r.out, "E_inf^{2,0}(Y) + Im(d_2^{0,1})"));
  CHECK(run("ih-table --k 0 --input " + sample("hopf_page.json")).out ==
        run("ih-table --k 0 --input " + sample("hopf.json")).out);

  CHECK(run("ih-table --input " + sample("hopf.json") + " --c 1 --k 0").code == 2);
  auto both = temp_document("both", R"({"bundle": {"product": {"base": [2], "fiber": [1]}},
                                       "parameters": {"c": "1", "k": 0}})");
  CHECK(run("ih-table --input " + both).code == 2);
}

TEST_CASE("signature command", "[cli]") {
  auto r = run("--format machine signature --input " + sample("cp2_assembly.json"));
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["global"] == 1);
  CHECK(j["interior"] == 0);
  CHECK(j["tau_2"] == 1);
  CHECK(j["paths_agree"] == true);

  r = run("--format machine signature --input " + sample("trivial_assembly.json"));
  CHECK(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["global"] == j["interior"]);

  auto odd = temp_document("odd", R"({"simplicial": {"fixture": "ball2"},
                                      "bundle": {"product": {"base": [2], "fiber": [2]}}})");
  CHECK(run("signature --input " + odd).code == 2);
  auto mismatch = temp_document("mismatch", R"({"simplicial": {"fixture": "cp2_ball"},
                                                "bundle": {"product": {"base": [2], "fiber": [1]}}})");
  r = run("signature --input " + mismatch);
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(run("signature --input " + sample("hopf.json")).code == 2);
}

TEST_CASE("verify command", "[cli]") {
  auto r = run("verify oracle --seed 7");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "passed 100  total 100"));
  CHECK(run("verify parity --seed 7").code == 0);
  CHECK(run("verify duality --seed 7 --count 20").code == 0);
  CHECK(run("verify novikov --seed 7 --count 2").code == 0);
  r = run("verify hodge-consistency");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "discrepancies 24"));
  CHECK(run("verify bogus").code == 2);
  CHECK(run("verify oracle --seed 3 --count 10").out == run("verify oracle --seed 3 --count 10").out);
  CHECK(run("verify oracle --seed 3 --count 10").out != run("verify oracle --seed 4 --count 10").out);
}

TEST_CASE("document errors carry a location", "[cli]") {
  using cli::InputError;
  using cli::parse_document;
  auto message = [](const std::string& text) {
    try {
      parse_document(text);
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(contains(message("{\n  \"bundle\": [1,\n}"), "line 3"));
  CHECK(contains(message(R"({"bundle": {"model": {"base": [2], "fiber": "x"}}})"), "/bundle/model/fiber"));
  CHECK(contains(message(R"({"bundle": {"page": {"b": 1, "f": 0, "dims": [[1], [1]], "volume": ["0.5"]}}})"),
                 "/bundle/page/volume/0"));
  CHECK(contains(message(R"({"simplicial": {"vertices": 3, "facets": [[0, 1], [1, 2]]}})"), "/simplicial"));
  CHECK(contains(message(R"({"bundel": {}})"), "/bundel"));
  CHECK(contains(message(R"({"parameters": {"c": "1/2", "k": 1}})"), "/parameters"));
  CHECK(contains(message(R"({"bundle": {"page": {"b": 2, "f": 1, "dims": [[1, 1], [0, 0], [1, 1]],
      "differentials": {"two": []}}}})"), "/bundle/page/differentials/two"));
  CHECK(message(R"({"bundle": {"product": {"base": [2], "fiber": [1]}}})") == "no error");
}

TEST_CASE("explicit simplicial documents", "[cli]") {
  auto d = cli::read_document(sample("cp2_assembly.json"));
  REQUIRE(d.interior);
  CHECK(d.interior->pair.facets() == fixtures::cp2_ball().pair.facets());
  CHECK(d.interior->signature() == 0);
  CHECK(d.k == 0);
  auto reversed = cli::parse_document(R"({"simplicial": {"vertices": 3, "facets": [[0, 1, 2]],
      "boundary": [[0, 1], [1, 2], [0, 2]], "orientation": [1]}})");
  auto swapped = cli::parse_document(R"({"simplicial": {"vertices": 3, "facets": [[1, 0, 2]],
      "boundary": [[0, 1], [1, 2], [0, 2]], "orientation": [1]}})");
  CHECK(reversed.interior->cycle.coefficients == std::vector<int>{1});
  CHECK(swapped.interior->cycle.coefficients == std::vector<int>{-1});
}
