#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <cstdlib>

using namespace ruthkit;
using testing_support::fixture;
using testing_support::read_file;

struct Report {
  int status;
  ojson json;
};

static Report cli(const std::string& args) {
  auto r = testing_support::run(std::string(RUTHKIT_CLI) + " " + args + " 2>/dev/null");
  Report out{r.status, ojson()};
  if (!r.out.empty()) out.json = ojson::parse(r.out);
  return out;
}

static std::string fx(const std::string& name) { return fixture(name); }

TEST_CASE("validate exit codes") {
  CHECK(cli("validate " + fx("abelian.json")).status == 0);
  CHECK(cli("validate --preset abelian").status == 0);
  Report broken = cli("validate " + fx("jacobi_broken.json"));
  CHECK(broken.status == 2);
  bool witness = false;
  for (const auto& f : broken.json["algebroid"]["failures"])
    witness |= f["axiom"] == "jacobi" && f["witness"] == ojson::array({0, 1, 2});
  CHECK(witness);
  CHECK(cli("validate " + fx("bad_rational.json")).status == 1);
  CHECK(cli("validate /nonexistent/model.json").status == 1);
  CHECK(cli("frobnicate " + fx("abelian.json")).status == 1);
}

TEST_CASE("header records the input hash and version") {
  std::string path = fx("normal_sl2_borel.json");
  Report r = cli("validate " + path);
  CHECK(r.json["header"]["artifact"] == kArtifactName);
  CHECK(r.json["header"]["version"] == kArtifactVersion);
  CHECK(r.json["header"]["command"] == "validate");
  CHECK(r.json["header"]["input_sha256"] == sha256_hex(read_file(path)));
}

TEST_CASE("double preset: the class vanishes with a zero witness") {
  Report r = cli("atiyah --preset double --witness");
  REQUIRE(r.status == 0);
  CHECK(r.json["class"]["vanishes"] == "yes");
  CHECK(r.json["witness"]["phi"] == ojson::array());
  CHECK(r.json["witness"]["compatible_cocycle_zero"] == true);
}

TEST_CASE("normal fixture: atiyah and resolve agree") {
  std::string path = fx("normal_sl2_borel.json");
  Report a = cli("atiyah " + path);
  Report r = cli("resolve " + path);
  REQUIRE(a.status == 0);
  REQUIRE(r.status == 0);
  CHECK(a.json["class"]["vanishes"] == "no");
  CHECK(r.json["comparison"]["at_K_vanishes"] == a.json["class"]["vanishes"]);
  CHECK(r.json["comparison"]["alpha_vanishes"] == a.json["class"]["vanishes"]);
  CHECK(r.json["comparison"]["verdicts_agree"] == true);
  CHECK(r.json["comparison"]["dims_equal"] == true);
  CHECK(r.json["comparison"]["projection_matches"] == true);
  CHECK(r.json["resolution"]["K_rank"] == 1);
}

TEST_CASE("two seeds give the same verdict and an explicit phi") {
  Report r = cli("atiyah " + fx("normal_sl2_borel.json") + " --extension-seed " + fx("seed_normal_alt.json"));
  REQUIRE(r.status == 0);
  const auto& ind = r.json["extension_independence"];
  CHECK(ind["sources"] == ojson::array({"flag", "preset"}));
  CHECK(ind["difference_exact"] == true);
  CHECK(ind["phi_verified"] == true);
  CHECK(ind["verdicts_equal"] == true);
}

TEST_CASE("resolve: double has K = 0, random fixture has equal dims") {
  Report d = cli("resolve " + fx("double_sl2.json"));
  REQUIRE(d.status == 0);
  CHECK(d.json["resolution"]["K_rank"] == 0);
  CHECK(d.json["comparison"]["dims_hat"]["1"] == 0);
  for (const auto& [p, dim] : d.json["comparison"]["dims_classical"].items()) CHECK(dim == 0);
  Report r = cli("resolve " + fx("random_resolution.json"));
  REQUIRE(r.status == 0);
  CHECK(r.json["comparison"]["dims_equal"] == true);
  CHECK(r.json["comparison"]["verdicts_agree"] == true);
}

TEST_CASE("refusals exit 2") {
  CHECK(cli("resolve " + fx("nonregular_jet.json")).status == 2);
  CHECK(cli("hpt " + fx("nonregular_jet.json")).status == 2);
  CHECK(cli("atiyah " + fx("nonregular_jet.json")).status == 0);
}

TEST_CASE("hpt reports") {
  Report k = cli("hpt " + fx("e_equals_k.json"));
  REQUIRE(k.status == 0);
  CHECK(k.json["contraction"]["identity"] == true);

  Report n = cli("hpt " + fx("normal_sl2_borel.json"));
  REQUIRE(n.status == 0);
  CHECK(n.json["contraction"]["perturbed_failures"] == ojson::array());
  CHECK(n.json["contraction"]["delta_matches_quotient"] == true);
  CHECK(n.json["hom_transfer"]["dims_preserved"] == true);
  CHECK(n.json["hom_transfer"]["class_matches"] == true);

  Model m = testing_support::load_fixture("random_resolution.json");
  Report g = cli("hpt " + fx("random_resolution.json"));
  REQUIRE(g.status == 0);
  CHECK(g.json["contraction"]["series_length"].get<int>() <= m.DA.bundle.amplitude());
  CHECK(g.json["contraction"]["perturbed_failures"] == ojson::array());
}

TEST_CASE("--output writes the same bytes as stdout") {
  std::string out = "ruthkit_cli_test_output.json";
  auto a = testing_support::run(std::string(RUTHKIT_CLI) + " atiyah " + fx("abelian.json") + " --output " + out);
  auto b = testing_support::run(std::string(RUTHKIT_CLI) + " atiyah " + fx("abelian.json"));
  CHECK(a.status == 0);
  CHECK(read_file(out) == b.out);
  std::remove(out.c_str());
}
