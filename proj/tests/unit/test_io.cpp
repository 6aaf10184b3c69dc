#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <json.hpp>

#include "gibbsk/error.hpp"
#include "gibbsk/io.hpp"

using namespace gibbsk;
using nlohmann::json;

namespace {

const ReferenceData kRef = ReferenceData::standard(1, 24, 48);

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("gibbsk_test_io_" + name)).string();
}

}  // namespace

TEST_SUITE("json") {
  TEST_CASE("potential round trip is exact") {
    const Potential phi = random_potential(3, kRef);
    int m = 0;
    const Potential back = potential_from_json(to_json(phi, kRef.model), &m);
    CHECK(m == 1);
    CHECK(back.expansion().coefficients() == phi.expansion().coefficients());
  }

  TEST_CASE("potential schema errors") {
    CHECK_THROWS_AS(potential_from_json("{"), InputError);
    CHECK_THROWS_AS(potential_from_json(R"({"version": 1, "m": 1, "lmax": 1, "coefficients": [0, 1]})"), InputError);
    CHECK_THROWS_AS(potential_from_json(R"({"version": 9, "m": 1, "lmax": 0, "coefficients": [0]})"), InputError);
    CHECK_THROWS_AS(potential_from_json(R"({"version": 1, "m": 1, "lmax": 0})"), InputError);
  }

  TEST_CASE("density round trips") {
    CHECK(density_from_json(to_json(Density::uniform()), kRef).is_uniform());
    const Vec3 north(0, 0, 1);
    const Density f = conic_density(std::span(&north, 1), 0.4, kRef);
    const Density g = density_from_json(to_json(f), kRef);
    CHECK(g.cone_angle() == 0.4);
    CHECK(g.value(Vec3(1, 0, 0)) == doctest::Approx(f.value(Vec3(1, 0, 0))).epsilon(1e-12));
    SphericalExpansion psi(2);
    psi.set_coefficient(1, 1, 0.3);
    const Density s = smooth_density(psi, kRef.model, kRef.quad, kRef.volume);
    const Density t = density_from_json(to_json(s), kRef);
    CHECK(t.value(Vec3(0, 1, 0)) == doctest::Approx(s.value(Vec3(0, 1, 0))).epsilon(1e-12));
    CHECK_THROWS_AS(density_from_json(R"({"version": 1, "kind": "weird"})", kRef), InputError);
  }

  TEST_CASE("rationals are p/q strings") {
    const ToricSurface p2 = ToricSurface::projective_plane();
    const json j = json::parse(to_json(check_csck_criterion(p2, p2.divisor(0), Rational(7, 2))));
    CHECK(j["mu"] == "3/1");
    CHECK(j["gamma"] == "7/2");
    CHECK(j["b"].is_null());
    CHECK(j["provenance"]["operation"] == "check_csck_criterion");
    CHECK(j["provenance"]["document_version"] == kDocumentVersion);
  }

  TEST_CASE("non-finite reals are strings") {
    MCEstimate e;
    e.gamma = 2.0;
    e.mean = INFINITY;
    e.standard_error = NAN;
    e.log_mean = -INFINITY;
    const json j = json::parse(to_json(e));
    CHECK(j["mean"] == "inf");
    CHECK(j["standard_error"] == "nan");
    CHECK(j["log_mean"] == "-inf");
    CHECK(j["gamma"] == 2.0);
  }

  TEST_CASE("Gram entries are [re, im] rows") {
    const GramMatrix h = gram_matrix(random_potential(1, kRef), Density::uniform(), section_basis(1, 2), kRef);
    const json j = json::parse(to_json(h));
    REQUIRE(j["entries"].size() == 3);
    CHECK(j["entries"][0][1][0].get<double>() == h.entries(0, 1).real());
    CHECK(j["entries"][0][1][1].get<double>() == h.entries(0, 1).imag());
  }

  TEST_CASE("reals survive a dump/parse cycle bit for bit") {
    MCEstimate e;
    e.mean = 0.1 + 0.2;
    e.standard_error = 1.0 / 3.0;
    const json j = json::parse(to_json(e));
    CHECK(j["mean"].get<double>() == e.mean);
    CHECK(j["standard_error"].get<double>() == e.standard_error);
  }
}

TEST_SUITE("csv") {
  TEST_CASE("header-only table") {
    const CsvTable t = functional_table({}, {});
    CHECK(to_csv(t) == "seed,J,E,Ent,M,D,margin\n");
  }

  TEST_CASE("17 significant digits round trip") {
    CsvTable t{{"x"}, {{0.1 + 0.2}, {1e-300}, {-2.0 / 3}}};
    const std::string s = to_csv(t);
    std::size_t pos = s.find('\n') + 1;
    for (const auto& row : t.rows) {
      const std::size_t end = s.find('\n', pos);
      CHECK(std::stod(s.substr(pos, end - pos)) == std::get<double>(row[0]));
      pos = end + 1;
    }
  }

  TEST_CASE("quoting and integer cells") {
    CsvTable t{{"name", "n", "u"}, {{std::string("a,b"), 3LL, std::uint64_t{18446744073709551615ULL}},
                                    {std::string("say \"hi\""), -1LL, std::uint64_t{0}}}};
    CHECK(to_csv(t) == "name,n,u\n\"a,b\",3,18446744073709551615\n\"say \"\"hi\"\"\",-1,0\n");
  }

  TEST_CASE("ragged rows are refused") {
    CsvTable t{{"a", "b"}, {{1.0}}};
    CHECK_THROWS_AS(to_csv(t), InputError);
  }

  TEST_CASE("emit_sweep writes the same bytes twice") {
    const CsvTable t = scan_table({});
    const std::string path = temp_path("scan.csv");
    emit_sweep(t, path);
    const std::string a = read_text_file(path);
    emit_sweep(t, path);
    CHECK(read_text_file(path) == a);
    CHECK(a == "gamma,mean,stderr,max_share,diverged\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_text_file(path), IoError);
    CHECK_THROWS_AS(write_text_file("/nonexistent-dir/x.csv", "x"), IoError);
  }

  TEST_CASE("functional table rows line up with the reports") {
    const Potential phi = random_potential(4, kRef);
    const FunctionalReport r = evaluate_report(phi, 0.5, 1.0, Density::uniform(), OneOneForm::zero(), {}, kRef);
    const CsvTable t = functional_table({4}, {r});
    REQUIRE(t.rows.size() == 1);
    CHECK(std::get<std::uint64_t>(t.rows[0][0]) == 4);
    CHECK(std::get<double>(t.rows[0][1]) == r.J);
    CHECK(std::get<double>(t.rows[0][6]) == r.margin);
    CHECK_THROWS_AS(functional_table({1, 2}, {r}), InputError);
  }
}
