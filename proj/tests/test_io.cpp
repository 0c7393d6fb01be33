#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "adbound/error.hpp"
#include "adbound/generators.hpp"
#include "adbound/io.hpp"

using namespace adbound;

namespace {

Model parse_text(const std::string& text) {
  std::istringstream in(text);
  return read_model(in);
}

std::string error_of(const std::string& text) {
  try {
    parse_text(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal belief network file") {
  const char* text =
      "BAYES\n"
      "2\n"
      "2 3\n"
      "2\n"
      "1 0\n"
      "2 0 1\n"
      "2 0.4 0.6\n"
      "6 0.1 0.2 0.7  0.3 0.3 0.4\n";
  Model m = parse_text(text);
  REQUIRE(std::holds_alternative<BeliefNetwork>(m));
  const auto& net = std::get<BeliefNetwork>(m);
  CHECK(net.domains() == Domains{2, 3});
  CHECK(net.cpts()[1].scope() == std::vector<VariableId>{0, 1});
  CHECK(net.cpts()[1].at(std::vector<int>{1, 2}) == 0.4);
  CHECK(model_factors(m).size() == 2);
}

TEST_CASE("constraint file") {
  Model m = parse_text("MARKOV 2 2 2 1 2 0 1 4 0 1 1 0");
  REQUIRE(std::holds_alternative<CspProblem>(m));
  CHECK(model_domains(m) == Domains{2, 2});
  CHECK_THROWS_AS(parse_text("MARKOV 2 2 2 1 2 0 1 4 0 0.5 1 0"), InputError);
}

TEST_CASE("errors carry the offending line") {
  CHECK(error_of("BAYES\n1\n2\n1\n1 0\n2 0.4 0.5\n").find("line 6") != std::string::npos);
  CHECK(error_of("BAYES\n1\n2\n1\n1 0\n3 0.4 0.5 0.1\n").find("line 6") != std::string::npos);
  CHECK(error_of("BAYES\n1\nx\n").find("line 3") != std::string::npos);
  CHECK(error_of("NETWORK 1 2").find("line 1") != std::string::npos);
  CHECK(error_of("BAYES\n1\n2\n1\n1 4\n2 0.5 0.5\n").find("line 5") != std::string::npos);
  CHECK(error_of("BAYES 1 2 1 1 0 2 0.5 0.5 7").find("trailing") != std::string::npos);
  CHECK(error_of("BAYES 2 2 2 2 1 0 1 0 2 0.5 0.5 2 0.5 0.5").find("second CPT") != std::string::npos);
  CHECK_THROWS_AS(parse_model("/nonexistent/model.uai"), InputError);
}

TEST_CASE("large generated network round-trips exactly") {
  BeliefNetwork net = gen_random_network(5, 110, 3, 2, 9);
  std::stringstream buf;
  write_model(buf, Model{net});
  Model back = read_model(buf);
  REQUIRE(std::holds_alternative<BeliefNetwork>(back));
  const auto& got = std::get<BeliefNetwork>(back);
  CHECK(got.domains() == net.domains());
  CHECK(got.parents() == net.parents());
  REQUIRE(got.cpts().size() == 115);
  for (std::size_t v = 0; v < 115; ++v) CHECK(got.cpts()[v] == net.cpts()[v]);

  CspProblem csp = gen_random_maxcsp(10, 3, 25, 4);
  std::stringstream cbuf;
  write_model(cbuf, Model{csp});
  Model cback = read_model(cbuf);
  REQUIRE(std::holds_alternative<CspProblem>(cback));
  CHECK(std::get<CspProblem>(cback).constraints() == csp.constraints());
}

TEST_CASE("file round trip") {
  auto path = std::filesystem::temp_directory_path() / "adbound_io_test.uai";
  BeliefNetwork net = gen_random_network(2, 3, 2, 3, 1);
  write_model(Model{net}, path.string());
  Model back = parse_model(path.string());
  CHECK(std::get<BeliefNetwork>(back).cpts() == net.cpts());
  std::filesystem::remove(path);
}

TEST_CASE("evidence files") {
  std::istringstream in("2 0 1 3 0");
  Evidence ev = read_evidence(in);
  CHECK(ev == Evidence{{0, 1}, {3, 0}});
  std::ostringstream out;
  write_evidence(out, ev);
  std::istringstream again(out.str());
  CHECK(read_evidence(again) == ev);
  std::istringstream short_in("2 0 1");
  CHECK_THROWS_AS(read_evidence(short_in), InputError);
  std::istringstream dup("2 0 1 0 0");
  CHECK_THROWS_AS(read_evidence(dup), InputError);
  std::istringstream empty("0");
  CHECK(read_evidence(empty).empty());
}
