#include <cstdlib>
#include <sstream>

#include "germdet/report.hpp"
#include "germdet/request.hpp"
#include "support.hpp"

using namespace gt;

namespace {

Json run_json(const std::vector<std::string>& args) {
  std::vector<std::string> a = args;
  a.push_back("--json");
  a.push_back("--no-timing");
  CliResult r = run_cli(a);
  return Json::parse(r.output);
}

std::vector<Json> lines_of(const std::string& out) {
  std::vector<Json> docs;
  std::istringstream is(out);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) docs.push_back(Json::parse(line));
  return docs;
}

}  // namespace

TEST_CASE("parse_request examples") {
  auto r = parse_request({"analyze", "--field", "Fp:2", "--vars", "x", "--poly", "x^2+x^7", "--group", "right",
                          "--filtration", "m-adic", "--degree", "16", "--json"});
  CHECK(r.command == Command::Analyze);
  CHECK(r.field == Field::prime(2));
  CHECK(r.degree == 16);
  CHECK(r.json);
  CHECK(r.germ.size() == 1);
  CHECK(S(r.germ[0]) == "x^2 + x^7");

  try {
    (void)parse_request({"analyze", "--field", "Fp:4", "--poly", "x"});
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("4 is not prime") != std::string::npos);
  }

  auto o = parse_request({"orbit", "--poly", "x^3+y^3", "--perturb", "x^10*y", "--field", "QQ", "--vars", "x,y",
                          "--group", "right", "--degree", "12"});
  CHECK(o.command == Command::Orbit);
  CHECK(o.perturbation.size() == 1);
  CHECK(o.vars == std::vector<std::string>{"x", "y"});
}

TEST_CASE("parse_request validation") {
  CHECK(code_of([] { (void)parse_request({"analyze", "--vars", "x", "--poly", "x+y"}); }) ==
        ErrorCode::UnknownVariable);
  CHECK(code_of([] { (void)parse_request({"oracle", "--field", "Fp:2", "--poly", "x^2+y^3"}); }) ==
        ErrorCode::UnsupportedCombination);
  CHECK(code_of([] { (void)parse_request({"oracle", "--poly", "x^2"}); }) == ErrorCode::UnsupportedCombination);
  CHECK(code_of([] {
          (void)parse_request({"orbit", "--poly", "x^3", "--perturb", "x^5", "--quotient", "x^2"});
        }) == ErrorCode::UnsupportedCombination);
  CHECK(code_of([] { (void)parse_request({"analyze", "--vars", "x,x", "--poly", "x"}); }) == ErrorCode::ParseError);
  CHECK(code_of([] { (void)parse_request({"frobnicate"}); }) == ErrorCode::ParseError);
  CHECK(code_of([] { (void)parse_request({"analyze", "--poly", "x^^2"}); }) == ErrorCode::ParseError);
  CHECK(code_of([] { (void)parse_request({"analyze", "--matrix", "x,0;0", "--group", "matrix"}); }) ==
        ErrorCode::ParseError);
}

TEST_CASE("field and filtration syntax") {
  CHECK(parse_field("QQ") == Field::rationals());
  CHECK(parse_field("Fp:5") == Field::prime(5));
  CHECK(code_of([] { (void)parse_field("Fp:9"); }) == ErrorCode::ParseError);
  auto w = parse_filtration("weighted:1,2", kXY);
  CHECK(w.kind() == FiltrationKind::Weighted);
  CHECK(w.weights() == std::vector<int>{1, 2});
  auto ch = parse_filtration("chain:I1=x^2,y^3;A=x,y", kXY);
  CHECK(ch.kind() == FiltrationKind::Chain);
  CHECK(ch.i1_generators().size() == 2);
  CHECK(code_of([] { (void)parse_filtration("weighted:1", kXY); }) == ErrorCode::ParseError);
  CHECK(code_of([] { (void)parse_filtration("chain:I1=x+y;A=x,y", kXY); }) == ErrorCode::ParseError);
}

TEST_CASE("tokenizer") {
  auto t = tokenize_command_line(R"(analyze --poly "x^2 + y^3" --vars 'x,y' a\ b)");
  CHECK(t == std::vector<std::string>{"analyze", "--poly", "x^2 + y^3", "--vars", "x,y", "a b"});
  CHECK(code_of([] { (void)tokenize_command_line("analyze --poly \"x^2"); }) == ErrorCode::ParseError);
}

TEST_CASE("run examples") {
  auto a = run_json({"analyze", "--field", "QQ", "--vars", "x,y", "--poly", "x^3+y^3", "--group", "right"});
  CHECK(a["N_inf"] == 3);
  CHECK(a["determinacy_order"] == 3);
  CHECK(a["mu"] == 4);
  CHECK(a["tau"] == 4);
  CHECK(a["verdict"] == "determined");

  auto b = run_json({"analyze", "--field", "Fp:2", "--vars", "x", "--poly", "x^2+x^7", "--group", "right"});
  CHECK(b["N_inf"] == 7);
  CHECK(b["determinacy_order"] == 12);
  CHECK(b["mode"] == "weak-lie");

  auto m = run_json({"analyze", "--field", "QQ", "--vars", "x,y", "--map", "x,y^2", "--group", "right"});
  CHECK(m["verdict"] == "obstructed");
  CHECK(m["reason"] == "component in m^2");
}

TEST_CASE("exit codes and error documents") {
  CliResult ok = run_cli({"analyze", "--poly", "x^3+y^3", "--json"});
  CHECK(ok.exit_code == 0);
  CliResult nf = run_cli({"analyze", "--field", "Fp:2", "--poly", "x^2", "--json"});
  CHECK(nf.exit_code == 0);
  CHECK(Json::parse(nf.output)["verdict"] == "not_found");
  CliResult parse = run_cli({"analyze", "--field", "Fp:4", "--poly", "x", "--json"});
  CHECK(parse.exit_code == 2);
  auto pe = Json::parse(parse.output);
  CHECK(pe["status"] == "error");
  CHECK(pe["error"]["code"] == "ParseError");
  CliResult engine = run_cli({"analyze", "--field", "Fp:2", "--map", "x,y", "--group", "contact", "--filtration",
                              "chain:I1=x;A=x", "--json"});
  CHECK(engine.exit_code == 1);
  CHECK(Json::parse(engine.output)["error"]["code"] == "InvalidChain");
}

TEST_CASE("determinism excluding timing") {
  std::vector<std::string> args{"orbit", "--poly", "x^3+y^3", "--perturb", "x^10*y", "--degree", "12", "--json"};
  auto first = Json::parse(run_cli(args).output);
  auto second = Json::parse(run_cli(args).output);
  REQUIRE(first.contains("timing"));
  first.erase("timing");
  second.erase("timing");
  CHECK(first.dump() == second.dump());
  args.push_back("--no-timing");
  CHECK(run_cli(args).output == run_cli(args).output);
}

TEST_CASE("orbit and oracle reports") {
  auto o = run_json({"orbit", "--poly", "x^3+y^3", "--perturb", "x^10*y", "--degree", "12"});
  CHECK(o["orbit"]["outcome"] == "witness");
  CHECK(o["orbit"]["verified"] == true);
  auto f = run_json({"orbit", "--field", "Fp:2", "--vars", "x", "--poly", "x^2", "--perturb", "x^3", "--degree", "8"});
  CHECK(f["orbit"]["outcome"] == "failed");
  CHECK(f["orbit"]["failed_degree"] == 3);
  CHECK(f["orbit"]["tag"] == "not in tangent");
  auto q = run_json({"oracle", "--field", "Fp:2", "--vars", "x", "--poly", "x^3", "--degree", "8"});
  CHECK(q["oracle"]["order"] == 3);
}

TEST_CASE("batch examples") {
  auto three = run_batch("analyze --poly x^3+y^3\n# comment\nanalyze --poly x^2+y^3\nanalyze --field Fp:2 --poly x^2\n",
                         true, false, 1);
  auto docs = lines_of(three.output);
  REQUIRE(docs.size() == 4);
  CHECK(docs[0]["entry"] == 1);
  CHECK(docs[1]["line"] == 3);
  CHECK(docs[3]["summary"]["reports"] == 3);
  CHECK(docs[3]["summary"]["had_errors"] == false);

  auto bad = run_batch("analyze --poly x^3+y^3\nanalyze --field Fp:4 --poly x\nanalyze --poly x^2+y^2\n", true,
                       false, 2);
  CHECK(bad.exit_code == 0);
  auto bdocs = lines_of(bad.output);
  REQUIRE(bdocs.size() == 4);
  CHECK(bdocs[1]["status"] == "error");
  CHECK(bdocs[1]["error"]["line"] == 2);
  CHECK(bdocs[3]["summary"]["errors"] == 1);
  CHECK(bdocs[3]["summary"]["reports"] == 2);
  CHECK(bdocs[3]["summary"]["had_errors"] == true);

  auto empty = lines_of(run_batch("", true, false, 1).output);
  REQUIRE(empty.size() == 1);
  CHECK(empty[0]["summary"]["entries"] == 0);
  CHECK(empty[0]["summary"]["errors"] == 0);

  auto list = lines_of(run_batch(R"(["analyze --poly x^3+y^3", ["analyze", "--poly", "x^2+y^3"]])", true, false, 1).output);
  REQUIRE(list.size() == 3);
  CHECK(list[1]["determinacy_order"] == 3);

  auto serial = run_batch("analyze --poly x^3+y^3\nanalyze --poly x^2+y^4\nanalyze --poly x^2*y+y^4\n", true, false, 1);
  auto parallel = run_batch("analyze --poly x^3+y^3\nanalyze --poly x^2+y^4\nanalyze --poly x^2*y+y^4\n", true, false, 3);
  CHECK(serial.output == parallel.output);
}

TEST_CASE("degree cap from the environment") {
  setenv("GERMDET_MAX_DEGREE", "9", 1);
  auto a = run_json({"analyze", "--poly", "x^3+y^3", "--degree", "20"});
  unsetenv("GERMDET_MAX_DEGREE");
  CHECK(a["degree"] == 9);
  auto b = run_json({"analyze", "--poly", "x^3+y^3"});
  CHECK(b["degree"] == 12);
}

TEST_CASE("text rendering") {
  CliResult r = run_cli({"analyze", "--poly", "x^3+y^3", "--no-timing"});
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("determinacy_order") != std::string::npos);
}
