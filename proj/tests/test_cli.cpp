#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include <cli.hpp>

#include "support.hpp"

using namespace ualg;
using namespace testing_support;
using ualg::cli::run_command;

namespace {

  std::string const kPaper = data_path("algebras/paper_BO.alg");
  std::string const kSmall = data_path("algebras/small.alg");

  std::string scratch(std::string const& name, std::string const& text) {
    auto path = std::filesystem::temp_directory_path() / ("ualg_cli_" + name);
    std::ofstream(path) << text;
    return path.string();
  }

  // Two one-element-constant algebras with no homomorphism from Same to Split.
  std::string const kNoHom = "algebra Same\nelements a\nop c/0 = a\nop d/0 = a\nend\n"
                             "algebra Split\nelements x y\nop c/0 = x\nop d/0 = y\nend\n";

  int exit_of(std::vector<std::string> args) {
    auto r = run_command(std::move(args));
    INFO(r.out << r.err);
    return r.exit;
  }

}  // namespace

TEST_CASE("check and usage errors") {
  auto r = run_command({"check", kPaper});
  CHECK(r.exit == 0);
  CHECK(r.out == "B: 2 elements; zero/0 one/0 comp/1 and/2 or/2\n"
                 "O: 4 elements; zero/0 one/0 comp/1 and/2 or/2\n2 algebras ok\n");

  r = run_command({"check", "nonexistent.alg"});
  CHECK(r.exit == 2);
  CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("file not found"));

  auto bad = scratch("bad.alg", "algebra B\nelements b1 b2\nop and/2 = b1 b1 b1\nend\n");
  r        = run_command({"check", bad});
  CHECK(r.exit == 2);
  CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("3:12:"));

  CHECK(exit_of({}) == 2);
  CHECK(exit_of({"frobnicate"}) == 2);
  CHECK(exit_of({"check"}) == 2);
  CHECK(exit_of({"--workers", "0", "check", kPaper}) == 2);
  CHECK(exit_of({"--help"}) == 0);
  CHECK(exit_of({"--json", "check", kPaper}) == 0);
}

TEST_CASE("eval and satisfies") {
  auto r = run_command({"eval", kPaper, "--algebra", "O", "--term", "and(x, comp(y))", "--bind",
                        "x=o4,y=o2"});
  CHECK(r.exit == 0);
  CHECK(r.out == "o3\n");
  CHECK(exit_of({"eval", kPaper, "--algebra", "B", "--term", "and(x, y)", "--bind", "x=b1"}) == 2);
  CHECK(exit_of({"eval", kPaper, "--algebra", "B", "--term", "and(x)", "--bind", "x=b1"}) == 2);
  CHECK(exit_of({"eval", kPaper, "--algebra", "B", "--term", "x", "--bind", "x=q"}) == 2);
  CHECK(exit_of({"eval", kPaper, "--term", "x", "--bind", "x=b1"}) == 2);  // two algebras, none named

  CHECK(exit_of({"satisfies", kPaper, "--algebra", "O", "--preset", "boolean"}) == 0);
  CHECK(exit_of({"satisfies", kSmall, "--algebra", "Z2", "--preset", "group"}) == 0);
  auto eqs = scratch("absorb.eq", "vars x y\neq and(x, y) = x\n");
  r        = run_command({"satisfies", kPaper, eqs, "--algebra", "B"});
  CHECK(r.exit == 1);
  CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("at x=b2 y=b1 (b1 vs b2)"));
  CHECK(exit_of({"satisfies", kPaper, eqs, "--algebra", "B", "--preset", "lattice"}) == 2);
  CHECK(exit_of({"satisfies", kPaper, "--algebra", "B"}) == 2);
  CHECK(exit_of({"satisfies", kPaper, "--algebra", "B", "--preset", "no-such"}) == 2);
  CHECK(exit_of({"satisfies", kSmall, "--algebra", "SL2", "--preset", "lattice"}) == 2);
}

TEST_CASE("gen, finiteness and clone") {
  auto r = run_command({"gen", kPaper, "--algebra", "O", "--set", "o2"});
  CHECK(r.exit == 0);
  CHECK_THAT(r.out, Catch::Matchers::EndsWith("generated: {o1, o2, o3, o4}\n"));
  CHECK(exit_of({"gen", kPaper, "--algebra", "O", "--set", "o2", "--report"}) == 0);
  CHECK(exit_of({"gen", kPaper, "--algebra", "O", "--set", "o9"}) == 2);

  r = run_command({"gen", kSmall, "--algebra", "L2"});
  CHECK(r.exit == 0);
  CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("generated: empty, not an algebra"));

  CHECK(exit_of({"finiteness", kPaper, "--algebra", "O"}) == 0);

  r = run_command({"clone", kSmall, "--algebra", "L2", "--arity", "2"});
  CHECK(r.exit == 0);
  CHECK_THAT(r.out, Catch::Matchers::StartsWith("Clo_2(L2): 4 members\n"));
  CHECK(exit_of({"--budget", "1", "clone", kSmall, "--algebra", "L2", "--arity", "2"}) == 2);
  CHECK(exit_of({"clone", kSmall, "--algebra", "L2", "--arity", "9"}) == 2);
}

TEST_CASE("homs, iso, retracts and reduct") {
  auto r = run_command({"homs", kPaper, "--from", "B", "--to", "O"});
  CHECK(r.exit == 0);
  CHECK(r.out == "1 homomorphism B -> O\n  b1->o1, b2->o4\n");
  CHECK(exit_of({"homs", kPaper, "--from", "O", "--to", "B", "--count"}) == 0);
  CHECK(exit_of({"homs", kPaper, "--from", "O", "--to", "B", "--count", "--first"}) == 2);
  CHECK(exit_of({"homs", kPaper, "--from", "O", "--to", "Q"}) == 2);
  CHECK(exit_of({"homs", kPaper, "--from", "B", "--to", "L2"}) == 2);
  auto nohom = scratch("nohom.alg", kNoHom);
  CHECK(exit_of({"homs", nohom, "--from", "Same", "--to", "Split"}) == 1);
  CHECK(exit_of({"homs", nohom, "--from", "Split", "--to", "Same", "--first"}) == 0);
  CHECK(exit_of({"--budget", "1", "homs", kPaper, "--from", "O", "--to", "O"}) == 2);

  CHECK(exit_of({"iso", kPaper, "--algebras", "B,B"}) == 0);
  CHECK(exit_of({"iso", kPaper, "--algebras", "B,O"}) == 1);
  CHECK(exit_of({"iso", kPaper, "--algebras", "B"}) == 2);

  CHECK(exit_of({"retracts", kPaper, "--algebra", "O", "--image", "o1,o4"}) == 0);
  CHECK(exit_of({"retracts", kPaper, "--algebra", "O", "--image", "o2"}) == 2);  // not closed

  auto lat = scratch("olat.alg", run_command({"reduct", kPaper, "--algebra", "O", "--keep",
                                              "and,or", "--name", "Olat"})
                                     .out);
  r = run_command({"retracts", lat, "--image", "o1,o4"});
  CHECK(r.exit == 0);
  CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("o1->o1, o2->o1, o3->o4, o4->o4"));
  CHECK(exit_of({"retracts", lat, "--image", "o2,o3"}) == 2);  // an antichain is not a subuniverse
  // {a, b} is closed under the swap, but f has no fixed point there for c to land on.
  auto swap = scratch("swap.alg", "algebra S\nelements a b c\nop f/1 = b a c\nend\n");
  CHECK(exit_of({"retracts", swap, "--image", "a,b"}) == 1);
  CHECK(exit_of({"retracts", swap, "--image", "c"}) == 0);
  CHECK(exit_of({"reduct", kPaper, "--algebra", "O", "--keep", "meet"}) == 2);
}

TEST_CASE("product reproduces the golden lattice tables") {
  auto r = run_command({"product", kPaper, "--algebras", "B,O", "--elements", "s,t,u,v,w,x,y,z",
                        "--name", "P"});
  REQUIRE(r.exit == 0);
  auto parsed = parse_algebra_file(r.out);
  REQUIRE(parsed.size() == 1);
  CHECK(serialize(reduct(parsed[0], {"and", "or"}, "P"))
        == read_file(data_path("tests/golden/paper_P.alg")));

  CHECK(exit_of({"product", kPaper, "--algebras", "B,O", "--verify"}) == 0);
  CHECK(exit_of({"product", kPaper, "--algebras", "B,O", "--prefix", "q", "--elements", "a"}) == 2);
  CHECK(exit_of({"product", kPaper, "--algebras", "B,O", "--elements", "a,b"}) == 2);
  CHECK(exit_of({"product", kPaper, "--algebras", ","}) == 2);
  CHECK(exit_of({"product", kSmall, "--algebras", "L2,SL2"}) == 2);
}

TEST_CASE("free-retract") {
  auto r = run_command({"free-retract", "--gens", "1", "--bound", "8", "--image-bound", "3"});
  CHECK(r.exit == 1);
  CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("contradiction gggg = g.ggg forces length 4"));
  CHECK_THAT(r.out, Catch::Matchers::EndsWith("no retraction; first contradiction at length 4\n"));
  CHECK(exit_of({"free-retract", "--gens", "2", "--bound", "6", "--image-bound", "2"}) == 1);
  CHECK(exit_of({"free-retract", "--gens", "2", "--bound", "3", "--image-bound", "3"}) == 0);
  CHECK(exit_of({"free-retract", "--gens", "2", "--bound", "3"}) == 2);
  CHECK(exit_of({"free-retract", "--gens", "0", "--bound", "3", "--image-bound", "1"}) == 2);
  CHECK(exit_of({"--budget", "10", "free-retract", "--gens", "2", "--bound", "6",
                 "--image-bound", "2"})
        == 2);
}

TEST_CASE("reduced power commands") {
  auto r = run_command({"rp", "adjoin", kPaper, "--algebra", "B", "--gen", "per b1 b2"});
  CHECK(r.exit == 0);
  CHECK_THAT(r.out, Catch::Matchers::StartsWith("4 members\n"));
  CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("= per b1 b2\n"));
  for (std::string idx : {"0", "1", "2", "3"}) {
    CHECK(exit_of({"rp", "retract", kPaper, "--algebra", "B", "--gen", "per b1 b2", "--index",
                   idx})
          == 0);
  }
  CHECK(exit_of({"rp", "preserve", kPaper, "--algebra", "B", "--gen", "pre b2 | per b1 b2 b2",
                 "--preset", "boolean"})
        == 0);
  auto eqs = scratch("rp_absorb.eq", "vars x y\neq and(x, y) = x\n");
  // the base has to satisfy the equations first
  CHECK(exit_of({"rp", "preserve", kPaper, eqs, "--algebra", "B", "--gen", "per b1 b2"}) == 2);
  CHECK(exit_of({"rp", "adjoin", kPaper, "--algebra", "B", "--gen", "per b1 b7"}) == 2);
  CHECK(exit_of({"rp", "adjoin", kPaper, "--algebra", "B", "--gen", "pre b1 |"}) == 2);
  CHECK(exit_of({"rp", kPaper}) == 2);
  CHECK(exit_of({"--budget", "3", "rp", "adjoin", kPaper, "--algebra", "O", "--gen",
                 "per o2 o3"})
        == 2);
}

TEST_CASE("preset printing") {
  auto r = run_command({"preset", "boolean"});
  CHECK(r.exit == 0);
  CHECK(parse_equation_file(r.out).equations.size() == preset("boolean-algebra").equations.size());
  CHECK(read_file(data_path("presets/boolean.eq")) == r.out);
  CHECK(exit_of({"preset", "no-such"}) == 2);
}

TEST_CASE("JSON output is valid and byte-identical across runs and workers") {
  auto nohom = scratch("json_nohom.alg", kNoHom);
  std::vector<std::vector<std::string>> commands{
      {"check", kPaper},
      {"eval", kPaper, "--algebra", "O", "--term", "or(x, y)", "--bind", "x=o2,y=o3"},
      {"satisfies", kPaper, "--algebra", "O", "--preset", "boolean"},
      {"satisfies", kSmall, "--algebra", "SL2", "--preset", "semigroup"},
      {"gen", kPaper, "--algebra", "O", "--set", "o2", "--report"},
      {"finiteness", kSmall, "--algebra", "L3"},
      {"clone", kPaper, "--algebra", "B", "--arity", "1"},
      {"homs", kPaper, "--from", "O", "--to", "O"},
      {"homs", nohom, "--from", "Same", "--to", "Split"},
      {"iso", kPaper, "--algebras", "B,O"},
      {"retracts", kPaper, "--algebra", "O", "--image", "o1,o4"},
      {"reduct", kPaper, "--algebra", "O", "--keep", "and,or"},
      {"product", kPaper, "--algebras", "B,O", "--elements", "s,t,u,v,w,x,y,z", "--verify"},
      {"free-retract", "--gens", "2", "--bound", "6", "--image-bound", "2"},
      {"rp", "adjoin", kPaper, "--algebra", "O", "--gen", "per o2 o3", "--gen", "pre o1 | per o4"},
      {"rp", "retract", kPaper, "--algebra", "B", "--gen", "per b1 b2", "--index", "2"},
      {"rp", "preserve", kSmall, "--algebra", "Z2", "--gen", "per z0 z1", "--preset", "group"},
      {"preset", "lattice"},
  };
  for (auto const& cmd : commands) {
    std::string         base;
    int                 base_exit = -1;
    for (std::string workers : {"1", "1", "2", "8", "8"}) {
      std::vector<std::string> args{"--json", "--workers", workers};
      args.insert(args.end(), cmd.begin(), cmd.end());
      auto r = run_command(args);
      INFO(cmd[0] << " workers " << workers << "\n" << r.err);
      REQUIRE(r.exit != 2);
      REQUIRE(cli::Json::accept(r.out));
      if (base_exit < 0) {
        base      = r.out;
        base_exit = r.exit;
      }
      CHECK(r.out == base);
      CHECK(r.exit == base_exit);
    }
  }
}
