#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "guessvi/generators.hpp"
#include "guessvi/io.hpp"
#include "support.hpp"

using namespace guessvi;

namespace {

const char* kMinimal = R"(# coin flip
MODEL mc
OBJECTIVE reach
STATES 3
KIND 0 p
KIND 1 d
KIND 2 d
EDGE 0 1 0.3
EDGE 0 2 0.7
EDGE 1 1
EDGE 2 2
TARGET 1 1
TARGET 2 0
)";

std::string parse_error(const std::string& text) {
  try {
    parse_model(text);
  } catch (const ParseError& e) {
    return e.what();
  } catch (const ModelError& e) {
    return std::string("model: ") + e.what();
  }
  return "accepted";
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("minimal file") {
  Model m = parse_model(kMinimal);
  CHECK(m.num_states() == 3);
  CHECK(m.kind() == ModelKind::Mc);
  CHECK(m.is_target(1));
  CHECK(m.weight(1) == 1.0);
  CHECK(m.successors(0)[0].probability == 0.3);
  CHECK(m.successors(0)[1].probability == 0.7);
}

TEST_CASE("parse errors carry line numbers") {
  const std::string head = "MODEL mdp\nOBJECTIVE reach\nSTATES 2\nKIND 0 d\nKIND 1 d\n";
  CHECK(parse_error(head + "EDGE 0 1 0.5\n") == "line 6: prob on decision edge");
  CHECK(contains(parse_error("MODEL mc\nOBJECTIVE reach\nSTATES 2\nKIND 0 p\nKIND 1 d\nEDGE 0 1\n"),
                 "line 6: missing probability"));
  CHECK(contains(parse_error(head + "EDGE 0 7\n"), "line 6: state 7 out of range"));
  CHECK(contains(parse_error(head + "EDGE 0 1\nEDGE 0 1\n"), "line 7:"));
  CHECK(contains(parse_error(head + "EDGE 0 1\nEDGE 1 1\nTARGET 1 x\n"), "line 8: bad number 'x'"));
  CHECK(contains(parse_error(head + "EDGE 0 1\nEDGE 1 1\nJUMP 1\n"), "unknown directive 'JUMP'"));
  CHECK(contains(parse_error(head + "EDGE 0 1\nEDGE 1 1\nTARGET 1 1\nCOST 0 1\n"), "COST requires OBJECTIVE ssp"));
  CHECK(contains(parse_error("MODEL mdp\nOBJECTIVE reach\nSTATES 2\nKIND 0 d\nEDGE 0 1\nEDGE 1 1\n"),
                 "before its KIND"));
  CHECK(contains(parse_error("MODEL mc\nKIND 0 d\n"), "must come first"));
  CHECK(contains(parse_error("MODEL mc\nOBJECTIVE reach\n"), "required"));
  CHECK(contains(parse_error("MODEL mc\nOBJECTIVE reach\nSTATES 2\nKIND 0 q\n"), "KIND must be d or p"));
}

TEST_CASE("model invariants surface as model errors") {
  std::string text =
      "MODEL mc\nOBJECTIVE reach\nSTATES 2\nKIND 0 p\nKIND 1 d\nEDGE 0 1 0.5\nEDGE 0 0 0.4\nEDGE 1 1\nTARGET 1 1\n";
  CHECK(contains(parse_error(text), "row sum"));
  text = "MODEL mc\nOBJECTIVE reach\nSTATES 2\nKIND 0 d\nKIND 1 d\nEDGE 0 1\nEDGE 1 0\nTARGET 1 1\n";
  CHECK(contains(parse_error(text), "non-absorbing target"));
}

TEST_CASE("serialize then parse is the identity") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto kind = seed % 2 ? ModelKind::Mc : ModelKind::Mdp;
    auto obj = seed % 3 ? ObjectiveKind::Reach : ObjectiveKind::Ssp;
    Model m = gen_random(testing::random_params(seed, 2, 50, kind, obj));
    std::string text = serialize_model(m);
    Model back = parse_model(text);
    CHECK(back == m);
    CHECK(serialize_model(back) == text);
  }
  for (Model m : {gen_slow_mc(9, 0.3), gen_slow_mdp(4)}) CHECK(parse_model(serialize_model(m)) == m);
}

TEST_CASE("model files") {
  auto path = std::filesystem::temp_directory_path() / "guessvi_io_roundtrip.txt";
  Model m = gen_slow_mdp(3);
  write_model_file(path.string(), m);
  CHECK(read_model_file(path.string()) == m);
  std::filesystem::remove(path);
  CHECK_THROWS(read_model_file((std::filesystem::temp_directory_path() / "guessvi_missing.txt").string()));
}

TEST_CASE("shortest round-trip decimals") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(format_double(1e-300) == "1e-300");
}
