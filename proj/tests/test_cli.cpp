#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const char* const kBBody =
    R"({"type":"gauge","body":{"op":"union","children":[)"
    R"({"op":"intersection","children":[{"prim":"sign","i":0,"j":1,"rel":"geq"},{"prim":"ball","r":1}]},)"
    R"({"op":"intersection","children":[{"prim":"sign","i":0,"j":1,"rel":"leq"},{"prim":"slab","a":[-1,1],"c":1}]}]}})";

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("latticelab_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    write("bbody.json", kBBody);
    write("l2.json", R"({"type":"pnorm","p":2})");
    write("ball.json", R"({"type":"gauge","body":{"prim":"ball","r":1}})");
    write("vp4.json",
          R"({"type":"pullback","matrix":[[1,1,1,1],[0,1,1,1],[0,0,1,1],[0,0,0,1]],)"
          R"("inner":{"type":"pnorm","p":2,"weights":[1,0.5,0.3333333333333333,0.25]}})");
    write("strip.json", R"({"type":"gauge","body":{"prim":"slab","a":[1,0],"c":1}})");
    write("broken.json", R"({"type":"pnorm","p":)");
    write("badradius.json", R"({"type":"gauge","body":{"prim":"ball","r":-1}})");
    write("singular.json", R"({"type":"pullback","matrix":[[1,2],[2,4]],"inner":{"type":"pnorm","p":2}})");
    write("not_riesz.json", R"({"strictly_rectangular":true,"riesz":false})");
    write("riesz.json", R"({"riesz":true})");
    write("range.json", R"({"restriction":{"min":4},"ideal":{"min":4}})");
    write("badprofile.json", R"({"colour":"blue"})");
  }
  ~Sandbox() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  std::string read(const std::string& name) const {
    std::ifstream in(dir / name);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }
  // Runs the CLI with stdout and stderr captured; returns the exit status.
  int run(const std::string& args) const {
    const std::string cmd = std::string(LATTICELAB_CLI) + " " + args + " > " + path("stdout") +
                            " 2> " + path("stderr");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string out() const { return read("stdout"); }
  std::string err() const { return read("stderr"); }
};

const Sandbox& box() {
  static Sandbox s;
  return s;
}

std::string spec(const std::string& name) { return "--spec " + box().path(name); }

}  // namespace

TEST_CASE("gauge subcommand") {
  const auto& s = box();
  CHECK(s.run("gauge " + spec("bbody.json") + " --point 1,1") == 0);
  CHECK(std::abs(std::stod(s.out()) - std::sqrt(2.0)) <= 1e-9);
  CHECK(s.run("gauge " + spec("bbody.json") + " --point 0,0") == 0);
  CHECK(std::stod(s.out()) == 0.0);
  CHECK(s.run("gauge " + spec("ball.json") + " --point 3,4") == 0);
  CHECK(std::abs(std::stod(s.out()) - 5.0) <= 1e-9 * 5.0);
  CHECK(s.run("gauge " + spec("ball.json") + " --point 3,4 --tol 0") == 0);
  CHECK(std::stod(s.out()) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("analyze subcommand") {
  const auto& s = box();
  CHECK(s.run("analyze " + spec("l2.json") + " --dim 3 --budget 500") == 0);
  const auto j = nlohmann::json::parse(s.out());
  CHECK(j["schema"] == "latticelab/1");
  CHECK(j["config"]["seed"] == 0);
  CHECK(j["config"]["budget"] == 500);
  CHECK(j["config"]["tol"] == 1e-9);
  for (const char* k : {"restriction", "monotonicity", "ideal", "unconditional"}) {
    CHECK(j["constants"][k]["value"] == 1.0);
  }
  CHECK(s.run("analyze " + spec("vp4.json") + " --budget 500 --format csv") == 0);
  CHECK(s.out().rfind("name,value", 0) == 0);
  CHECK(s.run("analyze " + spec("bbody.json") + " --budget 500 --format text") == 0);
  CHECK(s.out().find("riesz norm:           violated") != std::string::npos);
}

TEST_CASE("analyze is byte-identical across runs and job counts") {
  const auto& s = box();
  const std::string base = "analyze " + spec("bbody.json") + " --budget 2000 --seed 3";
  REQUIRE(s.run(base + " --jobs 1 --out " + s.path("a.json")) == 0);
  REQUIRE(s.run(base + " --jobs 8 --out " + s.path("b.json")) == 0);
  REQUIRE(s.run(base + " --jobs 1 --out " + s.path("c.json")) == 0);
  CHECK(s.read("a.json") == s.read("b.json"));
  CHECK(s.read("a.json") == s.read("c.json"));
}

TEST_CASE("certify subcommand") {
  const auto& s = box();
  CHECK(s.run("certify " + spec("bbody.json") + " --budget 1000 --profile " +
              s.path("not_riesz.json")) == 0);
  CHECK(s.run("certify " + spec("l2.json") + " --dim 2 --budget 1000 --profile " +
              s.path("riesz.json")) == 0);
  CHECK(s.run("certify " + spec("bbody.json") + " --budget 1000 --profile " +
              s.path("riesz.json")) == 1);
  CHECK(s.err().find("f=[-1.0,1.0], g=[1.0,1.0]") != std::string::npos);
  CHECK(s.run("certify " + spec("vp4.json") + " --budget 500 --profile " + s.path("range.json")) == 0);
  CHECK(s.run("certify " + spec("l2.json") + " --dim 2 --budget 500 --profile " +
              s.path("range.json")) == 1);
  CHECK(s.err().find("witness") != std::string::npos);
}

TEST_CASE("gallery subcommand") {
  const auto& s = box();
  CHECK(s.run("gallery") == 0);
  CHECK(s.out().find("vpullback") != std::string::npos);
  CHECK(s.run("gallery bbody") == 0);
  CHECK(s.out().find("||(-1,1)||_B") != std::string::npos);
  CHECK(s.run("gallery --all --json") == 0);
  const auto j = nlohmann::json::parse(s.out());
  CHECK(j.size() == 3);
  CHECK(s.run("gallery vpullback --dim 16") == 0);
}

TEST_CASE("exit codes for errors") {
  const auto& s = box();
  SUBCASE("2: parse errors and unknown entries") {
    CHECK(s.run("gallery nosuch") == 2);
    CHECK(s.err().find("unknown") != std::string::npos);
    CHECK(s.run("analyze " + spec("broken.json")) == 2);
    CHECK(s.run("analyze " + spec("missing.json")) == 2);
    CHECK(s.run("analyze") == 2);
    CHECK(s.run("frobnicate") == 2);
    CHECK(s.run("certify " + spec("bbody.json") + " --profile " + s.path("badprofile.json")) == 2);
    CHECK(s.run("analyze " + spec("l2.json") + " --dim 2 --format yaml") == 2);
  }
  SUBCASE("3: validation errors") {
    CHECK(s.run("analyze " + spec("badradius.json")) == 3);
    CHECK(s.run("analyze " + spec("singular.json")) == 3);
    CHECK(s.run("analyze " + spec("l2.json")) == 3);
    CHECK(s.run("gauge " + spec("bbody.json") + " --point 1,2,3") == 3);
    CHECK(s.run("gauge " + spec("l2.json") + " --dim 2 --point 1,2") == 3);
    CHECK(s.run("gallery vpullback --dim 100") == 3);
  }
  SUBCASE("4: degenerate norm") {
    CHECK(s.run("analyze " + spec("strip.json") + " --budget 100") == 4);
    CHECK(s.err().find("unbounded direction") != std::string::npos);
    CHECK(s.run("gauge " + spec("strip.json") + " --point 0,1") == 4);
  }
}
