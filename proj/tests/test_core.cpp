#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mml/csv.hpp"
#include "mml/finite_diff.hpp"
#include "mml/linalg.hpp"
#include "mml/rng.hpp"
#include "mml/threads.hpp"
#include "mml/toml.hpp"

namespace fs = std::filesystem;
using namespace mml;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "mml_core_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("joint points stack and unstack without loss") {
  JointPoint p{Vec(2), Vec(3)};
  p.x << 1.5, -2.0;
  p.y << 0.25, 4.0, -8.0;
  const Vec z = to_joint(p);
  REQUIRE(z.size() == 5);
  CHECK(z(0) == 1.5);
  CHECK(z(4) == -8.0);
  const JointPoint q = from_joint(z, 2);
  CHECK(q.x == p.x);
  CHECK(q.y == p.y);
  CHECK(q.d1() == 2);
  CHECK(q.d2() == 3);

  const JointPoint a(0.0, 0.0);
  const JointPoint b(3.0, 4.0);
  CHECK(joint_distance(a, b) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(joint_inf_norm(b) == 4.0);

  const JointPoint o = origin_like(2, 3);
  CHECK(o.x.isZero(0.0));
  CHECK(o.y.isZero(0.0));
}

TEST_CASE("format_double emits shortest strings that parse back exactly") {
  const std::vector<double> tricky = {0.1,    1.0 / 3.0, 1e-4,  0.0015, -0.9,
                                      6.4e-3, 1e300,     5e-324, 0.021808811449437096,
                                      -0.4285714285714286};
  for (const double v : tricky) {
    const std::string s = format_double(v);
    char* end = nullptr;
    const double back = std::strtod(s.c_str(), &end);
    CHECK(*end == '\0');
    CHECK(back == v);
  }
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.0) == "0");
  CHECK(format_int(-5) == "-5");
  CHECK(format_int(9007199254740993LL) == "9007199254740993");
}

TEST_CASE("csv writer keeps rows aligned with the header") {
  CsvWriter w({"a", "b"});
  w.row({"1", "2"});
  w.row({format_double(0.5), "x"});
  CHECK(w.content() == "a,b\n1,2\n0.5,x\n");
  CHECK_THROWS_AS(w.row({"only-one"}), std::invalid_argument);
}

TEST_CASE("atomic_write replaces files and leaves no temporaries") {
  const fs::path dir = temp_dir();
  const fs::path target = dir / "atomic.txt";
  atomic_write(target, "first\n");
  CHECK(slurp(target) == "first\n");
  atomic_write(target, "second\n");
  CHECK(slurp(target) == "second\n");
  for (const auto& entry : fs::directory_iterator(dir))
    CHECK(entry.path().extension() != ".tmp");
  fs::remove(target);
}

TEST_CASE("toml subset parses sections, lists, and matrices") {
  const std::string text =
      "# run setup\n"
      "command = \"simulate\"\n"
      "steps = 250\n"
      "emit_svg = true\n"
      "\n"
      "[grid]\n"
      "beta_values = [-0.5, 0.0, 0.5]  # row axis\n"
      "h_values = []\n"
      "\n"
      "[quadratic]\n"
      "A = [[0.4, 0.0], [0.0, 0.4]]\n";
  const TomlTable t = parse_toml(text);
  CHECK(t.at("").at("command").text == "simulate");
  CHECK(t.at("").at("steps").number == 250.0);
  CHECK(t.at("").at("emit_svg").boolean == true);
  CHECK(t.at("grid").at("beta_values").list == std::vector<double>{-0.5, 0.0, 0.5});
  CHECK(t.at("grid").at("h_values").list.empty());
  REQUIRE(t.at("quadratic").at("A").matrix.size() == 2);
  CHECK(t.at("quadratic").at("A").matrix[1] == std::vector<double>{0.0, 0.4});

  const TomlTable again = parse_toml(serialize_toml(t));
  CHECK(again == t);
}

TEST_CASE("toml errors name the offending line") {
  const auto expect_line = [](const std::string& text, const std::string& needle) {
    try {
      parse_toml(text);
      FAIL_CHECK("expected parse failure for: " << text);
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_line("x = ", "line 1");
  expect_line("a = 1\nb = 2\na = 3\n", "line 3");
  expect_line("s = \"unterminated\n", "line 1");
  expect_line("\n\nvalue 12\n", "line 3");
  expect_line("n = twelve\n", "line 1");
}

TEST_CASE("finite differences recover analytic derivatives of a polynomial") {
  // f(v) = v0^2 v1 + 3 v1: grad = (2 v0 v1, v0^2 + 3).
  const ScalarFn f = [](const Vec& v) { return v(0) * v(0) * v(1) + 3.0 * v(1); };
  Vec p(2);
  p << 1.2, -0.7;
  const Vec g = fd_gradient(f, p, default_grad_step(p));
  CHECK(g(0) == doctest::Approx(2.0 * 1.2 * -0.7).epsilon(1e-8));
  CHECK(g(1) == doctest::Approx(1.2 * 1.2 + 3.0).epsilon(1e-8));

  // field(v) = (v1, v0 v1): jacobian = [[0, 1], [v1, v0]].
  const VectorFn field = [](const Vec& v) {
    Vec out(2);
    out << v(1), v(0) * v(1);
    return out;
  };
  const Mat j = fd_jacobian(field, p, default_grad_step(p));
  CHECK(j(0, 0) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(j(0, 1) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(j(1, 0) == doctest::Approx(-0.7).epsilon(1e-8));
  CHECK(j(1, 1) == doctest::Approx(1.2).epsilon(1e-8));

  // d^2 f / dv0 dv1 = 2 v0.
  const Mat h = fd_second_difference(f, p, {0}, {1}, default_hess_step(p));
  CHECK(h(0, 0) == doctest::Approx(2.4).epsilon(1e-6));
}

TEST_CASE("parallel_for covers every index exactly once and rethrows") {
  const std::size_t count = 1000;
  std::vector<int> hits(count, 0);
  parallel_for(count, [&](std::size_t i) { hits[i] += 1; }, 4);
  for (std::size_t i = 0; i < count; ++i) CHECK(hits[i] == 1);

  CHECK_THROWS_AS(parallel_for(
                      100,
                      [](std::size_t i) {
                        if (i == 57) throw std::runtime_error("boom");
                      },
                      4),
                  std::runtime_error);

  // Zero tasks is a no-op, not a hang.
  parallel_for(0, [](std::size_t) { FAIL("called on empty range"); }, 2);
}

TEST_CASE("worker_count honors the environment cap") {
  const char* saved = std::getenv("MML_THREADS");
  const std::string restore = saved ? saved : "";

  setenv("MML_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  setenv("MML_THREADS", "0", 1);
  CHECK(worker_count() >= 1);
  setenv("MML_THREADS", "not-a-number", 1);
  CHECK(worker_count() >= 1);
  unsetenv("MML_THREADS");
  CHECK(worker_count() >= 1);

  if (saved)
    setenv("MML_THREADS", restore.c_str(), 1);
  else
    unsetenv("MML_THREADS");
}

TEST_CASE("seeded rng reproduces and respects ranges") {
  auto a = make_rng(9);
  auto b = make_rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform(a, -2.0, 5.0);
    CHECK(u == uniform(b, -2.0, 5.0));
    CHECK(u >= -2.0);
    CHECK(u < 5.0);
  }
  auto c = make_rng(9);
  auto d = make_rng(10);
  int same = 0;
  for (int i = 0; i < 100; ++i)
    if (uniform01(c) == uniform01(d)) ++same;
  CHECK(same == 0);
}

TEST_CASE("stream seeds decorrelate by index") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 100; ++i) seen.insert(derive_stream_seed(42, i));
  CHECK(seen.size() == 100);
  CHECK(derive_stream_seed(42, 7) == derive_stream_seed(42, 7));
  CHECK(derive_stream_seed(42, 7) != derive_stream_seed(43, 7));
}
