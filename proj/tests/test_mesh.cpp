#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "kirigami/fields.hpp"
#include "kirigami/mesh.hpp"

using namespace kirigami;

TEST_SUITE_BEGIN("mesh");

TEST_CASE("single crossed cell") {
  const auto mesh = generate_crossed_mesh(1, 1, 1.0);
  CHECK(mesh.vertex_count() == 5);
  CHECK(mesh.triangle_count() == 4);
  CHECK(mesh.h() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("counting formulas") {
  SUBCASE("2x2") {
    const auto mesh = generate_crossed_mesh(2, 2, 1.5);
    CHECK(mesh.vertex_count() == 13);
    CHECK(mesh.triangle_count() == 16);
  }
  SUBCASE("paper dof count at 300x300") {
    const auto mesh = generate_crossed_mesh(300, 300, 1.5);
    CHECK(mesh.vertex_count() == 180601);  // (301)^2 + 300^2
    CHECK(mesh.triangle_count() == 4 * 300 * 300);
    CHECK(mesh.h() == doctest::Approx(5.0e-3).epsilon(1e-12));
  }
  SUBCASE("random sizes") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> dist(1, 23);
    for (int rep = 0; rep < 12; ++rep) {
      const int nx = dist(rng), ny = dist(rng);
      const auto mesh = generate_crossed_mesh(nx, ny, 2.0);
      CHECK(mesh.vertex_count() == (nx + 1) * (ny + 1) + nx * ny);
      CHECK(mesh.triangle_count() == 4 * nx * ny);
    }
  }
}

TEST_CASE("generator rejects bad arguments") {
  CHECK_THROWS_AS(generate_crossed_mesh(0, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(generate_crossed_mesh(1, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(generate_crossed_mesh(1, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(generate_crossed_mesh(1, 1, -2.0), std::invalid_argument);
}

TEST_CASE("areas tile the square") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> dist(1, 17);
  for (int rep = 0; rep < 8; ++rep) {
    const int nx = dist(rng), ny = dist(rng);
    const double L = 1.5;
    const auto mesh = generate_crossed_mesh(nx, ny, L);
    double total = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      CHECK(mesh.triangle_area(t) > 0.0);
      total += mesh.triangle_area(t);
    }
    CHECK(total == doctest::Approx(L * L).epsilon(1e-12));
  }
}

TEST_CASE("edge sharing and tag partition") {
  const auto mesh = generate_crossed_mesh(5, 3, 1.5);
  std::map<std::pair<int, int>, int> count;
  auto key = [](int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; };
  for (const auto& tri : mesh.triangles())
    for (int k = 0; k < 3; ++k) ++count[key(tri[k], tri[(k + 1) % 3])];

  std::set<std::pair<int, int>> tagged;
  int n_dirichlet = 0, n_neumann = 0;
  for (const auto& be : mesh.boundary_edges()) {
    CHECK(tagged.insert(key(be.a, be.b)).second);  // no double tagging
    (is_dirichlet(be.tag) ? n_dirichlet : n_neumann)++;
  }
  for (const auto& [e, c] : count) {
    CHECK((c == 1 || c == 2));
    CHECK(tagged.count(e) == (c == 1 ? 1u : 0u));  // tags partition the hull
  }
  CHECK(n_dirichlet == 2 * 3);
  CHECK(n_neumann == 2 * 5);
}

TEST_CASE("statistics") {
  SUBCASE("1x1 unit") {
    const auto s = mesh_statistics(generate_crossed_mesh(1, 1, 1.0));
    CHECK(s.vertex_count == 5);
    CHECK(s.triangle_count == 4);
    CHECK(s.min_angle_deg == doctest::Approx(45.0).epsilon(1e-12));
  }
  SUBCASE("square cells give isoceles right triangles") {
    const auto s = mesh_statistics(generate_crossed_mesh(2, 2, 1.5));
    CHECK(s.min_angle_deg == doctest::Approx(45.0).epsilon(1e-12));
    CHECK(s.h == doctest::Approx(0.75).epsilon(1e-14));
  }
}

TEST_CASE("mesh io round trip") {
  const auto mesh = generate_crossed_mesh(3, 2, 1.25);
  const std::string text = write_mesh(mesh);
  const auto back = read_mesh(text);
  REQUIRE(back.vertex_count() == mesh.vertex_count());
  REQUIRE(back.triangle_count() == mesh.triangle_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    CHECK(back.vertices()[v].x == mesh.vertices()[v].x);
    CHECK(back.vertices()[v].y == mesh.vertices()[v].y);
  }
  CHECK(back.triangles() == mesh.triangles());
  REQUIRE(back.boundary_edges().size() == mesh.boundary_edges().size());
  for (size_t e = 0; e < mesh.boundary_edges().size(); ++e) {
    CHECK(back.boundary_edges()[e].a == mesh.boundary_edges()[e].a);
    CHECK(back.boundary_edges()[e].b == mesh.boundary_edges()[e].b);
    CHECK(back.boundary_edges()[e].tag == mesh.boundary_edges()[e].tag);
  }
  CHECK(back.h() == mesh.h());
  CHECK(write_mesh(back) == text);
}

TEST_CASE("reader reports precise errors") {
  const std::string good = write_mesh(generate_crossed_mesh(1, 1, 1.0));

  SUBCASE("malformed header") {
    CHECK_THROWS_WITH_AS(read_mesh("bogus 1\n1 1 1\n"), doctest::Contains("line 1"),
                         std::runtime_error);
  }
  SUBCASE("triangle index out of range") {
    // 5 vertices; first triangle line is line 2 + 5 + 1 = 8.
    std::string text = good;
    const auto pos = text.find("0 1 4\n");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 6, "0 1 99\n");
    try {
      read_mesh(text);
      FAIL("expected error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("line 8") != std::string::npos);
      CHECK(std::string(e.what()).find("out of range") != std::string::npos);
    }
  }
  SUBCASE("missing hull edge tag") {
    std::string text = good;
    const auto pos = text.find("5 4 4");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 5, "5 4 3");
    text.erase(text.rfind('\n', text.size() - 2) + 1);  // drop last boundary line
    CHECK_THROWS_WITH_AS(read_mesh(text), doctest::Contains("untagged boundary edge"),
                         std::runtime_error);
  }
  SUBCASE("unknown tag") {
    std::string text = good;
    const auto pos = text.find("neumann_bottom");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 14, "robin_bottom");
    CHECK_THROWS_WITH_AS(read_mesh(text), doctest::Contains("unknown boundary tag"),
                         std::runtime_error);
  }
  SUBCASE("non-conforming connectivity") {
    // Edge (0, 1) appears in three triangles.
    const std::string text =
        "ntri-mesh 1\n"
        "5 3 0\n"
        "0 0\n1 0\n1 1\n0 1\n0.5 0.5\n"
        "0 1 4\n0 1 2\n0 1 3\n";
    CHECK_THROWS_WITH_AS(read_mesh(text), doctest::Contains("non-conforming"),
                         std::runtime_error);
  }
}

TEST_CASE("nodal interpolation reproduces linear fields across meshes") {
  const auto coarse = generate_crossed_mesh(4, 3, 1.5);
  const auto fine = generate_crossed_mesh(9, 7, 1.5);
  auto linear = [](Vec2 p) { return Complex(2.0 * p.x - 0.5 * p.y + 0.25, p.x + p.y); };
  ComplexField field(coarse);
  for (int v = 0; v < coarse.vertex_count(); ++v)
    field.values[v] = linear(coarse.vertices()[v]);
  const ComplexField onto = interpolate_to(field, fine);
  for (int v = 0; v < fine.vertex_count(); ++v)
    CHECK(std::abs(onto.values[v] - linear(fine.vertices()[v])) < 1e-13);
}

TEST_CASE("hull-edge extraction oracle agrees with tagged set") {
  // Independent oracle: hull edges are exactly those in one triangle.
  const auto mesh = generate_crossed_mesh(4, 4, 1.0);
  std::map<std::pair<int, int>, int> count;
  auto key = [](int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; };
  for (const auto& tri : mesh.triangles())
    for (int k = 0; k < 3; ++k) ++count[key(tri[k], tri[(k + 1) % 3])];
  std::set<std::pair<int, int>> hull;
  for (const auto& [e, c] : count)
    if (c == 1) hull.insert(e);
  std::set<std::pair<int, int>> tagged;
  for (const auto& be : mesh.boundary_edges()) tagged.insert(key(be.a, be.b));
  CHECK(hull == tagged);
}

TEST_SUITE_END();
