#include "kirigami/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace kirigami {

namespace {

std::pair<int, int> undirected(int a, int b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

std::string edge_str(int a, int b) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

}  // namespace

bool is_dirichlet(BoundaryTag tag) {
  return tag == BoundaryTag::dirichlet_left || tag == BoundaryTag::dirichlet_right;
}

const char* tag_name(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::dirichlet_left: return "dirichlet_left";
    case BoundaryTag::dirichlet_right: return "dirichlet_right";
    case BoundaryTag::neumann_top: return "neumann_top";
    case BoundaryTag::neumann_bottom: return "neumann_bottom";
  }
  return "?";
}

Triangulation2D::Triangulation2D(std::vector<Vec2> vertices,
                                 std::vector<std::array<int, 3>> triangles,
                                 std::vector<BoundaryEdge> boundary_edges)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_edges_(std::move(boundary_edges)) {
  const int nv = vertex_count();
  if (nv < 3 || triangles_.empty())
    throw std::invalid_argument("mesh: needs at least 3 vertices and 1 triangle");

  const auto edge_key = [nv](int a, int b) {
    return a < b ? static_cast<long long>(a) * nv + b : static_cast<long long>(b) * nv + a;
  };
  const auto key_str = [nv](long long key) {
    return edge_str(static_cast<int>(key / nv), static_cast<int>(key % nv));
  };

  // Orientation checks; edge incidence counted by sorting.
  std::vector<long long> edges;
  edges.reserve(3 * triangles_.size());
  for (size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= nv)
        throw std::invalid_argument("mesh: triangle " + std::to_string(t) +
                                    " has vertex index out of range");
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw std::invalid_argument("mesh: triangle " + std::to_string(t) +
                                  " has repeated vertices");
    const Vec2 p0 = vertices_[tri[0]], p1 = vertices_[tri[1]], p2 = vertices_[tri[2]];
    if (cross(p1 - p0, p2 - p0) <= 0.0)
      throw std::invalid_argument("mesh: triangle " + std::to_string(t) +
                                  " is not counterclockwise (non-positive area)");
    for (int k = 0; k < 3; ++k) edges.push_back(edge_key(tri[k], tri[(k + 1) % 3]));
  }
  std::sort(edges.begin(), edges.end());

  std::vector<long long> hull;
  for (size_t i = 0; i < edges.size();) {
    size_t j = i;
    while (j < edges.size() && edges[j] == edges[i]) ++j;
    if (j - i > 2)
      throw std::invalid_argument("mesh: non-conforming connectivity, edge " +
                                  key_str(edges[i]) + " shared by more than 2 triangles");
    if (j - i == 1) hull.push_back(edges[i]);
    i = j;
  }

  // Boundary edges must tile the hull, each hull edge tagged exactly once.
  std::vector<long long> tagged;
  tagged.reserve(boundary_edges_.size());
  for (const auto& be : boundary_edges_) {
    if (be.a < 0 || be.a >= nv || be.b < 0 || be.b >= nv)
      throw std::invalid_argument("mesh: boundary edge vertex index out of range");
    const long long key = edge_key(be.a, be.b);
    if (!std::binary_search(hull.begin(), hull.end(), key))
      throw std::invalid_argument("mesh: boundary edge " + edge_str(be.a, be.b) +
                                  " is not a hull edge");
    tagged.push_back(key);
  }
  std::sort(tagged.begin(), tagged.end());
  if (std::adjacent_find(tagged.begin(), tagged.end()) != tagged.end())
    throw std::invalid_argument("mesh: a boundary edge is tagged more than once");
  for (long long key : hull) {
    if (!std::binary_search(tagged.begin(), tagged.end(), key))
      throw std::invalid_argument("mesh: untagged boundary edge " + key_str(key));
  }

  dirichlet_mask_.assign(nv, 0);
  for (const auto& be : boundary_edges_) {
    if (is_dirichlet(be.tag)) dirichlet_mask_[be.a] = dirichlet_mask_[be.b] = 1;
  }
  for (int v = 0; v < nv; ++v)
    if (dirichlet_mask_[v]) dirichlet_vertices_.push_back(v);
  if (dirichlet_vertices_.empty())
    throw std::invalid_argument("mesh: Dirichlet boundary part is empty");

  h_ = 0.0;
  for (const auto& tri : triangles_) {
    for (int k = 0; k < 3; ++k) {
      const double len = norm(vertices_[tri[(k + 1) % 3]] - vertices_[tri[k]]);
      h_ = std::max(h_, len);
    }
  }
}

double Triangulation2D::triangle_area(int t) const {
  const auto& tri = triangles_[t];
  const Vec2 p0 = vertices_[tri[0]], p1 = vertices_[tri[1]], p2 = vertices_[tri[2]];
  return 0.5 * cross(p1 - p0, p2 - p0);
}

Triangulation2D generate_crossed_mesh(int nx, int ny, double L) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("generate_crossed_mesh: nx, ny must be >= 1");
  if (!(L > 0.0)) throw std::invalid_argument("generate_crossed_mesh: L must be > 0");

  const int ngrid = (nx + 1) * (ny + 1);
  std::vector<Vec2> vertices(ngrid + nx * ny);
  const double dx = L / nx, dy = L / ny;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      vertices[j * (nx + 1) + i] = {i * dx, j * dy};
  for (int cj = 0; cj < ny; ++cj)
    for (int ci = 0; ci < nx; ++ci)
      vertices[ngrid + cj * nx + ci] = {(ci + 0.5) * dx, (cj + 0.5) * dy};

  auto gid = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(4 * nx * ny);
  for (int cj = 0; cj < ny; ++cj) {
    for (int ci = 0; ci < nx; ++ci) {
      const int v00 = gid(ci, cj), v10 = gid(ci + 1, cj);
      const int v01 = gid(ci, cj + 1), v11 = gid(ci + 1, cj + 1);
      const int c = ngrid + cj * nx + ci;
      triangles.push_back({v00, v10, c});
      triangles.push_back({v10, v11, c});
      triangles.push_back({v11, v01, c});
      triangles.push_back({v01, v00, c});
    }
  }

  std::vector<BoundaryEdge> boundary;
  boundary.reserve(2 * (nx + ny));
  for (int j = 0; j < ny; ++j) {
    boundary.push_back({gid(0, j), gid(0, j + 1), BoundaryTag::dirichlet_left});
    boundary.push_back({gid(nx, j), gid(nx, j + 1), BoundaryTag::dirichlet_right});
  }
  for (int i = 0; i < nx; ++i) {
    boundary.push_back({gid(i, 0), gid(i + 1, 0), BoundaryTag::neumann_bottom});
    boundary.push_back({gid(i, ny), gid(i + 1, ny), BoundaryTag::neumann_top});
  }

  return Triangulation2D(std::move(vertices), std::move(triangles), std::move(boundary));
}

MeshStatistics mesh_statistics(const Triangulation2D& mesh) {
  MeshStatistics s;
  s.h = mesh.h();
  s.vertex_count = mesh.vertex_count();
  s.triangle_count = mesh.triangle_count();
  double min_angle = 4.0;  // radians, > pi
  for (const auto& tri : mesh.triangles()) {
    for (int k = 0; k < 3; ++k) {
      const Vec2 p = mesh.vertices()[tri[k]];
      const Vec2 u = mesh.vertices()[tri[(k + 1) % 3]] - p;
      const Vec2 v = mesh.vertices()[tri[(k + 2) % 3]] - p;
      const double ang = std::atan2(std::abs(cross(u, v)), dot(u, v));
      min_angle = std::min(min_angle, ang);
    }
  }
  s.min_angle_deg = min_angle * 180.0 / M_PI;
  return s;
}

std::string write_mesh(const Triangulation2D& mesh) {
  std::string out = "ntri-mesh 1\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d %d %d\n", mesh.vertex_count(), mesh.triangle_count(),
                static_cast<int>(mesh.boundary_edges().size()));
  out += buf;
  for (const Vec2& v : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.x, v.y);
    out += buf;
  }
  for (const auto& t : mesh.triangles()) {
    std::snprintf(buf, sizeof buf, "%d %d %d\n", t[0], t[1], t[2]);
    out += buf;
  }
  for (const auto& be : mesh.boundary_edges()) {
    std::snprintf(buf, sizeof buf, "%d %d %s\n", be.a, be.b, tag_name(be.tag));
    out += buf;
  }
  return out;
}

namespace {

class LineReader {
 public:
  explicit LineReader(const std::string& text) : in_(text) {}

  // Next non-empty line; returns false at end of input.
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++lineno_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  }
  int lineno() const { return lineno_; }

 private:
  std::istringstream in_;
  int lineno_ = 0;
};

[[noreturn]] void fail(int lineno, const std::string& msg) {
  throw std::runtime_error("mesh file, line " + std::to_string(lineno) + ": " + msg);
}

}  // namespace

Triangulation2D read_mesh(const std::string& text) {
  LineReader reader(text);
  std::string line;

  if (!reader.next(line)) fail(1, "empty input, expected header 'ntri-mesh 1'");
  {
    std::istringstream ls(line);
    std::string magic;
    int version = 0;
    if (!(ls >> magic >> version) || magic != "ntri-mesh" || version != 1)
      fail(reader.lineno(), "malformed header, expected 'ntri-mesh 1'");
  }

  int nv = 0, nt = 0, nb = 0;
  if (!reader.next(line)) fail(reader.lineno() + 1, "missing count line '<nv> <nt> <nb>'");
  {
    std::istringstream ls(line);
    if (!(ls >> nv >> nt >> nb) || nv < 0 || nt < 0 || nb < 0)
      fail(reader.lineno(), "malformed count line, expected '<nv> <nt> <nb>'");
  }

  std::vector<Vec2> vertices(nv);
  for (int i = 0; i < nv; ++i) {
    if (!reader.next(line)) fail(reader.lineno() + 1, "unexpected end of input in vertex list");
    std::istringstream ls(line);
    if (!(ls >> vertices[i].x >> vertices[i].y))
      fail(reader.lineno(), "expected two reals '<x> <y>'");
  }

  std::vector<std::array<int, 3>> triangles(nt);
  std::map<std::pair<int, int>, int> edge_count;
  for (int t = 0; t < nt; ++t) {
    if (!reader.next(line)) fail(reader.lineno() + 1, "unexpected end of input in triangle list");
    std::istringstream ls(line);
    auto& tri = triangles[t];
    if (!(ls >> tri[0] >> tri[1] >> tri[2]))
      fail(reader.lineno(), "expected three vertex indices");
    for (int k = 0; k < 3; ++k)
      if (tri[k] < 0 || tri[k] >= nv)
        fail(reader.lineno(), "vertex index " + std::to_string(tri[k]) + " out of range [0, " +
                                  std::to_string(nv) + ")");
    for (int k = 0; k < 3; ++k) {
      auto key = tri[k] < tri[(k + 1) % 3] ? std::pair{tri[k], tri[(k + 1) % 3]}
                                           : std::pair{tri[(k + 1) % 3], tri[k]};
      if (++edge_count[key] > 2)
        fail(reader.lineno(), "non-conforming connectivity: edge " +
                                  edge_str(key.first, key.second) + " shared by 3 triangles");
    }
  }

  std::vector<BoundaryEdge> boundary(nb);
  std::map<std::pair<int, int>, int> tagged;
  int last_line = reader.lineno();
  for (int e = 0; e < nb; ++e) {
    if (!reader.next(line)) fail(reader.lineno() + 1, "unexpected end of input in boundary list");
    last_line = reader.lineno();
    std::istringstream ls(line);
    std::string tag;
    auto& be = boundary[e];
    if (!(ls >> be.a >> be.b >> tag))
      fail(reader.lineno(), "expected '<i0> <i1> <tag>'");
    for (int idx : {be.a, be.b})
      if (idx < 0 || idx >= nv)
        fail(reader.lineno(), "vertex index " + std::to_string(idx) + " out of range [0, " +
                                  std::to_string(nv) + ")");
    if (tag == "dirichlet_left") be.tag = BoundaryTag::dirichlet_left;
    else if (tag == "dirichlet_right") be.tag = BoundaryTag::dirichlet_right;
    else if (tag == "neumann_top") be.tag = BoundaryTag::neumann_top;
    else if (tag == "neumann_bottom") be.tag = BoundaryTag::neumann_bottom;
    else fail(reader.lineno(), "unknown boundary tag '" + tag + "'");
    auto key = undirected(be.a, be.b);
    auto it = edge_count.find(key);
    if (it == edge_count.end() || it->second != 1)
      fail(reader.lineno(), "boundary edge " + edge_str(be.a, be.b) + " is not a hull edge");
    if (++tagged[key] > 1)
      fail(reader.lineno(), "boundary edge " + edge_str(be.a, be.b) + " tagged more than once");
  }

  for (const auto& [key, count] : edge_count) {
    if (count == 1 && !tagged.count(key))
      fail(last_line, "untagged boundary edge " + edge_str(key.first, key.second));
  }

  try {
    return Triangulation2D(std::move(vertices), std::move(triangles), std::move(boundary));
  } catch (const std::invalid_argument& e) {
    fail(last_line, e.what());
  }
}

}  // namespace kirigami
