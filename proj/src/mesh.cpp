#include "elscat/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace elscat {

// ---------------------------------------------------------------- geometry

double SceneGeometry::obstacle_reach() const {
  if (obstacle_is_circle()) {
    const auto& c = obstacle_circle();
    return c.center.norm() + c.radius;
  }
  double reach = 0.0;
  for (const auto& v : std::get<PolygonSpec>(obstacle).vertices)
    reach = std::max(reach, v.norm());
  return reach;
}

double SceneGeometry::narrowest_gap() const {
  double omega_reach = omega.center.norm() + omega.radius;
  double gap_do;
  if (obstacle_is_circle()) {
    const auto& c = obstacle_circle();
    gap_do = omega.radius - ((c.center - omega.center).norm() + c.radius);
  } else {
    gap_do = omega.radius - obstacle_reach();
  }
  double gap_or = truncation_radius - omega_reach;
  double inner = obstacle_is_circle() ? obstacle_circle().radius : obstacle_reach();
  return std::min({gap_do, gap_or, inner});
}

namespace {
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  auto cross = [](const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); };
  double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}
}  // namespace

void SceneGeometry::validate() const {
  if (!(truncation_radius > 0.0) || !(omega.radius > 0.0))
    throw std::invalid_argument("SceneGeometry: radii must be positive");
  if (obstacle_is_circle()) {
    const auto& c = obstacle_circle();
    if (!(c.radius > 0.0)) throw std::invalid_argument("SceneGeometry: obstacle radius <= 0");
    if (!((c.center - omega.center).norm() + c.radius < omega.radius))
      throw std::invalid_argument("SceneGeometry: D must be strictly inside Omega");
  } else {
    const auto& poly = std::get<PolygonSpec>(obstacle).vertices;
    if (poly.size() < 3) throw std::invalid_argument("SceneGeometry: polygon needs >= 3 vertices");
    for (const auto& v : poly)
      if (!((v - omega.center).norm() < omega.radius))
        throw std::invalid_argument("SceneGeometry: polygon not strictly inside Omega");
    int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i)
      for (int j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;  // adjacent around the loop
        if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
          throw std::invalid_argument("SceneGeometry: polygon self-intersects");
      }
  }
  if (!(omega.center.norm() + omega.radius < source_radius))
    throw std::invalid_argument("SceneGeometry: Omega must be strictly inside B_{r0}");
  if (!(source_radius <= truncation_radius))
    throw std::invalid_argument("SceneGeometry: requires r0 <= r");
}

// -------------------------------------------------------------------- mesh

double Mesh::signed_area(int t) const {
  const auto& tri = triangles[t];
  const Vec2 &a = nodes[tri.v[0]], &b = nodes[tri.v[1]], &c = nodes[tri.v[2]];
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

double Mesh::region_area(Region r) const {
  KahanSum sum;
  for (int t = 0; t < static_cast<int>(triangles.size()); ++t)
    if (triangles[t].region == r) sum.add(signed_area(t));
  return sum.value();
}

int Mesh::count_region(Region r) const {
  int n = 0;
  for (const auto& t : triangles) n += (t.region == r);
  return n;
}

void Mesh::validate() const {
  for (int t = 0; t < static_cast<int>(triangles.size()); ++t)
    if (!(signed_area(t) >= 1e-14))
      throw std::runtime_error("Mesh: non-positive triangle area at index " + std::to_string(t));

  std::map<std::pair<int, int>, int> edge_count;
  auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  for (const auto& tri : triangles)
    for (int e = 0; e < 3; ++e) edge_count[key(tri.v[e], tri.v[(e + 1) % 3])]++;

  std::set<std::pair<int, int>> exterior;
  for (const auto& [k, c] : edge_count) {
    if (c > 2) throw std::runtime_error("Mesh: edge shared by more than two triangles");
    if (c == 1) exterior.insert(k);
  }

  // the sole exterior curve of the full ball mesh is the truncation circle
  std::set<std::pair<int, int>> tagged_br;
  for (const auto& be : boundary_edges) {
    auto k = key(be.v[0], be.v[1]);
    if (!edge_count.count(k)) throw std::runtime_error("Mesh: tagged edge not in triangulation");
    if (be.tag == BoundaryTag::TruncationBr) tagged_br.insert(k);
  }
  if (tagged_br != exterior)
    throw std::runtime_error("Mesh: exterior edges do not match the dBr tag set");

  // each tagged curve must be a closed loop: every touched node has degree 2
  for (auto tag : {BoundaryTag::ObstacleD, BoundaryTag::MediumOmega, BoundaryTag::TruncationBr}) {
    std::map<int, int> degree;
    for (const auto& be : boundary_edges)
      if (be.tag == tag) {
        degree[be.v[0]]++;
        degree[be.v[1]]++;
      }
    for (const auto& [node, d] : degree)
      if (d != 2)
        throw std::runtime_error("Mesh: tagged curve not closed at node " + std::to_string(node));
  }
}

Mesh Mesh::permuted(const std::vector<int>& new_index_of) const {
  Mesh out;
  out.h = h;
  out.tag_circle = tag_circle;
  out.nodes.resize(nodes.size());
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) out.nodes[new_index_of[i]] = nodes[i];
  out.triangles = triangles;
  for (auto& t : out.triangles)
    for (int e = 0; e < 3; ++e) t.v[e] = new_index_of[t.v[e]];
  out.boundary_edges = boundary_edges;
  for (auto& be : out.boundary_edges)
    for (int e = 0; e < 2; ++e) be.v[e] = new_index_of[be.v[e]];
  return out;
}

// ------------------------------------------------------------------ mesher

namespace {

struct Ring {
  double radius;
  std::vector<int> node_ids;  // uniformly spaced, angle 2*pi*m/M
};

// Triangulates the band between an inner and an outer ring by merging the
// two angular sequences, always advancing the side whose next node comes
// first in angle.
void stitch_rings(const Ring& inner, const Ring& outer, Region region, Mesh& mesh) {
  int ma = static_cast<int>(inner.node_ids.size());
  int mb = static_cast<int>(outer.node_ids.size());
  int i = 0, j = 0;
  while (i < ma || j < mb) {
    double next_a = 2.0 * pi * (i + 1) / ma;
    double next_b = 2.0 * pi * (j + 1) / mb;
    if (j == mb || (i < ma && next_a <= next_b)) {
      mesh.triangles.push_back(
          {{inner.node_ids[i % ma], outer.node_ids[j % mb], inner.node_ids[(i + 1) % ma]},
           region});
      ++i;
    } else {
      mesh.triangles.push_back(
          {{inner.node_ids[i % ma], outer.node_ids[j % mb], outer.node_ids[(j + 1) % mb]},
           region});
      ++j;
    }
  }
}

}  // namespace

Mesh build_scene_mesh(const SceneGeometry& geom, double h) {
  geom.validate();
  if (!(h > 0.0)) throw std::invalid_argument("build_scene_mesh: h must be positive");
  if (!(h < geom.narrowest_gap()))
    throw std::invalid_argument("build_scene_mesh: h too coarse to separate the scene curves");
  if (!geom.obstacle_is_circle())
    throw std::invalid_argument(
        "build_scene_mesh: built-in mesher handles circular obstacles; import polygonal scenes "
        "via MSH 2.2");
  if (geom.obstacle_circle().center.norm() > 1e-12 || geom.omega.center.norm() > 1e-12)
    throw std::invalid_argument(
        "build_scene_mesh: built-in mesher requires concentric circles at the origin; use MSH "
        "import otherwise");

  const double a = geom.obstacle_circle().radius;
  const double R = geom.omega.radius;
  const double r = geom.truncation_radius;

  Mesh mesh;
  mesh.h = h;
  mesh.tag_circle[static_cast<int>(BoundaryTag::ObstacleD)] = CircleSpec{Vec2::Zero(), a};
  mesh.tag_circle[static_cast<int>(BoundaryTag::MediumOmega)] = CircleSpec{Vec2::Zero(), R};
  mesh.tag_circle[static_cast<int>(BoundaryTag::TruncationBr)] = CircleSpec{Vec2::Zero(), r};

  // ring radii: every band endpoint appears exactly; spacing <= h inside bands
  std::vector<double> radii;
  auto fill_band = [&](double r0, double r1) {
    int n = std::max(1, static_cast<int>(std::round((r1 - r0) / h)));
    for (int i = 1; i <= n; ++i) radii.push_back(r0 + (r1 - r0) * i / n);
  };
  fill_band(0.0, a);
  fill_band(a, R);
  fill_band(R, r);

  // center node then rings
  mesh.nodes.push_back(Vec2::Zero());
  std::vector<Ring> rings;
  for (double rho : radii) {
    int m = std::max(6, static_cast<int>(std::round(2.0 * pi * rho / h)));
    Ring ring;
    ring.radius = rho;
    ring.node_ids.reserve(m);
    for (int k = 0; k < m; ++k) {
      double th = 2.0 * pi * k / m;
      ring.node_ids.push_back(static_cast<int>(mesh.nodes.size()));
      mesh.nodes.push_back(Vec2(rho * std::cos(th), rho * std::sin(th)));
    }
    rings.push_back(std::move(ring));
  }

  auto region_of_radius = [&](double rho) {
    if (rho < a) return Region::D;
    if (rho < R) return Region::Annulus;
    return Region::Shell;
  };

  // center fan
  {
    const Ring& first = rings.front();
    int m = static_cast<int>(first.node_ids.size());
    for (int k = 0; k < m; ++k)
      mesh.triangles.push_back(
          {{0, first.node_ids[k], first.node_ids[(k + 1) % m]}, Region::D});
  }
  for (size_t i = 0; i + 1 < rings.size(); ++i)
    stitch_rings(rings[i], rings[i + 1], Region::D, mesh);

  // classify by centroid point-in-region tests
  for (auto& tri : mesh.triangles) {
    Vec2 c = (mesh.nodes[tri.v[0]] + mesh.nodes[tri.v[1]] + mesh.nodes[tri.v[2]]) / 3.0;
    tri.region = region_of_radius(c.norm());
  }

  auto tag_ring = [&](double rho, BoundaryTag tag) {
    for (const auto& ring : rings) {
      if (std::abs(ring.radius - rho) > 1e-12) continue;
      int m = static_cast<int>(ring.node_ids.size());
      for (int k = 0; k < m; ++k)
        mesh.boundary_edges.push_back({{ring.node_ids[k], ring.node_ids[(k + 1) % m]}, tag});
      return;
    }
    throw std::logic_error("build_scene_mesh: interface radius missing from ring set");
  };
  tag_ring(a, BoundaryTag::ObstacleD);
  tag_ring(R, BoundaryTag::MediumOmega);
  tag_ring(r, BoundaryTag::TruncationBr);

  mesh.validate();
  return mesh;
}

// ---------------------------------------------------------------- MSH 2.2

namespace {
int region_physical(Region r) { return static_cast<int>(r) + 1; }
int tag_physical(BoundaryTag t) { return 10 * (static_cast<int>(t) + 1); }
}  // namespace

void write_msh(const Mesh& mesh, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_msh: cannot open " + path);
  os << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  os << "$Nodes\n" << mesh.nodes.size() << "\n";
  char buf[96];
  for (size_t i = 0; i < mesh.nodes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu %.17g %.17g 0\n", i + 1, mesh.nodes[i].x(),
                  mesh.nodes[i].y());
    os << buf;
  }
  os << "$EndNodes\n$Elements\n"
     << mesh.boundary_edges.size() + mesh.triangles.size() << "\n";
  size_t id = 1;
  for (const auto& be : mesh.boundary_edges) {
    os << id++ << " 1 2 " << tag_physical(be.tag) << " " << tag_physical(be.tag) << " "
       << be.v[0] + 1 << " " << be.v[1] + 1 << "\n";
  }
  for (const auto& tri : mesh.triangles) {
    os << id++ << " 2 2 " << region_physical(tri.region) << " " << region_physical(tri.region)
       << " " << tri.v[0] + 1 << " " << tri.v[1] + 1 << " " << tri.v[2] + 1 << "\n";
  }
  os << "$EndElements\n";
}

Mesh read_msh(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_msh: cannot open " + path);
  std::string line;
  Mesh mesh;
  std::map<long, int> id_map;
  while (std::getline(is, line)) {
    if (line.rfind("$MeshFormat", 0) == 0) {
      std::getline(is, line);
      std::istringstream ss(line);
      double version;
      ss >> version;
      if (std::abs(version - 2.2) > 1e-9)
        throw std::runtime_error("read_msh: only MSH 2.2 ASCII supported");
    } else if (line.rfind("$Nodes", 0) == 0) {
      std::getline(is, line);
      size_t n = std::stoul(line);
      mesh.nodes.reserve(n);
      for (size_t i = 0; i < n; ++i) {
        std::getline(is, line);
        std::istringstream ss(line);
        long id;
        double x, y, z;
        ss >> id >> x >> y >> z;
        id_map[id] = static_cast<int>(mesh.nodes.size());
        mesh.nodes.push_back(Vec2(x, y));
      }
    } else if (line.rfind("$Elements", 0) == 0) {
      std::getline(is, line);
      size_t n = std::stoul(line);
      for (size_t i = 0; i < n; ++i) {
        std::getline(is, line);
        std::istringstream ss(line);
        long id;
        int type, ntags;
        ss >> id >> type >> ntags;
        int physical = 0;
        for (int t = 0; t < ntags; ++t) {
          int tag;
          ss >> tag;
          if (t == 0) physical = tag;
        }
        auto node = [&]() {
          long nid;
          ss >> nid;
          auto it = id_map.find(nid);
          if (it == id_map.end()) throw std::runtime_error("read_msh: unknown node id");
          return it->second;
        };
        if (type == 1) {
          int v0 = node(), v1 = node();
          BoundaryTag tag;
          switch (physical) {
            case 10: tag = BoundaryTag::ObstacleD; break;
            case 20: tag = BoundaryTag::MediumOmega; break;
            case 30: tag = BoundaryTag::TruncationBr; break;
            default: throw std::runtime_error("read_msh: unknown line physical tag");
          }
          mesh.boundary_edges.push_back({{v0, v1}, tag});
        } else if (type == 2 || type == 9) {
          int v0 = node(), v1 = node(), v2 = node();
          if (type == 9) {
            int dump;
            for (int k = 0; k < 3; ++k) ss >> dump;  // midside nodes are regenerated
          }
          Region region;
          switch (physical) {
            case 1: region = Region::D; break;
            case 2: region = Region::Annulus; break;
            case 3: region = Region::Shell; break;
            default: throw std::runtime_error("read_msh: unknown surface physical tag");
          }
          mesh.triangles.push_back({{v0, v1, v2}, region});
        } else {
          throw std::runtime_error("read_msh: unsupported element type " + std::to_string(type));
        }
      }
    }
  }

  // characteristic size from a sample of edge lengths
  double acc = 0.0;
  int cnt = 0;
  for (const auto& tri : mesh.triangles) {
    acc += (mesh.nodes[tri.v[0]] - mesh.nodes[tri.v[1]]).norm();
    if (++cnt >= 64) break;
  }
  mesh.h = cnt ? acc / cnt : 0.0;

  // recover circle parameters of tagged curves when consistent
  for (auto tag : {BoundaryTag::ObstacleD, BoundaryTag::MediumOmega, BoundaryTag::TruncationBr}) {
    std::set<int> ids;
    for (const auto& be : mesh.boundary_edges)
      if (be.tag == tag) {
        ids.insert(be.v[0]);
        ids.insert(be.v[1]);
      }
    if (ids.empty()) continue;
    Vec2 c = Vec2::Zero();
    for (int i : ids) c += mesh.nodes[i];
    c /= static_cast<double>(ids.size());
    double rmin = 1e300, rmax = 0.0;
    for (int i : ids) {
      double d = (mesh.nodes[i] - c).norm();
      rmin = std::min(rmin, d);
      rmax = std::max(rmax, d);
    }
    if (rmax - rmin <= 1e-8 * rmax)
      mesh.tag_circle[static_cast<int>(tag)] = CircleSpec{c, 0.5 * (rmin + rmax)};
  }
  return mesh;
}

}  // namespace elscat
