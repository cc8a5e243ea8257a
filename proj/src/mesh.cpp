#include "fvd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "fvd/errors.hpp"

namespace fvd {

ElementKind element_kind_from_string(const std::string& s) {
  if (s == "bar2") return ElementKind::Bar2;
  if (s == "tri3") return ElementKind::Tri3;
  if (s == "quad4") return ElementKind::Quad4;
  if (s == "quad8") return ElementKind::Quad8;
  throw ConfigError("unknown element kind '" + s + "'");
}

const char* to_string(ElementKind k) {
  switch (k) {
    case ElementKind::Bar2: return "bar2";
    case ElementKind::Tri3: return "tri3";
    case ElementKind::Quad4: return "quad4";
    case ElementKind::Quad8: return "quad8";
  }
  return "?";
}

int nodes_per_element(ElementKind k) {
  switch (k) {
    case ElementKind::Bar2: return 2;
    case ElementKind::Tri3: return 3;
    case ElementKind::Quad4: return 4;
    case ElementKind::Quad8: return 8;
  }
  return 0;
}

int element_dim(ElementKind k) { return k == ElementKind::Bar2 ? 1 : 2; }

const BoundarySet& Mesh::set(const std::string& name) const {
  auto it = sets.find(name);
  if (it == sets.end()) throw ConfigError("mesh has no boundary set '" + name + "'");
  return it->second;
}

void Mesh::validate() const {
  if (dim != element_dim(kind)) throw ConfigError("mesh dimension does not match element kind");
  const int npe = nodes_per_element(kind);
  const int nn = static_cast<int>(nodes.size());
  for (const auto& e : elements) {
    if (static_cast<int>(e.size()) != npe) throw ConfigError("element with wrong node count");
    for (int i : e)
      if (i < 0 || i >= nn) throw ConfigError("element references a missing node");
  }
  for (const auto& [name, s] : sets) {
    for (int i : s.nodes)
      if (i < 0 || i >= nn) throw ConfigError("boundary set '" + name + "' references a missing node");
    for (const auto& f : s.facets)
      for (int i : f)
        if (i < 0 || i >= nn) throw ConfigError("boundary set '" + name + "' references a missing node");
  }
}

// File layout:
//   fvd-mesh 1
//   dim <1|2> kind <bar2|tri3|quad4|quad8>
//   nodes <n>            then n lines "x [y]"
//   elements <m>         then m lines of node indices (0-based)
//   set <name> <k> <f>   then one line with k node indices and f facet lines
// Lines starting with '#' are ignored.
Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mesh file " + path);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) {
    auto p = l.find_first_not_of(" \t\r");
    if (p == std::string::npos || l[p] == '#') continue;
    lines.push_back(l);
  }
  std::size_t li = 0;
  auto next = [&]() -> std::istringstream {
    if (li >= lines.size()) throw ConfigError("mesh file truncated: " + path);
    return std::istringstream(lines[li++]);
  };
  Mesh m;
  {
    auto s = next();
    std::string magic;
    int version = 0;
    s >> magic >> version;
    if (magic != "fvd-mesh") throw ConfigError("not a mesh file: " + path);
  }
  {
    auto s = next();
    std::string k1, k2, kind;
    s >> k1 >> m.dim >> k2 >> kind;
    if (k1 != "dim" || k2 != "kind") throw ConfigError("mesh header must be 'dim <d> kind <k>'");
    m.kind = element_kind_from_string(kind);
  }
  std::size_t n = 0;
  {
    auto s = next();
    std::string k;
    s >> k >> n;
    if (k != "nodes") throw ConfigError("expected 'nodes <n>'");
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto s = next();
    std::array<double, 2> x{0.0, 0.0};
    s >> x[0];
    if (m.dim == 2) s >> x[1];
    if (!s) throw ConfigError("bad node line in " + path);
    m.nodes.push_back(x);
  }
  {
    auto s = next();
    std::string k;
    s >> k >> n;
    if (k != "elements") throw ConfigError("expected 'elements <m>'");
  }
  const int npe = nodes_per_element(m.kind);
  for (std::size_t i = 0; i < n; ++i) {
    auto s = next();
    std::vector<int> e(npe);
    for (int& v : e) s >> v;
    if (!s) throw ConfigError("bad element line in " + path);
    m.elements.push_back(e);
  }
  while (li < lines.size()) {
    auto s = next();
    std::string k, name;
    std::size_t nk = 0, nf = 0;
    s >> k >> name >> nk >> nf;
    if (k != "set" || !s) throw ConfigError("expected 'set <name> <nodes> <facets>'");
    BoundarySet b;
    if (nk > 0) {
      auto ns = next();
      b.nodes.resize(nk);
      for (int& v : b.nodes) ns >> v;
    }
    for (std::size_t f = 0; f < nf; ++f) {
      auto fs = next();
      std::vector<int> facet;
      for (int v; fs >> v;) facet.push_back(v);
      b.facets.push_back(facet);
    }
    m.sets[name] = b;
  }
  m.validate();
  return m;
}

void write_mesh(const Mesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file " + path);
  out << "fvd-mesh 1\n";
  out << "dim " << m.dim << " kind " << to_string(m.kind) << "\n";
  out << "nodes " << m.nodes.size() << "\n";
  out << std::setprecision(17);
  for (const auto& x : m.nodes) {
    out << x[0];
    if (m.dim == 2) out << " " << x[1];
    out << "\n";
  }
  out << "elements " << m.elements.size() << "\n";
  for (const auto& e : m.elements) {
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
    out << "\n";
  }
  for (const auto& [name, s] : m.sets) {
    out << "set " << name << " " << s.nodes.size() << " " << s.facets.size() << "\n";
    if (!s.nodes.empty()) {
      for (std::size_t i = 0; i < s.nodes.size(); ++i) out << (i ? " " : "") << s.nodes[i];
      out << "\n";
    }
    for (const auto& f : s.facets) {
      for (std::size_t i = 0; i < f.size(); ++i) out << (i ? " " : "") << f[i];
      out << "\n";
    }
  }
  if (!out) throw std::runtime_error("error writing mesh file " + path);
}

Mesh make_bar(double length, int n) {
  if (n < 1 || !(length > 0.0)) throw ConfigError("bar needs a positive length and element count");
  Mesh m;
  m.dim = 1;
  m.kind = ElementKind::Bar2;
  for (int i = 0; i <= n; ++i) m.nodes.push_back({length * i / n, 0.0});
  for (int i = 0; i < n; ++i) m.elements.push_back({i, i + 1});
  m.sets["left"] = {{0}, {{0}}};
  m.sets["right"] = {{n}, {{n}}};
  return m;
}

namespace {

std::vector<double> axis_points(const GridAxis& a) {
  if (a.breaks.size() < 2 || a.divisions.size() + 1 != a.breaks.size())
    throw ConfigError("grid axis needs k+1 breaks and k division counts");
  std::vector<double> pts{a.breaks[0]};
  for (std::size_t s = 0; s < a.divisions.size(); ++s) {
    if (a.divisions[s] < 1 || !(a.breaks[s + 1] > a.breaks[s])) throw ConfigError("bad grid axis segment");
    for (int k = 1; k <= a.divisions[s]; ++k)
      pts.push_back(a.breaks[s] + (a.breaks[s + 1] - a.breaks[s]) * k / a.divisions[s]);
  }
  return pts;
}

}  // namespace

Mesh make_masked_grid(const GridAxis& ax, const GridAxis& ay, ElementKind kind,
                      const std::function<bool(double, double)>& keep) {
  if (kind == ElementKind::Bar2) throw ConfigError("grid generator is 2D only");
  const std::vector<double> xs = axis_points(ax), ys = axis_points(ay);
  const int nx = static_cast<int>(xs.size()) - 1, ny = static_cast<int>(ys.size()) - 1;
  // lattice with midpoints so quad8 can reuse it; index (2i, 2j) are the corners
  const int lx = 2 * nx + 1, ly = 2 * ny + 1;
  auto lat_x = [&](int i) { return i % 2 == 0 ? xs[i / 2] : 0.5 * (xs[i / 2] + xs[i / 2 + 1]); };
  auto lat_y = [&](int j) { return j % 2 == 0 ? ys[j / 2] : 0.5 * (ys[j / 2] + ys[j / 2 + 1]); };
  std::vector<int> id(static_cast<std::size_t>(lx * ly), -1);
  Mesh m;
  m.dim = 2;
  m.kind = kind;
  auto node = [&](int i, int j) {
    int& v = id[static_cast<std::size_t>(j * lx + i)];
    if (v < 0) {
      v = static_cast<int>(m.nodes.size());
      m.nodes.push_back({lat_x(i), lat_y(j)});
    }
    return v;
  };
  std::vector<char> kept(static_cast<std::size_t>(nx * ny), 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double xc = 0.5 * (xs[i] + xs[i + 1]), yc = 0.5 * (ys[j] + ys[j + 1]);
      if (!keep(xc, yc)) continue;
      kept[static_cast<std::size_t>(j * nx + i)] = 1;
      const int I = 2 * i, J = 2 * j;
      const int n0 = node(I, J), n1 = node(I + 2, J), n2 = node(I + 2, J + 2), n3 = node(I, J + 2);
      switch (kind) {
        case ElementKind::Quad4: m.elements.push_back({n0, n1, n2, n3}); break;
        case ElementKind::Quad8:
          m.elements.push_back({n0, n1, n2, n3, node(I + 1, J), node(I + 2, J + 1), node(I + 1, J + 2), node(I, J + 1)});
          break;
        case ElementKind::Tri3:
          m.elements.push_back({n0, n1, n2});
          m.elements.push_back({n0, n2, n3});
          break;
        default: break;
      }
    }
  if (m.elements.empty()) throw ConfigError("grid mask removed every cell");
  // boundary facets on the extreme x lines
  auto edge_set = [&](bool left) {
    BoundarySet b;
    std::vector<int> nodes;
    for (int j = 0; j < ny; ++j) {
      int i = -1;
      for (int k = 0; k < nx; ++k) {
        const int c = left ? k : nx - 1 - k;
        if (kept[static_cast<std::size_t>(j * nx + c)]) { i = c; break; }
      }
      if (i < 0) continue;
      const double xline = left ? xs[i] : xs[i + 1];
      const double target = left ? xs.front() : xs.back();
      if (std::abs(xline - target) > 1e-12 * (1.0 + std::abs(target))) continue;
      const int I = left ? 2 * i : 2 * i + 2, J = 2 * j;
      std::vector<int> f{node(I, J), node(I, J + 2)};
      if (kind == ElementKind::Quad8) f.push_back(node(I, J + 1));
      for (int v : f) nodes.push_back(v);
      b.facets.push_back(f);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    b.nodes = nodes;
    return b;
  };
  m.sets["left"] = edge_set(true);
  m.sets["right"] = edge_set(false);
  return m;
}

Mesh make_rectangle(double length, double height, int nx, int ny, ElementKind kind) {
  if (nx < 1 || ny < 1) throw ConfigError("rectangle needs positive division counts");
  GridAxis ax{{0.0, length}, {nx}}, ay{{-0.5 * height, 0.5 * height}, {ny}};
  return make_masked_grid(ax, ay, kind, [](double, double) { return true; });
}

Mesh make_specimen(const SpecimenShape& s, ElementKind kind) {
  if (!(s.gauge_width < s.grip_width)) throw ConfigError("gauge must be narrower than the grips");
  const double L = 2.0 * s.grip_length + s.gauge_length;
  const double hg = 0.5 * s.gauge_width, hw = 0.5 * s.grip_width;
  GridAxis ax{{0.0, s.grip_length, s.grip_length + s.gauge_length, L}, {s.grip_div, s.gauge_div, s.grip_div}};
  GridAxis ay{{-hw, -hg, hg, hw}, {s.shoulder_div, s.gauge_width_div, s.shoulder_div}};
  const double x0 = s.grip_length, x1 = s.grip_length + s.gauge_length;
  return make_masked_grid(ax, ay, kind, [=](double x, double y) {
    return x < x0 || x > x1 || std::abs(y) < hg;
  });
}

}  // namespace fvd
