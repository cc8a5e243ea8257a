#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace fvd {

enum class ElementKind { Bar2, Tri3, Quad4, Quad8 };

ElementKind element_kind_from_string(const std::string& s);
const char* to_string(ElementKind k);
int nodes_per_element(ElementKind k);
int element_dim(ElementKind k);

// A named group of boundary nodes plus the boundary facets between them
// (edges in 2D given by 2 or 3 nodes, single nodes in 1D).
struct BoundarySet {
  std::vector<int> nodes;
  std::vector<std::vector<int>> facets;
};

struct Mesh {
  int dim = 2;
  ElementKind kind = ElementKind::Quad4;
  std::vector<std::array<double, 2>> nodes;
  std::vector<std::vector<int>> elements;
  std::map<std::string, BoundarySet> sets;

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_elements() const { return elements.size(); }
  const BoundarySet& set(const std::string& name) const;
  // index checks; Jacobian positivity is checked when quadrature data is built
  void validate() const;
};

Mesh read_mesh(const std::string& path);
void write_mesh(const Mesh& mesh, const std::string& path);

// Generators. All of them create the sets "left" and "right" (x = min / x = max).
Mesh make_bar(double length, int n_elements);
Mesh make_rectangle(double length, double height, int nx, int ny, ElementKind kind);

// Tensor-product grid over breakpoints, each segment split into `divisions`
// cells; a cell is kept when keep(xc, yc) holds for its centre.
struct GridAxis {
  std::vector<double> breaks;
  std::vector<int> divisions;
};
Mesh make_masked_grid(const GridAxis& x, const GridAxis& y, ElementKind kind,
                      const std::function<bool(double, double)>& keep);

// Stepped tensile specimen: two grips joined by a narrow gauge section,
// centred on y = 0 and starting at x = 0.
struct SpecimenShape {
  double grip_length = 25e-3;
  double grip_width = 30e-3;
  double gauge_length = 50e-3;
  double gauge_width = 10e-3;
  int grip_div = 5;         // cells along each grip
  int gauge_div = 10;       // cells along the gauge
  int gauge_width_div = 2;  // cells across the gauge
  int shoulder_div = 2;     // cells across each shoulder (grip outside the gauge band)
};
Mesh make_specimen(const SpecimenShape& s, ElementKind kind);

}  // namespace fvd
