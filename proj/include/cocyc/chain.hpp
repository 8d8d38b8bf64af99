#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace cocyc {

// Points carry up to three coordinates; axes beyond the domain's dimension
// are ignored.
using Point = std::array<double, 3>;
using MapFn = std::function<Point(const Point&)>;

// Axis-aligned box domain with per-axis wrap flags.
struct GridDomain {
  int m = 1;  // active axes, 1..3
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  std::array<double, 3> hi{1.0, 1.0, 1.0};
  std::array<bool, 3> periodic{false, false, false};
};

int grid_box_count(const GridDomain& dom, int res);
std::array<int, 3> box_coords(const GridDomain& dom, int res, int box);
Point box_center(const GridDomain& dom, int res, int box);

// Directed graph over grid boxes: an edge goes to every box the inflated
// image of a source box meets.  Classes are the strongly connected pieces
// of at least two mutually reaching boxes; class_id is -1 on wandering
// boxes.  All output is canonical: edges sorted, boxes inside a class
// sorted, classes ordered by their least box.
struct ChainGraph {
  GridDomain domain;
  int res = 0;
  double epsilon = 0.0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> class_id;
  std::vector<std::vector<int>> classes;
};

// Samples the map at each box center plus two opposite corners, inflates
// the center image by epsilon + box diameter + the sampled corner spread,
// and connects the box to every box that region meets.  The inflation
// makes the graph an outer approximation: every true orbit of the map
// induces a path.  Sampled image points leaving a non-wrapped domain stop
// the construction with DomainEscape naming the offending boxes.
ChainGraph build_chain_graph(const MapFn& f, const GridDomain& dom, int res,
                             double epsilon);

// Class counts across a strictly descending epsilon list on one grid, with
// the refinement certificate: every class at a smaller epsilon must sit
// inside a single class at the larger one.
struct EpsilonSweep {
  std::vector<double> epsilons;
  std::vector<int> counts;
  bool refines = true;
};

EpsilonSweep class_count_across_epsilon(const MapFn& f, const GridDomain& dom,
                                        int res,
                                        const std::vector<double>& epsilons);

// A box set U is filtrating when it equals the intersection of a
// forward-invariant set with a backward-invariant one.  The certificate
// computes the forward and backward closures of U; U is filtrating exactly
// when their intersection adds nothing, and the closures are then the
// witness pair.
struct FiltratingCertificate {
  bool filtrating = false;
  std::vector<int> u_plus;
  std::vector<int> u_minus;
};

FiltratingCertificate certify_filtrating(const ChainGraph& g,
                                         const std::vector<int>& boxes);

// Bundled sample maps: "identity" on [0,1]; "rotation" (irrational circle
// rotation) on wrapped [0,1); "north_south" (sink at 0, source at pi) on
// wrapped [0,2pi); "contraction" (halving) on [-1,1]; "baker" (horseshoe
// factor) on [0,1)^2.
MapFn zoo_map(const std::string& name);
GridDomain zoo_domain(const std::string& name);

}  // namespace cocyc
