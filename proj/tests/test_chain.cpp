#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "cocyc/chain.hpp"
#include "cocyc/errors.hpp"

using namespace cocyc;

namespace {

// Box index of a point, wrapping periodic axes and clamping the rest.
int point_box(const GridDomain& dom, int res, const Point& p) {
  int idx[3] = {0, 0, 0};
  for (int a = 0; a < dom.m; ++a) {
    const double span = dom.hi[static_cast<size_t>(a)] -
                        dom.lo[static_cast<size_t>(a)];
    double t = (p[static_cast<size_t>(a)] - dom.lo[static_cast<size_t>(a)]) /
               span;
    if (dom.periodic[static_cast<size_t>(a)]) t -= std::floor(t);
    int i = static_cast<int>(std::floor(t * res));
    idx[a] = std::clamp(i, 0, res - 1);
  }
  return idx[0] + res * (idx[1] + res * idx[2]);
}

bool has_edge(const ChainGraph& g, int from, int to) {
  return std::binary_search(g.edges.begin(), g.edges.end(),
                            std::make_pair(from, to));
}

std::vector<int> range_boxes(int lo, int hi) {
  std::vector<int> out;
  for (int b = lo; b <= hi; ++b) out.push_back(b);
  return out;
}

}  // namespace

TEST_CASE("identity map keeps every box in one class") {
  const ChainGraph g =
      build_chain_graph(zoo_map("identity"), zoo_domain("identity"), 16, 0.1);
  CHECK(g.res == 16);
  CHECK(g.epsilon == 0.1);
  REQUIRE(g.classes.size() == 1);
  CHECK(g.classes[0] == range_boxes(0, 15));
  for (int b = 0; b < 16; ++b) CHECK(g.class_id[static_cast<size_t>(b)] == 0);
}

TEST_CASE("north-south map splits into one sink and one source class") {
  const ChainGraph g = build_chain_graph(zoo_map("north_south"),
                                         zoo_domain("north_south"), 512, 0.02);
  REQUIRE(g.classes.size() == 2);

  // Sink cluster hugs the fixed angle 0 and wraps across the seam.
  const std::vector<int>& sink = g.classes[0];
  CHECK(sink.size() == 12);
  CHECK(sink.front() == 0);
  CHECK(sink.back() == 511);
  CHECK(std::binary_search(sink.begin(), sink.end(), 5));
  CHECK(std::binary_search(sink.begin(), sink.end(), 506));

  // Source cluster straddles the fixed angle pi (between boxes 255 and 256).
  CHECK(g.classes[1] == range_boxes(253, 258));

  for (int b : sink) CHECK(g.class_id[static_cast<size_t>(b)] == 0);
  for (int b : g.classes[1]) CHECK(g.class_id[static_cast<size_t>(b)] == 1);
  CHECK(g.class_id[100] == -1);

  // The box just outside the sink cluster keeps a self-loop edge (the
  // inflated image grazes it) yet stays wandering: a lone graze certifies
  // no cycle of at least two boxes.
  CHECK(has_edge(g, 6, 6));
  CHECK(g.class_id[6] == -1);
}

TEST_CASE("linear contraction concentrates recurrence at the origin") {
  const ChainGraph g = build_chain_graph(zoo_map("contraction"),
                                         zoo_domain("contraction"), 64, 0.01);
  REQUIRE(g.classes.size() == 1);
  CHECK(g.classes[0] == range_boxes(29, 34));  // straddles 0 at boxes 31|32
  CHECK(has_edge(g, 31, 31));
  // Farther out the image still grazes its own box, but nothing recurrent
  // lives there.
  CHECK(has_edge(g, 28, 28));
  CHECK(g.class_id[28] == -1);
  CHECK(g.class_id[0] == -1);
}

TEST_CASE("irrational rotation keeps the whole circle recurrent") {
  const ChainGraph g =
      build_chain_graph(zoo_map("rotation"), zoo_domain("rotation"), 64, 0.01);
  REQUIRE(g.classes.size() == 1);
  CHECK(g.classes[0].size() == 64);
  // Edges wrap: the last box advances by the rotation angle, about 24 boxes.
  CHECK(has_edge(g, 63, 24));
  CHECK_FALSE(has_edge(g, 63, 40));
}

TEST_CASE("baker map keeps the whole square recurrent") {
  const ChainGraph g =
      build_chain_graph(zoo_map("baker"), zoo_domain("baker"), 16, 0.05);
  CHECK(grid_box_count(zoo_domain("baker"), 16) == 256);
  REQUIRE(g.classes.size() == 1);
  CHECK(g.classes[0].size() == 256);
}

TEST_CASE("epsilon sweep counts settle on the class structure and refine") {
  const EpsilonSweep s = class_count_across_epsilon(
      zoo_map("north_south"), zoo_domain("north_south"), 128,
      {0.5, 0.1, 0.02});
  CHECK(s.epsilons == std::vector<double>{0.5, 0.1, 0.02});
  CHECK(s.counts == std::vector<int>{2, 2, 2});
  CHECK(s.refines);
}

TEST_CASE("epsilon sweep validates its schedule") {
  const MapFn f = zoo_map("identity");
  const GridDomain dom = zoo_domain("identity");

  const EpsilonSweep empty = class_count_across_epsilon(f, dom, 8, {});
  CHECK(empty.counts.empty());
  CHECK(empty.refines);

  for (const std::vector<double>& bad :
       {std::vector<double>{0.1, 0.1}, std::vector<double>{0.1, 0.5},
        std::vector<double>{0.0}, std::vector<double>{-1.0}}) {
    try {
      class_count_across_epsilon(f, dom, 8, bad);
      CHECK(false);
    } catch (const CocycleError& e) {
      CHECK(e.code == Err::PreconditionViolated);
    }
  }
}

TEST_CASE("maps that leave the domain are reported with the escaping boxes") {
  GridDomain dom;  // [0, 1], not periodic
  try {
    build_chain_graph([](const Point& p) { return Point{p[0] + 0.3, 0, 0}; },
                      dom, 8, 0.02);
    CHECK(false);
  } catch (const CocycleError& e) {
    CHECK(e.code == Err::DomainEscape);
    CHECK(std::string(e.what()).find("5 6 7") != std::string::npos);
  }
}

TEST_CASE("filtrating certificate accepts attracting sets, rejects partial ones") {
  const ChainGraph g = build_chain_graph(zoo_map("north_south"),
                                         zoo_domain("north_south"), 128, 0.02);
  REQUIRE(g.classes.size() == 2);
  CHECK(g.classes[0].size() == 6);           // sink cluster, wraps the seam
  CHECK(g.classes[1] == range_boxes(62, 65));  // source cluster

  // The sink class traps its forward closure and drains the whole circle.
  const FiltratingCertificate sink = certify_filtrating(g, g.classes[0]);
  CHECK(sink.filtrating);
  CHECK(sink.u_plus == g.classes[0]);
  CHECK(sink.u_minus.size() == 128);

  // Dropping one box from the source class breaks both closures.
  std::vector<int> part(g.classes[1].begin(), g.classes[1].end() - 1);
  CHECK_FALSE(certify_filtrating(g, part).filtrating);

  // The whole domain and the empty set are trivially filtrating.
  const FiltratingCertificate all = certify_filtrating(g, range_boxes(0, 127));
  CHECK(all.filtrating);
  CHECK(all.u_plus.size() == 128);
  const FiltratingCertificate none = certify_filtrating(g, {});
  CHECK(none.filtrating);
  CHECK(none.u_plus.empty());
  CHECK(none.u_minus.empty());
}

TEST_CASE("filtrating certificate validates box indices") {
  const ChainGraph g =
      build_chain_graph(zoo_map("identity"), zoo_domain("identity"), 8, 0.1);
  for (int bad : {-1, 64}) {
    try {
      certify_filtrating(g, {bad});
      CHECK(false);
    } catch (const CocycleError& e) {
      CHECK(e.code == Err::IndexOutOfRange);
    }
  }
}

TEST_CASE("identical inputs build identical canonical graphs") {
  const ChainGraph a = build_chain_graph(zoo_map("north_south"),
                                         zoo_domain("north_south"), 64, 0.02);
  const ChainGraph b = build_chain_graph(zoo_map("north_south"),
                                         zoo_domain("north_south"), 64, 0.02);
  CHECK(a.edges == b.edges);
  CHECK(a.classes == b.classes);
  CHECK(a.class_id == b.class_id);

  CHECK(std::is_sorted(a.edges.begin(), a.edges.end()));
  CHECK(std::adjacent_find(a.edges.begin(), a.edges.end()) == a.edges.end());
  int prev_least = -1;
  for (const std::vector<int>& cls : a.classes) {
    CHECK(std::is_sorted(cls.begin(), cls.end()));
    CHECK(cls.front() > prev_least);
    prev_least = cls.front();
  }
  // class_id is exactly the membership table of classes.
  std::vector<int> expect(a.class_id.size(), -1);
  for (size_t c = 0; c < a.classes.size(); ++c)
    for (int b2 : a.classes[c]) expect[static_cast<size_t>(b2)] =
        static_cast<int>(c);
  CHECK(a.class_id == expect);
}

TEST_CASE("true orbits always follow graph edges") {
  struct Setup {
    const char* name;
    int res;
    double eps;
  };
  const Setup setups[] = {{"identity", 32, 0.05},
                          {"rotation", 64, 0.02},
                          {"north_south", 64, 0.02},
                          {"contraction", 64, 0.01},
                          {"baker", 16, 0.05}};
  std::mt19937 rng(7);
  for (const Setup& s : setups) {
    CAPTURE(s.name);
    const MapFn f = zoo_map(s.name);
    const GridDomain dom = zoo_domain(s.name);
    const ChainGraph g = build_chain_graph(f, dom, s.res, s.eps);
    for (int trial = 0; trial < 20; ++trial) {
      Point p{0, 0, 0};
      for (int a = 0; a < dom.m; ++a) {
        std::uniform_real_distribution<double> coord(
            dom.lo[static_cast<size_t>(a)], dom.hi[static_cast<size_t>(a)]);
        p[static_cast<size_t>(a)] = coord(rng);
      }
      for (int step = 0; step < 40; ++step) {
        const Point q = f(p);
        CHECK(has_edge(g, point_box(dom, s.res, p), point_box(dom, s.res, q)));
        p = q;
      }
    }
  }
}

TEST_CASE("brute-force mutual reachability agrees with the classes") {
  const ChainGraph g = build_chain_graph(zoo_map("north_south"),
                                         zoo_domain("north_south"), 64, 0.02);
  const int n = grid_box_count(g.domain, g.res);

  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  for (const auto& e : g.edges) adj[static_cast<size_t>(e.first)].push_back(e.second);
  std::vector<std::vector<bool>> reach(
      static_cast<size_t>(n), std::vector<bool>(static_cast<size_t>(n), false));
  for (int s = 0; s < n; ++s) {
    std::queue<int> q;
    q.push(s);
    std::vector<bool>& r = reach[static_cast<size_t>(s)];
    r[static_cast<size_t>(s)] = true;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int w : adj[static_cast<size_t>(v)])
        if (!r[static_cast<size_t>(w)]) {
          r[static_cast<size_t>(w)] = true;
          q.push(w);
        }
    }
  }

  std::vector<std::vector<int>> brute;
  std::vector<bool> placed(static_cast<size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    if (placed[static_cast<size_t>(i)]) continue;
    std::vector<int> cls;
    for (int j = i; j < n; ++j)
      if (reach[static_cast<size_t>(i)][static_cast<size_t>(j)] &&
          reach[static_cast<size_t>(j)][static_cast<size_t>(i)])
        cls.push_back(j);
    for (int j : cls) placed[static_cast<size_t>(j)] = true;
    if (cls.size() >= 2) brute.push_back(std::move(cls));
  }
  CHECK(brute == g.classes);
}

TEST_CASE("grid helpers validate their inputs and invert box indices") {
  CHECK(grid_box_count(zoo_domain("identity"), 16) == 16);

  GridDomain cube;
  cube.m = 3;
  const int box = 117;  // coords (2, 3, 4) at resolution 5
  const std::array<int, 3> c = box_coords(cube, 5, box);
  CHECK(c == std::array<int, 3>{2, 3, 4});
  const Point center = box_center(cube, 5, box);
  CHECK(center[0] == doctest::Approx(0.5));
  CHECK(center[1] == doctest::Approx(0.7));
  CHECK(center[2] == doctest::Approx(0.9));

  const MapFn id = [](const Point& p) { return p; };
  GridDomain bad;
  for (auto tweak : std::vector<std::function<void(GridDomain&)>>{
           [](GridDomain& d) { d.m = 0; },
           [](GridDomain& d) { d.m = 4; },
           [](GridDomain& d) { d.hi[0] = d.lo[0]; },
       }) {
    bad = GridDomain{};
    tweak(bad);
    try {
      build_chain_graph(id, bad, 8, 0.1);
      CHECK(false);
    } catch (const CocycleError& e) {
      CHECK(e.code == Err::PreconditionViolated);
    }
  }
  // Resolution must be at least 2 and the box count must stay bounded.
  for (int res : {1, 3000}) {
    GridDomain d;
    d.m = 3;
    try {
      build_chain_graph(id, d, res, 0.1);
      CHECK(false);
    } catch (const CocycleError& e) {
      CHECK(e.code == Err::PreconditionViolated);
    }
  }
}

TEST_CASE("the map zoo rejects unknown names") {
  for (auto fn : {zoo_map}) {
    try {
      fn("mystery");
      CHECK(false);
    } catch (const CocycleError& e) {
      CHECK(e.code == Err::MalformedInput);
    }
  }
  try {
    zoo_domain("mystery");
    CHECK(false);
  } catch (const CocycleError& e) {
    CHECK(e.code == Err::MalformedInput);
  }
}
