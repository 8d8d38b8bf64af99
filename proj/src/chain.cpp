#include "cocyc/chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cocyc/errors.hpp"

namespace cocyc {
namespace {

constexpr int kMaxBoxes = 1 << 22;     // memory guard on res^m
constexpr double kEdgeSlack = 1e-9;    // relative boundary slack before a
                                       // sampled image counts as escaped

void check_domain(const GridDomain& dom, int res) {
  if (dom.m < 1 || dom.m > 3)
    fail(Err::PreconditionViolated, "domain dimension must be 1, 2, or 3");
  if (res < 2)
    fail(Err::PreconditionViolated, "need at least two boxes per axis");
  long long n = 1;
  for (int a = 0; a < dom.m; ++a) {
    if (!(dom.hi[static_cast<size_t>(a)] > dom.lo[static_cast<size_t>(a)]))
      fail(Err::PreconditionViolated, "domain box must have positive extent");
    n *= res;
  }
  if (n > kMaxBoxes)
    fail(Err::PreconditionViolated, "grid too large");
}

// Circular or plain deviation between two raw coordinates on one axis.
double axis_dev(double a, double b, double span, bool wrap) {
  double d = a - b;
  if (wrap) d -= span * std::round(d / span);
  return std::abs(d);
}

// Iterative Tarjan; components are emitted with vertices in push order and
// canonicalized afterwards.
std::vector<std::vector<int>> tarjan_scc(int n, const std::vector<int>& head,
                                         const std::vector<int>& targets) {
  std::vector<int> index(static_cast<size_t>(n), -1);
  std::vector<int> low(static_cast<size_t>(n), 0);
  std::vector<char> on_stack(static_cast<size_t>(n), 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> comps;
  int next_index = 0;

  struct Frame {
    int v;
    int child;
  };
  std::vector<Frame> call;
  for (int root = 0; root < n; ++root) {
    if (index[static_cast<size_t>(root)] != -1) continue;
    call.push_back({root, head[static_cast<size_t>(root)]});
    index[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] =
        next_index++;
    stack.push_back(root);
    on_stack[static_cast<size_t>(root)] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.child < head[static_cast<size_t>(f.v) + 1]) {
        const int w = targets[static_cast<size_t>(f.child++)];
        if (index[static_cast<size_t>(w)] == -1) {
          index[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] =
              next_index++;
          stack.push_back(w);
          on_stack[static_cast<size_t>(w)] = 1;
          call.push_back({w, head[static_cast<size_t>(w)]});
        } else if (on_stack[static_cast<size_t>(w)]) {
          low[static_cast<size_t>(f.v)] =
              std::min(low[static_cast<size_t>(f.v)],
                       index[static_cast<size_t>(w)]);
        }
        continue;
      }
      const int v = f.v;
      call.pop_back();
      if (!call.empty())
        low[static_cast<size_t>(call.back().v)] =
            std::min(low[static_cast<size_t>(call.back().v)],
                     low[static_cast<size_t>(v)]);
      if (low[static_cast<size_t>(v)] == index[static_cast<size_t>(v)]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<size_t>(w)] = 0;
          comp.push_back(w);
        } while (w != v);
        comps.push_back(std::move(comp));
      }
    }
  }
  return comps;
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

int grid_box_count(const GridDomain& dom, int res) {
  check_domain(dom, res);
  int n = 1;
  for (int a = 0; a < dom.m; ++a) {
    (void)a;
    n *= res;
  }
  return n;
}

std::array<int, 3> box_coords(const GridDomain& dom, int res, int box) {
  std::array<int, 3> c{0, 0, 0};
  for (int a = 0; a < dom.m; ++a) {
    c[static_cast<size_t>(a)] = box % res;
    box /= res;
  }
  return c;
}

Point box_center(const GridDomain& dom, int res, int box) {
  const std::array<int, 3> c = box_coords(dom, res, box);
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dom.m; ++a) {
    const double w =
        (dom.hi[static_cast<size_t>(a)] - dom.lo[static_cast<size_t>(a)]) /
        res;
    p[static_cast<size_t>(a)] =
        dom.lo[static_cast<size_t>(a)] + (c[static_cast<size_t>(a)] + 0.5) * w;
  }
  return p;
}

ChainGraph build_chain_graph(const MapFn& f, const GridDomain& dom, int res,
                             double epsilon) {
  check_domain(dom, res);
  if (!(epsilon > 0.0))
    fail(Err::PreconditionViolated, "epsilon must be positive");
  if (!f) fail(Err::PreconditionViolated, "map must be callable");

  const int n = grid_box_count(dom, res);
  double w[3] = {0.0, 0.0, 0.0};
  double span[3] = {0.0, 0.0, 0.0};
  double diam = 0.0;
  for (int a = 0; a < dom.m; ++a) {
    span[a] = dom.hi[static_cast<size_t>(a)] - dom.lo[static_cast<size_t>(a)];
    w[a] = span[a] / res;
    diam = std::max(diam, w[a]);
  }

  ChainGraph g;
  g.domain = dom;
  g.res = res;
  g.epsilon = epsilon;
  g.class_id.assign(static_cast<size_t>(n), -1);

  std::vector<int> escaped;
  std::vector<int> head(static_cast<size_t>(n) + 1, 0);
  std::vector<int> targets;

  for (int b = 0; b < n; ++b) {
    const std::array<int, 3> bc = box_coords(dom, res, b);
    Point center{0.0, 0.0, 0.0}, corner_lo{0.0, 0.0, 0.0},
        corner_hi{0.0, 0.0, 0.0};
    for (int a = 0; a < dom.m; ++a) {
      const double base =
          dom.lo[static_cast<size_t>(a)] + bc[static_cast<size_t>(a)] * w[a];
      corner_lo[static_cast<size_t>(a)] = base;
      corner_hi[static_cast<size_t>(a)] = base + w[a];
      center[static_cast<size_t>(a)] = base + 0.5 * w[a];
    }
    const Point yc = f(center);
    const Point y0 = f(corner_lo);
    const Point y1 = f(corner_hi);

    bool out = false;
    for (int a = 0; a < dom.m && !out; ++a) {
      if (dom.periodic[static_cast<size_t>(a)]) continue;
      const double slack = kEdgeSlack * span[a];
      for (const Point& y : {yc, y0, y1}) {
        const double v = y[static_cast<size_t>(a)];
        if (v < dom.lo[static_cast<size_t>(a)] - slack ||
            v > dom.hi[static_cast<size_t>(a)] + slack) {
          out = true;
          break;
        }
      }
    }
    if (out) {
      escaped.push_back(b);
      head[static_cast<size_t>(b) + 1] = head[static_cast<size_t>(b)];
      continue;
    }

    // Per-axis index ranges of the inflated image.
    std::vector<int> idx[3];
    for (int a = 0; a < dom.m; ++a) {
      const bool wrap = dom.periodic[static_cast<size_t>(a)];
      const double spread =
          std::max(axis_dev(y0[static_cast<size_t>(a)],
                            yc[static_cast<size_t>(a)], span[a], wrap),
                   axis_dev(y1[static_cast<size_t>(a)],
                            yc[static_cast<size_t>(a)], span[a], wrap));
      const double rho = epsilon + diam + spread;
      double c = yc[static_cast<size_t>(a)];
      if (wrap) {
        c = std::fmod(c - dom.lo[static_cast<size_t>(a)], span[a]);
        if (c < 0.0) c += span[a];
        c += dom.lo[static_cast<size_t>(a)];
        if (2.0 * rho >= span[a]) {
          for (int i = 0; i < res; ++i) idx[a].push_back(i);
          continue;
        }
        const int ilo = static_cast<int>(std::floor(
            (c - rho - dom.lo[static_cast<size_t>(a)]) / w[a]));
        const int ihi = static_cast<int>(std::floor(
            (c + rho - dom.lo[static_cast<size_t>(a)]) / w[a]));
        for (int i = ilo; i <= ihi && i - ilo < res; ++i)
          idx[a].push_back(((i % res) + res) % res);
      } else {
        const double vlo =
            std::max(c - rho, dom.lo[static_cast<size_t>(a)]);
        const double vhi = std::min(c + rho, dom.hi[static_cast<size_t>(a)]);
        int ilo = static_cast<int>(
            std::floor((vlo - dom.lo[static_cast<size_t>(a)]) / w[a]));
        int ihi = static_cast<int>(
            std::floor((vhi - dom.lo[static_cast<size_t>(a)]) / w[a]));
        ilo = std::max(0, std::min(res - 1, ilo));
        ihi = std::max(0, std::min(res - 1, ihi));
        for (int i = ilo; i <= ihi; ++i) idx[a].push_back(i);
      }
    }
    for (int a = dom.m; a < 3; ++a) idx[a].push_back(0);

    std::vector<int> outs;
    for (int z : idx[2])
      for (int y : idx[1])
        for (int x : idx[0]) outs.push_back(x + res * (y + res * z));
    outs = sorted_unique(std::move(outs));
    for (int t : outs) targets.push_back(t);
    head[static_cast<size_t>(b) + 1] =
        static_cast<int>(targets.size());
  }

  if (!escaped.empty()) {
    std::string what = "sampled image left the domain at boxes:";
    const size_t show = std::min<size_t>(escaped.size(), 8);
    for (size_t i = 0; i < show; ++i)
      what += " " + std::to_string(escaped[i]);
    if (escaped.size() > show)
      what += " (+" + std::to_string(escaped.size() - show) + " more)";
    fail(Err::DomainEscape, what);
  }

  for (int b = 0; b < n; ++b)
    for (int e = head[static_cast<size_t>(b)];
         e < head[static_cast<size_t>(b) + 1]; ++e)
      g.edges.emplace_back(b, targets[static_cast<size_t>(e)]);

  // Recurrent pieces: strongly connected components of two or more boxes.
  // A lone box whose inflated image merely grazes itself stays wandering:
  // the graze certifies no pseudo-orbit cycle, only slack in the outer
  // approximation, and near a genuine fixed point the inflation always
  // binds the box to a neighbor anyway.
  std::vector<std::vector<int>> comps = tarjan_scc(n, head, targets);
  for (std::vector<int>& comp : comps) {
    if (comp.size() < 2) continue;
    std::sort(comp.begin(), comp.end());
    g.classes.push_back(std::move(comp));
  }
  std::sort(g.classes.begin(), g.classes.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              return a[0] < b[0];
            });
  for (size_t c = 0; c < g.classes.size(); ++c)
    for (int b : g.classes[c]) g.class_id[static_cast<size_t>(b)] = static_cast<int>(c);
  return g;
}

EpsilonSweep class_count_across_epsilon(const MapFn& f, const GridDomain& dom,
                                        int res,
                                        const std::vector<double>& epsilons) {
  for (size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0))
      fail(Err::PreconditionViolated, "epsilons must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
      fail(Err::PreconditionViolated, "epsilons must be strictly descending");
  }
  EpsilonSweep sweep;
  sweep.epsilons = epsilons;
  ChainGraph prev;
  for (size_t i = 0; i < epsilons.size(); ++i) {
    ChainGraph g = build_chain_graph(f, dom, res, epsilons[i]);
    sweep.counts.push_back(static_cast<int>(g.classes.size()));
    if (i > 0) {
      // Each class in the finer graph must land inside one class of the
      // coarser graph: shrinking epsilon only removes edges.
      for (const std::vector<int>& cls : g.classes) {
        const int id0 = prev.class_id[static_cast<size_t>(cls[0])];
        if (id0 < 0) {
          sweep.refines = false;
          break;
        }
        for (int b : cls) {
          if (prev.class_id[static_cast<size_t>(b)] != id0) {
            sweep.refines = false;
            break;
          }
        }
        if (!sweep.refines) break;
      }
    }
    prev = std::move(g);
  }
  return sweep;
}

FiltratingCertificate certify_filtrating(const ChainGraph& g,
                                         const std::vector<int>& boxes) {
  const int n = static_cast<int>(g.class_id.size());
  std::vector<int> u = sorted_unique(boxes);
  for (int b : u)
    if (b < 0 || b >= n)
      fail(Err::IndexOutOfRange, "candidate set names a box outside the grid");

  std::vector<std::vector<int>> fwd(static_cast<size_t>(n)),
      bwd(static_cast<size_t>(n));
  for (const std::pair<int, int>& e : g.edges) {
    fwd[static_cast<size_t>(e.first)].push_back(e.second);
    bwd[static_cast<size_t>(e.second)].push_back(e.first);
  }

  auto closure = [n](const std::vector<int>& seed,
                     const std::vector<std::vector<int>>& adj) {
    std::vector<char> in(static_cast<size_t>(n), 0);
    std::vector<int> queue = seed;
    for (int b : seed) in[static_cast<size_t>(b)] = 1;
    while (!queue.empty()) {
      const int v = queue.back();
      queue.pop_back();
      for (int t : adj[static_cast<size_t>(v)]) {
        if (!in[static_cast<size_t>(t)]) {
          in[static_cast<size_t>(t)] = 1;
          queue.push_back(t);
        }
      }
    }
    std::vector<int> out;
    for (int b = 0; b < n; ++b)
      if (in[static_cast<size_t>(b)]) out.push_back(b);
    return out;
  };

  FiltratingCertificate cert;
  cert.u_plus = closure(u, fwd);
  cert.u_minus = closure(u, bwd);
  std::vector<int> meet;
  std::set_intersection(cert.u_plus.begin(), cert.u_plus.end(),
                        cert.u_minus.begin(), cert.u_minus.end(),
                        std::back_inserter(meet));
  cert.filtrating = meet == u;
  return cert;
}

MapFn zoo_map(const std::string& name) {
  if (name == "identity") {
    return [](const Point& p) { return p; };
  }
  if (name == "rotation") {
    return [](const Point& p) {
      double x = p[0] + 0.381966011;
      x -= std::floor(x);
      return Point{x, 0.0, 0.0};
    };
  }
  if (name == "north_south") {
    return [](const Point& p) {
      double s = std::fmod(p[0], 2.0 * M_PI);
      if (s < 0.0) s += 2.0 * M_PI;
      double y = 2.0 * std::atan(0.5 * std::tan(0.5 * s));
      if (y < 0.0) y += 2.0 * M_PI;
      return Point{y, 0.0, 0.0};
    };
  }
  if (name == "contraction") {
    return [](const Point& p) { return Point{0.5 * p[0], 0.0, 0.0}; };
  }
  if (name == "baker") {
    return [](const Point& p) {
      const double fl = std::min(std::floor(2.0 * p[0]), 1.0);
      return Point{2.0 * p[0] - fl, 0.5 * (p[1] + fl), 0.0};
    };
  }
  fail(Err::MalformedInput, "unknown map name: " + name);
}

GridDomain zoo_domain(const std::string& name) {
  GridDomain d;
  if (name == "identity") {
    return d;
  }
  if (name == "rotation") {
    d.periodic[0] = true;
    return d;
  }
  if (name == "north_south") {
    d.hi[0] = 2.0 * M_PI;
    d.periodic[0] = true;
    return d;
  }
  if (name == "contraction") {
    d.lo[0] = -1.0;
    return d;
  }
  if (name == "baker") {
    d.m = 2;
    return d;
  }
  fail(Err::MalformedInput, "unknown map name: " + name);
}

}  // namespace cocyc
