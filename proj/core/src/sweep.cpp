#include "peglab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <tuple>

#include "peglab/error.hpp"
#include "peglab/parallel.hpp"
#include "rect_system.hpp"

namespace peglab {

const char* to_string(BranchEvent e) noexcept {
  switch (e) {
    case BranchEvent::None: return "none";
    case BranchEvent::Birth: return "birth";
    case BranchEvent::Death: return "death";
  }
  return "none";
}

const char* to_string(EndKind e) noexcept {
  switch (e) {
    case EndKind::Boundary: return "boundary";
    case EndKind::Fold: return "fold";
    case EndKind::Open: return "open";
    case EndKind::Stalled: return "stalled";
  }
  return "open";
}

std::vector<std::pair<int, BranchSample>> SpectrumDiagram::column(std::size_t i) const {
  std::vector<std::pair<int, BranchSample>> out;
  for (const auto& b : branches) {
    for (const auto& s : b.samples) {
      if (s.grid_index == static_cast<int>(i)) out.emplace_back(b.id, s);
    }
  }
  return out;
}

namespace {

using detail::Mat45;
using detail::Vec4;
using detail::Vec5;
using Mat5 = Eigen::Matrix<double, 5, 5>;

Quad to_quad(const Vec5& x) { return {x(1), x(2), x(3), x(4)}; }

Vec5 to_vec(double theta, const Quad& q) {
  Vec5 x;
  x << theta, q[0], q[1], q[2], q[3];
  return x;
}

Vec5 tangent_at(const JordanCurve& curve, const Vec5& x, const Vec5* prev, int dir) {
  Vec4 r;
  Mat45 jac;
  detail::rectangle_system(curve, x(0), to_quad(x), r, &jac);
  Eigen::JacobiSVD<Mat45> svd(jac, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const auto& v = svd.matrixV();
  Vec5 t = v.col(4);
  if (sv(3) < 1e-8 * sv(0)) {
    // Two-dimensional kernel (Morse-Bott family): follow the reference
    // direction projected onto the kernel.
    Vec5 ref = Vec5::Zero();
    if (prev != nullptr) {
      ref = *prev;
    } else {
      ref(0) = dir;
    }
    const Vec5 proj = v.col(3) * v.col(3).dot(ref) + v.col(4) * v.col(4).dot(ref);
    if (proj.norm() > 1e-12) t = proj;
  }
  t.normalize();
  if (prev != nullptr) {
    if (t.dot(*prev) < 0.0) t = -t;
  } else if (t(0) * dir < 0.0) {
    t = -t;
  }
  return t;
}

struct Corrected {
  Vec5 x;
  int iterations = 0;
  bool ok = false;
};

// Newton on [F(y); c(y)] where c is the arclength plane through xp normal to
// T, or theta = fixed_theta when that is finite.
Corrected correct(const JordanCurve& curve, const Vec5& xp, const Vec5& tangent, double tol,
                  double fixed_theta = std::numeric_limits<double>::quiet_NaN()) {
  Corrected out;
  out.x = xp;
  if (!std::isnan(fixed_theta)) out.x(0) = fixed_theta;
  for (int it = 0; it < 12; ++it) {
    Vec4 r;
    Mat45 jac;
    detail::rectangle_system(curve, out.x(0), to_quad(out.x), r, &jac);
    Mat5 big;
    big.topRows<4>() = jac;
    Vec5 rhs;
    rhs.head<4>() = -r;
    if (std::isnan(fixed_theta)) {
      big.row(4) = tangent.transpose();
      rhs(4) = -tangent.dot(out.x - xp);
    } else {
      big.row(4) = Vec5::Unit(0).transpose();
      rhs(4) = -(out.x(0) - fixed_theta);
    }
    const double res = r.cwiseAbs().maxCoeff();
    const Vec5 dx = detail::pinv_solve(big, rhs);
    out.iterations = it;
    if (res <= tol && dx.cwiseAbs().maxCoeff() < 1e-11) {
      out.ok = true;
      return out;
    }
    if (!dx.allFinite() || dx.cwiseAbs().maxCoeff() > 1.0) return out;
    out.x += dx;
  }
  Vec4 r;
  detail::rectangle_system(curve, out.x(0), to_quad(out.x), r, nullptr);
  out.ok = r.cwiseAbs().maxCoeff() <= tol;
  return out;
}

struct Trace {
  std::vector<Vec5> points;
  EndKind end = EndKind::Open;
};

// Follows the branch from x0 in the theta direction dir until theta reaches
// bound, a fold is crossed, or the step floor is hit.
Trace trace(const JordanCurve& curve, const Vec5& x0, int dir, double bound, const ContinuationOptions& opt) {
  Trace out;
  out.points.push_back(x0);
  Vec5 x = x0;
  Vec5 t = tangent_at(curve, x, nullptr, dir);
  double h = opt.step;
  auto beyond = [&](double theta) { return dir * (theta - bound) >= 0.0; };
  if (beyond(x(0))) {
    out.end = EndKind::Boundary;
    return out;
  }
  for (int count = 0; count < opt.max_points; ++count) {
    if (h < opt.min_step) {
      out.end = EndKind::Stalled;
      return out;
    }
    // Land exactly on the bound when the predictor would cross it.
    if (dir * t(0) > 0.0 && beyond(x(0) + h * t(0))) {
      const double hb = (bound - x(0)) / t(0);
      const Corrected c = correct(curve, x + hb * t, t, opt.tol, bound);
      if (c.ok && (c.x - x).cwiseAbs().maxCoeff() <= 2.0 * hb + 1e-9) {
        out.points.push_back(c.x);
        out.end = EndKind::Boundary;
        return out;
      }
      h = 0.5 * std::min(h, hb);
      continue;
    }
    const Vec5 xp = x + h * t;
    const Corrected c = correct(curve, xp, t, opt.tol);
    if (!c.ok || (c.x - xp).cwiseAbs().maxCoeff() > 0.5 * h) {
      h *= 0.5;
      continue;
    }
    const Vec5 tn = tangent_at(curve, c.x, &t, dir);
    if (tn(0) * t(0) < 0.0) {
      // Fold between x and c.x: bisect on the predictor length for theta' = 0.
      double lo = 0.0, hi = h;
      Vec5 fold = c.x;
      for (int k = 0; k < 60 && hi - lo > 1e-12; ++k) {
        const double mid = 0.5 * (lo + hi);
        const Corrected m = correct(curve, x + mid * t, t, opt.tol);
        if (!m.ok) break;
        const Vec5 tm = tangent_at(curve, m.x, &t, dir);
        fold = m.x;
        if (tm(0) * t(0) > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      out.points.push_back(fold);
      out.end = EndKind::Fold;
      return out;
    }
    if (beyond(c.x(0))) {
      const Corrected b = correct(curve, c.x, tn, opt.tol, bound);
      if (b.ok) {
        out.points.push_back(b.x);
        out.end = EndKind::Boundary;
        return out;
      }
      h *= 0.5;
      continue;
    }
    out.points.push_back(c.x);
    x = c.x;
    t = tn;
    if (c.iterations <= 3) h = std::min(1.5 * h, opt.max_step);
  }
  out.end = EndKind::Stalled;
  return out;
}

Quad wrapped(const Quad& q) {
  Quad out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = wrap_angle(q[i]);
  return out;
}

BranchSample sample_at(const JordanCurve& curve, double theta, const Quad& q, bool with_action,
                       const ActionOptions& aopt) {
  BranchSample s;
  s.theta = theta;
  s.params = wrapped(q);
  const InscribedRectangle rect = make_rectangle(curve, theta, s.params);
  s.rad = rect.rad;
  s.action = with_action ? action_value(curve, rect, aopt).value : 0.0;
  return s;
}

}  // namespace

SpectrumBranch continue_branch(const JordanCurve& curve, const InscribedRectangle& seed,
                               std::pair<double, double> theta_range, const ContinuationOptions& options) {
  const double lo = std::max(theta_range.first, 1e-3);
  const double hi = std::min(theta_range.second, kPi - 1e-3);
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "empty theta range");
  if (!(seed.residual <= 1e-10)) throw Error(ErrorCode::InvalidArgument, "seed residual above 1e-10");
  if (!(options.step > 0.0 && options.min_step > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "continuation steps must be positive");
  }
  const Vec5 x0 = to_vec(seed.theta, seed.params);
  const Trace up = trace(curve, x0, +1, hi, options);
  const Trace down = trace(curve, x0, -1, lo, options);

  std::vector<Vec5> pts(down.points.rbegin(), down.points.rend());
  pts.insert(pts.end(), up.points.begin() + 1, up.points.end());

  SpectrumBranch branch;
  branch.birth = down.end;
  branch.death = up.end;
  branch.samples.resize(pts.size());
  const ActionOptions aopt;
  parallel_for(pts.size(), [&](std::size_t i) {
    branch.samples[i] = sample_at(curve, pts[i](0), to_quad(pts[i]), options.compute_action, aopt);
  });
  if (branch.birth == EndKind::Fold) branch.samples.front().event = BranchEvent::Birth;
  if (branch.death == EndKind::Fold) branch.samples.back().event = BranchEvent::Death;
  return branch;
}

namespace {

struct Node {
  InscribedRectangle rect;
  double action = 0.0;
  int next = -1;
  int prev = -1;
  std::optional<BranchSample> head;  // continuation sample before this node
  std::optional<BranchSample> tail;  // continuation sample after this node
  EndKind start = EndKind::Open;
  EndKind finish = EndKind::Open;
};

struct GapResult {
  std::vector<std::pair<int, int>> links;
  std::vector<std::string> log;
};

std::string fmt_theta(double theta) {
  std::ostringstream os;
  os.precision(6);
  os << theta;
  return os.str();
}

GapResult match_gap(const std::vector<Node>& a, const std::vector<Node>& b, double theta_a) {
  GapResult out;
  if (a.empty() || b.empty()) return out;
  std::vector<std::vector<double>> d(a.size(), std::vector<double>(b.size()));
  std::vector<double> nearest;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) d[i][j] = generator_distance(a[i].rect.params, b[j].rect.params);
  }
  for (std::size_t i = 0; i < a.size(); ++i) nearest.push_back(*std::min_element(d[i].begin(), d[i].end()));
  for (std::size_t j = 0; j < b.size(); ++j) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) m = std::min(m, d[i][j]);
    nearest.push_back(m);
  }
  std::nth_element(nearest.begin(), nearest.begin() + static_cast<long>(nearest.size() / 2), nearest.end());
  const double threshold = std::max(3.0 * nearest[nearest.size() / 2], 1e-9);

  std::vector<std::tuple<double, int, int>> cands;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (d[i][j] <= threshold) cands.emplace_back(d[i][j], static_cast<int>(i), static_cast<int>(j));
    }
  }
  std::sort(cands.begin(), cands.end());
  std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
  for (const auto& [dist, i, j] : cands) {
    if (used_a[static_cast<std::size_t>(i)] || used_b[static_cast<std::size_t>(j)]) continue;
    int pick = j;
    std::vector<int> rivals;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (static_cast<int>(k) != j && !used_b[k] && d[static_cast<std::size_t>(i)][k] <= threshold &&
          d[static_cast<std::size_t>(i)][k] <= 1.1 * dist) {
        rivals.push_back(static_cast<int>(k));
      }
    }
    if (!rivals.empty()) {
      double best = std::abs(a[static_cast<std::size_t>(i)].action - b[static_cast<std::size_t>(j)].action);
      for (int k : rivals) {
        const double gap = std::abs(a[static_cast<std::size_t>(i)].action - b[static_cast<std::size_t>(k)].action);
        if (gap < best) {
          best = gap;
          pick = k;
        }
      }
      out.log.push_back("MatchAmbiguity at theta " + fmt_theta(theta_a) + ": " + std::to_string(rivals.size() + 1) +
                        " candidates within 10%, resolved by action difference");
    }
    used_a[static_cast<std::size_t>(i)] = true;
    used_b[static_cast<std::size_t>(pick)] = true;
    out.links.emplace_back(i, pick);
  }
  return out;
}

// Orients q (or its swap) to be closest to the reference parameters.
Quad align_to(const Quad& q, const Quad& ref) {
  const Quad sw = swap_generator(q);
  return quad_distance(sw, ref) < quad_distance(q, ref) ? sw : q;
}

}  // namespace

SpectrumDiagram sweep_spectrum(const JordanCurve& curve, double theta_min, double theta_max, int n_steps,
                               const SweepOptions& options) {
  const double lo = std::max(theta_min, 1e-3);
  const double hi = std::min(theta_max, kPi - 1e-3);
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "theta_min must be below theta_max");
  if (n_steps < 2) throw Error(ErrorCode::InvalidArgument, "n_steps must be at least 2");

  SpectrumDiagram diagram;
  diagram.curve_area = enclosed_area(curve);
  diagram.curve_rad = curve_radius(curve);
  const auto n = static_cast<std::size_t>(n_steps);
  diagram.theta_grid.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    diagram.theta_grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  const auto& grid = diagram.theta_grid;

  std::vector<std::vector<Node>> columns(n);
  parallel_for(n, [&](std::size_t i) {
    for (auto& r : find_rectangles(curve, grid[i], options.grid_n, options.tol)) {
      Node node;
      node.rect = std::move(r);
      columns[i].push_back(std::move(node));
    }
  });
  std::size_t total = 0;
  for (const auto& c : columns) total += c.size();
  if (total == 0) throw Error(ErrorCode::EmptySpectrum, "no inscribed rectangle at any grid theta");

  std::vector<std::pair<std::size_t, std::size_t>> flat;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < columns[i].size(); ++k) flat.emplace_back(i, k);
  }
  parallel_for(flat.size(), [&](std::size_t f) {
    Node& node = columns[flat[f].first][flat[f].second];
    node.action = action_value(curve, node.rect, options.action).value;
  });

  // Gaps are independent of each other, so the processing order does not
  // affect the result; descending only reverses it.
  std::vector<std::size_t> gaps(n - 1);
  std::iota(gaps.begin(), gaps.end(), 0);
  if (options.descending) std::reverse(gaps.begin(), gaps.end());

  std::vector<GapResult> matched(n - 1);
  parallel_for(gaps.size(), [&](std::size_t g) {
    const std::size_t i = gaps[g];
    matched[i] = match_gap(columns[i], columns[i + 1], grid[i]);
  });
  for (std::size_t i : gaps) {
    for (const auto& [a, b] : matched[i].links) {
      columns[i][static_cast<std::size_t>(a)].next = b;
      columns[i + 1][static_cast<std::size_t>(b)].prev = a;
    }
  }

  // Continuation across gaps for unmatched ends.
  struct Job {
    std::size_t gap;
    std::size_t node;
    int dir;
  };
  std::vector<Job> jobs;
  for (std::size_t i : gaps) {
    for (std::size_t k = 0; k < columns[i].size(); ++k) {
      if (columns[i][k].next < 0) jobs.push_back({i, k, +1});
    }
    for (std::size_t k = 0; k < columns[i + 1].size(); ++k) {
      if (columns[i + 1][k].prev < 0) jobs.push_back({i, k, -1});
    }
  }
  std::vector<Trace> traces(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t j) {
    const Job& job = jobs[j];
    const std::size_t col = job.dir > 0 ? job.gap : job.gap + 1;
    const Node& node = columns[col][job.node];
    ContinuationOptions copt;
    const double span = grid[job.gap + 1] - grid[job.gap];
    copt.step = 0.25 * span;
    copt.max_step = 0.5 * span;
    copt.min_step = 1e-6;
    copt.tol = options.tol;
    const double bound = job.dir > 0 ? grid[job.gap + 1] : grid[job.gap];
    traces[j] = trace(curve, to_vec(node.rect.theta, node.rect.params), job.dir, bound, copt);
  });

  std::vector<std::vector<std::string>> gap_log(n - 1);
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Job& job = jobs[j];
    const bool up = job.dir > 0;
    const std::size_t col = up ? job.gap : job.gap + 1;
    const std::size_t other = up ? job.gap + 1 : job.gap;
    Node& node = columns[col][job.node];
    if (up ? node.next >= 0 : node.prev >= 0) continue;  // linked by an earlier job
    const Trace& tr = traces[j];
    const Vec5& end = tr.points.back();
    auto& log = gap_log[job.gap];
    const std::string where = "theta " + fmt_theta(node.rect.theta);
    EndKind kind = tr.end;
    if (tr.end == EndKind::Boundary) {
      const Quad q = canonical_generator(to_quad(end));
      int hit = -1;
      for (std::size_t k = 0; k < columns[other].size(); ++k) {
        if (generator_distance(columns[other][k].rect.params, q) <= 1e-6) {
          hit = static_cast<int>(k);
          break;
        }
      }
      Node* target = hit >= 0 ? &columns[other][static_cast<std::size_t>(hit)] : nullptr;
      if (target != nullptr && (up ? target->prev < 0 : target->next < 0)) {
        if (up) {
          node.next = hit;
          target->prev = static_cast<int>(job.node);
        } else {
          node.prev = hit;
          target->next = static_cast<int>(job.node);
        }
        log.push_back("continuation linked unmatched node at " + where);
        continue;
      }
      kind = EndKind::Open;
      if (target == nullptr && !node.rect.degenerate) {
        BranchSample s = sample_at(curve, end(0), to_quad(end), true, options.action);
        (up ? node.tail : node.head) = s;
        log.push_back("continuation from " + where + " reached a solution the grid solver missed");
      } else {
        log.push_back("unmatched node at " + where + " left open");
      }
    } else if (tr.end == EndKind::Fold) {
      BranchSample s = sample_at(curve, end(0), to_quad(end), true, options.action);
      s.event = up ? BranchEvent::Death : BranchEvent::Birth;
      (up ? node.tail : node.head) = s;
      log.push_back(std::string("fold (") + (up ? "death" : "birth") + ") near theta " + fmt_theta(end(0)));
    } else {
      log.push_back("StallAtFloor continuing from " + where);
    }
    (up ? node.finish : node.start) = kind;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (auto& s : matched[i].log) diagram.log.push_back(std::move(s));
    for (auto& s : gap_log[i]) diagram.log.push_back(std::move(s));
  }

  // Assemble chains.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < columns[i].size(); ++k) {
      if (columns[i][k].prev >= 0) continue;
      SpectrumBranch branch;
      const Node& first = columns[i][k];
      branch.birth = i == 0 ? EndKind::Boundary : first.start;
      if (first.head) branch.samples.push_back(*first.head);
      std::size_t col = i, idx = k;
      for (;;) {
        const Node& node = columns[col][idx];
        BranchSample s;
        s.theta = grid[col];
        s.params = branch.samples.empty() ? node.rect.params : align_to(node.rect.params, branch.samples.back().params);
        s.action = node.action;
        s.rad = node.rect.rad;
        s.grid_index = static_cast<int>(col);
        branch.samples.push_back(s);
        if (node.next < 0) {
          branch.death = col + 1 == n ? EndKind::Boundary : node.finish;
          if (node.tail) branch.samples.push_back(*node.tail);
          break;
        }
        idx = static_cast<std::size_t>(node.next);
        ++col;
      }
      if (branch.samples.front().grid_index < 0) {
        branch.samples.front().params = align_to(branch.samples.front().params, branch.samples[1].params);
      }
      if (branch.samples.back().grid_index < 0) {
        const std::size_t m = branch.samples.size();
        branch.samples.back().params = align_to(branch.samples.back().params, branch.samples[m - 2].params);
      }
      if (branch.birth == EndKind::Open || branch.birth == EndKind::Stalled) {
        branch.samples.front().event = BranchEvent::Birth;
      }
      if (branch.death == EndKind::Open || branch.death == EndKind::Stalled) {
        branch.samples.back().event = BranchEvent::Death;
      }
      diagram.branches.push_back(std::move(branch));
    }
  }
  std::stable_sort(diagram.branches.begin(), diagram.branches.end(),
                   [](const SpectrumBranch& x, const SpectrumBranch& y) {
                     const auto& a = x.samples.front();
                     const auto& b = y.samples.front();
                     return std::tie(a.theta, a.action, a.params) < std::tie(b.theta, b.action, b.params);
                   });
  for (std::size_t b = 0; b < diagram.branches.size(); ++b) diagram.branches[b].id = static_cast<int>(b);

  // Deterministic subset of grid points for the completeness cross-check.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937 rng(options.check_seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto count = static_cast<std::size_t>(std::ceil(options.check_fraction * static_cast<double>(n)));
  order.resize(std::min(n, count));
  std::sort(order.begin(), order.end());
  for (std::size_t i : order) diagram.consistency.checked_thetas.push_back(grid[i]);
  diagram.consistency.mismatches = check_diagram_consistency(curve, diagram, order, options);
  if (diagram.consistency.mismatches > 0) {
    diagram.log.push_back("consistency check: " + std::to_string(diagram.consistency.mismatches) + " mismatches");
  }
  return diagram;
}

int check_diagram_consistency(const JordanCurve& curve, const SpectrumDiagram& diagram,
                              const std::vector<std::size_t>& indices, const SweepOptions& options) {
  std::vector<int> per(indices.size(), 0);
  parallel_for(indices.size(), [&](std::size_t k) {
    const std::size_t i = indices[k];
    const auto solved = find_rectangles(curve, diagram.theta_grid[i], options.grid_n, options.tol);
    const auto col = diagram.column(i);
    std::vector<bool> used(col.size(), false);
    int bad = 0;
    for (const auto& r : solved) {
      bool found = false;
      for (std::size_t j = 0; j < col.size(); ++j) {
        if (!used[j] && generator_distance(r.params, col[j].second.params) <= 1e-8) {
          used[j] = true;
          found = true;
          break;
        }
      }
      if (!found) ++bad;
    }
    bad += static_cast<int>(std::count(used.begin(), used.end(), false));
    per[k] = bad;
  });
  return std::accumulate(per.begin(), per.end(), 0);
}

}  // namespace peglab
