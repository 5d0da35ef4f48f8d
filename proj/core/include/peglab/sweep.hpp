#pragma once

#include <string>
#include <utility>
#include <vector>

#include "peglab/action.hpp"
#include "peglab/inscribe.hpp"

namespace peglab {

enum class BranchEvent { None, Birth, Death };

/// How a branch ends: at the theta range, at a fold, at a node that could not
/// be followed further (Morse-Bott families), or at the step floor.
enum class EndKind { Boundary, Fold, Open, Stalled };

const char* to_string(BranchEvent e) noexcept;
const char* to_string(EndKind e) noexcept;

struct BranchSample {
  double theta = 0.0;
  Quad params{};
  double action = 0.0;
  double rad = 0.0;
  BranchEvent event = BranchEvent::None;
  /// Index into the diagram's theta grid; -1 for fold points and other
  /// samples produced by continuation.
  int grid_index = -1;
};

struct SpectrumBranch {
  int id = 0;
  /// Increasing theta.
  std::vector<BranchSample> samples;
  EndKind birth = EndKind::Boundary;
  EndKind death = EndKind::Boundary;
};

struct ConsistencyReport {
  std::vector<double> checked_thetas;
  int mismatches = 0;
};

struct SpectrumDiagram {
  std::vector<SpectrumBranch> branches;
  double curve_area = 0.0;
  double curve_rad = 0.0;
  std::vector<double> theta_grid;
  ConsistencyReport consistency;
  /// Ambiguous matches, continuation outcomes and other notes, in order.
  std::vector<std::string> log;

  /// Branch samples at grid index i as (branch id, sample).
  std::vector<std::pair<int, BranchSample>> column(std::size_t i) const;
};

struct ContinuationOptions {
  double step = 0.02;
  double min_step = 1e-6;
  double max_step = 0.1;
  double tol = 1e-10;
  bool compute_action = true;
  int max_points = 20000;
};

/// Pseudo-arclength continuation of the zero set in (theta, s, t, s2, t2)
/// from the seed in both theta directions. Stops at the range ends or at
/// folds; a stalled direction sets EndKind::Stalled instead of throwing.
SpectrumBranch continue_branch(const JordanCurve& curve, const InscribedRectangle& seed,
                               std::pair<double, double> theta_range, const ContinuationOptions& options = {});

struct SweepOptions {
  int grid_n = 64;
  double tol = 1e-10;
  /// Stitch from theta_max down to theta_min. The result must not change.
  bool descending = false;
  /// Fraction of grid points re-solved for the consistency check.
  double check_fraction = 0.1;
  unsigned check_seed = 20240607u;
  ActionOptions action;
};

/// Throws EmptySpectrum when no rectangle is found at any grid theta.
SpectrumDiagram sweep_spectrum(const JordanCurve& curve, double theta_min, double theta_max, int n_steps,
                               const SweepOptions& options = {});

/// Re-solves at the given grid indices and counts nodes that do not match.
int check_diagram_consistency(const JordanCurve& curve, const SpectrumDiagram& diagram,
                              const std::vector<std::size_t>& indices, const SweepOptions& options = {});

}  // namespace peglab
