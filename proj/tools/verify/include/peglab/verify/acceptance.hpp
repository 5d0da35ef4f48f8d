#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "peglab/curve.hpp"
#include "peglab/inscribe.hpp"
#include "peglab/spectral.hpp"
#include "peglab/sweep.hpp"

namespace peglab::verify {

struct CriterionResult {
  int number = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  /// Wall time charged to the criterion, including shared sweeps it uses.
  double seconds = 0.0;
};

struct AcceptanceOptions {
  int sweep_steps = 128;
  double theta_min = 0.1;
  double theta_max = kPi - 0.1;
  int oracle_grid = 512;
  /// Seed grid for the oracle comparison. Sliding families on the smoothed
  /// square are spaced about 0.05 apart in s, finer than a 64 grid resolves.
  int oracle_solver_grid = 128;
};

/// The fixture acceptance criteria. Sweeps and rectangle sets are computed
/// once and shared between criteria.
class AcceptanceSuite {
 public:
  explicit AcceptanceSuite(AcceptanceOptions options = {});

  CriterionResult circle_law();
  CriterionResult ellipse_square();
  CriterionResult ellipse_binormals();
  CriterionResult spectral_properties();
  CriterionResult inscription_intervals();
  CriterionResult action_cross_validation();
  CriterionResult capping_invariants();
  CriterionResult no_shrinkout();
  CriterionResult oracle_equivalence();

  std::vector<CriterionResult> run_all();

 private:
  struct SweepRecord {
    JordanCurve curve;
    SpectrumDiagram diagram;
    SpectralFunction ell;
    double seconds = 0.0;
  };
  struct RectangleSet {
    JordanCurve curve;
    std::vector<InscribedRectangle> rects;
  };

  const SweepRecord& sweep(const std::string& fixture);
  const std::vector<RectangleSet>& fixture_rectangles();

  AcceptanceOptions options_;
  std::map<std::string, SweepRecord> sweeps_;
  std::optional<std::vector<RectangleSet>> rectangles_;
};

/// One line: "AC<n> PASS|FAIL <title> (<seconds> s): <detail>".
std::string format_line(const CriterionResult& r);

}  // namespace peglab::verify
