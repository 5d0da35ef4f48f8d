#pragma once

#include <string>
#include <vector>

#include "peglab/curve.hpp"
#include "peglab/inscribe.hpp"
#include "peglab/shrinkout.hpp"
#include "peglab/spectral.hpp"
#include "peglab/sweep.hpp"

namespace peglab::svg {

/// The curve as one polyline (2048 samples) and, per rectangle, its sides,
/// both diagonals, four vertex markers and the two trajectory arcs. Elegant
/// rectangles also get their two arc-to-curve regions shaded.
std::string curve_figure(const JordanCurve& curve, const std::vector<InscribedRectangle>& rects);

/// Action against theta, one path per branch, birth/death markers, and the
/// selected spectral function drawn on top when given.
std::string spectrum_figure(const SpectrumDiagram& diagram, const SpectralFunction* overlay = nullptr);

/// Target polygon, every approximant, and the tracked rectangle per level.
std::string shrinkout_figure(const ApproximationRun& run);

}  // namespace peglab::svg
