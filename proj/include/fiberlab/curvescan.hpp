#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fiberlab/exactpoly.hpp"

namespace fiberlab {

struct ScanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double xmin = -20, xmax = 20, ymin = -20, ymax = 20;
    int resolution = 2048;       // cells per axis, >= 64
    int refinement_depth = 20;   // recursive cell subdivision limit
};

struct CurveComponent {
    enum class Boundedness { ClosedLoop, BoundaryArc };
    int id = 0;
    Boundedness boundedness = Boundedness::BoundaryArc;
    std::vector<std::array<double, 2>> points;  // ordered polyline
};

struct FiberScanReport {
    double t = 0;            // requested level
    double t_effective = 0;  // after deterministic micro-perturbation, if any
    bool perturbed = false;
    GridSpec grid;
    std::vector<CurveComponent> components;
    int chi = 0;  // = number of BoundaryArc components
    int singular_cell_warnings = 0;
};

/// Trace the level set p = t inside the grid box. Crossings of the level set
/// with every grid line are located as univariate roots of the restricted
/// polynomial (exact restriction coefficients, floating root refinement);
/// cells whose boundary carries more than two crossings are subdivided
/// recursively. If a grid line lies inside the level set or a crossing hits a
/// grid node, t is perturbed once by 1e-12.
FiberScanReport extract_level_set(const ExactPoly& p, double t, const GridSpec& grid);

struct ChiConstancy {
    bool constant = true;
    int first_violation = -1;  // index of the first report whose chi differs
    std::vector<int> chis;
};

ChiConstancy chi_constancy(std::span<const FiberScanReport> reports);

struct TrackFlag {
    enum class Kind { Vanishing, Splitting };
    Kind kind;
    int step = 0;                     // index k of the report where the event is seen
    std::vector<int> component_ids;   // ids in report k
    std::string detail;
};

struct SequenceDiagnosis {
    std::vector<double> ts;
    double inner_window_fraction = 0.8;
    /// match[k-1][c] = id of the component of report k-1 matched by component
    /// c of report k, or -1 when report k-1 has no components.
    std::vector<std::vector<int>> match;
    std::vector<TrackFlag> flags;
    std::vector<std::string> warnings;
};

/// Heuristic component tracking across a parameter sequence. Components of
/// consecutive reports are matched by one-sided Hausdorff distance on
/// subsampled polylines; VANISHING fires when a family's intersection with
/// the inner window (box scaled by inner_window_fraction) becomes empty while
/// the family persists in the outer ring, SPLITTING when one family acquires
/// several successors separating inside the outer ring, or when its
/// inner-window piece count jumps from one to several.
SequenceDiagnosis track_components(std::span<const FiberScanReport> reports,
                                   double inner_window_fraction = 0.8);

struct BifurcationVerdict {
    std::string verdict;  // "NOT-TRIVIAL-EVIDENCE" or "NO-OBSTRUCTION-FOUND"
    std::string rationale;
};

/// NOT-TRIVIAL-EVIDENCE when chi is non-constant or a vanishing family was
/// flagged; NO-OBSTRUCTION-FOUND otherwise (which is not a triviality proof).
BifurcationVerdict diagnose_bifurcation(const SequenceDiagnosis& diag, const ChiConstancy& chi);

/// CSV rows "component_id,x,y".
void write_components_csv(std::ostream& os, const FiberScanReport& report);

}  // namespace fiberlab
