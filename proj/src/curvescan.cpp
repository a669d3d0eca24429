#include "fiberlab/curvescan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <unordered_map>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace fiberlab {

namespace {

struct DTerm {
    double c;
    uint32_t ex, ey;
};

struct QTerm {
    Rational c;
    uint32_t ex, ey;
};

double eval_terms(const std::vector<DTerm>& terms, double x, double y) {
    double s = 0;
    for (const auto& t : terms) {
        double v = t.c;
        for (uint32_t k = 0; k < t.ex; ++k) v *= x;
        for (uint32_t k = 0; k < t.ey; ++k) v *= y;
        s += v;
    }
    return s;
}

/// Real roots of a univariate polynomial (ascending coefficients) inside
/// [lo, hi]: companion-matrix eigenvalues refined by Newton iteration.
/// Near-double candidates that merge without a sign change are dropped and
/// counted as tangencies.
struct RootResult {
    std::vector<double> roots;
    int tangency_drops = 0;
};

RootResult real_roots(std::vector<double> c, double lo, double hi) {
    RootResult out;
    double maxc = 0;
    for (double v : c) maxc = std::max(maxc, std::abs(v));
    if (maxc == 0) return out;
    int d = static_cast<int>(c.size()) - 1;
    while (d > 0 && std::abs(c[d]) <= 1e-14 * maxc) --d;
    if (d == 0) return out;

    auto f = [&](double x) {
        double s = 0;
        for (int k = d; k >= 0; --k) s = s * x + c[k];
        return s;
    };
    auto fp = [&](double x) {
        double s = 0;
        for (int k = d; k >= 1; --k) s = s * x + c[k] * k;
        return s;
    };

    std::vector<double> cand;
    if (d == 1) {
        cand.push_back(-c[0] / c[1]);
    } else {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d, d);
        for (int k = 0; k < d; ++k) M(k, d - 1) = -c[k] / c[d];
        for (int k = 1; k < d; ++k) M(k, k - 1) = 1.0;
        Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/false);
        for (int k = 0; k < d; ++k) {
            std::complex<double> ev = es.eigenvalues()[k];
            if (std::abs(ev.imag()) <= 1e-5 * (1.0 + std::abs(ev.real())))
                cand.push_back(ev.real());
        }
    }

    // Keep pad below the micro-perturbation scale: a root pushed just outside
    // the range by the t-perturbation must be dropped, not clamped back onto a
    // boundary node.
    double pad = 1e-13 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
    std::vector<double> polished;
    for (double x : cand) {
        if (x < lo - 0.05 * (hi - lo) || x > hi + 0.05 * (hi - lo)) continue;
        for (int it = 0; it < 80; ++it) {
            double der = fp(x);
            if (der == 0) break;
            double step = f(x) / der;
            x -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
        }
        if (x < lo - pad || x > hi + pad) continue;
        // Reject points where the value is clearly above the evaluation noise.
        double noise = 0, m = 1;
        for (int k = 0; k <= d; ++k) {
            noise += std::abs(c[k]) * m;
            m *= std::abs(x);
        }
        if (std::abs(f(x)) > 1e-7 * (noise + 1e-300) + 1e-250) continue;
        polished.push_back(x);
    }
    std::sort(polished.begin(), polished.end());
    // Merge clusters; clusters of even size without a sign change are
    // tangencies (the curve touches the line without crossing).
    double mergetol = 1e-10 * (1.0 + hi - lo);
    std::size_t i = 0;
    while (i < polished.size()) {
        std::size_t j = i + 1;
        while (j < polished.size() && polished[j] - polished[j - 1] < mergetol) ++j;
        std::size_t count = j - i;
        double r = polished[(i + j - 1) / 2];
        // Every reported root must witness a sign change: this screens out
        // tangencies (even clusters) and phantom roots minted from complex
        // pairs with small imaginary parts, both of which would break the
        // crossing parity of a cell.
        double h = count == 1 ? 8 * mergetol : std::max(1e-7 * (hi - lo), 64 * mergetol);
        double a = f(std::max(lo, r - h)), b = f(std::min(hi, r + h));
        if ((a < 0) != (b < 0))
            out.roots.push_back(r);
        else
            ++out.tangency_drops;
        i = j;
    }
    return out;
}

struct Crossing {
    double x, y;
    bool boundary;
};

class Extractor {
public:
    Extractor(const ExactPoly& p, double t, const GridSpec& g) : g_(g), t_(t) {
        if (g.resolution < 64) throw ScanError("resolution must be at least 64");
        if (!(g.xmax > g.xmin) || !(g.ymax > g.ymin)) throw ScanError("degenerate box");
        if (p.vars().size() != 2) throw ScanError("level-set polynomial must have 2 variables");
        if (!p.is_real()) throw ScanError("level-set polynomial must be real");
        for (const auto& term : p.terms())
            qterms_.push_back({term.coeff.re, term.exps[0], term.exps[1]});
    }

    FiberScanReport run() {
        if (!attempt(t_)) {
            // Deterministic micro-perturbation and one retry.
            reset();
            if (!attempt(t_ + 1e-12))
                throw ScanError("degenerate grid incidences persist after perturbation");
            perturbed_ = true;
        }
        process_cells();
        return assemble();
    }

private:
    GridSpec g_;
    double t_;
    double t_eff_ = 0;
    bool perturbed_ = false;
    std::vector<QTerm> qterms_;
    std::vector<DTerm> dterms_, dpx_, dpy_;
    std::vector<Rational> xq_, yq_;
    std::vector<double> xd_, yd_;
    std::vector<Crossing> crossings_;
    std::vector<std::pair<int, int>> segments_;
    std::unordered_map<long long, std::vector<int>> cells_;
    int warnings_ = 0;

    void reset() {
        crossings_.clear();
        segments_.clear();
        cells_.clear();
        warnings_ = 0;
        dterms_.clear();
        dpx_.clear();
        dpy_.clear();
        xq_.clear();
        yq_.clear();
        xd_.clear();
        yd_.clear();
    }

    long long cell_key(int i, int j) const {
        return static_cast<long long>(i) * (g_.resolution + 1) + j;
    }

    // Exact restriction of p - t along a fixed exact coordinate; axis 0 fixes
    // x, axis 1 fixes y. Ascending coefficients of the free variable.
    std::vector<Rational> exact_restriction(int axis, const Rational& fixed,
                                            const Rational& tq) const {
        uint32_t deg = 0;
        for (const auto& t : qterms_) deg = std::max(deg, axis == 0 ? t.ey : t.ex);
        std::vector<Rational> coeffs(deg + 1, Rational(0));
        for (const auto& t : qterms_) {
            uint32_t fixed_exp = axis == 0 ? t.ex : t.ey;
            uint32_t free_exp = axis == 0 ? t.ey : t.ex;
            Rational pw(1);
            for (uint32_t k = 0; k < fixed_exp; ++k) pw *= fixed;
            coeffs[free_exp] += t.c * pw;
        }
        coeffs[0] -= tq;
        return coeffs;
    }

    std::vector<double> double_restriction(int axis, double fixed, double t_eff) const {
        uint32_t deg = 0;
        for (const auto& t : dterms_) deg = std::max(deg, axis == 0 ? t.ey : t.ex);
        std::vector<double> coeffs(deg + 1, 0.0);
        for (const auto& t : dterms_) {
            uint32_t fixed_exp = axis == 0 ? t.ex : t.ey;
            uint32_t free_exp = axis == 0 ? t.ey : t.ex;
            double pw = 1;
            for (uint32_t k = 0; k < fixed_exp; ++k) pw *= fixed;
            coeffs[free_exp] += t.c * pw;
        }
        coeffs[0] -= t_eff;
        return coeffs;
    }

    int add_crossing(double x, double y, bool boundary) {
        crossings_.push_back({x, y, boundary});
        return static_cast<int>(crossings_.size()) - 1;
    }

    // Returns false when a degenerate incidence asks for a perturbation of t.
    bool attempt(double t_eff) {
        t_eff_ = t_eff;
        const int res = g_.resolution;
        Rational xmin(g_.xmin), xmax(g_.xmax), ymin(g_.ymin), ymax(g_.ymax);
        Rational wq = (xmax - xmin) / res, hq = (ymax - ymin) / res;
        Rational tq(t_eff);
        for (int i = 0; i <= res; ++i) {
            xq_.push_back(xmin + wq * i);
            xd_.push_back(xq_.back().get_d());
            yq_.push_back(ymin + hq * i);
            yd_.push_back(yq_.back().get_d());
        }
        for (const auto& t : qterms_) dterms_.push_back({t.c.get_d(), t.ex, t.ey});
        for (const auto& t : dterms_) {
            if (t.ex > 0) dpx_.push_back({t.c * t.ex, t.ex - 1, t.ey});
            if (t.ey > 0) dpy_.push_back({t.c * t.ey, t.ex, t.ey - 1});
        }

        for (int axis = 0; axis < 2; ++axis) {
            const auto& fixed_q = axis == 0 ? xq_ : yq_;
            const auto& fixed_d = axis == 0 ? xd_ : yd_;
            const auto& free_d = axis == 0 ? yd_ : xd_;
            double flo = axis == 0 ? g_.ymin : g_.xmin;
            double fhi = axis == 0 ? g_.ymax : g_.xmax;
            for (int i = 0; i <= res; ++i) {
                auto eq = exact_restriction(axis, fixed_q[i], tq);
                bool all_zero = true;
                std::vector<double> dc(eq.size());
                for (std::size_t k = 0; k < eq.size(); ++k) {
                    if (eq[k] != 0) all_zero = false;
                    dc[k] = eq[k].get_d();
                }
                if (all_zero) return false;  // a grid line lies inside the level set
                RootResult rr = real_roots(dc, flo, fhi);
                warnings_ += rr.tangency_drops;
                for (double r : rr.roots) {
                    // Node hit: the crossing coincides with a grid node.
                    int jn = static_cast<int>(std::lround((r - flo) / ((fhi - flo) / res)));
                    jn = std::clamp(jn, 0, res);
                    if (std::abs(r - free_d[jn]) < 1e-13) return false;
                    int j = std::clamp(static_cast<int>((r - flo) / ((fhi - flo) / res)), 0,
                                       res - 1);
                    bool boundary = (i == 0 || i == res);
                    int id = axis == 0 ? add_crossing(fixed_d[i], r, boundary)
                                       : add_crossing(r, fixed_d[i], boundary);
                    if (axis == 0) {  // vertical line x = x_i, cells (i-1,j),(i,j)
                        if (i > 0) cells_[cell_key(i - 1, j)].push_back(id);
                        if (i < res) cells_[cell_key(i, j)].push_back(id);
                    } else {  // horizontal line y = y_i, cells (j,i-1),(j,i)
                        if (i > 0) cells_[cell_key(j, i - 1)].push_back(id);
                        if (i < res) cells_[cell_key(j, i)].push_back(id);
                    }
                }
            }
        }
        return true;
    }

    std::vector<int> midline_crossings(int axis, double fixed, double lo, double hi) {
        std::vector<int> ids;
        RootResult rr = real_roots(double_restriction(axis, fixed, t_eff_), lo, hi);
        warnings_ += rr.tangency_drops;
        for (double r : rr.roots) {
            if (r - lo < 1e-13 || hi - r < 1e-13) {
                ++warnings_;  // midline root at a cell corner: skip
                continue;
            }
            ids.push_back(axis == 0 ? add_crossing(fixed, r, false)
                                    : add_crossing(r, fixed, false));
        }
        return ids;
    }

    void emit_fallback(double x0, double x1, double y0, double y1, std::vector<int>& ids) {
        // Depth exhausted: pair crossings in perimeter order around the center.
        double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
        std::sort(ids.begin(), ids.end(), [&](int a, int b) {
            return std::atan2(crossings_[a].y - cy, crossings_[a].x - cx) <
                   std::atan2(crossings_[b].y - cy, crossings_[b].x - cx);
        });
        for (std::size_t k = 0; k + 1 < ids.size(); k += 2)
            segments_.emplace_back(ids[k], ids[k + 1]);
        ++warnings_;
    }

    // Four crossings split 2+2 over one pair of opposite edges: either two
    // near-parallel strands traverse the cell or two turning arcs face each
    // other. Both non-crossing pairings are compared by the level residual at
    // their chord midpoints; the true chords hug the curve while the false
    // ones bridge the inter-strand gap. Deciding here spares a recursion all
    // the way down to the strand-gap scale.
    bool try_pair_strands(double x0, double x1, double y0, double y1,
                          const std::vector<int>& ids) {
        double ex = 1e-9 * (x1 - x0), ey = 1e-9 * (y1 - y0);
        std::vector<int> lo_side, hi_side;
        bool vertical_pair = true, horizontal_pair = true;
        for (int id : ids) {
            const Crossing& c = crossings_[id];
            if (std::abs(c.x - x0) < ex)
                lo_side.push_back(id);
            else if (std::abs(c.x - x1) < ex)
                hi_side.push_back(id);
            else
                vertical_pair = false;
        }
        if (!vertical_pair || lo_side.size() != 2) {
            lo_side.clear();
            hi_side.clear();
            for (int id : ids) {
                const Crossing& c = crossings_[id];
                if (std::abs(c.y - y0) < ey)
                    lo_side.push_back(id);
                else if (std::abs(c.y - y1) < ey)
                    hi_side.push_back(id);
                else
                    horizontal_pair = false;
            }
            if (!horizontal_pair || lo_side.size() != 2) return false;
            vertical_pair = false;
        }
        auto along = [&](int id) {
            return vertical_pair ? crossings_[id].y : crossings_[id].x;
        };
        if (along(lo_side[0]) > along(lo_side[1])) std::swap(lo_side[0], lo_side[1]);
        if (along(hi_side[0]) > along(hi_side[1])) std::swap(hi_side[0], hi_side[1]);
        auto chord_residual = [&](int a, int b) {
            double mx = 0.5 * (crossings_[a].x + crossings_[b].x);
            double my = 0.5 * (crossings_[a].y + crossings_[b].y);
            return std::abs(eval_terms(dterms_, mx, my) - t_eff_);
        };
        double cross = std::max(chord_residual(lo_side[0], hi_side[0]),
                                chord_residual(lo_side[1], hi_side[1]));
        double same = std::max(chord_residual(lo_side[0], lo_side[1]),
                               chord_residual(hi_side[0], hi_side[1]));
        if (cross < 0.25 * same) {
            segments_.emplace_back(lo_side[0], hi_side[0]);
            segments_.emplace_back(lo_side[1], hi_side[1]);
            return true;
        }
        if (same < 0.25 * cross) {
            segments_.emplace_back(lo_side[0], lo_side[1]);
            segments_.emplace_back(hi_side[0], hi_side[1]);
            return true;
        }
        return false;  // ambiguous: keep subdividing
    }

    void subdivide(double x0, double x1, double y0, double y1, std::vector<int> ids,
                   int depth) {
        if (ids.size() == 1) {
            ++warnings_;  // dangling crossing: leaves a chain endpoint
            return;
        }
        if (ids.size() == 2) {
            segments_.emplace_back(ids[0], ids[1]);
            return;
        }
        if (ids.size() < 2) return;
        if (ids.size() == 4 && try_pair_strands(x0, x1, y0, y1, ids)) return;
        if (depth <= 0) {
            emit_fallback(x0, x1, y0, y1, ids);
            return;
        }
        double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
        auto vmid = midline_crossings(0, xm, y0, y1);
        auto hmid = midline_crossings(1, ym, x0, x1);
        ids.insert(ids.end(), vmid.begin(), vmid.end());
        ids.insert(ids.end(), hmid.begin(), hmid.end());
        std::vector<int> child[2][2];
        for (int id : ids) {
            const Crossing& c = crossings_[id];
            if (c.x == xm && c.y == ym) {
                ++warnings_;  // crossing at the exact center: drop
                continue;
            }
            bool left = c.x <= xm, right = c.x >= xm;
            bool low = c.y <= ym, high = c.y >= ym;
            if (left && low) child[0][0].push_back(id);
            if (right && low) child[1][0].push_back(id);
            if (left && high) child[0][1].push_back(id);
            if (right && high) child[1][1].push_back(id);
        }
        subdivide(x0, xm, y0, ym, std::move(child[0][0]), depth - 1);
        subdivide(xm, x1, y0, ym, std::move(child[1][0]), depth - 1);
        subdivide(x0, xm, ym, y1, std::move(child[0][1]), depth - 1);
        subdivide(xm, x1, ym, y1, std::move(child[1][1]), depth - 1);
    }

    void process_cells() {
        for (auto& [key, ids] : cells_) {
            int i = static_cast<int>(key / (g_.resolution + 1));
            int j = static_cast<int>(key % (g_.resolution + 1));
            if (ids.size() == 1) {
                ++warnings_;
                continue;
            }
            if (ids.size() == 2) {
                segments_.emplace_back(ids[0], ids[1]);
                continue;
            }
            subdivide(xd_[i], xd_[i + 1], yd_[j], yd_[j + 1], ids, g_.refinement_depth);
        }
    }

    FiberScanReport assemble() {
        FiberScanReport rep;
        rep.t = t_;
        rep.t_effective = t_eff_;
        rep.perturbed = perturbed_;
        rep.grid = g_;

        // Gradient screen at every crossing.
        for (const Crossing& c : crossings_) {
            double gx = eval_terms(dpx_, c.x, c.y), gy = eval_terms(dpy_, c.x, c.y);
            if (std::hypot(gx, gy) < 1e-8) ++warnings_;
        }

        std::vector<std::vector<std::pair<int, int>>> adj(crossings_.size());
        for (std::size_t s = 0; s < segments_.size(); ++s) {
            adj[segments_[s].first].emplace_back(segments_[s].second, static_cast<int>(s));
            adj[segments_[s].second].emplace_back(segments_[s].first, static_cast<int>(s));
        }
        std::vector<bool> used(segments_.size(), false);

        auto trace = [&](int start) {
            std::vector<int> chain{start};
            int cur = start;
            for (;;) {
                int next = -1;
                for (auto [nb, seg] : adj[cur])
                    if (!used[seg]) {
                        used[seg] = true;
                        next = nb;
                        break;
                    }
                if (next < 0) break;
                chain.push_back(next);
                cur = next;
            }
            return chain;
        };

        std::vector<std::vector<int>> chains;
        for (std::size_t k = 0; k < crossings_.size(); ++k)
            if (adj[k].size() % 2 == 1) {
                bool open = false;
                for (auto [nb, seg] : adj[k]) open |= !used[seg];
                if (open) chains.push_back(trace(static_cast<int>(k)));
            }
        for (std::size_t k = 0; k < crossings_.size(); ++k) {
            bool open = false;
            for (auto [nb, seg] : adj[k]) open |= !used[seg];
            if (open) chains.push_back(trace(static_cast<int>(k)));  // cycles
        }

        int next_id = 0;
        for (auto& chain : chains) {
            if (chain.size() < 2) continue;
            CurveComponent comp;
            comp.id = next_id++;
            bool closed = chain.front() == chain.back() && chain.size() > 2;
            bool ends_on_boundary =
                crossings_[chain.front()].boundary && crossings_[chain.back()].boundary;
            if (closed) {
                comp.boundedness = CurveComponent::Boundedness::ClosedLoop;
                chain.pop_back();
                if (chain.size() < 4)
                    throw ScanError("resolution too coarse: closed loop below 4 samples");
            } else {
                comp.boundedness = CurveComponent::Boundedness::BoundaryArc;
                if (!ends_on_boundary) ++warnings_;  // dangling endpoint artifact
            }
            for (int id : chain) comp.points.push_back({crossings_[id].x, crossings_[id].y});
            rep.components.push_back(std::move(comp));
        }
        // Deterministic order: by first point, lexicographic.
        std::sort(rep.components.begin(), rep.components.end(),
                  [](const CurveComponent& a, const CurveComponent& b) {
                      return a.points.front() < b.points.front();
                  });
        for (std::size_t k = 0; k < rep.components.size(); ++k)
            rep.components[k].id = static_cast<int>(k);

        rep.chi = 0;
        for (const auto& c : rep.components)
            if (c.boundedness == CurveComponent::Boundedness::BoundaryArc) ++rep.chi;
        rep.singular_cell_warnings = warnings_;
        long long cell_budget =
            static_cast<long long>(g_.resolution) * g_.resolution / 100 + 64;
        if (warnings_ > cell_budget) throw ScanError("pervasive singular cells");
        return rep;
    }
};

}  // namespace

FiberScanReport extract_level_set(const ExactPoly& p, double t, const GridSpec& grid) {
    return Extractor(p, t, grid).run();
}

ChiConstancy chi_constancy(std::span<const FiberScanReport> reports) {
    if (reports.size() < 2) {
        ChiConstancy c;
        for (const auto& r : reports) c.chis.push_back(r.chi);
        return c;
    }
    ChiConstancy c;
    for (const auto& r : reports) c.chis.push_back(r.chi);
    for (std::size_t k = 1; k < reports.size(); ++k)
        if (c.chis[k] != c.chis[0]) {
            c.constant = false;
            c.first_violation = static_cast<int>(k);
            break;
        }
    return c;
}

namespace {

std::vector<std::array<double, 2>> subsample(const CurveComponent& c, std::size_t cap = 1000) {
    std::vector<std::array<double, 2>> out;
    std::size_t stride = std::max<std::size_t>(1, c.points.size() / cap);
    for (std::size_t k = 0; k < c.points.size(); k += stride) out.push_back(c.points[k]);
    return out;
}

double one_sided_hausdorff(const std::vector<std::array<double, 2>>& a,
                           const std::vector<std::array<double, 2>>& b) {
    double h = 0;
    for (const auto& p : a) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& q : b)
            m = std::min(m, std::hypot(p[0] - q[0], p[1] - q[1]));
        h = std::max(h, m);
    }
    return h;
}

}  // namespace

SequenceDiagnosis track_components(std::span<const FiberScanReport> reports,
                                   double inner_window_fraction) {
    if (reports.size() < 2) throw ScanError("tracking needs at least two reports");
    SequenceDiagnosis diag;
    diag.inner_window_fraction = inner_window_fraction;
    for (const auto& r : reports) diag.ts.push_back(r.t);

    const GridSpec& g = reports[0].grid;
    double cx = 0.5 * (g.xmin + g.xmax), cy = 0.5 * (g.ymin + g.ymax);
    double hwx = 0.5 * (g.xmax - g.xmin) * inner_window_fraction;
    double hwy = 0.5 * (g.ymax - g.ymin) * inner_window_fraction;
    auto inside = [&](const std::array<double, 2>& p) {
        return std::abs(p[0] - cx) <= hwx && std::abs(p[1] - cy) <= hwy;
    };
    auto inner_pieces = [&](const CurveComponent& c) {
        int pieces = 0;
        bool in_run = false;
        for (const auto& p : c.points) {
            bool in = inside(p);
            if (in && !in_run) ++pieces;
            in_run = in;
        }
        return pieces;
    };

    std::vector<std::vector<std::vector<std::array<double, 2>>>> samples(reports.size());
    for (std::size_t k = 0; k < reports.size(); ++k)
        for (const auto& c : reports[k].components) samples[k].push_back(subsample(c));

    for (std::size_t k = 1; k < reports.size(); ++k) {
        const auto& prev = reports[k - 1];
        const auto& cur = reports[k];
        std::vector<int> match(cur.components.size(), -1);
        for (std::size_t c = 0; c < cur.components.size(); ++c) {
            double best = std::numeric_limits<double>::infinity();
            int best_o = -1;
            for (std::size_t o = 0; o < prev.components.size(); ++o) {
                double h = one_sided_hausdorff(samples[k][c], samples[k - 1][o]);
                if (h < best - 1e-6) {
                    best = h;
                    best_o = static_cast<int>(o);
                } else if (std::abs(h - best) <= 1e-6 && best_o >= 0) {
                    diag.warnings.push_back("ambiguous match at step " + std::to_string(k) +
                                            " for component " + std::to_string(c) +
                                            "; keeping lowest id");
                    if (static_cast<int>(o) < best_o) best_o = static_cast<int>(o);
                }
            }
            match[c] = best_o;
        }
        diag.match.push_back(match);

        for (std::size_t o = 0; o < prev.components.size(); ++o) {
            std::vector<int> children;
            for (std::size_t c = 0; c < cur.components.size(); ++c)
                if (match[c] == static_cast<int>(o)) children.push_back(static_cast<int>(c));
            int o_in = inner_pieces(prev.components[o]);
            if (children.empty()) {
                diag.flags.push_back({TrackFlag::Kind::Vanishing, static_cast<int>(k),
                                      {static_cast<int>(o)},
                                      "family (id in previous report) has no successor in the box; "
                                      "inner_window_fraction=" +
                                          std::to_string(inner_window_fraction)});
                continue;
            }
            if (children.size() == 1) {
                const CurveComponent& c = cur.components[children[0]];
                int c_in = inner_pieces(c);
                if (o_in > 0 && c_in == 0 && !c.points.empty()) {
                    diag.flags.push_back({TrackFlag::Kind::Vanishing, static_cast<int>(k),
                                          {c.id},
                                          "family left the inner window while persisting in the "
                                          "outer ring; inner_window_fraction=" +
                                              std::to_string(inner_window_fraction)});
                } else if (o_in == 1 && c_in >= 2) {
                    diag.flags.push_back({TrackFlag::Kind::Splitting, static_cast<int>(k),
                                          {c.id},
                                          "inner-window piece count rose from 1 to " +
                                              std::to_string(c_in) +
                                              " while the family stays connected through the "
                                              "ring; inner_window_fraction=" +
                                              std::to_string(inner_window_fraction)});
                }
                continue;
            }
            // Several successors: find the closest approach between them.
            double best = std::numeric_limits<double>::infinity();
            std::array<double, 2> pa{}, pb{};
            for (std::size_t a = 0; a < children.size(); ++a)
                for (std::size_t b = a + 1; b < children.size(); ++b)
                    for (const auto& p : samples[k][children[a]])
                        for (const auto& q : samples[k][children[b]]) {
                            double dd = std::hypot(p[0] - q[0], p[1] - q[1]);
                            if (dd < best) {
                                best = dd;
                                pa = p;
                                pb = q;
                            }
                        }
            if (!inside(pa) || !inside(pb)) {
                diag.flags.push_back({TrackFlag::Kind::Splitting, static_cast<int>(k), children,
                                      "one family has " + std::to_string(children.size()) +
                                          " successors separating in the outer ring; "
                                          "inner_window_fraction=" +
                                          std::to_string(inner_window_fraction)});
            } else {
                diag.warnings.push_back("family split inside the inner window at step " +
                                        std::to_string(k) + " (not flagged)");
            }
        }
    }
    return diag;
}

BifurcationVerdict diagnose_bifurcation(const SequenceDiagnosis& diag, const ChiConstancy& chi) {
    bool vanishing = false;
    for (const auto& f : diag.flags)
        if (f.kind == TrackFlag::Kind::Vanishing) vanishing = true;
    if (!chi.constant || vanishing) {
        std::string why;
        if (!chi.constant)
            why += "Euler characteristic changes at report index " +
                   std::to_string(chi.first_violation) + ". ";
        if (vanishing) why += "A component family vanishes toward the box boundary.";
        return {"NOT-TRIVIAL-EVIDENCE", why};
    }
    return {"NO-OBSTRUCTION-FOUND",
            "No chi change and no vanishing family detected at the sampled parameters; this does "
            "not prove local triviality."};
}

void write_components_csv(std::ostream& os, const FiberScanReport& report) {
    os << "component_id,x,y\n";
    auto flags = os.flags();
    auto prec = os.precision(std::numeric_limits<double>::max_digits10);
    for (const auto& c : report.components)
        for (const auto& p : c.points)
            os << c.id << "," << p[0] << "," << p[1] << "\n";
    os.flags(flags);
    os.precision(prec);
}

}  // namespace fiberlab
