#include "qcoalg/minimize.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace qcoalg {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Isometric embedding of d x d Hermitian matrices into R^{d^2} under the
// Hilbert-Schmidt inner product: diagonal first, then sqrt(2) * (Re, Im) of
// each strictly upper entry in row-major order.
Eigen::VectorXd herm_to_vec(const CMatrix& m) {
    const std::size_t d = m.rows();
    Eigen::VectorXd v(static_cast<Eigen::Index>(d * d));
    Eigen::Index idx = 0;
    for (std::size_t i = 0; i < d; ++i) v(idx++) = m.at(i, i).real();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            v(idx++) = kSqrt2 * m.at(i, j).real();
            v(idx++) = kSqrt2 * m.at(i, j).imag();
        }
    }
    return v;
}

// k-th Hermitian basis element dual to the embedding above.
CMatrix herm_basis_element(std::size_t d, std::size_t k) {
    CMatrix m(d, d);
    if (k < d) {
        m.at(k, k) = 1.0;
        return m;
    }
    std::size_t rest = k - d;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            if (rest == 0) {
                m.at(i, j) = Complex(1.0 / kSqrt2, 0.0);
                m.at(j, i) = Complex(1.0 / kSqrt2, 0.0);
                return m;
            }
            if (rest == 1) {
                m.at(i, j) = Complex(0.0, 1.0 / kSqrt2);
                m.at(j, i) = Complex(0.0, -1.0 / kSqrt2);
                return m;
            }
            rest -= 2;
        }
    }
    throw ShapeError("herm_basis_element: index out of range");
}

// Any system whose states live in R^n with affine per-letter transitions and
// an affine observation map. Quantum systems embed here via herm_to_vec.
struct AffineSys {
    std::size_t n = 0;
    Eigen::VectorXd p0;
    std::vector<std::string> letters;        // sorted
    std::vector<Eigen::MatrixXd> linear;     // per letter
    std::vector<Eigen::VectorXd> offset;     // per letter
    Eigen::MatrixXd out_rows;                // |E| x n
    Eigen::VectorXd out_const;               // |E|
    std::vector<std::string> effect_labels;
};

AffineSys from_quantum(const QuantumSystem& sys, const DensityMatrix& rho0) {
    const std::size_t d = sys.dim();
    const std::size_t n = d * d;
    AffineSys a;
    a.n = n;
    a.p0 = herm_to_vec(rho0.matrix());
    for (const auto& [letter, u] : sys.unitaries()) {
        a.letters.push_back(letter);
        Eigen::MatrixXd lin(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        const CMatrix& um = u.matrix();
        const CMatrix ud = dagger(um);
        for (std::size_t k = 0; k < n; ++k) {
            lin.col(static_cast<Eigen::Index>(k)) =
                herm_to_vec(mat_mul(mat_mul(um, herm_basis_element(d, k)), ud));
        }
        a.linear.push_back(std::move(lin));
        a.offset.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)));
    }
    const auto& effects = sys.effects();
    a.out_rows.resize(static_cast<Eigen::Index>(effects.size()), static_cast<Eigen::Index>(n));
    a.out_const = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(effects.size()));
    for (std::size_t i = 0; i < effects.size(); ++i) {
        a.effect_labels.push_back(effects[i].first);
        a.out_rows.row(static_cast<Eigen::Index>(i)) = herm_to_vec(effects[i].second.matrix());
    }
    return a;
}

AffineSys from_realization(const MinimalRealization& m) {
    AffineSys a;
    a.n = m.dim;
    a.p0.resize(static_cast<Eigen::Index>(m.dim));
    for (std::size_t i = 0; i < m.dim; ++i) a.p0(static_cast<Eigen::Index>(i)) = m.initial[i];
    for (const auto& [letter, t] : m.transitions) {
        a.letters.push_back(letter);
        Eigen::MatrixXd lin(static_cast<Eigen::Index>(m.dim), static_cast<Eigen::Index>(m.dim));
        Eigen::VectorXd off(static_cast<Eigen::Index>(m.dim));
        for (std::size_t i = 0; i < m.dim; ++i) {
            off(static_cast<Eigen::Index>(i)) = t.offset[i];
            for (std::size_t j = 0; j < m.dim; ++j)
                lin(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t.matrix[i][j];
        }
        a.linear.push_back(std::move(lin));
        a.offset.push_back(std::move(off));
    }
    const std::size_t ne = m.output.offset.size();
    a.out_rows.resize(static_cast<Eigen::Index>(ne), static_cast<Eigen::Index>(m.dim));
    a.out_const.resize(static_cast<Eigen::Index>(ne));
    for (std::size_t i = 0; i < ne; ++i) {
        a.out_const(static_cast<Eigen::Index>(i)) = m.output.offset[i];
        for (std::size_t j = 0; j < m.dim; ++j)
            a.out_rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m.output.matrix[i][j];
    }
    a.effect_labels = m.effect_labels;
    return a;
}

// Orthonormal basis grown by modified Gram-Schmidt with a relative rank
// threshold against the largest candidate norm seen.
struct SpanBuilder {
    explicit SpanBuilder(std::size_t n)
        : basis(static_cast<Eigen::Index>(n), 0) {}

    Eigen::MatrixXd basis;
    double scale = 0.0;

    bool try_add(Eigen::VectorXd w, double tol) {
        scale = std::max(scale, w.norm());
        if (scale == 0.0) return false;
        for (int pass = 0; pass < 2; ++pass) {
            if (basis.cols() > 0) w -= basis * (basis.transpose() * w);
        }
        if (w.norm() <= tol * scale) return false;
        w.normalize();
        basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
        basis.col(basis.cols() - 1) = w;
        return true;
    }
};

// Smallest subspace containing the seeds and closed under the given linear
// maps. Seeds and images are consumed breadth-first.
void close_under(SpanBuilder& sb, const std::vector<Eigen::MatrixXd>& maps,
                 std::deque<Eigen::VectorXd> seeds, double tol, std::size_t hard_cap,
                 const char* what) {
    std::deque<Eigen::VectorXd> work;
    for (auto& s : seeds) {
        if (sb.try_add(std::move(s), tol)) work.push_back(sb.basis.col(sb.basis.cols() - 1));
    }
    while (!work.empty()) {
        const Eigen::VectorXd v = std::move(work.front());
        work.pop_front();
        for (const auto& m : maps) {
            if (sb.try_add(m * v, tol)) {
                work.push_back(sb.basis.col(sb.basis.cols() - 1));
                if (static_cast<std::size_t>(sb.basis.cols()) > hard_cap) {
                    throw NumericalError(std::string(what) +
                                         " rank did not stabilize within the ambient bound");
                }
            }
        }
    }
}

std::vector<std::vector<double>> to_rows(const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        rows[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(m.cols()));
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    }
    return rows;
}

std::vector<double> to_vec(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

void check_fit_residual(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs, double tol,
                        const char* what) {
    const double scale = std::max({1.0, lhs.size() > 0 ? lhs.cwiseAbs().maxCoeff() : 0.0,
                                   rhs.size() > 0 ? rhs.cwiseAbs().maxCoeff() : 0.0});
    const double resid = (lhs - rhs).size() > 0 ? (lhs - rhs).cwiseAbs().maxCoeff() : 0.0;
    if (resid > tol * scale) {
        std::ostringstream os;
        os.precision(2);
        os << what << " fit residual " << std::scientific << resid
           << " exceeds tolerance; the behaviour is not affine on the computed coordinates";
        throw NumericalError(os.str());
    }
}

MinimalRealization minimize_affine(const AffineSys& sys, double tol) {
    const Eigen::Index n = static_cast<Eigen::Index>(sys.n);

    // Reachable directions: affine hull of the orbit of p0.
    SpanBuilder reach(sys.n);
    {
        std::deque<Eigen::VectorXd> seeds;
        for (std::size_t a = 0; a < sys.letters.size(); ++a) {
            seeds.push_back(sys.linear[a] * sys.p0 + sys.offset[a] - sys.p0);
        }
        close_under(reach, sys.linear, std::move(seeds), tol, sys.n, "reachability");
    }

    // Observable functionals: output rows closed under transposed transitions.
    SpanBuilder obs(sys.n);
    {
        std::vector<Eigen::MatrixXd> transposed;
        transposed.reserve(sys.linear.size());
        for (const auto& m : sys.linear) transposed.push_back(m.transpose());
        std::deque<Eigen::VectorXd> seeds;
        for (Eigen::Index i = 0; i < sys.out_rows.rows(); ++i) {
            seeds.push_back(sys.out_rows.row(i).transpose());
        }
        close_under(obs, transposed, std::move(seeds), tol, sys.n, "observability");
    }

    const Eigen::MatrixXd& D = reach.basis;
    const Eigen::MatrixXd& O = obs.basis;

    // Coordinates: orthonormal basis of the observable projection of the
    // reachable directions.
    Eigen::MatrixXd G(n, 0);
    Eigen::Index r = 0;
    Eigen::MatrixXd T = O.transpose() * D;  // r_O x r_R
    if (T.rows() > 0 && T.cols() > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(T, Eigen::ComputeThinU);
        const auto& sv = svd.singularValues();
        const double cutoff = sv.size() > 0 ? tol * sv(0) : 0.0;
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
            if (sv(i) > cutoff) ++r;
        }
        G = O * svd.matrixU().leftCols(r);
    }

    MinimalRealization out;
    out.dim = static_cast<std::size_t>(r);
    out.initial.assign(static_cast<std::size_t>(r), 0.0);
    out.effect_labels = sys.effect_labels;

    const Eigen::VectorXd c0 = sys.out_rows * sys.p0 + sys.out_const;
    if (r == 0) {
        // Behaviour is constant: a single point with the observations of p0.
        for (const auto& letter : sys.letters) {
            out.transitions.emplace(letter, AffineMap{{}, {}});
        }
        out.output = AffineMap{std::vector<std::vector<double>>(sys.effect_labels.size()),
                               to_vec(c0)};
        return out;
    }

    const Eigen::MatrixXd X = G.transpose() * D;  // r x r_R, full row rank
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> solver(X.transpose());

    for (std::size_t a = 0; a < sys.letters.size(); ++a) {
        const Eigen::MatrixXd Y = G.transpose() * (sys.linear[a] * D);
        Eigen::MatrixXd M = solver.solve(Y.transpose()).transpose();
        check_fit_residual(M * X, Y, tol, "transition");
        const Eigen::VectorXd t = G.transpose() * (sys.linear[a] * sys.p0 + sys.offset[a] - sys.p0);
        out.transitions.emplace(sys.letters[a], AffineMap{to_rows(M), to_vec(t)});
    }

    const Eigen::MatrixXd CD = sys.out_rows * D;  // |E| x r_R
    Eigen::MatrixXd C = solver.solve(CD.transpose()).transpose();
    check_fit_residual(C * X, CD, tol, "output");
    out.output = AffineMap{to_rows(C), to_vec(c0)};
    return out;
}

double inf_dist(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// Extreme points of a finite 2D point set by monotone chain; collinear edge
// points are dropped.
std::vector<std::vector<double>> hull_2d(std::vector<std::vector<double>> pts, double tol) {
    std::sort(pts.begin(), pts.end());
    auto cross = [](const std::vector<double>& o, const std::vector<double>& a,
                    const std::vector<double>& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    if (pts.size() <= 2) return pts;
    std::vector<std::vector<double>> hull;
    for (int half = 0; half < 2; ++half) {
        const std::size_t base = hull.size();
        auto scan = [&](const std::vector<double>& p) {
            while (hull.size() >= base + 2 &&
                   cross(hull[hull.size() - 2], hull[hull.size() - 1], p) <= tol) {
                hull.pop_back();
            }
            hull.push_back(p);
        };
        if (half == 0) {
            for (const auto& p : pts) scan(p);
        } else {
            for (auto it = pts.rbegin(); it != pts.rend(); ++it) scan(*it);
        }
        hull.pop_back();  // endpoint repeats as the start of the other half
    }
    return hull;
}

// p in conv(candidates) tested via Caratheodory subsets of size dim + 1.
bool inside_hull_caratheodory(const std::vector<double>& p,
                              const std::vector<std::vector<double>>& pts, std::size_t skip,
                              std::size_t dim, double tol) {
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i != skip) ids.push_back(i);
    }
    const std::size_t k = dim + 1;
    if (ids.size() < 2) return false;
    // iterate over all index subsets of size min(k, |ids|)
    std::vector<std::size_t> idx(std::min(k, ids.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Eigen::VectorXd target(static_cast<Eigen::Index>(dim) + 1);
    for (std::size_t i = 0; i < dim; ++i) target(static_cast<Eigen::Index>(i)) = p[i];
    target(static_cast<Eigen::Index>(dim)) = 1.0;
    while (true) {
        Eigen::MatrixXd A(static_cast<Eigen::Index>(dim) + 1, static_cast<Eigen::Index>(idx.size()));
        for (std::size_t c = 0; c < idx.size(); ++c) {
            const auto& q = pts[ids[idx[c]]];
            for (std::size_t i = 0; i < dim; ++i)
                A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = q[i];
            A(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(c)) = 1.0;
        }
        Eigen::VectorXd lambda = A.completeOrthogonalDecomposition().solve(target);
        if ((A * lambda - target).cwiseAbs().maxCoeff() <= tol && lambda.minCoeff() >= -tol) {
            return true;
        }
        // next combination
        std::size_t pos = idx.size();
        bool advanced = false;
        while (pos > 0) {
            --pos;
            if (idx[pos] + (idx.size() - pos) < ids.size()) {
                ++idx[pos];
                for (std::size_t q = pos + 1; q < idx.size(); ++q) idx[q] = idx[q - 1] + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced) return false;
    }
}

// Drop points lying on a segment between two others; exact on 1D data,
// a filter (not a full hull) in higher dimensions.
std::vector<std::vector<double>> segment_filter(std::vector<std::vector<double>> pts, double tol) {
    std::vector<bool> keep(pts.size(), true);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t a = 0; a < pts.size() && keep[i]; ++a) {
            if (a == i || !keep[a]) continue;
            for (std::size_t b = a + 1; b < pts.size(); ++b) {
                if (b == i || !keep[b]) continue;
                // project pts[i] on segment [a, b]
                double num = 0.0, den = 0.0;
                for (std::size_t c = 0; c < pts[i].size(); ++c) {
                    const double ab = pts[b][c] - pts[a][c];
                    num += (pts[i][c] - pts[a][c]) * ab;
                    den += ab * ab;
                }
                if (den <= 0.0) continue;
                const double lam = std::clamp(num / den, 0.0, 1.0);
                double dist = 0.0;
                for (std::size_t c = 0; c < pts[i].size(); ++c) {
                    const double proj = pts[a][c] + lam * (pts[b][c] - pts[a][c]);
                    dist = std::max(dist, std::abs(pts[i][c] - proj));
                }
                if (dist <= tol) {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (keep[i]) out.push_back(pts[i]);
    }
    return out;
}

std::optional<std::vector<std::vector<double>>> extreme_points_of(
    const std::vector<std::vector<double>>& pts, std::size_t dim, double tol) {
    if (dim == 0) {
        return std::vector<std::vector<double>>{std::vector<double>{}};
    }
    if (dim == 1) {
        std::vector<double> lo = pts.front(), hi = pts.front();
        for (const auto& p : pts) {
            if (p[0] < lo[0]) lo = p;
            if (p[0] > hi[0]) hi = p;
        }
        std::vector<std::vector<double>> out{lo};
        if (hi[0] - lo[0] > tol) out.push_back(hi);
        return out;
    }
    if (dim == 2) return hull_2d(pts, tol);
    if (dim == 3) {
        std::vector<std::vector<double>> candidates = segment_filter(pts, tol);
        if (candidates.size() > 120) return std::nullopt;  // exact test too costly here
        std::vector<std::vector<double>> out;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (!inside_hull_caratheodory(candidates[i], candidates, i, dim, tol)) {
                out.push_back(candidates[i]);
            }
        }
        return out;
    }
    // Higher dimensions: segment filtering only.
    return segment_filter(pts, tol);
}

// Explores the reachable coordinate set; when it is finite attaches the hull
// vertices and, in dimension one, rescales the segment to [0,1] with the
// initial point at 1.
void attach_hull_and_normalize(MinimalRealization& m, double tol) {
    std::vector<std::string> letters;
    for (const auto& [letter, t] : m.transitions) {
        (void)t;
        letters.push_back(letter);
    }

    constexpr std::size_t kMaxPoints = 256;
    constexpr std::size_t kMaxLevels = 512;
    std::vector<std::vector<double>> pts{m.initial};
    std::deque<std::size_t> frontier{0};
    double coord_scale = 1.0;
    for (double c : m.initial) coord_scale = std::max(coord_scale, std::abs(c));
    bool finite = true;
    std::size_t level = 0;
    while (!frontier.empty()) {
        if (++level > kMaxLevels) {
            finite = false;
            break;
        }
        std::deque<std::size_t> next;
        for (std::size_t idx : frontier) {
            for (const auto& a : letters) {
                const std::vector<double> y = m.transitions.at(a).apply(pts[idx]);
                for (double c : y) coord_scale = std::max(coord_scale, std::abs(c));
                bool known = false;
                for (const auto& p : pts) {
                    if (inf_dist(p, y) <= tol * coord_scale) {
                        known = true;
                        break;
                    }
                }
                if (known) continue;
                if (pts.size() >= kMaxPoints) {
                    finite = false;
                    break;
                }
                pts.push_back(y);
                next.push_back(pts.size() - 1);
            }
            if (!finite) break;
        }
        if (!finite) break;
        frontier = std::move(next);
    }
    if (!finite) return;

    const double pt_tol = tol * coord_scale;
    std::optional<std::vector<std::vector<double>>> extreme = extreme_points_of(pts, m.dim, pt_tol);

    if (m.dim == 1) {
        double lo = pts.front()[0], hi = pts.front()[0];
        for (const auto& p : pts) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        const double span = hi - lo;
        if (span > pt_tol) {
            // y = alpha * x + beta maps the reachable segment onto [0, 1],
            // oriented so the initial point (x = 0) lands at 1 when it is an
            // endpoint.
            double alpha, beta;
            if (std::abs(hi) <= pt_tol || -lo / span >= 0.5) {
                alpha = 1.0 / span;
                beta = -lo / span;
            } else {
                alpha = -1.0 / span;
                beta = hi / span;
            }
            for (auto& [letter, t] : m.transitions) {
                (void)letter;
                const double lin = t.matrix[0][0];
                t.offset[0] = alpha * t.offset[0] + beta - lin * beta;
            }
            for (auto& row : m.output.matrix) row[0] /= alpha;
            for (std::size_t i = 0; i < m.output.offset.size(); ++i) {
                m.output.offset[i] -= m.output.matrix[i][0] * beta;
            }
            m.initial[0] = beta;
            if (extreme) {
                for (auto& p : *extreme) p[0] = alpha * p[0] + beta;
            }
        }
    }
    if (extreme) {
        std::sort(extreme->begin(), extreme->end());
        m.extreme_points = std::move(*extreme);
    }
}

std::size_t default_check_depth(std::size_t ambient, std::size_t n_letters) {
    std::size_t depth = 2 * ambient;
    if (n_letters >= 2) {
        // keep the word table around 1e5 entries
        std::size_t cap = 0, count = 1, total = 1;
        while (total <= 100000) {
            count *= n_letters;
            if (total + count > 100000) break;
            total += count;
            ++cap;
        }
        depth = std::min(depth, cap);
    }
    return std::max<std::size_t>(depth, 1);
}

}  // namespace

const std::vector<double>& EventuallyPeriodicStream::at(std::size_t i) const {
    if (i < preperiod.size()) return preperiod[i];
    return period[(i - preperiod.size()) % period.size()];
}

bool EventuallyPeriodicStream::approx_equal(const EventuallyPeriodicStream& other,
                                            double tol) const {
    if (preperiod.size() != other.preperiod.size() || period.size() != other.period.size()) {
        return false;
    }
    const std::size_t total = preperiod.size() + period.size();
    for (std::size_t i = 0; i < total; ++i) {
        const auto& a = at(i);
        const auto& b = other.at(i);
        if (a.size() != b.size() || inf_dist(a, b) > tol) return false;
    }
    return true;
}

EventuallyPeriodicStream canonical_stream(std::vector<std::vector<double>> preperiod,
                                          std::vector<std::vector<double>> period, double tol) {
    if (period.empty()) throw ValidationError("eventually periodic stream: period must be nonempty");

    // Minimal period: the shortest divisor-length block that tiles the period.
    for (std::size_t len = 1; len < period.size(); ++len) {
        if (period.size() % len != 0) continue;
        bool tiles = true;
        for (std::size_t i = len; i < period.size() && tiles; ++i) {
            tiles = inf_dist(period[i], period[i % len]) <= tol;
        }
        if (tiles) {
            period.resize(len);
            break;
        }
    }
    // Minimal preperiod: fold trailing entries that already match the cycle.
    while (!preperiod.empty() && inf_dist(preperiod.back(), period.back()) <= tol) {
        std::vector<double> last = std::move(period.back());
        period.pop_back();
        period.insert(period.begin(), std::move(last));
        preperiod.pop_back();
    }
    EventuallyPeriodicStream out;
    out.preperiod = std::move(preperiod);
    out.period = std::move(period);
    return out;
}

std::vector<double> AffineMap::apply(const std::vector<double>& x) const {
    if (matrix.size() != offset.size()) throw ShapeError("affine map: row count mismatch");
    std::vector<double> out = offset;
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        if (matrix[i].size() != x.size()) throw ShapeError("affine map: input length mismatch");
        for (std::size_t j = 0; j < x.size(); ++j) out[i] += matrix[i][j] * x[j];
    }
    return out;
}

OrbitCycle orbit_cycle(const QuantumSystem& sys, const DensityMatrix& rho0, double tol,
                       std::size_t max_steps) {
    if (sys.unitaries().size() != 1) {
        throw ValidationError("orbit_cycle: system must have exactly one unitary, got " +
                              std::to_string(sys.unitaries().size()));
    }
    if (max_steps < 1) throw ValidationError("orbit_cycle: max_steps must be at least 1");
    if (rho0.dim() != sys.dim()) throw ShapeError("orbit_cycle: state dimension mismatch");

    const UnitaryOp& u = sys.unitaries().begin()->second;
    auto max_diff = [](const CMatrix& a, const CMatrix& b) {
        double d = 0.0;
        for (std::size_t k = 0; k < a.entries().size(); ++k)
            d = std::max(d, std::abs(a.entries()[k] - b.entries()[k]));
        return d;
    };

    OrbitCycle out;
    out.states.push_back(rho0);
    double closest = std::numeric_limits<double>::infinity();
    for (std::size_t t = 1; t <= max_steps; ++t) {
        out.states.push_back(conjugate_by(out.states.back(), u));
        for (std::size_t s = 0; s < t; ++s) {
            const double dist = max_diff(out.states[t].matrix(), out.states[s].matrix());
            if (dist <= tol) {
                out.preperiod = s;
                out.period = t - s;
                return out;
            }
            closest = std::min(closest, dist);
        }
    }
    std::ostringstream os;
    os.precision(3);
    os << "orbit_cycle: no recurrence within " << max_steps
       << " steps; closest recurrence distance " << std::scientific << closest;
    throw NumericalError(os.str());
}

std::vector<EventuallyPeriodicStream> reachable_suffixes(const QuantumSystem& sys,
                                                         const DensityMatrix& rho0, double tol,
                                                         std::size_t max_steps) {
    const OrbitCycle cyc = orbit_cycle(sys, rho0, tol, max_steps);
    const std::size_t q = cyc.preperiod;
    const std::size_t p = cyc.period;

    std::vector<std::vector<double>> obs(q + p);
    for (std::size_t t = 0; t < q + p; ++t) {
        obs[t] = q_step(sys, cyc.states[t]).observations;
    }

    std::vector<EventuallyPeriodicStream> out;
    for (std::size_t k = 0; k < q + p; ++k) {
        std::vector<std::vector<double>> pre, per;
        if (k < q) {
            pre.assign(obs.begin() + static_cast<std::ptrdiff_t>(k),
                       obs.begin() + static_cast<std::ptrdiff_t>(q));
            per.assign(obs.begin() + static_cast<std::ptrdiff_t>(q), obs.end());
        } else {
            per.assign(obs.begin() + static_cast<std::ptrdiff_t>(k), obs.end());
            per.insert(per.end(), obs.begin() + static_cast<std::ptrdiff_t>(q),
                       obs.begin() + static_cast<std::ptrdiff_t>(k));
        }
        EventuallyPeriodicStream c = canonical_stream(std::move(pre), std::move(per), tol);
        bool seen = false;
        for (const auto& existing : out) {
            if (existing.approx_equal(c, tol)) {
                seen = true;
                break;
            }
        }
        if (!seen) out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const EventuallyPeriodicStream& a,
                                         const EventuallyPeriodicStream& b) {
        if (a.preperiod.size() != b.preperiod.size()) return a.preperiod.size() < b.preperiod.size();
        if (a.period.size() != b.period.size()) return a.period.size() < b.period.size();
        const std::size_t total = a.preperiod.size() + a.period.size();
        for (std::size_t i = 0; i < total; ++i) {
            if (a.at(i) != b.at(i)) return a.at(i) < b.at(i);
        }
        return false;
    });
    return out;
}

std::size_t effective_check_depth(const QuantumSystem& sys, std::size_t requested) {
    if (requested != 0) return requested;
    return default_check_depth(sys.dim() * sys.dim(), sys.unitaries().size());
}

MinimalRealization minimal_realization(const QuantumSystem& sys, const DensityMatrix& rho0,
                                       double tol, std::size_t check_depth) {
    if (rho0.dim() != sys.dim()) throw ShapeError("minimal_realization: state dimension mismatch");
    check_depth = effective_check_depth(sys, check_depth);
    MinimalRealization out = minimize_affine(from_quantum(sys, rho0), tol);
    attach_hull_and_normalize(out, tol);

    const BehaviourPrefix expected = behaviour_prefix(sys, rho0, check_depth);
    const BehaviourPrefix got = realization_behaviour(out, check_depth);
    const double dev = got.max_deviation(expected);
    if (dev > tol) {
        std::ostringstream os;
        os.precision(2);
        os << "minimal_realization: behaviour deviation " << std::scientific << dev
           << " at depth " << check_depth << " exceeds tolerance";
        throw NumericalError(os.str());
    }
    return out;
}

MinimalRealization minimize_realization(const MinimalRealization& m, double tol,
                                        std::size_t check_depth) {
    if (check_depth == 0) {
        check_depth = default_check_depth(m.dim + 1, m.transitions.size());
    }
    MinimalRealization out = minimize_affine(from_realization(m), tol);
    attach_hull_and_normalize(out, tol);

    const BehaviourPrefix expected = realization_behaviour(m, check_depth);
    const BehaviourPrefix got = realization_behaviour(out, check_depth);
    if (got.max_deviation(expected) > tol) {
        throw NumericalError("minimize_realization: behaviour deviation exceeds tolerance");
    }
    return out;
}

BehaviourPrefix realization_behaviour(const MinimalRealization& m, std::size_t depth) {
    BehaviourPrefix out;
    out.depth = depth;
    out.effect_labels = m.effect_labels;

    std::vector<std::string> letters;
    for (const auto& [letter, t] : m.transitions) {
        (void)t;
        letters.push_back(letter);
    }
    std::vector<std::pair<Word, std::vector<double>>> level{{Word(), m.initial}};
    for (std::size_t len = 0;; ++len) {
        std::vector<std::pair<Word, std::vector<double>>> next_level;
        for (const auto& [w, x] : level) {
            std::vector<double> obs = m.output.apply(x);
            for (double& v : obs) {
                if (v < -kValidationTol || v > 1.0 + kValidationTol) {
                    std::ostringstream os;
                    os.precision(2);
                    os << "realization observation outside [0,1] by " << std::scientific
                       << std::max(-v, v - 1.0);
                    throw NumericalError(os.str());
                }
                v = std::clamp(v, 0.0, 1.0);
            }
            out.table.emplace(w, std::move(obs));
            if (len < depth) {
                for (const auto& a : letters) {
                    next_level.emplace_back(w.append(a[0]), m.transitions.at(a).apply(x));
                }
            }
        }
        if (len == depth) break;
        level = std::move(next_level);
    }
    return out;
}

}  // namespace qcoalg
