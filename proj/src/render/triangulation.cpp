#include "poseaug/render/triangulation.hpp"
#include "poseaug/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <string>

namespace poseaug {

namespace {

using Vec2 = Eigen::Vector2d;

constexpr double kDuplicateDistance = 1e-9;
// Distance below which a point counts as lying on a line.
constexpr double kOnLineDistance = 1e-10;

double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d)
{
    const double adx = a.x() - d.x(), ady = a.y() - d.y();
    const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
    const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
    const double alift = adx * adx + ady * ady;
    const double blift = bdx * bdx + bdy * bdy;
    const double clift = cdx * cdx + cdy * cdy;
    return alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) + clift * (adx * bdy - ady * bdx);
}

bool on_line(const Vec2& a, const Vec2& b, const Vec2& p)
{
    const double len = (b - a).norm();
    return len > 0.0 && std::abs(orient2d(a, b, p)) <= kOnLineDistance * len;
}

/*
 * Incremental Lawson-flip triangulation inside a super triangle, followed by Sloan-style
 * constraint recovery. The super vertices take part in orientation tests with their real
 * coordinates, but edge legality involving them is decided symbolically: an edge is flipped
 * when the lower-ranked of its endpoints ranks below both opposite vertices, with super
 * vertices ranking below every real point.
 */
class CdtBuilder
{
public:
    explicit CdtBuilder(std::span<const Vec2> points) : n_real_(static_cast<int>(points.size()))
    {
        pts_.assign(points.begin(), points.end());
        Vec2 lo = pts_.front();
        Vec2 hi = pts_.front();
        for (const auto& p : pts_)
        {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        const Vec2 mid = 0.5 * (lo + hi);
        const double d = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1.0});
        pts_.emplace_back(mid.x() - 100.0 * d, mid.y() - d);
        pts_.emplace_back(mid.x() + 100.0 * d, mid.y() - d);
        pts_.emplace_back(mid.x(), mid.y() + 100.0 * d);
        tris_.push_back({{n_real_, n_real_ + 1, n_real_ + 2}, {-1, -1, -1}, {false, false, false}});
    }

    void insert_points()
    {
        for (int i = 0; i < n_real_; ++i)
        {
            insert_point(i);
        }
    }

    void insert_constraint(int a, int b)
    {
        int guard = 0;
        while (a != b)
        {
            if (++guard > n_real_ + 1)
            {
                throw TriangulationError("constraint recovery did not terminate");
            }
            if (const auto [t, i] = find_edge(a, b); t >= 0)
            {
                set_fixed(t, i);
                return;
            }
            std::vector<Edge> crossing;
            const int stop = walk(a, b, crossing);
            resolve(a, stop, std::move(crossing));
            a = stop;
        }
    }

    std::vector<Triangle> finish() const
    {
        std::vector<char> removed(tris_.size(), 0);
        std::deque<int> queue;
        for (int t = 0; t < static_cast<int>(tris_.size()); ++t)
        {
            if (std::any_of(tris_[t].v.begin(), tris_[t].v.end(), [&](int v) { return is_super(v); }))
            {
                removed[t] = 1;
                queue.push_back(t);
            }
        }
        while (!queue.empty())
        {
            const int t = queue.front();
            queue.pop_front();
            for (int i = 0; i < 3; ++i)
            {
                const int u = tris_[t].nb[i];
                if (u >= 0 && !tris_[t].fixed[i] && !removed[u])
                {
                    removed[u] = 1;
                    queue.push_back(u);
                }
            }
        }
        std::vector<Triangle> out;
        for (int t = 0; t < static_cast<int>(tris_.size()); ++t)
        {
            if (!removed[t])
            {
                out.push_back(tris_[t].v);
            }
        }
        return out;
    }

private:
    struct Tri
    {
        std::array<int, 3> v;
        std::array<int, 3> nb;    // nb[i] lies across the edge opposite v[i]
        std::array<bool, 3> fixed; // constraint flag for the same edge
    };

    bool is_super(int v) const { return v >= n_real_; }

    // Rank used by the symbolic legality rule.
    int rank(int v) const { return is_super(v) ? -(v - n_real_ + 1) : v; }

    static int slot_of(const Tri& t, int vertex)
    {
        for (int i = 0; i < 3; ++i)
        {
            if (t.v[i] == vertex)
            {
                return i;
            }
        }
        return -1;
    }

    static int neighbor_slot(const Tri& t, int other)
    {
        for (int i = 0; i < 3; ++i)
        {
            if (t.nb[i] == other)
            {
                return i;
            }
        }
        return -1;
    }

    void relink(int tri, int old_nb, int new_nb)
    {
        if (tri < 0)
        {
            return;
        }
        const int s = neighbor_slot(tris_[tri], old_nb);
        tris_[tri].nb[s] = new_nb;
    }

    // Edge (a, b) as (triangle, slot of the opposite vertex), either orientation.
    std::pair<int, int> find_edge(int a, int b) const
    {
        for (int t = 0; t < static_cast<int>(tris_.size()); ++t)
        {
            const auto& v = tris_[t].v;
            for (int i = 0; i < 3; ++i)
            {
                const int p = v[(i + 1) % 3];
                const int q = v[(i + 2) % 3];
                if ((p == a && q == b) || (p == b && q == a))
                {
                    return {t, i};
                }
            }
        }
        return {-1, -1};
    }

    void set_fixed(int t, int i)
    {
        tris_[t].fixed[i] = true;
        const int u = tris_[t].nb[i];
        if (u >= 0)
        {
            tris_[u].fixed[neighbor_slot(tris_[u], t)] = true;
        }
    }

    int locate(const Vec2& p)
    {
        int t = last_;
        const int limit = 4 * static_cast<int>(tris_.size()) + 16;
        for (int step = 0; step < limit; ++step)
        {
            bool moved = false;
            for (int k = 0; k < 3; ++k)
            {
                const int i = (k + step) % 3;
                const auto& tri = tris_[t];
                if (orient2d(pts_[tri.v[(i + 1) % 3]], pts_[tri.v[(i + 2) % 3]], p) < 0.0 && tri.nb[i] >= 0)
                {
                    t = tri.nb[i];
                    moved = true;
                    break;
                }
            }
            if (!moved)
            {
                return t;
            }
        }
        // Walk did not settle; fall back to a scan.
        for (int c = 0; c < static_cast<int>(tris_.size()); ++c)
        {
            const auto& v = tris_[c].v;
            if (orient2d(pts_[v[0]], pts_[v[1]], p) >= 0.0 && orient2d(pts_[v[1]], pts_[v[2]], p) >= 0.0 &&
                orient2d(pts_[v[2]], pts_[v[0]], p) >= 0.0)
            {
                return c;
            }
        }
        throw TriangulationError("point location failed");
    }

    void insert_point(int vi)
    {
        const Vec2& p = pts_[vi];
        const int t = locate(p);
        const Tri old = tris_[t];
        for (int v : old.v)
        {
            if (!is_super(v) && (pts_[v] - p).norm() <= kDuplicateDistance)
            {
                throw TriangulationError("duplicate points " + std::to_string(v) + " and " + std::to_string(vi));
            }
        }
        int on_edge = -1;
        for (int i = 0; i < 3; ++i)
        {
            if (on_line(pts_[old.v[(i + 1) % 3]], pts_[old.v[(i + 2) % 3]], p))
            {
                on_edge = i;
            }
        }

        const int base = static_cast<int>(tris_.size());
        const std::array<int, 3> ids{t, base, base + 1};
        tris_.resize(tris_.size() + 2);
        for (int i = 0; i < 3; ++i)
        {
            // T_i = (v_{i+1}, v_{i+2}, p) keeps old edge i.
            Tri& ti = tris_[ids[i]];
            ti.v = {old.v[(i + 1) % 3], old.v[(i + 2) % 3], vi};
            ti.nb = {ids[(i + 1) % 3], ids[(i + 2) % 3], old.nb[i]};
            ti.fixed = {false, false, old.fixed[i]};
        }
        for (int i = 1; i < 3; ++i)
        {
            relink(old.nb[i], t, ids[i]);
        }
        last_ = t;

        std::vector<std::pair<int, int>> stack;
        for (int i = 0; i < 3; ++i)
        {
            if (i == on_edge && tris_[ids[i]].nb[2] >= 0)
            {
                // Degenerate sliver on the split edge: flip it away unconditionally.
                const int u = tris_[ids[i]].nb[2];
                flip(ids[i], 2);
                stack.emplace_back(ids[i], 0);
                stack.emplace_back(u, 2);
            }
            else
            {
                stack.emplace_back(ids[i], 2);
            }
        }
        legalize(std::move(stack));
    }

    bool convex_quad(int t, int i) const
    {
        const Tri& tri = tris_[t];
        const int u = tri.nb[i];
        const Tri& other = tris_[u];
        const int q = other.v[neighbor_slot(other, t)];
        const int p = tri.v[i];
        const int a = tri.v[(i + 1) % 3];
        const int b = tri.v[(i + 2) % 3];
        return orient2d(pts_[p], pts_[a], pts_[q]) > 0.0 && orient2d(pts_[q], pts_[b], pts_[p]) > 0.0;
    }

    bool should_flip(int t, int i) const
    {
        const Tri& tri = tris_[t];
        const int u = tri.nb[i];
        if (u < 0 || tri.fixed[i])
        {
            return false;
        }
        const Tri& other = tris_[u];
        const int q = other.v[neighbor_slot(other, t)];
        const int p = tri.v[i];
        const int a = tri.v[(i + 1) % 3];
        const int b = tri.v[(i + 2) % 3];
        if (is_super(a) && is_super(b))
        {
            return false;
        }
        bool illegal = false;
        if (!is_super(a) && !is_super(b) && !is_super(p) && !is_super(q))
        {
            illegal = incircle(pts_[p], pts_[a], pts_[b], pts_[q]) > 0.0;
        }
        else
        {
            illegal = std::min(rank(a), rank(b)) < std::min(rank(p), rank(q));
        }
        return illegal && convex_quad(t, i);
    }

    // Flips the edge opposite v[i] of t. Afterwards t = (p, a, q) and its neighbour u = (q, b, p).
    void flip(int t, int i)
    {
        const int u = tris_[t].nb[i];
        const Tri tt = tris_[t];
        const Tri uu = tris_[u];
        const int j = neighbor_slot(uu, t);
        const int p = tt.v[i];
        const int a = tt.v[(i + 1) % 3];
        const int b = tt.v[(i + 2) % 3];
        const int q = uu.v[j];
        const int t_a = tt.nb[(i + 1) % 3];
        const int t_b = tt.nb[(i + 2) % 3];
        const int u_b = uu.nb[(j + 1) % 3];
        const int u_a = uu.nb[(j + 2) % 3];
        tris_[t] = {{p, a, q}, {u_b, u, t_b}, {uu.fixed[(j + 1) % 3], false, tt.fixed[(i + 2) % 3]}};
        tris_[u] = {{q, b, p}, {t_a, t, u_a}, {tt.fixed[(i + 1) % 3], false, uu.fixed[(j + 2) % 3]}};
        relink(u_b, u, t);
        relink(t_a, t, u);
        last_ = t;
    }

    void legalize(std::vector<std::pair<int, int>> stack)
    {
        std::size_t budget = 64 * (tris_.size() + 16);
        while (!stack.empty())
        {
            if (budget-- == 0)
            {
                throw TriangulationError("edge legalisation did not terminate");
            }
            const auto [t, i] = stack.back();
            stack.pop_back();
            if (!should_flip(t, i))
            {
                continue;
            }
            const int u = tris_[t].nb[i];
            flip(t, i);
            stack.emplace_back(t, 0);
            stack.emplace_back(u, 2);
        }
    }

    // Collects edges crossed by segment a->b until b or a vertex lying on the segment is reached.
    int walk(int a, int b, std::vector<Edge>& crossing) const
    {
        const Vec2& pa = pts_[a];
        const Vec2& pb = pts_[b];
        const Vec2 dir = pb - pa;
        int t = -1;
        int c = -1;
        int d = -1;
        for (int s = 0; s < static_cast<int>(tris_.size()) && t < 0; ++s)
        {
            const int slot = slot_of(tris_[s], a);
            if (slot < 0)
            {
                continue;
            }
            const int vc = tris_[s].v[(slot + 1) % 3];
            const int vd = tris_[s].v[(slot + 2) % 3];
            for (int v : {vc, vd})
            {
                if (!is_super(v) && on_line(pa, pb, pts_[v]) && (pts_[v] - pa).dot(dir) > 0.0)
                {
                    return v;
                }
            }
            if (orient2d(pa, pb, pts_[vc]) < 0.0 && orient2d(pa, pb, pts_[vd]) > 0.0)
            {
                t = s;
                c = vc;
                d = vd;
            }
        }
        if (t < 0)
        {
            throw TriangulationError("constraint walk found no starting triangle");
        }
        for (std::size_t guard = 0; guard <= tris_.size(); ++guard)
        {
            crossing.push_back({c, d});
            const Tri& tri = tris_[t];
            const int u = tri.nb[3 - slot_of(tri, c) - slot_of(tri, d)];
            if (u < 0)
            {
                throw TriangulationError("constraint leaves the triangulation");
            }
            const Tri& next = tris_[u];
            int e = -1;
            for (int v : next.v)
            {
                if (v != c && v != d)
                {
                    e = v;
                }
            }
            if (e == b)
            {
                return b;
            }
            if (!is_super(e) && on_line(pa, pb, pts_[e]))
            {
                return e;
            }
            if (orient2d(pa, pb, pts_[e]) < 0.0)
            {
                c = e;
            }
            else
            {
                d = e;
            }
            t = u;
        }
        throw TriangulationError("constraint walk did not terminate");
    }

    bool crosses(int a, int b, int p, int q) const
    {
        if (p == a || p == b || q == a || q == b)
        {
            return false;
        }
        const double o1 = orient2d(pts_[a], pts_[b], pts_[p]);
        const double o2 = orient2d(pts_[a], pts_[b], pts_[q]);
        const double o3 = orient2d(pts_[p], pts_[q], pts_[a]);
        const double o4 = orient2d(pts_[p], pts_[q], pts_[b]);
        return o1 * o2 < 0.0 && o3 * o4 < 0.0;
    }

    void resolve(int a, int b, std::vector<Edge> crossing)
    {
        std::deque<Edge> queue(crossing.begin(), crossing.end());
        std::vector<Edge> created;
        std::size_t budget = 64 * (queue.size() + 4) * (queue.size() + 4);
        while (!queue.empty())
        {
            if (budget-- == 0)
            {
                throw TriangulationError("constraint flips did not terminate");
            }
            const Edge e = queue.front();
            queue.pop_front();
            const auto [t, i] = find_edge(e[0], e[1]);
            if (t < 0)
            {
                throw TriangulationError("lost a crossing edge during constraint recovery");
            }
            if (tris_[t].fixed[i])
            {
                throw TriangulationError("constraint edges intersect");
            }
            if (!convex_quad(t, i))
            {
                queue.push_back(e);
                continue;
            }
            flip(t, i);
            const int p = tris_[t].v[0];
            const int q = tris_[t].v[2];
            if (crosses(a, b, p, q))
            {
                queue.push_back({p, q});
            }
            else
            {
                created.push_back({p, q});
            }
        }

        bool changed = true;
        std::size_t rounds = 0;
        while (changed && rounds++ < 4 * (created.size() + 4))
        {
            changed = false;
            for (auto& e : created)
            {
                if ((e[0] == a && e[1] == b) || (e[0] == b && e[1] == a))
                {
                    continue;
                }
                const auto [t, i] = find_edge(e[0], e[1]);
                if (t >= 0 && should_flip(t, i))
                {
                    flip(t, i);
                    e = {tris_[t].v[0], tris_[t].v[2]};
                    changed = true;
                }
            }
        }
        const auto [t, i] = find_edge(a, b);
        if (t < 0)
        {
            throw TriangulationError("constraint edge missing after recovery");
        }
        set_fixed(t, i);
    }

    int n_real_;
    std::vector<Vec2> pts_;
    std::vector<Tri> tris_;
    int last_ = 0;
};

} // namespace

std::vector<int> convex_hull(std::span<const Eigen::Vector2d> points, bool keep_collinear)
{
    const int n = static_cast<int>(points.size());
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return points[a].x() < points[b].x() || (points[a].x() == points[b].x() && points[a].y() < points[b].y());
    });
    if (n < 3)
    {
        return order;
    }
    auto turn_pops = [&](int o, int a, int b) {
        const double cr = orient2d(points[o], points[a], points[b]);
        return keep_collinear ? cr < 0.0 : cr <= 0.0;
    };
    std::vector<int> hull(2 * static_cast<std::size_t>(n));
    int k = 0;
    for (int i = 0; i < n; ++i)
    {
        while (k >= 2 && turn_pops(hull[k - 2], hull[k - 1], order[i]))
        {
            --k;
        }
        hull[k++] = order[i];
    }
    for (int i = n - 2, lower = k + 1; i >= 0; --i)
    {
        while (k >= lower && turn_pops(hull[k - 2], hull[k - 1], order[i]))
        {
            --k;
        }
        hull[k++] = order[i];
    }
    hull.resize(static_cast<std::size_t>(k - 1));
    return hull;
}

bool in_convex_polygon(std::span<const Eigen::Vector2d> polygon, const Eigen::Vector2d& p)
{
    const std::size_t n = polygon.size();
    if (n < 3)
    {
        return false;
    }
    for (std::size_t i = 0; i < n; ++i)
    {
        if (orient2d(polygon[i], polygon[(i + 1) % n], p) < 0.0)
        {
            return false;
        }
    }
    return true;
}

std::vector<Triangle> triangulate(std::span<const Eigen::Vector2d> points, std::span<const Edge> constraints)
{
    const int n = static_cast<int>(points.size());
    if (n < 3)
    {
        throw TriangulationError("triangulate: need at least 3 points");
    }
    for (const auto& p : points)
    {
        if (!p.allFinite())
        {
            throw TriangulationError("triangulate: non-finite point");
        }
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return points[a].x() < points[b].x() || (points[a].x() == points[b].x() && points[a].y() < points[b].y());
    });
    for (int i = 1; i < n; ++i)
    {
        const int a = order[i - 1];
        const int b = order[i];
        if ((points[a] - points[b]).norm() <= kDuplicateDistance)
        {
            throw TriangulationError("duplicate points " + std::to_string(std::min(a, b)) + " and " +
                                     std::to_string(std::max(a, b)));
        }
    }
    const std::vector<int> hull = convex_hull(points, true);
    bool all_collinear = true;
    for (int i = 0; i < n && all_collinear; ++i)
    {
        all_collinear = on_line(points[order.front()], points[order.back()], points[i]);
    }
    if (all_collinear || hull.size() < 3)
    {
        throw TriangulationError("triangulate: all points are collinear");
    }
    for (const auto& e : constraints)
    {
        if (e[0] < 0 || e[1] < 0 || e[0] >= n || e[1] >= n || e[0] == e[1])
        {
            throw std::invalid_argument("triangulate: bad constraint edge");
        }
    }

    CdtBuilder builder(points);
    builder.insert_points();
    for (std::size_t i = 0; i < hull.size(); ++i)
    {
        builder.insert_constraint(hull[i], hull[(i + 1) % hull.size()]);
    }
    for (const auto& e : constraints)
    {
        builder.insert_constraint(e[0], e[1]);
    }
    return builder.finish();
}

} // namespace poseaug
