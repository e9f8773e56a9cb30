"""Exact planar convex bodies and the selection maps built on them.

Bodies are convex polygons in the (v, eta) plane stored as CCW vertex loops
in strictly convex position (degenerate bodies with one or two vertices are
first-class). All metric operations (support, distance, Hausdorff) are exact
on polygons up to float rounding; discretization enters only through circle
arcs in `proj_map` and the quadrature in `steiner`, both with controllable
resolution.

A `support_samples` backend carries 3D point clouds for cross-checks; it only
supports the support function, Steiner averaging and support-based Hausdorff
estimates, and every other operation raises DimMismatch on it.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimMismatch, EmptyBody

# collinearity / sidedness tolerances scale with the squared coordinate size
_EPS_BASE = 1e-12


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: np.ndarray) -> np.ndarray:
    """Convex hull of a 2D point set via the monotone chain.

    Parameters
    ----------
    points : (N, 2) array_like
        Input points; duplicates allowed.

    Returns
    -------
    (M, 2) ndarray
        Hull vertices in CCW order starting from the lexicographically
        smallest vertex. Collinear interior points are dropped; M may be
        1 (all points equal) or 2 (all points collinear).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DimMismatch(f"expected (N, 2) points, got shape {pts.shape}")
    if pts.shape[0] == 0:
        raise EmptyBody("no points")
    if not np.all(np.isfinite(pts)):
        raise ValueError("non-finite coordinates in hull input")
    pts = np.unique(pts, axis=0)
    if pts.shape[0] == 1:
        return pts
    scale = float(np.max(np.abs(pts)))
    eps = _EPS_BASE * max(1.0, scale * scale)

    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    # eps-collinear input: the chain scan can drop true extremes when the
    # transverse spread is below eps, so collapse to the segment directly
    d = pts[-1] - pts[0]
    area = np.abs((pts[:, 0] - pts[0, 0]) * d[1] - (pts[:, 1] - pts[0, 1]) * d[0])
    if float(np.max(area)) <= eps:
        proj = (pts - pts[0]) @ d
        lo_i, hi_i = int(np.argmin(proj)), int(np.argmax(proj))
        if lo_i == hi_i:
            return pts[[lo_i]]
        return pts[[lo_i, hi_i]]

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= eps:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    if not hull:
        # fully collinear input collapses both chains; keep the extremes
        hull = [pts[0], pts[-1]]
    return np.asarray(hull, dtype=float)


class ConvexBody:
    """Compact convex set.

    Parameters
    ----------
    points : (N, d) array_like
        Generating points, d = 2 (polygon backend) or d = 3
        (support-sample backend).
    backend : str
        "polygon" hulls the points exactly; "support_samples" keeps the
        deduplicated cloud for support-only queries.
    """

    __slots__ = ("vertices", "backend")

    def __init__(self, points, backend: str = "polygon"):
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[None, :]
        if backend == "polygon":
            if pts.shape[1] != 2:
                raise DimMismatch(f"polygon backend is 2D, got dim {pts.shape[1]}")
            self.vertices = convex_hull(pts)
        elif backend == "support_samples":
            if pts.shape[1] != 3:
                raise DimMismatch(f"support_samples backend is 3D, got dim {pts.shape[1]}")
            if pts.shape[0] == 0:
                raise EmptyBody("no points")
            if not np.all(np.isfinite(pts)):
                raise ValueError("non-finite coordinates")
            self.vertices = np.unique(pts, axis=0)
        else:
            raise ValueError(f"unknown backend {backend!r}")
        self.backend = backend

    @property
    def dim(self) -> int:
        return int(self.vertices.shape[1])

    @property
    def scale(self) -> float:
        return float(max(1.0, np.max(np.abs(self.vertices))))

    def __repr__(self):
        return f"ConvexBody(<{len(self.vertices)} vertices>, backend={self.backend!r})"

    def _require_polygon(self, op: str):
        if self.backend != "polygon":
            raise DimMismatch(f"{op} needs the polygon backend, not {self.backend}")


def ball(center, radius: float, n: int = 360) -> ConvexBody:
    """Inscribed n-gon approximation of the closed disc B(center, radius)."""
    c = np.asarray(center, dtype=float)
    if c.shape != (2,):
        raise DimMismatch("ball center must be a 2-vector")
    if radius < 0:
        raise ValueError("negative radius")
    if radius == 0:
        return ConvexBody(c[None, :])
    theta = 2.0 * np.pi * np.arange(n) / n
    pts = c[None, :] + radius * np.stack([np.cos(theta), np.sin(theta)], axis=1)
    return ConvexBody(pts)


def _inside_mask(points: np.ndarray, body: ConvexBody, slack: float = 0.0) -> np.ndarray:
    """Boolean mask of points lying in the polygon (distance <= slack)."""
    verts = body.vertices
    n = len(verts)
    if n >= 3:
        a = verts
        b = np.roll(verts, -1, axis=0)
        ab = b - a
        lens = np.linalg.norm(ab, axis=1)
        # signed distance to each edge line; CCW interior is the left side
        rel = points[:, None, :] - a[None, :, :]
        cross = ab[None, :, 0] * rel[:, :, 1] - ab[None, :, 1] * rel[:, :, 0]
        tol = _EPS_BASE * body.scale * lens[None, :] + slack * lens[None, :]
        return np.all(cross >= -tol, axis=1)
    d = _points_to_body(points, body)
    return d <= _EPS_BASE * body.scale + slack


def _points_to_segments(points: np.ndarray, a: np.ndarray, b: np.ndarray):
    """Distances and nearest points from (P,2) points to (E,2)+(E,2) segments."""
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    rel = points[:, None, :] - a[None, :, :]
    t = np.einsum("pij,ij->pi", rel, ab) / np.maximum(denom, 1e-300)[None, :]
    t = np.clip(t, 0.0, 1.0)
    proj = a[None, :, :] + t[:, :, None] * ab[None, :, :]
    d2 = np.sum((proj - points[:, None, :]) ** 2, axis=2)
    k = np.argmin(d2, axis=1)
    rows = np.arange(len(points))
    return np.sqrt(d2[rows, k]), proj[rows, k]


def _points_to_body(points: np.ndarray, body: ConvexBody) -> np.ndarray:
    verts = body.vertices
    if len(verts) == 1:
        return np.linalg.norm(points - verts[0], axis=1)
    if len(verts) == 2:
        d, _ = _points_to_segments(points, verts[:1], verts[1:])
        return d
    a = verts
    b = np.roll(verts, -1, axis=0)
    d, _ = _points_to_segments(points, a, b)
    d = d.copy()
    d[_inside_mask(points, body)] = 0.0
    return d


def distance(y, body: ConvexBody) -> float:
    """Euclidean distance from the point y to the body (0 inside)."""
    body._require_polygon("distance")
    p = np.asarray(y, dtype=float)
    if p.shape != (2,):
        raise DimMismatch("point must be a 2-vector")
    return float(_points_to_body(p[None, :], body)[0])


def project_point(y, body: ConvexBody) -> np.ndarray:
    """Nearest point of the body to y (y itself when inside)."""
    body._require_polygon("project_point")
    p = np.asarray(y, dtype=float)
    verts = body.vertices
    if len(verts) == 1:
        return verts[0].copy()
    if len(verts) >= 3 and bool(_inside_mask(p[None, :], body)[0]):
        return p.copy()
    a = verts
    b = np.roll(verts, -1, axis=0) if len(verts) >= 3 else verts[1:]
    if len(verts) == 2:
        a = verts[:1]
    _, proj = _points_to_segments(p[None, :], a, b)
    return proj[0]


def support(body: ConvexBody, direction) -> tuple[float, np.ndarray]:
    """Support value and a canonical support point.

    Parameters
    ----------
    body : ConvexBody
    direction : array_like
        Nonzero direction; rescaling it leaves the support point unchanged
        (the value scales linearly when not normalized here, so the input
        is normalized first).

    Returns
    -------
    (float, ndarray)
        max_{z in body} <u, z> over the normalized direction u, and the
        minimal-norm point of the maximizing face.
    """
    u = np.asarray(direction, dtype=float)
    if u.shape != (body.dim,):
        raise DimMismatch(f"direction dim {u.shape} vs body dim {body.dim}")
    nrm = float(np.linalg.norm(u))
    if nrm == 0.0 or not np.isfinite(nrm):
        raise ValueError("direction must be nonzero and finite")
    u = u / nrm
    verts = body.vertices
    vals = verts @ u
    vmax = float(np.max(vals))
    tie_tol = _EPS_BASE * max(1.0, abs(vmax)) * 10.0
    idx = np.nonzero(vals >= vmax - tie_tol)[0]
    if len(idx) == 1 or body.dim == 3:
        if len(idx) == 1:
            return vmax, verts[idx[0]].copy()
        # 3D cloud: minimal-norm representative among tied sample points
        tied = verts[idx]
        return vmax, tied[int(np.argmin(np.einsum("ij,ij->i", tied, tied)))].copy()
    # maximizing face is a segment; take its minimal-norm point
    perp = np.array([-u[1], u[0]])
    s = verts[idx] @ perp
    a = verts[idx[int(np.argmin(s))]]
    b = verts[idx[int(np.argmax(s))]]
    ab = b - a
    denom = float(ab @ ab)
    if denom <= 1e-300:
        return vmax, a.copy()
    t = min(1.0, max(0.0, float(-(a @ ab) / denom)))
    return vmax, a + t * ab


def hausdorff(a: ConvexBody, b: ConvexBody) -> float:
    """Hausdorff distance between two polygon bodies (exact for polygons:
    each directed excess is attained at a vertex)."""
    a._require_polygon("hausdorff")
    b._require_polygon("hausdorff")
    d_ab = float(np.max(_points_to_body(a.vertices, b)))
    d_ba = float(np.max(_points_to_body(b.vertices, a)))
    return max(d_ab, d_ba)


def minkowski_inflate(body: ConvexBody, r_v: float, r_eta: float) -> ConvexBody:
    """Minkowski sum with the box [-r_v, r_v] x [-r_eta, r_eta]."""
    body._require_polygon("minkowski_inflate")
    if r_v < 0 or r_eta < 0:
        raise ValueError("inflation radii must be nonnegative")
    corners = np.array(
        [[r_v, r_eta], [r_v, -r_eta], [-r_v, r_eta], [-r_v, -r_eta]], dtype=float
    )
    pts = (body.vertices[:, None, :] + corners[None, :, :]).reshape(-1, 2)
    return ConvexBody(pts)


def containment_gap(outer: ConvexBody, inner: ConvexBody) -> float:
    """Worst distance from an extreme point of inner to outer (0 when
    inner is contained)."""
    outer._require_polygon("containment_gap")
    inner._require_polygon("containment_gap")
    return float(np.max(_points_to_body(inner.vertices, outer)))


def contains_body(outer: ConvexBody, inner: ConvexBody, tol: float) -> bool:
    """True when every extreme point of inner is within tol of outer."""
    return containment_gap(outer, inner) <= tol


def proj_map(y, body: ConvexBody, arc_deg: float = 0.5) -> ConvexBody:
    """Projection-map body P(y, K) = K intersected with B(y, 2 d(y, K)).

    The disc radius is the exact doubled distance; only the circular arcs
    are discretized, at `arc_deg` degree resolution. For y inside K the
    result is the singleton {y}.
    """
    body._require_polygon("proj_map")
    p = np.asarray(y, dtype=float)
    if p.shape != (2,):
        raise DimMismatch("point must be a 2-vector")
    verts = body.vertices
    if len(verts) == 1:
        return ConvexBody(verts)
    d = distance(p, body)
    if d == 0.0:
        return ConvexBody(p[None, :])
    r = 2.0 * d
    cand = [project_point(p, body)[None, :]]

    keep = np.linalg.norm(verts - p, axis=1) <= r * (1.0 + 1e-12)
    if np.any(keep):
        cand.append(verts[keep])

    a = verts if len(verts) >= 3 else verts[:1]
    b = np.roll(verts, -1, axis=0) if len(verts) >= 3 else verts[1:]
    ab = b - a
    qa = np.einsum("ij,ij->i", ab, ab)
    qb = 2.0 * np.einsum("ij,ij->i", ab, a - p[None, :])
    qc = np.einsum("ij,ij->i", a - p[None, :], a - p[None, :]) - r * r
    disc = qb * qb - 4.0 * qa * qc
    ok = (disc >= 0) & (qa > 1e-300)
    if np.any(ok):
        sq = np.sqrt(disc[ok])
        for sign in (-1.0, 1.0):
            t = (-qb[ok] + sign * sq) / (2.0 * qa[ok])
            good = (t >= -1e-12) & (t <= 1.0 + 1e-12)
            if np.any(good):
                tt = np.clip(t[good], 0.0, 1.0)
                cand.append(a[ok][good] + tt[:, None] * ab[ok][good])

    n_arc = max(8, int(math.ceil(360.0 / arc_deg)))
    theta = 2.0 * np.pi * (np.arange(n_arc) + 0.5) / n_arc
    circ = p[None, :] + r * np.stack([np.cos(theta), np.sin(theta)], axis=1)
    inside = _inside_mask(circ, body)
    if np.any(inside):
        cand.append(circ[inside])

    return ConvexBody(np.concatenate(cand, axis=0))


def _fibonacci_sphere(n: int) -> np.ndarray:
    k = np.arange(n) + 0.5
    phi = np.arccos(1.0 - 2.0 * k / n)
    golden = np.pi * (1.0 + 5.0**0.5)
    theta = golden * k
    return np.stack(
        [np.cos(theta) * np.sin(phi), np.sin(theta) * np.sin(phi), np.cos(phi)], axis=1
    )


def steiner(body: ConvexBody, quadrature: int = 3600) -> np.ndarray:
    """Steiner point by sphere-averaged support points.

    Directions are equally spaced with a half-step offset (2D) or a
    Fibonacci sphere sample (3D cloud backend), so faces of axis-aligned
    boxes and polygonized balls never sit exactly on a quadrature node.
    Ties across a face resolve to the minimal-norm face point; the average
    is clamped back onto the body if quadrature noise pushes it out.
    """
    if quadrature < 3:
        raise ValueError("quadrature must be >= 3")
    verts = body.vertices
    if body.backend == "support_samples":
        dirs = _fibonacci_sphere(quadrature)
        vals = dirs @ verts.T
        idx = np.argmax(vals, axis=1)
        return np.mean(verts[idx], axis=0)
    if len(verts) == 1:
        return verts[0].copy()
    theta = 2.0 * np.pi * (np.arange(quadrature) + 0.5) / quadrature
    dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    vals = dirs @ verts.T
    rows = np.arange(quadrature)
    best = np.argmax(vals, axis=1)
    vmax = vals[rows, best]
    pts = verts[best]
    if verts.shape[0] >= 2:
        masked = vals.copy()
        masked[rows, best] = -np.inf
        second = np.max(masked, axis=1)
        tie_tol = _EPS_BASE * np.maximum(1.0, np.abs(vmax)) * 10.0
        tied = np.nonzero(vmax - second <= tie_tol)[0]
        for i in tied:
            _, pts[i] = support(body, dirs[i])
    s = np.mean(pts, axis=0)
    if distance(s, body) > 0.0:
        s = project_point(s, body)
    return s


def _clip_segment_by_polygon(seg: np.ndarray, poly: ConvexBody) -> np.ndarray | None:
    a, b = seg[0], seg[1]
    verts = poly.vertices
    e0 = verts
    e1 = np.roll(verts, -1, axis=0)
    t_lo, t_hi = 0.0, 1.0
    d = b - a
    for p0, p1 in zip(e0, e1):
        n = np.array([-(p1[1] - p0[1]), p1[0] - p0[0]])  # inward normal, CCW
        num = float(n @ (a - p0))
        den = float(n @ d)
        if abs(den) < 1e-300:
            if num < -_EPS_BASE * poly.scale:
                return None
            continue
        t = -num / den
        if den > 0:
            t_lo = max(t_lo, t)
        else:
            t_hi = min(t_hi, t)
        if t_lo > t_hi + 1e-12:
            return None
    t_lo = min(max(t_lo, 0.0), 1.0)
    t_hi = min(max(t_hi, 0.0), 1.0)
    if t_lo > t_hi:
        return None
    return np.stack([a + t_lo * d, a + t_hi * d])


def intersect_convex(a: ConvexBody, b: ConvexBody) -> ConvexBody:
    """Intersection of two polygon bodies (Sutherland-Hodgman clipping).

    Raises EmptyBody when the intersection is empty.
    """
    a._require_polygon("intersect_convex")
    b._require_polygon("intersect_convex")
    na, nb = len(a.vertices), len(b.vertices)
    if na == 1 or nb == 1:
        pt, other = (a, b) if na == 1 else (b, a)
        if distance(pt.vertices[0], other) <= _EPS_BASE * other.scale * 10.0:
            return ConvexBody(pt.vertices)
        raise EmptyBody("point lies outside the other body")
    if na == 2 or nb == 2:
        seg, other = (a, b) if na == 2 else (b, a)
        if len(other.vertices) == 2:
            return _intersect_segments(seg.vertices, other.vertices)
        out = _clip_segment_by_polygon(seg.vertices, other)
        if out is None:
            raise EmptyBody("segment misses the body")
        return ConvexBody(out)

    eps = _EPS_BASE * max(a.scale, b.scale) * 10.0
    pts = [tuple(v) for v in a.vertices]
    clip = b.vertices
    for i in range(len(clip)):
        p0, p1 = clip[i], clip[(i + 1) % len(clip)]
        nrm = np.array([-(p1[1] - p0[1]), p1[0] - p0[0]])
        out = []
        m = len(pts)
        if m == 0:
            break
        side = [float(nrm @ (np.asarray(q) - p0)) for q in pts]
        for j in range(m):
            q0, s0 = np.asarray(pts[j]), side[j]
            q1, s1 = np.asarray(pts[(j + 1) % m]), side[(j + 1) % m]
            if s0 >= -eps:
                out.append(tuple(q0))
            if (s0 > eps and s1 < -eps) or (s0 < -eps and s1 > eps):
                t = s0 / (s0 - s1)
                out.append(tuple(q0 + t * (q1 - q0)))
        pts = out
    if not pts:
        raise EmptyBody("empty intersection")
    return ConvexBody(np.asarray(pts))


def _intersect_segments(s1: np.ndarray, s2: np.ndarray) -> ConvexBody:
    a, b = s1[0], s1[1]
    c, d = s2[0], s2[1]
    r = b - a
    s = d - c
    denom = float(r[0] * s[1] - r[1] * s[0])
    scale = max(1.0, float(np.max(np.abs(np.stack([s1, s2])))))
    if abs(denom) > _EPS_BASE * scale * scale:
        t = float(((c - a)[0] * s[1] - (c - a)[1] * s[0]) / denom)
        u = float(((c - a)[0] * r[1] - (c - a)[1] * r[0]) / denom)
        if -1e-12 <= t <= 1 + 1e-12 and -1e-12 <= u <= 1 + 1e-12:
            return ConvexBody((a + min(max(t, 0.0), 1.0) * r)[None, :])
        raise EmptyBody("segments do not meet")
    # parallel: collinear overlap or nothing
    if abs(float(r[0] * (c - a)[1] - r[1] * (c - a)[0])) > _EPS_BASE * scale * scale:
        raise EmptyBody("parallel segments")
    rr = float(r @ r)
    t0 = float((c - a) @ r) / rr
    t1 = float((d - a) @ r) / rr
    lo, hi = max(0.0, min(t0, t1)), min(1.0, max(t0, t1))
    if lo > hi + 1e-12:
        raise EmptyBody("collinear segments do not overlap")
    return ConvexBody(np.stack([a + lo * r, a + hi * r]))


def _exterior_angle_steiner(verts: np.ndarray) -> np.ndarray:
    """Closed-form planar Steiner point: vertices weighted by exterior
    angles over 2 pi. Valid for polygons with at least 3 vertices."""
    prv = np.roll(verts, 1, axis=0)
    nxt = np.roll(verts, -1, axis=0)
    inc = verts - prv
    out = nxt - verts
    ang = np.arctan2(
        inc[:, 0] * out[:, 1] - inc[:, 1] * out[:, 0],
        np.einsum("ij,ij->i", inc, out),
    )
    return (verts * ang[:, None]).sum(axis=0) / (2.0 * np.pi)


def _random_polygon(rng: np.random.Generator, center_scale: float = 6.0, spread: float = 2.5) -> ConvexBody:
    c = rng.uniform(-center_scale, center_scale, 2)
    k = int(rng.integers(3, 10))
    return ConvexBody(c[None, :] + rng.uniform(-spread, spread, (k, 2)))


def geometry_suite(plan=None, n_pairs: int = 200, quadrature: int = 3600) -> list:
    """Seeded property audit of the selection-map kernels.

    Checks, with the slacks stated next to each: the projection map is
    5-Lipschitz jointly in point and body (+1e-3 arc-discretization slack),
    the Steiner point is 2-Lipschitz in Hausdorff distance (5% quadrature
    slack) and lies in its body (1e-6), the reference triangle matches the
    exterior-angle closed form (2e-3), polygonized balls obey
    H(B(x,r),B(y,s)) <= |x-y|+|r-s| (5e-4), and hausdorff behaves as a
    metric (symmetry exact, triangle inequality 1e-9).
    """
    from .report import CheckReport
    from .sampling import SamplePlan

    plan = plan or SamplePlan()
    rng = plan.rng(11)
    reports: list[CheckReport] = []

    worst_proj, wit_proj = -np.inf, []
    worst_st, wit_st = -np.inf, []
    worst_member = -np.inf
    for i in range(n_pairs):
        K = _random_polygon(rng)
        if i % 2 == 0:
            D = ConvexBody(K.vertices + rng.normal(0.0, 0.3, K.vertices.shape))
        else:
            D = _random_polygon(rng)
        hKD = hausdorff(K, D)

        x = rng.uniform(-9.0, 9.0, 2)
        y = x + rng.normal(0.0, 0.5, 2) if i % 2 == 0 else rng.uniform(-9.0, 9.0, 2)
        lhs = hausdorff(proj_map(x, K), proj_map(y, D))
        gap = lhs - 5.0 * (hKD + float(np.linalg.norm(x - y)))
        if gap > worst_proj:
            worst_proj, wit_proj = float(gap), [{"pair": i, "hKD": float(hKD)}]

        sK = steiner(K, quadrature)
        sD = steiner(D, quadrature)
        gap = float(np.linalg.norm(sK - sD)) - 2.0 * 1.05 * hKD
        if gap > worst_st:
            worst_st, wit_st = float(gap), [{"pair": i, "hKD": float(hKD)}]
        worst_member = max(worst_member, distance(sK, K), distance(sD, D))
    reports.append(
        CheckReport("projection_lipschitz", worst_proj, "pass" if worst_proj <= 1e-3 else "fail", wit_proj)
    )
    reports.append(
        CheckReport("steiner_lipschitz", worst_st, "pass" if worst_st <= 1e-9 else "fail", wit_st)
    )
    reports.append(
        CheckReport(
            "steiner_membership", worst_member, "pass" if worst_member <= 1e-6 else "fail", []
        )
    )

    tri = ConvexBody(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    oracle = _exterior_angle_steiner(tri.vertices)
    tri_err = float(np.linalg.norm(steiner(tri, quadrature) - oracle))
    reports.append(
        CheckReport(
            "steiner_triangle_oracle",
            tri_err,
            "pass" if tri_err <= 2e-3 else "fail",
            [{"oracle": [float(oracle[0]), float(oracle[1])]}],
        )
    )

    worst_ball = -np.inf
    for _ in range(100):
        c1 = rng.uniform(-6.0, 6.0, 2)
        c2 = rng.uniform(-6.0, 6.0, 2)
        r1 = float(rng.uniform(0.2, 3.0))
        r2 = float(rng.uniform(0.2, 3.0))
        got = hausdorff(ball(c1, r1), ball(c2, r2))
        want = float(np.linalg.norm(c1 - c2)) + abs(r1 - r2)
        worst_ball = max(worst_ball, abs(got - want))
    reports.append(
        CheckReport("ball_hausdorff_bound", worst_ball, "pass" if worst_ball <= 5e-4 else "fail", [])
    )

    worst_metric = -np.inf
    for _ in range(50):
        A = _random_polygon(rng)
        B = _random_polygon(rng)
        C = _random_polygon(rng)
        if hausdorff(A, B) != hausdorff(B, A):
            worst_metric = np.inf
        worst_metric = max(worst_metric, hausdorff(A, C) - hausdorff(A, B) - hausdorff(B, C))
    reports.append(
        CheckReport("hausdorff_metric", worst_metric, "pass" if worst_metric <= 1e-9 else "fail", [])
    )
    return reports
