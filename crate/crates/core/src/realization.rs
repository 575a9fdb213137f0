//! Straight-line realization of an embedded `M` on the unit sphere with
//! fragments routed inside or outside, and exact linking numbers of closed
//! polylines.
//!
//! The layout triangulates every face of `M` with a ring of new vertices and
//! a centre, draws the resulting 3-connected triangulation by barycentric
//! (Tutte) placement and lifts it by inverse stereographic projection.
//! Geometry checks and crossing signs run on coordinates snapped to an
//! integer grid, so every predicate is exact.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::{edge_of, RotationSystem};
use crate::error::{Error, Result};
use crate::graph::{Cycle, EdgeId, Graph, VertexId};
use crate::spatial::{Fragment, Placement, SphereSide};

pub type Point = [f64; 3];

/// Grid used for exact predicates: coordinates are multiplied by this and
/// rounded.
pub const SNAP_SCALE: f64 = (1u64 << 20) as f64;

/// Cycles longer than this are not scanned for linked pairs.
pub const MAX_CYCLE_LEN: usize = 10;

const INSIDE_RADIUS: f64 = 0.5;
const OUTSIDE_RADIUS: f64 = 2.0;
const RADIUS_STEP: f64 = 0.037;
const TILT: f64 = 0.2;
/// Seed of the projection directions tried by [`linking_number`].
pub const PROJECTION_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    /// An edge of `M`, drawn along the sphere.
    Sphere,
    /// A fragment routed off the sphere.
    Fragment(SphereSide),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoutedEdge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub kind: EdgeKind,
    /// From `u` to `v`, endpoints included.
    pub points: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpatialRealization {
    pub vertices: BTreeMap<VertexId, Point>,
    pub edges: BTreeMap<EdgeId, RoutedEdge>,
}

impl SpatialRealization {
    /// Points of edge `e` walked from `from`.
    pub fn oriented(&self, e: EdgeId, from: VertexId) -> Result<Vec<Point>> {
        let r = self.edges.get(&e).ok_or(Error::UnknownEdge(e))?;
        let mut pts = r.points.clone();
        if from == r.v {
            pts.reverse();
        } else if from != r.u {
            return Err(Error::UnknownVertex(from));
        }
        Ok(pts)
    }

    /// Closed polyline of a cycle, without the repeated first point.
    pub fn cycle_polyline(&self, c: &Cycle) -> Result<Vec<Point>> {
        let mut out = Vec::new();
        for (i, &e) in c.edges.iter().enumerate() {
            let pts = self.oriented(e, c.vertices[i])?;
            out.extend_from_slice(&pts[..pts.len() - 1]);
        }
        Ok(out)
    }

    /// Exact check that no two edge polylines meet except at a shared end
    /// vertex, and that no polyline meets itself.
    pub fn validate(&self) -> Result<()> {
        let segs: Vec<(EdgeId, usize, ISeg)> = self
            .edges
            .values()
            .flat_map(|r| {
                let pts: Vec<IPoint> = r.points.iter().map(snap).collect();
                (0..pts.len() - 1)
                    .map(move |i| (r.id, i, (pts[i], pts[i + 1])))
                    .collect::<Vec<_>>()
            })
            .collect();
        let nseg: BTreeMap<EdgeId, usize> = self
            .edges
            .values()
            .map(|r| (r.id, r.points.len() - 1))
            .collect();
        let bad = (0..segs.len()).into_par_iter().find_any(|&i| {
            let (ei, si, a) = segs[i];
            segs[i + 1..].iter().any(|&(ej, sj, b)| {
                let allowed = if ei == ej {
                    // consecutive segments of one polyline share a point
                    if sj == si + 1 {
                        Some(a.1)
                    } else {
                        None
                    }
                } else {
                    shared_end(
                        &self.edges[&ei],
                        si,
                        nseg[&ei],
                        &self.edges[&ej],
                        sj,
                        nseg[&ej],
                        a,
                        b,
                    )
                };
                segments_meet_outside(a, b, allowed)
            })
        });
        match bad {
            Some(i) => Err(Error::Degenerate(format!(
                "edge {} crosses another polyline",
                segs[i].0
            ))),
            None => Ok(()),
        }
    }

    pub fn to_obj(&self) -> String {
        let mut out = String::new();
        let mut index = 1usize;
        for r in self.edges.values() {
            let _ = writeln!(out, "o edge_{}", r.id);
            let first = index;
            for p in &r.points {
                let _ = writeln!(out, "v {:.9} {:.9} {:.9}", p[0], p[1], p[2]);
                index += 1;
            }
            let ids: Vec<String> = (first..index).map(|i| i.to_string()).collect();
            let _ = writeln!(out, "l {}", ids.join(" "));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("realization serializes")
    }
}

/// The point two segments may share: a graph vertex at the polyline ends.
#[allow(clippy::too_many_arguments)]
fn shared_end(
    ra: &RoutedEdge,
    si: usize,
    na: usize,
    rb: &RoutedEdge,
    sj: usize,
    nb: usize,
    a: ISeg,
    b: ISeg,
) -> Option<IPoint> {
    let ends_a = [
        (si == 0).then_some((ra.u, a.0)),
        (si + 1 == na).then_some((ra.v, a.1)),
    ];
    let ends_b = [
        (sj == 0).then_some((rb.u, b.0)),
        (sj + 1 == nb).then_some((rb.v, b.1)),
    ];
    for (va, pa) in ends_a.into_iter().flatten() {
        for (vb, _) in ends_b.into_iter().flatten() {
            if va == vb {
                return Some(pa);
            }
        }
    }
    None
}

/// Straight-line drawing of the sphere embedding `rs`, lifted to the unit
/// sphere. Each edge is a chain of `samples` chords.
pub fn layout(rs: &RotationSystem, samples: usize) -> Result<SpatialRealization> {
    let g = rs.graph();
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    if !rs.is_planar_embedding() {
        return Err(Error::NotSpherical);
    }
    let plane = plane_drawing(rs)?;
    let lift = |p: [f64; 2]| -> Point {
        let r2 = p[0] * p[0] + p[1] * p[1];
        [
            2.0 * p[0] / (r2 + 1.0),
            2.0 * p[1] / (r2 + 1.0),
            (r2 - 1.0) / (r2 + 1.0),
        ]
    };
    let vertices: BTreeMap<VertexId, Point> = g.vertices().map(|v| (v, lift(plane[&v]))).collect();
    let samples = samples.max(1);
    let edges = g
        .edges()
        .map(|e| {
            let (a, b) = (plane[&e.u], plane[&e.v]);
            let points = (0..=samples)
                .map(|k| {
                    let t = k as f64 / samples as f64;
                    lift([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])])
                })
                .collect();
            (
                e.id,
                RoutedEdge {
                    id: e.id,
                    u: e.u,
                    v: e.v,
                    kind: EdgeKind::Sphere,
                    points,
                },
            )
        })
        .collect();
    Ok(SpatialRealization { vertices, edges })
}

/// Barycentric drawing of `M` inside its face triangulation, oriented so
/// that counterclockwise angular order around each vertex is its rotation.
fn plane_drawing(rs: &RotationSystem) -> Result<BTreeMap<VertexId, [f64; 2]>> {
    let g = rs.graph();
    if g.edge_count() == 0 {
        return Ok(g.vertices().map(|v| (v, [0.0, 0.0])).collect());
    }
    // node ids: M vertices first, then ring and centre vertices per face
    let mverts: Vec<VertexId> = g.vertices().collect();
    let index: HashMap<VertexId, usize> = mverts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); mverts.len()];
    let link = |adj: &mut Vec<BTreeSet<usize>>, a: usize, b: usize| {
        adj[a].insert(b);
        adj[b].insert(a);
    };
    for e in g.edges() {
        link(&mut adj, index[&e.u], index[&e.v]);
    }
    let mut outer: Option<[usize; 3]> = None;
    for face in rs.trace_faces() {
        let l = face.darts.len();
        let ring0 = adj.len();
        adj.extend((0..=l).map(|_| BTreeSet::new()));
        let centre = ring0 + l;
        for i in 0..l {
            let r = ring0 + i;
            let rn = ring0 + (i + 1) % l;
            let x = index[&face.vertices[i]];
            let xn = index[&face.vertices[(i + 1) % l]];
            link(&mut adj, r, x);
            link(&mut adj, r, xn);
            if r != rn {
                link(&mut adj, r, rn);
            }
            link(&mut adj, r, centre);
        }
        if outer.is_none() {
            outer = Some([centre, ring0, ring0 + 1]);
        }
    }
    let outer = outer.expect("some face");
    let n = adj.len();
    let corners = [
        [0.0, 1.0],
        [-(3f64.sqrt()) / 2.0, -0.5],
        [3f64.sqrt() / 2.0, -0.5],
    ];
    let fixed: HashMap<usize, [f64; 2]> = outer.iter().copied().zip(corners).collect();
    let free: Vec<usize> = (0..n).filter(|i| !fixed.contains_key(i)).collect();
    let col: HashMap<usize, usize> = free.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let m = free.len();
    let mut a = DMatrix::<f64>::zeros(m, m);
    let mut bx = DVector::<f64>::zeros(m);
    let mut by = DVector::<f64>::zeros(m);
    for (k, &i) in free.iter().enumerate() {
        a[(k, k)] = adj[i].len() as f64;
        for &j in &adj[i] {
            match fixed.get(&j) {
                Some(p) => {
                    bx[k] += p[0];
                    by[k] += p[1];
                }
                None => a[(k, col[&j])] -= 1.0,
            }
        }
    }
    let lu = a.lu();
    let xs = lu
        .solve(&bx)
        .ok_or_else(|| Error::Degenerate("barycentric system is singular".into()))?;
    let ys = lu
        .solve(&by)
        .ok_or_else(|| Error::Degenerate("barycentric system is singular".into()))?;
    let pos = |i: usize| -> [f64; 2] {
        match fixed.get(&i) {
            Some(p) => *p,
            None => [xs[col[&i]], ys[col[&i]]],
        }
    };
    let mut drawing: BTreeMap<VertexId, [f64; 2]> =
        mverts.iter().map(|&v| (v, pos(index[&v]))).collect();
    match orientation_matches(rs, &drawing) {
        Some(true) => {}
        Some(false) => {
            for p in drawing.values_mut() {
                p[0] = -p[0];
            }
            if orientation_matches(rs, &drawing) != Some(true) {
                return Err(Error::Degenerate(
                    "drawing does not realize the rotation system".into(),
                ));
            }
        }
        None => {
            return Err(Error::Degenerate(
                "drawing does not realize the rotation system".into(),
            ))
        }
    }
    Ok(drawing)
}

/// `Some(true)` when the counterclockwise order of neighbours at every
/// vertex is the rotation, `Some(false)` when it is the reverse everywhere.
fn orientation_matches(
    rs: &RotationSystem,
    drawing: &BTreeMap<VertexId, [f64; 2]>,
) -> Option<bool> {
    let mut forward = true;
    let mut backward = true;
    for (&v, rot) in rs.rotations() {
        if rot.len() < 3 {
            continue;
        }
        let p = drawing[&v];
        let mut by_angle: Vec<(f64, u32)> = rot
            .iter()
            .map(|&d| {
                let q = drawing[&rs.head(d)];
                ((q[1] - p[1]).atan2(q[0] - p[0]), d)
            })
            .collect();
        by_angle.sort_by(|a, b| a.0.total_cmp(&b.0));
        let ccw: Vec<u32> = by_angle.iter().map(|x| x.1).collect();
        let cyc_eq = |a: &[u32], b: &[u32]| {
            (0..a.len()).any(|s| (0..a.len()).all(|i| a[(s + i) % a.len()] == b[i]))
        };
        let mut rev = ccw.clone();
        rev.reverse();
        forward &= cyc_eq(&ccw, rot);
        backward &= cyc_eq(&rev, rot);
    }
    match (forward, backward) {
        (true, _) => Some(true),
        (false, true) => Some(false),
        _ => None,
    }
}

fn norm(p: Point) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

fn scale(p: Point, s: f64) -> Point {
    [p[0] * s, p[1] * s, p[2] * s]
}

fn normalize(p: Point) -> Point {
    scale(p, 1.0 / norm(p))
}

fn cross3(a: Point, b: Point) -> Point {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn mix(a: Point, b: Point, t: f64) -> Point {
    [
        a[0] + t * (b[0] - a[0]),
        a[1] + t * (b[1] - a[1]),
        a[2] + t * (b[2] - a[2]),
    ]
}

/// Adds each fragment on its side as the chain `a, r·a', r·m, r·b', b`,
/// where `m` is the direction halfway between the ends and `a'`, `b'` lean
/// slightly towards it. Radii differ per fragment so chains stay disjoint.
pub fn route_fragments(
    sr: &SpatialRealization,
    fragments: &[Fragment],
    sides: &Placement,
) -> Result<SpatialRealization> {
    let mut out = sr.clone();
    let mut inside = 0usize;
    let mut outside = 0usize;
    for f in fragments {
        let side = *sides
            .get(&f.edge)
            .ok_or_else(|| Error::InvalidFragment(format!("no side for fragment {}", f.edge)))?;
        let (a, b) = match (sr.vertices.get(&f.a), sr.vertices.get(&f.b)) {
            (Some(a), Some(b)) => (*a, *b),
            _ => {
                return Err(Error::InvalidFragment(format!(
                    "fragment {} attaches outside M",
                    f.edge
                )))
            }
        };
        if out.edges.contains_key(&f.edge) {
            return Err(Error::DuplicateEdge(f.edge));
        }
        let r = match side {
            SphereSide::Inside => {
                inside += 1;
                INSIDE_RADIUS + RADIUS_STEP * (inside - 1) as f64
            }
            SphereSide::Outside => {
                outside += 1;
                OUTSIDE_RADIUS + RADIUS_STEP * (outside - 1) as f64
            }
        };
        let sum = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
        let mid = if norm(sum) > 1e-6 {
            normalize(sum)
        } else {
            // antipodal ends: any direction orthogonal to them
            let helper = if a[0].abs() < 0.9 {
                [1.0, 0.0, 0.0]
            } else {
                [0.0, 1.0, 0.0]
            };
            normalize(cross3(a, helper))
        };
        // Tilt the apex off the plane through a and b so that fragments with
        // coplanar ends do not meet.
        let count = match side {
            SphereSide::Inside => inside,
            SphereSide::Outside => outside,
        };
        let normal = cross3(a, b);
        let mid = if norm(normal) > 1e-9 {
            normalize(mix(mid, normalize(normal), TILT * count as f64))
        } else {
            mid
        };
        let lean = 0.15;
        let points = vec![
            a,
            scale(normalize(mix(a, mid, lean)), r),
            scale(mid, r),
            scale(normalize(mix(b, mid, lean)), r),
            b,
        ];
        out.edges.insert(
            f.edge,
            RoutedEdge {
                id: f.edge,
                u: f.a,
                v: f.b,
                kind: EdgeKind::Fragment(side),
                points,
            },
        );
    }
    Ok(out)
}

/// Layout plus routing, refining the sphere chords until the result passes
/// [`SpatialRealization::validate`].
pub fn realize(
    rs: &RotationSystem,
    fragments: &[Fragment],
    sides: &Placement,
) -> Result<SpatialRealization> {
    let mut last = None;
    for samples in [8, 16, 32, 64] {
        let sr = route_fragments(&layout(rs, samples)?, fragments, sides)?;
        match sr.validate() {
            Ok(()) => return Ok(sr),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

type IPoint = [i64; 3];
type ISeg = (IPoint, IPoint);

fn snap(p: &Point) -> IPoint {
    [
        (p[0] * SNAP_SCALE).round() as i64,
        (p[1] * SNAP_SCALE).round() as i64,
        (p[2] * SNAP_SCALE).round() as i64,
    ]
}

fn sub(a: IPoint, b: IPoint) -> [i128; 3] {
    [
        (a[0] - b[0]) as i128,
        (a[1] - b[1]) as i128,
        (a[2] - b[2]) as i128,
    ]
}

fn cross(a: [i128; 3], b: [i128; 3]) -> [i128; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [i128; 3], b: [i128; 3]) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn det(a: [i128; 3], b: [i128; 3], c: [i128; 3]) -> i128 {
    dot(cross(a, b), c)
}

/// Whether closed segments `a` and `b` share any point other than `allowed`
/// (which, when given, is an endpoint of both).
fn segments_meet_outside(a: ISeg, b: ISeg, allowed: Option<IPoint>) -> bool {
    let u = sub(a.1, a.0);
    let v = sub(b.1, b.0);
    let w0 = sub(b.0, a.0);
    if det(u, v, w0) != 0 {
        return false;
    }
    let n = cross(u, v);
    if n != [0, 0, 0] {
        // coplanar, not parallel: a single candidate point
        let o1 = det(u, w0, n).signum();
        let o2 = det(u, sub(b.1, a.0), n).signum();
        let o3 = det(v, sub(a.0, b.0), n).signum();
        let o4 = det(v, sub(a.1, b.0), n).signum();
        if o1 * o2 > 0 || o3 * o4 > 0 {
            return false;
        }
        return match allowed {
            Some(p) => !((a.0 == p || a.1 == p) && (b.0 == p || b.1 == p)),
            None => true,
        };
    }
    // parallel: they meet only if collinear and overlapping
    if cross(u, w0) != [0, 0, 0] {
        return false;
    }
    let uu = dot(u, u);
    let t0 = dot(w0, u);
    let t1 = dot(sub(b.1, a.0), u);
    let (lo, hi) = (t0.min(t1), t0.max(t1));
    if hi < 0 || lo > uu {
        return false;
    }
    // overlap is a single point exactly when they touch end to end
    let touch = hi == 0 || lo == uu;
    match allowed {
        Some(p) if touch => {
            let point = if hi == 0 { a.0 } else { a.1 };
            point != p
        }
        _ => true,
    }
}

/// Linking number of two disjoint closed polylines (first point not
/// repeated), from a generic projection direction drawn from a fixed seed.
pub fn linking_number(c1: &[Point], c2: &[Point]) -> Result<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(PROJECTION_SEED);
    for _ in 0..64 {
        let d = [
            rng.gen_range(-997..=997),
            rng.gen_range(-997..=997),
            rng.gen_range(-997..=997),
        ];
        match linking_number_along(c1, c2, d) {
            Err(Error::Degenerate(_)) => continue,
            other => return other,
        }
    }
    Err(Error::Degenerate(
        "no generic projection direction found".into(),
    ))
}

/// Linking number counted in the projection along the integer direction
/// `d`: half the sum of signed crossings. Fails with `Degenerate` when the
/// projection is not generic and with `CurvesIntersect` when the curves meet.
pub fn linking_number_along(c1: &[Point], c2: &[Point], d: [i64; 3]) -> Result<i64> {
    if c1.len() < 3 || c2.len() < 3 {
        return Err(Error::Input(
            "closed polylines need at least three points".into(),
        ));
    }
    if d == [0, 0, 0] {
        return Err(Error::Degenerate("zero projection direction".into()));
    }
    let p: Vec<IPoint> = c1.iter().map(snap).collect();
    let q: Vec<IPoint> = c2.iter().map(snap).collect();
    let dd = [d[0] as i128, d[1] as i128, d[2] as i128];
    let mut twice = 0i64;
    for i in 0..p.len() {
        let (p0, p1) = (p[i], p[(i + 1) % p.len()]);
        let a = sub(p1, p0);
        for j in 0..q.len() {
            let (q0, q1) = (q[j], q[(j + 1) % q.len()]);
            if segments_meet_outside((p0, p1), (q0, q1), None) {
                return Err(Error::CurvesIntersect);
            }
            let b = sub(q1, q0);
            // sides of the q-segment ends relative to the plane of a and d,
            // and of the p-segment ends relative to the plane of b and d
            let s1 = det(a, dd, sub(q0, p0)).signum();
            let s2 = det(a, dd, sub(q1, p0)).signum();
            let s3 = det(b, dd, sub(p0, q0)).signum();
            let s4 = det(b, dd, sub(p1, q0)).signum();
            if s1 == 0 || s2 == 0 || s3 == 0 || s4 == 0 {
                if s1 * s2 <= 0 && s3 * s4 <= 0 {
                    return Err(Error::Degenerate(
                        "projection passes through a vertex".into(),
                    ));
                }
                continue;
            }
            if s1 == s2 || s3 == s4 {
                continue;
            }
            // crossing sign: orientation of (a, b, p0 - q0), independent of d
            let sign = det(a, b, sub(p0, q0)).signum();
            if sign == 0 {
                return Err(Error::Degenerate("coplanar crossing".into()));
            }
            twice += sign as i64;
        }
    }
    if twice % 2 != 0 {
        return Err(Error::Degenerate("odd crossing sum".into()));
    }
    Ok(twice / 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkedPair {
    pub first: Cycle,
    pub second: Cycle,
    pub linking_number: i64,
}

/// Realizes `M` with `f` and `f2` on the given sides and scans vertex-disjoint
/// cycle pairs of `M + f + f2` (at most [`MAX_CYCLE_LEN`] edges each) that
/// together use both fragments, for a nonzero linking number. A pair using
/// one fragment or none always has linking number zero.
pub fn check_linked_pair(
    m: &Graph,
    rs: &RotationSystem,
    f: &Fragment,
    f2: &Fragment,
    sides: &Placement,
) -> Result<Option<LinkedPair>> {
    let frags = [*f, *f2];
    let sr = realize(rs, &frags, sides)?;
    let mut h = m.clone();
    for fr in &frags {
        h.insert_edge(crate::graph::Edge {
            id: fr.edge,
            u: fr.a,
            v: fr.b,
        })?;
    }
    let cycles = h.enumerate_cycles_up_to(MAX_CYCLE_LEN);
    let uses = |c: &Cycle| (c.contains_edge(f.edge), c.contains_edge(f2.edge));
    let mut pairs: Vec<(&Cycle, &Cycle)> = Vec::new();
    for (i, x) in cycles.iter().enumerate() {
        let vx: BTreeSet<VertexId> = x.vertices.iter().copied().collect();
        let (xf, xf2) = uses(x);
        for y in &cycles[i + 1..] {
            let (yf, yf2) = uses(y);
            if (xf || yf) && (xf2 || yf2) && y.vertices.iter().all(|v| !vx.contains(v)) {
                pairs.push((x, y));
            }
        }
    }
    pairs.sort_by_key(|(x, y)| (x.len() + y.len(), x.edges.clone(), y.edges.clone()));
    let found = pairs
        .par_iter()
        .map(|(x, y)| -> Result<Option<LinkedPair>> {
            let lk = linking_number(&sr.cycle_polyline(x)?, &sr.cycle_polyline(y)?)?;
            Ok((lk != 0).then(|| LinkedPair {
                first: (*x).clone(),
                second: (*y).clone(),
                linking_number: lk,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().next())
}

/// Faces of the drawing as sorted edge lists, read from the angular order of
/// the edges leaving each vertex in its tangent plane.
pub fn drawn_faces(rs: &RotationSystem, sr: &SpatialRealization) -> Vec<Vec<EdgeId>> {
    let mut rotations: BTreeMap<VertexId, Vec<u32>> = BTreeMap::new();
    for (&v, rot) in rs.rotations() {
        let p = sr.vertices[&v];
        // tangent frame at p
        let helper = if p[2].abs() < 0.9 {
            [0.0, 0.0, 1.0]
        } else {
            [1.0, 0.0, 0.0]
        };
        let e1 = normalize([
            helper[1] * p[2] - helper[2] * p[1],
            helper[2] * p[0] - helper[0] * p[2],
            helper[0] * p[1] - helper[1] * p[0],
        ]);
        let e2 = [
            p[1] * e1[2] - p[2] * e1[1],
            p[2] * e1[0] - p[0] * e1[2],
            p[0] * e1[1] - p[1] * e1[0],
        ];
        let mut by_angle: Vec<(f64, u32)> = rot
            .iter()
            .map(|&d| {
                let pts = sr.oriented(edge_of(d), v).expect("edge drawn");
                let q = pts[1];
                let w = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
                let (x, y) = (
                    w[0] * e1[0] + w[1] * e1[1] + w[2] * e1[2],
                    w[0] * e2[0] + w[1] * e2[1] + w[2] * e2[2],
                );
                (y.atan2(x), d)
            })
            .collect();
        by_angle.sort_by(|a, b| a.0.total_cmp(&b.0));
        rotations.insert(v, by_angle.into_iter().map(|x| x.1).collect());
    }
    let drawn = RotationSystem::new(rs.graph().clone(), rotations).expect("same darts");
    drawn
        .trace_faces()
        .into_iter()
        .map(|f| {
            let mut es: Vec<EdgeId> = f.darts.iter().map(|&d| edge_of(d)).collect();
            es.sort_unstable();
            es
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::find_embedding;

    fn circle(centre: Point, axis_a: Point, axis_b: Point, r: f64, n: usize) -> Vec<Point> {
        (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                let (c, s) = (t.cos() * r, t.sin() * r);
                [
                    centre[0] + c * axis_a[0] + s * axis_b[0],
                    centre[1] + c * axis_a[1] + s * axis_b[1],
                    centre[2] + c * axis_a[2] + s * axis_b[2],
                ]
            })
            .collect()
    }

    #[test]
    fn hopf_and_split_links() {
        let a = circle([0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1.0, 24);
        let b = circle([1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0], 1.0, 24);
        assert_eq!(linking_number(&a, &b).unwrap().abs(), 1);
        let far = circle([10.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1.0, 24);
        assert_eq!(linking_number(&a, &far).unwrap(), 0);
    }

    #[test]
    fn intersecting_curves_rejected() {
        let a = circle([0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1.0, 4);
        let b = circle([1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1.0, 4);
        assert!(matches!(
            linking_number(&a, &b),
            Err(Error::CurvesIntersect)
        ));
    }

    #[test]
    fn triangle_lies_on_sphere() {
        let g = Graph::complete(3);
        let sr = layout(&find_embedding(&g).unwrap(), 8).unwrap();
        assert_eq!(sr.vertices.len(), 3);
        assert!(sr.vertices.values().all(|p| (norm(*p) - 1.0).abs() < 1e-9));
        sr.validate().unwrap();
    }

    #[test]
    fn drawn_faces_match_traced_faces() {
        for g in [
            Graph::complete(4),
            crate::embedding::tests::octahedron(),
            Graph::complete_bipartite(2, 4),
        ] {
            let rs = find_embedding(&g).unwrap();
            let sr = layout(&rs, 8).unwrap();
            sr.validate().unwrap();
            let mut traced: Vec<Vec<EdgeId>> = rs
                .trace_faces()
                .into_iter()
                .map(|f| {
                    let mut es: Vec<EdgeId> = f.darts.iter().map(|&d| edge_of(d)).collect();
                    es.sort_unstable();
                    es
                })
                .collect();
            let mut drawn = drawn_faces(&rs, &sr);
            traced.sort();
            drawn.sort();
            assert_eq!(traced, drawn);
        }
    }

    #[test]
    fn fragments_leave_the_sphere() {
        let rs = find_embedding(&crate::embedding::tests::octahedron()).unwrap();
        let frags = [Fragment::new(100, 1, 4), Fragment::new(101, 2, 5)];
        let sides: Placement = [(100, SphereSide::Inside), (101, SphereSide::Outside)].into();
        let sr = realize(&rs, &frags, &sides).unwrap();
        let inner = &sr.edges[&100].points;
        assert!(inner[1..inner.len() - 1].iter().all(|p| norm(*p) < 1.0));
        let outer = &sr.edges[&101].points;
        assert!(outer[1..outer.len() - 1].iter().all(|p| norm(*p) > 1.0));
        // chords of the outside chain stay off the sphere as well
        for w in outer[1..outer.len() - 1].windows(2) {
            assert!(norm(mix(w[0], w[1], 0.5)) > 1.0);
        }
        assert!(sr.to_obj().contains("o edge_100"));
    }

    #[test]
    fn k6_conflicting_pair_links_on_one_side_only() {
        let (_, mps, rs) = crate::spatial::tests::k6_octahedral();
        let (f, f2) = (mps.fragments[0], mps.fragments[1]);
        let same: Placement = [(f.edge, SphereSide::Inside), (f2.edge, SphereSide::Inside)].into();
        let pair = check_linked_pair(&mps.m, &rs, &f, &f2, &same)
            .unwrap()
            .expect("linked pair");
        assert_eq!(pair.linking_number.abs(), 1);
        let apart: Placement =
            [(f.edge, SphereSide::Inside), (f2.edge, SphereSide::Outside)].into();
        assert!(check_linked_pair(&mps.m, &rs, &f, &f2, &apart)
            .unwrap()
            .is_none());
    }

    #[test]
    fn segment_predicates() {
        let s = |a: [i64; 3], b: [i64; 3]| (a, b);
        assert!(segments_meet_outside(
            s([0, 0, 0], [2, 0, 0]),
            s([1, -1, 0], [1, 1, 0]),
            None
        ));
        assert!(!segments_meet_outside(
            s([0, 0, 0], [2, 0, 0]),
            s([1, -1, 1], [1, 1, 1]),
            None
        ));
        assert!(!segments_meet_outside(
            s([0, 0, 0], [2, 0, 0]),
            s([2, 0, 0], [3, 1, 0]),
            Some([2, 0, 0])
        ));
        assert!(segments_meet_outside(
            s([0, 0, 0], [2, 0, 0]),
            s([2, 0, 0], [1, 0, 0]),
            Some([2, 0, 0])
        ));
        assert!(!segments_meet_outside(
            s([0, 0, 0], [2, 0, 0]),
            s([2, 0, 0], [3, 0, 0]),
            Some([2, 0, 0])
        ));
    }
}
