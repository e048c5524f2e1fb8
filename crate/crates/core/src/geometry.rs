//! Two-source merging seen as points in the plane.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::distance::{DistanceKind, DistanceVector};
use crate::error::{Error, Result};
use crate::formula::{Model, ModelSet};
use crate::merge::Instance;
use crate::weights::WeightVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: u64,
    pub y: u64,
}

impl Point2 {
    pub fn new(x: u64, y: u64) -> Self {
        Point2 { x, y }
    }

    pub fn from_vector(d: &DistanceVector) -> Result<Self> {
        if d.len() != 2 {
            return Err(Error::Arity { expected: 2, found: d.len() });
        }
        Ok(Point2::new(d.get(0), d.get(1)))
    }

    /// Componentwise `self <= other`.
    pub fn dominates(&self, other: &Point2) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    pub fn strictly_dominates(&self, other: &Point2) -> bool {
        self.dominates(other) && self != other
    }
}

/// `a x + b y + c = 0`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line2 {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
}

fn rat(v: i128) -> BigRational {
    BigRational::from_integer(v.into())
}

impl Line2 {
    pub fn new(a: BigRational, b: BigRational, c: BigRational) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::OutOfRange("degenerate line".into()));
        }
        Ok(Line2 { a, b, c })
    }

    pub fn through(p: &Point2, q: &Point2) -> Result<Self> {
        let (px, py, qx, qy) = (p.x as i128, p.y as i128, q.x as i128, q.y as i128);
        let a = qy - py;
        let b = px - qx;
        Line2::new(rat(a), rat(b), rat(-(a * px + b * py)))
    }

    pub fn eval(&self, p: &Point2) -> BigRational {
        &self.a * rat(p.x as i128) + &self.b * rat(p.y as i128) + &self.c
    }
}

/// True when `p` and the origin lie strictly on opposite sides of `l`.
/// Points on the line are not separated.
pub fn separates_from_origin(l: &Line2, p: &Point2) -> Result<bool> {
    if l.a.is_zero() && l.b.is_zero() {
        return Err(Error::OutOfRange("degenerate line".into()));
    }
    let v = l.eval(p);
    Ok(!v.is_zero() && !l.c.is_zero() && v.is_positive() != l.c.is_positive())
}

/// True when `p` lies strictly on the same side of `l` as the origin.
fn strictly_origin_side(l: &Line2, p: &Point2) -> bool {
    let v = l.eval(p);
    !v.is_zero() && !l.c.is_zero() && v.is_positive() == l.c.is_positive()
}

fn cross(o: &Point2, a: &Point2, b: &Point2) -> i128 {
    let (ox, oy) = (o.x as i128, o.y as i128);
    (a.x as i128 - ox) * (b.y as i128 - oy) - (a.y as i128 - oy) * (b.x as i128 - ox)
}

fn staircase(points: &BTreeSet<Point2>) -> Vec<Point2> {
    // sorted by x then y: keep a point iff its y beats every earlier y
    let mut out: Vec<Point2> = Vec::new();
    for p in points {
        if out.last().is_none_or(|last| p.y < last.y) {
            out.push(*p);
        }
    }
    out
}

/// Points of the convex hull that face the origin, including points lying
/// in the middle of a hull edge. Points reachable only along the
/// axis-parallel closing rays are not included.
pub fn visible_hull(points: &BTreeSet<Point2>) -> BTreeSet<Point2> {
    let mut chain: Vec<Point2> = Vec::new();
    for p in staircase(points) {
        while chain.len() >= 2 && cross(&chain[chain.len() - 2], &chain[chain.len() - 1], &p) < 0 {
            chain.pop();
        }
        chain.push(p);
    }
    chain.into_iter().collect()
}

/// Two-phase selection for two-formula profiles: drop strictly dominated
/// points, then drop every point lying behind a segment between two others.
pub fn algorithm1(inst: &Instance, kind: &DistanceKind) -> Result<ModelSet> {
    if inst.m() != 2 {
        return Err(Error::Arity { expected: 2, found: inst.m() });
    }
    let points = inst
        .points(kind)?
        .into_iter()
        .map(|(model, d)| Ok((model, Point2::from_vector(&d)?)))
        .collect::<Result<Vec<(Model, Point2)>>>()?;
    let kept = algorithm1_points(&points.iter().map(|(_, p)| *p).collect());
    Ok(points
        .into_iter()
        .filter(|(_, p)| kept.contains(p))
        .map(|(model, _)| model)
        .collect())
}

/// Point-level core of [`algorithm1`].
pub fn algorithm1_points(points: &BTreeSet<Point2>) -> BTreeSet<Point2> {
    let mut remaining: Vec<Point2> = points.iter().copied().collect();
    loop {
        let next: Vec<Point2> = remaining
            .iter()
            .filter(|p| !remaining.iter().any(|q| q.strictly_dominates(p)))
            .copied()
            .collect();
        if next.len() == remaining.len() {
            break;
        }
        remaining = next;
    }
    let mut excluded = BTreeSet::new();
    for i in &remaining {
        'search: for j in &remaining {
            if j == i {
                continue;
            }
            let ij = Line2::through(i, j).expect("distinct points");
            for k in &remaining {
                if k == i || k == j {
                    continue;
                }
                let ik = Line2::through(i, k).expect("distinct points");
                // `i` sits behind segment jk: each of j, k is strictly on the
                // origin side of the line joining `i` to the other
                if strictly_origin_side(&ij, k) && strictly_origin_side(&ik, j) {
                    excluded.insert(*i);
                    break 'search;
                }
            }
        }
    }
    remaining.into_iter().filter(|p| !excluded.contains(p)).collect()
}

/// Finite weight set sufficient for two-formula merging: the normal of the
/// line through every incomparable pair, plus two axis-limit vectors.
pub fn critical_weight_set(points: &BTreeSet<Point2>) -> Vec<WeightVector> {
    let max = points.iter().map(|p| p.x.max(p.y)).max().unwrap_or(0);
    let k = 1 + 2 * max;
    let mut out: BTreeSet<(u64, u64)> = BTreeSet::from([(1, k), (k, 1)]);
    let pts: Vec<&Point2> = points.iter().collect();
    for (a, p) in pts.iter().enumerate() {
        for q in &pts[a + 1..] {
            if p.dominates(q) || q.dominates(p) {
                continue;
            }
            let wx = p.y.abs_diff(q.y);
            let wy = p.x.abs_diff(q.x);
            let g = wx.gcd(&wy);
            out.insert((wx / g, wy / g));
        }
    }
    out.into_iter()
        .map(|(a, b)| WeightVector::from_integers(&[a, b]).expect("positive entries"))
        .collect()
}

const SIZE: u64 = 600;
const MARGIN: u64 = 40;

/// Deterministic SVG: axes, then the visible hull polyline, then one circle
/// per point (filled when selected).
pub fn svg_string(points: &BTreeSet<Point2>, selected: &BTreeSet<Point2>) -> String {
    let max = points.iter().map(|p| p.x.max(p.y)).max().unwrap_or(0).max(1);
    let span = SIZE - 2 * MARGIN;
    let sx = |x: u64| MARGIN as f64 + (x as f64) * span as f64 / max as f64;
    let sy = |y: u64| (SIZE - MARGIN) as f64 - (y as f64) * span as f64 / max as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let (x0, y0, end) = (MARGIN, SIZE - MARGIN, SIZE - MARGIN / 2);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{end}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{}" stroke="black"/>"#, MARGIN / 2);
    let hull: Vec<String> = visible_hull(points)
        .iter()
        .map(|p| format!("{:.2},{:.2}", sx(p.x), sy(p.y)))
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="gray" stroke-dasharray="4 4"/>"#,
        hull.join(" ")
    );
    for p in points {
        let fill = if selected.contains(p) { "black" } else { "none" };
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="5" fill="{fill}" stroke="black"><title>[{},{}]</title></circle>"#,
            sx(p.x),
            sy(p.y),
            p.x,
            p.y
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn render_svg(points: &BTreeSet<Point2>, selected: &BTreeSet<Point2>, path: &Path) -> Result<()> {
    std::fs::write(path, svg_string(points, selected))?;
    Ok(())
}
