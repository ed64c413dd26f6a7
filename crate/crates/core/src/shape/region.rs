//! Finite unions of convex cells in the `(w1, w2)` plane.

use std::cmp::Ordering;
use std::fmt;

use num::{Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactnum::{fmt_rational, qi, Rational};

/// A point `(w1, w2)`.
pub type Point = (Rational, Rational);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Lt,
    Le,
    Eq,
}

/// `alpha·w1 + beta·w2 (<, ≤, =) gamma`, scaled so that `alpha`, `beta` are
/// coprime integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub rel: Relation,
}

impl Constraint {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational, rel: Relation) -> Self {
        assert!(!(alpha.is_zero() && beta.is_zero()), "constraint with zero normal");
        let l = alpha.denom().lcm(beta.denom());
        let a = alpha.numer() * (&l / alpha.denom());
        let b = beta.numer() * (&l / beta.denom());
        let g = a.gcd(&b);
        let f = Rational::new(l, g);
        Constraint {
            alpha: alpha * &f,
            beta: beta * &f,
            gamma: gamma * &f,
            rel,
        }
    }

    pub fn lt(alpha: Rational, beta: Rational, gamma: Rational) -> Self {
        Self::new(alpha, beta, gamma, Relation::Lt)
    }

    pub fn le(alpha: Rational, beta: Rational, gamma: Rational) -> Self {
        Self::new(alpha, beta, gamma, Relation::Le)
    }

    pub fn eq(alpha: Rational, beta: Rational, gamma: Rational) -> Self {
        Self::new(alpha, beta, gamma, Relation::Eq)
    }

    pub fn lhs(&self, p: &Point) -> Rational {
        &self.alpha * &p.0 + &self.beta * &p.1
    }

    pub fn holds(&self, p: &Point) -> bool {
        let v = self.lhs(p);
        match self.rel {
            Relation::Lt => v < self.gamma,
            Relation::Le => v <= self.gamma,
            Relation::Eq => v == self.gamma,
        }
    }

    /// Image under `w ↦ λw`.
    pub fn scaled(&self, lambda: &Rational) -> Self {
        Constraint {
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            gamma: &self.gamma * lambda,
            rel: self.rel,
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut lhs = String::new();
        for (c, name) in [(&self.alpha, "w1"), (&self.beta, "w2")] {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if lhs.is_empty() {
                if neg {
                    lhs.push('-');
                }
            } else {
                lhs.push_str(if neg { " - " } else { " + " });
            }
            if !c.abs().is_one() {
                lhs.push_str(&fmt_rational(&c.abs()));
                lhs.push(' ');
            }
            lhs.push_str(name);
        }
        let rel = match self.rel {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
        };
        write!(f, "{lhs} {rel} {}", fmt_rational(&self.gamma))
    }
}

impl Serialize for Constraint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Closure of a cell clipped to a box: a polygon, a segment or a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape2 {
    Empty,
    Point(Point),
    Segment(Point, Point),
    /// Counterclockwise, starting at the lexicographically least vertex.
    Polygon(Vec<Point>),
}

impl Shape2 {
    pub fn vertices(&self) -> Vec<Point> {
        match self {
            Shape2::Empty => Vec::new(),
            Shape2::Point(p) => vec![p.clone()],
            Shape2::Segment(p, q) => vec![p.clone(), q.clone()],
            Shape2::Polygon(v) => v.clone(),
        }
    }
}

fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Clip a convex polygon by `alpha·w1 + beta·w2 ≤ gamma`.
fn clip(poly: &[Point], alpha: &Rational, beta: &Rational, gamma: &Rational) -> Vec<Point> {
    let n = poly.len();
    let mut out = Vec::new();
    let val = |p: &Point| alpha * &p.0 + beta * &p.1 - gamma;
    for i in 0..n {
        let cur = &poly[i];
        let nxt = &poly[(i + 1) % n];
        let (vc, vn) = (val(cur), val(nxt));
        let cin = !vc.is_positive();
        let nin = !vn.is_positive();
        if cin {
            out.push(cur.clone());
        }
        if cin != nin {
            let t = &vc / (&vc - &vn);
            out.push((
                &cur.0 + &t * (&nxt.0 - &cur.0),
                &cur.1 + &t * (&nxt.1 - &cur.1),
            ));
        }
    }
    out
}

fn lex(a: &Point, b: &Point) -> Ordering {
    a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1))
}

fn canonical(points: Vec<Point>) -> Shape2 {
    let mut pts: Vec<Point> = Vec::new();
    for p in points {
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    match pts.len() {
        0 => return Shape2::Empty,
        1 => return Shape2::Point(pts.pop().unwrap()),
        _ => {}
    }
    let first = pts[0].clone();
    let far = pts
        .iter()
        .find(|p| **p != first)
        .cloned()
        .unwrap();
    if pts.iter().all(|p| cross(&first, &far, p).is_zero()) {
        let lo = pts.iter().min_by(|a, b| lex(a, b)).unwrap().clone();
        let hi = pts.iter().max_by(|a, b| lex(a, b)).unwrap().clone();
        return Shape2::Segment(lo, hi);
    }
    // Convex hull (monotone chain) gives CCW order without collinear points.
    pts.sort_by(lex);
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Shape2::Polygon(lower)
}

/// Closure of `{constraints} ∩ [0, w]²`.
pub fn clip_to_box(constraints: &[Constraint], w: &Rational) -> Shape2 {
    let z = Rational::zero();
    let mut poly = vec![
        (z.clone(), z.clone()),
        (w.clone(), z.clone()),
        (w.clone(), w.clone()),
        (z.clone(), w.clone()),
    ];
    for c in constraints {
        poly = clip(&poly, &c.alpha, &c.beta, &c.gamma);
        if c.rel == Relation::Eq {
            poly = clip(&poly, &-&c.alpha, &-&c.beta, &-&c.gamma);
        }
        if poly.is_empty() {
            return Shape2::Empty;
        }
    }
    canonical(poly)
}

/// A candidate relative-interior point of the closure.
fn inner_point(shape: &Shape2) -> Option<Point> {
    match shape {
        Shape2::Segment(p, q) => {
            let two = qi(2);
            Some(((&p.0 + &q.0) / &two, (&p.1 + &q.1) / &two))
        }
        Shape2::Polygon(v) => {
            let n = qi(v.len() as i64);
            let sx: Rational = v.iter().map(|p| p.0.clone()).sum();
            let sy: Rational = v.iter().map(|p| p.1.clone()).sum();
            Some((sx / &n, sy / &n))
        }
        _ => None,
    }
}

/// A nonempty convex cell with a verified relative-interior point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub constraints: Vec<Constraint>,
    #[serde(serialize_with = "ser_point")]
    pub interior_point: Point,
}

fn ser_point<S: serde::Serializer>(p: &Point, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&fmt_rational(&p.0))?;
    seq.serialize_element(&fmt_rational(&p.1))?;
    seq.end()
}

impl Cell {
    /// Build the cell if it has a relative-interior point inside `[0, probe]²`.
    pub fn try_new(constraints: Vec<Constraint>, probe: &Rational) -> Option<Cell> {
        let shape = clip_to_box(&constraints, probe);
        let p = inner_point(&shape)?;
        constraints.iter().all(|c| c.holds(&p)).then_some(Cell {
            constraints,
            interior_point: p,
        })
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.constraints.iter().all(|c| c.holds(p))
    }

    pub fn is_one_dimensional(&self) -> bool {
        self.constraints.iter().any(|c| c.rel == Relation::Eq)
    }

    pub fn closure_in_box(&self, w: &Rational) -> Shape2 {
        clip_to_box(&self.constraints, w)
    }

    pub fn scaled(&self, lambda: &Rational) -> Cell {
        Cell {
            constraints: self.constraints.iter().map(|c| c.scaled(lambda)).collect(),
            interior_point: (&self.interior_point.0 * lambda, &self.interior_point.1 * lambda),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::q;

    #[test]
    fn clip_square_by_diagonal() {
        let c = [Constraint::le(qi(2), qi(-1), qi(0)), Constraint::lt(qi(1), qi(0), qi(1))];
        let s = clip_to_box(&c, &qi(5));
        assert_eq!(
            s,
            Shape2::Polygon(vec![(qi(0), qi(0)), (qi(1), qi(2)), (qi(1), qi(5)), (qi(0), qi(5))])
        );
    }

    #[test]
    fn equality_gives_segment() {
        let c = [Constraint::eq(qi(1), qi(-1), qi(0)), Constraint::lt(qi(1), qi(0), q(1, 2))];
        assert_eq!(
            clip_to_box(&c, &qi(3)),
            Shape2::Segment((qi(0), qi(0)), (q(1, 2), q(1, 2)))
        );
    }

    #[test]
    fn degenerate_cell_is_rejected() {
        // {w1 ≥ 1/3, w2 ≥ 2w1, w1 + w2 < 1} is empty.
        let c = vec![
            Constraint::le(qi(-1), qi(0), q(-1, 3)),
            Constraint::le(qi(2), qi(-1), qi(0)),
            Constraint::lt(qi(1), qi(1), qi(1)),
        ];
        assert!(Cell::try_new(c, &qi(10)).is_none());
    }

    #[test]
    fn display() {
        let c = Constraint::lt(q(1, 2), q(1, 4), qi(1));
        assert_eq!(c.to_string(), "2 w1 + w2 < 4");
        assert_eq!(Constraint::le(qi(2), qi(-1), qi(0)).to_string(), "2 w1 - w2 <= 0");
        assert_eq!(Constraint::lt(qi(-3), qi(0), qi(0)).to_string(), "-w1 < 0");
    }
}
