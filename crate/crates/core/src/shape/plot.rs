//! Deterministic CSV and SVG renderings of a region inside `[0, W]²`.

use std::fmt::Write as _;

use num::{Signed, Zero};

use super::region::{Point, Shape2};
use super::{FundamentalDomain, Region};
use crate::exactnum::{floor_rational, fmt_rational, q, qi, Rational};

pub const SVG_SIZE: i64 = 480;
pub const SVG_MARGIN: i64 = 40;
const PALETTE: [&str; 4] = ["#4e79a7", "#f28e2b", "#59a14f", "#b07aa1"];

/// One row per cell vertex: `cell,vertex_index,w1,w2`.
pub fn to_csv(region: &Region, w: &Rational) -> String {
    let mut out = String::from("cell,vertex_index,w1,w2\n");
    for (ci, shape) in region.vertices(w).iter().enumerate() {
        for (vi, p) in shape.vertices().iter().enumerate() {
            let _ = writeln!(out, "{ci},{vi},{},{}", fmt_rational(&p.0), fmt_rational(&p.1));
        }
    }
    out
}

/// Round to two decimals, halves away from zero.
fn fixed2(r: &Rational) -> String {
    let hundred = r.abs() * qi(100) + q(1, 2);
    let n = floor_rational(&hundred).expect("plot coordinates fit in i64");
    let sign = if r.is_negative() && n != 0 { "-" } else { "" };
    format!("{sign}{}.{:02}", n / 100, n % 100)
}

fn screen(p: &Point, w: &Rational) -> (String, String) {
    let span = qi(SVG_SIZE - 2 * SVG_MARGIN);
    let x = qi(SVG_MARGIN) + &span * &p.0 / w;
    let y = qi(SVG_SIZE - SVG_MARGIN) - &span * &p.1 / w;
    (fixed2(&x), fixed2(&y))
}

fn path(points: &[Point], w: &Rational, close: bool) -> String {
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let (x, y) = screen(p, w);
        let _ = write!(d, "{}{x} {y}", if i == 0 { "M" } else { " L" });
    }
    if close {
        d.push_str(" Z");
    }
    d
}

/// SVG with one path per cell and the fundamental-domain boundary lines.
pub fn to_svg(region: &Region, w: &Rational) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{SVG_SIZE}\" height=\"{SVG_SIZE}\" viewBox=\"0 0 {SVG_SIZE} {SVG_SIZE}\">"
    );
    let _ = writeln!(out, "<title>{} {:?} W={}</title>", region.domain, region.tag, fmt_rational(w));
    let z = Rational::zero();
    let frame = [
        (z.clone(), z.clone()),
        (w.clone(), z.clone()),
        (w.clone(), w.clone()),
        (z.clone(), w.clone()),
    ];
    let _ = writeln!(out, "<path d=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>", path(&frame, w, true));
    for (ci, shape) in region.vertices(w).iter().enumerate() {
        let color = PALETTE[ci % PALETTE.len()];
        match shape {
            Shape2::Polygon(v) => {
                let _ = writeln!(
                    out,
                    "<path d=\"{}\" fill=\"{color}\" fill-opacity=\"0.5\" stroke=\"{color}\" stroke-width=\"1\"/>",
                    path(v, w, true)
                );
            }
            Shape2::Segment(a, b) => {
                let _ = writeln!(
                    out,
                    "<path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"3\"/>",
                    path(&[a.clone(), b.clone()], w, false)
                );
            }
            Shape2::Point(p) => {
                let (x, y) = screen(p, w);
                let _ = writeln!(out, "<circle cx=\"{x}\" cy=\"{y}\" r=\"2\" fill=\"{color}\"/>");
            }
            Shape2::Empty => {}
        }
    }
    let slopes: &[i64] = match region.tag {
        FundamentalDomain::FullShape => &[1, 2],
        FundamentalDomain::HamiltonianShape => &[1],
    };
    for &s in slopes {
        let end = (w / qi(s), w.clone());
        let _ = writeln!(
            out,
            "<path d=\"{}\" fill=\"none\" stroke=\"#7f7f7f\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>",
            path(&[(z.clone(), z.clone()), end], w, false)
        );
    }
    out.push_str("</svg>\n");
    out
}
