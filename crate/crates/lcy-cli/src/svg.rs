//! Static SVG rendering of a moment polygon: outline, integral lattice
//! dots, vertex markers, and one label per edge carrying the component
//! self-intersection and lattice length.

use lcy::delzant::Polygon;
use lcy::rat::{fmt_rat, Rat};
use std::fmt::Write as _;

const LATTICE_DOT_CAP: i64 = 2500;
const PAD: f64 = 1.0;

/// Rational to f64 through decimal strings, so coordinates of any size
/// degrade gracefully instead of overflowing an integer cast.
fn approx(r: &Rat) -> f64 {
    let n: f64 = r.numer().to_string().parse().unwrap_or(f64::INFINITY);
    let d: f64 = r.denom().to_string().parse().unwrap_or(f64::INFINITY);
    n / d
}

/// The drawing is a pure function of the polygon: fixed viewBox fitted to
/// the vertices, no timestamps, all coordinates printed with three decimals.
/// The vertical axis is flipped so the mathematical orientation reads
/// upward on screen.
pub fn polygon_svg(p: &Polygon) -> String {
    let pts: Vec<(f64, f64)> = p.vertices().iter().map(|(x, y)| (approx(x), approx(y))).collect();
    let min_x = pts.iter().map(|q| q.0).fold(f64::INFINITY, f64::min) - PAD;
    let max_x = pts.iter().map(|q| q.0).fold(f64::NEG_INFINITY, f64::max) + PAD;
    let min_y = pts.iter().map(|q| q.1).fold(f64::INFINITY, f64::min) - PAD;
    let max_y = pts.iter().map(|q| q.1).fold(f64::NEG_INFINITY, f64::max) + PAD;
    let (vw, vh) = (max_x - min_x, max_y - min_y);

    let mut out = String::new();
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.3} {:.3} {:.3} {:.3}\" width=\"640\" height=\"{:.0}\">\n",
        min_x,
        -max_y,
        vw,
        vh,
        640.0 * vh / vw
    );

    // lattice dots, skipped when the window holds too many
    let (gx0, gx1) = (min_x.ceil() as i64, max_x.floor() as i64);
    let (gy0, gy1) = (min_y.ceil() as i64, max_y.floor() as i64);
    if (gx1 - gx0 + 1).max(0) * (gy1 - gy0 + 1).max(0) <= LATTICE_DOT_CAP {
        for gx in gx0..=gx1 {
            for gy in gy0..=gy1 {
                let _ = write!(
                    out,
                    "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"0.060\" fill=\"#c8c8c8\"/>\n",
                    gx as f64, -gy as f64
                );
            }
        }
    }

    let points: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.3},{:.3}", -y)).collect();
    let _ = write!(
        out,
        "<polygon points=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"0.050\"/>\n",
        points.join(" ")
    );
    for (x, y) in &pts {
        let _ = write!(
            out,
            "<circle cx=\"{x:.3}\" cy=\"{:.3}\" r=\"0.090\" fill=\"#000000\"/>\n",
            -y
        );
    }

    // edge labels sit a little outside the midpoint, along the outward normal
    let bd = p.boundary_data();
    let k = pts.len();
    for i in 0..k {
        let (ax, ay) = pts[i];
        let (bx, by) = pts[(i + 1) % k];
        let (mx, my) = ((ax + bx) / 2.0, (ay + by) / 2.0);
        let (dx, dy) = (bx - ax, by - ay);
        let len = (dx * dx + dy * dy).sqrt().max(1e-9);
        let (lx, ly) = (mx + 0.45 * dy / len, my - 0.45 * dx / len);
        let _ = write!(
            out,
            "<text x=\"{lx:.3}\" y=\"{:.3}\" font-size=\"0.350\" text-anchor=\"middle\">s={}, a={}</text>\n",
            -ly,
            bd.self_ints[i],
            fmt_rat(&bd.lengths[i])
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use lcy::delzant::build_polygon;
    use lcy::rat::rat;

    #[test]
    fn rectangle_drawing_has_grid_dots_and_edge_labels() {
        let p = build_polygon(&[0, 0, 0, 0], &[rat(2, 1), rat(1, 1), rat(2, 1), rat(1, 1)])
            .unwrap();
        let s = polygon_svg(&p);
        assert!(s.starts_with("<svg"));
        assert!(s.contains("viewBox"));
        assert!(s.contains("<polygon points="));
        assert!(s.contains("s=0, a=2"));
        assert!(s.matches("<circle").count() > 10);
        assert_eq!(s, polygon_svg(&p));
    }

    #[test]
    fn grid_dots_capped_on_wide_polygons() {
        let p = build_polygon(
            &[0, 0, 0, 0],
            &[rat(1, 1), rat(3000, 1), rat(1, 1), rat(3000, 1)],
        )
        .unwrap();
        let s = polygon_svg(&p);
        // only the four vertex markers survive the cap
        assert_eq!(s.matches("<circle").count(), 4);
    }
}
