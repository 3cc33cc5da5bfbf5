//! Static histogram plot with the predicted semicircle density drawn on top.

use std::fmt::Write;

use hyperspectra::SemicircleLaw;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;

/// `edges` has one more entry than `masses`; bar heights are densities.
pub fn histogram_with_semicircle(edges: &[f64], masses: &[f64], law: Option<&SemicircleLaw>) -> String {
    let densities: Vec<f64> = masses
        .iter()
        .zip(edges.windows(2))
        .map(|(m, e)| m / (e[1] - e[0]))
        .collect();
    let mut lo = edges[0];
    let mut hi = edges[edges.len() - 1];
    if let Some(law) = law {
        lo = lo.min(-law.radius());
        hi = hi.max(law.radius());
    }
    let peak = law
        .map(|l| l.pdf(0.0))
        .into_iter()
        .chain(densities.iter().copied())
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let sx = |x: f64| MARGIN + (x - lo) / (hi - lo) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - y / peak * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (d, e) in densities.iter().zip(edges.windows(2)) {
        let (x0, x1) = (sx(e[0]), sx(e[1]));
        let y = sy(*d);
        let _ = writeln!(
            out,
            r#"<rect x="{x0:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" fill="steelblue" stroke="white" stroke-width="0.5"/>"#,
            (x1 - x0).max(0.0),
            (sy(0.0) - y).max(0.0)
        );
    }
    if let Some(law) = law {
        let steps = 400;
        let mut path = String::new();
        for i in 0..=steps {
            let x = lo + (hi - lo) * i as f64 / steps as f64;
            let _ = write!(path, "{}{:.3},{:.3} ", if i == 0 { "M" } else { "L" }, sx(x), sy(law.pdf(x)));
        }
        let _ = writeln!(out, r#"<path d="{}" fill="none" stroke="crimson" stroke-width="2"/>"#, path.trim_end());
    }
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/>"#,
        sy(0.0),
        WIDTH - MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{}" font-size="12" font-family="sans-serif">{lo:.3}</text>"#,
        HEIGHT - MARGIN / 3.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" font-family="sans-serif" text-anchor="end">{hi:.3}</text>"#,
        WIDTH - MARGIN,
        HEIGHT - MARGIN / 3.0
    );
    out.push_str("</svg>\n");
    out
}
