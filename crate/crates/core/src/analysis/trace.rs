use std::f64::consts::{PI, TAU};
use std::path::Path;

use super::AnalysisError;

/// Fewest points accepted in a trace.
pub const MIN_TRACE_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceUnit {
    Pixel,
    Meter,
}

impl TraceUnit {
    pub fn name(&self) -> &'static str {
        match self {
            TraceUnit::Pixel => "pixel",
            TraceUnit::Meter => "meter",
        }
    }
}

/// Ordered `(x, y)` samples of one digitized curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    points: Vec<[f64; 2]>,
    pub unit: TraceUnit,
    pub origin_hint: Option<[f64; 2]>,
}

impl Trace {
    pub fn new(points: Vec<[f64; 2]>, unit: TraceUnit) -> Result<Self, AnalysisError> {
        if points.len() < MIN_TRACE_POINTS {
            return Err(AnalysisError::InsufficientData { got: points.len(), needed: MIN_TRACE_POINTS });
        }
        if let Some(i) = points.iter().position(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(AnalysisError::Parse { line: i + 2, message: "non-finite coordinate".into() });
        }
        if let Some(i) = points.windows(2).position(|w| w[0] == w[1]) {
            return Err(AnalysisError::Parse { line: i + 3, message: "duplicate of the previous point".into() });
        }
        Ok(Trace { points, unit, origin_hint: None })
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    /// Every coordinate multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Trace {
        Trace {
            points: self.points.iter().map(|p| [p[0] * s, p[1] * s]).collect(),
            unit: self.unit,
            origin_hint: self.origin_hint.map(|o| [o[0] * s, o[1] * s]),
        }
    }
}

/// Parses CSV text with an `x,y` header. Line numbers in errors are 1-based
/// and count the header.
pub fn parse_trace(text: &str, unit: TraceUnit) -> Result<Trace, AnalysisError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.split(',').map(str::trim).eq(["x", "y"]) => {}
        _ => return Err(AnalysisError::Parse { line: 1, message: "expected header `x,y`".into() }),
    }
    let mut points = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != 2 {
            return Err(AnalysisError::Parse {
                line: line_no,
                message: format!("expected 2 cells, found {}", cells.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| AnalysisError::Parse { line: line_no, message: format!("`{s}` is not a number") })
        };
        points.push([parse(cells[0])?, parse(cells[1])?]);
    }
    Trace::new(points, unit)
}

pub fn load_trace(path: &Path, unit: TraceUnit) -> Result<Trace, AnalysisError> {
    let text = std::fs::read_to_string(path).map_err(|e| AnalysisError::Io(format!("{}: {e}", path.display())))?;
    parse_trace(&text, unit)
}

/// Trace in polar form about `origin`, with `theta` unwrapped and strictly monotone.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarTrace {
    pub theta: Vec<f64>,
    pub r: Vec<f64>,
    pub origin: [f64; 2],
    /// Samples dropped as digitization jitter (0 or 1).
    pub dropped: usize,
}

impl PolarTrace {
    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }
}

fn wrap_pi(a: f64) -> f64 {
    // into (−π, π]
    let w = (a + PI).rem_euclid(TAU) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

/// Converts to polar coordinates, unwrapping the angle by accumulating
/// successive differences wrapped into `(−π, π]`.
///
/// The winding sense is taken from the net angle change. One sample that
/// fails to advance the angle is dropped as jitter; more than one means the
/// curve is not a single spiral arm.
pub fn to_polar(trace: &Trace, origin: [f64; 2]) -> Result<PolarTrace, AnalysisError> {
    let pts = trace.points();
    let mut theta = Vec::with_capacity(pts.len());
    let mut r = Vec::with_capacity(pts.len());
    let mut prev_raw = 0.0;
    for (i, p) in pts.iter().enumerate() {
        let (dx, dy) = (p[0] - origin[0], p[1] - origin[1]);
        let radius = dx.hypot(dy);
        if radius == 0.0 {
            return Err(AnalysisError::AtOrigin { index: i });
        }
        let raw = dy.atan2(dx);
        let t = if i == 0 { raw } else { theta[i - 1] + wrap_pi(raw - prev_raw) };
        prev_raw = raw;
        theta.push(t);
        r.push(radius);
    }

    let sense = (theta[theta.len() - 1] - theta[0]).signum();
    if sense == 0.0 || theta[theta.len() - 1] == theta[0] {
        return Err(AnalysisError::NotSingleArm { reversals: pts.len() });
    }
    let mut out = PolarTrace { theta: vec![theta[0]], r: vec![r[0]], origin, dropped: 0 };
    for (t, rad) in theta.into_iter().zip(r).skip(1) {
        if (t - out.theta[out.theta.len() - 1]) * sense > 0.0 {
            out.theta.push(t);
            out.r.push(rad);
        } else {
            out.dropped += 1;
        }
    }
    if out.dropped > 1 {
        return Err(AnalysisError::NotSingleArm { reversals: out.dropped });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spiral(a: f64, b: f64, t_max: f64, n: usize) -> Trace {
        let pts = (0..n)
            .map(|i| {
                let t = t_max * i as f64 / (n - 1) as f64;
                let r = a * (b * t).exp();
                [r * t.cos(), r * t.sin()]
            })
            .collect();
        Trace::new(pts, TraceUnit::Meter).unwrap()
    }

    #[test]
    fn parses_well_formed_csv() {
        let mut text = String::from("x,y\n");
        for i in 0..8 {
            text.push_str(&format!("{},{}\n", i as f64, (i * i) as f64));
        }
        let t = parse_trace(&text, TraceUnit::Pixel).unwrap();
        assert_eq!(t.points().len(), 8);
        assert_eq!(t.points()[3], [3.0, 9.0]);
    }

    #[test]
    fn header_only_is_insufficient() {
        assert!(matches!(parse_trace("x,y\n", TraceUnit::Meter), Err(AnalysisError::InsufficientData { got: 0, .. })));
    }

    #[test]
    fn bad_cell_names_its_line() {
        let text = "x,y\n1,2\n2,3\n3,4\nfoo,5\n5,6\n6,7\n7,8\n8,9\n";
        assert!(matches!(parse_trace(text, TraceUnit::Meter), Err(AnalysisError::Parse { line: 5, .. })));
        assert!(matches!(parse_trace("a,b\n", TraceUnit::Meter), Err(AnalysisError::Parse { line: 1, .. })));
    }

    #[test]
    fn consecutive_duplicates_rejected() {
        let mut pts: Vec<[f64; 2]> = (0..8).map(|i| [i as f64, 1.0]).collect();
        pts[4] = pts[3];
        assert!(Trace::new(pts, TraceUnit::Meter).is_err());
    }

    #[test]
    fn unit_circle_every_ten_degrees() {
        let pts = (0..36).map(|k| {
            let a = (10.0 * k as f64).to_radians();
            [a.cos(), a.sin()]
        });
        let p = to_polar(&Trace::new(pts.collect(), TraceUnit::Meter).unwrap(), [0.0, 0.0]).unwrap();
        for (k, (t, r)) in p.theta.iter().zip(&p.r).enumerate() {
            assert!((r - 1.0).abs() < 1e-15);
            assert!((t - (10.0 * k as f64).to_radians()).abs() < 1e-12);
        }
    }

    #[test]
    fn synthetic_spiral_radius_recovered() {
        let tr = spiral(1.0, 0.2, 4.0 * PI, 400);
        let p = to_polar(&tr, [0.0, 0.0]).unwrap();
        for (t, r) in p.theta.iter().zip(&p.r) {
            assert!((r - (0.2 * t).exp()).abs() <= 1e-12 * r);
        }
        assert!((p.theta.last().unwrap() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn zig_zag_is_not_a_single_arm() {
        let pts: Vec<[f64; 2]> = (0..12)
            .map(|k| {
                let a = if k % 2 == 0 { 0.1 * k as f64 } else { 0.1 * k as f64 - 0.3 };
                [a.cos(), a.sin()]
            })
            .collect();
        let err = to_polar(&Trace::new(pts, TraceUnit::Meter).unwrap(), [0.0, 0.0]).unwrap_err();
        assert!(matches!(err, AnalysisError::NotSingleArm { .. }));
    }

    #[test]
    fn single_jitter_sample_is_dropped() {
        let mut angles: Vec<f64> = (0..10).map(|k| 0.2 * k as f64).collect();
        angles[5] = 0.75; // behind sample 4 at 0.8
        let pts = angles.iter().map(|a| [a.cos(), a.sin()]).collect();
        let p = to_polar(&Trace::new(pts, TraceUnit::Meter).unwrap(), [0.0, 0.0]).unwrap();
        assert_eq!(p.dropped, 1);
        assert_eq!(p.len(), 9);
        assert!(p.theta.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn origin_on_trace_is_singular() {
        let pts: Vec<[f64; 2]> = (0..8).map(|i| [i as f64, 0.5 * i as f64]).collect();
        assert!(matches!(
            to_polar(&Trace::new(pts, TraceUnit::Meter).unwrap(), [0.0, 0.0]),
            Err(AnalysisError::AtOrigin { index: 0 })
        ));
    }
}
