//! Bracketed golden-section search, used as an independent check on closed-form optima.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Minimizes a unimodal `f` on `[lo, hi]` until the bracket shrinks below `rel_tol * |x|`.
///
/// For smooth minima the location is only resolvable to about `sqrt(f64::EPSILON)`
/// relative, because `f` is flat to second order there.
pub fn golden_section(f: impl Fn(f64) -> f64, lo: f64, hi: f64, rel_tol: f64) -> Result<Minimum> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::invalid(
            "bracket",
            format!("need finite lo < hi, got [{lo}, {hi}]"),
        ));
    }
    if rel_tol.is_nan() || rel_tol <= 0.0 {
        return Err(Error::invalid("rel_tol", "must be positive"));
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iterations = 0;
    while (b - a) > rel_tol * (c.abs() + d.abs()).max(f64::MIN_POSITIVE) && iterations < 500 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }
    let (x, value) = if fc < fd { (c, fc) } else { (d, fd) };
    if !value.is_finite() {
        return Err(Error::invalid("objective", format!("non-finite value {value} at {x}")));
    }
    Ok(Minimum { x, value, iterations })
}

/// Golden-section search in `ln x` over `[lo, hi]`, for scale parameters such as couplings.
pub fn golden_section_log(f: impl Fn(f64) -> f64, lo: f64, hi: f64, rel_tol: f64) -> Result<Minimum> {
    if lo.is_nan() || lo <= 0.0 {
        return Err(Error::invalid("bracket", "log search needs lo > 0"));
    }
    let m = golden_section(|u| f(u.exp()), lo.ln(), hi.ln(), rel_tol)?;
    Ok(Minimum { x: m.x.exp(), ..m })
}
