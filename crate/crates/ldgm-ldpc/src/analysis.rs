//! Closed-form and numerical analysis of the compound ensemble: binary
//! entropy/KL algebra, the induced LDGM codeword weight, finite-m and
//! asymptotic LDPC weight enumerators, the minimum-distance threshold, the
//! channel error-exponent condition, and the Wyner-Ziv / information-
//! embedding rate envelopes.
//!
//! All log-domain quantities are in bits (base 2). Impossible weights
//! (zero expected codeword count) are reported as `f64::NEG_INFINITY`,
//! the distinguished sentinel; they are never approximated by large
//! negative finite values.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid enumerator parameters: {0}")]
    InvalidParams(String),
    #[error("no positive minimum-distance threshold: A(v) > 0 for small v")]
    NoPositiveThreshold,
}

fn check_unit(name: &str, t: f64) -> Result<(), AnalysisError> {
    if !(0.0..=1.0).contains(&t) || t.is_nan() {
        return Err(AnalysisError::Domain(format!(
            "{name} = {t} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Entropy of a Bernoulli(`t`) bit, in bits; `0 log 0 = 0`.
pub fn binary_entropy(t: f64) -> Result<f64, AnalysisError> {
    check_unit("t", t)?;
    Ok(entropy_unchecked(t))
}

fn entropy_unchecked(t: f64) -> f64 {
    let mut h = 0.0;
    if t > 0.0 {
        h -= t * t.log2();
    }
    if t < 1.0 {
        h -= (1.0 - t) * (1.0 - t).log2();
    }
    h
}

/// Relative entropy D(a || b) between Bernoulli laws, in bits.
///
/// Defined for a in [0,1] and b in [0,1]; when b is degenerate and a
/// differs, the divergence is `f64::INFINITY`.
pub fn binary_kl(a: f64, b: f64) -> Result<f64, AnalysisError> {
    check_unit("a", a)?;
    check_unit("b", b)?;
    if a == b {
        return Ok(0.0);
    }
    if b == 0.0 || b == 1.0 {
        return Ok(f64::INFINITY);
    }
    let mut d = 0.0;
    if a > 0.0 {
        d += a * (a / b).log2();
    }
    if a < 1.0 {
        d += (1.0 - a) * ((1.0 - a) / (1.0 - b)).log2();
    }
    Ok(d)
}

/// Flip probability of the XOR of independent Bernoulli(a) and
/// Bernoulli(b) bits: `a(1-b) + b(1-a)`.
pub fn bernoulli_convolve(a: f64, b: f64) -> Result<f64, AnalysisError> {
    check_unit("a", a)?;
    check_unit("b", b)?;
    Ok(a * (1.0 - b) + b * (1.0 - a))
}

/// Bernoulli parameter of an LDGM parity bit when the information word
/// has one-fraction `v`: `(1 - (1-2v)^gamma_t) / 2`.
pub fn induced_weight(v: f64, gamma_t: u32) -> Result<f64, AnalysisError> {
    check_unit("v", v)?;
    if gamma_t < 1 {
        return Err(AnalysisError::Domain("gamma_t must be >= 1".into()));
    }
    Ok(0.5 * (1.0 - (1.0 - 2.0 * v).powi(gamma_t as i32)))
}

// ============================================================================
// Weight enumerators
// ============================================================================

/// Base-2 log of a positive big integer, accurate to ~1e-15 relative.
fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return (x.to_u64().expect("fits") as f64).log2();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_u64().expect("53 bits fit");
    (top as f64).log2() + shift as f64
}

fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut res = BigUint::one();
    for i in 0..k {
        res = res * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    res
}

/// Coefficients (even degrees only are nonzero) of
/// `g(x) = ((1+x)^gamma_c + (1-x)^gamma_c) / 2`.
fn even_binomials(gamma_c: u32) -> Vec<(usize, BigUint)> {
    (0..=gamma_c as usize)
        .step_by(2)
        .map(|i| (i, binomial_big(gamma_c as usize, i)))
        .collect()
}

/// Coefficients 0..=max_degree of `g(x)^exponent`, exactly.
fn g_power_coeffs(gamma_c: u32, exponent: usize, max_degree: usize) -> Vec<BigUint> {
    let base = even_binomials(gamma_c);
    let mut coeffs = vec![BigUint::zero(); max_degree + 1];
    coeffs[0] = BigUint::one();
    let mut top = 0usize;
    for _ in 0..exponent {
        let new_top = (top + gamma_c as usize).min(max_degree);
        let mut next = vec![BigUint::zero(); max_degree + 1];
        for d in 0..=top {
            if coeffs[d].is_zero() {
                continue;
            }
            for (j, c) in &base {
                if d + j <= max_degree {
                    next[d + j] += &coeffs[d] * c;
                }
            }
        }
        coeffs = next;
        top = new_top;
    }
    coeffs
}

fn check_enumerator_params(m: usize, gamma_v: u32, gamma_c: u32) -> Result<(), AnalysisError> {
    if gamma_c == 0 || !gamma_c.is_multiple_of(2) {
        return Err(AnalysisError::InvalidParams(format!(
            "gamma_c must be positive and even, got {gamma_c}"
        )));
    }
    if gamma_v > 0 && !m.is_multiple_of(gamma_c as usize) {
        return Err(AnalysisError::InvalidParams(format!(
            "stratified ensemble needs gamma_c ({gamma_c}) to divide m ({m})"
        )));
    }
    Ok(())
}

/// Per-symbol log2 of the expected number of weight-`weight` codewords of
/// a (gamma_v, gamma_c)-regular LDPC code of length `m`:
/// `(1/m) log2 [ C(m,l) (N(l)/C(m,l))^gamma_v ]` with `N(l)` the
/// coefficient of `x^l` in `g(x)^(m/gamma_c)`.
///
/// Returns `f64::NEG_INFINITY` when the expectation is exactly zero
/// (parity-impossible weights). `gamma_v = 0` means no parity constraints
/// at all, so the count is just `C(m, l)`.
pub fn finite_weight_enumerator(
    m: usize,
    gamma_v: u32,
    gamma_c: u32,
    weight: usize,
) -> Result<f64, AnalysisError> {
    let values = finite_enumerator_values(m, gamma_v, gamma_c, weight)?;
    Ok(values[weight])
}

/// Batch form of [`finite_weight_enumerator`]: per-symbol log2 expected
/// counts for every weight `0..=max_weight`, sharing one exact polynomial
/// expansion.
pub fn finite_enumerator_values(
    m: usize,
    gamma_v: u32,
    gamma_c: u32,
    max_weight: usize,
) -> Result<Vec<f64>, AnalysisError> {
    check_enumerator_params(m, gamma_v, gamma_c)?;
    if max_weight > m {
        return Err(AnalysisError::InvalidParams(format!(
            "weight {max_weight} exceeds block length {m}"
        )));
    }
    let n_coeffs = if gamma_v > 0 {
        g_power_coeffs(gamma_c, m / gamma_c as usize, max_weight)
    } else {
        Vec::new()
    };
    let values = (0..=max_weight)
        .map(|l| {
            let log_c = log2_biguint(&binomial_big(m, l));
            if gamma_v == 0 {
                return log_c / m as f64;
            }
            if n_coeffs[l].is_zero() {
                return f64::NEG_INFINITY;
            }
            let log_n = log2_biguint(&n_coeffs[l]);
            (log_c + gamma_v as f64 * (log_n - log_c)) / m as f64
        })
        .collect();
    Ok(values)
}

/// The expected codeword count itself (not log-domain); intended for
/// desk-scale `m`, where it fits comfortably in an f64.
pub fn finite_weight_expectation(
    m: usize,
    gamma_v: u32,
    gamma_c: u32,
    weight: usize,
) -> Result<f64, AnalysisError> {
    let log = finite_weight_enumerator(m, gamma_v, gamma_c, weight)?;
    if log == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    Ok((log * m as f64).exp2())
}

/// `log2 g(e^u)` computed stably in log space; `gamma_c` must be even so
/// `(1-x)^gamma_c = |1-x|^gamma_c`.
fn log2_g(u: f64, gamma_c: u32) -> f64 {
    let gc = gamma_c as f64;
    let x = u.exp();
    let a = gc * x.ln_1p();
    let b = if x < 1.0 {
        gc * (-x).ln_1p()
    } else if x > 1.0 {
        gc * (x - 1.0).ln()
    } else {
        f64::NEG_INFINITY
    };
    let max = a.max(b);
    let lse = max + ((a - max).exp() + (b - max).exp()).ln();
    (lse - std::f64::consts::LN_2) / std::f64::consts::LN_2
}

/// Asymptotic per-symbol log2 weight enumerator of the
/// (gamma_v, gamma_c)-regular ensemble:
/// `A(v) = (1-gamma_v) h(v) + (gamma_v/gamma_c) inf_{x>0} [log2 g(x) - v gamma_c log2 x]`.
///
/// The infimum is solved by golden-section search over `log x` in
/// [-40, 40] (the objective is convex there) to interval width 1e-10.
/// `gamma_v = 0` means no parity constraints, giving `A(v) = h(v)`.
pub fn asymptotic_weight_enumerator(
    gamma_v: u32,
    gamma_c: u32,
    v: f64,
) -> Result<f64, AnalysisError> {
    check_unit("v", v)?;
    if gamma_v == 0 {
        return Ok(entropy_unchecked(v));
    }
    if gamma_c == 0 || !gamma_c.is_multiple_of(2) {
        return Err(AnalysisError::InvalidParams(format!(
            "gamma_c must be positive and even, got {gamma_c}"
        )));
    }
    if v == 0.0 || v == 1.0 {
        return Ok(0.0);
    }
    let gc = gamma_c as f64;
    let objective = |u: f64| log2_g(u, gamma_c) - v * gc * u / std::f64::consts::LN_2;
    let inf = golden_section_min(objective, -40.0, 40.0, 1e-10);
    Ok((1.0 - gamma_v as f64) * entropy_unchecked(v) + gamma_v as f64 / gc * inf)
}

fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    f(0.5 * (a + b))
}

/// Largest `nu` such that `A(v) <= 0` on `(0, nu]`, by bisection to 1e-8.
///
/// Families whose enumerator is already positive at arbitrarily small
/// weights (`gamma_v <= 2`, e.g. cycle codes) have no positive threshold
/// and yield [`AnalysisError::NoPositiveThreshold`].
pub fn nu_star(gamma_v: u32, gamma_c: u32) -> Result<f64, AnalysisError> {
    // probe small weights; a family with linear minimum distance is
    // strictly negative near zero
    let probe = 1e-4;
    if asymptotic_weight_enumerator(gamma_v, gamma_c, probe)? >= 0.0 {
        return Err(AnalysisError::NoPositiveThreshold);
    }
    // bracket the sign change: A < 0 at lo, A > 0 at hi (A(1/2) = R(H) > 0)
    let mut lo = probe;
    let mut hi = 0.5;
    let mut v = probe;
    while v < 0.5 {
        let next = (v + 1e-3).min(0.5);
        if asymptotic_weight_enumerator(gamma_v, gamma_c, next)? > 0.0 {
            lo = v;
            hi = next;
            break;
        }
        v = next;
    }
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        if asymptotic_weight_enumerator(gamma_v, gamma_c, mid)? <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

// ============================================================================
// Error exponent
// ============================================================================

/// The channel error exponent
/// `F(v) = r_g A(v) - D(p || omega(v; gamma_t) * p)`;
/// negativity on all of (0, 1/2] certifies vanishing decoding error.
///
/// `gamma_v = 0` selects the LDGM-only case `A = h`.
pub fn error_exponent(
    v: f64,
    r_g: f64,
    gamma_t: u32,
    gamma_v: u32,
    gamma_c: u32,
    p: f64,
) -> Result<f64, AnalysisError> {
    if !(0.0..1.0).contains(&p) || p == 0.0 {
        return Err(AnalysisError::Domain(format!("p = {p} outside (0, 1)")));
    }
    let a = asymptotic_weight_enumerator(gamma_v, gamma_c, v)?;
    let omega = induced_weight(v, gamma_t)?;
    let kl = binary_kl(p, bernoulli_convolve(omega, p)?)?;
    Ok(r_g * a - kl)
}

/// Result of scanning the exponent condition over a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    /// True iff `F(v) < 0` at every grid point.
    pub satisfied: bool,
    /// Grid point attaining the maximum of F.
    pub worst_v: f64,
    /// The maximum of F over the grid.
    pub worst_value: f64,
}

/// Grid `{step, 2 step, ...}` over `(0, 1/2]`, with the final point forced
/// to exactly 0.5.
pub fn v_grid(step: f64) -> Vec<f64> {
    assert!(step > 0.0 && step <= 0.5, "grid step must be in (0, 0.5]");
    let mut grid = Vec::new();
    let mut i = 1u64;
    loop {
        let v = (i as f64) * step;
        if v >= 0.5 {
            grid.push(0.5);
            break;
        }
        grid.push(v);
        i += 1;
    }
    grid
}

/// Evaluates F over the grid `{step, 2 step, ..., 1/2}` and reports
/// whether the exponent condition holds (max F < 0), plus the maximizer.
pub fn check_channel_condition(
    r_g: f64,
    gamma_t: u32,
    gamma_v: u32,
    gamma_c: u32,
    p: f64,
    grid_step: f64,
) -> Result<ConditionReport, AnalysisError> {
    if grid_step <= 0.0 {
        return Err(AnalysisError::Domain("grid_step must be positive".into()));
    }
    let mut worst_v = f64::NAN;
    let mut worst_value = f64::NEG_INFINITY;
    for v in v_grid(grid_step) {
        let f = error_exponent(v, r_g, gamma_t, gamma_v, gamma_c, p)?;
        if f > worst_value {
            worst_value = f;
            worst_v = v;
        }
    }
    Ok(ConditionReport {
        satisfied: worst_value < 0.0,
        worst_v,
        worst_value,
    })
}

// ============================================================================
// Curves
// ============================================================================

/// A sampled curve over weight fractions, CSV-emittable as `v,value,label`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
    label: String,
}

impl ExponentCurve {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, label: impl Into<String>) -> Self {
        assert_eq!(grid.len(), values.len(), "grid/value length mismatch");
        assert!(
            grid.windows(2).all(|w| w[0] < w[1]),
            "grid must be strictly increasing"
        );
        Self {
            grid,
            values,
            label: label.into(),
        }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn max(&self) -> (f64, f64) {
        let mut best = (f64::NAN, f64::NEG_INFINITY);
        for (&v, &y) in self.grid.iter().zip(&self.values) {
            if y > best.1 {
                best = (v, y);
            }
        }
        best
    }

    /// Appends `v,value,label` rows (no header).
    pub fn write_csv_rows(&self, out: &mut String) {
        for (v, y) in self.grid.iter().zip(&self.values) {
            out.push_str(&format!("{v},{y},{}\n", self.label));
        }
    }
}

/// The three labelled components of the exponent plot for one
/// configuration: the enumerator term `r_g A(v)`, the KL term
/// `D(p || omega(v) * p)`, and their difference `F(v)`.
pub fn exponent_curves(
    r_g: f64,
    gamma_t: u32,
    gamma_v: u32,
    gamma_c: u32,
    p: f64,
    grid_step: f64,
) -> Result<Vec<ExponentCurve>, AnalysisError> {
    let grid = v_grid(grid_step);
    let mut enum_term = Vec::with_capacity(grid.len());
    let mut kl_term = Vec::with_capacity(grid.len());
    let mut f_term = Vec::with_capacity(grid.len());
    for &v in &grid {
        let a = asymptotic_weight_enumerator(gamma_v, gamma_c, v)?;
        let omega = induced_weight(v, gamma_t)?;
        let kl = binary_kl(p, bernoulli_convolve(omega, p)?)?;
        enum_term.push(r_g * a);
        kl_term.push(kl);
        f_term.push(r_g * a - kl);
    }
    Ok(vec![
        ExponentCurve::new(grid.clone(), enum_term, "enumerator_term"),
        ExponentCurve::new(grid.clone(), kl_term, "kl_term"),
        ExponentCurve::new(grid, f_term, "exponent"),
    ])
}

/// A point on a rate curve: `x` is the distortion D (Wyner-Ziv) or the
/// weight budget w (information embedding).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub x: f64,
    pub rate: f64,
}

/// Raw Wyner-Ziv curve value `h(D * p) - h(D)` before the envelope.
pub fn wz_rate_raw(p: f64, d: f64) -> Result<f64, AnalysisError> {
    let conv = bernoulli_convolve(d, p)?;
    Ok(binary_entropy(conv)? - binary_entropy(d)?)
}

/// The Wyner-Ziv rate curve: the raw curve `h(D * p) - h(D)` sampled on
/// `grid`, joined with the corner point `(p, 0)`, and closed under the
/// lower convex envelope.
pub fn wz_rate_curve(p: f64, grid: &[f64]) -> Result<Vec<RatePoint>, AnalysisError> {
    if !(0.0 < p && p <= 0.5) {
        return Err(AnalysisError::Domain(format!("p = {p} outside (0, 1/2]")));
    }
    let mut points = Vec::with_capacity(grid.len() + 1);
    for &d in grid {
        if !(0.0 < d && d <= 0.5) {
            return Err(AnalysisError::Domain(format!("D = {d} outside (0, 1/2]")));
        }
        points.push(RatePoint {
            x: d,
            rate: wz_rate_raw(p, d)?,
        });
    }
    points.push(RatePoint { x: p, rate: 0.0 });
    Ok(lower_convex_envelope(points))
}

/// Raw information-embedding curve value `h(w) - h(p)`.
pub fn ie_capacity_raw(p: f64, w: f64) -> Result<f64, AnalysisError> {
    Ok(binary_entropy(w)? - binary_entropy(p)?)
}

/// The information-embedding capacity curve: raw curve `h(w) - h(p)` on
/// `grid`, corner point `(0, 0)`, upper convex envelope.
pub fn ie_capacity_curve(p: f64, grid: &[f64]) -> Result<Vec<RatePoint>, AnalysisError> {
    if !(0.0 < p && p < 0.5) {
        return Err(AnalysisError::Domain(format!("p = {p} outside (0, 1/2)")));
    }
    let mut points = Vec::with_capacity(grid.len() + 1);
    for &w in grid {
        if !(0.0..=0.5).contains(&w) {
            return Err(AnalysisError::Domain(format!("w = {w} outside [0, 1/2]")));
        }
        points.push(RatePoint {
            x: w,
            rate: ie_capacity_raw(p, w)?,
        });
    }
    points.push(RatePoint { x: 0.0, rate: 0.0 });
    Ok(upper_convex_envelope(points))
}

fn sort_dedup_x(mut points: Vec<RatePoint>, keep_lower: bool) -> Vec<RatePoint> {
    points.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.rate.total_cmp(&b.rate)));
    let mut out: Vec<RatePoint> = Vec::with_capacity(points.len());
    for p in points {
        if let Some(last) = out.last_mut() {
            if last.x == p.x {
                if keep_lower {
                    // ascending sort already left the smaller rate first
                } else {
                    last.rate = p.rate;
                }
                continue;
            }
        }
        out.push(p);
    }
    out
}

fn cross(a: RatePoint, b: RatePoint, c: RatePoint) -> f64 {
    (b.x - a.x) * (c.rate - a.rate) - (b.rate - a.rate) * (c.x - a.x)
}

/// Lower convex envelope by a left-to-right monotone-chain scan;
/// collinear points are kept so grid resolution is preserved.
pub fn lower_convex_envelope(points: Vec<RatePoint>) -> Vec<RatePoint> {
    let pts = sort_dedup_x(points, true);
    let mut hull: Vec<RatePoint> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) < 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Upper convex envelope (concave hull), mirror of the lower scan.
pub fn upper_convex_envelope(points: Vec<RatePoint>) -> Vec<RatePoint> {
    let pts = sort_dedup_x(points, false);
    let mut hull: Vec<RatePoint> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) > 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Inverse of [`binary_entropy`] on [0, 1/2]: the distortion `t` with
/// `h(t) = y`, by bisection to 1e-12.
pub fn inverse_binary_entropy(y: f64) -> Result<f64, AnalysisError> {
    if !(0.0..=1.0).contains(&y) || y.is_nan() {
        return Err(AnalysisError::Domain(format!("y = {y} outside [0, 1]")));
    }
    let mut lo = 0.0f64;
    let mut hi = 0.5f64;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if entropy_unchecked(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The decoding-rule threshold `d(n) = floor((p + n^(-1/3)) n)`.
pub fn decoding_threshold(n: usize, p: f64) -> Result<usize, AnalysisError> {
    if n < 1 {
        return Err(AnalysisError::Domain("n must be >= 1".into()));
    }
    if !(0.0 < p && p < 0.5) {
        return Err(AnalysisError::Domain(format!("p = {p} outside (0, 1/2)")));
    }
    Ok(((p + 1.0 / (n as f64).cbrt()) * n as f64).floor() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent natural-log route for cross-checking the log2 formulas.
    fn entropy_nats(t: f64) -> f64 {
        let mut h = 0.0;
        if t > 0.0 {
            h -= t * t.ln();
        }
        if t < 1.0 {
            h -= (1.0 - t) * (1.0 - t).ln();
        }
        h / std::f64::consts::LN_2
    }

    fn kl_nats(a: f64, b: f64) -> f64 {
        let mut d = 0.0;
        if a > 0.0 {
            d += a * (a / b).ln();
        }
        if a < 1.0 {
            d += (1.0 - a) * ((1.0 - a) / (1.0 - b)).ln();
        }
        d / std::f64::consts::LN_2
    }

    #[test]
    fn entropy_basics() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // frozen from a 40-digit oracle: h(0.11) = 0.4999159581645280
        assert!((binary_entropy(0.11).unwrap() - 0.499_915_958_164_528).abs() < 1e-5);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
    }

    #[test]
    fn entropy_matches_natural_log_route() {
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            assert!((binary_entropy(t).unwrap() - entropy_nats(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn kl_basics() {
        assert_eq!(binary_kl(0.3, 0.3).unwrap(), 0.0);
        assert_eq!(binary_kl(0.1, 0.1).unwrap(), 0.0);
        assert!(binary_kl(0.1, 0.3).unwrap() > 0.0);
        assert_eq!(binary_kl(0.5, 0.0).unwrap(), f64::INFINITY);
        assert_eq!(binary_kl(0.0, 0.0).unwrap(), 0.0);
        assert!((binary_kl(0.1, 0.3).unwrap() - kl_nats(0.1, 0.3)).abs() < 1e-12);
    }

    #[test]
    fn convolve_basics() {
        assert_eq!(bernoulli_convolve(0.5, 0.37).unwrap(), 0.5);
        assert_eq!(bernoulli_convolve(0.2, 0.0).unwrap(), 0.2);
        // exhaustive 2-bit probability table for (0.1, 0.2):
        // P[xor=1] = 0.1*0.8 + 0.9*0.2 = 0.26
        assert!((bernoulli_convolve(0.1, 0.2).unwrap() - 0.26).abs() < 1e-15);
    }

    #[test]
    fn induced_weight_basics() {
        assert_eq!(induced_weight(0.0, 4).unwrap(), 0.0);
        assert_eq!(induced_weight(0.5, 4).unwrap(), 0.5);
        assert_eq!(induced_weight(0.3, 1).unwrap(), 0.3);
        assert_eq!(induced_weight(0.25, 4).unwrap(), 0.46875);
    }

    #[test]
    fn finite_enumerator_zero_weight_is_zero() {
        assert_eq!(finite_weight_enumerator(12, 3, 6, 0).unwrap(), 0.0);
    }

    #[test]
    fn finite_enumerator_parity_impossible_weight() {
        // (1,2), m=2, weight 1: the repetition check forbids odd weight
        assert_eq!(
            finite_weight_enumerator(2, 1, 2, 1).unwrap(),
            f64::NEG_INFINITY
        );
        assert_eq!(finite_weight_expectation(2, 1, 2, 1).unwrap(), 0.0);
    }

    #[test]
    fn finite_enumerator_m12_frozen_values() {
        // exact stratified expectations for (3,6), m=12, frozen from an
        // exact-rational oracle
        let cases = [
            (0, 1.0),
            (2, 6.198347107438017),
            (4, 67.67217630853995),
            (6, 108.16116639493264),
            (8, 67.67217630853995),
            (10, 6.198347107438017),
            (12, 1.0),
        ];
        for (l, want) in cases {
            let got = finite_weight_expectation(12, 3, 6, l).unwrap();
            assert!(
                (got - want).abs() / want < 1e-9,
                "weight {l}: {got} vs {want}"
            );
        }
        for l in [1, 3, 5, 7, 9, 11] {
            assert_eq!(finite_weight_expectation(12, 3, 6, l).unwrap(), 0.0);
        }
    }

    #[test]
    fn finite_enumerator_rejects_bad_params() {
        assert!(finite_weight_enumerator(12, 3, 5, 2).is_err()); // odd gamma_c
        assert!(finite_weight_enumerator(10, 3, 6, 2).is_err()); // 6 does not divide 10
        assert!(finite_weight_enumerator(12, 3, 6, 13).is_err()); // weight > m
    }

    #[test]
    fn asymptotic_enumerator_endpoints_and_full_rate() {
        assert_eq!(asymptotic_weight_enumerator(3, 6, 0.0).unwrap(), 0.0);
        assert_eq!(asymptotic_weight_enumerator(3, 6, 1.0).unwrap(), 0.0);
        // v = 1/2: A = R(H) = 1 - gamma_v/gamma_c, x = 1 optimal by symmetry
        let a_half = asymptotic_weight_enumerator(3, 6, 0.5).unwrap();
        assert!((a_half - 0.5).abs() < 1e-9, "A(1/2) = {a_half}");
    }

    #[test]
    fn asymptotic_enumerator_frozen_point() {
        // frozen from a 40-digit golden-section oracle
        let a = asymptotic_weight_enumerator(3, 6, 0.2).unwrap();
        assert!((a - 0.248971140491587).abs() < 1e-9, "A(0.2) = {a}");
    }

    #[test]
    fn asymptotic_enumerator_unconstrained_is_entropy() {
        for v in [0.05, 0.2, 0.5] {
            let a = asymptotic_weight_enumerator(0, 0, v).unwrap();
            assert!((a - binary_entropy(v).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn nu_star_values() {
        let nu36 = nu_star(3, 6).unwrap();
        assert!((0.02..=0.03).contains(&nu36), "nu*(3,6) = {nu36}");
        assert!((nu36 - 0.0227334).abs() < 1e-4);
        let nu48 = nu_star(4, 8).unwrap();
        assert!(nu48 > nu36, "nu*(4,8) = {nu48} should exceed nu*(3,6)");
        assert_eq!(nu_star(2, 4), Err(AnalysisError::NoPositiveThreshold));
    }

    #[test]
    fn exponent_at_zero_is_zero() {
        let f = error_exponent(0.0, 0.5, 4, 3, 6, 0.1).unwrap();
        assert_eq!(f, 0.0);
    }

    #[test]
    fn exponent_boundary_identity() {
        // F(1/2) = r_g R(H) - (1 - h(p)); at p=0.1, R_com=0.5 this is
        // 0.5 - 0.5310044... = -0.0310044
        let f = error_exponent(0.5, 1.0, 4, 3, 6, 0.1).unwrap();
        assert!((f - (0.5 - (1.0 - binary_entropy(0.1).unwrap()))).abs() < 1e-9);
        assert!((f + 0.031).abs() < 1e-3);
    }

    #[test]
    fn condition_check_reference_configurations() {
        // coarse grid here; the acceptance suite runs the 1e-3 grid
        let ldgm_only = check_channel_condition(0.5, 4, 0, 0, 0.1, 1e-2).unwrap();
        assert!(!ldgm_only.satisfied);
        assert!(ldgm_only.worst_value > 0.0);
        assert!(ldgm_only.worst_v < 0.1, "worst at small v");

        let with_ldpc = check_channel_condition(1.0, 4, 3, 6, 0.1, 1e-2).unwrap();
        assert!(with_ldpc.satisfied);
        assert!(with_ldpc.worst_value < 0.0);
    }

    #[test]
    fn condition_check_above_capacity_fails() {
        // R_com = 0.5 > 1 - h(0.2) = 0.278: F(1/2) > 0
        let report = check_channel_condition(1.0, 4, 3, 6, 0.2, 1e-2).unwrap();
        assert!(!report.satisfied);
        let f_half = error_exponent(0.5, 1.0, 4, 3, 6, 0.2).unwrap();
        assert!(f_half > 0.0);
    }

    #[test]
    fn wz_curve_at_half_is_rate_distortion() {
        let grid: Vec<f64> = (1..=99).map(|i| i as f64 / 200.0).collect();
        let curve = wz_rate_curve(0.5, &grid).unwrap();
        for pt in &curve {
            let want = 1.0 - binary_entropy(pt.x).unwrap();
            assert!(
                (pt.rate - want).abs() < 1e-12,
                "at D={} got {} want {want}",
                pt.x,
                pt.rate
            );
        }
    }

    #[test]
    fn wz_curve_contains_corner_point() {
        let grid: Vec<f64> = (1..=49).map(|i| i as f64 / 100.0).collect();
        let p = 0.25;
        let curve = wz_rate_curve(p, &grid).unwrap();
        assert!(curve.iter().any(|pt| pt.x == p && pt.rate == 0.0));
    }

    #[test]
    fn wz_raw_frozen_value() {
        // h(0.3) - h(0.1) = 0.4122953..., oracle-frozen
        let raw = wz_rate_raw(0.25, 0.1).unwrap();
        assert!((raw - 0.4122953056414114).abs() < 1e-4);
    }

    #[test]
    fn ie_curve_endpoints() {
        let grid: Vec<f64> = (0..=50).map(|i| i as f64 / 100.0).collect();
        let p = 0.1;
        let curve = ie_capacity_curve(p, &grid).unwrap();
        let last = curve.last().unwrap();
        assert_eq!(last.x, 0.5);
        assert!((last.rate - (1.0 - binary_entropy(p).unwrap())).abs() < 1e-12);
        assert_eq!(curve[0].x, 0.0);
        assert_eq!(curve[0].rate, 0.0);
        assert!((ie_capacity_raw(p, p).unwrap()).abs() < 1e-15);
        assert!((ie_capacity_raw(0.1, 0.3).unwrap() - 0.4122953056414114).abs() < 1e-4);
    }

    #[test]
    fn envelope_shapes() {
        let grid: Vec<f64> = (1..=49).map(|i| i as f64 / 100.0).collect();
        let wz = wz_rate_curve(0.25, &grid).unwrap();
        for w in wz.windows(3) {
            let s1 = (w[1].rate - w[0].rate) / (w[1].x - w[0].x);
            let s2 = (w[2].rate - w[1].rate) / (w[2].x - w[1].x);
            assert!(s2 >= s1 - 1e-12, "lower envelope slopes must not decrease");
        }
        let ie = ie_capacity_curve(0.1, &grid).unwrap();
        for w in ie.windows(3) {
            let s1 = (w[1].rate - w[0].rate) / (w[1].x - w[0].x);
            let s2 = (w[2].rate - w[1].rate) / (w[2].x - w[1].x);
            assert!(s2 <= s1 + 1e-12, "upper envelope slopes must not increase");
        }
    }

    #[test]
    fn inverse_entropy_roundtrip() {
        for y in [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0] {
            let t = inverse_binary_entropy(y).unwrap();
            assert!((binary_entropy(t).unwrap() - y).abs() < 1e-9, "y = {y}");
        }
        assert!((inverse_binary_entropy(0.5).unwrap() - 0.11).abs() < 0.001);
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(decoding_threshold(1, 0.3).unwrap(), 1);
        assert_eq!(decoding_threshold(1000, 0.1).unwrap(), 200);
        assert_eq!(decoding_threshold(8, 0.1).unwrap(), 4);
        assert!(decoding_threshold(10, 0.0).is_err());
        assert!(decoding_threshold(10, 0.5).is_err());
    }

    #[test]
    fn threshold_monotone() {
        for n in [8, 16, 64, 256, 1024] {
            let lo = decoding_threshold(n, 0.05).unwrap();
            let hi = decoding_threshold(n, 0.2).unwrap();
            assert!(hi >= lo);
        }
        for p in [0.05, 0.1, 0.3] {
            let mut prev = 0;
            for n in [8, 32, 128, 512, 2048] {
                let d = decoding_threshold(n, p).unwrap();
                assert!(d >= prev);
                prev = d;
            }
        }
    }

    #[test]
    fn v_grid_ends_exactly_at_half() {
        let g = v_grid(1e-3);
        assert_eq!(g.len(), 500);
        assert_eq!(*g.last().unwrap(), 0.5);
        let g2 = v_grid(0.03);
        assert_eq!(*g2.last().unwrap(), 0.5);
        assert!(g2.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn exponent_curves_are_consistent() {
        let curves = exponent_curves(1.0, 4, 3, 6, 0.1, 0.01).unwrap();
        assert_eq!(curves.len(), 3);
        let (enum_term, kl_term, f) = (&curves[0], &curves[1], &curves[2]);
        for i in 0..f.grid().len() {
            let recomposed = enum_term.values()[i] - kl_term.values()[i];
            assert!((f.values()[i] - recomposed).abs() < 1e-12);
        }
    }
}
