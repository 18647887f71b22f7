//! Adaptive Gauss–Kronrod (7/15) quadrature for smooth real integrands.

use crate::numkernel::KernelError;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 40;

/// Integral value with an error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

fn kronrod(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adapt(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32, whole: (f64, f64)) -> Quadrature {
    let (val, err) = whole;
    if err <= tol || depth >= MAX_DEPTH || (b - a).abs() <= 1e-15 * a.abs().max(b.abs()) {
        return Quadrature { value: val, error: err };
    }
    let m = 0.5 * (a + b);
    let left = kronrod(f, a, m);
    let right = kronrod(f, m, b);
    let l = adapt(f, a, m, 0.5 * tol, depth + 1, left);
    let r = adapt(f, m, b, 0.5 * tol, depth + 1, right);
    Quadrature { value: l.value + r.value, error: l.error + r.error }
}

/// `int_a^b f` to absolute tolerance `tol`.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<Quadrature, KernelError> {
    let whole = kronrod(&mut f, a, b);
    let q = adapt(&mut f, a, b, tol, 0, whole);
    if !q.value.is_finite() || q.error > tol.max(1e-14 * q.value.abs()) * 10.0 {
        return Err(KernelError::QuadratureFailed { estimate: q.error });
    }
    Ok(q)
}

/// `int_t0^cutoff f` over geometrically growing panels starting at width
/// `scale`, stopping early once a panel contributes less than `tol` and
/// `tail_bound(t)` (an upper bound on the remaining integral) is below `tol`.
pub fn integrate_to_infinity(
    mut f: impl FnMut(f64) -> f64,
    t0: f64,
    scale: f64,
    cutoff: f64,
    tol: f64,
    mut tail_bound: impl FnMut(f64) -> f64,
) -> Result<Quadrature, KernelError> {
    let mut total = Quadrature { value: 0.0, error: 0.0 };
    let mut a = t0;
    let mut width = scale.max(1e-300);
    while a < cutoff {
        let b = (a + width).min(cutoff);
        let q = integrate(&mut f, a, b, tol)?;
        total.value += q.value;
        total.error += q.error;
        a = b;
        width *= 2.0;
        if tail_bound(a) < tol {
            break;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let q = integrate(|x| 3.0 * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((q.value - 8.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_tail() {
        let q = integrate_to_infinity(|t| (-t).exp(), 0.0, 0.1, 1e6, 1e-12, |t| (-t).exp()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-10);
    }
}
