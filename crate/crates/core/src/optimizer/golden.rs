//! Golden-section search for the maximum of a unimodal scalar function.

/// `(√5 − 1) / 2`.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximises `f` on `[lo, hi]` until the bracket is narrower than `tol`.
/// Returns `(argmax, max)`.
///
/// `f` is assumed unimodal on the bracket; otherwise a local maximum is
/// returned.
pub fn golden_section_max<F>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > tol {
        if fc >= fd {
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
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // the midpoint can lose to an interior probe on flat tops
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold((x, fx), |best, cand| if cand.1 > best.1 { cand } else { best })
}

/// Index of the largest value on a uniform grid over `[lo, hi]`.
pub fn grid_argmax<F>(f: F, lo: f64, hi: f64, points: usize) -> (usize, f64, f64)
where
    F: Fn(f64) -> f64,
{
    let step = (hi - lo) / (points - 1) as f64;
    let mut best = (0, lo, f64::NEG_INFINITY);
    for i in 0..points {
        let x = if i + 1 == points { hi } else { lo + step * i as f64 };
        let y = f(x);
        if y > best.2 {
            best = (i, x, y);
        }
    }
    best
}
