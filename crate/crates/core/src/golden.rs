//! Golden-section line search.

/// 1/φ
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// One evaluation made by the search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub x: f64,
    pub value: f64,
}

/// Minimizes a unimodal `f` on `[a, b]` until the bracket is narrower than
/// `tol`. Every evaluation is returned in call order; the best one is the
/// result.
pub fn golden_section<F>(mut f: F, a: f64, b: f64, tol: f64) -> (Probe, Vec<Probe>)
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut probes = Vec::new();
    let mut eval = |x: f64, probes: &mut Vec<Probe>| {
        let value = f(x);
        probes.push(Probe { x, value });
        value
    };

    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(x1, &mut probes);
    let mut f2 = eval(x2, &mut probes);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(x1, &mut probes);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(x2, &mut probes);
        }
    }
    let best = probes
        .iter()
        .copied()
        .min_by(|p, q| p.value.total_cmp(&q.value).then(p.x.total_cmp(&q.x)))
        .expect("at least two probes");
    (best, probes)
}
