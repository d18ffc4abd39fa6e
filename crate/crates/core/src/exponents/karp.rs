use crate::tropical::{TropicalMatrix, TropicalValue};

/// Maximum circuit mean of the graph of finite entries, via Karp's
/// (d+1)-level dynamic program with a virtual source joined to every node.
/// Bottom when there is no circuit.
///
/// # Panics
/// If `a` is not square.
pub fn karp_max_cycle_mean(a: &TropicalMatrix) -> TropicalValue {
    assert!(a.is_square(), "max cycle mean of a non-square matrix");
    let d = a.rows();
    // walks[k][v]: heaviest walk with exactly k arcs ending at v
    let mut walks = vec![vec![0.0f64; d]];
    for k in 1..=d {
        let prev = &walks[k - 1];
        let next: Vec<f64> = (0..d)
            .map(|v| {
                (0..d)
                    .map(|u| prev[u] + a.get(u, v).to_f64())
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        walks.push(next);
    }
    let mut best = f64::NEG_INFINITY;
    #[allow(clippy::needless_range_loop)] // v indexes a column across every row of `walks`
    for v in 0..d {
        let full = walks[d][v];
        if full == f64::NEG_INFINITY {
            continue;
        }
        let worst = (0..d)
            .filter(|&k| walks[k][v] > f64::NEG_INFINITY)
            .map(|k| (full - walks[k][v]) / (d - k) as f64)
            .fold(f64::INFINITY, f64::min);
        best = best.max(worst);
    }
    TropicalValue::from_f64(best).expect("cycle means are finite or -inf")
}
