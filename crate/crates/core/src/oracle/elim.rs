//! Gauss-Jordan elimination with full pivoting, kept separate from the
//! solver's partial-pivot routine so the oracle does not share its failure
//! modes.

/// General solution of `A y = b`: `y = particular + Σ t_k null[k]`.
pub(crate) struct Reduced {
    pub particular: Option<Vec<f64>>,
    pub null: Vec<Vec<f64>>,
}

const PIVOT_TOL: f64 = 1e-10;
const CONSISTENCY_TOL: f64 = 1e-9;

/// `a` is `m × m` row-major; column vector convention.
pub(crate) fn solve(mut a: Vec<f64>, mut b: Vec<f64>, m: usize) -> Reduced {
    let scale = a.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let bscale = b.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let mut cols: Vec<usize> = (0..m).collect();
    let mut rank = 0;
    while rank < m {
        let (mut pi, mut pj, mut best) = (rank, rank, 0.0);
        for i in rank..m {
            for j in rank..m {
                let v = a[i * m + j].abs();
                if v > best {
                    (pi, pj, best) = (i, j, v);
                }
            }
        }
        if best <= PIVOT_TOL * scale {
            break;
        }
        if pi != rank {
            for j in 0..m {
                a.swap(pi * m + j, rank * m + j);
            }
            b.swap(pi, rank);
        }
        if pj != rank {
            for i in 0..m {
                a.swap(i * m + pj, i * m + rank);
            }
            cols.swap(pj, rank);
        }
        let p = a[rank * m + rank];
        for j in 0..m {
            a[rank * m + j] /= p;
        }
        b[rank] /= p;
        for i in 0..m {
            if i == rank {
                continue;
            }
            let f = a[i * m + rank];
            if f != 0.0 {
                for j in 0..m {
                    a[i * m + j] -= f * a[rank * m + j];
                }
                b[i] -= f * b[rank];
            }
        }
        rank += 1;
    }

    let unpermute = |yp: Vec<f64>| {
        let mut y = vec![0.0; m];
        for (k, v) in yp.into_iter().enumerate() {
            y[cols[k]] = v;
        }
        y
    };
    let consistent = b[rank..].iter().all(|v| v.abs() <= CONSISTENCY_TOL * bscale);
    let particular = consistent.then(|| {
        let mut yp = vec![0.0; m];
        yp[..rank].copy_from_slice(&b[..rank]);
        unpermute(yp)
    });
    let null = (rank..m)
        .map(|f| {
            let mut yp = vec![0.0; m];
            yp[f] = 1.0;
            for k in 0..rank {
                yp[k] = -a[k * m + f];
            }
            unpermute(yp)
        })
        .collect();
    Reduced { particular, null }
}
