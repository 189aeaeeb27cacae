//! Zero-sum matrix games solved as linear programs with a dense tableau simplex.
//!
//! Rows belong to the maximizing player and columns to the minimizing player. After
//! shifting every entry to be at least 1 the minimizer's problem becomes
//! `max sum(y) s.t. A y <= 1, y >= 0`, whose slack basis is feasible from the start.
//! The value is `1 / sum(y)` minus the shift and the mix is `y / sum(y)`. Bland's rule
//! keeps degenerate pivots from cycling.

const PIVOT_EPS: f64 = 1e-12;

/// Value and mix of one side of a matrix game.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSolution {
    pub value: f64,
    pub mix: Vec<f64>,
}

/// The column player's minimax mix: minimizes the largest row payoff.
///
/// `value` is the guaranteed bound of the returned mix, `max_r sum_c m[r][c] * mix[c]`.
pub fn minimize_max(m: &[Vec<f64>]) -> MatrixSolution {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    assert!(
        rows > 0 && cols > 0,
        "matrix game needs at least one row and one column"
    );
    assert!(m.iter().all(|r| r.len() == cols), "ragged payoff matrix");

    let lowest = m.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let shift = 1.0 - lowest;

    // tableau row r: [A_r | I_r | 1]; objective row holds reduced costs of max sum(y)
    let width = cols + rows + 1;
    let mut t = vec![0.0; (rows + 1) * width];
    for (r, row) in m.iter().enumerate() {
        let base = r * width;
        for (c, &v) in row.iter().enumerate() {
            t[base + c] = v + shift;
        }
        t[base + cols + r] = 1.0;
        t[base + width - 1] = 1.0;
    }
    let obj = rows * width;
    for c in 0..cols {
        t[obj + c] = -1.0;
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    while let Some(enter) = (0..cols + rows).find(|&c| t[obj + c] < -PIVOT_EPS) {
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..rows {
            let a = t[r * width + enter];
            if a > PIVOT_EPS {
                let ratio = t[r * width + width - 1] / a;
                let replace = match leave {
                    None => true,
                    Some((l, best)) => ratio < best - PIVOT_EPS || (ratio <= best + PIVOT_EPS && basis[r] < basis[l]),
                };
                if replace {
                    leave = Some((r, ratio));
                }
            }
        }
        let (pr, _) = leave.expect("shifted matrix game LP is bounded");
        pivot(&mut t, width, rows + 1, pr, enter);
        basis[pr] = enter;
    }

    let mut y = vec![0.0; cols];
    for (r, &b) in basis.iter().enumerate() {
        if b < cols {
            y[b] = t[r * width + width - 1].max(0.0);
        }
    }
    let total: f64 = y.iter().sum();
    let mix: Vec<f64> = y.iter().map(|v| v / total).collect();
    let value = m
        .iter()
        .map(|row| row.iter().zip(&mix).map(|(a, x)| a * x).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    MatrixSolution { value, mix }
}

/// The row player's maximin mix: maximizes the smallest column payoff.
pub fn maximize_min(m: &[Vec<f64>]) -> MatrixSolution {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let flipped: Vec<Vec<f64>> = (0..cols).map(|c| (0..rows).map(|r| -m[r][c]).collect()).collect();
    let sol = minimize_max(&flipped);
    MatrixSolution {
        value: -sol.value,
        mix: sol.mix,
    }
}

fn pivot(t: &mut [f64], width: usize, height: usize, pr: usize, pc: usize) {
    let p = t[pr * width + pc];
    for c in 0..width {
        t[pr * width + c] /= p;
    }
    let pivot_row: Vec<f64> = t[pr * width..(pr + 1) * width].to_vec();
    for r in 0..height {
        if r == pr {
            continue;
        }
        let f = t[r * width + pc];
        if f != 0.0 {
            let row = &mut t[r * width..(r + 1) * width];
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            row[pc] = 0.0;
        }
    }
}
