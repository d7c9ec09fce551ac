//! Small dense real linear systems: Gaussian elimination with partial
//! pivoting, rank detection relative to the largest pivot, and kernel basis
//! extraction for under-determined systems. Sized for the stacked 2x2
//! intertwining constraints (at most a few dozen rows, four unknowns).

/// m x n real system A x = b in row-major form.
#[derive(Clone, Debug)]
pub struct RealLinearSystem {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    unknowns: usize,
}

impl RealLinearSystem {
    /// Panics if row lengths disagree or the rhs length does not match.
    pub fn new(rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> Self {
        assert_eq!(rows.len(), rhs.len(), "one rhs entry per row");
        let unknowns = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == unknowns), "ragged rows");
        RealLinearSystem { rows, rhs, unknowns }
    }

    pub fn homogeneous(rows: Vec<Vec<f64>>) -> Self {
        let rhs = vec![0.0; rows.len()];
        RealLinearSystem::new(rows, rhs)
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }
}

/// Solution of a consistent system together with the detected rank.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub rank: usize,
    /// A solution of A x = b; the zero vector for homogeneous systems.
    pub particular: Vec<f64>,
    /// Basis of the solution space of A x = 0; empty when the solution is
    /// unique.
    pub kernel: Vec<Vec<f64>>,
}

impl LinearSolution {
    pub fn is_unique(&self) -> bool {
        self.kernel.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LinsysError {
    #[error("inconsistent linear system (rank {rank})")]
    Inconsistent { rank: usize },
}

/// Pivot threshold relative to the largest coefficient magnitude.
pub const PIVOT_TOL: f64 = 1e-10;

/// Row-reduces the system and returns rank, a particular solution, and a
/// kernel basis; rank is counted against pivots larger than `PIVOT_TOL`
/// times the largest coefficient magnitude.
pub fn solve_real_linear(sys: &RealLinearSystem) -> Result<LinearSolution, LinsysError> {
    let m = sys.rows.len();
    let n = sys.unknowns;
    let mut a: Vec<Vec<f64>> = sys.rows.clone();
    let mut b: Vec<f64> = sys.rhs.clone();

    let amax = a
        .iter()
        .flatten()
        .fold(0.0_f64, |acc, x| acc.max(x.abs()));
    let bmax = b.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    let pivot_tol = PIVOT_TOL * amax;
    let resid_tol = PIVOT_TOL * amax.max(bmax);

    // Forward elimination with partial pivoting; record pivot columns.
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..n {
        if row >= m {
            break;
        }
        let (best_row, best_val) = (row..m)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if best_val <= pivot_tol {
            continue;
        }
        a.swap(row, best_row);
        b.swap(row, best_row);
        let p = a[row][col];
        for r in 0..m {
            if r == row {
                continue;
            }
            let f = a[r][col] / p;
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[r][k] -= f * a[row][k];
            }
            b[r] -= f * b[row];
        }
        // Normalize the pivot row for a clean reduced form.
        for k in col..n {
            a[row][k] /= p;
        }
        b[row] /= p;
        pivot_cols.push(col);
        row += 1;
    }
    let rank = pivot_cols.len();

    // Consistency: a zeroed row with a non-zero rhs has no solution.
    for r in rank..m {
        if b[r].abs() > resid_tol {
            return Err(LinsysError::Inconsistent { rank });
        }
    }

    let mut particular = vec![0.0; n];
    for (i, &col) in pivot_cols.iter().enumerate() {
        particular[col] = b[i];
    }

    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let kernel = free_cols
        .iter()
        .map(|&fc| {
            let mut v = vec![0.0; n];
            v[fc] = 1.0;
            for (i, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -a[i][fc];
            }
            v
        })
        .collect();

    Ok(LinearSolution { rank, particular, kernel })
}
