//! Dense primal-dual interior-point method for
//!
//! ```text
//! max <C, X>  s.t.  <A_k, X> = b_k,  X >= 0
//! min b'y     s.t.  Z = sum_k y_k A_k - C >= 0
//! ```
//!
//! using the HKM search direction with a Mehrotra predictor-corrector step.
//! Constraint matrices are sparse and symmetric.

use nalgebra::{Cholesky, DMatrix, DVector};

/// Symmetric sparse matrix given by all its nonzero `(row, col, value)`
/// entries; both `(i, j)` and `(j, i)` are listed for off-diagonal terms.
#[derive(Debug, Clone)]
pub struct SparseSym {
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseSym {
    /// `(E_ij + E_ji) / 2`, so that `<A, X> = X_ij` for symmetric `X`.
    pub fn entry(i: usize, j: usize) -> Self {
        if i == j {
            SparseSym {
                entries: vec![(i, i, 1.0)],
            }
        } else {
            SparseSym {
                entries: vec![(i, j, 0.5), (j, i, 0.5)],
            }
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseSym {
            entries: (0..n).map(|i| (i, i, 1.0)).collect(),
        }
    }

    pub fn dot(&self, m: &DMatrix<f64>) -> f64 {
        self.entries.iter().map(|&(i, j, v)| v * m[(i, j)]).sum()
    }

    pub fn add_scaled_to(&self, m: &mut DMatrix<f64>, s: f64) {
        for &(i, j, v) in &self.entries {
            m[(i, j)] += s * v;
        }
    }
}

pub struct Problem {
    pub n: usize,
    pub c: DMatrix<f64>,
    pub a: Vec<SparseSym>,
    pub b: DVector<f64>,
}

impl Problem {
    fn apply(&self, m: &DMatrix<f64>) -> DVector<f64> {
        DVector::from_iterator(self.a.len(), self.a.iter().map(|a| a.dot(m)))
    }

    pub fn adjoint(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.n);
        for (a, &yk) in self.a.iter().zip(y.iter()) {
            a.add_scaled_to(&mut out, yk);
        }
        out
    }
}

pub struct Iterate {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub z: DMatrix<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepError {
    /// An iterate or the Schur complement lost positive definiteness.
    Breakdown,
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Damped largest step in `(0, 1]` keeping `M + t d` positive definite,
/// where `chol` factors `M`.
fn step_length(d: &DMatrix<f64>, chol: &Cholesky<f64, nalgebra::Dyn>) -> f64 {
    let l = chol.l();
    let Some(linv) = l.clone().try_inverse() else {
        return 0.0;
    };
    let scaled = symmetrize(&(&linv * d * linv.transpose()));
    let lmin = scaled.symmetric_eigenvalues().min();
    if lmin >= 0.0 {
        1.0
    } else {
        (0.98 / -lmin).min(1.0)
    }
}

pub struct Solver {
    pub problem: Problem,
    pub it: Iterate,
}

impl Solver {
    pub fn new(problem: Problem, scale: f64) -> Self {
        let n = problem.n;
        let m = problem.a.len();
        let it = Iterate {
            x: DMatrix::identity(n, n) * scale,
            y: DVector::zeros(m),
            z: DMatrix::identity(n, n) * scale,
        };
        Solver { problem, it }
    }

    pub fn mu(&self) -> f64 {
        self.it.x.dot(&self.it.z) / self.problem.n as f64
    }

    /// Schur complement `M_kl = Tr(A_k X A_l Z^-1)`.
    fn schur(&self, zinv: &DMatrix<f64>) -> DMatrix<f64> {
        let a = &self.problem.a;
        let x = &self.it.x;
        let m = a.len();
        let mut out = DMatrix::zeros(m, m);
        for k in 0..m {
            for l in k..m {
                let mut s = 0.0;
                for &(p, q, v) in &a[k].entries {
                    for &(r, t, w) in &a[l].entries {
                        s += v * w * x[(q, r)] * zinv[(t, p)];
                    }
                }
                out[(k, l)] = s;
                out[(l, k)] = s;
            }
        }
        out
    }

    fn direction(
        &self,
        schur: &Cholesky<f64, nalgebra::Dyn>,
        zinv: &DMatrix<f64>,
        rp: &DVector<f64>,
        rd: &DMatrix<f64>,
        rc: &DMatrix<f64>,
    ) -> (DMatrix<f64>, DVector<f64>, DMatrix<f64>) {
        let x = &self.it.x;
        let rhs = self.problem.apply(&((rc - x * rd) * zinv)) - rp;
        let dy = schur.solve(&rhs);
        let dz = self.problem.adjoint(&dy) + rd;
        let dx = symmetrize(&((rc - x * &dz) * zinv));
        (dx, dy, dz)
    }

    /// One predictor-corrector step.
    pub fn step(&mut self) -> Result<(), StepError> {
        let n = self.problem.n;
        let p = &self.problem;
        let rp = &p.b - p.apply(&self.it.x);
        let rd = symmetrize(&(p.adjoint(&self.it.y) - &p.c - &self.it.z));
        let zchol = Cholesky::new(self.it.z.clone()).ok_or(StepError::Breakdown)?;
        let xchol = Cholesky::new(self.it.x.clone()).ok_or(StepError::Breakdown)?;
        let zinv = symmetrize(&zchol.inverse());
        let schur = Cholesky::new(self.schur(&zinv)).ok_or(StepError::Breakdown)?;
        let mu = self.mu();
        let xz = &self.it.x * &self.it.z;

        let rc_aff = -&xz;
        let (dxa, _, dza) = self.direction(&schur, &zinv, &rp, &rd, &rc_aff);
        let ap = step_length(&dxa, &xchol);
        let ad = step_length(&dza, &zchol);
        let mu_aff = (&self.it.x + &dxa * ap).dot(&(&self.it.z + &dza * ad)) / n as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        let rc = DMatrix::identity(n, n) * (sigma * mu) - &xz - &dxa * &dza;
        let (dx, dy, dz) = self.direction(&schur, &zinv, &rp, &rd, &rc);
        let ap = step_length(&dx, &xchol);
        let ad = step_length(&dz, &zchol);
        self.it.x += &dx * ap;
        self.it.y += &dy * ad;
        self.it.z += &dz * ad;
        self.it.x = symmetrize(&self.it.x);
        self.it.z = symmetrize(&self.it.z);
        Ok(())
    }
}
