//! Krylov baselines: Jacobi-preconditioned CG on the explicitly formed
//! normal equations, and CGLS with the column-norm preconditioner.
//! One call to `step` is one Krylov iteration.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::{finite_or_diverged, Engine, Step};
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, matvec_into, matvec_transpose_into, DenseMatrix};

fn inverse_diagonal(diag: impl Iterator<Item = f64>) -> Vec<f64> {
    diag.map(|d| if d > 0.0 { 1.0 / d } else { 1.0 }).collect()
}

/// Preconditioned CG on `AᵀA x = Aᵀb`. `begin` forms `AᵀA` and `Aᵀb`, so
/// a timed run pays for the transformation.
#[derive(Debug)]
pub struct CgEngine<'a> {
    a: &'a DenseMatrix,
    b: &'a [f64],
    gram: Vec<f64>,
    x: Vec<f64>,
    r: Vec<f64>,
    z: Vec<f64>,
    p: Vec<f64>,
    w: Vec<f64>,
    inv_diag: Vec<f64>,
    rz: f64,
    iteration: u64,
    ready: bool,
}

impl<'a> CgEngine<'a> {
    pub fn new(a: &'a DenseMatrix, b: &'a [f64]) -> Self {
        let n = a.cols();
        Self {
            a,
            b,
            gram: Vec::new(),
            x: vec![0.0; n],
            r: vec![0.0; n],
            z: vec![0.0; n],
            p: vec![0.0; n],
            w: vec![0.0; n],
            inv_diag: Vec::new(),
            rz: 0.0,
            iteration: 0,
            ready: false,
        }
    }
}

impl Engine for CgEngine<'_> {
    fn begin(&mut self) -> Result<()> {
        let n = self.a.cols();
        self.gram = self.a.normal_matrix();
        matvec_transpose_into(self.a, self.b, &mut self.r)?;
        self.inv_diag = inverse_diagonal((0..n).map(|j| self.gram[j * n + j]));
        for ((z, &r), &d) in self.z.iter_mut().zip(&self.r).zip(&self.inv_diag) {
            *z = r * d;
        }
        self.p.copy_from_slice(&self.z);
        self.rz = dot(&self.r, &self.z);
        self.x.iter_mut().for_each(|x| *x = 0.0);
        self.ready = true;
        Ok(())
    }

    fn step(&mut self) -> Result<Step> {
        if !self.ready {
            self.begin()?;
        }
        if self.rz == 0.0 {
            return Ok(Step::Solved);
        }
        let n = self.a.cols();
        for (wi, row) in self.w.iter_mut().zip(self.gram.chunks_exact(n)) {
            *wi = dot(row, &self.p);
        }
        let curvature = dot(&self.p, &self.w);
        if !(curvature > 0.0) {
            return Err(Error::Breakdown {
                iteration: self.iteration,
            });
        }
        let step = self.rz / curvature;
        finite_or_diverged(step, self.iteration)?;
        axpy(step, &self.p, &mut self.x);
        axpy(-step, &self.w, &mut self.r);
        for ((z, &r), &d) in self.z.iter_mut().zip(&self.r).zip(&self.inv_diag) {
            *z = r * d;
        }
        let rz_next = dot(&self.r, &self.z);
        let beta = rz_next / self.rz;
        for (p, &z) in self.p.iter_mut().zip(&self.z) {
            *p = z + beta * *p;
        }
        self.rz = rz_next;
        self.iteration += 1;
        Ok(Step::Advanced)
    }

    fn iterate(&self) -> &[f64] {
        &self.x
    }

    fn into_iterate(self: Box<Self>) -> Vec<f64> {
        self.x
    }
}

/// CGLS on `A` directly, preconditioned by `diag(‖A₍ⱼ₎‖²)⁻¹`.
#[derive(Debug)]
pub struct CglsEngine<'a> {
    a: &'a DenseMatrix,
    x: Vec<f64>,
    r: Vec<f64>,
    s: Vec<f64>,
    z: Vec<f64>,
    p: Vec<f64>,
    ap: Vec<f64>,
    inv_diag: Vec<f64>,
    gamma: f64,
    iteration: u64,
}

impl<'a> CglsEngine<'a> {
    pub fn new(a: &'a DenseMatrix, b: &[f64]) -> Self {
        Self::starting_from(a, b, &vec![0.0; a.cols()])
    }

    /// CGLS restarted from `x0`; used to polish least-squares references.
    pub fn starting_from(a: &'a DenseMatrix, b: &[f64], x0: &[f64]) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let mut r = vec![0.0; m];
        crate::linalg::residual_into(a, x0, b, &mut r).expect("dimensions checked by caller");
        let mut s = vec![0.0; n];
        matvec_transpose_into(a, &r, &mut s).expect("dimensions match");
        let inv_diag = inverse_diagonal(a.column_norms_sq().into_iter());
        let z: Vec<f64> = s.iter().zip(&inv_diag).map(|(s, d)| s * d).collect();
        let gamma = dot(&s, &z);
        Self {
            a,
            x: x0.to_vec(),
            r,
            s,
            p: z.clone(),
            z,
            ap: vec![0.0; m],
            inv_diag,
            gamma,
            iteration: 0,
        }
    }

    /// `Aᵀ(b − Ax)` as tracked by the recurrence.
    pub fn normal_residual(&self) -> &[f64] {
        &self.s
    }
}

impl Engine for CglsEngine<'_> {
    fn step(&mut self) -> Result<Step> {
        if self.gamma == 0.0 {
            return Ok(Step::Solved);
        }
        matvec_into(self.a, &self.p, &mut self.ap)?;
        let curvature = dot(&self.ap, &self.ap);
        if !(curvature > 0.0) {
            return Err(Error::Breakdown {
                iteration: self.iteration,
            });
        }
        let step = self.gamma / curvature;
        finite_or_diverged(step, self.iteration)?;
        axpy(step, &self.p, &mut self.x);
        axpy(-step, &self.ap, &mut self.r);
        matvec_transpose_into(self.a, &self.r, &mut self.s)?;
        for ((z, &s), &d) in self.z.iter_mut().zip(&self.s).zip(&self.inv_diag) {
            *z = s * d;
        }
        let gamma_next = dot(&self.s, &self.z);
        let beta = gamma_next / self.gamma;
        for (p, &z) in self.p.iter_mut().zip(&self.z) {
            *p = z + beta * *p;
        }
        self.gamma = gamma_next;
        self.iteration += 1;
        Ok(Step::Advanced)
    }

    fn iterate(&self) -> &[f64] {
        &self.x
    }

    fn into_iterate(self: Box<Self>) -> Vec<f64> {
        self.x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_in_one_iteration() {
        let a = DenseMatrix::identity(3);
        let b = [1.0, -2.0, 5.0];
        let mut cg = CgEngine::new(&a, &b);
        cg.begin().unwrap();
        cg.step().unwrap();
        assert_eq!(cg.iterate(), &b);
        assert_eq!(cg.step().unwrap(), Step::Solved);
        let mut cgls = CglsEngine::new(&a, &b);
        cgls.step().unwrap();
        assert_eq!(cgls.iterate(), &b);
        assert_eq!(cgls.step().unwrap(), Step::Solved);
    }

    #[test]
    fn two_by_two_normal_equations() {
        // AᵀA = [[2,1],[1,5]], Aᵀb = (b0+b2, 2b1+b2); closed-form inverse oracle
        let a = DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 2.0], [1.0, 1.0]]).unwrap();
        let b = [1.0, 3.0, -2.0];
        let (c0, c1) = (b[0] + b[2], 2.0 * b[1] + b[2]);
        let det = 2.0 * 5.0 - 1.0 * 1.0;
        let expected = [(5.0 * c0 - c1) / det, (-c0 + 2.0 * c1) / det];
        let mut cg = CgEngine::new(&a, &b);
        cg.begin().unwrap();
        let mut cgls = CglsEngine::new(&a, &b);
        for _ in 0..2 {
            cg.step().unwrap();
            cgls.step().unwrap();
        }
        for j in 0..2 {
            assert!((cg.iterate()[j] - expected[j]).abs() < 1e-12);
            assert!((cgls.iterate()[j] - expected[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn single_column_least_squares() {
        let a = DenseMatrix::from_rows(&[[1.0], [1.0], [1.0]]).unwrap();
        let b = [0.0, 1.0, 2.0];
        let mut cgls = CglsEngine::new(&a, &b);
        cgls.step().unwrap();
        assert!((cgls.iterate()[0] - 1.0).abs() < 1e-12);
    }
}
