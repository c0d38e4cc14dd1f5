use crate::error::{check_len, Result};
use crate::linalg::{DenseMatrix, DenseVector};

/// `A x = b` plus whatever reference solutions are known.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSystem {
    pub a: DenseMatrix,
    pub b: DenseVector,
    /// Exact solution of a consistent system.
    pub x_star: Option<DenseVector>,
    /// Least-squares solution of an inconsistent system.
    pub x_ls: Option<DenseVector>,
}

impl DenseSystem {
    pub fn new(a: DenseMatrix, b: impl Into<DenseVector>) -> Result<Self> {
        let b = b.into();
        check_len("right-hand side", a.rows(), b.len())?;
        Ok(Self {
            a,
            b,
            x_star: None,
            x_ls: None,
        })
    }

    pub fn with_x_star(mut self, x: impl Into<DenseVector>) -> Result<Self> {
        let x = x.into();
        check_len("x*", self.a.cols(), x.len())?;
        self.x_star = Some(x);
        Ok(self)
    }

    pub fn with_x_ls(mut self, x: impl Into<DenseVector>) -> Result<Self> {
        let x = x.into();
        check_len("x_LS", self.a.cols(), x.len())?;
        self.x_ls = Some(x);
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    /// `x*` when known, otherwise `x_LS`.
    pub fn reference(&self) -> Option<&[f64]> {
        self.x_star.as_deref().or(self.x_ls.as_deref())
    }
}
