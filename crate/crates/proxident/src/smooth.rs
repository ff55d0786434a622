//! Smooth part of the composite objective: scaled least squares
//! f(x) = c * ||Ax - b||^2 acting on the flattened variable.

use crate::error::Error;
use crate::linalg::{spectral_norm, DenseMatrix, DenseVector};
use crate::regularizers::Regularizer;

#[derive(Debug, Clone)]
pub struct LeastSquares {
    a: DenseMatrix,
    b: DenseVector,
    scale: f64,
}

impl LeastSquares {
    pub fn new(a: DenseMatrix, b: DenseVector, scale: f64) -> Result<Self, Error> {
        if a.rows() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                got: b.len(),
            });
        }
        if scale <= 0.0 {
            return Err(Error::InvalidArgument("scale must be positive".into()));
        }
        Ok(Self { a, b, scale })
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    pub fn operator(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn target(&self) -> &DenseVector {
        &self.b
    }

    fn check_dims(&self, x: &DenseVector) -> Result<(), Error> {
        if x.len() != self.a.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.a.cols(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// c * ||Ax - b||^2
    pub fn value(&self, x: &DenseVector) -> Result<f64, Error> {
        self.check_dims(x)?;
        let r = self.a.matvec(x).sub(&self.b);
        Ok(self.scale * r.dot(&r))
    }

    /// 2c * A^T (Ax - b)
    pub fn grad(&self, x: &DenseVector) -> Result<DenseVector, Error> {
        self.check_dims(x)?;
        let r = self.a.matvec(x).sub(&self.b);
        Ok(self.a.matvec_t(&r).scale(2.0 * self.scale))
    }

    /// L = 2c * sigma_max(A)^2
    pub fn lipschitz_constant(&self) -> Result<f64, Error> {
        let s = spectral_norm(&self.a, 1e-8)?;
        Ok(2.0 * self.scale * s * s)
    }
}

/// F = f + lambda * g over a variable of shape `var_dims` (rows, cols);
/// plain vectors use (n, 1).
#[derive(Debug, Clone)]
pub struct CompositeProblem {
    pub smooth: LeastSquares,
    pub reg: Regularizer,
    pub lambda: f64,
    pub var_dims: (usize, usize),
}

impl CompositeProblem {
    pub fn new(
        smooth: LeastSquares,
        reg: Regularizer,
        lambda: f64,
        var_dims: (usize, usize),
    ) -> Result<Self, Error> {
        if lambda < 0.0 {
            return Err(Error::InvalidArgument("lambda must be >= 0".into()));
        }
        if smooth.dim() != var_dims.0 * var_dims.1 {
            return Err(Error::DimensionMismatch {
                expected: var_dims.0 * var_dims.1,
                got: smooth.dim(),
            });
        }
        Ok(Self {
            smooth,
            reg,
            lambda,
            var_dims,
        })
    }

    pub fn dim(&self) -> usize {
        self.smooth.dim()
    }

    pub fn composite_value(&self, x: &DenseVector) -> Result<f64, Error> {
        let f = self.smooth.value(x)?;
        if self.lambda == 0.0 {
            return Ok(f);
        }
        Ok(f + self.lambda * self.reg.evaluate(x)?)
    }
}
