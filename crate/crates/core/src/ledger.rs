//! Pass accounting over the input matrix.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::Result;
use crate::matrix::QuatMatrix;

/// Counts complete views (passes) over an input matrix.
///
/// One view is one product `X * B` or `X^H * B` against the full input,
/// however that product is tiled internally.
#[derive(Debug, Default)]
pub struct PassLedger {
    views: AtomicUsize,
}

impl PassLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&self) {
        self.views.fetch_add(1, Ordering::SeqCst);
    }

    pub fn views(&self) -> usize {
        self.views.load(Ordering::SeqCst)
    }
}

/// The only route by which sketching algorithms touch the input matrix.
#[derive(Debug)]
pub struct CountedMatrix<'a> {
    inner: &'a QuatMatrix,
    ledger: PassLedger,
}

impl<'a> CountedMatrix<'a> {
    pub fn new(inner: &'a QuatMatrix) -> Self {
        Self {
            inner,
            ledger: PassLedger::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.inner.rows()
    }

    pub fn cols(&self) -> usize {
        self.inner.cols()
    }

    /// `X * block`, one pass.
    pub fn apply(&self, block: &QuatMatrix) -> Result<QuatMatrix> {
        let out = self.inner.mul(block)?;
        self.ledger.record();
        Ok(out)
    }

    /// `X^H * block`, one pass.
    pub fn apply_hermitian(&self, block: &QuatMatrix) -> Result<QuatMatrix> {
        let out = self.inner.hermitian_mul(block)?;
        self.ledger.record();
        Ok(out)
    }

    pub fn views(&self) -> usize {
        self.ledger.views()
    }
}
