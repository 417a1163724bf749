//! Quaternion scalars `q0 + q1 i + q2 j + q3 k` with Hamilton's product.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Tolerance on `|norm(q) - 1|` accepted by [`Quaternion::rotate_vector`].
pub const ROTOR_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(q0: f64, q1: f64, q2: f64, q3: f64) -> Self {
        Self { q0, q1, q2, q3 }
    }

    pub const fn real(q0: f64) -> Self {
        Self::new(q0, 0.0, 0.0, 0.0)
    }

    /// Pure quaternion `v1 i + v2 j + v3 k`.
    pub const fn pure(v1: f64, v2: f64, v3: f64) -> Self {
        Self::new(0.0, v1, v2, v3)
    }

    pub fn conj(self) -> Self {
        Self::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    pub fn norm_sqr(self) -> f64 {
        self.q0 * self.q0 + self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_pure(self) -> bool {
        self.q0 == 0.0
    }

    /// `q* / |q|^2`.
    pub fn inv(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.q0 * s, self.q1 * s, self.q2 * s, self.q3 * s)
    }

    /// Rotates the pure quaternion `v` by the unit rotor `self` as `q v q*`.
    pub fn rotate_vector(self, v: Quaternion) -> Result<Quaternion> {
        let norm = self.norm();
        if (norm - 1.0).abs() > ROTOR_TOLERANCE {
            return Err(Error::InvalidRotor { norm });
        }
        if !v.is_pure() {
            return Err(Error::InvalidRotor { norm });
        }
        let mut r = self * v * self.conj();
        // q v q* is pure in exact arithmetic; drop the rounding residue.
        r.q0 = 0.0;
        Ok(r)
    }

    /// Unit quaternion with the same direction, or 1 for the zero quaternion.
    pub fn unit_or_one(self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            Self::ONE
        } else {
            self.scale(1.0 / n)
        }
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.q0 + o.q0, self.q1 + o.q1, self.q2 + o.q2, self.q3 + o.q3)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.q0 - o.q0, self.q1 - o.q1, self.q2 - o.q2, self.q3 - o.q3)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.q0, -self.q1, -self.q2, -self.q3)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, p: Self) -> Self {
        let q = self;
        Self::new(
            q.q0 * p.q0 - q.q1 * p.q1 - q.q2 * p.q2 - q.q3 * p.q3,
            q.q0 * p.q1 + q.q1 * p.q0 + q.q2 * p.q3 - q.q3 * p.q2,
            q.q0 * p.q2 - q.q1 * p.q3 + q.q2 * p.q0 + q.q3 * p.q1,
            q.q0 * p.q3 + q.q1 * p.q2 - q.q2 * p.q1 + q.q3 * p.q0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}
