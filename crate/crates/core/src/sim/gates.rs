use std::ops::Mul;

use num_complex::Complex;

use crate::pauli::Axis;
use crate::scalar::{lit, Amp, Real};

/// Dense 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<T: Real>(pub [[Amp<T>; 2]; 2]);

impl<T: Real> Mat2<T> {
    pub fn new(a: Amp<T>, b: Amp<T>, c: Amp<T>, d: Amp<T>) -> Self {
        Self([[a, b], [c, d]])
    }

    pub fn real(a: T, b: T, c: T, d: T) -> Self {
        let z = T::zero();
        Self::new(
            Complex::new(a, z),
            Complex::new(b, z),
            Complex::new(c, z),
            Complex::new(d, z),
        )
    }

    pub fn identity() -> Self {
        Self::real(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn pauli(axis: Axis) -> Self {
        let (o, z) = (T::one(), T::zero());
        match axis {
            Axis::X => Self::real(z, o, o, z),
            Axis::Y => Self::new(
                Complex::new(z, z),
                Complex::new(z, -o),
                Complex::new(z, o),
                Complex::new(z, z),
            ),
            Axis::Z => Self::real(o, z, z, -o),
        }
    }

    pub fn hadamard() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self::real(h, h, h, -h)
    }

    pub fn s_dagger() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self::new(
            Complex::new(o, z),
            Complex::new(z, z),
            Complex::new(z, z),
            Complex::new(z, -o),
        )
    }

    /// `exp(−i·angle/2·Z)`.
    pub fn rz(angle: T) -> Self {
        let h = angle / lit(2.0);
        let z = Complex::new(T::zero(), T::zero());
        Self::new(
            Complex::new(h.cos(), -h.sin()),
            z,
            z,
            Complex::new(h.cos(), h.sin()),
        )
    }

    /// `exp(−i·angle/2·Y)`.
    pub fn ry(angle: T) -> Self {
        let h = angle / lit(2.0);
        Self::real(h.cos(), -h.sin(), h.sin(), h.cos())
    }

    /// `exp(−i·t·X)`.
    pub fn exp_x(t: T) -> Self {
        let c = Complex::new(t.cos(), T::zero());
        let s = Complex::new(T::zero(), -t.sin());
        Self::new(c, s, s, c)
    }

    /// `exp(−i·s·Z)`.
    pub fn exp_z(s: T) -> Self {
        Self::rz(s * lit(2.0))
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Self::new(
            m[0][0].conj(),
            m[1][0].conj(),
            m[0][1].conj(),
            m[1][1].conj(),
        )
    }

    pub fn apply(&self, v: [Amp<T>; 2]) -> [Amp<T>; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Max-entry deviation of `U†U` from the identity.
    pub fn unitarity_error(&self) -> T {
        let p = self.dagger() * *self;
        let id = Self::identity();
        let mut err = T::zero();
        for r in 0..2 {
            for c in 0..2 {
                err = err.max((p.0[r][c] - id.0[r][c]).norm());
            }
        }
        err
    }
}

impl<T: Real> Mul for Mat2<T> {
    type Output = Mat2<T>;

    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Mat2(out)
    }
}

/// Rotation taking a pure single-qubit state with unit Bloch vector `(a, b, c)` to `|0⟩`:
/// `exp(−itX)·exp(−isZ)` with `cos²t = (1 + c)/2` and `(sin 2s, cos 2s) ∝ (a, b)`.
pub fn rotation_to_zero<T: Real>(bloch: [T; 3]) -> Mat2<T> {
    let [a, b, c] = bloch;
    let t = ((T::one() + c) / lit(2.0))
        .max(T::zero())
        .min(T::one())
        .sqrt()
        .acos();
    let s = if a == T::zero() && b == T::zero() {
        T::zero()
    } else {
        a.atan2(b) / lit(2.0)
    };
    Mat2::exp_x(t) * Mat2::exp_z(s)
}
