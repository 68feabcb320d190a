use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::scalar::{lit, to_f64, Amp, Real};
use crate::sim::gates::Mat2;

/// Largest register the simulator will allocate.
pub const MAX_SIM_QUBITS: usize = 26;

/// Pure state on `n` qubits. Qubit `q` is bit `q` of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector<T: Real> {
    n: usize,
    amps: Vec<Amp<T>>,
}

impl<T: Real> Statevector<T> {
    /// `|0…0⟩`.
    pub fn zero_state(n: usize) -> Self {
        assert!(n <= MAX_SIM_QUBITS, "{n} qubits exceeds simulator limit");
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << n];
        amps[0] = Complex::new(T::one(), T::zero());
        Self { n, amps }
    }

    pub fn basis_state(n: usize, index: usize) -> Result<Self> {
        if index >= 1 << n {
            return Err(invalid(format!("basis index {index} out of range")));
        }
        let mut s = Self::zero_state(n);
        s.amps[0] = Complex::new(T::zero(), T::zero());
        s.amps[index] = Complex::new(T::one(), T::zero());
        Ok(s)
    }

    pub fn from_amplitudes(amps: Vec<Amp<T>>) -> Result<Self> {
        let s = Self::from_amplitudes_unchecked(amps);
        let norm = s.norm_sqr();
        if (norm - T::one()).abs() > T::check_tol() {
            return Err(Error::Precondition(format!(
                "amplitudes not normalized (|ψ|² = {})",
                to_f64(norm)
            )));
        }
        Ok(s)
    }

    /// Wraps raw amplitudes, only checking that the length is a power of two.
    pub fn from_amplitudes_unchecked(amps: Vec<Amp<T>>) -> Self {
        assert!(
            amps.len().is_power_of_two(),
            "amplitude count must be a power of two"
        );
        let n = amps.len().trailing_zeros() as usize;
        Self { n, amps }
    }

    /// Normalizes `amps` and wraps them.
    pub fn normalized(amps: Vec<Amp<T>>) -> Result<Self> {
        let mut s = Self::from_amplitudes_unchecked(amps);
        let norm = s.norm_sqr().sqrt();
        if norm == T::zero() || !norm.is_finite() {
            return Err(invalid("cannot normalize a zero or non-finite vector"));
        }
        s.amps.iter_mut().for_each(|a| *a /= norm);
        Ok(s)
    }

    /// Haar-ish random state from i.i.d. Gaussian amplitudes.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..1usize << n)
            .map(|_| Complex::new(lit::<T>(gaussian(&mut rng)), lit(gaussian(&mut rng))))
            .collect();
        Self::normalized(amps).expect("Gaussian vector is nonzero")
    }

    /// Product of single-qubit pure states with the given unit Bloch vectors, qubit 0 first.
    pub fn from_bloch(blochs: &[[T; 3]]) -> Result<Self> {
        let mut amps = vec![Complex::new(T::one(), T::zero())];
        for (q, &bloch) in blochs.iter().enumerate() {
            let [a0, a1] = bloch_amplitudes(bloch)
                .ok_or_else(|| invalid(format!("Bloch vector on qubit {q} is not unit length")))?;
            let mut next = vec![Complex::new(T::zero(), T::zero()); amps.len() * 2];
            let half = amps.len();
            for (i, &a) in amps.iter().enumerate() {
                next[i] = a * a0;
                next[i + half] = a * a1;
            }
            amps = next;
        }
        Ok(Self {
            n: blochs.len(),
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Amp<T>] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Amp<T>> {
        self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &Self) -> Amp<T> {
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a.conj() * b
            })
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> T {
        self.inner(other).norm_sqr()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(invalid(format!(
                "qubit {q} out of range for {} qubits",
                self.n
            )));
        }
        Ok(())
    }

    /// Applies a single-qubit unitary in place.
    pub fn apply_single_qubit(&mut self, qubit: usize, u: &Mat2<T>) -> Result<()> {
        self.check_qubit(qubit)?;
        let err = u.unitarity_error();
        if err > T::check_tol() / lit(10.0) {
            return Err(invalid(format!(
                "gate is not unitary (error {})",
                to_f64(err)
            )));
        }
        self.apply_single_qubit_unchecked(qubit, u);
        Ok(())
    }

    pub(crate) fn apply_single_qubit_unchecked(&mut self, qubit: usize, u: &Mat2<T>) {
        let stride = 1usize << qubit;
        for block in self.amps.chunks_exact_mut(stride * 2) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let [b0, b1] = u.apply([*a0, *a1]);
                *a0 = b0;
                *a1 = b1;
            }
        }
    }

    /// Controlled-Z between two distinct qubits.
    pub fn apply_cz(&mut self, q1: usize, q2: usize) -> Result<()> {
        self.check_qubit(q1)?;
        self.check_qubit(q2)?;
        if q1 == q2 {
            return Err(invalid("CZ needs two distinct qubits"));
        }
        let mask = (1usize << q1) | (1usize << q2);
        for (b, a) in self.amps.iter_mut().enumerate() {
            if b & mask == mask {
                *a = -*a;
            }
        }
        Ok(())
    }

    /// Probability of reading `|0⟩` on `qubit`.
    pub fn prob_zero(&self, qubit: usize) -> T {
        let bit = 1usize << qubit;
        self.amps
            .iter()
            .enumerate()
            .filter(|(b, _)| b & bit == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Z-basis measurement of one qubit with collapse. Returns `+1` for `|0⟩`, `−1` for `|1⟩`.
    pub fn measure<R: Rng + ?Sized>(&mut self, qubit: usize, rng: &mut R) -> i8 {
        let p0 = self.prob_zero(qubit);
        let draw: T = lit(rng.random::<f64>());
        let outcome_zero = draw < p0;
        let keep = if outcome_zero { p0 } else { T::one() - p0 };
        let scale = T::one() / keep.max(T::min_positive_value()).sqrt();
        let bit = 1usize << qubit;
        for (b, a) in self.amps.iter_mut().enumerate() {
            if (b & bit == 0) == outcome_zero {
                *a *= scale;
            } else {
                *a = Complex::new(T::zero(), T::zero());
            }
        }
        if outcome_zero {
            1
        } else {
            -1
        }
    }
}

/// Amplitudes `(α, β)` of the pure state with unit Bloch vector `(a, b, c)`.
pub fn bloch_amplitudes<T: Real>(bloch: [T; 3]) -> Option<[Amp<T>; 2]> {
    let [a, b, c] = bloch;
    let len = (a * a + b * b + c * c).sqrt();
    if (len - T::one()).abs() > T::check_tol() * lit(10.0) {
        return None;
    }
    let two = lit::<T>(2.0);
    let alpha = ((T::one() + c) / two).max(T::zero()).sqrt();
    let beta = if alpha > T::epsilon().sqrt() {
        Complex::new(a, b) / (two * alpha)
    } else {
        Complex::new(T::one(), T::zero())
    };
    Some([Complex::new(alpha, T::zero()), beta])
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box–Muller
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Axis;

    #[test]
    fn x_flips_zero() {
        let mut s = Statevector::<f64>::zero_state(1);
        s.apply_single_qubit(0, &Mat2::pauli(Axis::X)).unwrap();
        assert_eq!(s, Statevector::basis_state(1, 1).unwrap());
    }

    #[test]
    fn identity_and_double_hadamard() {
        let psi = Statevector::<f64>::random(3, 9);
        let mut s = psi.clone();
        s.apply_single_qubit(1, &Mat2::identity()).unwrap();
        assert_eq!(s, psi);
        s.apply_single_qubit(2, &Mat2::hadamard()).unwrap();
        s.apply_single_qubit(2, &Mat2::hadamard()).unwrap();
        assert!(s.fidelity(&psi) > 1.0 - 1e-12);
    }

    #[test]
    fn non_unitary_rejected() {
        let mut s = Statevector::<f64>::zero_state(1);
        let m = Mat2::real(1.0, 1.0, 0.0, 1.0);
        assert!(matches!(
            s.apply_single_qubit(0, &m),
            Err(Error::InvalidArgument(_))
        ));
        assert!(s.apply_single_qubit(1, &Mat2::identity()).is_err());
    }

    #[test]
    fn cz_examples() {
        let mut s = Statevector::<f64>::basis_state(2, 3).unwrap();
        s.apply_cz(0, 1).unwrap();
        assert_eq!(s.amplitudes()[3], Complex::new(-1.0, 0.0));
        let mut z = Statevector::<f64>::zero_state(2);
        z.apply_cz(1, 0).unwrap();
        assert_eq!(z, Statevector::zero_state(2));
        let psi = Statevector::<f64>::random(3, 1);
        let mut t = psi.clone();
        t.apply_cz(0, 2).unwrap();
        t.apply_cz(0, 2).unwrap();
        assert_eq!(t, psi);
        assert!(t.apply_cz(1, 1).is_err());
    }

    #[test]
    fn gates_preserve_norm() {
        let mut s = Statevector::<f64>::random(4, 3);
        for q in 0..4 {
            s.apply_single_qubit(q, &(Mat2::rz(0.4 * q as f64) * Mat2::ry(1.3)))
                .unwrap();
            if q > 0 {
                s.apply_cz(q - 1, q).unwrap();
            }
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn measurement_collapses() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = Statevector::<f64>::from_bloch(&[[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        let out = s.measure(0, &mut rng);
        let expected = if out == 1 { 0.0 } else { 1.0 };
        assert!((1.0 - s.prob_zero(0) - expected).abs() < 1e-12);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        assert_eq!(s.measure(1, &mut rng), 1);
    }

    #[test]
    fn bloch_product_layout() {
        // qubit 0 in |1>, qubit 1 in |0> → basis index 1
        let s = Statevector::<f64>::from_bloch(&[[0.0, 0.0, -1.0], [0.0, 0.0, 1.0]]).unwrap();
        assert!((s.amplitudes()[1].norm_sqr() - 1.0).abs() < 1e-12);
        assert!(Statevector::<f64>::from_bloch(&[[0.5, 0.0, 0.0]]).is_err());
    }

    #[test]
    fn unnormalized_amplitudes_rejected() {
        let v = vec![Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)];
        assert!(Statevector::<f64>::from_amplitudes(v.clone()).is_err());
        assert!(Statevector::<f64>::normalized(v).is_ok());
    }
}
