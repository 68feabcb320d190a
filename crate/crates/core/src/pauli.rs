//! n-qubit Pauli strings in symplectic (x, z) bit-mask form.
//!
//! Qubit `q` is bit `q` of both masks and of computational basis indices. Text rendering puts
//! qubit 0 leftmost, so `"XI"` is X on qubit 0.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::scalar::{to_f64, Amp, Real};
use crate::sim::Statevector;

/// Largest qubit count a [`PauliString`] can address.
pub const MAX_QUBITS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Axis::X => (true, false),
            Axis::Y => (true, true),
            Axis::Z => (false, true),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Global phase i^k of a Pauli product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    One,
    I,
    MinusOne,
    MinusI,
}

impl Phase {
    fn from_exponent(k: i32) -> Self {
        match k.rem_euclid(4) {
            0 => Phase::One,
            1 => Phase::I,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn to_complex<T: Real>(self) -> Amp<T> {
        match self {
            Phase::One => Complex::new(T::one(), T::zero()),
            Phase::I => Complex::new(T::zero(), T::one()),
            Phase::MinusOne => Complex::new(-T::one(), T::zero()),
            Phase::MinusI => Complex::new(T::zero(), -T::one()),
        }
    }
}

/// Hermitian Pauli string; Y is stored as (x, z) = (1, 1) and means the usual Y = iXZ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::SizeLimit(format!(
                "Pauli strings hold at most {MAX_QUBITS} qubits"
            )));
        }
        Ok(Self { n, x: 0, z: 0 })
    }

    pub fn from_masks(n: usize, x: u64, z: u64) -> Result<Self> {
        let p = Self::identity(n)?;
        let mask = full_mask(n);
        if x & !mask != 0 || z & !mask != 0 {
            return Err(invalid("mask has bits beyond the qubit count"));
        }
        Ok(Self { x, z, ..p })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn letter(&self, qubit: usize) -> Option<Axis> {
        match (self.x >> qubit & 1, self.z >> qubit & 1) {
            (0, 0) => None,
            (1, 0) => Some(Axis::X),
            (1, 1) => Some(Axis::Y),
            _ => Some(Axis::Z),
        }
    }

    /// Support qubits with their letters, ascending.
    pub fn letters(&self) -> impl Iterator<Item = (usize, Axis)> + '_ {
        (0..self.n).filter_map(move |q| self.letter(q).map(|a| (q, a)))
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Weight-1 string with `axis` on `qubit`.
pub fn single_axis_pauli(n: usize, qubit: usize, axis: Axis) -> Result<PauliString> {
    if qubit >= n {
        return Err(invalid(format!(
            "qubit {qubit} out of range for {n} qubits"
        )));
    }
    let (xb, zb) = axis.bits();
    PauliString::from_masks(n, (xb as u64) << qubit, (zb as u64) << qubit)
}

/// Pauli group product `a·b = phase · c`.
pub fn multiply(a: &PauliString, b: &PauliString) -> Result<(PauliString, Phase)> {
    if a.n != b.n {
        return Err(invalid(format!("qubit count mismatch: {} vs {}", a.n, b.n)));
    }
    // Each string is i^{|x∧z|} X^x Z^z; moving Z^{z_a} past X^{x_b} costs (−1)^{|z_a∧x_b|}.
    let x = a.x ^ b.x;
    let z = a.z ^ b.z;
    let k = (a.x & a.z).count_ones() as i32
        + (b.x & b.z).count_ones() as i32
        + 2 * (a.z & b.x).count_ones() as i32
        - (x & z).count_ones() as i32;
    Ok((PauliString { n: a.n, x, z }, Phase::from_exponent(k)))
}

/// `⟨ψ|P|ψ⟩`, matrix-free over the 2^n amplitudes.
pub fn expectation<T: Real>(p: &PauliString, psi: &Statevector<T>) -> Result<T> {
    if p.n != psi.num_qubits() {
        return Err(invalid(format!(
            "Pauli on {} qubits vs state on {} qubits",
            p.n,
            psi.num_qubits()
        )));
    }
    let norm = psi.norm_sqr();
    if (norm - T::one()).abs() > T::check_tol() {
        return Err(Error::Precondition(format!(
            "state not normalized (|ψ|² = {})",
            to_f64(norm)
        )));
    }
    Ok(expectation_unchecked(p, psi.amplitudes()))
}

/// Expectation without dimension or norm checks.
pub(crate) fn expectation_unchecked<T: Real>(p: &PauliString, amps: &[Amp<T>]) -> T {
    let mut acc = Complex::new(T::zero(), T::zero());
    for (b, &a) in amps.iter().enumerate() {
        let b = b as u64;
        let partner = amps[(b ^ p.x) as usize];
        let term = partner.conj() * a;
        if (p.z & b).count_ones() % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    let value = acc * Phase::from_exponent((p.x & p.z).count_ones() as i32).to_complex::<T>();
    debug_assert!(
        value.im.abs() < T::check_tol(),
        "Hermitian expectation has imaginary residue {}",
        value.im
    );
    value.re
}

/// Applies `coeff·P` to `input`, accumulating into `out`.
pub(crate) fn apply_accumulate<T: Real>(
    p: &PauliString,
    coeff: T,
    input: &[Amp<T>],
    out: &mut [Amp<T>],
) {
    let phase = Phase::from_exponent((p.x & p.z).count_ones() as i32).to_complex::<T>() * coeff;
    let neg = -phase;
    for (b, &a) in input.iter().enumerate() {
        let b = b as u64;
        let f = if (p.z & b).count_ones() % 2 == 1 {
            neg
        } else {
            phase
        };
        out[(b ^ p.x) as usize] += f * a;
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            let c = self.letter(q).map_or('I', Axis::letter);
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count();
        let mut x = 0u64;
        let mut z = 0u64;
        PauliString::identity(n)?;
        for (q, c) in s.chars().enumerate() {
            match c {
                'I' => {}
                'X' => x |= 1 << q,
                'Y' => {
                    x |= 1 << q;
                    z |= 1 << q;
                }
                'Z' => z |= 1 << q,
                other => return Err(invalid(format!("unknown Pauli letter `{other}`"))),
            }
        }
        PauliString::from_masks(n, x, z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Statevector;
    use proptest::prelude::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn single_axis_examples() {
        assert_eq!(
            single_axis_pauli(4, 0, Axis::X).unwrap().to_string(),
            "XIII"
        );
        assert_eq!(single_axis_pauli(1, 0, Axis::Z).unwrap().to_string(), "Z");
        assert_eq!(single_axis_pauli(2, 1, Axis::Y).unwrap().to_string(), "IY");
        assert!(single_axis_pauli(2, 2, Axis::X).is_err());
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(multiply(&ps("X"), &ps("X")).unwrap(), (ps("I"), Phase::One));
        assert_eq!(
            multiply(&ps("X"), &ps("Z")).unwrap(),
            (ps("Y"), Phase::MinusI)
        );
        assert_eq!(
            multiply(&ps("XI"), &ps("IZ")).unwrap(),
            (ps("XZ"), Phase::One)
        );
        assert_eq!(multiply(&ps("Z"), &ps("X")).unwrap(), (ps("Y"), Phase::I));
        assert_eq!(multiply(&ps("X"), &ps("Y")).unwrap(), (ps("Z"), Phase::I));
        assert_eq!(multiply(&ps("Y"), &ps("Z")).unwrap(), (ps("X"), Phase::I));
        assert!(multiply(&ps("X"), &ps("XX")).is_err());
    }

    #[test]
    fn weight_and_rendering() {
        let p = ps("IXYZ");
        assert_eq!(p.weight(), 3);
        assert_eq!(p.to_string(), "IXYZ");
        assert!("XQ".parse::<PauliString>().is_err());
    }

    fn all_two_qubit() -> Vec<PauliString> {
        (0..16u64)
            .map(|k| PauliString::from_masks(2, k & 3, k >> 2).unwrap())
            .collect()
    }

    fn phase_exp(p: Phase) -> i32 {
        match p {
            Phase::One => 0,
            Phase::I => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    #[test]
    fn squares_are_identity_and_product_associates() {
        let all = all_two_qubit();
        for a in &all {
            let (sq, ph) = multiply(a, a).unwrap();
            assert_eq!(sq.weight(), 0);
            assert_eq!(ph, Phase::One);
            for b in &all {
                for c in &all {
                    let (ab, p1) = multiply(a, b).unwrap();
                    let (abc, p2) = multiply(&ab, c).unwrap();
                    let (bc, q1) = multiply(b, c).unwrap();
                    let (abc2, q2) = multiply(a, &bc).unwrap();
                    assert_eq!(abc, abc2);
                    assert_eq!(
                        (phase_exp(p1) + phase_exp(p2)) % 4,
                        (phase_exp(q1) + phase_exp(q2)) % 4
                    );
                }
            }
        }
    }

    #[test]
    fn expectation_examples() {
        let zero = Statevector::<f64>::zero_state(1);
        assert_eq!(expectation(&ps("Z"), &zero).unwrap(), 1.0);
        assert_eq!(expectation(&ps("X"), &zero).unwrap(), 0.0);
        let magic = Statevector::<f64>::from_bloch(&[[1.0 / 3f64.sqrt(); 3]]).unwrap();
        let x = expectation(&ps("X"), &magic).unwrap();
        assert!((x - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn expectation_errors() {
        let zero = Statevector::<f64>::zero_state(2);
        assert!(matches!(
            expectation(&ps("Z"), &zero),
            Err(Error::InvalidArgument(_))
        ));
        let raw = Statevector::<f64>::from_amplitudes_unchecked(vec![
            Complex::new(2.0, 0.0),
            Complex::new(0.0, 0.0),
        ]);
        assert!(matches!(
            expectation(&ps("Z"), &raw),
            Err(Error::Precondition(_))
        ));
    }

    proptest! {
        #[test]
        fn expectation_bounded(seed in any::<u64>(), k in 0u64..64) {
            let psi = Statevector::<f64>::random(3, seed);
            let p = PauliString::from_masks(3, k & 7, k >> 3).unwrap();
            let e = expectation(&p, &psi).unwrap();
            prop_assert!(e.abs() <= 1.0 + 1e-12);
        }
    }
}
