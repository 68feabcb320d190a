//! Largest eigenpair of a relaxed Hamiltonian.
//!
//! Small registers go through a dense path: Householder reduction of the complex Hermitian
//! matrix to tridiagonal form, a diagonal phase change that makes it real symmetric, Sturm
//! bisection for the top eigenvalue and inverse iteration for its vector. Larger registers use
//! restarted Lanczos with full reorthogonalization, applying the Hamiltonian matrix-free.

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::qrac::RelaxedHamiltonian;
use crate::scalar::{lit, to_f64, Amp, Real};
use crate::sim::Statevector;

/// Registers up to this width use the dense solver.
pub const DENSE_MAX_QUBITS: usize = 10;
/// Widest register [`extremal_eigenstate`] accepts.
pub const EIGEN_MAX_QUBITS: usize = 24;

/// Restarted Lanczos parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LanczosConfig {
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Upper bound on `krylov_dim × 2^n` stored amplitudes; the basis shrinks to fit.
    pub max_basis_amplitudes: usize,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            krylov_dim: 64,
            max_restarts: 50,
            max_basis_amplitudes: 1 << 27,
        }
    }
}

/// Returns a unit eigenvector for the largest eigenvalue of `h` and that eigenvalue, with
/// `‖Hv − Ev‖ ≤ tol·max(1, |E|)`.
pub fn extremal_eigenstate<T: Real>(
    h: &RelaxedHamiltonian<T>,
    tol: T,
) -> Result<(Statevector<T>, T)> {
    let n = h.num_qubits();
    if n > EIGEN_MAX_QUBITS {
        return Err(Error::SizeLimit(format!(
            "{n} qubits exceeds eigensolver limit of {EIGEN_MAX_QUBITS}"
        )));
    }
    if !(tol > T::zero()) {
        return Err(invalid("tolerance must be positive"));
    }
    if n <= DENSE_MAX_QUBITS {
        dense_max_eigenpair(h, tol)
    } else {
        lanczos_max_eigenpair(h, tol, &LanczosConfig::default())
    }
}

/// `‖Hv − Ev‖`.
pub fn residual_norm<T: Real>(h: &RelaxedHamiltonian<T>, v: &Statevector<T>, value: T) -> T {
    let mut hv = vec![Complex::new(T::zero(), T::zero()); v.dim()];
    h.apply(v.amplitudes(), &mut hv);
    hv.iter()
        .zip(v.amplitudes())
        .map(|(&a, &b)| (a - b * value).norm_sqr())
        .sum::<T>()
        .sqrt()
}

fn accept<T: Real>(
    h: &RelaxedHamiltonian<T>,
    v: Statevector<T>,
    value: T,
    tol: T,
) -> Result<(Statevector<T>, T)> {
    let r = residual_norm(h, &v, value);
    if r <= tol * value.abs().max(T::one()) {
        Ok((v, value))
    } else {
        Err(Error::Convergence {
            residual: to_f64(r),
            message: format!("eigenpair residual above tolerance {}", to_f64(tol)),
        })
    }
}

/// Dense path. Builds the full `2^n × 2^n` matrix.
pub fn dense_max_eigenpair<T: Real>(
    h: &RelaxedHamiltonian<T>,
    tol: T,
) -> Result<(Statevector<T>, T)> {
    let n = h.num_qubits();
    if n > DENSE_MAX_QUBITS {
        return Err(Error::SizeLimit(format!(
            "dense eigensolve limited to {DENSE_MAX_QUBITS} qubits"
        )));
    }
    let dim = 1usize << n;
    let zero = Complex::new(T::zero(), T::zero());
    // column-major: a[c*dim + r] = H[r][c]
    let mut a = vec![zero; dim * dim];
    let mut e = vec![zero; dim];
    for c in 0..dim {
        e[c] = Complex::new(T::one(), T::zero());
        h.apply(&e, &mut a[c * dim..(c + 1) * dim]);
        e[c] = zero;
    }
    let (diag, off, reflectors) = householder_tridiagonalize(&mut a, dim);

    // D = diag(φ) with φ_{i+1} = φ_i·e_i/|e_i| turns T into the real S = D*·T·D.
    let mut phases = vec![Complex::new(T::one(), T::zero()); dim];
    let mut sub = vec![T::zero(); dim.saturating_sub(1)];
    for i in 0..dim.saturating_sub(1) {
        let mag = off[i].norm();
        sub[i] = mag;
        phases[i + 1] = if mag > T::zero() {
            phases[i] * (off[i] / mag)
        } else {
            phases[i]
        };
    }
    let (value, z) = tridiagonal_max_eigenpair(&diag, &sub);
    let mut v: Vec<Amp<T>> = z.iter().zip(&phases).map(|(&zi, &p)| p * zi).collect();
    for (k, refl) in reflectors.iter().enumerate().rev() {
        apply_reflector(refl, &mut v[k + 1..]);
    }
    let psi = Statevector::normalized(v)?;
    accept(h, psi, value, tol)
}

/// Diagonal, subdiagonal and Householder reflectors of a tridiagonal reduction.
type Tridiagonal<T> = (Vec<T>, Vec<Amp<T>>, Vec<Vec<Amp<T>>>);

/// Reduces the Hermitian column-major matrix `a` in place. Returns the real diagonal, the
/// complex subdiagonal `T[i+1][i]`, and the unit reflector `v_k` (acting on indices `k+1..`)
/// for each step, so that `A = Q·T·Q*` with `Q = H_0·H_1·…` and `H_k = I − 2v_k v_k*`.
fn householder_tridiagonalize<T: Real>(a: &mut [Amp<T>], dim: usize) -> Tridiagonal<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let two = lit::<T>(2.0);
    let idx = |r: usize, c: usize| c * dim + r;
    let mut reflectors = Vec::new();
    let mut off = vec![zero; dim.saturating_sub(1)];
    for k in 0..dim.saturating_sub(1) {
        let m = dim - k - 1;
        let x: Vec<Amp<T>> = (k + 1..dim).map(|r| a[idx(r, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        let tail = x[1..].iter().map(|z| z.norm_sqr()).sum::<T>();
        if m == 1 || tail == T::zero() {
            off[k] = x[0];
            reflectors.push(vec![zero; m]);
            continue;
        }
        let phase = if x[0].norm() > T::zero() {
            x[0] / x[0].norm()
        } else {
            Complex::new(T::one(), T::zero())
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        v.iter_mut().for_each(|z| *z /= vnorm);

        // trailing block B ← H·B·H via p = Bv, K = v*p, w = p − Kv, B −= 2vw* + 2wv*
        let mut p = vec![zero; m];
        for (j, &vj) in v.iter().enumerate() {
            let col = &a[idx(k + 1, k + 1 + j)..idx(k + 1, k + 1 + j) + m];
            for (pi, &bij) in p.iter_mut().zip(col) {
                *pi += bij * vj;
            }
        }
        let kk: Amp<T> = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let w: Vec<Amp<T>> = p.iter().zip(&v).map(|(&pi, &vi)| pi - vi * kk).collect();
        for j in 0..m {
            let (vj, wj) = (v[j].conj() * two, w[j].conj() * two);
            let base = idx(k + 1, k + 1 + j);
            for i in 0..m {
                a[base + i] -= v[i] * wj + w[i] * vj;
            }
        }
        off[k] = alpha;
        a[idx(k + 1, k)] = alpha;
        a[idx(k, k + 1)] = alpha.conj();
        for r in k + 2..dim {
            a[idx(r, k)] = zero;
            a[idx(k, r)] = zero;
        }
        reflectors.push(v);
    }
    let diag = (0..dim).map(|i| a[idx(i, i)].re).collect();
    (diag, off, reflectors)
}

fn apply_reflector<T: Real>(v: &[Amp<T>], x: &mut [Amp<T>]) {
    let dot: Amp<T> = v.iter().zip(x.iter()).map(|(vi, xi)| vi.conj() * xi).sum();
    if dot.norm() == T::zero() {
        return;
    }
    let two = lit::<T>(2.0);
    for (xi, &vi) in x.iter_mut().zip(v) {
        *xi -= vi * dot * two;
    }
}

/// Largest eigenpair of the real symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e`. The vector has unit Euclidean norm.
pub(crate) fn tridiagonal_max_eigenpair<T: Real>(d: &[T], e: &[T]) -> (T, Vec<T>) {
    let n = d.len();
    assert!(n > 0 && e.len() + 1 == n);
    if n == 1 {
        return (d[0], vec![T::one()]);
    }
    let value = max_eigenvalue_bisection(d, e);
    let scale = d
        .iter()
        .chain(e)
        .fold(T::zero(), |m, x| m.max(x.abs()))
        .max(T::min_positive_value());
    let mut x = vec![T::one(); n];
    // λ is accurate to rounding, so two inverse-iteration solves converge
    for _ in 0..3 {
        tridiagonal_shifted_solve(d, e, value, scale, &mut x);
        let norm = x.iter().map(|v| *v * *v).sum::<T>().sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            x = vec![T::one(); n];
            continue;
        }
        x.iter_mut().for_each(|v| *v /= norm);
    }
    (value, x)
}

/// Number of eigenvalues strictly below `x` (Sturm count via the LDLᵀ pivots).
fn count_below<T: Real>(d: &[T], e: &[T], x: T) -> usize {
    let tiny = T::min_positive_value();
    let mut count = 0;
    let mut q = d[0] - x;
    for i in 0..d.len() {
        if i > 0 {
            q = d[i] - x - e[i - 1] * e[i - 1] / q;
        }
        if q == T::zero() {
            q = -tiny;
        }
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

fn max_eigenvalue_bisection<T: Real>(d: &[T], e: &[T]) -> T {
    let n = d.len();
    let radius = |i: usize| {
        let left = if i > 0 { e[i - 1].abs() } else { T::zero() };
        let right = if i + 1 < n { e[i].abs() } else { T::zero() };
        left + right
    };
    let mut lo = (0..n).map(|i| d[i] - radius(i)).fold(T::infinity(), T::min);
    let mut hi = (0..n)
        .map(|i| d[i] + radius(i))
        .fold(T::neg_infinity(), T::max);
    let width = (hi - lo).max(hi.abs()).max(T::one());
    lo -= width * T::epsilon();
    hi += width * T::epsilon();
    for _ in 0..200 {
        let mid = (lo + hi) / lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(d, e, mid) < n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / lit(2.0)
}

/// Solves `(S − λI)y = x` in place with partially pivoted LU; zero pivots are nudged to
/// `ε·scale`.
fn tridiagonal_shifted_solve<T: Real>(d: &[T], e: &[T], lambda: T, scale: T, x: &mut [T]) {
    let n = d.len();
    let tiny = T::epsilon() * scale;
    let mut diag: Vec<T> = d.iter().map(|&v| v - lambda).collect();
    let mut lower = e.to_vec();
    let mut upper = e.to_vec();
    let mut upper2 = vec![T::zero(); n.saturating_sub(2)];
    let mut swapped = vec![false; n - 1];
    for i in 0..n - 1 {
        if diag[i].abs() >= lower[i].abs() {
            if diag[i] == T::zero() {
                diag[i] = tiny;
            }
            let fact = lower[i] / diag[i];
            lower[i] = fact;
            diag[i + 1] -= fact * upper[i];
        } else {
            let fact = diag[i] / lower[i];
            diag[i] = lower[i];
            lower[i] = fact;
            let temp = upper[i];
            upper[i] = diag[i + 1];
            diag[i + 1] = temp - fact * diag[i + 1];
            if i + 2 < n {
                upper2[i] = upper[i + 1];
                upper[i + 1] = -fact * upper[i + 1];
            }
            swapped[i] = true;
        }
    }
    if diag[n - 1] == T::zero() {
        diag[n - 1] = tiny;
    }
    for i in 0..n - 1 {
        if swapped[i] {
            let temp = x[i];
            x[i] = x[i + 1];
            x[i + 1] = temp - lower[i] * x[i];
        } else {
            x[i + 1] -= lower[i] * x[i];
        }
    }
    x[n - 1] /= diag[n - 1];
    x[n - 2] = (x[n - 2] - upper[n - 2] * x[n - 1]) / diag[n - 2];
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (x[i] - upper[i] * x[i + 1] - upper2[i] * x[i + 2]) / diag[i];
    }
}

fn dot<T: Real>(a: &[Amp<T>], b: &[Amp<T>]) -> Amp<T> {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm<T: Real>(a: &[Amp<T>]) -> T {
    a.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt()
}

/// Matrix-free path: explicitly restarted Lanczos that restarts from the current top Ritz
/// vector. The start vector is a fixed pseudo-random state.
pub fn lanczos_max_eigenpair<T: Real>(
    h: &RelaxedHamiltonian<T>,
    tol: T,
    config: &LanczosConfig,
) -> Result<(Statevector<T>, T)> {
    let n = h.num_qubits();
    if n > EIGEN_MAX_QUBITS {
        return Err(Error::SizeLimit(format!(
            "{n} qubits exceeds eigensolver limit"
        )));
    }
    let dim = 1usize << n;
    let m = config
        .krylov_dim
        .min(dim)
        .min((config.max_basis_amplitudes / dim).max(2))
        .max(1);
    let zero = Complex::new(T::zero(), T::zero());
    let mut start = Statevector::<T>::random(n, 0x5eed_1a2c).into_amplitudes();
    let mut best_residual = T::infinity();
    let mut hv = vec![zero; dim];
    for _restart in 0..=config.max_restarts {
        let mut basis: Vec<Vec<Amp<T>>> = vec![start.clone()];
        let mut alpha: Vec<T> = Vec::with_capacity(m);
        let mut beta: Vec<T> = Vec::with_capacity(m);
        for j in 0..m {
            h.apply(&basis[j], &mut hv);
            let a = dot(&basis[j], &hv).re;
            alpha.push(a);
            let mut w = hv.clone();
            // two passes of classical Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &w);
                    w.iter_mut().zip(b).for_each(|(wi, &bi)| *wi -= bi * c);
                }
            }
            let bnorm = norm(&w);
            if j + 1 == m || bnorm <= T::epsilon() * (a.abs() + T::one()) {
                break;
            }
            beta.push(bnorm);
            w.iter_mut().for_each(|wi| *wi /= bnorm);
            basis.push(w);
        }
        let k = alpha.len();
        let (theta, y) = tridiagonal_max_eigenpair(&alpha, &beta[..k - 1]);
        let mut ritz = vec![zero; dim];
        for (b, &yi) in basis.iter().zip(&y) {
            ritz.iter_mut().zip(b).for_each(|(r, &bi)| *r += bi * yi);
        }
        let rn = norm(&ritz);
        ritz.iter_mut().for_each(|r| *r /= rn);
        let psi = Statevector::from_amplitudes_unchecked(ritz);
        let residual = residual_norm(h, &psi, theta);
        if residual <= tol * theta.abs().max(T::one()) {
            return Ok((psi, theta));
        }
        best_residual = best_residual.min(residual);
        start = psi.into_amplitudes();
    }
    Err(Error::Convergence {
        residual: to_f64(best_residual),
        message: format!("Lanczos hit {} restarts", config.max_restarts),
    })
}
