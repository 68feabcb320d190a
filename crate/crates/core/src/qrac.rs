//! Quantum random access code embeddings of MaxCut.
//!
//! Every vertex gets a weight-1 Pauli on its color's block of qubits; every edge becomes the
//! weight-2 product of its endpoints' Paulis. With deformation `d` (variables per qubit) the
//! relaxed Hamiltonian is `Σ_e (w_e/2)(I − d·O_e)` and the embedding puts each qubit in the pure
//! state whose Bloch vector is `(1/√d)·Σ m_v·axis_v` over that qubit's variables. The two commute
//! with the cut function: `tr(H·F(m)) = cut(m)`.

use std::fmt::{self, Write as _};
use std::ops::Range;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::graph::{Assignment, Coloring, Graph};
use crate::pauli::{self, single_axis_pauli, Axis, PauliString};
use crate::scalar::{lit, to_f64, Amp, Real};
use crate::sim::Statevector;

/// Number of binary variables packed into each qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Deformation {
    /// One variable per qubit on the Z axis (diagonal Hamiltonian).
    One = 1,
    /// Two variables per qubit on X and Z.
    Two = 2,
    /// Three variables per qubit on X, Y and Z.
    Three = 3,
}

impl Deformation {
    pub fn value(self) -> usize {
        self as usize
    }

    /// Axis cycle used when filling a qubit.
    pub fn axes(self) -> &'static [Axis] {
        match self {
            Deformation::One => &[Axis::Z],
            Deformation::Two => &[Axis::X, Axis::Z],
            Deformation::Three => &[Axis::X, Axis::Y, Axis::Z],
        }
    }

    /// Position of `axis` in [`Self::axes`].
    pub fn slot_index(self, axis: Axis) -> Option<usize> {
        self.axes().iter().position(|&a| a == axis)
    }
}

impl TryFrom<usize> for Deformation {
    type Error = Error;

    fn try_from(d: usize) -> Result<Self> {
        match d {
            1 => Ok(Deformation::One),
            2 => Ok(Deformation::Two),
            3 => Ok(Deformation::Three),
            other => Err(invalid(format!(
                "deformation must be 1, 2 or 3, got {other}"
            ))),
        }
    }
}

impl fmt::Display for Deformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slot {
    pub qubit: usize,
    pub axis: Axis,
}

/// Vertex → (qubit, axis) placement for one deformation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPauliMap {
    deformation: Deformation,
    num_qubits: usize,
    slot_of: Vec<Slot>,
    qubit_vertices: Vec<Vec<usize>>,
    blocks: Vec<Range<usize>>,
}

impl VertexPauliMap {
    pub fn deformation(&self) -> Deformation {
        self.deformation
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_vertices(&self) -> usize {
        self.slot_of.len()
    }

    pub fn slot(&self, v: usize) -> Slot {
        self.slot_of[v]
    }

    /// Vertices on `qubit`, in slot order.
    pub fn qubit_vertices(&self, qubit: usize) -> &[usize] {
        &self.qubit_vertices[qubit]
    }

    /// Qubit range owned by each color.
    pub fn color_blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn vertex_pauli(&self, v: usize) -> PauliString {
        let s = self.slot_of[v];
        single_axis_pauli(self.num_qubits, s.qubit, s.axis).expect("slot qubit within register")
    }
}

/// Places vertices color by color (ascending), each color's vertices in ascending index. The
/// vertex at in-color position `i` lands on qubit `⌊i/d⌋` of the color's block with the
/// `(i mod d)`-th axis of the deformation's cycle.
pub fn assign_paulis<T: Real>(
    g: &Graph<T>,
    coloring: &Coloring,
    d: Deformation,
) -> Result<VertexPauliMap> {
    if !coloring.is_proper(g) {
        return Err(invalid("coloring is not proper for this graph"));
    }
    let k = d.value();
    let axes = d.axes();
    let mut slot_of = vec![
        Slot {
            qubit: 0,
            axis: Axis::Z
        };
        g.num_vertices()
    ];
    let mut qubit_vertices = Vec::new();
    let mut blocks = Vec::new();
    for class in coloring.classes() {
        let start = qubit_vertices.len();
        let width = class.len().div_ceil(k);
        qubit_vertices.extend(std::iter::repeat_with(Vec::new).take(width));
        for (i, &v) in class.iter().enumerate() {
            let qubit = start + i / k;
            slot_of[v] = Slot {
                qubit,
                axis: axes[i % k],
            };
            qubit_vertices[qubit].push(v);
        }
        blocks.push(start..start + width);
    }
    let num_qubits = qubit_vertices.len();
    if num_qubits > pauli::MAX_QUBITS {
        return Err(Error::SizeLimit(format!(
            "{num_qubits} qubits exceeds Pauli string width"
        )));
    }
    Ok(VertexPauliMap {
        deformation: d,
        num_qubits,
        slot_of,
        qubit_vertices,
        blocks,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term<T> {
    pub coeff: T,
    pub pauli: PauliString,
}

/// `constant·I + Σ coeff·P` with every `P` of weight two.
#[derive(Clone, Debug, PartialEq)]
pub struct RelaxedHamiltonian<T> {
    num_qubits: usize,
    constant: T,
    terms: Vec<Term<T>>,
}

impl<T: Real> RelaxedHamiltonian<T> {
    pub fn new(num_qubits: usize, constant: T, terms: Vec<Term<T>>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.pauli.num_qubits() != num_qubits) {
            return Err(invalid(format!(
                "term {} acts on {} qubits, Hamiltonian on {num_qubits}",
                t.pauli,
                t.pauli.num_qubits()
            )));
        }
        Ok(Self {
            num_qubits,
            constant,
            terms,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn constant(&self) -> T {
        self.constant
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    /// `|constant| + Σ|coeff|`, an upper bound on the spectral radius.
    pub fn norm_bound(&self) -> T {
        self.constant.abs() + self.terms.iter().map(|t| t.coeff.abs()).sum::<T>()
    }

    /// `out = H·input`.
    pub fn apply(&self, input: &[Amp<T>], out: &mut [Amp<T>]) {
        for (o, &i) in out.iter_mut().zip(input) {
            *o = i * self.constant;
        }
        for t in &self.terms {
            pauli::apply_accumulate(&t.pauli, t.coeff, input, out);
        }
    }

    /// Text form: `constant <c>`, `qubits <n>`, then one `coeff pauli` line per term, all
    /// reals printed with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "constant {:.16e}\nqubits {}\n",
            to_f64(self.constant),
            self.num_qubits
        );
        for t in &self.terms {
            let _ = writeln!(out, "{:.16e} {}", to_f64(t.coeff), t.pauli);
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut constant = None;
        let mut qubits = None;
        let mut terms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let (head, rest) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| parse_err(format!("malformed line `{line}`")))?;
            let rest = rest.trim();
            match head {
                "constant" => {
                    let c = f64::from_str(rest).map_err(|e| parse_err(e.to_string()))?;
                    constant = Some(lit::<T>(c));
                }
                "qubits" => {
                    qubits = Some(usize::from_str(rest).map_err(|e| parse_err(e.to_string()))?);
                }
                coeff => {
                    let c = f64::from_str(coeff).map_err(|e| parse_err(e.to_string()))?;
                    let p = PauliString::from_str(rest).map_err(|e| parse_err(e.to_string()))?;
                    terms.push(Term {
                        coeff: lit::<T>(c),
                        pauli: p,
                    });
                }
            }
        }
        let constant = constant.ok_or(Error::Parse {
            line: 1,
            message: "missing `constant` header".into(),
        })?;
        let n = qubits
            .or_else(|| terms.first().map(|t| t.pauli.num_qubits()))
            .unwrap_or(0);
        Self::new(n, constant, terms)
    }
}

/// `Σ_e (w_e/2)(I − d·O_e)`, with the identity part collected into the constant.
pub fn build_hamiltonian<T: Real>(
    g: &Graph<T>,
    map: &VertexPauliMap,
) -> Result<RelaxedHamiltonian<T>> {
    if map.num_vertices() != g.num_vertices() {
        return Err(invalid("vertex map does not match graph"));
    }
    let d = lit::<T>(map.deformation().value() as f64);
    let half = lit::<T>(0.5);
    let mut terms = Vec::with_capacity(g.num_edges());
    for e in g.edges() {
        let (a, b) = (map.slot(e.u), map.slot(e.v));
        if a.qubit == b.qubit {
            return Err(Error::Internal(format!(
                "edge ({}, {}) endpoints share qubit {}",
                e.u, e.v, a.qubit
            )));
        }
        let (pauli, phase) = pauli::multiply(&map.vertex_pauli(e.u), &map.vertex_pauli(e.v))?;
        debug_assert_eq!(phase, pauli::Phase::One);
        terms.push(Term {
            coeff: -(d * e.weight) * half,
            pauli,
        });
    }
    RelaxedHamiltonian::new(map.num_qubits(), g.total_weight() * half, terms)
}

/// Product state `F(m)` together with the per-qubit Bloch vectors it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodedState<T: Real> {
    pub state: Statevector<T>,
    pub blochs: Vec<[T; 3]>,
}

/// Builds `F(m)`. Unused slots on a qubit act as variables fixed to +1.
pub fn embed_assignment<T: Real>(map: &VertexPauliMap, m: &Assignment) -> Result<EncodedState<T>> {
    if m.len() != map.num_vertices() {
        return Err(invalid(format!(
            "assignment has {} entries, map has {} vertices",
            m.len(),
            map.num_vertices()
        )));
    }
    let d = map.deformation();
    let scale = T::one() / lit::<T>(d.value() as f64).sqrt();
    let blochs: Vec<[T; 3]> = (0..map.num_qubits())
        .map(|q| {
            let mut values = vec![1i8; d.value()];
            for &v in map.qubit_vertices(q) {
                let slot = d
                    .slot_index(map.slot(v).axis)
                    .expect("axis belongs to deformation");
                values[slot] = m.get(v);
            }
            let mut bloch = [T::zero(); 3];
            for (&axis, &val) in d.axes().iter().zip(&values) {
                bloch[axis.index()] = scale * lit(val as f64);
            }
            bloch
        })
        .collect();
    let state = Statevector::from_bloch(&blochs)?;
    Ok(EncodedState { state, blochs })
}

/// `tr(H·|ψ⟩⟨ψ|)`.
pub fn relaxed_energy<T: Real>(h: &RelaxedHamiltonian<T>, psi: &Statevector<T>) -> Result<T> {
    if h.num_qubits() != psi.num_qubits() {
        return Err(invalid(format!(
            "Hamiltonian on {} qubits vs state on {}",
            h.num_qubits(),
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
    Ok(energy_unchecked(h, psi.amplitudes()))
}

pub(crate) fn energy_unchecked<T: Real>(h: &RelaxedHamiltonian<T>, amps: &[Amp<T>]) -> T {
    h.constant()
        + h.terms()
            .iter()
            .map(|t| t.coeff * pauli::expectation_unchecked(&t.pauli, amps))
            .sum::<T>()
}
