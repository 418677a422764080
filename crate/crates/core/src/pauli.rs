//! Pauli strings over the 2n physical qubits, the generator families built
//! from them, and expectation values over product states.
//!
//! Qubit 1 is the most significant tensor factor. Line `k` owns the
//! auxiliary qubit `2k − 1` and the primary qubit `2k`.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{tensor_product_all, ComplexMatrix, ComplexVector, I, ONE, TOL_EXACT, ZERO};

/// Largest qubit count for which dense matrices are produced.
pub const MAX_DENSE_QUBITS: usize = 10;

/// Single-qubit Pauli label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// `σ_j` for `j` in 0..=3 (0 is the identity).
    pub fn from_index(j: usize) -> Pauli {
        match j {
            0 => Pauli::I,
            1 => Pauli::X,
            2 => Pauli::Y,
            3 => Pauli::Z,
            _ => panic!("Pauli index {j} out of range"),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Single-qubit product `self · rhs = i^phase · label`.
    pub fn mul(self, rhs: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, rhs) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    pub fn matrix(self) -> ComplexMatrix {
        match self {
            Pauli::I => ComplexMatrix::identity(2),
            Pauli::X => ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]),
            Pauli::Y => ComplexMatrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]),
            Pauli::Z => ComplexMatrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, -ONE]]),
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// `σ_j` as a 2x2 matrix, `j` in 0..=3.
pub fn sigma(j: usize) -> ComplexMatrix {
    Pauli::from_index(j).matrix()
}

/// `i^phase` times a tensor product of single-qubit Paulis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    phase: u8,
    labels: Vec<Pauli>,
}

impl PauliString {
    pub fn new(phase: u8, labels: Vec<Pauli>) -> Self {
        Self {
            phase: phase % 4,
            labels,
        }
    }

    pub fn identity(qubits: usize) -> Self {
        Self::new(0, vec![Pauli::I; qubits])
    }

    /// Parses labels from a string such as `"ZIYX"`.
    pub fn from_str_labels(phase: u8, labels: &str) -> Self {
        let labels = labels
            .chars()
            .map(|ch| match ch {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => panic!("bad Pauli label {ch:?}"),
            })
            .collect();
        Self::new(phase, labels)
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn phase_factor(&self) -> Complex64 {
        i_pow(self.phase)
    }

    pub fn labels(&self) -> &[Pauli] {
        &self.labels
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    /// Label on 1-based qubit `q`.
    pub fn label(&self, q: usize) -> Pauli {
        self.labels[q - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.labels.iter().all(|&p| p == Pauli::I)
    }

    /// Identity labels with arbitrary phase.
    pub fn is_scalar(&self) -> bool {
        self.labels.iter().all(|&p| p == Pauli::I)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    /// Multiplies the phase by `i^k`.
    pub fn times_i_pow(&self, k: u8) -> Self {
        Self::new(self.phase + k, self.labels.clone())
    }

    pub fn neg(&self) -> Self {
        self.times_i_pow(2)
    }

    /// Whether `self` and `other` commute (otherwise they anticommute).
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        assert_eq!(self.num_qubits(), other.num_qubits());
        let clashes = self
            .labels
            .iter()
            .zip(&other.labels)
            .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
            .count();
        clashes % 2 == 0
    }

    /// Dense `2^q x 2^q` matrix (q <= 10).
    pub fn to_dense(&self) -> Result<ComplexMatrix> {
        if self.num_qubits() > MAX_DENSE_QUBITS {
            return Err(Error::TooLarge {
                what: "dense Pauli string qubits",
                size: self.num_qubits(),
                max: MAX_DENSE_QUBITS,
            });
        }
        let factors: Vec<ComplexMatrix> = self.labels.iter().map(|p| p.matrix()).collect();
        Ok(tensor_product_all(&factors).scale(self.phase_factor()))
    }

    /// Image of computational basis state `|b⟩` (qubit 1 is the most
    /// significant bit): `P|b⟩ = amplitude · |b'⟩`.
    pub fn act_on_basis(&self, b: usize) -> (Complex64, usize) {
        let q = self.num_qubits();
        let mut phase = self.phase;
        let mut out = b;
        for (pos, &label) in self.labels.iter().enumerate() {
            let bit_index = q - 1 - pos;
            let bit = (b >> bit_index) & 1;
            match label {
                Pauli::I => {}
                Pauli::X => out ^= 1 << bit_index,
                Pauli::Y => {
                    out ^= 1 << bit_index;
                    // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
                    phase += if bit == 0 { 1 } else { 3 };
                }
                Pauli::Z => {
                    if bit == 1 {
                        phase += 2;
                    }
                }
            }
        }
        (i_pow(phase), out)
    }

    /// Adds `coeff · P` into a dense matrix without forming `P`.
    pub fn accumulate_into(&self, coeff: Complex64, m: &mut ComplexMatrix) {
        let dim = 1usize << self.num_qubits();
        assert_eq!((m.rows(), m.cols()), (dim, dim));
        for col in 0..dim {
            let (amp, row) = self.act_on_basis(col);
            m[(row, col)] += coeff * amp;
        }
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}")?;
        for p in &self.labels {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

fn i_pow(p: u8) -> Complex64 {
    match p % 4 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

/// Exact product of two Pauli strings.
pub fn pauli_mul(p: &PauliString, q: &PauliString) -> Result<PauliString> {
    if p.num_qubits() != q.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: p.num_qubits(),
            actual: q.num_qubits(),
        });
    }
    let mut phase = p.phase + q.phase;
    let labels = p
        .labels
        .iter()
        .zip(&q.labels)
        .map(|(&a, &b)| {
            let (ph, label) = a.mul(b);
            phase += ph;
            label
        })
        .collect();
    Ok(PauliString::new(phase, labels))
}

/// Panics if the strings have different lengths; see [`pauli_mul`].
impl Mul for &PauliString {
    type Output = PauliString;

    fn mul(self, rhs: &PauliString) -> PauliString {
        pauli_mul(self, rhs).expect("Pauli strings of different length")
    }
}

fn check_line(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange {
            what: "line",
            index: k,
            max: n,
        });
    }
    Ok(())
}

/// `σ₃` on every auxiliary qubit of lines `1..k`.
fn auxiliary_prefix(k: usize, n: usize) -> Vec<Pauli> {
    let mut labels = vec![Pauli::I; 2 * n];
    for l in 1..k {
        labels[2 * l - 2] = Pauli::Z;
    }
    labels
}

/// Clifford generator `e_j^{[k]}` (j = 1..3) of line `k` among `n` lines:
/// `(∏_{l<k} σ_{3;2l−1}) σ_{2;2k−1} σ_{j;2k}`.
pub fn generator(j: usize, k: usize, n: usize) -> Result<PauliString> {
    if !(1..=3).contains(&j) {
        return Err(Error::IndexOutOfRange {
            what: "generator component",
            index: j,
            max: 3,
        });
    }
    check_line(k, n)?;
    let mut labels = auxiliary_prefix(k, n);
    labels[2 * k - 2] = Pauli::Y;
    labels[2 * k - 1] = Pauli::from_index(j);
    Ok(PauliString::new(0, labels))
}

/// Generator with flat 1-based index `a = 3(k−1) + j`.
pub fn generator_flat(a: usize, n: usize) -> Result<PauliString> {
    if a == 0 || a > 3 * n {
        return Err(Error::IndexOutOfRange {
            what: "generator",
            index: a,
            max: 3 * n,
        });
    }
    generator((a - 1) % 3 + 1, (a - 1) / 3 + 1, n)
}

/// All `3n` generators in flat order.
pub fn generators(n: usize) -> Vec<PauliString> {
    (1..=3 * n)
        .map(|a| generator_flat(a, n).expect("index in range"))
        .collect()
}

/// `e₀^{[k]} = −i (∏_{l<k} σ_{3;2l−1}) σ_{1;2k−1}`, squaring to −1.
pub fn generator_zero(k: usize, n: usize) -> Result<PauliString> {
    check_line(k, n)?;
    let mut labels = auxiliary_prefix(k, n);
    labels[2 * k - 2] = Pauli::X;
    Ok(PauliString::new(3, labels))
}

/// `ι^{[k]} = e₁^{[k]} e₂^{[k]} e₃^{[k]} = i (∏_{l<k} σ_{3;2l−1}) σ_{2;2k−1}`.
pub fn iota(k: usize, n: usize) -> Result<PauliString> {
    check_line(k, n)?;
    let mut labels = auxiliary_prefix(k, n);
    labels[2 * k - 2] = Pauli::Y;
    Ok(PauliString::new(1, labels))
}

/// Jordan–Wigner generator `e_m` (m = 1..2q) on `q` qubits:
/// `i σ₃ ⊗ … ⊗ σ₃ ⊗ σ₁ ⊗ 1 …` for odd `m`, `σ₂` in place of `σ₁` for even `m`.
pub fn jw_generator(m: usize, qubits: usize) -> Result<PauliString> {
    if m == 0 || m > 2 * qubits {
        return Err(Error::IndexOutOfRange {
            what: "Jordan-Wigner generator",
            index: m,
            max: 2 * qubits,
        });
    }
    let k = m.div_ceil(2);
    let mut labels = vec![Pauli::I; qubits];
    for label in labels.iter_mut().take(k - 1) {
        *label = Pauli::Z;
    }
    labels[k - 1] = if m % 2 == 1 { Pauli::X } else { Pauli::Y };
    Ok(PauliString::new(1, labels))
}

/// Normalized single-qubit state `a|0⟩ + b|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    amplitudes: [Complex64; 2],
    bloch: [f64; 3],
}

impl QubitState {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if (norm - 1.0).abs() >= TOL_EXACT {
            return Err(Error::NotNormalized { norm });
        }
        let ab = a.conj() * b;
        Ok(Self {
            amplitudes: [a, b],
            bloch: [2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr()],
        })
    }

    pub fn zero() -> Self {
        Self::new(ONE, ZERO).unwrap()
    }

    pub fn one() -> Self {
        Self::new(ZERO, ONE).unwrap()
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        self.amplitudes
    }

    /// `(⟨σ₁⟩, ⟨σ₂⟩, ⟨σ₃⟩)`.
    pub fn bloch(&self) -> [f64; 3] {
        self.bloch
    }

    /// `⟨ψ|label|ψ⟩`, always real.
    pub fn expectation(&self, label: Pauli) -> f64 {
        match label {
            Pauli::I => 1.0,
            Pauli::X => self.bloch[0],
            Pauli::Y => self.bloch[1],
            Pauli::Z => self.bloch[2],
        }
    }

    /// `|0⟩` or `|1⟩` up to a phase.
    pub fn is_computational(&self) -> bool {
        self.bloch[0].abs() < TOL_EXACT && self.bloch[1].abs() < TOL_EXACT
    }

    pub fn to_vector(&self) -> ComplexVector {
        ComplexVector::from_vec(self.amplitudes.to_vec())
    }
}

/// Product state `|ψ₁⟩ ⊗ … ⊗ |ψ_{2n}⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    qubits: Vec<QubitState>,
}

impl ProductState {
    pub fn new(qubits: Vec<QubitState>) -> Self {
        Self { qubits }
    }

    /// `|0…0⟩` on `q` qubits.
    pub fn zeros(q: usize) -> Self {
        Self::new(vec![QubitState::zero(); q])
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubits(&self) -> &[QubitState] {
        &self.qubits
    }

    /// State of 1-based qubit `q`.
    pub fn qubit(&self, q: usize) -> &QubitState {
        &self.qubits[q - 1]
    }

    pub fn set_qubit(&mut self, q: usize, state: QubitState) -> Result<()> {
        if q == 0 || q > self.qubits.len() {
            return Err(Error::IndexOutOfRange {
                what: "qubit",
                index: q,
                max: self.qubits.len(),
            });
        }
        self.qubits[q - 1] = state;
        Ok(())
    }

    /// Whether every auxiliary (odd) qubit is `|0⟩` or `|1⟩`.
    pub fn auxiliaries_computational(&self) -> bool {
        self.qubits.iter().step_by(2).all(QubitState::is_computational)
    }

    pub fn to_vector(&self) -> ComplexVector {
        self.qubits
            .iter()
            .fold(ComplexVector::from_vec(vec![ONE]), |acc, q| {
                acc.kron(&q.to_vector())
            })
    }
}

/// `⟨Ψ|P|Ψ⟩` for a product state, one factor per qubit.
pub fn expectation(p: &PauliString, state: &ProductState) -> Result<Complex64> {
    if p.num_qubits() != state.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: state.num_qubits(),
            actual: p.num_qubits(),
        });
    }
    let mut value = 1.0;
    for (&label, q) in p.labels.iter().zip(&state.qubits) {
        value *= q.expectation(label);
        if value == 0.0 {
            break;
        }
    }
    Ok(p.phase_factor() * value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(phase: u8, labels: &str) -> PauliString {
        PauliString::from_str_labels(phase, labels)
    }

    #[test]
    fn x_times_y() {
        assert_eq!(&ps(0, "X") * &ps(0, "Y"), ps(1, "Z"));
    }

    #[test]
    fn involution() {
        let p = ps(1, "XYZIY");
        let sq = &p * &p;
        // (iP)² = −1 for Hermitian P
        assert_eq!(sq, ps(2, "IIIII"));
        let h = ps(0, "XYZIY");
        assert!((&h * &h).is_identity());
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            pauli_mul(&ps(0, "X"), &ps(0, "XX")),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn e1_e2_on_one_line() {
        let e1 = generator(1, 1, 1).unwrap();
        let e2 = generator(2, 1, 1).unwrap();
        assert_eq!(&e1 * &e2, ps(1, "IZ"));
    }

    #[test]
    fn generator_examples() {
        assert_eq!(generator(1, 1, 1).unwrap(), ps(0, "YX"));
        assert_eq!(generator(3, 2, 2).unwrap(), ps(0, "ZIYZ"));
        for n in 1..=3 {
            for k in 1..=n {
                for j in 1..=3 {
                    let e = generator(j, k, n).unwrap();
                    assert!(e.is_hermitian());
                    assert!((&e * &e).is_identity());
                }
            }
        }
    }

    #[test]
    fn generator_out_of_range() {
        assert!(generator(0, 1, 1).is_err());
        assert!(generator(4, 1, 1).is_err());
        assert!(generator(1, 3, 2).is_err());
        assert!(generator_zero(0, 2).is_err());
        assert!(iota(3, 2).is_err());
        assert!(jw_generator(5, 2).is_err());
    }

    #[test]
    fn generator_zero_examples() {
        let e0 = generator_zero(1, 1).unwrap();
        assert_eq!(e0, ps(3, "XI"));
        assert_eq!(&e0 * &e0, ps(2, "II"));
        assert_eq!(generator_zero(2, 2).unwrap(), ps(3, "ZIXI"));
    }

    #[test]
    fn iota_examples() {
        assert_eq!(iota(1, 1).unwrap(), ps(1, "YI"));
        assert_eq!(iota(2, 2).unwrap(), ps(1, "ZIYI"));
        for n in 1..=3 {
            for k in 1..=n {
                let prod = &(&generator(1, k, n).unwrap() * &generator(2, k, n).unwrap())
                    * &generator(3, k, n).unwrap();
                assert_eq!(prod, iota(k, n).unwrap());
            }
        }
        let i1 = iota(1, 2).unwrap();
        let i2 = iota(2, 2).unwrap();
        assert_eq!(&i1 * &i2, (&i2 * &i1).neg());
    }

    #[test]
    fn jw_examples() {
        assert_eq!(jw_generator(1, 2).unwrap(), ps(1, "XI"));
        assert_eq!(jw_generator(4, 2).unwrap(), ps(1, "ZY"));
        for q in 1..=3 {
            for k in 1..=q {
                let a = jw_generator(2 * k - 1, q).unwrap();
                let b = jw_generator(2 * k, q).unwrap();
                let z = (&a * &b).times_i_pow(1);
                let mut labels = vec![Pauli::I; q];
                labels[k - 1] = Pauli::Z;
                assert_eq!(z, PauliString::new(0, labels));
            }
            for m in 1..=2 * q {
                let a = jw_generator(m, q).unwrap();
                assert_eq!(&a * &a, PauliString::identity(q).neg());
                for m2 in m + 1..=2 * q {
                    assert!(!a.commutes_with(&jw_generator(m2, q).unwrap()));
                }
            }
        }
    }

    #[test]
    fn expectation_examples() {
        let zero = ProductState::zeros(4);
        assert_eq!(expectation(&PauliString::identity(4), &zero).unwrap(), ONE);
        assert_eq!(
            expectation(&ps(0, "X"), &ProductState::zeros(1)).unwrap(),
            ZERO
        );
        for k in 1..=2 {
            let e1 = generator(1, k, 2).unwrap();
            let e2 = generator(2, k, 2).unwrap();
            let p12 = (&e1 * &e2).times_i_pow(1);
            let p21 = (&e2 * &e1).times_i_pow(1);
            assert_eq!(expectation(&p12, &zero).unwrap(), -ONE);
            assert_eq!(expectation(&p21, &zero).unwrap(), ONE);
        }
    }

    #[test]
    fn act_on_basis_matches_dense() {
        let p = ps(3, "XYZI");
        let dense = p.to_dense().unwrap();
        let mut acc = ComplexMatrix::zeros(16, 16);
        p.accumulate_into(ONE, &mut acc);
        assert_eq!(dense, acc);
    }

    #[test]
    fn qubit_state_validation() {
        assert!(QubitState::new(ONE, ONE).is_err());
        let plus = QubitState::new(ONE / 2f64.sqrt(), ONE / 2f64.sqrt()).unwrap();
        assert!(!plus.is_computational());
        assert!((plus.bloch()[0] - 1.0).abs() < TOL_EXACT);
        assert!(QubitState::one().is_computational());
    }
}
