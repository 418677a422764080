//! Dense reference simulation on the full `4^n`-dimensional state space and
//! Lie-closure dimension counts.
//!
//! Two-line gates are built only from trace coefficients and generator
//! Pauli strings; rotations are never consulted here.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    phase_normalize_su4, tensor_product_all, ComplexMatrix, ComplexVector, RealSpan, I, ONE,
    TOL_COMPOSE,
};
use crate::pauli::{generator, sigma, PauliString};
use crate::simulator::{Circuit, Gate, MeasurementReport, Method, QubitMeasurement};
use crate::spinmap::{BasisTag, GateBasis, Lines};

/// Largest line count handled densely (1024 amplitudes).
pub const MAX_ORACLE_LINES: usize = 5;

/// Largest qubit count for the su closure.
pub const MAX_SU_CLOSURE_QUBITS: usize = 3;

fn check_lines(n: usize) -> Result<()> {
    if n > MAX_ORACLE_LINES {
        return Err(Error::TooLarge {
            what: "dense simulation line count",
            size: n,
            max: MAX_ORACLE_LINES,
        });
    }
    Ok(())
}

/// Full statevector over `2n` qubits, qubit 1 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    qubits: usize,
    amplitudes: ComplexVector,
}

impl DenseState {
    pub fn new(amplitudes: ComplexVector) -> Result<Self> {
        let dim = amplitudes.dim();
        if !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two(),
                actual: dim,
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > TOL_COMPOSE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            qubits: dim.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits
    }

    pub fn apply(&mut self, m: &ComplexMatrix) {
        self.amplitudes = m.apply(&self.amplitudes);
    }

    /// `(p0, p1)` of qubit `q` (1-based).
    pub fn marginal(&self, q: usize) -> (f64, f64) {
        let shift = self.qubits - q;
        let mut p1 = 0.0;
        for (b, a) in self.amplitudes.entries().iter().enumerate() {
            if b >> shift & 1 == 1 {
                p1 += a.norm_sqr();
            }
        }
        let total = self.amplitudes.norm().powi(2);
        (total - p1, p1)
    }
}

fn dense_sum(terms: &[(Complex64, PauliString)], qubits: usize) -> ComplexMatrix {
    let dim = 1usize << qubits;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (c, p) in terms {
        p.accumulate_into(*c, &mut m);
    }
    m
}

/// Dense `4^n × 4^n` matrix of a gate.
///
/// A single-line gate is its 2×2 matrix on primary qubit `2l`. A two-line
/// gate on `(l, m)` is `Σ_J u_J` times the image of basis element `J`,
/// written as products of the six generator strings of lines `l` and `m`.
pub fn spin_gate_dense(g: &Gate, n: usize) -> Result<ComplexMatrix> {
    check_lines(n)?;
    g.lines().validate(n)?;
    let q = 2 * n;
    let m = match g.lines() {
        Lines::Single(l) => {
            let factors: Vec<ComplexMatrix> = (1..=q)
                .map(|p| if p == 2 * l { g.unitary().clone() } else { sigma(0) })
                .collect();
            tensor_product_all(&factors)
        }
        Lines::Pair(l, mm) => {
            let (u, _) = phase_normalize_su4(g.unitary())?;
            let mut gens = Vec::with_capacity(6);
            for line in [l, mm] {
                for j in 1..=3 {
                    gens.push(generator(j, line, n)?);
                }
            }
            let pseudo = gens
                .iter()
                .fold(PauliString::identity(q), |acc, e| &acc * e);
            let basis = GateBasis::get();
            let mut terms = Vec::with_capacity(32);
            for (el, u_j) in basis.elements().iter().zip(basis.coefficients(&u)) {
                match el.tag {
                    BasisTag::Identity => {
                        terms.push((Complex64::new(u_j.re, 0.0), PauliString::identity(q)));
                        terms.push((Complex64::new(-u_j.im, 0.0), pseudo.clone()));
                    }
                    BasisTag::Pair(a, b) => {
                        let pair = &gens[a - 1] * &gens[b - 1];
                        terms.push((Complex64::new(u_j.im, 0.0), pair.clone()));
                        terms.push((Complex64::new(u_j.re, 0.0), &pseudo * &pair));
                    }
                }
            }
            dense_sum(&terms, q)
        }
    };
    let deviation = m.unitarity_deviation();
    if deviation > TOL_COMPOSE {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(m)
}

/// Final statevector after applying every gate matrix in temporal order.
pub fn evolve(c: &Circuit) -> Result<DenseState> {
    check_lines(c.n())?;
    let mut state = DenseState::new(c.initial().to_vector())?;
    for g in c.gates() {
        state.apply(&spin_gate_dense(g, c.n())?);
    }
    Ok(state)
}

/// Single-qubit marginals of every qubit from dense simulation.
pub fn run_dense(c: &Circuit) -> Result<MeasurementReport> {
    let state = evolve(c)?;
    let mut report = MeasurementReport::default();
    for q in 1..=c.num_qubits() {
        let (p0, p1) = state.marginal(q);
        report.qubits.push(QubitMeasurement {
            qubit: q,
            p0: p0.clamp(0.0, 1.0),
            p1: p1.clamp(0.0, 1.0),
            method: Method::Oracle,
        });
    }
    Ok(report)
}

/// Dense `i e_j^{[l]} e_k^{[m]}` on `2n` qubits.
pub fn line_pair_hamiltonian(j: usize, l: usize, k: usize, m: usize, n: usize) -> Result<ComplexMatrix> {
    check_lines(n)?;
    let p = &generator(j, l, n)? * &generator(k, m, n)?;
    p.times_i_pow(1).to_dense()
}

fn real_coords(m: &ComplexMatrix) -> Vec<f64> {
    m.entries().iter().flat_map(|z| [z.re, z.im]).collect()
}

/// Dimension of the real Lie algebra generated by `i` times every one- and
/// two-qubit Pauli product on `qubits` qubits.
pub fn su_closure_dim(qubits: usize) -> Result<usize> {
    if qubits == 0 || qubits > MAX_SU_CLOSURE_QUBITS {
        return Err(Error::TooLarge {
            what: "su closure qubit count",
            size: qubits,
            max: MAX_SU_CLOSURE_QUBITS,
        });
    }
    let embed = |ops: &[(usize, usize)]| {
        let factors: Vec<ComplexMatrix> = (0..qubits)
            .map(|q| {
                ops.iter()
                    .find(|(p, _)| *p == q)
                    .map_or_else(|| sigma(0), |&(_, j)| sigma(j))
            })
            .collect();
        tensor_product_all(&factors).scale(I)
    };
    let mut gens = Vec::new();
    for q in 0..qubits {
        for j in 1..=3 {
            gens.push(embed(&[(q, j)]));
        }
        for p in q + 1..qubits {
            for j in 1..=3 {
                for k in 1..=3 {
                    gens.push(embed(&[(q, j), (p, k)]));
                }
            }
        }
    }
    let dim = 1usize << qubits;
    let mut span = RealSpan::new(2 * dim * dim, crate::clifford::CLOSURE_PIVOT);
    let mut queue = std::collections::VecDeque::new();
    for g in &gens {
        if span.insert(&real_coords(g)) {
            queue.push_back(g.clone());
        }
    }
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let c = g.commutator(&x);
            let scale = c.max_abs();
            if scale < TOL_COMPOSE {
                continue;
            }
            let c = c.scale(ONE / scale);
            if span.insert(&real_coords(&c)) {
                queue.push_back(c);
            }
        }
    }
    Ok(span.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{tensor_product, unitary_from_hamiltonian};
    use crate::pauli::{generator_zero, Pauli};
    use crate::simulator::{simulate, QubitSelection};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn x_gate() -> ComplexMatrix {
        sigma(1).scale(I)
    }

    fn entangler() -> ComplexMatrix {
        let h = ComplexMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.0, 0.2), c(0.1, -0.3), c(0.4, 0.0)],
            vec![c(0.0, -0.2), c(-0.3, 0.0), c(0.0, 0.6), c(0.2, 0.1)],
            vec![c(0.1, 0.3), c(0.0, -0.6), c(0.2, 0.0), c(-0.1, 0.0)],
            vec![c(0.4, 0.0), c(0.2, -0.1), c(-0.1, 0.0), c(-0.4, 0.0)],
        ]);
        unitary_from_hamiltonian(&h, 1.1).unwrap()
    }

    #[test]
    fn identity_gate_is_identity() {
        let g = Gate::two(1, 2, ComplexMatrix::identity(4)).unwrap();
        let m = spin_gate_dense(&g, 2).unwrap();
        assert!(m.max_abs_diff(&ComplexMatrix::identity(16)) < TOL_COMPOSE);
        let g = Gate::single(2, ComplexMatrix::identity(2)).unwrap();
        assert!(spin_gate_dense(&g, 2).unwrap().max_abs_diff(&ComplexMatrix::identity(16)) < TOL_COMPOSE);
    }

    #[test]
    fn gate_on_lines_one_three_has_z_on_middle_auxiliary() {
        let p = &generator(1, 1, 3).unwrap() * &generator(2, 3, 3).unwrap();
        assert_eq!(p.label(3), Pauli::Z);
        assert_eq!(p.label(4), Pauli::I);
        let g = Gate::two(1, 3, entangler()).unwrap();
        let m = spin_gate_dense(&g, 3).unwrap();
        assert!(m.unitarity_deviation() < TOL_COMPOSE);
    }

    #[test]
    fn empty_and_single_x() {
        let c0 = Circuit::new(2).unwrap();
        for m in run_dense(&c0).unwrap().qubits {
            assert!((m.p0 - 1.0).abs() < TOL_COMPOSE);
        }
        let mut c1 = Circuit::new(2).unwrap();
        c1.push(Gate::single(1, x_gate()).unwrap()).unwrap();
        for m in run_dense(&c1).unwrap().qubits {
            let want = if m.qubit == 2 { 0.0 } else { 1.0 };
            assert!((m.p0 - want).abs() < TOL_COMPOSE);
        }
    }

    #[test]
    fn calibration_circuit_matches_rotation_engine() {
        // X on line 1 followed by a controlled phase, then a generic gate
        let cz = ComplexMatrix::diagonal(&[ONE, ONE, ONE, -ONE]);
        let h = tensor_product(&sigma(0), &sigma(1)).scale(c(0.5, 0.0));
        let rx = unitary_from_hamiltonian(&h, 1.0).unwrap();
        let mut c = Circuit::new(2).unwrap();
        c.push(Gate::single(1, x_gate()).unwrap()).unwrap();
        c.push(Gate::two(1, 2, cz).unwrap()).unwrap();
        c.push(Gate::two(1, 2, rx).unwrap()).unwrap();
        c.push(Gate::two(1, 2, entangler()).unwrap()).unwrap();
        let dense = run_dense(&c).unwrap();
        let fast = simulate(&c, QubitSelection::All).unwrap();
        assert!(dense.max_discrepancy(&fast) < TOL_COMPOSE, "{dense:?}\n{fast:?}");
    }

    #[test]
    fn reversed_order_is_distinguishable() {
        let mut a = Circuit::new(2).unwrap();
        a.push(Gate::two(1, 2, entangler()).unwrap()).unwrap();
        a.push(Gate::single(1, unitary_from_hamiltonian(&sigma(2), 0.4).unwrap()).unwrap()).unwrap();
        let mut b = Circuit::new(2).unwrap();
        b.push(a.gates()[1].clone()).unwrap();
        b.push(a.gates()[0].clone()).unwrap();
        let ra = run_dense(&a).unwrap();
        let rb = run_dense(&b).unwrap();
        assert!(ra.max_discrepancy(&rb) > 1e-3);
        assert!(ra.max_discrepancy(&simulate(&a, QubitSelection::All).unwrap()) < TOL_COMPOSE);
        assert!(rb.max_discrepancy(&simulate(&b, QubitSelection::All).unwrap()) < TOL_COMPOSE);
    }

    #[test]
    fn too_many_lines() {
        let c = Circuit::new(6).unwrap();
        assert!(matches!(run_dense(&c), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn su_closure_small() {
        assert_eq!(su_closure_dim(1).unwrap(), 3);
        assert_eq!(su_closure_dim(2).unwrap(), 15);
        assert!(su_closure_dim(4).is_err());
    }

    #[test]
    fn line_generators_span_all_matrices() {
        // the 16 products of subsets of {e0, e1, e2, e3} on one line
        let gens = [
            generator_zero(1, 1).unwrap(),
            generator(1, 1, 1).unwrap(),
            generator(2, 1, 1).unwrap(),
            generator(3, 1, 1).unwrap(),
        ];
        let mut span = RealSpan::new(32, 1e-9);
        for mask in 0..16usize {
            let p = (0..4)
                .filter(|b| mask >> b & 1 == 1)
                .fold(PauliString::identity(2), |acc, b| &acc * &gens[b]);
            let m = p.to_dense().unwrap();
            assert!(span.insert(&real_coords(&m)));
            assert!(span.insert(&real_coords(&m.scale(I))));
        }
        assert_eq!(span.rank(), 32);
    }

    #[test]
    fn marginals_of_plus_state() {
        let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let s = DenseState::new(ComplexVector::from_vec(vec![amp, amp])).unwrap();
        let (p0, p1) = s.marginal(1);
        assert!((p0 - 0.5).abs() < 1e-12 && (p1 - 0.5).abs() < 1e-12);
        assert!(DenseState::new(ComplexVector::from_vec(vec![ONE, ONE])).is_err());
    }
}
