//! Polynomial-time simulation: compile a circuit to one rotation in SO(3n)
//! and read single-qubit statistics from rows of that rotation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, TOL_COMPOSE, TOL_EXACT, ZERO};
use crate::pauli::{expectation, generator_zero, generators, pauli_mul, ProductState, QubitState};
use crate::spinmap::{embed_rotation, spin6_to_so6, su2_to_so3, su4_to_spin6, Lines, RotationMatrix};

/// Sign `s` in `σ_{3;2k} = s · i e₁^{[k]} e₂^{[k]}`.
pub const SIGMA3_SIGN: f64 = -1.0;

/// One- or two-line gate with its unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    lines: Lines,
    unitary: ComplexMatrix,
}

impl Gate {
    pub fn single(line: usize, unitary: ComplexMatrix) -> Result<Self> {
        Self::new(Lines::Single(line), unitary)
    }

    pub fn two(l: usize, m: usize, unitary: ComplexMatrix) -> Result<Self> {
        Self::new(Lines::Pair(l, m), unitary)
    }

    pub fn new(lines: Lines, unitary: ComplexMatrix) -> Result<Self> {
        let d = match lines {
            Lines::Single(_) => 2,
            Lines::Pair(l, m) => {
                if l == 0 || l >= m {
                    return Err(Error::InvalidLinePair(l, m));
                }
                4
            }
        };
        if unitary.rows() != d || unitary.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                actual: unitary.rows() * unitary.cols(),
            });
        }
        unitary.check_unitary(TOL_EXACT)?;
        Ok(Self { lines, unitary })
    }

    pub fn lines(&self) -> Lines {
        self.lines
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn is_single(&self) -> bool {
        matches!(self.lines, Lines::Single(_))
    }

    /// The 3×3 or 6×6 block rotation of this gate.
    pub fn block_rotation(&self) -> Result<RotationMatrix> {
        match self.lines {
            Lines::Single(_) => su2_to_so3(&self.unitary),
            Lines::Pair(..) => spin6_to_so6(&su4_to_spin6(&self.unitary)?),
        }
    }

    /// The gate's rotation embedded in SO(3n).
    pub fn rotation(&self, n: usize) -> Result<RotationMatrix> {
        embed_rotation(&self.block_rotation()?, self.lines, n)
    }
}

/// Gates in temporal order acting on `n` lines (`2n` qubits).
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
    initial: ProductState,
}

impl Circuit {
    /// Empty circuit on `n ≥ 1` lines starting from `|0…0⟩`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::IndexOutOfRange {
                what: "line count",
                index: 0,
                max: usize::MAX,
            });
        }
        Ok(Self {
            n,
            gates: Vec::new(),
            initial: ProductState::zeros(2 * n),
        })
    }

    pub fn with_initial(mut self, initial: ProductState) -> Result<Self> {
        if initial.num_qubits() != 2 * self.n {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.n,
                actual: initial.num_qubits(),
            });
        }
        self.initial = initial;
        Ok(self)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.lines.validate(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_qubits(&self) -> usize {
        2 * self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn initial(&self) -> &ProductState {
        &self.initial
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    FastPath,
    General,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::FastPath => "fast-path",
            Method::General => "general",
            Method::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitMeasurement {
    /// 1-based physical qubit.
    pub qubit: usize,
    pub p0: f64,
    pub p1: f64,
    pub method: Method,
}

impl QubitMeasurement {
    /// Probabilities from `⟨σ₃⟩ = p0 − p1`, clamped to `[0, 1]`.
    pub fn from_z(qubit: usize, z: f64, method: Method) -> Self {
        let p0 = ((1.0 + z) / 2.0).clamp(0.0, 1.0);
        Self {
            qubit,
            p0,
            p1: 1.0 - p0,
            method,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MeasurementReport {
    pub qubits: Vec<QubitMeasurement>,
}

impl MeasurementReport {
    pub fn get(&self, qubit: usize) -> Option<&QubitMeasurement> {
        self.qubits.iter().find(|m| m.qubit == qubit)
    }

    /// Largest `|p0 − p0′|` over qubits present in both reports.
    pub fn max_discrepancy(&self, other: &MeasurementReport) -> f64 {
        self.qubits
            .iter()
            .filter_map(|m| other.get(m.qubit).map(|o| (m.p0 - o.p0).abs()))
            .fold(0.0, f64::max)
    }
}

/// Which physical qubits to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitSelection {
    All,
    Even,
    Odd,
    Qubit(usize),
}

impl QubitSelection {
    pub fn qubits(self, n: usize) -> Result<Vec<usize>> {
        let all = 1..=2 * n;
        Ok(match self {
            QubitSelection::All => all.collect(),
            QubitSelection::Even => all.filter(|q| q % 2 == 0).collect(),
            QubitSelection::Odd => all.filter(|q| q % 2 == 1).collect(),
            QubitSelection::Qubit(q) => {
                if q == 0 || q > 2 * n {
                    return Err(Error::IndexOutOfRange {
                        what: "qubit",
                        index: q,
                        max: 2 * n,
                    });
                }
                vec![q]
            }
        })
    }
}

/// Product of the embedded gate rotations, later gates on the left. Each
/// gate updates only its own 3 or 6 rows.
pub fn compile(c: &Circuit) -> Result<RotationMatrix> {
    let mut r = RotationMatrix::identity(3 * c.n);
    for gate in &c.gates {
        gate.lines.validate(c.n)?;
        r.left_multiply_block(&gate.lines.generator_rows(), &gate.block_rotation()?);
    }
    Ok(r)
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

fn check_rotation(r: &RotationMatrix, n: usize) -> Result<()> {
    if r.dim() != 3 * n {
        return Err(Error::DimensionMismatch {
            expected: 3 * n,
            actual: r.dim(),
        });
    }
    Ok(())
}

fn real_part(z: Complex64) -> Result<f64> {
    if z.im.abs() > TOL_COMPOSE {
        return Err(Error::ImaginaryResidue(z.im));
    }
    Ok(z.re)
}

/// `μ_ab = ⟨Ψ| i e_a e_b |Ψ⟩` over flat generator indices.
#[derive(Debug, Clone, PartialEq)]
pub struct MuTensor {
    dim: usize,
    data: Vec<Complex64>,
}

impl MuTensor {
    /// 0-based flat indices.
    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.data[a * self.dim + b]
    }

    /// `μ_{j′k′, j″k″}` with 1-based components and lines.
    pub fn get_lines(&self, j1: usize, k1: usize, j2: usize, k2: usize) -> Complex64 {
        self.get(3 * (k1 - 1) + j1 - 1, 3 * (k2 - 1) + j2 - 1)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

pub fn mu_tensor(state: &ProductState) -> Result<MuTensor> {
    let q = state.num_qubits();
    if !q.is_multiple_of(2) {
        return Err(Error::DimensionMismatch {
            expected: q + 1,
            actual: q,
        });
    }
    let gens = generators(q / 2);
    let dim = gens.len();
    let mut data = Vec::with_capacity(dim * dim);
    for ea in &gens {
        for eb in &gens {
            let p = pauli_mul(ea, eb)?.times_i_pow(1);
            data.push(expectation(&p, state)?);
        }
    }
    Ok(MuTensor { dim, data })
}

/// `p0 − p1` on qubit `2k` via the full `(3n)²` sum against `μ`.
pub fn even_general(mu: &MuTensor, r: &RotationMatrix, k: usize) -> Result<f64> {
    let (r1, r2) = (r.row(3 * (k - 1)), r.row(3 * (k - 1) + 1));
    let mut sum = ZERO;
    for (a, &x) in r1.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (b, &y) in r2.iter().enumerate() {
            if y != 0.0 {
                sum += mu.get(a, b) * (x * y);
            }
        }
    }
    real_part(sum * SIGMA3_SIGN)
}

/// `p0 − p1` on qubit `2k` in `O(n)`, valid when every auxiliary qubit is
/// `|0⟩` or `|1⟩`: `Σ_{k′} (R₁^{[k′]} × R₂^{[k′]}) · b(2k′)` with `b` the
/// Bloch vector of the primary qubit.
pub fn even_fast(state: &ProductState, r: &RotationMatrix, k: usize) -> Result<f64> {
    for q in (1..=state.num_qubits()).step_by(2) {
        if !state.qubit(q).is_computational() {
            return Err(Error::AuxiliaryNotComputational(q));
        }
    }
    let (r1, r2) = (r.row(3 * (k - 1)), r.row(3 * (k - 1) + 1));
    let mut sum = 0.0;
    for line in 0..state.num_qubits() / 2 {
        let x = &r1[3 * line..3 * line + 3];
        let y = &r2[3 * line..3 * line + 3];
        let cross = [
            x[1] * y[2] - x[2] * y[1],
            x[2] * y[0] - x[0] * y[2],
            x[0] * y[1] - x[1] * y[0],
        ];
        let b = state.qubit(2 * line + 2).bloch();
        sum += cross[0] * b[0] + cross[1] * b[1] + cross[2] * b[2];
    }
    Ok(sum * -SIGMA3_SIGN)
}

/// Statistics of primary qubit `2k`; uses the fast path when allowed.
pub fn measure_even(c: &Circuit, r: &RotationMatrix, k: usize) -> Result<QubitMeasurement> {
    check_line(k, c.n)?;
    check_rotation(r, c.n)?;
    if c.initial.auxiliaries_computational() {
        let z = even_fast(&c.initial, r, k)?;
        return Ok(QubitMeasurement::from_z(2 * k, z, Method::FastPath));
    }
    let mu = mu_tensor(&c.initial)?;
    let z = even_general(&mu, r, k)?;
    Ok(QubitMeasurement::from_z(2 * k, z, Method::General))
}

/// Operator slot in a product `O₁ O₂ ⋯` of generator combinations.
#[derive(Debug, Clone, Copy)]
pub enum Slot<'a> {
    /// `e₀^{[k]}`.
    Zero(usize),
    /// `Σ_a w_a e_a` over flat 0-based indices.
    Vector(&'a [f64]),
}

type Local = [Complex64; 4];

/// Applies the 4×4 local operator of a generator on (auxiliary, primary)
/// to a line state `[|00⟩, |01⟩, |10⟩, |11⟩]`.
fn apply_pauli_pair(aux: usize, prim: usize, v: &Local) -> Local {
    let one = |p: usize, a: Complex64, b: Complex64| -> (Complex64, Complex64) {
        match p {
            0 => (a, b),
            1 => (b, a),
            2 => (Complex64::new(0.0, -1.0) * b, Complex64::new(0.0, 1.0) * a),
            _ => (a, -b),
        }
    };
    let mut w = *v;
    // primary factor on bit 0
    for hi in 0..2 {
        let (a, b) = one(prim, w[2 * hi], w[2 * hi + 1]);
        w[2 * hi] = a;
        w[2 * hi + 1] = b;
    }
    for lo in 0..2 {
        let (a, b) = one(aux, w[lo], w[2 + lo]);
        w[lo] = a;
        w[2 + lo] = b;
    }
    w
}

fn local_slot(slot: Slot<'_>, line: usize, v: &Local) -> Local {
    match slot {
        // −i σ₁ on the auxiliary qubit
        Slot::Zero(_) => {
            let w = apply_pauli_pair(1, 0, v);
            w.map(|z| z * Complex64::new(0.0, -1.0))
        }
        Slot::Vector(wts) => {
            let mut out = [ZERO; 4];
            for j in 0..3 {
                let c = wts[3 * line + j];
                if c == 0.0 {
                    continue;
                }
                let w = apply_pauli_pair(2, j + 1, v);
                for (o, x) in out.iter_mut().zip(w) {
                    *o += x * c;
                }
            }
            out
        }
    }
}

fn slot_present(slot: Slot<'_>, line: usize) -> bool {
    match slot {
        Slot::Zero(k) => k == line + 1,
        Slot::Vector(w) => w[3 * line..3 * line + 3].iter().any(|&x| x != 0.0),
    }
}

/// `⟨Ψ| O₁ O₂ ⋯ O_s |Ψ⟩` for generator combinations `O_i`, in `O(n · 3^s)`.
///
/// Every operator is a sum of Pauli strings, and strings multiply site by
/// site, so the expectation is accumulated line by line over the possible
/// placements of each slot: a slot contributes `σ₃` on the auxiliary qubit
/// of lines before its own, its local generator on its line, and the
/// identity afterwards.
pub fn slot_expectation(state: &ProductState, slots: &[Slot<'_>]) -> Result<Complex64> {
    let n = state.num_qubits() / 2;
    let s = slots.len();
    assert!(s <= 16, "too many slots");
    for slot in slots {
        match *slot {
            Slot::Zero(k) => check_line(k, n)?,
            Slot::Vector(w) => {
                if w.len() != 3 * n {
                    return Err(Error::DimensionMismatch {
                        expected: 3 * n,
                        actual: w.len(),
                    });
                }
            }
        }
    }
    let full = (1usize << s) - 1;
    let mut dp = vec![ZERO; 1 << s];
    dp[0] = Complex64::new(1.0, 0.0);
    for line in 0..n {
        let aux = state.qubit(2 * line + 1).amplitudes();
        let prim = state.qubit(2 * line + 2).amplitudes();
        let psi: Local = [
            aux[0] * prim[0],
            aux[0] * prim[1],
            aux[1] * prim[0],
            aux[1] * prim[1],
        ];
        let mut forced = 0usize;
        let mut allowed = 0usize;
        for (i, slot) in slots.iter().enumerate() {
            if slot_present(*slot, line) {
                allowed |= 1 << i;
                if matches!(slot, Slot::Zero(_)) {
                    forced |= 1 << i;
                }
            }
        }
        let mut next = vec![ZERO; 1 << s];
        for (done, &value) in dp.iter().enumerate() {
            if value == ZERO {
                continue;
            }
            let pending = full & !done;
            if forced & !pending != 0 {
                continue;
            }
            let choices = pending & allowed;
            // enumerate subsets of the placeable slots
            let mut here = choices;
            loop {
                if here & forced == forced & pending {
                    let mut v = psi;
                    for i in (0..s).rev() {
                        let bit = 1 << i;
                        if here & bit != 0 {
                            v = local_slot(slots[i], line, &v);
                        } else if pending & bit != 0 {
                            v = apply_pauli_pair(3, 0, &v);
                        }
                    }
                    let amp: Complex64 = psi.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    if amp != ZERO {
                        next[done | here] += value * amp;
                    }
                }
                if here == 0 {
                    break;
                }
                here = (here - 1) & choices;
            }
        }
        dp = next;
    }
    Ok(dp[full])
}

/// `p0 − p1` on auxiliary qubit `2k − 1`:
/// `−⟨ i e₀^{[k]} f₁ f₂ f₃ ⟩` with `f_i = Σ_a R_{3(k−1)+i, a} e_a`.
pub fn odd_sweep(state: &ProductState, r: &RotationMatrix, k: usize) -> Result<f64> {
    let base = 3 * (k - 1);
    let slots = [
        Slot::Zero(k),
        Slot::Vector(r.row(base)),
        Slot::Vector(r.row(base + 1)),
        Slot::Vector(r.row(base + 2)),
    ];
    let z = slot_expectation(state, &slots)? * Complex64::new(0.0, 1.0);
    real_part(-z)
}

/// The same quantity as [`odd_sweep`] as an explicit `(3n)³` sum of
/// product-state expectations of Pauli strings.
pub fn odd_direct(state: &ProductState, r: &RotationMatrix, k: usize) -> Result<f64> {
    let n = state.num_qubits() / 2;
    let gens = generators(n);
    let base = 3 * (k - 1);
    let (r1, r2, r3) = (r.row(base), r.row(base + 1), r.row(base + 2));
    let lead = generator_zero(k, n)?.times_i_pow(1);
    let mut sum = ZERO;
    for (a, &x) in r1.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        let pa = pauli_mul(&lead, &gens[a])?;
        for (b, &y) in r2.iter().enumerate() {
            if y == 0.0 {
                continue;
            }
            let pab = pauli_mul(&pa, &gens[b])?;
            for (c, &z) in r3.iter().enumerate() {
                if z == 0.0 {
                    continue;
                }
                let p = pauli_mul(&pab, &gens[c])?;
                sum += expectation(&p, state)? * (x * y * z);
            }
        }
    }
    real_part(-sum)
}

/// Statistics of auxiliary qubit `2k − 1`.
pub fn measure_odd(c: &Circuit, r: &RotationMatrix, k: usize) -> Result<QubitMeasurement> {
    check_line(k, c.n)?;
    check_rotation(r, c.n)?;
    let z = odd_sweep(&c.initial, r, k)?;
    Ok(QubitMeasurement::from_z(2 * k - 1, z, Method::General))
}

/// Measures the selected qubits given a compiled rotation.
pub fn measure(c: &Circuit, r: &RotationMatrix, sel: QubitSelection) -> Result<MeasurementReport> {
    check_rotation(r, c.n)?;
    let qubits = sel.qubits(c.n)?;
    let fast = c.initial.auxiliaries_computational();
    let mu = if !fast && qubits.iter().any(|q| q % 2 == 0) {
        Some(mu_tensor(&c.initial)?)
    } else {
        None
    };
    let mut out = MeasurementReport::default();
    for q in qubits {
        let k = q.div_ceil(2);
        let m = if q % 2 == 1 {
            measure_odd(c, r, k)?
        } else if let Some(mu) = &mu {
            QubitMeasurement::from_z(q, even_general(mu, r, k)?, Method::General)
        } else {
            QubitMeasurement::from_z(q, even_fast(&c.initial, r, k)?, Method::FastPath)
        };
        out.qubits.push(m);
    }
    Ok(out)
}

pub fn simulate(c: &Circuit, sel: QubitSelection) -> Result<MeasurementReport> {
    let r = compile(c)?;
    measure(c, &r, sel)
}

/// Initial state with the given single-qubit states on primary qubits and
/// `|0⟩` on auxiliaries.
pub fn primary_product_state(primaries: &[QubitState]) -> ProductState {
    let mut qubits = Vec::with_capacity(2 * primaries.len());
    for p in primaries {
        qubits.push(QubitState::zero());
        qubits.push(*p);
    }
    ProductState::new(qubits)
}
