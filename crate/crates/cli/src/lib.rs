//! File formats and command implementations behind the `spin3n` binary.

use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use spin3n::clifford::{bivector_closure_dim, gate_algebra_generators, Blade};
use spin3n::linalg::{ComplexMatrix, TOL_COMPOSE};
use spin3n::oracle::{run_dense, su_closure_dim, MAX_ORACLE_LINES, MAX_SU_CLOSURE_QUBITS};
use spin3n::pauli::{ProductState, QubitState};
use spin3n::random::{random_circuit, random_product_state};
use spin3n::simulator::{compile, measure, Circuit, Gate, MeasurementReport, QubitSelection};
use spin3n::spinmap::{spin6_to_so6, su4_to_spin6, Lines, RotationMatrix};

/// Largest line count for the bivector closure in `lie-dim`.
pub const MAX_LIE_DIM_LINES: usize = 6;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] spin3n::Error),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        2
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Complex number as `[re, im]`.
pub type JsonComplex = [f64; 2];

fn to_complex(z: JsonComplex) -> Complex64 {
    Complex64::new(z[0], z[1])
}

fn from_complex(z: Complex64) -> JsonComplex {
    [z.re, z.im]
}

fn matrix_from_json(rows: &[Vec<JsonComplex>]) -> CliResult<ComplexMatrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Input("matrix must be square and non-empty".into()));
    }
    let rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().copied().map(to_complex).collect())
        .collect();
    Ok(ComplexMatrix::from_rows(&rows))
}

fn matrix_to_json(m: &ComplexMatrix) -> Vec<Vec<JsonComplex>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().copied().map(from_complex).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialQubit {
    pub qubit: usize,
    pub state: [JsonComplex; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GateSpec {
    Single {
        line: usize,
        unitary: Vec<Vec<JsonComplex>>,
    },
    Two {
        lines: [usize; 2],
        unitary: Vec<Vec<JsonComplex>>,
    },
}

/// Circuit file: line count, optional initial qubit states (default `|0⟩`)
/// and gates in temporal order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub lines: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub initial: Vec<InitialQubit>,
    #[serde(default)]
    pub gates: Vec<GateSpec>,
}

impl CircuitFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        Self::parse(&read(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_circuit(&self) -> CliResult<Circuit> {
        let n = self.lines;
        if n == 0 {
            return Err(CliError::Input("a circuit needs at least one line".into()));
        }
        let mut state = ProductState::zeros(2 * n);
        for q in &self.initial {
            let qs = QubitState::new(to_complex(q.state[0]), to_complex(q.state[1]))?;
            state.set_qubit(q.qubit, qs)?;
        }
        let mut c = Circuit::new(n)?.with_initial(state)?;
        for g in &self.gates {
            let gate = match g {
                GateSpec::Single { line, unitary } => Gate::single(*line, matrix_from_json(unitary)?)?,
                GateSpec::Two { lines, unitary } => Gate::two(lines[0], lines[1], matrix_from_json(unitary)?)?,
            };
            c.push(gate)?;
        }
        Ok(c)
    }

    pub fn from_circuit(c: &Circuit) -> Self {
        let initial = c
            .initial()
            .qubits()
            .iter()
            .enumerate()
            .filter(|(_, q)| **q != QubitState::zero())
            .map(|(i, q)| {
                let [a, b] = q.amplitudes();
                InitialQubit {
                    qubit: i + 1,
                    state: [from_complex(a), from_complex(b)],
                }
            })
            .collect();
        let gates = c
            .gates()
            .iter()
            .map(|g| {
                let unitary = matrix_to_json(g.unitary());
                match g.lines() {
                    Lines::Single(line) => GateSpec::Single { line, unitary },
                    Lines::Pair(l, m) => GateSpec::Two {
                        lines: [l, m],
                        unitary,
                    },
                }
            })
            .collect();
        Self {
            lines: c.n(),
            initial,
            gates,
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Rotation,
    Dense,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Rotation => "rotation",
            Mode::Dense => "dense",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QubitEntry {
    pub qubit: usize,
    pub p0: f64,
    pub p1: f64,
    pub method: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub orthogonality_residual: f64,
    pub determinant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub compile_seconds: f64,
    pub measure_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub mode: &'static str,
    pub lines: usize,
    pub gates: usize,
    pub qubits: Vec<QubitEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
    pub timing: Timing,
}

impl Report {
    fn measurements(m: &MeasurementReport) -> Vec<QubitEntry> {
        m.qubits
            .iter()
            .map(|q| QubitEntry {
                qubit: q.qubit,
                p0: q.p0,
                p1: q.p1,
                method: q.method.as_str(),
            })
            .collect()
    }

    pub fn p0(&self, qubit: usize) -> Option<f64> {
        self.qubits.iter().find(|q| q.qubit == qubit).map(|q| q.p0)
    }

    /// Largest `|p0 − p0′|` over the qubits of `self`.
    pub fn max_discrepancy(&self, other: &Report) -> f64 {
        self.qubits
            .iter()
            .map(|q| other.p0(q.qubit).map_or(f64::INFINITY, |p| (p - q.p0).abs()))
            .fold(0.0, f64::max)
    }
}

pub fn diagnostics(r: &RotationMatrix) -> Diagnostics {
    Diagnostics {
        orthogonality_residual: r.orthogonality_residual(),
        determinant: r.determinant(),
    }
}

/// Parses `all`, `even`, `odd` or a 1-based qubit index.
pub fn parse_selection(s: &str) -> Result<QubitSelection, String> {
    match s {
        "all" => Ok(QubitSelection::All),
        "even" => Ok(QubitSelection::Even),
        "odd" => Ok(QubitSelection::Odd),
        q => q
            .parse::<usize>()
            .map(QubitSelection::Qubit)
            .map_err(|_| format!("expected all, even, odd or a qubit index, got {q:?}")),
    }
}

pub fn simulate_circuit(c: &Circuit, mode: Mode, sel: QubitSelection) -> CliResult<Report> {
    let qubits = sel.qubits(c.n())?;
    match mode {
        Mode::Rotation => {
            let start = Instant::now();
            let r = compile(c)?;
            let compile_seconds = start.elapsed().as_secs_f64();
            let start = Instant::now();
            let m = measure(c, &r, sel)?;
            let measure_seconds = start.elapsed().as_secs_f64();
            Ok(Report {
                mode: mode.name(),
                lines: c.n(),
                gates: c.gates().len(),
                qubits: Report::measurements(&m),
                diagnostics: Some(diagnostics(&r)),
                timing: Timing {
                    compile_seconds,
                    measure_seconds,
                },
            })
        }
        Mode::Dense => {
            if c.n() > MAX_ORACLE_LINES {
                return Err(CliError::Input(format!(
                    "dense mode supports at most {MAX_ORACLE_LINES} lines, circuit has {}",
                    c.n()
                )));
            }
            let start = Instant::now();
            let mut m = run_dense(c)?;
            m.qubits.retain(|q| qubits.contains(&q.qubit));
            Ok(Report {
                mode: mode.name(),
                lines: c.n(),
                gates: c.gates().len(),
                qubits: Report::measurements(&m),
                diagnostics: None,
                timing: Timing {
                    compile_seconds: 0.0,
                    measure_seconds: start.elapsed().as_secs_f64(),
                },
            })
        }
    }
}

pub fn cmd_simulate(path: &Path, mode: Mode, sel: QubitSelection) -> CliResult<Report> {
    let c = CircuitFile::load(path)?.to_circuit()?;
    simulate_circuit(&c, mode, sel)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyEntry {
    pub label: String,
    pub lines: usize,
    pub gates: usize,
    pub max_discrepancy: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub tolerance: f64,
    pub max_discrepancy: f64,
    pub pass: bool,
    pub circuits: Vec<VerifyEntry>,
}

impl VerifyReport {
    fn from_entries(tolerance: f64, circuits: Vec<VerifyEntry>) -> Self {
        let max_discrepancy = circuits.iter().map(|e| e.max_discrepancy).fold(0.0, f64::max);
        Self {
            tolerance,
            max_discrepancy,
            pass: circuits.iter().all(|e| e.pass),
            circuits,
        }
    }
}

pub fn verify_circuit(label: String, c: &Circuit, tol: f64) -> CliResult<VerifyEntry> {
    let fast = simulate_circuit(c, Mode::Rotation, QubitSelection::All)?;
    let dense = simulate_circuit(c, Mode::Dense, QubitSelection::All)?;
    let d = fast.max_discrepancy(&dense);
    Ok(VerifyEntry {
        label,
        lines: c.n(),
        gates: c.gates().len(),
        max_discrepancy: d,
        pass: d <= tol,
    })
}

pub fn cmd_verify(path: &Path, tol: f64) -> CliResult<VerifyReport> {
    let c = CircuitFile::load(path)?.to_circuit()?;
    let entry = verify_circuit(path.display().to_string(), &c, tol)?;
    Ok(VerifyReport::from_entries(tol, vec![entry]))
}

/// Seeded random circuits with computational auxiliaries.
pub fn cmd_verify_random(count: usize, lines: usize, gates: usize, seed: u64, tol: f64) -> CliResult<VerifyReport> {
    if lines == 0 || lines > MAX_ORACLE_LINES {
        return Err(CliError::Input(format!("--lines must be in 1..={MAX_ORACLE_LINES}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(count);
    for k in 0..count {
        let state = random_product_state(lines, true, &mut rng);
        let c = random_circuit(lines, gates, state, &mut rng);
        entries.push(verify_circuit(format!("random #{}", k + 1), &c, tol)?);
    }
    Ok(VerifyReport::from_entries(tol, entries))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BladeCoefficient {
    pub blade: String,
    pub grade: u32,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvertReport {
    pub coefficients: Vec<BladeCoefficient>,
    pub rotation: Vec<Vec<f64>>,
    pub diagnostics: Diagnostics,
}

/// The 32 even blades of `Cl₊(6)` ordered by grade, then by mask.
pub fn even_blades() -> Vec<Blade> {
    let mut blades: Vec<Blade> = (0u64..64)
        .filter(|m| m.count_ones() % 2 == 0)
        .map(Blade)
        .collect();
    blades.sort_by_key(|b| (b.grade(), b.0));
    blades
}

pub fn convert_matrix(u: &ComplexMatrix) -> CliResult<ConvertReport> {
    if u.rows() != 4 || u.cols() != 4 {
        return Err(CliError::Input("convert expects a 4x4 matrix".into()));
    }
    let s = su4_to_spin6(u)?;
    let r = spin6_to_so6(&s)?;
    let coefficients = even_blades()
        .into_iter()
        .map(|b| BladeCoefficient {
            blade: b.to_string(),
            grade: b.grade(),
            value: s.value().coefficient(b),
        })
        .collect();
    Ok(ConvertReport {
        coefficients,
        rotation: (0..6).map(|k| r.row(k).to_vec()).collect(),
        diagnostics: diagnostics(&r),
    })
}

/// Reads a bare 4×4 matrix of `[re, im]` pairs.
pub fn cmd_convert(path: &Path) -> CliResult<ConvertReport> {
    let rows: Vec<Vec<JsonComplex>> = serde_json::from_str(&read(path)?)?;
    convert_matrix(&matrix_from_json(&rows)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LieDimReport {
    pub n: usize,
    pub spin_closure_dim: usize,
    pub spin_formula: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub su_closure_dim: Option<usize>,
    pub su_formula: u128,
}

pub fn cmd_lie_dim(n: usize) -> CliResult<LieDimReport> {
    if n == 0 || n > MAX_LIE_DIM_LINES {
        return Err(CliError::Input(format!("lie-dim supports n in 1..={MAX_LIE_DIM_LINES}")));
    }
    let spin = bivector_closure_dim(&gate_algebra_generators(n), 3 * n)?;
    let su = if n <= MAX_SU_CLOSURE_QUBITS {
        Some(su_closure_dim(n)?)
    } else {
        None
    };
    Ok(LieDimReport {
        n,
        spin_closure_dim: spin,
        spin_formula: 3 * n * (3 * n - 1) / 2,
        su_closure_dim: su,
        su_formula: 4u128.pow(n as u32) - 1,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub lines: usize,
    pub gates: usize,
    pub seed: u64,
    pub compile_seconds: f64,
    pub measure_seconds: f64,
    pub measured_qubits: usize,
    pub orthogonality_residual: f64,
    pub within_tolerance: bool,
}

/// Random circuit, compiled and measured on every even qubit.
pub fn cmd_bench(lines: usize, gates: usize, seed: u64) -> CliResult<BenchReport> {
    if lines == 0 {
        return Err(CliError::Input("--lines must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let state = random_product_state(lines, true, &mut rng);
    let c = random_circuit(lines, gates, state, &mut rng);
    let start = Instant::now();
    let r = compile(&c)?;
    let compile_seconds = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let m = measure(&c, &r, QubitSelection::Even)?;
    let measure_seconds = start.elapsed().as_secs_f64();
    let residual = r.orthogonality_residual();
    Ok(BenchReport {
        lines,
        gates,
        seed,
        compile_seconds,
        measure_seconds,
        measured_qubits: m.qubits.len(),
        orthogonality_residual: residual,
        within_tolerance: residual < TOL_COMPOSE,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}
