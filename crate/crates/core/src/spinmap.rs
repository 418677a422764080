//! Gate compilation: SU(2) → SO(3), SU(4) → Spin(6) → SO(6), and embedding
//! of small rotations into SO(3n).
//!
//! Rotation rows are indexed by the conjugated generator:
//! `S⁻¹ e_a S = Σ_b R_ab e_b`.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::clifford::{euclidean, Blade, CliffordElement, SpinElement};
use crate::error::{Error, Result};
use crate::linalg::{
    phase_normalize, phase_normalize_su4, tensor_product, ComplexMatrix, TOL_COMPOSE, TOL_EXACT,
};
use crate::pauli::{generator_flat, sigma, PauliString};

/// Real square rotation matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct RotationMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl RotationMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for k in 0..dim {
            data[k * dim + k] = 1.0;
        }
        Self { dim, data }
    }

    /// Wraps the given entries without checking orthogonality.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut out = Self::identity(d);
        for r in 0..d {
            for c in 0..d {
                out.data[c * d + r] = self.data[r * d + c];
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    /// `‖RᵀR − I‖_max`.
    pub fn orthogonality_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in a..d {
                let dot: f64 = (0..d).map(|r| self.data[r * d + a] * self.data[r * d + b]).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    pub fn determinant(&self) -> f64 {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data).determinant()
    }

    pub fn is_rotation(&self, tol: f64) -> bool {
        self.orthogonality_residual() < tol && (self.determinant() - 1.0).abs() < tol
    }

    pub fn max_abs_diff(&self, other: &RotationMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Sub-block with the given rows and columns (0-based).
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<f64>> {
        rows.iter()
            .map(|&r| cols.iter().map(|&c| self[(r, c)]).collect())
            .collect()
    }

    /// `R ← G R` where `G` is the identity outside `rows` and equals `g` on
    /// the `rows × rows` block. Only those rows of `R` change.
    pub fn left_multiply_block(&mut self, rows: &[usize], g: &RotationMatrix) {
        assert_eq!(rows.len(), g.dim);
        let d = self.dim;
        let old: Vec<Vec<f64>> = rows.iter().map(|&r| self.row(r).to_vec()).collect();
        for (i, &r) in rows.iter().enumerate() {
            let target = &mut self.data[r * d..(r + 1) * d];
            target.fill(0.0);
            for (j, src) in old.iter().enumerate() {
                let w = g.data[i * g.dim + j];
                if w == 0.0 {
                    continue;
                }
                for (t, s) in target.iter_mut().zip(src) {
                    *t += w * s;
                }
            }
        }
    }
}

impl Index<(usize, usize)> for RotationMatrix {
    type Output = f64;

    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for RotationMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &RotationMatrix {
    type Output = RotationMatrix;

    fn mul(self, rhs: &RotationMatrix) -> RotationMatrix {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = vec![0.0; d * d];
        for r in 0..d {
            for k in 0..d {
                let x = self.data[r * d + k];
                if x == 0.0 {
                    continue;
                }
                for c in 0..d {
                    out[r * d + c] += x * rhs.data[k * d + c];
                }
            }
        }
        RotationMatrix { dim: d, data: out }
    }
}

impl fmt::Debug for RotationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RotationMatrix({})", self.dim)?;
        for r in 0..self.dim {
            let cells: Vec<String> = self.row(r).iter().map(|x| format!("{x:+.6}")).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Which lines a gate acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lines {
    Single(usize),
    Pair(usize, usize),
}

impl Lines {
    pub fn validate(self, n: usize) -> Result<()> {
        let check = |l: usize| {
            if l == 0 || l > n {
                Err(Error::IndexOutOfRange {
                    what: "line",
                    index: l,
                    max: n,
                })
            } else {
                Ok(())
            }
        };
        match self {
            Lines::Single(l) => check(l),
            Lines::Pair(l, m) => {
                check(l)?;
                check(m)?;
                if l >= m {
                    return Err(Error::InvalidLinePair(l, m));
                }
                Ok(())
            }
        }
    }

    /// 0-based flat generator indices owned by the gate, l-block first.
    pub fn generator_rows(self) -> Vec<usize> {
        let block = |l: usize| (3 * (l - 1)..3 * l).collect::<Vec<_>>();
        match self {
            Lines::Single(l) => block(l),
            Lines::Pair(l, m) => {
                let mut rows = block(l);
                rows.extend(block(m));
                rows
            }
        }
    }
}

/// Image of a basis Hamiltonian inside `Cl₊(6)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisTag {
    /// `I ⊗ I`, mapped to the scalar.
    Identity,
    /// Ordered generator pair `(a, b)` (1-based, 1..6) with `ρ(e_a e_b) = i H_J`
    /// on the even subsystem.
    Pair(usize, usize),
}

#[derive(Debug, Clone)]
pub struct BasisElement {
    pub label: String,
    pub matrix: ComplexMatrix,
    pub tag: BasisTag,
}

/// The 16 Hermitian two-qubit Pauli products with their Clifford tags.
///
/// Order: `I⊗I`, `σ_j⊗1`, `1⊗σ_j`, then `σ_j⊗σ_k` with `j` major.
#[derive(Debug, Clone)]
pub struct GateBasis {
    elements: Vec<BasisElement>,
}

impl GateBasis {
    fn build() -> Self {
        let id = sigma(0);
        let mut elements = vec![BasisElement {
            label: "II".into(),
            matrix: tensor_product(&id, &id),
            tag: BasisTag::Identity,
        }];
        let s_pair = |j: usize| match j {
            1 => (2, 3),
            2 => (3, 1),
            _ => (1, 2),
        };
        let name = ["I", "X", "Y", "Z"];
        for j in 1..=3 {
            let (a, b) = s_pair(j);
            elements.push(BasisElement {
                label: format!("{}I", name[j]),
                matrix: tensor_product(&sigma(j), &id),
                tag: BasisTag::Pair(a, b),
            });
        }
        for j in 1..=3 {
            let (a, b) = s_pair(j);
            elements.push(BasisElement {
                label: format!("I{}", name[j]),
                matrix: tensor_product(&id, &sigma(j)),
                tag: BasisTag::Pair(a + 3, b + 3),
            });
        }
        for j in 1..=3 {
            for k in 1..=3 {
                elements.push(BasisElement {
                    label: format!("{}{}", name[j], name[k]),
                    matrix: tensor_product(&sigma(j), &sigma(k)),
                    tag: BasisTag::Pair(j, k + 3),
                });
            }
        }
        Self { elements }
    }

    /// Shared instance.
    pub fn get() -> &'static GateBasis {
        static BASIS: OnceLock<GateBasis> = OnceLock::new();
        BASIS.get_or_init(GateBasis::build)
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `u_J = Tr(H_J U) / 4`.
    pub fn coefficients(&self, u: &ComplexMatrix) -> Vec<Complex64> {
        self.elements
            .iter()
            .map(|e| e.matrix.trace_product(u) / 4.0)
            .collect()
    }

    /// Bivector `B_J` of element `J` (the scalar 1 for `J = 0`).
    pub fn bivector(&self, j: usize) -> CliffordElement {
        let sig = euclidean(6);
        match self.elements[j].tag {
            BasisTag::Identity => CliffordElement::scalar(&sig, 1.0),
            BasisTag::Pair(a, b) => CliffordElement::product_of(&sig, &[a, b]),
        }
    }
}

/// `ǐ = e₁e₂e₃e₄e₅e₆`.
pub fn pseudoscalar6() -> CliffordElement {
    CliffordElement::blade(&euclidean(6), Blade(0b11_1111), 1.0)
}

fn check_dims(u: &ComplexMatrix, d: usize) -> Result<()> {
    if u.rows() != d || u.cols() != d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            actual: u.rows() * u.cols(),
        });
    }
    Ok(())
}

/// Heisenberg rotation of a one-qubit gate:
/// `R_{jj′} = ½ Re Tr(σ_{j′} U† σ_j U)`.
pub fn su2_to_so3(u: &ComplexMatrix) -> Result<RotationMatrix> {
    check_dims(u, 2)?;
    let (u, _) = phase_normalize(u)?;
    let ud = u.adjoint();
    let mut r = RotationMatrix::identity(3);
    for j in 1..=3 {
        let conj = &(&ud * &sigma(j)) * &u;
        for jp in 1..=3 {
            r[(j - 1, jp - 1)] = 0.5 * sigma(jp).trace_product(&conj).re;
        }
    }
    Ok(r)
}

/// Spin(3) element `a₀ + a₁e₂₃ + a₂e₃₁ + a₃e₁₂` of `U = a₀ + i a·σ`.
pub fn su2_to_spin3(u: &ComplexMatrix) -> Result<SpinElement> {
    check_dims(u, 2)?;
    let (u, _) = phase_normalize(u)?;
    let sig = euclidean(3);
    let mut s = CliffordElement::scalar(&sig, 0.5 * u.trace().re);
    for (j, (a, b)) in [(1, (2, 3)), (2, (3, 1)), (3, (1, 2))] {
        let aj = 0.5 * sigma(j).trace_product(&u).im;
        s = &s + &CliffordElement::product_of(&sig, &[a, b]).scale(aj);
    }
    SpinElement::new(s)
}

/// Spin(6) element whose representation acts on the even subsystem as the
/// (phase-normalized) gate `U`.
pub fn su4_to_spin6(u: &ComplexMatrix) -> Result<SpinElement> {
    check_dims(u, 4)?;
    let (u, _) = phase_normalize_su4(u)?;
    let basis = GateBasis::get();
    let coeffs = basis.coefficients(&u);
    let ps = pseudoscalar6();
    let sig = euclidean(6);
    let mut s = CliffordElement::zero(&sig);
    for (j, z) in coeffs.iter().enumerate() {
        let b = basis.bivector(j);
        if j == 0 {
            s = &s + &CliffordElement::scalar(&sig, z.re);
            s = &s + &ps.scale(-z.im);
        } else {
            s = &s + &b.scale(z.im);
            s = &s + &(&ps * &b).scale(z.re);
        }
    }
    SpinElement::new(s)
}

/// Rotation `S⁻¹ e_a S = Σ_b R_ab e_b` of a spin element in `Cl₊(m)`.
pub fn spin_to_rotation(s: &SpinElement) -> Result<RotationMatrix> {
    let sig = s.value().signature().to_vec();
    let m = sig.len();
    let inv = s.inverse();
    let mut r = RotationMatrix {
        dim: m,
        data: vec![0.0; m * m],
    };
    for a in 1..=m {
        let e = CliffordElement::generator(&sig, a);
        let conj = &(inv.value() * &e) * s.value();
        let mut residue: f64 = 0.0;
        for (blade, c) in conj.terms() {
            if blade.grade() == 1 {
                r[(a - 1, blade.0.trailing_zeros() as usize)] = c;
            } else {
                residue = residue.max(c.abs());
            }
        }
        if residue > TOL_COMPOSE {
            return Err(Error::ConjugationResidue(residue));
        }
    }
    Ok(r)
}

pub fn spin6_to_so6(s: &SpinElement) -> Result<RotationMatrix> {
    if s.value().num_generators() != 6 {
        return Err(Error::SignatureMismatch);
    }
    spin_to_rotation(s)
}

/// Dense matrix of a Clifford element given the matrices of its generators
/// as Pauli strings (`generators[a − 1]` represents `e_a`).
pub fn dense_image(x: &CliffordElement, generators: &[PauliString]) -> Result<ComplexMatrix> {
    if generators.len() != x.num_generators() {
        return Err(Error::DimensionMismatch {
            expected: x.num_generators(),
            actual: generators.len(),
        });
    }
    let q = generators.first().map_or(0, PauliString::num_qubits);
    let dim = 1usize << q;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (blade, c) in x.terms() {
        let mut p = PauliString::identity(q);
        for a in blade.indices() {
            p = &p * &generators[a - 1];
        }
        p.accumulate_into(Complex64::new(c, 0.0), &mut out);
    }
    Ok(out)
}

/// Generators of `Cl₊(6)` as 4-qubit Pauli strings (two lines).
pub fn two_line_generators() -> Vec<PauliString> {
    (1..=6)
        .map(|a| generator_flat(a, 2).expect("in range"))
        .collect()
}

/// Cross-check path: `R_ab = Re Tr(E_b S_m† E_a S_m) / 16` in the 16-dimensional
/// representation.
pub fn spin6_to_so6_trace(s: &SpinElement) -> Result<RotationMatrix> {
    let gens = two_line_generators();
    let sm = dense_image(s.value(), &gens)?;
    let smd = sm.adjoint();
    let e: Vec<ComplexMatrix> = gens.iter().map(|g| g.to_dense()).collect::<Result<_>>()?;
    let mut r = RotationMatrix::identity(6);
    for a in 0..6 {
        let conj = &(&smd * &e[a]) * &sm;
        for b in 0..6 {
            r[(a, b)] = e[b].trace_product(&conj).re / 16.0;
        }
    }
    Ok(r)
}

/// Bivector `b` with `su4_to_spin6(exp(−iτH)) = exp(τ b)`: the image of `−iH`.
pub fn hamiltonian_to_bivector(h: &ComplexMatrix) -> Result<CliffordElement> {
    check_dims(h, 4)?;
    h.check_hermitian(TOL_EXACT)?;
    let tr = h.trace().norm();
    if tr >= TOL_EXACT {
        return Err(Error::NotTraceless { trace: tr });
    }
    let basis = GateBasis::get();
    let coeffs = basis.coefficients(h);
    let mut b = CliffordElement::zero(&euclidean(6));
    for (j, z) in coeffs.iter().enumerate().skip(1) {
        b = &b + &basis.bivector(j).scale(-z.re);
    }
    Ok(b)
}

/// Places a 3×3 (single line) or 6×6 (line pair) rotation into SO(3n).
pub fn embed_rotation(rs: &RotationMatrix, lines: Lines, n: usize) -> Result<RotationMatrix> {
    lines.validate(n)?;
    let rows = lines.generator_rows();
    if rows.len() != rs.dim() {
        return Err(Error::DimensionMismatch {
            expected: rows.len(),
            actual: rs.dim(),
        });
    }
    let mut r = RotationMatrix::identity(3 * n);
    for (i, &ri) in rows.iter().enumerate() {
        for (j, &rj) in rows.iter().enumerate() {
            r[(ri, rj)] = rs[(i, j)];
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{unitary_from_hamiltonian, ComplexVector, I, ONE, ZERO};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn worked_example_gate() -> ComplexMatrix {
        let h = 0.5;
        ComplexMatrix::from_rows(&[
            vec![c(h, 0.0), c(0.0, h), c(0.0, h), c(h, 0.0)],
            vec![c(0.0, h), c(h, 0.0), c(-h, 0.0), c(0.0, -h)],
            vec![c(0.0, h), c(-h, 0.0), c(h, 0.0), c(0.0, -h)],
            vec![c(h, 0.0), c(0.0, -h), c(0.0, -h), c(h, 0.0)],
        ])
    }

    fn sample_su4() -> ComplexMatrix {
        let h = ComplexMatrix::from_rows(&[
            vec![c(0.3, 0.0), c(0.1, 0.4), c(-0.2, 0.1), c(0.0, 0.5)],
            vec![c(0.1, -0.4), c(-0.7, 0.0), c(0.3, 0.3), c(0.2, 0.0)],
            vec![c(-0.2, -0.1), c(0.3, -0.3), c(0.1, 0.0), c(0.6, -0.2)],
            vec![c(0.0, -0.5), c(0.2, 0.0), c(0.6, 0.2), c(0.3, 0.0)],
        ]);
        unitary_from_hamiltonian(&h, 1.3).unwrap()
    }

    #[test]
    fn basis_orthogonality() {
        let basis = GateBasis::get();
        assert_eq!(basis.len(), 16);
        for (j, a) in basis.elements().iter().enumerate() {
            for (k, b) in basis.elements().iter().enumerate() {
                let t = a.matrix.trace_product(&b.matrix);
                let want = if j == k { 4.0 } else { 0.0 };
                assert!((t - want).norm() < TOL_EXACT);
            }
        }
    }

    #[test]
    fn basis_tags_act_as_i_times_hamiltonian() {
        let gens = two_line_generators();
        let basis = GateBasis::get();
        let upsilon = ComplexVector::from_vec(vec![ONE, I, ONE, I]).normalized();
        for (j, el) in basis.elements().iter().enumerate().skip(1) {
            let m = dense_image(&basis.bivector(j), &gens).unwrap();
            for col in 0..4 {
                let psi = ComplexVector::basis(4, col);
                let lhs = m.apply(&reorder(&psi, &upsilon));
                let rhs = reorder(&el.matrix.scale(I).apply(&psi), &upsilon);
                assert!(lhs.max_abs_diff(&rhs) < TOL_EXACT, "tag {}", el.label);
            }
        }
    }

    /// Physical order (1,2,3,4) from `|Ψ_e⟩` on qubits (2,4) and `|Υ_o⟩` on (1,3).
    fn reorder(psi: &ComplexVector, upsilon: &ComplexVector) -> ComplexVector {
        let mut out = vec![ZERO; 16];
        for q1 in 0..2 {
            for q2 in 0..2 {
                for q3 in 0..2 {
                    for q4 in 0..2 {
                        out[q1 << 3 | q2 << 2 | q3 << 1 | q4] =
                            psi.entries()[q2 << 1 | q4] * upsilon.entries()[q1 << 1 | q3];
                    }
                }
            }
        }
        ComplexVector::from_vec(out)
    }

    #[test]
    fn su2_examples() {
        assert_eq!(
            su2_to_so3(&ComplexMatrix::identity(2)).unwrap(),
            RotationMatrix::identity(3)
        );
        let ix = sigma(1).scale(I);
        let r = su2_to_so3(&ix).unwrap();
        let want = RotationMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0],
            vec![0.0, 0.0, -1.0],
        ])
        .unwrap();
        assert!(r.max_abs_diff(&want) < TOL_EXACT);
        let theta = 0.7;
        let u = ComplexMatrix::diagonal(&[
            Complex64::from_polar(1.0, -theta / 2.0),
            Complex64::from_polar(1.0, theta / 2.0),
        ]);
        let r = su2_to_so3(&u).unwrap();
        let (s, co) = theta.sin_cos();
        let want =
            RotationMatrix::from_rows(&[vec![co, -s, 0.0], vec![s, co, 0.0], vec![0.0, 0.0, 1.0]])
                .unwrap();
        assert!(r.max_abs_diff(&want) < TOL_EXACT);
        assert!(su2_to_so3(&ComplexMatrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]])).is_err());
    }

    #[test]
    fn su2_spin3_matches_rotation() {
        let u = unitary_from_hamiltonian(
            &ComplexMatrix::from_rows(&[vec![c(0.2, 0.0), c(0.5, -0.3)], vec![c(0.5, 0.3), c(-0.2, 0.0)]]),
            0.9,
        )
        .unwrap();
        let s = su2_to_spin3(&u).unwrap();
        let r = spin_to_rotation(&s).unwrap();
        assert!(r.max_abs_diff(&su2_to_so3(&u).unwrap()) < TOL_EXACT);
    }

    #[test]
    fn su4_identity_and_i() {
        let s = su4_to_spin6(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(s.value(), &CliffordElement::scalar(&euclidean(6), 1.0));
        let s = su4_to_spin6(&ComplexMatrix::identity(4).scale(I)).unwrap();
        assert_eq!(s.value(), &pseudoscalar6().scale(-1.0));
        let r = spin6_to_so6(&s).unwrap();
        assert!(r.max_abs_diff(&RotationMatrix::identity(6).neg()) < TOL_EXACT);
    }

    #[test]
    fn worked_example_gate_coefficients() {
        let s = su4_to_spin6(&worked_example_gate()).unwrap();
        // u_0 = 1/2, u_XZ = i/2, u_YY = −1/2, u_ZX = i/2
        let half = 0.5;
        let sig = euclidean(6);
        let want = &(&CliffordElement::scalar(&sig, half)
            + &CliffordElement::product_of(&sig, &[1, 6]).scale(half))
            + &(&CliffordElement::product_of(&sig, &[3, 4]).scale(half)
                + &(&pseudoscalar6() * &CliffordElement::product_of(&sig, &[2, 5])).scale(-half));
        assert!(s.value().max_abs_diff(&want) < TOL_EXACT, "{}", s.value());
    }

    #[test]
    fn round_trip_on_even_subsystem() {
        let gens = two_line_generators();
        for u in [worked_example_gate(), sample_su4()] {
            let (u, _) = phase_normalize_su4(&u).unwrap();
            let m = dense_image(su4_to_spin6(&u).unwrap().value(), &gens).unwrap();
            for upsilon in [
                ComplexVector::from_vec(vec![ONE, I, ONE, I]).normalized(),
                ComplexVector::from_vec(vec![ONE, -I, -ONE, I]).normalized(),
            ] {
                for col in 0..4 {
                    let psi = ComplexVector::basis(4, col);
                    let lhs = m.apply(&reorder(&psi, &upsilon));
                    let rhs = reorder(&u.apply(&psi), &upsilon);
                    assert!(lhs.max_abs_diff(&rhs) < TOL_COMPOSE);
                }
            }
        }
    }

    #[test]
    fn symbolic_and_trace_paths_agree() {
        for u in [worked_example_gate(), sample_su4()] {
            let s = su4_to_spin6(&u).unwrap();
            let r1 = spin6_to_so6(&s).unwrap();
            let r2 = spin6_to_so6_trace(&s).unwrap();
            assert!(r1.max_abs_diff(&r2) < TOL_COMPOSE);
            assert!(r1.is_rotation(TOL_COMPOSE));
            assert!(r1.max_abs_diff(&spin6_to_so6(&s.neg()).unwrap()) < TOL_EXACT);
        }
    }

    #[test]
    fn composition_order() {
        let u = sample_su4();
        let v = worked_example_gate();
        let r = |m: &ComplexMatrix| spin6_to_so6(&su4_to_spin6(m).unwrap()).unwrap();
        // U applied after V
        let uv = r(&(&u * &v));
        assert!(uv.max_abs_diff(&(&r(&u) * &r(&v))) < TOL_COMPOSE);
        assert!(uv.max_abs_diff(&(&r(&v) * &r(&u))) > 1e-3);
    }

    #[test]
    fn phase_branches() {
        let u = sample_su4();
        let r0 = spin6_to_so6(&su4_to_spin6(&u).unwrap()).unwrap();
        let rm = spin6_to_so6(&su4_to_spin6(&u.scale(-ONE)).unwrap()).unwrap();
        assert!(r0.max_abs_diff(&rm) < TOL_COMPOSE);
        // the ±i branches differ by the pseudoscalar, which negates every vector
        let ri = spin6_to_so6(&su4_to_spin6(&u.scale(I)).unwrap()).unwrap();
        assert!(r0.neg().max_abs_diff(&ri) < TOL_COMPOSE);
    }

    #[test]
    fn su2_path_consistency() {
        let u = unitary_from_hamiltonian(
            &ComplexMatrix::from_rows(&[vec![c(0.4, 0.0), c(0.1, 0.7)], vec![c(0.1, -0.7), c(-0.4, 0.0)]]),
            1.1,
        )
        .unwrap();
        let r3 = su2_to_so3(&u).unwrap();
        let u4 = tensor_product(&u, &ComplexMatrix::identity(2));
        let r6 = spin6_to_so6(&su4_to_spin6(&u4).unwrap()).unwrap();
        let embedded = embed_rotation(&r3, Lines::Single(1), 2).unwrap();
        assert!(embedded.max_abs_diff(&r6) < TOL_COMPOSE);
    }

    #[test]
    fn hamiltonian_images() {
        let zero = ComplexMatrix::zeros(4, 4);
        assert!(hamiltonian_to_bivector(&zero).unwrap().is_zero());
        let h = tensor_product(&sigma(1), &sigma(0));
        let b = hamiltonian_to_bivector(&h).unwrap();
        assert_eq!(b, CliffordElement::product_of(&euclidean(6), &[3, 2]));
        assert!(matches!(
            hamiltonian_to_bivector(&ComplexMatrix::identity(4)),
            Err(Error::NotTraceless { .. })
        ));
    }

    #[test]
    fn exponential_relation() {
        let h = tensor_product(&sigma(1), &sigma(2)).scale(c(0.3, 0.0));
        let h = &h + &tensor_product(&sigma(0), &sigma(3)).scale(c(-0.8, 0.0));
        let tau = 0.6;
        let u = unitary_from_hamiltonian(&h, tau).unwrap();
        let s = su4_to_spin6(&u).unwrap();
        let gens = two_line_generators();
        let b = hamiltonian_to_bivector(&h).unwrap();
        let bm = dense_image(&b, &gens).unwrap().scale(c(tau, 0.0));
        // exp of an anti-Hermitian matrix through its Hermitian generator i·bm
        let herm = bm.scale(I);
        let exp_b = unitary_from_hamiltonian(&herm, 1.0).unwrap();
        let sm = dense_image(s.value(), &gens).unwrap();
        assert!(exp_b.max_abs_diff(&sm) < TOL_COMPOSE);
    }

    #[test]
    fn embedding() {
        assert_eq!(
            embed_rotation(&RotationMatrix::identity(6), Lines::Pair(1, 2), 3).unwrap(),
            RotationMatrix::identity(9)
        );
        let r3 = su2_to_so3(&sigma(2).scale(I)).unwrap();
        let e = embed_rotation(&r3, Lines::Single(2), 3).unwrap();
        for r in 0..9 {
            for col in 0..9 {
                let want = if (3..6).contains(&r) && (3..6).contains(&col) {
                    r3[(r - 3, col - 3)]
                } else if r == col {
                    1.0
                } else {
                    0.0
                };
                assert_eq!(e[(r, col)], want);
            }
        }
        let r6 = spin6_to_so6(&su4_to_spin6(&sample_su4()).unwrap()).unwrap();
        let e = embed_rotation(&r6, Lines::Pair(1, 3), 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(e[(i, 6 + j)], r6[(i, 3 + j)]);
            }
        }
        assert!(embed_rotation(&r6, Lines::Pair(2, 2), 3).is_err());
        assert!(embed_rotation(&r6, Lines::Pair(3, 1), 3).is_err());
        assert!(embed_rotation(&r6, Lines::Pair(1, 4), 3).is_err());
    }

    #[test]
    fn left_block_multiply_matches_full_product() {
        let r6 = spin6_to_so6(&su4_to_spin6(&sample_su4()).unwrap()).unwrap();
        let r6b = spin6_to_so6(&su4_to_spin6(&worked_example_gate()).unwrap()).unwrap();
        let mut acc = embed_rotation(&r6, Lines::Pair(1, 3), 3).unwrap();
        let g = embed_rotation(&r6b, Lines::Pair(2, 3), 3).unwrap();
        let full = &g * &acc;
        acc.left_multiply_block(&Lines::Pair(2, 3).generator_rows(), &r6b);
        assert!(full.max_abs_diff(&acc) < TOL_EXACT);
    }

    #[test]
    fn rotation_about_axis_pi() {
        let u = ComplexMatrix::diagonal(&[Complex64::from_polar(1.0, -PI / 2.0), Complex64::from_polar(1.0, PI / 2.0)]);
        let r = su2_to_so3(&u).unwrap();
        assert!((r[(0, 0)] + 1.0).abs() < TOL_EXACT);
        assert!((r[(2, 2)] - 1.0).abs() < TOL_EXACT);
    }
}
