//! Real Clifford algebras with blades stored as bit masks.
//!
//! Generator `e_a` (1-based) is bit `a − 1`. A blade is always kept in
//! ascending generator order; reordering signs live in the coefficient.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::{RealSpan, TOL_COMPOSE, TOL_EXACT};

/// Pivot threshold for Lie-closure rank accumulation.
pub const CLOSURE_PIVOT: f64 = 1e-9;

/// Product of distinct generators in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blade(pub u64);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    /// Blade from 1-based generator indices, which must be distinct.
    /// Returns the blade and the sign of sorting the indices.
    pub fn from_indices(indices: &[usize]) -> (Blade, f64) {
        let mut mask = 0u64;
        let mut sign = 1.0;
        for &a in indices {
            let bit = 1u64 << (a - 1);
            assert!(mask & bit == 0, "repeated generator {a}");
            // moving e_a left past every larger generator already present
            if (mask >> a).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= bit;
        }
        (Blade(mask), sign)
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    /// 1-based generator indices in ascending order.
    pub fn indices(self) -> Vec<usize> {
        (0..64)
            .filter(|&b| self.0 >> b & 1 == 1)
            .map(|b| b + 1)
            .collect()
    }

    pub fn contains(self, a: usize) -> bool {
        self.0 >> (a - 1) & 1 == 1
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        write!(f, "e")?;
        let idx = self.indices();
        let wide = idx.iter().any(|&a| a > 9);
        for (k, a) in idx.iter().enumerate() {
            if wide && k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Sign of `a·b` for canonical blades: transpositions needed to merge the
/// factors times the squares of repeated generators.
pub fn blade_product_sign(a: Blade, b: Blade, signature: &[i8]) -> f64 {
    let mut swaps = 0u32;
    let mut rest = a.0 >> 1;
    while rest != 0 {
        swaps += (rest & b.0).count_ones();
        rest >>= 1;
    }
    let mut sign = if swaps.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut common = a.0 & b.0;
    while common != 0 {
        let bit = common.trailing_zeros() as usize;
        if signature[bit] < 0 {
            sign = -sign;
        }
        common &= common - 1;
    }
    sign
}

/// Element of a real Clifford algebra `Cl(p, q)` with sparse blade terms.
#[derive(Clone, PartialEq)]
pub struct CliffordElement {
    signature: Vec<i8>,
    terms: BTreeMap<Blade, f64>,
}

impl CliffordElement {
    /// Zero element; `signature[a − 1]` is the square of `e_a`.
    pub fn zero(signature: &[i8]) -> Self {
        assert!(signature.len() <= 64, "at most 64 generators");
        assert!(signature.iter().all(|&s| s == 1 || s == -1));
        Self {
            signature: signature.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(signature: &[i8], x: f64) -> Self {
        Self::blade(signature, Blade::SCALAR, x)
    }

    pub fn blade(signature: &[i8], blade: Blade, coeff: f64) -> Self {
        let mut out = Self::zero(signature);
        out.add_term(blade, coeff);
        out
    }

    /// Generator `e_a`, 1-based.
    pub fn generator(signature: &[i8], a: usize) -> Self {
        assert!(a >= 1 && a <= signature.len());
        Self::blade(signature, Blade(1 << (a - 1)), 1.0)
    }

    /// Product `e_{a₁} e_{a₂} …` of distinct generators in the given order.
    pub fn product_of(signature: &[i8], indices: &[usize]) -> Self {
        let (blade, sign) = Blade::from_indices(indices);
        Self::blade(signature, blade, sign)
    }

    pub fn signature(&self) -> &[i8] {
        &self.signature
    }

    pub fn num_generators(&self) -> usize {
        self.signature.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, f64)> + '_ {
        self.terms.iter().map(|(&b, &c)| (b, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, blade: Blade) -> f64 {
        self.terms.get(&blade).copied().unwrap_or(0.0)
    }

    pub fn scalar_part(&self) -> f64 {
        self.coefficient(Blade::SCALAR)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|b| b.grade() % 2 == 0)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &CliffordElement) -> f64 {
        (self - other)
            .terms
            .values()
            .map(|c| c.abs())
            .fold(0.0, f64::max)
    }

    pub fn grade_part(&self, grade: u32) -> Self {
        Self {
            signature: self.signature.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.grade() == grade)
                .map(|(&b, &c)| (b, c))
                .collect(),
        }
    }

    pub fn add_term(&mut self, blade: Blade, coeff: f64) {
        assert!(
            blade.0 >> self.signature.len() == 0,
            "blade {blade} outside algebra"
        );
        let entry = self.terms.entry(blade).or_insert(0.0);
        *entry += coeff;
        if entry.abs() < TOL_EXACT {
            self.terms.remove(&blade);
        }
    }

    pub fn scale(&self, x: f64) -> Self {
        let mut out = Self::zero(&self.signature);
        for (&b, &c) in &self.terms {
            out.add_term(b, c * x);
        }
        out
    }

    pub fn reversal(&self) -> Self {
        reversal(self)
    }

    pub fn try_mul(&self, other: &CliffordElement) -> Result<CliffordElement> {
        geometric_product(self, other)
    }

    pub fn bracket(&self, other: &CliffordElement) -> Result<CliffordElement> {
        Ok(&geometric_product(self, other)? - &geometric_product(other, self)?)
    }

    fn check_signature(&self, other: &CliffordElement) -> Result<()> {
        if self.signature == other.signature {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " {} ", if *c < 0.0 { '-' } else { '+' })?;
                write!(f, "{}", c.abs())?;
            } else {
                write!(f, "{c}")?;
            }
            if b.0 != 0 {
                write!(f, "·{b}")?;
            }
        }
        Ok(())
    }
}

/// Bilinear geometric product.
pub fn geometric_product(a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement> {
    a.check_signature(b)?;
    let mut out = CliffordElement::zero(&a.signature);
    let mut acc: BTreeMap<Blade, f64> = BTreeMap::new();
    for (&ba, &ca) in &a.terms {
        for (&bb, &cb) in &b.terms {
            let sign = blade_product_sign(ba, bb, &a.signature);
            *acc.entry(Blade(ba.0 ^ bb.0)).or_insert(0.0) += sign * ca * cb;
        }
    }
    acc.retain(|_, c| c.abs() >= TOL_EXACT);
    out.terms = acc;
    Ok(out)
}

/// Reversal antiautomorphism: grade-g blades pick up `(−1)^{g(g−1)/2}`.
pub fn reversal(a: &CliffordElement) -> CliffordElement {
    CliffordElement {
        signature: a.signature.clone(),
        terms: a
            .terms
            .iter()
            .map(|(&b, &c)| {
                let g = b.grade();
                let flip = (g * g.saturating_sub(1) / 2) % 2 == 1;
                (b, if flip { -c } else { c })
            })
            .collect(),
    }
}

/// `S̃ / λ` where `S S̃ = λ`.
pub fn versor_inverse(s: &CliffordElement) -> Result<CliffordElement> {
    let rev = reversal(s);
    let norm = geometric_product(s, &rev)?;
    let lambda = norm.scalar_part();
    let residue = (&norm - &CliffordElement::scalar(s.signature(), lambda)).coefficient_norm();
    if lambda.abs() <= TOL_EXACT || residue > TOL_COMPOSE * lambda.abs().max(1.0) {
        return Err(Error::NotInvertible(lambda));
    }
    Ok(rev.scale(1.0 / lambda))
}

impl Add for &CliffordElement {
    type Output = CliffordElement;

    fn add(self, rhs: &CliffordElement) -> CliffordElement {
        assert_eq!(self.signature, rhs.signature, "signature mismatch");
        let mut out = self.clone();
        for (&b, &c) in &rhs.terms {
            out.add_term(b, c);
        }
        out
    }
}

impl Sub for &CliffordElement {
    type Output = CliffordElement;

    fn sub(self, rhs: &CliffordElement) -> CliffordElement {
        assert_eq!(self.signature, rhs.signature, "signature mismatch");
        let mut out = self.clone();
        for (&b, &c) in &rhs.terms {
            out.add_term(b, -c);
        }
        out
    }
}

impl Neg for &CliffordElement {
    type Output = CliffordElement;

    fn neg(self) -> CliffordElement {
        self.scale(-1.0)
    }
}

/// Panics on signature mismatch; see [`geometric_product`].
impl Mul for &CliffordElement {
    type Output = CliffordElement;

    fn mul(self, rhs: &CliffordElement) -> CliffordElement {
        geometric_product(self, rhs).expect("signature mismatch")
    }
}

/// Even, versor-normalized element: `S S̃ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinElement(CliffordElement);

impl SpinElement {
    pub fn new(value: CliffordElement) -> Result<Self> {
        if let Some((b, _)) = value.terms().find(|(b, _)| b.grade() % 2 == 1) {
            return Err(Error::NotEven(b.grade()));
        }
        let norm = &value * &reversal(&value);
        let one = CliffordElement::scalar(value.signature(), 1.0);
        if norm.max_abs_diff(&one) > TOL_COMPOSE {
            return Err(Error::NotInvertible(norm.scalar_part()));
        }
        Ok(Self(value))
    }

    pub fn identity(signature: &[i8]) -> Self {
        Self(CliffordElement::scalar(signature, 1.0))
    }

    pub fn value(&self) -> &CliffordElement {
        &self.0
    }

    pub fn into_value(self) -> CliffordElement {
        self.0
    }

    pub fn inverse(&self) -> SpinElement {
        SpinElement(versor_inverse(&self.0).expect("spin elements are invertible"))
    }

    pub fn neg(&self) -> SpinElement {
        SpinElement(-&self.0)
    }

    /// `S⁻¹ v S`.
    pub fn conjugate(&self, v: &CliffordElement) -> CliffordElement {
        &(&self.inverse().0 * v) * &self.0
    }
}

/// Signature of `Cl₊(m)`.
pub fn euclidean(m: usize) -> Vec<i8> {
    vec![1; m]
}

/// Index of the pair `(i, j)`, `1 <= i < j <= m`, in lexicographic order.
fn pair_index(i: usize, j: usize, m: usize) -> usize {
    (i - 1) * (2 * m - i) / 2 + (j - i - 1)
}

fn bivector_coords(x: &CliffordElement) -> Vec<f64> {
    let m = x.num_generators();
    let mut v = vec![0.0; m * (m - 1) / 2];
    for (b, c) in x.terms() {
        let idx = b.indices();
        v[pair_index(idx[0], idx[1], m)] = c;
    }
    v
}

/// Dimension of the Lie algebra generated by bivectors under `[a, b] = ab − ba`.
pub fn bivector_closure_dim(generators: &[CliffordElement], m: usize) -> Result<usize> {
    for g in generators {
        if g.num_generators() != m {
            return Err(Error::SignatureMismatch);
        }
        if let Some((b, _)) = g.terms().find(|(b, _)| b.grade() != 2) {
            return Err(Error::NotBivector(b.grade()));
        }
    }
    let mut span = RealSpan::new(m * (m.max(1) - 1) / 2, CLOSURE_PIVOT);
    let mut queue = VecDeque::new();
    for g in generators {
        if span.insert(&bivector_coords(g)) {
            queue.push_back(g.scale(1.0 / g.coefficient_norm()));
        }
    }
    // right-normed brackets [g, [g', …]] span the generated algebra
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let c = g.bracket(&x)?;
            if c.is_zero() {
                continue;
            }
            if span.insert(&bivector_coords(&c)) {
                queue.push_back(c.scale(1.0 / c.coefficient_norm()));
            }
        }
    }
    Ok(span.rank())
}

/// Flat generator index of `e_ν^{(l)}`: `3(l − 1) + ν`.
pub fn line_generator_index(line: usize, nu: usize) -> usize {
    3 * (line - 1) + nu
}

/// Bivectors generating one-line gates on every line and two-line gates on
/// neighbouring lines, in `Cl₊(3n)`.
pub fn gate_algebra_generators(n: usize) -> Vec<CliffordElement> {
    let sig = euclidean(3 * n);
    let mut out = Vec::new();
    for l in 1..=n {
        for (a, b) in [(2, 3), (3, 1), (1, 2)] {
            out.push(CliffordElement::product_of(
                &sig,
                &[line_generator_index(l, a), line_generator_index(l, b)],
            ));
        }
    }
    for l in 1..n {
        for j in 1..=3 {
            for k in 1..=3 {
                out.push(CliffordElement::product_of(
                    &sig,
                    &[line_generator_index(l, j), line_generator_index(l + 1, k)],
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(sig: &[i8], idx: &[usize]) -> CliffordElement {
        CliffordElement::product_of(sig, idx)
    }

    #[test]
    fn generator_squares() {
        let sig = euclidean(3);
        let e1 = e(&sig, &[1]);
        assert_eq!(&e1 * &e1, CliffordElement::scalar(&sig, 1.0));
        let neg = vec![-1i8; 3];
        let f1 = e(&neg, &[1]);
        assert_eq!(&f1 * &f1, CliffordElement::scalar(&neg, -1.0));
    }

    #[test]
    fn anticommutation() {
        let sig = euclidean(4);
        let e1 = e(&sig, &[1]);
        let e2 = e(&sig, &[2]);
        assert!((&(&e1 * &e2) + &(&e2 * &e1)).is_zero());
    }

    #[test]
    fn bivector_chain() {
        let sig = euclidean(3);
        let p = &e(&sig, &[1, 2]) * &e(&sig, &[2, 3]);
        assert_eq!(p, e(&sig, &[1, 3]));
    }

    #[test]
    fn from_indices_sign() {
        let (b, s) = Blade::from_indices(&[3, 1]);
        assert_eq!(b, Blade(0b101));
        assert_eq!(s, -1.0);
        let (_, s) = Blade::from_indices(&[2, 3, 1]);
        assert_eq!(s, 1.0);
    }

    #[test]
    fn reversal_signs() {
        let sig = euclidean(4);
        let one = CliffordElement::scalar(&sig, 1.0);
        assert_eq!(reversal(&one), one);
        let e12 = e(&sig, &[1, 2]);
        assert_eq!(reversal(&e12), -&e12);
        let e1234 = e(&sig, &[1, 2, 3, 4]);
        assert_eq!(reversal(&e1234), e1234);
        // antiautomorphism on the factors
        let a = &e(&sig, &[1]) + &e(&sig, &[2, 3]);
        let b = &e(&sig, &[3, 4]) + &e(&sig, &[1, 2, 4]);
        assert_eq!(reversal(&(&a * &b)), &reversal(&b) * &reversal(&a));
    }

    #[test]
    fn versor_inverse_examples() {
        let sig = euclidean(3);
        let one = CliffordElement::scalar(&sig, 1.0);
        assert_eq!(versor_inverse(&one).unwrap(), one);
        let e12 = e(&sig, &[1, 2]);
        assert_eq!(versor_inverse(&e12).unwrap(), -&e12);
        let zero = CliffordElement::zero(&sig);
        assert!(matches!(versor_inverse(&zero), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn spin_element_validation() {
        let sig = euclidean(3);
        assert!(matches!(
            SpinElement::new(e(&sig, &[1])),
            Err(Error::NotEven(1))
        ));
        assert!(SpinElement::new(e(&sig, &[1, 2]).scale(2.0)).is_err());
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let s = &CliffordElement::scalar(&sig, c) + &e(&sig, &[1, 2]).scale(c);
        assert!(SpinElement::new(s).is_ok());
    }

    #[test]
    fn signature_mismatch() {
        let a = CliffordElement::scalar(&euclidean(2), 1.0);
        let b = CliffordElement::scalar(&euclidean(3), 1.0);
        assert_eq!(geometric_product(&a, &b), Err(Error::SignatureMismatch));
    }

    #[test]
    fn closure_small_tables() {
        assert_eq!(bivector_closure_dim(&gate_algebra_generators(1), 3).unwrap(), 3);
        assert_eq!(bivector_closure_dim(&gate_algebra_generators(2), 6).unwrap(), 15);
        assert_eq!(bivector_closure_dim(&gate_algebra_generators(3), 9).unwrap(), 36);
    }

    #[test]
    fn closure_of_commuting_pair() {
        let sig = euclidean(4);
        let gens = [e(&sig, &[1, 2]), e(&sig, &[3, 4])];
        assert_eq!(bivector_closure_dim(&gens, 4).unwrap(), 2);
        let bad = [e(&sig, &[1, 2, 3, 4])];
        assert!(matches!(
            bivector_closure_dim(&bad, 4),
            Err(Error::NotBivector(4))
        ));
    }

    #[test]
    fn block_brackets_in_cl9() {
        let sig = euclidean(9);
        let g = |l: usize, nu: usize| line_generator_index(l, nu);
        for j in 1..=3 {
            for k in 1..=3 {
                for jp in 1..=3 {
                    for kp in 1..=3 {
                        let a = e(&sig, &[g(1, j), g(2, k)]);
                        let b = e(&sig, &[g(2, jp), g(3, kp)]);
                        let c = a.bracket(&b).unwrap();
                        if k != jp {
                            assert!(c.is_zero());
                        } else {
                            // 2 e_j^{(1)} e_{k'}^{(3)}
                            assert_eq!(c, e(&sig, &[g(1, j), g(3, kp)]).scale(2.0));
                        }
                    }
                }
            }
        }
    }
}
