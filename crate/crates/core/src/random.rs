//! Seedable random gates, states and circuits for tests and benchmarks.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{phase_normalize, ComplexMatrix, I};
use crate::pauli::{sigma, ProductState, QubitState};
use crate::simulator::{Circuit, Gate};

fn normal_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) / std::f64::consts::SQRT_2
}

/// Haar-random element of SU(2).
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let mut a = [0.0f64; 4];
    loop {
        for x in &mut a {
            *x = rng.sample(StandardNormal);
        }
        let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            a.iter_mut().for_each(|x| *x /= norm);
            break;
        }
    }
    let mut u = ComplexMatrix::identity(2).scale(Complex64::new(a[0], 0.0));
    for j in 1..=3 {
        u = &u + &sigma(j).scale(I * a[j]);
    }
    u
}

/// Haar-random `d × d` unitary from the QR decomposition of a complex
/// Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..d)
        .map(|_| (0..d).map(|_| normal_complex(rng)).collect())
        .collect();
    for k in 0..d {
        // Gram–Schmidt keeps the diagonal of R real and positive
        for _ in 0..2 {
            for p in 0..k {
                let proj: Complex64 = cols[p].iter().zip(&cols[k]).map(|(a, b)| a.conj() * b).sum();
                let prev = cols[p].clone();
                for (x, y) in cols[k].iter_mut().zip(prev) {
                    *x -= proj * y;
                }
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[k].iter_mut().for_each(|z| *z /= norm);
    }
    let mut u = ComplexMatrix::zeros(d, d);
    for (c, col) in cols.iter().enumerate() {
        for (r, &z) in col.iter().enumerate() {
            u[(r, c)] = z;
        }
    }
    u
}

/// Haar-random element of SU(4).
pub fn random_su4<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    phase_normalize(&random_unitary(4, rng))
        .expect("unitary by construction")
        .0
}

/// Uniformly random pure qubit state.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> QubitState {
    let a = normal_complex(rng);
    let b = normal_complex(rng);
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    QubitState::new(a / norm, b / norm).expect("normalized")
}

/// `|0⟩` or `|1⟩` with equal probability.
pub fn random_basis_qubit<R: Rng + ?Sized>(rng: &mut R) -> QubitState {
    if rng.random_bool(0.5) {
        QubitState::one()
    } else {
        QubitState::zero()
    }
}

/// Random product state on `2n` qubits: random primaries, and auxiliaries
/// drawn from `{|0⟩, |1⟩}` when `computational_aux` is set.
pub fn random_product_state<R: Rng + ?Sized>(n: usize, computational_aux: bool, rng: &mut R) -> ProductState {
    let mut qubits = Vec::with_capacity(2 * n);
    for _ in 0..n {
        qubits.push(if computational_aux {
            random_basis_qubit(rng)
        } else {
            random_qubit(rng)
        });
        qubits.push(random_qubit(rng));
    }
    ProductState::new(qubits)
}

/// Random circuit: about a third single-line gates, the rest two-line gates
/// on a random pair `l < m`.
pub fn random_circuit<R: Rng + ?Sized>(n: usize, gates: usize, initial: ProductState, rng: &mut R) -> Circuit {
    let mut c = Circuit::new(n)
        .and_then(|c| c.with_initial(initial))
        .expect("valid circuit");
    for _ in 0..gates {
        let gate = if n == 1 || rng.random_range(0..3) == 0 {
            Gate::single(rng.random_range(1..=n), random_su2(rng))
        } else {
            let l = rng.random_range(1..n);
            let m = rng.random_range(l + 1..=n);
            Gate::two(l, m, random_su4(rng))
        };
        c.push(gate.expect("random gate is valid")).expect("lines in range");
    }
    c
}
