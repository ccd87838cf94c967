//! Seeded samplers for random matrices, states and group elements.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMat, C64, ZERO};

pub type Rng64 = ChaCha8Rng;

/// Deterministic generator for a seed.
pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `k` derived from a seed.
pub fn substream(seed: u64, k: u64) -> Rng64 {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(k);
    r
}

pub fn gaussian<R: Rng + ?Sized>(r: &mut R) -> f64 {
    r.sample(StandardNormal)
}

/// Standard complex Gaussian with `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(r: &mut R) -> C64 {
    C64::new(gaussian(r), gaussian(r)) * std::f64::consts::FRAC_1_SQRT_2
}

/// Entries uniform in the unit square of the complex plane, centred at 0.
pub fn random_matrix<R: Rng + ?Sized>(r: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
    })
}

pub fn random_hermitian<R: Rng + ?Sized>(r: &mut R, n: usize) -> CMat {
    random_matrix(r, n, n).hermitian_part()
}

/// Density matrix `G G† / Tr(G G†)` with `G` complex Gaussian.
pub fn random_state<R: Rng + ?Sized>(r: &mut R, n: usize) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| complex_gaussian(r));
    let w = &g * &g.adjoint();
    let t = w.trace().re;
    w.scale_re(1.0 / t)
}

/// Unit vector distributed uniformly on the complex sphere.
pub fn haar_pure_state<R: Rng + ?Sized>(r: &mut R, d: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d).map(|_| complex_gaussian(r)).collect();
        let n = crate::linalg::vec_norm(&v);
        if n > 1e-12 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Q factor of a QR decomposition by modified Gram–Schmidt on the columns.
///
/// Gram–Schmidt produces a positive real diagonal in R, which is the phase
/// correction that makes Q Haar distributed when the input is Gaussian.
fn orthonormalize_columns(mut z: CMat) -> CMat {
    let n = z.rows();
    for k in 0..n {
        for j in 0..k {
            let mut dot = ZERO;
            for i in 0..n {
                dot += z[(i, j)].conj() * z[(i, k)];
            }
            for i in 0..n {
                let zij = z[(i, j)];
                z[(i, k)] -= dot * zij;
            }
        }
        let norm = (0..n).map(|i| z[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            z[(i, k)] /= norm;
        }
    }
    z
}

/// Haar-random unitary.
pub fn haar_unitary<R: Rng + ?Sized>(r: &mut R, d: usize) -> CMat {
    orthonormalize_columns(CMat::from_fn(d, d, |_, _| complex_gaussian(r)))
}

/// Haar-random real orthogonal matrix.
pub fn haar_orthogonal<R: Rng + ?Sized>(r: &mut R, d: usize) -> CMat {
    orthonormalize_columns(CMat::from_fn(d, d, |_, _| C64::new(gaussian(r), 0.0)))
}

/// Uniform element of the hyperoctahedral group.
pub fn signed_permutation<R: Rng + ?Sized>(r: &mut R, d: usize) -> CMat {
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(r);
    let mut m = CMat::zeros(d, d);
    for (i, &p) in perm.iter().enumerate() {
        m[(i, p)] = C64::new(if r.random::<bool>() { 1.0 } else { -1.0 }, 0.0);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_unitary(u: &CMat, tol: f64) -> bool {
        (&u.adjoint() * u).approx_eq(&CMat::identity(u.rows()), tol)
    }

    #[test]
    fn samplers_produce_group_elements() {
        let mut r = rng(9);
        for d in 1..6 {
            assert!(is_unitary(&haar_unitary(&mut r, d), 1e-12));
            let o = haar_orthogonal(&mut r, d);
            assert!(is_unitary(&o, 1e-12) && o.data().iter().all(|z| z.im == 0.0));
            let h = signed_permutation(&mut r, d);
            assert!(is_unitary(&h, 0.0));
        }
    }

    #[test]
    fn haar_unitary_first_moment_vanishes() {
        let mut r = rng(10);
        let n = 4000;
        let mut acc = CMat::zeros(3, 3);
        for _ in 0..n {
            acc.add_scaled(C64::new(1.0 / n as f64, 0.0), &haar_unitary(&mut r, 3));
        }
        assert!(acc.max_abs() < 0.06);
    }

    #[test]
    fn states_are_normalized() {
        let mut r = rng(11);
        let s = random_state(&mut r, 5);
        assert!((s.trace().re - 1.0).abs() < 1e-12);
        let v = haar_pure_state(&mut r, 4);
        assert!((crate::linalg::vec_norm(&v) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn seeding_is_deterministic() {
        let a = haar_unitary(&mut rng(5), 3);
        let b = haar_unitary(&mut rng(5), 3);
        assert_eq!(a, b);
        let c = haar_unitary(&mut substream(5, 1), 3);
        assert_ne!(a, c);
    }
}
