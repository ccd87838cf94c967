//! Dense complex matrices, tensor operations and a Hermitian eigensolver.
//!
//! Tensor factors use the row-major lexicographic convention
//! `|i1 i2 ... ik> = |i1> ⊗ |i2> ⊗ ... ⊗ |ik>`, so the first factor is the
//! most significant digit of a row or column index.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Numerical thresholds shared by every PSD and equality check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative eigenvalue threshold: PSD iff `λ_min ≥ -psd_tol·max(1, ‖x‖_F)`.
    pub psd_tol: f64,
    /// Entrywise equality threshold.
    pub eq_tol: f64,
    /// Jacobi stops once the off-diagonal Frobenius norm is below `jacobi_tol·‖x‖_F`.
    pub jacobi_tol: f64,
    pub max_sweeps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            psd_tol: 1e-9,
            eq_tol: 1e-10,
            jacobi_tol: 1e-13,
            max_sweeps: 100,
        }
    }
}

impl Tolerances {
    pub fn new(psd_tol: f64, eq_tol: f64, jacobi_tol: f64, max_sweeps: usize) -> Result<Self> {
        let t = Tolerances {
            psd_tol,
            eq_tol,
            jacobi_tol,
            max_sweeps,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("psd_tol", self.psd_tol),
            ("eq_tol", self.eq_tol),
            ("jacobi_tol", self.jacobi_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidParameter("max_sweeps must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_psd_tol(mut self, psd_tol: f64) -> Result<Self> {
        self.psd_tol = psd_tol;
        self.validate()?;
        Ok(self)
    }

    pub fn with_eq_tol(mut self, eq_tol: f64) -> Result<Self> {
        self.eq_tol = eq_tol;
        self.validate()?;
        Ok(self)
    }
}

/// Ordered subsystem dimensions annotating a square matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dims(Vec<usize>);

impl Dims {
    pub fn new(factors: impl Into<Vec<usize>>) -> Result<Self> {
        let factors = factors.into();
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::Dimension(format!(
                "subsystem dimensions must be a non-empty list of positive integers, got {factors:?}"
            )));
        }
        let mut total = 1usize;
        for &f in &factors {
            total = total
                .checked_mul(f)
                .ok_or_else(|| Error::SizeOverflow(format!("product of {factors:?}")))?;
        }
        Ok(Dims(factors))
    }

    /// `k` copies of the same local dimension.
    pub fn uniform(d: usize, k: usize) -> Result<Self> {
        Dims::new(vec![d; k])
    }

    pub fn factors(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Place value of factor `k` in a flattened index.
    pub fn stride(&self, k: usize) -> usize {
        self.0[k + 1..].iter().product()
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMat {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| Error::SizeOverflow(format!("{rows}x{cols}")))?;
        if data.len() != len {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {len} entries, got {}",
                data.len()
            )));
        }
        if let Some(z) = data.iter().find(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Format(format!("non-finite matrix entry {z}")));
        }
        Ok(CMat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        CMat {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = f(r, c);
            }
        }
        m
    }

    /// Real matrix from nested rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        CMat::from_fn(n, m, |r, c| C64::new(rows[r][c], 0.0))
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = CMat::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn real_diag(values: &[f64]) -> Self {
        let v: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        CMat::diag(&v)
    }

    /// Matrix unit `e_ij` of size `n×n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        m[(i, j)] = ONE;
        m
    }

    /// Rank-one operator `|u><v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        CMat::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj())
    }

    /// Projector `|v><v|`.
    pub fn projector(v: &[C64]) -> Self {
        CMat::outer(v, v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        CMat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        CMat::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    /// `self += s·other`.
    pub fn add_scaled(&mut self, s: C64, other: &CMat) {
        self.assert_same_shape(other);
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    /// Linear combination `Σ c_i·m_i` of equally shaped matrices.
    pub fn combination(coeffs: &[C64], mats: &[CMat]) -> Self {
        assert_eq!(coeffs.len(), mats.len(), "coefficient count");
        assert!(!mats.is_empty(), "empty combination");
        let mut out = CMat::zeros(mats[0].rows, mats[0].cols);
        for (&c, m) in coeffs.iter().zip(mats) {
            if c != ZERO {
                out.add_scaled(c, m);
            }
        }
        out
    }

    pub fn matmul(&self, other: &CMat) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = CMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Hilbert–Schmidt inner product `Tr(self† other)`.
    pub fn hs_inner(&self, other: &CMat) -> C64 {
        self.assert_same_shape(other);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a.conj() * b)
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        self.assert_same_shape(other);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖x − x†‖_max`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `(x + x†)/2`.
    pub fn hermitian_part(&self) -> Self {
        CMat::from_fn(self.rows, self.cols, |r, c| {
            (self[(r, c)] + self[(c, r)].conj()) * 0.5
        })
    }

    pub fn approx_eq(&self, other: &CMat, tol: f64) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.max_abs_diff(other) <= tol
    }

    fn assert_same_shape(&self, other: &CMat) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        let mut out = self.clone();
        out.add_scaled(ONE, rhs);
        out
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        let mut out = self.clone();
        out.add_scaled(-ONE, rhs);
        out
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        self.matmul(rhs).expect("incompatible matrix product")
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMat, b: &CMat) -> Result<CMat> {
    let rows = a
        .rows
        .checked_mul(b.rows)
        .ok_or_else(|| Error::SizeOverflow(format!("kron rows {}·{}", a.rows, b.rows)))?;
    let cols = a
        .cols
        .checked_mul(b.cols)
        .ok_or_else(|| Error::SizeOverflow(format!("kron cols {}·{}", a.cols, b.cols)))?;
    rows.checked_mul(cols)
        .ok_or_else(|| Error::SizeOverflow(format!("kron size {rows}x{cols}")))?;
    let mut out = CMat::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let s = a[(ar, ac)];
            if s == ZERO {
                continue;
            }
            for br in 0..b.rows {
                let dst = (ar * b.rows + br) * cols + ac * b.cols;
                for (d, &v) in out.data[dst..dst + b.cols].iter_mut().zip(b.row(br)) {
                    *d = s * v;
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of several factors, left to right.
pub fn kron_all(factors: &[&CMat]) -> Result<CMat> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Dimension("kron of an empty list".into()))?;
    rest.iter().try_fold((*first).clone(), |acc, m| kron(&acc, m))
}

fn check_square_dims(x: &CMat, dims: &Dims) -> Result<()> {
    if !x.is_square() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            x.rows, x.cols
        )));
    }
    if dims.total() != x.rows {
        return Err(Error::Dimension(format!(
            "subsystem dimensions {:?} do not multiply to {}",
            dims.factors(),
            x.rows
        )));
    }
    Ok(())
}

/// Transposes the indices of factor `which` only.
pub fn partial_transpose(x: &CMat, dims: &Dims, which: usize) -> Result<CMat> {
    check_square_dims(x, dims)?;
    if which >= dims.len() {
        return Err(Error::Dimension(format!(
            "factor index {which} out of range for {} factors",
            dims.len()
        )));
    }
    let n = x.rows;
    let dk = dims.factors()[which];
    let stride = dims.stride(which);
    let mut out = CMat::zeros(n, n);
    for r in 0..n {
        let rk = (r / stride) % dk;
        for c in 0..n {
            let ck = (c / stride) % dk;
            let nr = r - rk * stride + ck * stride;
            let nc = c - ck * stride + rk * stride;
            out.data[nr * n + nc] = x.data[r * n + c];
        }
    }
    Ok(out)
}

/// Multiplies factor `which` by `u` on the left and `u†` on the right.
pub fn conjugate_factor(x: &CMat, dims: &Dims, which: usize, u: &CMat) -> Result<CMat> {
    check_square_dims(x, dims)?;
    let dk = dims.factors()[which];
    if u.rows != dk || u.cols != dk {
        return Err(Error::Dimension(format!(
            "local operator must be {dk}x{dk}, got {}x{}",
            u.rows, u.cols
        )));
    }
    let n = x.rows;
    let stride = dims.stride(which);
    // Left action on row digits.
    let mut tmp = CMat::zeros(n, n);
    for r in 0..n {
        let rk = (r / stride) % dk;
        let base = r - rk * stride;
        for j in 0..dk {
            let coef = u[(rk, j)];
            if coef == ZERO {
                continue;
            }
            let src = x.row(base + j * stride);
            for (d, &v) in tmp.data[r * n..(r + 1) * n].iter_mut().zip(src) {
                *d += coef * v;
            }
        }
    }
    // Right action by u† on column digits.
    let mut out = CMat::zeros(n, n);
    for r in 0..n {
        let trow = &tmp.data[r * n..(r + 1) * n];
        let orow = &mut out.data[r * n..(r + 1) * n];
        for c in 0..n {
            let ck = (c / stride) % dk;
            let base = c - ck * stride;
            let mut acc = ZERO;
            for j in 0..dk {
                acc += trow[base + j * stride] * u[(ck, j)].conj();
            }
            orow[c] = acc;
        }
    }
    Ok(out)
}

/// Conjugation by `u_1 ⊗ ... ⊗ u_k`, applied factor by factor.
pub fn conjugate_local(x: &CMat, dims: &Dims, locals: &[CMat]) -> Result<CMat> {
    if locals.len() != dims.len() {
        return Err(Error::Dimension(format!(
            "{} local operators for {} factors",
            locals.len(),
            dims.len()
        )));
    }
    let mut out = x.clone();
    for (k, u) in locals.iter().enumerate() {
        out = conjugate_factor(&out, dims, k, u)?;
    }
    Ok(out)
}

fn check_hermitian(x: &CMat, tol: &Tolerances) -> Result<()> {
    if !x.is_square() {
        return Err(Error::Dimension(format!(
            "eigenvalues need a square matrix, got {}x{}",
            x.rows, x.cols
        )));
    }
    let deviation = x.hermiticity_defect();
    if deviation > tol.eq_tol * (1.0 + x.max_abs()) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Connected components of the nonzero pattern of a Hermitian matrix.
fn sparsity_blocks(h: &CMat) -> Vec<Vec<usize>> {
    let n = h.rows;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for r in 0..n {
        for c in r + 1..n {
            if h[(r, c)] != ZERO {
                let (a, b) = (find(&mut parent, r), find(&mut parent, c));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[root]].push(i);
    }
    blocks
}

/// Cyclic Jacobi on a dense Hermitian block stored row-major.
fn jacobi_block(a: &mut [C64], n: usize, stop: f64, max_sweeps: usize) -> Result<()> {
    let off = |a: &[C64]| -> f64 {
        let mut s = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    s += a[r * n + c].norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    loop {
        let off_norm = off(a);
        if off_norm <= stop {
            return Ok(());
        }
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence { sweeps, off_norm });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                // Rotation G on the (p, q) plane: columns p' = c·p − s·e^{-iφ}·q,
                // q' = s·p + c·e^{-iφ}·q; the update is A ← G† A G.
                let gpp = C64::new(cs, 0.0);
                let gqp = -phase.conj() * sn;
                let gpq = C64::new(sn, 0.0);
                let gqq = phase.conj() * cs;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * gpp + akq * gqp;
                    a[k * n + q] = akp * gpq + akq * gqq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = gpp.conj() * apk + gqp.conj() * aqk;
                    a[q * n + k] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = C64::new(a[q * n + q].re, 0.0);
            }
        }
    }
}

/// Ascending eigenvalues of the Hermitian part of `x`.
///
/// The matrix is split into the connected components of its nonzero
/// pattern and each block is diagonalized by cyclic complex Jacobi sweeps.
pub fn herm_eigvals(x: &CMat, tol: &Tolerances) -> Result<Vec<f64>> {
    check_hermitian(x, tol)?;
    let h = x.hermitian_part();
    let stop = tol.jacobi_tol * h.frobenius_norm();
    let mut eigs = Vec::with_capacity(h.rows);
    for block in sparsity_blocks(&h) {
        let m = block.len();
        if m == 1 {
            eigs.push(h[(block[0], block[0])].re);
            continue;
        }
        let mut a: Vec<C64> = Vec::with_capacity(m * m);
        for &r in &block {
            for &c in &block {
                a.push(h[(r, c)]);
            }
        }
        jacobi_block(&mut a, m, stop, tol.max_sweeps)?;
        eigs.extend((0..m).map(|i| a[i * m + i].re));
    }
    eigs.sort_by(f64::total_cmp);
    Ok(eigs)
}

/// Outcome of a PSD test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdCheck {
    pub psd: bool,
    pub min_eig: f64,
}

/// Relative PSD threshold for a matrix of Frobenius norm `norm`.
pub fn psd_threshold(norm: f64, tol: &Tolerances) -> f64 {
    -tol.psd_tol * norm.max(1.0)
}

/// PSD test with threshold `-psd_tol·max(1, ‖x‖_F)`.
pub fn is_psd(x: &CMat, tol: &Tolerances) -> Result<PsdCheck> {
    let eigs = herm_eigvals(x, tol)?;
    let min_eig = eigs[0];
    Ok(PsdCheck {
        psd: min_eig >= psd_threshold(x.frobenius_norm(), tol),
        min_eig,
    })
}

/// Smallest eigenvalue of the Hermitian 2×2 matrix `[[a, b], [conj b, c]]`.
pub fn min_eig_2x2(a: f64, b: C64, c: f64) -> f64 {
    0.5 * (a + c) - (0.25 * (a - c) * (a - c) + b.norm_sqr()).sqrt()
}

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Standard basis vector `|i>` of length `n`.
pub fn basis_vec(n: usize, i: usize) -> Vec<C64> {
    let mut v = vec![ZERO; n];
    v[i] = ONE;
    v
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl Serialize for CMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = MatrixJson::deserialize(d)?;
        let data = m.data.iter().map(|&[r, i]| C64::new(r, i)).collect();
        CMat::new(m.rows, m.cols, data).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMat {
        CMat::from_fn(r, c, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat {
        random_matrix(rng, n, n).hermitian_part()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let k = kron(&CMat::identity(2), &CMat::identity(2)).unwrap();
        assert_eq!(k, CMat::identity(4));
    }

    #[test]
    fn kron_of_units_places_single_entry() {
        let k = kron(&CMat::unit(2, 0, 0), &CMat::unit(2, 1, 1)).unwrap();
        assert_eq!(k, CMat::unit(4, 1, 1));
    }

    #[test]
    fn pauli_x_pair_fixes_bell_vector() {
        let x = CMat::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let xx = kron(&x, &x).unwrap();
        let s = 0.5f64.sqrt();
        let omega = vec![re(s), ZERO, ZERO, re(s)];
        let out = xx.matvec(&omega).unwrap();
        assert!(out.iter().zip(&omega).all(|(a, b)| (a - b).norm() < 1e-15));
    }

    #[test]
    fn kron_overflow_is_reported() {
        // Shape metadata only; the product dimension check fires before allocation.
        let a = CMat {
            rows: usize::MAX / 2,
            cols: 1,
            data: Vec::new(),
        };
        let b = CMat::identity(3);
        assert!(matches!(kron(&a, &b), Err(Error::SizeOverflow(_))));
    }

    #[test]
    fn partial_transpose_of_bell_projector_is_scaled_flip() {
        for d in 2..5 {
            let mut omega = CMat::zeros(d * d, d * d);
            let mut flip = CMat::zeros(d * d, d * d);
            for i in 0..d {
                for j in 0..d {
                    omega[(i * d + i, j * d + j)] = re(1.0 / d as f64);
                    flip[(i * d + j, j * d + i)] = ONE;
                }
            }
            let dims = Dims::uniform(d, 2).unwrap();
            let pt = partial_transpose(&omega, &dims, 1).unwrap();
            assert!(pt.approx_eq(&flip.scale_re(1.0 / d as f64), 1e-15));
        }
    }

    #[test]
    fn partial_transpose_keeps_diagonal_matrices() {
        let x = CMat::real_diag(&(0..12).map(|i| i as f64).collect::<Vec<_>>());
        let dims = Dims::new(vec![2, 3, 2]).unwrap();
        for k in 0..3 {
            assert_eq!(partial_transpose(&x, &dims, k).unwrap(), x);
        }
    }

    #[test]
    fn partial_transpose_rejects_bad_dims() {
        let x = CMat::identity(6);
        assert!(partial_transpose(&x, &Dims::new(vec![2, 2]).unwrap(), 0).is_err());
        assert!(partial_transpose(&x, &Dims::new(vec![2, 3]).unwrap(), 2).is_err());
    }

    #[test]
    fn eigenvalues_of_small_examples() {
        let d = CMat::real_diag(&[3.0, 1.0, 2.0]);
        assert_eq!(herm_eigvals(&d, &tol()).unwrap(), vec![1.0, 2.0, 3.0]);
        let x = CMat::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let e = herm_eigvals(&x, &tol()).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-14 && (e[1] - 1.0).abs() < 1e-14);
    }

    /// Real roots of a monic cubic with three real roots, trigonometric form.
    fn cubic_roots(b: f64, c: f64, d: f64) -> [f64; 3] {
        let p = c - b * b / 3.0;
        let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut r = [0.0; 3];
        for (k, slot) in r.iter_mut().enumerate() {
            *slot = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - b / 3.0;
        }
        r.sort_by(f64::total_cmp);
        r
    }

    #[test]
    fn eigenvalues_match_characteristic_polynomial_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let h = random_hermitian(&mut rng, 3);
            let a = |r, c| h[(r, c)];
            // det(λ − H) = λ³ − tr λ² + e2 λ − det
            let tr = h.trace().re;
            let e2 = (a(0, 0) * a(1, 1) + a(0, 0) * a(2, 2) + a(1, 1) * a(2, 2)
                - a(0, 1) * a(1, 0)
                - a(0, 2) * a(2, 0)
                - a(1, 2) * a(2, 1))
            .re;
            let det = (a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)))
            .re;
            let roots = cubic_roots(-tr, e2, -det);
            let eigs = herm_eigvals(&h, &tol()).unwrap();
            for (e, r) in eigs.iter().zip(roots) {
                assert!((e - r).abs() < 1e-10, "{eigs:?} vs {roots:?}");
            }
        }
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let x = CMat::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(matches!(
            herm_eigvals(&x, &tol()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn sweep_limit_reports_numerical_failure() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_hermitian(&mut rng, 8);
        let t = Tolerances::new(1e-9, 1e-10, 1e-15, 1).unwrap();
        let err = herm_eigvals(&h, &t).unwrap_err();
        assert!(err.is_numerical());
    }

    #[test]
    fn psd_examples() {
        let c = is_psd(&CMat::identity(4), &tol()).unwrap();
        assert!(c.psd && (c.min_eig - 1.0).abs() < 1e-15);
        let c = is_psd(&CMat::real_diag(&[1.0, -1e-3]), &tol()).unwrap();
        assert!(!c.psd && (c.min_eig + 1e-3).abs() < 1e-15);
        let d = 3;
        let mut sym = CMat::identity(d * d);
        for i in 0..d {
            for j in 0..d {
                sym[(i * d + j, j * d + i)] += ONE;
            }
        }
        let c = is_psd(&sym.scale_re(0.5), &tol()).unwrap();
        assert!(c.psd && c.min_eig.abs() < 1e-12);
    }

    #[test]
    fn block_split_matches_dense_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_hermitian(&mut rng, 3);
        let b = random_hermitian(&mut rng, 4);
        let mut m = CMat::zeros(7, 7);
        let perm = [5, 0, 3, 6, 1, 4, 2];
        for r in 0..3 {
            for c in 0..3 {
                m[(perm[r], perm[c])] = a[(r, c)];
            }
        }
        for r in 0..4 {
            for c in 0..4 {
                m[(perm[3 + r], perm[3 + c])] = b[(r, c)];
            }
        }
        let mut expect = herm_eigvals(&a, &tol()).unwrap();
        expect.extend(herm_eigvals(&b, &tol()).unwrap());
        expect.sort_by(f64::total_cmp);
        let got = herm_eigvals(&m, &tol()).unwrap();
        for (x, y) in got.iter().zip(&expect) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn conjugate_local_matches_kron() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let dims = Dims::new(vec![2, 3, 2]).unwrap();
        let x = random_matrix(&mut rng, 12, 12);
        let us: Vec<CMat> = dims
            .factors()
            .iter()
            .map(|&d| random_matrix(&mut rng, d, d))
            .collect();
        let u = kron_all(&[&us[0], &us[1], &us[2]]).unwrap();
        let expect = &(&u * &x) * &u.adjoint();
        let got = conjugate_local(&x, &dims, &us).unwrap();
        assert!(got.approx_eq(&expect, 1e-12));
    }

    #[test]
    fn matrix_json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random_matrix(&mut rng, 2, 3);
        let s = serde_json::to_string(&x).unwrap();
        let back: CMat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<CMat>(r#"{"rows":2,"cols":2,"data":[[1,0]]}"#).is_err());
    }
}
