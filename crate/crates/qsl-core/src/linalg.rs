//! Minimal dense complex linear algebra for small Hermitian problems.
//!
//! Everything here operates on square matrices: Kronecker products for
//! assembling multi-qubit operators, a cyclic Jacobi eigensolver for
//! Hermitian matrices, and the unitary propagator `exp(-i H t)` built from
//! that eigendecomposition. Dimensions are 2..8 for gate work and up to a
//! few hundred for chain models; nothing is tuned beyond that.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Sub};

// CMatrix carries no serde derives; external exchange goes through the
// explicit [re, im] nested-array JSON form below.

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Jacobi sweep cap; quadratic convergence makes this generous.
const JACOBI_MAX_SWEEPS: usize = 100;
/// Absolute off-diagonal Frobenius norm target for the eigensolver.
const JACOBI_OFF_TARGET: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian (max |H - H^dag| entry {0:.3e})")]
    NotHermitian(f64),
    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps (off-norm {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("qubit index {index} out of range 1..={n}")]
    QubitIndexOutOfRange { index: usize, n: usize },
}

/// Dense square complex matrix, row-major storage.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Build from a row-major slice of length dim*dim.
    pub fn from_rows(dim: usize, entries: &[C64]) -> Self {
        assert_eq!(entries.len(), dim * dim, "need dim*dim entries");
        Self {
            dim,
            data: entries.to_vec(),
        }
    }

    /// Build from real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), dim * dim, "need dim*dim entries");
        Self {
            dim,
            data: entries.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude of H - H^dag.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                let d = (self[(r, c)] - self[(c, r)].conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let n = self.dim;
        let gram = self.dagger().mul_ref(self);
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                let expect = if r == c { ONE } else { ZERO };
                let d = (gram[(r, c)] - expect).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst <= tol
    }

    /// `self * rhs` without consuming either operand.
    pub fn mul_ref(&self, rhs: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim);
        self.mul_into(rhs, &mut out);
        out
    }

    /// `out = self * rhs`, reusing out's storage.
    pub fn mul_into(&self, rhs: &CMatrix, out: &mut CMatrix) {
        let n = self.dim;
        assert_eq!(n, rhs.dim, "dimension mismatch in matrix product");
        assert_eq!(n, out.dim, "output dimension mismatch");
        for r in 0..n {
            let arow = &self.data[r * n..(r + 1) * n];
            let orow = &mut out.data[r * n..(r + 1) * n];
            orow.fill(ZERO);
            for (k, &a) in arow.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let brow = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in orow.iter_mut().zip(brow.iter()) {
                    *o += a * b;
                }
            }
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        assert_eq!(v.len(), n, "vector length mismatch");
        let mut out = vec![ZERO; n];
        for r in 0..n {
            let mut acc = ZERO;
            for (c, &x) in v.iter().enumerate() {
                acc += self.data[r * n + c] * x;
            }
            out[r] = acc;
        }
        out
    }

    /// Sum of entrywise products Tr(self * rhs) computed without forming the product.
    pub fn trace_of_product(&self, rhs: &CMatrix) -> C64 {
        let n = self.dim;
        assert_eq!(n, rhs.dim, "dimension mismatch in trace of product");
        let mut acc = ZERO;
        for r in 0..n {
            for c in 0..n {
                acc += self.data[r * n + c] * rhs.data[c * n + r];
            }
        }
        acc
    }

    pub fn add_scaled(&mut self, rhs: &CMatrix, s: f64) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a += b * s;
        }
    }

    /// Nested [[re, im], ...] rows for JSON export.
    pub fn to_json_value(&self) -> serde_json::Value {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.dim)
            .map(|r| self.row(r).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        serde_json::json!(rows)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.mul_ref(rhs)
    }
}

/// Pauli axis selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

/// The 2x2 Pauli matrix for `axis`.
pub fn pauli(axis: Axis) -> CMatrix {
    let i = C64::new(0.0, 1.0);
    match axis {
        Axis::X => CMatrix::from_rows(2, &[ZERO, ONE, ONE, ZERO]),
        Axis::Y => CMatrix::from_rows(2, &[ZERO, -i, i, ZERO]),
        Axis::Z => CMatrix::from_rows(2, &[ONE, ZERO, ZERO, -ONE]),
    }
}

/// Kronecker product; the left factor is the most significant (qubit 1).
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut out = CMatrix::zeros(n);
    for ra in 0..na {
        for ca in 0..na {
            let x = a[(ra, ca)];
            if x == ZERO {
                continue;
            }
            for rb in 0..nb {
                for cb in 0..nb {
                    out[(ra * nb + rb, ca * nb + cb)] = x * b[(rb, cb)];
                }
            }
        }
    }
    out
}

/// I x .. x sigma_axis x .. x I with the Pauli at 1-based position `qubit_index`
/// of an `n`-qubit register (qubit 1 = leftmost tensor factor).
pub fn pauli_embed(axis: Axis, qubit_index: usize, n: usize) -> Result<CMatrix, LinalgError> {
    if qubit_index == 0 || qubit_index > n {
        return Err(LinalgError::QubitIndexOutOfRange {
            index: qubit_index,
            n,
        });
    }
    let mut out = CMatrix::identity(1);
    for q in 1..=n {
        let factor = if q == qubit_index {
            pauli(axis)
        } else {
            CMatrix::identity(2)
        };
        out = kron(&out, &factor);
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the unitary whose columns are
/// the corresponding eigenvectors, so `h = Q diag(vals) Q^dag`.
pub fn eig_hermitian(h: &CMatrix) -> Result<(Vec<f64>, CMatrix), LinalgError> {
    let defect = h.hermiticity_defect();
    let scale = h.frobenius_norm().max(1.0);
    if defect > 1e-10 * scale {
        return Err(LinalgError::NotHermitian(defect));
    }
    let n = h.dim;
    let mut a = h.clone();
    // Symmetrize exactly so rounding in the input cannot bias the sweep.
    for r in 0..n {
        a[(r, r)] = C64::new(a[(r, r)].re, 0.0);
        for c in (r + 1)..n {
            let avg = (a[(r, c)] + a[(c, r)].conj()) * 0.5;
            a[(r, c)] = avg;
            a[(c, r)] = avg.conj();
        }
    }
    let mut q = CMatrix::identity(n);

    if n == 1 {
        return Ok((vec![a[(0, 0)].re], q));
    }

    // The off-norm target is absolute at unit scale; for larger norms the
    // rounding floor of the rotations themselves forces a relative target.
    let target = JACOBI_OFF_TARGET * h.frobenius_norm().max(1.0);
    // Entries below this cannot lift the off-norm above target even if every
    // off-diagonal slot held one.
    let skip = target / (2.0 * n as f64);
    let mut converged = false;
    let mut off = off_norm(&a);
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for qq in (p + 1)..n {
                jacobi_rotate(&mut a, &mut q, p, qq, skip);
            }
        }
        off = off_norm(&a);
    }
    if !converged && off > target {
        return Err(LinalgError::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            off,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let vals: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());
    let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let mut vecs = CMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vecs[(r, new_col)] = q[(r, old_col)];
        }
    }
    Ok((sorted_vals, vecs))
}

fn off_norm(a: &CMatrix) -> f64 {
    let n = a.dim;
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One two-sided Jacobi rotation zeroing A[p][q], accumulating into Q.
fn jacobi_rotate(a: &mut CMatrix, q: &mut CMatrix, p: usize, qq: usize, skip: f64) {
    let apq = a[(p, qq)];
    let r = apq.norm();
    if r <= skip {
        return;
    }
    let w = apq / r; // unit phase of the pivot
    let app = a[(p, p)].re;
    let aqq = a[(qq, qq)].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // G is identity except G[p][p]=c*w, G[p][q]=s*w, G[q][p]=-s, G[q][q]=c;
    // update A <- G^dag A G and Q <- Q G.
    let n = a.dim;
    let cw = w * c;
    let sw = w * s;
    // Columns: (A G) restricted to columns p, q.
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, qq)];
        a[(k, p)] = akp * cw - akq * s;
        a[(k, qq)] = akp * sw + akq * c;
    }
    // Rows: G^dag (A G) restricted to rows p, q.
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(qq, k)];
        a[(p, k)] = apk * cw.conj() - aqk * s;
        a[(qq, k)] = apk * sw.conj() + aqk * c;
    }
    // Clean up rounding on the pivot pair.
    a[(p, qq)] = ZERO;
    a[(qq, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(qq, qq)] = C64::new(a[(qq, qq)].re, 0.0);
    for k in 0..n {
        let vkp = q[(k, p)];
        let vkq = q[(k, qq)];
        q[(k, p)] = vkp * cw - vkq * s;
        q[(k, qq)] = vkp * sw + vkq * c;
    }
}

/// Unitary propagator exp(-i h t) for Hermitian h, via eigendecomposition.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> Result<CMatrix, LinalgError> {
    let (vals, q) = eig_hermitian(h)?;
    Ok(expm_from_eig(&vals, &q, t))
}

/// exp(-i h t) assembled from a precomputed eigendecomposition of h.
pub fn expm_from_eig(vals: &[f64], q: &CMatrix, t: f64) -> CMatrix {
    let n = q.dim;
    let mut out = CMatrix::zeros(n);
    expm_from_eig_into(vals, q, t, &mut out);
    out
}

/// As `expm_from_eig`, writing into caller storage.
pub fn expm_from_eig_into(vals: &[f64], q: &CMatrix, t: f64, out: &mut CMatrix) {
    let n = q.dim;
    debug_assert_eq!(vals.len(), n);
    let phases: Vec<C64> = vals
        .iter()
        .map(|&lam| C64::from_polar(1.0, -lam * t))
        .collect();
    // out = Q diag(phases) Q^dag, assembled column-by-column.
    for r in 0..n {
        for c in 0..n {
            let mut acc = ZERO;
            for k in 0..n {
                acc += q[(r, k)] * phases[k] * q[(c, k)].conj();
            }
            out[(r, c)] = acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &CMatrix, b: &CMatrix, tol: f64) {
        assert_eq!(a.dim(), b.dim());
        let d = (a - b).frobenius_norm();
        assert!(d <= tol, "matrices differ by {d:.3e} (tol {tol:.1e})\n{a:?}\n{b:?}");
    }

    #[test]
    fn kron_identities() {
        let i2 = CMatrix::identity(2);
        assert_close(&kron(&i2, &i2), &CMatrix::identity(4), 0.0);

        let zz = kron(&pauli(Axis::Z), &pauli(Axis::Z));
        let expect = CMatrix::diagonal(&[ONE, -ONE, -ONE, ONE]);
        assert_close(&zz, &expect, 0.0);
    }

    #[test]
    fn kron_bit_flip_on_qubit_one() {
        // sigma_x on qubit 1 maps |00> -> |10>.
        let op = kron(&pauli(Axis::X), &CMatrix::identity(2));
        let ket00 = [ONE, ZERO, ZERO, ZERO];
        let out = op.apply(&ket00);
        assert_eq!(out[2], ONE);
        assert!(out.iter().enumerate().all(|(i, z)| i == 2 || z.norm() == 0.0));
    }

    #[test]
    fn pauli_embed_examples() {
        let z1 = pauli_embed(Axis::Z, 1, 1).unwrap();
        assert_close(&z1, &pauli(Axis::Z), 0.0);

        let x2 = pauli_embed(Axis::X, 2, 2).unwrap();
        assert_close(&x2, &kron(&CMatrix::identity(2), &pauli(Axis::X)), 0.0);

        let z2of3 = pauli_embed(Axis::Z, 2, 3).unwrap();
        let diag: Vec<C64> = [1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0]
            .iter()
            .map(|&x| C64::new(x, 0.0))
            .collect();
        assert_close(&z2of3, &CMatrix::diagonal(&diag), 0.0);
    }

    #[test]
    fn pauli_embed_rejects_bad_index() {
        assert!(matches!(
            pauli_embed(Axis::X, 0, 2),
            Err(LinalgError::QubitIndexOutOfRange { .. })
        ));
        assert!(matches!(
            pauli_embed(Axis::X, 3, 2),
            Err(LinalgError::QubitIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn eig_pauli_z_and_x() {
        let (vals, _) = eig_hermitian(&pauli(Axis::Z)).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);

        let (vals, q) = eig_hermitian(&pauli(Axis::X)).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        // Eigenvectors (|0> -+ |1>)/sqrt(2) up to phase: check residual columns.
        for (j, &lam) in vals.iter().enumerate() {
            let col: Vec<C64> = (0..2).map(|r| q[(r, j)]).collect();
            let hv = pauli(Axis::X).apply(&col);
            for r in 0..2 {
                assert!((hv[r] - col[r] * lam).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eig_degenerate_diagonal() {
        // 2J sigma_z x sigma_z at J = 0.01: eigenvalues -0.02, 0.02 each twice.
        let h = kron(&pauli(Axis::Z), &pauli(Axis::Z)).scale(C64::new(0.02, 0.0));
        let (vals, _) = eig_hermitian(&h).unwrap();
        assert!((vals[0] + 0.02).abs() < 1e-14);
        assert!((vals[1] + 0.02).abs() < 1e-14);
        assert!((vals[2] - 0.02).abs() < 1e-14);
        assert!((vals[3] - 0.02).abs() < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let mut m = CMatrix::identity(2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(eig_hermitian(&m), Err(LinalgError::NotHermitian(_))));
        assert!(matches!(
            expm_hermitian(&m, 1.0),
            Err(LinalgError::NotHermitian(_))
        ));
    }

    #[test]
    fn expm_examples() {
        use std::f64::consts::PI;
        // exp(-i sigma_z pi/2) = diag(-i, i)
        let u = expm_hermitian(&pauli(Axis::Z), PI / 2.0).unwrap();
        let i = C64::new(0.0, 1.0);
        assert_close(&u, &CMatrix::diagonal(&[-i, i]), 1e-14);

        // t = 0 is the identity
        let u0 = expm_hermitian(&pauli(Axis::X), 0.0).unwrap();
        assert_close(&u0, &CMatrix::identity(2), 1e-14);

        // exp(-i sigma_x pi) = -I
        let upi = expm_hermitian(&pauli(Axis::X), PI).unwrap();
        assert_close(&upi, &CMatrix::identity(2).scale(-ONE), 1e-13);
    }

    fn random_hermitian(dim: usize, seed: u64) -> CMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut h = CMatrix::zeros(dim);
        for r in 0..dim {
            h[(r, r)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
            for c in (r + 1)..dim {
                let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                h[(r, c)] = z;
                h[(c, r)] = z.conj();
            }
        }
        h
    }

    #[test]
    fn eig_reconstruction_random() {
        for dim in [2, 3, 4, 5, 6, 7, 8] {
            for seed in 0..4u64 {
                let h = random_hermitian(dim, 100 * dim as u64 + seed);
                let (vals, q) = eig_hermitian(&h).unwrap();
                assert!(q.is_unitary(1e-10), "eigenvector matrix not unitary");
                // residual per column
                for j in 0..dim {
                    let col: Vec<C64> = (0..dim).map(|r| q[(r, j)]).collect();
                    let hv = h.apply(&col);
                    let res: f64 = hv
                        .iter()
                        .zip(col.iter())
                        .map(|(a, b)| (a - b * vals[j]).norm_sqr())
                        .sum::<f64>()
                        .sqrt();
                    assert!(res <= 1e-10, "residual {res:.3e} at dim {dim}");
                }
                // ascending order
                for j in 1..dim {
                    assert!(vals[j] >= vals[j - 1]);
                }
                // reconstruction
                let lam = CMatrix::diagonal(
                    &vals.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>(),
                );
                let rec = q.mul_ref(&lam).mul_ref(&q.dagger());
                assert_close(&rec, &h, 1e-9);
            }
        }
    }

    #[test]
    fn expm_unitarity_and_semigroup() {
        for seed in 0..6u64 {
            let dim = 2 + (seed as usize % 4) * 2;
            let h = random_hermitian(dim.min(8), seed + 77);
            let (t1, t2) = (0.3 + seed as f64 * 0.11, 0.9 - seed as f64 * 0.07);
            let u1 = expm_hermitian(&h, t1).unwrap();
            let u2 = expm_hermitian(&h, t2).unwrap();
            let u12 = expm_hermitian(&h, t1 + t2).unwrap();
            assert!(u1.is_unitary(1e-10));
            let gram = u1.dagger().mul_ref(&u1);
            assert!((&gram - &CMatrix::identity(gram.dim())).frobenius_norm() <= 1e-10);
            assert_close(&u1.mul_ref(&u2), &u12, 1e-10);
        }
    }

    #[test]
    fn kron_associativity_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut rand_mat = |dim: usize| {
            let mut m = CMatrix::zeros(dim);
            for r in 0..dim {
                for c in 0..dim {
                    m[(r, c)] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                }
            }
            m
        };
        for _ in 0..5 {
            let a = rand_mat(2);
            let b = rand_mat(2);
            let c = rand_mat(2);
            let left = kron(&kron(&a, &b), &c);
            let right = kron(&a, &kron(&b, &c));
            assert_close(&left, &right, 1e-13);
        }
    }
}
