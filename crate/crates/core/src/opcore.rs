//! Dense complex linear algebra shared by the rest of the crate.
//!
//! [`CMatrix`] is a thin newtype over a dense `nalgebra` matrix. Everything
//! here is a pure function of immutable inputs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default slack for algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-10;
/// Default slack for spectral quantities.
pub const SPECTRAL_TOL: f64 = 1e-8;
/// `mat_exp` refuses inputs whose 1-norm exceeds this.
pub const EXP_NORM_LIMIT: f64 = 1e4;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct CMatrix(pub(crate) DMatrix<C64>);

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
            }
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        CMatrix(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        CMatrix(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", entries.len()),
            });
        }
        Ok(CMatrix(DMatrix::from_row_slice(rows, cols, entries)))
    }

    /// Real-valued convenience constructor, mostly for tests and models.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        CMatrix::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        CMatrix::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let n = entries.len();
        CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(entries[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn column(v: &[C64]) -> Self {
        CMatrix(DMatrix::from_column_slice(v.len(), 1, v))
    }

    pub fn scalar(z: C64) -> Self {
        CMatrix(DMatrix::from_element(1, 1, z))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.0[(i, j)] = z;
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix(self.0.adjoint())
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix(self.0.transpose())
    }

    pub fn scale(&self, z: C64) -> CMatrix {
        CMatrix(&self.0 * z)
    }

    pub fn scale_real(&self, x: f64) -> CMatrix {
        self.scale(C64::new(x, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Copy of the `rows x cols` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> CMatrix {
        CMatrix(self.0.view((r0, c0), (rows, cols)).into_owned())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &CMatrix) {
        self.0.view_mut((r0, c0), b.shape()).copy_from(&b.0);
    }

    /// `self * v` for a plain vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols(), v.len(), "apply: dimension mismatch");
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols())
            .map(|j| (0..self.rows()).map(|i| self.0[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff: shape mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Inverse via LU; `None` when singular.
    pub fn try_inverse(&self) -> Option<CMatrix> {
        if !self.is_square() {
            return None;
        }
        let inv = self.0.clone().lu().try_inverse()?;
        let out = CMatrix(inv);
        out.is_finite().then_some(out)
    }

    /// Solves `self * X = rhs`.
    pub fn solve(&self, rhs: &CMatrix) -> Option<CMatrix> {
        let x = self.0.clone().lu().solve(&rhs.0)?;
        let out = CMatrix(x);
        out.is_finite().then_some(out)
    }

    /// `self ⊗ I_n` in the layout where the `I_n` index is inner.
    pub fn kron_identity(&self, n: usize) -> CMatrix {
        CMatrix(self.0.kronecker(&DMatrix::identity(n, n)))
    }

    /// `I_n ⊗ self`: `n` copies of `self` down the diagonal.
    pub fn identity_kron(&self, n: usize) -> CMatrix {
        CMatrix(DMatrix::<C64>::identity(n, n).kronecker(&self.0))
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        CMatrix(self.0.kronecker(&other.0))
    }

    /// Hermitian part `(A + A*)/2`.
    pub fn hermitian_part(&self) -> CMatrix {
        CMatrix((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    /// Largest entrywise modulus of `A - A*`.
    pub fn hermitian_asymmetry(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(-&self.0)
    }
}

impl Add for CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: CMatrix) -> CMatrix {
        CMatrix(self.0 + rhs.0)
    }
}

impl Sub for CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: CMatrix) -> CMatrix {
        CMatrix(self.0 - rhs.0)
    }
}

impl Mul for CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: CMatrix) -> CMatrix {
        CMatrix(self.0 * rhs.0)
    }
}

/// `⟨a, b⟩`, conjugate-linear in the first slot.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    norm_sqr(v).sqrt()
}

fn require_square(a: &CMatrix) -> Result<usize> {
    if a.is_square() {
        Ok(a.rows())
    } else {
        Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        })
    }
}

fn require_finite(a: &CMatrix, what: &'static str) -> Result<()> {
    if a.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

// Padé coefficients and 1-norm thresholds from Higham (2005).
const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.53939833006323e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA13: f64 = 5.371920351148152e0;

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn pade_low(a: &DMatrix<C64>, coeffs: &[f64]) -> (DMatrix<C64>, DMatrix<C64>) {
    let n = a.nrows();
    let a2 = a * a;
    let mut u = DMatrix::<C64>::zeros(n, n);
    let mut v = DMatrix::<C64>::zeros(n, n);
    let mut power = DMatrix::<C64>::identity(n, n);
    for (k, &b) in coeffs.iter().enumerate() {
        if k % 2 == 0 {
            v += &power * real(b);
        } else {
            u += &power * real(b);
            power = &power * &a2;
        }
    }
    (a * u, v)
}

fn pade13(a: &DMatrix<C64>) -> (DMatrix<C64>, DMatrix<C64>) {
    let n = a.nrows();
    let b = |k: usize| real(PADE13[k]);
    let id = DMatrix::<C64>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * b(13) + &a4 * b(11) + &a2 * b(9);
    let u = a * (&a6 * inner_u + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1));
    let inner_v = &a6 * b(12) + &a4 * b(10) + &a2 * b(8);
    let v = &a6 * inner_v + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &id * b(0);
    (u, v)
}

/// Matrix exponential by scaling and squaring around a diagonal Padé
/// approximant.
pub fn mat_exp(a: &CMatrix) -> Result<CMatrix> {
    let n = require_square(a)?;
    require_finite(a, "mat_exp input")?;
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let norm = a.norm_one();
    if norm > EXP_NORM_LIMIT {
        return Err(Error::ExpOverflow {
            norm,
            limit: EXP_NORM_LIMIT,
        });
    }
    if n == 1 {
        return Ok(CMatrix::scalar(a.get(0, 0).exp()));
    }

    let (u, v, squarings) = match THETA.iter().find(|(_, theta)| norm <= *theta) {
        Some(&(m, _)) => {
            let coeffs: &[f64] = match m {
                3 => &PADE3,
                5 => &PADE5,
                7 => &PADE7,
                _ => &PADE9,
            };
            let (u, v) = pade_low(&a.0, coeffs);
            (u, v, 0)
        }
        None => {
            let s = ((norm / THETA13).log2().ceil()).max(0.0) as u32;
            let scaled = &a.0 * real(0.5f64.powi(s as i32));
            let (u, v) = pade13(&scaled);
            (u, v, s)
        }
    };

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .ok_or(Error::Singular("mat_exp Padé denominator"))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    let out = CMatrix(r);
    require_finite(&out, "mat_exp result")?;
    Ok(out)
}

/// Eigen-decomposition of the Hermitian part of `a`, eigenvalues ascending.
fn herm_eigen(a: &CMatrix) -> (Vec<f64>, DMatrix<C64>) {
    let sym = a.hermitian_part();
    let eig = SymmetricEigen::new(sym.0);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

/// Ascending eigenvalues of `(A + A*)/2`.
pub fn herm_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    require_square(a)?;
    require_finite(a, "herm_eigenvalues input")?;
    Ok(herm_eigen(a).0)
}

/// `A^{-1/2}` for Hermitian positive-definite `A`.
pub fn psd_inv_sqrt(a: &CMatrix, tol: f64) -> Result<CMatrix> {
    let n = require_square(a)?;
    require_finite(a, "psd_inv_sqrt input")?;
    let asymmetry = a.hermitian_asymmetry();
    if asymmetry > tol * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian { asymmetry, tol });
    }
    let (values, vectors) = herm_eigen(a);
    if let Some(&min_eig) = values.first() {
        if min_eig <= tol {
            return Err(Error::NotPositiveDefinite { min_eig, tol });
        }
    }
    let scaled = DMatrix::from_fn(n, n, |r, c| vectors[(r, c)] * real(values[c].powf(-0.5)));
    let x = CMatrix(&scaled * vectors.adjoint());
    // Exact Hermitian symmetry of the result.
    Ok(x.hermitian_part())
}

/// Largest singular value.
pub fn op_norm(a: &CMatrix) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    if a.cols() == 1 || a.rows() == 1 {
        return a.norm_fro();
    }
    a.0.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Largest eigenvalue of the Hermitian part `(A + A*)/2`.
pub fn max_herm_eig(a: &CMatrix) -> Result<f64> {
    require_square(a)?;
    require_finite(a, "max_herm_eig input")?;
    if a.rows() == 0 {
        return Ok(0.0);
    }
    Ok(*herm_eigen(a).0.last().expect("nonempty"))
}

/// Entrywise product of equally shaped matrices.
pub fn schur_product(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x{}", a.rows(), a.cols()),
            found: format!("{}x{}", b.rows(), b.cols()),
        });
    }
    Ok(CMatrix(a.0.component_mul(&b.0)))
}

/// Scalar matrix `A` (n x m) Schur-multiplied into a block matrix `Q` whose
/// (i, j) entry is a `block_rows x block_cols` block.
pub fn schur_product_blocks(
    a: &CMatrix,
    q: &CMatrix,
    block_rows: usize,
    block_cols: usize,
) -> Result<CMatrix> {
    let expected = (a.rows() * block_rows, a.cols() * block_cols);
    if q.shape() != expected {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x{}", expected.0, expected.1),
            found: format!("{}x{}", q.rows(), q.cols()),
        });
    }
    Ok(CMatrix::from_fn(q.rows(), q.cols(), |r, c| {
        a.get(r / block_rows, c / block_cols) * q.get(r, c)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    pub(crate) fn random_matrix(
        rng: &mut ChaCha8Rng,
        rows: usize,
        cols: usize,
        scale: f64,
    ) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| {
            c(
                rng.gen_range(-1.0..1.0) * scale,
                rng.gen_range(-1.0..1.0) * scale,
            )
        })
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let e = mat_exp(&CMatrix::zeros(2, 2)).unwrap();
        assert_eq!(e.max_abs_diff(&CMatrix::identity(2)), 0.0);
    }

    #[test]
    fn exp_of_nilpotent_terminates() {
        let a = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let e = mat_exp(&a).unwrap();
        let expected = CMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(e.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn exp_of_diagonal() {
        let e = mat_exp(&CMatrix::diag_real(&[-0.5])).unwrap();
        assert!((e.get(0, 0).re - 0.6065306597126334).abs() < 1e-15);
        let e = mat_exp(&CMatrix::diag_real(&[-0.5, 2.0, 0.25])).unwrap();
        for (i, x) in [-0.5f64, 2.0, 0.25].iter().enumerate() {
            assert!((e.get(i, i).re - x.exp()).abs() <= 1e-14 * x.exp());
        }
    }

    #[test]
    fn exp_matches_taylor_series_for_moderate_norms() {
        // Independent oracle: long Taylor series on A / 2^s followed by squaring.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &scale in &[0.001, 0.1, 1.0, 3.0] {
            let a = random_matrix(&mut rng, 4, 4, scale);
            let s = 8;
            let small = a.scale_real(0.5f64.powi(s));
            let mut term = CMatrix::identity(4);
            let mut sum = CMatrix::identity(4);
            for k in 1..40 {
                term = (&term * &small).scale_real(1.0 / k as f64);
                sum = &sum + &term;
            }
            for _ in 0..s {
                sum = &sum * &sum;
            }
            let e = mat_exp(&a).unwrap();
            let rel = e.max_abs_diff(&sum) / sum.max_abs();
            assert!(rel < 1e-12, "scale {scale}: rel {rel}");
        }
    }

    #[test]
    fn exp_rejects_non_square_and_huge() {
        assert!(matches!(
            mat_exp(&CMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            mat_exp(&CMatrix::diag_real(&[2e4, 0.0])),
            Err(Error::ExpOverflow { .. })
        ));
    }

    #[test]
    fn exp_of_commuting_sum_factorizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let a = random_matrix(&mut rng, 3, 3, 1.0);
            // Polynomials in the same matrix commute.
            let b = (&(&a * &a).scale_real(0.3) + &a.scale(c(0.0, -0.7))).scale_real(0.5);
            let lhs = mat_exp(&(&a + &b)).unwrap();
            let rhs = &mat_exp(&a).unwrap() * &mat_exp(&b).unwrap();
            assert!(lhs.max_abs_diff(&rhs) <= 1e-10 * lhs.max_abs().max(1.0));
        }
    }

    #[test]
    fn exp_commutes_with_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let a = random_matrix(&mut rng, 4, 4, 2.0);
            let lhs = mat_exp(&a).unwrap().adjoint();
            let rhs = mat_exp(&a.adjoint()).unwrap();
            assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * lhs.max_abs().max(1.0));
        }
    }

    #[test]
    fn inv_sqrt_examples() {
        let x = psd_inv_sqrt(&CMatrix::identity(3), 1e-12).unwrap();
        assert!(x.max_abs_diff(&CMatrix::identity(3)) < 1e-15);
        let x = psd_inv_sqrt(&CMatrix::diag_real(&[4.0]), 1e-12).unwrap();
        assert!((x.get(0, 0).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn inv_sqrt_of_random_pd() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..6 {
            let g = random_matrix(&mut rng, n, n, 1.0);
            let a = &(&g * &g.adjoint()) + &CMatrix::identity(n).scale_real(0.1);
            let x = psd_inv_sqrt(&a, 1e-12).unwrap();
            assert!(x.hermitian_asymmetry() == 0.0);
            let xax = &(&x * &a) * &x;
            assert!(xax.max_abs_diff(&CMatrix::identity(n)) < 1e-10);
            let comm = &(&x * &a) - &(&a * &x);
            assert!(op_norm(&comm) <= 1e-9);
        }
    }

    #[test]
    fn inv_sqrt_errors() {
        let skew = CMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(
            psd_inv_sqrt(&skew, 1e-12),
            Err(Error::NotHermitian { .. })
        ));
        let singular = CMatrix::diag_real(&[1.0, 0.0]);
        assert!(matches!(
            psd_inv_sqrt(&singular, 1e-12),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn op_norm_examples() {
        assert!((op_norm(&CMatrix::identity(3)) - 1.0).abs() < 1e-14);
        assert!((op_norm(&CMatrix::diag_real(&[2.0, -3.0])) - 3.0).abs() < 1e-14);
        assert!((op_norm(&CMatrix::column(&[c(3.0, 0.0), c(4.0, 0.0)])) - 5.0).abs() < 1e-14);
    }

    #[test]
    fn op_norm_is_submultiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let a = random_matrix(&mut rng, 4, 3, 2.0);
            let b = random_matrix(&mut rng, 3, 5, 2.0);
            assert!(op_norm(&(&a * &b)) <= op_norm(&a) * op_norm(&b) + 1e-10);
        }
    }

    #[test]
    fn max_herm_eig_examples() {
        assert_eq!(max_herm_eig(&CMatrix::zeros(2, 2)).unwrap(), 0.0);
        assert!((max_herm_eig(&CMatrix::diag_real(&[-1.0, -2.0])).unwrap() + 1.0).abs() < 1e-15);
        let a = CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!((max_herm_eig(&a).unwrap() - 1.0).abs() < 1e-14);
        assert!(max_herm_eig(&CMatrix::zeros(2, 1)).is_err());
    }

    #[test]
    fn schur_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let b = random_matrix(&mut rng, 3, 3, 1.0);
        let ones = CMatrix::from_fn(3, 3, |_, _| ONE);
        assert_eq!(schur_product(&ones, &b).unwrap(), b);

        let da = CMatrix::diag(&[c(1.0, 1.0), c(2.0, 0.0)]);
        let db = CMatrix::diag(&[c(3.0, 0.0), c(0.0, -1.0)]);
        let p = schur_product(&da, &db).unwrap();
        assert_eq!(p, CMatrix::diag(&[c(3.0, 3.0), c(0.0, -2.0)]));

        let a = random_matrix(&mut rng, 3, 3, 1.0);
        let p = schur_product(&a, &b).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(p.get(i, j), a.get(i, j) * b.get(i, j));
            }
        }
        assert!(schur_product(&a, &CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn schur_blocks_scale_each_block() {
        let a = CMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let q = CMatrix::from_fn(4, 2, |_, _| ONE);
        let p = schur_product_blocks(&a, &q, 2, 1).unwrap();
        assert_eq!(p.get(0, 1), c(2.0, 0.0));
        assert_eq!(p.get(3, 0), c(3.0, 0.0));
        assert!(schur_product_blocks(&a, &q, 2, 2).is_err());
    }
}
