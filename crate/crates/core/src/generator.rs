//! Block generators `F = [K M; L C-I]` on `h ⊕ (h⊗k)`.
//!
//! Index layout: the assembled matrix is a `(1 + dim_k) x (1 + dim_k)` grid of
//! `dim_h x dim_h` blocks, k̂-index outermost with the `e_0` block first. So
//! `L` is the column of blocks `E^{e_i} L` stacked for `i = 1..dim_k`, `M` is
//! the row `M E_{e_j}`, and `C` has block `(i, j)` equal to `E^{e_i} C E_{e_j}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::opcore::{self, inner, norm_sqr, CMatrix, C64, ONE, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub struct BlockGenerator {
    dim_h: usize,
    dim_k: usize,
    k: CMatrix,
    l: CMatrix,
    m: CMatrix,
    c: CMatrix,
}

fn check_block(block: &'static str, mat: &CMatrix, rows: usize, cols: usize) -> Result<()> {
    if mat.shape() != (rows, cols) {
        return Err(Error::BlockShape {
            block,
            expected_rows: rows,
            expected_cols: cols,
            rows: mat.rows(),
            cols: mat.cols(),
        });
    }
    if !mat.is_finite() {
        return Err(Error::NonFinite(block));
    }
    Ok(())
}

/// `d̂ = (1, d)`.
pub fn hat(d: &[C64]) -> Vec<C64> {
    std::iter::once(ONE).chain(d.iter().copied()).collect()
}

/// `χ(c, d) = ½(‖c‖² + ‖d‖²) − ⟨c, d⟩`.
pub fn chi(c: &[C64], d: &[C64]) -> Result<C64> {
    if c.len() != d.len() {
        return Err(Error::Dimension {
            what: "chi arguments",
            expected: c.len(),
            found: d.len(),
        });
    }
    Ok(C64::new(0.5 * (norm_sqr(c) + norm_sqr(d)), 0.0) - inner(c, d))
}

/// `Σ_{α,β} conj(x_α) y_β X_{αβ}` for a matrix made of `block x block` tiles.
pub(crate) fn block_slice(x: &CMatrix, block: usize, left: &[C64], right: &[C64]) -> CMatrix {
    let mut out = CMatrix::zeros(block, block);
    for (alpha, xa) in left.iter().enumerate() {
        if *xa == ZERO {
            continue;
        }
        for (beta, yb) in right.iter().enumerate() {
            if *yb == ZERO {
                continue;
            }
            let w = xa.conj() * yb;
            let tile = x.block(alpha * block, beta * block, block, block);
            out = &out + &tile.scale(w);
        }
    }
    out
}

impl BlockGenerator {
    /// Validates block shapes against `(dim_h, dim_k)`.
    pub fn assemble(
        k: CMatrix,
        l: CMatrix,
        m: CMatrix,
        c: CMatrix,
        dim_h: usize,
        dim_k: usize,
    ) -> Result<Self> {
        let n = dim_h * dim_k;
        check_block("K", &k, dim_h, dim_h)?;
        check_block("L", &l, n, dim_h)?;
        check_block("M", &m, dim_h, n)?;
        check_block("C", &c, n, n)?;
        Ok(BlockGenerator {
            dim_h,
            dim_k,
            k,
            l,
            m,
            c,
        })
    }

    /// Hudson–Parthasarathy form: `K = iH − ½L*L`, `M = −L*C`.
    pub fn from_hlc(h: &CMatrix, l: &CMatrix, c: &CMatrix) -> Result<Self> {
        Self::from_hlc_with_tol(h, l, c, opcore::ALGEBRAIC_TOL)
    }

    pub fn from_hlc_with_tol(h: &CMatrix, l: &CMatrix, c: &CMatrix, tol: f64) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::NotSquare {
                rows: h.rows(),
                cols: h.cols(),
            });
        }
        let dim_h = h.rows();
        let asymmetry = h.hermitian_asymmetry();
        if asymmetry > tol * h.max_abs().max(1.0) {
            return Err(Error::NotHermitian { asymmetry, tol });
        }
        if dim_h == 0 || !l.rows().is_multiple_of(dim_h) {
            return Err(Error::BlockShape {
                block: "L",
                expected_rows: dim_h * (l.rows() / dim_h.max(1)),
                expected_cols: dim_h,
                rows: l.rows(),
                cols: l.cols(),
            });
        }
        let dim_k = l.rows() / dim_h;
        check_block("L", l, dim_h * dim_k, dim_h)?;
        check_block("C", c, dim_h * dim_k, dim_h * dim_k)?;
        let ldag = l.adjoint();
        let k = &h.scale(C64::new(0.0, 1.0)) - &(&ldag * l).scale_real(0.5);
        let m = -&(&ldag * c);
        Self::assemble(k, l.clone(), m, c.clone(), dim_h, dim_k)
    }

    /// `F = 0` (so `C = I`).
    pub fn zero(dim_h: usize, dim_k: usize) -> Self {
        let n = dim_h * dim_k;
        BlockGenerator {
            dim_h,
            dim_k,
            k: CMatrix::zeros(dim_h, dim_h),
            l: CMatrix::zeros(n, dim_h),
            m: CMatrix::zeros(dim_h, n),
            c: CMatrix::identity(n),
        }
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn dim_k(&self) -> usize {
        self.dim_k
    }

    /// Dimension of `h ⊕ (h⊗k)`.
    pub fn total_dim(&self) -> usize {
        self.dim_h * (1 + self.dim_k)
    }

    pub fn k(&self) -> &CMatrix {
        &self.k
    }

    pub fn l(&self) -> &CMatrix {
        &self.l
    }

    pub fn m(&self) -> &CMatrix {
        &self.m
    }

    pub fn c(&self) -> &CMatrix {
        &self.c
    }

    /// The square matrix `[K M; L C−I]`.
    pub fn full(&self) -> CMatrix {
        let n = self.total_dim();
        let h = self.dim_h;
        let mut f = CMatrix::zeros(n, n);
        f.set_block(0, 0, &self.k);
        f.set_block(0, h, &self.m);
        f.set_block(h, 0, &self.l);
        let nk = h * self.dim_k;
        f.set_block(h, h, &(&self.c - &CMatrix::identity(nk)));
        f
    }

    /// Inverse of [`full`](Self::full).
    pub fn from_full(f: &CMatrix, dim_h: usize, dim_k: usize) -> Result<Self> {
        let n = dim_h * (1 + dim_k);
        check_block("F", f, n, n)?;
        let nk = dim_h * dim_k;
        let c = &f.block(dim_h, dim_h, nk, nk) + &CMatrix::identity(nk);
        Self::assemble(
            f.block(0, 0, dim_h, dim_h),
            f.block(dim_h, 0, nk, dim_h),
            f.block(0, dim_h, dim_h, nk),
            c,
            dim_h,
            dim_k,
        )
    }

    /// The generator of the dual cocycle: blocks of `F*`.
    pub fn adjoint(&self) -> Self {
        BlockGenerator {
            dim_h: self.dim_h,
            dim_k: self.dim_k,
            k: self.k.adjoint(),
            l: self.m.adjoint(),
            m: self.l.adjoint(),
            c: self.c.adjoint(),
        }
    }

    /// `Δ`: projection onto the `h⊗k` summand.
    pub fn delta(&self) -> CMatrix {
        let n = self.total_dim();
        let h = self.dim_h;
        CMatrix::from_fn(n, n, |i, j| if i == j && i >= h { ONE } else { ZERO })
    }

    fn check_kvec(&self, what: &'static str, v: &[C64]) -> Result<()> {
        if v.len() != self.dim_k {
            return Err(Error::Dimension {
                what,
                expected: self.dim_k,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `E^ĉ F E_d̂ = K + E^c L + M E_d + E^c (C − I) E_d`.
    pub fn component(&self, c: &[C64], d: &[C64]) -> Result<CMatrix> {
        self.check_kvec("component c", c)?;
        self.check_kvec("component d", d)?;
        Ok(block_slice(&self.full(), self.dim_h, &hat(c), &hat(d)))
    }

    /// `E^c L`.
    pub fn l_slice(&self, c: &[C64]) -> Result<CMatrix> {
        self.check_kvec("l_slice c", c)?;
        let h = self.dim_h;
        let mut out = CMatrix::zeros(h, h);
        for (i, ci) in c.iter().enumerate() {
            out = &out + &self.l.block(i * h, 0, h, h).scale(ci.conj());
        }
        Ok(out)
    }

    /// `E^c C E_d`.
    pub fn c_slice(&self, c: &[C64], d: &[C64]) -> Result<CMatrix> {
        self.check_kvec("c_slice c", c)?;
        self.check_kvec("c_slice d", d)?;
        Ok(block_slice(&self.c, self.dim_h, c, d))
    }

    /// `C E_d`, an operator `h → h⊗k`.
    pub fn c_column(&self, d: &[C64]) -> Result<CMatrix> {
        self.check_kvec("c_column d", d)?;
        let h = self.dim_h;
        let nk = h * self.dim_k;
        let mut out = CMatrix::zeros(nk, h);
        for (j, dj) in d.iter().enumerate() {
            out = &out + &self.c.block(0, j * h, nk, h).scale(*dj);
        }
        Ok(out)
    }

    /// Max Hermitian eigenvalue of `F + F* + F*ΔF`.
    pub fn contractivity_defect(&self) -> f64 {
        let f = self.full();
        let delta = self.delta();
        let q = &(&f + &f.adjoint()) + &(&(&f.adjoint() * &delta) * &f);
        opcore::max_herm_eig(&q).expect("square by construction")
    }

    /// `F + F* + F*ΔF`.
    pub fn inequality_operator(&self) -> CMatrix {
        let f = self.full();
        &(&f + &f.adjoint()) + &(&(&f.adjoint() * &self.delta()) * &f)
    }

    /// `F + F* + FΔF*`, the inequality operator of the dual generator.
    pub fn dual_inequality_operator(&self) -> CMatrix {
        let f = self.full();
        &(&f + &f.adjoint()) + &(&(&f * &self.delta()) * &f.adjoint())
    }

    /// `2 Re⟨ξ, Fξ⟩ + ‖ΔFξ‖²`.
    pub fn form_defect(&self, xi: &[C64]) -> Result<f64> {
        if xi.len() != self.total_dim() {
            return Err(Error::Dimension {
                what: "form_defect vector",
                expected: self.total_dim(),
                found: xi.len(),
            });
        }
        let fxi = self.full().apply(xi);
        let noise = norm_sqr(&fxi[self.dim_h..]);
        Ok(2.0 * inner(xi, &fxi).re + noise)
    }

    /// Yosida regularization `F^(n) = I^(n)* F I^(n)`, `I^(n) = diag[J, I]`,
    /// `J = (I − K/n)^{-1}`.
    pub fn yosida_approx(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "yosida index must be positive".into(),
            ));
        }
        let h = self.dim_h;
        let resolvent = &CMatrix::identity(h) - &self.k.scale_real(1.0 / n as f64);
        let j = resolvent
            .try_inverse()
            .ok_or(Error::SingularResolvent { n })?;
        let jd = j.adjoint();
        Ok(BlockGenerator {
            dim_h: h,
            dim_k: self.dim_k,
            k: &(&jd * &self.k) * &j,
            l: &self.l * &j,
            m: &jd * &self.m,
            c: self.c.clone(),
        })
    }

    pub fn classify(&self, tol: f64) -> Classification {
        let nk = self.dim_h * self.dim_k;
        let id = CMatrix::identity(nk);
        let c = &self.c;
        let c_norm = opcore::op_norm(c);
        let isometry = opcore::op_norm(&(&(&c.adjoint() * c) - &id));
        let coisometry = opcore::op_norm(&(&(c * &c.adjoint()) - &id));
        let defect = self.contractivity_defect();

        // ‖Lu‖² + 2Re⟨u,Ku⟩ = ⟨u, (L*L + K + K*)u⟩; its sup over unit u is a
        // spectral radius of a Hermitian matrix.
        let quad = &(&self.l.adjoint() * &self.l) + &(&self.k + &self.k.adjoint());
        let eig = opcore::herm_eigenvalues(&quad).expect("square");
        let quadratic_defect = eig.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        let adjoint_relation_defect = opcore::op_norm(&(&self.m + &(&self.l.adjoint() * c)));

        let c_isometric = isometry <= tol;
        Classification {
            contractive: defect <= tol,
            defect,
            c_norm,
            c_contraction: c_norm <= 1.0 + tol,
            c_isometric,
            c_coisometric: coisometry <= tol,
            quadratic_defect,
            adjoint_relation_defect,
            equality_case: c_isometric && quadratic_defect <= tol,
            m_relation_holds: adjoint_relation_defect <= tol,
        }
    }
}

/// Summary of the contractivity structure of a generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    /// `F + F* + F*ΔF ≤ tol`.
    pub contractive: bool,
    pub defect: f64,
    pub c_norm: f64,
    pub c_contraction: bool,
    pub c_isometric: bool,
    pub c_coisometric: bool,
    /// `sup_{‖u‖=1} |‖Lu‖² + 2Re⟨u,Ku⟩|`.
    pub quadratic_defect: f64,
    /// `‖M + L*C‖`.
    pub adjoint_relation_defect: f64,
    pub equality_case: bool,
    pub m_relation_holds: bool,
}

impl Classification {
    pub fn summary(&self) -> String {
        let mut parts = vec![if self.contractive {
            "contractive".to_string()
        } else {
            "NOT contractive".to_string()
        }];
        if self.c_isometric && self.c_coisometric {
            parts.push("C unitary".into());
        } else if self.c_isometric {
            parts.push("C isometric".into());
        } else if self.c_contraction {
            parts.push("C strict contraction".into());
        } else {
            parts.push("C not a contraction".into());
        }
        if self.equality_case {
            parts.push("isometric candidate".into());
        }
        if self.m_relation_holds {
            parts.push("M = -L*C".into());
        }
        format!("{} (defect {:.3e})", parts.join(", "), self.defect)
    }
}

/// Convenience: a complex number from parts.
pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
