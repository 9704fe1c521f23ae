//! Repeated-interaction (toy Fock) approximation of the cocycle.
//!
//! Each of `N` slots carries a copy of `C ⊕ k` and interacts once with `h`
//! through a first-order Euler step. Nothing here calls `mat_exp`.

use nalgebra::DMatrix;

use crate::cocycle::{exp_inner, StepFunction};
use crate::error::{Error, Result};
use crate::generator::BlockGenerator;
use crate::opcore::{inner, CMatrix, C64, ONE};

/// Default cap on `dim_h · (1 + dim_k)^N` for full state vectors.
pub const DEFAULT_STATE_BUDGET: u128 = 1 << 22;

/// `N` equal slots covering `[0, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyLattice {
    n: usize,
    t: f64,
    tau: f64,
}

impl ToyLattice {
    pub fn new(n: usize, t: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "slot count must be at least 1".into(),
            ));
        }
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::NonPositiveTime(t));
        }
        Ok(ToyLattice {
            n,
            t,
            tau: t / n as f64,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Left endpoint of slot `j` (zero based).
    pub fn slot_start(&self, j: usize) -> f64 {
        j as f64 * self.tau
    }
}

/// One Euler step `[I + τK, √τ M; √τ L, C]` on `h ⊗ (C ⊕ k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepContraction {
    pub matrix: CMatrix,
    pub dim_h: usize,
    pub dim_k: usize,
    pub tau: f64,
}

impl StepContraction {
    /// `E^ξ G_τ E_η` for slot vectors `ξ, η ∈ C ⊕ k`.
    pub fn slice(&self, xi: &[C64], eta: &[C64]) -> CMatrix {
        let h = self.dim_h;
        let mut out = CMatrix::zeros(h, h);
        for (a, xa) in xi.iter().enumerate() {
            for (b, eb) in eta.iter().enumerate() {
                let w = xa.conj() * eb;
                if w != C64::new(0.0, 0.0) {
                    out = &out + &self.matrix.block(a * h, b * h, h, h).scale(w);
                }
            }
        }
        out
    }
}

pub fn step_matrix(f: &BlockGenerator, tau: f64) -> Result<StepContraction> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::NonPositiveTime(tau));
    }
    let (h, k) = (f.dim_h(), f.dim_k());
    let s = tau.sqrt();
    let mut g = CMatrix::zeros(h * (1 + k), h * (1 + k));
    g.set_block(0, 0, &(&CMatrix::identity(h) + &f.k().scale_real(tau)));
    g.set_block(0, h, &f.m().scale_real(s));
    g.set_block(h, 0, &f.l().scale_real(s));
    g.set_block(h, h, f.c());
    Ok(StepContraction {
        matrix: g,
        dim_h: h,
        dim_k: k,
        tau,
    })
}

fn slot_vector(tau: f64, value: &[C64]) -> Vec<C64> {
    let s = tau.sqrt();
    std::iter::once(ONE)
        .chain(value.iter().map(|z| z * s))
        .collect()
}

fn check_dims(
    f: &BlockGenerator,
    vecs: &[(&'static str, usize)],
    steps: &[&StepFunction],
) -> Result<()> {
    for &(what, len) in vecs {
        if len != f.dim_h() {
            return Err(Error::Dimension {
                what,
                expected: f.dim_h(),
                found: len,
            });
        }
    }
    for s in steps {
        if s.dim_k() != f.dim_k() {
            return Err(Error::Dimension {
                what: "step function",
                expected: f.dim_k(),
                found: s.dim_k(),
            });
        }
    }
    Ok(())
}

/// `A_N = slice_1 ⋯ slice_N` over `n` slots of width `tau` starting at `t0`,
/// where `slice_j = E^{ξ_j} G_τ E_{η_j}`. New slots multiply on the right.
pub fn oracle_operator(
    f: &BlockGenerator,
    fs: &StepFunction,
    gs: &StepFunction,
    t0: f64,
    tau: f64,
    n: usize,
) -> Result<CMatrix> {
    check_dims(f, &[], &[fs, gs])?;
    let step = step_matrix(f, tau)?;
    let mut acc = CMatrix::identity(f.dim_h());
    for j in 0..n {
        let s = t0 + j as f64 * tau;
        let xi = slot_vector(tau, &fs.value_at(s));
        let eta = slot_vector(tau, &gs.value_at(s));
        acc = &acc * &step.slice(&xi, &eta);
    }
    Ok(acc)
}

/// `⟨u, A_N v⟩ · exp ∫_t^∞ ⟨f, g⟩`.
pub fn oracle_matrix_element(
    f: &BlockGenerator,
    u: &[C64],
    fs: &StepFunction,
    v: &[C64],
    gs: &StepFunction,
    t: f64,
    n: usize,
) -> Result<C64> {
    check_dims(f, &[("u", u.len()), ("v", v.len())], &[fs, gs])?;
    let lattice = ToyLattice::new(n, t)?;
    let a = oracle_operator(f, fs, gs, 0.0, lattice.tau(), n)?;
    Ok(inner(u, &a.apply(v)) * exp_inner(fs, gs, t, f64::INFINITY)?)
}

/// `‖(∏_j G_j)(v ⊗ ⊗_j ξ_j)‖ · ‖ε(g|[t,∞))‖` with `ξ_j = (1, √τ g(s_j))`.
pub fn oracle_state_norm(
    f: &BlockGenerator,
    v: &[C64],
    gs: &StepFunction,
    t: f64,
    n: usize,
    budget: u128,
) -> Result<f64> {
    check_dims(f, &[("v", v.len())], &[gs])?;
    let lattice = ToyLattice::new(n, t)?;
    let (h, k) = (f.dim_h(), f.dim_k());
    let required = u32::try_from(n)
        .ok()
        .and_then(|n| (1 + k as u128).checked_pow(n))
        .and_then(|p| p.checked_mul(h as u128))
        .unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::BudgetExceeded {
            required,
            allowed: budget,
        });
    }
    let step = step_matrix(f, lattice.tau())?;
    let g = &step.matrix.0;
    // Columns index the slots already applied; rows index h.
    let mut psi = DMatrix::from_column_slice(h, 1, v);
    for j in (0..n).rev() {
        let xi = slot_vector(lattice.tau(), &gs.value_at(lattice.slot_start(j)));
        let cols = psi.ncols();
        let mut lifted = DMatrix::zeros(h * (1 + k), cols);
        for (a, z) in xi.iter().enumerate() {
            lifted
                .view_mut((a * h, 0), (h, cols))
                .copy_from(&(&psi * *z));
        }
        let out = g * lifted;
        let mut next = DMatrix::zeros(h, (1 + k) * cols);
        for a in 0..=k {
            next.view_mut((0, a * cols), (h, cols))
                .copy_from(&out.view((a * h, 0), (h, cols)));
        }
        psi = next;
    }
    Ok(psi.norm() * gs.exp_norm(t, f64::INFINITY))
}

/// Norm of the discrete exponential vector `⊗_j (1, √τ g(s_j))` times the
/// continuous tail beyond `t`.
pub fn discrete_exp_norm(gs: &StepFunction, t: f64, n: usize) -> Result<f64> {
    let lattice = ToyLattice::new(n, t)?;
    let prod: f64 = (0..n)
        .map(|j| {
            let g = gs.value_at(lattice.slot_start(j));
            (1.0 + lattice.tau() * crate::opcore::norm_sqr(&g)).sqrt()
        })
        .product();
    Ok(prod * gs.exp_norm(t, f64::INFINITY))
}
