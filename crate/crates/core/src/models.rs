//! Concrete generators: the truncated inverse harmonic oscillator, a truncated
//! birth–death process with two-dimensional noise, and seeded random
//! contractive generators.
//!
//! Truncated models report the basis indices of `h` on which the untruncated
//! identities still hold exactly (`interior`), so boundary effects are
//! measured rather than hidden.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::BlockGenerator;
use crate::opcore::{self, CMatrix, C64, ZERO};

/// A generator together with the interior of its truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub generator: BlockGenerator,
    /// Basis indices of `h` away from the truncation boundary.
    pub interior: Vec<usize>,
}

/// Parameters of the inverse oscillator on the truncation `C^dim` of `l²(Z₊)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorSpec {
    pub dim: usize,
    /// `λ(0), ..., λ(dim)`.
    pub lambda: Vec<C64>,
    /// `μ(0), ..., μ(dim−1)`.
    pub mu: Vec<f64>,
}

impl OscillatorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidModel(format!(
                "oscillator dim must be at least 2, got {}",
                self.dim
            )));
        }
        if self.lambda.len() != self.dim + 1 {
            return Err(Error::InvalidModel(format!(
                "lambda needs {} entries (levels 0..=dim), got {}",
                self.dim + 1,
                self.lambda.len()
            )));
        }
        if self.mu.len() != self.dim {
            return Err(Error::InvalidModel(format!(
                "mu needs {} entries, got {}",
                self.dim,
                self.mu.len()
            )));
        }
        let finite = self
            .lambda
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
            && self.mu.iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidModel(
                "non-finite oscillator parameter".into(),
            ));
        }
        Ok(())
    }
}

/// `F = [ν(N), W*λ̄(N); −λ(N)W, 0]` with `ν(n) = iμ(n) − ½|λ(n+1)|²`, `C = I`.
///
/// `W` is the right shift with `e_{dim−1} ↦ 0`; both inequality operators
/// vanish on levels `0..dim−1` and equal `−|λ(dim)|²` on the top level.
pub fn inverse_oscillator(spec: &OscillatorSpec) -> Result<Model> {
    spec.validate()?;
    let n = spec.dim;
    let lam = &spec.lambda;
    let nu: Vec<C64> = (0..n)
        .map(|j| C64::new(-0.5 * lam[j + 1].norm_sqr(), spec.mu[j]))
        .collect();
    let k = CMatrix::diag(&nu);
    // L = −λ(N)W: e_j ↦ −λ(j+1) e_{j+1}.
    let l = CMatrix::from_fn(n, n, |r, c| if r == c + 1 { -lam[r] } else { ZERO });
    // M = W*λ̄(N): e_{j+1} ↦ conj(λ(j+1)) e_j.
    let m = CMatrix::from_fn(n, n, |r, c| if c == r + 1 { lam[c].conj() } else { ZERO });
    let generator = BlockGenerator::assemble(k, l, m, CMatrix::identity(n), n, 1)?;
    Ok(Model {
        generator,
        interior: (0..n - 1).collect(),
    })
}

/// Birth–death chain on `{0, ..., dim−1}` with reflecting ends: noise channel
/// 1 is `√b_n` times the up-shift, channel 2 is `√d_n` times the down-shift,
/// `C = I`, `H = 0`.
pub fn birth_death(dim: usize, birth: &[f64], death: &[f64]) -> Result<Model> {
    if dim < 3 {
        return Err(Error::InvalidModel(format!(
            "birth-death dim must be at least 3, got {dim}"
        )));
    }
    for (name, rates) in [("birth", birth), ("death", death)] {
        if rates.len() != dim {
            return Err(Error::InvalidModel(format!(
                "{name} rates need {dim} entries, got {}",
                rates.len()
            )));
        }
        if let Some(r) = rates.iter().find(|r| !(**r >= 0.0) || !r.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "negative or non-finite {name} rate {r}"
            )));
        }
    }
    let mut l = CMatrix::zeros(2 * dim, dim);
    for (j, b) in birth.iter().enumerate().take(dim - 1) {
        l.set(j + 1, j, C64::new(b.sqrt(), 0.0));
    }
    for (j, d) in death.iter().enumerate().skip(1) {
        l.set(dim + j - 1, j, C64::new(d.sqrt(), 0.0));
    }
    let generator =
        BlockGenerator::from_hlc(&CMatrix::zeros(dim, dim), &l, &CMatrix::identity(2 * dim))?;
    Ok(Model {
        generator,
        interior: (1..dim - 1).collect(),
    })
}

/// Classical rate matrix of the truncated chain: `Q(n, n+1) = b_n`,
/// `Q(n, n−1) = d_n`, rows summing to zero.
pub fn classical_rate_matrix(birth: &[f64], death: &[f64]) -> CMatrix {
    let n = birth.len();
    let mut q = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut out = 0.0;
        if j + 1 < n {
            q.set(j, j + 1, C64::new(birth[j], 0.0));
            out += birth[j];
        }
        if j > 0 {
            q.set(j, j - 1, C64::new(death[j], 0.0));
            out += death[j];
        }
        q.set(j, j, C64::new(-out, 0.0));
    }
    q
}

/// Generator of the vacuum expectation semigroup
/// `X ↦ E^{ε(0)} V_t* (X ⊗ I) V_t E_{ε(0)}`, namely
/// `X ↦ XK + K*X + Σ_i L_i* X L_i`, as a matrix on column-major `vec(X)`.
pub fn expectation_generator(f: &BlockGenerator) -> CMatrix {
    let h = f.dim_h();
    let id = CMatrix::identity(h);
    let k = f.k();
    let mut s = &k.transpose().kron(&id) + &id.kron(&k.adjoint());
    for i in 0..f.dim_k() {
        let li = f.l().block(i * h, 0, h, h);
        s = &s + &li.transpose().kron(&li.adjoint());
    }
    s
}

/// `P_t(n, m) = T_t(|e_m⟩⟨e_m|)_{nn}`: the expectation semigroup restricted to
/// diagonal observables, read as a transition matrix.
pub fn diagonal_transition(f: &BlockGenerator, t: f64) -> Result<CMatrix> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let h = f.dim_h();
    let semigroup = opcore::mat_exp(&expectation_generator(f).scale_real(t))?;
    Ok(CMatrix::from_fn(h, h, |n, m| {
        semigroup.get(n + n * h, m + m * h)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContractiveMode {
    /// `C` Haar-like random unitary: the equality case.
    UnitaryC,
    /// `C` rescaled to operator norm 0.9.
    StrictC,
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Seeded random generator built by [`BlockGenerator::from_hlc`].
pub fn random_contractive(
    dim_h: usize,
    dim_k: usize,
    seed: u64,
    mode: ContractiveMode,
) -> Result<BlockGenerator> {
    if dim_h == 0 {
        return Err(Error::InvalidParameter("dim_h must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = dim_h * dim_k;
    let h = gaussian_matrix(&mut rng, dim_h, dim_h)
        .hermitian_part()
        .scale_real(1.0 / (dim_h as f64).sqrt());
    let l = gaussian_matrix(&mut rng, n, dim_h)
        .scale_real(1.0 / ((dim_h * dim_k.max(1)) as f64).sqrt());
    let raw = gaussian_matrix(&mut rng, n, n);
    let c = match mode {
        ContractiveMode::UnitaryC => CMatrix(raw.0.qr().q()),
        ContractiveMode::StrictC => {
            let norm = opcore::op_norm(&raw);
            if norm > 0.0 {
                raw.scale_real(0.9 / norm)
            } else {
                raw
            }
        }
    };
    BlockGenerator::from_hlc(&h, &l, &c)
}
