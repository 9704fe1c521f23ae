//! Associated semigroups `Q^{c,d}` and `P^{c,d}` of a block generator, the
//! dual family, and the coordinate transform between generator components and
//! semigroup generators.
//!
//! In finite dimensions every semigroup here is norm-continuous, so the
//! strong-continuity classification of cocycles has no content and is not
//! represented.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::generator::{chi, BlockGenerator};
use crate::opcore::{self, inner, norm_sqr, CMatrix, C64, ONE, ZERO};

/// `G_{c,d}` and `H_{c,d}` for one pair `(c, d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSlice {
    pub c: Vec<C64>,
    pub d: Vec<C64>,
    /// `component(F, c, d) − χ(c, d)`: generator of `Q^{c,d}`.
    pub g: CMatrix,
    /// `component(F, c, d) + ⟨c, d⟩`: generator of `P^{c,d}`.
    pub h: CMatrix,
}

impl GeneratorSlice {
    /// `½(‖c‖² + ‖d‖²)`, the exact gap `H − G`.
    pub fn shift(&self) -> f64 {
        0.5 * (norm_sqr(&self.c) + norm_sqr(&self.d))
    }
}

pub fn g_generator(f: &BlockGenerator, c: &[C64], d: &[C64]) -> Result<GeneratorSlice> {
    let comp = f.component(c, d)?;
    let id = CMatrix::identity(f.dim_h());
    let g = &comp - &id.scale(chi(c, d)?);
    let h = &comp + &id.scale(inner(c, d));
    Ok(GeneratorSlice {
        c: c.to_vec(),
        d: d.to_vec(),
        g,
        h,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct CacheKey {
    c: Vec<u64>,
    d: Vec<u64>,
    t: u64,
}

impl CacheKey {
    fn new(c: &[C64], d: &[C64], t: f64) -> Self {
        let bits = |v: &[C64]| {
            v.iter()
                .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
                .collect()
        };
        CacheKey {
            c: bits(c),
            d: bits(d),
            t: t.to_bits(),
        }
    }
}

/// The semigroups `{Q^{c,d}}` of a generator, computed lazily and memoized.
///
/// Keys are the exact bit patterns of `(c, d, t)`. Concurrent readers share
/// the cache; two threads missing on the same key may both compute, and the
/// first insertion wins (the values are identical).
#[derive(Debug)]
pub struct SemigroupFamily {
    source: BlockGenerator,
    cache: RwLock<HashMap<CacheKey, Arc<CMatrix>>>,
}

impl Clone for SemigroupFamily {
    fn clone(&self) -> Self {
        SemigroupFamily::new(self.source.clone())
    }
}

impl SemigroupFamily {
    pub fn new(source: BlockGenerator) -> Self {
        SemigroupFamily {
            source,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn source(&self) -> &BlockGenerator {
        &self.source
    }

    pub fn dim_h(&self) -> usize {
        self.source.dim_h()
    }

    pub fn dim_k(&self) -> usize {
        self.source.dim_k()
    }

    pub fn cached_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    pub fn g_generator(&self, c: &[C64], d: &[C64]) -> Result<GeneratorSlice> {
        g_generator(&self.source, c, d)
    }

    /// `Q^{c,d}_t = exp(t G_{c,d})`.
    pub fn q_semigroup(&self, c: &[C64], d: &[C64], t: f64) -> Result<Arc<CMatrix>> {
        check_time(t)?;
        let key = CacheKey::new(c, d, t);
        if let Some(q) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(q));
        }
        let slice = self.g_generator(c, d)?;
        let q = Arc::new(opcore::mat_exp(&slice.g.scale_real(t))?);
        let mut cache = self.cache.write().expect("cache lock");
        Ok(Arc::clone(cache.entry(key).or_insert(q)))
    }

    /// `P^{c,d}_t = e^{t(‖c‖²+‖d‖²)/2} Q^{c,d}_t`.
    pub fn p_semigroup(&self, c: &[C64], d: &[C64], t: f64) -> Result<CMatrix> {
        let q = self.q_semigroup(c, d, t)?;
        let w = (0.5 * t * (norm_sqr(c) + norm_sqr(d))).exp();
        Ok(q.scale_real(w))
    }

    /// `P^{c,d}_t` computed directly as `exp(t H_{c,d})`, bypassing the cache.
    pub fn p_semigroup_direct(&self, c: &[C64], d: &[C64], t: f64) -> Result<CMatrix> {
        check_time(t)?;
        let slice = self.g_generator(c, d)?;
        opcore::mat_exp(&slice.h.scale_real(t))
    }
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("time {t} is not finite")));
    }
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

/// The family of the dual cocycle, built from `F*`.
pub fn dual_family(f: &BlockGenerator) -> SemigroupFamily {
    SemigroupFamily::new(f.adjoint())
}

/// Index `α = 0..=dim_k` into `{d_0 = 0, d_1, ..., d_dim_k}`.
fn basis_vector(dim_k: usize, alpha: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dim_k];
    if alpha > 0 {
        v[alpha - 1] = ONE;
    }
    v
}

/// A `(1 + dim_k) x (1 + dim_k)` array of `h`-operators indexed by `α, β`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorGrid {
    dim_h: usize,
    dim_k: usize,
    entries: Vec<CMatrix>,
}

impl OperatorGrid {
    pub fn from_fn(
        dim_h: usize,
        dim_k: usize,
        mut f: impl FnMut(usize, usize) -> Result<CMatrix>,
    ) -> Result<Self> {
        let n = dim_k + 1;
        let mut entries = Vec::with_capacity(n * n);
        for alpha in 0..n {
            for beta in 0..n {
                let m = f(alpha, beta)?;
                if m.shape() != (dim_h, dim_h) {
                    return Err(Error::ShapeMismatch {
                        expected: format!("{dim_h}x{dim_h}"),
                        found: format!("{}x{}", m.rows(), m.cols()),
                    });
                }
                entries.push(m);
            }
        }
        Ok(OperatorGrid {
            dim_h,
            dim_k,
            entries,
        })
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn dim_k(&self) -> usize {
        self.dim_k
    }

    pub fn get(&self, alpha: usize, beta: usize) -> &CMatrix {
        &self.entries[alpha * (self.dim_k + 1) + beta]
    }

    pub fn max_abs_diff(&self, other: &OperatorGrid) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    /// The components `[F^α_β]` of a generator in the standard basis.
    pub fn components_of(f: &BlockGenerator) -> Self {
        let full = f.full();
        let h = f.dim_h();
        OperatorGrid::from_fn(h, f.dim_k(), |a, b| Ok(full.block(a * h, b * h, h, h)))
            .expect("blocks are h x h")
    }

    /// Reassembles a generator from its components `[F^α_β]`.
    pub fn to_generator(&self) -> Result<BlockGenerator> {
        let h = self.dim_h;
        let n = h * (self.dim_k + 1);
        let mut full = CMatrix::zeros(n, n);
        for a in 0..=self.dim_k {
            for b in 0..=self.dim_k {
                full.set_block(a * h, b * h, self.get(a, b));
            }
        }
        BlockGenerator::from_full(&full, h, self.dim_k)
    }

    /// `(Σ_α ‖F^α_β‖²)^{1/2}` per column `β`; finite means semiregular.
    pub fn column_norms(&self) -> Vec<f64> {
        (0..=self.dim_k)
            .map(|b| {
                (0..=self.dim_k)
                    .map(|a| opcore::op_norm(self.get(a, b)).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }
}

/// `[G^α_β]` with `G^α_β = G_{d_α, d_β}` over `d_0 = 0` and the standard basis.
pub fn coords_from_f(f: &BlockGenerator) -> Result<OperatorGrid> {
    let k = f.dim_k();
    OperatorGrid::from_fn(f.dim_h(), k, |a, b| {
        Ok(g_generator(f, &basis_vector(k, a), &basis_vector(k, b))?.g)
    })
}

/// Recovers `[F^α_β]` from `[G^α_β]` by the affine transform
/// `F^0_0 = G^0_0`, `F^i_0 = G^i_0 − G^0_0 + ½`, `F^0_j = G^0_j − G^0_0 + ½`,
/// `F^i_j = G^i_j − G^i_0 − G^0_j + G^0_0 − δ^i_j`.
pub fn coords_to_f(g: &OperatorGrid) -> Result<OperatorGrid> {
    let id = CMatrix::identity(g.dim_h());
    let half = id.scale_real(0.5);
    OperatorGrid::from_fn(g.dim_h(), g.dim_k(), |a, b| {
        let g00 = g.get(0, 0);
        Ok(match (a, b) {
            (0, 0) => g00.clone(),
            (i, 0) => &(g.get(i, 0) - g00) + &half,
            (0, j) => &(g.get(0, j) - g00) + &half,
            (i, j) => {
                let mut x = &(&(g.get(i, j) - g.get(i, 0)) - g.get(0, j)) + g00;
                if i == j {
                    x = &x - &id;
                }
                x
            }
        })
    })
}
