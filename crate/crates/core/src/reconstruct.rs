//! Schur-product criterion probes and the Yosida / Trotter–Kato approximation
//! pipeline.
//!
//! The criterion quantifies over every `n`, `Y`, `A`, `B`, so no finite probe
//! set is complete: screening can only falsify. A deterministic core set of
//! `n = 1` probes catches any non-contractive `Q^{c,c}` on the sampled `c`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generator::{chi, BlockGenerator};
use crate::opcore::{self, CMatrix, C64, ONE, ZERO};
use crate::semigroups::SemigroupFamily;

/// Floor for the eigenvalues of `A•ϖ` and `B•ϖ`.
pub const SCHUR_PD_TOL: f64 = 1e-12;
/// Default pass threshold for criterion defects.
pub const DEFAULT_PROBE_TOL: f64 = 1e-8;

/// `[exp(−t χ(c_i, c_j))]`, the Gram matrix of normalized exponential vectors
/// `ω(c_i 1_{[0,t)})`.
pub fn varpi_matrix(c_tuple: &[Vec<C64>], t: f64) -> Result<CMatrix> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let n = c_tuple.len();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let z = if i == j {
                ONE
            } else {
                (-chi(&c_tuple[i], &c_tuple[j])? * t).exp()
            };
            out.set(i, j, z);
        }
    }
    Ok(out)
}

/// One instance of the criterion's quantifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub c_tuple: Vec<Vec<C64>>,
    pub t: f64,
    pub a: CMatrix,
    pub b: CMatrix,
    /// Operator `C^n → h^n`: block row `i`, column `j` holds the vector `u^i_j`.
    pub y: CMatrix,
    pub dim_h: usize,
}

fn check_pd(name: &'static str, m: &CMatrix, n: usize) -> Result<CMatrix> {
    if m.shape() != (n, n) {
        return Err(Error::BlockShape {
            block: name,
            expected_rows: n,
            expected_cols: n,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    opcore::psd_inv_sqrt(m, SCHUR_PD_TOL)
}

impl Probe {
    /// Validates the probe and rescales `Y` so that `‖A^{-1/2} Y B^{-1/2}‖ ≤ 1`.
    pub fn new(
        c_tuple: Vec<Vec<C64>>,
        t: f64,
        a: CMatrix,
        b: CMatrix,
        y: CMatrix,
        dim_h: usize,
    ) -> Result<Self> {
        let n = c_tuple.len();
        if n == 0 {
            return Err(Error::InvalidParameter("probe needs at least one c".into()));
        }
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("probe time {t}")));
        }
        if y.shape() != (n * dim_h, n) {
            return Err(Error::BlockShape {
                block: "Y",
                expected_rows: n * dim_h,
                expected_cols: n,
                rows: y.rows(),
                cols: y.cols(),
            });
        }
        let a_is = check_pd("A", &a, n)?;
        let b_is = check_pd("B", &b, n)?;
        let norm = opcore::op_norm(&(&(&a_is.kron_identity(dim_h) * &y) * &b_is));
        let y = if norm > 1.0 {
            y.scale_real(1.0 / norm)
        } else {
            y
        };
        Ok(Probe {
            c_tuple,
            t,
            a,
            b,
            y,
            dim_h,
        })
    }

    pub fn n(&self) -> usize {
        self.c_tuple.len()
    }

    /// `‖A^{-1/2} Y B^{-1/2}‖`, at most 1 by construction.
    pub fn precondition_norm(&self) -> f64 {
        let a_is = opcore::psd_inv_sqrt(&self.a, SCHUR_PD_TOL).expect("validated");
        let b_is = opcore::psd_inv_sqrt(&self.b, SCHUR_PD_TOL).expect("validated");
        opcore::op_norm(&(&(&a_is.kron_identity(self.dim_h) * &self.y) * &b_is))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub probe_id: usize,
    pub n: usize,
    pub t: f64,
    /// Criterion norm minus one; NaN when skipped.
    pub defect: f64,
    pub pass: bool,
    pub skipped: bool,
    pub c_tuple: Vec<Vec<C64>>,
}

/// Evaluates `‖(A•ϖ)^{-1/2} (Q^c_t • Y) (B•ϖ)^{-1/2}‖ − 1`.
pub fn schur_criterion_check(
    family: &SemigroupFamily,
    probe: &Probe,
    tol: f64,
) -> Result<ProbeReport> {
    let n = probe.n();
    let h = family.dim_h();
    if probe.dim_h != h {
        return Err(Error::Dimension {
            what: "probe dim_h",
            expected: h,
            found: probe.dim_h,
        });
    }
    let varpi = varpi_matrix(&probe.c_tuple, probe.t)?;
    let mut qy = CMatrix::zeros(n * h, n);
    for i in 0..n {
        for j in 0..n {
            let q = family.q_semigroup(&probe.c_tuple[i], &probe.c_tuple[j], probe.t)?;
            let u = probe.y.block(i * h, j, h, 1);
            qy.set_block(i * h, j, &(&*q * &u));
        }
    }
    let mut report = ProbeReport {
        probe_id: 0,
        n,
        t: probe.t,
        defect: f64::NAN,
        pass: false,
        skipped: true,
        c_tuple: probe.c_tuple.clone(),
    };
    let left = opcore::psd_inv_sqrt(&opcore::schur_product(&probe.a, &varpi)?, SCHUR_PD_TOL);
    let right = opcore::psd_inv_sqrt(&opcore::schur_product(&probe.b, &varpi)?, SCHUR_PD_TOL);
    let (Ok(left), Ok(right)) = (left, right) else {
        return Ok(report);
    };
    let norm = opcore::op_norm(&(&(&left.kron_identity(h) * &qy) * &right));
    report.defect = norm - 1.0;
    report.pass = report.defect <= tol;
    report.skipped = false;
    Ok(report)
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

fn random_pd(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let a = &(&g * &g.adjoint()) + &CMatrix::identity(n).scale_real(0.1);
    let trace = a.trace().re;
    a.scale_real(n as f64 / trace).hermitian_part()
}

fn random_kvec(rng: &mut ChaCha8Rng, k: usize) -> Vec<C64> {
    let radius = rng.gen_range(0.0..2.0);
    let v: Vec<C64> = (0..k).map(|_| gaussian(rng)).collect();
    let norm = opcore::vec_norm(&v);
    if norm > 0.0 {
        v.iter().map(|z| z * (radius / norm)).collect()
    } else {
        v
    }
}

fn basis(dim: usize, i: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dim];
    v[i] = ONE;
    v
}

/// The deterministic `n = 1` probes: `c ∈ {0, e_i, extra}`, `Y` a basis
/// vector of `h`, `t ∈ {0.1, 0.5, 1}`.
pub fn core_probes(dim_h: usize, dim_k: usize, extra_c: &[Vec<C64>]) -> Vec<Probe> {
    let mut cs = vec![vec![ZERO; dim_k]];
    cs.extend((0..dim_k).map(|i| basis(dim_k, i)));
    cs.extend(extra_c.iter().cloned());
    let one = CMatrix::identity(1);
    let mut out = Vec::new();
    for c in &cs {
        for &t in &[0.1, 0.5, 1.0] {
            for a in 0..dim_h {
                let y = CMatrix::column(&basis(dim_h, a));
                out.push(
                    Probe::new(vec![c.clone()], t, one.clone(), one.clone(), y, dim_h)
                        .expect("core probe is valid"),
                );
            }
        }
    }
    out
}

/// A random probe; tuples with `n ≥ 2` start with the zero vector.
pub fn random_probe(rng: &mut ChaCha8Rng, dim_h: usize, dim_k: usize, n_max: usize) -> Probe {
    let n = rng.gen_range(1..=n_max);
    let c_tuple: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            if i == 0 && n > 1 {
                vec![ZERO; dim_k]
            } else {
                random_kvec(rng, dim_k)
            }
        })
        .collect();
    let t = rng.gen_range(0.0..2.0);
    let a = random_pd(rng, n);
    let b = random_pd(rng, n);
    let y = CMatrix::from_fn(n * dim_h, n, |_, _| gaussian(rng));
    Probe::new(c_tuple, t, a, b, y, dim_h).expect("random probe is valid")
}

fn sort_reports(reports: &mut [ProbeReport]) {
    reports.sort_by(|x, y| match (x.skipped, y.skipped) {
        (false, false) => y
            .defect
            .total_cmp(&x.defect)
            .then(x.probe_id.cmp(&y.probe_id)),
        (a, b) => a.cmp(&b).then(x.probe_id.cmp(&y.probe_id)),
    });
}

/// Core probes followed by `samples` seeded random probes, all evaluated and
/// sorted by defect (largest first, skipped last).
pub fn screen_family(
    f: &BlockGenerator,
    n_max: usize,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<Vec<ProbeReport>> {
    if n_max == 0 || samples == 0 {
        return Err(Error::InvalidParameter(
            "n_max and samples must be at least 1".into(),
        ));
    }
    let (h, k) = (f.dim_h(), f.dim_k());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let extra: Vec<Vec<C64>> = (0..3).map(|_| random_kvec(&mut rng, k)).collect();
    let mut probes = core_probes(h, k, &extra);
    probes.extend((0..samples).map(|_| random_probe(&mut rng, h, k, n_max)));

    let family = SemigroupFamily::new(f.clone());
    let mut reports = probes
        .par_iter()
        .enumerate()
        .map(|(id, p)| {
            schur_criterion_check(&family, p, tol).map(|mut r| {
                r.probe_id = id;
                r
            })
        })
        .collect::<Result<Vec<_>>>()?;
    sort_reports(&mut reports);
    Ok(reports)
}

/// Largest `(2 Re⟨ξ, Fξ⟩ + ‖ΔFξ‖²) / ‖ξ‖²` over `samples` seeded Gaussian `ξ`.
///
/// Never exceeds [`BlockGenerator::contractivity_defect`].
pub fn sample_form_defect(f: &BlockGenerator, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples {
        let xi: Vec<C64> = (0..f.total_dim()).map(|_| gaussian(&mut rng)).collect();
        let norm = opcore::norm_sqr(&xi);
        if norm > 0.0 {
            worst = worst.max(f.form_defect(&xi)? / norm);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TkRow {
    pub n: u32,
    pub pair: usize,
    /// `sup_j ‖Q^{(n) c,d}_{t_j} − Q^{c,d}_{t_j}‖` over the time grid.
    pub sup_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TkReport {
    pub rows: Vec<TkRow>,
    /// Worst error over probe pairs, per `n`.
    pub max_errors: Vec<(u32, f64)>,
    /// Every pair's error is non-increasing along `n_list` up to 10% slack.
    pub monotone: bool,
}

impl TkReport {
    pub fn error(&self, n: u32, pair: usize) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.n == n && r.pair == pair)
            .map(|r| r.sup_error)
    }
}

/// Semigroups of the Yosida approximants `F^(n)` against those of `F`, sampled
/// on `grid + 1` equally spaced times in `[0, horizon]`.
pub fn trotter_kato_pipeline(
    f: &BlockGenerator,
    n_list: &[u32],
    probe_pairs: &[(Vec<C64>, Vec<C64>)],
    horizon: f64,
    grid: usize,
    tol: f64,
) -> Result<TkReport> {
    let defect = f.contractivity_defect();
    if defect > tol {
        return Err(Error::NotContractive { defect, tol });
    }
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "n_list must be nonempty and strictly increasing".into(),
        ));
    }
    if !(horizon > 0.0) || !horizon.is_finite() || grid == 0 {
        return Err(Error::InvalidParameter(format!(
            "horizon {horizon} and grid {grid} must be positive"
        )));
    }
    let exact = SemigroupFamily::new(f.clone());
    let times: Vec<f64> = (0..=grid)
        .map(|j| horizon * j as f64 / grid as f64)
        .collect();
    let mut rows = Vec::new();
    for &n in n_list {
        let approx = SemigroupFamily::new(f.yosida_approx(n)?);
        for (pair, (c, d)) in probe_pairs.iter().enumerate() {
            let mut sup = 0.0f64;
            for &t in &times {
                let diff = &*approx.q_semigroup(c, d, t)? - &*exact.q_semigroup(c, d, t)?;
                sup = sup.max(opcore::op_norm(&diff));
            }
            rows.push(TkRow {
                n,
                pair,
                sup_error: sup,
            });
        }
    }
    let max_errors = n_list
        .iter()
        .map(|&n| {
            let worst = rows
                .iter()
                .filter(|r| r.n == n)
                .map(|r| r.sup_error)
                .fold(0.0, f64::max);
            (n, worst)
        })
        .collect();
    let monotone = (0..probe_pairs.len()).all(|pair| {
        let errs: Vec<f64> = rows
            .iter()
            .filter(|r| r.pair == pair)
            .map(|r| r.sup_error)
            .collect();
        errs.windows(2).all(|w| w[1] <= 1.1 * w[0])
    });
    Ok(TkReport {
        rows,
        max_errors,
        monotone,
    })
}
