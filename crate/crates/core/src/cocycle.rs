//! Cocycle matrix elements between exponential vectors of step functions.
//!
//! Exponential vectors are unnormalized, `ε(f) = (1, f, f⊗f/√2!, ...)`, so
//! `⟨ε(f), ε(g)⟩ = exp ∫⟨f(s), g(s)⟩ ds` and the slice
//! `E^{ε(f|[0,t))} V_t E_{ε(g|[0,t))}` is the time-ordered product of the
//! `P`-semigroups over a joint refinement of the breakpoints of `f` and `g`.

use crate::error::{Error, Result};
use crate::opcore::{self, inner, norm_sqr, CMatrix, C64, ZERO};
use crate::semigroups::SemigroupFamily;

/// A right-continuous, compactly supported, piecewise-constant `k`-valued
/// function: `values[i]` on `[breakpoints[i], breakpoints[i+1])`, the last value
/// on `[breakpoints[n], support_end)`, zero afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<Vec<C64>>,
    support_end: f64,
    dim_k: usize,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<Vec<C64>>, support_end: f64) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidStep(msg));
        if breakpoints.is_empty() {
            return bad("no breakpoints".into());
        }
        if breakpoints[0] != 0.0 {
            return bad(format!(
                "first breakpoint must be 0, got {}",
                breakpoints[0]
            ));
        }
        if values.len() != breakpoints.len() {
            return bad(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            ));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| !(w[0] < w[1])) {
            return bad(format!(
                "breakpoints must be strictly increasing ({} then {})",
                w[0], w[1]
            ));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) {
            return bad("non-finite breakpoint".into());
        }
        if !support_end.is_finite() || support_end < *breakpoints.last().expect("nonempty") {
            return bad(format!(
                "support_end {support_end} must be finite and not precede the last breakpoint"
            ));
        }
        let dim_k = values[0].len();
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| v.len() != dim_k) {
            return bad(format!(
                "value {i} has dimension {}, expected {dim_k}",
                v.len()
            ));
        }
        if values
            .iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return bad("non-finite value".into());
        }
        Ok(StepFunction {
            breakpoints,
            values,
            support_end,
            dim_k,
        })
    }

    pub fn zero(dim_k: usize) -> Self {
        StepFunction {
            breakpoints: vec![0.0],
            values: vec![vec![ZERO; dim_k]],
            support_end: 0.0,
            dim_k,
        }
    }

    /// `c 1_{[0, end)}`.
    pub fn constant(c: Vec<C64>, end: f64) -> Result<Self> {
        StepFunction::new(vec![0.0], vec![c], end)
    }

    pub fn dim_k(&self) -> usize {
        self.dim_k
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Vec<C64>] {
        &self.values
    }

    pub fn support_end(&self) -> f64 {
        self.support_end
    }

    /// Right-continuous evaluation.
    pub fn value_at(&self, t: f64) -> Vec<C64> {
        if !(t >= 0.0) || t >= self.support_end {
            return vec![ZERO; self.dim_k];
        }
        let i = self.breakpoints.partition_point(|&b| b <= t) - 1;
        self.values[i].clone()
    }

    fn jumps(&self) -> impl Iterator<Item = f64> + '_ {
        self.breakpoints
            .iter()
            .copied()
            .chain(std::iter::once(self.support_end))
    }

    /// `s ↦ f(s + r)` restricted to `s ≥ 0`.
    pub fn shifted(&self, r: f64) -> Result<Self> {
        if r < 0.0 {
            return Err(Error::NegativeTime(r));
        }
        if r == 0.0 {
            return Ok(self.clone());
        }
        let mut breakpoints = vec![0.0];
        let mut values = vec![self.value_at(r)];
        for (b, v) in self.breakpoints.iter().zip(&self.values) {
            if *b > r && *b < self.support_end {
                breakpoints.push(b - r);
                values.push(v.clone());
            }
        }
        StepFunction::new(breakpoints, values, (self.support_end - r).max(0.0))
    }

    /// Same function with extra (spurious) breakpoints inserted.
    pub fn refined(&self, extra: &[f64]) -> Result<Self> {
        let mut points: Vec<f64> = self
            .breakpoints
            .iter()
            .copied()
            .chain(
                extra
                    .iter()
                    .copied()
                    .filter(|&p| p > 0.0 && p < self.support_end),
            )
            .collect();
        points.sort_by(f64::total_cmp);
        points.dedup();
        let values = points.iter().map(|&p| self.value_at(p)).collect();
        StepFunction::new(points, values, self.support_end)
    }

    /// `∫_a^b ‖f(s)‖² ds`; `b` may be `f64::INFINITY`.
    pub fn norm_sqr_integral(&self, a: f64, b: f64) -> f64 {
        let b = b.min(self.support_end.max(a));
        refine(&[self], a, b)
            .iter()
            .map(|(s, e)| (e - s) * norm_sqr(&self.value_at(*s)))
            .sum()
    }

    /// `‖ε(f|[a,b))‖ = exp(½ ∫_a^b ‖f‖²)`.
    pub fn exp_norm(&self, a: f64, b: f64) -> f64 {
        (0.5 * self.norm_sqr_integral(a, b)).exp()
    }
}

/// Intervals `[s_i, s_{i+1})` covering `[a, b)` on which every function is
/// constant. Empty when `a >= b`.
fn refine(fs: &[&StepFunction], a: f64, b: f64) -> Vec<(f64, f64)> {
    if !(a < b) {
        return Vec::new();
    }
    let mut points: Vec<f64> = fs
        .iter()
        .flat_map(|f| f.jumps())
        .filter(|&p| p > a && p < b)
        .collect();
    points.push(a);
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, points.get(i + 1).copied().unwrap_or(b)))
        .collect()
}

fn check_pair(f: &StepFunction, g: &StepFunction, dim_k: usize) -> Result<()> {
    for (what, s) in [("step function f", f), ("step function g", g)] {
        if s.dim_k() != dim_k {
            return Err(Error::Dimension {
                what,
                expected: dim_k,
                found: s.dim_k(),
            });
        }
    }
    Ok(())
}

/// `exp ∫_a^b ⟨f(s), g(s)⟩ ds`; `b` may be `f64::INFINITY`.
pub fn exp_inner(f: &StepFunction, g: &StepFunction, a: f64, b: f64) -> Result<C64> {
    if a > b || a.is_nan() || b.is_nan() {
        return Err(Error::InvalidInterval { a, b });
    }
    check_pair(f, g, f.dim_k())?;
    let b = b.min(f.support_end().max(g.support_end()).max(a));
    let exponent: C64 = refine(&[f, g], a, b)
        .iter()
        .map(|&(s, e)| inner(&f.value_at(s), &g.value_at(s)) * (e - s))
        .sum();
    Ok(exponent.exp())
}

/// `E^{ε(f|[0,t))} V_t E_{ε(g|[0,t))}` together with its inputs.
#[derive(Debug, Clone)]
pub struct SlicedOperator {
    pub matrix: CMatrix,
    pub f: StepFunction,
    pub g: StepFunction,
    pub t: f64,
}

impl SlicedOperator {
    /// Cauchy–Schwarz bound `‖ε(f|[0,t))‖ ‖ε(g|[0,t))‖` for contractive cocycles.
    pub fn contraction_bound(&self) -> f64 {
        self.f.exp_norm(0.0, self.t) * self.g.exp_norm(0.0, self.t)
    }
}

fn product_over(
    family: &SemigroupFamily,
    f: &StepFunction,
    g: &StepFunction,
    a: f64,
    b: f64,
) -> Result<CMatrix> {
    let mut acc = CMatrix::identity(family.dim_h());
    for (s, e) in refine(&[f, g], a, b) {
        let p = family.p_semigroup(&f.value_at(s), &g.value_at(s), e - s)?;
        acc = &acc * &p;
    }
    Ok(acc)
}

/// Ordered product `P^{f(t_0),g(t_0)}_{t_1−t_0} ⋯ P^{f(t_n),g(t_n)}_{t−t_n}`.
pub fn sliced_element(
    family: &SemigroupFamily,
    f: &StepFunction,
    g: &StepFunction,
    t: f64,
) -> Result<SlicedOperator> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("time {t} is not finite")));
    }
    check_pair(f, g, family.dim_k())?;
    Ok(SlicedOperator {
        matrix: product_over(family, f, g, 0.0, t)?,
        f: f.clone(),
        g: g.clone(),
        t,
    })
}

fn check_hvec(what: &'static str, v: &[C64], dim_h: usize) -> Result<()> {
    if v.len() != dim_h {
        return Err(Error::Dimension {
            what,
            expected: dim_h,
            found: v.len(),
        });
    }
    Ok(())
}

/// `⟨u ε(f), V_t v ε(g)⟩`.
pub fn full_matrix_element(
    family: &SemigroupFamily,
    u: &[C64],
    f: &StepFunction,
    v: &[C64],
    g: &StepFunction,
    t: f64,
) -> Result<C64> {
    check_hvec("u", u, family.dim_h())?;
    check_hvec("v", v, family.dim_h())?;
    let slice = sliced_element(family, f, g, t)?;
    let tail = exp_inner(f, g, t, f64::INFINITY)?;
    Ok(inner(u, &slice.matrix.apply(v)) * tail)
}

/// Both sides of `V_{r+t} = V_r σ_r(V_t)` between exponential vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CocycleDefect {
    /// Operator norm of `LHS − RHS` on `h`.
    pub absolute: f64,
    /// `‖ε(f)‖ ‖ε(g)‖`, bounding both sides for contractive cocycles.
    pub scale: f64,
}

impl CocycleDefect {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.absolute / self.scale
        } else {
            self.absolute
        }
    }
}

/// Compares the slice of `V_{r+t}` with the product of the slice of `V_r` and
/// the slice of `σ_r(V_t)`, the latter evaluated on the shifted step data.
pub fn cocycle_defect(
    family: &SemigroupFamily,
    f: &StepFunction,
    g: &StepFunction,
    r: f64,
    t: f64,
) -> Result<CocycleDefect> {
    for x in [r, t] {
        if x < 0.0 {
            return Err(Error::NegativeTime(x));
        }
    }
    check_pair(f, g, family.dim_k())?;
    let tail = exp_inner(f, g, r + t, f64::INFINITY)?;
    let lhs = sliced_element(family, f, g, r + t)?.matrix.scale(tail);
    let head = sliced_element(family, f, g, r)?.matrix;
    let shifted = sliced_element(family, &f.shifted(r)?, &g.shifted(r)?, t)?.matrix;
    let rhs = (&head * &shifted).scale(tail);
    Ok(CocycleDefect {
        absolute: opcore::op_norm(&(&lhs - &rhs)),
        scale: f.exp_norm(0.0, f64::INFINITY) * g.exp_norm(0.0, f64::INFINITY),
    })
}

fn unit(dim_k: usize, i: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dim_k];
    v[i] = C64::new(1.0, 0.0);
    v
}

/// Finite-difference approximation of `T_d = L + C E_d`: block `i` is
/// `t^{-1}(P^{e_i,d}_t − P^{0,d}_t)`.
pub fn t_operator_fd(family: &SemigroupFamily, d: &[C64], t: f64) -> Result<CMatrix> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    let (h, k) = (family.dim_h(), family.dim_k());
    if d.len() != k {
        return Err(Error::Dimension {
            what: "t_operator_fd d",
            expected: k,
            found: d.len(),
        });
    }
    let base = family.p_semigroup(&vec![ZERO; k], d, t)?;
    let mut out = CMatrix::zeros(h * k, h);
    for i in 0..k {
        let p = family.p_semigroup(&unit(k, i), d, t)?;
        out.set_block(i * h, 0, &(&p - &base).scale_real(1.0 / t));
    }
    Ok(out)
}

/// Finite-difference approximation of `C`: block `(i, j)` is the second
/// difference `t^{-1}(P^{e_i,e_j}_t − P^{e_i,0}_t − P^{0,e_j}_t + P^{0,0}_t)`.
pub fn c_operator_fd(family: &SemigroupFamily, t: f64) -> Result<CMatrix> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    let (h, k) = (family.dim_h(), family.dim_k());
    let zero = vec![ZERO; k];
    let p00 = family.p_semigroup(&zero, &zero, t)?;
    let mut out = CMatrix::zeros(h * k, h * k);
    for i in 0..k {
        let ei = unit(k, i);
        let pi0 = family.p_semigroup(&ei, &zero, t)?;
        for j in 0..k {
            let ej = unit(k, j);
            let pij = family.p_semigroup(&ei, &ej, t)?;
            let p0j = family.p_semigroup(&zero, &ej, t)?;
            let block = &(&(&pij - &pi0) - &p0j) + &p00;
            out.set_block(i * h, j * h, &block.scale_real(1.0 / t));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{cx, BlockGenerator};

    fn scalar_hp() -> SemigroupFamily {
        SemigroupFamily::new(
            BlockGenerator::from_hlc(
                &CMatrix::zeros(1, 1),
                &CMatrix::from_real_rows(&[&[1.0]]),
                &CMatrix::from_real_rows(&[&[1.0]]),
            )
            .unwrap(),
        )
    }

    #[test]
    fn step_function_validation() {
        let v = |x: f64| vec![cx(x, 0.0)];
        assert!(StepFunction::new(vec![0.0, 1.0], vec![v(1.0), v(2.0)], 2.0).is_ok());
        assert!(StepFunction::new(vec![0.5], vec![v(1.0)], 2.0).is_err());
        assert!(StepFunction::new(vec![0.0, 1.0, 1.0], vec![v(1.0); 3], 2.0).is_err());
        assert!(StepFunction::new(vec![0.0, 1.0], vec![v(1.0)], 2.0).is_err());
        assert!(StepFunction::new(vec![0.0, 3.0], vec![v(1.0); 2], 2.0).is_err());
        assert!(StepFunction::new(vec![0.0], vec![v(f64::NAN)], 2.0).is_err());
        assert!(StepFunction::new(vec![0.0, 1.0], vec![v(1.0), vec![]], 2.0).is_err());
        assert!(StepFunction::new(vec![], vec![], 2.0).is_err());
    }

    #[test]
    fn evaluation_is_right_continuous() {
        let f = StepFunction::new(
            vec![0.0, 1.0, 2.0],
            vec![vec![cx(1.0, 0.0)], vec![cx(2.0, 0.0)], vec![cx(3.0, 0.0)]],
            2.5,
        )
        .unwrap();
        assert_eq!(f.value_at(0.0)[0].re, 1.0);
        assert_eq!(f.value_at(0.999)[0].re, 1.0);
        assert_eq!(f.value_at(1.0)[0].re, 2.0);
        assert_eq!(f.value_at(2.0)[0].re, 3.0);
        assert_eq!(f.value_at(2.5)[0].re, 0.0);
        assert_eq!(f.value_at(-1.0)[0].re, 0.0);
        let s = f.shifted(1.5).unwrap();
        assert_eq!(s.breakpoints(), &[0.0, 0.5]);
        assert_eq!(s.value_at(0.0)[0].re, 2.0);
        assert_eq!(s.value_at(0.7)[0].re, 3.0);
        assert_eq!(s.support_end(), 1.0);
        let past = f.shifted(10.0).unwrap();
        assert_eq!(past.value_at(0.0)[0].re, 0.0);
    }

    #[test]
    fn exp_inner_examples() {
        let z = StepFunction::zero(1);
        assert_eq!(exp_inner(&z, &z, 0.0, f64::INFINITY).unwrap(), cx(1.0, 0.0));

        let c = vec![cx(0.6, -0.8), cx(1.0, 0.5)];
        let f = StepFunction::constant(c.clone(), 1.0).unwrap();
        let e = exp_inner(&f, &f, 0.0, 1.0).unwrap();
        assert!((e - cx(norm_sqr(&c).exp(), 0.0)).norm() < 1e-14);

        let f = StepFunction::new(vec![0.0], vec![vec![cx(1.0, 0.0)]], 2.0).unwrap();
        let g = StepFunction::new(
            vec![0.0, 1.0],
            vec![vec![cx(0.0, 0.0)], vec![cx(0.0, 1.0)]],
            3.0,
        )
        .unwrap();
        let e = exp_inner(&f, &g, 0.0, 3.0).unwrap();
        assert!((e - cx(0.0, 1.0).exp()).norm() < 1e-15);
        assert!(matches!(
            exp_inner(&f, &g, 2.0, 1.0),
            Err(Error::InvalidInterval { .. })
        ));
    }

    #[test]
    fn sliced_element_examples() {
        let z = SemigroupFamily::new(BlockGenerator::zero(2, 1));
        let f = StepFunction::new(
            vec![0.0, 0.4],
            vec![vec![cx(1.0, 0.3)], vec![cx(-0.5, 0.0)]],
            1.2,
        )
        .unwrap();
        let g = StepFunction::constant(vec![cx(0.2, -1.0)], 0.9).unwrap();
        let s = sliced_element(&z, &f, &g, 1.0).unwrap();
        let expected = exp_inner(&f, &g, 0.0, 1.0).unwrap();
        assert!(s.matrix.max_abs_diff(&CMatrix::identity(2).scale(expected)) < 1e-14);

        let hp = scalar_hp();
        let s = sliced_element(&hp, &f, &g, 0.0).unwrap();
        assert_eq!(s.matrix, CMatrix::identity(1));
        let zero = StepFunction::zero(1);
        let s = sliced_element(&hp, &zero, &zero, 1.0).unwrap();
        assert!((s.matrix.get(0, 0).re - (-0.5f64).exp()).abs() < 1e-15);
        assert!(sliced_element(&hp, &zero, &zero, -1.0).is_err());
        assert!(sliced_element(&hp, &StepFunction::zero(2), &zero, 1.0).is_err());
    }

    #[test]
    fn full_matrix_element_examples() {
        let z = SemigroupFamily::new(BlockGenerator::zero(2, 1));
        let f = StepFunction::constant(vec![cx(1.0, 0.3)], 2.0).unwrap();
        let g = StepFunction::constant(vec![cx(0.2, -1.0)], 0.9).unwrap();
        let u = [cx(1.0, 0.0), cx(0.0, 2.0)];
        let v = [cx(0.5, 0.5), cx(1.0, 0.0)];
        let m = full_matrix_element(&z, &u, &f, &v, &g, 0.7).unwrap();
        let expected = inner(&u, &v) * exp_inner(&f, &g, 0.0, f64::INFINITY).unwrap();
        assert!((m - expected).norm() < 1e-14);

        let hp = scalar_hp();
        let zero = StepFunction::zero(1);
        let one = [cx(1.0, 0.0)];
        let m = full_matrix_element(&hp, &one, &zero, &one, &zero, 1.0).unwrap();
        assert!((m - cx((-0.5f64).exp(), 0.0)).norm() < 1e-15);
        let m = full_matrix_element(&hp, &one, &zero, &[cx(0.0, 0.0)], &zero, 1.0).unwrap();
        assert_eq!(m, cx(0.0, 0.0));
        assert!(full_matrix_element(&hp, &u, &zero, &one, &zero, 1.0).is_err());
    }

    #[test]
    fn markov_slice_is_q00() {
        let hp = scalar_hp();
        let zero = StepFunction::zero(1);
        for t in [0.3, 1.0, 2.2] {
            let s = sliced_element(&hp, &zero, &zero, t).unwrap();
            let q = hp.q_semigroup(&[cx(0.0, 0.0)], &[cx(0.0, 0.0)], t).unwrap();
            assert_eq!(s.matrix, *q);
        }
    }

    #[test]
    fn cocycle_defect_trivial_cases() {
        let hp = scalar_hp();
        let f = StepFunction::new(
            vec![0.0, 0.4],
            vec![vec![cx(1.0, 0.3)], vec![cx(-0.5, 0.0)]],
            1.2,
        )
        .unwrap();
        let g = StepFunction::constant(vec![cx(0.2, -1.0)], 0.9).unwrap();
        assert_eq!(cocycle_defect(&hp, &f, &g, 0.0, 1.0).unwrap().absolute, 0.0);
        assert_eq!(cocycle_defect(&hp, &f, &g, 1.0, 0.0).unwrap().absolute, 0.0);
        let z = SemigroupFamily::new(BlockGenerator::zero(1, 1));
        assert!(cocycle_defect(&z, &f, &g, 0.5, 0.6).unwrap().absolute <= 1e-14);
        assert!(cocycle_defect(&hp, &f, &g, -0.5, 0.6).is_err());
    }

    #[test]
    fn t_operator_examples() {
        let z = SemigroupFamily::new(BlockGenerator::zero(2, 2));
        // H_{e_i,0} = H_{0,0} = 0; only the e^{±t/2} rescaling of Q leaves rounding.
        let t = t_operator_fd(&z, &[cx(0.0, 0.0); 2], 1e-2).unwrap();
        assert!(t.max_abs() < 1e-12);

        let hp = scalar_hp();
        let t = t_operator_fd(&hp, &[cx(0.0, 0.0)], 1e-3).unwrap();
        assert!((t.get(0, 0) - cx(1.0, 0.0)).norm() < 5e-3);
        assert!(t_operator_fd(&hp, &[cx(0.0, 0.0)], 0.0).is_err());
    }

    #[test]
    fn c_operator_examples() {
        // F = 0: H_{c,d} = ⟨c,d⟩, the second difference is (e^t − 1)/t on the diagonal.
        let z = SemigroupFamily::new(BlockGenerator::zero(1, 2));
        let t = 1e-3;
        let c = c_operator_fd(&z, t).unwrap();
        assert!((c.get(0, 0).re - (t.exp() - 1.0) / t).abs() < 1e-12);
        assert!(c.get(0, 1).norm() < 1e-12);

        let hp = scalar_hp();
        let c = c_operator_fd(&hp, 1e-3).unwrap();
        assert!((c.get(0, 0) - cx(1.0, 0.0)).norm() < 5e-3);
        assert!(c_operator_fd(&hp, -1.0).is_err());
    }
}
