use proptest::prelude::*;
use qsc_core::cocycle::{sliced_element, StepFunction};
use qsc_core::generator::cx;
use qsc_core::models::{random_contractive, ContractiveMode};
use qsc_core::opcore::{op_norm, C64};
use qsc_core::reconstruct::sample_form_defect;
use qsc_core::semigroups::{dual_family, SemigroupFamily};
use qsc_core::BlockGenerator;

fn generator() -> impl Strategy<Value = BlockGenerator> {
    (1usize..=3, 1usize..=2, any::<u64>(), any::<bool>()).prop_map(|(h, k, seed, unitary)| {
        let mode = if unitary {
            ContractiveMode::UnitaryC
        } else {
            ContractiveMode::StrictC
        };
        random_contractive(h, k, seed, mode).unwrap()
    })
}

fn kvec(dim: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec(
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| cx(a, b)),
        dim,
    )
}

fn step(dim: usize) -> impl Strategy<Value = StepFunction> {
    prop::collection::vec((0.01f64..0.8, kvec(dim)), 1..=5).prop_map(|pieces| {
        let mut bps = Vec::new();
        let mut t = 0.0;
        let mut values = Vec::new();
        for (len, v) in pieces {
            bps.push(t);
            values.push(v);
            t += len;
        }
        StepFunction::new(bps, values, t).unwrap()
    })
}

fn with_data() -> impl Strategy<Value = (BlockGenerator, StepFunction, StepFunction)> {
    generator().prop_flat_map(|f| {
        let k = f.dim_k();
        (Just(f), step(k), step(k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn semigroup_law((f, c, d) in generator().prop_flat_map(|f| {
        let k = f.dim_k();
        (Just(f), kvec(k), kvec(k))
    }), s in 0.0f64..1.5, t in 0.0f64..1.5) {
        let fam = SemigroupFamily::new(f);
        let lhs = fam.q_semigroup(&c, &d, s + t).unwrap();
        let rhs = &*fam.q_semigroup(&c, &d, s).unwrap() * &*fam.q_semigroup(&c, &d, t).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-11 * (1.0 + lhs.max_abs()));
    }

    #[test]
    fn diagonal_semigroups_contract((f, c) in generator().prop_flat_map(|f| {
        let k = f.dim_k();
        (Just(f), kvec(k))
    }), t in 0.0f64..3.0) {
        let fam = SemigroupFamily::new(f);
        prop_assert!(op_norm(&fam.q_semigroup(&c, &c, t).unwrap()) <= 1.0 + 1e-10);
    }

    #[test]
    fn dual_semigroups((f, c, d) in generator().prop_flat_map(|f| {
        let k = f.dim_k();
        (Just(f), kvec(k), kvec(k))
    }), t in 0.0f64..2.0) {
        let dual = dual_family(&f);
        let fam = SemigroupFamily::new(f);
        let lhs = dual.q_semigroup(&c, &d, t).unwrap();
        let rhs = fam.q_semigroup(&d, &c, t).unwrap().adjoint();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn refinement_does_not_change_elements((f, fs, gs) in with_data(), extra in prop::collection::vec(0.0f64..4.0, 0..4), t in 0.0f64..3.0) {
        let fam = SemigroupFamily::new(f);
        let a = sliced_element(&fam, &fs, &gs, t).unwrap().matrix;
        let b = sliced_element(&fam, &fs.refined(&extra).unwrap(), &gs, t).unwrap().matrix;
        prop_assert!(a.max_abs_diff(&b) <= 1e-11 * (1.0 + a.max_abs()));
    }

    #[test]
    fn sliced_elements_respect_cauchy_schwarz((f, fs, gs) in with_data(), t in 0.0f64..3.0) {
        let fam = SemigroupFamily::new(f);
        let s = sliced_element(&fam, &fs, &gs, t).unwrap();
        prop_assert!(op_norm(&s.matrix) <= s.contraction_bound() * (1.0 + 1e-10));
    }

    #[test]
    fn constant_dual_elements_are_adjoints((f, c, d) in generator().prop_flat_map(|f| {
        let k = f.dim_k();
        (Just(f), kvec(k), kvec(k))
    }), t in 0.01f64..2.0) {
        let fs = StepFunction::constant(c, t).unwrap();
        let gs = StepFunction::constant(d, t).unwrap();
        let dual = dual_family(&f);
        let fam = SemigroupFamily::new(f);
        let lhs = sliced_element(&dual, &fs, &gs, t).unwrap().matrix;
        let rhs = sliced_element(&fam, &gs, &fs, t).unwrap().matrix.adjoint();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-11 * (1.0 + lhs.max_abs()));
    }

    #[test]
    fn yosida_approximants_stay_contractive(f in generator(), n in 1u32..200) {
        let y = f.yosida_approx(n).unwrap();
        prop_assert!(y.contractivity_defect() <= 1e-9);
    }

    #[test]
    fn sampled_form_defect_below_spectral(f in generator(), seed in any::<u64>()) {
        prop_assert!(sample_form_defect(&f, 20, seed).unwrap() <= f.contractivity_defect() + 1e-12);
    }
}
