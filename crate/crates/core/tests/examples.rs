use dgmf_core::dg_solver::SolverConfig;
use dgmf_core::factorization::{
    build_cone_l_rho, build_mf, build_resolution, verify_mf, FactorizationError, MfVariant, ResolutionVariant,
};
use dgmf_core::fixtures::{e1, e2, e3, Example};
use dgmf_core::linkage::{run_pipeline, verify_identity_suite, verify_higher_multiplication, PipelineState};

fn all_checks_pass(st: &PipelineState) {
    for rep in [verify_identity_suite(st, true), verify_higher_multiplication(st)] {
        let failed: Vec<_> = rep.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect();
        assert!(failed.is_empty(), "{failed:?}");
    }
}

fn run(ex: &Example) -> PipelineState {
    let st = run_pipeline(&ex.input()).unwrap_or_else(|e| panic!("{}: {e}", ex.name));
    all_checks_pass(&st);
    st
}

#[test]
fn unit_r_runs_end_to_end() {
    let st = run(&e1());
    let mf2 = build_mf(&st, MfVariant::Reduced).unwrap();
    assert_eq!(mf2.rank(), 6);
    assert_eq!(verify_mf(&mf2).failures().count(), 0);
    let acute = build_resolution(&st, ResolutionVariant::Acute, 10).unwrap();
    assert_eq!(acute.ranks(6), vec![1, 4, 6, 6, 6, 6, 6]);
}

#[test]
fn non_unit_r_uses_full_factorization() {
    let st = run(&e2());
    assert!(matches!(build_mf(&st, MfVariant::Reduced), Err(FactorizationError::RNotUnit(_))));
    let mf1 = build_mf(&st, MfVariant::Full).unwrap();
    assert_eq!(verify_mf(&mf1).failures().count(), 0);
    assert_eq!(build_cone_l_rho(&st).unwrap().report.checks.len(), 29);
    let n = build_resolution(&st, ResolutionVariant::N, 10).unwrap();
    assert_eq!(n.ranks(7), vec![1, 4, 6, 10, 11, 11, 11, 11]);
}

#[test]
fn solver_built_resolution_runs_end_to_end() {
    let ex = e3(&SolverConfig::default()).unwrap();
    assert_eq!((1..5).map(|i| ex.m.rank(i)).collect::<Vec<_>>(), vec![8, 14, 8, 1]);
    let st = run(&ex);
    assert!(st.sigma.r.is_unit());
    let mf1 = build_mf(&st, MfVariant::Full).unwrap();
    let mf2 = build_mf(&st, MfVariant::Reduced).unwrap();
    assert_eq!((mf1.rank(), mf2.rank()), (19, 14));
    assert_eq!(verify_mf(&mf1).failures().count() + verify_mf(&mf2).failures().count(), 0);
    for v in [ResolutionVariant::N, ResolutionVariant::Acute] {
        let res = build_resolution(&st, v, 10).unwrap();
        assert_eq!(res.report.failures().count(), 0);
    }
}

#[test]
fn solver_is_reproducible_per_seed() {
    let cfg = SolverConfig { seed: 7, ..SolverConfig::default() };
    assert_eq!(e3(&cfg).unwrap().m, e3(&cfg).unwrap().m);
}
