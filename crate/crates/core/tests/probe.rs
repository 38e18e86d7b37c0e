use std::time::Instant;

use nalgebra::{Complex, DVector};
use qnil_core::gallery::{build, GallerySpec};
use qnil_core::probe::{
    probe_conjecture, r_boundability_certificate, sample_perturbations, scaled_model, separation_pipeline, CertificateStatus,
    ChainOptions, ChainStatus, FSample, FSampler, PhiSpec, ProbeParams, Reading, SamplerSpec, Verdict,
};
use qnil_core::spectra::{dilate_and_test, inclusion_check, pseudospectrum_grid, GridOptions, Region};
use qnil_core::{Error, Operator};

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn alphas() -> Vec<Complex<f64>> {
    vec![c(1.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0), c(0.0, 2.0), c(0.0, -2.0)]
}

fn jordan(n: usize) -> Operator<f64> {
    build(&GallerySpec::jordan(n)).unwrap()
}

fn basis(n: usize, k: usize) -> DVector<Complex<f64>> {
    DVector::from_fn(n, |i, _| if i == k { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

fn only_kernel_range() -> FSampler<f64> {
    FSampler::Generated(SamplerSpec { random_pairs: 0, seed: 0, kernel_range: true })
}

#[test]
fn kernel_range_perturbation_alone_is_vacuous() {
    let params = ProbeParams::new(1.0, 1.0, 0.05, PhiSpec::Constant { value: 0.1 }, alphas());
    let report = probe_conjecture(&jordan(8), &params, &only_kernel_range()).unwrap();
    assert_eq!(report.per_f.len(), 1);
    for cell in &report.per_f[0].per_alpha {
        assert!(!cell.adjoint.not_quasinilpotent, "{cell:?}");
    }
    assert_eq!(report.verdict(Reading::Adjoint), Verdict::Vacuous);
    assert_eq!(report.verdict(Reading::Mixed), Verdict::Vacuous);
}

#[test]
fn huge_phi_connects_everything() {
    let max_alpha = 2.0;
    let phi = 10.0 * (1.0 + 1.0 * max_alpha);
    let params = ProbeParams::new(1.0, 1.0, 0.05, PhiSpec::Constant { value: phi }, alphas());
    let sampler = FSampler::Generated(SamplerSpec { random_pairs: 3, seed: 9, kernel_range: true });
    let report = probe_conjecture(&jordan(6), &params, &sampler).unwrap();
    for reading in Reading::ALL {
        let constraining = report.per_f.iter().filter(|pf| pf.readings.iter().any(|r| r.reading == reading && r.constrains)).count();
        assert!(constraining > 0);
        assert_eq!(report.verdict(reading), Verdict::Violated);
    }
    for pf in &report.per_f {
        for cell in &pf.per_alpha {
            assert!(!cell.adjoint.dilated_disconnected && !cell.direct.dilated_disconnected);
            assert!(cell.adjoint.inclusion_holds && cell.direct.inclusion_holds);
        }
    }
    assert!(report.counterexamples.iter().all(|ce| ce.failed.contains(&"disconnectedness")));
}

#[test]
fn jordan_probe_agrees_with_fine_grid() {
    let start = Instant::now();
    let step = 0.08;
    let mut params = ProbeParams::new(1.0, 1.0, 0.05, PhiSpec::Constant { value: 0.1 }, alphas());
    params.grid_step = Some(step);
    let t = jordan(8);
    let sampler = FSampler::Generated(SamplerSpec { random_pairs: 1, seed: 5, kernel_range: false });
    let report = probe_conjecture(&t, &params, &sampler).unwrap();
    let (t_tilde, _) = scaled_model(&t, 1.0).unwrap();
    let sample = &sample_perturbations(&t_tilde, 1.0, &SamplerSpec { random_pairs: 1, seed: 5, kernel_range: false }).unwrap()[0];
    let f_op = sample.operator().unwrap();
    for (cell, alpha) in report.per_f[0].per_alpha.iter().zip(alphas()) {
        for (checks, base) in [(&cell.adjoint, t_tilde.adjoint()), (&cell.direct, t_tilde.clone())] {
            let a = base.add_scaled(alpha, &f_op).unwrap();
            let spec = a.eigenvalues().unwrap();
            let half = a.norm() + 0.05;
            let grid = pseudospectrum_grid(&a, Region::square(c(0.0, 0.0), half), step / 2.0, &GridOptions::default()).unwrap();
            let fine = inclusion_check(&grid, 0.05, &spec, 0.1);
            assert_eq!(checks.inclusion_holds, fine.holds, "alpha {alpha}: {checks:?} vs {fine:?}");
            assert_eq!(checks.dilated_disconnected, dilate_and_test(&spec, 0.1).unwrap().count() >= 2);
        }
    }
    eprintln!("fine-grid comparison took {:?}", start.elapsed());
}

#[test]
fn inclusion_survives_doubling_phi() {
    let sampler = FSampler::Generated(SamplerSpec { random_pairs: 4, seed: 2, kernel_range: true });
    let run = |phi: f64| {
        let params = ProbeParams::new(1.0, 1.0, 0.1, PhiSpec::Constant { value: phi }, alphas());
        probe_conjecture(&jordan(6), &params, &sampler).unwrap()
    };
    let (small, large) = (run(0.8), run(1.6));
    let mut held = 0;
    for (pf, qf) in small.per_f.iter().zip(&large.per_f) {
        for (x, y) in pf.per_alpha.iter().zip(&qf.per_alpha) {
            for (cx, cy) in [(&x.adjoint, &y.adjoint), (&x.direct, &y.direct)] {
                if cx.inclusion_holds {
                    held += 1;
                    assert!(cy.inclusion_holds);
                }
            }
        }
    }
    assert!(held > 0);
}

#[test]
fn reports_are_deterministic_and_violations_are_explained() {
    let params = ProbeParams::new(2.0, 0.5, 0.2, PhiSpec::Constant { value: 0.3 }, alphas());
    let sampler = FSampler::Generated(SamplerSpec { random_pairs: 3, seed: 11, kernel_range: true });
    let model = build(&GallerySpec::random_strict_triangular(6, 3)).unwrap();
    let first = probe_conjecture(&model, &params, &sampler).unwrap();
    let second = probe_conjecture(&model, &params, &sampler).unwrap();
    assert_eq!(first, second);
    for v in &first.verdicts {
        if v.verdict == Verdict::Violated {
            assert!(first.counterexamples.iter().any(|ce| ce.reading == v.reading && !ce.failed.is_empty()));
        }
    }
}

#[test]
fn phi_table_must_cover_the_alpha_grid() {
    let phi = PhiSpec::Table { entries: vec![qnil_core::probe::PhiEntry { alpha: [1.0, 0.0], radius: 0.1 }] };
    let params = ProbeParams::new(1.0, 1.0, 0.05, phi, alphas());
    assert!(matches!(probe_conjecture(&jordan(4), &params, &only_kernel_range()), Err(Error::PhiMissing { .. })));
}

#[test]
fn pipeline_without_cases_is_empty() {
    let params = ProbeParams::new(1.0, 1.0, 0.05, PhiSpec::Constant { value: 0.1 }, alphas());
    let report = separation_pipeline(&jordan(8), &params, &only_kernel_range(), &ChainOptions::new(1)).unwrap();
    assert!(report.cases.is_empty());
    assert!(report.consistent);
}

#[test]
fn pipeline_trials_stay_separated_where_the_chain_holds() {
    let sampler = FSampler::Generated(SamplerSpec { random_pairs: 6, seed: 21, kernel_range: true });
    let mut evaluated = 0;
    for t in [2.0, 5.0, 20.0] {
        let params = ProbeParams::new(1.0, 1.0, t, PhiSpec::Constant { value: 0.05 }, alphas());
        let report = separation_pipeline(&jordan(5), &params, &sampler, &ChainOptions { samples_per_edge: 32, trials: 10, seed: 3 }).unwrap();
        for case in &report.cases {
            if let ChainStatus::Evaluated(o) = &case.status {
                evaluated += 1;
                if o.chain_holds {
                    assert_eq!(o.separated, o.trials, "{case:?}");
                }
            }
        }
        assert!(report.consistent);
    }
    assert!(evaluated > 0);
}

/// `J + alpha e_4 e_1*` with `|alpha| = 1` is a unitary-like cycle: normal,
/// eigenvalues the fourth roots of `alpha`.
fn cyclic_sampler(n: usize) -> FSampler<f64> {
    FSampler::Fixed(vec![FSample::new("cycle", basis(n, 0), basis(n, n - 1))])
}

fn unit_alphas() -> Vec<Complex<f64>> {
    vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]
}

#[test]
fn certificate_outcomes() {
    let j = jordan(4);
    let params = ProbeParams::new(1.0, 1.0, 0.2, PhiSpec::Constant { value: 0.4 }, unit_alphas());
    let report = r_boundability_certificate(&j, &params, &cyclic_sampler(4), 32).unwrap();
    assert_eq!(report.status, CertificateStatus::Certified);
    let w = &report.witnesses[0];
    assert_eq!(w.s_set.len(), 4);
    for b in &w.bounds {
        assert!(b.max_resolvent <= 5.0 && b.max_resolvent_dense <= 5.0);
    }

    // F = e_1 e_4* keeps J + alpha F strictly upper triangular: spectrum {0}.
    let upper = FSampler::Fixed(vec![FSample::new("corner", basis(4, 3), basis(4, 0))]);
    let report = r_boundability_certificate(&j, &params, &upper, 32).unwrap();
    assert_eq!(report.status, CertificateStatus::NoWitness);

    // Spectrum points √2 apart: every separating curve has |R| >= 2/√2 somewhere.
    let params = ProbeParams::new(1.0, 1.0, 10.0, PhiSpec::Constant { value: 0.4 }, unit_alphas());
    let report = r_boundability_certificate(&j, &params, &cyclic_sampler(4), 32).unwrap();
    assert_eq!(report.status, CertificateStatus::Impossible);
    assert!((report.witnesses[0].resolvent_floor - 2f64.sqrt()).abs() < 1e-9);

    let split = Operator::from_real_diagonal(&[0.0, 1.0]);
    assert!(matches!(
        r_boundability_certificate(&split, &params, &cyclic_sampler(2), 32),
        Err(Error::SpectrumNotConnected { .. })
    ));
}
