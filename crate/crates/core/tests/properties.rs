mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use spectral_forge::blockforge::{assemble, chain, chain_rho};
use spectral_forge::dstoch::{is_doubly_stochastic, join, DsJoinMode, DsJoinSpec};
use spectral_forge::graphspec::{
    chain_join, join_all, join_isomorphic_copies, permuted_copy, Graph, RegularGraph,
};
use spectral_forge::numkit::{jacobi_eigs, lu_det_complex, matmul, qr_eigs_small, real_det};
use spectral_forge::rado::{rado_update, symmetric_rado};
use spectral_forge::verify::{audit, certify_eigenvalues, match_spectra, Construction};
use spectral_forge::{Complex64, DenseMatrix, Spectrum, Tolerances};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn random_regular(r: &mut rand_chacha::ChaCha8Rng) -> RegularGraph {
    let n = r.gen_range(3..=6);
    let g = match r.gen_range(0..3) {
        0 => Graph::cycle(n),
        1 => Graph::complete(n),
        _ => Graph::empty(n),
    };
    RegularGraph::new(g.unwrap()).unwrap()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn jacobi_reconstructs(seed in any::<u64>(), n in 1usize..10) {
        let m = random_symmetric(&mut rng(seed), n);
        let eig = jacobi_eigs(&m, 1e-14).unwrap();
        let v = &eig.vectors;
        let rebuilt = matmul(&matmul(v, &DenseMatrix::from_diag(&eig.values())).unwrap(), &v.transpose()).unwrap();
        prop_assert!(rebuilt.max_abs_diff(&m).unwrap() < 1e-12);
        let gram = matmul(&v.transpose(), v).unwrap();
        prop_assert!(gram.max_abs_diff(&DenseMatrix::identity(n)).unwrap() < 1e-12);
        let vals = eig.values();
        prop_assert!(vals.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn qr_preserves_trace_and_determinant(seed in any::<u64>(), n in 1usize..9) {
        let m = uniform_matrix(&mut rng(seed), n, n, -1.0, 1.0);
        let s = qr_eigs_small(&m).unwrap();
        prop_assert_eq!(s.len(), n);
        prop_assert!((s.sum() - Complex64::new(m.trace(), 0.0)).norm() < 1e-10);
        let prod = s.values().iter().fold(Complex64::new(1.0, 0.0), |a, z| a * z);
        prop_assert!((prod - Complex64::new(real_det(&m).unwrap(), 0.0)).norm() < 1e-9);
        // complex eigenvalues come in exact conjugate pairs
        for z in s.values() {
            prop_assert!(s.values().iter().any(|w| *w == z.conj()));
        }
    }

    #[test]
    fn lu_matches_cofactor_expansion(seed in any::<u64>(), n in 1usize..7, re in -2.0f64..2.0, im in -1.0f64..1.0) {
        let m = uniform_matrix(&mut rng(seed), n, n, -1.0, 1.0);
        let shift = Complex64::new(re, im);
        let lu = lu_det_complex(&m, shift).unwrap();
        let oracle = leibniz_det(&m, shift);
        prop_assert!((lu - oracle).norm() <= 1e-12 * (1.0 + oracle.norm()));
    }

    #[test]
    fn rado_trace_identity(seed in any::<u64>(), n in 2usize..7) {
        let mut r = rng(seed);
        let eigs: Vec<f64> = (0..n).map(|_| r.gen_range(-3.0..3.0)).collect();
        let (a, q) = symmetric_with_spectrum(&mut r, &eigs);
        let rank = r.gen_range(1..=n);
        let pairs: Vec<_> = (0..rank).map(|j| spectral_forge::EigenPair::new(eigs[j], q.col(j)).unwrap()).collect();
        let y = random_symmetric(&mut r, rank);
        let full = Spectrum::from_real(&eigs).unwrap();
        let out = symmetric_rado(&a, &full, &pairs, &y).unwrap();
        prop_assert!((out.predicted.sum().re - out.updated.trace()).abs() < 1e-10);
        let oracle = jacobi_eigs(&out.updated, 1e-14).unwrap();
        prop_assert!(match_spectra(&out.predicted, &oracle.spectrum, 1e-9).unwrap().matched);
    }

    #[test]
    fn assemble_agrees_with_rado_form(seed in any::<u64>(), k in 1usize..5) {
        let sys = random_symmetric_system(&mut rng(seed), k, 5);
        let a = assemble(&sys).unwrap();
        let r = rado_update(&sys.rado_form().unwrap()).unwrap();
        prop_assert!(a.big.max_abs_diff(&r.updated).unwrap() < 1e-12);
        prop_assert!(match_spectra(&a.predicted, &r.predicted, 1e-10).unwrap().matched);
        prop_assert!((a.predicted.sum().re - a.big.trace()).abs() < 1e-10);
    }

    #[test]
    fn symmetric_systems_match_jacobi(seed in any::<u64>(), k in 1usize..5) {
        let sys = random_symmetric_system(&mut rng(seed), k, 6);
        let a = assemble(&sys).unwrap();
        let rep = audit("sym", Construction::Blocks(&sys), &a.big, &a.predicted, &Tolerances::default());
        prop_assert!(rep.passed(), "{}", rep.to_text());
    }

    #[test]
    fn chain_systems_match_jacobi(seed in any::<u64>(), k in 1usize..6) {
        let mut r = rng(seed);
        let base = random_symmetric_system(&mut r, k, 4);
        let couplings: Vec<f64> = (1..k).map(|_| r.gen_range(0.0..2.0)).collect();
        let sys = spectral_forge::blockforge::BlockSystem::new(
            base.blocks().to_vec(),
            base.pairs().to_vec(),
            base.spectra().to_vec(),
            chain_rho(&couplings),
        ).unwrap();
        let a = chain(&sys).unwrap();
        let oracle = jacobi_eigs(&a.big, 1e-14).unwrap();
        prop_assert!(match_spectra(&a.predicted, &oracle.spectrum, 1e-8).unwrap().matched);
    }

    #[test]
    fn defective_systems_certify(seed in any::<u64>(), k in 2usize..4) {
        let sys = random_defective_system(&mut rng(seed), k, 4);
        let a = assemble(&sys).unwrap();
        let rep = audit("nonsym", Construction::Blocks(&sys), &a.big, &a.predicted, &Tolerances::default());
        prop_assert!(rep.passed(), "{}", rep.to_text());
    }

    #[test]
    fn ds_joins_are_doubly_stochastic(
        seed in any::<u64>(),
        m in 1usize..5,
        extra in 0usize..3,
        alpha in 0.0f64..2.0,
        rho in 0.01f64..2.0,
        symmetric in any::<bool>(),
    ) {
        let mut r = rng(seed);
        let n = m + extra;
        let t1 = random_doubly_stochastic(&mut r, m, symmetric);
        let t2 = random_doubly_stochastic(&mut r, n, symmetric);
        let spec = DsJoinSpec::new(t1.clone(), t2.clone(), ds_spectrum(&t1), ds_spectrum(&t2), alpha, rho).unwrap();
        for mode in [DsJoinMode::Scaled, DsJoinMode::Affine] {
            let d = join(&spec, mode).unwrap();
            prop_assert!(is_doubly_stochastic(&d.matrix, 1e-10).ok);
            prop_assert!((d.predicted.spectral_radius() - 1.0).abs() < 1e-10);
            let second = d.predicted.values()[1].re;
            prop_assert!(second >= -(m as f64) / n as f64 - 1e-12 && second <= 1.0 + 1e-12);
            if symmetric {
                prop_assert!(d.matrix.is_symmetric(1e-15));
            }
            let rep = audit("ds", Construction::DsJoin { spec: &spec, mode }, &d.matrix, &d.predicted, &Tolerances::default());
            prop_assert!(rep.passed(), "{}", rep.to_text());
        }
    }

    #[test]
    fn joins_have_trace_zero_and_match_oracle(seed in any::<u64>(), k in 1usize..4) {
        let mut r = rng(seed);
        let parts: Vec<_> = (0..k).map(|_| random_regular(&mut r)).collect();
        for out in [join_all(&parts).unwrap(), chain_join(&parts).unwrap()] {
            prop_assert!(out.predicted.sum().norm() < 1e-10);
            let oracle = jacobi_eigs(out.joined.adjacency(), 1e-14).unwrap();
            prop_assert!(match_spectra(&out.predicted, &oracle.spectrum, 1e-8).unwrap().matched);
            let n = out.joined.n() as f64;
            let e: f64 = oracle.values().iter().map(|x| x.abs()).sum();
            prop_assert!((out.energy - e).abs() <= 1e-8 * n);
        }
    }

    #[test]
    fn isomorphic_copies_match_generic_join(seed in any::<u64>(), k in 1usize..5) {
        let g = random_regular(&mut rng(seed));
        let spec = g.graph().spectrum().unwrap();
        let closed = join_isomorphic_copies(&g, &spec, k).unwrap();
        let mut parts = vec![g.clone()];
        for j in 1..k {
            parts.push(RegularGraph::new(permuted_copy(g.graph(), seed ^ j as u64)).unwrap());
        }
        let generic = join_all(&parts).unwrap();
        prop_assert!(match_spectra(&closed.predicted, &generic.predicted, 1e-8).unwrap().matched);
        let oracle = jacobi_eigs(closed.joined.adjacency(), 1e-14).unwrap();
        prop_assert!(match_spectra(&closed.predicted, &oracle.spectrum, 1e-8).unwrap().matched);
    }

    #[test]
    fn two_part_chain_equals_join(seed in any::<u64>()) {
        let mut r = rng(seed);
        let parts = [random_regular(&mut r), random_regular(&mut r)];
        let a = chain_join(&parts).unwrap();
        let b = join_all(&parts).unwrap();
        prop_assert_eq!(a.predicted, b.predicted);
        prop_assert_eq!(a.joined, b.joined);
    }

    #[test]
    fn match_verdict_is_symmetric(
        a in proptest::collection::vec(-3.0f64..3.0, 1..8),
        seed in any::<u64>(),
        tol in 0.0f64..1.5,
    ) {
        let mut r = rng(seed);
        let b: Vec<f64> = a.iter().map(|x| x + r.gen_range(-1.0..1.0)).collect();
        let sa = Spectrum::from_real(&a).unwrap();
        let sb = Spectrum::from_real(&b).unwrap();
        let ab = match_spectra(&sa, &sb, tol).unwrap();
        let ba = match_spectra(&sb, &sa, tol).unwrap();
        prop_assert_eq!(ab.matched, ba.matched);
        prop_assert_eq!(ab.max_pair_distance, ba.max_pair_distance);
        let mut seen = vec![false; a.len()];
        for &(_, o) in &ab.pairing {
            prop_assert!(!std::mem::replace(&mut seen[o], true));
        }
    }

    #[test]
    fn certification_accepts_closed_form_spectra(seed in any::<u64>(), n in 1usize..10) {
        let mut r = rng(seed);
        let tol = 1e-8;

        let d: Vec<f64> = (0..n).map(|_| r.gen_range(-3.0..3.0)).collect();
        let diag = DenseMatrix::from_diag(&d);
        prop_assert!(certify_eigenvalues(&diag, &Spectrum::from_real(&d).unwrap(), tol).unwrap().matched);

        let c: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
        let mut circ = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                circ[(i, j)] = c[(j + n - i) % n];
            }
        }
        let eigs: Spectrum = (0..n)
            .map(|l| {
                let w = Complex64::from_polar(1.0, 2.0 * PI * l as f64 / n as f64);
                c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &x| acc * w + x)
            })
            .collect();
        prop_assert!(certify_eigenvalues(&circ, &eigs, tol).unwrap().matched);

        let (a, b) = (r.gen_range(-2.0..2.0), r.gen_range(-1.0..1.0));
        let mut tri = DenseMatrix::zeros(n, n);
        for i in 0..n {
            tri[(i, i)] = a;
            if i + 1 < n {
                tri[(i, i + 1)] = b;
                tri[(i + 1, i)] = b;
            }
        }
        let eigs: Vec<f64> = (1..=n).map(|j| a + 2.0 * b * (j as f64 * PI / (n as f64 + 1.0)).cos()).collect();
        prop_assert!(certify_eigenvalues(&tri, &Spectrum::from_real(&eigs).unwrap(), tol).unwrap().matched);
    }
}
