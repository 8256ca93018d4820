//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use rand::Rng;
use spectral_forge::blockforge::{assemble, fiedler2, BlockSystem};
use spectral_forge::dstoch::{is_doubly_stochastic, join, DsJoinMode, DsJoinSpec};
use spectral_forge::graphspec::{
    chain_join, complete_multipartite, join_all, join_isomorphic_copies, Graph, RegularGraph,
};
use spectral_forge::nonneg::{check_nonnegative, circulant_realize, NonnegBlock};
use spectral_forge::numkit::{jacobi_eigs, qr_eigs_small};
use spectral_forge::verify::{audit, certify_eigenvalues, match_spectra, Construction};
use spectral_forge::{DenseMatrix, EigenPair, Spectrum, Tolerances};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle(m: &DenseMatrix) -> Spectrum {
    jacobi_eigs(m, 1e-14).expect("symmetric oracle").spectrum
}

fn symmetric_closure() -> Outcome {
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    for case in 0..200 {
        let k = r.gen_range(2..=5);
        let sys = random_symmetric_system(&mut r, k, 8);
        let a = assemble(&sys).map_err(|e| format!("case {case}: {e}"))?;
        let rep = match_spectra(&a.predicted, &oracle(&a.big), 1e-8).unwrap();
        worst = worst.max(rep.max_pair_distance);
        ensure(rep.matched, || format!("case {case}: distance {:e}", rep.max_pair_distance))?;
    }
    Ok(format!("200 systems, max pair distance {worst:.2e} <= 1e-8"))
}

fn nonsymmetric_defective() -> Outcome {
    let mut r = rng(2);
    let mut worst_ratio: f64 = 0.0;
    for case in 0..100 {
        let k = r.gen_range(2..=4);
        let sys = random_defective_system(&mut r, k, 6);
        let rho = sys.rho();
        ensure((0..k).any(|p| (0..k).any(|q| rho[(p, q)] != rho[(q, p)])), || {
            format!("case {case}: coupling came out symmetric")
        })?;
        let a = assemble(&sys).map_err(|e| format!("case {case}: {e}"))?;
        let rep = certify_eigenvalues(&a.big, &a.predicted, 1e-6).unwrap();
        let bound = rep.bound.unwrap();
        worst_ratio = worst_ratio.max(rep.max_pair_distance / bound);
        ensure(rep.matched, || format!("case {case}: residual {:e} > {bound:e}", rep.max_pair_distance))?;
    }
    Ok(format!("100 systems, worst residual/bound {worst_ratio:.2e}"))
}

fn two_block_reduction() -> Outcome {
    let mut r = rng(3);
    for case in 0..50 {
        let mut block = |n: usize| {
            let eigs: Vec<f64> = (0..n).map(|_| r.gen_range(-3.0..3.0)).collect();
            let (a, q) = symmetric_with_spectrum(&mut r, &eigs);
            let lead = r.gen_range(0..n);
            (a, Spectrum::from_real(&eigs).unwrap(), EigenPair::new(eigs[lead], q.col(lead)).unwrap())
        };
        let n1 = 1 + case % 5;
        let n2 = 1 + (case / 5) % 6;
        let (a, sa, u) = block(n1);
        let (b, sb, v) = block(n2);
        let rho: f64 = r.gen_range(0.0..2.0);
        let f = fiedler2(&a, &sa, &u, &b, &sb, &v, rho, 0.0, 0.0).map_err(|e| e.to_string())?;
        let sys = BlockSystem::new(
            vec![a.clone(), b.clone()],
            vec![u.clone(), v.clone()],
            vec![sa, sb],
            DenseMatrix::from_rows(&[[0.0, rho], [rho, 0.0]]).unwrap(),
        )
        .map_err(|e| e.to_string())?;
        let g = assemble(&sys).map_err(|e| e.to_string())?;
        ensure(f.big == g.big, || format!("case {case}: fiedler2 and assemble differ"))?;

        let mut hand = DenseMatrix::zeros(n1 + n2, n1 + n2);
        hand.set_block(0, 0, &a);
        hand.set_block(n1, n1, &b);
        for i in 0..n1 {
            for j in 0..n2 {
                hand[(i, n1 + j)] = rho * u.vector[i] * v.vector[j];
                hand[(n1 + j, i)] = rho * v.vector[j] * u.vector[i];
            }
        }
        ensure(f.big == hand, || format!("case {case}: differs from the hand-built matrix"))?;
    }
    Ok("50 instances equal entrywise".into())
}

fn circulant_coupling() -> Outcome {
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    for k in 2..=4 {
        for case in 0..10 {
            let blocks: Vec<_> = (0..k)
                .map(|_| NonnegBlock::new(DenseMatrix::zeros(1, 1), Spectrum::from_real(&[0.0]).unwrap()))
                .collect();
            let row: Vec<f64> = (0..k).map(|_| r.gen_range(0.0..2.0)).collect();
            let out = circulant_realize(&blocks, &row).map_err(|e| format!("k={k} case {case}: {e}"))?;
            let predicted: Spectrum = out.circulant_eigs.iter().copied().collect();
            let qr = qr_eigs_small(&out.assembled.small).unwrap();
            let rep = match_spectra(&predicted, &qr, 1e-8).unwrap();
            worst = worst.max(rep.max_pair_distance);
            ensure(rep.matched, || format!("k={k} case {case}: distance {:e}", rep.max_pair_distance))?;
            for l in 0..k {
                let z = out.circulant_eigs[l];
                let w = out.circulant_eigs[(k - l) % k];
                ensure((z - w.conj()).norm() < 1e-12, || format!("k={k}: p(w^{l}) not conjugate to its mirror"))?;
            }
            ensure(check_nonnegative(&out.assembled.big, 0.0).is_ok(), || format!("k={k}: negative entry"))?;
        }
    }
    Ok(format!("k = 2, 3, 4 (10 each), max distance to QR {worst:.2e}"))
}

fn ds_case(label: &str, t1: DenseMatrix, s1: Spectrum, t2: DenseMatrix, s2: Spectrum, alpha: f64, rho: f64) -> Result<(), String> {
    let spec = DsJoinSpec::new(t1, t2, s1, s2, alpha, rho).map_err(|e| format!("{label}: {e}"))?;
    let tol = Tolerances::default();
    for mode in [DsJoinMode::Scaled, DsJoinMode::Affine] {
        let d = join(&spec, mode).map_err(|e| format!("{label} {mode:?}: {e}"))?;
        let ds = is_doubly_stochastic(&d.matrix, 1e-10);
        ensure(ds.ok, || format!("{label} {mode:?}: not doubly stochastic ({:e})", ds.worst_residual))?;
        let rep = audit(label, Construction::DsJoin { spec: &spec, mode }, &d.matrix, &d.predicted, &tol);
        ensure(rep.passed(), || format!("{label} {mode:?}:\n{}", rep.to_text()))?;
    }
    Ok(())
}

fn doubly_stochastic_joins() -> Outcome {
    let mut r = rng(5);
    let mut symmetric = 0;
    for case in 0..100 {
        let m = r.gen_range(1..=6);
        let n = r.gen_range(m..=8);
        let sym = case % 2 == 0;
        symmetric += sym as usize;
        let t1 = random_doubly_stochastic(&mut r, m, sym);
        let t2 = random_doubly_stochastic(&mut r, n, sym);
        let (alpha, rho) = (r.gen_range(0.0..2.0), r.gen_range(0.0..2.0));
        let (s1, s2) = (ds_spectrum(&t1), ds_spectrum(&t2));
        ds_case(&format!("case {case}"), t1, s1, t2, s2, alpha, rho)?;
    }
    let (td, sd) = defective_doubly_stochastic();
    for (i, n) in [3usize, 5, 8].into_iter().enumerate() {
        let t2 = random_doubly_stochastic(&mut r, n, false);
        let s2 = ds_spectrum(&t2);
        ds_case(&format!("defective {i}"), td.clone(), sd.clone(), t2, s2, 0.7, 1.3)?;
    }
    ds_case("defective pair", td.clone(), sd.clone(), td, sd, 0.4, 0.9)?;
    Ok(format!("100 pairs ({symmetric} symmetric) x 2 modes, plus 4 with a defective T1"))
}

fn multipartite_energies() -> Outcome {
    let e33 = complete_multipartite(&[3, 3]).map_err(|e| e.to_string())?;
    let e222 = complete_multipartite(&[2, 2, 2]).map_err(|e| e.to_string())?;
    ensure((e33.energy - 6.0).abs() <= 1e-10, || format!("E(K_3,3) = {}", e33.energy))?;
    ensure((e222.energy - 8.0).abs() <= 1e-10, || format!("E(K_2,2,2) = {}", e222.energy))?;
    for res in [&e33, &e222] {
        let o: f64 = oracle(res.joined.adjacency()).values().iter().map(|z| z.norm()).sum();
        ensure((o - res.energy).abs() <= 1e-10, || format!("oracle energy {o} vs {}", res.energy))?;
    }
    let k23 = complete_multipartite(&[2, 3]).map_err(|e| e.to_string())?;
    let r6 = 6f64.sqrt();
    let closed = Spectrum::from_real(&[r6, 0.0, 0.0, 0.0, -r6]).unwrap();
    let rep = match_spectra(&k23.predicted, &oracle(k23.joined.adjacency()), 1e-10).unwrap();
    ensure(rep.matched, || format!("K_2,3 distance {:e}", rep.max_pair_distance))?;
    ensure(match_spectra(&k23.predicted, &closed, 1e-10).unwrap().matched, || "K_2,3 closed form".into())?;
    Ok(format!(
        "E(K_3,3) = {:.12}, E(K_2,2,2) = {:.12}, K_2,3 distance {:.1e}",
        e33.energy, e222.energy, rep.max_pair_distance
    ))
}

fn isomorphic_copies() -> Outcome {
    let c4 = RegularGraph::new(Graph::cycle(4).unwrap()).unwrap();
    let spec = c4.graph().spectrum().unwrap();
    let out = join_isomorphic_copies(&c4, &spec, 3).map_err(|e| e.to_string())?;
    let mut listed = vec![10.0, -2.0, -2.0];
    for _ in 0..3 {
        listed.extend([0.0, 0.0, -2.0]);
    }
    let listed = Spectrum::from_real(&listed).unwrap();
    ensure(match_spectra(&out.predicted, &listed, 1e-12).unwrap().matched, || "predicted differs from list".into())?;
    let rep = match_spectra(&out.predicted, &oracle(out.joined.adjacency()), 1e-8).unwrap();
    ensure(rep.matched, || format!("oracle distance {:e}", rep.max_pair_distance))?;
    ensure((out.energy - 20.0).abs() <= 1e-8, || format!("energy {}", out.energy))?;
    Ok(format!("12x12 oracle distance {:.1e}, energy {:.12}", rep.max_pair_distance, out.energy))
}

fn chain_of_empty_graphs() -> Outcome {
    let parts: Vec<_> = (0..3).map(|_| RegularGraph::new(Graph::empty(2).unwrap()).unwrap()).collect();
    let out = chain_join(&parts).map_err(|e| e.to_string())?;
    let closed: f64 = (1..=3).map(|j| (4.0 * (j as f64 * PI / 4.0).cos()).abs()).sum();
    let target = 4.0 * 2f64.sqrt();
    ensure((closed - target).abs() < 1e-12, || format!("closed form {closed}"))?;
    ensure((out.energy - target).abs() <= 1e-10, || format!("energy {}", out.energy))?;
    let o: f64 = oracle(out.joined.adjacency()).values().iter().map(|z| z.norm()).sum();
    ensure((o - target).abs() <= 1e-10, || format!("oracle energy {o}"))?;
    Ok(format!("energy {:.12} vs 4 sqrt(2) = {target:.12}", out.energy))
}

fn energy_identity() -> Outcome {
    let mut r = rng(9);
    let mut worst: f64 = 0.0;
    for case in 0..50 {
        let k = r.gen_range(2..=5);
        let parts: Vec<_> = (0..k)
            .map(|_| {
                let g = match r.gen_range(0..3) {
                    0 => Graph::cycle(r.gen_range(3..=7)),
                    1 => Graph::complete(r.gen_range(1..=6)),
                    _ => Graph::empty(r.gen_range(1..=6)),
                };
                RegularGraph::new(g.unwrap()).unwrap()
            })
            .collect();
        let out = join_all(&parts).map_err(|e| format!("case {case}: {e}"))?;
        let n = out.joined.n() as f64;
        let gap = (out.energy - out.energy_identity().map_err(|e| e.to_string())?).abs();
        worst = worst.max(gap / n);
        ensure(gap <= 1e-8 * n, || format!("case {case}: gap {gap:e}"))?;
    }
    Ok(format!("50 joins, worst gap/n {worst:.2e} <= 1e-8"))
}

fn negative_control() -> Outcome {
    let mut r = rng(10);
    let tol = Tolerances::default();
    let mut caught = 0;
    let mut spectrum_caught = 0;

    let mut check = |label: &str, c: Construction<'_>, m: &DenseMatrix, p: &Spectrum, r: &mut rand_chacha::ChaCha8Rng| {
        let clean = audit(label, c, m, p, &tol);
        ensure(clean.passed(), || format!("{label}: clean audit failed\n{}", clean.to_text()))?;
        let mut bad = m.clone();
        let (i, j) = (r.gen_range(0..m.rows()), r.gen_range(0..m.cols()));
        bad[(i, j)] += 1e-3;
        let rep = audit(label, c, &bad, p, &tol);
        ensure(!rep.passed(), || format!("{label}: perturbation at ({i}, {j}) not detected"))?;
        caught += 1;
        spectrum_caught += rep.check("spectrum").map_or(false, |c| !c.passed) as usize;
        Ok::<(), String>(())
    };

    for _ in 0..10 {
        let sys = random_symmetric_system(&mut r, 3, 5);
        let a = assemble(&sys).unwrap();
        check("symmetric blocks", Construction::Blocks(&sys), &a.big, &a.predicted, &mut r)?;

        let sys = random_defective_system(&mut r, 3, 4);
        let a = assemble(&sys).unwrap();
        check("defective blocks", Construction::Blocks(&sys), &a.big, &a.predicted, &mut r)?;

        let t1 = random_doubly_stochastic(&mut r, 3, false);
        let t2 = random_doubly_stochastic(&mut r, 4, false);
        let spec = DsJoinSpec::new(t1.clone(), t2.clone(), ds_spectrum(&t1), ds_spectrum(&t2), 0.5, 1.0).unwrap();
        let mode = DsJoinMode::Scaled;
        let d = join(&spec, mode).unwrap();
        check("ds join", Construction::DsJoin { spec: &spec, mode }, &d.matrix, &d.predicted, &mut r)?;

        let sizes: Vec<usize> = (0..3).map(|_| r.gen_range(1..=4)).collect();
        let g = complete_multipartite(&sizes).unwrap();
        check("graph join", Construction::GraphJoin(&g), g.joined.adjacency(), &g.predicted, &mut r)?;

        let sys = random_symmetric_system(&mut r, 2, 4);
        let a = assemble(&sys).unwrap();
        check("bare matrix", Construction::Matrix, &a.big, &a.predicted, &mut r)?;
    }
    Ok(format!("{caught}/{caught} perturbed audits failed ({spectrum_caught} via the spectrum check itself)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("symmetric block systems match the Jacobi oracle", symmetric_closure),
        ("nonsymmetric and defective systems certify by determinant residual", nonsymmetric_defective),
        ("two-block construction equals general assembly", two_block_reduction),
        ("circulant coupling eigenvalues and nonnegativity", circulant_coupling),
        ("doubly stochastic joins", doubly_stochastic_joins),
        ("complete multipartite energies and spectrum", multipartite_energies),
        ("join of isomorphic copies of C4", isomorphic_copies),
        ("chain join of empty graphs", chain_of_empty_graphs),
        ("join energy identity", energy_identity),
        ("negative control", negative_control),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {:>2}. {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {:>2}. {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
