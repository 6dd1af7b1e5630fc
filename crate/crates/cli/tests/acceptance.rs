use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specset::bounds::{
    curve_sample, gamma, gamma_k, h_sector, jordan_block, jordan_lower_demo, linear_grid, paulsen_crossovers, psi,
    shields_bound, shields_thm1_crossover, thm0_bound, thm1_upper,
};
use specset::decomposition::{decompose, pullback_check};
use specset::geometry::{in_all, GeneralizedDisk};
use specset::operator::{
    eigenvalues, identity, inverse, random_instance, random_rational, spectral_norm, ComplexMatrix, InstanceConfig,
    InstanceKind, ProblemInstance,
};
use specset::{ExtPoint, MoebiusMap, RationalFunction, Tessellation};
use specset_cli::campaign::{kernel_checks, verify_instance, KernelOptions, VerifyOptions};
use specset_cli::commands::{cmd_bounds, preset, BoundsArgs};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn criterion_1() -> Outcome {
    let checks = [
        ("thm0_bound(2)", thm0_bound(2), 2.0 + 2.0 / 3f64.sqrt(), 1e-10),
        ("thm1_upper(1)", thm1_upper(1.0).unwrap(), 2.0 + 2.0 / 3f64.sqrt(), 1e-10),
        ("gamma_1(R->1)", psi(1.0).unwrap(), 4.0 / 3.0, 1e-10),
        ("gamma_1(R->1+)", gamma_k(1.0 + 1e-12, 1).unwrap(), 4.0 / 3.0, 1e-10),
        ("gamma_1(R->inf)", psi(f64::INFINITY).unwrap(), 2.0, 1e-10),
        ("gamma_1(1e8)", gamma_k(1e8, 1).unwrap(), 2.0, 1e-10),
        ("gamma(1.0001)", gamma(1.0001, 1e-15).unwrap(), FRAC_PI_2, 1e-3),
        ("h_sector(pi/2)", h_sector(FRAC_PI_2).unwrap(), 2.0 / 3f64.sqrt(), 1e-10),
    ];
    let worst = checks.iter().map(|&(_, v, e, tol)| (v - e).abs() / tol).fold(0.0, f64::max);
    let failed: Vec<&str> = checks.iter().filter(|&&(_, v, e, tol)| (v - e).abs() > tol).map(|x| x.0).collect();
    outcome(failed.is_empty(), format!("{} constants, worst error/tol {worst:.2e}, failed {failed:?}", checks.len()))
}

fn criterion_2() -> Outcome {
    let cs = paulsen_crossovers().unwrap();
    let expect = [1.85443, 1.9878813, 2.0952978];
    let errs: Vec<f64> = cs.iter().zip(expect).map(|(c, e)| (c.r - e).abs()).collect();
    let pass = errs.iter().all(|&e| e < 1e-4);
    let roots: Vec<String> = cs.iter().map(|c| format!("{}={:.7}", c.name, c.r)).collect();
    outcome(pass, roots.join(", "))
}

fn criterion_3() -> Outcome {
    let kinds = [
        InstanceKind::Annulus { r: 1.5 },
        InstanceKind::Annulus { r: 3.0 },
        InstanceKind::Sector { theta: PI / 4.0 },
        InstanceKind::Strip,
        InstanceKind::Lens,
        InstanceKind::NDisks { k: 3 },
    ];
    let opts = KernelOptions::new(64, 1e-12);
    let mut min_eig = f64::INFINITY;
    let mut max_res: f64 = 0.0;
    let mut bad = 0;
    for i in 0..50u64 {
        let cfg = InstanceConfig::new(kinds[i as usize % kinds.len()], 2 + (i as usize % 7), 300 + i);
        let inst = random_instance(&cfg).unwrap();
        match kernel_checks(i as usize, &inst, &opts) {
            Ok(checks) => {
                for ch in checks {
                    if ch.name.starts_with("psd") {
                        min_eig = min_eig.min(ch.value);
                    } else {
                        max_res = max_res.max(ch.value);
                    }
                    bad += usize::from(!ch.ok() || ch.expected_fail);
                }
            }
            Err(_) => bad += 1,
        }
    }
    outcome(
        bad == 0 && min_eig >= -1e-10 && max_res < 1e-8,
        format!("50 instances, min eig(mu) {min_eig:.3e}, max ||int mu ds - I|| {max_res:.3e}"),
    )
}

/// `S diag(λ) S^-1` with eigenvalues drawn from the interior of `X`.
fn operator_in(disks: &[GeneralizedDisk], n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut lams = Vec::new();
    while lams.len() < n {
        let z = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        if disks.iter().all(|d| d.boundary_distance(z) > 0.1) {
            lams.push(z);
        }
    }
    let s = identity(n) + ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng) * 0.3);
    let d = ComplexMatrix::from_diagonal(&nalgebra_vec(&lams));
    &s * d * inverse(&s).unwrap()
}

fn nalgebra_vec(v: &[Complex64]) -> specset::operator::ComplexVector {
    specset::operator::ComplexVector::from_column_slice(v)
}

fn criterion_4() -> Outcome {
    let kinds = [
        InstanceKind::Annulus { r: 1.2 },
        InstanceKind::Annulus { r: 2.0 },
        InstanceKind::Annulus { r: 5.0 },
        InstanceKind::Sector { theta: PI / 6.0 },
        InstanceKind::Sector { theta: PI / 3.0 },
        InstanceKind::Strip,
        InstanceKind::Lens,
    ];
    let mut max_defect: f64 = 0.0;
    let mut runs = 0;
    let mut errors = 0;
    for kind in kinds {
        for seed in 0..20 {
            let mut cfg = InstanceConfig::new(kind, 2 + (seed as usize % 5), 1000 + seed);
            cfg.degree = 4;
            let inst = random_instance(&cfg).unwrap();
            match decompose(&inst.f, &inst.a, &inst.disks, 1e-10) {
                Ok(d) => max_defect = max_defect.max(d.defect),
                Err(_) => errors += 1,
            }
            runs += 1;
        }
    }
    let layout = preset("figure2").unwrap();
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + seed);
        let a = operator_in(&layout, 2 + (seed as usize % 4), &mut rng);
        let f = random_rational(&mut rng, &layout, 4);
        match decompose(&f.into(), &a, &layout, 1e-10) {
            Ok(d) => max_defect = max_defect.max(d.defect),
            Err(_) => errors += 1,
        }
        runs += 1;
    }
    outcome(errors == 0 && max_defect < 1e-7, format!("{runs} decompositions, {errors} errors, max defect {max_defect:.3e}"))
}

fn criterion_5() -> Outcome {
    let opts = VerifyOptions::new(1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut instances: Vec<ProblemInstance> = Vec::new();
    for i in 0..1000u64 {
        let kind = match i % 6 {
            0 => InstanceKind::Annulus { r: rng.random_range(1.1..5.0) },
            1 => InstanceKind::Sector { theta: rng.random_range(0.2..1.5) },
            2 => InstanceKind::Strip,
            3 => InstanceKind::Lens,
            4 => InstanceKind::NDisks { k: 2 },
            _ => InstanceKind::NDisks { k: 3 },
        };
        let mut cfg = InstanceConfig::new(kind, 2 + (i as usize % 4), 50_000 + i);
        cfg.block = 1 + (i as usize / 6) % 2;
        instances.push(random_instance(&cfg).unwrap());
    }
    use rayon::prelude::*;
    let results: Vec<_> = instances.par_iter().enumerate().map(|(i, inst)| verify_instance(i, inst, &opts)).collect();
    let mut violations = 0;
    let mut skipped = 0;
    let mut annulus_checked = 0;
    let mut max_ratio: f64 = 0.0;
    for r in &results {
        match r {
            Ok(checks) => {
                for ch in checks {
                    match ch.name.as_str() {
                        "theorem1" => violations += usize::from(!ch.pass),
                        "theorem2_annulus" => {
                            annulus_checked += 1;
                            violations += usize::from(!ch.pass);
                        }
                        "ratio" => max_ratio = max_ratio.max(ch.value),
                        _ => {}
                    }
                }
            }
            Err(_) => skipped += 1,
        }
    }
    outcome(
        violations == 0 && skipped == 0,
        format!(
            "1000 instances, {violations} violations, {skipped} skipped, {annulus_checked} annulus caps, max ratio {max_ratio:.4}"
        ),
    )
}

fn random_mobius(rng: &mut ChaCha8Rng) -> MoebiusMap {
    loop {
        let [a, b, cc, d] = [gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng)];
        if let Ok(m) = MoebiusMap::new(a, b, cc, d) {
            if (a * d - b * cc).norm() > 0.2 {
                return m;
            }
        }
    }
}

fn point_in(disks: &[GeneralizedDisk], near: Complex64, rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = near + gaussian(rng) * 2.0;
        if in_all(disks, ExtPoint::Finite(z), 0.0) {
            return z;
        }
    }
}

fn criterion_6() -> Outcome {
    let kinds =
        [InstanceKind::Annulus { r: 2.0 }, InstanceKind::Sector { theta: 0.8 }, InstanceKind::Strip, InstanceKind::Lens];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_pull: f64 = 0.0;
    let mut worst_cara: f64 = 0.0;
    let mut done = 0;
    let mut seed = 0;
    while done < 200 {
        seed += 1;
        let inst = random_instance(&InstanceConfig::new(kinds[done % kinds.len()], 3, 6000 + seed)).unwrap();
        let (dj, dk) = (inst.disks[0], inst.disks[1]);
        let ev = eigenvalues(&inst.a);
        let z = point_in(&inst.disks, ev[0], &mut rng);
        let phi = random_mobius(&mut rng);
        let pole = phi.pole();
        let pole_ok = match pole {
            ExtPoint::Infinity => true,
            ExtPoint::Finite(p) => ev.iter().chain([z].iter()).all(|&w| (w - p).norm() > 0.3),
        };
        if !pole_ok {
            continue;
        }
        let Ok(v) = pullback_check(&phi, z, &inst.a, &dj, &dk) else { continue };
        let w = phi.apply_finite(z).unwrap();
        let scale = {
            let a_img = specset::operator::mobius_of_matrix(&phi, &inst.a).unwrap();
            1.0f64.max(spectral_norm(&a_img)).max(spectral_norm(&inst.a)).max(phi.derivative(z).norm())
        };
        worst_pull = worst_pull.max(v / scale);
        for d in [dj, dk] {
            let lhs = d.image(&phi).unwrap().caratheodory_distance(ExtPoint::Finite(w)).unwrap();
            let rhs = phi.derivative(z).norm() * d.caratheodory_distance(ExtPoint::Finite(z)).unwrap();
            worst_cara = worst_cara.max((lhs - rhs).abs() / rhs.abs().max(1.0));
        }
        done += 1;
    }
    outcome(
        worst_pull < 1e-9 && worst_cara < 1e-10,
        format!("200 triples, max pullback residual {worst_pull:.3e}, max Caratheodory defect {worst_cara:.3e}"),
    )
}

fn criterion_7() -> Outcome {
    let f = RationalFunction::polynomial(vec![c(-1.0, 0.0), c(1.0, 0.0)]);
    let demo = jordan_lower_demo(2.0, &f).unwrap();
    let ratio_ok = (demo.ratio - 0.5).abs() < 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let r = rng.random_range(1.1..4.0);
        let deg = rng.random_range(1..=4);
        let mut coeffs: Vec<Complex64> = (0..=deg).map(|_| gaussian(&mut rng)).collect();
        let at_one: Complex64 = coeffs.iter().sum();
        coeffs[0] -= at_one;
        let g = RationalFunction::polynomial(coeffs);
        let a = jordan_block(r).unwrap();
        let t = r - 1.0 / r;
        let norm = spectral_norm(&g.eval_matrix(&a).unwrap());
        let f1 = g.eval(c(1.0, 0.0)).unwrap().norm();
        let expected = f1.max(t * g.derivative_at(c(1.0, 0.0)).unwrap().norm());
        worst = worst.max((norm - expected).abs() / expected.max(1.0));
    }
    let grid = linear_grid(1.01, 10.0, 200);
    let monotone = grid.windows(2).all(|w| gamma_k(w[1], 1).unwrap() > gamma_k(w[0], 1).unwrap());
    let above = grid.iter().all(|&r| gamma_k(r, 1).unwrap() > 4.0 / 3.0);
    outcome(
        ratio_ok && worst < 1e-12 && monotone && above,
        format!(
            "ratio {:.12}, max 2x2 identity defect {worst:.2e}, gamma_1 increasing {monotone}, gamma_1 > 4/3 {above}",
            demo.ratio
        ),
    )
}

fn criterion_8() -> Outcome {
    let csv = cmd_bounds(&BoundsArgs { rmin: 1.01, rmax: 10.0, steps: 200, out: None }).unwrap();
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    let crossovers = csv.lines().filter(|l| l.starts_with("# crossover")).count();
    let cross = shields_thm1_crossover().unwrap();
    let ordered = rows.iter().all(|r| {
        let (rr, sh, t1, g1, g) = (r[0], r[1], r[2], r[3], r[4]);
        let upper_ok = if rr < cross { sh > t1 } else { sh <= t1 };
        upper_ok && t1 > g && g >= g1 - 1e-12
    });
    let divergent = shields_bound(1.0 + 1e-8).unwrap() > 1e3 && rows[0][1] > rows[1][1];
    let sample = curve_sample(1.01).unwrap();
    let near_cap = (sample.thm1_upper - (2.0 + 2.0 / 3f64.sqrt())).abs() < 1e-3;

    let mut proper = Vec::new();
    for name in ["figure2", "figure3", "figure4"] {
        let t = Tessellation::build(&preset(name).unwrap()).unwrap();
        let n = t.median_arcs().iter().filter(|m| !m.arc.is_full()).count();
        proper.push((name, n, t.median_arcs().len()));
    }
    let annulus = Tessellation::build(&preset("annulus").unwrap()).unwrap();
    let unit_median = annulus.median_arcs().len() == 1
        && annulus.median_arcs()[0].arc.is_full()
        && (annulus.median_arcs()[0].arc.midpoint().finite().unwrap().norm() - 1.0).abs() < 1e-12;
    let tess_ok = proper.iter().all(|&(_, p, _)| p > 0) && unit_median;
    outcome(
        rows.len() == 200 && crossovers == 3 && ordered && divergent && near_cap && tess_ok,
        format!(
            "{} rows, {crossovers} crossovers, ordering {ordered} (shields/thm1_upper swap at R={cross:.6}), proper median arcs {proper:?}",
            rows.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("constants", criterion_1, Duration::from_secs(1)),
        ("paulsen crossovers", criterion_2, Duration::from_secs(1)),
        ("kernel laws", criterion_3, Duration::from_secs(30)),
        ("decomposition identity", criterion_4, Duration::from_secs(180)),
        ("theorem-1 campaign", criterion_5, Duration::from_secs(600)),
        ("moebius invariance", criterion_6, Duration::from_secs(60)),
        ("jordan lower bound", criterion_7, Duration::from_secs(60)),
        ("figure regeneration", criterion_8, Duration::from_secs(60)),
    ];
    let mut all = true;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed < *budget;
        all &= pass;
        println!(
            "criterion {} {name}: {} ({}; {:.2}s of {}s budget)",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
