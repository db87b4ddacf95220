//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines always show up in
//! `cargo test` output. The process fails when a criterion fails unless it is
//! listed in `KNOWN_FAILURES`, and also when a listed failure starts passing
//! or changes its measured value, so the list cannot go stale.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use limitroots::verify::{self, Budgets};
use limitroots::{
    classify, enumerate, fundamental_weights, power_dynamics, sample_limit_roots, to_chart, word_limit_root,
    CoxeterGraph, Kind, PeriodicWord, SampleOptions, SpectralOptions, System,
};
use nalgebra::DVector;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that fail for a documented reason, with the measurement that the
/// analysis explains.
const KNOWN_FAILURES: [(u32, &str); 1] = [(2, "hyperbolic 120")];

struct Outcome {
    passed: bool,
    detail: String,
}

fn sys(name: &str) -> System {
    System::new(CoxeterGraph::builtin(name).expect("built-in graph")).expect("valid system")
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn criterion1() -> Outcome {
    let t = Instant::now();
    let s = sys("fig8");
    let sig = s.signature();
    let w = limitroots::element_of(&s, &[0, 1, 3, 4]).unwrap();
    let mut moduli: Vec<f64> = limitroots::linalg::complex_eigenvalues(w.matrix())
        .iter()
        .map(|z| if z.im.abs() < 1e-6 { z.re } else { f64::NAN })
        .collect();
    moduli.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let r = 3f64.sqrt();
    let expected = [7.0 - 4.0 * r, 7.0 - 4.0 * r, 1.0, 7.0 + 4.0 * r, 7.0 + 4.0 * r];
    let err = moduli.iter().zip(expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let elapsed = t.elapsed();
    let sig_ok = (sig.positive, sig.negative) == (3, 2);
    Outcome {
        passed: sig_ok && err <= 1e-8 && elapsed < Duration::from_secs(1),
        detail: format!("signature {sig}, eigenvalue error {err:.1e} (≤ 1e-8), {}", secs(elapsed)),
    }
}

fn criterion2() -> Outcome {
    let t = Instant::now();
    let s = sys("universal3:1");
    let store = enumerate(&s, 6).unwrap();
    let mut counts = Vec::new();
    for eps in [1e-8, 1e-6, 1e-4] {
        let count = |kind| {
            let opts = SampleOptions {
                dedup_eps: eps,
                only: Some(kind),
                ..Default::default()
            };
            sample_limit_roots(&s, &store, 0..=6, 0..=0, &opts).unwrap().points.len()
        };
        counts.push((count(Kind::Parabolic), count(Kind::Hyperbolic)));
    }
    let elapsed = t.elapsed();
    let stable = counts.windows(2).all(|w| w[0] == w[1]);
    let (p, h) = counts[0];
    Outcome {
        passed: stable && p == 12 && h == 126 && elapsed < Duration::from_secs(10),
        detail: format!(
            "parabolic {p} (12), hyperbolic {h} (126), stable over eps: {stable}, {}",
            secs(elapsed)
        ),
    }
}

fn criterion3() -> Outcome {
    let cases: [(&str, usize, usize, usize); 4] = [
        ("universal3:1", 2, 4, 4),
        ("universal3:1.1", 2, 4, 4),
        ("fig1a", 3, 4, 9),
        ("fig1b", 2, 4, 5),
    ];
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, min_core, core, conj) in cases {
        let b = Budgets {
            min_core,
            core,
            conj,
            ..Default::default()
        };
        let r = verify::isotropy(&sys(name), &b).unwrap();
        passed &= r.passed;
        parts.push(format!(
            "{name}: |B(x,x)| ≤ {:.1e}, hull {:.1e}",
            r.checks[0].measured, r.checks[1].measured
        ));
    }
    Outcome {
        passed,
        detail: parts.join("; "),
    }
}

fn criterion4() -> Outcome {
    let r = verify::density(&sys("universal3:1"), &Budgets::default()).unwrap();
    let detail = r
        .checks
        .iter()
        .map(|c| format!("{} = {:.4} (≤ {:.4})", c.name, c.measured, c.threshold))
        .collect::<Vec<_>>()
        .join("; ");
    Outcome {
        passed: r.passed,
        detail,
    }
}

fn criterion5() -> Outcome {
    let pairs = verify::sandwich_pairs(&sys("universal3:1.1"), 5).unwrap();
    let angle = pairs.iter().map(|p| p.mismatch).fold(0.0, f64::max);
    let approach = pairs.iter().map(|p| p.approach).fold(0.0, f64::max);
    Outcome {
        passed: !pairs.is_empty() && angle < 1e-7 && approach <= 1e-5,
        detail: format!(
            "{} space-like pairs, max principal sine {angle:.1e} (< 1e-7), max approach {approach:.1e} (≤ 1e-5)",
            pairs.len()
        ),
    }
}

/// A random base of the requested causal type with `B(y, x⁻) ≠ 0`.
fn random_base(s: &System, rng: &mut ChaCha8Rng, kind: usize, x_minus: &DVector<f64>) -> DVector<f64> {
    let n = s.rank();
    loop {
        let v = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let y = match kind {
            0 if s.bilinear(&v, &v) < -1e-3 => v,
            1 if s.bilinear(&v, &v) > 1e-3 => v,
            2 => {
                // t + a·d on the cone, for time-like t
                let t = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
                let (tt, td, dd) = (s.bilinear(&t, &t), s.bilinear(&t, &v), s.bilinear(&v, &v));
                if tt >= -1e-3 {
                    continue;
                }
                let disc = td * td - tt * dd;
                t + v * ((-td + disc.sqrt()) / dd)
            }
            _ => continue,
        };
        if s.bilinear(&y, x_minus).abs() > 1e-3 * y.norm() * x_minus.norm() {
            return y;
        }
    }
}

fn criterion6() -> Outcome {
    let s = sys("universal3:1");
    let store = enumerate(&s, 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20_260_418);
    let mut pool: Vec<_> = store.in_range(1..=8).iter().collect();
    pool.shuffle(&mut rng);
    let mut worst = 0.0f64;
    let mut to_eigen = 0.0f64;
    let mut used = 0;
    for w in pool {
        let Ok(sc) = classify(&s, w) else { continue };
        let Some(h) = sc.hyperbolic.as_ref() else { continue };
        let steps = (30.0 / h.lambda.ln()).ceil() as usize + 5;
        let mut limits = Vec::new();
        for b in 0..10 {
            let y = random_base(&s, &mut rng, b % 3, &h.x_minus);
            let traj = power_dynamics(&s, w.matrix(), &y, steps).unwrap();
            limits.push(traj.last().unwrap().clone());
        }
        for (i, a) in limits.iter().enumerate() {
            for b in &limits[i + 1..] {
                worst = worst.max(a.distance(b).unwrap_or(f64::INFINITY));
            }
        }
        let x = to_chart(s.form(), &h.x_plus).unwrap();
        to_eigen = to_eigen.max(limits[0].distance(&x).unwrap_or(f64::INFINITY));
        used += 1;
        if used == 100 {
            break;
        }
    }
    Outcome {
        passed: used == 100 && worst <= 1e-6,
        detail: format!("{used} elements × 10 bases, max pairwise distance {worst:.1e} (≤ 1e-6), max distance to x⁺ {to_eigen:.1e}"),
    }
}

fn criterion7() -> Outcome {
    let mut names: Vec<&str> = CoxeterGraph::BUILTIN_NAMES.to_vec();
    names.extend(["universal3:1", "universal3:1.1"]);
    let mut passed = true;
    let mut delta = 0.0f64;
    for name in &names {
        let r = verify::weights(&sys(name), 3).unwrap();
        delta = delta.max(r.checks[0].measured);
        passed &= r.checks[0].passed;
    }
    let u = sys("universal3:1.1");
    // ω_s = B⁻¹ e_s, with B(ω, ω) = 5/126 for every s
    let norms: Vec<f64> = fundamental_weights(&u)
        .unwrap()
        .iter()
        .map(|w| u.bilinear(&w.vector, &w.vector))
        .collect();
    let norm_err = norms.iter().map(|b| (b - 0.039683).abs()).fold(0.0f64, f64::max);
    let r = verify::weights(&u, 5).unwrap();
    let coincide = r.checks.get(1).map_or(f64::INFINITY, |c| c.measured);
    passed &= norms.iter().all(|b| *b > 0.0) && norm_err <= 1e-6 && coincide <= 1e-7;
    Outcome {
        passed,
        detail: format!(
            "δ error {delta:.1e} on {} graphs (≤ 1e-10); universal3:1.1 B(ω,ω) within {norm_err:.1e} of 0.039683, distance to an intersection {coincide:.1e} (≤ 1e-7)",
            names.len()
        ),
    }
}

fn criterion8() -> Outcome {
    let s = sys("universal3:1");
    let opts = SpectralOptions::default();
    let limit = |period: Vec<usize>| word_limit_root(&s, &PeriodicWord::new(vec![], period).unwrap(), 50, &opts).unwrap();
    let stu = limit(vec![0, 1, 2]);
    let lambda = stu.lambda.unwrap_or(f64::NAN);
    let lambda_err = (lambda - (9.0 + 4.0 * 5f64.sqrt())).abs();
    let st = limit(vec![0, 1]);
    let ts = limit(vec![1, 0]);
    let half = DVector::from_vec(vec![0.5, 0.5, 0.0]);
    let st_err = (st.point.coords() - &half).amax().max((ts.point.coords() - &half).amax());
    Outcome {
        passed: stu.kind == Kind::Hyperbolic && lambda_err <= 1e-8 && stu.residual <= 1e-6 && st_err <= 1e-12,
        detail: format!(
            "stu: λ error {lambda_err:.1e} (≤ 1e-8), prefix-orbit residual {:.1e} (≤ 1e-6); st, ts off (0.5, 0.5, 0) by {st_err:.1e}",
            stu.residual
        ),
    }
}

fn criterion9() -> Outcome {
    let t = Instant::now();
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, core, conj, reference) in [("fig1a", 3..=4, 1..=9, 30080), ("fig1b", 2..=4, 1..=5, 28019)] {
        let s = sys(name);
        let store = enumerate(&s, *conj.end()).unwrap();
        let counts: Vec<usize> = [1e-8, 1e-7, 1e-6, 1e-5]
            .iter()
            .map(|&eps| {
                let opts = SampleOptions {
                    dedup_eps: eps,
                    ..Default::default()
                };
                sample_limit_roots(&s, &store, core.clone(), conj.clone(), &opts).unwrap().points.len()
            })
            .collect();
        let stable = counts.windows(2).all(|w| w[0] == w[1]);
        passed &= stable;
        parts.push(format!("{name}: {counts:?} (reference {reference})"));
    }
    let elapsed = t.elapsed();
    passed &= elapsed < Duration::from_secs(600);
    Outcome {
        passed,
        detail: format!("{}, {}", parts.join("; "), secs(elapsed)),
    }
}

fn main() -> ExitCode {
    // `cargo test -- --list` and filters are harness options; ignore them.
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion1),
        (2, criterion2),
        (3, criterion3),
        (4, criterion4),
        (5, criterion5),
        (6, criterion6),
        (7, criterion7),
        (8, criterion8),
        (9, criterion9),
    ];
    let mut unexpected = Vec::new();
    for (k, run) in criteria {
        let o = run();
        let known = KNOWN_FAILURES.iter().find(|(id, _)| *id == k);
        let tag = match (o.passed, known) {
            (true, None) => "PASS",
            (false, Some((_, m))) if o.detail.contains(m) => "FAIL (known)",
            (true, Some(_)) => {
                unexpected.push(format!("criterion {k} now passes; drop it from KNOWN_FAILURES"));
                "PASS"
            }
            _ => {
                unexpected.push(format!("criterion {k}"));
                "FAIL"
            }
        };
        println!("{tag} criterion {k}: {}", o.detail);
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("unexpected: {}", unexpected.join(", "));
        ExitCode::FAILURE
    }
}
