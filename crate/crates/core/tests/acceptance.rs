//! Acceptance gate: twelve criteria, one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::Instant;

use hilbert_interp::catalog::{
    karamata_members, log_uniform, random_distribution, random_indexed, random_qsv,
};
use hilbert_interp::charts::{
    equivalence_study, rectify, sew, AtlasConfig, ChartAtlas, CircleFunction,
};
use hilbert_interp::couple::{
    duality_check, product_norm_check, reiteration_check, two_point_counterexample,
    uniform_bound_sweep, SpectralCouple, SpectralVector, SweepOptions,
};
use hilbert_interp::elliptic::{calculus_check, lifting_check, EllipticOperator};
use hilbert_interp::hormander::{interpolation_identity_check, SmoothnessIndex};
use hilbert_interp::param::{default_grid, parse, quasiconcavity_certificate, ParamFn};
use hilbert_interp::rng::instance_rng;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_241_015;

struct Outcome {
    ok: bool,
    detail: String,
}

fn vector(rng: &mut ChaCha8Rng, n: usize) -> SpectralVector {
    SpectralVector(
        (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

fn couple(rng: &mut ChaCha8Rng, n: usize) -> SpectralCouple {
    SpectralCouple::new(log_uniform(rng, n, 1.0, 1e8), 1.0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn reiteration() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let mut rng = instance_rng(SEED, 100_000 + i);
        let n = rng.gen_range(1..=128);
        let c = couple(&mut rng, n);
        let u = vector(&mut rng, n);
        let f = random_indexed(&mut rng, 0.0, 0.5);
        let g = f.clone() * random_indexed(&mut rng, 0.25, 1.0);
        let psi = random_indexed(&mut rng, 0.0, 1.0);
        let cmp = reiteration_check(&c, &f, &g, &psi, &u).unwrap();
        worst = worst.max(rel(cmp.lhs, cmp.rhs));
    }
    Outcome {
        ok: worst <= 1e-12,
        detail: format!("1000 instances, max rel diff {worst:.3e}"),
    }
}

fn duality() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let mut rng = instance_rng(SEED, 200_000 + i);
        let n = rng.gen_range(1..=128);
        let c = couple(&mut rng, n);
        let u = vector(&mut rng, n);
        let psi = random_indexed(&mut rng, 0.0, 0.75);
        let cmp = duality_check(&c, &psi, &u).unwrap();
        worst = worst.max(rel(cmp.lhs, cmp.rhs));
    }
    Outcome {
        ok: worst <= 1e-12,
        detail: format!("1000 instances, max rel diff {worst:.3e}"),
    }
}

fn products() -> Outcome {
    let mut mismatches = 0;
    for i in 0..200 {
        let mut rng = instance_rng(SEED, 300_000 + i);
        let parts = rng.gen_range(1..=4);
        let cs: Vec<_> = (0..parts)
            .map(|_| {
                let k = rng.gen_range(1..=32);
                couple(&mut rng, k)
            })
            .collect();
        let us: Vec<_> = cs.iter().map(|c| vector(&mut rng, c.dim())).collect();
        let psi = random_indexed(&mut rng, 0.0, 1.0);
        let cmp = product_norm_check(&cs, 1.0, &psi, &us).unwrap();
        if cmp.lhs.to_bits() != cmp.rhs.to_bits() {
            mismatches += 1;
        }
    }
    Outcome {
        ok: mismatches == 0,
        detail: format!("200 instances, {mismatches} not bit-identical"),
    }
}

fn two_point() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..50 {
        let mut rng = instance_rng(SEED, 400_000 + i);
        let psi = random_indexed(&mut rng, -1.0, 2.0);
        let s = 1.0 + rng.gen_range(1e-3..1e6);
        let t = 1.0 + rng.gen_range(1e-3..1e6);
        let tp = two_point_counterexample(&psi, s, t).unwrap();
        let closed = psi.eval(t).unwrap() / psi.eval(s).unwrap();
        worst = worst.max(rel(tp.norm_ratio_operator, closed));
    }
    Outcome {
        ok: worst <= 1e-12,
        detail: format!("50 triples, max rel diff {worst:.3e}"),
    }
}

fn necessity() -> Outcome {
    let tp = two_point_counterexample(&ParamFn::power(2.0), 3.0, 3000.0).unwrap();
    let err = rel(tp.bound_ratio, 1e3);
    Outcome {
        ok: err <= 1e-9,
        detail: format!(
            "psi = t^2, t/s = 1e3: bound ratio {:.15e}, rel diff {err:.3e}",
            tp.bound_ratio
        ),
    }
}

fn uniform_bound() -> Outcome {
    let mut worst = 0.0f64;
    for (i, th) in [0.25, 0.5, 0.75].into_iter().enumerate() {
        let opts = SweepOptions {
            trials: 500,
            seed: SEED + i as u64,
            ..SweepOptions::default()
        };
        let rep = uniform_bound_sweep(&ParamFn::power(th), 1.0, &opts).unwrap();
        worst = worst.max(rep.max_observed_c);
    }
    Outcome {
        ok: worst <= 1.0 + 1e-6,
        detail: format!("3 x 500 operators, max observed c {worst:.15}"),
    }
}

fn torus_interpolation() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..500 {
        let mut rng = instance_rng(SEED, 700_000 + i);
        let n = rng.gen_range(1..=2);
        let band = rng.gen_range(1..=64);
        let u = random_distribution(&mut rng, n, band, 64);
        let idx = SmoothnessIndex::new(rng.gen_range(-4.0..4.0), random_qsv(&mut rng)).unwrap();
        let eps = rng.gen_range(0.05..3.0);
        let delta = rng.gen_range(0.05..3.0);
        let cmp = interpolation_identity_check(&u, &idx, eps, delta).unwrap();
        worst = worst.max(rel(cmp.lhs, cmp.rhs));
    }
    Outcome {
        ok: worst <= 1e-12,
        detail: format!("500 instances, max rel diff {worst:.3e}"),
    }
}

fn elliptic() -> Outcome {
    let a = EllipticOperator::default();
    let (mut calc, mut iso) = (0.0f64, 0.0f64);
    for i in 0..500 {
        let mut rng = instance_rng(SEED, 800_000 + i);
        let n = rng.gen_range(1..=2);
        let band = rng.gen_range(1..=64);
        let u = random_distribution(&mut rng, n, band, 64);
        let idx = SmoothnessIndex::new(rng.gen_range(-4.0..4.0), random_qsv(&mut rng)).unwrap();
        let c = calculus_check(&u, &idx).unwrap();
        calc = calc.max(rel(c.lhs, c.rhs));
        let c = lifting_check(&a, &u, &idx).unwrap();
        iso = iso.max(rel(c.lhs, c.rhs));
    }
    Outcome {
        ok: calc <= 1e-12 && iso <= 1e-12,
        detail: format!("500 instances, calculus {calc:.3e}, lifting {iso:.3e}"),
    }
}

fn kt_identity() -> Outcome {
    let atlas = ChartAtlas::new(AtlasConfig::default()).unwrap();
    let m = atlas.config().circle_points;
    let mut worst = 0.0f64;
    for i in 0..100 {
        let mut rng = instance_rng(SEED, 900_000 + i);
        let band = rng.gen_range(1..=32);
        let f = CircleFunction::spectral(random_distribution(&mut rng, 1, band, 24)).unwrap();
        let back = sew(&atlas, &rectify(&atlas, &f).unwrap())
            .unwrap()
            .to_samples(m)
            .unwrap();
        let want = f.to_samples(m).unwrap();
        for (x, y) in back.iter().zip(&want) {
            worst = worst.max((x - y).norm());
        }
    }
    Outcome {
        ok: worst <= 1e-8,
        detail: format!("100 functions, K <= 32, M = {m}: max error {worst:.3e}"),
    }
}

fn chart_equivalence() -> Outcome {
    let atlas = ChartAtlas::new(AtlasConfig::default()).unwrap();
    let fine = atlas
        .with_line_points(2 * atlas.config().line_points)
        .unwrap();
    let fam: Vec<_> = (0..=16)
        .map(|k| CircleFunction::mode(k, Complex64::new(1.0, 0.0)).unwrap())
        .collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for s in [0.0, 1.0] {
        let idx = SmoothnessIndex::sobolev(s);
        let a = equivalence_study(&atlas, &fam, &idx).unwrap();
        let b = equivalence_study(&fine, &fam, &idx).unwrap();
        let drift = rel(a.ratio_min, b.ratio_min).max(rel(a.ratio_max, b.ratio_max));
        ok &= a.spread() <= 10.0 && drift <= 1e-2;
        parts.push(format!(
            "s={s}: spread {:.4}, refinement drift {drift:.1e}",
            a.spread()
        ));
    }
    Outcome {
        ok,
        detail: parts.join("; "),
    }
}

fn karamata() -> Outcome {
    let t = 1e9;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let members = karamata_members();
    for f in &members {
        for l in [0.5, 2.0, 10.0] {
            let r = f.eval(l * t).unwrap() / f.eval(t).unwrap();
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    Outcome {
        ok: lo >= 0.95 && hi <= 1.05,
        detail: format!(
            "{} catalog members: ratios in [{lo:.6}, {hi:.6}]",
            members.len()
        ),
    }
}

fn quasiconcavity() -> Outcome {
    let grid = default_grid();
    let mut worst = 0.0f64;
    for i in 0..=20 {
        let psi = ParamFn::power(i as f64 / 20.0);
        worst = worst.max(
            quasiconcavity_certificate(&psi, 0.0, &grid)
                .unwrap()
                .c_estimate,
        );
    }
    let mut weakest = f64::INFINITY;
    for src in [
        "pow(2)",
        "pow(-0.5)",
        "compose(pow(-0.5), pow(2))",
        "pow(-0.5) * logms(1)",
    ] {
        let cert = quasiconcavity_certificate(&parse(src).unwrap(), 0.0, &grid).unwrap();
        let g = &cert.nested_growth;
        weakest = weakest.min(g[g.len() - 1] / g[g.len() - 2]);
    }
    Outcome {
        ok: worst <= 1.0 + 1e-9 && weakest > 1.05,
        detail: format!("powers: max c {worst:.12}; violators: min nested growth {weakest:.4}"),
    }
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome, Option<f64>);
    let criteria: [Criterion; 12] = [
        ("reiteration identity", reiteration, Some(10.0)),
        ("duality identity", duality, Some(10.0)),
        ("direct product norms", products, Some(5.0)),
        ("two-point operator norm", two_point, None),
        ("necessity counterexample", necessity, None),
        ("uniform interpolation bound", uniform_bound, None),
        (
            "torus interpolation identity",
            torus_interpolation,
            Some(30.0),
        ),
        ("elliptic calculus and lifting", elliptic, None),
        ("rectify-sew identity", kt_identity, Some(60.0)),
        ("chart norm equivalence", chart_equivalence, None),
        ("karamata ratios", karamata, None),
        ("quasiconcavity detection", quasiconcavity, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let in_time = limit.is_none_or(|l| secs < l);
        let ok = out.ok && in_time;
        if !ok {
            failed += 1;
        }
        let budget = limit.map_or(String::new(), |l| format!(" (limit {l} s)"));
        println!(
            "[{}] criterion {:>2} {name}: {} [{secs:.2} s{budget}]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            out.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
