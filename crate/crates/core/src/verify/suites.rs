use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Check, Ctx, Relation, ReportRecord, Row};
use crate::catalog::{
    karamata_members, log_uniform, random_distribution, random_indexed, random_qsv,
};
use crate::charts::{
    atlas_comparison, equivalence_study, rectify, sew, AtlasConfig, ChartAtlas, CircleFunction,
};
use crate::couple::{
    duality_check, product_norm_check, reiteration_check, two_point_counterexample,
    uniform_bound_sweep, SpectralCouple, SpectralVector, SweepOptions,
};
use crate::elliptic::{calculus_check, graph_norm_check, lifting_check, EllipticOperator};
use crate::error::Result;
use crate::hormander::{interpolation_identity_check, SmoothnessIndex};
use crate::param::{default_grid, parse, quasiconcavity_certificate, ParamFn};

const KARAMATA_T: f64 = 1e9;
const KARAMATA_LAMBDAS: [f64; 3] = [0.5, 2.0, 10.0];
const GROWTH_BOUND: f64 = 1.05;
const SPREAD_BOUND: f64 = 10.0;
const COUNTEREXAMPLE_RATIOS: [f64; 3] = [10.0, 100.0, 1000.0];
const SWEEP_POWERS: [f64; 3] = [0.25, 0.5, 0.75];
const CHART_ORDERS: [f64; 2] = [0.0, 1.0];
const ATLAS_ROTATION: f64 = 0.3;

fn vector(rng: &mut ChaCha8Rng, n: usize) -> SpectralVector {
    SpectralVector(
        (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

fn spectral_couple(rng: &mut ChaCha8Rng, n: usize) -> Result<SpectralCouple> {
    SpectralCouple::new(log_uniform(rng, n, 1.0, 1e8), 1.0)
}

fn torus_index(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Result<SmoothnessIndex> {
    let s = rng.gen_range(lo..hi);
    SmoothnessIndex::new(s, random_qsv(rng))
}

pub(super) fn param(ctx: &Ctx, out: &mut Vec<ReportRecord>) {
    let tol = ctx.cfg.tolerances;
    let members = karamata_members();
    let pairs: Vec<(usize, f64)> = (0..members.len())
        .flat_map(|i| KARAMATA_LAMBDAS.map(|l| (i, l)))
        .collect();
    ctx.fixed(
        Check {
            id: 1,
            name: "karamata-ratio",
            anchor: "phi(lambda t)/phi(t) -> 1 for slowly varying phi",
            relation: Relation::AbsEq,
            tolerance: tol.karamata_band,
        },
        &pairs,
        out,
        |&(i, l)| {
            let f = &members[i];
            let ratio = f.eval(l * KARAMATA_T)? / f.eval(KARAMATA_T)?;
            Ok(Row::new(
                format!("{f} lambda={l} t={KARAMATA_T:e}"),
                ratio,
                1.0,
            ))
        },
    );

    let grid = default_grid();
    let thetas: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    ctx.fixed(
        Check {
            id: 2,
            name: "quasiconcavity-certificate",
            anchor: "psi(t)/psi(s) <= c max(1, t/s)",
            relation: Relation::Le,
            tolerance: tol.quasiconcavity,
        },
        &thetas,
        out,
        |&th| {
            let psi = ParamFn::power(th);
            let cert = quasiconcavity_certificate(&psi, 0.0, &grid)?;
            Ok(Row::new(psi.to_string(), cert.c_estimate, 1.0))
        },
    );

    let violators = [
        "pow(2)",
        "pow(-0.5)",
        "compose(pow(-0.5), pow(2))",
        "pow(-0.5) * logms(1)",
    ];
    ctx.fixed(
        Check {
            id: 3,
            name: "quasiconcavity-violation",
            anchor: "nested growth of c exposes non-quasiconcave psi",
            relation: Relation::Gt,
            tolerance: 0.0,
        },
        &violators,
        out,
        |src| {
            let psi = parse(src)?;
            let cert = quasiconcavity_certificate(&psi, 0.0, &grid)?;
            let g = &cert.nested_growth;
            let growth = match g.as_slice() {
                [.., prev, last] => last / prev,
                _ => 1.0,
            };
            Ok(Row::new(psi.to_string(), growth, GROWTH_BOUND))
        },
    );

    ctx.random(
        Check {
            id: 4,
            name: "expression-roundtrip",
            anchor: "parse(display(psi)) = psi",
            relation: Relation::Eq,
            tolerance: tol.identity,
        },
        ctx.cfg.counts.expression,
        out,
        |rng| {
            let psi = random_indexed(rng, -1.0, 2.0);
            let t = log_uniform(rng, 1, 1e-3, 1e9)[0];
            let back = parse(&psi.to_string())?;
            Ok(Row::new(format!("t={t:e}"), back.eval(t)?, psi.eval(t)?))
        },
    );
}

pub(super) fn couple(ctx: &Ctx, out: &mut Vec<ReportRecord>) {
    let tol = ctx.cfg.tolerances;
    let counts = ctx.cfg.counts;
    ctx.random(
        Check {
            id: 10,
            name: "reiteration",
            anchor: "[X_f, X_g]_psi = X_omega, omega = f psi(g/f)",
            relation: Relation::Eq,
            tolerance: tol.identity,
        },
        counts.reiteration,
        out,
        |rng| {
            let n = rng.gen_range(1..=128);
            let c = spectral_couple(rng, n)?;
            let u = vector(rng, n);
            let f = random_indexed(rng, 0.0, 0.5);
            let g = f.clone() * random_indexed(rng, 0.25, 1.0);
            let psi = random_indexed(rng, 0.0, 1.0);
            let cmp = reiteration_check(&c, &f, &g, &psi, &u)?;
            Ok(Row::new(format!("n={n}"), cmp.lhs, cmp.rhs))
        },
    );
    ctx.random(
        Check {
            id: 11,
            name: "duality",
            anchor: "[X_0, X_1]_psi' = [X_1', X_0']_chi, chi = t/psi",
            relation: Relation::Eq,
            tolerance: tol.identity,
        },
        counts.duality,
        out,
        |rng| {
            let n = rng.gen_range(1..=128);
            let c = spectral_couple(rng, n)?;
            let u = vector(rng, n);
            let psi = random_indexed(rng, 0.0, 0.75);
            let cmp = duality_check(&c, &psi, &u)?;
            Ok(Row::new(format!("n={n}"), cmp.lhs, cmp.rhs))
        },
    );
    ctx.random(
        Check {
            id: 12,
            name: "product-norm",
            anchor: "norm in the interpolated product = l2 sum of factor norms",
            relation: Relation::Eq,
            tolerance: 0.0,
        },
        counts.product,
        out,
        |rng| {
            let parts = rng.gen_range(1..=4);
            let mut cs = Vec::with_capacity(parts);
            for _ in 0..parts {
                let k = rng.gen_range(1..=32);
                cs.push(spectral_couple(rng, k)?);
            }
            let us: Vec<_> = cs.iter().map(|c| vector(rng, c.dim())).collect();
            let psi = random_indexed(rng, 0.0, 1.0);
            let cmp = product_norm_check(&cs, 1.0, &psi, &us)?;
            Ok(Row::new(format!("factors={parts}"), cmp.lhs, cmp.rhs))
        },
    );
    ctx.random(
        Check {
            id: 13,
            name: "two-point-norm",
            anchor: "operator norm of e_s -> e_t on X_psi = psi(t)/psi(s)",
            relation: Relation::Eq,
            tolerance: tol.two_point,
        },
        counts.two_point,
        out,
        |rng| {
            let psi = random_indexed(rng, -1.0, 2.0);
            let s = 1.0 + rng.gen_range(1e-3..1e6);
            let t = 1.0 + rng.gen_range(1e-3..1e6);
            let tp = two_point_counterexample(&psi, s, t)?;
            Ok(Row::new(
                format!("s={s:e} t={t:e}"),
                tp.norm_ratio_operator,
                tp.norm_ratio,
            ))
        },
    );
    let square = ParamFn::power(2.0);
    ctx.fixed(
        Check {
            id: 14,
            name: "necessity-counterexample",
            anchor: "bound ratio of psi = t^2 grows like t/s",
            relation: Relation::Eq,
            tolerance: tol.counterexample,
        },
        &COUNTEREXAMPLE_RATIOS,
        out,
        |&q| {
            let tp = two_point_counterexample(&square, 2.0, 2.0 * q)?;
            Ok(Row::new(format!("psi=pow(2) t/s={q}"), tp.bound_ratio, q))
        },
    );
    let root = ParamFn::power(0.5);
    ctx.fixed(
        Check {
            id: 15,
            name: "quasiconcave-two-point",
            anchor: "bound ratio of quasiconcave psi stays <= 1",
            relation: Relation::Le,
            tolerance: tol.counterexample,
        },
        &COUNTEREXAMPLE_RATIOS,
        out,
        |&q| {
            let tp = two_point_counterexample(&root, 2.0, 2.0 * q)?;
            Ok(Row::new(
                format!("psi=pow(0.5) t/s={q}"),
                tp.bound_ratio,
                1.0,
            ))
        },
    );
    let seed = ctx.cfg.seed;
    let trials = counts.uniform_trials;
    ctx.fixed(
        Check {
            id: 16,
            name: "uniform-operator-bound",
            anchor: "||T||_psi <= c max(||T||_0, ||T||_1)",
            relation: Relation::Le,
            tolerance: tol.uniform_bound,
        },
        &SWEEP_POWERS,
        out,
        |&th| {
            let opts = SweepOptions {
                trials,
                seed: seed ^ th.to_bits(),
                ..SweepOptions::default()
            };
            let rep = uniform_bound_sweep(&ParamFn::power(th), 1.0, &opts)?;
            Ok(Row::new(
                format!("psi=pow({th}) trials={trials} worst={}", rep.worst_trial),
                rep.max_observed_c,
                1.0,
            ))
        },
    );
}

pub(super) fn hormander(ctx: &Ctx, out: &mut Vec<ReportRecord>) {
    ctx.random(
        Check {
            id: 20,
            name: "interpolation-identity",
            anchor: "[H^{s-eps}, H^{s+delta}]_psi = H^{s,phi}",
            relation: Relation::Eq,
            tolerance: ctx.cfg.tolerances.identity,
        },
        ctx.cfg.counts.interpolation,
        out,
        |rng| {
            let n = rng.gen_range(1..=2);
            let band = rng.gen_range(1..=64);
            let u = random_distribution(rng, n, band, 64);
            let idx = torus_index(rng, -4.0, 4.0)?;
            let eps = rng.gen_range(0.05..3.0);
            let delta = rng.gen_range(0.05..3.0);
            let cmp = interpolation_identity_check(&u, &idx, eps, delta)?;
            Ok(Row::new(
                format!("n={n} K={band} s={}", idx.s),
                cmp.lhs,
                cmp.rhs,
            ))
        },
    );
}

pub(super) fn elliptic(ctx: &Ctx, out: &mut Vec<ReportRecord>) {
    let tol = ctx.cfg.tolerances;
    let counts = ctx.cfg.counts;
    ctx.random(
        Check {
            id: 30,
            name: "calculus-norm",
            anchor: "||phi_s(A) u|| = ||u||_{s,phi}",
            relation: Relation::Eq,
            tolerance: tol.identity,
        },
        counts.calculus,
        out,
        |rng| {
            let n = rng.gen_range(1..=2);
            let band = rng.gen_range(1..=64);
            let u = random_distribution(rng, n, band, 64);
            let idx = torus_index(rng, -4.0, 4.0)?;
            let cmp = calculus_check(&u, &idx)?;
            Ok(Row::new(
                format!("n={n} K={band} s={}", idx.s),
                cmp.lhs,
                cmp.rhs,
            ))
        },
    );
    ctx.random(
        Check {
            id: 31,
            name: "lifting-isomorphism",
            anchor: "||A u||_{s,phi} = ||u||_{s+2,phi}",
            relation: Relation::Eq,
            tolerance: tol.identity,
        },
        counts.isomorphism,
        out,
        |rng| {
            let n = rng.gen_range(1..=2);
            let band = rng.gen_range(1..=64);
            let u = random_distribution(rng, n, band, 64);
            let idx = torus_index(rng, -4.0, 4.0)?;
            let cmp = lifting_check(&EllipticOperator::default(), &u, &idx)?;
            Ok(Row::new(
                format!("n={n} K={band} s={}", idx.s),
                cmp.lhs,
                cmp.rhs,
            ))
        },
    );
    ctx.random(
        Check {
            id: 32,
            name: "graph-norm-bound",
            anchor: "graph norm of phi_s(A) <= (1 + 1/c^2)^{1/2} ||u||_{s,phi}",
            relation: Relation::Le,
            tolerance: tol.graph,
        },
        counts.graph,
        out,
        |rng| {
            let band = rng.gen_range(1..=64);
            let u = random_distribution(rng, 1, band, 32);
            let idx = torus_index(rng, 0.1, 4.0)?;
            let g = graph_norm_check(&u, &idx)?;
            Ok(Row::new(format!("K={band} s={}", idx.s), g.ratio, g.bound))
        },
    );
}

fn mode_family() -> Result<Vec<CircleFunction>> {
    (0..=16)
        .map(|k| CircleFunction::mode(k, Complex64::new(1.0, 0.0)))
        .collect()
}

fn rotated(cfg: &AtlasConfig) -> AtlasConfig {
    AtlasConfig {
        centers: cfg.centers.map(|c| c + ATLAS_ROTATION),
        ..*cfg
    }
}

pub(super) fn charts(ctx: &Ctx, out: &mut Vec<ReportRecord>) {
    let tol = ctx.cfg.tolerances;
    let base = ctx.cfg.atlas;
    let atlases = [base, rotated(&base)];
    ctx.fixed(
        Check {
            id: 40,
            name: "partition-of-unity",
            anchor: "chi_1 + chi_2 = 1",
            relation: Relation::Le,
            tolerance: tol.partition,
        },
        &atlases,
        out,
        |cfg| {
            let atlas = ChartAtlas::new(*cfg)?;
            let worst = atlas
                .circle_grid()
                .into_iter()
                .map(|th| (atlas.partition(0, th) + atlas.partition(1, th) - 1.0).abs())
                .fold(0.0, f64::max);
            Ok(Row::new(format!("centers={:?}", cfg.centers), worst, 0.0))
        },
    );
    ctx.random(
        Check {
            id: 41,
            name: "rectify-sew",
            anchor: "sew(rectify(f)) = f",
            relation: Relation::Le,
            tolerance: tol.kt,
        },
        ctx.cfg.counts.kt,
        out,
        |rng| {
            let atlas = ChartAtlas::new(base)?;
            let m = atlas.config().circle_points;
            let band = rng.gen_range(1..=32);
            let f = CircleFunction::spectral(random_distribution(rng, 1, band, 24))?;
            let back = sew(&atlas, &rectify(&atlas, &f)?)?.to_samples(m)?;
            let want = f.to_samples(m)?;
            let err = back
                .iter()
                .zip(&want)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            Ok(Row::new(format!("K={band} M={m}"), err, 0.0))
        },
    );
    let orders = CHART_ORDERS;
    ctx.fixed(
        Check {
            id: 42,
            name: "chart-equivalence-spread",
            anchor: "chart norm ~ Fourier norm: ratio_max/ratio_min bounded",
            relation: Relation::Le,
            tolerance: 0.0,
        },
        &orders,
        out,
        |&s| {
            let atlas = ChartAtlas::new(base)?;
            let st = equivalence_study(&atlas, &mode_family()?, &SmoothnessIndex::sobolev(s))?;
            Ok(Row::new(
                format!(
                    "s={s} k=0..16 ratio_min={} ratio_max={}",
                    st.ratio_min, st.ratio_max
                ),
                st.spread(),
                SPREAD_BOUND,
            ))
        },
    );
    ctx.fixed(
        Check {
            id: 43,
            name: "chart-refinement",
            anchor: "ratio_min, ratio_max stable under P -> 2P",
            relation: Relation::Le,
            tolerance: tol.refinement,
        },
        &orders,
        out,
        |&s| {
            let atlas = ChartAtlas::new(base)?;
            let fine = atlas.with_line_points(2 * base.line_points)?;
            let idx = SmoothnessIndex::sobolev(s);
            let fam = mode_family()?;
            let a = equivalence_study(&atlas, &fam, &idx)?;
            let b = equivalence_study(&fine, &fam, &idx)?;
            let change = ((a.ratio_min - b.ratio_min).abs() / b.ratio_min)
                .max((a.ratio_max - b.ratio_max).abs() / b.ratio_max);
            Ok(Row::new(
                format!("s={s} P={}", base.line_points),
                change,
                0.0,
            ))
        },
    );
    ctx.fixed(
        Check {
            id: 44,
            name: "atlas-comparison",
            anchor: "chart norms of two atlases are equivalent",
            relation: Relation::Le,
            tolerance: 0.0,
        },
        &orders,
        out,
        |&s| {
            let a = ChartAtlas::new(base)?;
            let b = ChartAtlas::new(rotated(&base))?;
            let st = atlas_comparison(&a, &b, &mode_family()?, &SmoothnessIndex::sobolev(s))?;
            Ok(Row::new(
                format!("s={s} rotation={ATLAS_ROTATION}"),
                st.spread(),
                SPREAD_BOUND,
            ))
        },
    );
}
