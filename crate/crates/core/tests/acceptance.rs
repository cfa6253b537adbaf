//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fail.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chromasphere::colorings::{
    borsuk_ulam_search, cap_area_report, cap_lune_coloring, properness_sample,
    tetrahedral_coloring, tetrahedral_threshold, DEFAULT_BOUNDARY_MARGIN, GROETZSCH_RADIUS,
};
use chromasphere::embedding::{
    closed_form_gk, det_factorization_check, min_radius_search, residual_norm,
    rigidity_certificate, stability_probe, MinRadiusOptions, NewtonOptions,
};
use chromasphere::sampling::{rng_stream, uniform_on_sphere, with_threads};
use chromasphere::sphere_geom::{SphereParams, Vec3};
use chromasphere::udgraph::{
    chromatic_number, gen_complete, gen_cycle, gen_groetzsch, gen_odd_cycle, gen_pendant_cycle,
    Graph,
};
use rand::Rng;
use serde::Serialize;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let mut o = f();
    let took = t.elapsed();
    if took > limit {
        o.pass = false;
    }
    o.detail = format!("{} [{:.2?} / {:?}]", o.detail, took, limit);
    o
}

fn h_bound() -> f64 {
    1.0 / (2.0 * 3f64.sqrt())
}

fn winding_radius(k: usize) -> f64 {
    1.0 / (2.0 * (PI * k as f64 / (2 * k + 1) as f64).sin())
}

fn closed_form_residuals() -> Outcome {
    let hi = 3f64.sqrt() / 3.0;
    let mut worst: f64 = 0.0;
    let mut h_ok = true;
    for k in [2, 3, 5, 10] {
        let lo = winding_radius(k);
        for t in [0.25, 0.5, 0.75] {
            let r = lo + (hi - lo) * t;
            let Ok(e) = closed_form_gk(r, k, None) else {
                return outcome(false, format!("k={k} r={r} rejected"));
            };
            worst = worst.max(residual_norm(&e.vars, r));
            h_ok &= e.h < h_bound();
        }
    }
    outcome(
        worst <= 1e-12 && h_ok,
        format!("max residual {worst:.2e}, h < 1/(2√3): {h_ok}"),
    )
}

fn determinant_factorization() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut min_sum = f64::INFINITY;
    let mut certified = true;
    for m in [5usize, 7, 9, 15] {
        let e = closed_form_gk(0.56, (m - 1) / 2, None).unwrap();
        let check = det_factorization_check(&e.vars, 0.56);
        let cert = rigidity_certificate(&e);
        worst = worst.max(check.relative_error);
        min_sum = min_sum.min(cert.v_plus_vp.abs());
        certified &= cert.certified && check.det_numeric != 0.0;
    }
    outcome(
        worst <= 1e-8 && min_sum > 1e-10 && certified,
        format!("max rel err {worst:.2e}, min |V+V'| {min_sum:.3e}, certified {certified}"),
    )
}

fn stability_report() -> chromasphere::embedding::StabilityReport {
    let e = closed_form_gk(0.55, 2, None).unwrap();
    stability_probe(
        &e,
        1e-3,
        100,
        2024,
        NewtonOptions {
            tol: 1e-12,
            max_iter: 20,
        },
    )
}

fn stability() -> Outcome {
    let rep = stability_report();
    outcome(
        rep.successes == 100 && rep.max_residual <= 1e-12 && rep.max_iterations <= 20,
        format!(
            "{}/100 recovered, max residual {:.2e}, max iterations {}",
            rep.successes, rep.max_residual, rep.max_iterations
        ),
    )
}

fn brute_force_chi(g: &Graph) -> usize {
    let n = g.n();
    (1..=n.max(1))
        .find(|&c| {
            let mut colors = vec![0usize; n];
            loop {
                if g.edges().iter().all(|&(a, b)| colors[a] != colors[b]) {
                    return true;
                }
                let mut i = 0;
                while i < n && colors[i] + 1 == c {
                    colors[i] = 0;
                    i += 1;
                }
                if i == n {
                    return false;
                }
                colors[i] += 1;
            }
        })
        .unwrap_or(0)
}

fn chromatic_numbers() -> Outcome {
    let mut cases: Vec<(String, Graph, usize)> = (1..=5)
        .map(|k| (format!("C{}", 2 * k + 1), gen_odd_cycle(k), 3))
        .collect();
    cases.push(("C4".into(), gen_cycle(4), 2));
    cases.push(("K4".into(), gen_complete(4), 4));
    cases.push(("Grötzsch".into(), gen_groetzsch(), 4));
    cases.push(("G2".into(), gen_pendant_cycle(2), 3));
    cases.push(("G3".into(), gen_pendant_cycle(3), 3));
    let mut bad = Vec::new();
    for (name, g, want) in &cases {
        let t = Instant::now();
        let got = chromatic_number(g).chi;
        if got != *want || t.elapsed() > Duration::from_secs(1) {
            bad.push(format!("{name}: {got} in {:.2?}", t.elapsed()));
        }
    }
    let mut rng = rng_stream(404, 0);
    let mut disagree = 0;
    for _ in 0..200 {
        let n = rng.random_range(1..=10);
        let p: f64 = rng.random_range(0.1..0.9);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|_| rng.random_bool(p))
            .collect();
        let g = Graph::new(n, edges).unwrap();
        if chromatic_number(&g).chi != brute_force_chi(&g) {
            disagree += 1;
        }
    }
    outcome(
        bad.is_empty() && disagree == 0,
        format!(
            "{} named graphs wrong {bad:?}, {disagree}/200 random disagreements",
            bad.len()
        ),
    )
}

fn minimal_radii() -> Outcome {
    let run = |g: &Graph, lo: f64, hi: f64| {
        let mut opts = MinRadiusOptions::new(lo, hi);
        opts.embed.starts = 200;
        min_radius_search(g, &opts)
    };
    let gr = run(&gen_groetzsch(), 0.505, 0.577);
    let k4 = run(&gen_complete(4), 0.5, 0.7);
    let tri = run(&gen_odd_cycle(1), 0.5, 0.7);
    let (Ok(gr), Ok(k4), Ok(tri)) = (gr, k4, tri) else {
        return outcome(false, "a search found no feasible radius");
    };
    let pass = (gr.r_star - GROETZSCH_RADIUS).abs() <= 1e-4
        && gr.residual_norm <= 1e-10
        && (k4.r_star - (3.0f64 / 8.0).sqrt()).abs() <= 1e-6
        && (tri.r_star - 3f64.sqrt() / 3.0).abs() <= 1e-6;
    outcome(
        pass,
        format!(
            "Grötzsch r* {:.8} (residual {:.1e}), K4 {:.8}, triangle {:.8}",
            gr.r_star, gr.residual_norm, k4.r_star, tri.r_star
        ),
    )
}

#[derive(Serialize)]
struct TetraReport {
    threshold: chromasphere::colorings::ThresholdReport,
    at_055: chromasphere::colorings::PropernessReport,
    at_058: chromasphere::colorings::PropernessReport,
}

fn tetra_report() -> TetraReport {
    TetraReport {
        threshold: tetrahedral_threshold(1e-10).unwrap(),
        at_055: properness_sample(
            &tetrahedral_coloring(0.55).unwrap(),
            1_000_000,
            6,
            DEFAULT_BOUNDARY_MARGIN,
        ),
        at_058: properness_sample(
            &tetrahedral_coloring(0.58).unwrap(),
            1_000_000,
            6,
            DEFAULT_BOUNDARY_MARGIN,
        ),
    }
}

fn tetrahedral() -> Outcome {
    let rep = tetra_report();
    let exact = (3.0 - 3f64.sqrt()).sqrt() / 2.0;
    let r = rep.threshold.r_threshold;
    outcome(
        (r - 0.5630162).abs() <= 1e-6
            && (r - exact).abs() <= 1e-6
            && rep.at_055.violations.is_empty()
            && !rep.at_058.violations.is_empty(),
        format!(
            "threshold {r:.10}, violations at 0.55: {}, at 0.58: {}",
            rep.at_055.violations.len(),
            rep.at_058.violations.len()
        ),
    )
}

fn neighbor_circles() -> Outcome {
    let mut rng = rng_stream(707, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let r = 0.5 + rng.random_range(0.0..1.0f64).max(1e-9) * (3f64.sqrt() / 3.0 - 0.5);
        let p = SphereParams::new(r).unwrap();
        let x = *uniform_on_sphere(&mut rng, &p).v();
        let xh = x / r;
        // unit neighbor: walk the geodesic whose chord is exactly 1
        let a = if xh.x.abs() < 0.9 {
            Vec3::x()
        } else {
            Vec3::y()
        };
        let t = xh.cross(&a).normalize();
        let ang = 2.0 * (1.0 / (2.0 * r)).asin();
        let y = (xh * ang.cos() + t * ang.sin()) * r;
        // its opposite point on the same neighbor circle
        let y2 = xh * (2.0 * y.dot(&xh)) - y;
        let rho = (4.0 * r * r - 1.0).sqrt();
        let errs = [
            ((x - y).norm() - 1.0).abs(),
            ((y + x).norm() - rho).abs(),
            ((y2 + x).norm() - rho).abs(),
            ((y - y2).norm() - rho / r).abs(),
            ((rho / r) - p.d()).abs(),
            (rho - p.rho()).abs(),
        ];
        worst = errs.iter().fold(worst, |w, e| w.max(*e));
    }
    outcome(
        worst <= 1e-12,
        format!("max error {worst:.2e} over 100 radii"),
    )
}

#[derive(Serialize)]
struct CapLuneReport {
    samples: Vec<chromasphere::colorings::PropernessReport>,
    areas: Vec<chromasphere::colorings::CapAreaReport>,
}

fn cap_lune_report() -> CapLuneReport {
    CapLuneReport {
        samples: [1e-2, 1e-3]
            .iter()
            .map(|&e| {
                properness_sample(
                    &cap_lune_coloring(0.5 + e, None, None).unwrap(),
                    1_000_000,
                    8,
                    DEFAULT_BOUNDARY_MARGIN,
                )
            })
            .collect(),
        areas: [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&e| cap_area_report(e, None, None).unwrap())
            .collect(),
    }
}

fn cap_lune() -> Outcome {
    let rep = cap_lune_report();
    let clean = rep.samples.iter().all(|s| s.violations.is_empty());
    let ratios: Vec<f64> = rep.areas.iter().map(|a| a.s0_over_epsilon).collect();
    let in_band = ratios.iter().all(|q| (4.0 * PI..=64.0 * PI).contains(q));
    let n4_ok = rep.areas.iter().all(|a| a.n4_bound >= 0.05 / a.epsilon);
    let scaling: Vec<f64> = rep
        .areas
        .windows(2)
        .map(|w| w[1].n4_bound / w[0].n4_bound)
        .collect();
    let scale_ok = scaling.iter().all(|s| (8.0..=12.0).contains(s));
    outcome(
        clean && in_band && n4_ok && scale_ok,
        format!(
            "violations {:?}, s0/ε {:?}, n4 decade ratios {:?}",
            rep.samples
                .iter()
                .map(|s| s.violations.len())
                .collect::<Vec<_>>(),
            ratios.iter().map(|q| format!("{q:.2}")).collect::<Vec<_>>(),
            scaling
                .iter()
                .map(|q| format!("{q:.3}"))
                .collect::<Vec<_>>()
        ),
    )
}

fn bu_reports() -> Vec<chromasphere::colorings::BuReport> {
    vec![
        borsuk_ulam_search(&tetrahedral_coloring(0.55).unwrap(), 0, 1, 4, 1e-12).unwrap(),
        borsuk_ulam_search(
            &cap_lune_coloring(0.51, None, None).unwrap(),
            0,
            1,
            4,
            1e-12,
        )
        .unwrap(),
    ]
}

fn borsuk_ulam() -> Outcome {
    let reps = bu_reports();
    outcome(
        reps.iter().all(|r| r.gap <= 1e-6),
        format!(
            "gaps {:?}",
            reps.iter()
                .map(|r| format!("{:.2e} ({:?})", r.gap, r.case))
                .collect::<Vec<_>>()
        ),
    )
}

fn determinism() -> Outcome {
    fn across<T: Serialize + Send>(f: impl Fn() -> T + Sync) -> bool {
        let runs: Vec<String> = [Some(1), Some(4), Some(1)]
            .into_iter()
            .map(|t| serde_json::to_string(&with_threads(t, &f)).unwrap())
            .collect();
        runs.windows(2).all(|w| w[0] == w[1])
    }
    let checks = [
        ("stability", across(stability_report)),
        ("tetrahedral", across(tetra_report)),
        ("cap_lune", across(cap_lune_report)),
        ("borsuk_ulam", across(bu_reports)),
    ];
    let bad: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    outcome(
        bad.is_empty(),
        format!("byte-identical at 1 and 4 workers; mismatches {bad:?}"),
    )
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let criteria: Vec<(&str, Box<dyn FnOnce() -> Outcome>)> = vec![
        (
            "1 closed-form embedding",
            Box::new(move || timed(s(1), closed_form_residuals)),
        ),
        (
            "2 determinant factorization",
            Box::new(move || timed(s(5), determinant_factorization)),
        ),
        (
            "3 implicit-function stability",
            Box::new(move || timed(s(5), stability)),
        ),
        (
            "4 chromatic numbers",
            Box::new(move || timed(s(60), chromatic_numbers)),
        ),
        (
            "5 minimal radii",
            Box::new(move || timed(s(600), minimal_radii)),
        ),
        (
            "6 tetrahedral threshold",
            Box::new(move || timed(s(30), tetrahedral)),
        ),
        (
            "7 neighbor circles",
            Box::new(move || timed(s(1), neighbor_circles)),
        ),
        (
            "8 cap+lune coloring",
            Box::new(move || timed(s(120), cap_lune)),
        ),
        (
            "9 antipodal search",
            Box::new(move || timed(s(60), borsuk_ulam)),
        ),
        (
            "10 determinism",
            Box::new(move || timed(s(600), determinism)),
        ),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    if failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria fail");
        ExitCode::FAILURE
    }
}
