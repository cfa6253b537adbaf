use chromasphere::colorings::{
    borsuk_ulam_search, cap_area, cap_area_report, cap_lune_coloring, class_area_monte_carlo,
    class_diameter, default_theta0, dist_to_color, icosahedral_grid, properness_sample, sweep_csv,
    tetrahedral_coloring, tetrahedral_threshold, tetrahedron_sites, BuCase, ColoredRegion, Region,
    RegionColoring,
};
use chromasphere::sampling::{rng_stream, uniform_on_sphere};
use chromasphere::sphere_geom::{Boundary, SphereParams, SpherePoint, Vec3};
use rand::Rng;
use std::f64::consts::{PI, TAU};

fn tangent_frame(u: &Vec3) -> (Vec3, Vec3) {
    let a = if u.x.abs() < 0.9 {
        Vec3::x()
    } else {
        Vec3::y()
    };
    let e1 = u.cross(&a).normalize();
    (e1, u.cross(&e1))
}

/// Distance from `x` to a color class along geodesic rays: each ray is marched
/// until it first enters the class and the entry is bisected; the ray angle is
/// then zoomed around the shortest hit.
fn dist_oracle(c: &RegionColoring, x: &SpherePoint, color: usize) -> f64 {
    let r = c.params().r();
    let xh = x.v() / r;
    if c.color_of(x) == color {
        return 0.0;
    }
    let in_class = |u: Vec3| c.color_of(&c.params().project(u).unwrap()) == color;
    let (e1, e2) = tangent_frame(&xh);
    let ray = |phi: f64| {
        let t = e1 * phi.cos() + e2 * phi.sin();
        move |s: f64| xh * s.cos() + t * s.sin()
    };
    // first entry into the class on [lo, hi], marching by `step` then bisecting
    let entry = |phi: f64, lo: f64, hi: f64, step: f64| -> Option<f64> {
        let at = ray(phi);
        let mut s = lo + step;
        while s <= hi {
            if in_class(at(s)) {
                let (mut a, mut b) = (s - step, s);
                while b - a > 1e-14 {
                    let mid = 0.5 * (a + b);
                    if in_class(at(mid)) {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                return Some(b);
            }
            s += step;
        }
        None
    };
    let n = 720;
    let mut delta = TAU / n as f64;
    let mut best = (0..n)
        .map(|i| {
            let phi = delta * i as f64;
            (entry(phi, 0.0, PI, 2e-3).unwrap_or(PI), phi)
        })
        .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a });
    // near corners the class can be a sliver thinner than the march step, so
    // the s-window and step shrink with the angular scale
    while delta > 1e-12 {
        let window = 100.0 * delta;
        let lo = (best.0 - window).max(0.0);
        for i in -10..=10 {
            let phi = best.1 + delta * i as f64 / 5.0;
            let hit = if in_class(ray(phi)(lo)) {
                entry(phi, 0.0, lo, 2e-3)
            } else {
                entry(phi, lo, best.0 + window, window / 2000.0)
            };
            if let Some(s) = hit {
                if s < best.0 {
                    best = (s, phi);
                }
            }
        }
        delta *= 0.25;
    }
    2.0 * r * (best.0 / 2.0).sin()
}

fn samplers() -> Vec<(&'static str, RegionColoring)> {
    let p = SphereParams::new(0.55).unwrap();
    let closed_cap = RegionColoring::new(
        p,
        vec![
            ColoredRegion {
                region: Region::Cap {
                    center: [0.6, 0.0, 0.8],
                    angular_radius: 1.1,
                    boundary: Boundary::Closed,
                },
                color: 0,
            },
            ColoredRegion {
                region: Region::Lune {
                    start: 1.0,
                    end: 4.0,
                },
                color: 1,
            },
            ColoredRegion {
                region: Region::Everywhere,
                color: 2,
            },
        ],
    )
    .unwrap();
    vec![
        (
            "cap_lune",
            cap_lune_coloring(0.51, None, Some([2.0, 2.5, TAU - 4.5])).unwrap(),
        ),
        ("tetrahedral", tetrahedral_coloring(0.55).unwrap()),
        ("closed_cap", closed_cap),
    ]
}

#[test]
fn dist_to_color_matches_sampling_oracle() {
    let mut rng = rng_stream(31, 0);
    for (name, c) in samplers() {
        for color in 0..c.n_colors() {
            for _ in 0..12 {
                let x = uniform_on_sphere(&mut rng, c.params());
                let exact = dist_to_color(&x, &c, color).unwrap();
                let oracle = dist_oracle(&c, &x, color);
                if name == "cap_lune" && color == 0 {
                    // open polar cap: distance along the meridian
                    let r = c.params().r();
                    let theta = (x.v().z / r).clamp(-1.0, 1.0).acos();
                    let analytic = 2.0 * r * ((theta - default_theta0(r)).max(0.0) / 2.0).sin();
                    assert!(
                        (exact.distance - analytic).abs() < 1e-12,
                        "{} vs {analytic}",
                        exact.distance
                    );
                }
                assert!(
                    exact.distance <= oracle + exact.error_bound,
                    "{name}/{color}: {} above sampled {oracle}",
                    exact.distance
                );
                assert!(
                    oracle - exact.distance < 1e-7,
                    "{name}/{color}: {} vs {oracle}",
                    exact.distance
                );
                if c.color_of(&x) == color {
                    assert_eq!(exact.distance, 0.0);
                }
            }
        }
    }
}

#[test]
fn dist_to_color_is_one_lipschitz() {
    let mut rng = rng_stream(32, 0);
    for (name, c) in samplers() {
        for _ in 0..2000 {
            let x = uniform_on_sphere(&mut rng, c.params());
            let y = if rng.random_bool(0.5) {
                uniform_on_sphere(&mut rng, c.params())
            } else {
                let (e1, _) = tangent_frame(x.v());
                let step = rng.random_range(-0.05..0.05);
                c.params().project(x.v() + e1 * step).unwrap()
            };
            for color in 0..c.n_colors() {
                let dx = dist_to_color(&x, &c, color).unwrap().distance;
                let dy = dist_to_color(&y, &c, color).unwrap().distance;
                assert!((dx - dy).abs() <= x.chord(&y) + 1e-12, "{name}/{color}");
            }
        }
    }
}

#[test]
fn colorings_are_total_and_match_direct_classification() {
    let r = 0.51;
    let theta0 = default_theta0(r);
    let cl = cap_lune_coloring(r, None, None).unwrap();
    let tet = tetrahedral_coloring(r).unwrap();
    let sites: Vec<Vec3> = tetrahedron_sites()
        .iter()
        .map(|s| Vec3::new(s[0], s[1], s[2]))
        .collect();
    let mut rng = rng_stream(33, 0);
    let (mut seen_cl, mut seen_tet) = ([0usize; 4], [0usize; 4]);
    for _ in 0..1_000_000 {
        let x = uniform_on_sphere(&mut rng, cl.params());
        let u = x.v() / r;
        let want = if u.z > theta0.cos() {
            0
        } else {
            1 + ((u.y.atan2(u.x).rem_euclid(TAU)) / (TAU / 3.0)).floor() as usize
        };
        let got = cl.color_of(&x);
        assert!(got < 4);
        if want < 4 {
            assert_eq!(got, want);
        }
        seen_cl[got] += 1;
        let near = (0..4)
            .max_by(|&a, &b| u.dot(&sites[a]).total_cmp(&u.dot(&sites[b])))
            .unwrap();
        let t = tet.color_of(&x);
        assert_eq!(t, near);
        seen_tet[t] += 1;
    }
    assert!(seen_cl.iter().chain(&seen_tet).all(|&n| n > 0));
}

#[test]
fn tetrahedral_cells_have_equal_area() {
    let c = tetrahedral_coloring(0.55).unwrap();
    let quarter = PI * 0.55 * 0.55;
    for color in 0..4 {
        let mc = class_area_monte_carlo(&c, color, 400_000, 7);
        assert!(
            (mc.s0 - quarter).abs() <= 3.0 * mc.std_err,
            "{color}: {} vs {quarter}",
            mc.s0
        );
    }
}

#[test]
fn icosahedral_grid_sizes_and_spacing() {
    for level in 0..=4 {
        let g = icosahedral_grid(level);
        assert_eq!(g.len(), 10 * 4usize.pow(level as u32) + 2);
        assert!(g.iter().all(|u| (u.norm() - 1.0).abs() < 1e-12));
    }
    let g = icosahedral_grid(3);
    let mut rng = rng_stream(34, 0);
    let unit = SphereParams::new(1.0).unwrap();
    for _ in 0..500 {
        let x = *uniform_on_sphere(&mut rng, &unit).v();
        let nearest = g
            .iter()
            .map(|u| (u - x).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(nearest < 0.1);
    }
}

#[test]
fn borsuk_ulam_gaps_shrink_with_level() {
    for (c, a, b) in [
        (tetrahedral_coloring(0.55).unwrap(), 0, 1),
        (cap_lune_coloring(0.51, None, None).unwrap(), 0, 1),
        (tetrahedral_coloring(0.55).unwrap(), 2, 3),
    ] {
        let rep = borsuk_ulam_search(&c, a, b, 3, 1e-12).unwrap();
        assert_eq!(rep.level_gaps.len(), 4);
        assert!(rep.level_gaps.windows(2).all(|w| w[1] <= w[0]));
        assert!(rep.gap <= 1e-6, "{rep:?}");
        // the gap is what the report says it is
        let anti = rep.x.antipode();
        let fx = [
            dist_to_color(&rep.x, &c, a).unwrap().distance,
            dist_to_color(&rep.x, &c, b).unwrap().distance,
        ];
        let fa = [
            dist_to_color(&anti, &c, a).unwrap().distance,
            dist_to_color(&anti, &c, b).unwrap().distance,
        ];
        let gap = (fx[0] - fa[0]).abs().max((fx[1] - fa[1]).abs());
        assert!((gap - rep.gap).abs() < 1e-12);
        let zeros = fx.iter().filter(|v| **v < 1e-7).count();
        let case = match zeros {
            2 => BuCase::BothZero,
            1 => BuCase::OneZero,
            _ => BuCase::BothPositive,
        };
        assert_eq!(rep.case, case);
    }
}

/// Tetrahedral cell diameter on the unit sphere from dense samples of the
/// cell boundary arcs.
fn cell_diameter_oracle() -> f64 {
    let sites: Vec<Vec3> = tetrahedron_sites()
        .iter()
        .map(|s| Vec3::new(s[0], s[1], s[2]))
        .collect();
    // cell corners are the antipodes of the other sites
    let mut boundary: Vec<Vec3> = sites[1..].iter().map(|s| -s).collect();
    for j in 1..4 {
        let n = (sites[0] - sites[j]).normalize();
        let (e1, e2) = tangent_frame(&n);
        for k in 0..20_000 {
            let t = TAU * k as f64 / 20_000.0;
            let u = e1 * t.cos() + e2 * t.sin();
            if (0..4).all(|s| u.dot(&sites[s]) <= u.dot(&sites[0]) + 1e-12) {
                boundary.push(u);
            }
        }
    }
    let mut best = 0.0f64;
    for (i, a) in boundary.iter().enumerate() {
        for b in &boundary[i + 1..] {
            best = best.max((a - b).norm());
        }
    }
    best
}

#[test]
fn tetrahedral_threshold_matches_boundary_oracle() {
    let d = cell_diameter_oracle();
    let unit = class_diameter(&tetrahedral_coloring(1.0).unwrap(), 0).unwrap();
    assert!(unit >= d - 1e-12 && unit - d < 1e-6, "{unit} vs {d}");
    let rep = tetrahedral_threshold(1e-10).unwrap();
    assert!((rep.r_threshold - 1.0 / d).abs() < 1e-6);
    assert!((rep.r_threshold - (3.0 - 3f64.sqrt()).sqrt() / 2.0).abs() < 1e-9);
}

#[test]
fn tetrahedral_sampler_brackets_the_threshold() {
    let clean = properness_sample(&tetrahedral_coloring(0.55).unwrap(), 100_000, 1, 1e-12);
    assert!(clean.is_clean());
    let c = tetrahedral_coloring(0.58).unwrap();
    let dirty = properness_sample(&c, 100_000, 1, 1e-12);
    assert!(!dirty.violations.is_empty());
    for v in &dirty.violations {
        assert!((v.p.chord(&v.q) - 1.0).abs() < 1e-12);
        assert_eq!(c.color_of(&v.p), v.color);
        assert_eq!(c.color_of(&v.q), v.color);
    }
}

#[test]
fn cap_lune_sampler_is_clean() {
    for eps in [1e-2, 1e-3] {
        let rep = properness_sample(
            &cap_lune_coloring(0.5 + eps, None, None).unwrap(),
            100_000,
            2,
            1e-12,
        );
        assert!(rep.is_clean(), "{eps}: {:?}", rep.violations.first());
    }
}

#[test]
fn cap_area_matches_monte_carlo() {
    for eps in [1e-2, 1e-3] {
        let rep = cap_area_report(eps, None, Some((1_000_000, 3))).unwrap();
        let mc = rep.monte_carlo.unwrap();
        assert!(
            (mc.s0 - rep.s0).abs() <= 4.0 * mc.std_err,
            "{eps}: {} vs {}",
            mc.s0,
            rep.s0
        );
        let r = 0.5 + eps;
        // zone area integrated numerically
        let n = 10_000;
        let h = rep.theta0 / n as f64;
        let quad: f64 = (0..n)
            .map(|i| TAU * r * r * ((i as f64 + 0.5) * h).sin() * h)
            .sum();
        assert!((quad - cap_area(r, rep.theta0)).abs() < 1e-8 * quad);
    }
}

#[test]
fn sweep_csv_round_trips() {
    let eps = [1e-2, 1e-3, 1e-4];
    let csv = sweep_csv(&eps).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "epsilon,r,theta0,s0,s0_over_epsilon,n4_bound,ideal_bound"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    for (row, e) in rows.iter().zip(eps) {
        let f: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        let rep = cap_area_report(e, None, None).unwrap();
        assert_eq!(
            f,
            vec![
                rep.epsilon,
                rep.r,
                rep.theta0,
                rep.s0,
                rep.s0_over_epsilon,
                rep.n4_bound,
                rep.ideal_bound
            ]
        );
    }
}

#[test]
fn coloring_json_round_trips() {
    for (_, c) in samplers() {
        let text = serde_json::to_string(&c).unwrap();
        let back: RegionColoring = serde_json::from_str(&text).unwrap();
        assert_eq!(back.regions(), c.regions());
    }
    assert!(serde_json::from_str::<RegionColoring>(
        r#"{"r":0.55,"regions":[{"kind":"lune","start":0.0,"end":1.0,"color":0}]}"#
    )
    .is_err());
}
