//! Acceptance criteria, one [PASS]/[FAIL] line each.

use std::process::{Command, Output};

use condsym_cli::{commutator_rows, identity_row};
use condsym_core::operators::{build_phi_from_harmonic, Holomorphic};
use condsym_core::solutions::AnsatzSlice;
use condsym_core::verify::{interior_points, run_plane_suite, Axis, DEFAULT_TOL, FD_STEP, FD_TOL};
use condsym_core::{
    catalog, fd_crosscheck, make_random_polynomial, run_residual_suite, GridSpec, GroupElement, ModelParams, Point,
    ProfileFunction, ResidualKind, ScalarField, SolutionFamily,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn catalog_residuals() -> Outcome {
    let mut worst = 0.0f64;
    for e in catalog() {
        let grid = GridSpec::default_for(e.params.spatial_dim);
        let reports = run_residual_suite(&e.family, &e.family.checked_residuals(), &e.params, &grid, DEFAULT_TOL)
            .map_err(|err| format!("{}: {err}", e.family))?;
        for r in reports {
            ensure(r.pass && r.points_evaluated >= 1000, || {
                format!(
                    "{} / {}: max {:.3e}, {} evaluated, {} excluded",
                    r.field, r.equation, r.max_abs, r.points_evaluated, r.points_excluded
                )
            })?;
            worst = worst.max(r.max_abs);
        }
    }
    Ok(format!("{} families, worst residual {worst:.2e}", catalog().len()))
}

const ZS: [f64; 4] = [0.5, 1.0, 2.0, 3.0];

fn identity_rows() -> Result<Vec<condsym_cli::IdentityRow>, String> {
    let mut rows = Vec::new();
    for seed in 1..=5u64 {
        for n_dim in [1, 2] {
            for z in ZS {
                let params = ModelParams::new(n_dim, z).map_err(|e| e.to_string())?;
                let f = make_random_polynomial(seed, &params, 3, 1.0).map_err(|e| e.to_string())?;
                for n in -2..=3 {
                    rows.push(identity_row(&f, &params, n, 0.02, 50, seed, 1e-8).map_err(|e| e.0)?);
                }
            }
        }
    }
    Ok(rows)
}

fn transformed_identity() -> Outcome {
    let rows = identity_rows()?;
    let mut worst = 0.0f64;
    for r in &rows {
        ensure(r.points == 50 && r.max_gap < 1e-8, || {
            format!("seed field {} n={} z={} N={}: gap {:.3e} on {} points", r.field, r.n, r.z, r.n_dim, r.max_gap, r.points)
        })?;
        ensure(r.n == -1 || r.n == 0 || r.obstruction_witnessed, || {
            format!("{} n={} z={} N={}: no obstruction witness", r.field, r.n, r.z, r.n_dim)
        })?;
        ensure(!(r.n == -1 || r.n == 0) || r.max_obstruction == 0.0, || {
            format!("{} n={} z={}: obstruction {:.3e} should vanish", r.field, r.n, r.z, r.max_obstruction)
        })?;
        worst = worst.max(r.max_gap);
    }
    Ok(format!("{} (seed, n, z, N) cases, worst gap {worst:.2e}", rows.len()))
}

fn derivative_laws() -> Outcome {
    let rows = identity_rows()?;
    let worst = rows.iter().map(|r| r.max_law_gap).fold(0.0, f64::max);
    ensure(worst < 1e-8, || format!("worst law gap {worst:.3e}"))?;
    Ok(format!("{} cases, worst law gap {worst:.2e}", rows.len()))
}

fn commutators() -> Outcome {
    let mut count = 0;
    let mut worst = 0.0f64;
    for n_dim in [2, 3] {
        for z in [1.0, 2.0] {
            let params = ModelParams::new(n_dim, z).map_err(|e| e.to_string())?;
            for r in commutator_rows(&params, -2..=2, -1..=2, 1, 1e-9).map_err(|e| e.0)? {
                ensure(r.pass, || format!("[{}, {}] z={z} N={n_dim}: gap {:.3e}", r.left, r.right, r.max_gap))?;
                worst = worst.max(r.max_gap);
                count += 1;
            }
        }
    }
    Ok(format!("{count} brackets, worst gap {worst:.2e}, [Y, Y] exactly zero"))
}

fn plane_grid() -> GridSpec {
    GridSpec::new(
        Axis::new(0.6, 1.8, 4).unwrap(),
        vec![Axis::new(0.3, 1.3, 12).unwrap(), Axis::new(-0.25, 0.25, 12).unwrap()],
    )
}

fn reduced_system() -> Outcome {
    let grid = plane_grid();
    let mut worst = 0.0f64;
    for s in ["general-z:c=1,e1=0.5,e2=0,n=1,z=2", "general-z:c=0.7,e1=0.2,e2=-0.3,n=2,z=3"] {
        let fam: SolutionFamily = s.parse().map_err(|e| format!("{e}"))?;
        let SolutionFamily::GeneralZ { n, .. } = fam else { unreachable!() };
        let slice = AnsatzSlice::new(&fam, fam.default_params(), n).map_err(|e| e.to_string())?;
        let kinds = [ResidualKind::ReducedFirst, ResidualKind::ReducedSecond];
        for r in run_plane_suite(&slice, &kinds, fam.default_params().z, &grid, 1e-8).map_err(|e| e.to_string())? {
            ensure(r.pass, || format!("{s} / {}: {:.3e}", r.equation, r.max_abs))?;
            worst = worst.max(r.max_abs);
        }
    }
    let choices = [
        Holomorphic::Polynomial(vec![0.0, 1.0]),
        Holomorphic::Polynomial(vec![0.0, 0.0, 1.0]),
        Holomorphic::Exponential { a: 1.0, alpha: 1.0 },
    ];
    for f in choices {
        for z in [1.0, 2.0] {
            let phi = build_phi_from_harmonic(f.clone(), z);
            for r in run_plane_suite(&phi, &[ResidualKind::ReducedFirst], z, &grid, 1e-8).map_err(|e| e.to_string())? {
                ensure(r.pass, || format!("{f:?} z={z}: {:.3e} ({} points)", r.max_abs, r.points_evaluated))?;
                worst = worst.max(r.max_abs);
            }
        }
    }
    Ok(format!("ansatz and 6 harmonic profiles, worst reduced residual {worst:.2e}"))
}

fn fd_check(field: &dyn ScalarField, params: &ModelParams, seed: u64) -> Result<f64, String> {
    let grid = GridSpec::default_for(params.spatial_dim);
    let pts = interior_points(field, params, &grid, 100, FD_STEP, seed);
    ensure(pts.len() == 100, || format!("{}: only {} interior points", field.label(), pts.len()))?;
    let r = fd_crosscheck(field, params, &pts, FD_STEP, FD_TOL).map_err(|e| e.to_string())?;
    ensure(r.pass, || format!("{}: relative error {:.3e}", r.field, r.max_rel_error))?;
    Ok(r.max_rel_error)
}

fn finite_differences() -> Outcome {
    let mut worst = 0.0f64;
    for e in catalog() {
        worst = worst.max(fd_check(&e.family, &e.params, 7)?);
    }
    for seed in 1..=5u64 {
        let params = ModelParams::new(2, 2.0).map_err(|e| e.to_string())?;
        let f = make_random_polynomial(seed, &params, 3, 1.0).map_err(|e| e.to_string())?;
        worst = worst.max(fd_check(&f, &params, seed)?);
    }
    Ok(format!("catalog and 5 random fields, worst relative error {worst:.2e}"))
}

fn radial_limit() -> Outcome {
    let (c, e1, e2, n) = (0.8, 0.5, -0.3, 1);
    let radial = SolutionFamily::RadialZ1 { c: 2.0 * c, e1, e2, n };
    let general = SolutionFamily::GeneralZ { c, e1, e2, n, z: 1.0 + 1e-6 };
    let (pr, pg) = (radial.default_params(), general.default_params());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    let mut count = 0;
    while count < 100 {
        let p = Point::new(rng.gen_range(0.5..2.0), [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
        let (Ok(a), Ok(b)) = (radial.evaluate(&pr, &p), general.evaluate(&pg, &p)) else {
            continue;
        };
        worst = worst.max((b.value() - a.value()).abs() / a.value().abs());
        count += 1;
    }
    ensure(worst < 1e-4, || format!("relative difference {worst:.3e}"))?;
    Ok(format!("100 points, worst relative difference {worst:.2e}"))
}

fn group_laws() -> Outcome {
    let sin: ProfileFunction = "sin:1,1,0".parse().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for z in [0.0, 0.5, 1.0, 2.0, 3.0] {
        let params = ModelParams::new(2, z).map_err(|e| e.to_string())?;
        let mut elements: Vec<(GroupElement, GroupElement)> = (-2..=3)
            .map(|n| (GroupElement::xn(n, 0.008), GroupElement::xn(n, -0.005)))
            .collect();
        elements.push((
            GroupElement::Yk { k: 1, v: vec![0.3, -0.2] },
            GroupElement::Yk { k: 1, v: vec![-0.1, 0.4] },
        ));
        elements.push((
            GroupElement::Yphi { profiles: vec![sin.clone(), sin.clone()], e: vec![0.2, 0.1] },
            GroupElement::Yphi { profiles: vec![sin.clone(), sin.clone()], e: vec![0.3, -0.5] },
        ));
        elements.push((GroupElement::Rot { a: 1, b: 2, angle: 0.4 }, GroupElement::Rot { a: 2, b: 1, angle: 0.1 }));
        for (g, h) in &elements {
            let gh = g.compose(h).map_err(|e| e.to_string())?;
            for _ in 0..20 {
                let p = Point::new(rng.gen_range(0.5..2.0), [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
                let run = |e: &GroupElement, p: &Point| e.transform_point(&params, p).map_err(|e| e.to_string());
                let (q1, f1) = run(h, &p)?;
                let (q2, f2) = run(g, &q1)?;
                let (q, f) = run(&gh, &p)?;
                let (there, fg) = run(g, &p)?;
                let (back, fb) = run(&g.inverse(), &there)?;
                let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(1.0);
                let mut gap = rel(q.t, q2.t).max(rel(f.u_factor, f1.u_factor * f2.u_factor));
                gap = gap.max(rel(back.t, p.t)).max(rel(fg.u_factor * fb.u_factor, 1.0));
                for a in 0..2 {
                    gap = gap.max(rel(q.x[a], q2.x[a])).max(rel(back.x[a], p.x[a]));
                }
                ensure(gap <= 1e-10, || format!("{g} with {h} at z={z}: {gap:.3e}"))?;
                worst = worst.max(gap);
            }
        }
    }
    Ok(format!("composition and inverse on all subgroups, worst {worst:.2e}"))
}

fn condsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_condsym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn cli_contract() -> Outcome {
    let runs: [&[&str]; 4] = [
        &["check", "--family", "radial-z1:c=1,e1=0.5,e2=-0.25,n=1"],
        &["identity", "--field", "random:deg=3", "--seed", "3", "--n", "-2..3", "--z", "0.5,2", "--format", "csv"],
        &["commutators", "--N", "2", "--z", "2"],
        &["fd-check", "--field", "random:deg=3,seed=2"],
    ];
    for args in runs {
        let (a, b) = (condsym(args), condsym(args));
        ensure(a.status.code() == Some(0), || {
            format!("{args:?} exited {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stderr))
        })?;
        ensure(a.stdout == b.stdout && !a.stdout.is_empty(), || format!("{args:?}: output differs between runs"))?;
    }
    let fail = condsym(&["check", "--field", "random:deg=3,seed=4", "--kinds", "monge-ampere"]);
    ensure(fail.status.code() == Some(1), || format!("failing check exited {:?}", fail.status.code()))?;
    for bad in [
        &["check", "--nonsense"][..],
        &["check", "--family", "radial-z1:c=1,e1=0,e2=0,n=0", "--z", "2"],
        &["check", "--field", "random:deg=3"],
        &["transform", "--family", "general-z:c=1,e1=0.5,e2=0,n=1,z=2", "--element", "Xn:n=1"],
    ] {
        let o = condsym(bad);
        ensure(o.status.code() == Some(2), || format!("{bad:?} exited {:?}", o.status.code()))?;
    }
    Ok("repeat runs byte-identical, exit codes 0/1/2".to_string())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("catalog solutions satisfy their equations", catalog_residuals),
        ("transformed W^I identity", transformed_identity),
        ("derivative laws", derivative_laws),
        ("commutator table", commutators),
        ("reduced two-dimensional system", reduced_system),
        ("jets agree with finite differences", finite_differences),
        ("z -> 1 limit of the general family", radial_limit),
        ("group composition and inverse", group_laws),
        ("CLI determinism and exit codes", cli_contract),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] criterion {}: {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
