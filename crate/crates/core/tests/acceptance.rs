//! Acceptance suite. Every criterion prints a single `[PASS]` or `[FAIL]` line.
//! The line goes straight to stdout, so it shows even when output is captured.

mod common;

use common::{bisect, c, random_centers, random_nonreal, random_pair, random_pair_matrices, random_unitary, rng};
use krein_bc::boundary::{delta_coupling, BoundaryPair};
use krein_bc::cli::{self, SpectrumReport};
use krein_bc::krein::{self, EigenvalueHit, ScanConfig};
use krein_bc::linrel::LinearRelation;
use krein_bc::matops::{self, ComplexMatrix};
use krein_bc::models::{self, PointInteractions, SpacePoint, SpectralModel, StarGraph};
use krein_bc::quadrature;
use krein_bc::{Error, C64};
use rand::Rng;
use std::f64::consts::PI;
use std::io::Write;

fn report(id: &str, title: &str, ok: bool, detail: String) {
    let line = format!("[{}] {id} {title}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(line.as_bytes());
    let _ = stdout.flush();
    assert!(ok, "{id} failed: {detail}");
}

fn scalar(x: f64) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[x]])
}

/// A random model of dimension `n`: star graph for even `k`, point
/// interactions for odd `k`.
fn model(r: &mut impl Rng, n: usize, k: usize) -> Box<dyn SpectralModel> {
    if k % 2 == 0 {
        Box::new(StarGraph::new(n).unwrap())
    } else {
        Box::new(PointInteractions::new(random_centers(r, n)).unwrap())
    }
}

fn scan(p: &BoundaryPair, m: &dyn SpectralModel) -> Vec<EigenvalueHit> {
    krein::scan_eigenvalues(p, m, &ScanConfig::new(-10.0, -0.01)).unwrap()
}

fn single_bound_state(id: &str, title: &str, p: &BoundaryPair, m: &dyn SpectralModel, expect: f64) {
    let hits = scan(p, m);
    let err = hits.first().map_or(f64::INFINITY, |h| (h.z - expect).abs());
    let verified = hits.iter().all(|h| krein::verify_eigenpair(p, m, h).is_ok());
    report(
        id,
        title,
        hits.len() == 1 && err <= 1e-8 && verified,
        format!("{} hit(s), |z - ({expect})| = {err:.2e} (tol 1e-8), eigenpairs verified: {verified}", hits.len()),
    );
}

#[test]
fn ac01_boundary_criterion_bijection() {
    let mut r = rng(101);
    let mut false_rejects = 0;
    for k in 0..200 {
        let n = 1 + k % 6;
        let u = random_unitary(&mut r, n);
        let ok = match BoundaryPair::from_unitary(&u) {
            Ok(p) => LinearRelation::lambda_ab(p.a(), p.b()).unwrap().is_selfadjoint(),
            Err(_) => false,
        };
        false_rejects += usize::from(!ok);
    }
    let mut false_accepts = 0;
    for k in 0..200 {
        let n = 1 + k % 6;
        let (mut a, mut b) = random_pair_matrices(&mut r, n);
        if k % 2 == 0 {
            // break hermiticity of AB*
            let e = common::random_matrix(&mut r, n, n).scale(c(1e-4, 0.0));
            a = &a + &e;
        } else {
            // keep AB* Hermitian but drop the rank of (A|B)
            let row = r.gen_range(0..n);
            for j in 0..n {
                a[(row, j)] = c(0.0, 0.0);
                b[(row, j)] = c(0.0, 0.0);
            }
        }
        let rejected = matches!(
            BoundaryPair::validate(a.clone(), b.clone()),
            Err(Error::NotSelfAdjointCondition { .. }) | Err(Error::RankDeficient { .. })
        );
        let relation_sa = LinearRelation::lambda_ab(&a, &b).unwrap().is_selfadjoint();
        false_accepts += usize::from(!rejected || relation_sa);
    }
    report(
        "AC-01",
        "boundary criterion bijection",
        false_rejects == 0 && false_accepts == 0,
        format!("200 unitaries: {false_rejects} false rejects; 200 perturbations: {false_accepts} false accepts"),
    );
}

#[test]
fn ac02_range_form_identity() {
    let mut r = rng(202);
    let mut worst: f64 = 0.0;
    let mut unequal = 0;
    for k in 0..200 {
        let p = random_pair(&mut r, 1 + k % 6);
        let lambda = LinearRelation::lambda_ab(p.a(), p.b()).unwrap();
        let range = p.canonical_range_form();
        worst = worst.max(lambda.max_principal_angle(&range));
        unequal += usize::from(!lambda.equals(&range));
    }
    report(
        "AC-02",
        "null-space and range forms agree",
        unequal == 0 && worst <= 1e-9,
        format!("200 pairs, max principal angle {worst:.2e} (tol 1e-9)"),
    );
}

/// 100 samples per model of `(pair, model, z)`.
fn correction_samples(seed: u64) -> Vec<(BoundaryPair, Box<dyn SpectralModel>, C64)> {
    let mut r = rng(seed);
    (0..200)
        .map(|k| {
            let n = 1 + (k / 2) % 4;
            let p = random_pair(&mut r, n);
            let m = model(&mut r, n, k);
            (p, m, random_nonreal(&mut r))
        })
        .collect()
}

#[test]
fn ac03_form_equivalence() {
    let mut worst: f64 = 0.0;
    for (p, m, z) in correction_samples(303) {
        let q = m.q_matrix(z).unwrap();
        let f1 = krein::correction_matrix_form1(&p, &q).unwrap();
        let f2 = krein::correction_matrix_form2(&p, &q).unwrap();
        worst = worst.max(f1.max_abs_diff(&f2));
    }
    report(
        "AC-03",
        "two forms of the correction matrix",
        worst <= 1e-10,
        format!("100 star + 100 point samples, max entry difference {worst:.2e} (tol 1e-10)"),
    );
}

#[test]
fn ac04_abstract_relation_oracle() {
    let mut worst: f64 = 0.0;
    for (p, m, z) in correction_samples(303) {
        let q = m.q_matrix(z).unwrap();
        let f1 = krein::correction_matrix_form1(&p, &q).unwrap();
        let abs = krein::abstract_correction(&p, m.as_ref(), z).unwrap();
        worst = worst.max(f1.max_abs_diff(&abs));
    }
    report(
        "AC-04",
        "correction from relation inversion",
        worst <= 1e-10,
        format!("200 samples, max entry difference {worst:.2e} (tol 1e-10)"),
    );
}

#[test]
fn ac05_q_function_identity() {
    let mut r = rng(505);
    let mut worst: f64 = 0.0;
    for k in 0..25 {
        let star = StarGraph::new(1 + k % 3).unwrap();
        let z = random_nonreal(&mut r);
        let zeta = random_nonreal(&mut r);
        let closed = models::gamma_gram(&star, z, zeta).unwrap();
        let (numeric, _) = quadrature::star_gamma_gram(&star, z, zeta, 1e-11).unwrap();
        worst = worst.max(closed.max_abs_diff(&numeric));
    }
    report(
        "AC-05",
        "Q-function identity against quadrature",
        worst <= 1e-8,
        format!("25 (z, zeta) pairs, max entry error {worst:.2e} (tol 1e-8)"),
    );
}

#[test]
fn ac06_nondegeneracy_off_axis() {
    let mut r = rng(606);
    let mut min_sigma = f64::INFINITY;
    let mut not_pd = 0;
    for k in 0..500 {
        let n = 1 + (k / 2) % 5;
        let p = random_pair(&mut r, n);
        let m = model(&mut r, n, k);
        let z = random_nonreal(&mut r);
        let rep = krein::check_nondegeneracy(&p, m.as_ref(), z).unwrap();
        min_sigma = min_sigma.min(rep.sigma_min);
        let q = m.q_matrix(z).unwrap();
        let im_q = (&q - &q.adjoint()).scale(c(0.0, -0.5 / z.im));
        let eig = matops::hermitian_eigenvalues(&im_q).unwrap();
        not_pd += usize::from(eig.iter().any(|&e| e <= 0.0));
    }
    report(
        "AC-06",
        "nondegeneracy off the real axis",
        min_sigma > 1e-8 && not_pd == 0,
        format!("500 samples, min sigma_min {min_sigma:.2e} (> 1e-8), {not_pd} non-positive Im Q/Im z"),
    );
}

#[test]
fn ac07_robin_bound_state() {
    // φ'(0) = θφ(0) with θ = −2
    let theta = -2.0;
    let p = BoundaryPair::validate(scalar(1.0), scalar(-theta)).unwrap();
    single_bound_state("AC-07", "Robin half-line, theta = -2", &p, &StarGraph::new(1).unwrap(), -theta * theta);
}

#[test]
fn ac08_star_delta_bound_state() {
    let (n, theta) = (3, -3.0);
    let p = delta_coupling(n, theta).unwrap();
    let expect = -theta * theta / (n * n) as f64;
    single_bound_state("AC-08", "star delta coupling, n = 3, theta = -3", &p, &StarGraph::new(n).unwrap(), expect);
}

#[test]
fn ac09_single_point_interaction() {
    let alpha = -1.0 / (4.0 * PI);
    let p = BoundaryPair::validate(scalar(alpha), scalar(1.0)).unwrap();
    let m = PointInteractions::new(vec![[0.3, -1.0, 2.0]]).unwrap();
    let expect = -(4.0 * PI * alpha).powi(2);
    single_bound_state("AC-09", "single point interaction, alpha = -1/(4 pi)", &p, &m, expect);
}

#[test]
fn ac10_two_point_interactions() {
    let (d, alpha) = (1.0, -1.0 / (2.0 * PI));
    let g = 4.0 * PI * alpha;
    // κ + 4πα = ∓e^{−κd}/d; the symmetric root lies above −4πα, the antisymmetric one below
    let sym = bisect(|k| k + g - (-k * d).exp() / d, -g, -g + 1.0 / d + 1.0);
    let anti = bisect(|k| k + g + (-k * d).exp() / d, 1e-9, -g);
    let mut expect = vec![-sym * sym, -anti * anti];
    expect.sort_by(f64::total_cmp);
    let p = BoundaryPair::validate(ComplexMatrix::identity(2).scale(c(alpha, 0.0)), ComplexMatrix::identity(2)).unwrap();
    let m = PointInteractions::new(vec![[0.0, 0.0, 0.0], [0.0, d, 0.0]]).unwrap();
    let hits = scan(&p, &m);
    let err = if hits.len() == expect.len() {
        hits.iter().zip(&expect).map(|(h, e)| (h.z - e).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    report(
        "AC-10",
        "two point interactions, d = 1, alpha = -1/(2 pi)",
        hits.len() == 2 && err <= 1e-6,
        format!(
            "{} hit(s) at {:?}, oracle {:?}, max |dz| = {err:.2e} (tol 1e-6)",
            hits.len(),
            hits.iter().map(|h| h.z).collect::<Vec<_>>(),
            expect
        ),
    );
}

fn random_point(r: &mut impl Rng, m: &dyn SpectralModel, centers: &[[f64; 3]]) -> SpacePoint {
    if centers.is_empty() {
        SpacePoint::Edge { edge: r.gen_range(0..m.dim()), x: r.gen_range(0.0..3.0) }
    } else {
        loop {
            let p = [r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0)];
            if centers.iter().all(|q| common::dist(&p, q) > 0.3) {
                return SpacePoint::Space(p);
            }
        }
    }
}

#[test]
fn ac11_kernel_hermiticity() {
    let mut r = rng(1111);
    let mut worst: f64 = 0.0;
    let mut free_mismatch = 0;
    for k in 0..50 {
        let n = 1 + (k / 2) % 4;
        let p = random_pair(&mut r, n);
        let (m, centers): (Box<dyn SpectralModel>, Vec<[f64; 3]>) = if k % 2 == 0 {
            (Box::new(StarGraph::new(n).unwrap()), vec![])
        } else {
            let cs = random_centers(&mut r, n);
            (Box::new(PointInteractions::new(cs.clone()).unwrap()), cs)
        };
        let x = random_point(&mut r, m.as_ref(), &centers);
        let y = loop {
            let y = random_point(&mut r, m.as_ref(), &centers);
            if y != x {
                break y;
            }
        };
        let z = random_nonreal(&mut r);
        let gxy = krein::perturbed_green(&p, m.as_ref(), &x, &y, z).unwrap();
        let gyx = krein::perturbed_green(&p, m.as_ref(), &y, &x, z.conj()).unwrap();
        worst = worst.max((gxy - gyx.conj()).norm());

        let h0 = BoundaryPair::validate(ComplexMatrix::identity(n), ComplexMatrix::zeros(n, n)).unwrap();
        let g = krein::perturbed_green(&h0, m.as_ref(), &x, &y, z).unwrap();
        free_mismatch += usize::from(g != m.free_green(&x, &y, z).unwrap());
    }
    report(
        "AC-11",
        "kernel hermiticity",
        worst <= 1e-10 && free_mismatch == 0,
        format!("50 samples, max |G(x,y;z) - conj G(y,x;conj z)| = {worst:.2e} (tol 1e-10), {free_mismatch} reference-kernel mismatches"),
    );
}

#[test]
fn ac12_robin_green_closed_form() {
    let mut r = rng(1212);
    let star = StarGraph::new(1).unwrap();
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let theta: f64 = [-2.0, -0.5, 0.7, 3.0][k % 4];
        let p = BoundaryPair::validate(scalar(1.0), scalar(-theta)).unwrap();
        let (x, y): (f64, f64) = (r.gen_range(0.0..4.0), r.gen_range(0.0..4.0));
        let z = random_nonreal(&mut r);
        // image charge with reflection coefficient fixed by φ'(0) = θφ(0)
        let kappa = (-z).sqrt();
        let refl = (kappa - theta) / (kappa + theta);
        let expect = ((-kappa * (x - y).abs()).exp() + refl * (-kappa * (x + y)).exp()) / (2.0 * kappa);
        let got = krein::perturbed_green(&p, &star, &SpacePoint::Edge { edge: 0, x }, &SpacePoint::Edge { edge: 0, x: y }, z)
            .unwrap();
        worst = worst.max((got - expect).norm());
    }
    report(
        "AC-12",
        "Robin half-line Green function",
        worst <= 1e-10,
        format!("20 (x, y, z) triples, max error {worst:.2e} (tol 1e-10)"),
    );
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("krein-bc").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
}

#[test]
fn ac13_cli_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let alpha = -1.0 / (2.0 * PI);
    let configs = [
        ("robin", r#"{"model":"star","n":1,"A":[[[1,0]]],"B":[[[2,0]]]}"#.to_string()),
        (
            "delta",
            {
                let p = delta_coupling(3, -3.0).unwrap();
                serde_json::json!({
                    "model": "star", "n": 3,
                    "A": cli::matrix_to_json(p.a()), "B": cli::matrix_to_json(p.b()),
                })
                .to_string()
            },
        ),
        (
            "pair",
            format!(
                r#"{{"model":"point3d","n":2,"centers":[[0,0,0],[0,1,0]],"A":[[[{alpha},0],[0,0]],[[0,0],[{alpha},0]]],"B":[[[1,0],[0,0]],[[0,0],[1,0]]]}}"#
            ),
        ),
    ];
    let mut failures = Vec::new();
    let mut verified = 0;
    for (name, body) in &configs {
        let cfg_path = dir.path().join(format!("{name}.json"));
        std::fs::write(&cfg_path, body).unwrap();
        let cfg_s = cfg_path.to_str().unwrap();
        let mut outputs = Vec::new();
        for (run, threads) in ["1", "4"].iter().enumerate() {
            std::env::set_var(cli::THREADS_ENV, threads);
            let out_path = dir.path().join(format!("{name}-{run}.json"));
            let (code, text) = run_cli(&["spectrum", cfg_s, "--out", out_path.to_str().unwrap()]);
            if code != 0 {
                failures.push(format!("{name}: spectrum exited {code}: {text}"));
            }
            outputs.push(std::fs::read(&out_path).unwrap_or_default());
        }
        std::env::remove_var(cli::THREADS_ENV);
        if outputs[0] != outputs[1] {
            failures.push(format!("{name}: spectrum reruns differ"));
        }
        let Ok(rep) = serde_json::from_slice::<SpectrumReport>(&outputs[0]) else {
            failures.push(format!("{name}: unreadable spectrum output"));
            continue;
        };
        let cfg = cli::ModelConfig::parse(body).unwrap();
        let pair = cfg.pair(false).unwrap();
        let m = cfg.build_model().unwrap();
        if rep.hits.is_empty() {
            failures.push(format!("{name}: no eigenvalues reported"));
        }
        for h in &rep.hits {
            match krein::verify_eigenpair(&pair, m.as_ref(), &EigenvalueHit::from(h)) {
                Ok(_) => verified += 1,
                Err(e) => failures.push(format!("{name}: z = {}: {e}", h.z)),
            }
        }

        let checks: Vec<_> = (0..2).map(|_| run_cli(&["check", cfg_s, "--samples", "20", "--seed", "7"])).collect();
        if checks[0].0 != 0 || checks[0] != checks[1] {
            failures.push(format!("{name}: check with fixed seed not reproducible or failing: {}", checks[0].1));
        }
    }
    report(
        "AC-13",
        "CLI round trip",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{verified} eigenpairs from 3 spectrum files verified; reruns byte-identical")
        } else {
            failures.join("; ")
        },
    );
}
