//! End-to-end acceptance criteria. Each criterion prints one line with its
//! verdict, worst residual and runtime against its budget.

use std::f64::consts::PI;
use std::time::Instant;

use contlattice::bridge::{self, binomial, catalan_difference_pair, central_convolution, star_convolve};
use contlattice::catalan::{self, CatalanPoint};
use contlattice::cbinom::{self, BinomParams};
use contlattice::distribution::{self, DistParams};
use contlattice::quadrature::{integrate, QuadratureSpec};
use contlattice::telegraph::{self, TelegraphConfig};
use contlattice::Result;

/// Criteria that are implemented as stated but cannot hold. They must print
/// FAIL; if one starts passing the test fails so the list gets revisited.
const KNOWN_UNATTAINABLE: &[u32] = &[13];

struct Outcome {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
    seconds: f64,
    budget: f64,
}

fn run(id: u32, title: &'static str, budget: f64, body: impl FnOnce() -> Result<(bool, String)>) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    let seconds = start.elapsed().as_secs_f64();
    let passed = passed && seconds < budget;
    println!(
        "criterion {id:>2} [{}] {title}: {detail} ({seconds:.2} s, budget {budget} s)",
        if passed { "PASS" } else { "FAIL" }
    );
    Outcome { id, title, passed, detail, seconds, budget }
}

fn cb(x: f64, s: f64) -> f64 {
    cbinom::cbinom(BinomParams::new(x, s).unwrap())
}

fn pt(x: f64, y: f64) -> CatalanPoint {
    CatalanPoint::new(x, y).unwrap()
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default().with_tolerances(1e-13, 1e-13)
}

/// Largest `|r|` and whether all are within `tol`.
fn within(residuals: &[f64], tol: f64) -> (bool, f64) {
    let worst = residuals.iter().fold(0.0f64, |m, r| if r.is_nan() { f64::NAN } else { m.max(r.abs()) });
    (worst <= tol, worst)
}

fn c1_total_integral() -> Result<(bool, String)> {
    let mut r = Vec::new();
    for x in [0.5f64, 1.0, 5.0, 20.0] {
        let v = integrate(|s| cb(x, s), 0.0, x, spec())?.value;
        r.push(v / (2.0 * x.exp_m1()) - 1.0);
    }
    let (ok, worst) = within(&r, 1e-9);
    Ok((ok, format!("max rel {worst:.2e} <= 1e-9")))
}

fn c2_laplace() -> Result<(bool, String)> {
    let mut r = Vec::new();
    for s in [0.5, 1.0, 2.0] {
        for p in [1.5, 2.0, 3.0] {
            r.push(cbinom::cbinom_laplace_numeric(s, p, QuadratureSpec::default())? - cbinom::cbinom_laplace(s, p)?);
        }
    }
    let (ok, worst) = within(&r, 1e-6);
    Ok((ok, format!("max abs {worst:.2e} <= 1e-6 on 3x3 grid")))
}

fn c3_volume_series() -> Result<(bool, String)> {
    let mut r = Vec::new();
    for (x, y) in [(0.5, 0.0), (2.0, 1.0), (3.0, 0.5), (4.0, 4.0), (5.0, 2.0)] {
        let p = pt(x, y);
        let series: f64 = (0..=40).map(|n| catalan::polytope_volume(n, p)).sum();
        r.push(catalan::catalan(p) - series);
    }
    let (ok, worst) = within(&r, 1e-10);
    Ok((ok, format!("max abs {worst:.2e} <= 1e-10")))
}

fn c4_recurrences() -> Result<(bool, String)> {
    let r = [
        catalan::volume_recurrence_residual(0, pt(2.0, 0.5))?,
        catalan::volume_recurrence_residual(1, pt(1.0, 0.0))?,
        catalan::volume_recurrence_residual(0, pt(1.5, 1.5))?,
        catalan::catalan_recursion_residual(pt(1.0, 0.0))?,
        catalan::catalan_recursion_residual(pt(2.0, 1.0))?,
        catalan::catalan_recursion_residual(pt(1.5, 1.5))?,
    ];
    let (ok, worst) = within(&r, 1e-8);
    Ok((ok, format!("max abs {worst:.2e} <= 1e-8")))
}

fn c5_convolution() -> Result<(bool, String)> {
    let r = [0.5, 1.0, 4.0].map(|z| catalan::catalan_convolution_residual(z).unwrap_or(f64::NAN));
    let (ok, worst) = within(&r, 1e-8);
    Ok((ok, format!("max abs {worst:.2e} <= 1e-8")))
}

fn c6_schlafli() -> Result<(bool, String)> {
    let mut r = Vec::new();
    for x in [0.4, 1.0, 2.5, 4.0, 6.0] {
        for j in 0..5 {
            let p = pt(x, x * j as f64 / 4.0);
            r.push(catalan::schlafli_catalan(p)? - catalan::catalan(p));
        }
    }
    let (ok, worst) = within(&r, 1e-9);
    Ok((ok, format!("max abs {worst:.2e} <= 1e-9 on 5x5 grid")))
}

fn c7_chu_vandermonde() -> Result<(bool, String)> {
    let r = [(1.0, 0.5, 0.5), (0.5, 0.2, 0.8), (1.0, 0.0, 0.0)]
        .map(|(x, a, b)| cbinom::chu_vandermonde_residual(x, a, b, 1e-3).unwrap_or(f64::NAN));
    let (ok, worst) = within(&r, 1e-5);
    Ok((ok, format!("max abs {worst:.2e} <= 1e-5")))
}

fn c8_central_convolution() -> Result<(bool, String)> {
    let two_fold = cbinom::laguerre_convolution_check(1, 4.0, 1e-3)?;
    let four_fold = cbinom::laguerre_convolution_check(2, 4.0, 1e-3)?;
    Ok((
        two_fold <= 1e-3 && four_fold <= 5e-3,
        format!("2-fold rel {two_fold:.2e} <= 1e-3, 4-fold rel {four_fold:.2e} <= 5e-3 on [0, 2]"),
    ))
}

fn c9_distribution() -> Result<(bool, String)> {
    let mut norm = Vec::new();
    let mut mgf = Vec::new();
    for x in [0.5f64, 2.0, 10.0] {
        for p in [0.1f64, 0.5, 0.9] {
            let q = integrate(|s| cb(x, s) * p.powf(s) * (1.0 - p).powf(x - s), 0.0, x, spec())?.value;
            norm.push(distribution::normalization(x, p)? / q - 1.0);
            let d = DistParams::new(x, p)?;
            for u in [-1.0f64, 0.5] {
                let m = integrate(|s| (u * s).exp() * d.pdf(s), 0.0, x, spec())?.value;
                mgf.push(d.mgf(u) - m);
            }
        }
    }
    let x = 2.0;
    let d = DistParams::new(x, 0.5)?;
    let mut even = Vec::new();
    for k in [0, 2, 4] {
        let q = integrate(|s| (s - x / 2.0).powi(k) * d.pdf(s), 0.0, x, spec())?.value;
        even.push(distribution::moment_symmetric(x, k as u32)? - q);
    }
    let mut odd_exact = true;
    for k in [1u32, 3, 5, 7] {
        odd_exact &= distribution::moment_symmetric(x, k)? == 0.0;
    }
    let (n_ok, n_w) = within(&norm, 1e-9);
    let (m_ok, m_w) = within(&mgf, 1e-8);
    let (e_ok, e_w) = within(&even, 1e-8);
    Ok((
        n_ok && m_ok && e_ok && odd_exact,
        format!("normalization {n_w:.2e}, mgf {m_w:.2e}, even moments {e_w:.2e}, odd moments exactly 0: {odd_exact}"),
    ))
}

fn c10_telegraph() -> Result<(bool, String)> {
    let mut conservation = Vec::new();
    for (c, l, t) in [(1.0, 1.0, 1.0), (1.0, 2.0, 1.0), (2.0, 1.3, 3.0)] {
        let config = TelegraphConfig::new(c, l, t, 0)?;
        conservation.push(config.atom_mass() + telegraph::continuous_mass(&config)? - 1.0);
    }
    let x = 2.0;
    let config = TelegraphConfig::new(1.0, 2.0, 1.0, 7)?;
    let mut bridge_rel = Vec::new();
    for i in 0..10 {
        let s = -0.9 + 0.2 * i as f64;
        let b = 0.5 * f64::exp(-x) * cb(x, x / 2.0 + s);
        bridge_rel.push(telegraph::density(&config, s)? / b - 1.0);
    }
    let r1 = telegraph::pde_residual(&config, 0.2, 1.0, 1e-3)?;
    let r2 = telegraph::pde_residual(&config, 0.2, 1.0, 5e-4)?;
    let ratio = r1 / r2;

    let n = 1_000_000;
    let samples = telegraph::simulate(&config, n);
    let (frac, _) = telegraph::summarize(&samples);
    let q = config.atom_mass();
    let z = (frac - q) / (q * (1.0 - q) / n as f64).sqrt();
    let gof = telegraph::histogram_gof_from(&config, &samples, 40)?;

    let (c_ok, c_w) = within(&conservation, 1e-8);
    let (b_ok, b_w) = within(&bridge_rel, 1e-12);
    let pde_ok = r1.abs() <= 1e-4 && (3.5..=4.5).contains(&ratio);
    Ok((
        c_ok && b_ok && pde_ok && z.abs() <= 3.0 && gof.passed() && gof.degrees_of_freedom == 39,
        format!(
            "conservation {c_w:.2e}, bridge rel {b_w:.2e}, pde {r1:.2e} (h-halving ratio {ratio:.2}), \
             atom z {z:.2}, chi2({}) {:.1} < {:.1}",
            gof.degrees_of_freedom, gof.chi_square, gof.critical_999
        ),
    ))
}

fn c11_discrete() -> Result<(bool, String)> {
    let mut bad = 0;
    for k1 in 0..=6u64 {
        for k2 in 0..=6u64 {
            for n in 1..=12u64 {
                let lhs = star_convolve(k1, k2, n)? + binomial(n + k1, k1)? + binomial(n + k2, k2)?;
                bad += (lhs != binomial(n + k1 + k2 + 1, k1 + k2 + 1)?) as u32;
            }
        }
    }
    for n in 0..=15 {
        let (diff, conv) = catalan_difference_pair(n)?;
        bad += (diff != conv) as u32;
    }
    for n in 0..=10u64 {
        bad += (central_convolution(n)? != 1u128 << (2 * n)) as u32;
    }
    Ok((bad == 0, format!("{bad} mismatches")))
}

fn c12_gf_bridge() -> Result<(bool, String)> {
    let mut r = Vec::new();
    for x in [0.05, 0.1, 0.2] {
        r.push(catalan::catalan_gf_bridge(x)? - 2.0 / (1.0 + (1.0 - 4.0 * x).sqrt()));
    }
    let (ok, worst) = within(&r, 1e-6);
    Ok((ok, format!("max abs {worst:.2e} <= 1e-6")))
}

/// Evaluated exactly as stated, with the `e^{−4s}` factor.
fn c13_asymptotic() -> Result<(bool, String)> {
    let s = 100.0;
    let v = cbinom::central_binomial_scaled(s)?
        .shift_exp(-4.0 * s)
        .scale(0.5 * (PI * s).sqrt())
        .to_f64();
    Ok(((0.99..=1.0).contains(&v), format!("value {v:.4e}, window [0.99, 1.0]")))
}

fn full_suite() -> Result<(bool, String)> {
    let reports = bridge::run_verification_suite(&[])?;
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    Ok((
        reports.len() >= 20 && failed.is_empty(),
        format!("{} identities, failed: {:?}", reports.len(), failed),
    ))
}

#[test]
fn acceptance() {
    let outcomes = vec![
        run(1, "total integral 2(e^x - 1)", 1.0, c1_total_integral),
        run(2, "Laplace transform of the shifted coefficient", 5.0, c2_laplace),
        run(3, "Catalan closed form vs volume series", 1.0, c3_volume_series),
        run(4, "volume recurrence and Catalan recursion", 10.0, c4_recurrences),
        run(5, "Catalan convolution", 2.0, c5_convolution),
        run(6, "integral representation vs closed form", 2.0, c6_schlafli),
        run(7, "differential Chu-Vandermonde", 10.0, c7_chu_vandermonde),
        run(8, "central binomial convolutions", 5.0, c8_central_convolution),
        run(9, "distribution normalization, MGF, moments", 5.0, c9_distribution),
        run(10, "telegraph process", 60.0, c10_telegraph),
        run(11, "discrete exact identities", 1.0, c11_discrete),
        run(12, "Catalan generating-function bridge", 2.0, c12_gf_bridge),
        run(13, "central binomial asymptotic, e^{-4s} as stated", 1.0, c13_asymptotic),
        run(0, "full verification suite", 120.0, full_suite),
    ];
    let unexpected: Vec<String> = outcomes
        .iter()
        .filter(|o| o.passed == KNOWN_UNATTAINABLE.contains(&o.id))
        .map(|o| format!("criterion {} ({}): {} in {:.2}/{} s", o.id, o.title, o.detail, o.seconds, o.budget))
        .collect();
    assert!(unexpected.is_empty(), "unexpected outcomes: {unexpected:#?}");
}

/// The literal criterion 13. It cannot pass: with `e^{−4s}` the product is
/// about 1.4e−87 at `s = 100`. The `e^{−2s}` normalisation gives 0.99938.
#[test]
#[ignore = "unattainable as stated; see the acceptance report"]
fn central_binomial_asymptotic_as_stated() {
    let (ok, detail) = c13_asymptotic().unwrap();
    assert!(ok, "{detail}");
}
