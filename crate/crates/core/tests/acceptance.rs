//! Acceptance suite: every analytic prediction of the crate is exercised at
//! its stated tolerance against an independent oracle (closed-form
//! identities, finite differences of tracked roots, argument-principle
//! counts, or direct integration of the full delay equation).
//!
//! Each test prints one `ACCEPTANCE <id> <name>: PASS/FAIL` line. Two
//! checks (`a08b`, `a10b`) encode closed-form identities that are
//! reproduced verbatim from the tabulated unfolding coefficients even
//! though they disagree with the directly computed linear response; those
//! two are expected to fail and document why. See
//! `double_hopf::unfolding` for the full discussion.

use bridgewobble_core::double_hopf::{
    self, classify_sigma_region, cubic_coeffs, deltas, equilibria, fd_linear_response,
    find_double_hopf, flow_jacobian, integrate_flow, kam_nondegeneracy, linear_unfolding,
    predicted_attractors, root_slope_response, EqName, SigmaLocus,
};
use bridgewobble_core::hopf::{hopf_in_alpha, hopf_in_tau};
use bridgewobble_core::sim::{
    measure_amplitude, measure_frequency, simulate, simulate_components, History, SimConfig,
};
use bridgewobble_core::spectrum::{
    char_fn, count_unstable_roots, critical_delays, crossing_derivatives, newton_polish,
    omega_pm, rightmost_roots, stability, Branch,
};
use bridgewobble_core::{Complex64, Error, NormalizedModel};

/// Deterministic pseudo-random numbers (splitmix64).
struct Lcg {
    state: u64,
}

impl Lcg {
    fn new(seed: u64) -> Self {
        Self { state: seed }
    }
    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}

fn report(id: &str, name: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("ACCEPTANCE {id} {name}: PASS");
    } else {
        println!("ACCEPTANCE {id} {name}: FAIL — {}", failures.join("; "));
    }
    assert!(failures.is_empty(), "{id} {name}: {}", failures.join("; "));
}

#[test]
fn a01_spectral_identities() {
    let mut rng = Lcg::new(101);
    let mut failures = Vec::new();
    for trial in 0..1000 {
        let alpha2 = rng.range(0.05, 2.0);
        let alpha3 = alpha2 + rng.range(1e-3, 2.5);
        let (wp, wm) = omega_pm(alpha2, alpha3).unwrap().unwrap();
        if (wp * wm - 1.0).abs() > 1e-10 {
            failures.push(format!("trial {trial}: omega+ omega- = {}", wp * wm));
            break;
        }
        let b = alpha3 * alpha3 - alpha2 * alpha2;
        for w in [wp, wm] {
            let lhs = (w * w - 1.0).powi(2);
            let rhs = b * w * w;
            if (lhs - rhs).abs() > 1e-10 * rhs.max(1.0) {
                failures.push(format!("trial {trial}: quartic identity residual {}", lhs - rhs));
            }
        }
        // critical delays solve h(i w, tau) = 0 for j <= 5
        if trial % 20 == 0 {
            let set = critical_delays(alpha2, alpha3, 5).unwrap();
            for (&t, w) in set
                .branch_plus
                .iter()
                .map(|t| (t, wp))
                .chain(set.branch_minus.iter().map(|t| (t, wm)))
            {
                let r = char_fn(Complex64::new(0.0, w), t, alpha2, alpha3).norm();
                if r > 1e-10 {
                    failures.push(format!("trial {trial}: |h| = {r:.2e} at tau = {t}"));
                }
            }
        }
        if !failures.is_empty() {
            break;
        }
    }
    report("01", "spectral-identities", &failures);
}

#[test]
fn a02_crossing_derivative_oracle() {
    let points = [
        (0.5, 1.0, 0usize),
        (0.5, 1.0, 1),
        (0.3, 0.9, 0),
        (0.8, 1.7, 0),
        (1.0, 1.5, 0),
    ];
    let mut failures = Vec::new();
    let mut checked = 0;
    for &(alpha2, alpha3, j) in &points {
        let set = critical_delays(alpha2, alpha3, j).unwrap();
        for (branch, taus, w) in [
            (Branch::Plus, &set.branch_plus, set.omega_plus.unwrap()),
            (Branch::Minus, &set.branch_minus, set.omega_minus.unwrap()),
        ] {
            let tau_c = taus[j];
            let d = crossing_derivatives(alpha2, alpha3, branch, j).unwrap();
            let step = 1e-4;
            let seed = Complex64::new(0.0, w);
            let hi = newton_polish(seed, tau_c + step, alpha2, alpha3).unwrap();
            let lo = newton_polish(seed, tau_c - step, alpha2, alpha3).unwrap();
            let fd_sigma = (hi.re - lo.re) / (2.0 * step);
            let fd_omega = (hi.im - lo.im) / (2.0 * step);
            checked += 1;
            if (fd_sigma - d.sigma_prime).abs() > 1e-4 * d.sigma_prime.abs() {
                failures.push(format!(
                    "sigma' at ({alpha2},{alpha3},{branch:?},{j}): {} vs {}",
                    d.sigma_prime, fd_sigma
                ));
            }
            if (fd_omega - d.omega_prime).abs() > 1e-4 * d.omega_prime.abs() {
                failures.push(format!(
                    "omega' at ({alpha2},{alpha3},{branch:?},{j}): {} vs {}",
                    d.omega_prime, fd_omega
                ));
            }
        }
    }
    assert_eq!(checked, 10, "ten crossing points exercised");
    // frozen reference value
    let d = crossing_derivatives(0.5, 1.0, Branch::Plus, 0).unwrap();
    if (d.sigma_prime - 0.100431).abs() > 5e-6 {
        failures.push(format!("sigma'(tau_0^+) = {} vs 0.100431", d.sigma_prime));
    }
    report("02", "crossing-derivative-oracle", &failures);
}

#[test]
fn a03_stability_vs_root_counting() {
    // 10 parameter pairs spanning D1, D2, D3; 50 delay samples each
    let pairs = [
        (1.0, 0.5),   // D1
        (1.5, 0.8),   // D1
        (0.5, 1.0),   // D2
        (0.5, 0.52),  // D2 (near C1, many windows)
        (0.3, 0.9),   // D2
        (1.0, 1.5),   // D2
        (0.8, 1.7),   // D2/D3 side
        (0.5, 3.0),   // D3
        (0.2, 2.0),   // D3
        (1.2, 1.25),  // D2 (shallow)
    ];
    let mut failures = Vec::new();
    let mut compared = 0usize;
    for &(alpha2, alpha3) in &pairs {
        let set = critical_delays(alpha2, alpha3, 40).unwrap();
        for i in 0..50 {
            let mut tau = 0.07 + 14.0 * i as f64 / 49.0;
            // nudge off marginal points so both sides are well-defined
            if let Some((d, tc)) = set.nearest_critical(tau) {
                if d < 5e-3 {
                    tau = tc + 6e-3;
                }
            }
            let v = stability(alpha2, alpha3, tau).unwrap();
            match count_unstable_roots(alpha2, alpha3, tau) {
                Ok(n) => {
                    compared += 1;
                    if n != 2 * v.unstable_root_pairs {
                        failures.push(format!(
                            "({alpha2},{alpha3},{tau:.3}): bookkeeping {} pairs vs contour {} roots",
                            v.unstable_root_pairs, n
                        ));
                    }
                }
                Err(e) => failures.push(format!("({alpha2},{alpha3},{tau:.3}): {e}")),
            }
        }
    }
    assert_eq!(compared + failures.len(), 500);
    report("03", "stability-vs-root-counting", &failures);
}

#[test]
fn a04_hopf_amplitude_law_plus_branch() {
    let model = NormalizedModel::new(0.5, 1.0, 1.0, 0.0).unwrap();
    let hp = hopf_in_tau(&model, Branch::Plus, 0).unwrap();
    let mut failures = Vec::new();
    let mut samples = Vec::new();
    for &mu in &[0.0125, 0.025, 0.05] {
        let pred = hp.predicted_cycle(mu).unwrap();
        let tau = hp.tau0 + mu;
        let cycles = if mu < 0.02 { 700.0 } else { 400.0 };
        let cfg = SimConfig::cycle_study_with_length(tau, hp.omega0, 0.8 * pred.amplitude, cycles);
        let m = model.with_tau(tau);
        let traj = simulate(&m, &cfg).unwrap();
        match measure_amplitude(&traj, cfg.transient) {
            Ok(a) => {
                samples.push((mu, a.amplitude));
                let rel = (a.amplitude - pred.amplitude).abs() / pred.amplitude;
                if rel > 0.15 {
                    failures.push(format!(
                        "mu={mu}: simulated {} vs predicted {} ({:.1}%)",
                        a.amplitude,
                        pred.amplitude,
                        100.0 * rel
                    ));
                }
            }
            Err(e) => failures.push(format!("mu={mu}: {e}")),
        }
        match measure_frequency(&traj, cfg.transient) {
            Ok(f) => {
                if (f.omega - hp.omega0).abs() > 0.05 * hp.omega0 {
                    failures.push(format!("mu={mu}: frequency {} vs {}", f.omega, hp.omega0));
                }
            }
            Err(e) => failures.push(format!("mu={mu} frequency: {e}")),
        }
    }
    // fitted scaling exponent over the three amplitudes
    if samples.len() == 3 {
        let n = samples.len() as f64;
        let (sx, sy, sxx, sxy) = samples.iter().fold((0.0, 0.0, 0.0, 0.0), |acc, &(mu, a)| {
            let (x, y) = (mu.ln(), a.ln());
            (acc.0 + x, acc.1 + y, acc.2 + x * x, acc.3 + x * y)
        });
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        if (slope - 0.5).abs() > 0.05 {
            failures.push(format!("amplitude exponent {slope} outside 0.5 +/- 0.05"));
        }
    }
    report("04", "hopf-amplitude-law-plus-branch", &failures);
}

#[test]
fn a05_subcritical_minus_branch() {
    let model = NormalizedModel::new(0.5, 1.0, 1.0, 0.0).unwrap();
    let hp = hopf_in_tau(&model, Branch::Minus, 0).unwrap();
    let mu = -0.02;
    let pred = hp.predicted_cycle(mu).unwrap();
    let tau = hp.tau0 + mu;
    let cfg = SimConfig::cycle_study(tau, hp.omega0, 0.8 * pred.amplitude);
    let traj = simulate(&model.with_tau(tau), &cfg).unwrap();
    let mut failures = Vec::new();
    match measure_amplitude(&traj, cfg.transient) {
        Ok(a) => {
            let rel = (a.amplitude - pred.amplitude).abs() / pred.amplitude;
            if rel > 0.20 {
                failures.push(format!(
                    "simulated {} vs predicted {} ({:.1}%)",
                    a.amplitude,
                    pred.amplitude,
                    100.0 * rel
                ));
            }
            if (pred.amplitude - 0.305).abs() > 5e-4 {
                failures.push(format!("predicted amplitude {} drifted from 0.305", pred.amplitude));
            }
        }
        Err(e) => failures.push(format!("{e}")),
    }
    report("05", "subcritical-minus-branch", &failures);
}

#[test]
fn a06_resonant_gain_detuning() {
    // tau = 2 pi, alpha2 = 0.5, alpha3 = 0.52 (kappa = 0.52, K3 = 1)
    let model = NormalizedModel::new(0.5, 0.52, 1.0, 2.0 * std::f64::consts::PI).unwrap();
    let hp = hopf_in_alpha(&model, 1).unwrap();
    let mu = 0.02;
    let pred = hp.predicted_cycle(mu).unwrap();
    let mut failures = Vec::new();
    if (pred.amplitude - 0.392).abs() > 5e-4 {
        failures.push(format!("predicted amplitude {} drifted from 0.392", pred.amplitude));
    }
    let cfg = SimConfig::cycle_study(model.tau, 1.0, 0.8 * pred.amplitude);
    let traj = simulate(&model, &cfg).unwrap();
    match measure_amplitude(&traj, cfg.transient) {
        Ok(a) => {
            let rel = (a.amplitude - pred.amplitude).abs() / pred.amplitude;
            if rel > 0.20 {
                failures.push(format!(
                    "simulated {} vs predicted {} ({:.1}%)",
                    a.amplitude,
                    pred.amplitude,
                    100.0 * rel
                ));
            }
        }
        Err(e) => failures.push(format!("{e}")),
    }
    match measure_frequency(&traj, cfg.transient) {
        Ok(f) => {
            if (f.omega - 1.0).abs() > 0.05 {
                failures.push(format!("frequency {} vs 1.0", f.omega));
            }
        }
        Err(e) => failures.push(format!("frequency: {e}")),
    }
    report("06", "resonant-gain-detuning", &failures);
}

#[test]
fn a07_double_hopf_location() {
    let mut failures = Vec::new();
    match find_double_hopf(0.5, 1, 1, (0.6, 0.9)) {
        Ok(pt) => {
            let r1 = char_fn(Complex64::new(0.0, pt.omega1), pt.tau0, pt.alpha2, pt.alpha30)
                .norm();
            let r2 = char_fn(Complex64::new(0.0, pt.omega2), pt.tau0, pt.alpha2, pt.alpha30)
                .norm();
            if r1 > 1e-8 || r2 > 1e-8 {
                failures.push(format!("characteristic residuals {r1:.2e}, {r2:.2e}"));
            }
            if !pt.nonresonant_to_order_6 {
                failures.push("nonresonance condition failed".into());
            }
            // frequency identities to 1e-12
            for c in &pt.checks {
                if c.name.starts_with("omega") && !c.passed {
                    failures.push(format!("{}: residual {:.2e}", c.name, c.residual));
                }
            }
            let b = pt.alpha30 * pt.alpha30 - pt.alpha2 * pt.alpha2;
            if (pt.omega1 * pt.omega2 - 1.0).abs() > 1e-12
                || (pt.omega1 + pt.omega2 - (4.0 + b).sqrt()).abs() > 1e-12
            {
                failures.push("frequency radical identities beyond 1e-12".into());
            }
        }
        Err(e) => failures.push(format!("{e}")),
    }
    report("07", "double-hopf-location", &failures);
}

#[test]
fn a08a_unfolding_algebra() {
    let pt = find_double_hopf(0.5, 1, 1, (0.6, 0.9)).unwrap();
    let cubic = cubic_coeffs(&pt).unwrap();
    let lin = linear_unfolding(&pt).unwrap();
    let mut failures = Vec::new();

    // amplitude/phase ratios to 1e-12
    let w1s = pt.omega1 * pt.omega1;
    let w2s = pt.omega2 * pt.omega2;
    let ratios = [
        (cubic.a[0][0] / cubic.a[0][1], w1s / (2.0 * w2s), "a11/a12"),
        (cubic.a[1][0] / cubic.a[1][1], 2.0 * w1s / w2s, "a21/a22"),
        (cubic.q[0][0] / cubic.q[0][1], w1s / (2.0 * w2s), "q11/q12"),
        (cubic.q[1][0] / cubic.q[1][1], 2.0 * w1s / w2s, "q21/q22"),
    ];
    for (got, want, name) in ratios {
        if (got - want).abs() > 1e-12 * want.abs() {
            failures.push(format!("{name} = {got} vs {want}"));
        }
    }
    // deltas
    match deltas(&cubic) {
        Ok((d1, d2)) => {
            if (d1 * d2 - 4.0).abs() > 1e-10 {
                failures.push(format!("delta1 delta2 = {}", d1 * d2));
            }
            if !(d1 > d2 && d2 > 0.0) {
                failures.push(format!("ordering delta1 > delta2 > 0 violated: {d1}, {d2}"));
            }
        }
        Err(e) => failures.push(format!("{e}")),
    }
    // dual-path cubic agreement is enforced inside cubic_coeffs (1e-10);
    // double-check the recorded residual
    let dual = cubic.checks.iter().find(|c| c.name == "cubic_dual_path").unwrap();
    if !dual.passed {
        failures.push(format!("cubic dual-path residual {:.2e}", dual.residual));
    }
    // linear response vs both oracles, relative 1e-3
    let (c_fd, e_fd) = fd_linear_response(&pt, 1e-5);
    let (c_rt, e_rt) = root_slope_response(&pt, 1e-6).unwrap();
    for j in 0..2 {
        for l in 0..2 {
            for (got, fd, tag) in [
                (lin.c[j][l], c_fd[j][l], "c-4x4"),
                (lin.c[j][l], c_rt[j][l], "c-root"),
                (lin.e[j][l], e_fd[j][l], "e-4x4"),
                (lin.e[j][l], e_rt[j][l], "e-root"),
            ] {
                if (got - fd).abs() > 1e-3 * got.abs().max(1e-6) {
                    failures.push(format!("{tag}[{j}][{l}]: {got} vs {fd}"));
                }
            }
        }
    }
    // the root-derivative determinant obeys its closed identity to 1e-10
    let idc = lin.checks.iter().find(|c| c.name == "det_c_closed_identity").unwrap();
    if !idc.passed {
        failures.push(format!("det C closed identity residual {:.2e}", idc.residual));
    }
    if !(lin.det_c > 0.0) {
        failures.push(format!("det C = {} must be positive (parameter map regular)", lin.det_c));
    }
    report("08a", "unfolding-algebra", &failures);
}

/// The historical determinant closed form for the growth-rate response: the
/// directly computed matrix C (which matches both finite-difference oracles)
/// has det C = 0.3188..., the tabulated closed forms give 0.01849...,
/// and the formula this check demands gives 0.02445.... No matrix satisfies
/// both this identity and the derivative oracles, so this check fails and is
/// expected to: the identity itself is inconsistent with the coefficient
/// tables it was derived from.
#[test]
fn a08b_det_c_matches_historical_closed_form() {
    let pt = find_double_hopf(0.5, 1, 1, (0.6, 0.9)).unwrap();
    let lin = linear_unfolding(&pt).unwrap();
    let (w1s, w2s) = (pt.omega1 * pt.omega1, pt.omega2 * pt.omega2);
    let b = pt.alpha30 * pt.alpha30 - pt.alpha2 * pt.alpha2;
    let delta1 = 4.0 * pt.alpha2 + 2.0 * pt.tau0 * pt.alpha30 + pt.alpha2 * b;
    let hist = pt.tau0 * pt.tau0 * (w1s - w2s).powi(3) * delta1
        / (pt.alpha30 * pt.beta(1) * pt.beta(2) * (3.0 * w1s * w1s + 3.0 * w2s * w2s + 10.0));
    let best = if (lin.det_c - hist).abs() < (lin.det_c_tabulated - hist).abs() {
        lin.det_c
    } else {
        lin.det_c_tabulated
    };
    let rel = (best - hist).abs() / hist.abs();
    println!(
        "ACCEPTANCE 08b det-c-historical-closed-form: {} — det C (derivatives) = {:.12}, \
         det C (tables) = {:.12}, closed form = {:.12}, best relative deviation {:.3e}",
        if rel <= 1e-10 { "PASS" } else { "FAIL (expected: identity inconsistent with its own tables)" },
        lin.det_c,
        lin.det_c_tabulated,
        hist,
        rel
    );
    assert!(
        rel <= 1e-10,
        "det C does not match the historical closed form: derivatives give {}, \
         tables give {}, formula gives {} — the formula is inconsistent with both \
         (see double_hopf::unfolding module docs)",
        lin.det_c,
        lin.det_c_tabulated,
        hist
    );
}

#[test]
fn a09_amplitude_phase_portrait() {
    let pt = find_double_hopf(0.5, 1, 1, (0.6, 0.9)).unwrap();
    let cubic = cubic_coeffs(&pt).unwrap();
    let (d1, d2) = deltas(&cubic).unwrap();
    let mut rng = Lcg::new(909);
    let mut counts = std::collections::HashMap::new();
    let mut failures = Vec::new();
    let mut total = 0;
    while total < 6 * 20 {
        let s = (rng.range(-1.0, 1.0), rng.range(-1.0, 1.0));
        let region = match classify_sigma_region(s.0, s.1, d1, d2) {
            Ok(SigmaLocus::Region(r)) => r,
            _ => continue,
        };
        // stay away from the boundaries so convergence is unambiguous
        let scale = s.0.abs().max(s.1.abs());
        let mut margin = s.0.abs().min(s.1.abs());
        if s.1 > 0.0 {
            margin = margin.min((s.0 - d1 * s.1).abs());
        }
        if s.0 > 0.0 {
            margin = margin.min((s.1 - d2 * s.0).abs());
        }
        if margin / scale < 0.04 {
            continue;
        }
        let c = counts.entry(format!("{region:?}")).or_insert(0usize);
        if *c >= 20 {
            continue;
        }
        *c += 1;
        total += 1;
        let eqs = equilibria(d1, d2, s).unwrap();
        if region == double_hopf::SigmaRegion::IV {
            let e3 = eqs.equilibrium(EqName::E3);
            match e3 {
                Some(e3) => {
                    let jac = flow_jacobian(d1, d2, s, e3.location);
                    let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
                    if !(e3.location.0 > 0.0 && e3.location.1 > 0.0 && det < 0.0) {
                        failures.push(format!("sigma {s:?}: E3 not an interior saddle"));
                    }
                }
                None => failures.push(format!("sigma {s:?}: E3 missing in region IV")),
            }
        }
        let start = (rng.range(0.02, 1.2), rng.range(0.02, 1.2));
        let end = integrate_flow(d1, d2, s, start, 8000.0).unwrap();
        let predicted = predicted_attractors(region);
        let hit = predicted.iter().any(|&name| {
            eqs.equilibrium(name).map_or(false, |eq| {
                (end.0 - eq.location.0).abs() < 1e-6 && (end.1 - eq.location.1).abs() < 1e-6
            })
        });
        if !hit {
            failures.push(format!(
                "region {region:?} sigma {s:?}: flow ended at {end:?}, predicted {predicted:?}"
            ));
        }
    }
    report("09", "amplitude-phase-portrait", &failures);
}

#[test]
fn a10a_torus_nondegeneracy_hypotheses() {
    let pt = find_double_hopf(0.5, 1, 1, (0.6, 0.9)).unwrap();
    let cubic = cubic_coeffs(&pt).unwrap();
    let lin = linear_unfolding(&pt).unwrap();
    let kam = kam_nondegeneracy(&pt, &cubic, &lin, (1.0, 1.0)).unwrap();
    let mut failures = Vec::new();
    if !(kam.delta_cap1 > 0.0) {
        failures.push(format!("Delta1 = {}", kam.delta_cap1));
    }
    if !(kam.delta_cap2 > 0.0) {
        failures.push(format!("Delta2 = {}", kam.delta_cap2));
    }
    if !(kam.d1r > 0.0 && kam.d2r > 0.0) {
        failures.push(format!("d1r = {}, d2r = {}", kam.d1r, kam.d2r));
    }
    if !(kam.omega0_trace < 0.0) {
        failures.push(format!("Omega0 trace = {}", kam.omega0_trace));
    }
    if !(kam.omega0_det < 0.0) {
        failures.push(format!("Omega0 det = {}", kam.omega0_det));
    }
    // the one reproducible determinant identity: det(E+D1C) of the tables
    // vs its closed form (sign-corrected), dual-path to 1e-8
    let c = kam.checks.iter().find(|c| c.name == "kam_det_tabulated_closed_det").unwrap();
    if !c.passed {
        failures.push(format!("tabulated det(E+D1C) vs closed form residual {:.2e}", c.residual));
    }
    // the root-derivative determinant vanishes identically; direct and
    // closed evaluations agree to 1e-8 (both are zero)
    if kam.kam_det.abs() > 1e-8 {
        failures.push(format!("direct frequency-map determinant = {} (expected 0)", kam.kam_det));
    }
    report("10a", "torus-nondegeneracy-hypotheses", &failures);
}

/// Strict positivity of the frequency-map determinant, dual path to 1e-8.
/// With the directly computed linear response the determinant vanishes
/// identically (the gain parameter and the feedback nonlinearity act
/// through the same scalar channel, so `E + D1 C` has an exactly null
/// column). With the tabulated coefficients the determinant is positive
/// (0.2435) but disagrees with its own closed form (0.1841) beyond any
/// tolerance. Neither route satisfies "dual-path agreement to 1e-8 AND
/// strictly positive", so this check fails and is expected to.
#[test]
fn a10b_kam_determinant_strictly_positive() {
    let pt = find_double_hopf(0.5, 1, 1, (0.6, 0.9)).unwrap();
    let cubic = cubic_coeffs(&pt).unwrap();
    let lin = linear_unfolding(&pt).unwrap();
    let kam = kam_nondegeneracy(&pt, &cubic, &lin, (1.0, 1.0)).unwrap();
    let direct_ok = kam.kam_det > 1e-8
        && (kam.kam_det - kam.kam_det_closed).abs() <= 1e-8 * kam.kam_det_closed.abs().max(1.0);
    let tabulated_ok = kam.kam_det_tabulated > 1e-8
        && (kam.kam_det_tabulated - kam.kam_det_closed).abs()
            <= 1e-8 * kam.kam_det_closed.abs().max(1.0);
    let ok = direct_ok || tabulated_ok;
    println!(
        "ACCEPTANCE 10b kam-determinant-strictly-positive: {} — direct = {:.3e}, \
         tabulated = {:.6}, closed form = {:.6}",
        if ok { "PASS" } else { "FAIL (expected: determinant vanishes at first order)" },
        kam.kam_det,
        kam.kam_det_tabulated,
        kam.kam_det_closed
    );
    assert!(
        ok,
        "frequency-map determinant: direct route = {:.3e} (vanishes identically), \
         tabulated route = {:.6} vs closed form {:.6} (no dual-path agreement); \
         strict positivity with dual-path agreement is unattainable \
         (see double_hopf::unfolding module docs)",
        kam.kam_det, kam.kam_det_tabulated, kam.kam_det_closed
    );
}

#[test]
fn a11_integrator_order_and_growth_rates() {
    let mut failures = Vec::new();
    // Richardson triple on a smooth settled trajectory
    let run = |n: usize| -> [f64; 2] {
        let tau = 2.0f64;
        let cfg = SimConfig {
            step: tau / n as f64,
            duration: 30.0,
            transient: 1.0,
            history: History::Sinusoid { amplitude: 0.4, omega: 1.0 },
        };
        simulate_components(0.5, 1.0, 1.0, tau, &cfg).unwrap().final_state()
    };
    let (a, b, c) = (run(50), run(100), run(200));
    let e1 = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    let e2 = ((b[0] - c[0]).powi(2) + (b[1] - c[1]).powi(2)).sqrt();
    let ratio = e1 / e2;
    if !(13.0..=19.0).contains(&ratio) {
        failures.push(format!("Richardson ratio {ratio} outside 16 +/- 3"));
    }

    // linearized growth/decay rates vs the rightmost characteristic root
    // (points chosen with an oscillatory dominant pair well separated from
    // the subdominant spectrum)
    let points = [
        (1.0, 0.5, 5.0),  // stable for all delays
        (0.5, 1.0, 1.0),  // below the first window: growing
        (0.5, 1.0, 2.0),  // inside the window: decaying
        (0.5, 1.0, 3.6),  // just past tau_0^+: growing
        (0.7, 1.4, 1.2),  // second window family: growing
    ];
    for &(alpha2, alpha3, tau) in &points {
        let roots = rightmost_roots(alpha2, alpha3, tau, 2).unwrap();
        let lam = roots[0];
        let sigma = lam.re;
        // long enough for ~9 e-folds of the dominant mode and >= 8 extrema
        let e_folds = 9.2;
        let t_end = (e_folds / sigma.abs()).max(40.0 / lam.im).clamp(30.0, 400.0);
        let cfg = SimConfig {
            step: tau / 200.0,
            duration: t_end,
            transient: 0.0,
            history: History::Sinusoid { amplitude: 1e-6, omega: lam.im },
        };
        let traj = simulate_components(alpha2, alpha3, 1.0, tau, &cfg).unwrap();
        // fit ln |x1| extrema over the middle of the run
        let h = traj.step;
        let (t_lo, t_hi) = (0.25 * t_end, 0.9 * t_end);
        let mut pts = Vec::new();
        for i in 1..traj.states.len() - 1 {
            let t = i as f64 * h;
            if t < t_lo || t > t_hi {
                continue;
            }
            let (p, q, r) = (traj.states[i - 1][0], traj.states[i][0], traj.states[i + 1][0]);
            if (q - p) * (r - q) < 0.0 && q.abs() > 1e-300 {
                pts.push((t, q.abs().ln()));
            }
        }
        if pts.len() < 6 {
            failures.push(format!("({alpha2},{alpha3},{tau}): too few extrema for a fit"));
            continue;
        }
        let n = pts.len() as f64;
        let (sx, sy, sxx, sxy) = pts.iter().fold((0.0, 0.0, 0.0, 0.0), |acc, &(x, y)| {
            (acc.0 + x, acc.1 + y, acc.2 + x * x, acc.3 + x * y)
        });
        let fit = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        if (fit - sigma).abs() > 0.02 * sigma.abs() {
            failures.push(format!(
                "({alpha2},{alpha3},{tau}): fitted rate {fit} vs rightmost Re {sigma}"
            ));
        }
    }
    report("11", "integrator-order-and-growth-rates", &failures);
}

/// Guard: marginal delays are refused rather than misclassified.
#[test]
fn marginal_refusals_are_explicit() {
    let set = critical_delays(0.5, 1.0, 0).unwrap();
    assert!(matches!(
        stability(0.5, 1.0, set.branch_plus[0]),
        Err(Error::Marginal { .. })
    ));
}
