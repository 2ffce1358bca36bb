//! Acceptance checks, one line per criterion. Exits nonzero if any fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use cavity_discord::correlations::{
    binary_entropy, concurrence, concurrence_witness, conditional_entropy, correlations,
    entropy_bits, esd_critical_angle, minimize_conditional_entropy, resonant_period,
    scan_critical_angle, MeasurementBasis, ESD_MARGIN,
};
use cavity_discord::dynamics::jc_amplitudes_anti;
use cavity_discord::oracle::{oracle_concurrence, oracle_discord, oracle_evolve};
use cavity_discord::reduced::reduce;
use cavity_discord::{
    BellFamily, CorrelationPoint, Engine, ModelParams, Scenario, Topology, Trajectory, XState,
};
use cavity_discord_cli::{figure_preset, run_sweep, RunConfig};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

const G: f64 = 0.1;
const TOPOLOGIES: [Topology; 2] = [Topology::IndependentCavities, Topology::CommonCavity];
const FAMILIES: [BellFamily; 2] = [BellFamily::AntiCorrelated, BellFamily::Correlated];

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn trajectory(topology: Topology, bell: BellFamily, alpha: f64, engine: Engine) -> Trajectory {
    let p = ModelParams::resonant(1.0, G).unwrap();
    Trajectory::new(&Scenario::new(topology, bell, alpha, p).unwrap(), engine).unwrap()
}

fn preset(name: &str) -> RunConfig {
    figure_preset(name).unwrap().remove(0).config
}

fn random_x_state(rng: &mut impl Rng) -> XState {
    let raw: [f64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
    let total: f64 = raw.iter().sum();
    let [v_plus, w, x, v_minus] = raw.map(|r| r / total);
    XState {
        v_plus,
        v_minus,
        w,
        x,
        y: C64::from_polar((w * x).sqrt() * rng.gen::<f64>(), rng.gen_range(0.0..TAU)),
        u: C64::from_polar(
            (v_plus * v_minus).sqrt() * rng.gen::<f64>(),
            rng.gen_range(0.0..TAU),
        ),
    }
}

fn bell_initial_values() -> Check {
    let mut worst = 0.0_f64;
    for topology in TOPOLOGIES {
        for bell in FAMILIES {
            let p = trajectory(topology, bell, FRAC_PI_4, Engine::Closed)
                .point(0.0)
                .unwrap();
            let err = (p.discord - 1.0).abs().max((p.concurrence - 1.0).abs());
            ensure(err < 1e-9, || {
                format!("{topology}/{bell}: D={} C_AB={}", p.discord, p.concurrence)
            })?;
            worst = worst.max(err);
        }
    }
    Ok(format!("4 scenarios, max |value - 1| = {worst:.1e}"))
}

/// Maximal runs of consecutive indices where `pred` holds.
fn runs(n: usize, pred: impl Fn(usize) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for i in 0..=n {
        match (i < n && pred(i), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn discrete_discord_zeros() -> Check {
    let alpha = PI / 6.0;
    let traj = trajectory(
        Topology::IndependentCavities,
        BellFamily::Correlated,
        alpha,
        Engine::Closed,
    );
    let at = |gt: f64| traj.point(gt / G).unwrap();
    for gt in [FRAC_PI_2, 3.0 * FRAC_PI_2] {
        let d = at(gt).discord;
        ensure(d < 1e-6, || format!("D(gt={gt}) = {d:e}"))?;
    }
    for gt in [FRAC_PI_4, PI] {
        let d = at(gt).discord;
        ensure(d > 1e-3, || format!("D(gt={gt}) = {d:e}"))?;
    }

    // fine grid over one period, placing gt = π/2 exactly on a node
    let n = 4001;
    let times: Vec<f64> = (0..n).map(|i| PI * i as f64 / (n - 1) as f64 / G).collect();
    let states: Vec<XState> = times.iter().map(|&t| traj.x_state(t).unwrap()).collect();
    let zero_idx = (n - 1) / 2;
    let window = runs(n, |i| concurrence(&states[i]) == 0.0)
        .into_iter()
        .find(|&(a, b)| a <= zero_idx && zero_idx <= b)
        .ok_or("no sudden-death window around gt = pi/2")?;
    let (a, b) = window;
    ensure(b > a, || "sudden-death window is a single point".into())?;
    ensure(
        (a..=b)
            .filter(|&i| concurrence_witness(&states[i]) < -ESD_MARGIN)
            .count()
            > 1,
        || "concurrence only touches zero".into(),
    )?;
    let mut min_inside = f64::INFINITY;
    for i in a..=b {
        let d = correlations(&states[i]).discord;
        let c = concurrence(&states[i]);
        ensure(c == 0.0, || format!("C_AB = {c} inside the window"))?;
        if i != zero_idx {
            ensure(d > 0.0, || format!("D = {d} at gt = {}", G * times[i]))?;
            min_inside = min_inside.min(d);
        }
    }
    Ok(format!(
        "D(pi/2), D(3pi/2) < 1e-6; ESD window gt in [{:.4}, {:.4}], min D off the zero = {min_inside:.2e}",
        G * times[a],
        G * times[b]
    ))
}

fn anti_concurrence_closed_form() -> Check {
    let mut worst = 0.0_f64;
    for alpha in [FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8] {
        let c = RunConfig {
            topology: Topology::IndependentCavities,
            bell: BellFamily::AntiCorrelated,
            alpha,
            ..RunConfig::default()
        };
        let points = run_sweep(&c).unwrap();
        ensure(points.len() == 801, || "wrong grid size".into())?;
        for p in points {
            let gt = G * p.t;
            let want = (2.0 * alpha).sin().abs() * gt.cos().powi(2);
            worst = worst.max((p.concurrence - want).abs());
        }
    }
    ensure(worst < 1e-9, || format!("max deviation {worst:e}"))?;
    Ok(format!("3 angles x 801 points, max deviation {worst:.1e}"))
}

fn critical_angles() -> Check {
    let start = Instant::now();
    let p = ModelParams::resonant(1.0, G).unwrap();
    let mut parts = Vec::new();
    for topology in TOPOLOGIES {
        let found = scan_critical_angle(topology, &p, 10_000, 1e-5).map_err(|e| e.to_string())?;
        let want = esd_critical_angle(topology);
        ensure((found - want).abs() < 1e-3, || {
            format!("{topology}: {found} vs {want}")
        })?;
        parts.push(format!("{topology}: {found:.6} (exact {want:.6})"));
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("scan took {secs:.1} s"))?;
    Ok(format!("{}; {secs:.1} s", parts.join(", ")))
}

fn common_cavity_discord_survives() -> Check {
    let c = preset("fig3b");
    let traj = Trajectory::new(&c.scenario().unwrap(), Engine::Closed).unwrap();
    let period = resonant_period(Topology::CommonCavity, c.g);
    let n = 4000;
    let points: Vec<CorrelationPoint> = (0..n)
        .map(|i| traj.point(period * i as f64 / n as f64).unwrap())
        .collect();
    let min_d = points
        .iter()
        .map(|p| p.discord)
        .fold(f64::INFINITY, f64::min);
    ensure(min_d > 1e-3, || format!("min D = {min_d:e}"))?;
    let states: Vec<XState> = (0..n)
        .map(|i| traj.x_state(period * i as f64 / n as f64).unwrap())
        .collect();
    let windows = runs(n, |i| concurrence_witness(&states[i]) < -ESD_MARGIN);
    ensure(!windows.is_empty(), || "no sudden-death window".into())?;
    for &(a, b) in &windows {
        ensure(b > a + 1, || format!("window [{a}, {b}] too short"))?;
        let mid = points[(a + b) / 2].discord;
        let edges = points[a].discord.max(points[b].discord);
        ensure(mid > edges, || {
            format!("D(mid) = {mid} not above edges {edges}")
        })?;
    }
    let (a, b) = windows[0];
    Ok(format!(
        "min D = {min_d:.4}, {} ESD window(s), first: D(edge) = {:.4}, D(mid) = {:.4}",
        windows.len(),
        points[a].discord,
        points[(a + b) / 2].discord
    ))
}

fn detuning_suppression() -> Check {
    let mut parts = Vec::new();
    for name in ["fig2a", "fig2b", "fig4a", "fig4b"] {
        let amps: Vec<f64> = figure_preset(name)
            .unwrap()
            .into_iter()
            .map(|r| {
                let d: Vec<f64> = run_sweep(&r.config)
                    .unwrap()
                    .iter()
                    .map(|p| p.discord)
                    .collect();
                let max = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let min = d.iter().cloned().fold(f64::INFINITY, f64::min);
                max - min
            })
            .collect();
        let (a1, a2, a5) = (amps[0], amps[1], amps[2]);
        ensure(a5 + 1e-3 < a2 && a2 + 1e-3 < a1, || {
            format!("{name}: amp(g)={a1} amp(2g)={a2} amp(5g)={a5}")
        })?;
        if name == "fig4b" {
            ensure(a5 < 0.05, || format!("fig4b amp(5g) = {a5}"))?;
        }
        parts.push(format!("{name} {a1:.3}>{a2:.3}>{a5:.3}"));
    }
    Ok(parts.join(", "))
}

fn oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut dd, mut dc, mut dn) = (0.0_f64, 0.0_f64, 0.0_f64);
    for topology in TOPOLOGIES {
        for bell in FAMILIES {
            for _ in 0..100 {
                let alpha = rng.gen_range(0.01..FRAC_PI_2 - 0.01);
                let t = rng.gen_range(0.0..4.0 * PI) / G;
                let closed = trajectory(topology, bell, alpha, Engine::Closed)
                    .point(t)
                    .unwrap();
                let numeric = trajectory(topology, bell, alpha, Engine::Numeric)
                    .point(t)
                    .unwrap();
                let p = ModelParams::resonant(1.0, G).unwrap();
                let rho = oracle_evolve(&Scenario::new(topology, bell, alpha, p).unwrap(), t)
                    .map_err(|e| e.to_string())?;
                let od = oracle_discord(&rho).map_err(|e| e.to_string())?;
                let oc = oracle_concurrence(&rho).map_err(|e| e.to_string())?;
                dd = dd.max((closed.discord - od.discord).abs());
                dc = dc.max((closed.concurrence - oc).abs());
                dn = dn.max((closed.discord - numeric.discord).abs());
                dn = dn.max((closed.concurrence - numeric.concurrence).abs());
            }
        }
    }
    ensure(dd < 1e-4 && dc < 1e-9 && dn < 1e-9, || {
        format!("max |dD| = {dd:e}, max |dC_AB| = {dc:e}, closed vs numeric {dn:e}")
    })?;
    Ok(format!(
        "400 draws: max |D - D_oracle| = {dd:.1e}, max |C_AB - C_oracle| = {dc:.1e}, closed vs numeric {dn:.1e}"
    ))
}

fn appendix_properties() -> Check {
    let p = ModelParams::resonant(1.0, G).unwrap();
    let mut worst_quarter = 0.0_f64;
    for i in 0..50 {
        let alpha = (i as f64 + 0.5) / 50.0 * FRAC_PI_2;
        for j in 0..50 {
            let t = j as f64 / 50.0 * 2.0 * PI / G;
            let s = reduce(&jc_amplitudes_anti(&p, alpha, t).unwrap()).unwrap();
            let at_quarter = conditional_entropy(&s, &MeasurementBasis::new(FRAC_PI_4, 0.0));
            worst_quarter =
                worst_quarter.max((minimize_conditional_entropy(&s).entropy - at_quarter).abs());
        }
    }
    ensure(worst_quarter < 1e-9, || {
        format!("theta = pi/4 property off by {worst_quarter:e}")
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst_phi = 0.0_f64;
    for k in 0..200 {
        let mut s = random_x_state(&mut rng);
        if k % 2 == 0 {
            s.u = C64::new(0.0, 0.0);
        } else {
            s.y = C64::new(0.0, 0.0);
        }
        let theta = rng.gen_range(0.0..FRAC_PI_2);
        let base = conditional_entropy(&s, &MeasurementBasis::new(theta, 0.0));
        for j in 0..64 {
            let e = conditional_entropy(&s, &MeasurementBasis::new(theta, TAU * j as f64 / 64.0));
            worst_phi = worst_phi.max((e - base).abs());
        }
    }
    ensure(worst_phi < 1e-10, || {
        format!("phi dependence {worst_phi:e}")
    })?;

    ensure(entropy_bits([1.0, 0.0, 0.0, 0.0]) == 0.0, || {
        "pure state entropy".into()
    })?;
    ensure((binary_entropy(0.5) - 1.0).abs() < 1e-15, || {
        "mixed qubit entropy".into()
    })?;

    let mut min_d = f64::INFINITY;
    let mut worst_c = 0.0_f64;
    for _ in 0..1000 {
        let s = random_x_state(&mut rng);
        min_d = min_d.min(correlations(&s).discord);
        worst_c =
            worst_c.max((concurrence(&s) - oracle_concurrence(&s.to_matrix()).unwrap()).abs());
    }
    ensure(min_d >= 0.0, || format!("negative discord {min_d:e}"))?;
    ensure(worst_c < 1e-9, || {
        format!("concurrence vs Wootters {worst_c:e}")
    })?;
    Ok(format!(
        "theta=pi/4 {worst_quarter:.1e}, phi-independence {worst_phi:.1e}, min D {min_d:.1e}, Wootters {worst_c:.1e}"
    ))
}

fn anti_zero_sets_agree() -> Check {
    let mut parts = Vec::new();
    for (name, zero_period) in [("fig1a", PI / G), ("fig3a", PI / (2f64.sqrt() * G))] {
        let c = preset(name);
        let mut points = run_sweep(&c).unwrap();
        // the analytic zeros, which need not fall on grid nodes
        let traj = Trajectory::new(&c.scenario().unwrap(), c.engine).unwrap();
        let mut k = 0;
        while (k as f64 + 0.5) * zero_period <= c.t_max() {
            points.push(traj.point((k as f64 + 0.5) * zero_period).unwrap());
            k += 1;
        }
        let mut zeros = 0;
        let mut near = 0;
        for p in &points {
            let report = || {
                format!(
                    "{name} gt={}: D={:e} C_AB={:e}",
                    G * p.t,
                    p.discord,
                    p.concurrence
                )
            };
            if p.concurrence < 1e-9 {
                ensure(p.discord < 1e-6, report)?;
                zeros += 1;
            }
            if p.discord < 1e-9 {
                ensure(p.concurrence < 1e-6, report)?;
            }
            // both small but above the strict threshold: a grid node close to a zero
            near += (p.discord < 1e-6 && p.concurrence >= 1e-9) as usize;
        }
        ensure(zeros > 0, || format!("{name}: no zeros found"))?;
        parts.push(format!(
            "{name}: {} points, {zeros} common zeros, {near} near-zero nodes with D < 1e-6 <= C_AB",
            points.len()
        ));
    }
    Ok(parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "Bell initial values D(0) = C_AB(0) = 1",
            bell_initial_values,
        ),
        (
            "discrete discord zeros with sudden death, independent cavities",
            discrete_discord_zeros,
        ),
        (
            "anti-correlated concurrence |sin 2a| cos^2(gt)",
            anti_concurrence_closed_form,
        ),
        ("critical angles pi/4 and pi/12", critical_angles),
        (
            "common-cavity discord survives sudden death",
            common_cavity_discord_survives,
        ),
        (
            "detuning suppresses discord oscillations",
            detuning_suppression,
        ),
        ("oracle equivalence", oracle_equivalence),
        ("measurement-optimization properties", appendix_properties),
        (
            "anti-correlated discord and concurrence share zeros",
            anti_zero_sets_agree,
        ),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} [{detail}] ({secs:.1} s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name} [{detail}] ({secs:.1} s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
