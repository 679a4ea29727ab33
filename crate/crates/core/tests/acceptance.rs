// End-to-end acceptance criteria. Each test prints one PASS/FAIL line;
// run with `cargo test --test acceptance -- --nocapture` to see them.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use lightcone_doppler::blip::{
    boost_blip, boost_momentum_state, field_matrix_element, kernel_consistency_check, mode_occupation,
    photon_number, to_momentum_state, BlipState, RegularisationKernel,
};
use lightcone_doppler::classical::{
    boost_packet, box_energy, spectrum, total_energy, ClassicalWavePacket, FieldConstants, WorldlineBox,
};
use lightcone_doppler::finite_part::FinitePartQuadrature;
use lightcone_doppler::grid::{l2_distance, relative_l2, Axis, Polarization, SampledFunction};
use lightcone_doppler::kinematics::{simulate_signal_exchange, BoostParams, Direction};
use lightcone_doppler::spectral::{parseval_check, to_momentum, to_position};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};

const H: Polarization = Polarization::H;

fn report(id: u32, title: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id:>2}: {title}: {detail}");
    assert!(pass, "criterion {id} ({title}) failed: {detail}");
}

fn carrier(axis: Axis, s: Direction, w: f64, k0: f64, unit: bool) -> SampledFunction {
    let a = if unit { (PI * w * w).powf(-0.25) } else { 1.0 };
    SampledFunction::from_fn(axis, s, H, move |x| {
        Complex64::from_polar(a * (-x * x / (2.0 * w * w)).exp(), s.s() * k0 * x)
    })
}

fn blip(axis: Axis, s: Direction, w: f64, k0: f64) -> BlipState {
    BlipState::single(carrier(axis, s, w, k0, true), FieldConstants::default()).unwrap()
}

#[test]
fn c01_doppler_centroid_ratio() {
    let t = Instant::now();
    let axis = Axis::centered(0.01, 1 << 14).unwrap();
    let s = Direction::Right;
    let packet =
        ClassicalWavePacket::single(carrier(axis, s, 2.0, 20.0, false), FieldConstants::default()).unwrap();
    let ka = spectrum(&packet, s).unwrap().centroid.unwrap();
    let mut worst: f64 = 0.0;
    let mut detail = Vec::new();
    for (beta, expect) in [(0.6, 0.5), (0.5, (1.0f64 / 3.0).sqrt())] {
        let b = BoostParams::new(beta).unwrap();
        let bob = boost_packet(&packet, &b, &axis).unwrap().packet;
        let ratio = spectrum(&bob, s).unwrap().centroid.unwrap() / ka;
        worst = worst.max((ratio - expect).abs());
        detail.push(format!("beta={beta} ratio={ratio:.9}"));
    }
    let elapsed = t.elapsed();
    report(
        1,
        "Doppler centroid ratio",
        worst <= 1e-3 && elapsed < Duration::from_secs(5),
        format!(
            "{}, max error {worst:.2e}, {:.2} s",
            detail.join(", "),
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn c02_reciprocity_over_random_boosts() {
    let t = Instant::now();
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let b = BoostParams::new(rng.gen_range(-0.99..0.99)).unwrap();
        let inv = b.inverse();
        for s in Direction::BOTH {
            for product in [
                b.xi(s) * inv.xi(s),
                b.kappa(s) * inv.kappa(s),
                b.kappa(s) * b.xi(s),
            ] {
                worst = worst.max((product - 1.0).abs());
            }
        }
    }
    let elapsed = t.elapsed();
    report(
        2,
        "reciprocity identities",
        worst <= 1e-12 && elapsed < Duration::from_secs(1),
        format!(
            "1000 boosts, max error {worst:.2e}, {:.3} s",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn c03_signal_exchange() {
    let mut worst: f64 = 0.0;
    for beta in [0.1, 0.5, 0.9] {
        let b = BoostParams::new(beta).unwrap();
        let r = simulate_signal_exchange(&b, 1.0, 1.0).unwrap();
        let kappa = b.gamma() * (1.0 + beta);
        let gamma = 1.0 / (1.0 - beta * beta).sqrt();
        worst = worst
            .max((r.kappa_measured - kappa).abs())
            .max((r.gamma_inferred - gamma).abs());
    }
    report(
        3,
        "signal exchange",
        worst <= 1e-12,
        format!("max error {worst:.2e}"),
    );
}

#[test]
fn c04_box_energy() {
    let axis = Axis::centered(0.01, 1 << 14).unwrap();
    let (mut conserved, mut naive): (f64, f64) = (0.0, 0.0);
    for s in Direction::BOTH {
        let packet =
            ClassicalWavePacket::single(carrier(axis, s, 1.5, 10.0, false), FieldConstants::default())
                .unwrap();
        let bx = WorldlineBox::new(-15.0, 15.0, 1.0, 1.0, 1.0).unwrap();
        let ea = box_energy(&packet, &bx).unwrap();
        let ta = total_energy(&packet).energy;
        for beta in [-0.6, -0.3, 0.3, 0.6] {
            let b = BoostParams::new(beta).unwrap();
            let bob = boost_packet(&packet, &b, &axis).unwrap().packet;
            let eb = box_energy(&bob, &bx.boosted(s, &b)).unwrap();
            conserved = conserved.max((eb - ea).abs() / ea);
            naive = naive.max((total_energy(&bob).energy / ta - b.xi(s)).abs());
        }
    }
    report(
        4,
        "box energy",
        conserved <= 1e-6 && naive <= 1e-6,
        format!("conservation error {conserved:.2e}, uncorrected ratio error {naive:.2e}"),
    );
}

#[test]
fn c05_photon_number() {
    let axis = Axis::centered(0.01, 1 << 14).unwrap();
    let mut worst: f64 = 0.0;
    for s in Direction::BOTH {
        let state = blip(axis, s, 2.0, 10.0);
        for beta in [-0.9, -0.6, -0.3, 0.3, 0.6, 0.9] {
            let b = BoostParams::new(beta).unwrap();
            let n = photon_number(&boost_blip(&state, &b, &axis).unwrap().state);
            worst = worst.max((n - photon_number(&state)).abs());
        }
    }
    report(
        5,
        "photon number",
        worst <= 1e-6,
        format!("max change {worst:.2e}"),
    );
}

#[test]
fn c06_representation_commutativity() {
    let axis = Axis::centered(0.01, 1 << 14).unwrap();
    let b = BoostParams::new(0.6).unwrap();
    let mut worst: f64 = 0.0;
    for s in Direction::BOTH {
        let state = blip(axis, s, 2.0, 20.0);
        let lhs = to_momentum_state(&boost_blip(&state, &b, &axis).unwrap().state).unwrap();
        let rhs = boost_momentum_state(&to_momentum_state(&state).unwrap(), &b, &axis.conjugate())
            .unwrap()
            .state;
        worst = worst.max(l2_distance(lhs.channel(s, H).unwrap(), rhs.channel(s, H).unwrap()).unwrap());
    }
    report(
        6,
        "representation commutativity",
        worst <= 1e-6,
        format!("L2 distance {worst:.2e}"),
    );
}

#[test]
fn c07_kernel() {
    let s = Direction::Right;
    let constants = FieldConstants::default();

    // Spectral field against direct finite-part quadrature.
    let axis = Axis::centered(0.05, 2048).unwrap();
    let (w, k0) = (1.0, 5.0);
    let norm = (PI * w * w).powf(-0.25);
    let profile = move |x: f64| Complex64::from_polar(norm * (-x * x / (2.0 * w * w)).exp(), k0 * x);
    let state = blip(axis, s, w, k0);
    let field = field_matrix_element(&state, s).unwrap();
    let quad = FinitePartQuadrature::new(2500.0, 4000, 8);
    let scale = constants.c * RegularisationKernel::prefactor_for(&constants);
    let (mut num, mut den) = (0.0, 0.0);
    for i in (0..axis.count()).step_by(16) {
        let oracle = quad.apply(&profile, axis.point(i)) * scale;
        num += (field.values()[i] - oracle).norm_sqr();
        den += oracle.norm_sqr();
    }
    let oracle_err = (num / den).sqrt();

    // Boosted-frame consistency.
    let big = Axis::centered(0.01, 1 << 14).unwrap();
    let consistency =
        kernel_consistency_check(&blip(big, s, 2.0, 20.0), &BoostParams::new(0.6).unwrap(), &big)
            .unwrap()
            .discrepancy;

    // Multiplier proportional to sqrt|k|.
    let kernel = RegularisationKernel::new(big, &constants).unwrap();
    let k = kernel.k_axis();
    let m = kernel.multiplier();
    let c0 = m[k.count() / 2 + 1].re / k.point(k.count() / 2 + 1).abs().sqrt();
    let law = k
        .points()
        .zip(m)
        .filter(|(k, _)| *k != 0.0)
        .map(|(k, m)| (m.re / k.abs().sqrt() / c0 - 1.0).abs().max(m.im.abs()))
        .fold(0.0, f64::max);

    report(
        7,
        "regularisation kernel",
        oracle_err <= 1e-3 && consistency <= 1e-3 && law <= 1e-10,
        format!("oracle {oracle_err:.2e}, consistency {consistency:.2e}, sqrt|k| law {law:.2e}"),
    );
}

#[test]
fn c08_parseval_and_round_trip() {
    let axis = Axis::centered(0.01, 1 << 14).unwrap();
    let (mut parseval, mut round_trip): (f64, f64) = (0.0, 0.0);
    for s in Direction::BOTH {
        for (w, k0) in [(2.0, 20.0), (0.5, 0.0), (5.0, -40.0)] {
            let f = carrier(axis, s, w, k0, false);
            parseval = parseval.max(parseval_check(&f).unwrap().rel_error);
            let back = to_position(&to_momentum(&f).unwrap()).unwrap();
            round_trip = round_trip.max(relative_l2(&back, &f).unwrap());
        }
    }
    report(
        8,
        "Parseval and round trip",
        parseval <= 1e-10 && round_trip <= 1e-10,
        format!("Parseval {parseval:.2e}, round trip {round_trip:.2e}"),
    );
}

#[test]
fn c09_mode_occupation_migration() {
    let t = Instant::now();
    let axis = Axis::centered(0.05, 1 << 14).unwrap();
    let (k_a, half) = (10.0, 0.15);
    let mut worst = (f64::INFINITY, 0.0f64, f64::INFINITY);
    for s in Direction::BOTH {
        let alice = to_momentum_state(&blip(axis, s, 20.0, k_a)).unwrap();
        for beta in [0.5, -0.5] {
            let b = BoostParams::new(beta).unwrap();
            let bob = boost_momentum_state(&alice, &b, &axis.conjugate()).unwrap().state;
            let k_b = b.xi(s) * k_a;
            let before = mode_occupation(&alice, k_a - half, k_a + half).unwrap();
            let after = mode_occupation(&bob, k_a - half, k_a + half).unwrap();
            let moved = mode_occupation(&bob, k_b - half, k_b + half).unwrap();
            worst = (worst.0.min(before), worst.1.max(after), worst.2.min(moved));
        }
    }
    let elapsed = t.elapsed();
    report(
        9,
        "mode occupation migration",
        worst.0 >= 0.98 && worst.1 <= 1e-3 && worst.2 >= 0.98 && elapsed < Duration::from_secs(5),
        format!(
            "before {:.6}, left behind {:.2e}, shifted window {:.6}, {:.2} s",
            worst.0,
            worst.1,
            worst.2,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn c10_check_all_over_shipped_scenarios() {
    let out = tempfile::tempdir().unwrap();
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios");
    let t = Instant::now();
    let result = Command::new(env!("CARGO_BIN_EXE_lcdoppler"))
        .args(["check-all", dir, "--out"])
        .arg(out.path())
        .output()
        .unwrap();
    let elapsed = t.elapsed();
    let stdout = String::from_utf8_lossy(&result.stdout);
    let rows = stdout.lines().filter(|l| l.contains(".cfg")).count();
    report(
        10,
        "check-all over shipped scenarios",
        result.status.code() == Some(0) && elapsed < Duration::from_secs(60),
        format!(
            "exit {:?}, {rows} scenarios, {:.2} s",
            result.status.code(),
            elapsed.as_secs_f64()
        ),
    );
}
