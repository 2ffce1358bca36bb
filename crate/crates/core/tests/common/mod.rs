#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, TAU};

use cavity_discord::dynamics::{BellFamily, ModelParams, Scenario, Topology};
use cavity_discord::XState;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const TOPOLOGIES: [Topology; 2] = [Topology::IndependentCavities, Topology::CommonCavity];
pub const FAMILIES: [BellFamily; 2] = [BellFamily::AntiCorrelated, BellFamily::Correlated];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Valid X-state with random populations and coherences inside the
/// block-positivity bounds.
pub fn random_x_state(rng: &mut impl Rng) -> XState {
    let raw: [f64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
    let total: f64 = raw.iter().sum();
    let [v_plus, w, x, v_minus] = raw.map(|r| r / total);
    let y = C64::from_polar((w * x).sqrt() * rng.gen::<f64>(), rng.gen_range(0.0..TAU));
    let u = C64::from_polar(
        (v_plus * v_minus).sqrt() * rng.gen::<f64>(),
        rng.gen_range(0.0..TAU),
    );
    XState {
        v_plus,
        v_minus,
        w,
        x,
        y,
        u,
    }
}

pub fn random_alpha(rng: &mut impl Rng) -> f64 {
    rng.gen_range(0.01..FRAC_PI_2 - 0.01)
}

/// Resonant scenario with random α and g, plus a random time with g·t in
/// [0, 4π].
pub fn random_resonant(
    rng: &mut impl Rng,
    topology: Topology,
    bell: BellFamily,
) -> (Scenario, f64) {
    let g = rng.gen_range(0.02..0.5);
    let params = ModelParams::resonant(1.0, g).unwrap();
    let scenario = Scenario::new(topology, bell, random_alpha(rng), params).unwrap();
    let t = rng.gen_range(0.0..4.0 * std::f64::consts::PI) / g;
    (scenario, t)
}
