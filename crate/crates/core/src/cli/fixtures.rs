//! Built-in example plants and Σ presets.

use super::config::{EntrySpec, PlantSpec, ProblemConfig, SigmaSpec};
use crate::stabdata::{ModeRequest, Tolerances};
use crate::RMat;

pub const PRESET_NAMES: [&str; 8] = ["example1", "a", "b", "c", "d", "e", "f", "example2"];

/// Σ presets; `a`..`f` are the alternatives studied on the first example.
pub fn sigma_preset(name: &str) -> Option<RMat> {
    let (r, v): (usize, &[f64]) = match name {
        "example1" => (2, &[0.3, 0.0, 0.0, 0.5]),
        "a" => (2, &[-0.1, -0.9, 0.4, -0.6]),
        "b" => (2, &[0.4, 0.1, 0.5, 0.4]),
        "c" => (2, &[0.2, 0.35, 0.6, 0.4]),
        "d" => (2, &[-0.8, 0.1, 0.6, -0.2]),
        "e" => (2, &[-0.65, 0.22, 0.8, -0.2]),
        "f" => (2, &[0.8, -0.33, 0.9, 0.7]),
        "example2" => (4, &[0.4, 0.2, 0.3, -0.5, 0.8, -0.1, 0.6, -0.2]),
        _ => return None,
    };
    Some(RMat::from_row_slice(r, 2, v))
}

fn c(x: f64) -> EntrySpec {
    EntrySpec::Constant(x)
}

fn r(num: &[f64], den: &[f64]) -> EntrySpec {
    EntrySpec::Rational { num: num.to_vec(), den: den.to_vec() }
}

/// Two-by-two plants with constant numerators; unstable zeros near 1.494 and 12.24.
pub fn example1() -> ProblemConfig {
    let plants = PlantSpec {
        n0: vec![vec![c(1.0), c(2.0)], vec![c(3.0), c(1.0)]],
        d0: vec![vec![r(&[-2.0, 1.0], &[6.0, 1.0]), c(1.0)], vec![c(3.0), r(&[-2.7, 1.0], &[10.0, 1.0])]],
        n1: vec![vec![c(1.0), c(2.0)], vec![c(4.0), c(3.0)]],
        d1: vec![vec![r(&[-3.2, 1.0], &[2.2, 1.0]), c(1.0)], vec![c(6.0), r(&[-7.7, 1.0], &[1.0, 1.0])]],
    };
    ProblemConfig {
        plants,
        sigma: Some(SigmaSpec::Preset("example1".into())),
        alpha: 1.0,
        mode: ModeRequest::Auto,
        grid: "0:0.1:1".into(),
        tolerances: Tolerances::default(),
    }
}

/// Two-by-two plants with second-order entries; one real and one complex
/// pair of unstable zeros, interpolated through principal square roots.
pub fn example2() -> ProblemConfig {
    // a = s^2 + 2 s + 10, b = s^2 + 2 s + 15
    let a = [10.0, 2.0, 1.0];
    let b = [15.0, 2.0, 1.0];
    let plants = PlantSpec {
        n0: vec![vec![r(&[3.0, -6.0, 3.0], &a), c(5.0)], vec![c(4.0), r(&[16.0, -12.0, 2.0], &a)]],
        d0: vec![vec![r(&[12.0, -10.0, 2.0], &a), c(-1.0)], vec![c(3.0), r(&[4.0, -4.0, 1.0], &a)]],
        n1: vec![vec![r(&[-1.0, 0.0, 1.0], &b), c(6.0)], vec![c(7.0), r(&[8.0, -9.0, 1.0], &b)]],
        d1: vec![vec![r(&[-12.0, -4.0, 1.0], &b), c(2.0)], vec![c(-1.0), r(&[135.0, -42.0, 3.0], &b)]],
    };
    ProblemConfig {
        plants,
        sigma: Some(SigmaSpec::Preset("example2".into())),
        alpha: 1.0,
        mode: ModeRequest::Sqrt,
        grid: "0:0.1:1".into(),
        tolerances: Tolerances::default(),
    }
}

pub fn example(name: &str) -> Option<ProblemConfig> {
    match name {
        "example1" => Some(example1()),
        "example2" => Some(example2()),
        _ => None,
    }
}
