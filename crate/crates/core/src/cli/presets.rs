//! Named parameter sets reproducing the published figures.
//!
//! Cavity values are nominally in Hz and are used verbatim as rad/s unless `frequency_unit = hz`.
//! The amplitude-quadrature curves (`theta = -pi/2`) carry no position signal in
//! the estimator, so they are drawn with the per-point optimal angle, which tends
//! to `-pi/2` at high power.

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub settings: &'static [(&'static str, &'static str)],
}

const CAVITY: [(&str, &str); 4] = [
    ("mass", "1e-6"),
    ("omega_m", "100"),
    ("kappa", "1e6"),
    ("gamma", "1e-4"),
];

macro_rules! preset {
    ($name:expr, $summary:expr, [$($k:expr => $v:expr),* $(,)?]) => {
        Preset { name: $name, summary: $summary, settings: &[$(($k, $v)),*] }
    };
}

pub const PRESETS: &[Preset] = &[
    preset!("fig-single-b", "single mode, phase quadrature, r = 0 and r = 2 at phi = 0, +-pi/4", [
        "command" => "toy", "variant" => "single", "beta" => "1",
        "series" => "r=0; r=2 phi=0; r=2 phi=pi/4; r=2 phi=-pi/4",
    ]),
    preset!("fig-single-c", "single mode, theta = -pi/4 and optimal angle, phi = 0", [
        "command" => "toy", "variant" => "single", "beta" => "1",
        "series" => "r=0 theta=-pi/4; r=0 theta=opt; r=2 theta=-pi/4; r=2 theta=opt",
    ]),
    preset!("fig-single-d", "single mode, phase quadrature with detection loss", [
        "command" => "toy", "variant" => "single", "beta" => "1",
        "series" => "r=0; r=2 phi=pi/4; r=2 phi=pi/4 eta2=0.05; r=2 phi=pi/4 eta2=0.1; r=2 phi=pi/4 eta2=0.2",
    ]),
    preset!("fig-single-e", "single mode, theta = -pi/4 and optimal angle with detection loss", [
        "command" => "toy", "variant" => "single", "beta" => "1",
        "series" => "r=2 theta=-pi/4; r=2 theta=-pi/4 eta2=0.1; r=2 theta=opt; r=2 theta=opt eta2=0.1",
    ]),
    preset!("fig-two-b", "two mode, phase difference quadrature, r = 0 and r = 2 at phi = 0, +-pi/4", [
        "command" => "toy", "variant" => "two", "beta" => "1",
        "series" => "r=0; r=2 phi=0; r=2 phi=pi/4; r=2 phi=-pi/4",
    ]),
    preset!("fig-two-c", "two mode, theta = -pi/4 and optimal angle", [
        "command" => "toy", "variant" => "two", "beta" => "1",
        "series" => "r=0 theta=-pi/4; r=0 theta=opt; r=2 theta=-pi/4; r=2 theta=opt",
    ]),
    preset!("fig-two-d", "two mode, phase difference quadrature with power asymmetry 0.9", [
        "command" => "toy", "variant" => "two", "beta" => "1",
        "series" => "r=2 phi=pi/4; r=2 phi=pi/4 asym=0.9; r=2 phi=0; r=2 phi=0 asym=0.9",
    ]),
    preset!("fig-two-e", "two mode, theta = -pi/4 and optimal angle with power asymmetry 0.9", [
        "command" => "toy", "variant" => "two", "beta" => "1",
        "series" => "r=2 theta=-pi/4; r=2 theta=-pi/4 asym=0.9; r=2 theta=opt; r=2 theta=opt asym=0.9",
    ]),
    preset!("fig-broadband", "fixed power set at 1e6, phase quadrature, r = 0 and 2", [
        "command" => "strategy", "variant" => "broadband", "target_nu" => "1e6", "coupling_r" => "0",
        "grid" => "1e3:1e7:400:log", "series" => "r=0 phi=0; r=2 phi=0",
        "mass" => CAVITY[0].1, "omega_m" => CAVITY[1].1, "kappa" => CAVITY[2].1, "gamma" => CAVITY[3].1,
    ]),
    preset!("fig-narrowband", "per-frequency optimal power and angle, r = 0 and 2", [
        "command" => "strategy", "variant" => "narrowband", "coupling_r" => "0",
        "grid" => "1:1e7:400:log", "series" => "r=0 phi=0; r=2 phi=0",
        "mass" => CAVITY[0].1, "omega_m" => CAVITY[1].1, "kappa" => CAVITY[2].1, "gamma" => CAVITY[3].1,
    ]),
    preset!("fig-angles", "optimal angles at G = 1e21 over frequency, and over power at 1e4", [
        "command" => "strategy", "variant" => "angles", "coupling" => "1e21", "angle_nu" => "1e4",
        "grid" => "1e3:1e7:400:log", "power_grid" => "1e-4:1e10:400:log",
        "mass" => CAVITY[0].1, "omega_m" => CAVITY[1].1, "kappa" => CAVITY[2].1, "gamma" => CAVITY[3].1,
    ]),
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::RunConfig;

    #[test]
    fn every_preset_parses() {
        for p in PRESETS {
            let mut cfg = RunConfig::default();
            for (k, v) in p.settings {
                cfg.set(k, v).unwrap_or_else(|e| panic!("{}: {e}", p.name));
            }
            assert!(cfg.command.is_some());
        }
        assert!(find("fig-broadband").is_some());
        assert!(find("fig-9").is_none());
    }
}
