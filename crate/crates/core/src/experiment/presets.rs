//! Named parameter sets.

use super::config::{ExperimentConfig, Kind, Params};
use crate::decoherence::PERIOD_CONSTANT;
use crate::state::Basis;

/// Preset names with a one-line description.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig1a", "Γ(t) for ω0 = 0.06285, 0.1258, 0.2514"),
    ("fig1b", "Γ(t) against the fitted quadratic, ω0 = 0.01 to 0.0629"),
    ("fig2a", "BLP measure against ω0 on [0, 50] ms"),
    ("fig2b", "BLP measure against ω0 on [0, 100] ms"),
    ("fig2c", "BLP measure against ω0 on [0, 200] ms"),
    ("fig3a", "σz-basis state and coherence, ω0 = 0.03 (Markovian)"),
    ("fig3b", "σz-basis state and coherence, ω0 = 0.0314, α = 0.5 and 1.0"),
    ("fig3c", "σz-basis state and coherence, ω0 = 0.2514 (four revivals)"),
    ("fig4a", "σx-basis coherence, ω0 = 0.03, ωk = 0.005"),
    ("fig4b", "σx-basis coherence, ω0 = 0.03, ωk = 0.0157"),
    ("fig4c", "σx-basis coherence, ω0 = 0.03, ωk = 0.05"),
    ("fig4d", "σx-basis coherence, ω0 = 0.03, ωk = 0.3"),
    ("fig5a", "σx-basis coherence, ω0 = 0.2514, ωk = 0.0157"),
    ("fig5b", "σx-basis coherence, ω0 = 0.2514, resonant ωk = 0.1257"),
    ("fig5c", "σx-basis coherence, ω0 = 0.2514, mismatched ωk = 0.3"),
    ("fig6a", "long-time ⟨C⟩ against α for several ωk at ω0 = 0.03"),
    ("fig6b", "long-time ⟨C⟩ against α for several ω0 at ωk = 0.1258"),
    ("figA1a", "Γ(t) on [0, 50] ms for ω0 = n·6.285/50, n = 1, 2, 3"),
    ("figA1b", "Γ(t) on [0, 200] ms for ω0 = n·6.285/200, n = 1, 2, 3"),
    ("figA2", "Γ(t) against the fitted quadratic for ωJ = 100 to 4000"),
    ("figA3a", "σz-basis revivals on [0, 50] ms, ω0 = 0.3771"),
    ("figA3b", "σz-basis revivals on [0, 200] ms, ω0 = 0.0943"),
    ("figA4a", "σx-basis full revivals on [0, 50] ms, ω0 = 0.3771, ωk = 0.1885"),
    ("figA4b", "σx-basis full revivals on [0, 200] ms, ω0 = 0.0943, ωk = 0.0471"),
    ("grape", "GRAPE synthesis of a Haar-random one-qubit gate, 50 segments"),
];

/// Ensemble seed shared by the presets.
const SEED: u64 = 20240601;
const MEMBERS: usize = 500;

fn base(alpha: f64, omega0: f64, t_max: f64) -> Params {
    Params {
        alpha: Some(alpha.into()),
        omega0: Some(omega0.into()),
        omega_j: Some(50.0.into()),
        t_max: Some(t_max),
        ..Params::default()
    }
}

fn ensemble(mut p: Params, basis: Basis, omega_k: f64) -> Params {
    p.basis = Some(basis);
    p.omega_k = Some(omega_k.into());
    p.members = Some(MEMBERS);
    p.seed = Some(SEED);
    p
}

fn multiples(t_max: f64) -> Vec<f64> {
    (1..=3).map(|n| n as f64 * PERIOD_CONSTANT / t_max).collect()
}

fn scan(t_max: f64) -> Params {
    let mut p = base(0.5, 0.0, t_max);
    p.omega0 = None;
    p
}

fn longterm(omega0: Vec<f64>, omega_k: Vec<f64>) -> Params {
    Params {
        omega0: Some(omega0.into()),
        omega_k: Some(omega_k.into()),
        omega_j: Some(50.0.into()),
        alpha_min: Some(0.0),
        alpha_max: Some(4.0),
        alpha_step: Some(0.05),
        ..Params::default()
    }
}

/// The configuration of a named preset, or `None` for an unknown name.
pub fn preset(name: &str) -> Option<ExperimentConfig> {
    use Kind::*;
    let (kind, params) = match name {
        "fig1a" => {
            let mut p = base(0.5, 0.0, 100.0);
            p.omega0 = Some(vec![0.06285, 0.1258, 0.2514].into());
            (Gamma, p)
        }
        "fig1b" => {
            let mut p = base(0.5, 0.0, 100.0);
            p.omega0 = Some(vec![0.01, 0.03, 0.05, 0.0629].into());
            p.fitted = Some(true);
            (Gamma, p)
        }
        "fig2a" => (NonmarkovScan, scan(50.0)),
        "fig2b" => (NonmarkovScan, scan(100.0)),
        "fig2c" => (NonmarkovScan, scan(200.0)),
        "fig3a" => (Coherence, ensemble(base(0.5, 0.03, 100.0), Basis::Z, 1.0)),
        "fig3b" => {
            let mut p = ensemble(base(0.5, 0.0314, 100.0), Basis::Z, 1.0);
            p.alpha = Some(vec![0.5, 1.0].into());
            (Coherence, p)
        }
        "fig3c" => (Coherence, ensemble(base(0.5, 0.2514, 100.0), Basis::Z, 1.0)),
        "fig4a" => (Coherence, ensemble(base(0.5, 0.03, 100.0), Basis::X, 0.005)),
        "fig4b" => (Coherence, ensemble(base(0.5, 0.03, 100.0), Basis::X, 0.0157)),
        "fig4c" => (Coherence, ensemble(base(0.5, 0.03, 100.0), Basis::X, 0.05)),
        "fig4d" => (Coherence, ensemble(base(0.5, 0.03, 100.0), Basis::X, 0.3)),
        "fig5a" => (Coherence, ensemble(base(0.5, 0.2514, 100.0), Basis::X, 0.0157)),
        "fig5b" => (Coherence, ensemble(base(0.5, 0.2514, 100.0), Basis::X, 0.1257)),
        "fig5c" => (Coherence, ensemble(base(0.5, 0.2514, 100.0), Basis::X, 0.3)),
        "fig6a" => (Longterm, longterm(vec![0.03], vec![0.05, 0.13, 0.5, 1.0])),
        "fig6b" => (Longterm, longterm(vec![0.03, 0.07, 0.1, 0.5], vec![0.1258])),
        "figA1a" | "figA1b" => {
            let t_max = if name == "figA1a" { 50.0 } else { 200.0 };
            let mut p = base(0.5, 0.0, t_max);
            p.omega0 = Some(multiples(t_max).into());
            (Gamma, p)
        }
        "figA2" => {
            let mut p = base(0.5, 0.0, 100.0);
            p.omega0 = Some(vec![0.01, 0.03, 0.05, 0.0629].into());
            p.omega_j = Some(vec![100.0, 200.0, 500.0, 1000.0, 2000.0, 4000.0].into());
            p.fitted = Some(true);
            (Gamma, p)
        }
        "figA3a" => (Coherence, ensemble(base(0.5, 0.3771, 50.0), Basis::Z, 1.0)),
        "figA3b" => (Coherence, ensemble(base(0.5, 0.0943, 200.0), Basis::Z, 1.0)),
        "figA4a" => (Coherence, ensemble(base(0.5, 0.3771, 50.0), Basis::X, 0.1885)),
        "figA4b" => (Coherence, ensemble(base(0.5, 0.0943, 200.0), Basis::X, 0.0471)),
        "grape" => (
            Grape,
            Params {
                target: Some("haar".into()),
                seed: Some(SEED),
                segments: Some(50),
                dt: Some(0.1),
                bound: Some(5.0),
                target_fidelity: Some(0.999),
                ..Params::default()
            },
        ),
        _ => return None,
    };
    Some(ExperimentConfig::new(kind, name, params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::Values;

    #[test]
    fn every_listed_preset_resolves() {
        for (name, _) in PRESETS {
            let cfg = preset(name).unwrap_or_else(|| panic!("{name}"));
            assert_eq!(cfg.label(), *name);
            assert_eq!(ExperimentConfig::parse(&cfg.to_toml()).unwrap(), cfg);
        }
        assert!(preset("fig7").is_none());
    }

    #[test]
    fn caption_values() {
        let p = preset("fig5b").unwrap().params;
        assert_eq!(p.omega0, Some(Values::One(0.2514)));
        assert_eq!(p.omega_k, Some(Values::One(0.1257)));
        assert_eq!(p.alpha, Some(Values::One(0.5)));
        assert_eq!(p.members, Some(500));
        assert_eq!(p.t_max, Some(100.0));
        let p = preset("fig4d").unwrap().params;
        assert_eq!((p.omega0, p.omega_k), (Some(Values::One(0.03)), Some(Values::One(0.3))));
        let p = preset("figA4a").unwrap().params;
        assert_eq!((p.omega0, p.omega_k, p.t_max), (Some(Values::One(0.3771)), Some(Values::One(0.1885)), Some(50.0)));
    }
}
