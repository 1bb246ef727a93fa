//! Built-in figure presets. Each preset is exactly the config file shipped
//! under `configs/`, embedded at compile time, so `--preset NAME` and
//! `--config configs/NAME.cfg` are the same run by construction.

pub const PRESET_NAMES: [&str; 4] = ["fig2", "fig3", "fig4", "fig5"];

/// Canonical config text for a preset.
pub fn preset_text(name: &str) -> Option<&'static str> {
    match name {
        "fig2" => Some(include_str!("../configs/fig2.cfg")),
        "fig3" => Some(include_str!("../configs/fig3.cfg")),
        "fig4" => Some(include_str!("../configs/fig4.cfg")),
        "fig5" => Some(include_str!("../configs/fig5.cfg")),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn all_presets_parse() {
        for name in PRESET_NAMES {
            let spec = parse_config(preset_text(name).unwrap())
                .unwrap_or_else(|e| panic!("preset {name}: {e}"));
            assert_eq!(spec.prefix, name);
        }
    }

    #[test]
    fn fig5_has_58_rows_and_pinned_columns() {
        let spec = parse_config(preset_text("fig5").unwrap()).unwrap();
        let sweep = &spec.sweeps[0];
        let (axes, observables) = spec.lower_sweep(sweep).unwrap();
        let rows: usize = axes.iter().map(|a| a.values.len()).product();
        assert_eq!(rows, 58);
        assert_eq!(axes[0].label, "V");
        assert_eq!(axes[1].label, "N");
        assert_eq!(observables[0].label, "tau_s");
    }

    #[test]
    fn fig4_main_columns() {
        let spec = parse_config(preset_text("fig4").unwrap()).unwrap();
        let (axes, observables) = spec.lower_sweep(&spec.sweeps[0]).unwrap();
        assert_eq!(axes[0].label, "w1");
        assert_eq!(observables[0].label, "tau1");
        assert_eq!(observables[1].label, "T1");
    }

    #[test]
    fn fig2_has_five_curve_groups() {
        let spec = parse_config(preset_text("fig2").unwrap()).unwrap();
        let (axes, _) = spec.lower_sweep(&spec.sweeps[0]).unwrap();
        assert_eq!(axes[0].values.len(), 5);
        assert_eq!(axes[1].values.len(), 201);
    }
}
