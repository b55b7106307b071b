//! One preset per figure id.

use std::f64::consts::FRAC_PI_4;

use super::{Scenario, Sweep, SweepParam, DEFAULT_CUTOFF};
use crate::error::{Error, Result};
use crate::evolve::TimeGrid;
use crate::hamiltonian::ModelParams;
use crate::states::{AtomSpec, FieldSpec};

pub const PRESET_IDS: [&str; 25] = [
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11",
    "fig12", "fig13", "fig14", "fig15", "fig16", "fig17", "fig18", "fig19", "fig20", "fig21",
    "fig22", "fig23", "fig24", "fig25",
];

const NBAR_C: f64 = 0.5;
const PHOTON_SWEEP: [f64; 4] = [0.0, 0.1, 0.3, 0.5];
const JZ_SWEEP: [f64; 4] = [0.1, 0.3, 0.7, 1.0];
const DELTA_SWEEP: [f64; 3] = [2.0, 5.0, 10.0];
const KERR_SWEEP: [f64; 4] = [0.0, 0.2, 0.5, 1.0];
const CONTOUR_POINTS: usize = 21;

/// Cutoff for squeezed-coherent fields with up to half a squeezed photon.
const SCS_SWEEP_CUTOFF: usize = 40;
/// Cutoff for Glauber-Lachs fields with up to half a thermal photon.
const GL_SWEEP_CUTOFF: usize = 20;

#[derive(Clone, Copy)]
enum Atoms {
    Bell,
    Werner(f64),
}

#[derive(Clone, Copy)]
enum Field {
    Scs,
    Gl,
}

impl Atoms {
    fn spec(self) -> AtomSpec {
        match self {
            Atoms::Bell => AtomSpec::Bell { theta: FRAC_PI_4 },
            Atoms::Werner(lambda) => AtomSpec::Werner { lambda },
        }
    }
}

impl Field {
    fn spec(self, second: f64) -> FieldSpec {
        match self {
            Field::Scs => FieldSpec::scs(NBAR_C, second),
            Field::Gl => FieldSpec::gl(NBAR_C, second),
        }
    }

    fn param(self) -> SweepParam {
        match self {
            Field::Scs => SweepParam::NbarS,
            Field::Gl => SweepParam::NbarTh,
        }
    }

    fn sweep_cutoff(self) -> usize {
        match self {
            Field::Scs => SCS_SWEEP_CUTOFF,
            Field::Gl => GL_SWEEP_CUTOFF,
        }
    }
}

fn scenario(
    id: &str,
    atoms: Atoms,
    field: Field,
    second: f64,
    model: ModelParams,
    sweep: Option<Sweep>,
    cutoff: usize,
) -> Scenario {
    let f = field.spec(second);
    Scenario {
        name: id.to_string(),
        atom: atoms.spec(),
        field_a: f,
        field_b: f,
        model,
        grid: TimeGrid::default(),
        cutoff,
        sweep,
    }
}

fn photon_sweep(id: &str, atoms: Atoms, field: Field) -> Scenario {
    let sweep = Sweep::new(field.param(), PHOTON_SWEEP.to_vec());
    scenario(id, atoms, field, 0.0, ModelParams::bare(), Some(sweep), field.sweep_cutoff())
}

fn fixed_field(id: &str, atoms: Atoms, field: Field, model: ModelParams, sweep: Option<Sweep>) -> Scenario {
    scenario(id, atoms, field, 0.1, model, sweep, DEFAULT_CUTOFF)
}

fn list(p: SweepParam, v: &[f64]) -> Option<Sweep> {
    Some(Sweep::new(p, v.to_vec()))
}

/// The scenario behind a figure id (`fig1` to `fig25`).
pub fn preset(id: &str) -> Result<Scenario> {
    use Atoms::*;
    use Field::*;
    let werner = Werner(0.75);
    let contour = Some(Sweep::linspace(SweepParam::Lambda, 0.0, 1.0, CONTOUR_POINTS));
    let jz_contour = Some(Sweep::linspace(SweepParam::Jz, 0.0, 1.0, CONTOUR_POINTS));
    let ising = ModelParams::ising(0.0);
    let detuned = ModelParams::detuned(0.0);
    let kerr = ModelParams::kerr(0.0);
    let s = match id {
        "fig1" | "fig2" => photon_sweep(id, Bell, Scs),
        "fig3" | "fig4" => photon_sweep(id, werner, Scs),
        "fig5" => fixed_field(id, werner, Scs, ModelParams::bare(), contour),
        "fig6" | "fig7" => photon_sweep(id, Bell, Gl),
        "fig8" | "fig9" => photon_sweep(id, werner, Gl),
        "fig10" => fixed_field(id, werner, Gl, ModelParams::bare(), contour),
        "fig11" => fixed_field(id, Bell, Scs, ising, list(SweepParam::Jz, &JZ_SWEEP)),
        "fig12" => fixed_field(id, werner, Scs, ising, list(SweepParam::Jz, &JZ_SWEEP)),
        "fig13" => fixed_field(id, Werner(0.25), Scs, ModelParams::bare(), None),
        "fig14" => fixed_field(id, Werner(0.25), Scs, ising, jz_contour),
        "fig15" => fixed_field(id, Bell, Gl, ising, list(SweepParam::Jz, &JZ_SWEEP)),
        "fig16" => fixed_field(id, werner, Gl, ising, list(SweepParam::Jz, &JZ_SWEEP)),
        "fig17" => fixed_field(id, Werner(0.25), Gl, ising, jz_contour),
        "fig18" => fixed_field(id, Bell, Scs, detuned, list(SweepParam::Delta, &DELTA_SWEEP)),
        "fig19" => fixed_field(id, werner, Scs, detuned, list(SweepParam::Delta, &DELTA_SWEEP)),
        "fig20" => fixed_field(id, Bell, Gl, detuned, list(SweepParam::Delta, &DELTA_SWEEP)),
        "fig21" => fixed_field(id, werner, Gl, detuned, list(SweepParam::Delta, &DELTA_SWEEP)),
        "fig22" => fixed_field(id, Bell, Scs, kerr, list(SweepParam::K, &KERR_SWEEP)),
        "fig23" => fixed_field(id, werner, Scs, kerr, list(SweepParam::K, &KERR_SWEEP)),
        "fig24" => fixed_field(id, Bell, Gl, kerr, list(SweepParam::K, &KERR_SWEEP)),
        "fig25" => fixed_field(id, werner, Gl, kerr, list(SweepParam::K, &KERR_SWEEP)),
        _ => return Err(Error::UnknownPreset(id.to_string())),
    };
    Ok(s)
}

fn describe(s: &Scenario) -> String {
    let atom = match s.atom {
        AtomSpec::Bell { theta } => format!("Bell(theta={theta:.4})"),
        AtomSpec::Werner { lambda } => format!("Werner(lambda={lambda})"),
    };
    let field = match s.field_a {
        FieldSpec::SqueezedCoherent { nbar_c, nbar_s } => format!("SCS(nbar_c={nbar_c}, nbar_s={nbar_s})"),
        FieldSpec::GlauberLachs { nbar_c, nbar_th } => format!("GL(nbar_c={nbar_c}, nbar_th={nbar_th})"),
    };
    let sweep = match &s.sweep {
        Some(sw) if sw.values.len() > 6 => format!(
            "{} in [{}, {}] ({} points)",
            sw.param,
            sw.values[0],
            sw.values[sw.values.len() - 1],
            sw.values.len()
        ),
        Some(sw) => {
            let v: Vec<String> = sw.values.iter().map(|x| x.to_string()).collect();
            format!("{} in {{{}}}", sw.param, v.join(", "))
        }
        None => "no sweep".to_string(),
    };
    format!("{atom}, {field}, {} model, {sweep}, N={}", s.model.variant.name(), s.cutoff)
}

/// `(id, one-line description)` for every preset.
pub fn list_presets() -> Vec<(&'static str, String)> {
    PRESET_IDS
        .iter()
        .map(|&id| (id, describe(&preset(id).expect("every listed preset resolves"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::Variant;

    #[test]
    fn all_presets_resolve_and_validate() {
        for id in PRESET_IDS {
            let s = preset(id).unwrap();
            assert_eq!(s.name, id);
            s.validate().unwrap_or_else(|e| panic!("{id}: {e}"));
        }
        assert!(matches!(preset("fig26"), Err(Error::UnknownPreset(_))));
        assert_eq!(list_presets().len(), 25);
    }

    #[test]
    fn fig1_parameters() {
        let s = preset("fig1").unwrap();
        assert_eq!(s.atom, AtomSpec::Bell { theta: FRAC_PI_4 });
        assert_eq!(s.field_a, FieldSpec::scs(0.5, 0.0));
        assert_eq!(s.model.variant, Variant::Bare);
        assert_eq!(s.sweep, Some(Sweep::new(SweepParam::NbarS, vec![0.0, 0.1, 0.3, 0.5])));
    }

    #[test]
    fn fig8_parameters() {
        let s = preset("fig8").unwrap();
        assert_eq!(s.atom, AtomSpec::Werner { lambda: 0.75 });
        assert_eq!(s.field_b, FieldSpec::gl(0.5, 0.0));
        assert_eq!(s.sweep.unwrap().param, SweepParam::NbarTh);
    }

    #[test]
    fn fig15_parameters() {
        let s = preset("fig15").unwrap();
        assert_eq!(s.atom, AtomSpec::Bell { theta: FRAC_PI_4 });
        assert_eq!(s.field_a, FieldSpec::gl(0.5, 0.1));
        assert!(matches!(s.model.variant, Variant::Ising { .. }));
        assert_eq!(s.sweep, Some(Sweep::new(SweepParam::Jz, vec![0.1, 0.3, 0.7, 1.0])));
    }

    #[test]
    fn contour_presets() {
        for id in ["fig5", "fig10"] {
            let sw = preset(id).unwrap().sweep.unwrap();
            assert_eq!((sw.param, sw.values.len()), (SweepParam::Lambda, 21));
        }
        for id in ["fig14", "fig17"] {
            let s = preset(id).unwrap();
            assert_eq!(s.atom, AtomSpec::Werner { lambda: 0.25 });
            let sw = s.sweep.unwrap();
            assert_eq!((sw.param, sw.values.len()), (SweepParam::Jz, 21));
        }
    }
}
