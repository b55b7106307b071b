//! Flat `key = value` scenario files.
//!
//! ```text
//! # Werner atoms in Glauber-Lachs fields with Ising coupling
//! preset = fig16
//! lambda = 0.6
//! sweep = jz
//! sweep_values = 0.2, 0.4
//! cutoff = 18
//! ```
//!
//! A `preset` supplies every field; other keys override it. Without a preset
//! the base is Bell(pi/4) atoms, SCS(0.5, 0) fields, the bare model, the
//! default grid and cutoff 16. Switching a component's kind (`atom`, `field`,
//! `model`) requires that kind's parameters unless they are swept.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use super::{preset, Scenario, Sweep, SweepParam, DEFAULT_CUTOFF};
use crate::error::{Error, Result};
use crate::evolve::TimeGrid;
use crate::hamiltonian::{ModelParams, Variant};
use crate::states::{AtomSpec, FieldSpec};

const KEYS: [&str; 21] = [
    "preset", "name", "atom", "theta", "lambda", "field", "nbar_c", "nbar_s", "nbar_th", "model",
    "g", "jz", "delta", "k", "omega", "t_max", "points", "cutoff", "sweep", "sweep_values",
    "sweep_range",
];

/// Command-line overrides applied after a preset or config file.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ConfigOverrides {
    pub cutoff: Option<usize>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
}

impl ConfigOverrides {
    pub fn apply(&self, s: &mut Scenario) -> Result<()> {
        if let Some(n) = self.cutoff {
            s.cutoff = n;
        }
        if self.t_max.is_some() || self.points.is_some() {
            s.grid = TimeGrid::new(
                self.t_max.unwrap_or(s.grid.t_max()),
                self.points.unwrap_or(s.grid.points()),
            )?;
        }
        s.validate()
    }
}

fn default_base() -> Scenario {
    Scenario {
        name: "custom".into(),
        atom: AtomSpec::Bell { theta: FRAC_PI_4 },
        field_a: FieldSpec::scs(0.5, 0.0),
        field_b: FieldSpec::scs(0.5, 0.0),
        model: ModelParams::bare(),
        grid: TimeGrid::default(),
        cutoff: DEFAULT_CUTOFF,
        sweep: None,
    }
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {line_no}: expected `key = value`")))?;
            let (k, v) = (k.trim().to_ascii_lowercase(), v.trim().to_string());
            if !KEYS.contains(&k.as_str()) {
                return Err(Error::Config(format!("line {line_no}: unknown key '{k}'")));
            }
            if v.is_empty() {
                return Err(Error::Config(format!("line {line_no}: key '{k}' has no value")));
            }
            if let Some((first, _)) = map.insert(k.clone(), (line_no, v)) {
                return Err(Error::Config(format!(
                    "line {line_no}: key '{k}' already set on line {first}"
                )));
            }
        }
        Ok(Self { map })
    }

    fn text(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|(_, v)| v.as_str())
    }

    fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    fn number(&self, key: &str) -> Result<Option<f64>> {
        self.map
            .get(key)
            .map(|(line, v)| parse_f64(v).map_err(|e| Error::Config(format!("line {line}: {key}: {e}"))))
            .transpose()
    }

    fn count(&self, key: &str) -> Result<Option<usize>> {
        self.map
            .get(key)
            .map(|(line, v)| {
                v.parse::<usize>()
                    .map_err(|_| Error::Config(format!("line {line}: {key}: expected a non-negative integer, got '{v}'")))
            })
            .transpose()
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.map
            .get(key)
            .map(|(line, v)| {
                v.split(',')
                    .map(|x| parse_f64(x.trim()).map_err(|e| Error::Config(format!("line {line}: {key}: {e}"))))
                    .collect()
            })
            .transpose()
    }

    fn reject(&self, key: &str, context: &str) -> Result<()> {
        match self.map.get(key) {
            Some((line, _)) => Err(Error::Config(format!("line {line}: key '{key}' does not apply to {context}"))),
            None => Ok(()),
        }
    }
}

fn parse_f64(v: &str) -> std::result::Result<f64, String> {
    v.parse::<f64>().map_err(|_| format!("expected a number, got '{v}'"))
}

fn resolve_sweep(e: &Entries, base: Option<Sweep>) -> Result<Option<Sweep>> {
    let values = match (e.list("sweep_values")?, e.list("sweep_range")?) {
        (Some(_), Some(_)) => {
            return Err(Error::Config("set only one of sweep_values and sweep_range".into()))
        }
        (Some(v), None) => Some(Values::List(v)),
        (None, Some(r)) => Some(Values::Range(r)),
        (None, None) => None,
    };
    let param = match e.text("sweep") {
        Some("none") => {
            if values.is_some() {
                return Err(Error::Config("sweep = none takes no sweep values".into()));
            }
            return Ok(None);
        }
        Some(name) => name.parse::<SweepParam>()?,
        None => match (&base, &values) {
            (Some(b), _) => b.param,
            (None, Some(_)) => return Err(Error::Config("sweep values given without a sweep parameter".into())),
            (None, None) => return Ok(None),
        },
    };
    match values {
        Some(Values::List(v)) => Ok(Some(Sweep::new(param, v))),
        Some(Values::Range(r)) => {
            let [start, stop, count] = r[..] else {
                return Err(Error::Config("sweep_range expects `start, stop, count`".into()));
            };
            if count < 1.0 || count.fract() != 0.0 {
                return Err(Error::Config(format!("sweep_range count must be a positive integer, got {count}")));
            }
            Ok(Some(Sweep::linspace(param, start, stop, count as usize)))
        }
        None => match base {
            Some(b) if b.param == param => Ok(Some(b)),
            _ => Err(Error::Config(format!("sweep over {param} needs sweep_values or sweep_range"))),
        },
    }
}

enum Values {
    List(Vec<f64>),
    Range(Vec<f64>),
}

/// Parse a config document into a validated scenario.
pub fn parse_config(text: &str) -> Result<Scenario> {
    let e = Entries::parse(text)?;
    let mut s = match e.text("preset") {
        Some(id) => preset(id)?,
        None => default_base(),
    };
    if let Some(name) = e.text("name") {
        s.name = name.to_string();
    }
    s.sweep = resolve_sweep(&e, s.sweep.take())?;
    let swept = s.sweep.as_ref().map(|sw| (sw.param, sw.values[0]));

    // Value for `key`: explicit, else inherited, else the first sweep value.
    let pick = |key: &str, param: SweepParam, inherited: Option<f64>, kind: &str| -> Result<f64> {
        if let Some(v) = e.number(key)? {
            return Ok(v);
        }
        if let Some(v) = inherited {
            return Ok(v);
        }
        match swept {
            Some((p, v)) if p == param => Ok(v),
            _ => Err(Error::Config(format!("{kind} requires '{key}'"))),
        }
    };

    let atom_kind = e.text("atom").unwrap_or(match s.atom {
        AtomSpec::Bell { .. } => "bell",
        AtomSpec::Werner { .. } => "werner",
    });
    s.atom = match atom_kind {
        "bell" => {
            e.reject("lambda", "atom = bell")?;
            let inherited = match s.atom {
                AtomSpec::Bell { theta } => Some(theta),
                _ => None,
            };
            AtomSpec::Bell { theta: pick("theta", SweepParam::Theta, inherited, "atom = bell")? }
        }
        "werner" => {
            e.reject("theta", "atom = werner")?;
            let inherited = match s.atom {
                AtomSpec::Werner { lambda } => Some(lambda),
                _ => None,
            };
            AtomSpec::Werner { lambda: pick("lambda", SweepParam::Lambda, inherited, "atom = werner")? }
        }
        other => return Err(Error::Config(format!("unknown atom kind '{other}' (expected bell or werner)"))),
    };

    let field_kind = e.text("field").unwrap_or(match s.field_a {
        FieldSpec::SqueezedCoherent { .. } => "scs",
        FieldSpec::GlauberLachs { .. } => "gl",
    });
    let nbar_c = pick("nbar_c", SweepParam::NbarC, Some(s.field_a.nbar_c()), "field")?;
    let field = match field_kind {
        "scs" => {
            e.reject("nbar_th", "field = scs")?;
            let inherited = match s.field_a {
                FieldSpec::SqueezedCoherent { nbar_s, .. } => Some(nbar_s),
                _ => None,
            };
            FieldSpec::scs(nbar_c, pick("nbar_s", SweepParam::NbarS, inherited, "field = scs")?)
        }
        "gl" => {
            e.reject("nbar_s", "field = gl")?;
            let inherited = match s.field_a {
                FieldSpec::GlauberLachs { nbar_th, .. } => Some(nbar_th),
                _ => None,
            };
            FieldSpec::gl(nbar_c, pick("nbar_th", SweepParam::NbarTh, inherited, "field = gl")?)
        }
        other => return Err(Error::Config(format!("unknown field kind '{other}' (expected scs or gl)"))),
    };
    s.field_a = field;
    s.field_b = field;

    let model_kind = e.text("model").unwrap_or(s.model.variant.name());
    let old = s.model.variant;
    let g = e.number("g")?.unwrap_or(s.model.g);
    let not_for = |keys: &[&str], ctx: &str| keys.iter().try_for_each(|k| e.reject(k, ctx));
    let variant = match model_kind {
        "bare" => {
            not_for(&["jz", "delta", "k", "omega"], "model = bare")?;
            Variant::Bare
        }
        "ising" => {
            not_for(&["delta", "k", "omega"], "model = ising")?;
            let inherited = match old {
                Variant::Ising { jz } => Some(jz),
                _ => None,
            };
            Variant::Ising { jz: pick("jz", SweepParam::Jz, inherited, "model = ising")? }
        }
        "detuned" => {
            not_for(&["jz", "k", "omega"], "model = detuned")?;
            let inherited = match old {
                Variant::Detuned { delta } => Some(delta),
                _ => None,
            };
            Variant::Detuned { delta: pick("delta", SweepParam::Delta, inherited, "model = detuned")? }
        }
        "kerr" => {
            not_for(&["jz", "delta"], "model = kerr")?;
            let (k_old, omega_old) = match old {
                Variant::Kerr { k, omega } => (Some(k), omega),
                _ => (None, 1.0),
            };
            Variant::Kerr {
                k: pick("k", SweepParam::K, k_old, "model = kerr")?,
                omega: e.number("omega")?.unwrap_or(omega_old),
            }
        }
        other => {
            return Err(Error::Config(format!(
                "unknown model '{other}' (expected bare, ising, detuned or kerr)"
            )))
        }
    };
    s.model = ModelParams { g, variant };

    if e.has("t_max") || e.has("points") {
        s.grid = TimeGrid::new(
            e.number("t_max")?.unwrap_or(s.grid.t_max()),
            e.count("points")?.unwrap_or(s.grid.points()),
        )?;
    }
    if let Some(n) = e.count("cutoff")? {
        s.cutoff = n;
    }
    s.validate()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_alone_equals_preset() {
        for id in ["fig1", "fig13", "fig17", "fig25"] {
            assert_eq!(parse_config(&format!("preset = {id}\n")).unwrap(), preset(id).unwrap());
        }
    }

    #[test]
    fn empty_is_default() {
        assert_eq!(parse_config("# nothing\n\n").unwrap(), default_base());
    }

    #[test]
    fn overrides_apply() {
        let s = parse_config(
            "preset = fig16\nlambda = 0.6 # mixing\nsweep = jz\nsweep_values = 0.2, 0.4\ncutoff = 18\npoints = 11\n",
        )
        .unwrap();
        assert_eq!(s.name, "fig16");
        assert_eq!(s.atom, AtomSpec::Werner { lambda: 0.6 });
        assert_eq!(s.sweep, Some(Sweep::new(SweepParam::Jz, vec![0.2, 0.4])));
        assert_eq!(s.cutoff, 18);
        assert_eq!(s.grid, TimeGrid::new(25.0, 11).unwrap());
    }

    #[test]
    fn switching_kind_needs_parameters() {
        assert!(parse_config("atom = werner\n").unwrap_err().is_config());
        assert_eq!(
            parse_config("atom = werner\nlambda = 0.3\n").unwrap().atom,
            AtomSpec::Werner { lambda: 0.3 }
        );
        assert!(matches!(parse_config("model = ising\n"), Err(Error::Config(_))));
        let s = parse_config("model = ising\nsweep = jz\nsweep_range = 0, 1, 5\n").unwrap();
        assert_eq!(s.model.variant, Variant::Ising { jz: 0.0 });
        assert_eq!(s.sweep.unwrap().values, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let s = parse_config("field = gl\nnbar_th = 0.2\nmodel = kerr\nk = 0.5\n").unwrap();
        assert_eq!(s.field_b, FieldSpec::gl(0.5, 0.2));
        assert_eq!(s.model.variant, Variant::Kerr { k: 0.5, omega: 1.0 });
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "cutoff 12\n",
            "colour = red\n",
            "cutoff = 12\ncutoff = 14\n",
            "cutoff = twelve\n",
            "theta = 0.1\natom = werner\nlambda = 0.5\n",
            "sweep_values = 0.1\n",
            "sweep = jz\nsweep_values = 0.1\n",
            "sweep = nbar_s\n",
            "sweep = nbar_s\nsweep_values = 0.1\nsweep_range = 0, 1, 3\n",
            "preset = fig99\n",
            "model = quantum\n",
            "g = 0\n",
            "points = 1\n",
            "nbar_c = -1\n",
            "cutoff =\n",
        ] {
            let err = parse_config(bad).unwrap_err();
            assert!(err.is_config(), "{bad:?} gave {err}");
        }
    }

    #[test]
    fn sweep_none_clears() {
        let s = parse_config("preset = fig1\nsweep = none\n").unwrap();
        assert!(s.sweep.is_none());
    }

    #[test]
    fn cli_overrides() {
        let mut s = preset("fig1").unwrap();
        ConfigOverrides {
            cutoff: Some(30),
            t_max: Some(10.0),
            points: None,
        }
        .apply(&mut s)
        .unwrap();
        assert_eq!((s.cutoff, s.grid.t_max(), s.grid.points()), (30, 10.0, 1001));
        let bad = ConfigOverrides {
            points: Some(0),
            ..Default::default()
        };
        assert!(bad.apply(&mut s).unwrap_err().is_config());
    }
}
