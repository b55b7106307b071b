//! Runnable scenarios: a model, initial state, grid and cutoff, optionally
//! swept over one parameter, producing a long-format result table.

mod config;
mod csv;
mod presets;

pub use config::{parse_config, ConfigOverrides};
pub use csv::{emit_csv, format_sig, write_csv, CSV_HEADER};
pub use presets::{list_presets, preset, PRESET_IDS};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::entangle::{measure_trajectory, EntanglementSeries};
use crate::error::{Error, Result};
use crate::evolve::{trajectory, TimeGrid, Trajectory};
use crate::hamiltonian::{build_sparse, ModelParams, Variant};
use crate::qops::CompositeSpace;
use crate::states::{assemble_initial, AtomSpec, FieldSpec, PreparedState};

/// Default Fock cutoff per cavity.
pub const DEFAULT_CUTOFF: usize = 16;

/// Parameters a sweep can vary. Field parameters apply to both cavities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepParam {
    NbarC,
    NbarS,
    NbarTh,
    Theta,
    Lambda,
    Jz,
    Delta,
    K,
}

impl SweepParam {
    pub const ALL: [SweepParam; 8] = [
        SweepParam::NbarC,
        SweepParam::NbarS,
        SweepParam::NbarTh,
        SweepParam::Theta,
        SweepParam::Lambda,
        SweepParam::Jz,
        SweepParam::Delta,
        SweepParam::K,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::NbarC => "nbar_c",
            SweepParam::NbarS => "nbar_s",
            SweepParam::NbarTh => "nbar_th",
            SweepParam::Theta => "theta",
            SweepParam::Lambda => "lambda",
            SweepParam::Jz => "jz",
            SweepParam::Delta => "delta",
            SweepParam::K => "k",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown sweep parameter '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl Sweep {
    pub fn new(param: SweepParam, values: Vec<f64>) -> Self {
        Self { param, values }
    }

    /// `count` evenly spaced values from `start` to `stop` inclusive.
    pub fn linspace(param: SweepParam, start: f64, stop: f64, count: usize) -> Self {
        let values = match count {
            0 => Vec::new(),
            1 => vec![start],
            _ => (0..count)
                .map(|i| {
                    if i + 1 == count {
                        stop
                    } else {
                        start + (stop - start) * i as f64 / (count - 1) as f64
                    }
                })
                .collect(),
        };
        Self { param, values }
    }
}

/// One runnable configuration. With a sweep, the swept parameter's value in
/// the component specs is replaced by each sweep value in turn.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub atom: AtomSpec,
    pub field_a: FieldSpec,
    pub field_b: FieldSpec,
    pub model: ModelParams,
    pub grid: TimeGrid,
    pub cutoff: usize,
    pub sweep: Option<Sweep>,
}

/// Fully resolved inputs for one sweep value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Instance {
    pub atom: AtomSpec,
    pub field_a: FieldSpec,
    pub field_b: FieldSpec,
    pub model: ModelParams,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        CompositeSpace::new(self.cutoff).map_err(|e| Error::Config(e.to_string()))?;
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(Error::Config(format!("sweep over {} has no values", sweep.param)));
            }
            if let Some(v) = sweep.values.iter().find(|v| !v.is_finite()) {
                return Err(Error::Config(format!("sweep over {} has non-finite value {v}", sweep.param)));
            }
            if !self.sweep_applies(sweep.param) {
                return Err(Error::Config(format!(
                    "sweep parameter {} does not exist in this scenario",
                    sweep.param
                )));
            }
        }
        for inst in self.sweep_values().into_iter().map(|v| self.instance(v)) {
            let inst = inst?;
            inst.atom.validate()?;
            inst.field_a.validate()?;
            inst.field_b.validate()?;
            inst.model.validate()?;
        }
        Ok(())
    }

    fn sweep_applies(&self, p: SweepParam) -> bool {
        let both = |f: fn(&FieldSpec) -> bool| f(&self.field_a) && f(&self.field_b);
        match p {
            SweepParam::NbarC => true,
            SweepParam::NbarS => both(|f| matches!(f, FieldSpec::SqueezedCoherent { .. })),
            SweepParam::NbarTh => both(|f| matches!(f, FieldSpec::GlauberLachs { .. })),
            SweepParam::Theta => matches!(self.atom, AtomSpec::Bell { .. }),
            SweepParam::Lambda => matches!(self.atom, AtomSpec::Werner { .. }),
            SweepParam::Jz => matches!(self.model.variant, Variant::Ising { .. }),
            SweepParam::Delta => matches!(self.model.variant, Variant::Detuned { .. }),
            SweepParam::K => matches!(self.model.variant, Variant::Kerr { .. }),
        }
    }

    /// Sweep values, or a single `None` without a sweep.
    pub fn sweep_values(&self) -> Vec<Option<f64>> {
        match &self.sweep {
            Some(s) => s.values.iter().copied().map(Some).collect(),
            None => vec![None],
        }
    }

    pub fn sweep_name(&self) -> &'static str {
        self.sweep.as_ref().map_or("none", |s| s.param.name())
    }

    /// Component specs with the swept parameter set to `value`.
    pub fn instance(&self, value: Option<f64>) -> Result<Instance> {
        let mut inst = Instance {
            atom: self.atom,
            field_a: self.field_a,
            field_b: self.field_b,
            model: self.model,
        };
        let (Some(sweep), Some(v)) = (&self.sweep, value) else {
            return Ok(inst);
        };
        let missing = || Error::Config(format!("sweep parameter {} does not exist in this scenario", sweep.param));
        let set_field = |f: &mut FieldSpec| -> Result<()> {
            match (sweep.param, f) {
                (SweepParam::NbarC, FieldSpec::SqueezedCoherent { nbar_c, .. })
                | (SweepParam::NbarC, FieldSpec::GlauberLachs { nbar_c, .. }) => *nbar_c = v,
                (SweepParam::NbarS, FieldSpec::SqueezedCoherent { nbar_s, .. }) => *nbar_s = v,
                (SweepParam::NbarTh, FieldSpec::GlauberLachs { nbar_th, .. }) => *nbar_th = v,
                _ => return Err(missing()),
            }
            Ok(())
        };
        match (sweep.param, &mut inst.atom, &mut inst.model.variant) {
            (SweepParam::NbarC | SweepParam::NbarS | SweepParam::NbarTh, _, _) => {
                set_field(&mut inst.field_a)?;
                set_field(&mut inst.field_b)?;
            }
            (SweepParam::Theta, AtomSpec::Bell { theta }, _) => *theta = v,
            (SweepParam::Lambda, AtomSpec::Werner { lambda }, _) => *lambda = v,
            (SweepParam::Jz, _, Variant::Ising { jz }) => *jz = v,
            (SweepParam::Delta, _, Variant::Detuned { delta }) => *delta = v,
            (SweepParam::K, _, Variant::Kerr { k, .. }) => *k = v,
            _ => return Err(missing()),
        }
        Ok(inst)
    }

    pub fn space(&self) -> Result<CompositeSpace> {
        CompositeSpace::new(self.cutoff)
    }

    /// Prepared initial state for one sweep value.
    pub fn prepare(&self, value: Option<f64>) -> Result<PreparedState> {
        let inst = self.instance(value)?;
        assemble_initial(inst.atom, inst.field_a, inst.field_b, self.space()?)
    }

    /// Trajectory for one sweep value.
    pub fn trajectory(&self, value: Option<f64>) -> Result<Trajectory> {
        self.with_value(value, || {
            let inst = self.instance(value)?;
            let space = self.space()?;
            let rho0 = assemble_initial(inst.atom, inst.field_a, inst.field_b, space)?;
            let h = build_sparse(&inst.model, &space)?;
            trajectory(&rho0, &h, self.grid)
        })
    }

    fn with_value<T>(&self, value: Option<f64>, f: impl FnOnce() -> Result<T>) -> Result<T> {
        f().map_err(|e| match (&self.sweep, value) {
            (Some(s), Some(v)) => Error::Sweep {
                name: s.param.name().to_string(),
                value: v,
                source: Box::new(e),
            },
            _ => e,
        })
    }
}

/// One CSV row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Row {
    pub gt: f64,
    pub sweep_value: f64,
    pub c_ab: f64,
    pub n_aa: f64,
    pub n_ab: f64,
    pub n_fields: f64,
    pub trace_err: f64,
    pub leakage: f64,
}

/// Long-format results: one row per (sweep value, gt), sorted by sweep value
/// then time. Without a sweep the sweep name is `none` and the value 0.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultTable {
    pub scenario: String,
    pub sweep_name: String,
    pub rows: Vec<Row>,
    pub warnings: Vec<String>,
}

impl ResultTable {
    /// Rows belonging to one sweep value, in time order.
    pub fn rows_for(&self, sweep_value: f64) -> Vec<Row> {
        self.rows.iter().filter(|r| r.sweep_value == sweep_value).copied().collect()
    }
}

fn rows_from(series: &EntanglementSeries, sweep_value: f64) -> Vec<Row> {
    (0..series.len())
        .map(|k| Row {
            gt: series.gt[k],
            sweep_value,
            c_ab: series.c_atoms[k],
            n_aa: series.n_atom_field_a[k],
            n_ab: series.n_atom_field_b[k],
            n_fields: series.n_fields[k],
            trace_err: series.trace_err[k],
            leakage: series.leakage[k],
        })
        .collect()
}

/// Run every sweep value and collect the four entanglement series.
pub fn run(s: &Scenario) -> Result<ResultTable> {
    s.validate()?;
    let per_value: Vec<(Option<f64>, EntanglementSeries)> = s
        .sweep_values()
        .into_par_iter()
        .map(|v| {
            let traj = s.trajectory(v)?;
            let series = s.with_value(v, || measure_trajectory(&traj))?;
            Ok((v, series))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for (v, series) in &per_value {
        rows.extend(rows_from(series, v.unwrap_or(0.0)));
        warnings.extend(series.warnings.iter().map(|w| match v {
            Some(v) => format!("{} = {v}: {w}", s.sweep_name()),
            None => w.clone(),
        }));
    }
    rows.sort_by(|a, b| a.sweep_value.total_cmp(&b.sweep_value).then(a.gt.total_cmp(&b.gt)));
    Ok(ResultTable {
        scenario: s.name.clone(),
        sweep_name: s.sweep_name().to_string(),
        rows,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn small() -> Scenario {
        Scenario {
            name: "small".into(),
            atom: AtomSpec::Bell { theta: FRAC_PI_4 },
            field_a: FieldSpec::scs(0.5, 0.0),
            field_b: FieldSpec::scs(0.5, 0.0),
            model: ModelParams::bare(),
            grid: TimeGrid::new(5.0, 11).unwrap(),
            cutoff: 12,
            sweep: Some(Sweep::new(SweepParam::NbarS, vec![0.1, 0.0])),
        }
    }

    #[test]
    fn linspace_endpoints() {
        let s = Sweep::linspace(SweepParam::Lambda, 0.0, 1.0, 21);
        assert_eq!(s.values.len(), 21);
        assert_eq!(s.values[0], 0.0);
        assert_eq!(s.values[20], 1.0);
        assert!((s.values[5] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn sweep_param_round_trip() {
        for p in SweepParam::ALL {
            assert_eq!(p.name().parse::<SweepParam>().unwrap(), p);
        }
        assert!("mu".parse::<SweepParam>().is_err());
    }

    #[test]
    fn instance_sets_both_fields() {
        let s = small();
        let inst = s.instance(Some(0.3)).unwrap();
        assert_eq!(inst.field_a, FieldSpec::scs(0.5, 0.3));
        assert_eq!(inst.field_b, FieldSpec::scs(0.5, 0.3));
        assert_eq!(s.instance(None).unwrap().field_a, FieldSpec::scs(0.5, 0.0));
    }

    #[test]
    fn sweep_must_exist() {
        let mut s = small();
        s.sweep = Some(Sweep::new(SweepParam::Jz, vec![0.1]));
        assert!(matches!(s.validate(), Err(Error::Config(_))));
        s.sweep = Some(Sweep::new(SweepParam::NbarTh, vec![0.1]));
        assert!(s.validate().is_err());
        s.sweep = Some(Sweep::new(SweepParam::NbarS, vec![]));
        assert!(s.validate().is_err());
        s.sweep = Some(Sweep::new(SweepParam::NbarS, vec![-0.1]));
        assert!(s.validate().unwrap_err().is_config());
    }

    #[test]
    fn run_rows_sorted_and_complete() {
        let t = run(&small()).unwrap();
        assert_eq!(t.rows.len(), 22);
        assert_eq!(t.sweep_name, "nbar_s");
        assert_eq!(t.rows[0].sweep_value, 0.0);
        assert_eq!(t.rows[11].sweep_value, 0.1);
        assert!(t.rows.windows(2).all(|w| (w[0].sweep_value, w[0].gt) < (w[1].sweep_value, w[1].gt)));
        let r0 = t.rows[0];
        assert!((r0.c_ab - 1.0).abs() < 1e-12);
        assert!(r0.n_fields.abs() < 1e-12);
    }

    #[test]
    fn run_names_failing_value() {
        let mut s = small();
        s.cutoff = 4;
        s.sweep = Some(Sweep::new(SweepParam::NbarS, vec![0.0]));
        match run(&s) {
            Err(Error::Sweep { name, value, source }) => {
                assert_eq!(name, "nbar_s");
                assert_eq!(value, 0.0);
                assert!(matches!(*source, Error::CutoffTooSmall { .. }));
            }
            other => panic!("expected a sweep error, got {other:?}"),
        }
    }

    #[test]
    fn run_is_deterministic() {
        let s = small();
        assert_eq!(run(&s).unwrap(), run(&s).unwrap());
    }
}
