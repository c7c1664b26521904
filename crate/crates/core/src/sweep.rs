//! Rate tables over nuclear charge and field strength.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::ion::{rate_factored, Flag, Flags, ReducedField, StateSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Geometric,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Reduced,
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl FieldGrid {
    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 field points, got {}",
                self.count
            )));
        }
        if !(self.min > 0.0 && self.min.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "field minimum must be positive, got {}",
                self.min
            )));
        }
        if !(self.max > self.min && self.max.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "field maximum {} must exceed minimum {}",
                self.max, self.min
            )));
        }
        Ok(())
    }

    /// Field values in ascending order; the end points are exactly `min` and `max`.
    pub fn values(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let last = (self.count - 1) as f64;
        let mut out: Vec<f64> = (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Geometric => self.min * (self.max / self.min).powf(t),
                    Spacing::Linear => self.min + (self.max - self.min) * t,
                }
            })
            .collect();
        out[0] = self.min;
        out[self.count - 1] = self.max;
        Ok(out)
    }
}

/// A state as requested by the user, before domain validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateInput {
    /// Hydrogen-like ion of nuclear charge Z.
    Charge { z: u32 },
    /// Hydrogen-like ion given directly by Z alpha.
    Zalpha { zalpha: f64 },
    Custom {
        epsilon: f64,
        c_lambda_sq: f64,
        eta: f64,
    },
}

impl StateInput {
    pub fn label(&self) -> String {
        match *self {
            StateInput::Charge { z } => format!("Z={z}"),
            StateInput::Zalpha { zalpha } => format!("za={zalpha}"),
            StateInput::Custom {
                epsilon,
                c_lambda_sq,
                eta,
            } => format!("custom(eps={epsilon};c2={c_lambda_sq};eta={eta})"),
        }
    }

    pub fn to_state(&self) -> Result<StateSpec> {
        match *self {
            StateInput::Charge { z } => StateSpec::from_charge(z),
            StateInput::Zalpha { zalpha } => StateSpec::hydrogenic(zalpha),
            StateInput::Custom {
                epsilon,
                c_lambda_sq,
                eta,
            } => StateSpec::custom(epsilon, c_lambda_sq, eta),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub states: Vec<StateInput>,
    pub fields: FieldGrid,
    #[serde(default)]
    pub units: Units,
}

impl ScanSpec {
    /// Hydrogenic states for every charge in `lo..=hi`.
    pub fn charge_range(lo: u32, hi: u32, fields: FieldGrid) -> Result<Self> {
        if lo == 0 || hi < lo {
            return Err(Error::InvalidGrid(format!(
                "invalid charge range {lo}:{hi}"
            )));
        }
        Ok(Self {
            states: (lo..=hi).map(|z| StateInput::Charge { z }).collect(),
            fields,
            units: Units::Reduced,
        })
    }
}

/// One (state, field) evaluation. Numeric columns are `None` only when the
/// state itself was rejected, in which case `flags` carries `domain-error`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub state: String,
    pub zalpha: Option<f64>,
    pub epsilon: Option<f64>,
    pub f: f64,
    pub xi: Option<f64>,
    pub ln_w_reduced: Option<f64>,
    pub w_reduced: Option<f64>,
    pub w_si: Option<f64>,
    pub flags: Flags,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Rows grouped by state in the order the `ScanSpec` lists them, ascending in f
/// within each state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanTable {
    pub units: Units,
    pub rows: Vec<ScanRow>,
}

impl ScanTable {
    pub fn flagged_rows(&self) -> usize {
        self.rows.iter().filter(|r| !r.flags.is_empty()).count()
    }
}

pub fn scan_grid(spec: &ScanSpec) -> Result<ScanTable> {
    if spec.states.is_empty() {
        return Err(Error::InvalidGrid("no states to scan".into()));
    }
    let fields = spec.fields.values()?;
    let resolved: Vec<(String, Result<StateSpec>)> = spec
        .states
        .iter()
        .map(|s| (s.label(), s.to_state()))
        .collect();

    let jobs: Vec<(usize, f64)> = (0..resolved.len())
        .flat_map(|i| fields.iter().map(move |&f| (i, f)))
        .collect();

    let rows = jobs
        .par_iter()
        .map(|&(i, f)| {
            let (label, state) = &resolved[i];
            evaluate_row(label, state, f)
        })
        .collect();

    Ok(ScanTable {
        units: spec.units,
        rows,
    })
}

fn evaluate_row(label: &str, state: &Result<StateSpec>, f: f64) -> ScanRow {
    let outcome = state
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|s| rate_factored(s, ReducedField::new(f)?));
    match outcome {
        Ok(b) => ScanRow {
            state: label.to_string(),
            zalpha: Some(b.zalpha),
            epsilon: Some(b.epsilon),
            f,
            xi: Some(b.xi.value()),
            ln_w_reduced: Some(b.ln_w_reduced),
            w_reduced: Some(b.w_reduced),
            w_si: Some(b.w_si),
            flags: b.flags,
            error: None,
        },
        Err(e) => ScanRow {
            state: label.to_string(),
            zalpha: None,
            epsilon: None,
            f,
            xi: None,
            ln_w_reduced: None,
            w_reduced: None,
            w_si: None,
            flags: Flags::empty().with(Flag::DomainError),
            error: Some(e.to_string()),
        },
    }
}

/// An adjacent pair of unflagged rows of one state where w does not grow with f.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub state: String,
    /// Index of the lower-field row in the table.
    pub row: usize,
    pub f_lo: f64,
    pub f_hi: f64,
    pub w_lo: f64,
    pub w_hi: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: w({:e}) = {:e} does not exceed w({:e}) = {:e} (rows {} and {})",
            self.state,
            self.f_hi,
            self.w_hi,
            self.f_lo,
            self.w_lo,
            self.row,
            self.row + 1
        )
    }
}

pub fn monotonicity_report(table: &ScanTable) -> Vec<Violation> {
    table
        .rows
        .windows(2)
        .enumerate()
        .filter_map(|(i, pair)| {
            let (a, b) = (&pair[0], &pair[1]);
            // f restarts at each state block, which also separates repeated states
            let same_block = a.state == b.state && b.f > a.f;
            if !same_block || !a.flags.is_empty() || !b.flags.is_empty() {
                return None;
            }
            let (w_lo, w_hi) = (a.w_reduced?, b.w_reduced?);
            if w_hi > w_lo {
                return None;
            }
            Some(Violation {
                state: a.state.clone(),
                row: i,
                f_lo: a.f,
                f_hi: b.f,
                w_lo,
                w_hi,
            })
        })
        .collect()
}

/// Schwinger-field scaling for a bound particle heavier than the electron.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassScaling {
    pub mass_ratio: f64,
    /// E_S(new) / E_S(e) = mass_ratio^2
    pub field_ratio: f64,
    pub orders_of_magnitude: f64,
}

pub fn schwinger_scaling(mass_ratio: f64) -> Result<MassScaling> {
    if !(mass_ratio > 0.0 && mass_ratio.is_finite()) {
        return Err(domain(
            "mass_ratio",
            mass_ratio,
            "mass ratio must be positive",
        ));
    }
    Ok(MassScaling {
        mass_ratio,
        field_ratio: mass_ratio * mass_ratio,
        orders_of_magnitude: 2.0 * mass_ratio.log10(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PION_ELECTRON_MASS_RATIO;

    fn fields(min: f64, max: f64, count: usize) -> FieldGrid {
        FieldGrid {
            min,
            max,
            count,
            spacing: Spacing::Geometric,
        }
    }

    #[test]
    fn grid_validation() {
        assert!(fields(0.1, 0.2, 1).values().is_err());
        assert!(fields(0.2, 0.1, 3).values().is_err());
        assert!(fields(0.0, 0.1, 3).values().is_err());
        let v = fields(1e-3, 0.1, 3).values().unwrap();
        assert_eq!(v[0], 1e-3);
        assert_eq!(v[2], 0.1);
        assert!((v[1] - 1e-2).abs() < 1e-17);
        let lin = FieldGrid {
            spacing: Spacing::Linear,
            ..fields(0.1, 0.2, 3)
        };
        assert!((lin.values().unwrap()[1] - 0.15).abs() < 1e-16);
    }

    #[test]
    fn two_fields_increase() {
        let spec = ScanSpec {
            states: vec![StateInput::Zalpha { zalpha: 0.5 }],
            fields: fields(0.02, 0.04, 2),
            units: Units::Reduced,
        };
        let t = scan_grid(&spec).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert!(t.rows[1].w_reduced.unwrap() > t.rows[0].w_reduced.unwrap());
    }

    #[test]
    fn charge_range_ordering() {
        let spec = ScanSpec::charge_range(1, 3, fields(1e-3, 0.1, 5)).unwrap();
        let t = scan_grid(&spec).unwrap();
        assert_eq!(t.rows.len(), 15);
        let labels: Vec<&str> = t.rows.iter().map(|r| r.state.as_str()).collect();
        assert_eq!(&labels[..5], &["Z=1"; 5]);
        assert_eq!(&labels[10..], &["Z=3"; 5]);
        for group in t.rows.chunks(5) {
            assert!(group.windows(2).all(|w| w[0].f < w[1].f));
        }
    }

    #[test]
    fn rows_match_fresh_evaluation() {
        let spec = ScanSpec {
            states: vec![StateInput::Zalpha { zalpha: 0.67 }],
            fields: fields(0.01, 0.2, 6),
            units: Units::Reduced,
        };
        let t = scan_grid(&spec).unwrap();
        let state = StateSpec::hydrogenic(0.67).unwrap();
        for row in &t.rows {
            let b = rate_factored(&state, ReducedField::new(row.f).unwrap()).unwrap();
            assert_eq!(row.w_reduced.unwrap().to_bits(), b.w_reduced.to_bits());
        }
        assert!(monotonicity_report(&t).is_empty());
    }

    #[test]
    fn bad_state_is_reported_per_row() {
        let spec = ScanSpec {
            states: vec![StateInput::Charge { z: 200 }, StateInput::Charge { z: 2 }],
            fields: fields(0.01, 0.1, 3),
            units: Units::Reduced,
        };
        let t = scan_grid(&spec).unwrap();
        assert_eq!(t.rows.len(), 6);
        assert!(t.rows[..3]
            .iter()
            .all(|r| r.flags.contains(Flag::DomainError) && r.w_reduced.is_none()));
        assert!(t.rows[3..].iter().all(|r| r.w_reduced.is_some()));
    }

    #[test]
    fn corrupted_row_is_named() {
        let spec = ScanSpec {
            states: vec![StateInput::Zalpha { zalpha: 0.6 }],
            fields: fields(0.01, 0.2, 5),
            units: Units::Reduced,
        };
        let mut t = scan_grid(&spec).unwrap();
        assert!(monotonicity_report(&t).is_empty());
        let w = t.rows[1].w_reduced.unwrap();
        t.rows[2].w_reduced = Some(w * 0.5);
        let v = monotonicity_report(&t);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].row, 1);
        assert_eq!(v[0].state, "za=0.6");
    }

    #[test]
    fn repeated_state_blocks_are_not_paired() {
        let spec = ScanSpec {
            states: vec![StateInput::Charge { z: 45 }, StateInput::Charge { z: 45 }],
            fields: fields(1e-4, 1e-3, 2),
            units: Units::Reduced,
        };
        assert!(monotonicity_report(&scan_grid(&spec).unwrap()).is_empty());
    }

    #[test]
    fn single_row_table_has_no_violations() {
        let mut t = scan_grid(&ScanSpec {
            states: vec![StateInput::Zalpha { zalpha: 0.6 }],
            fields: fields(0.01, 0.2, 2),
            units: Units::Reduced,
        })
        .unwrap();
        t.rows.truncate(1);
        assert!(monotonicity_report(&t).is_empty());
    }

    #[test]
    fn mass_scaling() {
        let one = schwinger_scaling(1.0).unwrap();
        assert_eq!((one.field_ratio, one.orders_of_magnitude), (1.0, 0.0));
        let ten = schwinger_scaling(10.0).unwrap();
        assert_eq!(ten.field_ratio, 100.0);
        assert!((ten.orders_of_magnitude - 2.0).abs() < 1e-15);
        let pion = schwinger_scaling(PION_ELECTRON_MASS_RATIO).unwrap();
        assert!((pion.field_ratio / 7.46e4 - 1.0).abs() < 1e-3);
        assert!((pion.orders_of_magnitude - 4.87).abs() < 0.005);
        assert!(schwinger_scaling(0.0).is_err());
        assert!(schwinger_scaling(-3.0).is_err());
    }
}
