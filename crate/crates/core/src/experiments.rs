//! Parameter sweeps, figure tables and the `Delta_0^2` estimate.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::observables::{density, expect_j_moments, windowed_phi_moments, WindowSpec};
use crate::states::{
    cat_state, coherent_state, fmt_c, fock_state, squeezed_coherent_state, CircleState, StateParams,
};
use crate::uncertainty::{uncertainty_report, UncertaintyReport, DEFAULT_DELTA0_SQ};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Coherent,
    Squeezed,
    Cat,
    Fock,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coherent" => Ok(Family::Coherent),
            "squeezed" => Ok(Family::Squeezed),
            "cat" => Ok(Family::Cat),
            "fock" => Ok(Family::Fock),
            other => Err(domain(format!("unknown family '{other}'"))),
        }
    }
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Coherent => "coherent",
            Family::Squeezed => "squeezed",
            Family::Cat => "cat",
            Family::Fock => "fock",
        }
    }

    pub fn build(&self, p: &StateParams) -> Result<CircleState> {
        match self {
            Family::Coherent => coherent_state(p.z),
            Family::Squeezed => squeezed_coherent_state(p.z, p.s),
            Family::Cat => cat_state(p.z, p.a),
            Family::Fock => Ok(fock_state(p.m)),
        }
    }

    /// Parameters that actually enter the family, as `key=value` text.
    pub fn describe(&self, p: &StateParams) -> String {
        match self {
            Family::Coherent => format!("z={}", fmt_c(p.z)),
            Family::Squeezed => format!("z={} s={}", fmt_c(p.z), p.s),
            Family::Cat => format!("z={} a={}", fmt_c(p.z), fmt_c(p.a)),
            Family::Fock => format!("m={}", p.m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Varying {
    AReal,
    AImag,
    S,
    ZMod,
    ZArg,
}

impl FromStr for Varying {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "a_real" => Ok(Varying::AReal),
            "a_imag" => Ok(Varying::AImag),
            "s" => Ok(Varying::S),
            "z_mod" => Ok(Varying::ZMod),
            "z_arg" => Ok(Varying::ZArg),
            other => Err(domain(format!("unknown sweep parameter '{other}'"))),
        }
    }
}

impl Varying {
    pub fn name(&self) -> &'static str {
        match self {
            Varying::AReal => "a_real",
            Varying::AImag => "a_imag",
            Varying::S => "s",
            Varying::ZMod => "z_mod",
            Varying::ZArg => "z_arg",
        }
    }

    fn apply(&self, base: &StateParams, v: f64) -> StateParams {
        let mut p = *base;
        match self {
            Varying::AReal => p.a.re = v,
            Varying::AImag => p.a.im = v,
            Varying::S => p.s = v,
            Varying::ZMod => p.z = Complex64::from_polar(v, base.z.arg()),
            Varying::ZArg => p.z = Complex64::from_polar(base.z.norm(), v),
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub family: Family,
    pub varying: Varying,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub spacing: Spacing,
    pub fixed: StateParamsRepr,
}

/// Serializable mirror of [`StateParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateParamsRepr {
    pub z: [f64; 2],
    pub s: f64,
    pub a: [f64; 2],
    pub m: i32,
}

impl From<StateParams> for StateParamsRepr {
    fn from(p: StateParams) -> Self {
        Self { z: [p.z.re, p.z.im], s: p.s, a: [p.a.re, p.a.im], m: p.m }
    }
}

impl From<StateParamsRepr> for StateParams {
    fn from(p: StateParamsRepr) -> Self {
        Self { z: Complex64::new(p.z[0], p.z[1]), s: p.s, a: Complex64::new(p.a[0], p.a[1]), m: p.m }
    }
}

impl SweepSpec {
    pub fn new(family: Family, varying: Varying, range: (f64, f64, usize), fixed: StateParams) -> Self {
        Self {
            family,
            varying,
            lo: range.0,
            hi: range.1,
            count: range.2,
            spacing: Spacing::Linear,
            fixed: fixed.into(),
        }
    }

    pub fn log_spaced(mut self) -> Self {
        self.spacing = Spacing::Log;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSweep(m));
        if self.count < 2 {
            return bad(format!("count must be >= 2, got {}", self.count));
        }
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return bad(format!("need finite lo < hi, got [{}, {}]", self.lo, self.hi));
        }
        if self.spacing == Spacing::Log && self.lo <= 0.0 {
            return bad("log spacing needs a positive range".into());
        }
        let ok = match (self.family, self.varying) {
            (Family::Fock, _) => false,
            (Family::Cat, Varying::AReal | Varying::AImag) => true,
            (Family::Squeezed, Varying::S) => true,
            (_, Varying::ZMod | Varying::ZArg) => true,
            _ => false,
        };
        if !ok {
            return bad(format!("family {} cannot sweep {}", self.family.name(), self.varying.name()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|k| {
                let t = k as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => {
                        if k == n - 1 {
                            self.hi
                        } else {
                            self.lo + (self.hi - self.lo) * k as f64 / (n - 1) as f64
                        }
                    }
                    Spacing::Log => {
                        if k == n - 1 {
                            self.hi
                        } else {
                            (self.lo.ln() + (self.hi.ln() - self.lo.ln()) * t).exp()
                        }
                    }
                }
            })
            .collect()
    }
}

/// Scalar columns available to [`scan`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    KrPhi,
    KrJ,
    KrSum,
    MeanPhi,
    VarPhi,
    MeanJ,
    VarJ,
    VarSum,
    CovJphi,
    ImGJphi,
    DetG,
    SchrodingerLhs,
    SchrodingerRhs,
    HeisenbergLhs,
    HeisenbergRhs,
    PhiCommutatorFlag,
    JCommutatorFlag,
    PhiDelta0Flag,
    JDelta0Flag,
}

impl Measure {
    pub const ALL: [Measure; 19] = [
        Measure::KrPhi,
        Measure::KrJ,
        Measure::KrSum,
        Measure::MeanPhi,
        Measure::VarPhi,
        Measure::MeanJ,
        Measure::VarJ,
        Measure::VarSum,
        Measure::CovJphi,
        Measure::ImGJphi,
        Measure::DetG,
        Measure::SchrodingerLhs,
        Measure::SchrodingerRhs,
        Measure::HeisenbergLhs,
        Measure::HeisenbergRhs,
        Measure::PhiCommutatorFlag,
        Measure::JCommutatorFlag,
        Measure::PhiDelta0Flag,
        Measure::JDelta0Flag,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Measure::KrPhi => "kr_phi",
            Measure::KrJ => "kr_j",
            Measure::KrSum => "kr_sum",
            Measure::MeanPhi => "mean_phi",
            Measure::VarPhi => "var_phi",
            Measure::MeanJ => "mean_j",
            Measure::VarJ => "var_j",
            Measure::VarSum => "var_sum",
            Measure::CovJphi => "cov_jphi",
            Measure::ImGJphi => "im_g_jphi",
            Measure::DetG => "det_g",
            Measure::SchrodingerLhs => "schrodinger_lhs",
            Measure::SchrodingerRhs => "schrodinger_rhs",
            Measure::HeisenbergLhs => "heisenberg_lhs",
            Measure::HeisenbergRhs => "heisenberg_rhs",
            Measure::PhiCommutatorFlag => "phi_commutator_flag",
            Measure::JCommutatorFlag => "j_commutator_flag",
            Measure::PhiDelta0Flag => "phi_delta0_flag",
            Measure::JDelta0Flag => "j_delta0_flag",
        }
    }

    pub fn extract(&self, r: &UncertaintyReport) -> f64 {
        let flag = |b: bool| if b { 1.0 } else { 0.0 };
        match self {
            Measure::KrPhi => r.kr_phi,
            Measure::KrJ => r.kr_j,
            Measure::KrSum => r.kr_sum,
            Measure::MeanPhi => r.mean_phi,
            Measure::VarPhi => r.var_phi,
            Measure::MeanJ => r.mean_j,
            Measure::VarJ => r.var_j,
            Measure::VarSum => r.var_phi + r.var_j,
            Measure::CovJphi => r.cov_jphi,
            Measure::ImGJphi => r.im_g_jphi,
            Measure::DetG => r.det_g,
            Measure::SchrodingerLhs => r.schrodinger_lhs,
            Measure::SchrodingerRhs => r.schrodinger_rhs,
            Measure::HeisenbergLhs => r.heisenberg_lhs,
            Measure::HeisenbergRhs => r.heisenberg_rhs,
            Measure::PhiCommutatorFlag => flag(r.squeeze_flags.phi_commutator),
            Measure::JCommutatorFlag => flag(r.squeeze_flags.j_commutator),
            Measure::PhiDelta0Flag => flag(r.squeeze_flags.phi_delta0),
            Measure::JDelta0Flag => flag(r.squeeze_flags.j_delta0),
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| domain(format!("unknown measure '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// Rectangular sweep result: one strictly increasing parameter column plus
/// measure columns of the same length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub param: String,
    pub values: Vec<f64>,
    pub columns: Vec<Column>,
    pub provenance: Vec<(String, String)>,
}

impl ScanTable {
    pub fn new(param: impl Into<String>, values: Vec<f64>, columns: Vec<Column>) -> Result<Self> {
        if values.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(domain("scan parameter must be strictly increasing"));
        }
        if let Some(c) = columns.iter().find(|c| c.values.len() != values.len()) {
            return Err(domain(format!("column {} has {} rows, expected {}", c.name, c.values.len(), values.len())));
        }
        Ok(Self { param: param.into(), values, columns, provenance: Vec::new() })
    }

    pub fn with_provenance(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.provenance.push((key.into(), value.into()));
        self
    }

    pub fn rows(&self) -> usize {
        self.values.len()
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|c| c.name == name).map(|c| c.values.as_slice())
    }

    /// CSV with `# key=value` comment lines, a header row and values written
    /// with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.provenance {
            let _ = writeln!(out, "# {k}={v}");
        }
        let mut header = vec![self.param.as_str()];
        header.extend(self.columns.iter().map(|c| c.name.as_str()));
        out.push_str(&header.join(","));
        out.push('\n');
        for (i, &x) in self.values.iter().enumerate() {
            out.push_str(&fmt_num(x));
            for c in &self.columns {
                out.push(',');
                out.push_str(&fmt_num(c.values[i]));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut obj = serde_json::Map::new();
        obj.insert("param".into(), self.param.clone().into());
        obj.insert("values".into(), json_nums(&self.values));
        let cols: serde_json::Map<String, serde_json::Value> =
            self.columns.iter().map(|c| (c.name.clone(), json_nums(&c.values))).collect();
        obj.insert("columns".into(), cols.into());
        let prov: serde_json::Map<String, serde_json::Value> =
            self.provenance.iter().map(|(k, v)| (k.clone(), v.clone().into())).collect();
        obj.insert("provenance".into(), prov.into());
        serde_json::to_string_pretty(&serde_json::Value::Object(obj)).expect("table serializes")
    }
}

fn json_nums(v: &[f64]) -> serde_json::Value {
    v.iter()
        .map(|&x| if x.is_finite() { serde_json::json!(x) } else { serde_json::json!(fmt_num(x)) })
        .collect()
}

/// Seventeen significant digits; non-finite values as `inf`, `-inf`, `nan`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

/// Run `measures` over every row of `spec`. Rows are computed independently
/// (in parallel) and returned in parameter order.
pub fn scan(spec: &SweepSpec, measures: &[Measure]) -> Result<ScanTable> {
    scan_with_delta0(spec, measures, DEFAULT_DELTA0_SQ)
}

pub fn scan_with_delta0(spec: &SweepSpec, measures: &[Measure], delta0_sq: f64) -> Result<ScanTable> {
    spec.validate()?;
    let values = spec.values();
    let fixed: StateParams = spec.fixed.into();
    let rows: Vec<Vec<f64>> = values
        .par_iter()
        .enumerate()
        .map(|(row, &v)| {
            let p = spec.varying.apply(&fixed, v);
            let wrap = |e: Error| Error::Row { row, source: Box::new(e) };
            let psi = spec.family.build(&p).map_err(wrap)?;
            let r = uncertainty_report(&psi, delta0_sq).map_err(wrap)?;
            Ok(measures.iter().map(|m| m.extract(&r)).collect())
        })
        .collect::<Result<_>>()?;
    let columns = measures
        .iter()
        .enumerate()
        .map(|(k, m)| Column { name: m.name().into(), values: rows.iter().map(|r| r[k]).collect() })
        .collect();
    Ok(ScanTable::new(spec.varying.name(), values, columns)?
        .with_provenance("family", spec.family.name())
        .with_provenance("fixed", spec.family.describe(&fixed))
        .with_provenance("range", format!("{}..{} x{} {:?}", spec.lo, spec.hi, spec.count, spec.spacing))
        .with_provenance("window", "packet-centred, closed-form moments")
        .with_provenance("delta0_sq", delta0_sq.to_string()))
}

/// Range of the real cat weight `a` used by the figure sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FigureRange {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Default for FigureRange {
    fn default() -> Self {
        Self { lo: -3.0, hi: 3.0, count: 601 }
    }
}

fn cat_params(z: f64) -> StateParams {
    StateParams { z: Complex64::new(z, 0.0), ..StateParams::default() }
}

/// K-R uncertainties of `|z = 1, a>` over real `a`.
pub fn figure1(range: FigureRange) -> Result<ScanTable> {
    let spec = SweepSpec::new(Family::Cat, Varying::AReal, (range.lo, range.hi, range.count), cat_params(1.0));
    Ok(scan(&spec, &[Measure::KrPhi, Measure::KrJ, Measure::KrSum])?.with_provenance("figure", "1"))
}

pub const FIGURE2_POINTS: usize = 1024;

/// Angle densities of the odd cat `|1;->` and the coherent state `|1>`.
pub fn figure2() -> Result<ScanTable> {
    let n = FIGURE2_POINTS;
    let phis: Vec<f64> = (0..n)
        .map(|k| if k == n - 1 { PI } else { -PI + 2.0 * PI * k as f64 / (n - 1) as f64 })
        .collect();
    let one = Complex64::new(1.0, 0.0);
    let cat = cat_state(one, -one)?;
    let cs = coherent_state(one)?;
    let columns = vec![
        Column { name: "p_cat".into(), values: density(&cat, &phis) },
        Column { name: "p_cs".into(), values: density(&cs, &phis) },
    ];
    Ok(ScanTable::new("phi", phis, columns)?
        .with_provenance("figure", "2")
        .with_provenance("states", "p_cat=|z=1,a=-1>; p_cs=|z=1>"))
}

/// `det G` of `|z, a>` over real `a` for `z = 0.4` and `z = 1`.
pub fn figure3(range: FigureRange) -> Result<ScanTable> {
    let mut columns = Vec::new();
    let mut values = Vec::new();
    for (z, name) in [(0.4, "det_g_z0.4"), (1.0, "det_g_z1")] {
        let spec = SweepSpec::new(Family::Cat, Varying::AReal, (range.lo, range.hi, range.count), cat_params(z));
        let t = scan(&spec, &[Measure::DetG])?;
        values = t.values.clone();
        columns.push(Column { name: name.into(), values: t.columns[0].values.clone() });
    }
    Ok(ScanTable::new("a_real", values, columns)?.with_provenance("figure", "3"))
}

/// Minimum of a unimodal function on `[lo, hi]` by golden-section search.
pub fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Delta0Estimate {
    /// Estimated `Delta_0^2`.
    pub value: f64,
    pub z_mod: f64,
    pub phase: f64,
    /// Best value on the grid before refinement.
    pub grid_value: f64,
}

/// `max(var_phi, var_J)` of the coherent state `|z>`.
pub fn coherent_max_variance(z: Complex64) -> Result<f64> {
    let psi = coherent_state(z)?;
    let var_phi = windowed_phi_moments(&psi, WindowSpec::centred_on(&psi)).var_phi;
    Ok(var_phi.max(expect_j_moments(&psi).var_j))
}

/// 129 log-spaced moduli in `[0.2, 5]`.
pub fn default_delta0_moduli() -> Vec<f64> {
    SweepSpec::new(Family::Coherent, Varying::ZMod, (0.2, 5.0, 129), StateParams::default())
        .log_spaced()
        .values()
}

/// Smallest simultaneous value of the two variances over coherent states:
/// grid minimum of `max(var_phi, var_J)` followed by golden-section
/// refinement of `|z|` between the neighbouring grid points, to `1e-6`.
pub fn estimate_delta0(z_moduli: &[f64], phases: &[f64]) -> Result<Delta0Estimate> {
    if z_moduli.is_empty() || phases.is_empty() {
        return Err(domain("Delta_0 estimate needs non-empty grids"));
    }
    if z_moduli.iter().any(|&r| !(r > 0.0)) {
        return Err(domain("coherent-state moduli must be positive"));
    }
    let points: Vec<(usize, f64)> = phases
        .iter()
        .flat_map(|&ph| z_moduli.iter().enumerate().map(move |(i, _)| (i, ph)))
        .collect();
    let vals: Vec<f64> = points
        .par_iter()
        .map(|&(i, ph)| coherent_max_variance(Complex64::from_polar(z_moduli[i], ph)))
        .collect::<Result<_>>()?;
    let (best, &grid_value) = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .expect("non-empty grid");
    let (i, phase) = points[best];
    let mut est = Delta0Estimate { value: grid_value, z_mod: z_moduli[i], phase, grid_value };
    if z_moduli.len() >= 2 {
        let lo = z_moduli[i.saturating_sub(1)].min(z_moduli[i]);
        let hi = z_moduli[(i + 1).min(z_moduli.len() - 1)].max(z_moduli[i]);
        let f = |r: f64| coherent_max_variance(Complex64::from_polar(r, phase)).unwrap_or(f64::INFINITY);
        let (r, v) = golden_section_min(f, lo, hi, 1e-6);
        if v < est.value {
            est.value = v;
            est.z_mod = r;
        }
    }
    Ok(est)
}

/// `var_phi + var_J` against `2 Delta_0^2` for a list of states. Violations are
/// flagged in the `violated` column, not treated as errors.
pub fn sum_ur_scan(states: &[CircleState], delta0_sq: f64) -> Result<ScanTable> {
    let reports: Vec<UncertaintyReport> =
        states.par_iter().map(|s| uncertainty_report(s, delta0_sq)).collect::<Result<_>>()?;
    let col = |name: &str, f: &dyn Fn(&UncertaintyReport) -> f64| Column {
        name: name.into(),
        values: reports.iter().map(f).collect(),
    };
    let bound = 2.0 * delta0_sq;
    let columns = vec![
        col("var_phi", &|r| r.var_phi),
        col("var_j", &|r| r.var_j),
        col("var_sum", &|r| r.var_phi + r.var_j),
        col("two_delta0_sq", &|_| bound),
        col("violated", &|r| if r.var_phi + r.var_j < bound { 1.0 } else { 0.0 }),
    ];
    let mut t = ScanTable::new("index", (0..states.len()).map(|k| k as f64).collect(), columns)?;
    for (k, s) in states.iter().enumerate() {
        t = t.with_provenance(format!("state_{k}"), s.label());
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqueezingSurvey {
    pub squeezed: ScanTable,
    pub cat: ScanTable,
    /// `var_phi` never increases as `s` decreases over the sampled points.
    pub monotone: bool,
    pub var_phi_at_smallest_s: f64,
}

pub const SURVEY_MEASURES: [Measure; 7] = [
    Measure::VarPhi,
    Measure::VarJ,
    Measure::ImGJphi,
    Measure::PhiCommutatorFlag,
    Measure::JCommutatorFlag,
    Measure::PhiDelta0Flag,
    Measure::JDelta0Flag,
];

/// `s`-scan of `|1>_s` over 60 log-spaced points in `[0.05, 2]` and an
/// `a`-scan of `|1, a>`, both with the squeezing flags.
pub fn squeezing_survey(delta0_sq: f64) -> Result<SqueezingSurvey> {
    let s_spec = SweepSpec::new(Family::Squeezed, Varying::S, (0.05, 2.0, 60), StateParams::default()).log_spaced();
    let squeezed = scan_with_delta0(&s_spec, &SURVEY_MEASURES, delta0_sq)?;
    let cat_spec = SweepSpec::new(Family::Cat, Varying::AReal, (-3.0, 3.0, 121), StateParams::default());
    let cat = scan_with_delta0(&cat_spec, &SURVEY_MEASURES, delta0_sq)?;
    let var = squeezed.column("var_phi").expect("var_phi column");
    Ok(SqueezingSurvey {
        monotone: nonincreasing_as_param_decreases(var),
        var_phi_at_smallest_s: var[0],
        squeezed,
        cat,
    })
}

/// Values listed in ascending parameter order never increase when walking
/// towards smaller parameters.
pub fn nonincreasing_as_param_decreases(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] <= w[1] + 1e-12)
}

/// Write `fig1.csv`, `fig2.csv`, `fig3.csv` and `delta0.txt` into `dir`.
pub fn write_figures(dir: &Path, range: FigureRange) -> Result<Delta0Estimate> {
    let io = |e: std::io::Error| domain(format!("cannot write to {}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join("fig1.csv"), figure1(range)?.to_csv()).map_err(io)?;
    fs::write(dir.join("fig2.csv"), figure2()?.to_csv()).map_err(io)?;
    fs::write(dir.join("fig3.csv"), figure3(range)?.to_csv()).map_err(io)?;
    let est = estimate_delta0(&default_delta0_moduli(), &[0.0])?;
    fs::write(dir.join("delta0.txt"), delta0_text(&est)).map_err(io)?;
    Ok(est)
}

pub fn delta0_text(est: &Delta0Estimate) -> String {
    format!(
        "delta0_sq={}\nz_mod={}\nphase={}\ngrid_value={}\n",
        fmt_num(est.value),
        fmt_num(est.z_mod),
        fmt_num(est.phase),
        fmt_num(est.grid_value)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_scan() {
        let spec = SweepSpec::new(Family::Cat, Varying::AReal, (-1.0, 1.0, 2), StateParams::default());
        let t = scan(&spec, &[Measure::KrPhi]).unwrap();
        assert_eq!(t.rows(), 2);
        assert_eq!(t.values, vec![-1.0, 1.0]);
    }

    #[test]
    fn invalid_sweeps() {
        let p = StateParams::default();
        assert!(SweepSpec::new(Family::Cat, Varying::AReal, (0.0, 1.0, 1), p).validate().is_err());
        assert!(SweepSpec::new(Family::Cat, Varying::AReal, (1.0, 1.0, 5), p).validate().is_err());
        assert!(SweepSpec::new(Family::Coherent, Varying::S, (0.1, 1.0, 5), p).validate().is_err());
        assert!(SweepSpec::new(Family::Fock, Varying::ZMod, (0.1, 1.0, 5), p).validate().is_err());
        assert!(SweepSpec::new(Family::Squeezed, Varying::S, (0.0, 1.0, 5), p).log_spaced().validate().is_err());
    }

    #[test]
    fn row_errors_carry_index() {
        // z_mod sweep crossing zero modulus fails on the first row.
        let spec = SweepSpec::new(Family::Coherent, Varying::ZMod, (0.0, 1.0, 3), StateParams::default());
        match scan(&spec, &[Measure::VarJ]) {
            Err(Error::Row { row, .. }) => assert_eq!(row, 0),
            other => panic!("expected row error, got {other:?}"),
        }
    }

    #[test]
    fn linspace_hits_minus_one() {
        let spec = SweepSpec::new(Family::Cat, Varying::AReal, (-3.0, 3.0, 601), StateParams::default());
        assert_eq!(spec.values()[200], -1.0);
    }

    #[test]
    fn table_rejects_ragged_or_unsorted() {
        assert!(ScanTable::new("x", vec![0.0, 0.0], vec![]).is_err());
        assert!(ScanTable::new("x", vec![0.0, 1.0], vec![Column { name: "y".into(), values: vec![1.0] }]).is_err());
    }

    #[test]
    fn csv_layout() {
        let t = ScanTable::new("x", vec![0.5, 1.0], vec![Column { name: "y".into(), values: vec![f64::INFINITY, 2.0] }])
            .unwrap()
            .with_provenance("family", "test");
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# family=test");
        assert_eq!(lines[1], "x,y");
        assert_eq!(lines[2], "5.0000000000000000e-1,inf");
    }

    #[test]
    fn golden_section_on_parabola() {
        let (x, fx) = golden_section_min(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-9);
        // Flatness near the minimum limits resolution to ~sqrt(eps).
        assert!((x - 0.3).abs() < 1e-7 && (fx - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_point_delta0() {
        let est = estimate_delta0(&[1.0], &[0.0]).unwrap();
        let direct = coherent_max_variance(Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(est.value, direct);
        assert!((direct - 0.50064).abs() < 2e-4);
        assert!(estimate_delta0(&[], &[0.0]).is_err());
    }

    #[test]
    fn fock_sum_ur() {
        let t = sum_ur_scan(&[fock_state(0)], DEFAULT_DELTA0_SQ).unwrap();
        assert!((t.column("var_sum").unwrap()[0] - PI * PI / 3.0).abs() < 1e-12);
        assert_eq!(t.column("violated").unwrap()[0], 0.0);
    }
}
