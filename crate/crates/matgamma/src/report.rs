//! JSON and text reports of a run.

use matgamma_core::driver::{GammaResult, Method, Timings};
use matgamma_core::{CMat, IntervalMatrix, RMat, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, ExitStatus};
use crate::hexfloat;

/// Per-phase wall time in seconds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimes {
    pub vbd: f64,
    pub guard: f64,
    pub blocks: f64,
    pub reassembly: f64,
}

impl From<Timings> for PhaseTimes {
    fn from(t: Timings) -> Self {
        PhaseTimes { vbd: t.vbd, guard: t.guard, blocks: t.blocks, reassembly: t.reassembly }
    }
}

/// Outcome of one run. `mid` and `rad` hold hexadecimal float strings so a
/// report can be read back bit for bit; `*_decimal` mirror them for people.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub n: usize,
    /// Method that was requested, or that produced the enclosure.
    pub method: String,
    pub status: String,
    pub exit_code: i32,
    pub spectrum_verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rr: Option<f64>,
    pub timings: PhaseTimes,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub block_dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mid: Vec<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rad: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mid_decimal: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rad_decimal: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_contained: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::Spectral => "spectral",
        Method::Jordan => "jordan",
        Method::Auto => "auto",
    }
}

impl Report {
    pub fn success(n: usize, result: &GammaResult) -> Self {
        let e = &result.enclosure;
        let (mid, rad) = (e.mid(), e.rad());
        let rows = 0..mid.nrows();
        let cols = || 0..mid.ncols();
        Report {
            n,
            method: method_name(result.method).into(),
            status: ExitStatus::Success.name().into(),
            exit_code: ExitStatus::Success.code(),
            spectrum_verified: result.spectrum_verified,
            rr: Some(result.rr),
            timings: result.timings.into(),
            block_dims: result.block_dims.clone(),
            mid: rows
                .clone()
                .map(|i| cols().map(|j| [hexfloat::format(mid[(i, j)].re), hexfloat::format(mid[(i, j)].im)]).collect())
                .collect(),
            rad: rows.clone().map(|i| cols().map(|j| hexfloat::format(rad[(i, j)])).collect()).collect(),
            mid_decimal: rows.clone().map(|i| cols().map(|j| [mid[(i, j)].re, mid[(i, j)].im]).collect()).collect(),
            rad_decimal: rows.map(|i| cols().map(|j| rad[(i, j)]).collect()).collect(),
            oracle_contained: None,
            error: None,
        }
    }

    pub fn failure(n: usize, method: Method, status: ExitStatus, message: String) -> Self {
        Report {
            n,
            method: method_name(method).into(),
            status: status.name().into(),
            exit_code: status.code(),
            spectrum_verified: false,
            rr: None,
            timings: PhaseTimes::default(),
            block_dims: Vec::new(),
            mid: Vec::new(),
            rad: Vec::new(),
            mid_decimal: Vec::new(),
            rad_decimal: Vec::new(),
            oracle_contained: None,
            error: Some(message),
        }
    }

    /// Rebuilds the enclosure from the hexadecimal fields, if present.
    pub fn enclosure(&self) -> Result<Option<IntervalMatrix>, CliError> {
        if self.mid.is_empty() {
            return Ok(None);
        }
        let n = self.mid.len();
        let bad = |m: &str| CliError::Parse { line: 0, message: m.into() };
        if self.rad.len() != n || self.mid.iter().any(|r| r.len() != n) || self.rad.iter().any(|r| r.len() != n) {
            return Err(bad("report matrices are not square"));
        }
        let hex = |s: &str| hexfloat::parse(s).ok_or_else(|| bad("bad hexadecimal float in report"));
        let mut mid = CMat::zeros(n, n);
        let mut rad = RMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let [re, im] = &self.mid[i][j];
                mid[(i, j)] = C64::new(hex(re)?, hex(im)?);
                rad[(i, j)] = hex(&self.rad[i][j])?;
            }
        }
        Ok(Some(IntervalMatrix::new(mid, rad)?))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Short human-readable summary.
    pub fn to_text(&self) -> String {
        let mut out = format!("status: {}\nmethod: {}\nn: {}\n", self.status, self.method, self.n);
        out.push_str(&format!("spectrum_verified: {}\n", self.spectrum_verified));
        if let Some(rr) = self.rr {
            out.push_str(&format!("rr: {rr:.3e}\n"));
        }
        if !self.block_dims.is_empty() {
            let dims: Vec<String> = self.block_dims.iter().map(usize::to_string).collect();
            out.push_str(&format!("blocks: {}\n", dims.join(",")));
        }
        let t = &self.timings;
        out.push_str(&format!(
            "time: vbd {:.3e} s, guard {:.3e} s, blocks {:.3e} s, reassembly {:.3e} s\n",
            t.vbd, t.guard, t.blocks, t.reassembly
        ));
        if let Some(c) = self.oracle_contained {
            out.push_str(&format!("oracle_contained: {c}\n"));
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
        }
        for (i, row) in self.mid_decimal.iter().enumerate() {
            let cells: Vec<String> = row
                .iter()
                .zip(&self.rad_decimal[i])
                .map(|([re, im], r)| format!("<{re:.16e}{im:+.16e}i, {r:.2e}>"))
                .collect();
            out.push_str(&cells.join("  "));
            out.push('\n');
        }
        out
    }
}

/// Whether `enclosure` contains the reference matrix `oracle`, where every
/// oracle component is only trusted to within two units in the last place.
pub fn oracle_contained(enclosure: &IntervalMatrix, oracle: &CMat) -> bool {
    if oracle.shape() != enclosure.shape() {
        return false;
    }
    let ulp = |x: f64| x.abs().next_up() - x.abs();
    let rad = RMat::from_fn(oracle.nrows(), oracle.ncols(), |i, j| {
        let z = oracle[(i, j)];
        2.0 * (ulp(z.re) + ulp(z.im))
    });
    match IntervalMatrix::new(oracle.clone(), rad) {
        Ok(o) => enclosure.contains(&o),
        Err(_) => false,
    }
}
