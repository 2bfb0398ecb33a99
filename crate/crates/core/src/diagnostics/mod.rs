//! Per-snapshot diagnostics: modulated energy against a reference interface,
//! coercivity, projection identities, the curvature identity, interface
//! tracking, the minimal-pair defect and weak residuals of the limit flow.

mod energy;
mod track;
mod weak;

pub use energy::{energy_terms, psi_field, EnergyTerms};
pub use track::{extract_interface, hausdorff, minimal_pair_defect, sample_bilinear, MinimalPairDefect};
pub use weak::{curvature_identity_defect, weak_integrand, TestFunction, WeakResidualAccumulator};

use thiserror::Error;

use crate::interface::{InterfaceError, SphereInterface};
use crate::matgeo::{MatError, QuasiDistParams};
use crate::solver::Snapshot;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Interface(InterfaceError),
    #[error("no interface points to compare")]
    EmptyInterface,
    #[error("snapshot has no lead field for time differences")]
    MissingLead,
    #[error("minimal-pair probe: {0}")]
    Probe(String),
    #[error("grid: {0}")]
    Grid(String),
}

#[derive(Clone, Debug)]
pub struct DiagnosticsConfig {
    pub params: QuasiDistParams,
    pub probe_delta: f64,
    pub probe_samples: usize,
    pub hausdorff_samples: usize,
}

impl DiagnosticsConfig {
    pub fn new(params: QuasiDistParams, probe_delta: f64) -> Self {
        DiagnosticsConfig { params, probe_delta, probe_samples: 256, hausdorff_samples: 1024 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyReport {
    pub t: f64,
    pub terms: EnergyTerms,
    pub modulated_energy: f64,
    pub coerc1_ratio: f64,
    pub coerc2_ratio: f64,
    pub curvature_defect: Option<f64>,
    /// `None` when the level set is empty.
    pub hausdorff: Option<f64>,
    pub interface_points: usize,
    pub minimal_pair: MinimalPairDefect,
    pub weak_residuals: Vec<f64>,
    /// Degenerate distance gradients in the cell pass plus skipped probes.
    pub degeneracies: u64,
    pub max_sv: f64,
}

impl EnergyReport {
    pub fn csv_header(k: usize) -> String {
        let mut h = String::from(
            "t,E_mod,dirichlet,potential,coupling,coerc1_ratio,coerc2_ratio,orth_defect,curv_defect,hausdorff,minpair_defect",
        );
        for i in 1..=k {
            h.push_str(&format!(",weak_res_{i}"));
        }
        h.push_str(",degeneracies,max_sv");
        h
    }

    pub fn csv_row(&self) -> String {
        let num = |v: f64| format!("{v:.16e}");
        let opt = |v: Option<f64>| v.map_or_else(|| "nan".to_string(), num);
        let mut cells = vec![
            num(self.t),
            num(self.modulated_energy),
            num(self.terms.dirichlet),
            num(self.terms.potential),
            num(self.terms.coupling),
            num(self.coerc1_ratio),
            num(self.coerc2_ratio),
            num(self.terms.orthogonality_defect()),
            opt(self.curvature_defect),
            opt(self.hausdorff),
            num(self.minimal_pair.defect),
        ];
        cells.extend(self.weak_residuals.iter().map(|&v| num(v)));
        cells.push(self.degeneracies.to_string());
        cells.push(num(self.max_sv));
        cells.join(",")
    }

    /// Scale used by the discrete nonnegativity and coercivity checks.
    pub fn scale(&self) -> f64 {
        1.0 + self.terms.dirichlet + self.terms.potential
    }
}

/// Evaluates every diagnostic on one snapshot. Snapshots must be pushed in
/// time order since `weak` accumulates the time integrals.
pub fn report_snapshot(
    snap: &Snapshot,
    g: &SphereInterface,
    cfg: &DiagnosticsConfig,
    weak: &mut WeakResidualAccumulator,
) -> Result<EnergyReport, DiagnosticsError> {
    let f = &snap.field;
    let t = f.t;
    let psi = psi_field(f, &cfg.params)?;
    let terms = energy_terms(f, &psi, g, &cfg.params)?;
    let e = terms.modulated_energy();
    let pts = extract_interface(&f.grid, &psi);
    let hd =
        if pts.is_empty() { None } else { Some(hausdorff(&pts, g, t, f.grid.half_side(), cfg.hausdorff_samples)?) };
    let mp = minimal_pair_defect(f, g, t, cfg.probe_delta, cfg.probe_samples)?;
    let curvature_defect = match snap.lead {
        Some(_) => Some(curvature_identity_defect(snap, cfg.params.eps)?),
        None => None,
    };
    let weak_residuals = if snap.lead.is_some() { weak.push(snap)? } else { weak.residuals() };
    Ok(EnergyReport {
        t,
        terms,
        modulated_energy: e,
        coerc1_ratio: terms.coercivity_lhs1 / e,
        coerc2_ratio: terms.coercivity_lhs2 / e,
        curvature_defect,
        hausdorff: hd,
        interface_points: pts.len(),
        minimal_pair: mp,
        weak_residuals,
        degeneracies: terms.degeneracies + mp.skipped as u64,
        max_sv: f.max_singular_value(),
    })
}
