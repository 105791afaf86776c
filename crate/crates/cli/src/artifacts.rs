//! Output files of a run. Every artifact carries its field and variable names,
//! so it can be reloaded; emission is canonical, so emit → load → emit is
//! byte-identical.

use std::fs;
use std::io;
use std::path::Path;

use dgmf_core::bundle::{field_from_characteristic, matrix_strings, parse_matrix, BundleError, FieldSpec};
use dgmf_core::factorization::{MatrixFactorization, MfVariant, PeriodicResolution, ResolutionVariant};
use dgmf_core::report::{Check, Report};
use dgmf_core::ring::{format_poly, parse_poly, PolyMatrix, Ring};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEntry {
    pub shape: [usize; 2],
    pub rows: Vec<Vec<String>>,
}

impl MatrixEntry {
    pub fn new(m: &PolyMatrix, vars: &[String]) -> Self {
        MatrixEntry { shape: [m.rows(), m.cols()], rows: matrix_strings(m, vars) }
    }

    pub fn load(&self, vars: &[String], ring: Ring, name: &str) -> Result<PolyMatrix, BundleError> {
        parse_matrix(&self.rows, (self.shape[0], self.shape[1]), vars, ring, name)
    }

    fn canonical(&self, vars: &[String], ring: Ring, name: &str) -> Result<Self, BundleError> {
        Ok(Self::new(&self.load(vars, ring, name)?, vars))
    }
}

/// X and X† : M₁ → M₂ and M₂ → M₃.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XFile {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub x: MatrixEntry,
    pub x_dagger: MatrixEntry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MfFile {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    /// "full" or "reduced".
    pub variant: String,
    pub f: String,
    pub rank: usize,
    pub even_layout: Vec<(String, usize)>,
    pub odd_layout: Vec<(String, usize)>,
    pub g_even: MatrixEntry,
    pub g_odd: MatrixEntry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionFile {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    /// "N" or "acute".
    pub variant: String,
    pub f: String,
    /// Ranks F₀, F₁, … up to the checked length.
    pub ranks: Vec<usize>,
    /// The non-periodic head, first differential first.
    pub head: Vec<MatrixEntry>,
    /// The periodic pair (odd, even) reduced mod f.
    pub odd: MatrixEntry,
    pub even: MatrixEntry,
}

fn ring_of(field: &FieldSpec, vars: &[String]) -> Result<Ring, BundleError> {
    Ok(Ring::new(field_from_characteristic(field.characteristic)?, vars.len()))
}

fn field_spec(ring: Ring) -> FieldSpec {
    FieldSpec { characteristic: ring.field.characteristic() }
}

fn canonical_poly(text: &str, vars: &[String], ring: Ring, name: &str) -> Result<String, BundleError> {
    let p = parse_poly(text, vars, ring.field).map_err(|source| BundleError::Poly { context: name.into(), source })?;
    Ok(format_poly(&p, vars))
}

impl XFile {
    pub fn new(x: &PolyMatrix, x_dagger: &PolyMatrix, vars: &[String]) -> Self {
        XFile {
            field: field_spec(x.ring()),
            vars: vars.to_vec(),
            x: MatrixEntry::new(x, vars),
            x_dagger: MatrixEntry::new(x_dagger, vars),
        }
    }

    /// Reparses every polynomial and re-emits it.
    pub fn canonical(&self) -> Result<Self, BundleError> {
        let ring = ring_of(&self.field, &self.vars)?;
        Ok(XFile {
            x: self.x.canonical(&self.vars, ring, "x")?,
            x_dagger: self.x_dagger.canonical(&self.vars, ring, "x_dagger")?,
            ..self.clone()
        })
    }
}

pub fn mf_variant_name(v: MfVariant) -> &'static str {
    match v {
        MfVariant::Full => "full",
        MfVariant::Reduced => "reduced",
    }
}

pub fn resolution_variant_name(v: ResolutionVariant) -> &'static str {
    match v {
        ResolutionVariant::N => "N",
        ResolutionVariant::Acute => "acute",
    }
}

impl MfFile {
    pub fn new(mf: &MatrixFactorization, vars: &[String]) -> Self {
        MfFile {
            field: field_spec(mf.f.ring()),
            vars: vars.to_vec(),
            variant: mf_variant_name(mf.variant).into(),
            f: format_poly(&mf.f, vars),
            rank: mf.rank(),
            even_layout: mf.even_layout.clone(),
            odd_layout: mf.odd_layout.clone(),
            g_even: MatrixEntry::new(&mf.g_even, vars),
            g_odd: MatrixEntry::new(&mf.g_odd, vars),
        }
    }

    pub fn canonical(&self) -> Result<Self, BundleError> {
        let ring = ring_of(&self.field, &self.vars)?;
        Ok(MfFile {
            f: canonical_poly(&self.f, &self.vars, ring, "f")?,
            g_even: self.g_even.canonical(&self.vars, ring, "g_even")?,
            g_odd: self.g_odd.canonical(&self.vars, ring, "g_odd")?,
            ..self.clone()
        })
    }
}

impl ResolutionFile {
    pub fn new(res: &PeriodicResolution, upto: usize, vars: &[String]) -> Self {
        ResolutionFile {
            field: field_spec(res.f.ring()),
            vars: vars.to_vec(),
            variant: resolution_variant_name(res.variant).into(),
            f: format_poly(&res.f, vars),
            ranks: res.ranks(upto),
            head: res.head.iter().map(|m| MatrixEntry::new(m, vars)).collect(),
            odd: MatrixEntry::new(&res.odd, vars),
            even: MatrixEntry::new(&res.even, vars),
        }
    }

    pub fn canonical(&self) -> Result<Self, BundleError> {
        let ring = ring_of(&self.field, &self.vars)?;
        let head = self
            .head
            .iter()
            .enumerate()
            .map(|(i, m)| m.canonical(&self.vars, ring, &format!("head[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ResolutionFile {
            f: canonical_poly(&self.f, &self.vars, ring, "f")?,
            head,
            odd: self.odd.canonical(&self.vars, ring, "odd")?,
            even: self.even.canonical(&self.vars, ring, "even")?,
            ..self.clone()
        })
    }
}

/// One stage of a run and the checks it recorded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl StageReport {
    pub fn from_report(name: &str, r: Report) -> Self {
        StageReport { name: name.into(), passed: r.passed(), checks: r.checks, notes: r.notes }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub input: String,
    pub exit_code: i32,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_stage: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub stages: Vec<StageReport>,
    pub artifacts: Vec<String>,
}

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, dir.join(name))
}
