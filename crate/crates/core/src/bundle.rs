//! JSON bundle files: polynomials as grammar strings, matrices as row-major
//! arrays of strings, products keyed "i,j:s,t". Emission is canonical, so
//! emit → load → emit is byte-identical.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexes::FreeComplex;
use crate::dga::{DgaBundle, DgaError, Split};
use crate::linkage::{LinkageInput, LinkageOptions};
use crate::ring::{format_poly, parse_poly, Field, Poly, PolyMatrix, Ring, RingError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BundleError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{context}: {source}")]
    Poly { context: String, source: RingError },
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Dga(#[from] DgaError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    /// A prime, or 0 for the rationals.
    pub characteristic: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSpec {
    pub m11: Vec<usize>,
    pub m12: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MBlock {
    pub ranks: Vec<usize>,
    /// m₁ … m₄, each row-major.
    pub differentials: Vec<Vec<Vec<String>>>,
    /// "i,j:s,t" → coordinates of b_s · b_t in M_{i+j}; absent columns are
    /// zero and the unit tables are implicit. `None` for differentials only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<BTreeMap<String, Vec<String>>>,
    /// [b_t^(2)] coordinates for the M₂ basis; derived as (b·b)/2 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sq2: Option<Vec<String>>,
    pub orientation: String,
    pub split: SplitSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    #[serde(default = "yes")]
    pub check_regular: bool,
}

fn yes() -> bool {
    true
}

impl Default for OptionsSpec {
    fn default() -> Self {
        OptionsSpec { check_regular: true }
    }
}

/// The on-disk form of a linked pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub a: Vec<String>,
    pub f: String,
    pub m: MBlock,
    #[serde(default)]
    pub options: OptionsSpec,
}

/// A parsed bundle; `m` is `None` when only differentials were given.
#[derive(Clone, Debug)]
pub struct LoadedBundle {
    pub vars: Vec<String>,
    pub ring: Ring,
    pub a: Vec<Poly>,
    pub f: Poly,
    pub complex: FreeComplex,
    pub orientation: Poly,
    pub split: Split,
    pub m: Option<DgaBundle>,
    pub options: LinkageOptions,
}

impl LoadedBundle {
    /// Pipeline input; requires the multiplication.
    pub fn input(&self) -> Option<LinkageInput> {
        self.m.as_ref().map(|m| LinkageInput {
            a: self.a.clone(),
            f: self.f.clone(),
            m: m.clone(),
            options: self.options.clone(),
        })
    }
}

pub fn field_from_characteristic(p: u64) -> Result<Field, BundleError> {
    if p == 0 {
        Ok(Field::Rational)
    } else {
        Field::from_characteristic(p).map_err(|source| BundleError::Poly { context: "field".into(), source })
    }
}

fn characteristic(field: Field) -> u64 {
    match field {
        Field::Prime(p) => p,
        Field::Rational => 0,
    }
}

fn parse(text: &str, vars: &[String], field: Field, context: impl Fn() -> String) -> Result<Poly, BundleError> {
    parse_poly(text, vars, field).map_err(|source| BundleError::Poly { context: context(), source })
}

/// Parses a row-major string matrix of the given shape.
pub fn parse_matrix(
    rows: &[Vec<String>],
    shape: (usize, usize),
    vars: &[String],
    ring: Ring,
    name: &str,
) -> Result<PolyMatrix, BundleError> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(BundleError::Schema(format!("{name} must be {}×{}", shape.0, shape.1)));
    }
    let mut m = PolyMatrix::zero(ring, shape.0, shape.1);
    for (i, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            m.set(i, j, parse(s, vars, ring.field, || format!("{name}[{i}][{j}]"))?);
        }
    }
    Ok(m)
}

fn parse_key(key: &str) -> Option<(usize, usize, usize, usize)> {
    let (deg, idx) = key.split_once(':')?;
    let (i, j) = deg.split_once(',')?;
    let (s, t) = idx.split_once(',')?;
    Some((i.trim().parse().ok()?, j.trim().parse().ok()?, s.trim().parse().ok()?, t.trim().parse().ok()?))
}

pub fn parse_bundle(text: &str) -> Result<BundleFile, BundleError> {
    serde_json::from_str(text).map_err(|e| BundleError::Json(e.to_string()))
}

/// Parses and shape-checks a bundle file.
pub fn load_bundle(file: &BundleFile) -> Result<LoadedBundle, BundleError> {
    let field = field_from_characteristic(file.field.characteristic)?;
    let vars = &file.vars;
    let ring = Ring::new(field, vars.len());
    let a = file
        .a
        .iter()
        .enumerate()
        .map(|(i, s)| parse(s, vars, field, || format!("a[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let f = parse(&file.f, vars, field, || "f".into())?;
    let mb = &file.m;
    if mb.ranks.len() != 5 {
        return Err(BundleError::Schema(format!("expected 5 ranks, got {}", mb.ranks.len())));
    }
    if mb.differentials.len() != 4 {
        return Err(BundleError::Schema(format!("expected 4 differentials, got {}", mb.differentials.len())));
    }
    let rk = &mb.ranks;
    let diffs = (1..=4)
        .map(|i| parse_matrix(&mb.differentials[i - 1], (rk[i - 1], rk[i]), vars, ring, &format!("m{i}")))
        .collect::<Result<Vec<_>, _>>()?;
    let complex = FreeComplex::new(ring, rk.clone(), diffs).map_err(|e| BundleError::Schema(e.to_string()))?;
    let orientation = parse(&mb.orientation, vars, field, || "orientation".into())?;
    let split = Split { m11: mb.split.m11.clone(), m12: mb.split.m12.clone() };
    let m = match &mb.mult {
        None => None,
        Some(entries) => {
            let mut tables: Vec<Vec<Option<PolyMatrix>>> = vec![vec![None; 5]; 5];
            for i in 1..=3 {
                for j in 1..=4 - i {
                    tables[i][j] = Some(PolyMatrix::zero(ring, rk[i + j], rk[i] * rk[j]));
                }
            }
            for (key, col) in entries {
                let (i, j, s, t) = parse_key(key).ok_or_else(|| BundleError::Schema(format!("bad product key `{key}`")))?;
                if i == 0 || j == 0 || i + j > 4 || s >= rk[i] || t >= rk[j] {
                    return Err(BundleError::Schema(format!("product key `{key}` out of range")));
                }
                if col.len() != rk[i + j] {
                    return Err(BundleError::Schema(format!("product `{key}` needs {} coordinates", rk[i + j])));
                }
                let table = tables[i][j].as_mut().expect("allocated");
                for (r, e) in col.iter().enumerate() {
                    table.set(r, s * rk[j] + t, parse(e, vars, field, || format!("product {key}[{r}]"))?);
                }
            }
            let sq2 = match &mb.sq2 {
                None => None,
                Some(v) => {
                    if v.len() != rk[2] {
                        return Err(BundleError::Schema(format!("sq2 needs {} entries", rk[2])));
                    }
                    let row = v
                        .iter()
                        .enumerate()
                        .map(|(t, s)| parse(s, vars, field, || format!("sq2[{t}]")))
                        .collect::<Result<Vec<_>, _>>()?;
                    Some(PolyMatrix::from_rows(ring, vec![row]))
                }
            };
            Some(DgaBundle::new(complex.clone(), tables, sq2, orientation.clone(), split.clone())?)
        }
    };
    Ok(LoadedBundle {
        vars: vars.clone(),
        ring,
        a,
        f,
        complex,
        orientation,
        split,
        m,
        options: LinkageOptions { check_regular: file.options.check_regular },
    })
}

pub fn read_bundle(text: &str) -> Result<LoadedBundle, BundleError> {
    load_bundle(&parse_bundle(text)?)
}

pub fn matrix_strings(m: &PolyMatrix, vars: &[String]) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|p| format_poly(p, vars)).collect()).collect()
}

/// Canonical file form of a bundle. Products are emitted for every nonzero
/// column with i, j ≥ 1; divided squares are always emitted.
pub fn bundle_file(vars: &[String], a: &[Poly], f: &Poly, m: &DgaBundle, options: &LinkageOptions) -> BundleFile {
    let fmt = |p: &Poly| format_poly(p, vars);
    let mut mult = BTreeMap::new();
    for i in 1..=3 {
        for j in 1..=4 - i {
            for s in 0..m.rank(i) {
                for t in 0..m.rank(j) {
                    let col = m.basis_product(i, s, j, t);
                    if col.iter().any(|p| !p.is_zero()) {
                        mult.insert(format!("{i},{j}:{s},{t}"), col.iter().map(fmt).collect());
                    }
                }
            }
        }
    }
    BundleFile {
        field: FieldSpec { characteristic: characteristic(m.ring().field) },
        vars: vars.to_vec(),
        a: a.iter().map(fmt).collect(),
        f: fmt(f),
        m: MBlock {
            ranks: m.complex.ranks().to_vec(),
            differentials: (1..=4).map(|i| matrix_strings(&m.d(i), vars)).collect(),
            mult: Some(mult),
            sq2: Some(m.sq2.row(0).iter().map(fmt).collect()),
            orientation: fmt(&m.orientation),
            split: SplitSpec { m11: m.split.m11.clone(), m12: m.split.m12.clone() },
        },
        options: OptionsSpec { check_regular: options.check_regular },
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{e1, e2};

    #[test]
    fn round_trip_is_byte_identical() {
        for ex in [e1(), e2()] {
            let file = bundle_file(&ex.vars, &ex.a, &ex.f, &ex.m, &LinkageOptions::default());
            let text = to_json(&file);
            let loaded = read_bundle(&text).unwrap();
            let m = loaded.m.as_ref().unwrap();
            assert_eq!(m, &ex.m);
            let again = to_json(&bundle_file(&loaded.vars, &loaded.a, &loaded.f, m, &loaded.options));
            assert_eq!(text, again);
        }
    }

    #[test]
    fn schema_errors() {
        let ex = e1();
        let mut file = bundle_file(&ex.vars, &ex.a, &ex.f, &ex.m, &LinkageOptions::default());
        file.m.differentials[1].pop();
        assert!(matches!(load_bundle(&file), Err(BundleError::Schema(_))));
        assert!(matches!(read_bundle("{\"field\":"), Err(BundleError::Json(_))));
        let mut file = bundle_file(&ex.vars, &ex.a, &ex.f, &ex.m, &LinkageOptions::default());
        file.f = "x +* y".into();
        assert!(matches!(load_bundle(&file), Err(BundleError::Poly { .. })));
    }
}
