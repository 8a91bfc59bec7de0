//! On-disk JSON formats: quiver descriptions, representations, bound
//! modules, counting records, and paving reports.  The quiver description is
//! the single input format shared by every subcommand.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use qp_core::extended::{BoundModule, ExtArrowKind, ExtQuiver};
use qp_core::field::{rat, Fp, Rationals};
use qp_core::matrix::Matrix;
use qp_core::quiver::{DimVec, Quiver};
use qp_core::rep::Rep;

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct QuiverFile {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowFile>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ArrowFile {
    pub id: String,
    pub from: String,
    pub to: String,
}

pub fn quiver_from_file(path: &str) -> Result<Quiver> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading quiver file `{path}`"))?;
    let parsed: QuiverFile = serde_json::from_str(&text).with_context(|| format!("parsing quiver file `{path}`"))?;
    let arrows = parsed.arrows.into_iter().map(|a| (a.id, a.from, a.to)).collect();
    Quiver::new(parsed.vertices, arrows).map_err(|e| anyhow!("invalid quiver in `{path}`: {e}"))
}

pub fn quiver_to_json(q: &Quiver) -> QuiverFile {
    QuiverFile {
        vertices: q.vertex_names().to_vec(),
        arrows: q
            .arrows()
            .iter()
            .map(|a| ArrowFile {
                id: a.name.clone(),
                from: q.vertex_name(a.from).to_string(),
                to: q.vertex_name(a.to).to_string(),
            })
            .collect(),
    }
}

/// A representation on disk: dimension per vertex, an integer matrix per
/// arrow (rows = dim target, cols = dim source), and an optional modulus.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct RepFile {
    pub dims: BTreeMap<String, usize>,
    pub matrices: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
}

pub fn rep_from_file(q: &Quiver, path: &str) -> Result<(Rep<Rationals>, Option<u64>)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading representation file `{path}`"))?;
    let parsed: RepFile = serde_json::from_str(&text).with_context(|| format!("parsing representation file `{path}`"))?;
    let mut dims = vec![0usize; q.n_vertices()];
    for (name, d) in &parsed.dims {
        let v = q
            .vertex_index(name)
            .ok_or_else(|| anyhow!("unknown vertex `{name}` in `{path}`"))?;
        dims[v] = *d;
    }
    let mut mats = Vec::new();
    for a in q.arrows() {
        let rows = parsed
            .matrices
            .get(&a.name)
            .ok_or_else(|| anyhow!("missing matrix for arrow `{}` in `{path}`", a.name))?;
        let (r, c) = (dims[a.to], dims[a.from]);
        if rows.len() != r || rows.iter().any(|row| row.len() != c) {
            bail!(
                "matrix for arrow `{}` must be {r}x{c} in `{path}`",
                a.name
            );
        }
        mats.push(Matrix::from_rows(
            Rationals,
            rows.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect(),
        ));
    }
    let rep = Rep::new(q, Rationals, dims, mats).map_err(|e| anyhow!("invalid representation in `{path}`: {e}"))?;
    Ok((rep, parsed.modulus))
}

pub fn rep_to_json(q: &Quiver, m: &Rep<Rationals>) -> Result<RepFile> {
    let mut dims = BTreeMap::new();
    for (v, &d) in m.dims.iter().enumerate() {
        dims.insert(q.vertex_name(v).to_string(), d);
    }
    let mut matrices = BTreeMap::new();
    for (k, a) in q.arrows().iter().enumerate() {
        let mat = &m.mats[k];
        let mut rows = Vec::with_capacity(mat.rows());
        for i in 0..mat.rows() {
            let mut row = Vec::with_capacity(mat.cols());
            for j in 0..mat.cols() {
                let x = mat.at(i, j);
                if !x.is_integer() {
                    bail!("matrix entry {x} is not an integer; export after clearing denominators");
                }
                row.push(
                    i64::try_from(&x.to_integer()).map_err(|_| anyhow!("matrix entry out of i64 range"))?,
                );
            }
            rows.push(row);
        }
        matrices.insert(a.name.clone(), rows);
    }
    Ok(RepFile { dims, matrices, modulus: None })
}

/// Bound-module format: the representation format keyed by `vertex@level`
/// pairs, with arrows keyed `v:<vertex>@<level>` (vertical from that level)
/// and `l:<arrow>@<level>` (the level copy of a base arrow).
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct BoundModuleFile {
    pub d: usize,
    pub strict: bool,
    pub dims: BTreeMap<String, usize>,
    pub matrices: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
}

pub fn ext_vertex_key(q: &Quiver, eq: &ExtQuiver, v: usize) -> String {
    let (i, r) = eq.vertex_pair(v);
    format!("{}@{}", q.vertex_name(i), r)
}

pub fn ext_arrow_key(q: &Quiver, a: &qp_core::extended::ExtArrow) -> String {
    match a.kind {
        ExtArrowKind::Vertical { vertex, level } => format!("v:{}@{}", q.vertex_name(vertex), level),
        ExtArrowKind::Level { arrow, level } => format!("l:{}@{}", q.arrows()[arrow].name, level),
    }
}

pub fn bound_to_json(q: &Quiver, eq: &ExtQuiver, t: &BoundModule<Rationals>) -> Result<BoundModuleFile> {
    let mut dims = BTreeMap::new();
    for (v, &d) in t.dims.iter().enumerate() {
        dims.insert(ext_vertex_key(q, eq, v), d);
    }
    let mut matrices = BTreeMap::new();
    for (k, a) in eq.arrows.iter().enumerate() {
        let mat = &t.mats[k];
        let mut rows = Vec::with_capacity(mat.rows());
        for i in 0..mat.rows() {
            let mut row = Vec::with_capacity(mat.cols());
            for j in 0..mat.cols() {
                let x = mat.at(i, j);
                if !x.is_integer() {
                    bail!("bound module entry {x} is not an integer");
                }
                row.push(i64::try_from(&x.to_integer()).map_err(|_| anyhow!("entry out of i64 range"))?);
            }
            rows.push(row);
        }
        matrices.insert(ext_arrow_key(q, a), rows);
    }
    Ok(BoundModuleFile { d: eq.d, strict: eq.strict, dims, matrices, modulus: None })
}

pub fn bound_from_file(q: &Quiver, path: &str) -> Result<(ExtQuiver, BoundModule<Rationals>, Option<u64>)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading bound module `{path}`"))?;
    let parsed: BoundModuleFile = serde_json::from_str(&text).with_context(|| format!("parsing bound module `{path}`"))?;
    let eq = ExtQuiver::build(q, parsed.d, parsed.strict).map_err(|e| anyhow!("{e}"))?;
    let mut dims = vec![0usize; eq.n_vertices()];
    for v in 0..eq.n_vertices() {
        let key = ext_vertex_key(q, &eq, v);
        dims[v] = *parsed
            .dims
            .get(&key)
            .ok_or_else(|| anyhow!("missing dimension for extended vertex `{key}`"))?;
    }
    let mut mats = Vec::new();
    for a in &eq.arrows {
        let key = ext_arrow_key(q, a);
        let rows = parsed
            .matrices
            .get(&key)
            .ok_or_else(|| anyhow!("missing matrix for extended arrow `{key}`"))?;
        let (r, c) = (dims[a.dst], dims[a.src]);
        if rows.len() != r || rows.iter().any(|row| row.len() != c) {
            bail!("matrix for `{key}` must be {r}x{c}");
        }
        mats.push(Matrix::from_rows(
            Rationals,
            rows.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect(),
        ));
    }
    let t = BoundModule::new(&eq, Rationals, dims, mats).map_err(|e| anyhow!("{e}"))?;
    Ok((eq, t, parsed.modulus))
}

/// One brute-force counting result; emitted as JSON lines.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CountingRecord {
    pub quiver: String,
    pub rep: String,
    pub d: usize,
    pub strict: bool,
    pub f: DimVec,
    pub p: u64,
    pub count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<i64>>,
}

/// Paving report: per dimension vector, the cell multiset, verification
/// against brute-force counts, and the recursion diagnostics on failure.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PavingReport {
    pub quiver: String,
    pub rep: String,
    pub d: usize,
    pub strict: bool,
    pub results: Vec<PavingEntry>,
    /// "ok" | "mismatch" | "unresolved"
    pub status: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PavingEntry {
    pub f: DimVec,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells: Option<BTreeMap<u32, u64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verification: Vec<VerificationLine>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct VerificationLine {
    pub p: u64,
    pub paving: u128,
    pub brute: u64,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Parses `1,2,3` into a dimension vector.
pub fn parse_dimvec(s: &str, expected_len: usize) -> Result<DimVec> {
    let v: Result<DimVec> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| anyhow!("bad dimension `{x}`: {e}")))
        .collect();
    let v = v?;
    if v.len() != expected_len {
        bail!("dimension vector has {} entries, expected {expected_len}", v.len());
    }
    Ok(v)
}

/// Reduces a rational representation mod `p`, insisting on the prime-safety
/// guard (End dimension preserved).
pub fn reduce_guarded(q: &Quiver, m: &Rep<Rationals>, p: u64) -> Result<(Fp, Rep<Fp>)> {
    let fp = Fp::new(p).ok_or_else(|| anyhow!("{p} is not prime"))?;
    if !qp_core::rep::prime_is_safe(q, m, fp) {
        bail!("prime {p} fails the safety guard for this representation (try another prime)");
    }
    let mp = qp_core::rep::reduce_rep(m, fp).expect("guard implies reducibility");
    Ok((fp, mp))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quiver_roundtrip() {
        let q = Quiver::from_arrows(3, &[(1, 2), (3, 2)]);
        let json = serde_json::to_string(&quiver_to_json(&q)).unwrap();
        let parsed: QuiverFile = serde_json::from_str(&json).unwrap();
        let q2 = Quiver::new(
            parsed.vertices,
            parsed.arrows.into_iter().map(|a| (a.id, a.from, a.to)).collect(),
        )
        .unwrap();
        assert_eq!(q, q2);
    }

    #[test]
    fn dimvec_parsing() {
        assert_eq!(parse_dimvec("1, 2,3", 3).unwrap(), vec![1, 2, 3]);
        assert!(parse_dimvec("1,2", 3).is_err());
        assert!(parse_dimvec("1,x", 2).is_err());
    }
}
