//! JSON representation files: explicit generator matrices or a W-graph.
//!
//! ```json
//! {"label": "rho1", "dim": 2, "generators": {"s0": [["-eps[-1]", "0"], ["...", "eps[1]"]], "s1": [...]}}
//! {"label": "3s", "wgraph": {"vertices": [{"Iset": ["s0"]}, ...], "edges": [{"u": 0, "v": 1, "weight": "1"}]}}
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::MatrixRep;
use crate::error::{Error, Result};
use crate::hecke::HeckeAlgebra;
use crate::linalg::Matrix;
use crate::scalars::{FieldScalar, KScalar, LaurentPoly, RealCyclotomicField};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WGraphVertex {
    #[serde(rename = "Iset", alias = "iset")]
    pub iset: Vec<String>,
}

/// An edge of weight `μ`. Undirected edges set `μ(u,v) = μ(v,u)`; a
/// directed edge sets only `μ(v,u)`, the coefficient of `e_v` in `T_s e_u`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WGraphEdge {
    pub u: usize,
    pub v: usize,
    pub weight: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub directed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WGraph {
    pub vertices: Vec<WGraphVertex>,
    #[serde(default)]
    pub edges: Vec<WGraphEdge>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RepFile {
    #[serde(default)]
    label: Option<String>,
    #[serde(default)]
    dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<BTreeMap<String, Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    wgraph: Option<WGraph>,
}

fn generator_index(name: &str, rank: usize) -> Result<usize> {
    let t = name.trim();
    let t = t.strip_prefix('s').unwrap_or(t);
    match t.parse::<usize>() {
        Ok(i) if i < rank => Ok(i),
        _ => Err(Error::Parse(format!("unknown generator `{name}`"))),
    }
}

/// A polynomial in canonical text, or a bare element of `F`.
fn parse_poly(s: &str, rank: usize, field: &'static RealCyclotomicField) -> Result<LaurentPoly> {
    if s.contains("eps") {
        LaurentPoly::parse(s, Some(field))
    } else {
        Ok(LaurentPoly::constant(FieldScalar::parse(s, Some(field))?, rank))
    }
}

fn parse_entry(s: &str, rank: usize, field: &'static RealCyclotomicField) -> Result<KScalar> {
    if s.contains(")/(") {
        KScalar::parse(s, rank, Some(field))
    } else {
        Ok(KScalar::from_poly(parse_poly(s, rank, field)?, rank))
    }
}

/// Matrices of the standard W-graph rule: `T_s e_y = −v_s^{-1} e_y` if
/// `s ∈ I_y`, else `v_s e_y + Σ_{s ∈ I_x} μ(x,y) e_x`.
pub fn wgraph_rep(graph: &WGraph, label: &str, h: &HeckeAlgebra) -> Result<MatrixRep> {
    let n = graph.vertices.len();
    if n == 0 {
        return Err(Error::Input(format!("{label}: W-graph without vertices")));
    }
    let r = h.group().rank();
    let k = h.gamma_rank();
    let field = h.group().system().field();
    let isets: Vec<Vec<bool>> = graph
        .vertices
        .iter()
        .map(|v| {
            let mut m = vec![false; r];
            for s in &v.iset {
                m[generator_index(s, r)?] = true;
            }
            Ok(m)
        })
        .collect::<Result<_>>()?;
    let mut mu = vec![vec![LaurentPoly::zero(); n]; n];
    for e in &graph.edges {
        if e.u >= n || e.v >= n {
            return Err(Error::Input(format!("{label}: edge ({}, {}) out of range", e.u, e.v)));
        }
        let w = parse_poly(&e.weight, k, field)?;
        mu[e.v][e.u] = w.clone();
        if !e.directed {
            mu[e.u][e.v] = w;
        }
    }
    let gens = (0..r)
        .map(|s| {
            let v = h.v(s);
            Matrix::from_fn(n, n, |x, y| {
                let p = if isets[y][s] {
                    if x == y {
                        v.bar().neg()
                    } else {
                        LaurentPoly::zero()
                    }
                } else if x == y {
                    v.clone()
                } else if isets[x][s] {
                    mu[x][y].clone()
                } else {
                    LaurentPoly::zero()
                };
                KScalar::from_poly(p, k)
            })
        })
        .collect();
    MatrixRep::new(label, h, gens)
}

/// Parse and validate a representation file.
pub fn parse_rep(text: &str, h: &HeckeAlgebra) -> Result<MatrixRep> {
    let f: RepFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("representation file: {e}")))?;
    let label = f.label.unwrap_or_else(|| "rep".into());
    let rep = match (f.generators, f.wgraph) {
        (Some(gens), None) => {
            let r = h.group().rank();
            let k = h.gamma_rank();
            let field = h.group().system().field();
            let mut mats: Vec<Option<Matrix<KScalar>>> = vec![None; r];
            for (name, rows) in &gens {
                let s = generator_index(name, r)?;
                let parsed = rows
                    .iter()
                    .map(|row| row.iter().map(|x| parse_entry(x, k, field)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                if parsed.is_empty() || parsed.iter().any(|row| row.len() != parsed.len()) {
                    return Err(Error::Parse(format!("{label}: matrix for {name} is not square")));
                }
                mats[s] = Some(Matrix::from_rows(parsed));
            }
            let mats = mats
                .into_iter()
                .enumerate()
                .map(|(s, m)| m.ok_or_else(|| Error::Parse(format!("{label}: no matrix for s{s}"))))
                .collect::<Result<Vec<_>>>()?;
            MatrixRep::new(label, h, mats)?
        }
        (None, Some(g)) => wgraph_rep(&g, &label, h)?,
        _ => {
            return Err(Error::Parse(
                "representation file needs exactly one of `generators` and `wgraph`".into(),
            ))
        }
    };
    if let Some(d) = f.dim {
        if d != rep.dim() {
            return Err(Error::Parse(format!("{}: declared dim {d}, matrices have {}", rep.label(), rep.dim())));
        }
    }
    Ok(rep)
}

pub fn load_rep(path: &Path, h: &HeckeAlgebra) -> Result<MatrixRep> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_rep(&text, h)
}

/// Explicit-matrix JSON for `rep`, readable by [`parse_rep`].
pub fn rep_to_json(rep: &MatrixRep) -> String {
    let gens = rep
        .generators()
        .iter()
        .enumerate()
        .map(|(s, m)| {
            let rows = (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
                .collect();
            (format!("s{s}"), rows)
        })
        .collect();
    let f = RepFile {
        label: Some(rep.label().to_string()),
        dim: Some(rep.dim()),
        generators: Some(gens),
        wgraph: None,
    };
    serde_json::to_string_pretty(&f).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::super::tests::algebra;
    use super::super::{dihedral, seminormal_b};
    use super::*;

    #[test]
    fn explicit_round_trip() {
        let h = algebra("I2:4", None, None);
        let r = dihedral(&h, 1).unwrap();
        let back = parse_rep(&rep_to_json(&r), &h).unwrap();
        assert_eq!(back.generators(), r.generators());
        assert_eq!(back.label(), "rho1");
        let h = algebra("B2", None, None);
        let r = seminormal_b(&h, &"((1),(1))".parse().unwrap()).unwrap();
        let r = r.conjugate_diagonal(&[KScalar::one(1), KScalar::parse("(eps[1])/(eps[0] + eps[2])", 1, None).unwrap()]).unwrap();
        let back = parse_rep(&rep_to_json(&r), &h).unwrap();
        assert_eq!(back.generators(), r.generators());
    }

    #[test]
    fn one_vertex_wgraph_is_index() {
        let h = algebra("A2", None, None);
        let r = parse_rep(r#"{"wgraph": {"vertices": [{"Iset": []}]}}"#, &h).unwrap();
        assert_eq!(r.trace_poly(h.group().longest()).unwrap(), h.v_elem(h.group().longest()));
    }

    #[test]
    fn reflection_wgraph_of_a2() {
        let h = algebra("A2", None, None);
        let text = r#"{"label": "refl", "wgraph": {"vertices": [{"Iset": ["s0"]}, {"Iset": ["s1"]}],
            "edges": [{"u": 0, "v": 1, "weight": "1"}]}}"#;
        let r = parse_rep(text, &h).unwrap();
        let d = dihedral(&h, 1).unwrap();
        for w in h.group().elements() {
            assert_eq!(r.trace_poly(w).unwrap(), d.trace_poly(w).unwrap());
        }
    }

    #[test]
    fn bad_files_rejected() {
        let h = algebra("A2", None, None);
        let bad = r#"{"wgraph": {"vertices": [{"Iset": ["s0"]}, {"Iset": ["s1"]}],
            "edges": [{"u": 0, "v": 1, "weight": "2"}]}}"#;
        assert!(matches!(parse_rep(bad, &h), Err(Error::BraidViolation(_))));
        assert!(matches!(parse_rep("{", &h), Err(Error::Parse(_))));
        let mixed = r#"{"generators": {"s0": [["eps[1]"]]}}"#;
        assert!(matches!(parse_rep(mixed, &h), Err(Error::Parse(_))));
    }
}
