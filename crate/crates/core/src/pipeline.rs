//! Building an algebra from text options and running the stages on it.

use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::asymptotic::GammaTable;
use crate::coxeter::{validate_weight, CoxeterGroup, CoxeterSystem, WeightFunction};
use crate::error::{Error, Result};
use crate::hecke::{HTable, HeckeAlgebra, KlBasis, LrPreorder, FULL_TABLE_LIMIT};
use crate::reps::{builtin_family, prepare, FamilyKind, LeadingTensor, MatrixRep, PreparedRep};
use crate::scalars::{ExponentVec, MonomialOrder};

/// `equal`, `universal`, or explicit per-generator vectors such as
/// `0,1;1,0` (generator `s0` gets `(0,1)`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightSpec {
    Equal,
    Universal,
    Explicit(Vec<Vec<i32>>),
}

impl FromStr for WeightSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "equal" => Ok(WeightSpec::Equal),
            "universal" => Ok(WeightSpec::Universal),
            t => {
                let rows = t
                    .split(';')
                    .map(|g| {
                        g.split(',')
                            .map(|x| x.trim().parse::<i32>().map_err(|e| Error::Parse(format!("weight `{g}`: {e}"))))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(WeightSpec::Explicit(rows))
            }
        }
    }
}

impl WeightSpec {
    pub fn resolve(&self, sys: &CoxeterSystem) -> Result<WeightFunction> {
        match self {
            WeightSpec::Equal => Ok(WeightFunction::equal(sys)),
            WeightSpec::Universal => Ok(WeightFunction::universal(sys)),
            WeightSpec::Explicit(rows) => {
                if rows.len() != sys.rank() {
                    return Err(Error::Input(format!(
                        "{} weights given for {} generators",
                        rows.len(),
                        sys.rank()
                    )));
                }
                WeightFunction::new(rows.iter().map(|r| ExponentVec::from_slice(r)).collect())
            }
        }
    }
}

/// `natural` or a comma-separated priority list such as `1,0`.
pub fn parse_order(s: &str, rank: usize) -> Result<MonomialOrder> {
    match s.trim() {
        "natural" | "" => Ok(MonomialOrder::natural(rank)),
        t => {
            let p = t
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|e| Error::Parse(format!("order `{t}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            MonomialOrder::new(p)
        }
    }
}

/// Validated algebra for a system name, weights and order.
pub fn algebra(system: &str, weights: &WeightSpec, order: &str) -> Result<HeckeAlgebra> {
    let sys = CoxeterSystem::parse(system)?;
    let l = weights.resolve(&sys)?;
    let ord = parse_order(order, l.rank())?;
    validate_weight(&sys, &l, &ord).map_err(|e| Error::Input(e.to_string()))?;
    let g = Arc::new(CoxeterGroup::new(sys)?);
    HeckeAlgebra::new(g, l, ord)
}

/// Everything downstream of the algebra, built in stage order.
pub struct Pipeline {
    pub h: HeckeAlgebra,
    pub kl: KlBasis,
    pub lr: LrPreorder,
    pub reps: Vec<MatrixRep>,
    pub prepared: Vec<PreparedRep>,
    pub table: GammaTable,
    /// Only for `|W| <= FULL_TABLE_LIMIT`.
    pub ht: Option<HTable>,
}

impl Pipeline {
    pub fn new(h: HeckeAlgebra, reps: Vec<MatrixRep>) -> Result<Self> {
        let kl = KlBasis::compute(&h)?;
        let lr = LrPreorder::compute(&h, &kl);
        let prepared = reps.iter().map(|r| prepare(r, &h)).collect::<Result<Vec<_>>>()?;
        let table = GammaTable::build(&tensors(&prepared), h.group_arc())?;
        let ht = if h.size() <= FULL_TABLE_LIMIT {
            Some(HTable::build(&h, &kl)?)
        } else {
            None
        };
        Ok(Pipeline {
            h,
            kl,
            lr,
            reps,
            prepared,
            table,
            ht,
        })
    }

    pub fn builtin(h: HeckeAlgebra, kind: FamilyKind) -> Result<Self> {
        let reps = builtin_family(&h, kind)?;
        Self::new(h, reps)
    }

    pub fn htable(&self) -> Result<&HTable> {
        self.ht
            .as_ref()
            .ok_or_else(|| Error::Input(format!("h-table needs |W| <= {FULL_TABLE_LIMIT}")))
    }
}

pub fn tensors(prepared: &[PreparedRep]) -> Vec<LeadingTensor> {
    prepared.iter().map(|r| r.leading.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_specs() {
        assert_eq!("equal".parse::<WeightSpec>().unwrap(), WeightSpec::Equal);
        assert_eq!(
            "0,1; 1,0".parse::<WeightSpec>().unwrap(),
            WeightSpec::Explicit(vec![vec![0, 1], vec![1, 0]])
        );
        assert!("x".parse::<WeightSpec>().is_err());
    }

    #[test]
    fn invalid_weights_rejected() {
        assert!(algebra("A2", &"2;1".parse().unwrap(), "natural").is_err());
        assert!(algebra("B2", &"0,1;1,0".parse().unwrap(), "0,1").is_ok());
        assert!(algebra("B2", &"-1;1".parse().unwrap(), "natural").is_err());
        assert!(algebra("B2", &WeightSpec::Universal, "1,0").is_ok());
    }
}
