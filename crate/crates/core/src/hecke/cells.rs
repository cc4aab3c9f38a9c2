//! Kazhdan-Lusztig preorders and their cells.

use std::collections::VecDeque;

use super::{Basis, HeckeAlgebra, HeckeElem, KlBasis};
use crate::coxeter::Elem;

/// A preorder on `W` given by reachability, with its equivalence classes.
///
/// `le(y, w)` means `y ≤ w`, i.e. `C_y` occurs in `H C_w H` (or `H C_w`
/// for the left version).
#[derive(Clone, Debug)]
pub struct LrPreorder {
    reach: Vec<Vec<bool>>,
    cells: Vec<Vec<Elem>>,
    cell_of: Vec<usize>,
}

impl LrPreorder {
    /// The two-sided preorder `≤_LR`.
    pub fn compute(h: &HeckeAlgebra, kl: &KlBasis) -> Self {
        Self::from_edges(Self::edges(h, kl, true))
    }

    /// The left preorder `≤_L`, from left multiplication only.
    pub fn left(h: &HeckeAlgebra, kl: &KlBasis) -> Self {
        Self::from_edges(Self::edges(h, kl, false))
    }

    fn edges(h: &HeckeAlgebra, kl: &KlBasis, two_sided: bool) -> Vec<Vec<Elem>> {
        let g = h.group();
        let n = h.size();
        let k = h.gamma_rank();
        let mut below = vec![Vec::new(); n];
        for w in 0..n {
            let cw = HeckeElem::basis_elem(Basis::C, n, w, k);
            let wi = g.inverse(w);
            let cwi = HeckeElem::basis_elem(Basis::C, n, wi, k);
            for s in 0..g.rank() {
                below[w].extend(kl.c_gen_left(h, s, &cw).support());
                if two_sided {
                    // C_w C_s = flat(C_s C_{w^{-1}})
                    let p = kl.c_gen_left(h, s, &cwi);
                    below[w].extend(p.support().map(|u| g.inverse(u)));
                }
            }
            below[w].sort_unstable();
            below[w].dedup();
        }
        below
    }

    fn from_edges(below: Vec<Vec<Elem>>) -> Self {
        let n = below.len();
        let mut reach = vec![vec![false; n]; n];
        for w in 0..n {
            let r = &mut reach[w];
            let mut queue = VecDeque::from([w]);
            r[w] = true;
            while let Some(u) = queue.pop_front() {
                for &y in &below[u] {
                    if !r[y] {
                        r[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        let mut cell_of = vec![usize::MAX; n];
        let mut cells = Vec::new();
        for w in 0..n {
            if cell_of[w] != usize::MAX {
                continue;
            }
            let cell: Vec<Elem> = (w..n).filter(|&y| reach[w][y] && reach[y][w]).collect();
            for &y in &cell {
                cell_of[y] = cells.len();
            }
            cells.push(cell);
        }
        LrPreorder { reach, cells, cell_of }
    }

    /// `y ≤ w`.
    pub fn le(&self, y: Elem, w: Elem) -> bool {
        self.reach[w][y]
    }

    /// `y < w` strictly (below and not equivalent).
    pub fn lt(&self, y: Elem, w: Elem) -> bool {
        self.le(y, w) && !self.le(w, y)
    }

    pub fn equivalent(&self, y: Elem, w: Elem) -> bool {
        self.cell_of[y] == self.cell_of[w]
    }

    /// Cells, each sorted, listed by smallest member.
    pub fn cells(&self) -> &[Vec<Elem>] {
        &self.cells
    }

    pub fn cell_of(&self, w: Elem) -> usize {
        self.cell_of[w]
    }

    /// Cells as a canonical set partition, for comparisons.
    pub fn partition(&self) -> Vec<Vec<Elem>> {
        let mut p = self.cells.clone();
        p.sort();
        p
    }
}

/// True if every block of `fine` lies inside a block of `coarse`.
pub fn refines(fine: &[Vec<Elem>], coarse: &[Vec<Elem>]) -> bool {
    fine.iter()
        .all(|b| coarse.iter().any(|c| b.iter().all(|x| c.contains(x))))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::super::tests::algebra;
    use super::*;
    use crate::coxeter::{CoxeterGroup, CoxeterSystem, WeightFunction};
    use crate::scalars::{ExponentVec, MonomialOrder};

    #[test]
    fn a1_cells() {
        let h = algebra("A1");
        let kl = KlBasis::compute(&h).unwrap();
        let p = LrPreorder::compute(&h, &kl);
        assert_eq!(p.partition(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn a2_cells() {
        let h = algebra("A2");
        let kl = KlBasis::compute(&h).unwrap();
        let p = LrPreorder::compute(&h, &kl);
        let g = h.group();
        let w0 = g.longest();
        let mid: Vec<Elem> = (1..6).filter(|&w| w != w0).collect();
        let mut expect = vec![vec![0], mid, vec![w0]];
        expect.sort();
        assert_eq!(p.partition(), expect);
        // the longest element sits at the bottom
        for w in 0..6 {
            assert!(p.le(w0, w));
        }
        let left = LrPreorder::left(&h, &kl);
        assert_eq!(left.cells().len(), 4);
    }

    #[test]
    fn i2_4_unequal_refines_equal() {
        let sys = CoxeterSystem::i2(4);
        let g = Arc::new(CoxeterGroup::new(sys.clone()).unwrap());
        let eq = HeckeAlgebra::new(g.clone(), WeightFunction::equal(&sys), MonomialOrder::natural(1)).unwrap();
        let kl_eq = KlBasis::compute(&eq).unwrap();
        let p_eq = LrPreorder::compute(&eq, &kl_eq);
        // s1 gets b, s2 gets a, b ≫ a
        let l = WeightFunction::new(vec![ExponentVec::from_slice(&[0, 1]), ExponentVec::from_slice(&[1, 0])]).unwrap();
        let un = HeckeAlgebra::new(g, l, MonomialOrder::new(vec![1, 0]).unwrap()).unwrap();
        let kl_un = KlBasis::compute(&un).unwrap();
        let p_un = LrPreorder::compute(&un, &kl_un);
        assert!(refines(&p_un.partition(), &p_eq.partition()));
        assert_eq!(p_eq.cells().len(), 3);
        assert!(p_un.cells().len() > 3);
    }
}
