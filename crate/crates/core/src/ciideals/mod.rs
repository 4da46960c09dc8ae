//! The slice-minor ideals `I<t>`, their Segre counterparts `Ĩ<t>`, the
//! primes `P_S`, the lattice basis ideal and supporting identities.
//!
//! Ideals live in the ring with one variable per cell of the grid, indexed by
//! the canonical cell id.

pub mod diagonal;
pub mod identities;
pub mod rho;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{contract, Error, Result};
use crate::indexcomb::{CellGrid, ComponentSet, IndexTuple};
use crate::polyengine::lattice::{hermite_normal_form, integer_kernel, rank, IntVec};
use crate::polyengine::{Ideal, Monomial, Polynomial};
use crate::switchable::{bits, SwitchableSet};

pub use diagonal::{
    check_t_diagonal, make_t_diagonal_order, DiagonalOrder, DiagonalOrderSpec, DiagonalVariant, DiagonalViolation,
    Orientation,
};
pub use identities::{
    distance_three_product_membership, switch_difference_terms, verify_path_product, verify_reduction_identity,
    verify_switch_difference_identity, verify_telescoping_identity,
};
pub use rho::{rho_s, rho_s_factors, RhoVariant};

/// `f_{L,x,y} = x_x x_y - x_{s(L,x,y)} x_{s(L,y,x)}` on cell ids; zero when
/// the switch only permutes the pair.
pub fn minor_ids(grid: &CellGrid, l: ComponentSet, x: usize, y: usize) -> Polynomial {
    let n = grid.size();
    let c = grid.switch(l, x, y);
    let d = grid.switch(l, y, x);
    Polynomial::binomial(Monomial::from_vars(n, &[x, y]), Monomial::from_vars(n, &[c, d]))
}

/// `f_{L,a,b}` for tuples.
pub fn minor(grid: &CellGrid, l: ComponentSet, a: &IndexTuple, b: &IndexTuple) -> Result<Polynomial> {
    let x = grid.id(a)?;
    let y = grid.id(b)?;
    if l.max_component() > grid.shape().n() {
        return Err(Error::InvalidInput(format!(
            "component set reaches {} but n = {}",
            l.max_component(),
            grid.shape().n()
        )));
    }
    Ok(minor_ids(grid, l, x, y))
}

/// `x_(1,2,1)` style names for every cell.
pub fn var_names(grid: &CellGrid) -> Vec<String> {
    grid.cells()
        .iter()
        .map(|c| format!("x_({})", c.entries().iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")))
        .collect()
}

/// Deduplicating generator list keyed by the sign-normalized form.
#[derive(Default)]
pub(crate) struct GenSet {
    seen: HashSet<Polynomial>,
    pub(crate) gens: Vec<Polynomial>,
}

impl GenSet {
    pub(crate) fn push(&mut self, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        let p = p.sign_normalized();
        if self.seen.insert(p.clone()) {
            self.gens.push(p);
        }
    }
}

/// Distinct nonzero minors `f_{i,x,y}`, `i <= t`, over the given pairs.
fn minors_over(grid: &CellGrid, t: usize, pairs: impl Iterator<Item = (usize, usize)>) -> Vec<Polynomial> {
    let mut set = GenSet::default();
    for (x, y) in pairs {
        for i in 1..=t {
            set.push(minor_ids(grid, ComponentSet::single(i), x, y));
        }
    }
    set.gens
}

fn all_pairs(size: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..size).flat_map(move |x| (x + 1..size).map(move |y| (x, y)))
}

/// Distinct nonzero slice minors `f_{i,a,b}`, `d(a,b) = 2`, `i <= t`.
pub fn slice_minors(grid: &CellGrid, t: usize) -> Vec<Polynomial> {
    minors_over(grid, t, all_pairs(grid.size()).filter(|&(x, y)| grid.distance(x, y) == 2))
}

/// Distinct nonzero minors `f_{i,a,b}`, `i <= t`, over all pairs.
pub fn all_minors(grid: &CellGrid, t: usize) -> Vec<Polynomial> {
    minors_over(grid, t, all_pairs(grid.size()))
}

/// `I<t>`.
pub fn build_i(grid: &CellGrid, t: usize) -> Ideal {
    Ideal::new(grid.size(), slice_minors(grid, t)).expect("generators live in the cell ring")
}

/// `Ĩ<t>`.
pub fn build_itilde(grid: &CellGrid, t: usize) -> Ideal {
    Ideal::new(grid.size(), all_minors(grid, t)).expect("generators live in the cell ring")
}

fn connected_pairs(s: &SwitchableSet) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for &class in s.classes() {
        for x in bits(class) {
            for y in bits(class) {
                if x < y {
                    out.push((x, y));
                }
            }
        }
    }
    out.sort();
    out
}

/// Slice minors of connected pairs of `S`.
pub fn is_generators(s: &SwitchableSet) -> Vec<Polynomial> {
    let grid = s.grid();
    minors_over(grid, s.t(), connected_pairs(s).into_iter().filter(|&(x, y)| grid.distance(x, y) == 2))
}

/// Minors of connected pairs of `S`.
pub fn itilde_s_generators(s: &SwitchableSet) -> Vec<Polynomial> {
    minors_over(s.grid(), s.t(), connected_pairs(s).into_iter())
}

/// `I<t>_S`.
pub fn build_is(s: &SwitchableSet) -> Ideal {
    Ideal::new(s.grid().size(), is_generators(s)).expect("generators live in the cell ring")
}

/// `Ĩ<t>_S`.
pub fn build_itilde_s(s: &SwitchableSet) -> Ideal {
    Ideal::new(s.grid().size(), itilde_s_generators(s)).expect("generators live in the cell ring")
}

/// `Var_S = (x_a : a ∉ S)`.
pub fn var_s_generators(s: &SwitchableSet) -> Vec<Polynomial> {
    let grid = s.grid();
    bits(grid.full_mask() & !s.mask()).map(|a| Polynomial::var(grid.size(), a)).collect()
}

/// `x_S`, the product of the variables of `S`.
pub fn x_s(s: &SwitchableSet) -> Polynomial {
    let vars: Vec<usize> = bits(s.mask()).collect();
    Polynomial::monomial(Monomial::from_vars(s.grid().size(), &vars))
}

/// A t-switchable set viewed as the index of the prime `P_S`.
#[derive(Clone, Debug)]
pub struct PrimeDescriptor {
    set: SwitchableSet,
}

impl PrimeDescriptor {
    pub fn new(set: SwitchableSet) -> Result<Self> {
        if !set.is_switchable() {
            return contract(format!("{set:?} is not {}-switchable", set.t()));
        }
        Ok(PrimeDescriptor { set })
    }

    pub fn set(&self) -> &SwitchableSet {
        &self.set
    }

    pub fn t(&self) -> usize {
        self.set.t()
    }

    pub fn classes(&self) -> &[u64] {
        self.set.classes()
    }

    /// Class cells as tuples.
    pub fn class_cells(&self) -> Vec<Vec<IndexTuple>> {
        let grid = self.set.grid();
        self.classes().iter().map(|&m| bits(m).map(|x| grid.cell(x).clone()).collect()).collect()
    }
}

/// `P_S = Var_S + Ĩ_S`.
pub fn build_ps(desc: &PrimeDescriptor) -> Ideal {
    let s = desc.set();
    let mut gens = var_s_generators(s);
    gens.extend(itilde_s_generators(s));
    Ideal::new(s.grid().size(), gens).expect("generators live in the cell ring")
}

/// Multiset data determining membership of binomials in the Segre ideals:
/// for each `i <= t` the count of every state in component `i`, and the
/// count of every flattened tail state when `t < n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarginalSignature {
    pub counts: Vec<Vec<u32>>,
}

/// Signature of the monomial restricted to the variables in `mask`.
pub fn marginal_signature(grid: &CellGrid, t: usize, m: &Monomial, mask: u64) -> MarginalSignature {
    let shape = grid.shape();
    let n = shape.n();
    let dims = shape.dims();
    let mut counts: Vec<Vec<u32>> = (0..t).map(|i| vec![0; dims[i]]).collect();
    if t < n {
        counts.push(vec![0; dims[t..].iter().product()]);
    }
    for x in 0..grid.size() {
        let e = m.exp(x) as u32;
        if e == 0 || mask >> x & 1 == 0 {
            continue;
        }
        for (i, row) in counts.iter_mut().enumerate().take(t) {
            row[grid.entry(x, i + 1) - 1] += e;
        }
        if t < n {
            let mut rank = 0;
            for k in t..n {
                rank = rank * dims[k] + grid.entry(x, k + 1) - 1;
            }
            counts[t][rank] += e;
        }
    }
    MarginalSignature { counts }
}

/// Membership of a pure binomial in `Ĩ<t>_S` by comparing signatures class
/// by class.
pub fn marginal_signature_member(f: &Polynomial, s: &SwitchableSet) -> Result<bool> {
    if !f.is_pure_binomial() {
        return contract(format!("{f:?} is not a pure binomial"));
    }
    if f.support_mask() & !s.mask() != 0 || f.nvars() != s.grid().size() {
        return contract(format!("{f:?} uses variables outside S"));
    }
    let (u, v) = (&f.terms()[0].0, &f.terms()[1].0);
    Ok(balanced_on_classes(s.grid(), s.t(), s.classes(), u, v))
}

/// `u` and `v` have equal signatures on every class.
pub fn balanced_on_classes(grid: &CellGrid, t: usize, classes: &[u64], u: &Monomial, v: &Monomial) -> bool {
    classes.iter().all(|&c| marginal_signature(grid, t, u, c) == marginal_signature(grid, t, v, c))
}

/// Rows of the marginals matrix: indicators of the cells with a given state
/// in component `i <= t`, then of each flattened tail state when `t < n`.
pub fn marginals_matrix(grid: &CellGrid, t: usize) -> Vec<IntVec> {
    let size = grid.size();
    let mut rows = Vec::new();
    let sigs: Vec<MarginalSignature> =
        (0..size).map(|x| marginal_signature(grid, t, &Monomial::var(size, x), grid.full_mask())).collect();
    let nblocks = sigs[0].counts.len();
    for b in 0..nblocks {
        for state in 0..sigs[0].counts[b].len() {
            rows.push((0..size).map(|x| BigInt::from(sigs[x].counts[b][state])).collect());
        }
    }
    rows
}

fn move_vector(p: &Polynomial) -> IntVec {
    let size = p.nvars();
    let mut v = vec![BigInt::zero(); size];
    for (m, c) in p.terms() {
        let sign: i64 = if c.is_positive() { 1 } else { -1 };
        for (x, &e) in m.exps().iter().enumerate() {
            v[x] += BigInt::from(sign * e as i64);
        }
    }
    v
}

fn vector_binomial(v: &IntVec) -> Polynomial {
    let size = v.len();
    let mut pos = vec![0u16; size];
    let mut neg = vec![0u16; size];
    for (x, e) in v.iter().enumerate() {
        let k = u16::try_from(e.abs()).expect("small kernel entries");
        if e.is_positive() {
            pos[x] = k;
        } else {
            neg[x] = k;
        }
    }
    Polynomial::binomial(Monomial::from_exponents(&pos), Monomial::from_exponents(&neg)).sign_normalized()
}

/// Binomials `x^{u+} - x^{u-}` for a Z-basis of the kernel of the marginals
/// matrix.
///
/// Basis vectors are picked greedily among slice-minor moves, then all minor
/// moves, accepting a move when it raises the rank; the chosen moves must span
/// the whole kernel lattice. If they do not, the Hermite basis of the kernel is
/// used instead.
pub fn lattice_basis_ideal(grid: &CellGrid, t: usize) -> Ideal {
    let size = grid.size();
    let a = marginals_matrix(grid, t);
    let kernel = integer_kernel(&a, size);
    let mut chosen: Vec<IntVec> = Vec::new();
    let mut gens: Vec<Polynomial> = Vec::new();
    let mut candidates = slice_minors(grid, t);
    candidates.extend(all_minors(grid, t));
    for p in candidates {
        if chosen.len() == kernel.len() {
            break;
        }
        let v = move_vector(&p);
        let mut trial = chosen.clone();
        trial.push(v);
        if rank(&trial) > chosen.len() {
            chosen = trial;
            gens.push(p);
        }
    }
    if hermite_normal_form(&chosen) != kernel {
        gens = kernel.iter().map(vector_binomial).collect();
    }
    Ideal::new(size, gens).expect("generators live in the cell ring")
}

/// Membership of `x^u - x^v` in `P_S` without a Gröbner basis.
///
/// A monomial lies in `P_S` iff it uses a variable outside `S`. If both
/// sides do, the binomial is in `Var_S`; if exactly one does, it is not in
/// `P_S`; otherwise membership in `Ĩ_S` is the class-wise signature test.
pub fn binomial_in_ps(grid: &CellGrid, t: usize, s_mask: u64, classes: &[u64], u: &Monomial, v: &Monomial) -> bool {
    let ou = u.support_mask() & !s_mask != 0;
    let ov = v.support_mask() & !s_mask != 0;
    match (ou, ov) {
        (true, true) => true,
        (false, false) => balanced_on_classes(grid, t, classes, u, v),
        _ => false,
    }
}

/// `f_{K,a,b}` for all `K ⊆ [t]` and connected `a, b ∈ S`, deduplicated.
///
/// For a t-diagonal order this set is a Gröbner basis of `Ĩ<t>_S`.
pub fn theorem_gb(s: &SwitchableSet) -> Result<Vec<Polynomial>> {
    if !s.is_switchable() {
        return contract(format!("{s:?} is not {}-switchable", s.t()));
    }
    let grid = s.grid();
    let mut set = GenSet::default();
    let subsets = ComponentSet::full(s.t()).subsets();
    for (x, y) in connected_pairs(s) {
        for &k in &subsets {
            set.push(minor_ids(grid, k, x, y));
        }
    }
    Ok(set.gens)
}

/// `f_{i,a,b}` for all `i ∈ [n]` and connected `a, b ∈ S`: a smaller
/// Gröbner basis of `Ĩ<t>_S` available when `t >= n - 1`.
pub fn theorem_gb_reduced(s: &SwitchableSet) -> Result<Vec<Polynomial>> {
    let n = s.grid().shape().n();
    if !s.is_switchable() {
        return contract(format!("{s:?} is not {}-switchable", s.t()));
    }
    if s.t() + 1 < n {
        return contract(format!("the reduced basis needs t >= n - 1 = {}", n - 1));
    }
    Ok(minors_over(s.grid(), n, connected_pairs(s).into_iter()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexcomb::Shape;
    use crate::polyengine::{ideal_contains, minimal_generator_count, MonomialOrder, DEFAULT_PAIR_BUDGET as B};
    use std::sync::Arc;

    fn grid(dims: &[usize], t: usize) -> Arc<CellGrid> {
        Arc::new(CellGrid::new(&Shape::new(dims.to_vec(), t).unwrap()).unwrap())
    }

    #[test]
    fn minors_basic() {
        let g = grid(&[2, 2], 1);
        let a = IndexTuple::from([1, 1]);
        let b = IndexTuple::from([2, 2]);
        assert!(minor(&g, ComponentSet::single(1), &a, &a).unwrap().is_zero());
        let f = minor(&g, ComponentSet::single(1), &a, &b).unwrap();
        let names = var_names(&g);
        assert_eq!(f.render(&names), "x_(1,1)*x_(2,2) - x_(1,2)*x_(2,1)");
        let c = g.cell(g.switch(ComponentSet::single(1), 0, 3)).clone();
        let d = g.cell(g.switch(ComponentSet::single(1), 3, 0)).clone();
        assert_eq!(minor(&g, ComponentSet::single(1), &c, &d).unwrap(), f.neg());
    }

    #[test]
    fn generator_counts() {
        assert_eq!(build_i(&grid(&[2, 2], 1), 1).gens().len(), 1);
        assert!(build_i(&grid(&[1, 1, 1], 3), 3).gens().is_empty());
        let g = grid(&[2, 2, 2], 3);
        let i3 = build_i(&g, 3);
        let it3 = build_itilde(&g, 3);
        assert_eq!(i3.gens().len(), 6);
        assert_eq!(it3.gens().len(), 12);
        assert_eq!(minimal_generator_count(&i3).unwrap(), 6);
        assert_eq!(minimal_generator_count(&it3).unwrap(), 9);
        assert!(i3.gens().iter().all(|f| it3.gens().contains(f)));
        assert_eq!(build_itilde(&g, 2).gens().len(), 10);
    }

    #[test]
    fn full_set_reproduces_global_ideals() {
        let g = grid(&[2, 2, 2], 2);
        let n = SwitchableSet::full(g.clone());
        assert_eq!(build_is(&n).gens(), build_i(&g, 2).gens());
        assert_eq!(build_itilde_s(&n).gens(), build_itilde(&g, 2).gens());
        let pn = build_ps(&PrimeDescriptor::new(n).unwrap());
        assert_eq!(pn.gens(), build_itilde(&g, 2).gens());
        let empty = SwitchableSet::from_mask(g.clone(), 0).unwrap();
        let pe = build_ps(&PrimeDescriptor::new(empty).unwrap());
        assert_eq!(pe.gens().len(), 8);
        assert!(pe.gens().iter().all(|p| p.is_monomial() && p.degree() == 1));
    }

    #[test]
    fn two_class_generators_split() {
        let g = grid(&[2, 2, 2], 1);
        let s =
            SwitchableSet::from_cells(g.clone(), &[IndexTuple::from([1, 1, 1]), IndexTuple::from([2, 2, 2])]).unwrap();
        assert!(s.is_switchable());
        assert_eq!(s.classes().len(), 2);
        assert!(itilde_s_generators(&s).is_empty());
    }

    #[test]
    fn signature_membership() {
        let g = grid(&[2, 2, 2], 3);
        let n = SwitchableSet::full(g.clone());
        for f in build_itilde(&g, 3).gens() {
            assert!(marginal_signature_member(f, &n).unwrap());
        }
        let size = g.size();
        let bad = Polynomial::binomial(Monomial::from_vars(size, &[0, 1]), Monomial::from_vars(size, &[0, 2]));
        assert!(!marginal_signature_member(&bad, &n).unwrap());
        assert!(marginal_signature_member(&Polynomial::var(size, 0), &n).is_err());
        let s = SwitchableSet::from_cells(
            g.clone(),
            &[
                IndexTuple::from([1, 1, 1]),
                IndexTuple::from([1, 1, 2]),
                IndexTuple::from([2, 2, 1]),
                IndexTuple::from([2, 2, 2]),
            ],
        )
        .unwrap();
        assert_eq!(s.classes().len(), 2);
        // x_111 x_222 - x_112 x_221 mixes the two classes
        let mixed = Polynomial::binomial(Monomial::from_vars(size, &[0, 7]), Monomial::from_vars(size, &[1, 6]));
        assert!(!marginal_signature_member(&mixed, &s).unwrap());
    }

    #[test]
    fn lattice_basis_example() {
        let g = grid(&[2, 2, 2], 3);
        let l = lattice_basis_ideal(&g, 3);
        assert_eq!(l.gens().len(), 4);
        assert_eq!(minimal_generator_count(&l).unwrap(), 4);
        let i3 = build_i(&g, 3);
        let ord = MonomialOrder::degrevlex(8);
        assert!(ideal_contains(&i3, &l, &ord, B).unwrap());
        assert!(!ideal_contains(&l, &i3, &ord, B).unwrap());
        let a = marginals_matrix(&g, 3);
        for f in l.gens() {
            let v = move_vector(f);
            assert!(crate::polyengine::lattice::apply(&a, &v).iter().all(|x| x.is_zero()));
        }
    }
}
