//! Multipliers `ρ_S` with `I<n> : ρ_S = P_S` for maximal n-switchable `S`.

use serde::Serialize;

use crate::error::{contract, Error, Result};
use crate::indexcomb::ComponentSet;
use crate::polyengine::Polynomial;
use crate::switchable::{bits, SwitchableSet};

use super::{all_minors, binomial_in_ps, minor_ids, GenSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RhoVariant {
    /// `x_S` times every minor of `Ĩ<n>` outside `P_S`.
    Full,
    /// `x_S` times, for each `a ∉ S`, the one or two minors `f_{·,b,c}` that
    /// move `x_a` into the quotient.
    Reduced,
}

/// Factors of `ρ_S`: the variables of `S`, then minors.
///
/// For the reduced variant each `a ∉ S` gets the first pair `(b, c)` of
/// cells of `S` in canonical order with `d(a,b) <= 2`, `d(b,c) = 3`, `b`, `c`
/// not connected and `c_i = a_i != b_i` for some (smallest) `i`; with `j` the
/// smallest other component where `b` and `c` differ, the factors are
/// `f_{j,b,c}` when `d(a,b) = 1` and `f_{i,b,c}`, `f_{j,b,c}` when `d(a,b) = 2`.
pub fn rho_s_factors(s: &SwitchableSet, variant: RhoVariant) -> Result<Vec<Polynomial>> {
    let grid = s.grid();
    let n = grid.shape().n();
    if s.t() != n {
        return contract(format!("rho_S needs t = n = {n}, got t = {}", s.t()));
    }
    if !s.is_switchable() {
        return contract(format!("{s:?} is not {n}-switchable"));
    }
    let size = grid.size();
    let mut factors: Vec<Polynomial> = bits(s.mask()).map(|x| Polynomial::var(size, x)).collect();
    let mut minors = GenSet::default();
    match variant {
        RhoVariant::Full => {
            let classes = s.classes();
            for f in all_minors(grid, n) {
                let (u, v) = (&f.terms()[0].0, &f.terms()[1].0);
                if !binomial_in_ps(grid, n, s.mask(), classes, u, v) {
                    minors.push(f);
                }
            }
        }
        RhoVariant::Reduced => {
            for a in bits(grid.full_mask() & !s.mask()) {
                let (b, c, i) = witness_pair(s, a).ok_or_else(|| {
                    Error::Contract(format!("no separating pair for cell {}; is S maximal?", grid.cell(a)))
                })?;
                let j = (1..=n)
                    .find(|&j| j != i && grid.entry(b, j) != grid.entry(c, j))
                    .expect("d(b,c) = 3 leaves another differing component");
                if grid.distance(a, b) == 2 {
                    minors.push(minor_ids(grid, ComponentSet::single(i), b, c));
                }
                minors.push(minor_ids(grid, ComponentSet::single(j), b, c));
            }
        }
    }
    factors.extend(minors.gens);
    Ok(factors)
}

fn witness_pair(s: &SwitchableSet, a: usize) -> Option<(usize, usize, usize)> {
    let grid = s.grid();
    let n = grid.shape().n();
    for b in bits(s.mask()) {
        if grid.distance(a, b) > 2 {
            continue;
        }
        for c in bits(s.mask()) {
            if grid.distance(b, c) != 3 || s.connected(b, c) {
                continue;
            }
            if let Some(i) =
                (1..=n).find(|&i| grid.entry(c, i) == grid.entry(a, i) && grid.entry(a, i) != grid.entry(b, i))
            {
                return Some((b, c, i));
            }
        }
    }
    None
}

/// `ρ_S` as a single product.
pub fn rho_s(s: &SwitchableSet, variant: RhoVariant) -> Result<Polynomial> {
    let factors = rho_s_factors(s, variant)?;
    Ok(factors.iter().fold(Polynomial::one(s.grid().size()), |acc, f| acc.mul(f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexcomb::{CellGrid, Shape};
    use std::sync::Arc;

    #[test]
    fn full_set_has_no_minor_factors() {
        let g = Arc::new(CellGrid::new(&Shape::new(vec![2, 2, 2], 3).unwrap()).unwrap());
        let n = SwitchableSet::full(g.clone());
        for v in [RhoVariant::Full, RhoVariant::Reduced] {
            let f = rho_s_factors(&n, v).unwrap();
            assert_eq!(f.len(), 8);
            assert!(f.iter().all(|p| p.is_monomial()));
        }
        let s2 = SwitchableSet::with_t(g.clone(), 2, g.full_mask()).unwrap();
        assert!(rho_s(&s2, RhoVariant::Full).is_err());
    }
}
