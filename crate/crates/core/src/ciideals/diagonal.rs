//! t-diagonal monomial orders.
//!
//! Cells are read through their flattened coordinates (components after
//! `t' = min(t, n-1)` merged into one), giving `t' + 1` coordinates. For a
//! permutation `δ` of them, take two cells `a`, `b`, let `δ_i` be the first
//! coordinate in `δ` order where they differ and `δ_j` any later one with
//! `a_{δ_j} > b_{δ_j}`. Switching coordinate `δ_j` turns `x_a x_b` into
//! `x_{s(δ_j,a,b)} x_{s(δ_j,b,a)}`; the order is t-diagonal when the product
//! concordant on `(δ_i, δ_j)` is always the larger one (main orientation) or
//! always the smaller one (anti orientation).

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::indexcomb::{flatten_at, CellGrid, ComponentSet, IndexTuple};
use crate::polyengine::{Monomial, MonomialOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagonalVariant {
    /// Lex on variables ordered by the δ-permuted flattened index.
    Lex,
    /// Degrevlex on variables ordered by the δ-permuted flattened index.
    RevLex,
}

/// A permutation `δ` of the flattened coordinates (1-based) and a variant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DiagonalOrderSpec {
    pub delta: Vec<usize>,
    pub variant: DiagonalVariant,
}

impl DiagonalOrderSpec {
    /// `δ_i = i` with lex.
    pub fn lex(grid: &CellGrid, t: usize) -> Self {
        let k = flat_len(grid, t);
        DiagonalOrderSpec { delta: (1..=k).collect(), variant: DiagonalVariant::Lex }
    }

    /// `δ_i = t' - i + 2` with degrevlex.
    pub fn revlex(grid: &CellGrid, t: usize) -> Self {
        let k = flat_len(grid, t);
        DiagonalOrderSpec { delta: (1..=k).rev().collect(), variant: DiagonalVariant::RevLex }
    }

    fn validate(&self, k: usize) -> Result<()> {
        let mut seen = vec![false; k + 1];
        for &d in &self.delta {
            if d == 0 || d > k || seen[d] {
                return invalid(format!("delta {:?} is not a permutation of 1..={k}", self.delta));
            }
            seen[d] = true;
        }
        if self.delta.len() != k {
            return invalid(format!("delta {:?} must have length {k}", self.delta));
        }
        Ok(())
    }
}

/// Which product of a switched pair leads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Main,
    Anti,
}

/// Certificate of a failed t-diagonal check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalViolation {
    pub a: IndexTuple,
    pub b: IndexTuple,
    /// Flattened coordinates `δ_i` and `δ_j` (1-based).
    pub i: usize,
    pub j: usize,
    pub expected: Orientation,
}

impl fmt::Display for DiagonalViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pair a={}, b={} with i={}, j={} breaks the {:?} orientation",
            self.a, self.b, self.i, self.j, self.expected
        )
    }
}

/// A checked t-diagonal order.
#[derive(Clone, Debug)]
pub struct DiagonalOrder {
    pub spec: DiagonalOrderSpec,
    pub order: MonomialOrder,
    pub orientation: Orientation,
}

fn flat_len(grid: &CellGrid, t: usize) -> usize {
    let n = grid.shape().n();
    t.min(n.saturating_sub(1)) + 1
}

fn flat_t(grid: &CellGrid, t: usize) -> usize {
    t.min(grid.shape().n().saturating_sub(1))
}

/// Components switched together when flattened coordinate `j` is switched.
fn flat_component(grid: &CellGrid, t: usize, j: usize) -> ComponentSet {
    let tp = flat_t(grid, t);
    let n = grid.shape().n();
    if j <= tp {
        ComponentSet::single(j)
    } else {
        ComponentSet((tp + 1..=n).fold(0u64, |acc, c| acc | 1u64 << (c - 1)))
    }
}

fn flattened(grid: &CellGrid, t: usize) -> Vec<IndexTuple> {
    let tp = flat_t(grid, t);
    grid.cells().iter().map(|c| flatten_at(grid.shape().dims(), tp, c)).collect()
}

/// Builds the order of `spec` and runs the full defining-property check.
pub fn make_t_diagonal_order(spec: DiagonalOrderSpec, grid: &CellGrid, t: usize) -> Result<DiagonalOrder> {
    spec.validate(flat_len(grid, t))?;
    let flat = flattened(grid, t);
    let key = |x: usize| -> Vec<usize> { spec.delta.iter().map(|&d| flat[x].at(d)).collect() };
    let mut vars: Vec<usize> = (0..grid.size()).collect();
    vars.sort_by_key(|&x| key(x));
    let order = match spec.variant {
        DiagonalVariant::Lex => MonomialOrder::lex_with(vars, grid.size())?,
        DiagonalVariant::RevLex => MonomialOrder::degrevlex_with(vars, grid.size())?,
    };
    match check_t_diagonal(&order, grid, t, &spec.delta)? {
        Ok(orientation) => Ok(DiagonalOrder { spec, order, orientation }),
        Err(v) => Err(Error::DiagonalViolation(v.to_string())),
    }
}

/// Exhaustive t-diagonal check of `ord` for the permutation `delta`.
///
/// The orientation is fixed by the first checked configuration; the first
/// configuration disagreeing with it is returned as the certificate.
pub fn check_t_diagonal(
    ord: &MonomialOrder,
    grid: &CellGrid,
    t: usize,
    delta: &[usize],
) -> Result<std::result::Result<Orientation, DiagonalViolation>> {
    let k = flat_len(grid, t);
    DiagonalOrderSpec { delta: delta.to_vec(), variant: DiagonalVariant::Lex }.validate(k)?;
    let flat = flattened(grid, t);
    let size = grid.size();
    let mut orientation: Option<Orientation> = None;
    for x in 0..size {
        for y in 0..size {
            if x == y {
                continue;
            }
            let (fa, fb) = (&flat[x], &flat[y]);
            let Some(p) = delta.iter().position(|&d| fa.at(d) != fb.at(d)) else { continue };
            let i = delta[p];
            for &j in &delta[p + 1..] {
                if fa.at(j) <= fb.at(j) {
                    continue;
                }
                let l = flat_component(grid, t, j);
                let c = grid.switch(l, x, y);
                let d = grid.switch(l, y, x);
                let here = Monomial::from_vars(size, &[x, y]);
                let there = Monomial::from_vars(size, &[c, d]);
                let leads = ord.cmp(&here, &there) == Ordering::Greater;
                let concordant = fa.at(i) > fb.at(i);
                let seen = if leads == concordant { Orientation::Main } else { Orientation::Anti };
                match orientation {
                    None => orientation = Some(seen),
                    Some(o) if o == seen => {}
                    Some(o) => {
                        return Ok(Err(DiagonalViolation {
                            a: grid.cell(x).clone(),
                            b: grid.cell(y).clone(),
                            i,
                            j,
                            expected: o,
                        }))
                    }
                }
            }
        }
    }
    Ok(Ok(orientation.unwrap_or(Orientation::Main)))
}
