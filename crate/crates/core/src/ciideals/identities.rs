//! Symbolic rewriting identities between minors, checked by expansion or by
//! normal forms.

use crate::error::{contract, Result};
use crate::indexcomb::{CellGrid, ComponentSet, IndexTuple};
use crate::polyengine::{GroebnerBasis, Polynomial};

use super::minor_ids;

fn var(grid: &CellGrid, x: usize) -> Polynomial {
    Polynomial::var(grid.size(), x)
}

fn f(grid: &CellGrid, i: usize, x: usize, y: usize) -> Polynomial {
    minor_ids(grid, ComponentSet::single(i), x, y)
}

fn ids(grid: &CellGrid, cells: &[&IndexTuple]) -> Result<Vec<usize>> {
    cells.iter().map(|c| grid.id(c)).collect()
}

fn check_component(grid: &CellGrid, i: usize) -> Result<()> {
    if i == 0 || i > grid.shape().n() {
        return contract(format!("component {i} outside 1..={}", grid.shape().n()));
    }
    Ok(())
}

/// `x_{a1} f_{i,a0,b} - x_b f_{i,a0,a1}
///  = x_{s(i,a0,a1)} f_{i,s(i,a1,a0),b} - x_{s(i,b,a0)} f_{i,a1,s(i,a0,b)}`.
pub fn verify_reduction_identity(
    grid: &CellGrid,
    a0: &IndexTuple,
    a1: &IndexTuple,
    b: &IndexTuple,
    i: usize,
) -> Result<bool> {
    check_component(grid, i)?;
    let v = ids(grid, &[a0, a1, b])?;
    let (a0, a1, b) = (v[0], v[1], v[2]);
    let s = |x, y| grid.switch1(i, x, y);
    let lhs = var(grid, a1).mul(&f(grid, i, a0, b)).sub(&var(grid, b).mul(&f(grid, i, a0, a1)));
    let rhs =
        var(grid, s(a0, a1)).mul(&f(grid, i, s(a1, a0), b)).sub(&var(grid, s(b, a0)).mul(&f(grid, i, a1, s(a0, b))));
    Ok(lhs == rhs)
}

/// For `a_i = c_i`: `x_a f_{i,b,c} = x_c f_{i,a,b} + x_{s(i,b,a)} f_{i,c,s(i,a,b)}`.
///
/// With a minus sign in front of the last term the equation only holds when
/// that minor vanishes; see [`switch_difference_terms`].
pub fn verify_switch_difference_identity(
    grid: &CellGrid,
    a: &IndexTuple,
    b: &IndexTuple,
    c: &IndexTuple,
    i: usize,
) -> Result<bool> {
    let (lhs, first, second) = switch_difference_terms(grid, a, b, c, i)?;
    Ok(lhs == first.add(&second))
}

/// The three products `x_a f_{i,b,c}`, `x_c f_{i,a,b}` and
/// `x_{s(i,b,a)} f_{i,c,s(i,a,b)}` for `a_i = c_i`.
pub fn switch_difference_terms(
    grid: &CellGrid,
    a: &IndexTuple,
    b: &IndexTuple,
    c: &IndexTuple,
    i: usize,
) -> Result<(Polynomial, Polynomial, Polynomial)> {
    check_component(grid, i)?;
    let v = ids(grid, &[a, b, c])?;
    let (a, b, c) = (v[0], v[1], v[2]);
    if grid.entry(a, i) != grid.entry(c, i) {
        return contract(format!("entries {i} of a and c differ"));
    }
    let lhs = var(grid, a).mul(&f(grid, i, b, c));
    let first = var(grid, c).mul(&f(grid, i, a, b));
    let second = var(grid, grid.switch1(i, b, a)).mul(&f(grid, i, c, grid.switch1(i, a, b)));
    Ok((lhs, first, second))
}

/// `f_{K,a,b} = Σ_r f_{k_r, s(K_r,a,b), s(K_r,b,a)}` with `k_1 < k_2 < ...`
/// the members of `K` and `K_r = {k_1, ..., k_{r-1}}`.
pub fn verify_telescoping_identity(grid: &CellGrid, k: ComponentSet, a: &IndexTuple, b: &IndexTuple) -> Result<bool> {
    if k.max_component() > grid.shape().n() {
        return contract("component set outside [n]");
    }
    let v = ids(grid, &[a, b])?;
    let (a, b) = (v[0], v[1]);
    let lhs = minor_ids(grid, k, a, b);
    let mut rhs = Polynomial::zero(grid.size());
    let mut prefix = ComponentSet::empty();
    for kr in k.iter() {
        let x = grid.switch(prefix, a, b);
        let y = grid.switch(prefix, b, a);
        rhs = rhs.add(&f(grid, kr, x, y));
        prefix = ComponentSet(prefix.0 | ComponentSet::single(kr).0);
    }
    Ok(lhs == rhs)
}

/// Path products: if consecutive cells of `path = (a_0, ..., a_k)` differ in
/// exactly one component `l_j != i`, and `a_k`, `b` differ exactly in `i`
/// and one more component, then `x_{a_1} ... x_{a_k} f_{i,a_0,b}` lies in
/// `I<t>`. Returns whether its normal form against `gb` (a basis of `I<t>`)
/// vanishes.
pub fn verify_path_product(
    grid: &CellGrid,
    path: &[IndexTuple],
    b: &IndexTuple,
    i: usize,
    t: usize,
    gb: &GroebnerBasis,
) -> Result<bool> {
    check_component(grid, i)?;
    if i > t {
        return contract(format!("component {i} exceeds t = {t}"));
    }
    if path.is_empty() {
        return contract("empty path");
    }
    let p: Vec<usize> = path.iter().map(|c| grid.id(c)).collect::<Result<_>>()?;
    let b = grid.id(b)?;
    for w in p.windows(2) {
        let (x, y) = (w[0], w[1]);
        if grid.distance(x, y) != 1 || grid.entry(x, i) != grid.entry(y, i) {
            return contract("path steps must change exactly one component other than i");
        }
    }
    let last = *p.last().unwrap();
    if grid.distance(last, b) != 2 || grid.entry(last, i) == grid.entry(b, i) {
        return contract("the path must end at distance 2 from b, differing in component i");
    }
    let mut prod = f(grid, i, p[0], b);
    for &x in &p[1..] {
        prod = prod.mul(&var(grid, x));
    }
    Ok(gb.contains(&prod))
}

/// `x_a f_{i,b,c} f_{j,b,c} ∈ I<t>` when `d(a,b) = 2`, `d(b,c) = 3`,
/// `i, j <= t`, `j != i`, `a_i = c_i != b_i` and `b_j != c_j`. Returns
/// whether the normal form against `gb` (a basis of `I<t>`) vanishes.
#[allow(clippy::too_many_arguments)]
pub fn distance_three_product_membership(
    grid: &CellGrid,
    a: &IndexTuple,
    b: &IndexTuple,
    c: &IndexTuple,
    i: usize,
    j: usize,
    t: usize,
    gb: &GroebnerBasis,
) -> Result<bool> {
    check_component(grid, i)?;
    check_component(grid, j)?;
    let v = ids(grid, &[a, b, c])?;
    let (a, b, c) = (v[0], v[1], v[2]);
    let ok = grid.distance(a, b) == 2
        && grid.distance(b, c) == 3
        && i <= t
        && j <= t
        && i != j
        && grid.entry(a, i) == grid.entry(c, i)
        && grid.entry(b, i) != grid.entry(a, i)
        && grid.entry(b, j) != grid.entry(c, j);
    if !ok {
        return contract("hypotheses d(a,b)=2, d(b,c)=3, a_i=c_i!=b_i, b_j!=c_j, i!=j<=t do not hold");
    }
    let prod = var(grid, a).mul(&f(grid, i, b, c)).mul(&f(grid, j, b, c));
    Ok(gb.contains(&prod))
}
