//! Cell indices of an `r1 x ... x rn` hypermatrix.
//!
//! Everything here is 1-based. Cells are enumerated in lexicographic order of
//! their entries and that order is the canonical variable order used by every
//! other module.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest number of cells a [`CellGrid`] accepts (cell sets are `u64` masks).
pub const MAX_GRID_CELLS: usize = 64;

/// Dimensions `(r1, ..., rn)` together with the active component count `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawShape")]
pub struct Shape {
    dims: Vec<usize>,
    t: usize,
}

#[derive(Deserialize)]
struct RawShape {
    dims: Vec<usize>,
    t: usize,
}

impl TryFrom<RawShape> for Shape {
    type Error = Error;
    fn try_from(raw: RawShape) -> Result<Self> {
        Shape::new(raw.dims, raw.t)
    }
}

impl Shape {
    pub fn new(dims: Vec<usize>, t: usize) -> Result<Self> {
        if dims.is_empty() {
            return invalid("shape needs at least one component");
        }
        if dims.contains(&0) {
            return invalid(format!("every dimension must be positive, got {dims:?}"));
        }
        if t == 0 || t > dims.len() {
            return invalid(format!("t must lie in 1..={}, got {t}", dims.len()));
        }
        if dims.len() > 63 {
            return invalid("at most 63 components are supported");
        }
        Ok(Shape { dims, t })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Number of cells `|N|`.
    pub fn size(&self) -> usize {
        self.dims.iter().product()
    }

    /// Same dimensions with a different `t`.
    pub fn with_t(&self, t: usize) -> Result<Shape> {
        Shape::new(self.dims.clone(), t)
    }

    /// `min(t, n-1)`: the component count after merging the tail into one.
    pub fn flat_t(&self) -> usize {
        self.t.min(self.n() - 1)
    }

    /// Dimensions after merging components `t+1..n` into one.
    pub fn flat_dims(&self) -> Vec<usize> {
        flat_dims_at(&self.dims, self.t)
    }

    /// Checks that `a` is a cell of this shape.
    pub fn check(&self, a: &IndexTuple) -> Result<()> {
        if a.len() != self.n() {
            return invalid(format!("tuple {a} has length {}, expected {}", a.len(), self.n()));
        }
        for (k, (&x, &r)) in a.0.iter().zip(&self.dims).enumerate() {
            if x == 0 || x > r {
                return invalid(format!("entry {} of {a} is outside 1..={r}", k + 1));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(|r| r.to_string()).collect();
        write!(f, "{}", dims.join("x"))
    }
}

fn flat_dims_at(dims: &[usize], t: usize) -> Vec<usize> {
    if t >= dims.len() {
        return dims.to_vec();
    }
    let mut out = dims[..t].to_vec();
    out.push(dims[t..].iter().product());
    out
}

/// A cell `a in N`, entries 1-based. Ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexTuple(pub Vec<usize>);

impl IndexTuple {
    pub fn new(entries: Vec<usize>) -> Self {
        IndexTuple(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// Entry `a_i` for 1-based `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1]
    }
}

impl From<Vec<usize>> for IndexTuple {
    fn from(v: Vec<usize>) -> Self {
        IndexTuple(v)
    }
}

impl<const K: usize> From<[usize; K]> for IndexTuple {
    fn from(v: [usize; K]) -> Self {
        IndexTuple(v.to_vec())
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A subset of the components `[n]`, stored as a bit mask (bit `i-1` for `i`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentSet(pub u64);

impl ComponentSet {
    pub fn empty() -> Self {
        ComponentSet(0)
    }

    /// `[n]`.
    pub fn full(n: usize) -> Self {
        ComponentSet(if n >= 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn single(i: usize) -> Self {
        ComponentSet(1u64 << (i - 1))
    }

    /// Builds a set from 1-based component numbers; zero is rejected.
    pub fn from_components(items: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &i in items {
            if i == 0 || i > 64 {
                return invalid(format!("component {i} out of range"));
            }
            bits |= 1u64 << (i - 1);
        }
        Ok(ComponentSet(bits))
    }

    pub fn contains(&self, i: usize) -> bool {
        (1..=64).contains(&i) && self.0 >> (i - 1) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn max_component(&self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// 1-based members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (1..=64).filter(move |&i| bits >> (i - 1) & 1 == 1)
    }

    /// All subsets of this set, in increasing mask order.
    pub fn subsets(&self) -> Vec<ComponentSet> {
        let mut out = Vec::with_capacity(1 << self.len());
        let mut sub = 0u64;
        loop {
            out.push(ComponentSet(sub));
            if sub == self.0 {
                break;
            }
            sub = (sub.wrapping_sub(self.0)) & self.0;
        }
        out
    }
}

/// `s(L, a, b)`: `b`'s entries on the components in `L`, `a`'s elsewhere.
pub fn switch(l: ComponentSet, a: &IndexTuple, b: &IndexTuple) -> Result<IndexTuple> {
    if a.len() != b.len() {
        return invalid(format!("tuples {a} and {b} have different lengths"));
    }
    if l.max_component() > a.len() {
        return invalid(format!("component set reaches {} but n = {}", l.max_component(), a.len()));
    }
    Ok(switch_unchecked(l, a, b))
}

pub(crate) fn switch_unchecked(l: ComponentSet, a: &IndexTuple, b: &IndexTuple) -> IndexTuple {
    IndexTuple(a.0.iter().zip(&b.0).enumerate().map(|(k, (&x, &y))| if l.contains(k + 1) { y } else { x }).collect())
}

/// Hamming distance `d(a, b)`.
pub fn distance(a: &IndexTuple, b: &IndexTuple) -> Result<usize> {
    if a.len() != b.len() {
        return invalid(format!("tuples {a} and {b} have different lengths"));
    }
    Ok(a.0.iter().zip(&b.0).filter(|(x, y)| x != y).count())
}

/// All cells of `shape` in lexicographic order.
pub fn enumerate_cells(shape: &Shape) -> Vec<IndexTuple> {
    let dims = shape.dims();
    let mut out = Vec::with_capacity(shape.size());
    let mut cur = vec![1usize; dims.len()];
    loop {
        out.push(IndexTuple(cur.clone()));
        let mut k = dims.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] < dims[k] {
                cur[k] += 1;
                break;
            }
            cur[k] = 1;
        }
    }
}

/// Merges components `t+1..n` into their 1-based lexicographic rank.
///
/// ```
/// use hyperci::indexcomb::{flatten_tail, IndexTuple, Shape};
/// let shape = Shape::new(vec![2, 2, 2], 1).unwrap();
/// assert_eq!(flatten_tail(&shape, &IndexTuple::from([2, 1, 2])), IndexTuple::from([2, 2]));
/// ```
pub fn flatten_tail(shape: &Shape, a: &IndexTuple) -> IndexTuple {
    flatten_at(shape.dims(), shape.t(), a)
}

pub(crate) fn flatten_at(dims: &[usize], t: usize, a: &IndexTuple) -> IndexTuple {
    if t >= dims.len() {
        return a.clone();
    }
    let mut rank = 0usize;
    for (&x, &r) in a.0[t..].iter().zip(&dims[t..]) {
        rank = rank * r + (x - 1);
    }
    let mut out = a.0[..t].to_vec();
    out.push(rank + 1);
    IndexTuple(out)
}

/// Inverse of [`flatten_tail`].
pub fn unflatten_tail(shape: &Shape, f: &IndexTuple) -> IndexTuple {
    let dims = shape.dims();
    let t = shape.t();
    if t >= dims.len() {
        return f.clone();
    }
    let mut rank = f.0[t] - 1;
    let mut tail = vec![0usize; dims.len() - t];
    for k in (0..tail.len()).rev() {
        let r = dims[t + k];
        tail[k] = rank % r + 1;
        rank /= r;
    }
    let mut out = f.0[..t].to_vec();
    out.extend(tail);
    IndexTuple(out)
}

/// Precomputed cell table for shapes with at most [`MAX_GRID_CELLS`] cells.
///
/// Cells are identified by their position in [`enumerate_cells`].
#[derive(Clone, Debug)]
pub struct CellGrid {
    shape: Shape,
    cells: Vec<IndexTuple>,
    strides: Vec<usize>,
    dist: Vec<u8>,
    adjacent: Vec<u64>,
}

impl CellGrid {
    pub fn new(shape: &Shape) -> Result<Self> {
        let size = shape.size();
        if size > MAX_GRID_CELLS {
            return invalid(format!("shape {shape} has {size} cells; at most {MAX_GRID_CELLS} are supported"));
        }
        let cells = enumerate_cells(shape);
        let n = shape.n();
        let mut strides = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * shape.dims()[k + 1];
        }
        let mut dist = vec![0u8; size * size];
        let mut adjacent = vec![0u64; size];
        for x in 0..size {
            for y in 0..size {
                let d = cells[x].0.iter().zip(&cells[y].0).filter(|(p, q)| p != q).count();
                dist[x * size + y] = d as u8;
                if d == 1 {
                    adjacent[x] |= 1u64 << y;
                }
            }
        }
        Ok(CellGrid { shape: shape.clone(), cells, strides, dist, adjacent })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn size(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[IndexTuple] {
        &self.cells
    }

    pub fn cell(&self, id: usize) -> &IndexTuple {
        &self.cells[id]
    }

    /// Position of `a` in the canonical order.
    pub fn id(&self, a: &IndexTuple) -> Result<usize> {
        self.shape.check(a)?;
        Ok(a.0.iter().zip(&self.strides).map(|(&x, &s)| (x - 1) * s).sum())
    }

    /// Entry of cell `x` in 1-based component `i`.
    pub fn entry(&self, x: usize, i: usize) -> usize {
        self.cells[x].0[i - 1]
    }

    pub fn distance(&self, x: usize, y: usize) -> usize {
        self.dist[x * self.size() + y] as usize
    }

    /// Mask of cells at distance exactly one from `x`.
    pub fn neighbors(&self, x: usize) -> u64 {
        self.adjacent[x]
    }

    /// Id of `s(L, x, y)`.
    pub fn switch(&self, l: ComponentSet, x: usize, y: usize) -> usize {
        let (a, b) = (&self.cells[x].0, &self.cells[y].0);
        let mut id = 0;
        for k in 0..a.len() {
            let e = if l.contains(k + 1) { b[k] } else { a[k] };
            id += (e - 1) * self.strides[k];
        }
        id
    }

    /// Id of `s({i}, x, y)`.
    pub fn switch1(&self, i: usize, x: usize, y: usize) -> usize {
        let k = i - 1;
        let s = self.strides[k];
        let ax = self.cells[x].0[k];
        let by = self.cells[y].0[k];
        x + (by - 1) * s - (ax - 1) * s
    }

    /// Mask with every cell of the shape.
    pub fn full_mask(&self) -> u64 {
        if self.size() == 64 {
            u64::MAX
        } else {
            (1u64 << self.size()) - 1
        }
    }
}
