//! t-switchable subsets of `N`, their connectedness classes and maximality.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{contract, invalid, Error, Result};
use crate::indexcomb::{CellGrid, ComponentSet, IndexTuple};

/// Default cap on `|N|` for exhaustive subset enumeration.
pub const DEFAULT_CELL_BUDGET: usize = 20;

/// Iterates the set bits of a mask in increasing order.
pub fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let k = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(k)
        }
    })
}

/// Disjoint-set forest with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Switchability closure rules as `(pair, image)` masks: if `pair` lies in the
/// set then so must `image`.
pub fn switch_rules(grid: &CellGrid, t: usize) -> Vec<(u64, u64)> {
    let size = grid.size();
    let mut rules = Vec::new();
    for x in 0..size {
        for y in x + 1..size {
            if grid.distance(x, y) != 2 {
                continue;
            }
            for i in 1..=t {
                if grid.entry(x, i) == grid.entry(y, i) {
                    continue;
                }
                let c = grid.switch1(i, x, y);
                let d = grid.switch1(i, y, x);
                rules.push(((1u64 << x) | (1u64 << y), (1u64 << c) | (1u64 << d)));
            }
        }
    }
    rules.sort_unstable();
    rules.dedup();
    rules
}

fn satisfies(rules: &[(u64, u64)], mask: u64) -> bool {
    rules.iter().all(|&(p, q)| mask & p != p || mask & q == q)
}

/// t-switchability check for an arbitrary cell mask.
pub fn is_switchable(grid: &CellGrid, t: usize, mask: u64) -> bool {
    satisfies(&switch_rules(grid, t), mask)
}

/// Smallest t-switchable superset of `mask`.
pub fn switchable_closure(grid: &CellGrid, t: usize, mask: u64) -> u64 {
    let rules = switch_rules(grid, t);
    closure_with(&rules, mask)
}

fn closure_with(rules: &[(u64, u64)], mut mask: u64) -> u64 {
    loop {
        let mut next = mask;
        for &(p, q) in rules {
            if next & p == p {
                next |= q;
            }
        }
        if next == mask {
            return mask;
        }
        mask = next;
    }
}

/// Connectedness classes of `mask` (distance-one adjacency inside the set),
/// ordered by smallest member.
pub fn class_masks(grid: &CellGrid, mask: u64) -> Vec<u64> {
    let mut uf = UnionFind::new(grid.size());
    for x in bits(mask) {
        for y in bits(grid.neighbors(x) & mask) {
            if y > x {
                uf.union(x, y);
            }
        }
    }
    let mut by_root: Vec<u64> = vec![0; grid.size()];
    for x in bits(mask) {
        let r = uf.find(x);
        by_root[r] |= 1u64 << x;
    }
    let mut out: Vec<u64> = by_root.into_iter().filter(|&m| m != 0).collect();
    out.sort_by_key(|m| m.trailing_zeros());
    out
}

/// Canonical set order: size first, then the sorted member lists compared
/// lexicographically.
pub fn canonical_cmp(a: u64, b: u64) -> Ordering {
    a.count_ones().cmp(&b.count_ones()).then_with(|| {
        let diff = a ^ b;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff.trailing_zeros();
        if a >> low & 1 == 1 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    })
}

/// A subset `S` of `N` with its switchability flag and lazily computed classes.
#[derive(Clone)]
pub struct SwitchableSet {
    grid: Arc<CellGrid>,
    t: usize,
    members: u64,
    switchable: bool,
    classes: OnceLock<Vec<u64>>,
}

impl fmt::Debug for SwitchableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.cells().iter().map(|c| c.to_string()).collect();
        write!(f, "SwitchableSet(t={}, {{{}}})", self.t, cells.join(", "))
    }
}

impl PartialEq for SwitchableSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && self.t == other.t && self.grid.shape() == other.grid.shape()
    }
}

impl Eq for SwitchableSet {}

impl Serialize for SwitchableSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let cells = self.cells();
        let mut seq = serializer.serialize_seq(Some(cells.len()))?;
        for c in &cells {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl SwitchableSet {
    /// Wraps a cell mask, using the grid's `t`.
    pub fn from_mask(grid: Arc<CellGrid>, members: u64) -> Result<Self> {
        let t = grid.shape().t();
        Self::with_t(grid, t, members)
    }

    /// Wraps a cell mask for an explicit `t`.
    pub fn with_t(grid: Arc<CellGrid>, t: usize, members: u64) -> Result<Self> {
        if members & !grid.full_mask() != 0 {
            return invalid("cell mask has bits outside the shape");
        }
        if t == 0 || t > grid.shape().n() {
            return invalid(format!("t = {t} outside 1..={}", grid.shape().n()));
        }
        let switchable = is_switchable(&grid, t, members);
        Ok(SwitchableSet { grid, t, members, switchable, classes: OnceLock::new() })
    }

    /// Builds a set from explicit cells.
    pub fn from_cells(grid: Arc<CellGrid>, cells: &[IndexTuple]) -> Result<Self> {
        let mut mask = 0u64;
        for c in cells {
            mask |= 1u64 << grid.id(c)?;
        }
        Self::from_mask(grid, mask)
    }

    /// The whole index set `N`.
    pub fn full(grid: Arc<CellGrid>) -> Self {
        let m = grid.full_mask();
        Self::from_mask(grid, m).expect("full mask is valid")
    }

    pub fn grid(&self) -> &Arc<CellGrid> {
        &self.grid
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn mask(&self) -> u64 {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.members == 0
    }

    pub fn contains_id(&self, x: usize) -> bool {
        self.members >> x & 1 == 1
    }

    pub fn contains(&self, a: &IndexTuple) -> bool {
        self.grid.id(a).map(|x| self.contains_id(x)).unwrap_or(false)
    }

    /// Members in canonical order.
    pub fn cells(&self) -> Vec<IndexTuple> {
        bits(self.members).map(|x| self.grid.cell(x).clone()).collect()
    }

    pub fn is_switchable(&self) -> bool {
        self.switchable
    }

    /// Connectedness classes as masks, ordered by smallest member.
    pub fn classes(&self) -> &[u64] {
        self.classes.get_or_init(|| class_masks(&self.grid, self.members))
    }

    /// Class index of each cell, `None` outside the set.
    pub fn labels(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.grid.size()];
        for (k, &m) in self.classes().iter().enumerate() {
            for x in bits(m) {
                out[x] = Some(k);
            }
        }
        out
    }

    pub fn connected(&self, x: usize, y: usize) -> bool {
        self.classes().iter().any(|&m| m >> x & 1 == 1 && m >> y & 1 == 1)
    }

    /// Connected pairs `x <= y` together with the nonzero quads
    /// `(x, y, s(i,x,y), s(i,y,x))`, `i <= t`, that give minors of `Ĩ_S`.
    pub fn minor_quads(&self) -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for &class in self.classes() {
            for x in bits(class) {
                for y in bits(class) {
                    if y <= x {
                        continue;
                    }
                    for i in 1..=self.t {
                        let c = self.grid.switch1(i, x, y);
                        let d = self.grid.switch1(i, y, x);
                        if (c == x && d == y) || (c == y && d == x) {
                            continue;
                        }
                        out.push([x, y, c, d]);
                    }
                }
            }
        }
        out
    }

    fn require_switchable(&self) -> Result<()> {
        if !self.switchable {
            return contract(format!("{self:?} is not {}-switchable", self.t));
        }
        Ok(())
    }
}

/// Combinatorial decision of `P_T ⊆ P_S` for t-switchable `T`, `S`.
///
/// `x_a` with `a ∉ T` lies in `P_S` iff `a ∉ S`. A nonzero minor
/// `x_a x_b - x_c x_d` of `Ĩ_T` reduces modulo `Var_S` to zero, to a monomial
/// in `S`-variables (never in `P_S`), or to itself, which lies in `Ĩ_S`
/// exactly when all four cells share one class of `S`.
pub fn prime_contains(t_quads: &[[usize; 4]], t_mask: u64, s_mask: u64, s_labels: &[Option<usize>]) -> bool {
    if s_mask & !t_mask != 0 {
        return false;
    }
    for &[a, b, c, d] in t_quads {
        let ab = s_mask >> a & 1 == 1 && s_mask >> b & 1 == 1;
        let cd = s_mask >> c & 1 == 1 && s_mask >> d & 1 == 1;
        if ab != cd {
            return false;
        }
        if ab {
            let la = s_labels[a];
            if la != s_labels[b] || la != s_labels[c] || la != s_labels[d] {
                return false;
            }
        }
    }
    true
}

/// `P_T ⊆ P_S` for two sets on the same grid.
pub fn p_contains(t_set: &SwitchableSet, s_set: &SwitchableSet) -> bool {
    prime_contains(&t_set.minor_quads(), t_set.mask(), s_set.mask(), &s_set.labels())
}

/// Outcome of a maximality test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Maximality {
    pub maximal: bool,
    /// A t-switchable `T ⊋ S` with `P_T ⊆ P_S` when not maximal.
    pub witness: Option<u64>,
}

/// Maximality reduced to one containment: `S` is maximal iff no
/// t-switchable `T ⊋ S` has `P_T ⊆ P_S`. The first such `T` in canonical
/// order is returned as certificate.
pub fn is_maximal(s: &SwitchableSet) -> Result<Maximality> {
    s.require_switchable()?;
    let grid = s.grid();
    let free = grid.full_mask() & !s.mask();
    if free.count_ones() > 24 {
        return Err(Error::Resource(format!(
            "{} cells outside S; superset search is limited to 24",
            free.count_ones()
        )));
    }
    let rules = switch_rules(grid, s.t());
    let labels = s.labels();
    let free_bits: Vec<usize> = bits(free).collect();
    let mut best: Option<u64> = None;
    for sub in 1u64..(1u64 << free_bits.len()) {
        let mut add = 0u64;
        for (k, &x) in free_bits.iter().enumerate() {
            if sub >> k & 1 == 1 {
                add |= 1u64 << x;
            }
        }
        let tm = s.mask() | add;
        if let Some(b) = best {
            if canonical_cmp(tm, b) != Ordering::Less {
                continue;
            }
        }
        if !satisfies(&rules, tm) {
            continue;
        }
        let t_set =
            SwitchableSet { grid: grid.clone(), t: s.t(), members: tm, switchable: true, classes: OnceLock::new() };
        if prime_contains(&t_set.minor_quads(), tm, s.mask(), &labels) {
            best = Some(tm);
        }
    }
    Ok(Maximality { maximal: best.is_none(), witness: best })
}

/// All t-switchable subsets of the grid, canonically ordered.
pub fn enumerate_switchable(grid: &CellGrid, t: usize, cell_budget: usize) -> Result<Vec<u64>> {
    check_budget(grid, cell_budget)?;
    let rules = switch_rules(grid, t);
    let total = 1u64 << grid.size();
    let mut out: Vec<u64> = (0..total).into_par_iter().filter(|&m| satisfies(&rules, m)).collect();
    out.sort_by(|&a, &b| canonical_cmp(a, b));
    Ok(out)
}

fn check_budget(grid: &CellGrid, cell_budget: usize) -> Result<()> {
    if grid.size() > cell_budget {
        return Err(Error::Resource(format!(
            "shape {} has {} cells, above the enumeration budget of {cell_budget}; raise it with --cell-budget",
            grid.shape(),
            grid.size()
        )));
    }
    Ok(())
}

/// Maximal t-switchable sets (`t` taken from the grid's shape), canonically
/// ordered.
pub fn enumerate_maximal(grid: Arc<CellGrid>, cell_budget: usize) -> Result<Vec<SwitchableSet>> {
    let t = grid.shape().t();
    let all = enumerate_switchable(&grid, t, cell_budget)?;
    let info: Vec<(u64, Vec<[usize; 4]>, Vec<Option<usize>>)> = all
        .par_iter()
        .map(|&m| {
            let s = SwitchableSet { grid: grid.clone(), t, members: m, switchable: true, classes: OnceLock::new() };
            (m, s.minor_quads(), s.labels())
        })
        .collect();
    let maximal: Vec<u64> = info
        .par_iter()
        .filter(|(s_mask, _, s_labels)| {
            !info.iter().any(|(t_mask, t_quads, _)| {
                *t_mask != *s_mask && t_mask & s_mask == *s_mask && prime_contains(t_quads, *t_mask, *s_mask, s_labels)
            })
        })
        .map(|(m, _, _)| *m)
        .collect();
    let mut maximal = maximal;
    maximal.sort_by(|&a, &b| canonical_cmp(a, b));
    Ok(maximal
        .into_iter()
        .map(|m| SwitchableSet { grid: grid.clone(), t, members: m, switchable: true, classes: OnceLock::new() })
        .collect())
}

/// Connected-switch probe: `s(L, path[i], path[j])` lies in `S` and is connected to
/// `path[0]`.
pub fn verify_lemma_connected(
    s: &SwitchableSet,
    path: &[IndexTuple],
    l: ComponentSet,
    i: usize,
    j: usize,
) -> Result<bool> {
    if path.is_empty() || i >= path.len() || j >= path.len() {
        return invalid("path positions out of range");
    }
    let grid = s.grid();
    let mut ids = Vec::with_capacity(path.len());
    for (k, c) in path.iter().enumerate() {
        let x = grid.id(c)?;
        if !s.contains_id(x) {
            return invalid(format!("path cell {c} is not in S"));
        }
        if k > 0 && grid.distance(ids[k - 1], x) > 1 {
            return invalid(format!("path step {} -> {c} changes more than one component", path[k - 1]));
        }
        ids.push(x);
    }
    if l.max_component() > grid.shape().n() {
        return invalid("component set outside [n]");
    }
    let r = grid.switch(l, ids[i], ids[j]);
    Ok(s.contains_id(r) && s.connected(r, ids[0]))
}

/// Per-component block of one connectedness class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassBlocks {
    pub blocks: Vec<Vec<usize>>,
}

/// Product form `T_i = T_i1 x ... x T_in` of the classes of an n-switchable set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    pub classes: Vec<ClassBlocks>,
}

fn blocks_of(grid: &CellGrid, class: u64) -> Vec<Vec<usize>> {
    let n = grid.shape().n();
    let mut blocks = vec![Vec::new(); n];
    for x in bits(class) {
        for i in 1..=n {
            blocks[i - 1].push(grid.entry(x, i));
        }
    }
    for b in &mut blocks {
        b.sort_unstable();
        b.dedup();
    }
    blocks
}

fn product_size(blocks: &[Vec<usize>]) -> usize {
    blocks.iter().map(Vec::len).product()
}

/// Number of components on which two class blocks are disjoint.
pub fn class_distance(a: &ClassBlocks, b: &ClassBlocks) -> usize {
    a.blocks.iter().zip(&b.blocks).filter(|(x, y)| !x.iter().any(|v| y.contains(v))).count()
}

/// Block decomposition of an n-switchable set.
pub fn block_decomposition(s: &SwitchableSet) -> Result<BlockDecomposition> {
    let grid = s.grid();
    let n = grid.shape().n();
    if !is_switchable(grid, n, s.mask()) {
        return contract(format!("{s:?} is not {n}-switchable"));
    }
    let mut classes = Vec::new();
    for &class in s.classes() {
        let blocks = blocks_of(grid, class);
        if product_size(&blocks) != class.count_ones() as usize {
            return Err(Error::Internal(format!("class {class:#x} is not a product of blocks")));
        }
        classes.push(ClassBlocks { blocks });
    }
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            if class_distance(&classes[i], &classes[j]) < 3 {
                return Err(Error::Internal(format!("classes {i} and {j} are closer than 3")));
            }
        }
    }
    Ok(BlockDecomposition { classes })
}

/// Disjoint bipartite blocks `(T_i2, T_i3)` of a maximal 1-switchable set for `n = 3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinkGraph {
    pub parts: Vec<(Vec<usize>, Vec<usize>)>,
}

impl FinkGraph {
    /// `∪ [r1] x T_i2 x T_i3` as a cell mask.
    pub fn to_mask(&self, grid: &CellGrid) -> u64 {
        let mut mask = 0u64;
        for (t2, t3) in &self.parts {
            for x in 0..grid.size() {
                if t2.contains(&grid.entry(x, 2)) && t3.contains(&grid.entry(x, 3)) {
                    mask |= 1u64 << x;
                }
            }
        }
        mask
    }
}

/// Fink's bipartite description of a maximal 1-switchable set with `n = 3`.
pub fn fink_graph(s: &SwitchableSet) -> Result<FinkGraph> {
    let grid = s.grid();
    if s.t() != 1 || grid.shape().n() != 3 {
        return contract("fink_graph needs t = 1 and n = 3");
    }
    if !is_maximal(s)?.maximal {
        return contract(format!("{s:?} is not maximal"));
    }
    let r1 = grid.shape().dims()[0];
    let mut parts = Vec::new();
    for &class in s.classes() {
        let blocks = blocks_of(grid, class);
        if blocks[0].len() != r1 || product_size(&blocks) != class.count_ones() as usize {
            return Err(Error::Internal(format!("class {class:#x} is not of the form [r1] x T2 x T3")));
        }
        parts.push((blocks[1].clone(), blocks[2].clone()));
    }
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let clash2 = parts[i].0.iter().any(|v| parts[j].0.contains(v));
            let clash3 = parts[i].1.iter().any(|v| parts[j].1.contains(v));
            if clash2 || clash3 {
                return Err(Error::Internal(format!("parts {i} and {j} share a coordinate")));
            }
        }
    }
    Ok(FinkGraph { parts })
}
