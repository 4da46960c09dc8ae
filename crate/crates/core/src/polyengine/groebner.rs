//! Buchberger's algorithm with Gebauer–Möller pair pruning.
//!
//! Two engines share the pair bookkeeping: a general one over the rationals
//! and a fast path for ideals generated by monomials and pure binomials
//! `x^u - x^v`, whose S-polynomials and remainders stay of that shape.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::error::{Error, Result};

use super::monomial::Monomial;
use super::order::MonomialOrder;
use super::polynomial::{Coeff, Polynomial};

/// Default cap on the number of critical pairs created in one run.
pub const DEFAULT_PAIR_BUDGET: usize = 1_000_000;

type Term = (Monomial, Coeff);

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    deg: u32,
}

struct PairQueue {
    pairs: Vec<Pair>,
    created: usize,
    budget: usize,
}

impl PairQueue {
    fn new(budget: usize) -> Self {
        PairQueue { pairs: Vec::new(), created: 0, budget }
    }

    /// Gebauer–Möller update after appending element `k`.
    fn update(&mut self, lms: &[Monomial], active: &mut [bool], k: usize) -> Result<()> {
        let h = &lms[k];
        let cands: Vec<(usize, Monomial)> = (0..k).filter(|&i| active[i]).map(|i| (i, lms[i].lcm(h))).collect();
        let mut kept: Vec<(usize, &Monomial, bool)> = Vec::new();
        for (idx, (i, l)) in cands.iter().enumerate() {
            let coprime = lms[*i].is_coprime(h);
            let later = cands[idx + 1..].iter().any(|(_, l2)| l2.divides(l));
            let earlier = kept.iter().any(|(_, l2, _)| l2.divides(l));
            if coprime || (!later && !earlier) {
                kept.push((*i, l, coprime));
            }
        }
        self.pairs.retain(|p| !(h.divides(&p.lcm) && lms[p.i].lcm(h) != p.lcm && lms[p.j].lcm(h) != p.lcm));
        for (i, l, coprime) in kept {
            if !coprime {
                self.created += 1;
                self.pairs.push(Pair { i, j: k, lcm: l.clone(), deg: l.degree() });
            }
        }
        if self.created > self.budget {
            return Err(Error::Resource(format!(
                "critical-pair budget of {} exhausted; raise it with --pair-budget",
                self.budget
            )));
        }
        for i in 0..k {
            if active[i] && h.divides(&lms[i]) {
                active[i] = false;
            }
        }
        active[k] = true;
        Ok(())
    }

    /// Removes the pair of smallest lcm degree, ties by index.
    fn pop(&mut self) -> Option<Pair> {
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| (a.deg, a.i, a.j).cmp(&(b.deg, b.i, b.j)))
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }
}

/// A reduced Gröbner basis for a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    nvars: usize,
    polys: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Monic elements sorted by decreasing leading monomial.
    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].degree() == 0
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|p| p.leading_monomial(&self.order).unwrap()).collect()
    }

    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        normal_form(f, &self.polys, &self.order)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }

    /// Normal form of a single monomial when the basis is binomial.
    pub fn reduce_monomial(&self, m: &Monomial) -> Polynomial {
        normal_form(&Polynomial::monomial(m.clone()), &self.polys, &self.order)
    }

    pub fn is_binomial(&self) -> bool {
        self.polys.iter().all(|p| p.is_monomial() || p.is_pure_binomial())
    }
}

/// Reduced Gröbner basis, using the binomial fast path when it applies.
pub fn buchberger(gens: &[Polynomial], ord: &MonomialOrder, budget: usize) -> Result<GroebnerBasis> {
    let nvars = ring_size(gens)?;
    if gens.iter().all(|g| g.is_zero() || g.is_monomial() || g.is_pure_binomial()) {
        buchberger_binomial(gens, ord, budget, nvars)
    } else {
        buchberger_general(gens, ord, budget, nvars)
    }
}

fn ring_size(gens: &[Polynomial]) -> Result<usize> {
    let n = gens.first().map(|g| g.nvars()).unwrap_or(0);
    if gens.iter().any(|g| g.nvars() != n) {
        return Err(Error::InvalidInput("generators live in rings of different sizes".into()));
    }
    Ok(n)
}

/// Reduced Gröbner basis computed with the general engine.
pub fn buchberger_general(
    gens: &[Polynomial],
    ord: &MonomialOrder,
    budget: usize,
    nvars: usize,
) -> Result<GroebnerBasis> {
    let mut basis: Vec<Vec<Term>> = Vec::new();
    let mut lms: Vec<Monomial> = Vec::new();
    let mut masks: Vec<u64> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut queue = PairQueue::new(budget);

    let add = |t: Vec<Term>,
               basis: &mut Vec<Vec<Term>>,
               lms: &mut Vec<Monomial>,
               masks: &mut Vec<u64>,
               active: &mut Vec<bool>,
               queue: &mut PairQueue|
     -> Result<()> {
        let t = make_monic(t);
        lms.push(t[0].0.clone());
        masks.push(t[0].0.support_mask());
        basis.push(t);
        active.push(false);
        let k = basis.len() - 1;
        queue.update(lms, active, k)
    };

    let mut inputs: Vec<Vec<Term>> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.sorted_terms(ord)).collect();
    inputs.sort_by(|a, b| ord.cmp(&a[0].0, &b[0].0));
    for g in inputs {
        let r = reduce_terms(g, &basis, &masks, &active, ord);
        if !r.is_empty() {
            if r[0].0.is_one() {
                return Ok(unit_basis(ord, nvars));
            }
            add(r, &mut basis, &mut lms, &mut masks, &mut active, &mut queue)?;
        }
    }
    while let Some(p) = queue.pop() {
        let s = spoly_terms(&basis[p.i], &basis[p.j], &p.lcm, ord);
        let r = reduce_terms(s, &basis, &masks, &active, ord);
        if !r.is_empty() {
            if r[0].0.is_one() {
                return Ok(unit_basis(ord, nvars));
            }
            add(r, &mut basis, &mut lms, &mut masks, &mut active, &mut queue)?;
        }
    }
    let kept: Vec<usize> = (0..basis.len()).filter(|&i| active[i]).collect();
    let mut out = Vec::with_capacity(kept.len());
    for &i in &kept {
        let others: Vec<bool> = (0..basis.len()).map(|j| active[j] && j != i).collect();
        let tail: Vec<Term> = basis[i][1..].to_vec();
        let mut r = reduce_terms(tail, &basis, &masks, &others, ord);
        let mut full = vec![basis[i][0].clone()];
        full.append(&mut r);
        out.push(full);
    }
    Ok(finish(out, ord, nvars))
}

fn unit_basis(ord: &MonomialOrder, nvars: usize) -> GroebnerBasis {
    GroebnerBasis { order: ord.clone(), nvars, polys: vec![Polynomial::one(nvars)] }
}

fn finish(mut polys: Vec<Vec<Term>>, ord: &MonomialOrder, nvars: usize) -> GroebnerBasis {
    polys.sort_by(|a, b| ord.cmp(&b[0].0, &a[0].0));
    let polys = polys.into_iter().map(|t| Polynomial::from_terms(nvars, t)).collect();
    GroebnerBasis { order: ord.clone(), nvars, polys }
}

fn make_monic(mut t: Vec<Term>) -> Vec<Term> {
    let lc = t[0].1.clone();
    if !lc.is_one() {
        let inv = lc.recip();
        for term in &mut t {
            term.1 = &term.1 * &inv;
        }
    }
    t
}

/// `p - c*m*g` for descending term lists, where the leading terms cancel.
fn sub_scaled(p: &[Term], c: &Coeff, m: &Monomial, g: &[Term], ord: &MonomialOrder) -> Vec<Term> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let scaled = |t: &Term| (t.0.mul(m), &t.1 * c);
    let mut gj: Option<Term> = g.first().map(scaled);
    while i < p.len() || gj.is_some() {
        let cmp = match (&p.get(i), &gj) {
            (Some(a), Some(b)) => ord.cmp(&a.0, &b.0),
            (Some(_), None) => Ordering::Greater,
            _ => Ordering::Less,
        };
        match cmp {
            Ordering::Greater => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let (mm, cc) = gj.take().unwrap();
                out.push((mm, -cc));
                j += 1;
                gj = g.get(j).map(scaled);
            }
            Ordering::Equal => {
                let (mm, cc) = gj.take().unwrap();
                let v = &p[i].1 - cc;
                if !v.is_zero() {
                    out.push((mm, v));
                }
                i += 1;
                j += 1;
                gj = g.get(j).map(scaled);
            }
        }
    }
    out
}

fn find_divisor(m: &Monomial, lms_of: &[Vec<Term>], masks: &[u64], active: &[bool]) -> Option<usize> {
    let mm = m.support_mask();
    (0..lms_of.len()).find(|&k| active[k] && masks[k] & !mm == 0 && lms_of[k][0].0.divides(m))
}

/// Full reduction of a descending term list; the result is descending.
fn reduce_terms(
    mut p: Vec<Term>,
    basis: &[Vec<Term>],
    masks: &[u64],
    active: &[bool],
    ord: &MonomialOrder,
) -> Vec<Term> {
    let mut rem: Vec<Term> = Vec::new();
    let mut start = 0;
    while start < p.len() {
        let m = &p[start].0;
        match find_divisor(m, basis, masks, active) {
            Some(k) => {
                let g = &basis[k];
                let q = g[0].0.quotient_of(m).unwrap();
                let coef = &p[start].1 / &g[0].1;
                p = sub_scaled(&p[start + 1..], &coef, &q, &g[1..], ord);
                start = 0;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    rem
}

/// S-polynomial of two descending term lists with the given lcm.
fn spoly_terms(f: &[Term], g: &[Term], lcm: &Monomial, ord: &MonomialOrder) -> Vec<Term> {
    let qf = f[0].0.quotient_of(lcm).unwrap();
    let qg = g[0].0.quotient_of(lcm).unwrap();
    let inv_f = f[0].1.recip();
    let a: Vec<Term> = f[1..].iter().map(|(m, c)| (m.mul(&qf), c * &inv_f)).collect();
    sub_scaled(&a, &g[0].1.recip(), &qg, &g[1..], ord)
}

/// Division remainder of `f` by the list `g` under `ord`: every term is
/// reduced by the first element whose leading monomial divides it.
pub fn normal_form(f: &Polynomial, g: &[Polynomial], ord: &MonomialOrder) -> Polynomial {
    let basis: Vec<Vec<Term>> = g.iter().filter(|p| !p.is_zero()).map(|p| p.sorted_terms(ord)).collect();
    let masks: Vec<u64> = basis.iter().map(|t| t[0].0.support_mask()).collect();
    let active = vec![true; basis.len()];
    let rem = reduce_terms(f.sorted_terms(ord), &basis, &masks, &active, ord);
    Polynomial::from_terms(f.nvars(), rem)
}

#[derive(Clone, Debug)]
enum BinElem {
    Mono(Monomial),
    /// `lead - tail` with `lead > tail`.
    Diff(Monomial, Monomial),
}

impl BinElem {
    fn lead(&self) -> &Monomial {
        match self {
            BinElem::Mono(m) | BinElem::Diff(m, _) => m,
        }
    }

    fn from_pair(a: Option<Monomial>, b: Option<Monomial>, ord: &MonomialOrder) -> Option<BinElem> {
        match (a, b) {
            (None, None) => None,
            (Some(m), None) | (None, Some(m)) => Some(BinElem::Mono(m)),
            (Some(a), Some(b)) => match ord.cmp(&a, &b) {
                Ordering::Equal => None,
                Ordering::Greater => Some(BinElem::Diff(a, b)),
                Ordering::Less => Some(BinElem::Diff(b, a)),
            },
        }
    }

    fn to_poly(&self) -> Polynomial {
        match self {
            BinElem::Mono(m) => Polynomial::monomial(m.clone()),
            BinElem::Diff(a, b) => Polynomial::binomial(a.clone(), b.clone()),
        }
    }
}

/// Normal monomial of `m`, or `None` when it reduces to zero.
fn bin_nf(mut m: Monomial, basis: &[BinElem], masks: &[u64], active: &[usize]) -> Option<Monomial> {
    'outer: loop {
        let mm = m.support_mask();
        for &k in active {
            if masks[k] & !mm != 0 {
                continue;
            }
            let lead = basis[k].lead();
            if let Some(q) = lead.quotient_of(&m) {
                match &basis[k] {
                    BinElem::Mono(_) => return None,
                    BinElem::Diff(_, t) => {
                        m = q.mul(t);
                        continue 'outer;
                    }
                }
            }
        }
        return Some(m);
    }
}

fn bin_reduce(e: &BinElem, basis: &[BinElem], masks: &[u64], active: &[usize], ord: &MonomialOrder) -> Option<BinElem> {
    match e {
        BinElem::Mono(m) => bin_nf(m.clone(), basis, masks, active).map(BinElem::Mono),
        BinElem::Diff(a, b) => {
            let na = bin_nf(a.clone(), basis, masks, active);
            let nb = bin_nf(b.clone(), basis, masks, active);
            BinElem::from_pair(na, nb, ord)
        }
    }
}

fn bin_spoly(f: &BinElem, g: &BinElem, lcm: &Monomial, ord: &MonomialOrder) -> Option<BinElem> {
    let side = |e: &BinElem| -> Option<Monomial> {
        match e {
            BinElem::Mono(_) => None,
            BinElem::Diff(l, t) => Some(l.quotient_of(lcm).unwrap().mul(t)),
        }
    };
    BinElem::from_pair(side(f), side(g), ord)
}

fn to_bin(p: &Polynomial, ord: &MonomialOrder) -> Option<BinElem> {
    match p.terms() {
        [] => None,
        [(m, _)] => Some(BinElem::Mono(m.clone())),
        [(a, _), (b, _)] => BinElem::from_pair(Some(a.clone()), Some(b.clone()), ord),
        _ => unreachable!("binomial engine received a longer polynomial"),
    }
}

/// Reduced Gröbner basis computed with the binomial engine. Every generator
/// must be zero, a term, or a scalar multiple of a pure binomial.
pub fn buchberger_binomial(
    gens: &[Polynomial],
    ord: &MonomialOrder,
    budget: usize,
    nvars: usize,
) -> Result<GroebnerBasis> {
    if let Some(bad) = gens.iter().find(|g| !(g.is_zero() || g.is_monomial() || g.is_pure_binomial())) {
        return Err(Error::Contract(format!("{bad:?} is not a monomial or pure binomial")));
    }
    let mut basis: Vec<BinElem> = Vec::new();
    let mut lms: Vec<Monomial> = Vec::new();
    let mut masks: Vec<u64> = Vec::new();
    let mut active_flags: Vec<bool> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut queue = PairQueue::new(budget);

    let mut inputs: Vec<BinElem> = gens.iter().filter_map(|g| to_bin(g, ord)).collect();
    inputs.sort_by(|a, b| ord.cmp(a.lead(), b.lead()));
    let mut pending: Vec<BinElem> = inputs;
    pending.reverse();
    loop {
        let next = if let Some(e) = pending.pop() {
            Some(e)
        } else {
            queue.pop().and_then(|p| bin_spoly(&basis[p.i], &basis[p.j], &p.lcm, ord))
        };
        let e = match next {
            Some(e) => e,
            None if pending.is_empty() && queue.pairs.is_empty() => break,
            None => continue,
        };
        let Some(r) = bin_reduce(&e, &basis, &masks, &active, ord) else { continue };
        if r.lead().is_one() {
            return Ok(unit_basis(ord, nvars));
        }
        lms.push(r.lead().clone());
        masks.push(r.lead().support_mask());
        basis.push(r);
        active_flags.push(false);
        let k = basis.len() - 1;
        queue.update(&lms, &mut active_flags, k)?;
        active = (0..basis.len()).filter(|&i| active_flags[i]).collect();
    }
    let mut out = Vec::with_capacity(active.len());
    for &i in &active {
        let others: Vec<usize> = active.iter().copied().filter(|&j| j != i).collect();
        let e = match &basis[i] {
            BinElem::Mono(m) => BinElem::Mono(m.clone()),
            BinElem::Diff(l, t) => match bin_nf(t.clone(), &basis, &masks, &others) {
                Some(t2) => BinElem::Diff(l.clone(), t2),
                None => BinElem::Mono(l.clone()),
            },
        };
        out.push(e);
    }
    out.sort_by(|a, b| ord.cmp(b.lead(), a.lead()));
    Ok(GroebnerBasis { order: ord.clone(), nvars, polys: out.iter().map(BinElem::to_poly).collect() })
}

/// Fast normal forms against a Gröbner basis made of terms and pure binomials.
#[derive(Clone, Debug)]
pub struct BinomialReducer {
    elems: Vec<BinElem>,
    masks: Vec<u64>,
    all: Vec<usize>,
    nvars: usize,
}

impl BinomialReducer {
    /// `None` when some element is not a term or pure binomial.
    pub fn new(gb: &GroebnerBasis) -> Option<Self> {
        if !gb.is_binomial() {
            return None;
        }
        let elems: Vec<BinElem> = gb.polys.iter().filter_map(|p| to_bin(p, &gb.order)).collect();
        let masks = elems.iter().map(|e| e.lead().support_mask()).collect();
        let all = (0..elems.len()).collect();
        Some(BinomialReducer { elems, masks, all, nvars: gb.nvars })
    }

    /// Normal monomial of `m`, `None` when `m` lies in the ideal.
    pub fn nf(&self, m: &Monomial) -> Option<Monomial> {
        bin_nf(m.clone(), &self.elems, &self.masks, &self.all)
    }

    /// Whether `a - b` lies in the ideal.
    pub fn binomial_in(&self, a: &Monomial, b: &Monomial) -> bool {
        self.nf(a) == self.nf(b)
    }

    /// Normal form of an arbitrary polynomial, term by term.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        let terms = f.terms().iter().filter_map(|(m, c)| self.nf(m).map(|r| (r, c.clone()))).collect();
        Polynomial::from_terms(self.nvars, terms)
    }
}

/// Outcome of the Buchberger criterion test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GbCheck {
    pub is_groebner: bool,
    /// First pair `(i, j)` whose S-polynomial leaves a nonzero remainder.
    pub failing_pair: Option<(usize, usize)>,
    pub remainder: Option<Polynomial>,
}

/// Buchberger criterion on an arbitrary list: every S-polynomial of two
/// elements with non-coprime leading monomials must reduce to zero.
pub fn is_groebner_basis(g: &[Polynomial], ord: &MonomialOrder) -> GbCheck {
    let idx: Vec<usize> = (0..g.len()).filter(|&i| !g[i].is_zero()).collect();
    let nvars = g.first().map(|p| p.nvars()).unwrap_or(0);
    let binomial = g.iter().all(|p| p.is_zero() || p.is_monomial() || p.is_pure_binomial());
    if binomial {
        let elems: Vec<BinElem> = idx.iter().map(|&i| to_bin(&g[i], ord).unwrap()).collect();
        let masks: Vec<u64> = elems.iter().map(|e| e.lead().support_mask()).collect();
        let all: Vec<usize> = (0..elems.len()).collect();
        for a in 0..elems.len() {
            for b in a + 1..elems.len() {
                let (la, lb) = (elems[a].lead(), elems[b].lead());
                if la.is_coprime(lb) {
                    continue;
                }
                let l = la.lcm(lb);
                let s = bin_spoly(&elems[a], &elems[b], &l, ord);
                if let Some(r) = s.and_then(|s| bin_reduce(&s, &elems, &masks, &all, ord)) {
                    return GbCheck {
                        is_groebner: false,
                        failing_pair: Some((idx[a], idx[b])),
                        remainder: Some(r.to_poly()),
                    };
                }
            }
        }
    } else {
        let basis: Vec<Vec<Term>> = idx.iter().map(|&i| g[i].sorted_terms(ord)).collect();
        let masks: Vec<u64> = basis.iter().map(|t| t[0].0.support_mask()).collect();
        let active = vec![true; basis.len()];
        for a in 0..basis.len() {
            for b in a + 1..basis.len() {
                let (la, lb) = (&basis[a][0].0, &basis[b][0].0);
                if la.is_coprime(lb) {
                    continue;
                }
                let l = la.lcm(lb);
                let s = spoly_terms(&basis[a], &basis[b], &l, ord);
                let r = reduce_terms(s, &basis, &masks, &active, ord);
                if !r.is_empty() {
                    return GbCheck {
                        is_groebner: false,
                        failing_pair: Some((idx[a], idx[b])),
                        remainder: Some(Polynomial::from_terms(nvars, r)),
                    };
                }
            }
        }
    }
    GbCheck { is_groebner: true, failing_pair: None, remainder: None }
}
