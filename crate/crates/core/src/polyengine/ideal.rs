//! Ideal operations built on Gröbner bases and elimination.

use std::sync::OnceLock;

use num_traits::Zero;

use crate::error::{contract, Error, Result};

use super::groebner::{buchberger, GroebnerBasis};
use super::monomial::Monomial;
use super::order::MonomialOrder;
use super::polynomial::{Coeff, Polynomial};

/// Finitely generated ideal with a lazily computed degrevlex basis.
#[derive(Debug)]
pub struct Ideal {
    nvars: usize,
    gens: Vec<Polynomial>,
    gb: OnceLock<GroebnerBasis>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(g) = self.gb.get() {
            let _ = gb.set(g.clone());
        }
        Ideal { nvars: self.nvars, gens: self.gens.clone(), gb }
    }
}

impl Ideal {
    pub fn new(nvars: usize, gens: Vec<Polynomial>) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.nvars() != nvars) {
            return Err(Error::InvalidInput(format!("generator {g:?} is not in a ring with {nvars} variables")));
        }
        Ok(Ideal { nvars, gens, gb: OnceLock::new() })
    }

    pub fn zero(nvars: usize) -> Self {
        Ideal { nvars, gens: Vec::new(), gb: OnceLock::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    /// Reduced basis under `ord`; the degrevlex basis is cached.
    pub fn groebner(&self, ord: &MonomialOrder, budget: usize) -> Result<GroebnerBasis> {
        let default = MonomialOrder::degrevlex(self.nvars);
        if *ord == default {
            if let Some(g) = self.gb.get() {
                return Ok(g.clone());
            }
            let g = compute_gb(&self.gens, ord, budget, self.nvars)?;
            let _ = self.gb.set(g.clone());
            return Ok(g);
        }
        compute_gb(&self.gens, ord, budget, self.nvars)
    }

    /// Reduced degrevlex basis.
    pub fn gb(&self, budget: usize) -> Result<GroebnerBasis> {
        self.groebner(&MonomialOrder::degrevlex(self.nvars), budget)
    }

    /// Sum of two ideals.
    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(self.nvars, gens)
    }

    /// Embeds into a ring with extra trailing variables.
    pub fn extend(&self, nvars: usize) -> Ideal {
        Ideal { nvars, gens: self.gens.iter().map(|g| g.extend(nvars)).collect(), gb: OnceLock::new() }
    }
}

fn compute_gb(gens: &[Polynomial], ord: &MonomialOrder, budget: usize, nvars: usize) -> Result<GroebnerBasis> {
    let mut g: Vec<Polynomial> = gens.to_vec();
    if g.is_empty() {
        g.push(Polynomial::zero(nvars));
    }
    buchberger(&g, ord, budget)
}

/// `J ⊆ I`: every generator of `J` reduces to zero modulo a basis of `I`.
pub fn ideal_contains(i: &Ideal, j: &Ideal, ord: &MonomialOrder, budget: usize) -> Result<bool> {
    same_ring(i, j)?;
    let gb = i.groebner(ord, budget)?;
    Ok(j.gens.iter().all(|g| gb.contains(g)))
}

/// First generator of `J` outside `I`, if any.
pub fn first_outside(i: &Ideal, j: &Ideal, ord: &MonomialOrder, budget: usize) -> Result<Option<Polynomial>> {
    same_ring(i, j)?;
    let gb = i.groebner(ord, budget)?;
    Ok(j.gens.iter().find(|g| !gb.contains(g)).cloned())
}

/// Equality through reduced Gröbner bases.
pub fn ideals_equal(i: &Ideal, j: &Ideal, ord: &MonomialOrder, budget: usize) -> Result<bool> {
    same_ring(i, j)?;
    Ok(i.groebner(ord, budget)?.polys() == j.groebner(ord, budget)?.polys())
}

fn same_ring(i: &Ideal, j: &Ideal) -> Result<()> {
    if i.nvars != j.nvars {
        return Err(Error::InvalidInput(format!("rings differ: {} vs {} variables", i.nvars, j.nvars)));
    }
    Ok(())
}

/// Generators of `(gens) ∩ k[x_0..x_{n-1}]` where the last `k` of the
/// `n + k` variables are eliminated.
pub fn eliminate(gens: &[Polynomial], k: usize, budget: usize) -> Result<Vec<Polynomial>> {
    let total = gens.first().map(|g| g.nvars()).unwrap_or(k);
    let base = total - k;
    let ord = MonomialOrder::degrevlex(base).eliminating(base, k);
    let gb = compute_gb(gens, &ord, budget, total)?;
    Ok(gb.polys().iter().filter_map(|p| p.truncate(base)).collect())
}

fn y(nvars: usize) -> Polynomial {
    Polynomial::var(nvars + 1, nvars)
}

/// `I : f = {g : g f ∈ I}`, from `I ∩ (f)` computed as
/// `(Y·I + (1 - Y)·f) ∩ R` followed by exact division by `f`.
pub fn ideal_quotient(i: &Ideal, f: &Polynomial, budget: usize) -> Result<Ideal> {
    if f.is_zero() {
        return contract("quotient by the zero polynomial");
    }
    let n = i.nvars;
    let yv = y(n);
    let one_minus_y = Polynomial::one(n + 1).sub(&yv);
    let mut gens: Vec<Polynomial> = i.gens.iter().map(|g| g.extend(n + 1).mul(&yv)).collect();
    gens.push(f.extend(n + 1).mul(&one_minus_y));
    let inter = eliminate(&gens, 1, budget)?;
    let mut out = Vec::with_capacity(inter.len());
    for h in inter {
        match h.div_exact(f) {
            Some(q) => out.push(q),
            None => return Err(Error::Internal(format!("{h:?} in I ∩ (f) is not divisible by f"))),
        }
    }
    Ideal::new(n, out)
}

/// `(((I : f1) : f2) ... )`, equal to `I : (f1 f2 ...)`.
pub fn iterated_quotient(i: &Ideal, factors: &[Polynomial], budget: usize) -> Result<Ideal> {
    let mut cur = i.clone();
    for f in factors {
        let q = ideal_quotient(&cur, f, budget)?;
        cur = Ideal::new(i.nvars, q.gb(budget)?.polys().to_vec())?;
    }
    Ok(cur)
}

/// `I : f^∞` as `(I + (f·Y - 1)) ∩ R`.
pub fn saturate(i: &Ideal, f: &Polynomial, budget: usize) -> Result<Ideal> {
    if f.is_zero() {
        return contract("saturation by the zero polynomial");
    }
    let n = i.nvars;
    let mut gens: Vec<Polynomial> = i.gens.iter().map(|g| g.extend(n + 1)).collect();
    gens.push(f.extend(n + 1).mul(&y(n)).sub(&Polynomial::one(n + 1)));
    Ideal::new(n, eliminate(&gens, 1, budget)?)
}

/// `I : f^∞` as the stable value of `I : f : f : ...`.
pub fn saturate_by_quotients(i: &Ideal, f: &Polynomial, budget: usize) -> Result<(Ideal, usize)> {
    let ord = MonomialOrder::degrevlex(i.nvars);
    let mut cur = Ideal::new(i.nvars, i.gb(budget)?.polys().to_vec())?;
    let mut steps = 0;
    loop {
        let next = ideal_quotient(&cur, f, budget)?;
        let next = Ideal::new(i.nvars, next.gb(budget)?.polys().to_vec())?;
        steps += 1;
        if ideals_equal(&cur, &next, &ord, budget)? {
            return Ok((next, steps));
        }
        cur = next;
    }
}

/// `I ∩ J` as `(Y·I + (1 - Y)·J) ∩ R`.
pub fn ideal_intersect(i: &Ideal, j: &Ideal, budget: usize) -> Result<Ideal> {
    same_ring(i, j)?;
    let n = i.nvars;
    let yv = y(n);
    let one_minus_y = Polynomial::one(n + 1).sub(&yv);
    let mut gens: Vec<Polynomial> = i.gens.iter().map(|g| g.extend(n + 1).mul(&yv)).collect();
    gens.extend(j.gens.iter().map(|g| g.extend(n + 1).mul(&one_minus_y)));
    Ideal::new(n, eliminate(&gens, 1, budget)?)
}

/// `f ∈ √I`. Small powers of `f` are tried first; otherwise decides
/// `1 ∈ I + (f·Y - 1)`.
pub fn radical_membership(f: &Polynomial, i: &Ideal, budget: usize) -> Result<bool> {
    let n = i.nvars;
    let gb = i.gb(budget)?;
    let mut p = f.clone();
    for _ in 0..4 {
        if gb.contains(&p) {
            return Ok(true);
        }
        p = p.mul(f);
    }
    let mut gens: Vec<Polynomial> = i.gens.iter().map(|g| g.extend(n + 1)).collect();
    gens.push(f.extend(n + 1).mul(&y(n)).sub(&Polynomial::one(n + 1)));
    let ord = MonomialOrder::degrevlex(n + 1);
    Ok(buchberger(&gens, &ord, budget)?.is_unit())
}

/// Number of minimal generators of an ideal generated in a single degree:
/// the rank over the rationals of the generators' coefficient vectors.
pub fn minimal_generator_count(i: &Ideal) -> Result<usize> {
    let gens: Vec<&Polynomial> = i.gens.iter().filter(|g| !g.is_zero()).collect();
    if gens.is_empty() {
        return Ok(0);
    }
    let d = gens[0].degree();
    if gens.iter().any(|g| !g.is_homogeneous() || g.degree() != d) {
        return contract("minimal generator count needs generators homogeneous of one degree");
    }
    let mut columns: Vec<Monomial> = gens.iter().flat_map(|g| g.terms().iter().map(|t| t.0.clone())).collect();
    columns.sort();
    columns.dedup();
    let mut rows: Vec<Vec<Coeff>> = gens
        .iter()
        .map(|g| {
            let mut row = vec![Coeff::zero(); columns.len()];
            for (m, c) in g.terms() {
                let k = columns.binary_search(m).unwrap();
                row[k] = c.clone();
            }
            row
        })
        .collect();
    Ok(rank(&mut rows))
}

/// Rank of a rational matrix by Gaussian elimination (destroys the input).
pub fn rank(rows: &mut [Vec<Coeff>]) -> usize {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for k in 0..rows.len() {
            if k != r && !rows[k][c].is_zero() {
                let factor = rows[k][c].clone();
                for col in c..ncols {
                    let sub = &rows[r][col] * &factor;
                    rows[k][col] = &rows[k][col] - sub;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Product of all variables `x_0 ... x_{n-1}` as a polynomial.
pub fn all_variables_product(nvars: usize) -> Polynomial {
    let vars: Vec<usize> = (0..nvars).collect();
    Polynomial::monomial(Monomial::from_vars(nvars, &vars))
}

/// Whether `p` is a nonzero constant.
pub fn is_unit_constant(p: &Polynomial) -> bool {
    p.len() == 1 && p.terms()[0].0.is_one() && !p.terms()[0].1.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyengine::groebner::DEFAULT_PAIR_BUDGET as B;

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    #[test]
    fn quotient_examples() {
        let n = 2;
        let i = Ideal::new(n, vec![x(n, 0).mul(&x(n, 1))]).unwrap();
        let q = ideal_quotient(&i, &x(n, 0), B).unwrap();
        let want = Ideal::new(n, vec![x(n, 1)]).unwrap();
        assert!(ideals_equal(&q, &want, &MonomialOrder::degrevlex(n), B).unwrap());
        let q1 = ideal_quotient(&i, &Polynomial::one(n), B).unwrap();
        assert!(ideals_equal(&q1, &i, &MonomialOrder::degrevlex(n), B).unwrap());
    }

    #[test]
    fn intersection_example() {
        let n = 2;
        let a = Ideal::new(n, vec![x(n, 0)]).unwrap();
        let b = Ideal::new(n, vec![x(n, 1)]).unwrap();
        let c = ideal_intersect(&a, &b, B).unwrap();
        let want = Ideal::new(n, vec![x(n, 0).mul(&x(n, 1))]).unwrap();
        assert!(ideals_equal(&c, &want, &MonomialOrder::degrevlex(n), B).unwrap());
        let aa = ideal_intersect(&a, &a, B).unwrap();
        assert!(ideals_equal(&aa, &a, &MonomialOrder::lex(n), B).unwrap());
    }

    #[test]
    fn radical_examples() {
        let n = 1;
        let sq = Ideal::new(n, vec![x(n, 0).mul(&x(n, 0))]).unwrap();
        assert!(radical_membership(&x(n, 0), &sq, B).unwrap());
        let n = 2;
        let i = Ideal::new(n, vec![x(n, 0).pow(7)]).unwrap();
        assert!(radical_membership(&x(n, 0), &i, B).unwrap());
        assert!(!radical_membership(&x(n, 1), &i, B).unwrap());
    }

    #[test]
    fn saturation_of_prime_is_itself() {
        let n = 3;
        let p = Ideal::new(n, vec![x(n, 0).mul(&x(n, 1)).sub(&x(n, 2).mul(&x(n, 2)))]).unwrap();
        let s = saturate(&p, &x(n, 0), B).unwrap();
        assert!(ideals_equal(&s, &p, &MonomialOrder::degrevlex(n), B).unwrap());
        let (s2, _) = saturate_by_quotients(&p, &x(n, 0), B).unwrap();
        assert!(ideals_equal(&s2, &p, &MonomialOrder::degrevlex(n), B).unwrap());
    }

    #[test]
    fn saturation_strips_embedded_part() {
        let n = 2;
        // (x^2 y, x y^2) : x^inf = (y)
        let i = Ideal::new(n, vec![x(n, 0).pow(2).mul(&x(n, 1)), x(n, 0).mul(&x(n, 1).pow(2))]).unwrap();
        let s = saturate(&i, &x(n, 0), B).unwrap();
        let want = Ideal::new(n, vec![x(n, 1)]).unwrap();
        assert!(ideals_equal(&s, &want, &MonomialOrder::degrevlex(n), B).unwrap());
    }

    #[test]
    fn generator_rank() {
        let n = 3;
        let a = x(n, 0).mul(&x(n, 1));
        let b = x(n, 1).mul(&x(n, 2));
        let i = Ideal::new(n, vec![a.clone(), b.clone(), a.add(&b)]).unwrap();
        assert_eq!(minimal_generator_count(&i).unwrap(), 2);
        let mixed = Ideal::new(n, vec![a, x(n, 0)]).unwrap();
        assert!(minimal_generator_count(&mixed).is_err());
    }
}
