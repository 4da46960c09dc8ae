use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::order::MonomialOrder;

pub type Coeff = BigRational;

/// Polynomial over the rationals with terms kept in canonical order
/// (descending by [`Monomial`]'s derived order), no zero coefficients and no
/// repeated monomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(Monomial, Coeff)>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Coeff::one())
    }

    pub fn constant(nvars: usize, c: Coeff) -> Self {
        Self::from_terms(nvars, vec![(Monomial::one(nvars), c)])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i))
    }

    pub fn monomial(m: Monomial) -> Self {
        Polynomial { nvars: m.nvars(), terms: vec![(m, Coeff::one())] }
    }

    /// `a - b`.
    pub fn binomial(a: Monomial, b: Monomial) -> Self {
        let n = a.nvars();
        Self::from_terms(n, vec![(a, Coeff::one()), (b, -Coeff::one())])
    }

    /// Builds a polynomial, merging repeated monomials and dropping zeros.
    pub fn from_terms(nvars: usize, mut terms: Vec<(Monomial, Coeff)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, Coeff)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 += c;
                    continue;
                }
            }
            out.push((m, c));
        }
        out.retain(|(_, c)| !c.is_zero());
        Polynomial { nvars, terms: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Two terms whose coefficients cancel: a scalar multiple of `x^u - x^v`.
    pub fn is_pure_binomial(&self) -> bool {
        self.terms.len() == 2 && (&self.terms[0].1 + &self.terms[1].1).is_zero()
    }

    /// Total degree (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.iter().all(|(m, _)| m.degree() == d)
    }

    /// Largest term under `ord`.
    pub fn leading(&self, ord: &MonomialOrder) -> Option<&(Monomial, Coeff)> {
        self.terms.iter().max_by(|a, b| ord.cmp(&a.0, &b.0))
    }

    pub fn leading_monomial(&self, ord: &MonomialOrder) -> Option<Monomial> {
        self.leading(ord).map(|t| t.0.clone())
    }

    /// Terms sorted descending by `ord`.
    pub fn sorted_terms(&self, ord: &MonomialOrder) -> Vec<(Monomial, Coeff)> {
        let mut t = self.terms.clone();
        t.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        t
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut terms = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    terms.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    terms.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    if !c.is_zero() {
                        terms.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial { nvars: self.nvars, terms }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect() }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                terms.push((a.mul(b), c * d));
            }
        }
        Polynomial::from_terms(self.nvars, terms)
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Negates so the canonically first coefficient is positive.
    pub fn sign_normalized(&self) -> Polynomial {
        match self.terms.first() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Divides by the leading coefficient under `ord`.
    pub fn monic(&self, ord: &MonomialOrder) -> Polynomial {
        match self.leading(ord) {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Embeds into a ring with more variables appended at the end.
    pub fn extend(&self, nvars: usize) -> Polynomial {
        Polynomial { nvars, terms: self.terms.iter().map(|(m, c)| (m.extend(nvars), c.clone())).collect() }
    }

    /// Restricts to the first `nvars` variables; fails if a later one occurs.
    pub fn truncate(&self, nvars: usize) -> Option<Polynomial> {
        let mut terms = Vec::with_capacity(self.len());
        for (m, c) in &self.terms {
            terms.push((m.truncate(nvars)?, c.clone()));
        }
        Some(Polynomial { nvars, terms })
    }

    /// Sets every variable in `mask` to zero.
    pub fn kill_vars(&self, mask: u64) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.support_mask() & mask == 0).cloned().collect(),
        }
    }

    /// Union of the supports of all terms.
    pub fn support_mask(&self) -> u64 {
        self.terms.iter().fold(0, |acc, (m, _)| acc | m.support_mask())
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        let ord = MonomialOrder::degrevlex(self.nvars);
        let (lm, lc) = d.leading(&ord)?.clone();
        let mut rem = self.clone();
        let mut quot: Vec<(Monomial, Coeff)> = Vec::new();
        while let Some((m, c)) = rem.leading(&ord).cloned() {
            let q = lm.quotient_of(&m)?;
            let qc = c / &lc;
            rem = rem.sub(&d.mul_monomial(&q).scale(&qc));
            quot.push((q, qc));
        }
        Some(Polynomial::from_terms(self.nvars, quot))
    }

    /// Renders with `names[i]` for variable `i`.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.render(names);
            if abs.is_one() {
                s.push_str(&mono);
            } else if mono == "1" {
                s.push_str(&abs.to_string());
            } else {
                s.push_str(&format!("{abs}*{mono}"));
            }
        }
        s
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

/// Integer coefficient as a rational.
pub fn q(n: i64) -> Coeff {
    Coeff::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(3, i)
    }

    #[test]
    fn ring_laws() {
        let f = x(0).add(&x(1));
        let g = x(0).sub(&x(1));
        let p = f.mul(&g);
        assert_eq!(p, x(0).mul(&x(0)).sub(&x(1).mul(&x(1))));
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.div_exact(&f).unwrap(), g);
        assert!(p.div_exact(&x(2)).is_none());
        assert!(g.is_pure_binomial());
        assert!(!f.is_pure_binomial());
    }

    #[test]
    fn rendering() {
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let p = x(0).mul(&x(1)).sub(&x(2).scale(&q(2))).add(&Polynomial::constant(3, q(-1)));
        assert_eq!(p.render(&names), "x*y - 2*z - 1");
    }
}
