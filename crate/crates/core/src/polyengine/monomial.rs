use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use smallvec::SmallVec;

type Exps = SmallVec<[u16; 24]>;

/// Dense exponent vector over a fixed number of variables.
///
/// The derived order (lexicographic on exponents, variable 0 first) is the
/// canonical storage order for polynomial terms; it is unrelated to the
/// monomial orders used by the Gröbner engine.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    exps: Exps,
}

impl Hash for Monomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.exps.as_slice().hash(state);
    }
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        let mut exps = Exps::new();
        exps.resize(nvars, 0);
        Monomial { exps }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial { exps: Exps::from_slice(exps) }
    }

    /// Product of the listed variables (repeats raise the exponent).
    pub fn from_vars(nvars: usize, vars: &[usize]) -> Self {
        let mut m = Self::one(nvars);
        for &v in vars {
            m.exps[v] += 1;
        }
        m
    }

    pub fn from_sparse(nvars: usize, map: &BTreeMap<usize, u32>) -> Option<Self> {
        let mut m = Self::one(nvars);
        for (&v, &e) in map {
            if v >= nvars {
                return None;
            }
            m.exps[v] = u16::try_from(e).ok()?;
        }
        Some(m)
    }

    /// Nonzero exponents keyed by variable index.
    pub fn to_sparse(&self) -> BTreeMap<usize, u32> {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(v, &e)| (v, e as u32)).collect()
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Bit `i` set when variable `i` (for `i < 64`) occurs.
    pub fn support_mask(&self) -> u64 {
        let mut m = 0u64;
        for (i, &e) in self.exps.iter().enumerate().take(64) {
            if e > 0 {
                m |= 1u64 << i;
            }
        }
        m
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial { exps: other.exps.iter().zip(&self.exps).map(|(&b, &a)| b - a).collect() })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial { exps: self.exps.iter().zip(&other.exps).map(|(&a, &b)| a.max(b)).collect() }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial { exps: self.exps.iter().zip(&other.exps).map(|(&a, &b)| a.min(b)).collect() }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial { exps: self.exps.iter().map(|&a| u16::try_from(a as u32 * k).expect("exponent overflow")).collect() }
    }

    /// Same exponents in a ring with `nvars >= self.nvars()` variables.
    pub fn extend(&self, nvars: usize) -> Monomial {
        let mut m = self.clone();
        m.exps.resize(nvars, 0);
        m
    }

    /// Drops trailing variables; they must have exponent zero.
    pub fn truncate(&self, nvars: usize) -> Option<Monomial> {
        if self.exps[nvars..].iter().any(|&e| e > 0) {
            return None;
        }
        Some(Monomial { exps: Exps::from_slice(&self.exps[..nvars]) })
    }

    /// Writes the monomial using `names[i]` for variable `i`.
    pub fn render(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = names.get(i).cloned().unwrap_or_else(|| format!("v{i}"));
            if e == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{e}"));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}
