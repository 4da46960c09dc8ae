use std::cmp::Ordering;

use crate::error::{invalid, Result};

use super::monomial::Monomial;

/// A monomial order.
///
/// `priority` lists variables from largest to smallest. Variables missing
/// from the list are ignored by that order, which is how block orders
/// restrict each block to its own variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex {
        priority: Vec<usize>,
    },
    DegRevLex {
        priority: Vec<usize>,
    },
    /// Weight comparison first, `tie` breaks ties.
    Weighted {
        weights: Vec<u64>,
        tie: Box<MonomialOrder>,
    },
    /// Degrevlex on `front` first, then `rest` (elimination of `front`).
    Block {
        front: Vec<usize>,
        rest: Box<MonomialOrder>,
    },
}

fn check_priority(priority: &[usize], nvars: usize) -> Result<()> {
    let mut seen = vec![false; nvars];
    for &v in priority {
        if v >= nvars || seen[v] {
            return invalid(format!("variable priority {priority:?} is not a permutation of a subset of 0..{nvars}"));
        }
        seen[v] = true;
    }
    Ok(())
}

impl MonomialOrder {
    /// Lex with `x0 > x1 > ...`.
    pub fn lex(nvars: usize) -> Self {
        MonomialOrder::Lex { priority: (0..nvars).collect() }
    }

    /// Degrevlex with `x0 > x1 > ...`.
    pub fn degrevlex(nvars: usize) -> Self {
        MonomialOrder::DegRevLex { priority: (0..nvars).collect() }
    }

    pub fn lex_with(priority: Vec<usize>, nvars: usize) -> Result<Self> {
        check_priority(&priority, nvars)?;
        Ok(MonomialOrder::Lex { priority })
    }

    pub fn degrevlex_with(priority: Vec<usize>, nvars: usize) -> Result<Self> {
        check_priority(&priority, nvars)?;
        Ok(MonomialOrder::DegRevLex { priority })
    }

    /// Elimination order for `front`, with `rest` on the remaining variables.
    pub fn block(front: Vec<usize>, rest: MonomialOrder) -> Self {
        MonomialOrder::Block { front, rest: Box::new(rest) }
    }

    /// Order with variables `base..base+k` eliminated ahead of `self`.
    pub fn eliminating(&self, base: usize, k: usize) -> Self {
        MonomialOrder::block((base..base + k).collect(), self.clone())
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex { priority } => lex_cmp(priority, a, b),
            MonomialOrder::DegRevLex { priority } => degrevlex_cmp(priority, a, b),
            MonomialOrder::Weighted { weights, tie } => {
                let w =
                    |m: &Monomial| -> u128 { weights.iter().zip(m.exps()).map(|(&w, &e)| w as u128 * e as u128).sum() };
                w(a).cmp(&w(b)).then_with(|| tie.cmp(a, b))
            }
            MonomialOrder::Block { front, rest } => degrevlex_cmp(front, a, b).then_with(|| rest.cmp(a, b)),
        }
    }

    pub fn greater(&self, a: &Monomial, b: &Monomial) -> bool {
        self.cmp(a, b) == Ordering::Greater
    }
}

fn lex_cmp(priority: &[usize], a: &Monomial, b: &Monomial) -> Ordering {
    for &v in priority {
        match a.exp(v).cmp(&b.exp(v)) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn degrevlex_cmp(priority: &[usize], a: &Monomial, b: &Monomial) -> Ordering {
    let da: u32 = priority.iter().map(|&v| a.exp(v) as u32).sum();
    let db: u32 = priority.iter().map(|&v| b.exp(v) as u32).sum();
    if da != db {
        return da.cmp(&db);
    }
    for &v in priority.iter().rev() {
        match a.exp(v).cmp(&b.exp(v)) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn lex_and_degrevlex() {
        let lex = MonomialOrder::lex(3);
        let drl = MonomialOrder::degrevlex(3);
        assert!(lex.greater(&m(&[1, 0, 0]), &m(&[0, 5, 0])));
        assert!(drl.greater(&m(&[0, 5, 0]), &m(&[1, 0, 0])));
        // x*z < y^2 in degrevlex with x > y > z
        assert!(drl.greater(&m(&[0, 2, 0]), &m(&[1, 0, 1])));
        assert!(lex.greater(&m(&[1, 0, 1]), &m(&[0, 2, 0])));
    }

    #[test]
    fn block_eliminates_front() {
        let ord = MonomialOrder::degrevlex(2).eliminating(2, 1);
        assert!(ord.greater(&m(&[0, 0, 1]), &m(&[9, 9, 0])));
        assert!(ord.greater(&m(&[1, 0, 1]), &m(&[0, 1, 1])));
    }

    #[test]
    fn priority_validation() {
        assert!(MonomialOrder::lex_with(vec![0, 0], 2).is_err());
        assert!(MonomialOrder::lex_with(vec![2], 2).is_err());
        let ord = MonomialOrder::lex_with(vec![1, 0], 2).unwrap();
        assert!(ord.greater(&m(&[0, 1]), &m(&[1, 0])));
    }
}
