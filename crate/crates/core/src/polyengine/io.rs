//! JSON ideal files.
//!
//! ```json
//! {"vars":[[1,1,1],[1,1,2]],"aux":0,"gens":[[{"c":"1","m":{"0":1,"1":1}},{"c":"-1/2","m":{}}]]}
//! ```
//!
//! `vars` names the base variables by index tuple, `aux` counts extra
//! variables appended after them, each generator is a list of terms with a
//! rational coefficient string and a sparse exponent map.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::monomial::Monomial;
use super::polynomial::{Coeff, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub c: String,
    pub m: BTreeMap<usize, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealFile {
    pub vars: Vec<Vec<usize>>,
    #[serde(default)]
    pub aux: usize,
    pub gens: Vec<Vec<TermRecord>>,
}

impl IdealFile {
    pub fn nvars(&self) -> usize {
        self.vars.len() + self.aux
    }

    /// Parses JSON; syntax errors carry line and column.
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("ideal file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("ideal file serializes")
    }

    /// Builds polynomials, validating coefficients and variable indices.
    pub fn polynomials(&self) -> Result<Vec<Polynomial>> {
        let n = self.nvars();
        let mut out = Vec::with_capacity(self.gens.len());
        for (g, terms) in self.gens.iter().enumerate() {
            let mut parsed = Vec::with_capacity(terms.len());
            for (k, t) in terms.iter().enumerate() {
                let c: Coeff =
                    t.c.trim().parse().map_err(|_| {
                        Error::InvalidInput(format!("generator {g}, term {k}: bad coefficient {:?}", t.c))
                    })?;
                let m = Monomial::from_sparse(n, &t.m).ok_or_else(|| {
                    Error::InvalidInput(format!("generator {g}, term {k}: variable index or exponent out of range"))
                })?;
                parsed.push((m, c));
            }
            out.push(Polynomial::from_terms(n, parsed));
        }
        Ok(out)
    }

    /// File for `polys`, with terms in canonical order.
    pub fn from_polynomials(vars: Vec<Vec<usize>>, aux: usize, polys: &[Polynomial]) -> Self {
        let gens = polys
            .iter()
            .map(|p| p.terms().iter().map(|(m, c)| TermRecord { c: c.to_string(), m: m.to_sparse() }).collect())
            .collect();
        IdealFile { vars, aux, gens }
    }

    /// Human-readable names `x_(1,2,1)` for base variables, `y0..` for aux.
    pub fn names(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .vars
            .iter()
            .map(|v| format!("x_({})", v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        names.extend((0..self.aux).map(|k| format!("y{k}")));
        names
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyengine::polynomial::q;

    #[test]
    fn round_trip() {
        let text = r#"{"vars":[[1,1],[1,2],[2,1],[2,2]],"aux":0,"gens":[[{"c":"1","m":{"0":1,"3":1}},{"c":"-1","m":{"1":1,"2":1}}]]}"#;
        let f = IdealFile::parse(text).unwrap();
        assert_eq!(f.to_json(), text);
        let polys = f.polynomials().unwrap();
        assert_eq!(polys.len(), 1);
        let back = IdealFile::from_polynomials(f.vars.clone(), 0, &polys);
        assert_eq!(back.polynomials().unwrap(), polys);
    }

    #[test]
    fn rational_coefficients() {
        let p = Polynomial::var(2, 0).scale(&(q(3) / q(4))).add(&Polynomial::constant(2, q(-2)));
        let f = IdealFile::from_polynomials(vec![vec![1], vec![2]], 0, std::slice::from_ref(&p));
        let g = IdealFile::parse(&f.to_json()).unwrap();
        assert_eq!(g, f);
        assert_eq!(g.polynomials().unwrap()[0], p);
        assert!(f.to_json().contains("\"3/4\""));
    }

    #[test]
    fn errors_carry_position() {
        let err = IdealFile::parse("{\"vars\": [[1],\n ]").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let bad = r#"{"vars":[[1]],"gens":[[{"c":"x","m":{}}]]}"#;
        assert!(IdealFile::parse(bad).unwrap().polynomials().is_err());
        let oob = r#"{"vars":[[1]],"gens":[[{"c":"1","m":{"5":1}}]]}"#;
        assert!(IdealFile::parse(oob).unwrap().polynomials().is_err());
    }
}
