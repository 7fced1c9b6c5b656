//! Partite-minimum-degree thresholds `c` under which `δ̂(G) ≥ (1 − c)n`
//! guarantees a fractional `K_s`-decomposition.

use serde::Serialize;

use super::MultipartiteGraph;
use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdConstants {
    pub r: usize,
    pub s: usize,
    /// Bound depending on both `r` and `s`.
    #[serde(serialize_with = "rational::ser::one")]
    pub exact: Rational,
    /// `r`-free bound, never larger than `exact`.
    #[serde(serialize_with = "rational::ser::one")]
    pub simplified: Rational,
}

pub fn threshold_c(r: usize, s: usize) -> Result<ThresholdConstants> {
    if s < 3 {
        return Err(Error::InvalidParameters(format!("s = {s} must be at least 3")));
    }
    if r < s + 1 {
        return Err(Error::InvalidParameters(format!(
            "no threshold for r = {r} with s = {s}; need r ≥ s + 1"
        )));
    }
    let (ri, si) = (r as i64, s as i64);
    let (exact, simplified) = if r >= s + 2 {
        let quad = int(ri * ri * (2 * si * si - 4 * si + 1))
            + int(ri * (-12 * si * si + 26 * si - 9))
            + int(17 * si * si - 39 * si + 16);
        let exact = int((ri - si) * (ri - si - 1)) / (int((si - 2) * (si + 1)) * quad);
        let simplified = Rational::from_integer(1.into())
            / (int((si - 2) * (si + 1)) * rational::pow(si - 1, 4));
        (exact, simplified)
    } else {
        let quintic = rational::pow(si, 5) + rational::pow(si, 4) - int(3) * rational::pow(si, 3)
            - int(si * si)
            + int(2 * si + 16);
        let cubic = int(3) * rational::pow(si, 3) - int(11 * si * si) + int(12 * si - 3);
        let exact = int(si * (si - 1) * (si - 1) * (si + 2)) / (int(si - 2) * quintic * cubic);
        let simplified =
            Rational::from_integer(1.into()) / (int(3) * rational::pow(si, 3) * int((si - 2) * (si - 2)));
        (exact, simplified)
    };
    Ok(ThresholdConstants { r, s, exact, simplified })
}

/// The smallest `c` with `δ̂(G) ≥ (1 − c)n`, i.e. `(n − δ̂)/n`.
pub fn partite_defect(graph: &MultipartiteGraph) -> Rational {
    let n = graph.structure().n as i64;
    rational::frac(n - graph.partite_min_degree() as i64, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rational::frac;

    #[test]
    fn reference_values() {
        let t = threshold_c(5, 3).unwrap();
        assert_eq!(t.exact, frac(1, 64));
        assert_eq!(t.simplified, frac(1, 64));
        let t = threshold_c(4, 3).unwrap();
        assert_eq!(t.exact, frac(1, 64));
        assert_eq!(t.simplified, frac(1, 81));
        assert_eq!(threshold_c(6, 4).unwrap().simplified, frac(1, 810));
    }

    #[test]
    fn rejects_out_of_scope() {
        assert!(threshold_c(3, 3).is_err());
        assert!(threshold_c(5, 2).is_err());
    }

    #[test]
    fn simplified_never_exceeds_exact() {
        for s in 3..=50 {
            for r in s + 1..=60 {
                let t = threshold_c(r, s).unwrap();
                assert!(t.simplified <= t.exact, "r={r} s={s}");
            }
        }
    }
}
